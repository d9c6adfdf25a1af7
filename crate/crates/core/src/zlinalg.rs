//! Integer matrix normal forms.
//!
//! All forms act on rows: `hermite_normal_form` returns `U` with `U·M = H`
//! and `smith_normal_form` returns `P·M·Q = D`.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::Int;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<T>>,
}

impl<T: Int> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![T::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows, all of length `cols`.
    ///
    /// # Panics
    /// If a row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix");
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64_exact(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i][i] = x.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.data
    }

    pub fn push_row(&mut self, row: Vec<T>) {
        assert_eq!(row.len(), self.cols, "ragged matrix");
        self.data.push(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = self.data[i][k].clone() * other.data[k][j].clone();
                    out.data[i][j] = out.data[i][j].clone() + p;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(&self.data[i]) {
                *o = o.clone() + x.clone() * m.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            T::one()
        } else {
            sign * a[n - 1][n - 1].clone()
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.data[src][j].clone() * c.clone();
            self.data[dst][j] = self.data[dst][j].clone() + v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for r in &mut self.data {
            let v = r[src].clone() * c.clone();
            r[dst] = r[dst].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -x.clone();
        }
    }
}

impl<T> Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i][j]
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x:?}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Row Hermite normal form: `U·M = H` with `U` unimodular, positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_normal_form<T: Int>(m: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below r
            let piv = (r..m.rows)
                .filter(|&i| !h.data[i][c].is_zero())
                .min_by(|&a, &b| h.data[a][c].abs().cmp(&h.data[b][c].abs()));
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m.rows {
                if h.data[i][c].is_zero() {
                    continue;
                }
                let q = -h.data[i][c].div_floor(&h.data[r][c]);
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                if !h.data[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.data[r][c].is_zero() {
            continue;
        }
        if h.data[r][c].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.data[i][c].div_floor(&h.data[r][c]);
            h.add_row(i, r, &q);
            u.add_row(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form `P·M·Q = D` with `d_1 | d_2 | ...`, all `d_i >= 0` and
/// zero entries last.
pub fn smith_normal_form<T: Int>(m: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>, IntMatrix<T>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d.data[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d.data[i][j].abs() < d.data[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_snf(d, p, q);
            };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                let f = -d.data[i][t].div_floor(&d.data[t][t]);
                d.add_row(i, t, &f);
                p.add_row(i, t, &f);
                clean &= d.data[i][t].is_zero();
            }
            for j in t + 1..cols {
                let f = -d.data[t][j].div_floor(&d.data[t][t]);
                d.add_col(j, t, &f);
                q.add_col(j, t, &f);
                clean &= d.data[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.data[i][j].is_multiple_of(&d.data[t][t])));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &T::one());
                    p.add_row(t, i, &T::one());
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    finish_snf(d, p, q)
}

fn finish_snf<T: Int>(
    d: IntMatrix<T>,
    p: IntMatrix<T>,
    q: IntMatrix<T>,
) -> (IntMatrix<T>, IntMatrix<T>, IntMatrix<T>) {
    #[cfg(test)]
    {
        debug_assert!(p.is_unimodular() && q.is_unimodular());
    }
    (d, p, q)
}

/// Diagonal of a Smith form, padded with zeros to `len`.
pub fn smith_diagonal<T: Int>(d: &IntMatrix<T>, len: usize) -> Vec<T> {
    (0..len)
        .map(|k| {
            if k < d.rows && k < d.cols {
                d.data[k][k].clone()
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Invariant factors of `Z^rank / rowspace(rel)`; 1s dropped, 0 for each free
/// factor, free factors last.
pub fn abelian_invariants<T: Int>(rel: &IntMatrix<T>, ambient_rank: usize) -> Vec<T> {
    assert!(
        rel.rows == 0 || rel.cols == ambient_rank,
        "relation width must equal the rank"
    );
    let rel = if rel.rows == 0 {
        IntMatrix::zeros(0, ambient_rank)
    } else {
        rel.clone()
    };
    let (d, _, _) = smith_normal_form(&rel);
    smith_diagonal(&d, ambient_rank)
        .into_iter()
        .filter(|x| !x.is_one())
        .collect()
}

/// Basis (in Hermite form) of the lattice spanned by the rows of `m`.
pub fn row_basis<T: Int>(m: &IntMatrix<T>) -> IntMatrix<T> {
    let (h, _) = hermite_normal_form(m);
    let rows: Vec<Vec<T>> = h
        .data
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    IntMatrix::from_rows(m.cols, rows)
}

/// Basis of `{x : x·M = 0}`.
pub fn left_kernel<T: Int>(m: &IntMatrix<T>) -> IntMatrix<T> {
    let (h, u) = hermite_normal_form(m);
    let rows: Vec<Vec<T>> = (0..m.rows)
        .filter(|&i| h.data[i].iter().all(|x| x.is_zero()))
        .map(|i| u.data[i].clone())
        .collect();
    IntMatrix::from_rows(m.rows, rows)
}

/// Basis of `{x ∈ Z^k : x·A ∈ rowspace(R)}` where `A` has `k` rows.
pub fn congruence_kernel<T: Int>(a: &IntMatrix<T>, r: &IntMatrix<T>) -> IntMatrix<T> {
    let k = a.rows;
    let mut stacked = a.clone();
    for row in &r.data {
        stacked.push_row(row.clone());
    }
    let ker = left_kernel(&stacked);
    let proj: Vec<Vec<T>> = ker.data.into_iter().map(|row| row[..k].to_vec()).collect();
    row_basis(&IntMatrix::from_rows(k, proj))
}

/// Some `x` with `x·M = b`, if one exists.
pub fn solve_left<T: Int>(m: &IntMatrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(b.len(), m.cols, "dimension mismatch");
    let (h, u) = hermite_normal_form(m);
    let mut rest = b.to_vec();
    let mut y = vec![T::zero(); m.rows];
    for (i, row) in h.data.iter().enumerate() {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            break;
        };
        let (f, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        for j in c..m.cols {
            rest[j] = rest[j].clone() - f.clone() * row[j].clone();
        }
        y[i] = f;
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(u.left_mul_vec(&y))
}
