//! Central tails and q-covers.
//!
//! `attach_tails` adds one central generator per defining relator, with
//! `t^q = 1`. `enforce_consistency` evaluates the consistency overlaps, each
//! of which yields a linear relation among the tails, and rewrites the tails
//! through a Smith normal form so that the result is consistent. For a
//! consistent base `G = F/R` the result `E_q(G)` is `F/R^q[R,F]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::pc::{ExponentVector, Expr, GroupOps, PcBuilder, PcPresentation, Word};
use crate::subgrp::InducedSequence;
use crate::zlinalg::{smith_diagonal, smith_normal_form, IntMatrix};
use crate::{Error, Int, Result};

/// A defining relator of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relator {
    /// `g_i^{e_i} = w`
    Power(usize),
    /// `g_i^{g_j} = w`
    Conj(usize, usize),
}

impl Relator {
    /// Relators of `pres` in tail order: for each generator its conjugates by
    /// earlier generators, then its power.
    pub fn all<T: Int>(pres: &PcPresentation<T>) -> Vec<Relator> {
        let mut out = Vec::new();
        for i in 0..pres.ngens() {
            for j in 0..i {
                out.push(Relator::Conj(i, j));
            }
            if pres.is_finite_gen(i) {
                out.push(Relator::Power(i));
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        match self {
            Relator::Power(i) => format!("pow {}", names[*i]),
            Relator::Conj(i, j) => format!("conj {}^{}", names[*i], names[*j]),
        }
    }
}

impl fmt::Display for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relator::Power(i) => write!(f, "pow g{}", i + 1),
            Relator::Conj(i, j) => write!(f, "conj g{}^g{}", i + 1, j + 1),
        }
    }
}

/// A base presentation with central tails appended, before consistency is
/// enforced.
#[derive(Clone, Debug)]
pub struct TailedPresentation<T> {
    pub pres: PcPresentation<T>,
    pub base: PcPresentation<T>,
    pub q: u64,
    pub n_base: usize,
    /// Order of each tail; 0 means infinite.
    pub tail_orders: Vec<T>,
    pub relators: Vec<Relator>,
    /// Index (into the tails, not the generators) of each tailed relator.
    pub tail_of_relator: BTreeMap<Relator, usize>,
}

impl<T: Int> TailedPresentation<T> {
    pub fn tails(&self) -> std::ops::Range<usize> {
        self.n_base..self.pres.ngens()
    }
}

fn tail_names(base: &[String], m: usize) -> Vec<String> {
    let mut prefix = "t".to_string();
    loop {
        let names: Vec<String> = (1..=m).map(|k| format!("{prefix}{k}")).collect();
        if names.iter().all(|n| !base.contains(n)) {
            return names;
        }
        prefix.push('t');
    }
}

/// Adds a central tail `t` of order `q` to each relator not in `skip`
/// (`q = 0` gives free tails).
pub fn attach_tails<T: Int>(
    base: &PcPresentation<T>,
    q: u64,
    skip: &BTreeSet<Relator>,
) -> Result<TailedPresentation<T>> {
    let n = base.ngens();
    let relators = Relator::all(base);
    let tailed: Vec<Relator> = relators
        .iter()
        .filter(|r| !skip.contains(r))
        .copied()
        .collect();
    let m = tailed.len();
    let mut names = base.names().to_vec();
    names.extend(tail_names(base.names(), m));
    let mut b = PcBuilder::new(names).name(base.name().to_string());
    let mut tail_of_relator = BTreeMap::new();
    for (k, r) in tailed.iter().enumerate() {
        tail_of_relator.insert(*r, k);
    }
    let with_tail = |w: &Word<T>, r: Relator| {
        let mut w = w.clone();
        if let Some(k) = tail_of_relator.get(&r) {
            w.push(n + k, T::one());
        }
        w
    };
    for i in 0..n {
        if let Some(e) = base.rel_order(i) {
            b = b.power(
                i,
                e.clone(),
                with_tail(base.power_rhs(i), Relator::Power(i)),
            );
        }
        for j in 0..i {
            b = b.conj(i, j, with_tail(base.conj_rhs(i, j), Relator::Conj(i, j)));
        }
    }
    let order = T::from_u64(q).expect("q fits the exponent type");
    if q > 0 {
        for k in 0..m {
            b = b.power(n + k, order.clone(), Word::identity());
        }
    }
    let mut prov = if base.provenance().is_empty() {
        vec![base.name().to_string(); n]
    } else {
        base.provenance().to_vec()
    };
    prov.extend(std::iter::repeat_n("tail".to_string(), m));
    b = b.provenance(prov);
    let pres = b.budget(base.budget()).build_unreduced()?;
    Ok(TailedPresentation {
        pres,
        base: base.clone(),
        q,
        n_base: n,
        tail_orders: vec![order; m],
        relators,
        tail_of_relator,
    })
}

/// The outcome of dividing the tail subgroup of a presentation by a lattice.
#[derive(Clone, Debug)]
pub struct TailReduction<T> {
    pub pres: PcPresentation<T>,
    pub n_base: usize,
    /// Orders of the surviving tails; 0 means infinite.
    pub orders: Vec<T>,
    /// Row `i` is old tail `i` written in the surviving tails.
    pub transform: IntMatrix<T>,
}

impl<T: Int> TailReduction<T> {
    /// Maps surviving-tail coordinates `x` (over the old tails) to the new ones.
    pub fn map_tails(&self, x: &[T]) -> Vec<T> {
        let y = self.transform.left_mul_vec(x);
        reduce_mod(y, &self.orders)
    }

    /// Image of an element of the old presentation.
    pub fn map_element(&self, v: &ExponentVector<T>) -> ExponentVector<T> {
        let mut out = v.0[..self.n_base].to_vec();
        out.extend(self.map_tails(&v.0[self.n_base..]));
        ExponentVector(out)
    }
}

fn reduce_mod<T: Int>(y: Vec<T>, orders: &[T]) -> Vec<T> {
    y.into_iter()
        .zip(orders)
        .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) })
        .collect()
}

/// Divides the central tails `n_base..` of `pres`, whose orders are `orders`,
/// by the lattice spanned by `rows`.
pub fn quotient_tail_lattice<T: Int>(
    pres: &PcPresentation<T>,
    n_base: usize,
    orders: &[T],
    rows: &[Vec<T>],
) -> Result<TailReduction<T>> {
    let m = orders.len();
    if pres.ngens() != n_base + m {
        return Err(Error::Precondition(
            "tail count does not match the presentation".into(),
        ));
    }
    let (q, diag) = if rows.iter().all(|r| r.iter().all(|x| x.is_zero())) {
        (IntMatrix::identity(m), orders.to_vec())
    } else {
        let mut mat = IntMatrix::zeros(0, m);
        for r in rows {
            mat.push_row(r.clone());
        }
        for (k, d) in orders.iter().enumerate() {
            if !d.is_zero() {
                let mut r = vec![T::zero(); m];
                r[k] = d.clone();
                mat.push_row(r);
            }
        }
        let (d, _, q) = smith_normal_form(&mat);
        (q, smith_diagonal(&d, m))
    };
    let keep: Vec<usize> = (0..m).filter(|&k| !diag[k].is_one()).collect();
    let new_orders: Vec<T> = keep.iter().map(|&k| diag[k].clone()).collect();
    let rows: Vec<Vec<T>> = (0..m)
        .map(|i| {
            reduce_mod(
                keep.iter().map(|&k| q[(i, k)].clone()).collect(),
                &new_orders,
            )
        })
        .collect();
    let transform = IntMatrix::from_rows(keep.len(), rows);
    let red = TailReduction {
        pres: PcPresentation::trivial(),
        n_base,
        orders: new_orders,
        transform,
    };
    let m2 = red.orders.len();
    let mut names = pres.names()[..n_base].to_vec();
    names.extend(tail_names(&names, m2));
    let rewrite = |w: &Word<T>| {
        let mut base = Word::identity();
        let mut x = vec![T::zero(); m];
        for (g, e) in w.letters() {
            if *g < n_base {
                base.push(*g, e.clone());
            } else {
                x[g - n_base] = x[g - n_base].clone() + e.clone();
            }
        }
        for (k, e) in red.map_tails(&x).into_iter().enumerate() {
            if !e.is_zero() {
                base.push(n_base + k, e);
            }
        }
        base
    };
    let mut b = PcBuilder::new(names).name(pres.name().to_string());
    for i in 0..n_base {
        if let Some(e) = pres.rel_order(i) {
            b = b.power(i, e.clone(), rewrite(pres.power_rhs(i)));
        }
        for j in 0..i {
            b = b.conj(i, j, rewrite(pres.conj_rhs(i, j)));
        }
    }
    for (k, d) in red.orders.iter().enumerate() {
        if !d.is_zero() {
            b = b.power(n_base + k, d.clone(), Word::identity());
        }
    }
    if !pres.provenance().is_empty() {
        let mut prov = pres.provenance()[..n_base].to_vec();
        prov.extend(std::iter::repeat_n("tail".to_string(), m2));
        b = b.provenance(prov);
    }
    b = b.tails(
        (0..m2)
            .map(|k| (n_base + k, red.orders[k].clone()))
            .collect(),
    );
    let new = b.budget(pres.budget()).build_unreduced()?;
    Ok(TailReduction { pres: new, ..red })
}

/// A consistent q-central extension `E` of a base group with tail subgroup
/// `T = <n_base..>` central and `E/T` the base.
#[derive(Clone, Debug)]
pub struct ConsistentCover<T> {
    pub pres: PcPresentation<T>,
    pub base: PcPresentation<T>,
    pub q: u64,
    pub n_base: usize,
    /// Orders of the surviving tails; 0 means infinite.
    pub tail_orders: Vec<T>,
    /// Row `i` writes the tail originally attached to relator `i` in the
    /// surviving tails.
    pub transform: IntMatrix<T>,
    pub relators: Vec<Relator>,
    pub tail_of_relator: BTreeMap<Relator, usize>,
}

/// Makes a tailed presentation consistent.
///
/// Fails with [`Error::Malformed`] if an overlap disagrees outside the tails,
/// which means the base was not consistent.
pub fn enforce_consistency<T: Int>(tp: &TailedPresentation<T>) -> Result<ConsistentCover<T>> {
    let n = tp.n_base;
    let report = tp.pres.consistency_report_within(n)?;
    let mut rows = Vec::new();
    for d in &report.discrepancies {
        // Tails are central, so the two sides differ by a tail element exactly
        // when their base parts agree. `difference` is unusable here: inverses
        // in an inconsistent presentation are only one-sided.
        if d.left.0[..n] != d.right.0[..n] {
            return Err(Error::Malformed(format!(
                "base presentation is inconsistent: {}",
                report.render(&tp.pres).lines().next().unwrap_or_default()
            )));
        }
        rows.push(
            d.right.0[n..]
                .iter()
                .zip(&d.left.0[n..])
                .map(|(r, l)| r.clone() - l.clone())
                .collect(),
        );
    }
    let red = quotient_tail_lattice(&tp.pres, n, &tp.tail_orders, &rows)?;
    if !red.pres.is_consistent()? {
        return Err(Error::Inconsistent(red.pres.consistency_report()?.len()));
    }
    Ok(ConsistentCover {
        pres: red.pres,
        base: tp.base.clone(),
        q: tp.q,
        n_base: n,
        tail_orders: red.orders,
        transform: red.transform,
        relators: tp.relators.clone(),
        tail_of_relator: tp.tail_of_relator.clone(),
    })
}

/// `E_q(G)` with every relator tailed.
pub fn q_cover<T: Int>(base: &PcPresentation<T>, q: u64) -> Result<ConsistentCover<T>> {
    let mut c = enforce_consistency(&attach_tails(base, q, &BTreeSet::new())?)?;
    c.pres.set_name(format!("E{}_{}", q, base.name()));
    Ok(c)
}

impl<T: Int> ConsistentCover<T> {
    pub fn tails(&self) -> std::ops::Range<usize> {
        self.n_base..self.pres.ngens()
    }

    pub fn ntails(&self) -> usize {
        self.tail_orders.len()
    }

    /// The projection `E -> G`.
    pub fn project(&self, x: &ExponentVector<T>) -> ExponentVector<T> {
        ExponentVector(x.0[..self.n_base].to_vec())
    }

    /// The normal-form section `G -> E`.
    pub fn lift(&self, g: &ExponentVector<T>) -> ExponentVector<T> {
        let mut v = g.0.clone();
        v.resize(self.pres.ngens(), T::zero());
        ExponentVector(v)
    }

    pub fn tail_part(&self, x: &ExponentVector<T>) -> Vec<T> {
        x.0[self.n_base..].to_vec()
    }

    pub fn tail_element(&self, coords: &[T]) -> ExponentVector<T> {
        let mut v = vec![T::zero(); self.n_base];
        v.extend(reduce_mod(coords.to_vec(), &self.tail_orders));
        ExponentVector(v)
    }

    /// Value of the tail once attached to `r`, in surviving tails.
    pub fn relator_tail(&self, r: Relator) -> Option<Vec<T>> {
        self.tail_of_relator
            .get(&r)
            .map(|&k| self.transform.row(k).to_vec())
    }

    /// Reinterprets the cover as a tailed presentation over its own tails.
    pub fn as_tailed(&self) -> TailedPresentation<T> {
        TailedPresentation {
            pres: self.pres.clone(),
            base: self.base.clone(),
            q: self.q,
            n_base: self.n_base,
            tail_orders: self.tail_orders.clone(),
            relators: Vec::new(),
            tail_of_relator: BTreeMap::new(),
        }
    }

    /// Evaluates `expr` in `E` with atoms resolved by `atom`; the value must
    /// be a tail element.
    pub fn evaluate_with<A: Clone>(
        &self,
        expr: &Expr<A>,
        atom: &mut dyn FnMut(&A) -> Result<ExponentVector<T>>,
    ) -> Result<Vec<T>> {
        let v = expr.eval(&self.pres, atom)?;
        if !v.supported_from(self.n_base) {
            return Err(Error::NonCentral(
                v.to_word().display_with(self.pres.names()),
            ));
        }
        Ok(self.tail_part(&v))
    }

    /// Central quotient `ambient / <subgrp_gens>` where the generators are tail
    /// elements. Returns the image of `ambient` in `E / <subgrp_gens>`, whose
    /// presentation is the quotient, and the reduction of `E`.
    pub fn central_quotient(
        &self,
        subgrp_gens: &[ExponentVector<T>],
        ambient: &InducedSequence<T>,
    ) -> Result<(InducedSequence<T>, TailReduction<T>)> {
        for g in subgrp_gens {
            if !g.supported_from(self.n_base) {
                return Err(Error::Precondition(
                    "quotient generator outside the tail subgroup".into(),
                ));
            }
            if ambient.express(g)?.is_none() {
                return Err(Error::Precondition(
                    "quotient generator outside the ambient subgroup".into(),
                ));
            }
        }
        if ambient.parent() != &self.pres {
            return Err(Error::Precondition(
                "ambient subgroup lives in a different group".into(),
            ));
        }
        let rows: Vec<Vec<T>> = subgrp_gens.iter().map(|g| self.tail_part(g)).collect();
        let red = quotient_tail_lattice(&self.pres, self.n_base, &self.tail_orders, &rows)?;
        let parent = Arc::new(red.pres.clone());
        let images: Vec<ExponentVector<T>> = ambient
            .members()
            .iter()
            .map(|m| red.map_element(m))
            .collect();
        let image = InducedSequence::new(parent, &images)?;
        Ok((image, red))
    }
}

impl<T: Int> GroupOps for ConsistentCover<T> {
    type Elem = ExponentVector<T>;

    fn one(&self) -> Self::Elem {
        self.pres.one()
    }

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.pres.op(a, b)
    }

    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.pres.invert(a)
    }

    fn power(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        self.pres.power(a, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::parse_presentation;

    fn s3() -> PcPresentation<i64> {
        parse_presentation("gens g1 g2\npow g1^2 := id\npow g2^3 := id\nconj g2^g1 := g2^2\n")
            .unwrap()
    }

    fn dinf() -> PcPresentation<i64> {
        parse_presentation("gens g1 g2\npow g1^2 := id\nconj g2^g1 := g2^-1\n").unwrap()
    }

    #[test]
    fn tails_for_s3() {
        let tp = attach_tails(&s3(), 2, &BTreeSet::new()).unwrap();
        assert_eq!(tp.tails().len(), 3);
        assert_eq!(
            tp.relators,
            vec![Relator::Power(0), Relator::Conj(1, 0), Relator::Power(1)]
        );
        assert_eq!(tp.pres.power_rhs(0), &Word::gen(2));
        assert_eq!(
            tp.pres.conj_rhs(1, 0),
            &Word::from_letters([(1, 2), (3, 1)])
        );
        assert_eq!(tp.pres.power_rhs(1), &Word::gen(4));
    }

    #[test]
    fn s3_cover() {
        let c = q_cover(&s3(), 2).unwrap();
        assert_eq!(c.tail_orders, vec![2, 2]);
        assert!(c.pres.is_consistent().unwrap());
        // g2^{g1} = g2^2 t where t is the tail of g2^3
        let t2 = c.relator_tail(Relator::Conj(1, 0)).unwrap();
        let t3 = c.relator_tail(Relator::Power(1)).unwrap();
        assert_eq!(t2, t3);
        assert_ne!(c.relator_tail(Relator::Power(0)).unwrap(), t3);
    }

    #[test]
    fn dinf_cover_is_unchanged() {
        for q in [0u64, 2, 3] {
            let c = q_cover(&dinf(), q).unwrap();
            assert_eq!(c.tail_orders, vec![q as i64; 2]);
            assert_eq!(c.transform, IntMatrix::identity(2));
        }
    }

    #[test]
    fn c2_cover_is_c4() {
        let c2: PcPresentation<i64> = parse_presentation("gens g\npow g^2 := id\n").unwrap();
        let c = q_cover(&c2, 2).unwrap();
        assert_eq!(c.pres.ngens(), 2);
        assert_eq!(c.pres.power_rhs(0), &Word::gen(1));
        assert_eq!(c.tail_orders, vec![2]);
    }

    #[test]
    fn q_one_kills_tails() {
        for g in [s3(), dinf()] {
            let c = q_cover(&g, 1).unwrap();
            assert_eq!(c.ntails(), 0);
            assert_eq!(c.pres.ngens(), g.ngens());
        }
    }

    #[test]
    fn rerun_is_identity() {
        let c = q_cover(&s3(), 2).unwrap();
        let again = enforce_consistency(&c.as_tailed()).unwrap();
        assert_eq!(again.pres, c.pres);
        assert_eq!(again.transform, IntMatrix::identity(2));
    }

    #[test]
    fn inconsistent_base_is_rejected() {
        let bad: PcPresentation<i64> =
            parse_presentation("gens g1 g2\npow g1^3 := id\npow g2^3 := id\nconj g2^g1 := g2^2\n")
                .unwrap();
        let tp = attach_tails(&bad, 2, &BTreeSet::new()).unwrap();
        assert!(matches!(enforce_consistency(&tp), Err(Error::Malformed(_))));
    }
}
