//! Isomorphism invariants of polycyclic presentations and a certified
//! generator-image search for small isomorphism claims.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::pc::{ExponentVector, PcPresentation, Word};
use crate::subgrp::InducedSequence;
use crate::zlinalg::{abelian_invariants, IntMatrix};
use crate::{Error, Int, Result};

/// A group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinal<T> {
    Finite(T),
    Infinite,
}

impl<T: Int> Cardinal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Infinite => None,
        }
    }
}

impl<T: Int> fmt::Display for Cardinal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn order<T: Int>(pres: &PcPresentation<T>) -> Cardinal<T> {
    let mut n = T::one();
    for i in 0..pres.ngens() {
        match pres.rel_order(i) {
            Some(e) => n = n * e.clone(),
            None => return Cardinal::Infinite,
        }
    }
    Cardinal::Finite(n)
}

pub fn hirsch_length<T: Int>(pres: &PcPresentation<T>) -> usize {
    (0..pres.ngens())
        .filter(|&i| !pres.is_finite_gen(i))
        .count()
}

fn exponent_sums<T: Int>(w: &Word<T>, n: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    for (g, e) in w.letters() {
        v[*g] = v[*g].clone() + e.clone();
    }
    v
}

/// Invariant factors of `G/G'`, torsion first and `0` for each free factor.
pub fn abelianization<T: Int>(pres: &PcPresentation<T>) -> Vec<T> {
    let n = pres.ngens();
    let mut rows = Vec::new();
    for i in 0..n {
        if let Some(e) = pres.rel_order(i) {
            let mut r: Vec<T> = exponent_sums(pres.power_rhs(i), n)
                .into_iter()
                .map(|x| -x)
                .collect();
            r[i] = r[i].clone() + e.clone();
            rows.push(r);
        }
        for j in 0..i {
            let mut r = exponent_sums(pres.conj_rhs(i, j), n);
            r[i] = r[i].clone() - T::one();
            if r.iter().any(|x| !x.is_zero()) {
                rows.push(r);
            }
        }
    }
    abelian_invariants(&IntMatrix::from_rows(n, rows), n)
}

pub fn is_isomorphic_abelian<T: Int>(
    p1: &PcPresentation<T>,
    p2: &PcPresentation<T>,
) -> Result<bool> {
    if !p1.is_abelian()? || !p2.is_abelian()? {
        return Err(Error::NonAbelian);
    }
    Ok(abelianization(p1) == abelianization(p2))
}

/// `C2 x C2 x Z`, or `1` for the trivial group.
pub fn abelian_string<T: Int>(inv: &[T]) -> String {
    if inv.is_empty() {
        return "1".into();
    }
    inv.iter()
        .map(|d| {
            if d.is_zero() {
                "Z".to_string()
            } else {
                format!("C{d}")
            }
        })
        .collect::<Vec<_>>()
        .join(" x ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureDescription<T> {
    /// `None` for infinite groups.
    pub order: Option<String>,
    pub hirsch: usize,
    pub abelianization: Vec<String>,
    pub abelian: bool,
    pub invariants_if_abelian: Option<Vec<String>>,
    pub display: String,
    #[serde(skip)]
    marker: std::marker::PhantomData<T>,
}

pub fn describe<T: Int>(pres: &PcPresentation<T>) -> Result<StructureDescription<T>> {
    let ord = order(pres);
    let hirsch = hirsch_length(pres);
    let ab = abelianization(pres);
    let abelian = pres.is_abelian()?;
    let display = match (&ord, abelian) {
        (_, true) => abelian_string(&ab),
        (Cardinal::Finite(n), false) => format!("order {n}, ab = {}", abelian_string(&ab)),
        (Cardinal::Infinite, false) => {
            format!("infinite, hirsch {hirsch}, ab = {}", abelian_string(&ab))
        }
    };
    let strs = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(StructureDescription {
        order: ord.finite().map(|n| n.to_string()),
        hirsch,
        abelianization: strs(&ab),
        abelian,
        invariants_if_abelian: abelian.then(|| strs(&ab)),
        display,
        marker: std::marker::PhantomData,
    })
}

impl<T> fmt::Display for StructureDescription<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Exponent bound for candidate images along infinite layers.
const INFINITE_RANGE: i64 = 2;

fn candidates<T: Int>(
    p: &PcPresentation<T>,
    limit: usize,
) -> Option<(Vec<ExponentVector<T>>, bool)> {
    let ranges: Vec<Vec<T>> = (0..p.ngens())
        .map(|i| match p.rel_order(i).and_then(|e| e.to_i64()) {
            Some(e) => (0..e).map(T::from_i64_exact).collect(),
            None if p.is_finite_gen(i) => Vec::new(),
            None => (-INFINITE_RANGE..=INFINITE_RANGE)
                .map(T::from_i64_exact)
                .collect(),
        })
        .collect();
    let mut size: usize = 1;
    for r in &ranges {
        size = size.checked_mul(r.len())?;
        if size > limit {
            return None;
        }
    }
    let mut out = vec![ExponentVector(Vec::new())];
    for r in &ranges {
        out = out
            .into_iter()
            .flat_map(|v| {
                r.iter().map(move |e| {
                    let mut w = v.0.clone();
                    w.push(e.clone());
                    ExponentVector(w)
                })
            })
            .collect();
    }
    let weight = |v: &ExponentVector<T>| -> usize {
        v.0.iter()
            .enumerate()
            .map(|(i, e)| {
                let a = match p.rel_order(i) {
                    Some(m) => std::cmp::min(e.clone(), m.clone() - e.clone()),
                    None => e.abs(),
                };
                a.to_usize().unwrap_or(usize::MAX / 64)
            })
            .sum()
    };
    out.sort_by_key(|v| (weight(v), v.clone()));
    Some((out, p.is_finite()))
}

struct Search<'a, T> {
    p1: &'a PcPresentation<T>,
    p2: &'a PcPresentation<T>,
    pool: Vec<ExponentVector<T>>,
    images: Vec<Option<ExponentVector<T>>>,
    budget: usize,
    exhausted: bool,
}

impl<T: Int> Search<'_, T> {
    fn eval(&self, w: &Word<T>) -> Result<ExponentVector<T>> {
        let mut acc = self.p1.identity();
        for (g, e) in w.letters() {
            let x = self.images[*g].as_ref().expect("assigned");
            acc = self.p1.mul(&acc, &self.p1.pow(x, e)?)?;
        }
        Ok(acc)
    }

    fn relations_hold(&self, j: usize) -> Result<bool> {
        let p1 = self.p1;
        let x = self.images[j].as_ref().expect("assigned");
        if let Some(e) = self.p2.rel_order(j) {
            if p1.pow(x, e)? != self.eval(self.p2.power_rhs(j))? {
                return Ok(false);
            }
        }
        for i in j + 1..self.p2.ngens() {
            let y = self.images[i].as_ref().expect("assigned");
            if p1.conjugate(y, x)? != self.eval(self.p2.conj_rhs(i, j))? {
                return Ok(false);
            }
            if !self.p2.is_finite_gen(j) {
                let rhs = self
                    .p2
                    .cinv_rhs(i, j)
                    .cloned()
                    .unwrap_or_else(|| Word::gen(i));
                if p1.conjugate(y, &p1.inv(x)?)? != self.eval(&rhs)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn span(&self, from: usize) -> Result<InducedSequence<T>> {
        let gens: Vec<ExponentVector<T>> = self.images[from..]
            .iter()
            .map(|x| x.clone().expect("assigned"))
            .collect();
        InducedSequence::new(Arc::new(self.p1.clone()), &gens)
    }

    /// Assigns generator `j` given `j+1..`; `lower` is `<x_{j+1}, ..>`.
    fn run(&mut self, j: usize, lower: &InducedSequence<T>) -> Result<bool> {
        for c in 0..self.pool.len() {
            if self.budget == 0 {
                self.exhausted = true;
                return Ok(false);
            }
            self.budget -= 1;
            self.images[j] = Some(self.pool[c].clone());
            if !self.relations_hold(j)? {
                continue;
            }
            let upper = self.span(j)?;
            let index = lower.index_in(&upper)?;
            let wanted = self.p2.rel_order(j).cloned();
            if index != wanted {
                continue;
            }
            if j == 0 {
                let whole = InducedSequence::whole(Arc::new(self.p1.clone()));
                if upper.index_in(&whole)? == Some(T::one()) {
                    return Ok(true);
                }
                continue;
            }
            if self.run(j - 1, &upper)? {
                return Ok(true);
            }
            if self.exhausted {
                return Ok(false);
            }
        }
        self.images[j] = None;
        Ok(false)
    }
}

/// Decides whether `p1 ≅ p2` by searching images in `p1` of `p2`'s
/// generators. `Yes` is always certified: the images satisfy `p2`'s relations,
/// generate `p1`, and every layer of `p2` maps onto a layer of equal order.
pub fn matches_presentation<T: Int>(
    p1: &PcPresentation<T>,
    p2: &PcPresentation<T>,
    bound: usize,
) -> Result<Verdict> {
    if order(p1) != order(p2)
        || hirsch_length(p1) != hirsch_length(p2)
        || abelianization(p1) != abelianization(p2)
    {
        return Ok(Verdict::No);
    }
    if p1.is_abelian()? != p2.is_abelian()? {
        return Ok(Verdict::No);
    }
    let m = p2.ngens();
    if m == 0 {
        return Ok(
            if p1.ngens() == 0 || order(p1) == Cardinal::Finite(T::one()) {
                Verdict::Yes
            } else {
                Verdict::No
            },
        );
    }
    let Some((pool, complete)) = candidates(p1, bound) else {
        return Ok(Verdict::Unknown);
    };
    let mut s = Search {
        p1,
        p2,
        pool,
        images: vec![None; m],
        budget: bound,
        exhausted: false,
    };
    let trivial = InducedSequence::trivial(Arc::new(p1.clone()));
    if s.run(m - 1, &trivial)? {
        Ok(Verdict::Yes)
    } else if s.exhausted || !complete {
        Ok(Verdict::Unknown)
    } else {
        Ok(Verdict::No)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::parse_presentation;

    fn p(text: &str) -> PcPresentation<i64> {
        parse_presentation(text).unwrap()
    }

    fn s3() -> PcPresentation<i64> {
        p("gens g1 g2\npow g1^2 := id\npow g2^3 := id\nconj g2^g1 := g2^2\n")
    }

    fn dinf() -> PcPresentation<i64> {
        p("gens g1 g2\npow g1^2 := id\nconj g2^g1 := g2^-1\n")
    }

    #[test]
    fn invariants() {
        assert_eq!(order(&s3()), Cardinal::Finite(6));
        assert_eq!(order(&dinf()), Cardinal::Infinite);
        assert_eq!(
            order(&PcPresentation::<i64>::trivial()),
            Cardinal::Finite(1)
        );
        assert_eq!(hirsch_length(&dinf()), 1);
        assert_eq!(abelianization(&s3()), vec![2]);
        assert_eq!(abelianization(&dinf()), vec![2, 2]);
        assert_eq!(
            abelianization(&p("gens a b\npow a^2 := b\npow b^3 := id\n")),
            vec![6]
        );
    }

    #[test]
    fn descriptions() {
        let c2c2z = p("gens a b c\npow a^2 := id\npow b^2 := id\n");
        assert_eq!(describe(&c2c2z).unwrap().display, "C2 x C2 x Z");
        assert_eq!(describe(&s3()).unwrap().display, "order 6, ab = C2");
        assert_eq!(
            describe(&dinf()).unwrap().display,
            "infinite, hirsch 1, ab = C2 x C2"
        );
        assert_eq!(
            describe(&PcPresentation::<i64>::trivial()).unwrap().display,
            "1"
        );
    }

    #[test]
    fn abelian_isomorphism() {
        let c2c2 = p("gens a b\npow a^2 := id\npow b^2 := id\n");
        let c4 = p("gens a b\npow a^2 := b\npow b^2 := id\n");
        assert!(!is_isomorphic_abelian(&c2c2, &c4).unwrap());
        assert!(is_isomorphic_abelian(&c4, &p("gens x\npow x^4 := id\n")).unwrap());
        assert_eq!(is_isomorphic_abelian(&s3(), &c4), Err(Error::NonAbelian));
    }

    #[test]
    fn matching() {
        let c6 = p("gens a b\npow a^2 := b\npow b^3 := id\n");
        assert_eq!(matches_presentation(&c6, &s3(), 1000).unwrap(), Verdict::No);
        let s3b = p("gens x y\npow x^2 := id\npow y^3 := id\nconj y^x := y^2\n");
        assert_eq!(
            matches_presentation(&s3(), &s3b, 1000).unwrap(),
            Verdict::Yes
        );
        // D∞ presented with the involution written as g1 g2.
        let d2 = p("gens a b\npow a^2 := id\nconj b^a := b^-1\n");
        assert_eq!(
            matches_presentation(&d2, &dinf(), 1000).unwrap(),
            Verdict::Yes
        );
        assert_eq!(
            matches_presentation(&s3(), &s3b, 1).unwrap(),
            Verdict::Unknown
        );
    }
}
