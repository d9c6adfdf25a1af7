//! Subgroups of polycyclically presented groups.
//!
//! A subgroup is stored as an induced sequence: one member per depth it
//! reaches, found by non-commutative Gaussian elimination. Membership,
//! coordinates and subgroup presentations all come from sifting.

mod center;

use std::sync::Arc;

use crate::pc::{ExponentVector, PcBuilder, PcPresentation, Word};
use crate::{Error, Int, Result};

pub use center::center;

/// Cap on enumerated elements of a finite subgroup.
pub const ENUMERATION_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct InducedSequence<T> {
    parent: Arc<PcPresentation<T>>,
    members: Vec<ExponentVector<T>>,
}

impl<T: Int> PartialEq for InducedSequence<T> {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
            && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

impl<T: Int> Eq for InducedSequence<T> {}

/// Canonical induced sequence of the subgroup generated by `gens`.
pub fn induced_sequence<T: Int>(
    parent: &PcPresentation<T>,
    gens: &[ExponentVector<T>],
) -> Result<InducedSequence<T>> {
    InducedSequence::new(Arc::new(parent.clone()), gens)
}

pub fn express<T: Int>(seq: &InducedSequence<T>, x: &ExponentVector<T>) -> Result<Option<Vec<T>>> {
    seq.express(x)
}

/// Presentation on one generator per member; generator `k` embeds as member `k`.
pub fn subgroup_presentation<T: Int>(
    seq: &InducedSequence<T>,
) -> Result<(PcPresentation<T>, Vec<ExponentVector<T>>)> {
    Ok((seq.presentation()?, seq.members.clone()))
}

pub fn tail_intersection<T: Int>(
    seq: &InducedSequence<T>,
    first_tail_depth: usize,
) -> Result<InducedSequence<T>> {
    seq.tail_intersection(first_tail_depth)
}

struct Table<'a, T> {
    pres: &'a PcPresentation<T>,
    slots: Vec<Option<ExponentVector<T>>>,
}

impl<'a, T: Int> Table<'a, T> {
    /// Extended gcd step: returns `(g, s)` with `g = gcd(a, b) = s*a + t*b`.
    fn gcd_coeffs(a: &T, b: &T) -> (T, T, T) {
        let e = a.extended_gcd(b);
        (e.gcd, e.x, e.y)
    }

    /// Adds `x` to the subgroup; returns whether the table changed.
    fn add(&mut self, x: ExponentVector<T>) -> Result<bool> {
        let mut queue = vec![x];
        let mut changed = false;
        while let Some(mut x) = queue.pop() {
            while let Some(d) = x.depth() {
                let a = x.0[d].clone();
                match &self.slots[d] {
                    None => {
                        let y = match self.pres.rel_order(d) {
                            Some(e) => {
                                let (g, s, _) = Self::gcd_coeffs(&a, e);
                                let y = self.pres.pow(&x, &s)?;
                                if g != a {
                                    queue.push(x.clone());
                                }
                                y
                            }
                            None if a.is_negative() => self.pres.inv(&x)?,
                            None => x.clone(),
                        };
                        debug_assert!(y.depth() == Some(d));
                        self.slots[d] = Some(y);
                        changed = true;
                        break;
                    }
                    Some(m) => {
                        let b = m.0[d].clone();
                        if a.is_multiple_of(&b) {
                            let k = -(a / b);
                            x = self.pres.mul(&x, &self.pres.pow(m, &k)?)?;
                            continue;
                        }
                        let (g, s, t) = Self::gcd_coeffs(&a, &b);
                        let m = m.clone();
                        let mut y = self
                            .pres
                            .mul(&self.pres.pow(&x, &s)?, &self.pres.pow(&m, &t)?)?;
                        if y.0[d].is_negative() {
                            y = self.pres.inv(&y)?;
                        }
                        debug_assert!(y.0[d] == g);
                        let g = y.0[d].clone();
                        let xr = self.pres.mul(&x, &self.pres.pow(&y, &-(a / g.clone()))?)?;
                        let mr = self.pres.mul(&m, &self.pres.pow(&y, &-(b / g))?)?;
                        self.slots[d] = Some(y);
                        changed = true;
                        queue.push(mr);
                        x = xr;
                    }
                }
            }
        }
        Ok(changed)
    }

    fn members(&self) -> Vec<ExponentVector<T>> {
        self.slots.iter().flatten().cloned().collect()
    }

    /// Adds powers and commutators until they all sift through.
    fn close(&mut self) -> Result<()> {
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            if rounds > 10_000 {
                return Err(Error::CollectionBudget(rounds));
            }
            let ms = self.members();
            let mut changed = false;
            for m in &ms {
                let d = m.depth().expect("members are nontrivial");
                if let Some(e) = self.pres.rel_order(d) {
                    let r = e.clone() / m.0[d].clone();
                    changed |= self.add(self.pres.pow(m, &r)?)?;
                }
            }
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    changed |= self.add(self.pres.commutator(&ms[j], &ms[i])?)?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

impl<T: Int> InducedSequence<T> {
    pub fn new(parent: Arc<PcPresentation<T>>, gens: &[ExponentVector<T>]) -> Result<Self> {
        let n = parent.ngens();
        for g in gens {
            if g.len() != n {
                return Err(Error::Precondition(format!(
                    "element of length {} in a group with {n} generators",
                    g.len()
                )));
            }
        }
        let mut table = Table {
            pres: &parent,
            slots: vec![None; n],
        };
        for g in gens {
            table.add(g.clone())?;
        }
        table.close()?;
        let mut members = table.members();
        // reduce above the diagonal
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let d = members[j].depth().expect("nontrivial");
                let b = members[j].0[d].clone();
                let c = members[i].0[d].clone();
                let k = c.div_floor(&b);
                if !k.is_zero() {
                    let p = parent.pow(&members[j], &-k)?;
                    members[i] = parent.mul(&members[i], &p)?;
                }
            }
        }
        Ok(InducedSequence { parent, members })
    }

    pub fn trivial(parent: Arc<PcPresentation<T>>) -> Self {
        InducedSequence {
            parent,
            members: Vec::new(),
        }
    }

    pub fn whole(parent: Arc<PcPresentation<T>>) -> Self {
        let members = (0..parent.ngens()).map(|i| parent.generator(i)).collect();
        InducedSequence { parent, members }
    }

    pub fn parent(&self) -> &PcPresentation<T> {
        &self.parent
    }

    pub fn parent_arc(&self) -> &Arc<PcPresentation<T>> {
        &self.parent
    }

    pub fn members(&self) -> &[ExponentVector<T>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.members
            .iter()
            .map(|m| m.depth().expect("nontrivial"))
            .collect()
    }

    /// Relative order of each member; `None` for infinite layers.
    pub fn relative_orders(&self) -> Vec<Option<T>> {
        self.members
            .iter()
            .map(|m| {
                let d = m.depth().expect("nontrivial");
                self.parent.rel_order(d).map(|e| e.clone() / m.0[d].clone())
            })
            .collect()
    }

    /// Order of the subgroup, `None` when infinite.
    pub fn order(&self) -> Option<T> {
        self.relative_orders()
            .into_iter()
            .try_fold(T::one(), |acc, r| r.map(|r| acc * r))
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Coordinates `c` with `x = prod members[k]^{c_k}`, or `None` if `x` is
    /// not in the subgroup.
    pub fn express(&self, x: &ExponentVector<T>) -> Result<Option<Vec<T>>> {
        if x.len() != self.parent.ngens() {
            return Err(Error::Precondition("element from a different group".into()));
        }
        let mut x = x.clone();
        let mut coords = vec![T::zero(); self.members.len()];
        let mut k = 0;
        while let Some(d) = x.depth() {
            while k < self.members.len() && self.members[k].depth() < Some(d) {
                k += 1;
            }
            if k == self.members.len() || self.members[k].depth() != Some(d) {
                return Ok(None);
            }
            let b = self.members[k].0[d].clone();
            let a = x.0[d].clone();
            if !a.is_multiple_of(&b) {
                return Ok(None);
            }
            let c = a / b;
            let p = self.parent.pow(&self.members[k], &-c.clone())?;
            x = self.parent.mul(&p, &x)?;
            coords[k] = c;
            k += 1;
        }
        Ok(Some(coords))
    }

    pub fn contains(&self, x: &ExponentVector<T>) -> Result<bool> {
        Ok(self.express(x)?.is_some())
    }

    /// `prod members[k]^{c_k}`.
    pub fn element(&self, coords: &[T]) -> Result<ExponentVector<T>> {
        let mut v = self.parent.identity();
        for (m, c) in self.members.iter().zip(coords) {
            if !c.is_zero() {
                v = self.parent.mul(&v, &self.parent.pow(m, c)?)?;
            }
        }
        Ok(v)
    }

    fn coords_word(&self, x: &ExponentVector<T>) -> Result<Word<T>> {
        let c = self
            .express(x)?
            .ok_or_else(|| Error::Verification("induced sequence is not closed".into()))?;
        Ok(Word::from_letters(c.into_iter().enumerate()))
    }

    /// Presentation with generators `h1, h2, ...`.
    pub fn presentation(&self) -> Result<PcPresentation<T>> {
        let names: Vec<String> = (1..=self.len()).map(|k| format!("h{k}")).collect();
        self.presentation_named(names)
    }

    pub fn presentation_named(&self, names: Vec<String>) -> Result<PcPresentation<T>> {
        let p = &self.parent;
        let ro = self.relative_orders();
        // Each generator records the parent element it stands for.
        let prov = self
            .members
            .iter()
            .map(|m| format!("{}: {}", p.name(), m.to_word().display_with(p.names())))
            .collect();
        let mut b = PcBuilder::new(names).budget(p.budget()).provenance(prov);
        for (i, m) in self.members.iter().enumerate() {
            if let Some(r) = &ro[i] {
                b = b.power(i, r.clone(), self.coords_word(&p.pow(m, r)?)?);
            }
            for j in 0..i {
                b = b.conj(i, j, self.coords_word(&p.conjugate(m, &self.members[j])?)?);
            }
        }
        b.build()
    }

    /// Members at depth `>= first`; this generates the intersection with
    /// `<g_first, ..>`.
    pub fn tail_intersection(&self, first: usize) -> Result<Self> {
        if first > self.parent.ngens() {
            return Err(Error::Precondition(format!(
                "depth {first} beyond the group"
            )));
        }
        Ok(InducedSequence {
            parent: self.parent.clone(),
            members: self
                .members
                .iter()
                .filter(|m| m.depth() >= Some(first))
                .cloned()
                .collect(),
        })
    }

    /// All elements of a finite subgroup.
    pub fn elements(&self) -> Result<Vec<ExponentVector<T>>> {
        let ro = self.relative_orders();
        let mut total = 1usize;
        let mut bounds = Vec::new();
        for r in &ro {
            let r = r.as_ref().and_then(|r| r.to_usize()).ok_or_else(|| {
                Error::Unsupported("cannot enumerate an infinite subgroup".into())
            })?;
            total = total.saturating_mul(r);
            bounds.push(r);
        }
        if total > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("subgroup of order {total}")));
        }
        let mut out = vec![self.parent.identity()];
        for (m, r) in self.members.iter().zip(bounds).rev() {
            let mut next = Vec::with_capacity(out.len() * r);
            let mut p = self.parent.identity();
            for _ in 0..r {
                for x in &out {
                    next.push(self.parent.mul(&p, x)?);
                }
                p = self.parent.mul(&p, m)?;
            }
            out = next;
        }
        Ok(out)
    }

    /// `[K : H]` for `H = self <= sup`, `None` when infinite; errors if `self`
    /// is not contained in `sup`.
    pub fn index_in(&self, sup: &Self) -> Result<Option<T>> {
        for m in &self.members {
            if !sup.contains(m)? {
                return Err(Error::Precondition("not a subgroup".into()));
            }
        }
        let mut index = T::one();
        let n = self.parent.ngens();
        for d in 0..n {
            let find = |s: &Self| {
                s.members
                    .iter()
                    .find(|m| m.depth() == Some(d))
                    .map(|m| m.0[d].clone())
            };
            match (find(sup), find(self), self.parent.rel_order(d)) {
                (Some(b), None, Some(e)) => index = index * (e.clone() / b),
                (Some(_), None, None) => return Ok(None),
                (Some(b), Some(a), _) => index = index * (a / b),
                _ => {}
            }
        }
        Ok(Some(index))
    }
}
