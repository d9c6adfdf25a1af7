//! The q-exterior square `G ∧^q G = E_q(G)' E_q(G)^q`, `H_2(G, Z_q)`, the
//! q-biderivation `λ`, the action of `G` on the wedge and the q-exterior
//! center.

use std::sync::Arc;

use crate::covers::{q_cover, ConsistentCover};
use crate::pc::{ExponentVector, PcPresentation, Word};
use crate::subgrp::{center, InducedSequence};
use crate::{Error, Int, Result};

/// `W = <[g_i, g_j], g_k^q>` inside `E_q(G)`.
#[derive(Clone, Debug)]
pub struct WedgeContext<T> {
    pub group: PcPresentation<T>,
    pub q: u64,
    pub cover: ConsistentCover<T>,
    pub w: InducedSequence<T>,
    /// Presentation on `w1..wr`; `wk` embeds as member `k` of `w`.
    pub wedge_pres: PcPresentation<T>,
}

fn wedge_names(taken: &[String], r: usize) -> Vec<String> {
    let mut prefix = "w".to_string();
    loop {
        let names: Vec<String> = (1..=r).map(|k| format!("{prefix}{k}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        prefix.push('w');
    }
}

pub fn build_wedge<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<WedgeContext<T>> {
    let cover = q_cover(group, q)?;
    let e = &cover.pres;
    let n = group.ngens();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(e.commutator(&e.generator(i), &e.generator(j))?);
        }
    }
    let qt = T::from_u64(q).expect("q fits the exponent type");
    for k in 0..n {
        gens.push(e.pow(&e.generator(k), &qt)?);
    }
    let w = InducedSequence::new(Arc::new(e.clone()), &gens)?;
    let mut names = group.names().to_vec();
    names.extend(e.names()[n..].iter().cloned());
    let mut wedge_pres = w.presentation_named(wedge_names(&names, w.len()))?;
    wedge_pres.set_name(format!("{}_wedge{}_{}", group.name(), q, group.name()));
    Ok(WedgeContext {
        group: group.clone(),
        q,
        cover,
        w,
        wedge_pres,
    })
}

impl<T: Int> WedgeContext<T> {
    pub fn ngens(&self) -> usize {
        self.group.ngens()
    }

    /// Lift of an element of `G` to the cover.
    pub fn lift(&self, g: &ExponentVector<T>) -> ExponentVector<T> {
        self.cover.lift(g)
    }

    /// Evaluates a word over `G`'s generators in the cover.
    pub fn lift_word(&self, w: &Word<T>) -> Result<ExponentVector<T>> {
        if w.max_gen().is_some_and(|m| m >= self.ngens()) {
            return Err(Error::BadIndex {
                index: w.max_gen().unwrap_or_default(),
                count: self.ngens(),
            });
        }
        self.cover.pres.collect(w)
    }

    /// Cover element of wedge coordinates.
    pub fn embed(&self, coords: &[T]) -> Result<ExponentVector<T>> {
        self.w.element(coords)
    }

    /// Wedge coordinates of a cover element of `W`.
    pub fn express(&self, x: &ExponentVector<T>) -> Result<Vec<T>> {
        self.w
            .express(x)?
            .ok_or_else(|| Error::Verification("element outside the wedge subgroup".into()))
    }

    /// `[g~, h~] (k~)^q` in the cover, for elements of `G`.
    pub fn lambda_cover(
        &self,
        g: &ExponentVector<T>,
        h: &ExponentVector<T>,
        k: &ExponentVector<T>,
    ) -> Result<ExponentVector<T>> {
        let e = &self.cover.pres;
        let c = e.commutator(&self.lift(g), &self.lift(h))?;
        if self.q == 0 {
            return Ok(c);
        }
        let qt = T::from_u64(self.q).expect("q fits the exponent type");
        e.mul(&c, &e.pow(&self.lift(k), &qt)?)
    }

    /// `λ(g, h, k)` in wedge coordinates, for elements of `G`.
    pub fn lambda(
        &self,
        g: &ExponentVector<T>,
        h: &ExponentVector<T>,
        k: &ExponentVector<T>,
    ) -> Result<Vec<T>> {
        self.express(&self.lambda_cover(g, h, k)?)
    }

    /// `λ(g, h, k)` for words over `G`'s generators.
    pub fn lambda_eval(&self, g: &Word<T>, h: &Word<T>, k: &Word<T>) -> Result<Vec<T>> {
        let p = &self.group;
        self.lambda(&p.collect(g)?, &p.collect(h)?, &p.collect(k)?)
    }

    /// `w^x`: conjugation by a lift of `x ∈ G`.
    pub fn wedge_action(&self, w: &[T], x: &ExponentVector<T>) -> Result<Vec<T>> {
        let e = &self.cover.pres;
        self.express(&e.conjugate(&self.embed(w)?, &self.lift(x))?)
    }

    pub fn wedge_action_word(&self, w: &[T], x: &Word<T>) -> Result<Vec<T>> {
        self.wedge_action(w, &self.group.collect(x)?)
    }

    /// Image of a wedge element in `G' G^q`.
    pub fn project(&self, w: &[T]) -> Result<ExponentVector<T>> {
        Ok(self.cover.project(&self.embed(w)?))
    }

    /// `W ∩ T_q`.
    pub fn h2_sequence(&self) -> Result<InducedSequence<T>> {
        self.w.tail_intersection(self.cover.n_base)
    }

    /// `H_2(G, Z_q)` as a presentation.
    pub fn h2(&self) -> Result<PcPresentation<T>> {
        let s = self.h2_sequence()?;
        let names = (1..=s.len()).map(|k| format!("u{k}")).collect();
        let mut p = s.presentation_named(names)?;
        p.set_name(format!("H2_{}_Z{}", self.group.name(), self.q));
        Ok(p)
    }

    /// `G' G^q` as a subgroup of `G`.
    pub fn image_in_group(&self) -> Result<InducedSequence<T>> {
        let gens: Vec<ExponentVector<T>> = self
            .w
            .members()
            .iter()
            .map(|m| self.cover.project(m))
            .collect();
        InducedSequence::new(Arc::new(self.group.clone()), &gens)
    }
}

pub fn h2<T: Int>(ctx: &WedgeContext<T>) -> Result<PcPresentation<T>> {
    ctx.h2()
}

pub fn lambda_eval<T: Int>(
    ctx: &WedgeContext<T>,
    g: &Word<T>,
    h: &Word<T>,
    k: &Word<T>,
) -> Result<Vec<T>> {
    ctx.lambda_eval(g, h, k)
}

pub fn wedge_action<T: Int>(ctx: &WedgeContext<T>, w: &[T], x: &Word<T>) -> Result<Vec<T>> {
    ctx.wedge_action_word(w, x)
}

/// `Z_q^∧(G) = π(Z(E_q(G)))`.
pub fn exterior_center<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<InducedSequence<T>> {
    let cover = q_cover(group, q)?;
    exterior_center_of(&cover)
}

pub fn exterior_center_of<T: Int>(cover: &ConsistentCover<T>) -> Result<InducedSequence<T>> {
    let z = center(&cover.pres)?;
    let gens: Vec<ExponentVector<T>> = z.members().iter().map(|m| cover.project(m)).collect();
    InducedSequence::new(Arc::new(cover.base.clone()), &gens)
}

pub fn is_q_capable<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<bool> {
    Ok(exterior_center(group, q)?.is_empty())
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

    fn w(i: usize) -> Word<i64> {
        Word::gen(i)
    }

    #[test]
    fn s3_wedge() {
        let c = build_wedge(&s3(), 2).unwrap();
        assert_eq!(c.w.order(), Some(6));
        assert_eq!(c.wedge_pres.ngens(), 2);
        assert!(c.wedge_pres.is_abelian().unwrap());
        assert_eq!(c.h2_sequence().unwrap().order(), Some(2));
        // λ(g1,g2,g1) = [g1,g2] g1^2 is the element g2^2 t1 of order 6
        let l = c.lambda_eval(&w(0), &w(1), &w(0)).unwrap();
        let x = c.embed(&l).unwrap();
        let e = &c.cover.pres;
        assert_eq!(&x.0[..2], &[0, 2]);
        assert!(!e.pow(&x, &2).unwrap().is_identity());
        assert!(!e.pow(&x, &3).unwrap().is_identity());
        assert!(e.pow(&x, &6).unwrap().is_identity());
        let id = Word::identity();
        assert!(c
            .lambda_eval(&id, &id, &id)
            .unwrap()
            .iter()
            .all(|v| *v == 0));
    }

    #[test]
    fn dinf_wedge() {
        let c = build_wedge(&dinf(), 2).unwrap();
        assert_eq!(c.w.len(), 3);
        assert_eq!(c.lambda_eval(&w(0), &w(1), &w(0)).unwrap(), vec![1, 1, 1]);
        let g1g2 = c.lambda_eval(&w(0), &w(1), &Word::identity()).unwrap();
        assert_eq!(g1g2, vec![1, 0, 1]);
        assert_eq!(c.wedge_action_word(&g1g2, &w(0)).unwrap(), vec![-1, 0, 1]);
        assert_eq!(c.h2().unwrap().ngens(), 2);
    }

    #[test]
    fn exterior_centers() {
        assert!(is_q_capable(&s3(), 2).unwrap());
        for q in [0, 2, 3] {
            assert!(is_q_capable(&dinf(), q).unwrap());
        }
        let c2: PcPresentation<i64> = parse_presentation("gens g\npow g^2 := id\n").unwrap();
        assert_eq!(exterior_center(&c2, 2).unwrap().order(), Some(2));
        assert!(!is_q_capable(&c2, 2).unwrap());
    }
}
