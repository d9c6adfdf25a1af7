//! The presentation `τ^q(G)`, the group `ν^q(G) = E_q(τ^q(G))`, and inside it
//! the q-tensor square `Υ^q(G) = [G, G^φ] Ĝ`, the diagonal `Δ^q(G)` and the
//! map `ρ: Υ^q(G) -> G`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::covers::{attach_tails, enforce_consistency, quotient_tail_lattice, Relator};
use crate::pc::{ExponentVector, Expr, PcBuilder, PcPresentation, Word};
use crate::qwedge::{build_wedge, WedgeContext};
use crate::subgrp::InducedSequence;
use crate::{Error, Int, Result};

/// Relation families of `τ^q(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TauFamily {
    /// Relators of `G`.
    Group = 1,
    /// Relators of the copy `G^φ`.
    Phi = 2,
    /// Relators of the wedge.
    Wedge = 3,
    /// `g_i^{-1} g_j^φ g_i = g_j^φ λ(g_i, g_j, 1)^{-1}`.
    PhiAction = 4,
    /// `w^{g_j} = w^{g_j^φ}` is the action of `g_j` on the wedge.
    WedgeAction = 5,
}

impl fmt::Display for TauFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", *self as u8)
    }
}

/// `τ^q(G)` on `g_1..g_n, g_1^φ..g_n^φ, w_1..w_r`.
#[derive(Clone, Debug)]
pub struct TauPresentation<T> {
    pub pres: PcPresentation<T>,
    pub ctx: WedgeContext<T>,
    /// Every relator of `pres` with its family.
    pub relator_families: Vec<(Relator, TauFamily)>,
}

impl<T: Int> TauPresentation<T> {
    /// Number of generators of `G`.
    pub fn n(&self) -> usize {
        self.ctx.ngens()
    }

    /// Number of wedge generators.
    pub fn r(&self) -> usize {
        self.ctx.wedge_pres.ngens()
    }

    pub fn family(&self, rel: Relator) -> TauFamily {
        let n = self.n();
        let block = |i: usize| i / n.max(1);
        match rel {
            Relator::Power(i) => match block(i) {
                0 => TauFamily::Group,
                1 => TauFamily::Phi,
                _ => TauFamily::Wedge,
            },
            Relator::Conj(i, j) => match (block(i).min(2), block(j).min(2)) {
                (0, _) => TauFamily::Group,
                (1, 0) => TauFamily::PhiAction,
                (1, _) => TauFamily::Phi,
                (_, 2) => TauFamily::Wedge,
                _ => TauFamily::WedgeAction,
            },
        }
    }

    /// Word in `w_1..w_r` (as generators of `τ`) for wedge coordinates.
    pub fn wedge_word(&self, coords: &[T]) -> Word<T> {
        ExponentVector(coords.to_vec())
            .to_word()
            .shift(2 * self.n())
    }

    /// Element of `τ` for wedge coordinates.
    pub fn wedge_element(&self, coords: &[T]) -> ExponentVector<T> {
        let mut v = vec![T::zero(); 2 * self.n()];
        v.extend(coords.iter().cloned());
        ExponentVector(v)
    }

    /// `λ(1, 1, g_i)` as an element of `τ`.
    pub fn hat(&self, i: usize) -> Result<ExponentVector<T>> {
        let g = &self.ctx.group;
        let c = self
            .ctx
            .lambda(&g.identity(), &g.identity(), &g.generator(i))?;
        Ok(self.wedge_element(&c))
    }
}

fn unused_names(taken: &[String], prefix: &str, r: usize) -> Vec<String> {
    let mut prefix = prefix.to_string();
    loop {
        let names: Vec<String> = (1..=r).map(|k| format!("{prefix}{k}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        prefix.push('w');
    }
}

pub fn build_tau<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<TauPresentation<T>> {
    let ctx = build_wedge(group, q)?;
    let n = group.ngens();
    let wp = &ctx.wedge_pres;
    let r = wp.ngens();
    let mut names: Vec<String> = group.names().to_vec();
    names.extend(group.names().iter().map(|s| format!("{s}_phi")));
    let wnames = unused_names(&names, "w", r);
    names.extend(wnames);
    let mut prov = vec!["G".to_string(); n];
    prov.extend(vec!["G^phi".to_string(); n]);
    prov.extend(vec!["wedge".to_string(); r]);

    let mut b = PcBuilder::new(names)
        .name(format!("tau{}_{}", q, group.name()))
        .provenance(prov)
        .budget(group.budget());
    for (shift, _) in [(0, ()), (n, ())] {
        for i in 0..n {
            if let Some(e) = group.rel_order(i) {
                b = b.power(shift + i, e.clone(), group.power_rhs(i).shift(shift));
            }
            for j in 0..i {
                b = b.conj(shift + i, shift + j, group.conj_rhs(i, j).shift(shift));
            }
        }
    }
    let s = 2 * n;
    for k in 0..r {
        if let Some(e) = wp.rel_order(k) {
            b = b.power(s + k, e.clone(), wp.power_rhs(k).shift(s));
        }
        for l in 0..k {
            b = b.conj(s + k, s + l, wp.conj_rhs(k, l).shift(s));
        }
    }
    let wedge_word = |c: Vec<T>| ExponentVector(c).to_word().shift(s);
    let one = group.identity();
    for i in 0..n {
        let gi = group.generator(i);
        let gi_inv = group.inv(&gi)?;
        for j in 0..n {
            let gj = group.generator(j);
            let l = ctx.lambda_cover(&gi, &gj, &one)?;
            let u = ctx.express(&ctx.cover.pres.inv(&l)?)?;
            b = b.conj(n + j, i, Word::gen(n + j).concat(&wedge_word(u)));
            if !group.is_finite_gen(i) {
                let l = ctx.lambda_cover(&gi_inv, &gj, &one)?;
                let u = ctx.express(&ctx.cover.pres.inv(&l)?)?;
                b = b.cinv(n + j, i, Word::gen(n + j).concat(&wedge_word(u)));
            }
        }
    }
    for k in 0..r {
        let mut unit = vec![T::zero(); r];
        unit[k] = T::one();
        for j in 0..n {
            let gj = group.generator(j);
            let a = wedge_word(ctx.wedge_action(&unit, &gj)?);
            b = b.conj(s + k, j, a.clone()).conj(s + k, n + j, a);
            if !group.is_finite_gen(j) {
                let a = wedge_word(ctx.wedge_action(&unit, &group.inv(&gj)?)?);
                b = b.cinv(s + k, j, a.clone()).cinv(s + k, n + j, a);
            }
        }
    }
    let pres = b.build()?;
    let report = pres.consistency_report()?;
    if !report.is_consistent() {
        return Err(Error::Verification(format!(
            "tau presentation is inconsistent:\n{}",
            report.render(&pres)
        )));
    }
    let mut tau = TauPresentation {
        pres,
        ctx,
        relator_families: Vec::new(),
    };
    tau.relator_families = Relator::all(&tau.pres)
        .into_iter()
        .map(|r| (r, tau.family(r)))
        .collect();
    Ok(tau)
}

/// Atoms of relator instances: `g_i`, `g_i^φ` and `ĝ_i = λ(1, 1, g_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NuAtom {
    G(usize),
    Phi(usize),
    Hat(usize),
}

/// Families of relator instances of `ν^q(G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NuFamily {
    /// `[g, h^φ]^k = [g^k, (h^k)^φ]`, conjugating by `k` or `k^φ`.
    Nu,
    /// The same with `k^{-1}` for infinite `k`.
    NuInverse,
    Rr1,
    Rr1Inverse,
    Rr2,
    Rr2Inverse,
    Rr3,
    Rr4,
    /// `RR4` at `(g_i, g_i^{e_i - 1})` for finite `g_i`, tying `ĝ_i` to the
    /// power relation.
    Rr4Power,
    Rr5,
    Rr6,
}

#[derive(Clone, Debug)]
pub struct RelatorInstance {
    pub family: NuFamily,
    pub expr: Expr<NuAtom>,
}

/// Builds expressions over [`NuAtom`] from elements of `G`.
struct HatExpander<'a, T> {
    g: &'a PcPresentation<T>,
    q: i64,
}

impl<T: Int> HatExpander<'_, T> {
    fn word(&self, x: &ExponentVector<T>, atom: fn(usize) -> NuAtom) -> Expr<NuAtom> {
        Expr::from_powers(
            x.0.iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(i, e)| (atom(i), e.to_i64().expect("exponent fits in i64"))),
        )
    }

    fn g(&self, x: &ExponentVector<T>) -> Expr<NuAtom> {
        self.word(x, NuAtom::G)
    }

    fn phi(&self, x: &ExponentVector<T>) -> Expr<NuAtom> {
        self.word(x, NuAtom::Phi)
    }

    /// `∏_{i=1}^{q-1} [k, (k1^{-i})^φ]^{k^{q-1-i}}`.
    fn rr4_product(&self, k: &ExponentVector<T>, k1: &ExponentVector<T>) -> Result<Expr<NuAtom>> {
        let mut items = Vec::new();
        for i in 1..self.q {
            let p = self.g.pow(k1, &T::from_i64_exact(-i))?;
            let c = self.g(k).comm(self.phi(&p));
            items.push(c.conj(self.g(k).pow(self.q - 1 - i)));
        }
        Ok(Expr::prod(items))
    }

    /// `hat(x)` for `x ∈ G`, peeling the normal form from the left.
    fn hat(&self, x: &ExponentVector<T>) -> Result<Expr<NuAtom>> {
        let Some(a) = x.depth() else {
            return Ok(Expr::Id);
        };
        let up = x.0[a].is_positive();
        let mut y = self.g.identity();
        y.0[a] = if up { T::one() } else { -T::one() };
        let mut z = x.clone();
        z.0[a] = z.0[a].clone() - y.0[a].clone();
        let hy = if up {
            Expr::atom(NuAtom::Hat(a))
        } else {
            let ga = self.g.generator(a);
            Expr::prod([Expr::atom(NuAtom::Hat(a)), self.rr4_product(&ga, &y)?]).inv()
        };
        Ok(Expr::prod([hy, self.rr4_product(&y, &z)?, self.hat(&z)?]))
    }
}

/// The finite list of relator instances defining `ν^q(G)` inside
/// `E_q(τ^q(G))`.
pub fn nu_relator_instances<T: Int>(
    group: &PcPresentation<T>,
    q: u64,
) -> Result<Vec<RelatorInstance>> {
    let n = group.ngens();
    let x = HatExpander {
        g: group,
        q: i64::try_from(q).map_err(|_| Error::Precondition("q too large".into()))?,
    };
    let gen = |i: usize| group.generator(i);
    let comm_gphi = |i: usize, j: usize| Expr::atom(NuAtom::G(i)).comm(Expr::atom(NuAtom::Phi(j)));
    let mut out = Vec::new();
    let mut push = |family, expr| out.push(RelatorInstance { family, expr });
    for k in 0..n {
        let gk = gen(k);
        let mut conjugators = vec![(NuFamily::Nu, gk.clone())];
        if !group.is_finite_gen(k) {
            conjugators.push((NuFamily::NuInverse, group.inv(&gk)?));
        }
        for (family, c) in conjugators {
            for i in 0..n {
                for j in 0..n {
                    let rhs = x
                        .g(&group.conjugate(&gen(i), &c)?)
                        .comm(x.phi(&group.conjugate(&gen(j), &c)?));
                    for by in [x.g(&c), x.phi(&c)] {
                        push(
                            family,
                            Expr::prod([comm_gphi(i, j).conj(by), rhs.clone().inv()]),
                        );
                    }
                }
            }
        }
    }
    if q == 0 {
        return Ok(out);
    }
    let qt = T::from_u64(q).expect("q fits the exponent type");
    let hat = |i: usize| Expr::atom(NuAtom::Hat(i));
    for (plain, inverse, phi) in [
        (NuFamily::Rr1, NuFamily::Rr1Inverse, false),
        (NuFamily::Rr2, NuFamily::Rr2Inverse, true),
    ] {
        for i in 0..n {
            let gi = gen(i);
            let mut conjugators = vec![(plain, gi.clone())];
            if !group.is_finite_gen(i) {
                conjugators.push((inverse, group.inv(&gi)?));
            }
            for (family, c) in conjugators {
                let by = if phi { x.phi(&c) } else { x.g(&c) };
                for j in 0..n {
                    let rhs = x.hat(&group.conjugate(&gen(j), &c)?)?;
                    push(family, Expr::prod([hat(j).conj(by.clone()), rhs.inv()]));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let kq = group.pow(&gen(k), &qt)?;
                let rhs = x
                    .g(&group.conjugate(&gen(i), &kq)?)
                    .comm(x.phi(&group.conjugate(&gen(j), &kq)?));
                push(
                    NuFamily::Rr3,
                    Expr::prod([comm_gphi(i, j).conj(hat(k)), rhs.inv()]),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let kk1 = group.mul(&gen(i), &gen(j))?;
            let e = Expr::prod([
                hat(i).inv(),
                x.hat(&kk1)?,
                hat(j).inv(),
                x.rr4_product(&gen(i), &gen(j))?.inv(),
            ]);
            push(NuFamily::Rr4, e);
        }
    }
    for i in 0..n {
        let Some(ei) = group.rel_order(i) else {
            continue;
        };
        if ei <= &T::from_i64_exact(2) {
            continue;
        }
        let k1 = group.pow(&gen(i), &(ei.clone() - T::one()))?;
        let kk1 = group.collect(group.power_rhs(i))?;
        let e = Expr::prod([
            hat(i).inv(),
            x.hat(&kk1)?,
            x.hat(&k1)?.inv(),
            x.rr4_product(&gen(i), &k1)?.inv(),
        ]);
        push(NuFamily::Rr4Power, e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let rhs = x
                .g(&group.pow(&gen(i), &qt)?)
                .comm(x.phi(&group.pow(&gen(j), &qt)?));
            push(NuFamily::Rr5, Expr::prod([hat(i).comm(hat(j)), rhs.inv()]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let c = group.commutator(&gen(i), &gen(j))?;
            push(
                NuFamily::Rr6,
                Expr::prod([x.hat(&c)?, comm_gphi(i, j).pow(-x.q)]),
            );
        }
    }
    Ok(out)
}

/// `ν^q(G)` with its distinguished subgroups.
#[derive(Clone, Debug)]
pub struct NuContext<T> {
    pub group: PcPresentation<T>,
    pub q: u64,
    pub tau: TauPresentation<T>,
    pub pres: PcPresentation<T>,
    /// Images of `g_i`.
    pub images_g: Vec<ExponentVector<T>>,
    /// Images of `g_i^φ`.
    pub images_phi: Vec<ExponentVector<T>>,
    /// Images of `ĝ_i`; empty when `q = 0`.
    pub images_hat: Vec<ExponentVector<T>>,
    pub upsilon: InducedSequence<T>,
    pub tensor_pres: PcPresentation<T>,
    pub delta: InducedSequence<T>,
    /// Image in `τ^q(G)` of each generator of `pres`.
    pub psi: Vec<ExponentVector<T>>,
}

fn depth_names<T: Int>(seq: &InducedSequence<T>) -> Vec<String> {
    let names = seq.parent().names();
    seq.depths().into_iter().map(|d| names[d].clone()).collect()
}

fn hirsch<T: Int>(seq: &InducedSequence<T>) -> usize {
    seq.relative_orders().iter().filter(|o| o.is_none()).count()
}

pub fn build_nu<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<NuContext<T>> {
    let tau = build_tau(group, q)?;
    let n = group.ngens();
    let skip: BTreeSet<Relator> = tau
        .relator_families
        .iter()
        .filter(|(_, f)| matches!(f, TauFamily::Group | TauFamily::Phi))
        .map(|(r, _)| *r)
        .collect();
    let cover = enforce_consistency(&attach_tails(&tau.pres, q, &skip)?)?;
    let e = &cover.pres;
    let hats: Vec<ExponentVector<T>> = if q == 0 {
        Vec::new()
    } else {
        (0..n)
            .map(|i| Ok(cover.lift(&tau.hat(i)?)))
            .collect::<Result<_>>()?
    };
    let mut atom = |a: &NuAtom| -> Result<ExponentVector<T>> {
        Ok(match *a {
            NuAtom::G(i) => e.generator(i),
            NuAtom::Phi(i) => e.generator(n + i),
            NuAtom::Hat(i) => hats[i].clone(),
        })
    };
    let mut rows: BTreeSet<Vec<T>> = BTreeSet::new();
    for inst in nu_relator_instances(group, q)? {
        let v = cover.evaluate_with(&inst.expr, &mut atom)?;
        if v.iter().any(|c| !c.is_zero()) {
            rows.insert(v);
        }
    }
    let rows: Vec<Vec<T>> = rows.into_iter().collect();
    let mut l_gens: Vec<ExponentVector<T>> = (0..2 * n).map(|i| e.generator(i)).collect();
    l_gens.extend(hats.iter().cloned());
    let l = InducedSequence::new(Arc::new(e.clone()), &l_gens)?;
    let red = quotient_tail_lattice(e, cover.n_base, &cover.tail_orders, &rows)?;
    let images: Vec<ExponentVector<T>> = l.members().iter().map(|m| red.map_element(m)).collect();
    let image = InducedSequence::new(Arc::new(red.pres.clone()), &images)?;
    let mut pres = image.presentation_named(depth_names(&image))?;
    pres.set_name(format!("nu{}_{}", q, group.name()));
    let to_nu = |x: &ExponentVector<T>| -> Result<ExponentVector<T>> {
        let c = image
            .express(&red.map_element(x))?
            .ok_or_else(|| Error::Verification("generator image outside L".into()))?;
        Ok(ExponentVector(c))
    };
    let images_g = (0..n)
        .map(|i| to_nu(&e.generator(i)))
        .collect::<Result<Vec<_>>>()?;
    let images_phi = (0..n)
        .map(|i| to_nu(&e.generator(n + i)))
        .collect::<Result<Vec<_>>>()?;
    let images_hat = hats.iter().map(to_nu).collect::<Result<Vec<_>>>()?;
    let nt = tau.pres.ngens();
    let psi = image
        .members()
        .iter()
        .map(|m| ExponentVector(m.0[..nt].to_vec()))
        .collect();
    assemble(group, q, tau, pres, images_g, images_phi, images_hat, psi)
}

/// Whether `G = G' G^q`.
pub fn is_q_perfect<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<bool> {
    let ctx = build_wedge(group, q)?;
    let img = ctx.image_in_group()?;
    Ok(img.index_in(&InducedSequence::whole(Arc::new(group.clone())))? == Some(T::one()))
}

/// `ν^q(G)` for q-perfect `G`, where it is `τ^q(G)` itself.
pub fn build_nu_qperfect<T: Int>(group: &PcPresentation<T>, q: u64) -> Result<NuContext<T>> {
    if !is_q_perfect(group, q)? {
        return Err(Error::NotQPerfect(u32::try_from(q).unwrap_or(u32::MAX)));
    }
    let tau = build_tau(group, q)?;
    let n = group.ngens();
    let p = &tau.pres;
    let mut pres = p.clone();
    pres.set_name(format!("nu{}_{}", q, group.name()));
    let images_g = (0..n).map(|i| p.generator(i)).collect();
    let images_phi = (0..n).map(|i| p.generator(n + i)).collect();
    let images_hat = if q == 0 {
        Vec::new()
    } else {
        (0..n).map(|i| tau.hat(i)).collect::<Result<Vec<_>>>()?
    };
    let psi = (0..p.ngens()).map(|i| p.generator(i)).collect();
    assemble(group, q, tau, pres, images_g, images_phi, images_hat, psi)
}

#[allow(clippy::too_many_arguments)]
fn assemble<T: Int>(
    group: &PcPresentation<T>,
    q: u64,
    tau: TauPresentation<T>,
    pres: PcPresentation<T>,
    images_g: Vec<ExponentVector<T>>,
    images_phi: Vec<ExponentVector<T>>,
    images_hat: Vec<ExponentVector<T>>,
    psi: Vec<ExponentVector<T>>,
) -> Result<NuContext<T>> {
    let n = group.ngens();
    let parent = Arc::new(pres.clone());
    let mut ups = Vec::new();
    for gi in &images_g {
        for pj in &images_phi {
            ups.push(pres.commutator(gi, pj)?);
        }
    }
    ups.extend(images_hat.iter().cloned());
    let upsilon = InducedSequence::new(parent.clone(), &ups)?;
    let mut dg = Vec::new();
    for i in 0..n {
        dg.push(pres.commutator(&images_g[i], &images_phi[i])?);
        for j in i + 1..n {
            let a = pres.commutator(&images_g[i], &images_phi[j])?;
            let b = pres.commutator(&images_g[j], &images_phi[i])?;
            dg.push(pres.mul(&a, &b)?);
        }
    }
    let delta = InducedSequence::new(parent, &dg)?;
    let mut tensor_pres = upsilon.presentation_named(depth_names(&upsilon))?;
    tensor_pres.set_name(format!("{}_tensor{}_{}", group.name(), q, group.name()));
    let nu = NuContext {
        group: group.clone(),
        q,
        tau,
        pres,
        images_g,
        images_phi,
        images_hat,
        upsilon,
        tensor_pres,
        delta,
        psi,
    };
    nu.verify()?;
    Ok(nu)
}

impl<T: Int> NuContext<T> {
    /// `ψ: ν^q(G) -> τ^q(G)`.
    pub fn psi(&self, x: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        let t = &self.tau.pres;
        let mut acc = t.identity();
        for (k, e) in x.0.iter().enumerate() {
            if !e.is_zero() {
                acc = t.mul(&acc, &t.pow(&self.psi[k], e)?)?;
            }
        }
        Ok(acc)
    }

    /// `ρ: Υ^q(G) -> G`, sending `g ⊗ h` to `[g, h]` and `k̂` to `k^q`.
    pub fn rho(&self, x: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        if !self.upsilon.contains(x)? {
            return Err(Error::Precondition(
                "element outside the tensor subgroup".into(),
            ));
        }
        let y = self.psi(x)?;
        let n = self.group.ngens();
        if !y.supported_from(2 * n) {
            return Err(Error::Verification(
                "psi maps the tensor square outside the wedge".into(),
            ));
        }
        self.tau.ctx.project(&y.0[2 * n..])
    }

    /// `g_i ⊗ g_j = [g_i, g_j^φ]`.
    pub fn tensor(&self, i: usize, j: usize) -> Result<ExponentVector<T>> {
        self.pres.commutator(&self.images_g[i], &self.images_phi[j])
    }

    /// `g ⊗ h = [g, h^φ]` for elements of `G`.
    pub fn tensor_of(
        &self,
        g: &ExponentVector<T>,
        h: &ExponentVector<T>,
    ) -> Result<ExponentVector<T>> {
        self.pres.commutator(&self.embed_g(g)?, &self.embed_phi(h)?)
    }

    /// `k̂` for `k ∈ G`, via the same expansion as the relator instances.
    pub fn hat_of(&self, k: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        if self.q == 0 {
            return Ok(self.pres.identity());
        }
        let x = HatExpander {
            g: &self.group,
            q: self.q as i64,
        };
        self.eval(&x.hat(k)?)
    }

    pub fn embed_g(&self, g: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        self.eval(
            &HatExpander {
                g: &self.group,
                q: 0,
            }
            .g(g),
        )
    }

    pub fn embed_phi(&self, g: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        self.eval(
            &HatExpander {
                g: &self.group,
                q: 0,
            }
            .phi(g),
        )
    }

    /// Evaluates an expression over [`NuAtom`] in `ν^q(G)`.
    pub fn eval(&self, e: &Expr<NuAtom>) -> Result<ExponentVector<T>> {
        e.eval(&self.pres, &mut |a: &NuAtom| match *a {
            NuAtom::G(i) => Ok(self.images_g[i].clone()),
            NuAtom::Phi(i) => Ok(self.images_phi[i].clone()),
            NuAtom::Hat(i) => self
                .images_hat
                .get(i)
                .cloned()
                .ok_or_else(|| Error::Precondition("hats are undefined for q = 0".into())),
        })
    }

    fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Verification(m.to_string()));
        let p = &self.pres;
        for d in self.delta.members() {
            for k in 0..p.ngens() {
                if !p.commutator(d, &p.generator(k))?.is_identity() {
                    return fail("diagonal is not central");
                }
            }
            if !self.psi(d)?.is_identity() {
                return fail("diagonal is not in the kernel of psi");
            }
        }
        let w = &self.tau.ctx.w;
        let g_order = self.group.is_finite().then(|| {
            (0..self.group.ngens())
                .map(|i| self.group.rel_order(i).cloned().unwrap_or_else(T::one))
                .fold(T::one(), |a, b| a * b)
        });
        match (self.upsilon.order(), self.delta.order(), w.order()) {
            (Some(u), Some(d), Some(wo)) => {
                if u != d * wo {
                    return fail("|tensor| != |diagonal| |wedge|");
                }
            }
            _ => {
                if hirsch(&self.upsilon) != hirsch(&self.delta) + hirsch(w) {
                    return fail("hirsch(tensor) != hirsch(diagonal) + hirsch(wedge)");
                }
            }
        }
        let nu = InducedSequence::whole(Arc::new(p.clone()));
        match (nu.order(), g_order, self.upsilon.order()) {
            (Some(v), Some(g), Some(u)) => {
                if v != g.clone() * g * u {
                    return fail("|nu| != |G|^2 |tensor|");
                }
            }
            (None, _, _) => {
                let hg = (0..self.group.ngens())
                    .filter(|&i| !self.group.is_finite_gen(i))
                    .count();
                if hirsch(&nu) != 2 * hg + hirsch(&self.upsilon) {
                    return fail("hirsch(nu) != 2 hirsch(G) + hirsch(tensor)");
                }
            }
            _ => return fail("finite tensor square inside an infinite nu or vice versa"),
        }
        Ok(())
    }
}

pub fn tensor_square<T: Int>(nu: &NuContext<T>) -> PcPresentation<T> {
    nu.tensor_pres.clone()
}

pub fn diagonal<T: Int>(nu: &NuContext<T>) -> Result<PcPresentation<T>> {
    let mut p = nu.delta.presentation_named(depth_names(&nu.delta))?;
    p.set_name(format!("Delta{}_{}", nu.q, nu.group.name()));
    Ok(p)
}

pub fn rho<T: Int>(nu: &NuContext<T>, x: &ExponentVector<T>) -> Result<ExponentVector<T>> {
    nu.rho(x)
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

    fn cyclic(n: i64) -> PcPresentation<i64> {
        parse_presentation(&format!("gens g\npow g^{n} := id\n")).unwrap()
    }

    #[test]
    fn tau_sizes() {
        assert_eq!(build_tau(&s3(), 2).unwrap().pres.ngens(), 6);
        assert_eq!(build_tau(&dinf(), 2).unwrap().pres.ngens(), 7);
        let t = build_tau(&PcPresentation::<i64>::trivial(), 2).unwrap();
        assert_eq!(t.pres.ngens(), 0);
    }

    #[test]
    fn instance_counts() {
        let n = 2;
        let count = |q| nu_relator_instances(&s3(), q).unwrap().len();
        assert_eq!(count(0), 2 * n * n * n);
        // one extra RR4 instance for g2, whose relative order exceeds 2
        assert_eq!(
            count(2),
            2 * n * n * n + n * n * 2 + n * n * n + n * n + n * (n - 1) / 2 + n * n + 1
        );
        let c2 = nu_relator_instances(&cyclic(2), 1).unwrap();
        assert_eq!(
            c2.iter().filter(|i| i.family == NuFamily::Rr4Power).count(),
            0
        );
        let inf = nu_relator_instances(&dinf(), 0).unwrap();
        assert_eq!(
            inf.iter()
                .filter(|i| i.family == NuFamily::NuInverse)
                .count(),
            2 * n * n
        );
    }

    #[test]
    fn nu_s3() {
        let nu = build_nu(&s3(), 2).unwrap();
        assert_eq!(nu.upsilon.order(), Some(12));
        assert!(nu.tensor_pres.is_abelian().unwrap());
        assert_eq!(nu.delta.order(), Some(2));
        let t = nu.tensor(0, 1).unwrap();
        assert_eq!(nu.rho(&t).unwrap().0, vec![0, 2]);
        assert_eq!(nu.rho(&nu.images_hat[1]).unwrap().0, vec![0, 2]);
    }

    #[test]
    fn nu_small_cyclic() {
        let nu = build_nu(&cyclic(2), 0).unwrap();
        assert_eq!(nu.upsilon.order(), Some(2));
        assert_eq!(nu.delta.order(), Some(2));
        let a = build_nu(&cyclic(3), 2).unwrap();
        let b = build_nu_qperfect(&cyclic(3), 2).unwrap();
        assert_eq!(a.upsilon.order(), b.upsilon.order());
        assert!(b.delta.is_empty());
        assert!(matches!(
            build_nu_qperfect(&s3(), 2),
            Err(Error::NotQPerfect(2))
        ));
    }

    #[test]
    fn nu_dinf() {
        let nu = build_nu(&dinf(), 3).unwrap();
        assert_eq!(hirsch(&nu.upsilon), 1);
        assert!(!nu.tensor_pres.is_abelian().unwrap());
    }
}
