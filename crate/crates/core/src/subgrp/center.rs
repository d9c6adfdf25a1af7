//! Centers by recursion down the polycyclic series.
//!
//! If the trailing generators `g_s, .., g_n` are all central, the center is
//! the preimage of `Z(G/T)` cut down by a linear condition: `x -> [x, g_j]`
//! is additive into the central `T` on that preimage. Otherwise the last
//! generator spans a normal subgroup `N` and the center is read off from a
//! finite `Z(G/N)` by solving `a(1 - eps_j) = delta_j(b)` per element `b`.

use std::sync::Arc;

use super::InducedSequence;
use crate::pc::{ExponentVector, PcPresentation};
use crate::zlinalg::{congruence_kernel, IntMatrix};
use crate::{Error, Int, Result};

/// Largest number of center candidates examined in the non-central case.
const CANDIDATE_LIMIT: usize = 200_000;

fn is_central_gen<T: Int>(p: &PcPresentation<T>, k: usize) -> Result<bool> {
    for j in 0..p.ngens() {
        if j == k {
            continue;
        }
        let (a, b) = if j < k { (k, j) } else { (j, k) };
        if p.collect(p.conj_rhs(a, b))? != p.generator(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lift<T: Int>(v: &ExponentVector<T>, n: usize) -> ExponentVector<T> {
    let mut out = v.0.clone();
    out.resize(n, T::zero());
    ExponentVector(out)
}

/// The center of a consistent presentation.
///
/// Returns [`Error::Unsupported`] when a quotient met on the way has an
/// infinite center above a non-central layer.
pub fn center<T: Int>(pres: &PcPresentation<T>) -> Result<InducedSequence<T>> {
    let parent = Arc::new(pres.clone());
    let gens = center_gens(pres)?;
    InducedSequence::new(parent, &gens)
}

fn center_gens<T: Int>(p: &PcPresentation<T>) -> Result<Vec<ExponentVector<T>>> {
    let n = p.ngens();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut s = n;
    while s > 0 && is_central_gen(p, s - 1)? {
        s -= 1;
    }
    if s == 0 {
        return Ok((0..n).map(|i| p.generator(i)).collect());
    }
    if s < n {
        central_bottom(p, s)
    } else {
        normal_bottom(p)
    }
}

/// `g_s..` central: lift `Z(G/T)` and keep the kernel of the commutator map.
fn central_bottom<T: Int>(p: &PcPresentation<T>, s: usize) -> Result<Vec<ExponentVector<T>>> {
    let n = p.ngens();
    let m = n - s;
    let q = p.truncate(s)?;
    let zq = center(&q)?;
    let lifts: Vec<ExponentVector<T>> = zq.members().iter().map(|z| lift(z, n)).collect();
    // relations of T = Z^m / L
    let mut rel = Vec::new();
    for k in s..n {
        if let Some(e) = p.rel_order(k) {
            let mut row = vec![T::zero(); m];
            row[k - s] = e.clone();
            let rhs = p.collect(p.power_rhs(k))?;
            for c in s..n {
                row[c - s] = row[c - s].clone() - rhs.0[c].clone();
            }
            rel.push(row);
        }
    }
    let mut a = IntMatrix::zeros(0, s * m);
    for z in &lifts {
        let mut row = Vec::with_capacity(s * m);
        for j in 0..s {
            let c = p.commutator(z, &p.generator(j))?;
            if !c.supported_from(s) {
                return Err(Error::Verification(
                    "lifted central element leaves the central layer".into(),
                ));
            }
            row.extend_from_slice(&c.0[s..]);
        }
        a.push_row(row);
    }
    let mut r = IntMatrix::zeros(0, s * m);
    for j in 0..s {
        for row in &rel {
            let mut full = vec![T::zero(); s * m];
            full[j * m..(j + 1) * m].clone_from_slice(row);
            r.push_row(full);
        }
    }
    let mut out = Vec::new();
    if !lifts.is_empty() {
        let ker = congruence_kernel(&a, &r);
        for c in ker.rows() {
            let mut x = p.identity();
            for (z, ci) in lifts.iter().zip(c) {
                if !ci.is_zero() {
                    x = p.mul(&x, &p.pow(z, ci)?)?;
                }
            }
            out.push(x);
        }
    }
    out.extend((s..n).map(|k| p.generator(k)));
    Ok(out)
}

/// `N = <g_n>` is normal but not central; `Z(G/N)` must be finite.
fn normal_bottom<T: Int>(p: &PcPresentation<T>) -> Result<Vec<ExponentVector<T>>> {
    let n = p.ngens();
    let last = n - 1;
    let q = p.truncate(last)?;
    let zq = center(&q)?;
    let order = zq.order().and_then(|o| o.to_usize()).ok_or_else(|| {
        Error::Unsupported(
            "center computation needs a finite center above a non-central layer".into(),
        )
    })?;
    let e = p.rel_order(last).cloned();
    let span = match &e {
        Some(e) => e.to_usize().unwrap_or(usize::MAX),
        None => 1,
    };
    if order.saturating_mul(span) > CANDIDATE_LIMIT {
        return Err(Error::Unsupported(format!(
            "center search over {order} x {span} candidates exceeds the limit"
        )));
    }
    // x = b g_n^a commutes with g_j iff a (1 - eps_j) = delta_j(b)
    let mut eps = Vec::new();
    for j in 0..last {
        let img = p.collect(p.conj_rhs(last, j))?;
        eps.push(img.0[last].clone());
    }
    let mut out = Vec::new();
    for b in zq.elements()? {
        let bt = lift(&b, n);
        let mut delta = Vec::with_capacity(n);
        for j in 0..n {
            let c = p.commutator(&bt, &p.generator(j))?;
            debug_assert!(c.supported_from(last));
            delta.push(c.0[last].clone());
        }
        // commuting with g_n itself needs delta_n = 0
        if !delta[last].is_zero() {
            continue;
        }
        let ok = |a: &T| {
            (0..last).all(|j| {
                let lhs = a.clone() * (T::one() - eps[j].clone()) + delta[j].clone();
                match &e {
                    Some(e) => lhs.mod_floor(e).is_zero(),
                    None => lhs.is_zero(),
                }
            })
        };
        // [b g^a, g_j] = [b, g_j]^{g^a} [g^a, g_j]; both lie in N, so
        // the condition above is a(eps_j - 1) = -delta_j with delta_j from [b, g_j]
        let sols: Vec<T> = match &e {
            Some(e) => {
                let mut v = Vec::new();
                let mut a = T::zero();
                while &a < e {
                    if ok(&a) {
                        v.push(a.clone());
                    }
                    a = a + T::one();
                }
                v
            }
            None => {
                // some eps_j = -1 since g_n is not central; it pins a down
                let j = (0..last).find(|&j| eps[j] != T::one());
                match j {
                    Some(j) => {
                        let den = eps[j].clone() - T::one();
                        if delta[j].is_multiple_of(&den) {
                            let a = delta[j].clone() / den;
                            if ok(&a) {
                                vec![a]
                            } else {
                                vec![]
                            }
                        } else {
                            vec![]
                        }
                    }
                    None => {
                        return Err(Error::Verification(
                            "non-central generator acts trivially".into(),
                        ));
                    }
                }
            }
        };
        for a in sols {
            let mut x = bt.clone();
            x.0[last] = a;
            out.push(p.mul(&bt, &p.pow(&p.generator(last), &x.0[last])?)?);
        }
    }
    Ok(out)
}
