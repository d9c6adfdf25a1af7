//! Brute-force oracles for tests: element enumeration with a multiplication
//! table, centers by definition, and closed formulas for abelian tensor
//! products and cyclic wedges.

use std::collections::{BTreeMap, HashMap};

use crate::pc::{ExponentVector, PcPresentation};
use crate::{Error, Int, Result};

pub const ENUMERATION_LIMIT: usize = 100_000;
/// Orders up to this size get a precomputed table; larger ones multiply on
/// demand.
pub const TABLE_LIMIT: usize = 2048;

#[derive(Clone, Debug)]
pub struct MulTable<T> {
    pub pres: PcPresentation<T>,
    pub elements: Vec<ExponentVector<T>>,
    index: HashMap<ExponentVector<T>, usize>,
    table: Option<Vec<u32>>,
}

pub fn enumerate<T: Int>(pres: &PcPresentation<T>) -> Result<MulTable<T>> {
    let mut size: usize = 1;
    let mut ranges = Vec::new();
    for i in 0..pres.ngens() {
        let e = pres
            .rel_order(i)
            .and_then(|e| e.to_usize())
            .ok_or_else(|| Error::TooLarge("infinite group".into()))?;
        size = size.saturating_mul(e);
        if size > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!(
                "more than {ENUMERATION_LIMIT} elements"
            )));
        }
        ranges.push(e);
    }
    let mut elements = Vec::with_capacity(size);
    for mut k in 0..size {
        let mut v = vec![T::zero(); ranges.len()];
        for i in (0..ranges.len()).rev() {
            v[i] = T::from_usize(k % ranges[i]).expect("small exponent");
            k /= ranges[i];
        }
        elements.push(ExponentVector(v));
    }
    let index: HashMap<ExponentVector<T>, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut t = MulTable {
        pres: pres.clone(),
        elements,
        index,
        table: None,
    };
    if size <= TABLE_LIMIT {
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                table.push(t.multiply(a, b)? as u32);
            }
        }
        t.table = Some(table);
    }
    Ok(t)
}

impl<T: Int> MulTable<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, v: &ExponentVector<T>) -> Option<usize> {
        self.index.get(v).copied()
    }

    fn multiply(&self, a: usize, b: usize) -> Result<usize> {
        let w = self.elements[a]
            .to_word()
            .concat(&self.elements[b].to_word());
        let v = self.pres.collect(&w)?;
        self.index_of(&v)
            .ok_or_else(|| Error::Verification("product outside the enumerated set".into()))
    }

    pub fn product(&self, a: usize, b: usize) -> Result<usize> {
        match &self.table {
            Some(t) => Ok(t[a * self.order() + b] as usize),
            None => self.multiply(a, b),
        }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn is_abelian(&self) -> Result<bool> {
        for a in 0..self.order() {
            for b in 0..a {
                if self.product(a, b)? != self.product(b, a)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks associativity on the given triples and existence of inverses.
    pub fn spot_check(&self, triples: &[(usize, usize, usize)]) -> Result<bool> {
        for &(a, b, c) in triples {
            if self.product(self.product(a, b)?, c)? != self.product(a, self.product(b, c)?)? {
                return Ok(false);
            }
        }
        for a in 0..self.order() {
            let mut found = false;
            for b in 0..self.order() {
                if self.product(a, b)? == 0 {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn element_order(&self, a: usize) -> Result<usize> {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.product(x, a)?;
            k += 1;
        }
        Ok(k)
    }
}

/// Elements commuting with every element.
pub fn brute_center<T: Int>(table: &MulTable<T>) -> Result<Vec<ExponentVector<T>>> {
    let mut out = Vec::new();
    'outer: for a in 0..table.order() {
        for b in 0..table.order() {
            if table.product(a, b)? != table.product(b, a)? {
                continue 'outer;
            }
        }
        out.push(table.elements[a].clone());
    }
    Ok(out)
}

fn prime_powers(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Invariant factors (divisibility chain, free rank as trailing zeros) of
/// `⊕ C_{d}` over the given cyclic orders, `0` meaning infinite cyclic.
pub fn normalize_cyclic(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    let mut free = 0;
    for &d in orders {
        if d == 0 {
            free += 1;
            continue;
        }
        for (p, k) in prime_powers(d) {
            by_prime.entry(p).or_default().push(k);
        }
    }
    let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; width];
    for (p, mut ks) in by_prime {
        ks.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, k) in ks.into_iter().enumerate() {
            out[width - 1 - slot] *= p.pow(k);
        }
    }
    out.extend(std::iter::repeat_n(0, free));
    out
}

fn gcd0(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd0(b, a % b)
    }
}

/// `A ⊗_Z B` for abelian groups given by invariant factors.
pub fn abelian_tensor(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut parts = Vec::new();
    for &x in a {
        for &y in b {
            parts.push(gcd0(x, y));
        }
    }
    normalize_cyclic(&parts)
        .into_iter()
        .filter(|&d| d != 1)
        .collect()
}

/// `C_n ∧^q C_n` for `q ≥ 1`, which is `qZ / nqZ`.
pub fn cyclic_wedge(n: u64, q: u64) -> Vec<u64> {
    assert!(n >= 1 && q >= 1);
    if n == 1 {
        Vec::new()
    } else {
        vec![n]
    }
}
