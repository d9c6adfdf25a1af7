use std::fmt;

use super::{ExponentVector, PcPresentation, Word};
use crate::{Int, Result};

/// The overlap families of the standard consistency test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OverlapKind {
    /// `(g_k g_j) g_i = g_k (g_j g_i)` for `k > j > i`.
    Triple,
    /// `(g_j^{e_j}) g_i = g_j^{e_j-1} (g_j g_i)` for `j > i`, `j` finite.
    PowerConjugated,
    /// `g_j (g_i^{e_i}) = (g_j g_i) g_i^{e_i-1}` for `j > i`, `i` finite.
    ConjugatePower,
    /// `(g_i^{e_i}) g_i = g_i (g_i^{e_i})` for finite `i`.
    PowerPower,
    /// `g_j = (g_j g_i^{-1}) g_i` for `j > i`, `i` infinite.
    InverseLeft,
    /// `g_j = (g_j g_i) g_i^{-1}` for `j > i`, `i` infinite.
    InverseRight,
    /// `(g_k^a g_j^b) g_i^c = g_k^a (g_j^b g_i^c)` with some negative sign on
    /// an infinite generator.
    TripleInverse,
}

impl fmt::Display for OverlapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OverlapKind::Triple => "triple",
            OverlapKind::PowerConjugated => "power-conjugate",
            OverlapKind::ConjugatePower => "conjugate-power",
            OverlapKind::PowerPower => "power-power",
            OverlapKind::InverseLeft => "inverse-left",
            OverlapKind::InverseRight => "inverse-right",
            OverlapKind::TripleInverse => "triple-inverse",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy<T> {
    pub kind: OverlapKind,
    /// Generator indices of the overlap, largest first.
    pub indices: Vec<usize>,
    pub left: ExponentVector<T>,
    pub right: ExponentVector<T>,
    /// Normal form of `left^{-1} right`; meaningful only when the
    /// presentation minus this overlap defines a group.
    pub difference: ExponentVector<T>,
}

/// Failing overlaps; empty iff the presentation is consistent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistencyReport<T> {
    pub discrepancies: Vec<Discrepancy<T>>,
}

impl<T: Int> ConsistencyReport<T> {
    pub fn is_consistent(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn len(&self) -> usize {
        self.discrepancies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn render(&self, pres: &PcPresentation<T>) -> String {
        let mut out = String::new();
        for d in &self.discrepancies {
            let idx: Vec<&str> = d
                .indices
                .iter()
                .map(|i| pres.names()[*i].as_str())
                .collect();
            out.push_str(&format!(
                "{} ({}): {} != {}; difference {}\n",
                d.kind,
                idx.join(","),
                d.left.to_word().display_with(pres.names()),
                d.right.to_word().display_with(pres.names()),
                d.difference.to_word().display_with(pres.names()),
            ));
        }
        out
    }
}

impl<T: Int> PcPresentation<T> {
    pub fn consistency_report(&self) -> Result<ConsistencyReport<T>> {
        self.consistency_report_within(self.ngens())
    }

    pub fn is_consistent(&self) -> Result<bool> {
        Ok(self.consistency_report()?.is_consistent())
    }

    /// Runs only the overlaps among generators `0..limit`. Overlaps with a
    /// central trailing generator are trivially satisfied, so covers only
    /// test their base generators.
    pub fn consistency_report_within(&self, limit: usize) -> Result<ConsistencyReport<T>> {
        let mut out = Vec::new();
        let mut record = |kind,
                          indices: Vec<usize>,
                          left: ExponentVector<T>,
                          right: ExponentVector<T>|
         -> Result<()> {
            if left != right {
                let difference = self.mul(&self.inv(&left)?, &right)?;
                out.push(Discrepancy {
                    kind,
                    indices,
                    left,
                    right,
                    difference,
                });
            }
            Ok(())
        };
        let gen = |i: usize| self.generator(i);
        let pair =
            |j: usize, i: usize| self.collect(&Word::from_letters([(j, T::one()), (i, T::one())]));
        for k in 0..limit {
            for j in 0..k {
                for i in 0..j {
                    let left = self.mul(&pair(k, j)?, &gen(i))?;
                    let right = self.mul_word(&gen(k), &pair(j, i)?.to_word())?;
                    record(OverlapKind::Triple, vec![k, j, i], left, right)?;
                    for (a, b, c) in self.signs(k, j, i) {
                        let kj =
                            self.collect(&Word::from_letters([(k, a.clone()), (j, b.clone())]))?;
                        let left = self.mul_word(&kj, &Word::gen_pow(i, c.clone()))?;
                        let ji = self.collect(&Word::from_letters([(j, b), (i, c)]))?;
                        let right =
                            self.mul_word(&self.collect(&Word::gen_pow(k, a))?, &ji.to_word())?;
                        record(OverlapKind::TripleInverse, vec![k, j, i], left, right)?;
                    }
                }
            }
        }
        for j in 0..limit {
            for i in 0..j {
                if let Some(e) = self.rel_order(j) {
                    let left = self.mul(&self.collect(self.power_rhs(j))?, &gen(i))?;
                    let mut base = self.identity();
                    base.0[j] = e.clone() - T::one();
                    let right = self.mul_word(&base, &pair(j, i)?.to_word())?;
                    record(OverlapKind::PowerConjugated, vec![j, i], left, right)?;
                }
                if let Some(e) = self.rel_order(i) {
                    let left = self.mul_word(&gen(j), self.power_rhs(i))?;
                    let right =
                        self.mul_word(&pair(j, i)?, &Word::gen_pow(i, e.clone() - T::one()))?;
                    record(OverlapKind::ConjugatePower, vec![j, i], left, right)?;
                } else {
                    let ji = self.collect(&Word::from_letters([(j, T::one()), (i, -T::one())]))?;
                    let right = self.mul(&ji, &gen(i))?;
                    record(OverlapKind::InverseLeft, vec![j, i], gen(j), right)?;
                    let right = self.mul_word(&pair(j, i)?, &Word::gen_pow(i, -T::one()))?;
                    record(OverlapKind::InverseRight, vec![j, i], gen(j), right)?;
                }
            }
        }
        for i in 0..limit {
            if self.rel_order(i).is_some() {
                let left = self.mul(&self.collect(self.power_rhs(i))?, &gen(i))?;
                let right = self.mul_word(&gen(i), self.power_rhs(i))?;
                record(OverlapKind::PowerPower, vec![i], left, right)?;
            }
        }
        Ok(ConsistencyReport { discrepancies: out })
    }

    /// Sign patterns for the inverse triple overlaps: every combination where
    /// only infinite generators are inverted, excluding all-positive.
    fn signs(&self, k: usize, j: usize, i: usize) -> Vec<(T, T, T)> {
        let opts = |g: usize| {
            if self.is_finite_gen(g) {
                vec![T::one()]
            } else {
                vec![T::one(), -T::one()]
            }
        };
        let mut out = Vec::new();
        for a in opts(k) {
            for b in opts(j) {
                for c in opts(i) {
                    if a.is_negative() || b.is_negative() || c.is_negative() {
                        out.push((a.clone(), b.clone(), c));
                    }
                }
            }
        }
        out
    }
}
