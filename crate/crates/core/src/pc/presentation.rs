use std::collections::BTreeMap;

use super::{ExponentVector, Word};
use crate::{Error, Int, Result};

/// Default step budget for a single collection.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// A polycyclic presentation on generators `g_0 .. g_{n-1}`.
///
/// Generator `i` either has a power relation `g_i^{e_i} = power_rhs(i)` or is
/// of infinite relative order. For every `j < i` there is a conjugate
/// `g_i^{g_j}`, and for infinite `g_j` also `g_i^{g_j^{-1}}`. Right-hand sides
/// only use generators after the rewritten pair, which is what makes
/// collection terminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation<T> {
    pub(crate) name: String,
    pub(crate) names: Vec<String>,
    pub(crate) rel_orders: Vec<Option<T>>,
    pub(crate) powers: Vec<Word<T>>,
    pub(crate) conj: Vec<Vec<Word<T>>>,
    pub(crate) cinv: Vec<Vec<Option<Word<T>>>>,
    pub(crate) tails: Vec<(usize, T)>,
    pub(crate) provenance: Vec<String>,
    pub(crate) budget: usize,
}

impl<T: Int> PcPresentation<T> {
    pub fn trivial() -> Self {
        PcBuilder::new(Vec::<String>::new())
            .build()
            .expect("empty presentation is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `Some(e_i)` for generators with a power relation.
    pub fn rel_order(&self, i: usize) -> Option<&T> {
        self.rel_orders[i].as_ref()
    }

    pub fn is_finite_gen(&self, i: usize) -> bool {
        self.rel_orders[i].is_some()
    }

    pub fn power_rhs(&self, i: usize) -> &Word<T> {
        &self.powers[i]
    }

    /// `g_i^{g_j}` for `j < i`.
    pub fn conj_rhs(&self, i: usize, j: usize) -> &Word<T> {
        &self.conj[i][j]
    }

    /// `g_i^{g_j^{-1}}` for `j < i` with `g_j` infinite.
    pub fn cinv_rhs(&self, i: usize, j: usize) -> Option<&Word<T>> {
        self.cinv[i][j].as_ref()
    }

    /// Tail generators with their orders (`0` for infinite), as metadata for
    /// serialization.
    pub fn tails(&self) -> &[(usize, T)] {
        &self.tails
    }

    pub fn set_tails(&mut self, tails: Vec<(usize, T)>) {
        self.tails = tails;
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Vec<String>) {
        self.provenance = provenance;
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.rel_orders.iter().all(|e| e.is_some())
    }

    pub fn identity(&self) -> ExponentVector<T> {
        ExponentVector::identity(self.ngens())
    }

    pub fn generator(&self, i: usize) -> ExponentVector<T> {
        ExponentVector::unit(self.ngens(), i)
    }

    /// True when every conjugation relation is trivial.
    pub fn is_abelian(&self) -> Result<bool> {
        for i in 0..self.ngens() {
            for j in 0..i {
                let c = self.collect(&self.conj[i][j])?;
                if c != self.generator(i) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Reopens the presentation for editing.
    pub fn to_builder(&self) -> PcBuilder<T> {
        let mut b = PcBuilder::new(self.names.clone()).name(self.name.clone());
        for i in 0..self.ngens() {
            if let Some(e) = &self.rel_orders[i] {
                b = b.power(i, e.clone(), self.powers[i].clone());
            }
            for j in 0..i {
                b = b.conj(i, j, self.conj[i][j].clone());
            }
        }
        b.tails = self.tails.clone();
        b.provenance = self.provenance.clone();
        b.budget = self.budget;
        b
    }

    /// The quotient by the normal subgroup generated by the trailing
    /// generators `from..n`.
    pub fn truncate(&self, from: usize) -> Result<Self> {
        let keep = |w: &Word<T>| {
            Word::from_letters(w.letters().iter().filter(|(g, _)| *g < from).cloned())
        };
        let mut b = PcBuilder::new(self.names[..from].to_vec()).name(self.name.clone());
        for i in 0..from {
            if let Some(e) = &self.rel_orders[i] {
                b = b.power(i, e.clone(), keep(&self.powers[i]));
            }
            for j in 0..i {
                b = b.conj(i, j, keep(&self.conj[i][j]));
            }
        }
        b.budget = self.budget;
        b.build()
    }

    /// Removes generators of relative order one by substituting their power
    /// relation. Exponents are re-read from normal forms, so the input should
    /// be consistent.
    pub fn eliminate_trivial_generators(&self) -> Result<Self> {
        let dead: Vec<bool> = self
            .rel_orders
            .iter()
            .map(|e| e.as_ref().is_some_and(|e| e.is_one()))
            .collect();
        if !dead.iter().any(|d| *d) {
            return Ok(self.clone());
        }
        let mut new_index = vec![usize::MAX; self.ngens()];
        let mut names = Vec::new();
        for i in 0..self.ngens() {
            if !dead[i] {
                new_index[i] = names.len();
                names.push(self.names[i].clone());
            }
        }
        let project = |w: &Word<T>| -> Result<Word<T>> {
            let v = self.collect(w)?;
            Ok(Word::from_letters(
                v.0.iter()
                    .enumerate()
                    .filter(|(g, _)| !dead[*g])
                    .map(|(g, e)| (new_index[g], e.clone())),
            ))
        };
        let mut b = PcBuilder::new(names).name(self.name.clone());
        for i in (0..self.ngens()).filter(|i| !dead[*i]) {
            if let Some(e) = &self.rel_orders[i] {
                b = b.power(new_index[i], e.clone(), project(&self.powers[i])?);
            }
            for j in (0..i).filter(|j| !dead[*j]) {
                b = b.conj(new_index[i], new_index[j], project(&self.conj[i][j])?);
            }
        }
        b.tails = self
            .tails
            .iter()
            .filter(|(g, _)| !dead[*g])
            .map(|(g, d)| (new_index[*g], d.clone()))
            .collect();
        if !self.provenance.is_empty() {
            b.provenance = (0..self.ngens())
                .filter(|i| !dead[*i])
                .map(|i| self.provenance[i].clone())
                .collect();
        }
        b.budget = self.budget;
        b.build()
    }
}

/// Incremental constructor for [`PcPresentation`]. Missing conjugation
/// relations default to commuting generators; missing inverse conjugates are
/// derived.
#[derive(Clone, Debug)]
pub struct PcBuilder<T> {
    name: String,
    names: Vec<String>,
    rel_orders: Vec<Option<T>>,
    powers: Vec<Word<T>>,
    conj: BTreeMap<(usize, usize), Word<T>>,
    cinv: BTreeMap<(usize, usize), Word<T>>,
    pub(crate) tails: Vec<(usize, T)>,
    pub(crate) provenance: Vec<String>,
    pub(crate) budget: usize,
}

impl<T: Int> PcBuilder<T> {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        PcBuilder {
            name: String::new(),
            names,
            rel_orders: vec![None; n],
            powers: vec![Word::identity(); n],
            conj: BTreeMap::new(),
            cinv: BTreeMap::new(),
            tails: Vec::new(),
            provenance: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// Builder with generators named `prefix1 .. prefixn`.
    pub fn with_count(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn power(mut self, i: usize, e: T, rhs: Word<T>) -> Self {
        self.rel_orders[i] = Some(e);
        self.powers[i] = rhs;
        self
    }

    pub fn conj(mut self, i: usize, j: usize, rhs: Word<T>) -> Self {
        self.conj.insert((i, j), rhs);
        self
    }

    pub fn cinv(mut self, i: usize, j: usize, rhs: Word<T>) -> Self {
        self.cinv.insert((i, j), rhs);
        self
    }

    pub fn has_power(&self, i: usize) -> bool {
        self.rel_orders[i].is_some()
    }

    pub fn has_conj(&self, i: usize, j: usize) -> bool {
        self.conj.contains_key(&(i, j))
    }

    pub fn has_cinv(&self, i: usize, j: usize) -> bool {
        self.cinv.contains_key(&(i, j))
    }

    pub fn tails(mut self, tails: Vec<(usize, T)>) -> Self {
        self.tails = tails;
        self
    }

    pub fn provenance(mut self, provenance: Vec<String>) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn check_word(&self, w: &Word<T>, above: usize, what: &str) -> Result<()> {
        let n = self.ngens();
        if let Some(m) = w.max_gen() {
            if m >= n {
                return Err(Error::BadIndex { index: m, count: n });
            }
        }
        if let Some(m) = w.min_gen() {
            if m <= above {
                return Err(Error::Malformed(format!(
                    "{what}: right-hand side uses {} but must use generators after {}",
                    self.names[m], self.names[above]
                )));
            }
        }
        Ok(())
    }

    /// Validates, fills defaults, derives inverse conjugates and removes
    /// generators of relative order one.
    pub fn build(self) -> Result<PcPresentation<T>> {
        self.build_unreduced()?.eliminate_trivial_generators()
    }

    /// Like [`build`](Self::build) but keeps generators of relative order one.
    pub(crate) fn build_unreduced(self) -> Result<PcPresentation<T>> {
        let n = self.ngens();
        for i in 0..n {
            if let Some(e) = &self.rel_orders[i] {
                if !e.is_positive() {
                    return Err(Error::Malformed(format!(
                        "relative order of {} must be positive",
                        self.names[i]
                    )));
                }
                self.check_word(&self.powers[i], i, &format!("power of {}", self.names[i]))?;
            }
        }
        let mut conj = vec![Vec::new(); n];
        for (i, row) in conj.iter_mut().enumerate() {
            for j in 0..i {
                let w = self
                    .conj
                    .get(&(i, j))
                    .cloned()
                    .unwrap_or_else(|| Word::gen(i));
                self.check_word(
                    &w,
                    j,
                    &format!("conjugate {}^{}", self.names[i], self.names[j]),
                )?;
                row.push(w);
            }
        }
        for &(i, j) in self.conj.keys() {
            if j >= i || i >= n {
                return Err(Error::Malformed(format!(
                    "conjugate ({i}, {j}) out of order"
                )));
            }
        }
        let mut cinv = vec![Vec::new(); n];
        for (i, row) in cinv.iter_mut().enumerate() {
            row.resize(i, None);
        }
        for (&(i, j), w) in &self.cinv {
            if j >= i || i >= n {
                return Err(Error::Malformed(format!(
                    "inverse conjugate ({i}, {j}) out of order"
                )));
            }
            if self.rel_orders[j].is_some() {
                return Err(Error::Malformed(format!(
                    "inverse conjugate by {} given but it has a power relation",
                    self.names[j]
                )));
            }
            self.check_word(
                w,
                j,
                &format!("inverse conjugate {}^{}", self.names[i], self.names[j]),
            )?;
            cinv[i][j] = Some(w.clone());
        }
        let mut provenance = self.provenance;
        if !provenance.is_empty() {
            provenance.resize(n, String::new());
        }
        let mut pres = PcPresentation {
            name: self.name,
            names: self.names,
            rel_orders: self.rel_orders,
            powers: self.powers,
            conj,
            cinv,
            tails: self.tails,
            provenance,
            budget: self.budget,
        };
        pres.complete_inverses()?;
        Ok(pres)
    }
}

impl<T: Int> PcPresentation<T> {
    /// Derives `g_i^{g_j^{-1}}` for infinite `g_j` wherever it is missing.
    ///
    /// Conjugation by `g_j` restricted to `<g_{j+1},..>` is inverted layer by
    /// layer; columns are filled from the bottom up so that every collection
    /// only needs inverse conjugates that already exist.
    fn complete_inverses(&mut self) -> Result<()> {
        let n = self.ngens();
        for j in (0..n).rev() {
            if self.rel_orders[j].is_some() {
                continue;
            }
            for i in j + 1..n {
                if self.rel_orders[i].as_ref().is_some_and(|e| e.is_one()) {
                    self.cinv[i][j] = Some(Word::gen(i));
                } else if self.cinv[i][j].is_none() {
                    let w = self.solve_preimage(j, &self.generator(i))?;
                    self.cinv[i][j] = Some(w.to_word());
                }
            }
        }
        Ok(())
    }

    /// Finds `x` with `x^{g_j} = target`, where `target` lies in `<g_{j+1},..>`.
    fn solve_preimage(&self, j: usize, target: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        let mut x = self.identity();
        let mut y = target.clone();
        let mut steps = 0usize;
        while let Some(d) = y.depth() {
            steps += 1;
            if steps > self.ngens() * 4 + 16 || d <= j {
                return Err(Error::Malformed(format!(
                    "cannot invert conjugation by {}",
                    self.names[j]
                )));
            }
            let image = self.collect(&self.conj[d][j])?;
            if image.depth() != Some(d) {
                return Err(Error::Malformed(format!(
                    "conjugate {}^{} does not start with {}",
                    self.names[d], self.names[j], self.names[d]
                )));
            }
            let m = image.0[d].clone();
            let c = y.0[d].clone();
            let a = match &self.rel_orders[d] {
                Some(e) => {
                    let inv = m.mod_inverse(e).ok_or_else(|| {
                        Error::Malformed(format!(
                            "conjugation by {} is not invertible on {}",
                            self.names[j], self.names[d]
                        ))
                    })?;
                    (c * inv).mod_floor(e)
                }
                None => {
                    if !m.abs().is_one() {
                        return Err(Error::Malformed(format!(
                            "conjugation by {} scales infinite {} by {m}",
                            self.names[j], self.names[d]
                        )));
                    }
                    c * m
                }
            };
            let step = self.pow(&image, &a)?;
            y = self.mul(&self.inv(&step)?, &y)?;
            x = self.mul(&x, &self.pow(&self.generator(d), &a)?)?;
        }
        Ok(x)
    }
}
