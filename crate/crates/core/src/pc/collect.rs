//! Collection from the left.
//!
//! The running normal form is an exponent vector. To multiply it by `g_i^s`
//! (`s = ±1`) the part of the vector beyond `i` is lifted off, the exponent
//! of `g_i` is adjusted, and the conjugate of the lifted suffix by `g_i^s` is
//! pushed back onto the work stack. When the suffix is already trivial a
//! whole power is absorbed at once.

use super::{ExponentVector, PcPresentation, Word};
use crate::{Error, Int, Result};

impl<T: Int> PcPresentation<T> {
    /// Normal form of `w`.
    pub fn collect(&self, w: &Word<T>) -> Result<ExponentVector<T>> {
        let mut v = self.identity();
        self.mul_word_into(&mut v, w)?;
        Ok(v)
    }

    pub fn mul(&self, a: &ExponentVector<T>, b: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        let mut v = a.clone();
        self.mul_word_into(&mut v, &b.to_word())?;
        Ok(v)
    }

    pub fn mul_word(&self, a: &ExponentVector<T>, w: &Word<T>) -> Result<ExponentVector<T>> {
        let mut v = a.clone();
        self.mul_word_into(&mut v, w)?;
        Ok(v)
    }

    pub fn inv(&self, a: &ExponentVector<T>) -> Result<ExponentVector<T>> {
        self.collect(&a.to_word().inverse())
    }

    pub fn pow(&self, a: &ExponentVector<T>, k: &T) -> Result<ExponentVector<T>> {
        let mut base = if k.is_negative() {
            self.inv(a)?
        } else {
            a.clone()
        };
        let mut k = k.abs();
        let two = T::one() + T::one();
        let mut acc = self.identity();
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.mul(&acc, &base)?;
            }
            k = k / two.clone();
            if !k.is_zero() {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `b^{-1} a b`.
    pub fn conjugate(
        &self,
        a: &ExponentVector<T>,
        b: &ExponentVector<T>,
    ) -> Result<ExponentVector<T>> {
        let left = self.mul(&self.inv(b)?, a)?;
        self.mul(&left, b)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn commutator(
        &self,
        a: &ExponentVector<T>,
        b: &ExponentVector<T>,
    ) -> Result<ExponentVector<T>> {
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        self.mul(&self.inv(&ba)?, &ab)
    }

    /// Multiplies the normal form `v` on the right by `w`, in place.
    pub fn mul_word_into(&self, v: &mut ExponentVector<T>, w: &Word<T>) -> Result<()> {
        let n = self.ngens();
        if let Some(m) = w.max_gen() {
            if m >= n {
                return Err(Error::BadIndex { index: m, count: n });
            }
        }
        let mut stack: Vec<(usize, T)> = w.letters().iter().rev().cloned().collect();
        let mut steps = 0usize;
        while let Some((i, a)) = stack.pop() {
            steps += 1;
            if steps > self.budget {
                return Err(Error::CollectionBudget(self.budget));
            }
            if a.is_zero() {
                continue;
            }
            let suffix_trivial = v.0[i + 1..].iter().all(|x| x.is_zero());
            if suffix_trivial {
                let s = v.0[i].clone() + a;
                match &self.rel_orders[i] {
                    Some(e) => {
                        let (m, r) = s.div_mod_floor(e);
                        v.0[i] = r;
                        push_power(&mut stack, &self.powers[i], &m)?;
                    }
                    None => v.0[i] = s,
                }
                continue;
            }
            if let (Some(e), true) = (&self.rel_orders[i], a.is_negative()) {
                // g_i^a = g_i^r (g_i^e)^m with 0 <= r < e
                let (m, r) = a.div_mod_floor(e);
                push_power(&mut stack, &self.powers[i], &m)?;
                stack.push((i, r));
                continue;
            }
            let unit = if a.is_positive() { T::one() } else { -T::one() };
            let rest = a - unit.clone();
            if !rest.is_zero() {
                stack.push((i, rest));
            }
            let mut suffix: Vec<(usize, T)> = Vec::new();
            for k in i + 1..n {
                if !v.0[k].is_zero() {
                    suffix.push((k, std::mem::replace(&mut v.0[k], T::zero())));
                }
            }
            let mut overflow = false;
            if unit.is_positive() {
                let next = v.0[i].clone() + T::one();
                match &self.rel_orders[i] {
                    Some(e) if &next == e => {
                        v.0[i] = T::zero();
                        overflow = true;
                    }
                    _ => v.0[i] = next,
                }
            } else {
                v.0[i] = v.0[i].clone() - T::one();
            }
            for (k, ek) in suffix.into_iter().rev() {
                let image = if unit.is_positive() {
                    &self.conj[k][i]
                } else {
                    self.cinv[k][i].as_ref().ok_or_else(|| {
                        Error::Malformed(format!(
                            "missing inverse conjugate {}^{}",
                            self.names[k], self.names[i]
                        ))
                    })?
                };
                push_power(&mut stack, image, &ek)?;
            }
            if overflow {
                push_power(&mut stack, &self.powers[i], &T::one())?;
            }
        }
        Ok(())
    }
}

/// Schedules `w^m` so that it is processed next, left to right.
fn push_power<T: Int>(stack: &mut Vec<(usize, T)>, w: &Word<T>, m: &T) -> Result<()> {
    if m.is_zero() || w.is_empty() {
        return Ok(());
    }
    if let Some((g, e)) = w.as_single_letter() {
        stack.push((*g, e.clone() * m.clone()));
        return Ok(());
    }
    let reps = m.abs().to_usize().ok_or_else(|| {
        Error::Malformed(format!("power {m} of a long word is too large to expand"))
    })?;
    for _ in 0..reps {
        if m.is_positive() {
            stack.extend(w.letters().iter().rev().cloned());
        } else {
            stack.extend(w.letters().iter().map(|(g, e)| (*g, -e.clone())));
        }
    }
    Ok(())
}
