use std::fmt;

use crate::Int;

/// A group word: `(generator index, exponent)` letters with zero-based indices.
///
/// Adjacent letters on the same generator are always merged and zero
/// exponents dropped, so a `Word` is freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word<T> {
    letters: Vec<(usize, T)>,
}

impl<T: Int> Default for Word<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Int> Word<T> {
    pub fn identity() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn gen(i: usize) -> Self {
        Self::gen_pow(i, T::one())
    }

    pub fn gen_pow(i: usize, e: T) -> Self {
        Self::from_letters([(i, e)])
    }

    pub fn from_letters<I: IntoIterator<Item = (usize, T)>>(letters: I) -> Self {
        let mut w = Self::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    /// Appends `g^e`, merging with the last letter when possible.
    pub fn push(&mut self, g: usize, e: T) {
        if e.is_zero() {
            return;
        }
        if let Some((last, le)) = self.letters.last_mut() {
            if *last == g {
                *le = le.clone() + e;
                if le.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn letters(&self) -> &[(usize, T)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self::from_letters(self.letters.iter().rev().map(|(g, e)| (*g, -e.clone())))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for (g, e) in &other.letters {
            w.push(*g, e.clone());
        }
        w
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Self::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Renumbers every generator through `f`.
    pub fn map_gens(&self, mut f: impl FnMut(usize) -> usize) -> Self {
        Self::from_letters(self.letters.iter().map(|(g, e)| (f(*g), e.clone())))
    }

    pub fn shift(&self, offset: usize) -> Self {
        self.map_gens(|g| g + offset)
    }

    pub fn min_gen(&self) -> Option<usize> {
        self.letters.iter().map(|(g, _)| *g).min()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|(g, _)| *g).max()
    }

    /// Single-letter words are pushed as one stack frame by the collector.
    pub(crate) fn as_single_letter(&self) -> Option<&(usize, T)> {
        match self.letters.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "id".to_string();
        }
        self.letters
            .iter()
            .map(|(g, e)| {
                let name = names
                    .get(*g)
                    .cloned()
                    .unwrap_or_else(|| format!("g{}", g + 1));
                if e.is_one() {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl<T: Int> fmt::Display for Word<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// Normal form `g_1^{a_1} ... g_n^{a_n}` of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector<T>(pub Vec<T>);

impl<T: Int> ExponentVector<T> {
    pub fn identity(n: usize) -> Self {
        ExponentVector(vec![T::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::identity(n);
        v.0[i] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Index of the first nonzero exponent.
    pub fn depth(&self) -> Option<usize> {
        self.0.iter().position(|a| !a.is_zero())
    }

    pub fn leading(&self) -> Option<&T> {
        self.depth().map(|d| &self.0[d])
    }

    pub fn to_word(&self) -> Word<T> {
        Word::from_letters(self.0.iter().cloned().enumerate())
    }

    /// True when every exponent below `from` is zero.
    pub fn supported_from(&self, from: usize) -> bool {
        self.0[..from.min(self.0.len())].iter().all(|a| a.is_zero())
    }
}

impl<T> std::ops::Index<usize> for ExponentVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w: Word<i64> = Word::from_letters([(0, 2), (0, -2), (1, 1), (1, 2), (2, 0)]);
        assert_eq!(w.letters(), &[(1, 3)]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.pow(-2).letters(), &[(1, -6)]);
    }

    #[test]
    fn depth_and_leading() {
        let v = ExponentVector(vec![0i64, 0, 3, 1]);
        assert_eq!(v.depth(), Some(2));
        assert_eq!(v.leading(), Some(&3));
        assert!(ExponentVector::<i64>::identity(3).depth().is_none());
        assert_eq!(v.to_word().letters(), &[(2, 3), (3, 1)]);
    }
}
