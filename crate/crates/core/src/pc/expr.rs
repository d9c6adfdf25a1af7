use super::{ExponentVector, PcPresentation, Word};
use crate::{Int, Result};

/// Group operations used to evaluate [`Expr`] trees.
pub trait GroupOps {
    type Elem: Clone;

    fn one(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn power(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        let base = if k < 0 { self.invert(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..k.unsigned_abs() {
            acc = self.op(&acc, &base)?;
        }
        Ok(acc)
    }
}

impl<T: Int> GroupOps for PcPresentation<T> {
    type Elem = ExponentVector<T>;

    fn one(&self) -> Self::Elem {
        self.identity()
    }

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.mul(a, b)
    }

    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.inv(a)
    }

    fn power(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        self.pow(a, &T::from_i64_exact(k))
    }
}

/// A word expression with products, inverses, integer powers, conjugates
/// `u^v = v^{-1} u v` and commutators `[u, v] = u^{-1} v^{-1} u v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr<A> {
    Id,
    Atom(A),
    Prod(Vec<Expr<A>>),
    Inv(Box<Expr<A>>),
    Pow(Box<Expr<A>>, i64),
    Conj(Box<Expr<A>>, Box<Expr<A>>),
    Comm(Box<Expr<A>>, Box<Expr<A>>),
}

impl<A: Clone> Expr<A> {
    pub fn atom(a: A) -> Self {
        Expr::Atom(a)
    }

    pub fn prod(items: impl IntoIterator<Item = Expr<A>>) -> Self {
        let items: Vec<_> = items
            .into_iter()
            .filter(|e| !matches!(e, Expr::Id))
            .collect();
        match items.len() {
            0 => Expr::Id,
            1 => items.into_iter().next().unwrap(),
            _ => Expr::Prod(items),
        }
    }

    pub fn inv(self) -> Self {
        match self {
            Expr::Id => Expr::Id,
            e => Expr::Inv(Box::new(e)),
        }
    }

    pub fn pow(self, k: i64) -> Self {
        match (self, k) {
            (_, 0) | (Expr::Id, _) => Expr::Id,
            (e, 1) => e,
            (e, k) => Expr::Pow(Box::new(e), k),
        }
    }

    pub fn conj(self, by: Expr<A>) -> Self {
        if matches!(by, Expr::Id) {
            return self;
        }
        Expr::Conj(Box::new(self), Box::new(by))
    }

    pub fn comm(self, other: Expr<A>) -> Self {
        Expr::Comm(Box::new(self), Box::new(other))
    }

    /// Product of atom powers, e.g. the expression of a normal-form word.
    pub fn from_powers(letters: impl IntoIterator<Item = (A, i64)>) -> Self {
        Self::prod(letters.into_iter().map(|(a, e)| Expr::Atom(a).pow(e)))
    }

    pub fn map_atoms<B: Clone>(&self, f: &mut impl FnMut(&A) -> Expr<B>) -> Expr<B> {
        match self {
            Expr::Id => Expr::Id,
            Expr::Atom(a) => f(a),
            Expr::Prod(xs) => Expr::prod(xs.iter().map(|x| x.map_atoms(f)).collect::<Vec<_>>()),
            Expr::Inv(x) => x.map_atoms(f).inv(),
            Expr::Pow(x, k) => x.map_atoms(f).pow(*k),
            Expr::Conj(x, y) => x.map_atoms(f).conj(y.map_atoms(f)),
            Expr::Comm(x, y) => x.map_atoms(f).comm(y.map_atoms(f)),
        }
    }

    pub fn eval<G: GroupOps>(
        &self,
        group: &G,
        atom: &mut (impl FnMut(&A) -> Result<G::Elem> + ?Sized),
    ) -> Result<G::Elem> {
        match self {
            Expr::Id => Ok(group.one()),
            Expr::Atom(a) => atom(a),
            Expr::Prod(xs) => {
                let mut acc = group.one();
                for x in xs {
                    let v = x.eval(group, atom)?;
                    acc = group.op(&acc, &v)?;
                }
                Ok(acc)
            }
            Expr::Inv(x) => group.invert(&x.eval(group, atom)?),
            Expr::Pow(x, k) => group.power(&x.eval(group, atom)?, *k),
            Expr::Conj(x, y) => {
                let x = x.eval(group, atom)?;
                let y = y.eval(group, atom)?;
                let yx = group.op(&group.invert(&y)?, &x)?;
                group.op(&yx, &y)
            }
            Expr::Comm(x, y) => {
                let x = x.eval(group, atom)?;
                let y = y.eval(group, atom)?;
                let xy = group.op(&x, &y)?;
                let yx = group.op(&y, &x)?;
                group.op(&group.invert(&yx)?, &xy)
            }
        }
    }

    /// Number of atoms, counted with multiplicity.
    pub fn size(&self) -> usize {
        match self {
            Expr::Id => 0,
            Expr::Atom(_) => 1,
            Expr::Prod(xs) => xs.iter().map(Expr::size).sum(),
            Expr::Inv(x) | Expr::Pow(x, _) => x.size(),
            Expr::Conj(x, y) | Expr::Comm(x, y) => x.size() + y.size(),
        }
    }
}

impl<T: Int> From<&Word<T>> for Expr<usize> {
    fn from(w: &Word<T>) -> Self {
        Expr::from_powers(
            w.letters()
                .iter()
                .map(|(g, e)| (*g, e.to_i64().expect("word exponent fits in i64"))),
        )
    }
}

/// Normal form of an expression whose atoms are generator indices.
pub fn evaluate_word<T: Int>(
    pres: &PcPresentation<T>,
    expr: &Expr<usize>,
) -> Result<ExponentVector<T>> {
    let n = pres.ngens();
    expr.eval(pres, &mut |g: &usize| {
        if *g >= n {
            Err(crate::Error::BadIndex {
                index: *g,
                count: n,
            })
        } else {
            Ok(pres.generator(*g))
        }
    })
}
