use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exponent ring for presentations and integer matrices.
///
/// Implemented for every signed integer type with the listed capabilities,
/// in practice `i64`, `i128` and [`BigInt`].
pub trait Int:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("every Int holds an i64")
    }

    fn to_big(&self) -> BigInt {
        BigInt::from_str(&self.to_string()).expect("decimal rendering parses")
    }

    /// Inverse of `self` modulo `m`, if it exists.
    fn mod_inverse(&self, m: &Self) -> Option<Self> {
        let e = self.mod_floor(m).extended_gcd(m);
        if e.gcd.is_one() {
            Some(e.x.mod_floor(m))
        } else {
            None
        }
    }
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}
