//! Polycyclic presentations for q-central extensions and the nonabelian
//! q-tensor square.
//!
//! Everything in the crate is generic over the exponent ring through the
//! [`Int`] trait. Exponents in infinite polycyclic groups are unbounded, so the
//! aliases below default to [`BigInt`]; the `*64` aliases are a fast path for
//! small finite inputs where overflow is not a concern.

pub mod covers;
pub mod error;
pub mod oracle;
pub mod pc;
pub mod qnu;
pub mod qwedge;
pub mod structure;
pub mod subgrp;
pub mod zlinalg;

mod int;

pub use error::{Error, Result};
pub use int::Int;
pub use num_bigint::BigInt;

pub type Word = pc::Word<BigInt>;
pub type ExponentVector = pc::ExponentVector<BigInt>;
pub type PcPresentation = pc::PcPresentation<BigInt>;
pub type IntMatrix = zlinalg::IntMatrix<BigInt>;
pub type ConsistentCover = covers::ConsistentCover<BigInt>;
pub type TailedPresentation = covers::TailedPresentation<BigInt>;
pub type InducedSequence = subgrp::InducedSequence<BigInt>;
pub type WedgeContext = qwedge::WedgeContext<BigInt>;
pub type TauPresentation = qnu::TauPresentation<BigInt>;
pub type NuContext = qnu::NuContext<BigInt>;
pub type StructureDescription = structure::StructureDescription<BigInt>;

pub type Word64 = pc::Word<i64>;
pub type ExponentVector64 = pc::ExponentVector<i64>;
pub type PcPresentation64 = pc::PcPresentation<i64>;
pub type IntMatrix64 = zlinalg::IntMatrix<i64>;
