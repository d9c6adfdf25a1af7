//! Polycyclic presentations: data model, collection, consistency, and the
//! text/JSON file formats.

mod collect;
mod consistency;
mod expr;
mod format;
mod presentation;
mod word;

pub use consistency::{ConsistencyReport, Discrepancy, OverlapKind};
pub use expr::{evaluate_word, Expr, GroupOps};
pub use format::{parse_json, parse_presentation, to_json, to_json_value, to_text};
pub use presentation::{PcBuilder, PcPresentation, DEFAULT_BUDGET};
pub use word::{ExponentVector, Word};
