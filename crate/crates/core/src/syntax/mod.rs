//! Formulas, multisets and sequents.

mod formula;
mod multiset;
mod parse;
mod sequent;

pub use formula::{Formula, FormulaKind};
pub use multiset::Multiset;
pub use parse::{parse_formula, parse_sequent, ParseError};
pub use sequent::{polarity, sequent_to_formula, star, subformulas, PolaritySets, Sequent};

/// Parses a formula, panicking on malformed input. Meant for literals.
pub fn f(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text:?}: {e}"))
}

/// Parses a sequent, panicking on malformed input. Meant for literals.
pub fn seq(text: &str) -> Sequent {
    parse_sequent(text).unwrap_or_else(|e| panic!("{text:?}: {e}"))
}
