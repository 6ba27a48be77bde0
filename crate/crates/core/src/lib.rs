//! Exact-arithmetic belief fusion over Dempster-Shafer and DSm models.
//!
//! The engine represents elements of the power set `2^Θ` (Shafer's model) or
//! the hyper-power set `D^Θ` (free and hybrid DSm models) as bitsets over the
//! Venn-diagram regions of the frame, keeps every mass as an exact rational
//! quantity, and evaluates each combination rule once over an abstract
//! mass-value algebra so the same rule code serves numeric masses and
//! linguistic labels.
//!
//! Modules:
//!
//! * [`frame`] — frames of discernment, integrity constraints, set expressions
//!   and the minterm bitset algebra.
//! * [`labels`] — the linguistic label scale with exact fractional indexes and
//!   the qualitative operators.
//! * [`mass`] — mass functions, validation, credibility / plausibility /
//!   pignistic transforms, discounting, and the shared value algebra.
//! * [`weights`] — dissimilarity weights, pairwise conflict counts and the
//!   discounting coefficients used by the conflict-repartition rules.
//! * [`rules`] — the combination rules themselves, from the disjunctive and
//!   conjunctive operators through the mixed discounted repartition rule.

pub mod frame;
pub mod labels;
pub mod mass;
pub mod rules;
pub mod weights;

pub use frame::{FocalSet, Frame, Model, ModelKind, SetExpr};
pub use labels::{Label, LabelScale};
pub use mass::{LabelAlgebra, MassAlgebra, MassFunction, RationalAlgebra, World};
pub use rules::{FusionResult, Rule, RuleConfig};
pub use weights::{AlphaPolicy, Dissimilarity};

/// Exact rational scalar used throughout the engine.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rational constants.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parse a non-negative mass literal (`13/36`, `0.3`, `2`) exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    labels::parse_unsigned_rational(text.trim())
}
