//! Dissimilarity weights and discounting coefficients.
//!
//! The mixed rule splits each product between the intersection and the union
//! of the responses according to a dissimilarity `δ1`, and the discounted
//! repartition rules route each partial conflict between proportional shares
//! and the union according to a factor `α` that can be fixed, derived from the
//! pairwise conflict counts of the whole tuple, or derived per source together
//! with a normalization coefficient `λ`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::frame::FocalSet;
use crate::{ratio, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("dissimilarity needs at least one operand")]
    NoOperands,
    #[error("dissimilarity over an empty operand (zero cardinality)")]
    DegenerateOperand,
}

/// Choice of dissimilarity for the mixed rules.
///
/// With sets `Y_1 … Y_M` and DSm cardinality `C`:
/// `delta_min = 1 − C(∩Y_i)/min C(Y_i)`, `eta_max = 1 − C(∩Y_i)/max C(Y_i)`,
/// `jaccard = 1 − C(∩Y_i)/C(∪Y_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dissimilarity {
    DeltaMin,
    EtaMax,
    Jaccard,
}

/// How the discounted repartition rules pick their factor.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaPolicy {
    /// One α in `[0, 1]` for every partial conflict.
    Fixed(Rational),
    /// Per-tuple α = 1 − Σ f_i from the pairwise conflict counts.
    GlobalConflict,
    /// Per-source α_i with the λ normalization coefficient.
    PerSourceLambda,
}

/// Dissimilarity of a tuple of sets. `1` when the intersection is empty;
/// an error when any single operand is empty, since its cardinality would
/// put a zero in the denominator.
pub fn dissimilarity(kind: Dissimilarity, sets: &[&FocalSet]) -> Result<Rational, WeightError> {
    let first = sets.first().ok_or(WeightError::NoOperands)?;
    if sets.iter().any(|s| s.is_empty()) {
        return Err(WeightError::DegenerateOperand);
    }
    let mut inter = (*first).clone();
    let mut union = (*first).clone();
    for s in &sets[1..] {
        inter = inter.and(s);
        union = union.or(s);
    }
    let numerator = inter.dsm_cardinality() as i64;
    let denominator = match kind {
        Dissimilarity::DeltaMin => sets.iter().map(|s| s.dsm_cardinality()).min().unwrap() as i64,
        Dissimilarity::EtaMax => sets.iter().map(|s| s.dsm_cardinality()).max().unwrap() as i64,
        Dissimilarity::Jaccard => union.dsm_cardinality() as i64,
    };
    Ok(Rational::one() - ratio(numerator, denominator))
}

/// Number of responses in conflict with `Y_i`, over `M(M−1)`.
///
/// The sum ranges over every `j` including `i`; the self term is zero for a
/// non-empty `Y_i`. Result lies in `[0, 1/M]`.
pub fn conflict_fraction(i: usize, sets: &[&FocalSet]) -> Rational {
    let m = sets.len() as i64;
    let conflicting = sets.iter().filter(|y| !y.intersects(sets[i])).count() as i64;
    ratio(conflicting, m * (m - 1))
}

/// Tuple-level discounting factor `α = 1 − Σ_i f_i`.
pub fn alpha_global(sets: &[&FocalSet]) -> Rational {
    let mut sum = Rational::zero();
    for i in 0..sets.len() {
        sum += conflict_fraction(i, sets);
    }
    Rational::one() - sum
}

/// Per-source factor `α_i = 1/M − f_i`: the fraction of responses not in
/// conflict with `Y_i`, over `M(M−1)`.
pub fn alpha_per_source(i: usize, sets: &[&FocalSet]) -> Rational {
    ratio(1, sets.len() as i64) - conflict_fraction(i, sets)
}

/// Proportionality coefficients `γ_i = m_i / Σ_j m_j` of a tuple's masses.
pub fn gammas(masses: &[Rational]) -> Vec<Rational> {
    let total: Rational = masses.iter().sum();
    masses.iter().map(|m| m / &total).collect()
}

/// Normalization coefficient `λ = Σ_i α_i / ⟨α, γ⟩`.
///
/// `None` when `⟨α, γ⟩ = 0` (every α_i is zero): the caller routes the whole
/// product through the union branch, whose coefficient `1 − Σα_i` is then 1.
pub fn lambda(alphas: &[Rational], gammas: &[Rational]) -> Option<Rational> {
    let dot: Rational = alphas.iter().zip(gammas).map(|(a, g)| a * g).sum();
    if dot.is_zero() {
        return None;
    }
    let sum: Rational = alphas.iter().sum();
    Some(sum / dot)
}
