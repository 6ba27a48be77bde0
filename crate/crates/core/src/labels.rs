//! Linguistic labels with exact fractional indexes.
//!
//! A scale with `n` interior labels works on `L = {L_0, …, L_{n+1}}` with
//! `L_0 = L_min` and `L_{n+1} = L_max`, isomorphic to `{0, 1/(n+1), …, 1}`
//! through `L_i ↦ i/(n+1)`. Operator results keep their exact rational index:
//! no rounding, no clamping, no sign restriction happens until
//! [`Label::approximate`] is applied, so chains of operations stay exact and
//! quasi-normalization is preserved.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("label scale needs at least two interior labels, got {0}")]
    ScaleTooSmall(u32),
    #[error("labels belong to different scales")]
    ScaleMismatch,
    #[error("division by the zero label")]
    DivisionByZeroLabel,
    #[error("invalid label literal `{0}`")]
    BadLiteral(String),
}

/// A label scale `{L_0, …, L_{n+1}}` with `n ≥ 2` interior labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelScale {
    interior: u32,
}

impl LabelScale {
    pub fn new(interior: u32) -> Result<Self, LabelError> {
        if interior < 2 {
            return Err(LabelError::ScaleTooSmall(interior));
        }
        Ok(LabelScale { interior })
    }

    pub fn interior(&self) -> u32 {
        self.interior
    }

    /// Index of `L_max`, which is also the isomorphism divisor `n + 1`.
    pub fn top(&self) -> u32 {
        self.interior + 1
    }

    fn divisor(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.top()))
    }

    pub fn zero(&self) -> Label {
        Label {
            index: Rational::zero(),
            scale: *self,
        }
    }

    pub fn max(&self) -> Label {
        Label {
            index: self.divisor(),
            scale: *self,
        }
    }

    pub fn label(&self, index: i64) -> Label {
        Label {
            index: Rational::from_integer(index.into()),
            scale: *self,
        }
    }

    pub fn refined(&self, index: Rational) -> Label {
        Label {
            index,
            scale: *self,
        }
    }
}

/// A label with an exact, possibly fractional or negative, index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    index: Rational,
    scale: LabelScale,
}

impl Label {
    pub fn index(&self) -> &Rational {
        &self.index
    }

    pub fn scale(&self) -> LabelScale {
        self.scale
    }

    /// Value under the isomorphism `L_i ↦ i/(n+1)`.
    pub fn to_rational(&self) -> Rational {
        &self.index / self.scale.divisor()
    }

    pub fn is_zero(&self) -> bool {
        self.index.is_zero()
    }

    fn check_scale(&self, other: &Label) -> Result<(), LabelError> {
        if self.scale != other.scale {
            return Err(LabelError::ScaleMismatch);
        }
        Ok(())
    }

    /// `L_i + L_j = L_{i+j}`, kept exact; clamping is left to `approximate`.
    pub fn q_add(&self, other: &Label) -> Result<Label, LabelError> {
        self.check_scale(other)?;
        Ok(Label {
            index: &self.index + &other.index,
            scale: self.scale,
        })
    }

    /// `L_i − L_j = L_{i−j}`; a negative index denotes `−L_{j−i}`.
    pub fn q_sub(&self, other: &Label) -> Result<Label, LabelError> {
        self.check_scale(other)?;
        Ok(Label {
            index: &self.index - &other.index,
            scale: self.scale,
        })
    }

    /// `L_i · L_j = L_{(i·j)/(n+1)}`, kept exact.
    pub fn q_mul(&self, other: &Label) -> Result<Label, LabelError> {
        self.check_scale(other)?;
        Ok(Label {
            index: &self.index * &other.index / self.scale.divisor(),
            scale: self.scale,
        })
    }

    /// `a · L_i = L_{a·i}` for an exact rational scalar `a`.
    pub fn q_scalar_mul(&self, scalar: &Rational) -> Label {
        Label {
            index: scalar * &self.index,
            scale: self.scale,
        }
    }

    /// Division as an internal operator: `L_i / L_j = L_{(i/j)·(n+1)}`.
    ///
    /// The index may exceed `n+1`; clamping is left to `approximate`.
    pub fn q_div_internal(&self, other: &Label) -> Result<Label, LabelError> {
        self.check_scale(other)?;
        if other.index.is_zero() {
            return Err(LabelError::DivisionByZeroLabel);
        }
        Ok(Label {
            index: &self.index / &other.index * self.scale.divisor(),
            scale: self.scale,
        })
    }

    /// Division as an external operator: `L_i ⊘ L_j = i/j`, an exact rational.
    pub fn q_div_external(&self, other: &Label) -> Result<Rational, LabelError> {
        self.check_scale(other)?;
        if other.index.is_zero() {
            return Err(LabelError::DivisionByZeroLabel);
        }
        Ok(&self.index / &other.index)
    }

    /// The single approximation step: round the index to the closest integer
    /// (halves round up, `[x] = ⌊x + 1/2⌋`) and clamp into `[0, n+1]`.
    pub fn approximate(&self) -> Label {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let shifted = &self.index + half;
        let rounded = shifted.numer().div_floor(shifted.denom());
        let top = BigInt::from(self.scale.top());
        let clamped = rounded.max(BigInt::zero()).min(top);
        Label {
            index: Rational::from_integer(clamped),
            scale: self.scale,
        }
    }
}

/// True when the indexes sum exactly to `n + 1`, i.e. the labels map onto a
/// normalized numeric mass under the isomorphism.
pub fn quasi_normalized<'a>(
    labels: impl IntoIterator<Item = &'a Label>,
) -> Result<bool, LabelError> {
    let mut iter = labels.into_iter();
    let first = match iter.next() {
        Some(l) => l,
        None => return Ok(false),
    };
    let mut sum = first.index.clone();
    for l in iter {
        first.check_scale(l)?;
        sum += &l.index;
    }
    Ok(sum == first.scale.divisor())
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.is_negative() {
            write!(f, "-")?;
        }
        let abs = self.index.abs();
        if abs.is_integer() {
            write!(f, "L{}", abs.numer())
        } else {
            write!(f, "L{}/{}", abs.numer(), abs.denom())
        }
    }
}

/// Parse a label literal: `L3`, `L7/2`, `L2.5` or `-L1`.
pub fn parse_label(text: &str, scale: LabelScale) -> Result<Label, LabelError> {
    let bad = || LabelError::BadLiteral(text.to_string());
    let trimmed = text.trim();
    let (negative, rest) = match trimmed.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, trimmed),
    };
    let body = rest.strip_prefix('L').ok_or_else(bad)?;
    let mut index = parse_unsigned_rational(body).ok_or_else(bad)?;
    if negative {
        index = -index;
    }
    Ok(Label { index, scale })
}

/// Parse `123`, `13/36` or `0.25` into an exact non-negative rational.
pub fn parse_unsigned_rational(text: &str) -> Option<Rational> {
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if num.starts_with('-') || den.starts_with('-') || d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        if !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let n: BigInt = int_part.parse().ok()?;
        let f: BigInt = frac_part.parse().ok()?;
        return Some(Rational::new(n * &scale + f, scale));
    }
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}
