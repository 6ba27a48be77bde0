//! Deterministic value rendering for reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use dsmfuse_core::Rational;

/// Fixed-point decimal rendering with `places` fractional digits, rounding
/// half away from zero. Exact for terminating expansions, labelled
/// approximation otherwise (the fraction next to it stays exact).
pub fn decimal_string(value: &Rational, places: u32) -> String {
    let negative = value.is_negative();
    let abs = value.abs();
    let scale = BigInt::from(10u32).pow(places);
    let scaled_num = abs.numer() * &scale;
    let (mut quotient, remainder) = scaled_num.div_rem(abs.denom());
    if &remainder * 2 >= *abs.denom() {
        quotient += 1;
    }
    let digits = quotient.to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("0.{:0>width$}", digits, width = places)
    } else {
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        format!("{int_part}.{frac_part}")
    };
    if negative && !quotient.is_zero() {
        format!("-{padded}")
    } else {
        padded
    }
}

/// Exact fraction rendering (`13/23`, integers without a denominator).
pub fn fraction_string(value: &Rational) -> String {
    value.to_string()
}
