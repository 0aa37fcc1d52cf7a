//! Exact rational parameters (ε, γ, ρ, α, β) and helpers for comparing
//! integer costs against rational multiples without floating point.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Nonnegative exact rational.
pub type Rational = num_rational::Ratio<u128>;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(v as u128)
}

pub fn ratio(numer: u128, denom: u128) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `"3"`, `"1/4"` or a plain decimal such as `"0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a nonnegative rational: {text:?}"));
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u128 = n.trim().parse().map_err(|_| bad())?;
        let d: u128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 30 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: u128 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = 10u128.pow(frac.len() as u32);
        let frac: u128 = frac.parse().map_err(|_| bad())?;
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(bad)?;
        return Ok(Rational::new(numer, scale));
    }
    text.parse::<u128>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// `value <= factor * base`, cross-multiplied.
pub fn le_scaled(value: u128, factor: Rational, base: u128) -> bool {
    let lhs = BigUint::from(value) * BigUint::from(*factor.denom());
    let rhs = BigUint::from(*factor.numer()) * BigUint::from(base);
    lhs <= rhs
}

/// `value / base` as an exact rational; `None` when `base` is zero.
pub fn achieved_factor(value: u64, base: u64) -> Option<Rational> {
    (base != 0).then(|| Rational::new(value as u128, base as u128))
}

pub fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Requires `eps = 1/k` for a positive integer `k`; returns `k`.
pub fn inverse_integer(eps: Rational) -> Result<u128> {
    if eps.is_zero() || !eps.numer().is_one() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be 1/k for a positive integer k, got {eps}"
        )));
    }
    Ok(*eps.denom())
}

pub fn positive(name: &str, value: Rational) -> Result<Rational> {
    if value.is_zero() {
        Err(Error::InvalidParameter(format!("{name} must be positive")))
    } else {
        Ok(value)
    }
}

pub type BigRational = num_rational::Ratio<BigUint>;

pub fn to_big(r: Rational) -> BigRational {
    BigRational::new(BigUint::from(*r.numer()), BigUint::from(*r.denom()))
}

/// Serializes as `"numer/denom"` (or just the integer).
pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}
