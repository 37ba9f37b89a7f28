//! Exact rational scalars and the two semirings kernels are built over.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// Parses `"n"`, `"-n"` or `"n/d"` into a reduced rational.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Commutative semiring used for matrix composition.
///
/// Rationals give FinStoch and FinStoch±; booleans with (∨, ∧) give relations.
pub trait Semiring: Clone + PartialEq + Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl Semiring for Scalar {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Semiring for bool {
    fn zero_elem() -> Self {
        false
    }
    fn one_elem() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn is_zero_elem(&self) -> bool {
        !*self
    }
}

pub(crate) fn is_negative(value: &Scalar) -> bool {
    value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        let x = parse_scalar("2/4").unwrap();
        assert_eq!(x, ratio(1, 2));
        assert_eq!(format_scalar(&x), "1/2");
        assert_eq!(format_scalar(&parse_scalar("-6/3").unwrap()), "-2");
        assert_eq!(format_scalar(&parse_scalar("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("0.5").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("a/b").is_err());
    }

    #[test]
    fn denominators_stay_positive_and_reduced() {
        let x = ratio(6, -4);
        assert!(x.denom() > &BigInt::from(0));
        assert_eq!(x, ratio(-3, 2));
        let big = (0..40).fold(ratio(1, 3), |acc, _| &acc * &ratio(1, 3));
        assert_eq!(big.numer(), &BigInt::from(1));
    }
}
