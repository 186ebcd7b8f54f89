//! Exact scalar abstraction.
//!
//! Every comparison in this crate sits on a `<=` / `>` threshold that is hit
//! exactly (sums equal to one, touching faces), so the scalar must be an
//! ordered field with exact arithmetic. Floating point types are excluded by
//! the `Ord` bound.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar: Num + Clone + Ord + Debug + Display + FromStr + Send + Sync + 'static {
    /// `numer / denom`. Panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// `self * m` as a non-negative integer, if it is one.
    fn grid_units(&self, m: u32) -> Option<u32>;

    /// `(numerator, denominator)` in lowest terms, if both fit in `i64`.
    fn to_i64_pair(&self) -> Option<(i64, i64)>;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Integer
        + Signed
        + Clone
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + 'static,
{
    fn from_ratio(numer: i64, denom: i64) -> Self {
        let n = I::from_i64(numer).expect("numerator representable");
        let d = I::from_i64(denom).expect("denominator representable");
        Ratio::new(n, d)
    }

    fn grid_units(&self, m: u32) -> Option<u32> {
        let scaled = self.clone() * Ratio::from_integer(I::from_u32(m)?);
        if !scaled.is_integer() {
            return None;
        }
        scaled.to_integer().to_u32()
    }

    fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected.
pub fn parse_scalar<T: Scalar>(text: &str) -> crate::Result<T> {
    let text = text.trim();
    if text.is_empty() || text.contains(['.', 'e', 'E']) {
        return Err(crate::Error::parse(format!(
            "expected a rational like \"p/q\", got {text:?}"
        )));
    }
    text.parse::<T>()
        .map_err(|_| crate::Error::parse(format!("invalid rational {text:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Big = Ratio<BigInt>;

    #[test]
    fn canonical_form() {
        let r: Big = parse_scalar("6/-8").unwrap();
        assert_eq!(r, Big::from_ratio(-3, 4));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(Big::from_ratio(4, 2).to_string(), "2");
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominators() {
        assert!(parse_scalar::<Big>("0.5").is_err());
        assert!(parse_scalar::<Big>("1/0").is_err());
        assert!(parse_scalar::<Big>("").is_err());
        assert_eq!(parse_scalar::<Big>(" 7 ").unwrap(), Big::from_ratio(7, 1));
    }

    #[test]
    fn grid_units() {
        let x = Ratio::<i64>::from_ratio(2, 3);
        assert_eq!(x.grid_units(6), Some(4));
        assert_eq!(x.grid_units(4), None);
        assert_eq!(Ratio::<i64>::from_ratio(-1, 2).grid_units(2), None);
    }
}
