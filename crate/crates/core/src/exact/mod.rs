//! Exact probability kernel.
//!
//! Every "with probability p" decision made by a sampler in this crate goes
//! through this module and is resolved exactly: rational probabilities are
//! compared digit by digit against a lazily drawn uniform variate, and
//! irrational ones ([`ComputableProb`]) are refined until the comparison is
//! unambiguous. Floating point is never used to decide an outcome.

mod computable;
mod random;

pub use computable::{
    bernoulli_computable, e_enclosure, exp_neg_enclosure, ComputableProb, Interval, Prob,
};
pub(crate) use random::uniform_below;
pub use random::{bernoulli_exact, uniform_int, Coin, RandomSource};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for small literals: `rat(3, 16)`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `N/D`, an integer, or a plain decimal such as `0.125` (read as
/// `125/1000`). No rounding ever takes place.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: `{text}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "zero denominator in `{text}`"
            )));
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn check_probability(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::InvalidProbability(Box::new(p.clone())));
    }
    Ok(())
}

/// `floor(x * 2^bits) / 2^bits`.
pub(crate) fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x.numer() * &scale;
    Rational::new(scaled.div_floor(x.denom()), scale)
}

/// `ceil(x * 2^bits) / 2^bits`.
pub(crate) fn round_up(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x.numer() * &scale;
    Rational::new(scaled.div_ceil(x.denom()), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/16").unwrap(), rat(3, 16));
        assert_eq!(parse_rational(" 6/32 ").unwrap(), rat(3, 16));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let third = rat(1, 3);
        let lo = round_down(&third, 10);
        let hi = round_up(&third, 10);
        assert!(lo < third && third < hi);
        assert_eq!(&hi - &lo, rat(1, 1024));
        assert_eq!(round_down(&rat(1, 4), 10), rat(1, 4));
    }
}
