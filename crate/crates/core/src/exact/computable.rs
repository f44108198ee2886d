use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::random::Coin;
use super::{check_probability, rat, round_down, round_up, to_f64, RandomSource, Rational};
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        self.mul(&Interval::point(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Interval {
        let mut acc = Interval::point(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1 / self` for a strictly positive interval.
    pub fn recip(&self) -> Interval {
        assert!(self.lo.is_positive(), "recip of an interval touching zero");
        Interval::new(self.hi.recip(), self.lo.recip())
    }

    /// Widens outward to dyadic endpoints with `bits` fractional bits.
    pub fn round_outward(&self, bits: u32) -> Interval {
        Interval::new(round_down(&self.lo, bits), round_up(&self.hi, bits))
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

type EncloseFn = dyn Fn(u32) -> Interval + Send + Sync;

/// A probability known only through arbitrarily tight rational enclosures,
/// such as `exp(-beta)`.
///
/// `enclose(bits)` must return an interval containing the true value whose
/// width is at most `2^-bits`.
#[derive(Clone)]
pub struct ComputableProb {
    f: Arc<EncloseFn>,
}

impl ComputableProb {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u32) -> Interval + Send + Sync + 'static,
    {
        ComputableProb { f: Arc::new(f) }
    }

    pub fn constant(p: Rational) -> Self {
        ComputableProb::from_fn(move |_| Interval::point(p.clone()))
    }

    /// `exp(-x)` for rational `x >= 0`.
    pub fn exp_neg(x: Rational) -> Self {
        assert!(!x.is_negative(), "exp_neg of a negative argument");
        ComputableProb::from_fn(move |bits| exp_neg_enclosure(&x, bits))
    }

    /// Product of probabilities; each factor lies in `[0, 1]`.
    pub fn product(factors: Vec<Prob>) -> Self {
        let guard = 4 + usize::BITS - factors.len().leading_zeros();
        ComputableProb::from_fn(move |bits| {
            let mut acc = Interval::point(Rational::one());
            for f in &factors {
                acc = acc
                    .mul(&f.enclose(bits + guard))
                    .round_outward(bits + guard);
            }
            acc.round_outward(bits + 1)
        })
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        (self.f)(bits)
    }
}

impl fmt::Debug for ComputableProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComputableProb(~{})", self.enclose(48).midpoint_f64())
    }
}

/// A probability that is either an exact rational or computable.
#[derive(Clone, Debug)]
pub enum Prob {
    Exact(Rational),
    Computable(ComputableProb),
}

impl Prob {
    pub fn zero() -> Self {
        Prob::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Prob::Exact(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Prob::Exact(p) if p.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Prob::Exact(p) if p.is_one())
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        match self {
            Prob::Exact(p) => Interval::point(p.clone()),
            Prob::Computable(c) => c.enclose(bits),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Prob::Exact(p) => Some(p),
            Prob::Computable(_) => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Prob::Exact(p) => to_f64(p),
            Prob::Computable(c) => c.enclose(60).midpoint_f64(),
        }
    }

    pub fn mul(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a * b),
            _ => Prob::Computable(ComputableProb::product(vec![self.clone(), other.clone()])),
        }
    }

    /// One exact Bernoulli draw.
    pub fn sample(&self, src: &mut RandomSource) -> Result<bool> {
        match self {
            Prob::Exact(p) => {
                check_probability(p)?;
                Ok(Coin::new(p)?.flip(src))
            }
            Prob::Computable(c) => bernoulli_computable(c, src),
        }
    }
}

impl From<Rational> for Prob {
    fn from(p: Rational) -> Self {
        Prob::Exact(p)
    }
}

const MAX_BITS: u32 = 1 << 14;

/// Returns `true` with probability exactly `p`, refining the enclosure of `p`
/// only as far as the drawn uniform variate requires.
pub fn bernoulli_computable(p: &ComputableProb, src: &mut RandomSource) -> Result<bool> {
    let mut u = BigUint::zero();
    let mut k = 0u32;
    let mut bits = 64u32;
    let mut prev: Option<Interval> = None;
    loop {
        let Interval { mut lo, mut hi } = p.enclose(bits);
        // successive enclosures all contain the true value, so intersecting
        // them keeps the sequence nested
        if let Some(prev) = prev.take() {
            lo = lo.max(prev.lo);
            hi = hi.min(prev.hi);
        }
        if hi.is_negative() || lo > Rational::one() || lo > hi {
            return Err(Error::InvalidProbability(Box::new(lo)));
        }
        let limit = Rational::new(BigInt::one(), BigInt::one() << (bits / 2));
        if &hi - &lo > limit {
            return Err(Error::RefinementFailed(bits));
        }
        if !hi.is_positive() {
            return Ok(false);
        }
        if lo >= Rational::one() {
            return Ok(true);
        }
        prev = Some(Interval::new(lo.clone(), hi.clone()));
        loop {
            if k > 0 {
                // U lies in [u / 2^k, (u + 1) / 2^k)
                let scale = BigInt::one() << k;
                let u_int = BigInt::from(u.clone());
                if (&u_int + 1u8) * lo.denom() <= lo.numer() * &scale {
                    return Ok(true);
                }
                if &u_int * hi.denom() >= hi.numer() * &scale {
                    return Ok(false);
                }
            }
            if k >= bits + 8 {
                break;
            }
            u = (u << 64u32) | BigUint::from(!src.word());
            k += 64;
        }
        bits *= 2;
        if bits > MAX_BITS {
            return Err(Error::RefinementFailed(bits));
        }
    }
}

/// Enclosure of `exp(-x)` for rational `x >= 0` with width at most
/// `2^-bits`.
///
/// Halves the argument until it is at most 1/2, sums the alternating Taylor
/// series with an explicit remainder bound, then squares back up with outward
/// rounding.
pub fn exp_neg_enclosure(x: &Rational, bits: u32) -> Interval {
    assert!(!x.is_negative(), "exp_neg of a negative argument");
    if x.is_zero() {
        return Interval::point(Rational::one());
    }
    let half = rat(1, 2);
    let mut y = x.clone();
    let mut s = 0u32;
    while y > half {
        y /= BigInt::from(2);
        s += 1;
    }
    let work = bits + s + 16;
    let eps = Rational::new(BigInt::one(), BigInt::one() << work);
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut i = 0u32;
    let rem = loop {
        i += 1;
        term = term * &y / BigInt::from(i);
        if term <= eps {
            break term;
        }
        if i % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
    };
    let mut acc = Interval::new(std::cmp::max(&sum - &rem, Rational::zero()), &sum + &rem)
        .round_outward(work);
    for _ in 0..s {
        acc = Interval::new(&acc.lo * &acc.lo, &acc.hi * &acc.hi).round_outward(work);
    }
    acc.round_outward(bits + 1)
}

/// Enclosure of Euler's number with width at most `2^-bits`.
pub fn e_enclosure(bits: u32) -> Interval {
    exp_neg_enclosure(&Rational::one(), bits + 4)
        .recip()
        .round_outward(bits + 1)
}
