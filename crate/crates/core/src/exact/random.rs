use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use super::{check_probability, Rational};
use crate::error::{Error, Result};

/// Seeded stream of unbiased bits.
///
/// Backed by ChaCha12, treated as ideal randomness. Two sources built from the
/// same seed emit the same stream, and [`RandomSource::fork`] derives
/// independent sub-streams for parallel workers or per-round randomness.
///
/// Uniform reals are consumed lazily: a Bernoulli draw reads only as many
/// bits as it needs to decide. The `k`-th binary digit of the implied uniform
/// variate `U` is the complement of the `k`-th stream bit, so a stream that
/// starts with `1` encodes `U < 1/2`.
pub struct RandomSource {
    seed: u64,
    backend: Backend,
    buf: u64,
    avail: u32,
    consumed: u64,
}

enum Backend {
    ChaCha(Box<ChaCha12Rng>),
    Script(VecDeque<bool>),
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            backend: Backend::ChaCha(Box::new(ChaCha12Rng::seed_from_u64(seed))),
            buf: 0,
            avail: 0,
            consumed: 0,
        }
    }

    /// Seeds from operating-system entropy. Read the chosen seed back with
    /// [`RandomSource::seed`] to replay the run.
    pub fn from_entropy() -> Self {
        use std::hash::{BuildHasher, Hasher};
        let mut h = std::collections::hash_map::RandomState::new().build_hasher();
        h.write_u128(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or_default(),
        );
        RandomSource::new(h.finish())
    }

    /// A source that replays a fixed bit sequence. Panics once the script is
    /// exhausted; intended for tracing algorithms by hand.
    pub fn scripted<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        RandomSource {
            seed: 0,
            backend: Backend::Script(bits.into_iter().collect()),
            buf: 0,
            avail: 0,
            consumed: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of bits drawn so far.
    pub fn bits_consumed(&self) -> u64 {
        self.consumed
    }

    /// Independent source for sub-stream `label`, determined by this source's
    /// seed and the label only.
    pub fn fork(&self, label: u64) -> RandomSource {
        RandomSource::new(splitmix64(
            self.seed ^ splitmix64(label ^ 0xa076_1d64_78bd_642f),
        ))
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        if self.avail == 0 {
            self.refill();
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.avail -= 1;
        self.consumed += 1;
        b
    }

    /// `k <= 64` bits assembled most-significant first.
    pub fn bits(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 64);
        let mut x = 0u64;
        for _ in 0..k {
            x = (x << 1) | self.bit() as u64;
        }
        x
    }

    /// 64 fresh bits, first bit in the most significant position.
    pub fn word(&mut self) -> u64 {
        match &mut self.backend {
            Backend::ChaCha(rng) if self.avail == 0 => {
                self.consumed += 64;
                rng.next_u64()
            }
            _ => self.bits(64),
        }
    }

    #[cold]
    fn refill(&mut self) {
        match &mut self.backend {
            Backend::ChaCha(rng) => {
                self.buf = rng.next_u64();
                self.avail = 64;
            }
            Backend::Script(script) => {
                let mut buf = 0u64;
                let mut n = 0;
                while n < 64 {
                    match script.pop_front() {
                        Some(b) => {
                            buf |= (b as u64) << n;
                            n += 1;
                        }
                        None => break,
                    }
                }
                assert!(n > 0, "scripted random source exhausted");
                self.buf = buf;
                self.avail = n;
            }
        }
    }
}

impl std::fmt::Debug for RandomSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RandomSource")
            .field("seed", &self.seed)
            .field("bits_consumed", &self.consumed)
            .finish()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A Bernoulli coin with an exact rational bias, preprocessed for repeated
/// flipping. Biases whose numerator and denominator fit in 64 bits take a
/// fast path; the outcome law is identical either way.
#[derive(Clone, Debug)]
pub struct Coin(CoinRepr);

#[derive(Clone, Debug)]
enum CoinRepr {
    Never,
    Always,
    Small { num: u64, den: u64 },
    Big { num: BigUint, den: BigUint },
}

impl Coin {
    pub fn new(p: &Rational) -> Result<Self> {
        check_probability(p)?;
        if p.is_zero() {
            return Ok(Coin(CoinRepr::Never));
        }
        if p.is_one() {
            return Ok(Coin(CoinRepr::Always));
        }
        let num = p.numer().to_biguint().expect("non-negative");
        let den = p.denom().to_biguint().expect("positive");
        Ok(Coin(match (num.to_u64(), den.to_u64()) {
            (Some(num), Some(den)) => CoinRepr::Small { num, den },
            _ => CoinRepr::Big { num, den },
        }))
    }

    pub fn always() -> Self {
        Coin(CoinRepr::Always)
    }

    pub fn is_always(&self) -> bool {
        matches!(self.0, CoinRepr::Always)
    }

    pub fn is_never(&self) -> bool {
        matches!(self.0, CoinRepr::Never)
    }

    /// Compares the lazily drawn uniform `U` with the binary expansion of `p`
    /// and stops at the first differing digit; returns `U < p`.
    #[inline]
    pub fn flip(&self, src: &mut RandomSource) -> bool {
        match &self.0 {
            CoinRepr::Never => false,
            CoinRepr::Always => true,
            &CoinRepr::Small { num, den } => {
                let den = den as u128;
                let mut r = num as u128;
                loop {
                    r <<= 1;
                    let p_digit = r >= den;
                    if p_digit {
                        r -= den;
                    }
                    let u_digit = !src.bit();
                    if u_digit != p_digit {
                        return p_digit;
                    }
                    if r == 0 {
                        return false;
                    }
                }
            }
            CoinRepr::Big { num, den } => {
                let mut r = num.clone();
                loop {
                    r <<= 1u32;
                    let p_digit = r >= *den;
                    if p_digit {
                        r -= den;
                    }
                    let u_digit = !src.bit();
                    if u_digit != p_digit {
                        return p_digit;
                    }
                    if r.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
}

/// Returns `true` with probability exactly `p`.
pub fn bernoulli_exact(p: &Rational, src: &mut RandomSource) -> Result<bool> {
    Ok(Coin::new(p)?.flip(src))
}

/// Exactly uniform integer in `[0, n)`, by rejection on blocks of
/// `ceil(log2 n)` bits.
pub fn uniform_int(n: u64, src: &mut RandomSource) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "uniform_int over an empty range".into(),
        ));
    }
    Ok(uniform_below(n, src))
}

#[inline]
pub(crate) fn uniform_below(n: u64, src: &mut RandomSource) -> u64 {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let k = 64 - (n - 1).leading_zeros();
    loop {
        let x = src.bits(k);
        if x < n {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn degenerate_coins() {
        let mut src = RandomSource::new(1);
        for _ in 0..100 {
            assert!(!bernoulli_exact(&rat(0, 1), &mut src).unwrap());
            assert!(bernoulli_exact(&rat(1, 1), &mut src).unwrap());
        }
        assert_eq!(src.bits_consumed(), 0);
        assert!(bernoulli_exact(&rat(3, 2), &mut src).is_err());
        assert!(bernoulli_exact(&rat(-1, 2), &mut src).is_err());
    }

    #[test]
    fn half_reads_one_bit() {
        let mut one = RandomSource::scripted([true]);
        assert!(bernoulli_exact(&rat(1, 2), &mut one).unwrap());
        let mut zero = RandomSource::scripted([false]);
        assert!(!bernoulli_exact(&rat(1, 2), &mut zero).unwrap());
    }

    #[test]
    fn quarter_by_hand() {
        // U < 1/4 iff the first two digits of U are 00, i.e. stream bits 11.
        let mut src = RandomSource::scripted([true, true]);
        assert!(bernoulli_exact(&rat(1, 4), &mut src).unwrap());
        let mut src = RandomSource::scripted([true, false]);
        assert!(!bernoulli_exact(&rat(1, 4), &mut src).unwrap());
        let mut src = RandomSource::scripted([false]);
        assert!(!bernoulli_exact(&rat(1, 4), &mut src).unwrap());
    }

    #[test]
    fn big_and_small_paths_agree() {
        let p = rat(40, 41);
        let big = Coin(CoinRepr::Big {
            num: BigUint::from(40u32),
            den: BigUint::from(41u32),
        });
        let small = Coin::new(&p).unwrap();
        let mut a = RandomSource::new(9);
        let mut b = RandomSource::new(9);
        for _ in 0..1000 {
            assert_eq!(big.flip(&mut a), small.flip(&mut b));
        }
        assert_eq!(a.bits_consumed(), b.bits_consumed());
    }

    #[test]
    fn empirical_means_within_four_sigma() {
        let n = 100_000f64;
        for p in [rat(1, 4), rat(3, 16), rat(40, 41)] {
            let pf = crate::exact::to_f64(&p);
            let coin = Coin::new(&p).unwrap();
            let mut src = RandomSource::new(2024);
            let hits = (0..n as usize).filter(|_| coin.flip(&mut src)).count() as f64;
            let sigma = (pf * (1.0 - pf) / n).sqrt();
            assert!((hits / n - pf).abs() <= 4.0 * sigma, "p={p}: {}", hits / n);
            // geometric(1/2) digits per draw: mean 2
            assert!((src.bits_consumed() as f64 / n) < 2.1);
        }
    }

    #[test]
    fn uniform_int_basics() {
        let mut src = RandomSource::new(3);
        assert!(uniform_int(0, &mut src).is_err());
        for _ in 0..10 {
            assert_eq!(uniform_int(1, &mut src).unwrap(), 0);
        }
        let mut s = RandomSource::scripted([true, false]);
        assert_eq!(uniform_int(2, &mut s).unwrap(), 1);
        assert_eq!(uniform_int(2, &mut s).unwrap(), 0);
    }

    #[test]
    fn uniform_int_three_way() {
        let mut src = RandomSource::new(77);
        let draws = 300_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[uniform_int(3, &mut src).unwrap() as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / draws as f64 - 1.0 / 3.0).abs() < 0.005);
        }
    }

    #[test]
    fn replay_and_forks() {
        let mut a = RandomSource::new(5);
        let mut b = RandomSource::new(5);
        let xs: Vec<u64> = (0..10).map(|_| a.word()).collect();
        let ys: Vec<u64> = (0..10).map(|_| b.word()).collect();
        assert_eq!(xs, ys);
        let mut f1 = a.fork(1);
        let mut f1b = b.fork(1);
        let mut f2 = a.fork(2);
        let w1 = f1.word();
        assert_eq!(w1, f1b.word());
        assert_ne!(w1, f2.word());
    }

    proptest::proptest! {
        #[test]
        fn uniform_int_in_range(n in 1u64..1_000_000, seed in proptest::prelude::any::<u64>()) {
            let mut src = RandomSource::new(seed);
            for _ in 0..20 {
                proptest::prop_assert!(uniform_int(n, &mut src).unwrap() < n);
            }
        }
    }
}
