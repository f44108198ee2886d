use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, pow, Rational};

/// Retention probability `p_hat` and the induced `lambda_hat = g(p_hat)` for
/// a degree bound `delta` and `q` colors, where
/// `g(x) = (x / q) (1 - x)^(delta - 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PercolationParams {
    delta: usize,
    q: u32,
    lambda: Rational,
    p_hat: Rational,
    lambda_hat: Rational,
}

impl PercolationParams {
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn p_hat(&self) -> &Rational {
        &self.p_hat
    }

    pub fn lambda_hat(&self) -> &Rational {
        &self.lambda_hat
    }
}

/// Degree bound used for the percolation search: the true maximum degree,
/// raised to 2 for graphs that have none larger.
pub fn effective_delta(max_degree: usize) -> usize {
    max_degree.max(2)
}

/// `lambda*(delta, q) = (delta-2)^(delta-2) / (q (delta-1)^(delta-1))`, and
/// `1/q` when `delta = 2`.
pub fn critical_threshold(delta: usize, q: u32) -> Result<Rational> {
    if delta < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree bound must be at least 2, got {delta}"
        )));
    }
    if q == 0 {
        return Err(Error::InvalidArgument("need at least one color".into()));
    }
    let d = delta as i64;
    let num = pow(&int(d - 2), delta - 2);
    let den = pow(&int(d - 1), delta - 1) * int(q as i64);
    Ok(num / den)
}

/// `g(x) = (x / q) (1 - x)^(delta - 2)`.
pub fn g(delta: usize, q: u32, x: &Rational) -> Rational {
    let one_minus = Rational::one() - x;
    x / BigInt::from(q) * pow(&one_minus, delta - 2)
}

const MAX_HALVINGS: usize = 10_000;

/// Binary search on `[0, 1/(delta-1))` for the first midpoint `p_hat` with
/// `g(p_hat) >= lambda`. Since `g` increases on this interval and the search
/// only ever moves right, the midpoints are `(1 - 2^-j) / (delta - 1)`.
///
/// ```
/// use graphlet_gibbs::exact::rat;
/// use graphlet_gibbs::percolation::find_percolation_param;
///
/// let p = find_percolation_param(3, 1, &rat(1, 5)).unwrap();
/// assert_eq!(p.p_hat(), &rat(3, 8));
/// assert_eq!(p.lambda_hat(), &rat(15, 64));
/// ```
pub fn find_percolation_param(
    delta: usize,
    q: u32,
    lambda: &Rational,
) -> Result<PercolationParams> {
    let threshold = critical_threshold(delta, q)?;
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if *lambda >= threshold {
        return Err(Error::AboveThreshold {
            lambda: Box::new(lambda.clone()),
            delta,
            q,
            threshold: Box::new(threshold),
        });
    }
    let mut lo = Rational::zero();
    let hi = Rational::new(BigInt::one(), BigInt::from(delta - 1));
    for _ in 0..MAX_HALVINGS {
        let mid = (&lo + &hi) / BigInt::from(2);
        let value = g(delta, q, &mid);
        if value >= *lambda {
            debug_assert!(value < threshold);
            return Ok(PercolationParams {
                delta,
                q,
                lambda: lambda.clone(),
                p_hat: mid,
                lambda_hat: value,
            });
        }
        lo = mid;
    }
    Err(Error::InvalidArgument(format!(
        "lambda = {lambda} is too close to the threshold {threshold} for the parameter search"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn thresholds() {
        assert_eq!(critical_threshold(3, 1).unwrap(), rat(1, 4));
        assert_eq!(critical_threshold(4, 1).unwrap(), rat(4, 27));
        assert_eq!(critical_threshold(3, 2).unwrap(), rat(1, 8));
        assert_eq!(critical_threshold(2, 3).unwrap(), rat(1, 3));
        assert!(critical_threshold(1, 1).is_err());
    }

    #[test]
    fn search_traces() {
        let p = find_percolation_param(3, 1, &rat(3, 16)).unwrap();
        assert_eq!((p.p_hat(), p.lambda_hat()), (&rat(1, 4), &rat(3, 16)));
        let p = find_percolation_param(3, 1, &rat(1, 5)).unwrap();
        assert_eq!((p.p_hat(), p.lambda_hat()), (&rat(3, 8), &rat(15, 64)));
        assert!(matches!(
            find_percolation_param(3, 1, &rat(1, 4)),
            Err(Error::AboveThreshold { .. })
        ));
        assert!(find_percolation_param(3, 1, &rat(0, 1)).is_err());
    }

    #[test]
    fn subcritical_and_bracketing() {
        for delta in [2usize, 3, 4, 5, 7] {
            for q in [1u32, 2, 3] {
                let star = critical_threshold(delta, q).unwrap();
                for j in [1u32, 3, 8, 20] {
                    let scale = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << j);
                    let lambda = &star * scale;
                    let p = find_percolation_param(delta, q, &lambda).unwrap();
                    assert!(p.p_hat() * BigInt::from(delta - 1) < Rational::one());
                    assert!(*p.lambda_hat() >= lambda && *p.lambda_hat() < star);
                    assert_eq!(g(delta, q, p.p_hat()), *p.lambda_hat());
                }
            }
        }
    }
}
