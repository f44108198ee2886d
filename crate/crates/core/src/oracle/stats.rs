use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::exact::ExactDistribution;
use crate::error::{Error, Result};

/// Observed counts per outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Empirical<K: Ord> {
    counts: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> Default for Empirical<K> {
    fn default() -> Self {
        Empirical {
            counts: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord> Empirical<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: K) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &K) -> f64 {
        self.count(key) as f64 / self.total as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }
}

impl<K: Ord> FromIterator<K> for Empirical<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut e = Empirical::new();
        for k in iter {
            e.push(k);
        }
        e
    }
}

/// Half the L1 distance between two probability vectors over the union of
/// their supports.
pub fn tv_between<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut sum: f64 = p
        .iter()
        .map(|(k, a)| (a - q.get(k).copied().unwrap_or(0.0)).abs())
        .sum();
    sum += q
        .iter()
        .filter(|(k, _)| !p.contains_key(k))
        .map(|(_, b)| b.abs())
        .sum::<f64>();
    sum / 2.0
}

pub fn tv_distance<K: Ord>(empirical: &Empirical<K>, exact: &ExactDistribution<K>) -> Result<f64> {
    if empirical.total == 0 {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let n = empirical.total as f64;
    let mut sum = 0.0;
    for (k, p) in exact.iter() {
        sum += (empirical.count(k) as f64 / n - p).abs();
    }
    for (k, c) in empirical.iter() {
        if exact.weight(k).is_none() {
            sum += c as f64 / n;
        }
    }
    Ok(sum / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit. Cells with expected count below 5 are pooled
/// (together with outcomes outside the exact support); a pool still below 5
/// is merged into the smallest remaining cell.
pub fn chi_square<K: Ord>(
    empirical: &Empirical<K>,
    exact: &ExactDistribution<K>,
) -> Result<ChiSquare> {
    if empirical.total == 0 {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let n = empirical.total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (k, p) in exact.iter() {
        let expected = n * p;
        let observed = empirical.count(k) as f64;
        if expected >= 5.0 {
            cells.push((observed, expected));
        } else {
            pool_obs += observed;
            pool_exp += expected;
        }
    }
    for (k, c) in empirical.iter() {
        if exact.weight(k).is_none() {
            pool_obs += c as f64;
        }
    }
    if pool_exp >= 5.0 || cells.is_empty() {
        cells.push((pool_obs, pool_exp));
    } else if pool_obs > 0.0 || pool_exp > 0.0 {
        let smallest = (0..cells.len())
            .min_by(|&a, &b| cells[a].1.total_cmp(&cells[b].1))
            .expect("non-empty");
        cells[smallest].0 += pool_obs;
        cells[smallest].1 += pool_exp;
    }
    let statistic: f64 = cells
        .iter()
        .map(|&(o, e)| {
            if e > 0.0 {
                (o - e).powi(2) / e
            } else if o > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    let df = cells.len().saturating_sub(1);
    let p_value = if df == 0 {
        1.0
    } else if statistic.is_infinite() {
        0.0
    } else {
        let dist = ChiSquared::new(df as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        dist.sf(statistic)
    };
    Ok(ChiSquare {
        statistic,
        df,
        p_value,
    })
}

/// Approximate mean TV distance between `n` exact draws and their law:
/// `sum_i sqrt(2 p_i (1 - p_i) / (pi n)) / 2`. The floor below which no
/// sampler's empirical TV can be expected to fall.
pub fn expected_exact_tv<K: Ord>(exact: &ExactDistribution<K>, n: u64) -> f64 {
    let n = n as f64;
    exact
        .iter()
        .map(|(_, p)| (2.0 * p * (1.0 - p) / (std::f64::consts::PI * n)).sqrt())
        .sum::<f64>()
        / 2.0
}

/// Whether `count` successes out of `n` trials lies within `sigmas` binomial
/// standard deviations of `n p`.
pub fn within_binomial_band(count: u64, n: u64, p: f64, sigmas: f64) -> bool {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= sigmas * sd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Interval};

    fn two_point() -> ExactDistribution<u8> {
        ExactDistribution::from_weights([
            (0u8, Interval::point(rat(1, 2))),
            (1, Interval::point(rat(1, 2))),
        ])
        .unwrap()
    }

    #[test]
    fn tv_identical_and_disjoint() {
        let p: BTreeMap<u8, f64> = [(0, 0.3), (1, 0.7)].into();
        assert_eq!(tv_between(&p, &p), 0.0);
        let a: BTreeMap<u8, f64> = [(0, 1.0)].into();
        let b: BTreeMap<u8, f64> = [(1, 1.0)].into();
        assert_eq!(tv_between(&a, &b), 1.0);
    }

    #[test]
    fn tv_against_exact() {
        let emp: Empirical<u8> = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1].into_iter().collect();
        assert!((tv_distance(&emp, &two_point()).unwrap() - 0.1).abs() < 1e-12);
        let outside: Empirical<u8> = [7].into_iter().collect();
        assert_eq!(tv_distance(&outside, &two_point()).unwrap(), 1.0);
        assert!(tv_distance(&Empirical::new(), &two_point()).is_err());
    }

    #[test]
    fn chi_square_fair_and_biased() {
        let fair: Empirical<u8> = (0..1000).map(|i| (i % 2) as u8).collect();
        let r = chi_square(&fair, &two_point()).unwrap();
        assert_eq!(r.df, 1);
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
        let biased: Empirical<u8> = (0..1000).map(|i| (i % 3 == 0) as u8).collect();
        assert!(chi_square(&biased, &two_point()).unwrap().p_value < 1e-6);
    }

    #[test]
    fn chi_square_pools_rare_cells() {
        let dist = ExactDistribution::from_weights([
            (0u8, Interval::point(rat(98, 100))),
            (1, Interval::point(rat(1, 100))),
            (2, Interval::point(rat(1, 100))),
        ])
        .unwrap();
        let emp: Empirical<u8> = (0..100)
            .map(|i| if i < 98 { 0 } else { (i - 97) as u8 })
            .collect();
        let r = chi_square(&emp, &dist).unwrap();
        assert_eq!(r.df, 0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn binomial_band() {
        assert!(within_binomial_band(500, 1000, 0.5, 4.0));
        assert!(!within_binomial_band(600, 1000, 0.5, 4.0));
    }
}
