use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::{int, to_f64, Prob, RandomSource, Rational};
use crate::graph::Graph;
use crate::percolation::{RootedSampler, WeightSpec};

/// Largest per-ratio sample count the estimator will attempt.
pub const MAX_SAMPLES_PER_RATIO: u64 = 1 << 40;

/// Outcome of [`estimate_partition_function`].
#[derive(Clone, Debug, PartialEq)]
pub struct ZEstimate {
    /// `(1 + lambda) * prod 1 / p_i`, exact given the observed counts.
    pub estimate: Rational,
    /// Vertices in removal order (original ids).
    pub removed: Vec<usize>,
    /// Empirical `p_i`: the fraction of draws from the rooted law on `G_(i-1)`
    /// that avoid `u_i`.
    pub ratios: Vec<f64>,
    pub samples_per_ratio: u64,
}

impl ZEstimate {
    pub fn estimate_f64(&self) -> f64 {
        to_f64(&self.estimate)
    }
}

/// `L = ceil(384 n^2 / eps^2 * ln(2n / delta))`.
pub fn samples_per_ratio(n: usize, eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps and delta must lie in (0, 1), got {eps} and {delta}"
        )));
    }
    let n = n as f64;
    let l = (384.0 * n * n / (eps * eps) * (2.0 * n / delta).ln()).ceil();
    if !l.is_finite() || l > MAX_SAMPLES_PER_RATIO as f64 {
        return Err(Error::InvalidArgument(format!(
            "estimator would need {l:e} samples per ratio"
        )));
    }
    Ok(l.max(1.0) as u64)
}

/// Estimates `Z_{G,v,lambda} = sum over connected S containing v, plus the
/// empty set, of lambda^|S|` by self-reducibility.
///
/// Vertices are removed one at a time, always a leaf of a breadth-first tree
/// of the current graph rooted at `v`. For each removal, `L` exact rooted
/// samples estimate the ratio of consecutive partition functions.
///
/// ```
/// use graphlet_gibbs::exact::{rat, RandomSource};
/// use graphlet_gibbs::oracle::estimate_partition_function;
/// use graphlet_gibbs::Graph;
///
/// let single: Graph = "1 0".parse().unwrap();
/// let z = estimate_partition_function(&single, 0, &rat(1, 10), 0.2, 0.1, &mut RandomSource::new(0))
///     .unwrap();
/// assert_eq!(z.estimate, rat(11, 10));
/// ```
pub fn estimate_partition_function(
    graph: &Graph,
    v: usize,
    lambda: &Rational,
    eps: f64,
    delta: f64,
    src: &mut RandomSource,
) -> Result<ZEstimate> {
    graph.checked_neighbors(v)?;
    if *lambda >= Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "lambda must be below 1, got {lambda}"
        )));
    }
    let l = samples_per_ratio(graph.n(), eps, delta)?;
    let mut alive: Vec<bool> = vec![false; graph.n()];
    for u in graph.bfs_order(v) {
        alive[u] = true;
    }
    let spec = WeightSpec::uniform(lambda.clone(), 1).with_empty(Prob::one());
    let mut estimate = Rational::one() + lambda;
    let mut removed = Vec::new();
    let mut ratios = Vec::new();
    loop {
        let (current, old_of_new) = graph.induced_subgraph(&alive);
        if current.n() == 1 {
            break;
        }
        let root = old_of_new
            .iter()
            .position(|&u| u == v)
            .expect("v is never removed");
        let order = current.bfs_order(root);
        if order.len() != current.n() {
            return Err(Error::invariant("estimator subgraph became disconnected"));
        }
        let leaf = *order.last().expect("non-empty");
        let mut sampler = RootedSampler::new(&current, spec.clone())?;
        let mut avoid = 0u64;
        for _ in 0..l {
            let s = sampler.sample(root, src)?;
            if !s.graphlet.vertices.contains(&leaf) {
                avoid += 1;
            }
        }
        if avoid == 0 {
            return Err(Error::invariant("no sample avoided the removed vertex"));
        }
        ratios.push(avoid as f64 / l as f64);
        estimate = estimate * int(l.to_i64().expect("bounded")) / int(avoid as i64);
        let u = old_of_new[leaf];
        alive[u] = false;
        removed.push(u);
    }
    Ok(ZEstimate {
        estimate,
        removed,
        ratios,
        samples_per_ratio: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn sample_count_formula() {
        // 384 * 4 / 0.04 * ln(40)
        assert_eq!(samples_per_ratio(2, 0.2, 0.1).unwrap(), 141_653);
        assert!(samples_per_ratio(1_000_000, 1e-6, 1e-6).is_err());
        assert!(samples_per_ratio(3, 0.0, 0.1).is_err());
    }

    #[test]
    fn removal_keeps_connectivity_and_root() {
        let g: Graph = "5 5\n0 1\n1 2\n2 3\n3 4\n4 0".parse().unwrap();
        let z =
            estimate_partition_function(&g, 2, &rat(1, 10), 0.9, 0.9, &mut RandomSource::new(4))
                .unwrap();
        assert_eq!(z.removed.len(), 4);
        assert!(!z.removed.contains(&2));
        let mut alive = [true; 5];
        for &u in &z.removed {
            alive[u] = false;
            let keep: Vec<bool> = alive.to_vec();
            assert!(g.induced_subgraph(&keep).0.is_connected());
        }
        assert!(z.ratios.iter().all(|&p| p > 0.5 - 0.9 / 80.0 && p <= 1.0));
    }

    #[test]
    fn p2_estimate_is_close() {
        let g: Graph = "2 1\n0 1".parse().unwrap();
        let z =
            estimate_partition_function(&g, 0, &rat(1, 10), 0.5, 0.5, &mut RandomSource::new(9))
                .unwrap();
        // rooted Z on an edge: 1 + lambda + lambda^2
        assert!((z.estimate_f64() / 1.11 - 1.0).abs() < 0.1);
    }
}
