use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::enumerate::{
    adjacency_masks, colorings, connected_sets, enumerate_compatible_sets, enumerate_polymers,
    enumerate_rooted_graphlets, mask_vertices,
};
use crate::error::{Error, Result};
use crate::exact::{exp_neg_enclosure, pow, to_f64, Interval, Rational};
use crate::graph::Graph;
use crate::percolation::{Color, WeightSpec};
use crate::polymer::{Polymer, PolymerModel};

const ORACLE_BITS: u32 = 96;

/// A finite distribution given by unnormalized weights, each known to an
/// enclosing interval (a point for rational weights).
#[derive(Clone, Debug)]
pub struct ExactDistribution<K: Ord> {
    weights: BTreeMap<K, Interval>,
    z: Interval,
}

impl<K: Ord> ExactDistribution<K> {
    /// Zero weights are dropped; all-zero input is an error.
    pub fn from_weights<I: IntoIterator<Item = (K, Interval)>>(weights: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut z = Interval::point(Rational::zero());
        for (k, w) in weights {
            if w.hi.is_zero() {
                continue;
            }
            z = z.add(&w);
            map.insert(k, w);
        }
        if map.is_empty() {
            return Err(Error::DegenerateDistribution);
        }
        Ok(ExactDistribution { weights: map, z })
    }

    pub fn z(&self) -> &Interval {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, key: &K) -> Option<&Interval> {
        self.weights.get(key)
    }

    /// Exact probability when every weight is rational.
    pub fn exact_probability(&self, key: &K) -> Option<Rational> {
        let w = self
            .weights
            .get(key)
            .map_or(Rational::zero(), |w| w.lo.clone());
        let exact = self.z.lo == self.z.hi && self.weights.get(key).map_or(true, |w| w.lo == w.hi);
        exact.then(|| w / &self.z.lo)
    }

    pub fn probability(&self, key: &K) -> f64 {
        self.weights
            .get(key)
            .map_or(0.0, |w| w.midpoint_f64() / self.z.midpoint_f64())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        let z = self.z.midpoint_f64();
        self.weights
            .iter()
            .map(move |(k, w)| (k, w.midpoint_f64() / z))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }
}

/// Key of a labeled graphlet: its `(vertex, color)` cells in vertex order.
pub type GraphletKey = Vec<(usize, Color)>;

/// `nu_{G,r,lambda}` over labeled graphlets containing `root`, with the empty
/// graphlet (key `[]`) carrying weight `f(empty)`.
pub fn exact_rooted_distribution(
    graph: &Graph,
    root: usize,
    spec: &WeightSpec,
    cap: usize,
) -> Result<ExactDistribution<GraphletKey>> {
    let mut weights = vec![(Vec::new(), spec.empty_factor().enclose(ORACLE_BITS))];
    for gamma in enumerate_rooted_graphlets(graph, root, spec.q(), cap)? {
        let w = spec
            .factor(&gamma)
            .enclose(ORACLE_BITS)
            .scale(&pow(spec.lambda(), gamma.len()));
        weights.push((gamma.cells(), w));
    }
    ExactDistribution::from_weights(weights)
}

/// `nu_{G,lambda}`: non-empty connected sets weighted `lambda^|S|`.
pub fn exact_unrooted_distribution(
    graph: &Graph,
    lambda: &Rational,
    cap: usize,
) -> Result<ExactDistribution<Vec<usize>>> {
    let sets = connected_sets(graph, cap)?;
    ExactDistribution::from_weights(sets.into_iter().map(|s| {
        let vertices = mask_vertices(s);
        let w = Interval::point(pow(lambda, vertices.len()));
        (vertices, w)
    }))
}

/// The polymer Gibbs measure over configurations, keyed by the sorted
/// polymer list.
pub fn exact_polymer_distribution(
    model: &PolymerModel,
    cap: usize,
) -> Result<ExactDistribution<Vec<Polymer>>> {
    let graph = model.graph();
    let polymers: Vec<Polymer> = enumerate_polymers(graph, model.q(), cap)?;
    let weights: Vec<Interval> = polymers
        .iter()
        .map(|p| model.weight(p).enclose(ORACLE_BITS))
        .collect();
    let configs = enumerate_compatible_sets(graph, &polymers, cap)?;
    ExactDistribution::from_weights(configs.into_iter().map(|idx| {
        let w = idx
            .iter()
            .fold(Interval::point(Rational::one()), |acc, &i| {
                acc.mul(&weights[i])
            });
        let mut key: Vec<Polymer> = idx.iter().map(|&i| polymers[i].clone()).collect();
        key.sort();
        (key, w)
    }))
}

/// Hard-core law: independent sets `I` weighted `lambda^|I|`.
pub fn exact_hardcore_distribution(
    graph: &Graph,
    lambda: &Rational,
) -> Result<ExactDistribution<Vec<usize>>> {
    let adj = adjacency_masks(graph)?;
    let n = graph.n();
    if n > 24 {
        return Err(Error::InvalidArgument(format!(
            "hard-core enumeration supports at most 24 vertices, got {n}"
        )));
    }
    let sets = (0u64..1 << n).filter(|&s| mask_vertices(s).iter().all(|&v| adj[v] & s == 0));
    ExactDistribution::from_weights(sets.map(|s| {
        let vertices = mask_vertices(s);
        let w = Interval::point(pow(lambda, vertices.len()));
        (vertices, w)
    }))
}

/// Number of edges whose endpoints get different colors.
pub fn bichromatic_edges(graph: &Graph, colors: &[Color]) -> usize {
    graph
        .edges()
        .filter(|&(u, v)| colors[u] != colors[v])
        .count()
}

/// Potts law restricted to colorings (colors `1..=q`) in which some color
/// occupies strictly more than half of the vertices. Weights are
/// `exp(-beta * bichromatic edges)`, proportional to `exp(beta * monochromatic)`.
pub fn exact_potts_majority_distribution(
    graph: &Graph,
    q: u32,
    beta: &Rational,
) -> Result<ExactDistribution<Vec<Color>>> {
    let n = graph.n();
    if (q as f64).powi(n as i32) > 1e7 {
        return Err(Error::EnumerationCap(10_000_000));
    }
    let mut table: BTreeMap<usize, Interval> = BTreeMap::new();
    let mut weights = Vec::new();
    for coloring in colorings(n, q) {
        if !has_strict_majority(&coloring, q) {
            continue;
        }
        let b = bichromatic_edges(graph, &coloring);
        let w = table
            .entry(b)
            .or_insert_with(|| {
                exp_neg_enclosure(&(beta * Rational::from_integer(b.into())), ORACLE_BITS)
            })
            .clone();
        weights.push((coloring, w));
    }
    ExactDistribution::from_weights(weights)
}

/// The color held by strictly more than half of the vertices, if any.
pub fn majority_color(colors: &[Color], q: u32) -> Option<Color> {
    (1..=q).find(|&c| 2 * colors.iter().filter(|&&x| x == c).count() > colors.len())
}

fn has_strict_majority(colors: &[Color], q: u32) -> bool {
    majority_color(colors, q).is_some()
}

/// `Z` as a float, for reports.
pub fn z_f64<K: Ord>(dist: &ExactDistribution<K>) -> f64 {
    if dist.z.lo == dist.z.hi {
        to_f64(&dist.z.lo)
    } else {
        dist.z.midpoint_f64()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::{rat, Prob};
    use crate::oracle::enumerate::DEFAULT_CAP;

    fn star() -> Graph {
        "4 3\n0 1\n0 2\n0 3".parse().unwrap()
    }

    fn p3() -> Graph {
        "3 2\n0 1\n1 2".parse().unwrap()
    }

    #[test]
    fn star_rooted_partition_function() {
        let d =
            exact_rooted_distribution(&star(), 0, &WeightSpec::uniform(rat(1, 5), 1), DEFAULT_CAP)
                .unwrap();
        assert_eq!(d.z().lo, rat(1, 5) * pow(&rat(6, 5), 3));
        assert_eq!(d.len(), 8);
        assert_eq!(d.exact_probability(&vec![]), Some(rat(0, 1)));
    }

    #[test]
    fn p3_middle_root() {
        let d =
            exact_rooted_distribution(&p3(), 1, &WeightSpec::uniform(rat(1, 10), 1), DEFAULT_CAP)
                .unwrap();
        assert_eq!(d.z().lo, rat(121, 1000));
    }

    #[test]
    fn vanishing_factor_is_degenerate() {
        let r =
            exact_rooted_distribution(&p3(), 1, &WeightSpec::vanishing(rat(1, 10), 1), DEFAULT_CAP);
        assert!(matches!(r, Err(Error::DegenerateDistribution)));
    }

    #[test]
    fn empty_graphlet_weight() {
        let spec = WeightSpec::uniform(rat(1, 10), 1).with_empty(Prob::one());
        let d = exact_rooted_distribution(&p3(), 1, &spec, DEFAULT_CAP).unwrap();
        assert_eq!(d.z().lo, rat(1121, 1000));
        assert_eq!(d.exact_probability(&vec![]), Some(rat(1000, 1121)));
    }

    #[test]
    fn unrooted_star() {
        let d = exact_unrooted_distribution(&star(), &rat(1, 5), DEFAULT_CAP).unwrap();
        // 4 lambda + 3 lambda^2 + 3 lambda^3 + lambda^4
        assert_eq!(d.z().lo, rat(9456, 10000));
        assert_eq!(d.len(), 11);
    }

    #[test]
    fn polymer_p3() {
        let model = PolymerModel::uniform(Arc::new(p3()), rat(1, 10), 1).unwrap();
        let d = exact_polymer_distribution(&model, DEFAULT_CAP).unwrap();
        assert_eq!(d.z().lo, rat(1331, 1000));
        assert!((d.probability(&vec![]) - 0.7513).abs() < 1e-4);
    }

    #[test]
    fn polymer_single_vertex() {
        let g: Graph = "1 0".parse().unwrap();
        let model = PolymerModel::uniform(Arc::new(g), rat(1, 10), 2).unwrap();
        let d = exact_polymer_distribution(&model, DEFAULT_CAP).unwrap();
        assert_eq!(d.z().lo, rat(12, 10));
    }

    #[test]
    fn hardcore_c4() {
        let g: Graph = "4 4\n0 1\n1 2\n2 3\n3 0".parse().unwrap();
        let d = exact_hardcore_distribution(&g, &rat(1, 10)).unwrap();
        assert_eq!(d.len(), 7);
        assert_eq!(d.z().lo, rat(142, 100));
    }

    #[test]
    fn potts_k4_support() {
        let g: Graph = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3".parse().unwrap();
        let d = exact_potts_majority_distribution(&g, 2, &rat(3, 2)).unwrap();
        // two monochromatic and eight 3-1 colorings
        assert_eq!(d.len(), 10);
        let mono = d.probability(&vec![1, 1, 1, 1]);
        let e = (-4.5f64).exp();
        assert!((mono - 1.0 / (2.0 + 8.0 * e)).abs() < 1e-12);
    }
}
