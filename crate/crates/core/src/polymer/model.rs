use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{pow, Prob, Rational};
use crate::graph::Graph;
use crate::percolation::{
    effective_delta, find_percolation_param, Color, LabeledGraphlet, PercolationParams, WeightSpec,
};

/// Normalizer of the single-polymer proposal: every rooted partition
/// function below the critical threshold is at most this constant.
pub const NU_SCALE: u32 = 40;

/// A non-empty colored graphlet of the host, stored as `(vertex, color)`
/// pairs sorted by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polymer {
    cells: Vec<(usize, Color)>,
}

impl Polymer {
    /// Sorts the cells; rejects empty input and repeated vertices.
    pub fn new(mut cells: Vec<(usize, Color)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidArgument(
                "a polymer needs at least one vertex".into(),
            ));
        }
        cells.sort_unstable();
        if cells.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("repeated vertex in polymer".into()));
        }
        Ok(Polymer { cells })
    }

    pub fn singleton(v: usize, color: Color) -> Self {
        Polymer {
            cells: vec![(v, color)],
        }
    }

    /// Panics on the empty graphlet.
    pub fn from_graphlet(gamma: &LabeledGraphlet) -> Self {
        assert!(!gamma.is_empty(), "the empty graphlet is not a polymer");
        Polymer {
            cells: gamma.cells(),
        }
    }

    pub fn cells(&self) -> &[(usize, Color)] {
        &self.cells
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.cells.iter().map(|&(v, _)| v)
    }

    pub fn colors(&self) -> impl ExactSizeIterator<Item = Color> + '_ {
        self.cells.iter().map(|&(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Always false; polymers are non-empty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_vertex(&self) -> usize {
        self.cells[0].0
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.cells.binary_search_by_key(&v, |&(u, _)| u).is_ok()
    }

    pub fn color_of(&self, v: usize) -> Option<Color> {
        self.cells
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// Number of host vertices outside the polymer adjacent to it.
    pub fn boundary_size(&self, graph: &Graph) -> usize {
        let mut outside: Vec<usize> = self
            .vertices()
            .flat_map(|v| graph.neighbors(v).iter().copied())
            .filter(|&w| !self.contains_vertex(w))
            .collect();
        outside.sort_unstable();
        outside.dedup();
        outside.len()
    }

    /// The polymer as a graphlet rooted at its smallest vertex.
    pub fn to_graphlet(&self, graph: &Graph) -> LabeledGraphlet {
        LabeledGraphlet {
            root: Some(self.min_vertex()),
            vertices: self.vertices().collect(),
            colors: self.colors().collect(),
            boundary_size: self.boundary_size(graph),
        }
    }

    pub fn is_connected_in(&self, graph: &Graph) -> bool {
        let mut seen = vec![self.min_vertex()];
        let mut head = 0;
        while head < seen.len() {
            let v = seen[head];
            head += 1;
            for &w in graph.neighbors(v) {
                if self.contains_vertex(w) && !seen.contains(&w) {
                    seen.push(w);
                }
            }
        }
        seen.len() == self.len()
    }

    /// Compatible iff the vertex sets are disjoint and non-adjacent.
    pub fn compatible_with(&self, other: &Polymer, graph: &Graph) -> bool {
        !self.vertices().any(|v| {
            other.contains_vertex(v) || graph.neighbors(v).iter().any(|&w| other.contains_vertex(w))
        })
    }
}

const FREE: usize = usize::MAX;

/// A set of pairwise compatible polymers with a per-vertex owner index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolymerConfig {
    polymers: BTreeMap<usize, Polymer>,
    owner: Vec<usize>,
}

impl PolymerConfig {
    pub fn empty(n: usize) -> Self {
        PolymerConfig {
            polymers: BTreeMap::new(),
            owner: vec![FREE; n],
        }
    }

    /// Checks pairwise compatibility.
    pub fn from_polymers<I: IntoIterator<Item = Polymer>>(
        graph: &Graph,
        polymers: I,
    ) -> Result<Self> {
        let mut config = PolymerConfig::empty(graph.n());
        for gamma in polymers {
            if !config.try_insert(graph, gamma) {
                return Err(Error::InvalidArgument(
                    "polymers are not pairwise compatible".into(),
                ));
            }
        }
        Ok(config)
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn len(&self) -> usize {
        self.polymers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polymers.is_empty()
    }

    /// Polymers in order of their smallest vertex.
    pub fn iter(&self) -> impl Iterator<Item = &Polymer> {
        self.polymers.values()
    }

    pub fn owner_of(&self, v: usize) -> Option<&Polymer> {
        match self.owner[v] {
            FREE => None,
            key => self.polymers.get(&key),
        }
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.owner[v] != FREE
    }

    pub fn contains(&self, gamma: &Polymer) -> bool {
        self.polymers.get(&gamma.min_vertex()) == Some(gamma)
    }

    /// Number of covered host vertices.
    pub fn covered(&self) -> usize {
        self.polymers.values().map(Polymer::len).sum()
    }

    /// True iff no vertex in the closed neighborhood of `gamma` is occupied.
    pub fn is_compatible(&self, graph: &Graph, gamma: &Polymer) -> bool {
        gamma.vertices().all(|v| {
            !self.is_occupied(v) && graph.neighbors(v).iter().all(|&w| !self.is_occupied(w))
        })
    }

    /// Adds `gamma` if compatible with every polymer present.
    pub fn try_insert(&mut self, graph: &Graph, gamma: Polymer) -> bool {
        if !self.is_compatible(graph, &gamma) {
            return false;
        }
        let key = gamma.min_vertex();
        for v in gamma.vertices() {
            self.owner[v] = key;
        }
        self.polymers.insert(key, gamma);
        true
    }

    /// Removes and returns the polymer covering `v`, if any.
    pub fn remove_containing(&mut self, v: usize) -> Option<Polymer> {
        let key = self.owner[v];
        if key == FREE {
            return None;
        }
        let gamma = self.polymers.remove(&key)?;
        for u in gamma.vertices() {
            self.owner[u] = FREE;
        }
        Some(gamma)
    }

    pub fn into_polymers(self) -> Vec<Polymer> {
        self.polymers.into_values().collect()
    }
}

/// A subset polymer model: polymers are colored graphlets of `graph` with
/// `q` colors and weight `w = lambda^|gamma| f(gamma)`, `f <= 1`.
#[derive(Clone, Debug)]
pub struct PolymerModel {
    graph: Arc<Graph>,
    spec: WeightSpec,
    params: PercolationParams,
    theta: Option<Rational>,
}

impl PolymerModel {
    /// Refuses `lambda` at or above the critical threshold for the host's
    /// degree bound and `q`. `f(empty)` in `spec` is ignored.
    pub fn new(graph: Arc<Graph>, spec: WeightSpec) -> Result<Self> {
        let delta = effective_delta(graph.max_degree());
        let params = find_percolation_param(delta, spec.q(), spec.lambda())?;
        let stay = Rational::one() - params.p_hat();
        if pow(&stay, 2) * BigInt::from(NU_SCALE) < Rational::one() {
            return Err(Error::ConditionFailed {
                condition: "rooted partition bound",
                detail: format!(
                    "40 (1 - p_hat)^2 < 1 with p_hat = {}; lower lambda",
                    params.p_hat()
                ),
            });
        }
        Ok(PolymerModel {
            graph,
            spec: spec.with_empty(Prob::one()),
            params,
            theta: None,
        })
    }

    /// `f = 1` on every polymer.
    pub fn uniform(graph: Arc<Graph>, lambda: Rational, q: u32) -> Result<Self> {
        PolymerModel::new(graph, WeightSpec::uniform(lambda, q))
    }

    pub fn with_theta(mut self, theta: Rational) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    pub fn lambda(&self) -> &Rational {
        self.spec.lambda()
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn params(&self) -> &PercolationParams {
        &self.params
    }

    pub fn theta(&self) -> Option<&Rational> {
        self.theta.as_ref()
    }

    pub fn factor(&self, gamma: &Polymer) -> Prob {
        self.spec.factor(&gamma.to_graphlet(&self.graph))
    }

    /// `w(gamma) = lambda^|gamma| f(gamma)`.
    pub fn weight(&self, gamma: &Polymer) -> Prob {
        Prob::Exact(pow(self.lambda(), gamma.len())).mul(&self.factor(gamma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        "3 2\n0 1\n1 2".parse().unwrap()
    }

    #[test]
    fn polymer_basics() {
        let g = p3();
        let a = Polymer::new(vec![(1, 1), (0, 2)]).unwrap();
        assert_eq!(a.cells(), &[(0, 2), (1, 1)]);
        assert_eq!(a.boundary_size(&g), 1);
        assert!(a.is_connected_in(&g));
        assert!(!Polymer::new(vec![(0, 1), (2, 1)])
            .unwrap()
            .is_connected_in(&g));
        assert!(Polymer::new(vec![]).is_err());
        assert!(Polymer::new(vec![(0, 1), (0, 2)]).is_err());
        let b = Polymer::singleton(2, 1);
        assert!(!a.compatible_with(&b, &g));
        assert!(Polymer::singleton(0, 1).compatible_with(&b, &g));
    }

    #[test]
    fn config_insert_remove() {
        let g = p3();
        let mut c = PolymerConfig::empty(3);
        assert!(c.try_insert(&g, Polymer::singleton(0, 1)));
        assert!(!c.try_insert(&g, Polymer::singleton(1, 1)));
        assert!(c.try_insert(&g, Polymer::singleton(2, 1)));
        assert_eq!(c.len(), 2);
        assert_eq!(c.remove_containing(2), Some(Polymer::singleton(2, 1)));
        assert_eq!(c.remove_containing(1), None);
        assert!(c.contains(&Polymer::singleton(0, 1)));
        assert!(!c.contains(&Polymer::singleton(0, 2)));
        assert_eq!(c.covered(), 1);
    }

    #[test]
    fn weights() {
        let model = PolymerModel::uniform(Arc::new(p3()), crate::exact::rat(1, 10), 2).unwrap();
        let w = model.weight(&Polymer::new(vec![(0, 1), (1, 2)]).unwrap());
        assert_eq!(w.as_exact(), Some(&crate::exact::rat(1, 100)));
    }
}
