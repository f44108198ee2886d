use num_bigint::BigInt;
use num_traits::One;

use super::explore::Explorer;
use super::graphlet::{LabeledGraphlet, WeightSpec};
use super::params::{effective_delta, find_percolation_param, PercolationParams};
use crate::error::{Error, Result};
use crate::exact::{pow, uniform_below, Coin, Prob, RandomSource, Rational};
use crate::graph::{Adjacency, Graph};

/// An accepted graphlet together with the number of explore-and-filter
/// rounds it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub graphlet: LabeledGraphlet,
    pub iterations: u64,
}

/// Exponent `(delta-2)|gamma| + 2 - |boundary|` of the `(1 - p_hat)` factor in
/// the rejection filter.
fn filter_exponent(delta: usize, size: usize, boundary: usize) -> Result<usize> {
    let e = (delta as i64 - 2) * size as i64 + 2 - boundary as i64;
    usize::try_from(e).map_err(|_| {
        Error::invariant(format!(
            "boundary {boundary} exceeds (delta-2)|gamma|+2 for |gamma| = {size}, delta = {delta}"
        ))
    })
}

/// Acceptance probability of the rejection filter,
/// `f(gamma) (1 - p_hat)^((delta-2)|gamma| + 2 - |boundary|) (lambda / lambda_hat)^|gamma|`.
pub fn acceptance_probability(
    params: &PercolationParams,
    gamma: &LabeledGraphlet,
    f_val: &Prob,
) -> Result<Prob> {
    let e = filter_exponent(params.delta(), gamma.len(), gamma.boundary_size)?;
    let stay = Rational::one() - params.p_hat();
    let ratio = params.lambda() / params.lambda_hat();
    let base = pow(&stay, e) * pow(&ratio, gamma.len());
    Ok(Prob::Exact(base).mul(f_val))
}

/// Perfect sampler for the rooted graphlet distribution
/// `nu(gamma) = lambda^|gamma| f(gamma) / Z` on a bounded-degree graph.
///
/// Each round explores a subcritical percolation cluster around the root and
/// keeps it with the filter probability of [`acceptance_probability`]; a
/// round outputs `gamma` with probability `(1 - p_hat)^2 w(gamma)`.
///
/// ```
/// use graphlet_gibbs::exact::{rat, RandomSource};
/// use graphlet_gibbs::percolation::{RootedSampler, WeightSpec};
/// use graphlet_gibbs::Graph;
///
/// let star: Graph = "4 3\n0 1\n0 2\n0 3".parse().unwrap();
/// let mut sampler = RootedSampler::new(&star, WeightSpec::uniform(rat(1, 5), 1)).unwrap();
/// let mut src = RandomSource::new(7);
/// let sample = sampler.sample(0, &mut src).unwrap();
/// assert!(sample.graphlet.vertices.contains(&0));
/// ```
#[derive(Debug)]
pub struct RootedSampler<G> {
    graph: G,
    spec: WeightSpec,
    params: PercolationParams,
    explorer: Explorer,
    keep: Coin,
    stay: Coin,
    ratio: Coin,
}

impl<G: Adjacency> RootedSampler<G> {
    pub fn new(graph: G, spec: WeightSpec) -> Result<Self> {
        let delta = effective_delta(graph.max_degree());
        let params = find_percolation_param(delta, spec.q(), spec.lambda())?;
        RootedSampler::with_params(graph, spec, params)
    }

    /// Uses precomputed parameters; `params.delta()` must bound the degree.
    pub fn with_params(graph: G, spec: WeightSpec, params: PercolationParams) -> Result<Self> {
        if params.delta() < graph.max_degree() || params.q() != spec.q() {
            return Err(Error::InvalidArgument(
                "percolation parameters do not match the graph and weight".into(),
            ));
        }
        if params.lambda() != spec.lambda() {
            return Err(Error::InvalidArgument(
                "percolation parameters were searched for a different lambda".into(),
            ));
        }
        let keep = Coin::new(params.p_hat())?;
        let stay = Coin::new(&(Rational::one() - params.p_hat()))?;
        let ratio = Coin::new(&(params.lambda() / params.lambda_hat()))?;
        Ok(RootedSampler {
            explorer: Explorer::new(graph.order()),
            graph,
            spec,
            params,
            keep,
            stay,
            ratio,
        })
    }

    pub fn params(&self) -> &PercolationParams {
        &self.params
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn graph(&self) -> &G {
        &self.graph
    }

    fn check_root(&self, root: usize) -> Result<()> {
        match self.graph.order() {
            Some(n) if root >= n => Err(Error::VertexOutOfRange { vertex: root, n }),
            _ => Ok(()),
        }
    }

    /// Draws from the rooted distribution; loops until a round accepts.
    pub fn sample(&mut self, root: usize, src: &mut RandomSource) -> Result<Sample> {
        self.check_root(root)?;
        if self.spec.factor_is_zero() && self.spec.empty_factor().is_zero() {
            return Err(Error::DegenerateDistribution);
        }
        let mut iterations = 0;
        loop {
            iterations += 1;
            if let Some(graphlet) = self.round(root, src, None)? {
                return Ok(Sample {
                    graphlet,
                    iterations,
                });
            }
        }
    }

    /// Exactly one explore-and-filter round.
    pub fn single_iteration(
        &mut self,
        root: usize,
        src: &mut RandomSource,
    ) -> Result<Option<LabeledGraphlet>> {
        self.check_root(root)?;
        self.round(root, src, None)
    }

    pub(crate) fn round(
        &mut self,
        root: usize,
        src: &mut RandomSource,
        extra: Option<&Coin>,
    ) -> Result<Option<LabeledGraphlet>> {
        if !self
            .explorer
            .explore(&self.graph, root, &self.keep, self.spec.q(), src)
        {
            return Err(Error::invariant(
                "percolation cluster exceeded the safety cap of 10n vertices",
            ));
        }
        let accepted = self.filter(src, extra)?;
        Ok(accepted.then(|| self.explorer.graphlet()))
    }

    fn filter(&mut self, src: &mut RandomSource, extra: Option<&Coin>) -> Result<bool> {
        let size = self.explorer.len();
        let e = filter_exponent(self.params.delta(), size, self.explorer.boundary_size())?;
        for _ in 0..e {
            if !self.stay.flip(src) {
                return Ok(false);
            }
        }
        for _ in 0..size {
            if !self.ratio.flip(src) {
                return Ok(false);
            }
        }
        if let Some(coin) = extra {
            if !coin.flip(src) {
                return Ok(false);
            }
        }
        if size == 0 {
            return self.spec.empty_factor().sample(src);
        }
        if self.spec.factor_is_one() {
            return Ok(true);
        }
        if self.spec.factor_is_zero() {
            return Ok(false);
        }
        let f = self.spec.factor(&self.explorer.graphlet());
        f.sample(src)
    }
}

/// One-shot rooted sampling.
pub fn sample_rooted<G: Adjacency>(
    graph: G,
    root: usize,
    spec: WeightSpec,
    src: &mut RandomSource,
) -> Result<Sample> {
    RootedSampler::new(graph, spec)?.sample(root, src)
}

/// Perfect sampler for unrooted graphlets, `nu(S) = lambda^|S| / Z` over
/// non-empty connected vertex sets of a finite graph.
///
/// Picks a uniform root, explores, and adds a `1/|S|` factor to the filter
/// to cancel the `|S|` roots that could have produced `S`. Empty clusters are
/// rejected.
#[derive(Debug)]
pub struct UnrootedSampler<'g> {
    inner: RootedSampler<&'g Graph>,
    inverse_size: Vec<Coin>,
}

impl<'g> UnrootedSampler<'g> {
    pub fn new(graph: &'g Graph, lambda: Rational) -> Result<Self> {
        if graph.n() == 0 {
            return Err(Error::InvalidArgument("graph has no vertices".into()));
        }
        let inner = RootedSampler::new(graph, WeightSpec::uniform(lambda, 1))?;
        let inverse_size = (1..=graph.n())
            .map(|k| Coin::new(&Rational::new(BigInt::one(), BigInt::from(k))))
            .collect::<Result<_>>()?;
        Ok(UnrootedSampler {
            inner,
            inverse_size,
        })
    }

    pub fn params(&self) -> &PercolationParams {
        self.inner.params()
    }

    pub fn sample(&mut self, src: &mut RandomSource) -> Result<Sample> {
        let mut iterations = 0;
        loop {
            iterations += 1;
            if let Some(graphlet) = self.single_iteration(src)? {
                return Ok(Sample {
                    graphlet,
                    iterations,
                });
            }
        }
    }

    /// One round; outputs a given `S` with probability
    /// `(1 - p_hat)^2 lambda^|S| / n`.
    pub fn single_iteration(&mut self, src: &mut RandomSource) -> Result<Option<LabeledGraphlet>> {
        let n = self.inner.graph.n();
        let root = uniform_below(n as u64, src) as usize;
        let RootedSampler {
            graph,
            spec,
            explorer,
            keep,
            ..
        } = &mut self.inner;
        if !explorer.explore(graph, root, keep, spec.q(), src) {
            return Err(Error::invariant(
                "percolation cluster exceeded the safety cap",
            ));
        }
        if explorer.is_empty() {
            return Ok(None);
        }
        let coin = &self.inverse_size[explorer.len() - 1];
        let accepted = self.inner.filter(src, Some(coin))?;
        Ok(accepted.then(|| self.inner.explorer.graphlet()))
    }
}

/// One-shot unrooted sampling.
pub fn sample_unrooted(graph: &Graph, lambda: Rational, src: &mut RandomSource) -> Result<Sample> {
    UnrootedSampler::new(graph, lambda)?.sample(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn star() -> Graph {
        "4 3\n0 1\n0 2\n0 3".parse().unwrap()
    }

    fn params_3_1_quarter() -> PercolationParams {
        find_percolation_param(3, 1, &rat(3, 16)).unwrap()
    }

    #[test]
    fn acceptance_plug_ins() {
        let params = params_3_1_quarter();
        let empty = LabeledGraphlet::empty();
        let p = acceptance_probability(&params, &empty, &Prob::one()).unwrap();
        assert_eq!(p.as_exact(), Some(&rat(3, 4)));
        let lone = LabeledGraphlet {
            root: Some(0),
            vertices: vec![0],
            colors: vec![1],
            boundary_size: 3,
        };
        let p = acceptance_probability(&params, &lone, &Prob::one()).unwrap();
        assert_eq!(p.as_exact(), Some(&rat(1, 1)));
        let leaf = LabeledGraphlet {
            boundary_size: 1,
            ..lone.clone()
        };
        let p = acceptance_probability(&params, &leaf, &Prob::one()).unwrap();
        assert_eq!(p.as_exact(), Some(&rat(9, 16)));
        let broken = LabeledGraphlet {
            boundary_size: 4,
            ..lone
        };
        assert!(acceptance_probability(&params, &broken, &Prob::one()).is_err());
    }

    #[test]
    fn point_mass_on_root() {
        let g = star();
        let spec = WeightSpec::custom(rat(1, 5), 1, |gamma| {
            if gamma.len() == 1 {
                Prob::one()
            } else {
                Prob::zero()
            }
        });
        let mut sampler = RootedSampler::new(&g, spec).unwrap();
        let mut src = RandomSource::new(3);
        for root in 0..4 {
            for _ in 0..200 {
                let s = sampler.sample(root, &mut src).unwrap();
                assert_eq!(s.graphlet.vertices, vec![root]);
            }
        }
    }

    #[test]
    fn vanishing_weight_never_outputs() {
        let g = star();
        let mut sampler = RootedSampler::new(&g, WeightSpec::vanishing(rat(1, 5), 1)).unwrap();
        let mut src = RandomSource::new(4);
        for _ in 0..1000 {
            assert!(sampler.single_iteration(0, &mut src).unwrap().is_none());
        }
        assert!(matches!(
            sampler.sample(0, &mut src),
            Err(Error::DegenerateDistribution)
        ));
    }

    #[test]
    fn refuses_at_threshold() {
        let g = star();
        assert!(matches!(
            RootedSampler::new(&g, WeightSpec::uniform(rat(1, 4), 1)),
            Err(Error::AboveThreshold { .. })
        ));
        let mut sampler = RootedSampler::new(&g, WeightSpec::uniform(rat(1, 5), 1)).unwrap();
        let mut src = RandomSource::new(1);
        assert!(sampler.sample(4, &mut src).is_err());
    }

    #[test]
    fn single_vertex_unrooted() {
        let g: Graph = "1 0".parse().unwrap();
        let mut src = RandomSource::new(5);
        let mut sampler = UnrootedSampler::new(&g, rat(1, 5)).unwrap();
        for _ in 0..100 {
            assert_eq!(sampler.sample(&mut src).unwrap().graphlet.vertices, vec![0]);
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let g = star();
        let run = |seed| {
            let mut sampler = RootedSampler::new(&g, WeightSpec::uniform(rat(1, 10), 2)).unwrap();
            let mut src = RandomSource::new(seed);
            let out: Vec<_> = (0..50)
                .map(|_| sampler.sample(1, &mut src).unwrap())
                .collect();
            (out, src.bits_consumed())
        };
        assert_eq!(run(42), run(42));
    }
}
