use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{e_enclosure, pow, to_f64, Coin, Prob, RandomSource, Rational};
use crate::graph::Graph;
use crate::percolation::WeightSpec;
use crate::polymer::{Cftp, PolymerModel};

const MAX_BITS: u32 = 4096;
const BOUND_BITS: u32 = 64;

/// Degree data of a bipartite host `(L, R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardcoreParams {
    pub lambda: Rational,
    /// Largest degree in `L`.
    pub delta_l: usize,
    /// Largest degree in `R`.
    pub delta_r: usize,
    /// Smallest degree in `R`.
    pub min_r: usize,
}

impl HardcoreParams {
    pub fn from_graph(graph: &Graph, lambda: Rational) -> Result<Self> {
        let (left, right) = graph.bipartition().ok_or(Error::NoBipartition)?;
        if lambda < Rational::zero() {
            return Err(Error::InvalidArgument(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        let delta_l = left.map(|v| graph.degree(v)).max().unwrap_or(0);
        let delta_r = right.clone().map(|v| graph.degree(v)).max().unwrap_or(0);
        let min_r = right.map(|v| graph.degree(v)).min().unwrap_or(0);
        Ok(HardcoreParams {
            lambda,
            delta_l,
            delta_r,
            min_r,
        })
    }

    fn m(&self) -> BigInt {
        BigInt::from(self.delta_l.saturating_sub(1) * self.delta_r)
    }

    /// `(1 + lambda)^min_r`, the right-hand side raised to the power `delta_l`.
    fn rhs_pow(&self) -> Rational {
        pow(&(Rational::one() + &self.lambda), self.min_r)
    }
}

/// Verdict for `lambda (1 + (1+e)(delta_l - 1) delta_r) < (1+lambda)^(min_r / delta_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnbalancedReport {
    pub params: HardcoreParams,
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl UnbalancedReport {
    /// `rhs - lhs`; positive exactly when the condition holds.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Decides the unbalanced-bipartite condition exactly, refining an
/// enclosure of `e` until the comparison is settled.
///
/// Both sides are raised to the power `delta_l`, so the fractional exponent
/// never has to be evaluated.
///
/// ```
/// use graphlet_gibbs::exact::rat;
/// use graphlet_gibbs::oracle::fixtures::complete_bipartite;
/// use graphlet_gibbs::spin::check_unbalanced_condition;
///
/// let k33 = complete_bipartite(3, 3);
/// assert!(check_unbalanced_condition(&k33, &rat(1, 25)).unwrap().pass);
/// assert!(!check_unbalanced_condition(&k33, &rat(1, 20)).unwrap().pass);
/// ```
pub fn check_unbalanced_condition(graph: &Graph, lambda: &Rational) -> Result<UnbalancedReport> {
    let params = HardcoreParams::from_graph(graph, lambda.clone())?;
    let rhs = params.rhs_pow();
    let b = params.delta_l.max(1);
    let lhs_at = |e: &Rational| -> Rational {
        lambda * (Rational::one() + (Rational::one() + e) * Rational::from_integer(params.m()))
    };
    let pass = if params.m().is_zero() || lambda.is_zero() {
        pow(&lhs_at(&Rational::zero()), b) < rhs
    } else {
        let mut bits = 64;
        loop {
            let e = e_enclosure(bits);
            if pow(&lhs_at(&e.hi), b) < rhs {
                break true;
            }
            if pow(&lhs_at(&e.lo), b) >= rhs {
                break false;
            }
            bits *= 2;
            if bits > MAX_BITS {
                return Err(Error::RefinementFailed(MAX_BITS));
            }
        }
    };
    let lhs = to_f64(lambda)
        * (1.0 + (1.0 + std::f64::consts::E) * to_f64(&Rational::from_integer(params.m())));
    let rhs = (1.0 + to_f64(lambda)).powf(params.min_r as f64 / b as f64);
    Ok(UnbalancedReport {
        params,
        pass,
        lhs,
        rhs,
    })
}

/// Rational `x >= lambda / (1+lambda)^(min_r / delta_l)` within
/// `lambda 2^-64` of it.
pub fn hardcore_lambda_bound(params: &HardcoreParams) -> Rational {
    let lambda = &params.lambda;
    if params.delta_l == 0 || params.min_r == 0 || lambda.is_zero() {
        return lambda.clone();
    }
    let b = params.delta_l;
    let target = pow(lambda, b);
    let rhs = params.rhs_pow();
    let (mut lo, mut hi) = (Rational::zero(), lambda.clone());
    for _ in 0..BOUND_BITS {
        let mid = (&lo + &hi) / BigInt::from(2);
        if pow(&mid, b) * &rhs >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `lambda^|gamma| / (1+lambda)^|N(gamma)|` for a set of `R` vertices
/// (original ids), `N` taken in the bipartite host.
pub fn hardcore_polymer_weight(
    graph: &Graph,
    r_vertices: &[usize],
    lambda: &Rational,
) -> Result<Rational> {
    let (_, right) = graph.bipartition().ok_or(Error::NoBipartition)?;
    if let Some(&v) = r_vertices.iter().find(|v| !right.contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} is not on the right side"
        )));
    }
    let n = neighborhood_size(graph, r_vertices.iter().copied());
    Ok(pow(lambda, r_vertices.len()) / pow(&(Rational::one() + lambda), n))
}

fn neighborhood_size(graph: &Graph, vertices: impl Iterator<Item = usize>) -> usize {
    let mut nbrs: Vec<usize> = vertices
        .flat_map(|v| graph.neighbors(v).iter().copied())
        .collect();
    nbrs.sort_unstable();
    nbrs.dedup();
    nbrs.len()
}

/// One hard-core draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardcoreSample {
    /// The independent set, ascending.
    pub vertices: Vec<usize>,
    /// Bounding-chain steps of the polymer run.
    pub steps: u64,
    /// Horizon doublings of the polymer run.
    pub rounds: u32,
}

/// Perfect sampler for the hard-core model on a bipartite graph satisfying
/// the unbalanced condition.
///
/// The occupied right-side vertices form a polymer configuration on `R^2`
/// (right vertices sharing a left neighbor are adjacent) with weights
/// `lambda^|gamma| / (1+lambda)^|N(gamma)|`; given them, every left vertex
/// outside their neighborhood is occupied independently with probability
/// `lambda / (1+lambda)`.
#[derive(Debug)]
pub struct HardcoreSampler {
    graph: Arc<Graph>,
    r_offset: usize,
    report: UnbalancedReport,
    lambda_bound: Rational,
    model: PolymerModel,
    occupy: Coin,
}

impl HardcoreSampler {
    pub fn new(graph: Arc<Graph>, lambda: Rational) -> Result<Self> {
        let report = check_unbalanced_condition(&graph, &lambda)?;
        if !report.pass {
            return Err(Error::ConditionFailed {
                condition: "unbalanced bipartite",
                detail: format!(
                    "lambda (1 + (1+e)(delta_L-1) delta_R) = {:.6} is not below (1+lambda)^(delta_R_min/delta_L) = {:.6}",
                    report.lhs, report.rhs
                ),
            });
        }
        let (left, _) = graph.bipartition().ok_or(Error::NoBipartition)?;
        let r_offset = left.end;
        let r2 = Arc::new(graph.distance2_graph()?);
        let lambda_bound = hardcore_lambda_bound(&report.params);
        let host = Arc::clone(&graph);
        let (lam, bound) = (lambda.clone(), lambda_bound.clone());
        let spec = WeightSpec::custom(lambda_bound.clone(), 1, move |gamma| {
            let k = gamma.vertices.len();
            let n = neighborhood_size(&host, gamma.vertices.iter().map(|&i| i + r_offset));
            let f = pow(&(&lam / &bound), k) / pow(&(Rational::one() + &lam), n);
            Prob::Exact(f)
        });
        let model = PolymerModel::new(r2, spec)?;
        let occupy = Coin::new(&(&lambda / (Rational::one() + &lambda)))?;
        Ok(HardcoreSampler {
            graph,
            r_offset,
            report,
            lambda_bound,
            model,
            occupy,
        })
    }

    pub fn report(&self) -> &UnbalancedReport {
        &self.report
    }

    /// The polymer activity actually used, an upper bound on
    /// `lambda / (1+lambda)^(min_r / delta_l)`.
    pub fn lambda_bound(&self) -> &Rational {
        &self.lambda_bound
    }

    pub fn model(&self) -> &PolymerModel {
        &self.model
    }

    pub fn sample(&self, src: &mut RandomSource) -> Result<HardcoreSample> {
        let outcome = Cftp::new(&self.model)?.sample(src)?;
        let n = self.graph.n();
        let mut blocked = vec![false; self.r_offset];
        let mut vertices = Vec::new();
        for gamma in outcome.config.iter() {
            for i in gamma.vertices() {
                let v = i + self.r_offset;
                vertices.push(v);
                for &u in self.graph.neighbors(v) {
                    blocked[u] = true;
                }
            }
        }
        for (u, &b) in blocked.iter().enumerate() {
            if !b && self.occupy.flip(src) {
                vertices.push(u);
            }
        }
        vertices.sort_unstable();
        debug_assert!(vertices.iter().all(|&v| v < n));
        Ok(HardcoreSample {
            vertices,
            steps: outcome.steps,
            rounds: outcome.rounds,
        })
    }
}

/// One-shot hard-core draw.
pub fn sample_hardcore_unbalanced(
    graph: Arc<Graph>,
    lambda: Rational,
    src: &mut RandomSource,
) -> Result<HardcoreSample> {
    HardcoreSampler::new(graph, lambda)?.sample(src)
}
