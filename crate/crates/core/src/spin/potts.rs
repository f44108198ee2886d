use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    e_enclosure, exp_neg_enclosure, pow, round_up, to_f64, uniform_int, ComputableProb, Interval,
    Prob, RandomSource, Rational,
};
use crate::graph::Graph;
use crate::percolation::{Color, LabeledGraphlet, WeightSpec};
use crate::polymer::{Cftp, PolymerModel};

type EnclosureCache = Arc<Mutex<HashMap<(usize, usize, u32), Interval>>>;

const MAX_BITS: u32 = 4096;

/// Ferromagnetic Potts parameters: `q >= 2` colors, inverse temperature
/// `beta > 0`, and a caller-attested edge expansion `alpha > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PottsParams {
    pub q: u32,
    pub beta: Rational,
    pub alpha: Rational,
}

impl PottsParams {
    pub fn new(q: u32, beta: Rational, alpha: Rational) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!(
                "Potts needs at least 2 colors, got {q}"
            )));
        }
        if beta <= Rational::zero() || alpha <= Rational::zero() {
            return Err(Error::InvalidArgument(
                "beta and alpha must be positive".into(),
            ));
        }
        Ok(PottsParams { q, beta, alpha })
    }
}

/// Verdict for `exp(alpha beta) >= (q-1)(delta + 1 + e delta)`, the
/// low-temperature condition written without logarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct PottsConditionReport {
    pub pass: bool,
    /// Smallest `beta` that passes, as a float for display.
    pub beta_threshold: f64,
    pub beta: f64,
}

impl PottsConditionReport {
    pub fn margin(&self) -> f64 {
        self.beta - self.beta_threshold
    }
}

/// ```
/// use graphlet_gibbs::exact::rat;
/// use graphlet_gibbs::spin::check_potts_condition;
///
/// let r = check_potts_condition(3, 2, &rat(1, 1), &rat(5, 2)).unwrap();
/// assert!(r.pass);
/// assert!((r.beta_threshold - 2.4977).abs() < 1e-4);
/// assert!(!check_potts_condition(3, 2, &rat(1, 1), &rat(12, 5)).unwrap().pass);
/// ```
pub fn check_potts_condition(
    delta: usize,
    q: u32,
    alpha: &Rational,
    beta: &Rational,
) -> Result<PottsConditionReport> {
    if delta < 3 {
        return Err(Error::InvalidArgument(format!(
            "the Potts condition needs delta >= 3, got {delta}"
        )));
    }
    let params = PottsParams::new(q, beta.clone(), alpha.clone())?;
    let ab = &params.alpha * &params.beta;
    let d = Rational::from_integer(BigInt::from(delta));
    let qm1 = Rational::from_integer(BigInt::from(q - 1));
    let mut bits = 64;
    let pass = loop {
        let lhs = exp_neg_enclosure(&ab, bits).recip();
        let e = e_enclosure(bits);
        let rhs_at = |e: &Rational| &qm1 * (&d + Rational::one() + e * &d);
        if lhs.lo >= rhs_at(&e.hi) {
            break true;
        }
        if lhs.hi < rhs_at(&e.lo) {
            break false;
        }
        bits *= 2;
        if bits > MAX_BITS {
            return Err(Error::RefinementFailed(MAX_BITS));
        }
    };
    let (df, qf) = (delta as f64, (q - 1) as f64);
    let beta_threshold = (qf * (df + 1.0 + std::f64::consts::E * df)).ln() / to_f64(alpha);
    Ok(PottsConditionReport {
        pass,
        beta_threshold,
        beta: to_f64(beta),
    })
}

/// `B(gamma)`: edges inside `gamma` whose endpoints have different colors,
/// plus edges leaving `gamma`.
pub fn potts_cost(graph: &Graph, vertices: &[usize], colors: &[Color]) -> usize {
    let color_of = |v: usize| vertices.iter().position(|&u| u == v).map(|i| colors[i]);
    let mut cost = 0;
    for (&v, &c) in vertices.iter().zip(colors) {
        for &u in graph.neighbors(v) {
            match color_of(u) {
                None => cost += 1,
                Some(cu) if cu != c && u > v => cost += 1,
                _ => {}
            }
        }
    }
    cost
}

/// `exp(-beta B(gamma))`.
pub fn potts_polymer_weight(
    graph: &Graph,
    vertices: &[usize],
    colors: &[Color],
    beta: &Rational,
) -> ComputableProb {
    let x = beta * Rational::from_integer(BigInt::from(potts_cost(graph, vertices, colors)));
    ComputableProb::exp_neg(x)
}

/// One Potts draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PottsSample {
    /// Color of every vertex, in `1..=q`.
    pub colors: Vec<Color>,
    /// The majority color whose polymer model produced the sample.
    pub ground: Color,
    /// Bounding-chain steps summed over all attempts.
    pub steps: u64,
    pub attempts: u32,
}

/// Sampler for the Potts law restricted to colorings with a strict-majority
/// color.
///
/// A ground color `j` is drawn uniformly; the vertices not colored `j` form a
/// polymer configuration with `q - 1` colors and weights
/// `exp(-beta B(gamma))`, truncated to 0 on polymers covering more than half
/// of the graph. Configurations covering half or more are rejected.
#[derive(Debug)]
pub struct PottsSampler {
    params: PottsParams,
    report: PottsConditionReport,
    lambda_bound: Rational,
    model: PolymerModel,
}

impl PottsSampler {
    /// Uses `max(delta, 3)` in the condition, which only makes it stricter.
    pub fn new(graph: Arc<Graph>, params: PottsParams) -> Result<Self> {
        let delta = graph.max_degree().max(3);
        let report = check_potts_condition(delta, params.q, &params.alpha, &params.beta)?;
        if !report.pass {
            return Err(Error::ConditionFailed {
                condition: "Potts low temperature",
                detail: format!(
                    "beta = {:.6} is below (1 + ln((delta+1)/(e delta) + 1) + ln((q-1) delta)) / alpha = {:.6}",
                    report.beta, report.beta_threshold
                ),
            });
        }
        let ab = &params.alpha * &params.beta;
        let lambda_bound = round_up(&exp_neg_enclosure(&ab, 128).hi, 64);
        let n = graph.n();
        let host = Arc::clone(&graph);
        let (beta, bound) = (params.beta.clone(), lambda_bound.clone());
        // weights depend only on (cost, size); enclosures are memoized per
        // precision since the filter asks for the same few values repeatedly
        let cache: EnclosureCache = Arc::default();
        let spec = WeightSpec::custom(
            lambda_bound.clone(),
            params.q - 1,
            move |gamma: &LabeledGraphlet| {
                let k = gamma.vertices.len();
                if 2 * k > n {
                    return Prob::zero();
                }
                let b = potts_cost(&host, &gamma.vertices, &gamma.colors);
                let (beta, bound, cache) = (beta.clone(), bound.clone(), Arc::clone(&cache));
                Prob::Computable(ComputableProb::from_fn(move |bits| {
                    let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
                    cache
                        .entry((b, k, bits))
                        .or_insert_with(|| {
                            let x = &beta * Rational::from_integer(BigInt::from(b));
                            exp_neg_enclosure(&x, bits)
                                .scale(&pow(&bound, k).recip())
                                .round_outward(bits)
                        })
                        .clone()
                }))
            },
        );
        let model = PolymerModel::new(graph, spec)?;
        Ok(PottsSampler {
            params,
            report,
            lambda_bound,
            model,
        })
    }

    pub fn params(&self) -> &PottsParams {
        &self.params
    }

    pub fn report(&self) -> &PottsConditionReport {
        &self.report
    }

    /// Rational upper bound on `exp(-alpha beta)` used as the polymer activity.
    pub fn lambda_bound(&self) -> &Rational {
        &self.lambda_bound
    }

    pub fn model(&self) -> &PolymerModel {
        &self.model
    }

    pub fn sample(&self, src: &mut RandomSource) -> Result<PottsSample> {
        let n = self.model.n();
        let mut steps = 0;
        let mut attempts = 0;
        loop {
            attempts += 1;
            let j = uniform_int(self.params.q as u64, src)? as Color + 1;
            let outcome = Cftp::new(&self.model)?.sample(src)?;
            steps += outcome.steps;
            if 2 * outcome.config.covered() >= n {
                continue;
            }
            let mut colors = vec![j; n];
            for gamma in outcome.config.iter() {
                for &(v, c) in gamma.cells() {
                    colors[v] = if c < j { c } else { c + 1 };
                }
            }
            return Ok(PottsSample {
                colors,
                ground: j,
                steps,
                attempts,
            });
        }
    }
}

/// One-shot Potts draw.
pub fn sample_potts_expander(
    graph: Arc<Graph>,
    params: PottsParams,
    src: &mut RandomSource,
) -> Result<PottsSample> {
    PottsSampler::new(graph, params)?.sample(src)
}
