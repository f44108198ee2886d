//! Verification suites comparing each sampler with its exact law on small
//! hosts. Shared by the command-line `verify` command and the acceptance
//! harness.

use std::sync::Arc;

use super::enumerate::DEFAULT_CAP;
use super::fixtures::{complete, complete_bipartite, cycle, path, small_fixtures, star};
use super::{
    brute_force_subtree_count, chi_square, estimate_partition_function,
    exact_hardcore_distribution, exact_polymer_distribution, exact_potts_majority_distribution,
    exact_rooted_distribution, exact_unrooted_distribution, expected_exact_tv, tree_subtree_count,
    tv_distance, z_f64, ChiSquare, Empirical, ExactDistribution, VerificationReport,
};
use crate::error::Result;
use crate::exact::{rat, RandomSource, Rational};
use crate::graph::Graph;
use crate::percolation::{
    critical_threshold, effective_delta, RootedSampler, UnrootedSampler, WeightSpec,
};
use crate::polymer::{Cftp, Polymer, PolymerModel};
use crate::spin::{HardcoreSampler, PottsParams, PottsSampler};

/// Seed of the random 3-regular fixture.
pub const FIXTURE_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: u64,
    pub seed: u64,
    pub tv_threshold: f64,
    /// Chi-square p-values at or below this fail the case.
    pub min_p_value: f64,
}

impl SuiteConfig {
    pub fn new(samples: u64, seed: u64, tv_threshold: f64) -> Self {
        SuiteConfig {
            samples,
            seed,
            tv_threshold,
            min_p_value: 0.001,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteCase {
    pub report: VerificationReport,
    pub chi_square: Option<ChiSquare>,
    /// Mean TV an exact sampler would show at this sample size.
    pub exact_floor: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteOutcome {
    pub cases: Vec<SuiteCase>,
    /// Combinations left out, with the reason.
    pub skipped: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.report.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCase> {
        self.cases.iter().filter(|c| !c.report.pass)
    }

    pub fn max_tv(&self) -> f64 {
        self.cases.iter().map(|c| c.report.tv).fold(0.0, f64::max)
    }

    fn merge(&mut self, other: SuiteOutcome) {
        self.cases.extend(other.cases);
        self.skipped.extend(other.skipped);
    }
}

fn compare<K: Ord>(
    test: String,
    exact: &ExactDistribution<K>,
    empirical: &Empirical<K>,
    cfg: &SuiteConfig,
    with_chi: bool,
) -> Result<SuiteCase> {
    let tv = tv_distance(empirical, exact)?;
    let chi = if with_chi {
        Some(chi_square(empirical, exact)?)
    } else {
        None
    };
    let mut report = VerificationReport::new(test, empirical.total(), tv, cfg.tv_threshold);
    if let Some(c) = &chi {
        report.pass &= c.p_value > cfg.min_p_value;
    }
    Ok(SuiteCase {
        report,
        chi_square: chi,
        exact_floor: Some(expected_exact_tv(exact, empirical.total())),
    })
}

fn below_threshold(graph: &Graph, lambda: &Rational, q: u32) -> Result<bool> {
    Ok(*lambda < critical_threshold(effective_delta(graph.max_degree()), q)?)
}

fn lambdas() -> [Rational; 2] {
    [rat(1, 10), rat(1, 5)]
}

/// Rooted sampler on every fixture, root, `lambda` in {1/10, 1/5} and
/// `q` in {1, 2}.
pub fn rooted_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut label = 0u64;
    for (name, graph) in small_fixtures(FIXTURE_SEED) {
        for lambda in lambdas() {
            for q in [1, 2] {
                if !below_threshold(&graph, &lambda, q)? {
                    out.skipped.push(format!(
                        "rooted/{name}/lambda={lambda}/q={q}: at or above threshold"
                    ));
                    continue;
                }
                for root in 0..graph.n() {
                    label += 1;
                    out.merge(rooted_case(&name, &graph, root, &lambda, q, cfg, label)?);
                }
            }
        }
    }
    Ok(out)
}

/// One rooted comparison.
pub fn rooted_case(
    name: &str,
    graph: &Graph,
    root: usize,
    lambda: &Rational,
    q: u32,
    cfg: &SuiteConfig,
    label: u64,
) -> Result<SuiteOutcome> {
    let spec = WeightSpec::uniform(lambda.clone(), q);
    let exact = exact_rooted_distribution(graph, root, &spec, DEFAULT_CAP)?;
    let mut sampler = RootedSampler::new(graph, spec)?;
    let mut src = RandomSource::new(cfg.seed).fork(label);
    let mut emp = Empirical::new();
    for _ in 0..cfg.samples {
        emp.push(sampler.sample(root, &mut src)?.graphlet.cells());
    }
    let test = format!("rooted/{name}/root={root}/lambda={lambda}/q={q}");
    Ok(SuiteOutcome {
        cases: vec![compare(test, &exact, &emp, cfg, true)?],
        skipped: Vec::new(),
    })
}

/// Unrooted sampler on every fixture with `lambda` in {1/10, 1/5}.
pub fn unrooted_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut label = 0u64;
    for (name, graph) in small_fixtures(FIXTURE_SEED) {
        for lambda in lambdas() {
            label += 1;
            if !below_threshold(&graph, &lambda, 1)? {
                out.skipped.push(format!(
                    "unrooted/{name}/lambda={lambda}: at or above threshold"
                ));
                continue;
            }
            let exact = exact_unrooted_distribution(&graph, &lambda, DEFAULT_CAP)?;
            let mut sampler = UnrootedSampler::new(&graph, lambda.clone())?;
            let mut src = RandomSource::new(cfg.seed).fork(label);
            let mut emp = Empirical::new();
            for _ in 0..cfg.samples {
                emp.push(sampler.sample(&mut src)?.graphlet.sorted_vertices());
            }
            let test = format!("unrooted/{name}/lambda={lambda}");
            out.cases.push(compare(test, &exact, &emp, cfg, true)?);
        }
    }
    Ok(out)
}

/// Polymer configurations as sorted polymer lists.
pub fn polymer_key(config: crate::polymer::PolymerConfig) -> Vec<Polymer> {
    let mut key = config.into_polymers();
    key.sort();
    key
}

/// Coupling from the past on P3, C4 and K1,3 with uniform weights.
pub fn polymer_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let hosts = [("P3", path(3)), ("C4", cycle(4)?), ("K1,3", star(3))];
    let mut label = 0u64;
    for (name, graph) in hosts {
        let graph = Arc::new(graph);
        for lambda in lambdas() {
            for q in [1, 2] {
                label += 1;
                if !below_threshold(&graph, &lambda, q)? {
                    out.skipped.push(format!(
                        "polymer/{name}/lambda={lambda}/q={q}: at or above threshold"
                    ));
                    continue;
                }
                let model = PolymerModel::uniform(Arc::clone(&graph), lambda.clone(), q)?;
                let exact = exact_polymer_distribution(&model, DEFAULT_CAP)?;
                let mut cftp = Cftp::new(&model)?;
                let mut src = RandomSource::new(cfg.seed).fork(label);
                let mut emp = Empirical::new();
                for _ in 0..cfg.samples {
                    emp.push(polymer_key(cftp.sample(&mut src)?.config));
                }
                let test = format!("polymer/{name}/lambda={lambda}/q={q}");
                out.cases.push(compare(test, &exact, &emp, cfg, true)?);
            }
        }
    }
    Ok(out)
}

/// C4 with sides {0,1} and {2,3}.
pub fn bipartite_c4() -> Graph {
    Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0)])
        .and_then(|g| g.with_bipartition(2))
        .expect("valid C4")
}

/// Hard-core sampler on C4 (`lambda = 1/10`) and K2,3 (`lambda = 1/20`).
pub fn hardcore_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let hosts = [
        ("C4", bipartite_c4(), rat(1, 10)),
        ("K2,3", complete_bipartite(2, 3), rat(1, 20)),
    ];
    for (label, (name, graph, lambda)) in hosts.into_iter().enumerate() {
        let graph = Arc::new(graph);
        let exact = exact_hardcore_distribution(&graph, &lambda)?;
        let sampler = HardcoreSampler::new(Arc::clone(&graph), lambda.clone())?;
        let mut src = RandomSource::new(cfg.seed).fork(label as u64);
        let mut emp = Empirical::new();
        for _ in 0..cfg.samples {
            emp.push(sampler.sample(&mut src)?.vertices);
        }
        let test = format!("hardcore/{name}/lambda={lambda}");
        out.cases.push(compare(test, &exact, &emp, cfg, true)?);
    }
    Ok(out)
}

/// Potts sampler on K4 with `q = 2`, `alpha = 2`, `beta = 3/2`.
pub fn potts_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let graph = Arc::new(complete(4));
    let params = PottsParams::new(2, rat(3, 2), rat(2, 1))?;
    let exact = exact_potts_majority_distribution(&graph, params.q, &params.beta)?;
    let sampler = PottsSampler::new(Arc::clone(&graph), params)?;
    let mut src = RandomSource::new(cfg.seed);
    let mut emp = Empirical::new();
    for _ in 0..cfg.samples {
        emp.push(sampler.sample(&mut src)?.colors);
    }
    let test = "potts/K4/q=2/alpha=2/beta=3/2".to_string();
    Ok(SuiteOutcome {
        cases: vec![compare(test, &exact, &emp, cfg, true)?],
        skipped: Vec::new(),
    })
}

/// Closed-form subtree counts against enumeration, `delta` in {3,4,5},
/// `k <= 7`. The report's `tv` is 0 on a match and 1 otherwise.
pub fn subtree_suite() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    for delta in 3..=5 {
        for k in 1..=7 {
            let ok = tree_subtree_count(delta, k)? == brute_force_subtree_count(delta, k)?;
            out.cases.push(SuiteCase {
                report: VerificationReport::new(
                    format!("subtrees/delta={delta}/k={k}"),
                    0,
                    if ok { 0.0 } else { 1.0 },
                    0.0,
                ),
                chi_square: None,
                exact_floor: None,
            });
        }
    }
    Ok(out)
}

/// Independent estimator runs on P2 and P4 (`lambda = 1/10`). Each report's
/// `tv` holds the relative error `|Z~ / Z - 1|` and `threshold` holds `eps`.
pub fn estimator_suite(runs: u64, seed: u64, eps: f64, delta: f64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let lambda = rat(1, 10);
    for (h, (name, graph)) in [("P2", path(2)), ("P4", path(4))].into_iter().enumerate() {
        let spec = WeightSpec::uniform(lambda.clone(), 1).with_empty(crate::exact::Prob::one());
        let z = z_f64(&exact_rooted_distribution(&graph, 0, &spec, DEFAULT_CAP)?);
        for run in 0..runs {
            let mut src = RandomSource::new(seed).fork(((h as u64) << 32) | run);
            let est = estimate_partition_function(&graph, 0, &lambda, eps, delta, &mut src)?;
            let rel = (est.estimate_f64() / z - 1.0).abs();
            out.cases.push(SuiteCase {
                report: VerificationReport::new(
                    format!("estimator/{name}/run={run}"),
                    est.samples_per_ratio * est.ratios.len() as u64,
                    rel,
                    eps,
                ),
                chi_square: None,
                exact_floor: None,
            });
        }
    }
    Ok(out)
}
