use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use graphlet_gibbs::exact::{to_f64, RandomSource, Rational};
use graphlet_gibbs::oracle::estimate_partition_function;
use graphlet_gibbs::oracle::suites::{self, SuiteConfig, SuiteOutcome};
use graphlet_gibbs::percolation::{
    critical_threshold, effective_delta, RootedSampler, UnrootedSampler, WeightSpec,
};
use graphlet_gibbs::polymer::{check_conditions, Cftp, ConditionMode, PolymerModel};
use graphlet_gibbs::spin::{
    check_potts_condition, check_unbalanced_condition, HardcoreSampler, PottsParams, PottsSampler,
};
use graphlet_gibbs::Graph;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::records::{GraphletRecord, PolymerRecord, PottsRecord};
use crate::{source, CliError, CliResult, Command, Mode, Model, SampleOpts, Suite};

const CHUNK: u64 = 1024;
const EXHAUSTIVE_MAX_N: usize = 10;

fn load_graph(path: &Path) -> CliResult<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.parse()?)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Input(format!("--{flag} is required for this model")))
}

/// Draws `opts.samples` records, sample `i` from `base.fork(i)`, and writes
/// them in index order. `make` builds per-worker sampler state.
fn emit<S, R, M, D>(
    opts: &SampleOpts,
    make: M,
    draw: D,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()>
where
    S: Send,
    R: Serialize + Send,
    M: Fn() -> graphlet_gibbs::Result<S> + Sync,
    D: Fn(&mut S, &mut RandomSource) -> graphlet_gibbs::Result<(R, u64)> + Sync,
{
    let base = source(opts.seed);
    let start = Instant::now();
    let mut state = make()?;
    let pool = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| CliError::Input(e.to_string()))?;
        Some(pool)
    } else {
        None
    };
    let mut iterations = 0u64;
    let mut lo = 0;
    while lo < opts.samples {
        let hi = (lo + CHUNK).min(opts.samples);
        let batch: Vec<graphlet_gibbs::Result<(R, u64)>> = match &pool {
            Some(pool) => pool.install(|| {
                (lo..hi)
                    .into_par_iter()
                    .map_init(
                        || make().expect("sampler construction succeeded once"),
                        |s, i| draw(s, &mut base.fork(i)),
                    )
                    .collect()
            }),
            None => (lo..hi)
                .map(|i| draw(&mut state, &mut base.fork(i)))
                .collect(),
        };
        for r in batch {
            let (record, it) = r?;
            write_json(out, &record)?;
            iterations += it;
        }
        lo = hi;
    }
    out.flush()?;
    writeln!(
        err,
        "seed={} samples={} mean_iterations={:.3} elapsed={:.3}s",
        base.seed(),
        opts.samples,
        iterations as f64 / opts.samples.max(1) as f64,
        start.elapsed().as_secs_f64()
    )?;
    Ok(())
}

pub(crate) fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::SampleRooted {
            graph,
            root,
            lambda,
            colors,
            opts,
        } => {
            let g = load_graph(&graph)?;
            g.checked_neighbors(root)?;
            let spec = WeightSpec::uniform(lambda, colors);
            let labeled = colors > 1;
            emit(
                &opts,
                || RootedSampler::new(&g, spec.clone()),
                |s, src| {
                    let sample = s.sample(root, src)?;
                    let record =
                        GraphletRecord::from_graphlet(&sample.graphlet, labeled, sample.iterations);
                    Ok((record, sample.iterations))
                },
                out,
                err,
            )
        }
        Command::SampleUnrooted {
            graph,
            lambda,
            opts,
        } => {
            let g = load_graph(&graph)?;
            emit(
                &opts,
                || UnrootedSampler::new(&g, lambda.clone()),
                |s, src| {
                    let sample = s.sample(src)?;
                    let record =
                        GraphletRecord::from_graphlet(&sample.graphlet, false, sample.iterations);
                    Ok((record, sample.iterations))
                },
                out,
                err,
            )
        }
        Command::SamplePolymer {
            graph,
            model,
            lambda,
            colors,
            theta,
            opts,
        } => {
            if model != Model::Uniform {
                return Err(CliError::Input(
                    "sample-polymer supports --model uniform; use sample-hardcore or sample-potts"
                        .into(),
                ));
            }
            let g = Arc::new(load_graph(&graph)?);
            let mut m = PolymerModel::uniform(g, lambda, colors)?;
            if let Some(t) = theta {
                m = m.with_theta(t);
                let mode = if m.n() <= EXHAUSTIVE_MAX_N {
                    ConditionMode::Exhaustive {
                        cap: graphlet_gibbs::oracle::enumerate::DEFAULT_CAP,
                    }
                } else {
                    ConditionMode::Analytic
                };
                let report = check_conditions(&m, mode, None)?;
                if !report.pass {
                    return Err(graphlet_gibbs::Error::ConditionFailed {
                        condition: "perfect sampling",
                        detail: format!(
                            "sum over polymers meeting N[v] of |gamma| w(gamma) <= {:.6} is not at most theta = {}",
                            report.sum_bound_f64(),
                            m.theta().expect("set above")
                        ),
                    }
                    .into());
                }
            }
            let labeled = colors > 1;
            emit(
                &opts,
                || Cftp::new(&m),
                |cftp, src| {
                    let o = cftp.sample(src)?;
                    let record = PolymerRecord::new(&o.config, labeled, o.rounds as u64, o.steps);
                    Ok((record, o.rounds as u64))
                },
                out,
                err,
            )
        }
        Command::SampleHardcore {
            graph,
            lambda,
            opts,
        } => {
            let g = Arc::new(load_graph(&graph)?);
            let sampler = HardcoreSampler::new(g, lambda)?;
            emit(
                &opts,
                || Ok(()),
                |_, src| {
                    let s = sampler.sample(src)?;
                    let mut record = GraphletRecord::from_vertices(s.vertices, s.rounds as u64);
                    record.iterations = s.rounds as u64;
                    Ok((
                        HardcoreRecord {
                            record,
                            steps: s.steps,
                        },
                        s.rounds as u64,
                    ))
                },
                out,
                err,
            )
        }
        Command::SamplePotts {
            graph,
            colors,
            beta,
            alpha,
            opts,
        } => {
            let g = Arc::new(load_graph(&graph)?);
            let n = g.n();
            let sampler = PottsSampler::new(g, PottsParams::new(colors, beta, alpha)?)?;
            emit(
                &opts,
                || Ok(()),
                |_, src| {
                    let s = sampler.sample(src)?;
                    let record = PottsRecord {
                        vertices: (0..n).collect(),
                        colors: s.colors,
                        size: n,
                        iterations: s.attempts as u64,
                        steps: s.steps,
                        ground: s.ground,
                    };
                    Ok((record, s.attempts as u64))
                },
                out,
                err,
            )
        }
        Command::Check {
            graph,
            model,
            lambda,
            colors,
            theta,
            mode,
            beta,
            alpha,
        } => {
            let g = load_graph(&graph)?;
            let pass = match model {
                Model::Uniform => {
                    check_uniform(&g, require(lambda, "lambda")?, colors, theta, mode, out)?
                }
                Model::Hardcore => {
                    let lambda = require(lambda, "lambda")?;
                    let r = check_unbalanced_condition(&g, &lambda)?;
                    write_json(
                        out,
                        &json!({
                            "model": "hardcore",
                            "lambda": lambda.to_string(),
                            "delta_l": r.params.delta_l,
                            "delta_r": r.params.delta_r,
                            "min_r": r.params.min_r,
                            "lhs": r.lhs,
                            "rhs": r.rhs,
                            "slack": r.slack(),
                            "pass": r.pass,
                        }),
                    )?;
                    r.pass
                }
                Model::Potts => {
                    let (beta, alpha) = (require(beta, "beta")?, require(alpha, "alpha")?);
                    let delta = g.max_degree().max(3);
                    let r = check_potts_condition(delta, colors, &alpha, &beta)?;
                    write_json(
                        out,
                        &json!({
                            "model": "potts",
                            "delta": delta,
                            "q": colors,
                            "alpha": alpha.to_string(),
                            "beta": beta.to_string(),
                            "beta_threshold": r.beta_threshold,
                            "margin": r.margin(),
                            "pass": r.pass,
                        }),
                    )?;
                    r.pass
                }
            };
            if pass {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::Verify {
            suite,
            samples,
            seed,
            threshold,
            runs,
        } => verify(suite, samples, seed, threshold, runs, out, err),
        Command::EstimateZ {
            graph,
            root,
            lambda,
            eps,
            delta,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let mut src = source(seed);
            let start = Instant::now();
            let z = estimate_partition_function(&g, root, &lambda, eps, delta, &mut src)?;
            write_json(
                out,
                &json!({
                    "estimate": z.estimate_f64(),
                    "removed": z.removed,
                    "ratios": z.ratios,
                    "samples_per_ratio": z.samples_per_ratio,
                }),
            )?;
            writeln!(
                err,
                "seed={} elapsed={:.3}s",
                src.seed(),
                start.elapsed().as_secs_f64()
            )?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct HardcoreRecord {
    #[serde(flatten)]
    record: GraphletRecord,
    steps: u64,
}

fn check_uniform(
    g: &Graph,
    lambda: Rational,
    q: u32,
    theta: Option<Rational>,
    mode: Option<Mode>,
    out: &mut dyn Write,
) -> CliResult<bool> {
    let delta = effective_delta(g.max_degree());
    let threshold = critical_threshold(delta, q)?;
    let below = lambda < threshold;
    let mut report = json!({
        "model": "uniform",
        "lambda": lambda.to_string(),
        "delta": delta,
        "q": q,
        "lambda_threshold": threshold.to_string(),
        "lambda_threshold_f64": to_f64(&threshold),
        "below_threshold": below,
    });
    let mut pass = below;
    if below {
        let model = PolymerModel::uniform(Arc::new(g.clone()), lambda, q)?;
        let mode = match mode {
            Some(Mode::Analytic) => ConditionMode::Analytic,
            Some(Mode::Exhaustive) => ConditionMode::Exhaustive {
                cap: graphlet_gibbs::oracle::enumerate::DEFAULT_CAP,
            },
            None if g.n() <= EXHAUSTIVE_MAX_N => ConditionMode::Exhaustive {
                cap: graphlet_gibbs::oracle::enumerate::DEFAULT_CAP,
            },
            None => ConditionMode::Analytic,
        };
        let r = check_conditions(&model, mode, theta.as_ref())?;
        report["mode"] = json!(if matches!(mode, ConditionMode::Analytic) {
            "analytic"
        } else {
            "exhaustive"
        });
        report["sum_bound"] = json!(r.sum_bound_f64());
        report["theta"] = json!(r.theta.as_ref().map(|t| t.to_string()));
        report["weight_bound_holds"] = json!(r.weight_bound_holds);
        pass = r.pass;
    }
    report["pass"] = json!(pass);
    write_json(out, &report)?;
    Ok(pass)
}

fn verify(
    suite: Suite,
    samples: u64,
    seed: Option<u64>,
    threshold: Option<f64>,
    runs: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let seed = source(seed).seed();
    let tv = threshold.unwrap_or(if suite == Suite::Potts { 0.02 } else { 0.015 });
    let cfg = SuiteConfig::new(samples, seed, tv);
    let start = Instant::now();
    let outcome: SuiteOutcome = match suite {
        Suite::Rooted => suites::rooted_suite(&cfg)?,
        Suite::Unrooted => suites::unrooted_suite(&cfg)?,
        Suite::Polymer => suites::polymer_suite(&cfg)?,
        Suite::Hardcore => suites::hardcore_suite(&cfg)?,
        Suite::Potts => suites::potts_suite(&cfg)?,
        Suite::Subtrees => suites::subtree_suite()?,
        Suite::Estimator => suites::estimator_suite(runs, seed, 0.2, 0.1)?,
    };
    for case in &outcome.cases {
        write_json(out, &case.report)?;
    }
    for skip in &outcome.skipped {
        writeln!(err, "skipped {skip}")?;
    }
    let failed = outcome.failures().count();
    writeln!(
        err,
        "seed={seed} cases={} failed={failed} elapsed={:.3}s",
        outcome.cases.len(),
        start.elapsed().as_secs_f64()
    )?;
    let ok = if suite == Suite::Estimator {
        // the estimator guarantee is per run with probability 1 - delta
        (outcome.cases.len() - failed) as f64 >= 0.85 * outcome.cases.len() as f64
    } else {
        failed == 0
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(failed))
    }
}
