use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::model::PolymerModel;
use crate::error::{Error, Result};
use crate::exact::{int, pow, round_up, to_f64, Rational};
use crate::oracle::enumerate::{adjacency_masks, enumerate_polymers};
use crate::oracle::tree_subtree_count;

/// How to bound `sum over gamma incompatible with v of |gamma| w(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionMode {
    /// Enumerate every polymer; only for small hosts.
    Exhaustive { cap: usize },
    /// Counting bound: at most `(delta+1) T_k q^k` polymers of size `k` meet
    /// the closed neighborhood of a vertex, each of weight at most `lambda^k`.
    Analytic,
}

/// Outcome of checking the weight bound `w <= lambda^|gamma|` and the
/// perfect-sampling condition `sum |gamma| w(gamma) <= theta` at every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub mode: ConditionMode,
    /// `f <= 1` on every enumerated polymer (always true in analytic mode,
    /// where it is part of the model contract).
    pub weight_bound_holds: bool,
    /// Rigorous upper bound on the worst vertex sum; `None` if the counting
    /// series diverges.
    pub sum_bound: Option<Rational>,
    /// Vertex attaining the worst sum (exhaustive mode).
    pub worst_vertex: Option<usize>,
    pub theta: Option<Rational>,
    pub pass: bool,
}

impl ConditionReport {
    pub fn sum_bound_f64(&self) -> f64 {
        self.sum_bound.as_ref().map_or(f64::INFINITY, to_f64)
    }
}

const SERIES_BITS: u32 = 96;

pub fn check_conditions(
    model: &PolymerModel,
    mode: ConditionMode,
    theta: Option<&Rational>,
) -> Result<ConditionReport> {
    let theta = theta.or(model.theta()).cloned();
    if let Some(t) = &theta {
        if *t <= Rational::zero() || *t >= Rational::one() {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in (0, 1), got {t}"
            )));
        }
    }
    let (weight_bound_holds, sum_bound, worst_vertex) = match mode {
        ConditionMode::Exhaustive { cap } => exhaustive(model, cap)?,
        ConditionMode::Analytic => (true, analytic(model)?, None),
    };
    let pass = weight_bound_holds
        && match (&sum_bound, &theta) {
            (None, _) => false,
            (Some(s), Some(t)) => s <= t,
            (Some(s), None) => *s < Rational::one(),
        };
    Ok(ConditionReport {
        mode,
        weight_bound_holds,
        sum_bound,
        worst_vertex,
        theta,
        pass,
    })
}

fn exhaustive(model: &PolymerModel, cap: usize) -> Result<(bool, Option<Rational>, Option<usize>)> {
    let graph = model.graph();
    let adj = adjacency_masks(graph)?;
    let n = graph.n();
    let mut sums = vec![Rational::zero(); n];
    let mut bound_holds = true;
    for gamma in enumerate_polymers(graph, model.q(), cap)? {
        let f = model.factor(&gamma).enclose(64);
        if f.lo > Rational::one() {
            bound_holds = false;
        }
        let w = pow(model.lambda(), gamma.len()) * &f.hi;
        let term = w * BigInt::from(gamma.len());
        let mask = gamma.vertices().fold(0u64, |m, v| m | 1 << v);
        for (v, sum) in sums.iter_mut().enumerate() {
            if (mask & (adj[v] | 1 << v)) != 0 {
                *sum += &term;
            }
        }
    }
    let worst = (0..n).max_by(|&a, &b| sums[a].cmp(&sums[b]));
    Ok((bound_holds, worst.map(|v| sums[v].clone()), worst))
}

fn analytic(model: &PolymerModel) -> Result<Option<Rational>> {
    let delta = model.params().delta();
    let ql = model.lambda() * BigInt::from(model.q());
    // T_(k+1) / T_k tends to c: from below for delta >= 3 (the counts are
    // log-convex), from above as (k+1)/k for delta = 2. Either way the term
    // ratio past index K is at most c q lambda ((K+1)/K)^2.
    let c = if delta == 2 {
        Rational::one()
    } else {
        pow(&int(delta as i64 - 1), delta - 1) / pow(&int(delta as i64 - 2), delta - 2)
    };
    let rate = &c * &ql;
    if rate >= Rational::one() {
        return Ok(None);
    }
    let tail_ratio = |k: usize| {
        let kk = int(k as i64);
        &rate * pow(&((&kk + Rational::one()) / &kk), 2)
    };
    let mut k_max = 60usize;
    while tail_ratio(k_max) >= Rational::one() {
        k_max *= 2;
        if k_max > 20_000 {
            return Err(Error::InvalidArgument(
                "lambda too close to the threshold for the analytic bound".into(),
            ));
        }
    }
    let closed = int(delta as i64 + 1);
    let mut sum = Rational::zero();
    let mut last = Rational::zero();
    let mut power = Rational::one();
    for k in 1..=k_max {
        power = round_up(&(&power * &ql), SERIES_BITS * 4);
        let t_k = Rational::from_integer(BigInt::from(tree_subtree_count(delta, k)?));
        last = round_up(&(&closed * t_k * int(k as i64) * &power), SERIES_BITS);
        sum += &last;
    }
    let r = tail_ratio(k_max);
    let tail = &last * &r / (Rational::one() - &r);
    Ok(Some(round_up(&(sum + tail), SERIES_BITS)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::{e_enclosure, rat};
    use crate::graph::Graph;
    use crate::percolation::WeightSpec;

    #[test]
    fn p3_exhaustive_middle_vertex() {
        let g: Graph = "3 2\n0 1\n1 2".parse().unwrap();
        let model = PolymerModel::uniform(Arc::new(g), rat(1, 10), 1).unwrap();
        let report = check_conditions(
            &model,
            ConditionMode::Exhaustive { cap: 1000 },
            Some(&rat(9, 10)),
        )
        .unwrap();
        assert_eq!(report.worst_vertex, Some(1));
        assert_eq!(report.sum_bound, Some(rat(343, 1000)));
        assert!(report.pass);
    }

    #[test]
    fn vanishing_weights_pass() {
        let g: Graph = "4 3\n0 1\n0 2\n0 3".parse().unwrap();
        let model = PolymerModel::new(Arc::new(g), WeightSpec::vanishing(rat(1, 5), 1)).unwrap();
        let report = check_conditions(
            &model,
            ConditionMode::Exhaustive { cap: 1000 },
            Some(&rat(1, 100)),
        )
        .unwrap();
        assert_eq!(report.sum_bound, Some(rat(0, 1)));
        assert!(report.pass);
    }

    #[test]
    fn oversized_factor_detected() {
        let g: Graph = "2 1\n0 1".parse().unwrap();
        let spec = WeightSpec::custom(rat(1, 10), 1, |_| crate::exact::Prob::Exact(rat(2, 1)));
        let model = PolymerModel::new(Arc::new(g), spec).unwrap();
        let report =
            check_conditions(&model, ConditionMode::Exhaustive { cap: 100 }, None).unwrap();
        assert!(!report.weight_bound_holds);
        assert!(!report.pass);
    }

    #[test]
    fn analytic_certifies_below_one_over_e_q_delta() {
        // lambda = 0.9 / (3e), rounded up to a rational
        let e_lo = e_enclosure(64).lo;
        let lambda = round_up(&(rat(9, 30) / e_lo), 40);
        let g: Graph = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3".parse().unwrap();
        let model = PolymerModel::uniform(Arc::new(g), lambda, 1).unwrap();
        let report = check_conditions(&model, ConditionMode::Analytic, None).unwrap();
        assert!(report.pass, "bound {}", report.sum_bound_f64());
        assert!(report.sum_bound_f64() < 1.0);
    }

    #[test]
    fn subtree_ratios_increase_towards_growth_rate() {
        for delta in 3usize..=6 {
            let c = pow(&int(delta as i64 - 1), delta - 1) / pow(&int(delta as i64 - 2), delta - 2);
            let mut prev = Rational::zero();
            for k in 1..150 {
                let a = Rational::from_integer(BigInt::from(tree_subtree_count(delta, k).unwrap()));
                let b =
                    Rational::from_integer(BigInt::from(tree_subtree_count(delta, k + 1).unwrap()));
                let ratio = b / a;
                assert!(ratio >= prev && ratio < c, "delta={delta} k={k}");
                prev = ratio;
            }
        }
    }

    #[test]
    fn analytic_dominates_exhaustive() {
        let g: Graph = "4 4\n0 1\n1 2\n2 3\n3 0".parse().unwrap();
        let model = PolymerModel::uniform(Arc::new(g), rat(1, 10), 2).unwrap();
        let ex = check_conditions(&model, ConditionMode::Exhaustive { cap: 10_000 }, None).unwrap();
        let an = check_conditions(&model, ConditionMode::Analytic, None).unwrap();
        assert!(ex.sum_bound.unwrap() <= an.sum_bound.unwrap());
    }
}
