use super::bounding::BoundingState;
use super::dynamics::{Move, MoveSampler};
use super::model::{PolymerConfig, PolymerModel};
use super::nu::NuSampler;
use crate::error::{Error, Result};
use crate::exact::RandomSource;

/// Result of one perfect draw from the polymer Gibbs measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CftpOutcome {
    pub config: PolymerConfig,
    /// Bounding-chain steps summed over all rounds.
    pub steps: u64,
    /// Horizon `T` of the round that coalesced.
    pub horizon: u64,
    pub rounds: u32,
}

/// Coupling from the past driven by the bounding chain.
///
/// Round `k` restarts `(B, D) = ({}, all polymers)` at time `-2^k` and runs
/// to time 0. Moves are drawn once per time index and replayed verbatim in
/// later rounds; only the indices new to a round consume fresh randomness.
///
/// ```
/// use std::sync::Arc;
/// use graphlet_gibbs::exact::{rat, RandomSource};
/// use graphlet_gibbs::polymer::{Cftp, PolymerModel};
/// use graphlet_gibbs::Graph;
///
/// let path: Graph = "3 2\n0 1\n1 2".parse().unwrap();
/// let model = PolymerModel::uniform(Arc::new(path), rat(1, 10), 1).unwrap();
/// let mut cftp = Cftp::new(&model).unwrap();
/// let outcome = cftp.sample(&mut RandomSource::new(1)).unwrap();
/// assert!(outcome.config.covered() <= 3);
/// ```
#[derive(Debug)]
pub struct Cftp<'m> {
    model: &'m PolymerModel,
    moves: MoveSampler,
    step_cap: u64,
}

impl<'m> Cftp<'m> {
    pub fn new(model: &'m PolymerModel) -> Result<Self> {
        let moves = MoveSampler::new(model.n(), NuSampler::new(model)?)?;
        Ok(Cftp {
            model,
            moves,
            step_cap: 1_000_000u64.saturating_mul(model.n() as u64),
        })
    }

    /// Total bounding-chain steps allowed per draw before giving up.
    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn sample(&mut self, src: &mut RandomSource) -> Result<CftpOutcome> {
        let graph = self.model.graph().as_ref();
        // moves[i] is the move at time -(i + 1)
        let mut log: Vec<Move> = Vec::new();
        let mut steps = 0u64;
        let mut horizon = 2u64;
        let mut rounds = 0;
        loop {
            rounds += 1;
            while (log.len() as u64) < horizon {
                let t = -(log.len() as i64 + 1);
                log.push(self.moves.draw(t, src)?);
            }
            let mut state = BoundingState::new(self.model.n());
            for mv in log.iter().rev() {
                state.apply(graph, mv);
            }
            steps += horizon;
            if state.coalesced() {
                return Ok(CftpOutcome {
                    config: state.into_lower(),
                    steps,
                    horizon,
                    rounds,
                });
            }
            if steps.saturating_add(2 * horizon) > self.step_cap {
                return Err(Error::StepBudgetExceeded(self.step_cap));
            }
            horizon *= 2;
        }
    }
}

/// One-shot perfect sample from the polymer Gibbs measure.
pub fn cftp_sample(model: &PolymerModel, src: &mut RandomSource) -> Result<CftpOutcome> {
    Cftp::new(model)?.sample(src)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::rat;
    use crate::graph::Graph;
    use crate::percolation::WeightSpec;

    fn p3() -> Arc<Graph> {
        Arc::new("3 2\n0 1\n1 2".parse().unwrap())
    }

    #[test]
    fn vanishing_weights_give_empty_config() {
        let model = PolymerModel::new(p3(), WeightSpec::vanishing(rat(1, 10), 1)).unwrap();
        let mut cftp = Cftp::new(&model).unwrap();
        let mut src = RandomSource::new(3);
        for _ in 0..200 {
            assert!(cftp.sample(&mut src).unwrap().config.is_empty());
        }
    }

    #[test]
    fn replay() {
        let model = PolymerModel::uniform(p3(), rat(1, 5), 2).unwrap();
        let run = |seed| {
            let mut cftp = Cftp::new(&model).unwrap();
            let mut src = RandomSource::new(seed);
            (0..50)
                .map(|_| cftp.sample(&mut src).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(8), run(8));
    }

    #[test]
    fn step_cap_is_reported() {
        let model = PolymerModel::uniform(p3(), rat(1, 10), 1).unwrap();
        let mut cftp = Cftp::new(&model).unwrap().with_step_cap(4);
        let mut src = RandomSource::new(5);
        let mut saw_cap = false;
        for _ in 0..50 {
            if let Err(Error::StepBudgetExceeded(4)) = cftp.sample(&mut src) {
                saw_cap = true;
            }
        }
        assert!(saw_cap);
    }
}
