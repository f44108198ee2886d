use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::model::{Polymer, PolymerModel, NU_SCALE};
use crate::error::Result;
use crate::exact::{pow, Coin, RandomSource, Rational};
use crate::graph::Graph;
use crate::percolation::RootedSampler;

/// Sampler for the single-polymer proposal `nu_v`: a polymer `gamma`
/// containing `v` with probability `w(gamma) / 40`, and no polymer otherwise.
///
/// One explore-and-filter round with `f(empty) = 1` outputs `gamma` with
/// probability `(1 - p_hat)^2 w(gamma)`; keeping a non-empty output with
/// probability `1 / (40 (1 - p_hat)^2)` leaves exactly `w(gamma) / 40`.
#[derive(Debug)]
pub struct NuSampler {
    rooted: RootedSampler<Arc<Graph>>,
    thin: Coin,
}

impl NuSampler {
    pub fn new(model: &PolymerModel) -> Result<Self> {
        let rooted = RootedSampler::with_params(
            Arc::clone(model.graph()),
            model.spec().clone(),
            model.params().clone(),
        )?;
        let stay = Rational::one() - model.params().p_hat();
        let thin = Coin::new(&(pow(&stay, 2) * BigInt::from(NU_SCALE)).recip())?;
        Ok(NuSampler { rooted, thin })
    }

    pub fn sample(&mut self, v: usize, src: &mut RandomSource) -> Result<Option<Polymer>> {
        match self.rooted.single_iteration(v, src)? {
            Some(gamma) if !gamma.is_empty() && self.thin.flip(src) => {
                Ok(Some(Polymer::from_graphlet(&gamma)))
            }
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn vanishing_weights_never_propose() {
        let g: Arc<Graph> = Arc::new("4 3\n0 1\n0 2\n0 3".parse().unwrap());
        let spec = crate::percolation::WeightSpec::vanishing(rat(1, 5), 1);
        let model = PolymerModel::new(g, spec).unwrap();
        let mut nu = NuSampler::new(&model).unwrap();
        let mut src = RandomSource::new(1);
        for _ in 0..2000 {
            assert_eq!(nu.sample(0, &mut src).unwrap(), None);
        }
    }

    #[test]
    fn proposals_contain_v() {
        let g: Arc<Graph> = Arc::new("4 4\n0 1\n1 2\n2 3\n3 0".parse().unwrap());
        let model = PolymerModel::uniform(g, rat(1, 5), 2).unwrap();
        let mut nu = NuSampler::new(&model).unwrap();
        let mut src = RandomSource::new(2);
        let mut hits = 0;
        for i in 0..20_000 {
            let v = i % 4;
            if let Some(gamma) = nu.sample(v, &mut src).unwrap() {
                assert!(gamma.contains_vertex(v));
                hits += 1;
            }
        }
        assert!(hits > 0);
    }
}
