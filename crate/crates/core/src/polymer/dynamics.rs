use num_bigint::BigInt;
use num_traits::One;

use super::model::{Polymer, PolymerConfig, NU_SCALE};
use super::nu::NuSampler;
use crate::error::{Error, Result};
use crate::exact::{uniform_below, Coin, RandomSource, Rational};
use crate::graph::Graph;

/// What a move does at its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Remove every polymer containing the vertex.
    Delete,
    /// Propose a polymer drawn from `nu_v`; `None` is the empty proposal.
    Insert(Option<Polymer>),
}

/// One step of randomness for the polymer dynamics, shared by every coupled
/// copy of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub t: i64,
    pub v: usize,
    pub branch: Branch,
}

/// Draws moves: a uniform vertex, then delete with probability 1/41 and
/// otherwise an insert proposal from `nu_v`.
#[derive(Debug)]
pub struct MoveSampler {
    n: usize,
    nu: NuSampler,
    delete: Coin,
}

impl MoveSampler {
    pub fn new(n: usize, nu: NuSampler) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("host graph has no vertices".into()));
        }
        let delete = Coin::new(&Rational::new(BigInt::one(), BigInt::from(NU_SCALE + 1)))?;
        Ok(MoveSampler { n, nu, delete })
    }

    pub fn draw(&mut self, t: i64, src: &mut RandomSource) -> Result<Move> {
        let v = uniform_below(self.n as u64, src) as usize;
        let branch = if self.delete.flip(src) {
            Branch::Delete
        } else {
            Branch::Insert(self.nu.sample(v, src)?)
        };
        Ok(Move { t, v, branch })
    }
}

/// Deterministic update of one copy of the polymer dynamics.
///
/// ```
/// use graphlet_gibbs::polymer::{polymer_dynamics_step, Branch, Move, Polymer, PolymerConfig};
/// use graphlet_gibbs::Graph;
///
/// let g: Graph = "3 2\n0 1\n1 2".parse().unwrap();
/// let mut config = PolymerConfig::empty(3);
/// let gamma = Polymer::singleton(0, 1);
/// let insert = Move { t: -1, v: 0, branch: Branch::Insert(Some(gamma.clone())) };
/// polymer_dynamics_step(&g, &mut config, &insert).unwrap();
/// assert!(config.contains(&gamma));
/// ```
pub fn polymer_dynamics_step(graph: &Graph, config: &mut PolymerConfig, mv: &Move) -> Result<()> {
    if mv.v >= graph.n() {
        return Err(Error::VertexOutOfRange {
            vertex: mv.v,
            n: graph.n(),
        });
    }
    match &mv.branch {
        Branch::Delete => {
            config.remove_containing(mv.v);
        }
        Branch::Insert(Some(gamma)) => {
            if !config.contains(gamma) {
                config.try_insert(graph, gamma.clone());
            }
        }
        Branch::Insert(None) => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exact::rat;
    use crate::polymer::PolymerModel;

    fn p3() -> Graph {
        "3 2\n0 1\n1 2".parse().unwrap()
    }

    fn mv(v: usize, branch: Branch) -> Move {
        Move { t: 0, v, branch }
    }

    #[test]
    fn step_cases() {
        let g = p3();
        let g1 = Polymer::new(vec![(0, 1), (1, 1)]).unwrap();
        let mut c = PolymerConfig::from_polymers(&g, [g1.clone()]).unwrap();
        polymer_dynamics_step(
            &g,
            &mut c,
            &mv(2, Branch::Insert(Some(Polymer::singleton(2, 1)))),
        )
        .unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![&g1]);
        polymer_dynamics_step(&g, &mut c, &mv(1, Branch::Insert(Some(g1.clone())))).unwrap();
        assert_eq!(c.len(), 1);
        polymer_dynamics_step(&g, &mut c, &mv(0, Branch::Delete)).unwrap();
        assert!(c.is_empty());
        polymer_dynamics_step(&g, &mut c, &mv(1, Branch::Insert(None))).unwrap();
        assert!(c.is_empty());
        assert!(polymer_dynamics_step(&g, &mut c, &mv(3, Branch::Delete)).is_err());
    }

    #[test]
    fn moves_replay() {
        let model = PolymerModel::uniform(Arc::new(p3()), rat(1, 10), 1).unwrap();
        let draw = |seed| {
            let mut ms = MoveSampler::new(3, NuSampler::new(&model).unwrap()).unwrap();
            let mut src = RandomSource::new(seed);
            (0..100)
                .map(|t| ms.draw(-t, &mut src).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        for m in draw(9) {
            if let Branch::Insert(Some(gamma)) = &m.branch {
                assert!(gamma.contains_vertex(m.v));
            }
        }
    }
}
