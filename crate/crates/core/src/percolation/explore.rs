use std::collections::HashSet;

use super::graphlet::{Color, LabeledGraphlet};
use crate::exact::{uniform_below, Coin, RandomSource};
use crate::graph::Adjacency;

/// Reusable buffers for the percolation breadth-first exploration.
///
/// Each reached vertex is decided exactly once: kept (and colored uniformly)
/// with probability `p_hat`, otherwise counted as boundary.
#[derive(Debug)]
pub struct Explorer {
    seen: Seen,
    pub(crate) vertices: Vec<usize>,
    pub(crate) colors: Vec<Color>,
    pub(crate) boundary: usize,
    cap: Option<usize>,
}

#[derive(Debug)]
enum Seen {
    Dense { stamp: Vec<u32>, epoch: u32 },
    Sparse(HashSet<usize>),
}

impl Seen {
    fn reset(&mut self) {
        match self {
            Seen::Dense { stamp, epoch } => {
                if *epoch == u32::MAX {
                    stamp.iter_mut().for_each(|s| *s = 0);
                    *epoch = 0;
                }
                *epoch += 1;
            }
            Seen::Sparse(set) => set.clear(),
        }
    }

    /// Marks `v`; returns whether it was unmarked.
    #[inline]
    fn insert(&mut self, v: usize) -> bool {
        match self {
            Seen::Dense { stamp, epoch } => {
                let fresh = stamp[v] != *epoch;
                stamp[v] = *epoch;
                fresh
            }
            Seen::Sparse(set) => set.insert(v),
        }
    }
}

impl Explorer {
    /// Buffers sized for a graph of the given order (`None` for implicit,
    /// possibly infinite graphs).
    pub fn new(order: Option<usize>) -> Self {
        let seen = match order {
            Some(n) => Seen::Dense {
                stamp: vec![0; n],
                epoch: 0,
            },
            None => Seen::Sparse(HashSet::new()),
        };
        Explorer {
            seen,
            vertices: Vec::new(),
            colors: Vec::new(),
            boundary: 0,
            cap: order.map(|n| 10 * n.max(1)),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn boundary_size(&self) -> usize {
        if self.vertices.is_empty() {
            1
        } else {
            self.boundary
        }
    }

    /// Runs one exploration from `root`. Returns `false` only if the safety
    /// cap on finite graphs was exceeded.
    pub fn explore<G: Adjacency>(
        &mut self,
        graph: &G,
        root: usize,
        keep: &Coin,
        q: u32,
        src: &mut RandomSource,
    ) -> bool {
        self.seen.reset();
        self.vertices.clear();
        self.colors.clear();
        self.boundary = 0;
        self.seen.insert(root);
        if !keep.flip(src) {
            return true;
        }
        let color = |src: &mut RandomSource| {
            if q == 1 {
                1
            } else {
                1 + uniform_below(q as u64, src) as Color
            }
        };
        self.vertices.push(root);
        self.colors.push(color(src));
        let Explorer {
            seen,
            vertices,
            colors,
            boundary,
            cap,
        } = self;
        let mut head = 0;
        while head < vertices.len() {
            let v = vertices[head];
            head += 1;
            graph.for_each_neighbor(v, |w| {
                if seen.insert(w) {
                    if keep.flip(src) {
                        vertices.push(w);
                        colors.push(color(src));
                    } else {
                        *boundary += 1;
                    }
                }
            });
            if let Some(cap) = *cap {
                if vertices.len() > cap {
                    return false;
                }
            }
        }
        true
    }

    pub fn graphlet(&self) -> LabeledGraphlet {
        LabeledGraphlet {
            root: self.vertices.first().copied(),
            vertices: self.vertices.clone(),
            colors: self.colors.clone(),
            boundary_size: self.boundary_size(),
        }
    }
}
