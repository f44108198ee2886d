use std::fmt;
use std::sync::Arc;

use crate::exact::{Prob, Rational};

/// Vertex colors run over `1..=q`.
pub type Color = u32;

/// A connected vertex-induced subgraph with one color per vertex, as
/// produced by the percolation exploration.
///
/// `vertices` is in discovery order with the root first. The empty graphlet
/// has no root and, by convention, a boundary of size 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledGraphlet {
    pub root: Option<usize>,
    pub vertices: Vec<usize>,
    pub colors: Vec<Color>,
    pub boundary_size: usize,
}

impl LabeledGraphlet {
    pub fn empty() -> Self {
        LabeledGraphlet {
            root: None,
            vertices: Vec::new(),
            colors: Vec::new(),
            boundary_size: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `(vertex, color)` pairs sorted by vertex: a canonical form for
    /// equality of labeled vertex sets.
    pub fn cells(&self) -> Vec<(usize, Color)> {
        let mut cells: Vec<_> = self
            .vertices
            .iter()
            .copied()
            .zip(self.colors.iter().copied())
            .collect();
        cells.sort_unstable();
        cells
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs
    }
}

type FactorFn = dyn Fn(&LabeledGraphlet) -> Prob + Send + Sync;

/// Weight `w(gamma) = lambda^|gamma| f(gamma)` with `0 <= f <= 1`.
///
/// `f` on non-empty graphlets is either identically 1, identically 0, or a
/// user function; `f(empty)` is stored separately and defaults to 0.
#[derive(Clone)]
pub struct WeightSpec {
    lambda: Rational,
    q: u32,
    empty: Prob,
    factor: Factor,
}

#[derive(Clone)]
enum Factor {
    One,
    Zero,
    Custom(Arc<FactorFn>),
}

impl WeightSpec {
    /// `f = 1` on every non-empty graphlet.
    pub fn uniform(lambda: Rational, q: u32) -> Self {
        WeightSpec {
            lambda,
            q,
            empty: Prob::zero(),
            factor: Factor::One,
        }
    }

    /// `f = 0` on every non-empty graphlet.
    pub fn vanishing(lambda: Rational, q: u32) -> Self {
        WeightSpec {
            lambda,
            q,
            empty: Prob::zero(),
            factor: Factor::Zero,
        }
    }

    pub fn custom<F>(lambda: Rational, q: u32, f: F) -> Self
    where
        F: Fn(&LabeledGraphlet) -> Prob + Send + Sync + 'static,
    {
        WeightSpec {
            lambda,
            q,
            empty: Prob::zero(),
            factor: Factor::Custom(Arc::new(f)),
        }
    }

    /// Sets `f(empty)`.
    pub fn with_empty(mut self, f_empty: Prob) -> Self {
        self.empty = f_empty;
        self
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn empty_factor(&self) -> &Prob {
        &self.empty
    }

    pub fn factor(&self, gamma: &LabeledGraphlet) -> Prob {
        if gamma.is_empty() {
            return self.empty.clone();
        }
        match &self.factor {
            Factor::One => Prob::one(),
            Factor::Zero => Prob::zero(),
            Factor::Custom(f) => f(gamma),
        }
    }

    pub(crate) fn factor_is_one(&self) -> bool {
        matches!(self.factor, Factor::One)
    }

    pub(crate) fn factor_is_zero(&self) -> bool {
        matches!(self.factor, Factor::Zero)
    }
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = match self.factor {
            Factor::One => "one",
            Factor::Zero => "zero",
            Factor::Custom(_) => "custom",
        };
        f.debug_struct("WeightSpec")
            .field("lambda", &self.lambda)
            .field("q", &self.q)
            .field("empty", &self.empty)
            .field("factor", &factor)
            .finish()
    }
}
