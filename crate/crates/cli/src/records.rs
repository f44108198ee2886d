use graphlet_gibbs::percolation::{Color, LabeledGraphlet};
use graphlet_gibbs::polymer::PolymerConfig;
use serde::Serialize;

/// One sampled vertex set. `colors` (aligned with `vertices`) is present
/// when the model is labeled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphletRecord {
    pub vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<Color>>,
    pub size: usize,
    pub iterations: u64,
}

impl GraphletRecord {
    pub fn from_graphlet(gamma: &LabeledGraphlet, labeled: bool, iterations: u64) -> Self {
        let (vertices, colors): (Vec<usize>, Vec<Color>) = gamma.cells().into_iter().unzip();
        GraphletRecord {
            size: vertices.len(),
            vertices,
            colors: labeled.then_some(colors),
            iterations,
        }
    }

    pub fn from_vertices(vertices: Vec<usize>, iterations: u64) -> Self {
        GraphletRecord {
            size: vertices.len(),
            vertices,
            colors: None,
            iterations,
        }
    }
}

/// A polymer configuration: the covered vertices plus the individual
/// polymers. `iterations` counts horizon doublings and `steps` the
/// bounding-chain steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolymerRecord {
    pub vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<Color>>,
    pub size: usize,
    pub iterations: u64,
    pub steps: u64,
    pub polymers: Vec<Vec<usize>>,
}

impl PolymerRecord {
    pub fn new(config: &PolymerConfig, labeled: bool, iterations: u64, steps: u64) -> Self {
        let mut cells: Vec<(usize, Color)> = config
            .iter()
            .flat_map(|p| p.cells().iter().copied())
            .collect();
        cells.sort_unstable();
        let (vertices, colors): (Vec<usize>, Vec<Color>) = cells.into_iter().unzip();
        let mut polymers: Vec<Vec<usize>> = config.iter().map(|p| p.vertices().collect()).collect();
        polymers.sort();
        PolymerRecord {
            size: vertices.len(),
            vertices,
            colors: labeled.then_some(colors),
            iterations,
            steps,
            polymers,
        }
    }
}

/// A full coloring; `ground` is the majority color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PottsRecord {
    pub vertices: Vec<usize>,
    pub colors: Vec<Color>,
    pub size: usize,
    pub iterations: u64,
    pub steps: u64,
    pub ground: Color,
}
