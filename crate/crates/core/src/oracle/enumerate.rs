//! Exhaustive enumeration of connected vertex sets, labeled graphlets,
//! polymers and polymer configurations on small graphs.
//!
//! Vertex sets are `u64` bitmasks, so these routines accept graphs with at
//! most 64 vertices.

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph};
use crate::percolation::{Color, LabeledGraphlet};
use crate::polymer::Polymer;

pub const DEFAULT_CAP: usize = 1_000_000;

pub(crate) fn adjacency_masks(graph: &Graph) -> Result<Vec<u64>> {
    if graph.n() > 64 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration supports at most 64 vertices, got {}",
            graph.n()
        )));
    }
    Ok((0..graph.n())
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect())
}

pub fn mask_vertices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub(crate) fn neighborhood(adj: &[u64], mask: u64) -> u64 {
    mask_vertices(mask).iter().fold(0, |m, &v| m | adj[v])
}

/// Vertices outside `mask` adjacent to it.
pub(crate) fn boundary(adj: &[u64], mask: u64) -> u64 {
    neighborhood(adj, mask) & !mask
}

/// All connected vertex sets containing `root`, found by the
/// include/exclude recursion over the frontier: each branch adds one
/// frontier vertex and forbids the frontier vertices tried before it.
pub fn connected_sets_containing(graph: &Graph, root: usize, cap: usize) -> Result<Vec<u64>> {
    let adj = adjacency_masks(graph)?;
    if root >= graph.n() {
        return Err(Error::VertexOutOfRange {
            vertex: root,
            n: graph.n(),
        });
    }
    let mut out = Vec::new();
    grow(&adj, 1 << root, adj[root], 1 << root, cap, &mut out)?;
    Ok(out)
}

/// Every non-empty connected vertex set, each listed once (grown from its
/// smallest vertex).
pub fn connected_sets(graph: &Graph, cap: usize) -> Result<Vec<u64>> {
    let adj = adjacency_masks(graph)?;
    let mut out = Vec::new();
    for v in 0..graph.n() {
        let below = (1u64 << v) - 1;
        let closed = below | 1 << v;
        grow(&adj, 1 << v, adj[v] & !closed, closed, cap, &mut out)?;
    }
    Ok(out)
}

fn grow(
    adj: &[u64],
    set: u64,
    frontier: u64,
    blocked: u64,
    cap: usize,
    out: &mut Vec<u64>,
) -> Result<()> {
    if out.len() >= cap {
        return Err(Error::EnumerationCap(cap));
    }
    out.push(set);
    // every frontier vertex is blocked from re-entering as a fresh candidate,
    // so once its branch is done later branches exclude it
    let blocked = blocked | frontier;
    let mut rest = frontier;
    while rest != 0 {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let fresh = adj[w] & !blocked;
        grow(adj, set | 1 << w, rest | fresh, blocked | fresh, cap, out)?;
    }
    Ok(())
}

/// Second, independent oracle: scan all `2^n` subsets and keep the
/// connected ones (containing `root`, when given). Limited to 24 vertices.
pub fn connected_sets_by_subset_filter(graph: &Graph, root: Option<usize>) -> Result<Vec<u64>> {
    let n = graph.n();
    if n > 24 {
        return Err(Error::InvalidArgument(
            "subset scan limited to 24 vertices".into(),
        ));
    }
    let adj = adjacency_masks(graph)?;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if let Some(r) = root {
            if mask & (1 << r) == 0 {
                continue;
            }
        }
        let start = mask.trailing_zeros() as usize;
        let mut reached = 1u64 << start;
        loop {
            let next = (reached | neighborhood(&adj, reached)) & mask;
            if next == reached {
                break;
            }
            reached = next;
        }
        if reached == mask {
            out.push(mask);
        }
    }
    Ok(out)
}

/// All colorings of `k` cells with colors `1..=q`, in lexicographic order.
pub fn colorings(k: usize, q: u32) -> impl Iterator<Item = Vec<Color>> {
    let total = (q as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut colors = vec![1; k];
        for c in colors.iter_mut().rev() {
            *c = 1 + (code % q as u64) as Color;
            code /= q as u64;
        }
        colors
    })
}

/// All non-empty labeled graphlets containing `root`, root listed first and
/// the remaining vertices ascending.
pub fn enumerate_rooted_graphlets(
    graph: &Graph,
    root: usize,
    q: u32,
    cap: usize,
) -> Result<Vec<LabeledGraphlet>> {
    let adj = adjacency_masks(graph)?;
    let mut out = Vec::new();
    for set in connected_sets_containing(graph, root, cap)? {
        let mut vertices = vec![root];
        vertices.extend(mask_vertices(set & !(1 << root)));
        let boundary_size = boundary(&adj, set).count_ones() as usize;
        for colors in colorings(vertices.len(), q) {
            if out.len() >= cap {
                return Err(Error::EnumerationCap(cap));
            }
            out.push(LabeledGraphlet {
                root: Some(root),
                vertices: vertices.clone(),
                colors,
                boundary_size,
            });
        }
    }
    Ok(out)
}

/// Every polymer (connected set with every coloring).
pub fn enumerate_polymers(graph: &Graph, q: u32, cap: usize) -> Result<Vec<Polymer>> {
    let mut out = Vec::new();
    for set in connected_sets(graph, cap)? {
        let vertices = mask_vertices(set);
        for colors in colorings(vertices.len(), q) {
            if out.len() >= cap {
                return Err(Error::EnumerationCap(cap));
            }
            out.push(Polymer::new(
                vertices.iter().copied().zip(colors).collect(),
            )?);
        }
    }
    Ok(out)
}

/// All sets of pairwise compatible polymers, as index lists into `polymers`
/// (the empty configuration first).
pub fn enumerate_compatible_sets(
    graph: &Graph,
    polymers: &[Polymer],
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let adj = adjacency_masks(graph)?;
    let masks: Vec<(u64, u64)> = polymers
        .iter()
        .map(|p| {
            let m = p.vertices().fold(0u64, |m, v| m | 1 << v);
            (m, m | neighborhood(&adj, m))
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend_configs(&masks, 0, 0, &mut chosen, cap, &mut out)?;
    Ok(out)
}

fn extend_configs(
    masks: &[(u64, u64)],
    start: usize,
    closed: u64,
    chosen: &mut Vec<usize>,
    cap: usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if out.len() >= cap {
        return Err(Error::EnumerationCap(cap));
    }
    out.push(chosen.clone());
    for i in start..masks.len() {
        // compatible iff gamma avoids the closed neighborhood of the others
        if masks[i].0 & closed == 0 {
            chosen.push(i);
            extend_configs(masks, i + 1, closed | masks[i].1, chosen, cap, out)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Counts connected sets containing `root` by size, up to `max_size`, on
/// any graph given by adjacency queries (including implicit ones).
pub fn count_connected_sets_by_size<G: Adjacency>(
    graph: &G,
    root: usize,
    max_size: usize,
) -> Vec<u64> {
    let mut counts = vec![0u64; max_size + 1];
    if max_size == 0 {
        return counts;
    }
    let mut frontier = Vec::new();
    graph.for_each_neighbor(root, |w| frontier.push(w));
    let mut set = vec![root];
    let mut blocked = frontier.clone();
    blocked.push(root);
    count_grow(graph, &mut set, frontier, blocked, max_size, &mut counts);
    counts
}

fn count_grow<G: Adjacency>(
    graph: &G,
    set: &mut Vec<usize>,
    frontier: Vec<usize>,
    blocked: Vec<usize>,
    max_size: usize,
    counts: &mut [u64],
) {
    counts[set.len()] += 1;
    if set.len() == max_size {
        return;
    }
    for (i, &w) in frontier.iter().enumerate() {
        let mut next_frontier: Vec<usize> = frontier[i + 1..].to_vec();
        let mut next_blocked = blocked.clone();
        graph.for_each_neighbor(w, |u| {
            if !next_blocked.contains(&u) && !set.contains(&u) {
                next_blocked.push(u);
                next_frontier.push(u);
            }
        });
        set.push(w);
        count_grow(graph, set, next_frontier, next_blocked, max_size, counts);
        set.pop();
    }
}
