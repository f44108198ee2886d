//! Immutable bounded-degree graphs.
//!
//! Samplers only ever ask one question of a graph: "who are the neighbours of
//! `v`?". That query model is captured by [`Adjacency`], which is implemented
//! both by the explicit [`Graph`] (compressed adjacency lists, constant-time
//! access to a vertex's list) and by [`ImplicitGraph`], which wraps a neighbour
//! callback and can describe infinite graphs such as lattices or trees.
//!
//! # File format
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v        (m lines, 0-based vertex ids)
//! bipartition k    (optional: L = {0..k-1}, R = {k..n-1})
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Neighbourhood oracle for a (possibly infinite) graph of bounded degree.
pub trait Adjacency {
    /// An upper bound on every vertex degree.
    fn max_degree(&self) -> usize;

    /// Number of vertices, or `None` when the graph is implicitly infinite.
    fn order(&self) -> Option<usize>;

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    max_degree: usize,
    /// Size of the left side; `L = 0..k`, `R = k..n`.
    left_size: Option<usize>,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    ///
    /// Rejects self-loops, out-of-range endpoints and repeated edges (in either
    /// orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        let mut max_degree = 0;
        offsets.push(0);
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
            max_degree = max_degree.max(list.len());
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Ok(Graph {
            offsets,
            targets,
            max_degree,
            left_size: None,
        })
    }

    /// Declares the bipartition `L = {0..k}`, `R = {k..n}` and checks that
    /// every edge crosses it.
    pub fn with_bipartition(mut self, k: usize) -> Result<Self> {
        if k > self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: k,
                n: self.n(),
            });
        }
        for (u, v) in self.edges() {
            if (u < k) == (v < k) {
                return Err(Error::BipartitionViolated(u, v));
            }
        }
        self.left_size = Some(k);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbour list of `v`. Panics if `v` is out of range; see
    /// [`Graph::checked_neighbors`].
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn checked_neighbors(&self, v: usize) -> Result<&[usize]> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(self.neighbors(v))
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    /// `(L, R)` as index ranges, when a bipartition was declared.
    pub fn bipartition(&self) -> Option<(std::ops::Range<usize>, std::ops::Range<usize>)> {
        self.left_size.map(|k| (0..k, k..self.n()))
    }

    /// Graph on the right side `R` in which two vertices are adjacent when
    /// they share a neighbour in `L`. Vertex `i` of the result stands for
    /// vertex `k + i` of `self`, where `k = |L|`.
    pub fn distance2_graph(&self) -> Result<Graph> {
        let (left, right) = self.bipartition().ok_or(Error::NoBipartition)?;
        let k = left.end;
        let mut edges = Vec::new();
        for u in left {
            let nbrs = self.neighbors(u);
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    edges.push((a - k, b - k));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Graph::from_edges(right.len(), &edges)
    }

    /// Subgraph induced by the vertices with `keep[v] == true`, plus the map
    /// from new vertex ids to old ones.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let old_of_new: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_of_old = vec![usize::MAX; self.n()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_of_old[u], new_of_old[v]))
            .collect();
        let g = Graph::from_edges(old_of_new.len(), &edges)
            .expect("induced subgraph of a valid graph is valid");
        (g, old_of_new)
    }

    /// Vertices in breadth-first order from `root`, restricted to its component.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_order(0).len() == self.n()
    }

    /// Serialises to the text format accepted by [`Graph::from_str`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(k) = self.left_size {
            let _ = writeln!(out, "bipartition {k}");
        }
        out
    }
}

impl Adjacency for Graph {
    fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn order(&self) -> Option<usize> {
        Some(self.n())
    }

    #[inline]
    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &w in self.neighbors(v) {
            f(w);
        }
    }
}

impl<A: Adjacency + ?Sized> Adjacency for &A {
    fn max_degree(&self) -> usize {
        (**self).max_degree()
    }
    fn order(&self) -> Option<usize> {
        (**self).order()
    }
    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F) {
        (**self).for_each_neighbor(v, f)
    }
}

impl<A: Adjacency + ?Sized> Adjacency for std::sync::Arc<A> {
    fn max_degree(&self) -> usize {
        (**self).max_degree()
    }
    fn order(&self) -> Option<usize> {
        (**self).order()
    }
    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F) {
        (**self).for_each_neighbor(v, f)
    }
}

/// A graph given only through a neighbour callback.
///
/// Vertex ids are arbitrary `usize` labels; the graph may be infinite. The
/// callback must describe a symmetric relation without self-loops, and no
/// vertex may have more than `max_degree` neighbours.
pub struct ImplicitGraph<F> {
    neighbors: F,
    max_degree: usize,
}

impl<F> ImplicitGraph<F>
where
    F: Fn(usize) -> Vec<usize>,
{
    pub fn new(max_degree: usize, neighbors: F) -> Self {
        ImplicitGraph {
            neighbors,
            max_degree,
        }
    }
}

impl<F> Adjacency for ImplicitGraph<F>
where
    F: Fn(usize) -> Vec<usize>,
{
    fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn for_each_neighbor<G: FnMut(usize)>(&self, v: usize, f: G) {
        (self.neighbors)(v).into_iter().for_each(f)
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line `n m`".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;

        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, text) = lines.next().ok_or(Error::Parse {
                line: hline,
                msg: format!("expected {m} edge lines, found {}", edges.len()),
            })?;
            let [u, v] = parse_pair(line, text)?;
            edges.push((u, v));
        }
        let mut graph = Graph::from_edges(n, &edges)?;

        if let Some((line, text)) = lines.next() {
            let mut parts = text.split_whitespace();
            let k = match (parts.next(), parts.next(), parts.next()) {
                (Some("bipartition"), Some(k), None) => {
                    k.parse::<usize>().map_err(|e| Error::Parse {
                        line,
                        msg: format!("bad bipartition size: {e}"),
                    })?
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unexpected trailing line `{text}`"),
                    })
                }
            };
            graph = graph.with_bipartition(k)?;
        }
        if let Some((line, text)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected trailing line `{text}`"),
            });
        }
        Ok(graph)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let mut it = text.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected two non-negative integers, got `{text}`"),
        }),
    }
}
