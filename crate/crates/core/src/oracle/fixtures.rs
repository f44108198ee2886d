//! Small named host graphs for tests and verification suites.

use crate::error::{Error, Result};
use crate::exact::RandomSource;
use crate::exact::{uniform_int, Rational};
use crate::graph::Graph;

use super::enumerate::{adjacency_masks, mask_vertices};

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).expect("valid path")
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "a cycle needs 3 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges).expect("valid star")
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).expect("valid complete graph")
}

/// `K_{a,b}` with left side `0..a` declared as the bipartition.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(a + b, &edges)
        .and_then(|g| g.with_bipartition(a))
        .expect("valid complete bipartite graph")
}

/// Uniform simple `d`-regular graph from the configuration model, retrying
/// pairings that create loops or repeated edges.
pub fn random_regular(n: usize, d: usize, src: &mut RandomSource) -> Result<Graph> {
    if (n * d) % 2 == 1 || d >= n {
        return Err(Error::InvalidArgument(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _attempt in 0..10_000 {
        for i in (1..stubs.len()).rev() {
            let j = uniform_int(i as u64 + 1, src)? as usize;
            stubs.swap(i, j);
        }
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::invariant(
        "configuration model kept producing multigraphs",
    ))
}

/// Connected random `d`-regular graph.
pub fn random_regular_connected(n: usize, d: usize, src: &mut RandomSource) -> Result<Graph> {
    loop {
        let g = random_regular(n, d, src)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}

/// Whether every vertex set `S` with `|S| <= n/2` has at least `alpha |S|`
/// edges leaving it. Brute force over all subsets; `n <= 20`.
pub fn is_alpha_expander(graph: &Graph, alpha: &Rational) -> Result<bool> {
    let n = graph.n();
    if n > 20 {
        return Err(Error::InvalidArgument(format!(
            "expansion check supports at most 20 vertices, got {n}"
        )));
    }
    let adj = adjacency_masks(graph)?;
    for s in 1u64..1 << n {
        let size = s.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let cut: u32 = mask_vertices(s)
            .iter()
            .map(|&v| (adj[v] & !s).count_ones())
            .sum();
        if Rational::from_integer(cut.into()) < alpha * Rational::from_integer(size.into()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The named fixtures with at most 7 vertices used by the exactness suites.
pub fn small_fixtures(seed: u64) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.push((format!("P{n}"), path(n)));
    }
    for n in 3..=7 {
        out.push((format!("C{n}"), cycle(n).expect("n >= 3")));
    }
    for leaves in 2..=6 {
        out.push((format!("K1,{leaves}"), star(leaves)));
    }
    out.push(("K4".into(), complete(4)));
    let mut src = RandomSource::new(seed);
    out.push((
        "R3-6".into(),
        random_regular_connected(6, 3, &mut src).expect("3-regular graphs on 6 vertices exist"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn shapes() {
        assert_eq!(path(4).edge_count(), 3);
        assert_eq!(cycle(5).unwrap().max_degree(), 2);
        assert_eq!(star(3).neighbors(0), &[1, 2, 3]);
        assert_eq!(complete(4).edge_count(), 6);
        let k = complete_bipartite(2, 3);
        assert_eq!(k.bipartition(), Some((0..2, 2..5)));
        assert!(cycle(2).is_err());
    }

    #[test]
    fn random_regular_is_regular() {
        let mut src = RandomSource::new(11);
        let g = random_regular(128, 3, &mut src).unwrap();
        assert!((0..128).all(|v| g.degree(v) == 3));
        assert!(random_regular(5, 3, &mut src).is_err());
    }

    #[test]
    fn expansion() {
        assert!(is_alpha_expander(&complete(4), &rat(2, 1)).unwrap());
        assert!(!is_alpha_expander(&complete(4), &rat(5, 2)).unwrap());
        assert!(!is_alpha_expander(&path(6), &rat(1, 2)).unwrap());
    }

    #[test]
    fn fixtures_are_small_and_connected() {
        for (name, g) in small_fixtures(1) {
            assert!(g.n() <= 7 && g.is_connected(), "{name}");
        }
    }
}
