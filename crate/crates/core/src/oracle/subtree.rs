use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::enumerate::count_connected_sets_by_size;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of subtrees with `k` vertices containing the root of the infinite
/// `delta`-regular tree:
/// `T_k = delta / ((delta-1) k + 1) * C((delta-1) k + 1, k - 1)`.
///
/// ```
/// use graphlet_gibbs::oracle::tree_subtree_count;
/// assert_eq!(tree_subtree_count(3, 3).unwrap(), 9u32.into());
/// ```
pub fn tree_subtree_count(delta: usize, k: usize) -> Result<BigUint> {
    if delta < 2 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "subtree counts need delta >= 2 and k >= 1, got ({delta}, {k})"
        )));
    }
    let m = (delta - 1) * k + 1;
    let numer = BigUint::from(delta) * binomial(BigUint::from(m), BigUint::from(k - 1));
    let denom = BigUint::from(m);
    debug_assert!((&numer % &denom).is_zero());
    Ok(numer / denom)
}

/// The `delta`-regular tree truncated at the given depth, root 0.
pub fn regular_tree(delta: usize, depth: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut n = 1;
    for d in 0..depth {
        let children = if d == 0 { delta } else { delta - 1 };
        let mut next = Vec::with_capacity(level.len() * children);
        for &v in &level {
            for _ in 0..children {
                edges.push((v, n));
                next.push(n);
                n += 1;
            }
        }
        level = next;
    }
    Graph::from_edges(n, &edges)
}

/// Brute-force `T_k`: enumerate rooted subtrees of the tree truncated at depth
/// `k - 1`, which contains every subtree with `k` vertices.
pub fn brute_force_subtree_count(delta: usize, k: usize) -> Result<BigUint> {
    if k == 0 {
        return Ok(BigUint::one());
    }
    let tree = regular_tree(delta, k - 1)?;
    let counts = count_connected_sets_by_size(&tree, 0, k);
    Ok(BigUint::from(counts[k]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = |d, k| tree_subtree_count(d, k).unwrap();
        assert_eq!(t(3, 1), 1u32.into());
        assert_eq!(t(3, 2), 3u32.into());
        assert_eq!(t(3, 3), 9u32.into());
        assert_eq!(t(4, 2), 4u32.into());
        assert!(tree_subtree_count(3, 0).is_err());
    }

    #[test]
    fn brute_force_small() {
        for delta in [3, 4] {
            for k in 1..=5 {
                assert_eq!(
                    brute_force_subtree_count(delta, k).unwrap(),
                    tree_subtree_count(delta, k).unwrap(),
                    "delta={delta} k={k}"
                );
            }
        }
    }
}
