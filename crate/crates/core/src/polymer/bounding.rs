//! Bounding chain `(B, D)` for the polymer dynamics.
//!
//! `B` is a valid configuration contained in every coupled copy of the chain;
//! `B ∪ D` contains all of them. `D` is never stored as a set of polymers.
//! Its implicit part is every polymer lying entirely on vertices with
//! `D*(v) = 1` (vertices not yet swept by a delete). Its explicit part is a
//! slab of polymers threaded onto one intrusive doubly linked list per vertex
//! (`L^v`), so that deleting at `v` touches only polymers through `v`.

use super::dynamics::{Branch, Move};
use super::model::{Polymer, PolymerConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    vertex: u32,
    polymer: u32,
    prev: u32,
    next: u32,
}

#[derive(Clone, Debug)]
struct Stored {
    polymer: Polymer,
    nodes: Vec<u32>,
}

/// Which step of the bounding chain a move triggered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Delete,
    Empty,
    AddToB,
    AddToD,
    Blocked,
}

#[derive(Clone, Debug)]
pub struct BoundingState {
    b: PolymerConfig,
    d_star: Vec<bool>,
    n_star: usize,
    d_bar: Vec<u32>,
    n_bar: usize,
    head: Vec<u32>,
    nodes: Vec<Node>,
    free_nodes: Vec<u32>,
    stored: Vec<Option<Stored>>,
    free_stored: Vec<u32>,
}

impl BoundingState {
    /// `B = {}` and `D` = every polymer.
    pub fn new(n: usize) -> Self {
        BoundingState {
            b: PolymerConfig::empty(n),
            d_star: vec![true; n],
            n_star: n,
            d_bar: vec![0; n],
            n_bar: 0,
            head: vec![NIL; n],
            nodes: Vec::new(),
            free_nodes: Vec::new(),
            stored: Vec::new(),
            free_stored: Vec::new(),
        }
    }

    pub fn lower(&self) -> &PolymerConfig {
        &self.b
    }

    pub fn into_lower(self) -> PolymerConfig {
        self.b
    }

    /// Vertices never yet swept by a delete.
    pub fn n_star(&self) -> usize {
        self.n_star
    }

    /// Explicitly stored `D`-polymers.
    pub fn n_bar(&self) -> usize {
        self.n_bar
    }

    pub fn d_star(&self, v: usize) -> bool {
        self.d_star[v]
    }

    /// Number of explicit `D`-polymers containing `v`.
    pub fn d_bar(&self, v: usize) -> u32 {
        self.d_bar[v]
    }

    /// `D` is empty, so every coupled copy equals `B`.
    pub fn coalesced(&self) -> bool {
        self.n_star == 0 && self.n_bar == 0
    }

    /// Number of host vertices covered by some polymer of `D`.
    pub fn phi_potential(&self) -> usize {
        (0..self.d_star.len())
            .filter(|&v| self.d_star[v] || self.d_bar[v] > 0)
            .count()
    }

    pub fn explicit_polymers(&self) -> impl Iterator<Item = &Polymer> {
        self.stored.iter().flatten().map(|s| &s.polymer)
    }

    /// Membership in `D`, implicit or explicit.
    pub fn d_contains(&self, gamma: &Polymer) -> bool {
        if gamma.vertices().all(|v| self.d_star[v]) {
            return true;
        }
        let mut node = self.head[gamma.min_vertex()];
        while node != NIL {
            let Node { polymer, next, .. } = self.nodes[node as usize];
            if self.stored[polymer as usize].as_ref().map(|s| &s.polymer) == Some(gamma) {
                return true;
            }
            node = next;
        }
        false
    }

    pub fn apply(&mut self, graph: &Graph, mv: &Move) -> StepKind {
        match &mv.branch {
            Branch::Delete => {
                self.delete(mv.v);
                StepKind::Delete
            }
            Branch::Insert(None) => StepKind::Empty,
            Branch::Insert(Some(gamma)) => self.insert(graph, gamma),
        }
    }

    fn delete(&mut self, v: usize) {
        if self.d_star[v] {
            self.d_star[v] = false;
            self.n_star -= 1;
        }
        while self.head[v] != NIL {
            let p = self.nodes[self.head[v] as usize].polymer;
            self.remove_stored(p);
        }
        self.b.remove_containing(v);
    }

    fn insert(&mut self, graph: &Graph, gamma: &Polymer) -> StepKind {
        let closed = || {
            gamma
                .vertices()
                .flat_map(move |v| std::iter::once(v).chain(graph.neighbors(v).iter().copied()))
        };
        if closed().any(|w| self.b.is_occupied(w)) {
            return StepKind::Blocked;
        }
        if closed().all(|w| !self.d_star[w] && self.d_bar[w] == 0) {
            self.b.try_insert(graph, gamma.clone());
            return StepKind::AddToB;
        }
        if let Some(p) = self.sole_explicit_copy(graph, gamma) {
            self.remove_stored(p);
            self.b.try_insert(graph, gamma.clone());
            return StepKind::AddToB;
        }
        self.store(gamma.clone());
        StepKind::AddToD
    }

    /// Conservative test for "gamma is compatible with D minus gamma" when
    /// gamma itself is stored explicitly: no implicit polymer near gamma, no
    /// explicit polymer on its boundary, and exactly one explicit polymer on
    /// each of its vertices, which is gamma.
    fn sole_explicit_copy(&self, graph: &Graph, gamma: &Polymer) -> Option<u32> {
        let mut owner = NIL;
        for v in gamma.vertices() {
            if self.d_star[v] || self.d_bar[v] != 1 {
                return None;
            }
            let p = self.nodes[self.head[v] as usize].polymer;
            if owner != NIL && owner != p {
                return None;
            }
            owner = p;
            for &w in graph.neighbors(v) {
                if !gamma.contains_vertex(w) && (self.d_star[w] || self.d_bar[w] != 0) {
                    return None;
                }
            }
        }
        let stored = self.stored[owner as usize].as_ref()?;
        (stored.polymer == *gamma).then_some(owner)
    }

    fn store(&mut self, gamma: Polymer) {
        let p = match self.free_stored.pop() {
            Some(p) => p,
            None => {
                self.stored.push(None);
                (self.stored.len() - 1) as u32
            }
        };
        let mut nodes = Vec::with_capacity(gamma.len());
        for v in gamma.vertices() {
            let node = Node {
                vertex: v as u32,
                polymer: p,
                prev: NIL,
                next: self.head[v],
            };
            let id = match self.free_nodes.pop() {
                Some(id) => {
                    self.nodes[id as usize] = node;
                    id
                }
                None => {
                    self.nodes.push(node);
                    (self.nodes.len() - 1) as u32
                }
            };
            if self.head[v] != NIL {
                self.nodes[self.head[v] as usize].prev = id;
            }
            self.head[v] = id;
            self.d_bar[v] += 1;
            nodes.push(id);
        }
        self.stored[p as usize] = Some(Stored {
            polymer: gamma,
            nodes,
        });
        self.n_bar += 1;
    }

    fn remove_stored(&mut self, p: u32) {
        let stored = self.stored[p as usize]
            .take()
            .expect("stored polymer slot in use");
        for id in stored.nodes {
            let Node {
                vertex, prev, next, ..
            } = self.nodes[id as usize];
            if prev == NIL {
                self.head[vertex as usize] = next;
            } else {
                self.nodes[prev as usize].next = next;
            }
            if next != NIL {
                self.nodes[next as usize].prev = prev;
            }
            self.d_bar[vertex as usize] -= 1;
            self.free_nodes.push(id);
        }
        self.free_stored.push(p);
        self.n_bar -= 1;
    }

    /// Recomputes every counter from scratch and checks the compatibility
    /// invariants.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let n = self.d_star.len();
        let star = self.d_star.iter().filter(|&&b| b).count();
        if star != self.n_star {
            return Err(Error::invariant(format!(
                "N* = {} but {star} ones",
                self.n_star
            )));
        }
        let mut bar = vec![0u32; n];
        let mut count = 0;
        for s in self.stored.iter().flatten() {
            count += 1;
            for v in s.polymer.vertices() {
                bar[v] += 1;
            }
        }
        if count != self.n_bar || bar != self.d_bar {
            return Err(Error::invariant("explicit D counters out of sync"));
        }
        for v in 0..n {
            let mut len = 0;
            let mut node = self.head[v];
            let mut prev = NIL;
            while node != NIL {
                let nd = self.nodes[node as usize];
                if nd.vertex as usize != v || nd.prev != prev {
                    return Err(Error::invariant(format!("list L^{v} is corrupt")));
                }
                prev = node;
                node = nd.next;
                len += 1;
            }
            if len != self.d_bar[v] {
                return Err(Error::invariant(format!("list L^{v} has the wrong length")));
            }
        }
        let b: Vec<&Polymer> = self.b.iter().collect();
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                if !x.compatible_with(y, graph) {
                    return Err(Error::invariant("B is not a valid configuration"));
                }
            }
            for s in self.stored.iter().flatten() {
                if !x.compatible_with(&s.polymer, graph) {
                    return Err(Error::invariant("B meets an explicit D polymer"));
                }
            }
            for v in x.vertices() {
                if self.d_star[v] || graph.neighbors(v).iter().any(|&w| self.d_star[w]) {
                    return Err(Error::invariant("B meets the implicit part of D"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        "3 2\n0 1\n1 2".parse().unwrap()
    }

    fn ins(v: usize, gamma: Polymer) -> Move {
        Move {
            t: 0,
            v,
            branch: Branch::Insert(Some(gamma)),
        }
    }

    fn del(v: usize) -> Move {
        Move {
            t: 0,
            v,
            branch: Branch::Delete,
        }
    }

    #[test]
    fn fresh_state() {
        let s = BoundingState::new(3);
        assert!(!s.coalesced());
        assert_eq!(s.phi_potential(), 3);
    }

    #[test]
    fn delete_clears_star() {
        let g = p3();
        let mut s = BoundingState::new(3);
        assert_eq!(s.apply(&g, &del(1)), StepKind::Delete);
        assert!(!s.d_star(1));
        assert_eq!(s.n_star(), 2);
        s.validate(&g).unwrap();
    }

    #[test]
    fn insert_near_star_goes_to_d() {
        let g = p3();
        let gamma = Polymer::singleton(0, 1);
        let mut s = BoundingState::new(3);
        s.apply(&g, &del(0));
        s.apply(&g, &del(1));
        // D*(2) = 1 lies outside N[{0}] = {0, 1}
        assert_eq!(s.apply(&g, &ins(0, gamma.clone())), StepKind::AddToB);
        assert_eq!(
            s.apply(&g, &ins(1, Polymer::singleton(1, 1))),
            StepKind::Blocked
        );
        let mut s = BoundingState::new(3);
        s.apply(&g, &del(0));
        assert_eq!(s.apply(&g, &ins(0, gamma)), StepKind::AddToD);
        assert_eq!(s.n_bar(), 1);
        s.validate(&g).unwrap();
    }

    #[test]
    fn all_swept_goes_to_b() {
        let g = p3();
        let mut s = BoundingState::new(3);
        for v in 0..3 {
            s.apply(&g, &del(v));
        }
        assert!(s.coalesced());
        assert_eq!(s.phi_potential(), 0);
        let gamma = Polymer::new(vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(s.apply(&g, &ins(0, gamma.clone())), StepKind::AddToB);
        assert!(s.lower().contains(&gamma));
        assert!(s.coalesced());
    }

    #[test]
    fn explicit_copy_promoted() {
        let g = p3();
        let mut s = BoundingState::new(3);
        s.apply(&g, &del(0));
        s.apply(&g, &del(1));
        s.apply(&g, &del(2));
        let pair = Polymer::new(vec![(1, 1), (2, 1)]).unwrap();
        s.store(pair.clone());
        assert_eq!(s.phi_potential(), 2);
        assert!(s.d_contains(&pair));
        assert!(!s.coalesced());
        assert_eq!(s.apply(&g, &ins(1, pair.clone())), StepKind::AddToB);
        assert_eq!(s.n_bar(), 0);
        assert!(s.lower().contains(&pair));
        s.validate(&g).unwrap();
    }

    #[test]
    fn other_explicit_polymer_blocks_promotion() {
        let g = p3();
        let mut s = BoundingState::new(3);
        for v in 0..3 {
            s.apply(&g, &del(v));
        }
        s.store(Polymer::singleton(2, 1));
        let gamma = Polymer::singleton(0, 1);
        assert_eq!(s.apply(&g, &ins(0, gamma.clone())), StepKind::AddToB);
        let mid = Polymer::singleton(1, 1);
        assert_eq!(s.apply(&g, &ins(1, mid)), StepKind::Blocked);
        s.apply(&g, &del(0));
        let pair = Polymer::new(vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(s.apply(&g, &ins(0, pair)), StepKind::AddToD);
        assert_eq!(s.n_bar(), 2);
        s.apply(&g, &del(1));
        assert_eq!(s.n_bar(), 1);
        s.validate(&g).unwrap();
    }
}
