//! Immutable undirected simple graphs and the set predicates the engine is
//! phrased in: neighbourhoods, components of induced subgraphs,
//! anticompleteness and covering.
//!
//! Induced subgraphs are never materialized; every operation takes the
//! ambient [`Graph`] together with a [`VertexSet`].

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("sets are not disjoint")]
    NotDisjoint,
    #[error("vertex {0} is not in the set")]
    NotMember(Vertex),
    #[error("induced subgraph is disconnected")]
    Disconnected,
}

/// A set of vertices of a fixed ambient graph. Iteration is always in
/// ascending identifier order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if a member is `>= n`.
    pub fn from_iter<I: IntoIterator<Item = Vertex>>(n: usize, it: I) -> Self {
        let mut s = VertexSet::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn try_from_slice(n: usize, members: &[Vertex]) -> Result<Self, GraphError> {
        let mut s = VertexSet::empty(n);
        for &v in members {
            if v as usize >= n {
                return Err(GraphError::OutOfRange { vertex: v as usize, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Size of the ambient vertex universe.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v as usize)
    }

    pub fn insert(&mut self, v: Vertex) {
        self.bits.insert(v as usize);
    }

    pub fn remove(&mut self, v: Vertex) {
        self.bits.set(v as usize, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones().map(|v| v as Vertex)
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.bits.minimum().map(|v| v as Vertex)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet { bits }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Undirected simple graph on vertices `0..n`. Neighbour lists are sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates (in
    /// either orientation) and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::OutOfRange { vertex: w as usize, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u as Vertex, w[0]);
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
        }
        Ok(Graph { adj, m: edges.len() })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated edges.
    pub fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Graph { adj, m: m / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted neighbour list. Panics when `v` is out of range.
    pub fn neighbour_slice(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn set_of(&self, members: &[Vertex]) -> Result<VertexSet, GraphError> {
        VertexSet::try_from_slice(self.n(), members)
    }

    pub fn neighbours(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_iter(self.n(), self.adj[v as usize].iter().copied()))
    }

    /// Union of `N(v)` over `v` in `x`.
    pub fn neighbourhood_of(&self, x: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut out = VertexSet::empty(self.n());
        for v in x {
            for &w in &self.adj[v as usize] {
                out.insert(w);
            }
        }
        out
    }

    pub fn has_neighbour_in(&self, v: Vertex, x: &VertexSet) -> bool {
        self.adj[v as usize].iter().any(|&w| x.contains(w))
    }

    /// Vertex sets of the components of `G[x]`, largest first, ties broken by
    /// least member.
    pub fn components(&self, x: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n());
        let mut out: Vec<(Vertex, VertexSet)> = Vec::new();
        let mut queue = VecDeque::new();
        for s in x.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n());
            seen.insert(s);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &w in &self.adj[u as usize] {
                    if x.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push((s, comp));
        }
        // `s` is the least member because roots are visited in ascending order.
        out.sort_by(|(sa, a), (sb, b)| b.len().cmp(&a.len()).then(sa.cmp(sb)));
        out.into_iter().map(|(_, c)| c).collect()
    }

    pub fn is_connected_on(&self, x: &VertexSet) -> bool {
        !x.is_empty() && self.components(x).len() == 1
    }

    /// True iff `a` and `b` are disjoint and no edge joins them.
    pub fn is_anticomplete(&self, a: &VertexSet, b: &VertexSet) -> bool {
        if !a.is_disjoint(b) {
            return false;
        }
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        !small.iter().any(|v| self.has_neighbour_in(v, large))
    }

    /// True iff every vertex of `y` has a neighbour in `x`.
    pub fn covers(&self, x: &VertexSet, y: &VertexSet) -> Result<bool, GraphError> {
        if !x.is_disjoint(y) {
            return Err(GraphError::NotDisjoint);
        }
        Ok(y.iter().all(|v| self.has_neighbour_in(v, x)))
    }

    /// Breadth-first order of `z` from `start`, neighbours taken in ascending
    /// order. Every prefix induces a connected subgraph.
    pub fn connected_order(&self, z: &VertexSet, start: Vertex) -> Result<Vec<Vertex>, GraphError> {
        if !z.contains(start) {
            return Err(GraphError::NotMember(start));
        }
        let mut seen = VertexSet::empty(self.n());
        let mut order = Vec::with_capacity(z.len());
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adj[u as usize] {
                if z.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        if order.len() != z.len() {
            return Err(GraphError::Disconnected);
        }
        Ok(order)
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { vertex: v as usize, n: self.n() })
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Small named graphs used throughout the tests and the CLI.
pub mod named {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        edges.push((0, n as Vertex - 1));
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves as Vertex).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    /// Path `0..5` with an extra leaf `5` on the third vertex.
    pub fn hook() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    /// Disjoint union, second graph relabelled after the first.
    pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
        let off = a.n() as Vertex;
        let edges: Vec<_> = a.edges().chain(b.edges().map(|(u, v)| (u + off, v + off))).collect();
        Graph::from_edges(a.n() + b.n(), &edges).unwrap()
    }

    /// Mycielskian of `g`.
    pub fn mycielski(g: &Graph) -> Graph {
        let n = g.n() as Vertex;
        let mut edges: Vec<_> = g.edges().collect();
        for (u, v) in g.edges() {
            edges.push((u, v + n));
            edges.push((v, u + n));
        }
        for v in 0..n {
            edges.push((v + n, 2 * n));
        }
        Graph::from_edges(2 * g.n() + 1, &edges).unwrap()
    }

    /// The Grötzsch graph: triangle-free with chromatic number 4.
    pub fn grotzsch() -> Graph {
        mycielski(&cycle(5))
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn set(g: &Graph, xs: &[Vertex]) -> VertexSet {
        g.set_of(xs).unwrap()
    }

    #[test]
    fn neighbours_examples() {
        let p = path(3);
        assert_eq!(p.neighbours(1).unwrap().to_vec(), vec![0, 2]);
        let g = Graph::empty(3);
        assert!(g.neighbours(2).unwrap().is_empty());
        assert_eq!(complete(4).neighbours(0).unwrap().to_vec(), vec![1, 2, 3]);
        assert!(matches!(p.neighbours(3), Err(GraphError::OutOfRange { .. })));
    }

    #[test]
    fn components_examples() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let comps = g.components(&g.all_vertices());
        assert_eq!(comps, vec![set(&g, &[0, 1, 2]), set(&g, &[3, 4, 5])]);
        let p = path(7);
        assert_eq!(p.components(&p.all_vertices()), vec![p.all_vertices()]);
        assert!(p.components(&VertexSet::empty(7)).is_empty());
        // descending size before least member
        let q = Graph::from_edges(5, &[(2, 3), (3, 4)]).unwrap();
        let comps = q.components(&q.all_vertices());
        assert_eq!(comps[0], set(&q, &[2, 3, 4]));
        assert_eq!(comps[1], set(&q, &[0]));
        assert_eq!(comps[2], set(&q, &[1]));
    }

    #[test]
    fn anticomplete_examples() {
        let c5 = cycle(5);
        assert!(c5.is_anticomplete(&set(&c5, &[0]), &set(&c5, &[2, 3])));
        assert!(!c5.is_anticomplete(&set(&c5, &[0]), &set(&c5, &[0])));
        let k2 = complete(2);
        assert!(!k2.is_anticomplete(&set(&k2, &[0]), &set(&k2, &[1])));
    }

    #[test]
    fn covers_examples() {
        let s = star(4);
        assert!(s.covers(&set(&s, &[0]), &set(&s, &[1, 2, 3, 4])).unwrap());
        assert!(!s.covers(&VertexSet::empty(5), &set(&s, &[1])).unwrap());
        assert!(s.covers(&VertexSet::empty(5), &VertexSet::empty(5)).unwrap());
        assert_eq!(s.covers(&set(&s, &[0]), &set(&s, &[0])), Err(GraphError::NotDisjoint));
    }

    #[test]
    fn connected_order_examples() {
        let p = path(4);
        assert_eq!(p.connected_order(&p.all_vertices(), 0).unwrap(), vec![0, 1, 2, 3]);
        let s = Graph::from_edges(5, &[(4, 0), (4, 1), (4, 2), (4, 3)]).unwrap();
        assert_eq!(s.connected_order(&s.all_vertices(), 4).unwrap(), vec![4, 0, 1, 2, 3]);
        assert_eq!(s.connected_order(&set(&s, &[2]), 2).unwrap(), vec![2]);
        assert_eq!(s.connected_order(&set(&s, &[0, 1]), 0), Err(GraphError::Disconnected));
        assert_eq!(s.connected_order(&set(&s, &[0, 4]), 1), Err(GraphError::NotMember(1)));
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::from_edges(2, &[(0, 2)]), Err(GraphError::OutOfRange { .. })));
    }

    #[test]
    fn named_graphs() {
        assert_eq!(petersen().edge_count(), 15);
        assert!(petersen().edges().all(|(u, v)| u < v));
        let g = grotzsch();
        assert_eq!((g.n(), g.edge_count()), (11, 20));
    }
}
