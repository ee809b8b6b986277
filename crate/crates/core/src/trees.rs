//! Target trees and the rooted caterpillars ("chrysalises") the engine grows
//! inside the host graph.
//!
//! A τ-chrysalis is a caterpillar with a chosen head whose spine has at most
//! τ+1 vertices, whose non-head spine vertices have degree exactly τ, and whose
//! head has degree at most τ-1 (exactly 1 when the spine is full length). The
//! largest one, the τ-butterfly, has τ²-τ+2 vertices. A nursery is a disjoint
//! union of chrysalises with potential φ = Σ 2^{|V(H_i)|}.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree is not a caterpillar subdivision")]
    NotCaterpillarSubdivision,
    #[error("tau must be at least 3 (got {0})")]
    TauTooSmall(usize),
    #[error("nurseries have different tau ({0} vs {1})")]
    TauMismatch(usize, usize),
    #[error("head {0} is not a vertex of the tree")]
    BadHead(usize),
}

pub fn is_tree(g: &Graph) -> bool {
    g.n() >= 1 && g.edge_count() + 1 == g.n() && g.is_connected_on(&g.all_vertices())
}

/// Vertices on the unique path between `a` and `b` in a tree, in order.
pub(crate) fn tree_path(t: &Graph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let parent = bfs_parents(t, b);
    let mut out = vec![a];
    let mut cur = a;
    while cur != b {
        cur = parent[cur as usize].expect("tree is connected");
        out.push(cur);
    }
    out
}

fn bfs_parents(t: &Graph, root: Vertex) -> Vec<Option<Vertex>> {
    let mut parent = vec![None; t.n()];
    let mut seen = vec![false; t.n()];
    seen[root as usize] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in t.neighbour_slice(u) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

fn bfs_dist(t: &Graph, root: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; t.n()];
    dist[root as usize] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in t.neighbour_slice(u) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn vertices_with_degree_at_least(t: &Graph, d: usize) -> Vec<Vertex> {
    (0..t.n() as Vertex).filter(|&v| t.degree(v) >= d).collect()
}

/// True iff some path of `t` contains every vertex of degree at least three.
/// Tries every pair of such vertices as path ends.
pub fn is_caterpillar_subdivision(t: &Graph) -> Result<bool, TreeError> {
    if !is_tree(t) {
        return Err(TreeError::NotATree);
    }
    Ok(covering_path_exists(t, 3))
}

/// True iff some path of `t` contains every vertex of degree at least two.
pub fn is_caterpillar(t: &Graph) -> Result<bool, TreeError> {
    if !is_tree(t) {
        return Err(TreeError::NotATree);
    }
    Ok(covering_path_exists(t, 2))
}

fn covering_path_exists(t: &Graph, d: usize) -> bool {
    let high = vertices_with_degree_at_least(t, d);
    if high.len() <= 1 {
        return true;
    }
    for (i, &a) in high.iter().enumerate() {
        for &b in &high[i + 1..] {
            let path = tree_path(t, a, b);
            if high.iter().all(|v| path.contains(v)) {
                return true;
            }
        }
    }
    false
}

/// A target tree that is known to be a caterpillar subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaterpillarTree {
    tree: Graph,
    is_caterpillar: bool,
}

impl CaterpillarTree {
    pub fn new(tree: Graph) -> Result<Self, TreeError> {
        if !is_caterpillar_subdivision(&tree)? {
            return Err(TreeError::NotCaterpillarSubdivision);
        }
        let is_caterpillar = covering_path_exists(&tree, 2);
        Ok(CaterpillarTree { tree, is_caterpillar })
    }

    pub fn graph(&self) -> &Graph {
        &self.tree
    }

    pub fn is_caterpillar(&self) -> bool {
        self.is_caterpillar
    }

    pub fn is_caterpillar_subdivision(&self) -> bool {
        true
    }

    pub fn fit_tau(&self) -> usize {
        fit_tau_unchecked(&self.tree)
    }
}

/// Minimum τ ≥ 3 fitting `t`: a path of at most τ vertices holds every vertex
/// of degree ≥ 3, Δ(t) ≤ τ, and every path whose internal vertices all have
/// degree 2 has at most τ vertices.
pub fn fit_tau(t: &Graph) -> Result<usize, TreeError> {
    if !is_caterpillar_subdivision(t)? {
        return Err(TreeError::NotCaterpillarSubdivision);
    }
    Ok(fit_tau_unchecked(t))
}

fn fit_tau_unchecked(t: &Graph) -> usize {
    // shortest path holding all branch vertices: the path between the two
    // mutually farthest of them
    let branch = vertices_with_degree_at_least(t, 3);
    let spine_len = match branch.first() {
        None => 1,
        Some(&b0) => {
            let d0 = bfs_dist(t, b0);
            let a = *branch.iter().max_by_key(|&&v| (d0[v as usize], std::cmp::Reverse(v))).unwrap();
            let da = bfs_dist(t, a);
            branch.iter().map(|&v| da[v as usize]).max().unwrap() + 1
        }
    };
    let max_chain = longest_degree_two_chain(t);
    3.max(spine_len).max(t.max_degree()).max(max_chain)
}

/// Longest path (in vertices) whose internal vertices all have degree 2:
/// the maximal chains between vertices of degree other than 2.
fn longest_degree_two_chain(t: &Graph) -> usize {
    if t.n() == 1 {
        return 1;
    }
    let mut best = 2;
    for s in 0..t.n() as Vertex {
        if t.degree(s) == 2 {
            continue;
        }
        for &first in t.neighbour_slice(s) {
            let (mut prev, mut cur, mut len) = (s, first, 2);
            while t.degree(cur) == 2 {
                let next = t.neighbour_slice(cur).iter().copied().find(|&w| w != prev).unwrap();
                prev = cur;
                cur = next;
                len += 1;
            }
            best = best.max(len);
        }
    }
    best
}

/// Identifier of a vertex of a nursery. Never reused within one engine run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A rooted tree on local vertices `0..k`, with explicit parent pointers
/// toward the head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chrysalis {
    tau: usize,
    tree: Graph,
    head: Vertex,
    parent: Vec<Option<Vertex>>,
    spine: Vec<Vertex>,
    /// Vertices of degree ≥ 2 that are off the head-rooted spine.
    off_spine: Vec<Vertex>,
}

impl Chrysalis {
    pub fn new(tau: usize, tree: Graph, head: Vertex) -> Result<Self, TreeError> {
        if !is_tree(&tree) {
            return Err(TreeError::NotATree);
        }
        if head as usize >= tree.n() {
            return Err(TreeError::BadHead(head as usize));
        }
        let parent = bfs_parents(&tree, head);
        let dist = bfs_dist(&tree, head);
        let inner = vertices_with_degree_at_least(&tree, 2);
        let far = inner
            .iter()
            .copied()
            .max_by_key(|&v| (dist[v as usize], std::cmp::Reverse(v)))
            .unwrap_or(head);
        let mut spine = tree_path(&tree, far, head);
        spine.reverse();
        let off_spine = inner.into_iter().filter(|v| !spine.contains(v)).collect();
        Ok(Chrysalis { tau, tree, head, parent, spine, off_spine })
    }

    pub fn isolated(tau: usize) -> Self {
        Chrysalis::new(tau, Graph::empty(1), 0).unwrap()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn head(&self) -> Vertex {
        self.head
    }

    /// Spine from the head outward.
    pub fn spine(&self) -> &[Vertex] {
        &self.spine
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v as usize]
    }

    pub fn vertex_count(&self) -> usize {
        self.tree.n()
    }

    pub fn is_butterfly(&self) -> bool {
        self.vertex_count() == butterfly_size(self.tau) && self.validate().is_valid()
    }

    pub fn validate(&self) -> ChrysalisReport {
        validate_chrysalis(self)
    }
}

pub fn butterfly_size(tau: usize) -> usize {
    tau * tau - tau + 2
}

/// The τ-butterfly with head 0 and spine `0, 1, ..., τ`.
pub fn butterfly(tau: usize) -> Result<Chrysalis, TreeError> {
    if tau < 3 {
        return Err(TreeError::TauTooSmall(tau));
    }
    let mut edges: Vec<(Vertex, Vertex)> = (1..=tau as Vertex).map(|v| (v - 1, v)).collect();
    let mut next = tau as Vertex + 1;
    for s in 1..=tau {
        let spine_neighbours = if s == tau { 1 } else { 2 };
        for _ in 0..tau - spine_neighbours {
            edges.push((s as Vertex, next));
            next += 1;
        }
    }
    let tree = Graph::from_edges(next as usize, &edges).unwrap();
    debug_assert_eq!(tree.n(), butterfly_size(tau));
    Chrysalis::new(tau, tree, 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChrysalisReport {
    pub violations: Vec<String>,
}

impl ChrysalisReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_chrysalis(c: &Chrysalis) -> ChrysalisReport {
    let mut violations = Vec::new();
    let tau = c.tau;
    if tau < 3 {
        violations.push(format!("tau {tau} is below 3"));
    }
    if !c.off_spine.is_empty() {
        violations.push(format!(
            "not a caterpillar rooted at {}: vertices {:?} of degree >= 2 are off the spine",
            c.head, c.off_spine
        ));
    }
    if c.spine.len() > tau + 1 {
        violations.push(format!("spine has {} vertices, more than tau+1 = {}", c.spine.len(), tau + 1));
    }
    for &v in &c.spine[1..] {
        if c.tree.degree(v) != tau {
            violations.push(format!("spine vertex {v} has degree {}, expected {tau}", c.tree.degree(v)));
        }
    }
    let hd = c.tree.degree(c.head);
    if hd + 1 > tau {
        violations.push(format!("head has degree {hd}, more than tau-1 = {}", tau.saturating_sub(1)));
    }
    if c.spine.len() == tau + 1 && hd != 1 {
        violations.push(format!("spine has tau+1 vertices but the head has degree {hd}"));
    }
    ChrysalisReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NurseryComponent {
    created: usize,
    head: NodeId,
    /// Parent toward the head for every non-head vertex.
    parent: BTreeMap<NodeId, NodeId>,
}

impl NurseryComponent {
    pub fn head(&self) -> NodeId {
        self.head
    }

    pub fn created(&self) -> usize {
        self.created
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len() + 1
    }

    /// Head first, then the rest in ascending identifier order.
    pub fn nodes(&self) -> Vec<NodeId> {
        std::iter::once(self.head).chain(self.parent.keys().copied()).collect()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v == self.head || self.parent.contains_key(&v)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent.get(&v).copied()
    }

    pub fn children(&self, v: NodeId) -> Vec<NodeId> {
        self.parent.iter().filter(|(_, &p)| p == v).map(|(&c, _)| c).collect()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.children(v).len() + usize::from(v != self.head)
    }

    /// Non-head vertices without children; these are exactly the vertices
    /// off the spine.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.parent.keys().copied().filter(|&v| self.children(v).is_empty()).collect()
    }

    /// The component as a [`Chrysalis`], head relabelled to 0 and the other
    /// vertices numbered in the order of [`NurseryComponent::nodes`].
    pub fn to_chrysalis(&self, tau: usize) -> (Chrysalis, Vec<NodeId>) {
        let nodes = self.nodes();
        let index: BTreeMap<NodeId, Vertex> = nodes.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
        let edges: Vec<_> = self.parent.iter().map(|(c, p)| (index[c], index[p])).collect();
        let tree = Graph::from_edges(nodes.len(), &edges).unwrap();
        (Chrysalis::new(tau, tree, 0).unwrap(), nodes)
    }
}

/// A disjoint union of τ-chrysalises, kept sorted by vertex count with ties
/// broken by creation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nursery {
    tau: usize,
    components: Vec<NurseryComponent>,
    next_created: usize,
}

/// Which component absorbed the other in [`Nursery::merge`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub nursery: Nursery,
    /// Nursery vertices deleted by the merge.
    pub deleted: Vec<NodeId>,
}

impl Nursery {
    pub fn empty(tau: usize) -> Self {
        Nursery { tau, components: Vec::new(), next_created: 0 }
    }

    /// `count` isolated heads with identifiers `0..count`.
    pub fn isolated(tau: usize, count: usize) -> Self {
        let components = (0..count)
            .map(|i| NurseryComponent { created: i, head: NodeId(i as u32), parent: BTreeMap::new() })
            .collect();
        Nursery { tau, components, next_created: count }
    }

    /// A one-component nursery whose node `NodeId(v)` is vertex `v` of `c`.
    pub fn from_chrysalis(c: &Chrysalis) -> Self {
        let parent = (0..c.vertex_count() as Vertex)
            .filter_map(|v| c.parent(v).map(|p| (NodeId(v), NodeId(p))))
            .collect();
        let component = NurseryComponent { created: 0, head: NodeId(c.head()), parent };
        Nursery { tau: c.tau(), components: vec![component], next_created: 1 }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn components(&self) -> &[NurseryComponent] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(NurseryComponent::vertex_count).sum()
    }

    pub fn phi(&self) -> BigUint {
        self.components.iter().fold(BigUint::zero(), |acc, c| acc + (BigUint::one() << c.vertex_count()))
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out: Vec<_> = self.components.iter().flat_map(|c| c.nodes()).collect();
        out.sort();
        out
    }

    pub fn component_of(&self, v: NodeId) -> Option<&NurseryComponent> {
        self.components.iter().find(|c| c.contains(v))
    }

    pub fn is_head(&self, v: NodeId) -> bool {
        self.components.iter().any(|c| c.head == v)
    }

    pub fn heads(&self) -> Vec<NodeId> {
        self.components.iter().map(|c| c.head).collect()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.component_of(v).is_some_and(|c| c.parent.contains_key(&v) && c.children(v).is_empty())
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.component_of(v).and_then(|c| c.parent(v))
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.parent(u) == Some(v) || self.parent(v) == Some(u)
    }

    /// Directed edges `child -> parent`, pointing toward the heads.
    pub fn directed_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> =
            self.components.iter().flat_map(|c| c.parent.iter().map(|(&a, &b)| (a, b))).collect();
        out.sort();
        out
    }

    /// Index of the first component that is the τ-butterfly.
    pub fn butterfly_index(&self) -> Option<usize> {
        self.components.iter().position(|c| {
            c.vertex_count() == butterfly_size(self.tau) && c.to_chrysalis(self.tau).0.is_butterfly()
        })
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for v in c.to_chrysalis(self.tau).0.validate().violations {
                out.push(format!("component {k} (head {}): {v}", c.head));
            }
        }
        for w in self.components.windows(2) {
            if (w[0].vertex_count(), w[0].created) > (w[1].vertex_count(), w[1].created) {
                out.push("components out of order".to_string());
            }
        }
        out
    }

    /// Joins heads `h_i` and `h_j` of components `i` and `j` (sorted
    /// indices) with `h_j` as the new head. When `j < i` the rest of
    /// component `j` is deleted; otherwise the rest of component `i` is.
    pub fn merge(&self, i: usize, j: usize) -> MergeOutcome {
        assert!(i != j && i < self.components.len() && j < self.components.len());
        let (hi, hj) = (self.components[i].head, self.components[j].head);
        let (kept, dropped) = if j < i { (i, j) } else { (j, i) };
        let mut parent = self.components[kept].parent.clone();
        parent.insert(hi, hj);
        let deleted: Vec<NodeId> = self.components[dropped].parent.keys().copied().collect();
        let merged = NurseryComponent { created: self.next_created, head: hj, parent };
        let mut components: Vec<_> = self
            .components
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, c)| c.clone())
            .collect();
        components.push(merged);
        components.sort_by_key(|c| (c.vertex_count(), c.created));
        MergeOutcome {
            nursery: Nursery { tau: self.tau, components, next_created: self.next_created + 1 },
            deleted,
        }
    }
}

/// `m` improves `n`: fewer components and no smaller φ.
pub fn is_improvement(m: &Nursery, n: &Nursery) -> Result<bool, TreeError> {
    if m.tau != n.tau {
        return Err(TreeError::TauMismatch(m.tau, n.tau));
    }
    Ok(m.component_count() < n.component_count() && m.phi() >= n.phi())
}
