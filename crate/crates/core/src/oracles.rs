//! Brute-force ground truth: induced embeddings, best anticomplete pairs,
//! exact chromatic numbers, the literal definition of "τ fits T", and the
//! witness verifier.
//!
//! Nothing here calls into the engine; these are the independent checks the
//! engine's outputs are held against.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::engine::Witness;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::mass::MassProvider;
use crate::ratio::{format_rational, Rational};
use crate::trees::CaterpillarTree;

/// Default backtracking budget for [`brute_induced_embedding`]; overridable
/// through this environment variable in the CLI.
pub const NODE_LIMIT_ENV: &str = "CATERPILLAR_EH_NODE_LIMIT";
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;
pub const ANTICOMPLETE_LIMIT: usize = 16;
pub const CHROMATIC_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search exceeded {0} backtracking nodes")]
    NodeLimit(u64),
    #[error("graph has {n} vertices, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

pub fn default_node_limit() -> u64 {
    std::env::var(NODE_LIMIT_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_NODE_LIMIT)
}

/// An induced embedding `V(t) -> V(g)`, indexed by vertex of `t`.
pub type EmbeddingResult = Option<Vec<Vertex>>;

/// Lexicographically least induced embedding of `t` into `g` (by the vertex
/// order of `t`), or `None`. Running out of budget is an error, never `None`.
pub fn brute_induced_embedding(g: &Graph, t: &Graph, node_limit: u64) -> Result<EmbeddingResult, OracleError> {
    if t.n() > g.n() {
        return Ok(None);
    }
    let mut state = EmbedState { g, t, image: Vec::with_capacity(t.n()), used: vec![false; g.n()], nodes: 0, limit: node_limit };
    if state.extend()? {
        Ok(Some(state.image))
    } else {
        Ok(None)
    }
}

struct EmbedState<'a> {
    g: &'a Graph,
    t: &'a Graph,
    image: Vec<Vertex>,
    used: Vec<bool>,
    nodes: u64,
    limit: u64,
}

impl EmbedState<'_> {
    fn extend(&mut self) -> Result<bool, OracleError> {
        let k = self.image.len();
        if k == self.t.n() {
            return Ok(true);
        }
        let tk = k as Vertex;
        for cand in 0..self.g.n() as Vertex {
            if self.used[cand as usize] || self.g.degree(cand) < self.t.degree(tk) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(OracleError::NodeLimit(self.limit));
            }
            let consistent = self
                .image
                .iter()
                .enumerate()
                .all(|(prev, &img)| self.t.has_edge(prev as Vertex, tk) == self.g.has_edge(img, cand));
            if !consistent {
                continue;
            }
            self.used[cand as usize] = true;
            self.image.push(cand);
            if self.extend()? {
                return Ok(true);
            }
            self.image.pop();
            self.used[cand as usize] = false;
        }
        Ok(false)
    }
}

/// Checks that `map` is an injective map `V(t) -> V(g)` preserving adjacency
/// and non-adjacency. Returns one message per offending pair.
pub fn check_induced_embedding(g: &Graph, t: &Graph, map: &[Vertex]) -> Vec<String> {
    let mut out = Vec::new();
    if map.len() != t.n() {
        out.push(format!("embedding has {} entries, tree has {} vertices", map.len(), t.n()));
        return out;
    }
    if let Some(&v) = map.iter().find(|&&v| v as usize >= g.n()) {
        out.push(format!("image vertex {v} out of range"));
        return out;
    }
    let distinct: BTreeSet<_> = map.iter().collect();
    if distinct.len() != map.len() {
        out.push("embedding is not injective".to_string());
    }
    for a in 0..t.n() as Vertex {
        for b in a + 1..t.n() as Vertex {
            let (ga, gb) = (map[a as usize], map[b as usize]);
            let want = t.has_edge(a, b);
            if ga != gb && want != g.has_edge(ga, gb) {
                let what = if want { "adjacency" } else { "non-adjacency" };
                out.push(format!("{what} of tree pair ({a},{b}) not preserved by ({ga},{gb})"));
            }
        }
    }
    out
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n() as Vertex)
        .map(|v| g.neighbour_slice(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

/// The anticomplete pair maximizing `min(|a|,|b|)`, then `|a|+|b|`, then
/// lexicographically least `(a, b)`. `(∅, ∅)` when no nonempty pair exists.
pub fn brute_best_anticomplete(g: &Graph) -> Result<(Vec<Vertex>, Vec<Vertex>), OracleError> {
    let n = g.n();
    if n > ANTICOMPLETE_LIMIT {
        return Err(OracleError::TooLarge { n, limit: ANTICOMPLETE_LIMIT });
    }
    let adj = masks(g);
    let mut best = Best { min: 0, sum: 0, a: Vec::new(), b: Vec::new() };
    assign(&adj, 0, 0, 0, 0, 0, &mut best);
    if best.min == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    Ok((best.a, best.b))
}

struct Best {
    min: u32,
    sum: u32,
    a: Vec<Vertex>,
    b: Vec<Vertex>,
}

fn bits(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Each vertex goes to `a`, `b`, or neither; a vertex may join `a` only if it
/// has no neighbour in `b` and vice versa.
fn assign(adj: &[u32], v: usize, a: u32, b: u32, na: u32, nb: u32, best: &mut Best) {
    let rest = (adj.len() - v) as u32;
    let (ca, cb) = (a.count_ones(), b.count_ones());
    let bound_min = (ca + rest).min(cb + rest);
    if bound_min < best.min || (bound_min == best.min && ca + cb + rest < best.sum) {
        return;
    }
    if v == adj.len() {
        let (min, sum) = (ca.min(cb), ca + cb);
        let better = (min, sum) > (best.min, best.sum)
            || ((min, sum) == (best.min, best.sum) && (bits(a), bits(b)) < (best.a.clone(), best.b.clone()));
        if better {
            *best = Best { min, sum, a: bits(a), b: bits(b) };
        }
        return;
    }
    let bit = 1u32 << v;
    if nb & bit == 0 {
        assign(adj, v + 1, a | bit, b, na | adj[v], nb, best);
    }
    if na & bit == 0 {
        assign(adj, v + 1, a, b | bit, na, nb | adj[v], best);
    }
    assign(adj, v + 1, a, b, na, nb, best);
}

/// Exact χ(g) by saturation-ordered branch and bound with a greedy clique
/// lower bound.
pub fn exact_chromatic_number(g: &Graph) -> Result<u32, OracleError> {
    if g.n() > CHROMATIC_LIMIT {
        return Err(OracleError::TooLarge { n: g.n(), limit: CHROMATIC_LIMIT });
    }
    Ok(chromatic_number_induced(g, &g.all_vertices()))
}

/// χ(G[x]) for `|x| <= 64`. Panics on larger sets.
pub fn chromatic_number_induced(g: &Graph, x: &VertexSet) -> u32 {
    let members = x.to_vec();
    assert!(members.len() <= 64, "exact colouring is limited to 64 vertices");
    let local: Vec<u64> = members
        .iter()
        .map(|&v| {
            members
                .iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(v, w))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    chromatic_of_masks(&local)
}

fn chromatic_of_masks(adj: &[u64]) -> u32 {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let lower = greedy_clique(adj);
    let mut colouring = Colouring { adj, colour: vec![u32::MAX; n], best: dsatur_upper(adj), lower };
    if colouring.best > lower {
        colouring.search(0);
    }
    colouring.best
}

fn greedy_clique(adj: &[u64]) -> u32 {
    let n = adj.len();
    let mut best = 1;
    for start in 0..n {
        let mut clique = 1u64 << start;
        let mut cand = adj[start];
        while cand != 0 {
            // take the candidate with most neighbours among the candidates
            let v = (0..n)
                .filter(|&v| cand >> v & 1 == 1)
                .max_by_key(|&v| ((adj[v] & cand).count_ones(), std::cmp::Reverse(v)))
                .unwrap();
            clique |= 1 << v;
            cand &= adj[v];
        }
        best = best.max(clique.count_ones());
    }
    best
}

fn pick_saturated(adj: &[u64], colour: &[u32]) -> Option<usize> {
    let uncoloured: u64 = colour
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == u32::MAX)
        .fold(0, |m, (i, _)| m | 1 << i);
    (0..adj.len())
        .filter(|&v| colour[v] == u32::MAX)
        .max_by_key(|&v| {
            let seen: u64 = (0..adj.len())
                .filter(|&w| adj[v] >> w & 1 == 1 && colour[w] != u32::MAX)
                .fold(0, |m, w| m | 1 << colour[w]);
            (seen.count_ones(), (adj[v] & uncoloured).count_ones(), std::cmp::Reverse(v))
        })
}

fn forbidden(adj: &[u64], colour: &[u32], v: usize) -> u64 {
    (0..adj.len())
        .filter(|&w| adj[v] >> w & 1 == 1 && colour[w] != u32::MAX)
        .fold(0, |m, w| m | 1 << colour[w])
}

fn dsatur_upper(adj: &[u64]) -> u32 {
    let mut colour = vec![u32::MAX; adj.len()];
    let mut used = 0;
    while let Some(v) = pick_saturated(adj, &colour) {
        let f = forbidden(adj, &colour, v);
        let c = (!f).trailing_zeros();
        colour[v] = c;
        used = used.max(c + 1);
    }
    used
}

struct Colouring<'a> {
    adj: &'a [u64],
    colour: Vec<u32>,
    best: u32,
    lower: u32,
}

impl Colouring<'_> {
    fn search(&mut self, used: u32) {
        if self.best == self.lower {
            return;
        }
        let Some(v) = pick_saturated(self.adj, &self.colour) else {
            self.best = self.best.min(used);
            return;
        };
        let f = forbidden(self.adj, &self.colour, v);
        // colours 0..used, then one fresh colour if it could still improve
        for c in 0..=used {
            if f >> c & 1 == 1 {
                continue;
            }
            let next_used = used.max(c + 1);
            if next_used >= self.best {
                continue;
            }
            self.colour[v] = c;
            self.search(next_used);
            self.colour[v] = u32::MAX;
        }
    }
}

/// Enumerates every path of the tree `t` (as vertex sequences, each
/// unordered path once per direction).
fn all_tree_paths(t: &Graph) -> Vec<Vec<Vertex>> {
    fn walk(t: &Graph, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        for &w in t.neighbour_slice(last) {
            if !path.contains(&w) {
                path.push(w);
                walk(t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..t.n() as Vertex {
        walk(t, &mut vec![s], &mut out);
    }
    out
}

/// The three fit conditions checked literally over all paths of `t`.
pub fn fits_by_definition(t: &Graph, tau: usize) -> bool {
    if tau < 3 {
        return false;
    }
    let paths = all_tree_paths(t);
    let branch: Vec<Vertex> = (0..t.n() as Vertex).filter(|&v| t.degree(v) > 2).collect();
    let spine_ok = paths.iter().any(|p| p.len() <= tau && branch.iter().all(|v| p.contains(v)));
    let degree_ok = t.max_degree() <= tau;
    let chains_ok = paths
        .iter()
        .filter(|p| p.len() < 3 || p[1..p.len() - 1].iter().all(|&v| t.degree(v) == 2))
        .all(|p| p.len() <= tau);
    spine_ok && degree_ok && chains_ok
}

/// Smallest τ ≥ 3 that fits `t` by [`fits_by_definition`].
pub fn min_fit_by_definition(t: &Graph) -> usize {
    (3..).find(|&tau| fits_by_definition(t, tau)).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub verified: bool,
    pub failures: Vec<String>,
    /// Masses evaluated during the check, keyed by role.
    pub masses: Vec<(String, Rational)>,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        if self.verified {
            "verified".to_string()
        } else {
            format!("FAILED: {}", self.failures.join("; "))
        }
    }
}

/// Checks a witness against its defining inequalities, using only the graph,
/// the mass, the tree and ε.
pub fn verify_witness(g: &Graph, m: &MassProvider, t: &CaterpillarTree, epsilon: &Rational, w: &Witness) -> VerifyReport {
    let mut failures = Vec::new();
    let mut masses = Vec::new();
    let n = g.n();
    let in_range = |v: Vertex| (v as usize) < n;
    let mut require_mass = |label: &str, set: &VertexSet, failures: &mut Vec<String>| {
        let mu = m.mass(set);
        if &mu < epsilon {
            failures.push(format!("mass of {label} is {} < epsilon {}", format_rational(&mu), format_rational(epsilon)));
        }
        masses.push((label.to_string(), mu));
    };
    match w {
        Witness::HighMassVertex { vertex } => {
            if !in_range(*vertex) {
                failures.push(format!("vertex {vertex} out of range"));
            } else {
                require_mass("vertex", &VertexSet::from_iter(n, [*vertex]), &mut failures);
            }
        }
        Witness::HighMassNeighbourhood { vertex } => {
            if !in_range(*vertex) {
                failures.push(format!("vertex {vertex} out of range"));
            } else {
                require_mass("neighbourhood", &g.neighbours(*vertex).unwrap(), &mut failures);
            }
        }
        Witness::AnticompletePair { a, b } => {
            match (g.set_of(a), g.set_of(b)) {
                (Ok(sa), Ok(sb)) => {
                    if !sa.is_disjoint(&sb) {
                        failures.push("sets A and B intersect".to_string());
                    } else if !g.is_anticomplete(&sa, &sb) {
                        let (u, v) = sa
                            .iter()
                            .flat_map(|u| g.neighbour_slice(u).iter().map(move |&v| (u, v)))
                            .find(|&(_, v)| sb.contains(v))
                            .unwrap();
                        failures.push(format!("edge {u}-{v} joins A and B"));
                    }
                    require_mass("A", &sa, &mut failures);
                    require_mass("B", &sb, &mut failures);
                }
                _ => failures.push("pair references a vertex out of range".to_string()),
            }
        }
        Witness::InducedCopy { embedding } => {
            failures.extend(check_induced_embedding(g, t.graph(), embedding));
        }
        Witness::Stuck { stage, diagnostics } => {
            failures.push(format!("unverified: stuck at {stage}"));
            failures.extend(diagnostics.iter().cloned());
        }
    }
    VerifyReport { verified: failures.is_empty(), failures, masses }
}
