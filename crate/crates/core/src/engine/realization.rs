//! κ-realizations of a nursery and their six-condition checker.

use std::collections::{BTreeMap, BTreeSet};

use super::pieces::{check_spire, Spire};
use crate::graph::{Graph, VertexSet};
use crate::mass::MassProvider;
use crate::ratio::{format_rational, Rational};
use crate::trees::{NodeId, Nursery};

/// The map v ↦ X_v, plus a τ-spire for every leaf of the nursery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub nursery: Nursery,
    pub assignment: BTreeMap<NodeId, VertexSet>,
    pub spires: BTreeMap<NodeId, Spire>,
    pub kappa: Rational,
}

impl Realization {
    /// `blocks.len()` isolated heads, head `i` realized by `blocks[i]`.
    pub fn initial(tau: usize, blocks: Vec<VertexSet>, kappa: Rational) -> Self {
        let nursery = Nursery::isolated(tau, blocks.len());
        let assignment = blocks.into_iter().enumerate().map(|(i, b)| (NodeId(i as u32), b)).collect();
        Realization { nursery, assignment, spires: BTreeMap::new(), kappa }
    }

    pub fn set(&self, v: NodeId) -> &VertexSet {
        &self.assignment[&v]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealizationReport {
    /// (condition number, message). Condition 0 covers structural problems
    /// such as an invalid nursery or a missing assignment.
    pub violations: Vec<(u8, String)>,
}

impl RealizationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> BTreeSet<u8> {
        self.violations.iter().map(|(c, _)| *c).collect()
    }

    pub fn summary(&self) -> String {
        self.violations.iter().map(|(c, m)| format!("[{c}] {m}")).collect::<Vec<_>>().join("; ")
    }
}

/// Evaluates the six realization conditions literally.
pub fn check_realization(g: &Graph, m: &MassProvider, r: &Realization) -> RealizationReport {
    let mut out = Vec::new();
    let nursery = &r.nursery;
    let tau = nursery.tau();
    for v in nursery.validate() {
        out.push((0, v));
    }
    let nodes: BTreeSet<NodeId> = nursery.nodes().into_iter().collect();
    let assigned: BTreeSet<NodeId> = r.assignment.keys().copied().collect();
    if nodes != assigned {
        out.push((0, format!("assignment covers {assigned:?} but the nursery has {nodes:?}")));
        return RealizationReport { violations: out };
    }
    let heads: BTreeSet<NodeId> = nursery.heads().into_iter().collect();
    let parent: BTreeMap<NodeId, NodeId> = nursery.directed_edges().into_iter().collect();
    let leaves: BTreeSet<NodeId> = nodes.iter().copied().filter(|&v| nursery.is_leaf(v)).collect();

    // 1: disjointness
    let mut owner: Vec<Option<NodeId>> = vec![None; g.n()];
    for (&v, x) in &r.assignment {
        for w in x.iter() {
            match owner[w as usize] {
                Some(u) => out.push((1, format!("vertex {w} lies in both X_{u} and X_{v}"))),
                None => owner[w as usize] = Some(v),
            }
        }
    }

    // 2: leaf spires
    for &v in &leaves {
        match r.spires.get(&v) {
            None => out.push((2, format!("leaf {v} has no spire"))),
            Some(s) => {
                let x = r.set(v);
                for e in check_spire(g, x, s, tau) {
                    out.push((2, format!("leaf {v}: {e}")));
                }
                if &s.vertex_set() != x {
                    out.push((2, format!("X_{v} is not the union of its spire path and Z")));
                }
            }
        }
    }
    for v in r.spires.keys() {
        if !leaves.contains(v) {
            out.push((0, format!("spire recorded for non-leaf {v}")));
        }
    }

    // 3: leaf paths anticomplete to every other class
    for &v in &leaves {
        let Some(s) = r.spires.get(&v) else { continue };
        for &x in &s.xs {
            for &w in g.neighbour_slice(x) {
                if let Some(u) = owner[w as usize] {
                    if u != v {
                        out.push((3, format!("spire vertex {x} of leaf {v} is adjacent to {w} in X_{u}")));
                    }
                }
            }
        }
    }

    // 4: edges only along nursery edges or between heads
    let adjacent = |a: NodeId, b: NodeId| parent.get(&a) == Some(&b) || parent.get(&b) == Some(&a);
    let mut reported = BTreeSet::new();
    for (a, b) in g.edges() {
        if let (Some(u), Some(v)) = (owner[a as usize], owner[b as usize]) {
            let pair = (u.min(v), u.max(v));
            if u != v && !adjacent(u, v) && !(heads.contains(&u) && heads.contains(&v)) && reported.insert(pair) {
                out.push((4, format!("edge {a}-{b} joins X_{u} and X_{v}, which are not adjacent in the nursery")));
            }
        }
    }

    // 5: covering along directed edges
    for (&u, &v) in &parent {
        let (xu, xv) = (r.set(u), r.set(v));
        if let Some(w) = xv.iter().find(|&w| !g.has_neighbour_in(w, xu)) {
            out.push((5, format!("X_{u} does not cover X_{v}: vertex {w} has no neighbour in X_{u}")));
        }
    }

    // 6: head masses
    for &h in &heads {
        let mu = m.mass(r.set(h));
        if mu < r.kappa {
            out.push((
                6,
                format!("head {h} has mass {} < kappa {}", format_rational(&mu), format_rational(&r.kappa)),
            ));
        }
    }
    RealizationReport { violations: out }
}
