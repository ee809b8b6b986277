//! Big pieces and τ-spires.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EngineError;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::mass::MassProvider;
use crate::ratio::{format_rational, from_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceOutcome {
    /// The unique component of G[X] with mass above μ(X) − ε.
    Piece(VertexSet),
    /// Anticomplete sets inside X, both of mass at least ε.
    Pair(VertexSet, VertexSet),
}

/// Splits X into its big piece, or finds an anticomplete pair inside X.
pub fn big_piece(g: &Graph, m: &MassProvider, x: &VertexSet, epsilon: &Rational) -> Result<PieceOutcome, EngineError> {
    let total = m.mass(x);
    if total < from_usize(3) * epsilon {
        return Err(EngineError::Precondition(format!(
            "big_piece needs mass >= 3*epsilon, got {}",
            format_rational(&total)
        )));
    }
    let comps = g.components(x);
    let mut prefix = VertexSet::empty(x.universe());
    let mut pivot = comps.len();
    for (k, c) in comps.iter().enumerate() {
        prefix.union_with(c);
        if &m.mass(&prefix) >= epsilon {
            pivot = k;
            break;
        }
    }
    // μ(X) ≥ 3ε > 0 and μ is monotone, so the full union reaches ε
    debug_assert!(pivot < comps.len());
    let suffix = x.difference(&prefix);
    if &m.mass(&suffix) >= epsilon {
        return Ok(PieceOutcome::Pair(prefix, suffix));
    }
    let piece = comps[pivot].clone();
    let rest = x.difference(&piece);
    if &m.mass(&rest) >= epsilon {
        return Ok(PieceOutcome::Pair(piece, rest));
    }
    Ok(PieceOutcome::Piece(piece))
}

/// A τ-spire (x_1, ..., x_τ, Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spire {
    pub xs: Vec<Vertex>,
    pub z: VertexSet,
}

impl Spire {
    /// {x_1, ..., x_τ} ∪ Z.
    pub fn vertex_set(&self) -> VertexSet {
        let mut s = self.z.clone();
        for &v in &self.xs {
            s.insert(v);
        }
        s
    }
}

/// Lists every way `s` fails to be a τ-spire in `x`.
pub fn check_spire(g: &Graph, x: &VertexSet, s: &Spire, tau: usize) -> Vec<String> {
    let mut out = Vec::new();
    if s.xs.len() != tau {
        out.push(format!("spire path has {} vertices, expected {tau}", s.xs.len()));
        return out;
    }
    for (a, &u) in s.xs.iter().enumerate() {
        if !x.contains(u) {
            out.push(format!("path vertex {u} lies outside X"));
        }
        for (b, &v) in s.xs.iter().enumerate().skip(a + 1) {
            if u == v {
                out.push(format!("path vertex {u} repeated"));
            } else if g.has_edge(u, v) != (b == a + 1) {
                out.push(format!("path is not induced at {u}-{v}"));
            }
        }
    }
    if !s.z.is_subset(x) {
        out.push("Z is not contained in X".to_string());
    }
    let last = s.xs[tau - 1];
    if !s.z.contains(last) {
        out.push(format!("Z does not contain x_tau = {last}"));
    }
    for &u in &s.xs[..tau - 1] {
        if s.z.contains(u) {
            out.push(format!("Z contains path vertex {u}"));
        }
        if let Some(&w) = g.neighbour_slice(u).iter().find(|&&w| w != last && s.z.contains(w)) {
            out.push(format!("path vertex {u} has neighbour {w} in Z"));
        }
    }
    if !g.is_connected_on(&s.z) {
        out.push("G[Z] is not connected".to_string());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpireOutcome {
    Spire(Spire),
    Pair(VertexSet, VertexSet),
    /// The construction broke down; only possible when the mass axioms fail.
    Stuck(Vec<String>),
}

/// Grows a τ-spire in X from a nested chain of big pieces.
///
/// With `seed` set, x_1 is drawn uniformly from the first big piece instead
/// of being its least vertex.
pub fn grow_spire(
    g: &Graph,
    m: &MassProvider,
    x: &VertexSet,
    tau: usize,
    epsilon: &Rational,
    seed: Option<u64>,
) -> Result<SpireOutcome, EngineError> {
    let mu = m.mass(x);
    if mu < from_usize(tau + 2) * epsilon {
        return Err(EngineError::Precondition(format!(
            "grow_spire needs mass >= (tau+2)*epsilon, got {}",
            format_rational(&mu)
        )));
    }
    let mut zi = match big_piece(g, m, x, epsilon)? {
        PieceOutcome::Piece(p) => p,
        PieceOutcome::Pair(a, b) => return Ok(SpireOutcome::Pair(a, b)),
    };
    let x1 = match seed {
        None => zi.first().unwrap(),
        Some(s) => {
            let members = zi.to_vec();
            members[ChaCha8Rng::seed_from_u64(s).gen_range(0..members.len())]
        }
    };
    let mut xs = vec![x1];
    let mut removed = VertexSet::empty(x.universe());
    for i in 1..tau {
        let last = xs[i - 1];
        for &w in g.neighbour_slice(last) {
            removed.insert(w);
        }
        let y = x.difference(&removed);
        if m.mass(&y) < from_usize(3) * epsilon {
            return Ok(SpireOutcome::Stuck(vec![format!(
                "mass of X minus the neighbourhoods of x_1..x_{i} fell below 3*epsilon"
            )]));
        }
        let next = match big_piece(g, m, &y, epsilon)? {
            PieceOutcome::Piece(p) => p,
            PieceOutcome::Pair(a, b) => return Ok(SpireOutcome::Pair(a, b)),
        };
        let candidate = g
            .neighbour_slice(last)
            .iter()
            .copied()
            .find(|&w| zi.contains(w) && !xs.contains(&w) && g.has_neighbour_in(w, &next));
        match candidate {
            Some(w) => xs.push(w),
            None => {
                return Ok(SpireOutcome::Stuck(vec![format!(
                    "no neighbour of x_{i} = {last} in Z_{i} reaches Z_{}",
                    i + 1
                )]))
            }
        }
        zi = next;
    }
    zi.insert(xs[tau - 1]);
    Ok(SpireOutcome::Spire(Spire { xs, z: zi }))
}
