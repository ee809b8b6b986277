//! One improvement step: merge two components of a realized nursery at the
//! next, smaller κ.

use super::pieces::{grow_spire, Spire, SpireOutcome};
use super::realization::Realization;
use super::EngineError;
use crate::graph::{Graph, VertexSet};
use crate::mass::MassProvider;
use crate::ratio::{format_rational, from_usize, Rational};
use crate::trees::NodeId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImproveOutcome {
    Improved {
        realization: Realization,
        /// Component indices merged (h_i grew the spire, h_j is the new head).
        i: usize,
        j: usize,
        /// Length of the connected prefix of Z that was used.
        m: usize,
        diagnostics: Vec<String>,
    },
    Pair(VertexSet, VertexSet),
    Stuck(Vec<String>),
}

/// Merges two components of `r.nursery` and re-realizes the result at
/// `kappa_next`.
pub fn improve(
    g: &Graph,
    mass: &MassProvider,
    r: &Realization,
    kappa_next: &Rational,
    epsilon: &Rational,
    spire_seed: Option<u64>,
) -> Result<ImproveOutcome, EngineError> {
    let nursery = &r.nursery;
    let tau = nursery.tau();
    if nursery.component_count() < 2 {
        return Err(EngineError::Precondition("improve needs at least two components".into()));
    }
    if nursery.butterfly_index().is_some() {
        return Err(EngineError::Precondition("improve called on a nursery containing the butterfly".into()));
    }
    let needed = from_usize(2) * kappa_next + from_usize(tau + 2) * epsilon;
    if r.kappa < needed {
        return Err(EngineError::Precondition(format!(
            "kappa {} is below 2*kappa' + (tau+2)*epsilon = {}",
            format_rational(&r.kappa),
            format_rational(&needed)
        )));
    }

    let comps = nursery.components();
    let heads: Vec<NodeId> = comps.iter().map(|c| c.head()).collect();
    let i = (0..comps.len()).rev().find(|&k| comps[k].degree(heads[k]) == tau - 1).unwrap_or(0);

    let xi = r.set(heads[i]);
    let spire = match grow_spire(g, mass, xi, tau, epsilon, spire_seed) {
        Ok(SpireOutcome::Spire(s)) => s,
        Ok(SpireOutcome::Pair(a, b)) => return Ok(ImproveOutcome::Pair(a, b)),
        Ok(SpireOutcome::Stuck(d)) => return Ok(ImproveOutcome::Stuck(d)),
        Err(EngineError::Precondition(d)) => return Ok(ImproveOutcome::Stuck(vec![d])),
        Err(e) => return Err(e),
    };

    let xs_set = VertexSet::from_iter(g.n(), spire.xs.iter().copied());
    let touched = g.neighbourhood_of(spire.xs.iter().copied());
    let others: Vec<usize> = (0..comps.len()).filter(|&k| k != i).collect();
    let ys: Vec<VertexSet> = others.iter().map(|&k| r.set(heads[k]).difference(&touched)).collect();

    let x_tau = spire.xs[tau - 1];
    let order = g.connected_order(&spire.z, x_tau)?;
    let threshold = kappa_next + epsilon;
    let mut uncovered = ys.clone();
    let mut found = None;
    'grow: for (idx, &zv) in order.iter().enumerate() {
        for u in uncovered.iter_mut() {
            for &w in g.neighbour_slice(zv) {
                u.remove(w);
            }
        }
        for (slot, u) in uncovered.iter().enumerate() {
            if mass.mass(u) < threshold {
                found = Some((idx + 1, slot));
                break 'grow;
            }
        }
    }
    let Some((m, slot)) = found else {
        // every Y_j keeps mass ≥ κ'+ε away from all of Z: the pair the proof
        // rules out with the third axiom
        return Ok(ImproveOutcome::Pair(spire.z.clone(), uncovered[0].clone()));
    };
    let j = others[slot];
    let mut diagnostics = Vec::new();
    if m == 1 {
        diagnostics.push(format!("minimal prefix length m = 1 at component {j}"));
    }

    let prefix = VertexSet::from_iter(g.n(), order[..m].iter().copied());
    let merged = nursery.merge(i, j);
    let mut assignment = r.assignment.clone();
    let mut spires = r.spires.clone();
    for v in &merged.deleted {
        assignment.remove(v);
        spires.remove(v);
    }
    assignment.insert(heads[i], prefix.union(&xs_set));
    for (s, &k) in others.iter().enumerate() {
        let set = if k == j { ys[s].difference(&uncovered[s]) } else { uncovered[s].clone() };
        assignment.insert(heads[k], set);
    }
    if j > i {
        // h_i is now a leaf hanging off h_j
        spires.insert(heads[i], Spire { xs: spire.xs.clone(), z: prefix });
    }
    let realization = Realization { nursery: merged.nursery, assignment, spires, kappa: kappa_next.clone() };
    Ok(ImproveOutcome::Improved { realization, i, j, m, diagnostics })
}
