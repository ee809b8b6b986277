//! The outer loop: axiom checks, initial blocks, and improvements down the
//! κ schedule until a witness appears.

use serde::{Deserialize, Serialize};

use super::extract::extract_copy;
use super::improve::{improve, ImproveOutcome};
use super::params::EngineParams;
use super::pieces::{big_piece, PieceOutcome};
use super::realization::{check_realization, Realization};
use super::{EngineError, Witness};
use crate::graph::{Graph, VertexSet};
use crate::mass::MassProvider;
use crate::oracles::{verify_witness, VerifyReport};
use crate::ratio::{format_rational, from_usize, Rational};
use crate::trees::{is_improvement, CaterpillarTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlocksOutcome {
    Blocks(Vec<VertexSet>),
    Stuck(String),
}

/// Greedy blocks in ascending identifier order, each closed as soon as its
/// mass reaches κ_0. Returns the first p.
pub fn initial_blocks(g: &Graph, m: &MassProvider, params: &EngineParams) -> BlocksOutcome {
    match params.kappa(0) {
        Some(kappa0) => blocks_at(g, m, &kappa0, params.p),
        None => BlocksOutcome::Stuck("kappa schedule infeasible".into()),
    }
}

/// [`initial_blocks`] for an explicit threshold and block count.
pub fn blocks_at(g: &Graph, m: &MassProvider, kappa0: &Rational, p: usize) -> BlocksOutcome {
    let mut blocks = Vec::with_capacity(p);
    let mut current = VertexSet::empty(g.n());
    for v in 0..g.n() as u32 {
        current.insert(v);
        if &m.mass(&current) >= kappa0 {
            blocks.push(std::mem::replace(&mut current, VertexSet::empty(g.n())));
            if blocks.len() == p {
                return BlocksOutcome::Blocks(blocks);
            }
        }
    }
    BlocksOutcome::Stuck(format!("insufficient blocks: {} of {} reached kappa_0", blocks.len(), p))
}

/// One line of the run log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub stage: String,
    pub detail: String,
    pub components: usize,
    /// φ of the current nursery, in decimal.
    pub phi: String,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub witness: Witness,
    pub verdict: VerifyReport,
    pub trace: Vec<TraceStep>,
}

struct Run<'a> {
    g: &'a Graph,
    m: &'a MassProvider,
    t: &'a CaterpillarTree,
    params: &'a EngineParams,
    trace: Vec<TraceStep>,
}

impl Run<'_> {
    fn log(&mut self, stage: &str, detail: String, r: Option<&Realization>) {
        let (components, phi) = match r {
            Some(r) => (r.nursery.component_count(), r.nursery.phi().to_string()),
            None => (0, "0".to_string()),
        };
        self.trace.push(TraceStep { stage: stage.to_string(), detail, components, phi });
    }

    fn finish(self, witness: Witness) -> Result<RunReport, EngineError> {
        let verdict = verify_witness(self.g, self.m, self.t, &self.params.epsilon, &witness);
        if witness.is_stuck() {
            if self.params.guarantee {
                return Err(EngineError::TheoremViolation(format!(
                    "stuck within the guarantee: {}",
                    verdict.failures.join("; ")
                )));
            }
        } else if !verdict.verified {
            return Err(EngineError::TheoremViolation(verdict.summary()));
        }
        Ok(RunReport { witness, verdict, trace: self.trace })
    }

    fn check(&self, r: &Realization, stage: &str) -> Result<(), EngineError> {
        let report = check_realization(self.g, self.m, r);
        if report.is_valid() {
            Ok(())
        } else {
            Err(EngineError::TheoremViolation(format!("invalid realization after {stage}: {}", report.summary())))
        }
    }
}

fn pair(a: &VertexSet, b: &VertexSet) -> Witness {
    Witness::AnticompletePair { a: a.to_vec(), b: b.to_vec() }
}

/// Runs the constructive trichotomy and verifies the witness it returns.
pub fn run_trichotomy(
    g: &Graph,
    m: &MassProvider,
    t: &CaterpillarTree,
    params: &EngineParams,
) -> Result<RunReport, EngineError> {
    if g.n() == 0 {
        return Err(EngineError::Precondition("graph has no vertices".into()));
    }
    if m.universe() != g.n() {
        return Err(EngineError::Precondition(format!(
            "mass is defined on {} vertices but the graph has {}",
            m.universe(),
            g.n()
        )));
    }
    let tau_min = t.fit_tau();
    if params.tau < tau_min {
        return Err(EngineError::Precondition(format!("tau = {} is below fit_tau(T) = {tau_min}", params.tau)));
    }
    let eps = &params.epsilon;
    let mut run = Run { g, m, t, params, trace: Vec::new() };

    for v in 0..g.n() as u32 {
        if &m.mass_of_vertex(v) >= eps {
            run.log("axiom 1", format!("vertex {v}"), None);
            return run.finish(Witness::HighMassVertex { vertex: v });
        }
    }
    for v in 0..g.n() as u32 {
        if &m.mass(&g.neighbours(v)?) >= eps {
            run.log("axiom 2", format!("neighbourhood of {v}"), None);
            return run.finish(Witness::HighMassNeighbourhood { vertex: v });
        }
    }
    let all = g.all_vertices();
    if m.mass(&all) >= from_usize(3) * eps {
        if let PieceOutcome::Pair(a, b) = big_piece(g, m, &all, eps)? {
            run.log("probe", "G itself has no big piece".into(), None);
            return run.finish(pair(&a, &b));
        }
    }
    let schedule = match params.schedule() {
        Ok(s) => s.clone(),
        Err(e) => {
            run.log("schedule", e.to_string(), None);
            return run.finish(Witness::stuck("schedule", vec![format!("kappa schedule infeasible: {e}")]));
        }
    };
    let blocks = match initial_blocks(g, m, params) {
        BlocksOutcome::Blocks(b) => b,
        BlocksOutcome::Stuck(d) => {
            run.log("blocks", d.clone(), None);
            return run.finish(Witness::stuck("initial_blocks", vec![d]));
        }
    };
    let mut r = Realization::initial(params.tau, blocks, schedule.kappa(0));
    run.check(&r, "initial blocks")?;
    run.log("blocks", format!("{} blocks at kappa_0 = {}", params.p, format_rational(&r.kappa)), Some(&r));

    for step in 1..=params.p {
        if r.nursery.butterfly_index().is_some() {
            let (embedding, host) = extract_copy(g, m, &r, t)?;
            run.log("extract", format!("host subgraph on {} vertices", host.vertices().len()), Some(&r));
            return run.finish(Witness::InducedCopy { embedding });
        }
        if r.nursery.component_count() < 2 {
            let c = &r.nursery.components()[0];
            let d = format!(
                "single component with {} vertices, phi = {} (started from phi = {})",
                c.vertex_count(),
                r.nursery.phi(),
                2 * params.p
            );
            run.log("phi-contradiction", d.clone(), Some(&r));
            return run.finish(Witness::stuck("phi-contradiction", vec![d]));
        }
        let kappa_next = schedule.kappa(step);
        let seed = params.spire_seed.map(|s| s.wrapping_add(step as u64));
        match improve(g, m, &r, &kappa_next, eps, seed)? {
            ImproveOutcome::Improved { realization, i, j, m: len, diagnostics } => {
                if !is_improvement(&realization.nursery, &r.nursery)?
                    || realization.nursery.component_count() + 1 != r.nursery.component_count()
                {
                    return Err(EngineError::TheoremViolation(format!("step {step} is not an improvement")));
                }
                run.check(&realization, &format!("improvement {step}"))?;
                let mut detail = format!("merged components {i} and {j} using {len} vertices of Z");
                for d in diagnostics {
                    detail.push_str("; ");
                    detail.push_str(&d);
                }
                r = realization;
                run.log(&format!("improve {step}"), detail, Some(&r));
            }
            ImproveOutcome::Pair(a, b) => {
                run.log(&format!("improve {step}"), "anticomplete pair".into(), Some(&r));
                return run.finish(pair(&a, &b));
            }
            ImproveOutcome::Stuck(d) => {
                run.log(&format!("improve {step}"), d.join("; "), Some(&r));
                return run.finish(Witness::stuck("improve", d));
            }
        }
    }
    run.finish(Witness::stuck("schedule", vec!["schedule exhausted".into()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::ratio::ratio;

    #[test]
    fn paper_epsilon_fires_the_first_axiom() {
        let g = cycle(50);
        let m = MassProvider::cardinality(50);
        let t = CaterpillarTree::new(hook()).unwrap();
        let params = EngineParams::paper(3).unwrap();
        let rep = run_trichotomy(&g, &m, &t, &params).unwrap();
        assert_eq!(rep.witness, Witness::HighMassVertex { vertex: 0 });
        assert!(rep.verdict.verified);
    }

    #[test]
    fn two_cliques_give_a_neighbourhood() {
        let g = disjoint_union(&complete(50), &complete(50));
        let m = MassProvider::cardinality(100);
        let t = CaterpillarTree::new(hook()).unwrap();
        let params = EngineParams::exploratory(3, ratio(1, 10), 4).unwrap();
        let rep = run_trichotomy(&g, &m, &t, &params).unwrap();
        assert_eq!(rep.witness, Witness::HighMassNeighbourhood { vertex: 0 });
    }

    #[test]
    fn edgeless_graph_gives_a_pair() {
        let g = Graph::empty(40);
        let m = MassProvider::cardinality(40);
        let t = CaterpillarTree::new(hook()).unwrap();
        let params = EngineParams::exploratory(3, ratio(1, 10), 4).unwrap();
        let rep = run_trichotomy(&g, &m, &t, &params).unwrap();
        assert!(matches!(rep.witness, Witness::AnticompletePair { .. }));
        assert!(rep.verdict.verified);
    }

    #[test]
    fn blocks_are_consecutive() {
        let g = Graph::empty(100);
        let m = MassProvider::cardinality(100);
        // κ_0 = 1/p − (τ+2)ε with p = 5, ε = 1/1000, τ = 3
        let params = EngineParams::new(3, ratio(1, 1000), 5).unwrap();
        assert_eq!(params.kappa(0).unwrap(), ratio(39, 200));
        match initial_blocks(&g, &m, &params) {
            BlocksOutcome::Blocks(b) => {
                assert_eq!(b.len(), 5);
                for (k, block) in b.iter().enumerate() {
                    let start = 20 * k as u32;
                    assert_eq!(block.to_vec(), (start..start + 20).collect::<Vec<_>>());
                }
            }
            other => panic!("{other:?}"),
        }
        // n = 100, κ_0 = 13/100, ε = 2/100, p = 7: seven runs of 13
        match blocks_at(&g, &m, &ratio(13, 100), 7) {
            BlocksOutcome::Blocks(b) => {
                assert_eq!(b.len(), 7);
                assert!(b.iter().all(|x| m.mass(x) == ratio(13, 100)));
                assert_eq!(b[6].first(), Some(78));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(blocks_at(&g, &m, &ratio(13, 100), 8), BlocksOutcome::Stuck(_)));
    }
}
