//! Instance generators and the batch runner.
//!
//! All randomness comes from ChaCha8 seeded with a 64-bit value, so a spec
//! always produces the same graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{run_trichotomy, EngineParams, Witness};
use crate::format::to_edge_list;
use crate::graph::{Graph, Vertex};
use crate::mass::{MassKind, MassProvider};
use crate::oracles::verify_witness;
use crate::ratio::{format_rational, serde_rational, Rational};
use crate::trees::CaterpillarTree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("gave up after {0} attempts")]
    RetriesExhausted(usize),
}

/// A leg of `len` vertices attached to spine vertex `at` (1-indexed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub at: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Gnp {
        n: usize,
        #[serde(with = "serde_rational")]
        p: Rational,
    },
    Regular {
        n: usize,
        d: usize,
    },
    /// G(n, p) with every edge on a cycle shorter than `girth` removed.
    HighGirth {
        n: usize,
        #[serde(with = "serde_rational")]
        p: Rational,
        girth: usize,
    },
    CaterpillarSubdivision {
        spine: usize,
        legs: Vec<Leg>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub model: Model,
    #[serde(default)]
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        GenSpec { model, seed }
    }

    pub fn model_name(&self) -> &'static str {
        match self.model {
            Model::Gnp { .. } => "gnp",
            Model::Regular { .. } => "regular",
            Model::HighGirth { .. } => "high_girth",
            Model::CaterpillarSubdivision { .. } => "caterpillar_subdivision",
        }
    }
}

const REGULAR_RESTARTS: usize = 200;

pub fn generate(spec: &GenSpec) -> Result<Graph, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.model {
        Model::Gnp { n, p } => gnp(*n, p, &mut rng),
        Model::Regular { n, d } => regular(*n, *d, &mut rng),
        Model::HighGirth { n, p, girth } => {
            if *girth < 3 {
                return Err(HarnessError::Invalid("girth must be at least 3".into()));
            }
            Ok(prune_short_cycles(&gnp(*n, p, &mut rng)?, *girth))
        }
        Model::CaterpillarSubdivision { spine, legs } => caterpillar(*spine, legs),
    }
}

fn probability(p: &Rational) -> Result<(u64, u64), HarnessError> {
    let bad = || HarnessError::Invalid(format!("edge probability {} must lie in [0, 1]", format_rational(p)));
    let (a, b) = (p.numer().to_u64().ok_or_else(bad)?, p.denom().to_u64().ok_or_else(bad)?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn gnp(n: usize, p: &Rational, rng: &mut ChaCha8Rng) -> Result<Graph, HarnessError> {
    let (a, b) = probability(p)?;
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_range(0..b) < a {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("generated edges are simple"))
}

/// Random d-regular graph: points are paired at random, rejecting loops and
/// repeated edges, and the whole pairing restarts if it paints itself into
/// a corner.
fn regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph, HarnessError> {
    if d >= n.max(1) || !(n * d).is_multiple_of(2) {
        return Err(HarnessError::Invalid(format!("no {d}-regular graph on {n} vertices")));
    }
    'restart: for _ in 0..REGULAR_RESTARTS {
        let mut points: Vec<Vertex> = (0..n as Vertex).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        points.shuffle(rng);
        let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
        while !points.is_empty() {
            let mut paired = false;
            for _ in 0..64 {
                let i = rng.gen_range(0..points.len());
                let j = rng.gen_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i != j && u != v && !adj[u as usize].contains(&v) {
                    adj[u as usize].insert(v);
                    adj[v as usize].insert(u);
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    paired = true;
                    break;
                }
            }
            if !paired {
                let viable = points.iter().enumerate().any(|(i, &u)| {
                    points[i + 1..].iter().any(|&v| u != v && !adj[u as usize].contains(&v))
                });
                if !viable {
                    continue 'restart;
                }
            }
        }
        let edges: Vec<_> = adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v as usize > u).map(move |&v| (u as Vertex, v)))
            .collect();
        return Ok(Graph::from_edges(n, &edges).expect("pairing yields a simple graph"));
    }
    Err(HarnessError::RetriesExhausted(REGULAR_RESTARTS))
}

/// Deletes, in edge order, every edge that closes a cycle shorter than
/// `girth` in what remains.
fn prune_short_cycles(g: &Graph, girth: usize) -> Graph {
    let mut adj: Vec<BTreeSet<Vertex>> = (0..g.n() as Vertex).map(|v| g.neighbour_slice(v).iter().copied().collect()).collect();
    for (u, v) in g.edges() {
        // a u-v path of length ≤ girth-2 avoiding the edge closes a short cycle
        let limit = girth - 2;
        let mut dist: BTreeMap<Vertex, usize> = BTreeMap::from([(u, 0)]);
        let mut queue = VecDeque::from([u]);
        let mut short = false;
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx == limit {
                continue;
            }
            for &y in &adj[x as usize] {
                if x == u && y == v {
                    continue;
                }
                if y == v {
                    short = true;
                    break;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(dx + 1);
                    queue.push_back(y);
                }
            }
            if short {
                break;
            }
        }
        if short {
            adj[u as usize].remove(&v);
            adj[v as usize].remove(&u);
        }
    }
    let edges: Vec<_> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v as usize > u).map(move |&v| (u as Vertex, v)))
        .collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

/// Length of a shortest cycle, if any.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..g.n() as Vertex {
        let mut dist = vec![usize::MAX; g.n()];
        let mut parent = vec![Vertex::MAX; g.n()];
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbour_slice(x) {
                if dist[y as usize] == usize::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    parent[y as usize] = x;
                    queue.push_back(y);
                } else if parent[x as usize] != y {
                    let c = dist[x as usize] + dist[y as usize] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

fn caterpillar(spine: usize, legs: &[Leg]) -> Result<Graph, HarnessError> {
    if spine == 0 {
        return Err(HarnessError::Invalid("spine needs at least one vertex".into()));
    }
    let mut edges: Vec<(Vertex, Vertex)> = (1..spine as Vertex).map(|v| (v - 1, v)).collect();
    let mut next = spine as Vertex;
    for leg in legs {
        if leg.at == 0 || leg.at > spine {
            return Err(HarnessError::Invalid(format!("leg position {} outside spine 1..={spine}", leg.at)));
        }
        let mut prev = leg.at as Vertex - 1;
        for _ in 0..leg.len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Ok(Graph::from_edges(next as usize, &edges).unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub model: String,
    pub seed: u64,
    pub n: usize,
    pub variant: String,
    pub verified: bool,
    pub millis: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub trials: usize,
    pub counts: BTreeMap<String, usize>,
    pub stuck_rate: f64,
    pub timing: Timing,
    pub outcomes: Vec<TrialOutcome>,
}

impl BatchReport {
    pub fn summary_table(&self) -> String {
        let mut out = format!("{:<26} {:>8}\n", "variant", "count");
        for (k, v) in &self.counts {
            out.push_str(&format!("{k:<26} {v:>8}\n"));
        }
        out.push_str(&format!("{:<26} {:>8}\n", "trials", self.trials));
        out.push_str(&format!("stuck rate {:.4}\n", self.stuck_rate));
        let t = &self.timing;
        out.push_str(&format!(
            "time ms p50 {:.2} p90 {:.2} p99 {:.2} max {:.2}\n",
            t.p50_ms, t.p90_ms, t.p99_ms, t.max_ms
        ));
        out
    }
}

/// Everything needed to rerun a trial that failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayBundle {
    pub trial: usize,
    pub spec: GenSpec,
    pub graph: String,
    pub tree: String,
    pub tau: usize,
    pub epsilon: String,
    pub p: usize,
    pub mass: String,
    pub error: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("trial {} failed: {}", .0.trial, .0.error)]
pub struct BatchFailure(pub Box<ReplayBundle>);

/// Trial `k` runs `specs[k % len]` with its seed advanced by `k / len`.
pub fn trial_spec(specs: &[GenSpec], k: usize) -> GenSpec {
    let base = &specs[k % specs.len()];
    GenSpec { model: base.model.clone(), seed: base.seed.wrapping_add((k / specs.len()) as u64) }
}

/// Runs `trials` engine instances in parallel and aggregates the witnesses.
pub fn run_batch(
    specs: &[GenSpec],
    t: &CaterpillarTree,
    params: &EngineParams,
    mass: MassKind,
    trials: usize,
) -> Result<BatchReport, BatchFailure> {
    if trials == 0 || specs.is_empty() {
        return Ok(BatchReport::default());
    }
    let results: Vec<Result<TrialOutcome, BatchFailure>> =
        (0..trials).into_par_iter().map(|k| run_trial(specs, k, t, params, mass)).collect();
    let mut outcomes = Vec::with_capacity(trials);
    for r in results {
        outcomes.push(r?);
    }
    outcomes.sort_by_key(|o| o.index);
    let mut counts = BTreeMap::new();
    for o in &outcomes {
        *counts.entry(o.variant.clone()).or_insert(0) += 1;
    }
    let stuck = counts.get("stuck").copied().unwrap_or(0);
    let mut times: Vec<f64> = outcomes.iter().map(|o| o.millis).collect();
    times.sort_by(f64::total_cmp);
    let pct = |q: f64| times[((times.len() - 1) as f64 * q).round() as usize];
    let timing = Timing { p50_ms: pct(0.5), p90_ms: pct(0.9), p99_ms: pct(0.99), max_ms: pct(1.0) };
    Ok(BatchReport { trials, counts, stuck_rate: stuck as f64 / trials as f64, timing, outcomes })
}

fn run_trial(
    specs: &[GenSpec],
    k: usize,
    t: &CaterpillarTree,
    params: &EngineParams,
    mass: MassKind,
) -> Result<TrialOutcome, BatchFailure> {
    let spec = trial_spec(specs, k);
    let fail = |graph: Option<&Graph>, error: String| {
        BatchFailure(Box::new(ReplayBundle {
            trial: k,
            spec: spec.clone(),
            graph: graph.map(to_edge_list).unwrap_or_default(),
            tree: to_edge_list(t.graph()),
            tau: params.tau,
            epsilon: format_rational(&params.epsilon),
            p: params.p,
            mass: mass.name().to_string(),
            error,
        }))
    };
    let g = generate(&spec).map_err(|e| fail(None, e.to_string()))?;
    let start = Instant::now();
    let m = match mass {
        MassKind::Cardinality => MassProvider::cardinality(g.n()),
        MassKind::Chromatic => MassProvider::chromatic(Arc::new(g.clone())).map_err(|e| fail(Some(&g), e.to_string()))?,
        MassKind::Weighted => return Err(fail(Some(&g), "batch runs support cardinality and chromatic mass".into())),
    };
    let report = run_trichotomy(&g, &m, t, params).map_err(|e| fail(Some(&g), e.to_string()))?;
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    // checked again here, independently of the engine's own verification
    let verdict = verify_witness(&g, &m, t, &params.epsilon, &report.witness);
    if !report.witness.is_stuck() && !verdict.verified {
        return Err(fail(Some(&g), verdict.summary()));
    }
    Ok(TrialOutcome {
        index: k,
        model: spec.model_name().to_string(),
        seed: spec.seed,
        n: g.n(),
        variant: report.witness.name().to_string(),
        verified: !matches!(report.witness, Witness::Stuck { .. }) && verdict.verified,
        millis,
    })
}
