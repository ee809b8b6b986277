//! Mass functions on vertex subsets: normalized, monotone and subadditive
//! on disjoint sets, evaluated exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracles::chromatic_number_induced;
use crate::ratio::{format_rational, parse_rational, Rational, RationalParseError};

/// Default vertex limit for the chromatic provider.
pub const DEFAULT_CHROMATIC_LIMIT: usize = 64;

#[derive(Debug, Error)]
pub enum MassError {
    #[error("weighted mass needs one weight per vertex: got {got}, graph has {n}")]
    WeightCount { got: usize, n: usize },
    #[error("weight of vertex {0} is negative")]
    NegativeWeight(usize),
    #[error("total weight must be positive")]
    ZeroTotal,
    #[error("chromatic mass refuses graphs above {limit} vertices (got {n})")]
    TooLarge { n: usize, limit: usize },
    #[error("chromatic mass needs a graph with at least one vertex")]
    EmptyGraph,
    #[error("line {line}: {source}")]
    WeightParse { line: usize, source: RationalParseError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassKind {
    Cardinality,
    Weighted,
    Chromatic,
}

impl MassKind {
    pub fn name(self) -> &'static str {
        match self {
            MassKind::Cardinality => "cardinality",
            MassKind::Weighted => "weighted",
            MassKind::Chromatic => "chromatic",
        }
    }
}

#[derive(Clone)]
enum Inner {
    Cardinality { n: usize },
    Weighted { weights: Arc<Vec<Rational>>, total: Rational },
    Chromatic { graph: Arc<Graph>, chi: u32, memo: Arc<Mutex<HashMap<VertexSet, u32>>> },
}

/// Evaluates μ(X) as an exact rational. Cheap to clone; the chromatic memo
/// table is shared between clones.
#[derive(Clone)]
pub struct MassProvider {
    inner: Inner,
}

impl fmt::Debug for MassProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Inner::Cardinality { n } => write!(f, "Cardinality(n={n})"),
            Inner::Weighted { weights, total } => {
                write!(f, "Weighted(n={}, total={})", weights.len(), format_rational(total))
            }
            Inner::Chromatic { graph, chi, .. } => write!(f, "Chromatic(n={}, chi={chi})", graph.n()),
        }
    }
}

impl MassProvider {
    /// μ(X) = |X| / n.
    pub fn cardinality(n: usize) -> Self {
        MassProvider { inner: Inner::Cardinality { n } }
    }

    pub fn weighted(weights: Vec<Rational>) -> Result<Self, MassError> {
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(MassError::NegativeWeight(i));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_positive() {
            return Err(MassError::ZeroTotal);
        }
        Ok(MassProvider { inner: Inner::Weighted { weights: Arc::new(weights), total } })
    }

    pub fn chromatic(graph: Arc<Graph>) -> Result<Self, MassError> {
        Self::chromatic_with_limit(graph, DEFAULT_CHROMATIC_LIMIT)
    }

    pub fn chromatic_with_limit(graph: Arc<Graph>, limit: usize) -> Result<Self, MassError> {
        let n = graph.n();
        if n > limit.min(64) {
            return Err(MassError::TooLarge { n, limit });
        }
        if n == 0 {
            return Err(MassError::EmptyGraph);
        }
        let chi = chromatic_number_induced(&graph, &graph.all_vertices());
        Ok(MassProvider { inner: Inner::Chromatic { graph, chi, memo: Arc::default() } })
    }

    pub fn kind(&self) -> MassKind {
        match self.inner {
            Inner::Cardinality { .. } => MassKind::Cardinality,
            Inner::Weighted { .. } => MassKind::Weighted,
            Inner::Chromatic { .. } => MassKind::Chromatic,
        }
    }

    pub fn universe(&self) -> usize {
        match &self.inner {
            Inner::Cardinality { n } => *n,
            Inner::Weighted { weights, .. } => weights.len(),
            Inner::Chromatic { graph, .. } => graph.n(),
        }
    }

    /// χ(G) for the chromatic provider.
    pub fn total_chromatic_number(&self) -> Option<u32> {
        match &self.inner {
            Inner::Chromatic { chi, .. } => Some(*chi),
            _ => None,
        }
    }

    /// χ(G[X]), memoized. `None` unless this is the chromatic provider.
    pub fn chromatic_number_of(&self, x: &VertexSet) -> Option<u32> {
        match &self.inner {
            Inner::Chromatic { graph, memo, .. } => {
                if let Some(&c) = memo.lock().unwrap().get(x) {
                    return Some(c);
                }
                // computed outside the lock; concurrent writers insert equal values
                let c = chromatic_number_induced(graph, x);
                memo.lock().unwrap().insert(x.clone(), c);
                Some(c)
            }
            _ => None,
        }
    }

    pub fn mass(&self, x: &VertexSet) -> Rational {
        debug_assert_eq!(x.universe(), self.universe(), "vertex set from a different graph");
        match &self.inner {
            Inner::Cardinality { n } => {
                Rational::new(BigInt::from(x.len()), BigInt::from(*n))
            }
            Inner::Weighted { weights, total } => {
                let w: Rational = x.iter().map(|v| &weights[v as usize]).sum();
                w / total
            }
            Inner::Chromatic { chi, .. } => {
                if x.is_empty() {
                    return Rational::zero();
                }
                let c = self.chromatic_number_of(x).unwrap();
                Rational::new(BigInt::from(c), BigInt::from(*chi))
            }
        }
    }

    pub fn mass_of_vertex(&self, v: Vertex) -> Rational {
        match &self.inner {
            Inner::Cardinality { n } => return Rational::new(BigInt::one(), BigInt::from(*n)),
            Inner::Weighted { weights, total } => return &weights[v as usize] / total,
            Inner::Chromatic { .. } => {}
        }
        self.mass(&VertexSet::from_iter(self.universe(), [v]))
    }
}

/// Parses a vertex-weight document: one rational per line, line i is the
/// weight of vertex i. Blank lines and `#` comments are skipped.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>, MassError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let w = parse_rational(line).map_err(|source| MassError::WeightParse { line: idx + 1, source })?;
        out.push(w);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub exhaustive: bool,
    pub checks: usize,
    pub violation: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustive limit for [`verify_mass_axioms`].
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 12;

/// Checks normalization, monotonicity and disjoint subadditivity. Graphs with
/// at most 12 vertices are checked on every pair of subsets; larger ones on
/// `budget` random disjoint pairs plus `budget` random nested pairs.
pub fn verify_mass_axioms(m: &MassProvider, g: &Graph, budget: usize, seed: u64) -> AxiomReport {
    let n = g.n();
    let mut report = AxiomReport { exhaustive: n <= EXHAUSTIVE_AXIOM_LIMIT, checks: 0, violation: None };
    let empty = VertexSet::empty(n);
    let all = g.all_vertices();
    if !m.mass(&empty).is_zero() {
        report.violation = Some("mass of the empty set is not 0".into());
        return report;
    }
    if m.mass(&all) != crate::ratio::one() {
        report.violation = Some(format!("mass of V is {}, not 1", format_rational(&m.mass(&all))));
        return report;
    }
    report.checks += 2;
    if report.exhaustive {
        exhaustive_axioms(m, n, &mut report);
    } else {
        sampled_axioms(m, n, budget, seed, &mut report);
    }
    report
}

fn mask_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_iter(n, (0..n as Vertex).filter(|&v| mask >> v & 1 == 1))
}

fn exhaustive_axioms(m: &MassProvider, n: usize, report: &mut AxiomReport) {
    let full = (1u32 << n) - 1;
    let table: Vec<Rational> = (0..=full).map(|s| m.mass(&mask_set(n, s))).collect();
    for y in 0..=full {
        // every submask x of y: monotonicity, and (x, y\x) disjoint subadditivity
        let mut x = y;
        loop {
            report.checks += 2;
            if table[x as usize] > table[y as usize] {
                report.violation = Some(format!("monotonicity fails: mu({x:#b}) > mu({y:#b})"));
                return;
            }
            let rest = y & !x;
            if table[y as usize] > &table[x as usize] + &table[rest as usize] {
                report.violation = Some(format!("subadditivity fails on {x:#b} and {rest:#b}"));
                return;
            }
            if table[x as usize].is_negative() || table[x as usize] > crate::ratio::one() {
                report.violation = Some(format!("mass of {x:#b} outside [0,1]"));
                return;
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
    }
}

fn sampled_axioms(m: &MassProvider, n: usize, budget: usize, seed: u64, report: &mut AxiomReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let mut x = VertexSet::empty(n);
        let mut y = VertexSet::empty(n);
        for v in 0..n as Vertex {
            match rng.gen_range(0..3) {
                0 => x.insert(v),
                1 => y.insert(v),
                _ => {}
            }
        }
        report.checks += 1;
        let (mx, my, mxy) = (m.mass(&x), m.mass(&y), m.mass(&x.union(&y)));
        if mxy > &mx + &my {
            report.violation = Some(format!("subadditivity fails on {x:?} and {y:?}"));
            return;
        }
        let mut sub = VertexSet::empty(n);
        for v in y.iter() {
            if rng.gen_bool(0.5) {
                sub.insert(v);
            }
        }
        report.checks += 1;
        if m.mass(&sub) > my {
            report.violation = Some(format!("monotonicity fails on {sub:?} within {y:?}"));
            return;
        }
    }
}
