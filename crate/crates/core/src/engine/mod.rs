//! The certifying pipeline: big pieces, spires, realizations, improvements,
//! butterfly extraction and the outer κ schedule.

mod extract;
mod improve;
mod params;
mod pieces;
mod realization;
mod trichotomy;
mod witness;

pub use extract::{extract_copy, find_induced_in, synthetic_butterfly, HostSubgraph, SyntheticButterfly};
pub use improve::{improve, ImproveOutcome};
pub use params::{
    kappa_schedule, max_feasible_epsilon, paper_epsilon, paper_p, within_guarantee, EngineParams, KappaSchedule,
    ScheduleError, MAX_MATERIALIZED_SCHEDULE, PAPER_EPSILON_MAX_TAU,
};
pub use pieces::{big_piece, check_spire, grow_spire, PieceOutcome, Spire, SpireOutcome};
pub use realization::{check_realization, Realization, RealizationReport};
pub use trichotomy::{blocks_at, initial_blocks, run_trichotomy, BlocksOutcome, RunReport, TraceStep};
pub use witness::{MassEntry, ParamsDocument, VerdictDocument, WitnessDocument};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Vertex};
use crate::trees::TreeError;

/// Outcome of a trichotomy run. Every variant except `Stuck` is a
/// certificate that [`crate::oracles::verify_witness`] can check on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Witness {
    HighMassVertex { vertex: Vertex },
    HighMassNeighbourhood { vertex: Vertex },
    AnticompletePair { a: Vec<Vertex>, b: Vec<Vertex> },
    /// `embedding[t]` is the image of tree vertex `t`.
    InducedCopy { embedding: Vec<Vertex> },
    Stuck { stage: String, diagnostics: Vec<String> },
}

impl Witness {
    pub fn name(&self) -> &'static str {
        match self {
            Witness::HighMassVertex { .. } => "high_mass_vertex",
            Witness::HighMassNeighbourhood { .. } => "high_mass_neighbourhood",
            Witness::AnticompletePair { .. } => "anticomplete_pair",
            Witness::InducedCopy { .. } => "induced_copy",
            Witness::Stuck { .. } => "stuck",
        }
    }

    pub fn is_stuck(&self) -> bool {
        matches!(self, Witness::Stuck { .. })
    }

    pub(crate) fn stuck(stage: &str, diagnostics: Vec<String>) -> Self {
        Witness::Stuck { stage: stage.to_string(), diagnostics }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("engine produced a witness that does not verify: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
