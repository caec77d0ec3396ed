//! Common-cause failure engine: beta estimation from score sheets, the
//! modified beta-factor model for components in several CCCGs, and the
//! expansion of component failures into fault-tree basic events.

pub mod beta;
pub mod bfm;
pub mod expand;

use thiserror::Error;

use crate::model::{Subfactor, TableKind};

pub use beta::{estimate_beta, lookup_score, score_sheet, BetaEstimate};
pub use bfm::{apply_modified_bfm, group_breakdown, resolve_betas, BetaBreakdown, ComponentSplit};
pub use expand::{ccf_event_id, expand_all, expand_ccf, independent_event_id, Expansion};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CcfError {
    #[error("table {table} has no row for subfactor {subfactor}")]
    UnknownSubfactor { table: TableKind, subfactor: Subfactor },
    #[error("score sheet `{sheet}` does not grade {subfactor}")]
    MissingGrade { sheet: String, subfactor: Subfactor },
    #[error("score sheet `{0}` is not declared")]
    UnknownScoreSheet(String),
    #[error("component group `{0}` is not declared")]
    UnknownGroup(String),
    #[error("CCCG `{cccg}` needs exactly one of beta or score_sheet")]
    BetaSource { cccg: String },
    #[error("inconsistent betas: CCCGs containing `{component}` sum to {beta_total} >= 1")]
    InconsistentBetas { component: String, beta_total: f64 },
    #[error("probability overflow: total failure probability of `{component}` would be {q_total} > 1")]
    ProbabilityOverflow { component: String, q_total: f64 },
    #[error("CCCG `{0}` has members with different total betas; give the input as TOTAL_GIVEN")]
    AsymmetricMembership(String),
    #[error("expansion would create `{0}`, which is already declared")]
    NameCollision(String),
    #[error("component `{0}` is a gate, not a basic event")]
    NotALeaf(String),
    #[error("{0}")]
    InvalidInput(String),
}
