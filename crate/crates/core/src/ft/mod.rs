//! Fault-tree engine: minimal cut sets with truncation, quantification and a
//! brute-force reference evaluator for small trees.

pub mod bruteforce;
pub(crate) mod family;
pub mod mcs;
pub mod quantify;

use thiserror::Error;

pub use bruteforce::exact_bruteforce;
pub use mcs::{minimal_cut_sets, resolve_top, CutSet, McsSolution, SolveOptions, DEFAULT_MAX_WORKING_SET, DEFAULT_TRUNCATION};
pub use quantify::{
    contributions, exact_union_probability, min_cut_upper_bound, quantify, rare_event_sum, Method, QuantOptions,
    QuantResult, EXACT_EVENT_CAP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FtError {
    #[error("`{0}` is neither a fault tree nor a gate")]
    UnknownTop(String),
    #[error("`{0}` is referenced but not declared")]
    DanglingReference(String),
    #[error("gate reference cycle {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("top event `{0}` is certain (a house event makes the empty set a cut set)")]
    TopCertain(String),
    #[error("truncation must be a non-negative number, got {0}")]
    InvalidTruncation(f64),
    #[error("working set exceeded the cap of {cap} cut sets")]
    ResourceLimit { cap: usize },
    #[error("{events} distinct basic events exceed the exact-evaluation cap of {cap}")]
    SizeCap { events: usize, cap: usize },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
}
