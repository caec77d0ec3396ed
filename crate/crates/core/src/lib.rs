//! Quantitative risk assessment for redundant digital instrumentation and
//! control systems.
//!
//! - [`ccf`]: beta factors from defence score sheets, the modified
//!   beta-factor model and CCF expansion of fault-tree leaves
//! - [`ft`]: minimal cut sets with truncation and top-event quantification
//! - [`et`]: event-tree sequence frequencies and model comparisons
//! - [`bbn`]: Bayesian-network inference and specific software failure
//!   probability
//! - [`io`]: model files, CSV reports and bundled fixtures

pub mod bbn;
pub mod ccf;
pub mod diagnostic;
pub mod et;
pub mod ft;
pub mod io;
pub mod model;
pub mod validate;

pub use diagnostic::{Diagnostic, Severity};
pub use model::Model;
pub use validate::validate;

/// Environment variable overriding the default truncation limit.
pub const TRUNCATION_ENV: &str = "PRADIC_TRUNCATION";
