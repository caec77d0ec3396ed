//! Event-tree engine: sequence frequencies from an initiating event and the
//! linked fault-tree results, and model-to-model comparison reports.
//!
//! Success branches take the scalar complement `1 - P(top)` of the linked
//! fault tree; no cut-set level delete terms are applied.

pub mod compare;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ft::family::{Algebra, Family};
use crate::ft::mcs::{expand_family, EventIndex};
use crate::ft::{minimal_cut_sets, quantify, resolve_top, FtError, Method, QuantOptions, SolveOptions};
use crate::model::{BranchOutcome, EventTree, Model};

pub use compare::{compare_models, delta_percent, Comparison, ComparisonRow};

/// Footer attached to every sequence report.
pub const SUCCESS_BRANCH_NOTE: &str =
    "success branches use the scalar complement 1 - P(top); cut-set delete terms are not applied";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EtError {
    #[error("event tree `{0}` is not declared")]
    UnknownTree(String),
    #[error("branch `{branch}` links fault tree `{fault_tree}`, which is not declared")]
    DanglingLink { branch: String, fault_tree: String },
    #[error("branch `{0}` needs exactly one of fault_tree or probability")]
    BranchSource(String),
    #[error("branch `{branch}` probability {probability} is outside [0, 1]")]
    BranchProbability { branch: String, probability: f64 },
    #[error("sequence `{sequence}` refers to undeclared branch `{branch}`")]
    UnknownBranch { sequence: String, branch: String },
    #[error("initiating event `{id}` frequency {frequency} is not a non-negative number")]
    InvalidFrequency { id: String, frequency: f64 },
    #[error(transparent)]
    Ft(#[from] FtError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtOptions {
    pub truncation: f64,
    pub max_working_set: usize,
    /// Which fault-tree figure feeds the branch probability.
    pub method: Method,
}

impl Default for EtOptions {
    fn default() -> Self {
        let s = SolveOptions::default();
        EtOptions { truncation: s.truncation, max_working_set: s.max_working_set, method: Method::Sum }
    }
}

impl EtOptions {
    pub fn with_truncation(truncation: f64) -> Self {
        EtOptions { truncation, ..Self::default() }
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions { truncation: self.truncation, max_working_set: self.max_working_set }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceResult {
    pub id: String,
    pub end_state: String,
    pub frequency: f64,
    pub cut_set_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtSolution {
    pub tree: String,
    pub initiating_event: String,
    pub ie_frequency: f64,
    /// Failure probability per branch label.
    pub branch_probabilities: BTreeMap<String, f64>,
    /// Ordered by sequence id.
    pub sequences: Vec<SequenceResult>,
    pub truncation: f64,
}

impl EtSolution {
    pub fn total_frequency(&self) -> f64 {
        self.sequences.iter().map(|s| s.frequency).sum()
    }
}

enum Branch {
    Tree(String),
    Fixed(f64),
}

pub fn solve_event_tree(model: &Model, tree: &str, opts: &EtOptions) -> Result<EtSolution, EtError> {
    let et = model.event_tree(tree).ok_or_else(|| EtError::UnknownTree(tree.to_string()))?;
    solve(model, et, opts)
}

fn solve(model: &Model, et: &EventTree, opts: &EtOptions) -> Result<EtSolution, EtError> {
    let ie = &et.initiating_event;
    if !(ie.frequency.is_finite() && ie.frequency >= 0.0) {
        return Err(EtError::InvalidFrequency { id: ie.id.clone(), frequency: ie.frequency });
    }
    if opts.truncation.is_nan() || opts.truncation < 0.0 {
        return Err(FtError::InvalidTruncation(opts.truncation).into());
    }

    let mut branches: BTreeMap<&str, Branch> = BTreeMap::new();
    let mut probs: BTreeMap<String, f64> = BTreeMap::new();
    for bp in &et.branch_points {
        let branch = match (&bp.fault_tree, bp.probability) {
            (Some(ft), None) => {
                if model.fault_tree(ft).is_none() {
                    return Err(EtError::DanglingLink { branch: bp.label.clone(), fault_tree: ft.clone() });
                }
                let solution = minimal_cut_sets(model, ft, &opts.solve_options())?;
                let q = quantify(&solution, model, &QuantOptions { headline: opts.method, ..QuantOptions::default() })?;
                probs.insert(bp.label.clone(), q.headline());
                Branch::Tree(ft.clone())
            }
            (None, Some(p)) => {
                probs.insert(bp.label.clone(), p);
                Branch::Fixed(p)
            }
            _ => return Err(EtError::BranchSource(bp.label.clone())),
        };
        let p = probs[&bp.label];
        if !(0.0..=1.0).contains(&p) {
            return Err(EtError::BranchProbability { branch: bp.label.clone(), probability: p });
        }
        branches.insert(bp.label.as_str(), branch);
    }

    let counter = CutSetCounter::new(model, &branches, ie.frequency, opts)?;
    let mut sequences = Vec::with_capacity(et.sequences.len());
    for seq in &et.sequences {
        let mut frequency = ie.frequency;
        let mut failed = Vec::new();
        for o in &seq.outcomes {
            let p = *probs.get(&o.branch).ok_or_else(|| EtError::UnknownBranch {
                sequence: seq.id.clone(),
                branch: o.branch.clone(),
            })?;
            match o.outcome {
                BranchOutcome::Failure => {
                    frequency *= p;
                    failed.push(o.branch.as_str());
                }
                BranchOutcome::Success => frequency *= 1.0 - p,
            }
        }
        sequences.push(SequenceResult {
            id: seq.id.clone(),
            end_state: seq.end_state.clone(),
            frequency,
            cut_set_count: counter.count(&failed)?,
        });
    }
    sequences.sort_by(|a, b| a.id.cmp(&b.id));

    Ok(EtSolution {
        tree: et.name.clone(),
        initiating_event: ie.id.clone(),
        ie_frequency: ie.frequency,
        branch_probabilities: probs,
        sequences,
        truncation: opts.truncation,
    })
}

/// Counts a sequence's cut sets: the cross product of its failure branches'
/// families, each product scaled by the initiating-event frequency before
/// the truncation test. A fixed-probability branch acts as one pseudo event.
struct CutSetCounter {
    probs: Vec<f64>,
    families: BTreeMap<String, Family>,
    ie: f64,
    truncation: f64,
    cap: usize,
}

impl CutSetCounter {
    fn new(model: &Model, branches: &BTreeMap<&str, Branch>, ie: f64, opts: &EtOptions) -> Result<Self, EtError> {
        let index = EventIndex::new(model);
        let mut probs = index.probs.clone();
        let mut families = BTreeMap::new();
        for (label, branch) in branches {
            let family = match branch {
                Branch::Tree(ft) => {
                    let top = resolve_top(model, ft)?;
                    expand_family(model, &index, top, &opts.solve_options(), ie)?.0
                }
                Branch::Fixed(p) => {
                    probs.push(*p);
                    let pseudo = (probs.len() - 1) as u32;
                    let mut alg = Algebra::new(&probs, opts.truncation, opts.max_working_set).with_scale(ie);
                    alg.event(pseudo)?
                }
            };
            families.insert(label.to_string(), family);
        }
        Ok(CutSetCounter { probs, families, ie, truncation: opts.truncation, cap: opts.max_working_set })
    }

    fn count(&self, failed: &[&str]) -> Result<u64, EtError> {
        if failed.is_empty() {
            return Ok(u64::from(self.ie >= self.truncation));
        }
        let mut alg = Algebra::new(&self.probs, self.truncation, self.cap).with_scale(self.ie);
        let families = failed.iter().map(|b| self.families[*b].clone()).collect();
        Ok(alg.and(families)?.len() as u64)
    }
}
