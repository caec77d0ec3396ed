//! Discrete Bayesian networks: exact inference by variable elimination and
//! the specific software failure probability pipeline built on it.

pub(crate) mod factor;
pub mod infer;
pub mod sfp;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::ccf::CcfError;
use crate::model::BbnNetwork;

pub use infer::{infer_marginal, infer_marginal_with_order, Marginal};
pub use sfp::{calibrate_phi, run_pipeline, specific_failure_probability, split_sfp, PhiCalibration, SfpResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BbnError {
    #[error("network `{0}` is not declared")]
    UnknownNetwork(String),
    #[error("node `{0}` is not in the network")]
    UnknownNode(String),
    #[error("node `{node}` has no state `{state}`")]
    UnknownState { node: String, state: String },
    #[error("node `{0}` needs at least two states")]
    TooFewStates(String),
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("parent cycle {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("node `{node}`: {message}")]
    InvalidCpt { node: String, message: String },
    #[error("evidence has zero probability")]
    ZeroProbabilityEvidence,
    #[error("elimination order is not a permutation of the hidden nodes")]
    InvalidOrder,
    #[error("network `{0}` does not name a fault node and state")]
    NoFaultNode(String),
    #[error("{0}")]
    InvalidCalibration(String),
    #[error("scaling overflow: phi * P(faults) = {0} > 1")]
    ScalingOverflow(f64),
    #[error(transparent)]
    Ccf(#[from] CcfError),
}

/// A network with nodes in topological order and dense CPTs.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub ids: Vec<String>,
    pub states: Vec<Vec<String>>,
    pub parents: Vec<Vec<usize>>,
    /// Per node: probabilities indexed by parent states (mixed radix, first
    /// parent most significant) then own state.
    pub cpts: Vec<Vec<f64>>,
    pub pos: HashMap<String, usize>,
}

impl Compiled {
    pub fn new(net: &BbnNetwork) -> Result<Self, BbnError> {
        let mut by_id = BTreeMap::new();
        for n in &net.nodes {
            if by_id.insert(n.id.as_str(), n).is_some() {
                return Err(BbnError::DuplicateNode(n.id.clone()));
            }
            if n.states.len() < 2 {
                return Err(BbnError::TooFewStates(n.id.clone()));
            }
        }
        for n in &net.nodes {
            for p in &n.parents {
                if !by_id.contains_key(p.as_str()) {
                    return Err(BbnError::UnknownNode(p.clone()));
                }
            }
        }
        let decl: HashMap<&str, usize> = net.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let adj: Vec<Vec<usize>> = net
            .nodes
            .iter()
            .map(|n| n.parents.iter().map(|p| decl[p.as_str()]).collect())
            .collect();
        if let Some(cycle) = crate::validate::directed_cycles(&adj).into_iter().next() {
            return Err(BbnError::Cycle(cycle.into_iter().map(|i| net.nodes[i].id.clone()).collect()));
        }

        // topological order, ties by declaration order
        let mut order: Vec<&str> = Vec::new();
        let mut placed = std::collections::HashSet::new();
        while order.len() < net.nodes.len() {
            for n in &net.nodes {
                if !placed.contains(n.id.as_str()) && n.parents.iter().all(|p| placed.contains(p.as_str())) {
                    placed.insert(n.id.as_str());
                    order.push(n.id.as_str());
                }
            }
        }
        let pos: HashMap<String, usize> = order.iter().enumerate().map(|(i, id)| (id.to_string(), i)).collect();

        let mut c = Compiled {
            ids: order.iter().map(|s| s.to_string()).collect(),
            states: order.iter().map(|id| by_id[id].states.clone()).collect(),
            parents: order.iter().map(|id| by_id[id].parents.iter().map(|p| pos[p]).collect()).collect(),
            cpts: Vec::new(),
            pos,
        };
        for id in &order {
            let cpt = c.dense_cpt(by_id[id])?;
            c.cpts.push(cpt);
        }
        Ok(c)
    }

    fn dense_cpt(&self, node: &crate::model::BbnNode) -> Result<Vec<f64>, BbnError> {
        let bad = |message: String| BbnError::InvalidCpt { node: node.id.clone(), message };
        let k = node.states.len();
        let rows: usize = node.parents.iter().map(|p| self.states[self.pos[p]].len()).product();
        let mut table = vec![f64::NAN; rows * k];
        for row in &node.cpt {
            if row.probs.len() != k {
                return Err(bad(format!("row has {} probabilities for {k} states", row.probs.len())));
            }
            if row.given.len() != node.parents.len() {
                return Err(bad("row must give a state for every parent".into()));
            }
            let mut r = 0;
            for p in &node.parents {
                let states = &self.states[self.pos[p]];
                let label = row.given.get(p).ok_or_else(|| bad(format!("row does not give parent `{p}`")))?;
                let s = states
                    .iter()
                    .position(|x| x == label)
                    .ok_or_else(|| BbnError::UnknownState { node: p.clone(), state: label.clone() })?;
                r = r * states.len() + s;
            }
            let slot = &mut table[r * k..(r + 1) * k];
            if !slot[0].is_nan() {
                return Err(bad("parent combination listed twice".into()));
            }
            let sum: f64 = row.probs.iter().sum();
            if row.probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-9 {
                return Err(bad(format!("row does not sum to 1 (sum {sum})")));
            }
            slot.copy_from_slice(&row.probs);
        }
        if table.iter().any(|p| p.is_nan()) {
            return Err(bad("CPT does not cover every parent combination".into()));
        }
        Ok(table)
    }

    pub fn index(&self, id: &str) -> Result<usize, BbnError> {
        self.pos.get(id).copied().ok_or_else(|| BbnError::UnknownNode(id.to_string()))
    }

    pub fn state(&self, node: usize, label: &str) -> Result<usize, BbnError> {
        self.states[node].iter().position(|s| s == label).ok_or_else(|| BbnError::UnknownState {
            node: self.ids[node].clone(),
            state: label.to_string(),
        })
    }
}
