//! Top-event quantification from minimal cut sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::model::Model;

use super::mcs::{CutSet, McsSolution};
use super::FtError;

/// Largest number of distinct events for which the exact probability is computed.
pub const EXACT_EVENT_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Rare-event approximation, the sum of cut-set probabilities.
    #[default]
    Sum,
    /// Min-cut upper bound.
    Mcub,
    Exact,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Method::Sum),
            "mcub" => Ok(Method::Mcub),
            "exact" => Ok(Method::Exact),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sum => "sum",
            Method::Mcub => "mcub",
            Method::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantOptions {
    pub headline: Method,
    pub exact_event_cap: usize,
}

impl Default for QuantOptions {
    fn default() -> Self {
        QuantOptions { headline: Method::Sum, exact_event_cap: EXACT_EVENT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantResult {
    pub top: String,
    pub cut_sets: Vec<CutSet>,
    pub rare_event_sum: f64,
    pub mcub: f64,
    pub exact: Option<f64>,
    pub truncation: f64,
    pub truncated_mass_bound: f64,
    /// Percent of `rare_event_sum`, parallel to `cut_sets`.
    pub contributions: Vec<f64>,
    pub headline_method: Method,
}

impl QuantResult {
    pub fn headline(&self) -> f64 {
        match self.headline_method {
            Method::Sum => self.rare_event_sum,
            Method::Mcub => self.mcub,
            Method::Exact => self.exact.expect("quantify checks the exact value exists"),
        }
    }
}

pub fn rare_event_sum(probs: &[f64]) -> f64 {
    probs.iter().sum()
}

/// `1 - prod(1 - p)`, evaluated in log space to keep small probabilities exact.
pub fn min_cut_upper_bound(probs: &[f64]) -> f64 {
    if probs.iter().any(|&p| p >= 1.0) {
        return 1.0;
    }
    let log_survival: f64 = probs.iter().map(|&p| (-p).ln_1p()).sum();
    -log_survival.exp_m1()
}

/// Percent contribution of each probability to `total`.
pub fn contributions(probs: &[f64], total: f64) -> Vec<f64> {
    probs
        .iter()
        .map(|&p| if total > 0.0 { p / total * 100.0 } else { 0.0 })
        .collect()
}

pub fn quantify(solution: &McsSolution, model: &Model, opts: &QuantOptions) -> Result<QuantResult, FtError> {
    let lookup: HashMap<&str, f64> = model
        .basic_events
        .iter()
        .map(|e| (e.id.as_str(), e.probability))
        .collect();
    let mut event_probs = BTreeMap::new();
    for cs in &solution.cut_sets {
        for e in &cs.events {
            let p = lookup
                .get(e.as_str())
                .ok_or_else(|| FtError::DanglingReference(e.clone()))?;
            event_probs.insert(e.as_str(), *p);
        }
    }
    let probs: Vec<f64> = solution.cut_sets.iter().map(|c| c.probability).collect();
    let sum = rare_event_sum(&probs);
    let exact = if event_probs.len() <= opts.exact_event_cap.min(32) {
        let index: HashMap<&str, usize> = event_probs.keys().enumerate().map(|(i, k)| (*k, i)).collect();
        let p: Vec<f64> = event_probs.values().copied().collect();
        let sets: Vec<u32> = solution
            .cut_sets
            .iter()
            .map(|c| c.events.iter().fold(0u32, |m, e| m | 1 << index[e.as_str()]))
            .collect();
        Some(exact_union_probability(&sets, &p))
    } else {
        None
    };
    if opts.headline == Method::Exact && exact.is_none() {
        return Err(FtError::SizeCap { events: event_probs.len(), cap: opts.exact_event_cap });
    }
    Ok(QuantResult {
        top: solution.top.clone(),
        cut_sets: solution.cut_sets.clone(),
        rare_event_sum: sum,
        mcub: min_cut_upper_bound(&probs),
        exact,
        truncation: solution.truncation,
        truncated_mass_bound: solution.truncated_mass_bound,
        contributions: contributions(&probs, sum),
        headline_method: opts.headline,
    })
}

/// Probability that at least one cut set (bit mask over independent
/// events) occurs, by Shannon decomposition on the most frequent event.
pub fn exact_union_probability(sets: &[u32], probs: &[f64]) -> f64 {
    fn go(sets: &[u32], probs: &[f64], memo: &mut HashMap<Vec<u32>, f64>) -> f64 {
        if sets.is_empty() {
            return 0.0;
        }
        if sets.contains(&0) {
            return 1.0;
        }
        if sets.len() == 1 {
            return (0..32).filter(|b| sets[0] >> b & 1 == 1).map(|b| probs[b]).product();
        }
        let mut key = sets.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut counts = [0usize; 32];
        for s in &key {
            for (b, c) in counts.iter_mut().enumerate() {
                *c += (s >> b & 1) as usize;
            }
        }
        let pivot = (0..32).max_by_key(|&b| (counts[b], std::cmp::Reverse(b))).unwrap();
        let bit = 1u32 << pivot;
        let when_true: Vec<u32> = key.iter().map(|s| s & !bit).collect();
        let when_false: Vec<u32> = key.iter().copied().filter(|s| s & bit == 0).collect();
        let p = probs[pivot];
        let v = p * go(&when_true, probs, memo) + (1.0 - p) * go(&when_false, probs, memo);
        memo.insert(key, v);
        v
    }
    go(sets, probs, &mut HashMap::new())
}
