//! Minimal cut set generation by bottom-up expansion of the gate graph.
//!
//! Every gate's cut-set family is built once from its children's families:
//! OR unions them, AND takes the cross product, KOFN expands into the
//! disjunction of all k-subset conjunctions. Partial products below the
//! truncation limit are dropped as soon as they appear; in a coherent tree
//! no superset of a dropped product can reach the limit, so the result is
//! exactly the set of minimal cut sets at or above it.

use std::collections::HashMap;

use crate::model::{EventKind, GateOp, Model};

use super::family::{truth, Algebra, Family};
use super::FtError;

pub const DEFAULT_TRUNCATION: f64 = 1e-12;
pub const DEFAULT_MAX_WORKING_SET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub truncation: f64,
    /// Largest family any single gate may hold during expansion.
    pub max_working_set: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { truncation: DEFAULT_TRUNCATION, max_working_set: DEFAULT_MAX_WORKING_SET }
    }
}

impl SolveOptions {
    pub fn with_truncation(truncation: f64) -> Self {
        SolveOptions { truncation, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutSet {
    /// Sorted basic-event ids.
    pub events: Vec<String>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McsSolution {
    pub top: String,
    /// Probability descending, ties by event ids.
    pub cut_sets: Vec<CutSet>,
    pub truncation: f64,
    /// Sum of the probabilities of every discarded partial product.
    pub truncated_mass_bound: f64,
}

/// Basic events indexed in lexicographic id order, so index order and id
/// order agree.
#[derive(Debug, Clone)]
pub(crate) struct EventIndex {
    pub ids: Vec<String>,
    pub probs: Vec<f64>,
    pub house: Vec<Option<bool>>,
    pos: HashMap<String, u32>,
}

impl EventIndex {
    pub fn new(model: &Model) -> Self {
        let mut events: Vec<_> = model.basic_events.iter().collect();
        events.sort_by(|a, b| a.id.cmp(&b.id));
        events.dedup_by(|a, b| a.id == b.id);
        let ids: Vec<String> = events.iter().map(|e| e.id.clone()).collect();
        let probs = events.iter().map(|e| e.probability).collect();
        let house = events
            .iter()
            .map(|e| (e.kind == EventKind::House).then_some(e.probability >= 1.0))
            .collect();
        let pos = ids.iter().enumerate().map(|(i, id)| (id.clone(), i as u32)).collect();
        EventIndex { ids, probs, house, pos }
    }

    pub fn get(&self, id: &str) -> Option<u32> {
        self.pos.get(id).copied()
    }
}

/// Resolves a fault-tree name, or a gate id, to the top gate id.
pub fn resolve_top<'a>(model: &'a Model, name: &'a str) -> Result<&'a str, FtError> {
    if let Some(ft) = model.fault_tree(name) {
        return Ok(ft.top.as_str());
    }
    if model.gate(name).is_some() {
        return Ok(name);
    }
    Err(FtError::UnknownTop(name.to_string()))
}

struct Expander<'m, 'a> {
    model: &'m Model,
    index: &'a EventIndex,
    gates: HashMap<&'m str, &'m crate::model::Gate>,
    memo: HashMap<&'m str, Family>,
    active: Vec<&'m str>,
    alg: Algebra<'a>,
}

impl<'m, 'a> Expander<'m, 'a> {
    fn node(&mut self, id: &'m str) -> Result<Family, FtError> {
        if let Some(f) = self.memo.get(id) {
            return Ok(f.clone());
        }
        if let Some(e) = self.index.get(id) {
            return match self.index.house[e as usize] {
                Some(true) => Ok(truth()),
                Some(false) => Ok(Vec::new()),
                None => self.alg.event(e),
            };
        }
        let gate = *self
            .gates
            .get(id)
            .ok_or_else(|| FtError::DanglingReference(id.to_string()))?;
        if let Some(start) = self.active.iter().position(|&g| g == id) {
            let mut path: Vec<String> = self.active[start..].iter().map(|s| s.to_string()).collect();
            path.push(id.to_string());
            return Err(FtError::Cycle(path));
        }
        self.active.push(id);
        let mut children = Vec::with_capacity(gate.children.len());
        for child in &gate.children {
            children.push(self.node(child.as_str())?);
        }
        self.active.pop();
        let family = match gate.op {
            GateOp::Or => self.alg.or(children)?,
            GateOp::And => self.alg.and(children)?,
            GateOp::KofN(k) => self.alg.k_of_n(k, children)?,
        };
        self.memo.insert(id, family.clone());
        Ok(family)
    }
}

/// Raw family for `top` over the model's event index. Products are compared
/// against the truncation limit after multiplying by `scale`.
pub(crate) fn expand_family(
    model: &Model,
    index: &EventIndex,
    top: &str,
    opts: &SolveOptions,
    scale: f64,
) -> Result<(Family, f64), FtError> {
    if opts.truncation.is_nan() || opts.truncation < 0.0 {
        return Err(FtError::InvalidTruncation(opts.truncation));
    }
    let mut exp = Expander {
        model,
        index,
        gates: model.gates.iter().map(|g| (g.id.as_str(), g)).collect(),
        memo: HashMap::new(),
        active: Vec::new(),
        alg: Algebra::new(&index.probs, opts.truncation, opts.max_working_set).with_scale(scale),
    };
    let top = exp
        .model
        .gate(top)
        .map(|g| g.id.as_str())
        .ok_or_else(|| FtError::UnknownTop(top.to_string()))?;
    let family = exp.node(top)?;
    Ok((family, exp.alg.discarded_mass))
}

/// Minimal cut sets of the fault tree (or gate) `top` with probability at
/// or above `opts.truncation`.
pub fn minimal_cut_sets(model: &Model, top: &str, opts: &SolveOptions) -> Result<McsSolution, FtError> {
    let gate = resolve_top(model, top)?;
    let index = EventIndex::new(model);
    let (family, discarded) = expand_family(model, &index, gate, opts, 1.0)?;
    if family.iter().any(|s| s.events.is_empty()) {
        return Err(FtError::TopCertain(top.to_string()));
    }
    let mut cut_sets: Vec<CutSet> = family
        .into_iter()
        .map(|s| CutSet {
            events: s.events.iter().map(|&e| index.ids[e as usize].clone()).collect(),
            probability: s.prob,
        })
        .collect();
    sort_cut_sets(&mut cut_sets);
    Ok(McsSolution {
        top: top.to_string(),
        cut_sets,
        truncation: opts.truncation,
        truncated_mass_bound: discarded,
    })
}

pub(crate) fn sort_cut_sets(cut_sets: &mut [CutSet]) {
    cut_sets.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then_with(|| a.events.cmp(&b.events))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BasicEvent, FaultTree, Gate};

    fn model(gates: Vec<Gate>, events: &[(&str, f64)]) -> Model {
        let top = gates.last().unwrap().id.clone();
        Model {
            basic_events: events.iter().map(|(id, p)| BasicEvent::new(*id, *p)).collect(),
            gates,
            fault_trees: vec![FaultTree { name: "T".into(), top }],
            ..Model::default()
        }
    }

    fn sets(sol: &McsSolution) -> Vec<Vec<&str>> {
        let mut v: Vec<Vec<&str>> = sol
            .cut_sets
            .iter()
            .map(|c| c.events.iter().map(String::as_str).collect())
            .collect();
        v.sort();
        v
    }

    const ZERO: SolveOptions = SolveOptions { truncation: 0.0, max_working_set: 10_000 };

    #[test]
    fn or_and_and() {
        let m = model(vec![Gate::new("G", GateOp::Or, &["a", "b"])], &[("a", 0.1), ("b", 0.2)]);
        assert_eq!(sets(&minimal_cut_sets(&m, "T", &ZERO).unwrap()), vec![vec!["a"], vec!["b"]]);
        let m = model(vec![Gate::new("G", GateOp::And, &["a", "b"])], &[("a", 0.1), ("b", 0.2)]);
        let sol = minimal_cut_sets(&m, "T", &ZERO).unwrap();
        assert_eq!(sets(&sol), vec![vec!["a", "b"]]);
        assert!((sol.cut_sets[0].probability - 0.02).abs() < 1e-17);
    }

    #[test]
    fn two_of_four() {
        let ev = [("a", 0.1), ("b", 0.1), ("c", 0.1), ("d", 0.1)];
        let m = model(vec![Gate::new("V", GateOp::KofN(2), &["a", "b", "c", "d"])], &ev);
        let sol = minimal_cut_sets(&m, "T", &ZERO).unwrap();
        assert_eq!(
            sets(&sol),
            vec![
                vec!["a", "b"],
                vec!["a", "c"],
                vec!["a", "d"],
                vec!["b", "c"],
                vec!["b", "d"],
                vec!["c", "d"]
            ]
        );
    }

    #[test]
    fn absorbed_superset() {
        let m = model(
            vec![
                Gate::new("AB", GateOp::And, &["a", "b"]),
                Gate::new("G", GateOp::Or, &["a", "AB"]),
            ],
            &[("a", 0.1), ("b", 0.2)],
        );
        assert_eq!(sets(&minimal_cut_sets(&m, "T", &ZERO).unwrap()), vec![vec!["a"]]);
    }

    #[test]
    fn house_events_switch_logic() {
        let mut m = model(
            vec![
                Gate::new("AB", GateOp::And, &["a", "h"]),
                Gate::new("G", GateOp::Or, &["AB", "b"]),
            ],
            &[("a", 0.1), ("b", 0.2), ("h", 1.0)],
        );
        m.basic_events[2].kind = EventKind::House;
        assert_eq!(sets(&minimal_cut_sets(&m, "T", &ZERO).unwrap()), vec![vec!["a"], vec!["b"]]);
        m.basic_events[2].probability = 0.0;
        assert_eq!(sets(&minimal_cut_sets(&m, "T", &ZERO).unwrap()), vec![vec!["b"]]);
    }

    #[test]
    fn certain_top_is_an_error() {
        let mut m = model(vec![Gate::new("G", GateOp::Or, &["h", "b"])], &[("b", 0.2), ("h", 1.0)]);
        m.basic_events[1].kind = EventKind::House;
        assert!(matches!(minimal_cut_sets(&m, "T", &ZERO), Err(FtError::TopCertain(_))));
    }

    #[test]
    fn cycle_is_a_structural_error() {
        let m = model(
            vec![Gate::new("G1", GateOp::Or, &["a", "G2"]), Gate::new("G2", GateOp::And, &["G1", "a"])],
            &[("a", 0.1)],
        );
        match minimal_cut_sets(&m, "T", &ZERO) {
            Err(FtError::Cycle(path)) => assert_eq!(path, vec!["G2", "G1", "G2"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn working_set_cap_names_the_cap() {
        let ev: Vec<(String, f64)> = (0..10).map(|i| (format!("e{i}"), 0.5)).collect();
        let ev_ref: Vec<(&str, f64)> = ev.iter().map(|(s, p)| (s.as_str(), *p)).collect();
        let names: Vec<&str> = ev_ref.iter().map(|e| e.0).collect();
        let m = model(vec![Gate::new("V", GateOp::KofN(5), &names)], &ev_ref);
        let opts = SolveOptions { truncation: 0.0, max_working_set: 100 };
        let err = minimal_cut_sets(&m, "T", &opts).unwrap_err();
        assert_eq!(err, FtError::ResourceLimit { cap: 100 });
        assert!(err.to_string().contains("100"));
    }

    #[test]
    fn ordering_is_probability_then_ids() {
        let m = model(
            vec![Gate::new("G", GateOp::Or, &["c", "b", "a"])],
            &[("a", 0.1), ("b", 0.3), ("c", 0.1)],
        );
        let sol = minimal_cut_sets(&m, "T", &ZERO).unwrap();
        let order: Vec<&str> = sol.cut_sets.iter().map(|c| c.events[0].as_str()).collect();
        assert_eq!(order, vec!["b", "a", "c"]);
    }
}
