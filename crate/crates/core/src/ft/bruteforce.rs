//! Exact top-event probability by evaluating the tree over every
//! assignment of its basic events. Used as an independent check on the
//! cut-set route.

use std::collections::HashMap;

use crate::model::{BasicEvent, EventKind, Gate, GateOp, Model};

use super::mcs::resolve_top;
use super::quantify::EXACT_EVENT_CAP;
use super::FtError;

#[derive(Clone, Copy)]
enum Input {
    Var(usize),
    Const(bool),
    Gate(usize),
}

struct Compiled {
    /// Gates in evaluation order (children before parents).
    gates: Vec<(GateOp, Vec<Input>)>,
    probs: Vec<f64>,
}

struct Builder<'m> {
    gates: HashMap<&'m str, &'m Gate>,
    events: HashMap<&'m str, &'m BasicEvent>,
    vars: Vec<&'m str>,
    var_pos: HashMap<&'m str, usize>,
    gate_pos: HashMap<&'m str, usize>,
    out: Vec<(GateOp, Vec<Input>)>,
    active: Vec<&'m str>,
}

impl<'m> Builder<'m> {
    fn visit(&mut self, id: &'m str) -> Result<Input, FtError> {
        if let Some(ev) = self.events.get(id) {
            if ev.kind == EventKind::House {
                return Ok(Input::Const(ev.probability >= 1.0));
            }
            let next = self.vars.len();
            let vars = &mut self.vars;
            let pos = *self.var_pos.entry(id).or_insert_with(|| {
                vars.push(id);
                next
            });
            return Ok(Input::Var(pos));
        }
        if let Some(&g) = self.gate_pos.get(id) {
            return Ok(Input::Gate(g));
        }
        let gate = *self
            .gates
            .get(id)
            .ok_or_else(|| FtError::DanglingReference(id.to_string()))?;
        if let Some(start) = self.active.iter().position(|&a| a == id) {
            let mut path: Vec<String> = self.active[start..].iter().map(|s| s.to_string()).collect();
            path.push(id.to_string());
            return Err(FtError::Cycle(path));
        }
        self.active.push(id);
        let mut inputs = Vec::with_capacity(gate.children.len());
        for c in &gate.children {
            inputs.push(self.visit(c)?);
        }
        self.active.pop();
        self.out.push((gate.op, inputs));
        self.gate_pos.insert(id, self.out.len() - 1);
        Ok(Input::Gate(self.out.len() - 1))
    }
}

fn compile(model: &Model, top: &str) -> Result<Compiled, FtError> {
    let mut b = Builder {
        gates: model.gates.iter().map(|g| (g.id.as_str(), g)).collect(),
        events: model.basic_events.iter().map(|e| (e.id.as_str(), e)).collect(),
        vars: Vec::new(),
        var_pos: HashMap::new(),
        gate_pos: HashMap::new(),
        out: Vec::new(),
        active: Vec::new(),
    };
    let top = resolve_top(model, top)?;
    b.visit(top)?;
    let probs = b.vars.iter().map(|v| b.events[v].probability).collect();
    Ok(Compiled { gates: b.out, probs })
}

fn evaluate(c: &Compiled, mask: u32, values: &mut [bool]) -> bool {
    for (i, (op, inputs)) in c.gates.iter().enumerate() {
        let true_count = inputs
            .iter()
            .filter(|inp| match **inp {
                Input::Var(v) => mask >> v & 1 == 1,
                Input::Const(b) => b,
                Input::Gate(g) => values[g],
            })
            .count();
        values[i] = match op {
            GateOp::And => true_count == inputs.len(),
            GateOp::Or => true_count >= 1,
            GateOp::KofN(k) => true_count >= *k,
        };
    }
    values[c.gates.len() - 1]
}

/// Sum of the probabilities of every event-state assignment under which the
/// top event occurs. Limited to `EXACT_EVENT_CAP` distinct basic events.
pub fn exact_bruteforce(model: &Model, top: &str) -> Result<f64, FtError> {
    let compiled = compile(model, top)?;
    let n = compiled.probs.len();
    if n > EXACT_EVENT_CAP {
        return Err(FtError::SizeCap { events: n, cap: EXACT_EVENT_CAP });
    }
    // split the assignment weight into two lookup halves
    let lo_bits = n / 2;
    let weights = |bits: std::ops::Range<usize>| -> Vec<f64> {
        let width = bits.len();
        (0..1usize << width)
            .map(|m| {
                bits.clone()
                    .enumerate()
                    .map(|(i, v)| {
                        let p = compiled.probs[v];
                        if m >> i & 1 == 1 { p } else { 1.0 - p }
                    })
                    .product()
            })
            .collect()
    };
    let lo = weights(0..lo_bits);
    let hi = weights(lo_bits..n);
    let lo_mask = (1u32 << lo_bits) - 1;
    let mut values = vec![false; compiled.gates.len()];
    let mut total = 0.0;
    for mask in 0..(1u32 << n) {
        if evaluate(&compiled, mask, &mut values) {
            total += lo[(mask & lo_mask) as usize] * hi[(mask >> lo_bits) as usize];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FaultTree;

    fn model(op: GateOp, n: usize, p: f64) -> Model {
        let ids: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        Model {
            basic_events: ids.iter().map(|id| BasicEvent::new(id.clone(), p)).collect(),
            gates: vec![Gate { id: "G".into(), op, children: ids }],
            fault_trees: vec![FaultTree { name: "T".into(), top: "G".into() }],
            ..Model::default()
        }
    }

    #[test]
    fn and_of_two() {
        let p = exact_bruteforce(&model(GateOp::And, 2, 0.1), "T").unwrap();
        assert!((p - 0.01).abs() < 1e-17);
    }

    #[test]
    fn two_of_three_fair() {
        let p = exact_bruteforce(&model(GateOp::KofN(2), 3, 0.5), "T").unwrap();
        assert_eq!(p, 0.5);
    }

    #[test]
    fn size_cap() {
        assert_eq!(
            exact_bruteforce(&model(GateOp::Or, 25, 0.1), "T"),
            Err(FtError::SizeCap { events: 25, cap: EXACT_EVENT_CAP })
        );
    }
}
