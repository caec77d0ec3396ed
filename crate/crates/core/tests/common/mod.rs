//! Independent reference implementations and random instance generators
//! shared by the integration tests. Nothing here calls into the engines.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use pradic::model::{
    BasicEvent, BbnNetwork, BbnNode, BranchOutcome, BranchPoint, Cccg, ComponentGroup, CptRow, EventTree,
    FailureDomain, FaultTree, Gate, GateOp, InitiatingEvent, InputKind, Model, Outcome, Sequence,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- fault trees

/// Evaluates gate `id` of `model` under the event assignment `state`
/// (event id -> occurred). Straight recursion, no memoisation.
pub fn eval_gate(model: &Model, id: &str, state: &HashMap<&str, bool>) -> bool {
    if let Some(v) = state.get(id) {
        return *v;
    }
    let gate = model.gate(id).expect("gate");
    let hits = gate.children.iter().filter(|c| eval_gate(model, c, state)).count();
    match gate.op {
        GateOp::And => hits == gate.children.len(),
        GateOp::Or => hits > 0,
        GateOp::KofN(k) => hits >= k,
    }
}

/// Minimal cut sets of a monotone tree read off its truth table: the
/// assignments that fail the top while no single-event removal does.
/// Returned as sorted id lists, sorted.
pub fn truth_table_cut_sets(model: &Model, top_gate: &str) -> Vec<Vec<String>> {
    let ids: Vec<&str> = model.basic_events.iter().map(|e| e.id.as_str()).collect();
    let n = ids.len();
    let truth: Vec<bool> = (0..1u32 << n)
        .map(|mask| {
            let state = ids.iter().enumerate().map(|(i, id)| (*id, mask >> i & 1 == 1)).collect();
            eval_gate(model, top_gate, &state)
        })
        .collect();
    let mut out: Vec<Vec<String>> = (0..1u32 << n)
        .filter(|&m| truth[m as usize] && (0..n).all(|b| m >> b & 1 == 0 || !truth[(m & !(1 << b)) as usize]))
        .map(|m| {
            let mut s: Vec<String> = (0..n).filter(|b| m >> b & 1 == 1).map(|b| ids[b].to_string()).collect();
            s.sort();
            s
        })
        .collect();
    out.sort();
    out
}

/// P(at least one cut set occurs) by inclusion-exclusion, accumulated as
/// signed coefficients per union mask so equal intersections merge.
pub fn inclusion_exclusion(cut_sets: &[Vec<String>], probs: &BTreeMap<String, f64>) -> f64 {
    let ids: Vec<&String> = probs.keys().collect();
    let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
    let masks: Vec<u64> = cut_sets
        .iter()
        .map(|cs| cs.iter().fold(0u64, |m, e| m | 1 << pos[e.as_str()]))
        .collect();
    let mut coef: HashMap<u64, f64> = HashMap::new();
    for &c in &masks {
        let snapshot: Vec<(u64, f64)> = coef.iter().map(|(k, v)| (*k, *v)).collect();
        for (u, w) in snapshot {
            *coef.entry(u | c).or_insert(0.0) -= w;
        }
        *coef.entry(c).or_insert(0.0) += 1.0;
    }
    let mut keys: Vec<u64> = coef.keys().copied().collect();
    keys.sort_unstable();
    keys.iter()
        .map(|u| {
            let p: f64 = (0..ids.len()).filter(|b| u >> b & 1 == 1).map(|b| probs[ids[b]]).product();
            coef[u] * p
        })
        .sum()
}

/// Random coherent tree over `1..=max_events` events. Gates only take
/// earlier gates as children, so the graph is acyclic; the last gate is the
/// top of fault tree `T`.
pub fn random_tree(rng: &mut ChaCha8Rng, max_events: usize) -> Model {
    let n = rng.random_range(1..=max_events);
    let events: Vec<BasicEvent> = (0..n)
        .map(|i| BasicEvent::new(format!("e{i:02}"), rng.random_range(0.01..0.6)))
        .collect();
    let n_gates = rng.random_range(1..=6);
    let mut gates: Vec<Gate> = Vec::new();
    for g in 0..n_gates {
        let mut children: Vec<String> = Vec::new();
        if g == n_gates - 1 {
            // the top adopts every earlier gate nothing else references
            let used: Vec<&String> = gates.iter().flat_map(|g| &g.children).collect();
            children.extend(gates.iter().map(|g| g.id.clone()).filter(|id| !used.contains(&id)));
        }
        let mut pool: Vec<String> = events.iter().map(|e| e.id.clone()).collect();
        pool.extend(gates.iter().map(|g| g.id.clone()));
        pool.retain(|p| !children.contains(p));
        pool.shuffle(rng);
        let extra = rng.random_range(usize::from(children.is_empty())..=pool.len().min(5));
        children.extend(pool.into_iter().take(extra));
        let op = match rng.random_range(0..3) {
            0 => GateOp::And,
            1 => GateOp::Or,
            _ => GateOp::KofN(rng.random_range(1..=children.len())),
        };
        gates.push(Gate { id: format!("G{g}"), op, children });
    }
    let top = gates.last().unwrap().id.clone();
    Model {
        basic_events: events,
        gates,
        fault_trees: vec![FaultTree { name: "T".into(), top }],
        ..Model::default()
    }
}

// ---------------------------------------------------------------- CCF groups

/// Random group. `TOTAL_GIVEN` groups get arbitrary overlapping CCCGs;
/// `INDEPENDENT_GIVEN` groups get layered partitions (one beta per layer) so
/// every component sees the same total beta.
pub fn random_group(rng: &mut ChaCha8Rng) -> ComponentGroup {
    let n = rng.random_range(2..=8);
    let ids: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let independent = rng.random_bool(0.5);
    let mut cccgs = Vec::new();
    if independent {
        let layers = rng.random_range(1..=3);
        let budget: f64 = rng.random_range(0.05..0.95);
        let weights: Vec<f64> = (0..layers).map(|_| rng.random_range(0.1..1.0)).collect();
        let wsum: f64 = weights.iter().sum();
        for (l, w) in weights.iter().enumerate() {
            let beta = budget * w / wsum;
            // partition into blocks of size >= 2
            let mut shuffled = ids.clone();
            shuffled.shuffle(rng);
            let blocks = rng.random_range(1..=n / 2);
            let mut parts: Vec<Vec<String>> = vec![Vec::new(); blocks];
            for (i, c) in shuffled.into_iter().enumerate() {
                parts[if i < 2 * blocks { i / 2 } else { rng.random_range(0..blocks) }].push(c);
            }
            for (b, members) in parts.into_iter().enumerate() {
                cccgs.push(cccg(format!("L{l}B{b}"), members, beta));
            }
        }
    } else {
        let k = rng.random_range(0..=4);
        let mut raw = Vec::new();
        for w in 0..k {
            let size = rng.random_range(2..=n);
            let mut members = ids.clone();
            members.shuffle(rng);
            members.truncate(size);
            raw.push((format!("W{w}"), members, rng.random_range(0.01..1.0)));
        }
        // scale so the busiest component stays below beta_t = 0.95
        let worst = ids
            .iter()
            .map(|c| raw.iter().filter(|(_, m, _)| m.contains(c)).map(|(_, _, b)| b).sum::<f64>())
            .fold(0.0, f64::max);
        let target = rng.random_range(0.01..0.95);
        let scale = if worst > 0.0 { target / worst } else { 1.0 };
        for (id, members, b) in raw {
            cccgs.push(cccg(id, members, b * scale));
        }
    }
    ComponentGroup {
        name: "G".into(),
        component_ids: ids,
        failure_domain: FailureDomain::Software,
        input_kind: if independent { InputKind::IndependentGiven } else { InputKind::TotalGiven },
        input_probability: 10f64.powf(rng.random_range(-7.0..-1.0)),
        cccgs,
        expanded: false,
    }
}

fn cccg(id: String, members: Vec<String>, beta: f64) -> Cccg {
    Cccg { id, members, coupling_factors: Vec::new(), redundancy_level: None, beta: Some(beta), score_sheet: None }
}

// ---------------------------------------------------------------- event trees

/// Random event tree over up to `max_branches` fixed-probability or
/// fault-tree-linked branch points. Sequences are the leaves of a random
/// binary tree over the branch order, so they partition the outcome space.
pub fn random_event_tree(rng: &mut ChaCha8Rng, max_branches: usize) -> Model {
    let k = rng.random_range(1..=max_branches);
    let mut model = Model::default();
    let mut branch_points = Vec::new();
    for b in 0..k {
        let label = format!("B{b}");
        if rng.random_bool(0.5) {
            let p: f64 = if rng.random_bool(0.1) { rng.random_range(0..=1) as f64 } else { rng.random_range(0.0..1.0) };
            branch_points.push(BranchPoint { label, fault_tree: None, probability: Some(p) });
        } else {
            let a = format!("B{b}-a");
            let c = format!("B{b}-b");
            model.basic_events.push(BasicEvent::new(a.clone(), rng.random_range(0.0..0.5)));
            model.basic_events.push(BasicEvent::new(c.clone(), rng.random_range(0.0..0.5)));
            let op = if rng.random_bool(0.5) { GateOp::And } else { GateOp::Or };
            model.gates.push(Gate { id: format!("B{b}-TOP"), op, children: vec![a, c] });
            model.fault_trees.push(FaultTree { name: format!("FT{b}"), top: format!("B{b}-TOP") });
            branch_points.push(BranchPoint { label, fault_tree: Some(format!("FT{b}")), probability: None });
        }
    }
    let mut sequences = Vec::new();
    fn grow(rng: &mut ChaCha8Rng, depth: usize, k: usize, path: &mut Vec<Outcome>, out: &mut Vec<Sequence>) {
        if depth == k || (depth > 0 && rng.random_bool(0.2)) {
            let id = format!("S{:03}", out.len() + 1);
            out.push(Sequence { id, outcomes: path.clone(), end_state: "END".into() });
            return;
        }
        for outcome in [BranchOutcome::Success, BranchOutcome::Failure] {
            path.push(Outcome { branch: format!("B{depth}"), outcome });
            grow(rng, depth + 1, k, path, out);
            path.pop();
        }
    }
    grow(rng, 0, k, &mut Vec::new(), &mut sequences);
    model.event_trees.push(EventTree {
        name: "ET".into(),
        initiating_event: InitiatingEvent { id: "IE".into(), frequency: 10f64.powf(rng.random_range(-3.0..1.0)) },
        end_states: vec!["END".into()],
        branch_points,
        sequences,
    });
    model
}

// ---------------------------------------------------------------- networks

/// Random network over `1..=max_nodes` binary nodes with up to three
/// parents each, drawn from earlier nodes. CPT entries stay away from 0 and
/// 1 so any evidence has positive probability.
pub fn random_network(rng: &mut ChaCha8Rng, max_nodes: usize) -> BbnNetwork {
    let n = rng.random_range(1..=max_nodes);
    let mut nodes: Vec<BbnNode> = Vec::new();
    for i in 0..n {
        let mut candidates: Vec<String> = (0..i).map(|j| format!("N{j:02}")).collect();
        candidates.shuffle(rng);
        let parents: Vec<String> = candidates.into_iter().take(rng.random_range(0..=3)).collect();
        let mut cpt = Vec::new();
        for combo in 0..1usize << parents.len() {
            let given = parents
                .iter()
                .enumerate()
                .map(|(b, p)| (p.clone(), if combo >> b & 1 == 1 { "t" } else { "f" }.to_string()))
                .collect();
            let p: f64 = rng.random_range(0.02..0.98);
            cpt.push(CptRow { given, probs: vec![p, 1.0 - p] });
        }
        nodes.push(BbnNode { id: format!("N{i:02}"), states: vec!["t".into(), "f".into()], parents, cpt });
    }
    // declaration order should not matter
    nodes.shuffle(rng);
    BbnNetwork { name: "R".into(), fault_node: None, fault_state: None, nodes }
}

/// Posterior of `query` by summing the full joint over every assignment.
pub fn enumerate_posterior(net: &BbnNetwork, query: &str, evidence: &BTreeMap<String, String>) -> Vec<f64> {
    let nodes = &net.nodes;
    let qi = nodes.iter().position(|x| x.id == query).unwrap();
    let mut out = vec![0.0; nodes[qi].states.len()];
    let radix: Vec<usize> = nodes.iter().map(|x| x.states.len()).collect();
    let total: usize = radix.iter().product();
    for code in 0..total {
        let mut rest = code;
        let mut assign: HashMap<&str, &str> = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            assign.insert(&node.id, &node.states[rest % radix[i]]);
            rest /= radix[i];
        }
        if evidence.iter().any(|(k, v)| assign[k.as_str()] != v.as_str()) {
            continue;
        }
        let mut p = 1.0;
        for node in nodes {
            let row = node
                .cpt
                .iter()
                .find(|r| r.given.iter().all(|(k, v)| assign[k.as_str()] == v.as_str()))
                .unwrap();
            let s = node.states.iter().position(|s| s == assign[node.id.as_str()]).unwrap();
            p *= row.probs[s];
        }
        let qs = nodes[qi].states.iter().position(|s| s == assign[query]).unwrap();
        out[qs] += p;
    }
    let z: f64 = out.iter().sum();
    out.iter().map(|v| v / z).collect()
}

/// Random evidence over at most `max` nodes other than `query`.
pub fn random_evidence(rng: &mut ChaCha8Rng, net: &BbnNetwork, query: &str, max: usize) -> BTreeMap<String, String> {
    let mut ids: Vec<&BbnNode> = net.nodes.iter().filter(|n| n.id != query).collect();
    ids.shuffle(rng);
    let k = rng.random_range(0..=max.min(ids.len()));
    ids.into_iter()
        .take(k)
        .map(|n| (n.id.clone(), n.states[rng.random_range(0..n.states.len())].clone()))
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) || (a - b).abs() < 1e-300
}
