//! Structural well-formedness checks over a [`Model`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::ccf::beta::lookup_score;
use crate::diagnostic::Diagnostic;
use crate::model::*;

const CPT_SUM_TOLERANCE: f64 = 1e-9;

/// Checks every model invariant. Returns an empty list iff the model is
/// well formed. Pure; the same model always yields the same diagnostics in
/// the same order.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if model.format_version != FORMAT_VERSION {
        out.push(Diagnostic::error(
            "format-version",
            "model",
            format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                model.format_version
            ),
        ));
    }
    check_nodes(model, &mut out);
    check_fault_trees(model, &mut out);
    check_event_trees(model, &mut out);
    check_beta_tables(model, &mut out);
    check_score_sheets(model, &mut out);
    check_groups(model, &mut out);
    check_networks(model, &mut out);
    out
}

fn duplicates<'a>(ids: impl IntoIterator<Item = &'a str>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    let mut dup = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            dup.insert(id);
        }
    }
    dup.into_iter().collect()
}

fn report_duplicates<'a>(
    kind: &str,
    ids: impl IntoIterator<Item = &'a str>,
    out: &mut Vec<Diagnostic>,
) {
    for id in duplicates(ids) {
        out.push(Diagnostic::error(
            "duplicate-id",
            id,
            format!("{kind} id `{id}` is declared more than once"),
        ));
    }
}

fn check_probability(entity: &str, what: &str, p: f64, out: &mut Vec<Diagnostic>) {
    if !(0.0..=1.0).contains(&p) {
        out.push(Diagnostic::error(
            "probability-range",
            entity,
            format!("{what} {p} is outside [0, 1]"),
        ));
    }
}

fn check_nodes(model: &Model, out: &mut Vec<Diagnostic>) {
    // basic events and gates share one reference namespace
    report_duplicates(
        "node",
        model
            .basic_events
            .iter()
            .map(|e| e.id.as_str())
            .chain(model.gates.iter().map(|g| g.id.as_str())),
        out,
    );

    for ev in &model.basic_events {
        check_probability(&ev.id, "probability", ev.probability, out);
        if ev.kind == EventKind::House && ev.probability != 0.0 && ev.probability != 1.0 {
            out.push(Diagnostic::error(
                "house-probability",
                &ev.id,
                format!("house event probability must be 0 or 1, got {}", ev.probability),
            ));
        }
    }

    let known: HashSet<&str> = model
        .basic_events
        .iter()
        .map(|e| e.id.as_str())
        .chain(model.gates.iter().map(|g| g.id.as_str()))
        .collect();

    for gate in &model.gates {
        if gate.children.is_empty() {
            out.push(Diagnostic::error("empty-children", &gate.id, "gate has no children"));
        }
        if let GateOp::KofN(k) = gate.op {
            let n = gate.children.len();
            if k == 0 {
                out.push(Diagnostic::error("k-zero", &gate.id, "KOFN requires k >= 1"));
            } else if k > n {
                out.push(Diagnostic::error(
                    "k-exceeds-n",
                    &gate.id,
                    format!("k exceeds n: KOFN({k}) over {n} children"),
                ));
            }
        }
        for dup in duplicates(gate.children.iter().map(String::as_str)) {
            out.push(Diagnostic::error(
                "duplicate-child",
                &gate.id,
                format!("child `{dup}` is listed more than once"),
            ));
        }
        for child in &gate.children {
            if !known.contains(child.as_str()) {
                out.push(Diagnostic::error(
                    "dangling-reference",
                    &gate.id,
                    format!("child `{child}` is not a declared gate or basic event"),
                ));
            }
        }
    }

    for cycle in gate_cycles(model) {
        out.push(Diagnostic::error(
            "cycle",
            &cycle[0],
            format!("gate reference cycle {}", cycle.join(" -> ")),
        ));
    }
}

/// Each cycle is reported once, as the path from its first visited gate back to itself.
pub(crate) fn gate_cycles(model: &Model) -> Vec<Vec<String>> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, g) in model.gates.iter().enumerate() {
        index.entry(g.id.as_str()).or_insert(i);
    }
    let adj: Vec<Vec<usize>> = model
        .gates
        .iter()
        .map(|g| {
            g.children
                .iter()
                .filter_map(|c| index.get(c.as_str()).copied())
                .collect()
        })
        .collect();
    directed_cycles(&adj)
        .into_iter()
        .map(|c| c.into_iter().map(|i| model.gates[i].id.clone()).collect())
        .collect()
}

/// Iterative DFS that returns one closed path per back edge found.
pub(crate) fn directed_cycles(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; adj.len()];
    let mut cycles = Vec::new();
    for root in 0..adj.len() {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < adj[node].len() {
                let child = adj[node][*next];
                *next += 1;
                match mark[child] {
                    Mark::New => {
                        mark[child] = Mark::Active;
                        stack.push((child, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(n, _)| n == child).unwrap();
                        let mut path: Vec<usize> = stack[start..].iter().map(|&(n, _)| n).collect();
                        path.push(child);
                        cycles.push(path);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    cycles
}

fn check_fault_trees(model: &Model, out: &mut Vec<Diagnostic>) {
    report_duplicates("fault tree", model.fault_trees.iter().map(|t| t.name.as_str()), out);
    for ft in &model.fault_trees {
        if model.gate(&ft.top).is_none() {
            let msg = if model.basic_event(&ft.top).is_some() {
                format!("top `{}` is a basic event, not a gate", ft.top)
            } else {
                format!("top gate `{}` is not declared", ft.top)
            };
            out.push(Diagnostic::error("top-not-gate", &ft.name, msg));
        }
    }
}

fn check_event_trees(model: &Model, out: &mut Vec<Diagnostic>) {
    report_duplicates("event tree", model.event_trees.iter().map(|t| t.name.as_str()), out);
    for et in &model.event_trees {
        let ie = et.initiating_event.frequency;
        if !(ie >= 0.0 && ie.is_finite()) {
            out.push(Diagnostic::error(
                "frequency-range",
                &et.name,
                format!("initiating event frequency {ie} must be finite and >= 0"),
            ));
        }
        if et.end_states.is_empty() {
            out.push(Diagnostic::error("end-state", &et.name, "no end states declared"));
        }
        report_duplicates(
            &format!("branch point of `{}`", et.name),
            et.branch_points.iter().map(|b| b.label.as_str()),
            out,
        );
        for bp in &et.branch_points {
            let entity = format!("{}/{}", et.name, bp.label);
            match (&bp.fault_tree, bp.probability) {
                (Some(ft), None) => {
                    if model.fault_tree(ft).is_none() {
                        out.push(Diagnostic::error(
                            "dangling-reference",
                            entity,
                            format!("linked fault tree `{ft}` is not declared"),
                        ));
                    }
                }
                (None, Some(p)) => check_probability(&entity, "branch probability", p, out),
                _ => out.push(Diagnostic::error(
                    "branch-link",
                    entity,
                    "branch point needs exactly one of fault_tree or probability",
                )),
            }
        }
        report_duplicates(
            &format!("sequence of `{}`", et.name),
            et.sequences.iter().map(|s| s.id.as_str()),
            out,
        );
        let labels: HashSet<&str> = et.branch_points.iter().map(|b| b.label.as_str()).collect();
        for seq in &et.sequences {
            if !et.end_states.contains(&seq.end_state) {
                out.push(Diagnostic::error(
                    "end-state",
                    &seq.id,
                    format!("end state `{}` is not declared", seq.end_state),
                ));
            }
            for dup in duplicates(seq.outcomes.iter().map(|o| o.branch.as_str())) {
                out.push(Diagnostic::error(
                    "duplicate-outcome",
                    &seq.id,
                    format!("branch `{dup}` traversed more than once"),
                ));
            }
            for o in &seq.outcomes {
                if !labels.contains(o.branch.as_str()) {
                    out.push(Diagnostic::error(
                        "dangling-reference",
                        &seq.id,
                        format!("branch `{}` is not a declared branch point", o.branch),
                    ));
                }
            }
        }
    }
}

fn check_beta_tables(model: &Model, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for table in &model.beta_tables {
        let name = table.name.to_string();
        if !seen.insert(table.name) {
            out.push(Diagnostic::error(
                "duplicate-id",
                &name,
                format!("beta table `{name}` is declared more than once"),
            ));
        }
        if !(table.denominator > 0.0 && table.denominator.is_finite()) {
            out.push(Diagnostic::error(
                "denominator",
                &name,
                "denominator must be a positive number",
            ));
        }
        for (sub, row) in &table.rows {
            let mut vals = vec![row.a];
            vals.extend(row.a_plus);
            vals.push(row.b);
            vals.extend(row.b_plus);
            vals.extend([row.c, row.d, row.e]);
            if vals.windows(2).any(|w| w[0] <= w[1]) || row.e <= 0.0 {
                out.push(Diagnostic::error(
                    "table-not-decreasing",
                    format!("{name}/{sub}"),
                    "row values must be positive and strictly decrease from A to E",
                ));
            }
        }
    }
}

fn check_score_sheets(model: &Model, out: &mut Vec<Diagnostic>) {
    report_duplicates("score sheet", model.score_sheets.iter().map(|s| s.name.as_str()), out);
    for sheet in &model.score_sheets {
        let missing: Vec<&str> = Subfactor::ALL
            .iter()
            .filter(|s| !sheet.grades.contains_key(s))
            .map(|s| s.name())
            .collect();
        if !missing.is_empty() {
            out.push(Diagnostic::error(
                "missing-grade",
                &sheet.name,
                format!("subfactors not graded: {}", missing.join(", ")),
            ));
            continue;
        }
        let table = model.beta_table(sheet.table);
        for (&sub, &grade) in &sheet.grades {
            if let Err(e) = lookup_score(&table, sub, grade) {
                out.push(Diagnostic::error("score-lookup", &sheet.name, e.to_string()));
            }
        }
    }
}

fn check_groups(model: &Model, out: &mut Vec<Diagnostic>) {
    report_duplicates(
        "component group",
        model.component_groups.iter().map(|g| g.name.as_str()),
        out,
    );
    for group in &model.component_groups {
        let gname = &group.name;
        if group.component_ids.is_empty() {
            out.push(Diagnostic::error("empty-group", gname, "group has no components"));
        }
        if group.failure_domain == FailureDomain::Other {
            out.push(Diagnostic::error(
                "group-domain",
                gname,
                "component group failure domain must be HARDWARE or SOFTWARE",
            ));
        }
        for dup in duplicates(group.component_ids.iter().map(String::as_str)) {
            out.push(Diagnostic::error(
                "duplicate-id",
                gname,
                format!("component `{dup}` is listed more than once"),
            ));
        }
        check_probability(gname, "input probability", group.input_probability, out);
        report_duplicates(
            &format!("CCCG of `{gname}`"),
            group.cccgs.iter().map(|c| c.id.as_str()),
            out,
        );

        let members: HashSet<&str> = group.component_ids.iter().map(String::as_str).collect();
        let mut betas: BTreeMap<&str, f64> = BTreeMap::new();
        for cccg in &group.cccgs {
            let entity = format!("{gname}/{}", cccg.id);
            if cccg.members.len() < 2 {
                out.push(Diagnostic::error(
                    "cccg-size",
                    &entity,
                    "a CCCG needs at least two members",
                ));
            }
            for dup in duplicates(cccg.members.iter().map(String::as_str)) {
                out.push(Diagnostic::error(
                    "duplicate-id",
                    &entity,
                    format!("member `{dup}` is listed more than once"),
                ));
            }
            for m in &cccg.members {
                if !members.contains(m.as_str()) {
                    out.push(Diagnostic::error(
                        "cccg-member",
                        &entity,
                        format!("member `{m}` is not a component of group `{gname}`"),
                    ));
                }
            }
            let beta = match (cccg.beta, &cccg.score_sheet) {
                (Some(b), None) => Some(b),
                (None, Some(sheet)) => match model.score_sheet(sheet) {
                    Some(s) => crate::ccf::beta::estimate_beta(&model.beta_table(s.table), s).ok(),
                    None => {
                        out.push(Diagnostic::error(
                            "dangling-reference",
                            &entity,
                            format!("score sheet `{sheet}` is not declared"),
                        ));
                        None
                    }
                },
                _ => {
                    out.push(Diagnostic::error(
                        "beta-source",
                        &entity,
                        "CCCG needs exactly one of beta or score_sheet",
                    ));
                    None
                }
            };
            if let Some(b) = beta {
                if !(b > 0.0 && b < 1.0) {
                    out.push(Diagnostic::error(
                        "beta-range",
                        &entity,
                        format!("beta {b} is outside (0, 1)"),
                    ));
                } else {
                    betas.insert(cccg.id.as_str(), b);
                }
            }
        }
        for c in &group.component_ids {
            let total: f64 = group
                .cccgs
                .iter()
                .filter(|g| g.members.contains(c))
                .filter_map(|g| betas.get(g.id.as_str()))
                .sum();
            if total >= 1.0 {
                out.push(Diagnostic::error(
                    "inconsistent-betas",
                    gname,
                    format!("betas of the CCCGs containing `{c}` sum to {total} >= 1"),
                ));
            }
        }
    }
}

fn check_networks(model: &Model, out: &mut Vec<Diagnostic>) {
    report_duplicates("network", model.bbn_networks.iter().map(|n| n.name.as_str()), out);
    for net in &model.bbn_networks {
        let nname = &net.name;
        report_duplicates(
            &format!("node of `{nname}`"),
            net.nodes.iter().map(|n| n.id.as_str()),
            out,
        );
        let by_id: HashMap<&str, &BbnNode> = net.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        for node in &net.nodes {
            let entity = format!("{nname}/{}", node.id);
            if node.states.len() < 2 {
                out.push(Diagnostic::error("bbn-states", &entity, "a node needs at least two states"));
            }
            for dup in duplicates(node.states.iter().map(String::as_str)) {
                out.push(Diagnostic::error(
                    "duplicate-id",
                    &entity,
                    format!("state `{dup}` is listed more than once"),
                ));
            }
            for dup in duplicates(node.parents.iter().map(String::as_str)) {
                out.push(Diagnostic::error(
                    "duplicate-id",
                    &entity,
                    format!("parent `{dup}` is listed more than once"),
                ));
            }
            let mut parents_ok = true;
            for p in &node.parents {
                if !by_id.contains_key(p.as_str()) {
                    parents_ok = false;
                    out.push(Diagnostic::error(
                        "dangling-reference",
                        &entity,
                        format!("parent `{p}` is not a node of `{nname}`"),
                    ));
                }
            }
            if parents_ok {
                check_cpt(node, &by_id, &entity, out);
            }
        }
        let index: HashMap<&str, usize> =
            net.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let adj: Vec<Vec<usize>> = net
            .nodes
            .iter()
            .map(|n| n.parents.iter().filter_map(|p| index.get(p.as_str()).copied()).collect())
            .collect();
        for cycle in directed_cycles(&adj) {
            let path: Vec<&str> = cycle.iter().map(|&i| net.nodes[i].id.as_str()).collect();
            out.push(Diagnostic::error(
                "cycle",
                format!("{nname}/{}", path[0]),
                format!("parent cycle {}", path.join(" <- ")),
            ));
        }
        match (&net.fault_node, &net.fault_state) {
            (None, None) => {}
            (Some(node), Some(state)) => match by_id.get(node.as_str()) {
                Some(n) if n.states.contains(state) => {}
                Some(_) => out.push(Diagnostic::error(
                    "fault-node",
                    nname,
                    format!("fault state `{state}` is not a state of `{node}`"),
                )),
                None => out.push(Diagnostic::error(
                    "fault-node",
                    nname,
                    format!("fault node `{node}` is not declared"),
                )),
            },
            _ => out.push(Diagnostic::error(
                "fault-node",
                nname,
                "fault_node and fault_state must be given together",
            )),
        }
    }
}

fn check_cpt(node: &BbnNode, by_id: &HashMap<&str, &BbnNode>, entity: &str, out: &mut Vec<Diagnostic>) {
    let parent_states: Vec<&[String]> = node.parents.iter().map(|p| by_id[p.as_str()].states.as_slice()).collect();
    let expected: usize = parent_states.iter().map(|s| s.len()).product();
    let mut covered: HashSet<Vec<usize>> = HashSet::new();
    let before = out.len();
    for (r, row) in node.cpt.iter().enumerate() {
        let row_entity = format!("{entity}#row{r}");
        if row.probs.len() != node.states.len() {
            out.push(Diagnostic::error(
                "cpt-width",
                &row_entity,
                format!("row has {} values for {} states", row.probs.len(), node.states.len()),
            ));
        } else {
            let sum: f64 = row.probs.iter().sum();
            if row.probs.iter().any(|p| p.is_nan() || *p < 0.0) || (sum - 1.0).abs() > CPT_SUM_TOLERANCE {
                out.push(Diagnostic::error(
                    "cpt-row-sum",
                    &row_entity,
                    format!("row must be a distribution, sums to {sum}"),
                ));
            }
        }
        let extra: Vec<&String> = row.given.keys().filter(|k| !node.parents.contains(k)).collect();
        if !extra.is_empty() || row.given.len() != node.parents.len() {
            out.push(Diagnostic::error(
                "cpt-coverage",
                &row_entity,
                "row must name a state for every parent and nothing else",
            ));
            continue;
        }
        let mut key = Vec::with_capacity(node.parents.len());
        let mut ok = true;
        for (p, states) in node.parents.iter().zip(&parent_states) {
            match states.iter().position(|s| *s == row.given[p]) {
                Some(i) => key.push(i),
                None => {
                    ok = false;
                    out.push(Diagnostic::error(
                        "cpt-coverage",
                        &row_entity,
                        format!("`{}` is not a state of parent `{p}`", row.given[p]),
                    ));
                }
            }
        }
        if ok && !covered.insert(key) {
            out.push(Diagnostic::error(
                "cpt-coverage",
                &row_entity,
                "parent combination is listed more than once",
            ));
        }
    }
    if covered.len() != expected && out.len() == before {
        out.push(Diagnostic::error(
            "cpt-coverage",
            entity,
            format!("CPT covers {} of {expected} parent combinations", covered.len()),
        ));
    }
}
