//! Rewrites component failures into independent and CCF basic events.

use std::collections::{BTreeMap, HashSet};

use crate::diagnostic::Diagnostic;
use crate::model::{BasicEvent, ComponentGroup, EventKind, Gate, GateOp, Model};

use super::bfm::{group_breakdown, BetaBreakdown};
use super::CcfError;

pub fn independent_event_id(component: &str) -> String {
    format!("IND-{component}")
}

pub fn ccf_event_id(group: &str, cccg: &str) -> String {
    format!("CCF-{group}-{cccg}")
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub model: Model,
    pub breakdown: Option<BetaBreakdown>,
    pub created_events: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Expands one group. A component's fault-tree leaf becomes an OR gate over
/// its independent event and the CCF events of every CCCG containing it; a
/// component in no CCCG is relabelled to its independent event. Only the
/// declared CCCGs get a CCF event. The input model is left untouched.
///
/// Expanding a group that is already marked expanded returns the model
/// unchanged with a warning.
pub fn expand_ccf(model: &Model, group_name: &str) -> Result<Expansion, CcfError> {
    let group = model
        .component_group(group_name)
        .ok_or_else(|| CcfError::UnknownGroup(group_name.to_string()))?;
    if group.expanded {
        return Ok(Expansion {
            model: model.clone(),
            breakdown: None,
            created_events: Vec::new(),
            diagnostics: vec![Diagnostic::warning(
                "already-expanded",
                group_name,
                "group is already expanded; nothing to do",
            )],
        });
    }
    let breakdown = group_breakdown(model, group)?;
    let mut out = model.clone();

    let mut new_events = Vec::new();
    for c in &group.component_ids {
        let template = model.basic_event(c);
        let mut ev = BasicEvent::new(independent_event_id(c), breakdown.components[c].q_independent);
        ev.description = format!("independent failure of {c}");
        ev.failure_domain = group.failure_domain;
        ev.uca_category = template.and_then(|t| t.uca_category.clone());
        new_events.push(ev);
    }
    for cccg in &group.cccgs {
        let mut ev = BasicEvent::new(ccf_event_id(&group.name, &cccg.id), breakdown.p_per_cccg[&cccg.id]);
        ev.description = format!("common cause failure of {} CCCG {}", group.name, cccg.id);
        ev.kind = EventKind::Ccf;
        ev.failure_domain = group.failure_domain;
        ev.redundancy_level = cccg.redundancy_level;
        new_events.push(ev);
    }

    let taken: HashSet<&str> = model
        .basic_events
        .iter()
        .map(|e| e.id.as_str())
        .chain(model.gates.iter().map(|g| g.id.as_str()))
        .collect();
    for ev in &new_events {
        if taken.contains(ev.id.as_str()) {
            return Err(CcfError::NameCollision(ev.id.clone()));
        }
    }
    for c in &group.component_ids {
        if model.gate(c).is_some() {
            return Err(CcfError::NotALeaf(c.clone()));
        }
    }

    let mut rewritten = Vec::new();
    let mut relabel: BTreeMap<&str, String> = BTreeMap::new();
    for c in &group.component_ids {
        if model.basic_event(c).is_none() {
            continue;
        }
        let ccfs: Vec<String> = group
            .cccgs
            .iter()
            .filter(|g| g.members.contains(c))
            .map(|g| ccf_event_id(&group.name, &g.id))
            .collect();
        if ccfs.is_empty() {
            relabel.insert(c.as_str(), independent_event_id(c));
        } else {
            let mut children = vec![independent_event_id(c)];
            children.extend(ccfs);
            rewritten.push(Gate { id: c.clone(), op: GateOp::Or, children });
        }
    }

    let members: HashSet<&str> = group.component_ids.iter().map(String::as_str).collect();
    out.basic_events.retain(|e| !members.contains(e.id.as_str()));
    out.basic_events.extend(new_events.iter().cloned());
    for gate in &mut out.gates {
        for child in &mut gate.children {
            if let Some(to) = relabel.get(child.as_str()) {
                *child = to.clone();
            }
        }
    }
    out.gates.extend(rewritten);
    for g in &mut out.component_groups {
        if g.name == group.name {
            g.expanded = true;
        }
    }

    Ok(Expansion {
        model: out,
        breakdown: Some(breakdown),
        created_events: new_events.into_iter().map(|e| e.id).collect(),
        diagnostics: Vec::new(),
    })
}

/// Expands every group of the model in declaration order.
pub fn expand_all(model: &Model) -> Result<Expansion, CcfError> {
    let names: Vec<String> = model.component_groups.iter().map(|g| g.name.clone()).collect();
    let mut acc = Expansion {
        model: model.clone(),
        breakdown: None,
        created_events: Vec::new(),
        diagnostics: Vec::new(),
    };
    for name in names {
        let step = expand_ccf(&acc.model, &name)?;
        acc.model = step.model;
        acc.breakdown = step.breakdown;
        acc.created_events.extend(step.created_events);
        acc.diagnostics.extend(step.diagnostics);
    }
    Ok(acc)
}

/// Ids of the CCCGs of `group` that contain `component`.
pub fn memberships<'a>(group: &'a ComponentGroup, component: &str) -> Vec<&'a str> {
    group
        .cccgs
        .iter()
        .filter(|g| g.members.iter().any(|m| m == component))
        .map(|g| g.id.as_str())
        .collect()
}
