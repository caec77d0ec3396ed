//! Modified beta-factor model: a component may belong to several CCCGs,
//! each carrying its own group beta.
//!
//! For a component with total failure probability `Q_t` the dependent part
//! attributed to CCCG `w` is `P(CCCG_w) = beta_w * Q_t`, the betas of all
//! groups containing the component add up to `beta_t`, and the independent
//! part is `Q_I = (1 - beta_t) * Q_t`.

use std::collections::BTreeMap;

use crate::model::{ComponentGroup, InputKind, Model};

use super::beta::estimate_beta;
use super::CcfError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentSplit {
    pub beta_total: f64,
    pub q_total: f64,
    pub q_independent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaBreakdown {
    pub beta_per_cccg: BTreeMap<String, f64>,
    pub p_per_cccg: BTreeMap<String, f64>,
    /// Split of the most coupled component (largest `beta_t`, ties broken
    /// by id). For symmetric groups every component has this split.
    pub beta_total: f64,
    pub q_total: f64,
    pub q_independent: f64,
    pub components: BTreeMap<String, ComponentSplit>,
}

impl BetaBreakdown {
    /// `Q_D`, the summed dependent probability seen by the headline component.
    pub fn q_dependent(&self) -> f64 {
        self.q_total - self.q_independent
    }
}

/// Betas of every CCCG in `group`, either given directly or estimated from
/// the referenced score sheet.
pub fn resolve_betas(model: &Model, group: &ComponentGroup) -> Result<BTreeMap<String, f64>, CcfError> {
    let mut betas = BTreeMap::new();
    for cccg in &group.cccgs {
        let beta = match (cccg.beta, &cccg.score_sheet) {
            (Some(b), None) => b,
            (None, Some(name)) => {
                let sheet = model
                    .score_sheet(name)
                    .ok_or_else(|| CcfError::UnknownScoreSheet(name.clone()))?;
                estimate_beta(&model.beta_table(sheet.table), sheet)?
            }
            _ => {
                return Err(CcfError::BetaSource {
                    cccg: format!("{}-{}", group.name, cccg.id),
                })
            }
        };
        betas.insert(cccg.id.clone(), beta);
    }
    Ok(betas)
}

/// Splits the group's input probability into independent and per-CCCG
/// dependent portions.
pub fn apply_modified_bfm(
    group: &ComponentGroup,
    betas: &BTreeMap<String, f64>,
) -> Result<BetaBreakdown, CcfError> {
    let input = group.input_probability;
    if !(0.0..=1.0).contains(&input) {
        return Err(CcfError::InvalidInput(format!(
            "input probability {input} of group `{}` is outside [0, 1]",
            group.name
        )));
    }
    let mut beta_per_cccg = BTreeMap::new();
    for cccg in &group.cccgs {
        let beta = *betas
            .get(&cccg.id)
            .ok_or_else(|| CcfError::BetaSource { cccg: format!("{}-{}", group.name, cccg.id) })?;
        if !(beta > 0.0 && beta < 1.0) {
            return Err(CcfError::InvalidInput(format!(
                "beta {beta} of CCCG `{}-{}` is outside (0, 1)",
                group.name, cccg.id
            )));
        }
        beta_per_cccg.insert(cccg.id.clone(), beta);
    }

    let mut components = BTreeMap::new();
    for c in &group.component_ids {
        let beta_total: f64 = group
            .cccgs
            .iter()
            .filter(|g| g.members.contains(c))
            .map(|g| beta_per_cccg[&g.id])
            .sum();
        if beta_total >= 1.0 {
            return Err(CcfError::InconsistentBetas { component: c.clone(), beta_total });
        }
        let split = match group.input_kind {
            InputKind::TotalGiven => ComponentSplit {
                beta_total,
                q_total: input,
                q_independent: (1.0 - beta_total) * input,
            },
            InputKind::IndependentGiven => {
                let q_total = input / (1.0 - beta_total);
                if q_total > 1.0 {
                    return Err(CcfError::ProbabilityOverflow { component: c.clone(), q_total });
                }
                ComponentSplit { beta_total, q_total, q_independent: input }
            }
        };
        components.insert(c.clone(), split);
    }

    let mut p_per_cccg = BTreeMap::new();
    for cccg in &group.cccgs {
        // Q_t must be unambiguous across the members of a CCCG
        let mut q_totals = cccg.members.iter().filter_map(|m| components.get(m)).map(|s| s.q_total);
        let q_total = q_totals.next().unwrap_or(input);
        if q_totals.any(|q| q != q_total) {
            return Err(CcfError::AsymmetricMembership(format!("{}-{}", group.name, cccg.id)));
        }
        p_per_cccg.insert(cccg.id.clone(), beta_per_cccg[&cccg.id] * q_total);
    }

    let headline = components
        .values()
        .copied()
        .reduce(|best, s| if s.beta_total > best.beta_total { s } else { best })
        .unwrap_or(ComponentSplit { beta_total: 0.0, q_total: input, q_independent: input });

    Ok(BetaBreakdown {
        beta_per_cccg,
        p_per_cccg,
        beta_total: headline.beta_total,
        q_total: headline.q_total,
        q_independent: headline.q_independent,
        components,
    })
}

/// Resolves the group's betas from the model and applies the model.
pub fn group_breakdown(model: &Model, group: &ComponentGroup) -> Result<BetaBreakdown, CcfError> {
    apply_modified_bfm(group, &resolve_betas(model, group)?)
}
