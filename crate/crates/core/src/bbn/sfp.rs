//! Specific software failure probability: a generic failure probability
//! rescaled by the ratio of specific to generic fault probability, then
//! split into independent and CCF portions.

use std::collections::BTreeMap;

use crate::ccf::{group_breakdown, BetaBreakdown};
use crate::model::{ComponentGroup, InputKind, Model};

use super::{infer_marginal, BbnError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCalibration {
    pub sfp_generic: f64,
    pub p_faults_generic: f64,
    pub phi: f64,
}

pub fn calibrate_phi(sfp_generic: f64, p_faults_generic: f64) -> Result<PhiCalibration, BbnError> {
    if p_faults_generic == 0.0 {
        return Err(BbnError::InvalidCalibration("zero denominator: generic P(faults) is 0".into()));
    }
    for (name, v) in [("generic SFP", sfp_generic), ("generic P(faults)", p_faults_generic)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(BbnError::InvalidCalibration(format!("{name} {v} is outside (0, 1]")));
        }
    }
    Ok(PhiCalibration { sfp_generic, p_faults_generic, phi: sfp_generic / p_faults_generic })
}

pub fn specific_failure_probability(cal: &PhiCalibration, p_faults: f64) -> Result<f64, BbnError> {
    let sfp = cal.phi * p_faults;
    if sfp > 1.0 {
        return Err(BbnError::ScalingOverflow(sfp));
    }
    Ok(sfp)
}

/// Breakdown of `group` with its input replaced by `sfp` as a total
/// failure probability.
pub fn split_sfp(model: &Model, sfp: f64, group: &ComponentGroup) -> Result<BetaBreakdown, BbnError> {
    let mut g = group.clone();
    g.input_kind = InputKind::TotalGiven;
    g.input_probability = sfp;
    Ok(group_breakdown(model, &g)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfpResult {
    pub network: String,
    pub p_faults: f64,
    pub calibration: PhiCalibration,
    pub sfp: f64,
    pub breakdown: Option<BetaBreakdown>,
}

/// Full pipeline: P(faults) from the network's fault node, scaled by phi,
/// optionally split over a component group.
pub fn run_pipeline(
    model: &Model,
    network: &str,
    group: Option<&str>,
    sfp_generic: f64,
    p_faults_generic: f64,
) -> Result<SfpResult, BbnError> {
    let net = model.network(network).ok_or_else(|| BbnError::UnknownNetwork(network.to_string()))?;
    let (Some(node), Some(state)) = (&net.fault_node, &net.fault_state) else {
        return Err(BbnError::NoFaultNode(network.to_string()));
    };
    let marginal = infer_marginal(net, node, &BTreeMap::new())?;
    let p_faults = marginal
        .prob(state)
        .ok_or_else(|| BbnError::UnknownState { node: node.clone(), state: state.clone() })?;
    let calibration = calibrate_phi(sfp_generic, p_faults_generic)?;
    let sfp = specific_failure_probability(&calibration, p_faults)?;
    let breakdown = match group {
        Some(name) => {
            let g = model
                .component_group(name)
                .ok_or_else(|| crate::ccf::CcfError::UnknownGroup(name.to_string()))?;
            Some(split_sfp(model, sfp, g)?)
        }
        None => None,
    };
    Ok(SfpResult { network: network.to_string(), p_faults, calibration, sfp, breakdown })
}
