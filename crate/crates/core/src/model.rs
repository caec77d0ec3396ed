//! Domain model shared by every engine.
//!
//! A [`Model`] is the root container loaded from a model file: basic events,
//! gates, fault trees, event trees, component groups with their common-cause
//! component groups, score sheets, optional beta-table overrides and Bayesian
//! networks. Values are plain data and are never mutated by the engines; an
//! engine that rewrites a model (CCF expansion) returns a new one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Model file format version understood by this crate.
pub const FORMAT_VERSION: u32 = 1;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Option<Self> {
        (0.0..=1.0).contains(&value).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-negative frequency, per reactor-year.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(value: f64) -> Option<Self> {
        (value >= 0.0 && value.is_finite()).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EventKind {
    #[default]
    Independent,
    Ccf,
    House,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FailureDomain {
    Hardware,
    Software,
    #[default]
    Other,
}

impl fmt::Display for FailureDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureDomain::Hardware => "HARDWARE",
            FailureDomain::Software => "SOFTWARE",
            FailureDomain::Other => "OTHER",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RedundancyLevel {
    Individual,
    Rack,
    Division,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasicEvent {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub probability: f64,
    #[serde(default)]
    pub kind: EventKind,
    #[serde(default)]
    pub failure_domain: FailureDomain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uca_category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redundancy_level: Option<RedundancyLevel>,
}

impl BasicEvent {
    pub fn new(id: impl Into<String>, probability: f64) -> Self {
        Self {
            id: id.into(),
            description: String::new(),
            probability,
            kind: EventKind::Independent,
            failure_domain: FailureDomain::Other,
            uca_category: None,
            redundancy_level: None,
        }
    }
}

/// Coherent gate logic. `KOFN(k)` takes `n` from the number of children.
///
/// Serialized as `"AND"`, `"OR"` or `{"KOFN": k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateOp {
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
    #[serde(rename = "KOFN")]
    KofN(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub id: String,
    pub op: GateOp,
    pub children: Vec<String>,
}

impl Gate {
    pub fn new(id: impl Into<String>, op: GateOp, children: &[&str]) -> Self {
        Self {
            id: id.into(),
            op,
            children: children.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultTree {
    pub name: String,
    pub top: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitiatingEvent {
    pub id: String,
    pub frequency: f64,
}

/// A branch point is either linked to a fault tree or carries a fixed
/// failure probability; exactly one of the two must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPoint {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_tree: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BranchOutcome {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outcome {
    pub branch: String,
    pub outcome: BranchOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sequence {
    pub id: String,
    pub outcomes: Vec<Outcome>,
    pub end_state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventTree {
    pub name: String,
    pub initiating_event: InitiatingEvent,
    pub end_states: Vec<String>,
    pub branch_points: Vec<BranchPoint>,
    pub sequences: Vec<Sequence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InputKind {
    /// The input probability is the component's total failure probability.
    TotalGiven,
    /// The input probability is the independent portion only.
    IndependentGiven,
}

/// A common-cause component group. Ids are scoped to the owning
/// [`ComponentGroup`]; the model-wide identity is `<group>-<id>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cccg {
    pub id: String,
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coupling_factors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redundancy_level: Option<RedundancyLevel>,
    /// Beta supplied directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Name of a score sheet the beta is estimated from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_sheet: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentGroup {
    pub name: String,
    pub component_ids: Vec<String>,
    pub failure_domain: FailureDomain,
    pub input_kind: InputKind,
    pub input_probability: f64,
    #[serde(default)]
    pub cccgs: Vec<Cccg>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expanded: bool,
}

/// Defence subfactors of the partial beta-factor scheme, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subfactor {
    Redundancy,
    Separation,
    Understanding,
    Analysis,
    #[serde(rename = "MMI")]
    Mmi,
    SafetyCulture,
    Control,
    Tests,
}

impl Subfactor {
    pub const ALL: [Subfactor; 8] = [
        Subfactor::Redundancy,
        Subfactor::Separation,
        Subfactor::Understanding,
        Subfactor::Analysis,
        Subfactor::Mmi,
        Subfactor::SafetyCulture,
        Subfactor::Control,
        Subfactor::Tests,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subfactor::Redundancy => "Redundancy",
            Subfactor::Separation => "Separation",
            Subfactor::Understanding => "Understanding",
            Subfactor::Analysis => "Analysis",
            Subfactor::Mmi => "MMI",
            Subfactor::SafetyCulture => "SafetyCulture",
            Subfactor::Control => "Control",
            Subfactor::Tests => "Tests",
        }
    }
}

impl fmt::Display for Subfactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subfactor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "red" | "redundancy" | "redundancydiversity" | "redundancyanddiversity" => Subfactor::Redundancy,
            "sep" | "separation" => Subfactor::Separation,
            "und" | "understanding" => Subfactor::Understanding,
            "ana" | "analysis" => Subfactor::Analysis,
            "mmi" => Subfactor::Mmi,
            "sc" | "safetyculture" => Subfactor::SafetyCulture,
            "ctl" | "control" => Subfactor::Control,
            "tst" | "test" | "tests" => Subfactor::Tests,
            _ => return Err(format!("unknown subfactor `{s}`")),
        })
    }
}

/// Letter grade; `A` is the worst defended, `E` the best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Grade {
    A,
    #[serde(rename = "A+")]
    APlus,
    B,
    #[serde(rename = "B+")]
    BPlus,
    C,
    D,
    E,
}

impl Grade {
    /// All grades ordered from worst to best defended.
    pub const ALL: [Grade; 7] = [
        Grade::A,
        Grade::APlus,
        Grade::B,
        Grade::BPlus,
        Grade::C,
        Grade::D,
        Grade::E,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Grade::A => "A",
            Grade::APlus => "A+",
            Grade::B => "B",
            Grade::BPlus => "B+",
            Grade::C => "C",
            Grade::D => "D",
            Grade::E => "E",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Grade {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Grade::ALL
            .into_iter()
            .find(|g| g.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown grade `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TableKind {
    Hardware,
    Software,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::Hardware => "HARDWARE",
            TableKind::Software => "SOFTWARE",
        })
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hardware" => Ok(TableKind::Hardware),
            "software" => Ok(TableKind::Software),
            _ => Err(format!("unknown beta table `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreSheet {
    pub name: String,
    pub table: TableKind,
    pub grades: BTreeMap<Subfactor, Grade>,
}

/// One subfactor row of a beta estimation table. Plus grades are optional;
/// missing ones are interpolated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "A+", default, skip_serializing_if = "Option::is_none")]
    pub a_plus: Option<f64>,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "B+", default, skip_serializing_if = "Option::is_none")]
    pub b_plus: Option<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaTable {
    pub name: TableKind,
    pub denominator: f64,
    pub rows: BTreeMap<Subfactor, TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptRow {
    /// Parent node id to parent state label.
    #[serde(default)]
    pub given: BTreeMap<String, String>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BbnNode {
    pub id: String,
    pub states: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpt: Vec<CptRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BbnNetwork {
    pub name: String,
    /// Node whose state `fault_state` stands for "undetected faults exist".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_node: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_state: Option<String>,
    pub nodes: Vec<BbnNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default)]
    pub basic_events: Vec<BasicEvent>,
    #[serde(default)]
    pub gates: Vec<Gate>,
    #[serde(default)]
    pub fault_trees: Vec<FaultTree>,
    #[serde(default)]
    pub event_trees: Vec<EventTree>,
    #[serde(default)]
    pub component_groups: Vec<ComponentGroup>,
    #[serde(default)]
    pub score_sheets: Vec<ScoreSheet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta_tables: Vec<BetaTable>,
    #[serde(default)]
    pub bbn_networks: Vec<BbnNetwork>,
}

impl Default for Model {
    fn default() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            provenance: None,
            basic_events: Vec::new(),
            gates: Vec::new(),
            fault_trees: Vec::new(),
            event_trees: Vec::new(),
            component_groups: Vec::new(),
            score_sheets: Vec::new(),
            beta_tables: Vec::new(),
            bbn_networks: Vec::new(),
        }
    }
}

impl Model {
    pub fn basic_event(&self, id: &str) -> Option<&BasicEvent> {
        self.basic_events.iter().find(|e| e.id == id)
    }

    pub fn gate(&self, id: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.id == id)
    }

    pub fn fault_tree(&self, name: &str) -> Option<&FaultTree> {
        self.fault_trees.iter().find(|t| t.name == name)
    }

    pub fn event_tree(&self, name: &str) -> Option<&EventTree> {
        self.event_trees.iter().find(|t| t.name == name)
    }

    pub fn component_group(&self, name: &str) -> Option<&ComponentGroup> {
        self.component_groups.iter().find(|g| g.name == name)
    }

    pub fn score_sheet(&self, name: &str) -> Option<&ScoreSheet> {
        self.score_sheets.iter().find(|s| s.name == name)
    }

    pub fn network(&self, name: &str) -> Option<&BbnNetwork> {
        self.bbn_networks.iter().find(|n| n.name == name)
    }

    /// Beta table for `kind`: the model override if present, else the built-in one.
    pub fn beta_table(&self, kind: TableKind) -> BetaTable {
        self.beta_tables
            .iter()
            .find(|t| t.name == kind)
            .cloned()
            .unwrap_or_else(|| BetaTable::builtin(kind))
    }
}
