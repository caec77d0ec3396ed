//! Demo models and result tables compiled into the binary.

use std::path::Path;

use crate::diagnostic::Diagnostic;
use crate::model::Model;

use super::model_file::{load_model, load_model_str};

/// Bundled fixtures by name. Names ending in `.csv` are sequence tables.
pub const FIXTURES: &[(&str, &str)] = &[
    ("rts_demo", include_str!("../../fixtures/rts_demo.json")),
    ("esfas_demo", include_str!("../../fixtures/esfas_demo.json")),
    ("bp_ccf_case", include_str!("../../fixtures/bp_ccf_case.json")),
    ("bahamas_demo", include_str!("../../fixtures/bahamas_demo.json")),
    ("toy_pwr", include_str!("../../fixtures/toy_pwr.json")),
    ("int_trans_original.csv", include_str!("../../fixtures/int_trans_original.csv")),
    ("int_trans_improved.csv", include_str!("../../fixtures/int_trans_improved.csv")),
    ("int_sloca_original.csv", include_str!("../../fixtures/int_sloca_original.csv")),
    ("int_sloca_improved.csv", include_str!("../../fixtures/int_sloca_improved.csv")),
    ("int_mloca_original.csv", include_str!("../../fixtures/int_mloca_original.csv")),
    ("int_mloca_improved.csv", include_str!("../../fixtures/int_mloca_improved.csv")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Loads `arg` as a file path if it exists, else as a bundled fixture name.
pub fn resolve_model(arg: &str) -> Result<Model, Vec<Diagnostic>> {
    let path = Path::new(arg);
    if path.exists() {
        return load_model(path);
    }
    match fixture(arg) {
        Some(text) if !arg.ends_with(".csv") => load_model_str(text),
        _ => Err(vec![Diagnostic::error("io", arg, "no such file or bundled fixture")]),
    }
}

/// Text of `arg` read as a file path if it exists, else a bundled fixture.
pub fn resolve_text(arg: &str) -> Result<String, Diagnostic> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Diagnostic::error("io", arg, e.to_string()));
    }
    fixture(arg)
        .map(str::to_string)
        .ok_or_else(|| Diagnostic::error("io", arg, "no such file or bundled fixture"))
}
