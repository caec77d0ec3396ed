//! CSV reports: cut sets, sequences, comparisons, score sheets.
//!
//! Data rows are plain CSV; trailing summary lines start with `#` so the
//! readers here (and most CSV tools) can skip them.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::bbn::{Marginal, SfpResult};
use crate::ccf::{BetaBreakdown, BetaEstimate};
use crate::et::{Comparison, ComparisonRow, EtSolution, SequenceResult, SUCCESS_BRANCH_NOTE};
use crate::ft::{Method, QuantResult};
use crate::model::{Grade, Subfactor};

use super::format::{pct2, sci, sig6};

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

/// `rank,probability,percent,events` rows followed by summary lines.
/// `methods` lists the figures to print; the first one is the headline.
pub fn cut_set_csv(q: &QuantResult, methods: &[Method]) -> String {
    let mut w = writer();
    w.write_record(["rank", "probability", "percent", "events"]).unwrap();
    for (i, (cs, pct)) in q.cut_sets.iter().zip(&q.contributions).enumerate() {
        w.write_record([(i + 1).to_string(), sci(cs.probability), pct2(*pct), cs.events.join(";")])
            .unwrap();
    }
    let mut out = finish(w);
    let figure = |m: Method| match m {
        Method::Sum => Some(q.rare_event_sum),
        Method::Mcub => Some(q.mcub),
        Method::Exact => q.exact,
    };
    out.push_str(&format!("# top={}\n", q.top));
    out.push_str(&format!("# cut_sets={}\n", q.cut_sets.len()));
    for m in methods {
        if let Some(v) = figure(*m) {
            out.push_str(&format!("# {m}={}\n", sci(v)));
        }
    }
    if !methods.contains(&Method::Mcub) {
        out.push_str(&format!("# mcub={}\n", sci(q.mcub)));
    }
    out.push_str(&format!("# truncation={}\n", sci(q.truncation)));
    out.push_str(&format!("# truncated_mass_bound={}\n", sci(q.truncated_mass_bound)));
    if let Some(v) = methods.first().and_then(|m| figure(*m)) {
        out.push_str(&format!("# headline={} ({})\n", sci(v), methods[0]));
    }
    out
}

/// `sequence,end_state,frequency,cut_sets` rows followed by summary lines.
pub fn sequence_csv(sol: &EtSolution) -> String {
    let mut w = writer();
    w.write_record(["sequence", "end_state", "frequency", "cut_sets"]).unwrap();
    for s in &sol.sequences {
        w.write_record([s.id.clone(), s.end_state.clone(), sci(s.frequency), s.cut_set_count.to_string()])
            .unwrap();
    }
    let mut out = finish(w);
    out.push_str(&format!("# tree={}\n", sol.tree));
    out.push_str(&format!("# initiating_event={} frequency={}\n", sol.initiating_event, sci(sol.ie_frequency)));
    for (label, p) in &sol.branch_probabilities {
        out.push_str(&format!("# branch {label} failure={}\n", sci(*p)));
    }
    out.push_str(&format!("# truncation={}\n", sci(sol.truncation)));
    out.push_str(&format!("# total={}\n", sci(sol.total_frequency())));
    out.push_str(&format!("# note: {SUCCESS_BRANCH_NOTE}\n"));
    out
}

#[derive(Debug, Deserialize)]
struct SequenceRecord {
    sequence: String,
    #[serde(default)]
    end_state: String,
    frequency: f64,
    #[serde(default)]
    cut_sets: u64,
}

pub fn read_sequence_csv(text: &str) -> Result<Vec<SequenceResult>, String> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in r.deserialize::<SequenceRecord>().enumerate() {
        let rec = rec.map_err(|e| format!("record {}: {e}", i + 1))?;
        if !(rec.frequency.is_finite() && rec.frequency >= 0.0) {
            return Err(format!("sequence `{}`: frequency {} is not a non-negative number", rec.sequence, rec.frequency));
        }
        out.push(SequenceResult {
            id: rec.sequence,
            end_state: rec.end_state,
            frequency: rec.frequency,
            cut_set_count: rec.cut_sets,
        });
    }
    Ok(out)
}

fn comparison_record(r: &ComparisonRow) -> [String; 6] {
    let opt = |x: Option<f64>| x.map(sci).unwrap_or_default();
    let n = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    let delta = match (r.baseline_cdf, r.improved_cdf, r.delta_pct) {
        (Some(_), Some(_), Some(d)) => pct2(d),
        (Some(_), Some(_), None) => "NA".to_string(),
        _ => String::new(),
    };
    [
        r.sequence.clone(),
        opt(r.baseline_cdf),
        opt(r.improved_cdf),
        delta,
        n(r.baseline_cutsets),
        n(r.improved_cutsets),
    ]
}

/// Comparison table, one row per sequence then a `Total` row. A delta of
/// `NA` marks a zero baseline; an empty cell marks a side with no such
/// sequence.
pub fn comparison_csv(c: &Comparison) -> String {
    let mut w = writer();
    w.write_record(["sequence", "baseline_cdf", "improved_cdf", "delta_pct", "baseline_cutsets", "improved_cutsets"])
        .unwrap();
    for r in c.rows.iter().chain([&c.total]) {
        w.write_record(comparison_record(r)).unwrap();
    }
    finish(w)
}

/// Reads `subfactor,grade` rows; a header row and `#` comments are allowed.
pub fn read_score_csv(text: &str) -> Result<BTreeMap<Subfactor, Grade>, String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut grades = BTreeMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != 2 {
            return Err(format!("line {}: expected `subfactor,grade`", i + 1));
        }
        if i == 0 && rec[0].eq_ignore_ascii_case("subfactor") {
            continue;
        }
        insert_grade(&mut grades, &rec[0], &rec[1])?;
    }
    Ok(grades)
}

/// Reads `Sub=Grade,Sub=Grade,...`.
pub fn parse_inline_scores(text: &str) -> Result<BTreeMap<Subfactor, Grade>, String> {
    let mut grades = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (sub, grade) = item
            .split_once('=')
            .ok_or_else(|| format!("`{item}` is not of the form Subfactor=Grade"))?;
        insert_grade(&mut grades, sub.trim(), grade.trim())?;
    }
    Ok(grades)
}

fn insert_grade(grades: &mut BTreeMap<Subfactor, Grade>, sub: &str, grade: &str) -> Result<(), String> {
    let s: Subfactor = sub.parse()?;
    let g: Grade = grade.parse()?;
    if grades.insert(s, g).is_some() {
        return Err(format!("subfactor {sub} graded twice"));
    }
    Ok(())
}

pub fn beta_report(est: &BetaEstimate) -> String {
    let mut w = writer();
    w.write_record(["subfactor", "grade", "score"]).unwrap();
    for (sub, grade, score) in &est.scores {
        w.write_record([sub.name().to_string(), grade.label().to_string(), score.to_string()]).unwrap();
    }
    let mut out = finish(w);
    out.push_str(&format!("# total={}\n", est.total));
    out.push_str(&format!("# denominator={}\n", est.denominator));
    out.push_str(&format!("beta={}\n", sig6(est.beta)));
    out
}

pub fn marginal_csv(m: &Marginal) -> String {
    let mut w = writer();
    w.write_record(["node", "state", "probability"]).unwrap();
    for (s, p) in m.states.iter().zip(&m.probs) {
        w.write_record([m.node.clone(), s.clone(), format!("{p:.12}")]).unwrap();
    }
    finish(w)
}

pub fn breakdown_report(b: &BetaBreakdown) -> String {
    let mut w = writer();
    w.write_record(["quantity", "beta", "probability"]).unwrap();
    w.write_record(["total".to_string(), sig6(b.beta_total), sci(b.q_total)]).unwrap();
    w.write_record(["independent".to_string(), String::new(), sci(b.q_independent)]).unwrap();
    for (id, beta) in &b.beta_per_cccg {
        w.write_record([format!("CCCG {id}"), sig6(*beta), sci(b.p_per_cccg[id])]).unwrap();
    }
    finish(w)
}

pub fn sfp_report(r: &SfpResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("network={}\n", r.network));
    out.push_str(&format!("p_faults={}\n", sci(r.p_faults)));
    out.push_str(&format!("phi={}\n", sci(r.calibration.phi)));
    out.push_str(&format!("sfp={}\n", sci(r.sfp)));
    if let Some(b) = &r.breakdown {
        out.push_str(&breakdown_report(b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_csv_reads_back_with_comments() {
        let text = "# header note\nsequence,end_state,frequency,cut_sets\nS1,CD,5.388E-07,51\n# total=1\n";
        let seqs = read_sequence_csv(text).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].frequency, 5.388e-7);
        assert_eq!(seqs[0].cut_set_count, 51);
    }

    #[test]
    fn scores_inline_and_csv_agree() {
        let inline = parse_inline_scores("Redundancy=A+, Separation=B").unwrap();
        let csv = read_score_csv("subfactor,grade\nRedundancy,A+\nSeparation,B\n").unwrap();
        assert_eq!(inline, csv);
        assert!(parse_inline_scores("Redundancy=Q").is_err());
        assert!(parse_inline_scores("Redundancy=A,Redundancy=B").is_err());
    }

    #[test]
    fn flagged_and_missing_rows() {
        let row = ComparisonRow {
            sequence: "S".into(),
            baseline_cdf: Some(0.0),
            improved_cdf: Some(1e-9),
            delta_pct: None,
            baseline_cutsets: Some(0),
            improved_cutsets: Some(1),
        };
        assert_eq!(comparison_record(&row)[3], "NA");
        let missing = ComparisonRow { improved_cdf: None, improved_cutsets: None, ..row };
        assert_eq!(comparison_record(&missing)[2], "");
        assert_eq!(comparison_record(&missing)[3], "");
    }
}
