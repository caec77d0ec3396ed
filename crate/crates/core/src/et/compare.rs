//! Sequence-by-sequence comparison of two quantified models.

use std::collections::BTreeMap;

use super::SequenceResult;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub sequence: String,
    pub baseline_cdf: Option<f64>,
    pub improved_cdf: Option<f64>,
    /// `None` when a side is absent, or the baseline is zero and the improved
    /// value is not.
    pub delta_pct: Option<f64>,
    pub baseline_cutsets: Option<u64>,
    pub improved_cutsets: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Ordered by sequence id.
    pub rows: Vec<ComparisonRow>,
    pub total: ComparisonRow,
}

/// `(improved - baseline) / baseline * 100`; negative means a reduction.
pub fn delta_percent(baseline: f64, improved: f64) -> Option<f64> {
    if baseline == 0.0 {
        return (improved == 0.0).then_some(0.0);
    }
    Some((improved - baseline) / baseline * 100.0)
}

fn row(sequence: String, b: Side, i: Side) -> ComparisonRow {
    let delta_pct = match (b, i) {
        (Some((b, _)), Some((i, _))) => delta_percent(b, i),
        _ => None,
    };
    ComparisonRow {
        sequence,
        baseline_cdf: b.map(|x| x.0),
        improved_cdf: i.map(|x| x.0),
        delta_pct,
        baseline_cutsets: b.map(|x| x.1),
        improved_cutsets: i.map(|x| x.1),
    }
}

type Side = Option<(f64, u64)>;

/// Outer join of the two result lists on sequence id, plus a totals row.
pub fn compare_models(baseline: &[SequenceResult], improved: &[SequenceResult]) -> Comparison {
    let mut joined: BTreeMap<&str, (Side, Side)> = BTreeMap::new();
    for s in baseline {
        joined.entry(&s.id).or_default().0 = Some((s.frequency, s.cut_set_count));
    }
    for s in improved {
        joined.entry(&s.id).or_default().1 = Some((s.frequency, s.cut_set_count));
    }
    let rows: Vec<ComparisonRow> = joined
        .into_iter()
        .map(|(id, (b, i))| row(id.to_string(), b, i))
        .collect();
    let sum = |side: &[SequenceResult]| {
        (side.iter().map(|s| s.frequency).sum::<f64>(), side.iter().map(|s| s.cut_set_count).sum::<u64>())
    };
    let total = row("Total".to_string(), Some(sum(baseline)), Some(sum(improved)));
    Comparison { rows, total }
}
