//! Partial beta-factor (additive) estimation from qualitative score sheets.

use std::collections::BTreeMap;

use crate::model::{BetaTable, Grade, ScoreSheet, Subfactor, TableKind, TableRow};

use super::CcfError;

const fn row(a: f64, a_plus: Option<f64>, b: f64, b_plus: Option<f64>, c: f64, d: f64, e: f64) -> TableRow {
    TableRow { a, a_plus, b, b_plus, c, d, e }
}

const HARDWARE_ROWS: [(Subfactor, TableRow); 8] = [
    (Subfactor::Redundancy, row(1800.0, Some(882.0), 433.0, Some(212.0), 104.0, 25.0, 6.0)),
    (Subfactor::Separation, row(2400.0, None, 577.0, None, 139.0, 33.0, 8.0)),
    (Subfactor::Understanding, row(1800.0, None, 433.0, None, 104.0, 25.0, 6.0)),
    (Subfactor::Analysis, row(1800.0, None, 433.0, None, 104.0, 25.0, 6.0)),
    (Subfactor::Mmi, row(3000.0, None, 721.0, None, 173.0, 42.0, 10.0)),
    (Subfactor::SafetyCulture, row(1500.0, None, 360.0, None, 87.0, 21.0, 5.0)),
    (Subfactor::Control, row(1800.0, None, 433.0, None, 104.0, 25.0, 6.0)),
    (Subfactor::Tests, row(1200.0, None, 288.0, None, 69.0, 17.0, 4.0)),
];

const SOFTWARE_ROWS: [(Subfactor, TableRow); 8] = [
    (Subfactor::Redundancy, row(23976.0, Some(10112.0), 4265.0, Some(1799.0), 759.0, 135.0, 24.0)),
    (Subfactor::Separation, row(23976.0, None, 4265.0, None, 759.0, 135.0, 24.0)),
    (Subfactor::Understanding, row(7992.0, None, 1422.0, None, 253.0, 45.0, 8.0)),
    (Subfactor::Analysis, row(7992.0, None, 1422.0, None, 253.0, 45.0, 8.0)),
    (Subfactor::Mmi, row(11988.0, None, 2132.0, None, 379.0, 67.0, 12.0)),
    (Subfactor::SafetyCulture, row(6993.0, None, 1244.0, None, 221.0, 39.0, 7.0)),
    (Subfactor::Control, row(4995.0, None, 888.0, None, 158.0, 28.0, 5.0)),
    (Subfactor::Tests, row(11988.0, None, 2132.0, None, 379.0, 67.0, 12.0)),
];

pub const HARDWARE_DENOMINATOR: f64 = 51_000.0;
pub const SOFTWARE_DENOMINATOR: f64 = 100_000.0;

impl BetaTable {
    /// The built-in hardware (`d = 51000`) or software (`d = 100000`) table.
    pub fn builtin(kind: TableKind) -> Self {
        let (rows, denominator) = match kind {
            TableKind::Hardware => (&HARDWARE_ROWS, HARDWARE_DENOMINATOR),
            TableKind::Software => (&SOFTWARE_ROWS, SOFTWARE_DENOMINATOR),
        };
        BetaTable {
            name: kind,
            denominator,
            rows: rows.iter().copied().collect::<BTreeMap<_, _>>(),
        }
    }

    pub fn hardware() -> Self {
        Self::builtin(TableKind::Hardware)
    }

    pub fn software() -> Self {
        Self::builtin(TableKind::Software)
    }
}

/// Half-step interpolation for an untabulated plus grade.
///
/// Each row is a geometric progression from `A` down to `E` in four full
/// steps, so the half steps `A+` and `B+` sit at exponents 1/8 and 3/8 of
/// the way from `A` to `E`. The result is rounded to the nearest integer.
pub fn interpolate_plus(row: &TableRow, grade: Grade) -> Option<f64> {
    let eighths = match grade {
        Grade::APlus => 1.0,
        Grade::BPlus => 3.0,
        _ => return None,
    };
    Some((row.a * (row.e / row.a).powf(eighths / 8.0)).round())
}

pub fn row_score(row: &TableRow, grade: Grade) -> f64 {
    match grade {
        Grade::A => row.a,
        Grade::B => row.b,
        Grade::C => row.c,
        Grade::D => row.d,
        Grade::E => row.e,
        Grade::APlus => row.a_plus.unwrap_or_else(|| interpolate_plus(row, grade).unwrap()),
        Grade::BPlus => row.b_plus.unwrap_or_else(|| interpolate_plus(row, grade).unwrap()),
    }
}

/// Score for one subfactor grade: the tabulated cell, or the interpolated
/// half step for an untabulated `A+`/`B+`.
pub fn lookup_score(table: &BetaTable, subfactor: Subfactor, grade: Grade) -> Result<f64, CcfError> {
    table
        .rows
        .get(&subfactor)
        .map(|row| row_score(row, grade))
        .ok_or(CcfError::UnknownSubfactor { table: table.name, subfactor })
}

/// Per-subfactor scores plus the resulting beta.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaEstimate {
    pub scores: Vec<(Subfactor, Grade, f64)>,
    pub total: f64,
    pub denominator: f64,
    pub beta: f64,
}

pub fn score_sheet(table: &BetaTable, sheet: &ScoreSheet) -> Result<BetaEstimate, CcfError> {
    let mut scores = Vec::with_capacity(Subfactor::ALL.len());
    for sub in Subfactor::ALL {
        let grade = *sheet
            .grades
            .get(&sub)
            .ok_or_else(|| CcfError::MissingGrade { sheet: sheet.name.clone(), subfactor: sub })?;
        scores.push((sub, grade, lookup_score(table, sub, grade)?));
    }
    let total: f64 = scores.iter().map(|s| s.2).sum();
    Ok(BetaEstimate {
        scores,
        total,
        denominator: table.denominator,
        beta: total / table.denominator,
    })
}

/// `beta = (sum of subfactor scores) / d`, full precision.
pub fn estimate_beta(table: &BetaTable, sheet: &ScoreSheet) -> Result<f64, CcfError> {
    score_sheet(table, sheet).map(|e| e.beta)
}
