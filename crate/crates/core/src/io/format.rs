//! Locale-independent number formatting for reports.

/// Scientific notation with 4 significant digits: `1.270E-6`, `2.000E+0`.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.3E}");
    match s.split_once('E') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}E+{exp}"),
        _ => s,
    }
}

/// Six significant digits in fixed notation: `0.300000`, `0.0454314`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.6}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Percent with two decimals; negative zero prints as `0.00`.
pub fn pct2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" { "0.00".to_string() } else { s }
}
