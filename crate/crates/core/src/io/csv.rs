//! Heatmap CSV: header `x_m,y_m,assoc_prob`, one row per user in generation
//! order, every value with 9 significant digits.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::AssociationMap;

pub const CSV_HEADER: &str = "x_m,y_m,assoc_prob";

/// Fixed-point rendering with 9 significant digits. Zero prints as
/// `0.000000000`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{:.9}", v.abs());
    }
    // Let the formatter do the rounding, then read back the decimal exponent.
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (8 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn map_to_csv<T: Scalar>(map: &AssociationMap<T>) -> String {
    let mut out = String::with_capacity(32 * (map.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &map.points {
        out.push_str(&format_sig9(p.x.as_f64()));
        out.push(',');
        out.push_str(&format_sig9(p.y.as_f64()));
        out.push(',');
        out.push_str(&format_sig9(p.assoc_prob.as_f64()));
        out.push('\n');
    }
    out
}

pub fn emit_map_csv<T: Scalar>(map: &AssociationMap<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, map_to_csv(map)).map_err(|e| Error::io(path, e))
}
