//! Plain-text run summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::ValidatedScenario;
use crate::optimizer::{energy_saving_ratio, OptimizationOutcome, Variable};
use crate::scenario::{AssociationMap, ModeComparison, EDGE_BAND_FRACTION};

/// Conventional micro BS power the energy saving is quoted against.
pub const BASELINE_CONVENTIONAL_POWER_W: f64 = 6.0;

#[derive(Debug, Default)]
pub struct Report<'a> {
    pub scenarios: Vec<(&'a str, &'a ValidatedScenario<f64>)>,
    pub maps: Vec<(&'a str, &'a AssociationMap<f64>)>,
    pub comparison: Option<&'a ModeComparison<f64>>,
    pub optimization: Option<&'a OptimizationOutcome<f64>>,
}

fn write_scenario(out: &mut String, label: &str, s: &ValidatedScenario<f64>) {
    let c = s.config();
    let p = |p: &crate::Point3<f64>| format!("({}, {}, {})", p.x, p.y, p.z);
    let _ = writeln!(out, "[scenario: {label}]");
    let _ = writeln!(out, "  fingerprint            {}", s.fingerprint());
    let _ = writeln!(out, "  mode                   {}", c.mode().as_str());
    let _ = writeln!(
        out,
        "  carrier                {} GHz (wavelength {:.6e} m)",
        c.carrier.frequency_hz / 1e9,
        s.wavelength_m()
    );
    let _ = writeln!(out, "  micro BS position      {} m", p(&c.micro.position));
    let _ = writeln!(out, "  micro BS power         {} W", c.micro.transmit_power_w);
    let _ = writeln!(out, "  micro path loss exp.   {}", c.micro.path_loss_exponent);
    let _ = writeln!(out, "  macro BS position      {} m", p(&c.macro_bs.position));
    let _ = writeln!(out, "  macro BS power         {} W", c.macro_bs.transmit_power_w);
    let _ = writeln!(out, "  macro path loss exp.   {}", c.macro_bs.path_loss_exponent);
    if let Some(irs) = &c.irs {
        let _ = writeln!(out, "  IRS position           {} m", p(&irs.position));
        let _ = writeln!(out, "  IRS elements M, N      {}, {}", irs.elements_tx, irs.elements_rx);
        let _ = writeln!(
            out,
            "  element size dx, dy    {:.6e} m, {:.6e} m",
            irs.element_len_x_m, irs.element_len_y_m
        );
        let _ = writeln!(
            out,
            "  gains Gt, Gr           {} dB, {} dB",
            irs.tx_gain_db, irs.rx_gain_db
        );
        let _ = writeln!(
            out,
            "  angles theta_t, theta_r {} deg, {} deg",
            irs.theta_t_deg, irs.theta_r_deg
        );
        let _ = writeln!(out, "  reflection coeff. A    {}", irs.reflection_coeff);
        if let Some(d1) = s.feed_distance_m() {
            let _ = writeln!(out, "  BS-to-IRS distance d1  {d1:.6} m");
        }
    }
    let _ = writeln!(
        out,
        "  densities micro, macro {:.6e}, {:.6e} per m^2 (ratio {})",
        c.densities.micro_density_per_m2,
        c.densities.macro_density_per_m2,
        s.density_ratio()
    );
    let _ = writeln!(
        out,
        "  cell                   center ({}, {}) m, radius {} m",
        c.cell_center_xy.0, c.cell_center_xy.1, c.cell_radius_m
    );
    let _ = writeln!(out, "  user height            {} m", c.user_height_m);
    let _ = writeln!(out, "  fading                 {:?}", c.fading_mode);
}

fn write_map(out: &mut String, label: &str, m: &AssociationMap<f64>) {
    let _ = writeln!(out, "[map: {label}] mode {}, {} points", m.mode.as_str(), m.points.len());
    let _ = writeln!(out, "  max       {:.9}", m.stats.max);
    let _ = writeln!(out, "  min       {:.9}", m.stats.min);
    let _ = writeln!(out, "  mean      {:.9}", m.stats.mean);
    match m.stats.edge_min {
        Some(e) => {
            let _ = writeln!(out, "  edge_min  {e:.9} ({} edge points)", m.stats.edge_points);
        }
        None => {
            let _ = writeln!(out, "  edge_min  n/a (no points in the edge band)");
        }
    }
}

/// Renders the report text; errors when there is nothing to report.
pub fn render_summary(r: &Report<'_>) -> Result<String> {
    if r.maps.is_empty() && r.comparison.is_none() && r.optimization.is_none() {
        return Err(Error::EmptyReport);
    }
    let mut out = String::new();
    let _ = writeln!(out, "irs-hetnet {} run summary", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out);

    let _ = writeln!(out, "[assumptions]");
    for (label, s) in &r.scenarios {
        let c = s.config();
        let m = &c.macro_bs.position;
        let _ = writeln!(
            out,
            "  {label}: macro BS at ({}, {}, {}) m, user height {} m, macro link uses the \
             direct-path model with exponent {}",
            m.x, m.y, m.z, c.user_height_m, c.macro_bs.path_loss_exponent
        );
    }
    let _ = writeln!(
        out,
        "  cell edge band: horizontal distance >= {EDGE_BAND_FRACTION} x cell radius from the \
         serving node (micro BS, or the IRS when present)"
    );
    let _ = writeln!(
        out,
        "  deterministic fading uses h = 1; Monte Carlo averages the association probability \
         over draws; the IRS path is not faded"
    );
    let _ = writeln!(out);

    for (label, s) in &r.scenarios {
        write_scenario(&mut out, label, s);
        let _ = writeln!(out);
    }
    for (label, m) in &r.maps {
        write_map(&mut out, label, m);
        let _ = writeln!(out);
    }

    if let Some(cmp) = r.comparison {
        write_map(&mut out, "conventional", &cmp.conventional);
        let _ = writeln!(out);
        write_map(&mut out, "irs_assisted", &cmp.irs);
        let _ = writeln!(out);
        let d = &cmp.delta_stats;
        let _ = writeln!(out, "[delta: irs_assisted - conventional]");
        let _ = writeln!(out, "  max       {:+.9}", d.max);
        let _ = writeln!(out, "  min       {:+.9}", d.min);
        let _ = writeln!(out, "  mean      {:+.9}", d.mean);
        match d.edge_min_delta {
            Some(e) => {
                let verdict = if e > 0.0 {
                    "IRS raises the cell-edge association"
                } else if e < 0.0 {
                    "IRS lowers the cell-edge association"
                } else {
                    "no change at the cell edge"
                };
                let _ = writeln!(out, "  edge_min  {e:+.9} ({verdict})");
            }
            None => {
                let _ = writeln!(out, "  edge_min  n/a");
            }
        }
        let _ = writeln!(out);
    }

    if let Some(o) = r.optimization {
        let _ = writeln!(out, "[optimization]");
        match o.variable {
            Variable::TransmitPowerW => {
                let _ = writeln!(out, "  variable          micro transmit power");
                let _ = writeln!(out, "  optimum           {:.6} W", o.optimum);
                let _ = writeln!(
                    out,
                    "  final bracket     [{:.6}, {:.6}] W",
                    o.bracket.0, o.bracket.1
                );
            }
            Variable::ElementCount => {
                let _ = writeln!(out, "  variable          IRS elements (M = N)");
                let _ = writeln!(out, "  optimum           {}", o.optimum);
                let _ = writeln!(out, "  search range      [{}, {}]", o.bracket.0, o.bracket.1);
            }
        }
        let _ = writeln!(out, "  achieved edge_min {:.9}", o.achieved_edge_min);
        let _ = writeln!(out, "  iterations        {}", o.iterations);
        if o.variable == Variable::TransmitPowerW {
            match energy_saving_ratio(BASELINE_CONVENTIONAL_POWER_W, o.optimum) {
                Ok(s) => {
                    let _ = writeln!(
                        out,
                        "  energy saving     {:.4} ({:.2}%) vs {} W baseline (transmit power only)",
                        s,
                        100.0 * s,
                        BASELINE_CONVENTIONAL_POWER_W
                    );
                }
                Err(_) => {
                    let _ = writeln!(
                        out,
                        "  energy saving     none: optimum exceeds the {} W baseline",
                        BASELINE_CONVENTIONAL_POWER_W
                    );
                }
            }
        }
    }
    Ok(out)
}

pub fn emit_summary(r: &Report<'_>, path: impl AsRef<Path>) -> Result<()> {
    let text = render_summary(r)?;
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
