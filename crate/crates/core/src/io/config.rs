//! JSON scenario files.
//!
//! Every key is optional. Absent values come from the default table for the
//! file's `mode` and `carrier_ghz` (28 GHz when omitted). Unknown keys are
//! rejected at every level.
//!
//! ```json
//! {
//!   "mode": "irs_assisted",
//!   "carrier_ghz": 90,
//!   "micro": { "transmit_power_w": 2 },
//!   "irs": { "elements_tx": 256, "elements_rx": 256 },
//!   "fading_mode": { "monte_carlo": { "samples": 1000, "seed": 7 } }
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::model::{default_scenario, validate, FadingMode, Mode, Point3, ScenarioConfig};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier: Option<CarrierSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micro: Option<TransmitterSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub macro_bs: Option<TransmitterSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irs: Option<IrsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<DensitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell_center_xy: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell_radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user_height_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fading_mode: Option<FadingMode>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierSection {
    pub frequency_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmitterSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Point3<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transmit_power_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_loss_exponent: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Point3<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements_tx: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements_rx: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_len_x_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_len_y_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_gain_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_gain_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_t_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_r_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflection_coeff: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micro_density_per_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub macro_density_per_m2: Option<f64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl ConfigFile {
    /// Fills absent fields from the defaults. Does not validate.
    pub fn resolve(&self) -> Result<ScenarioConfig<f64>> {
        let mode = self.mode.unwrap_or(if self.irs.is_some() {
            Mode::IrsAssisted
        } else {
            Mode::Conventional
        });
        if mode == Mode::Conventional && self.irs.is_some() {
            return Err(Error::InvalidConfig(vec![Violation::new(
                "irs",
                "IRS section given for a conventional scenario",
            )]));
        }
        let mut c = default_scenario::<f64>(mode, self.carrier_ghz.unwrap_or(28.0))?;

        if let Some(f) = self.carrier.as_ref().and_then(|s| s.frequency_hz) {
            c.set_carrier_hz(f);
        }
        if let Some(m) = &self.micro {
            set(&mut c.micro.position, m.position);
            set(&mut c.micro.transmit_power_w, m.transmit_power_w);
            set(&mut c.micro.path_loss_exponent, m.path_loss_exponent);
        }
        if let Some(m) = &self.macro_bs {
            set(&mut c.macro_bs.position, m.position);
            set(&mut c.macro_bs.transmit_power_w, m.transmit_power_w);
            set(&mut c.macro_bs.path_loss_exponent, m.path_loss_exponent);
        }
        if let (Some(s), Some(irs)) = (&self.irs, c.irs.as_mut()) {
            set(&mut irs.position, s.position);
            set(&mut irs.elements_tx, s.elements_tx);
            set(&mut irs.elements_rx, s.elements_rx);
            set(&mut irs.element_len_x_m, s.element_len_x_m);
            set(&mut irs.element_len_y_m, s.element_len_y_m);
            set(&mut irs.tx_gain_db, s.tx_gain_db);
            set(&mut irs.rx_gain_db, s.rx_gain_db);
            set(&mut irs.theta_t_deg, s.theta_t_deg);
            set(&mut irs.theta_r_deg, s.theta_r_deg);
            set(&mut irs.reflection_coeff, s.reflection_coeff);
        }
        if let Some(d) = &self.densities {
            set(&mut c.densities.micro_density_per_m2, d.micro_density_per_m2);
            set(&mut c.densities.macro_density_per_m2, d.macro_density_per_m2);
        }
        if let Some([x, y]) = self.cell_center_xy {
            c.cell_center_xy = (x, y);
        }
        set(&mut c.cell_radius_m, self.cell_radius_m);
        set(&mut c.user_height_m, self.user_height_m);
        set(&mut c.fading_mode, self.fading_mode);
        Ok(c)
    }

    /// A file that spells out every field of `c`.
    pub fn from_config(c: &ScenarioConfig<f64>) -> Self {
        let tx = |position, p, a| TransmitterSection {
            position: Some(position),
            transmit_power_w: Some(p),
            path_loss_exponent: Some(a),
        };
        ConfigFile {
            mode: Some(c.mode()),
            carrier_ghz: None,
            carrier: Some(CarrierSection {
                frequency_hz: Some(c.carrier.frequency_hz),
            }),
            micro: Some(tx(
                c.micro.position,
                c.micro.transmit_power_w,
                c.micro.path_loss_exponent,
            )),
            macro_bs: Some(tx(
                c.macro_bs.position,
                c.macro_bs.transmit_power_w,
                c.macro_bs.path_loss_exponent,
            )),
            irs: c.irs.map(|i| IrsSection {
                position: Some(i.position),
                elements_tx: Some(i.elements_tx),
                elements_rx: Some(i.elements_rx),
                element_len_x_m: Some(i.element_len_x_m),
                element_len_y_m: Some(i.element_len_y_m),
                tx_gain_db: Some(i.tx_gain_db),
                rx_gain_db: Some(i.rx_gain_db),
                theta_t_deg: Some(i.theta_t_deg),
                theta_r_deg: Some(i.theta_r_deg),
                reflection_coeff: Some(i.reflection_coeff),
            }),
            densities: Some(DensitySection {
                micro_density_per_m2: Some(c.densities.micro_density_per_m2),
                macro_density_per_m2: Some(c.densities.macro_density_per_m2),
            }),
            cell_center_xy: Some([c.cell_center_xy.0, c.cell_center_xy.1]),
            cell_radius_m: Some(c.cell_radius_m),
            user_height_m: Some(c.user_height_m),
            fading_mode: Some(c.fading_mode),
        }
    }
}

fn parse_error(source: &str, e: serde_json::Error) -> Error {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return Error::UnknownKey(rest[..end].to_owned());
        }
    }
    Error::Parse {
        location: format!("{source}:{}:{}", e.line(), e.column()),
        message: msg,
    }
}

/// Parses and validates a JSON scenario held in memory.
pub fn parse_config(text: &str, source: &str) -> Result<ScenarioConfig<f64>> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| parse_error(source, e))?;
    let config = file.resolve()?;
    validate(config.clone())?;
    Ok(config)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

/// Pretty JSON with every field explicit; loads back to an identical config.
pub fn config_to_json(c: &ScenarioConfig<f64>) -> String {
    let mut s = serde_json::to_string_pretty(&ConfigFile::from_config(c))
        .expect("config file serializes");
    s.push('\n');
    s
}

pub fn emit_config(c: &ScenarioConfig<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, config_to_json(c)).map_err(|e| Error::io(path, e))
}
