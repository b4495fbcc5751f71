//! Scenario parameters for the two-tier network and their validation.
//!
//! A [`ScenarioConfig`] mirrors the simulation parameter table: one macro
//! base station overlaying a micro cell, optionally served through an IRS.
//! [`validate`] checks every invariant and precomputes the derived values
//! (wavelength, linear antenna gains, scattering gain, BS-to-IRS distance)
//! so evaluators never re-derive them per user.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result, Violation};
use crate::propagation::{distance, scattering_gain, MIN_DISTANCE_M};
use crate::scalar::{Scalar, SPEED_OF_LIGHT_M_S};

/// Carriers the default tables are defined for, in GHz.
pub const SUPPORTED_CARRIERS_GHZ: [f64; 4] = [28.0, 50.0, 70.0, 90.0];

/// Default UE antenna height, m.
pub const DEFAULT_USER_HEIGHT_M: f64 = 1.5;
/// Default macro BS site: macro-cell center on a 25 m mast.
pub const DEFAULT_MACRO_POSITION: [f64; 3] = [500.0, 500.0, 25.0];

/// A position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Distance in the horizontal (x, y) plane.
    pub fn horizontal_distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn cast<U: Scalar>(&self) -> Point3<U> {
        Point3::new(cast(self.x), cast(self.y), cast(self.z))
    }

    fn from_array(a: [f64; 3]) -> Self {
        Self::new(T::lit(a[0]), T::lit(a[1]), T::lit(a[2]))
    }
}

fn cast<T: Scalar, U: Scalar>(v: T) -> U {
    U::lit(v.as_f64())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierSpec<T> {
    pub frequency_hz: T,
}

impl<T: Scalar> CarrierSpec<T> {
    pub fn from_ghz(ghz: f64) -> Self {
        Self {
            frequency_hz: T::lit(ghz * 1e9),
        }
    }

    pub fn wavelength_m(&self) -> T {
        T::lit(SPEED_OF_LIGHT_M_S) / self.frequency_hz
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroBsConfig<T> {
    pub position: Point3<T>,
    pub transmit_power_w: T,
    pub path_loss_exponent: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroBsConfig<T> {
    pub position: Point3<T>,
    pub transmit_power_w: T,
    pub path_loss_exponent: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsConfig<T> {
    pub position: Point3<T>,
    /// M
    pub elements_tx: u32,
    /// N
    pub elements_rx: u32,
    pub element_len_x_m: T,
    pub element_len_y_m: T,
    pub tx_gain_db: T,
    pub rx_gain_db: T,
    pub theta_t_deg: T,
    pub theta_r_deg: T,
    pub reflection_coeff: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierDensities<T> {
    pub micro_density_per_m2: T,
    pub macro_density_per_m2: T,
}

impl<T: Scalar> TierDensities<T> {
    /// `lambda_macro / lambda_micro`.
    pub fn ratio(&self) -> T {
        self.macro_density_per_m2 / self.micro_density_per_m2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Conventional,
    IrsAssisted,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Conventional => "conventional",
            Mode::IrsAssisted => "irs_assisted",
        }
    }
}

/// How the Rayleigh power coefficient `h` is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingMode {
    /// `h = 1`, the mean of Exp(1).
    #[default]
    Deterministic,
    MonteCarlo { samples: u32, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig<T> {
    pub carrier: CarrierSpec<T>,
    pub micro: MicroBsConfig<T>,
    pub macro_bs: MacroBsConfig<T>,
    /// Present exactly when the micro cell is served through an IRS.
    pub irs: Option<IrsConfig<T>>,
    pub densities: TierDensities<T>,
    pub cell_center_xy: (T, T),
    pub cell_radius_m: T,
    pub user_height_m: T,
    pub fading_mode: FadingMode,
}

impl<T: Scalar> ScenarioConfig<T> {
    pub fn mode(&self) -> Mode {
        if self.irs.is_some() {
            Mode::IrsAssisted
        } else {
            Mode::Conventional
        }
    }

    /// Changes the carrier and resets IRS element dimensions to half a wavelength.
    pub fn set_carrier_hz(&mut self, frequency_hz: T) {
        self.carrier.frequency_hz = frequency_hz;
        let half = self.carrier.wavelength_m() / T::lit(2.0);
        if let Some(irs) = self.irs.as_mut() {
            irs.element_len_x_m = half;
            irs.element_len_y_m = half;
        }
    }

    /// Position of the node users receive from: the micro BS, or the IRS.
    pub fn serving_node(&self) -> Point3<T> {
        match &self.irs {
            Some(irs) => irs.position,
            None => self.micro.position,
        }
    }

    /// Converts every field to another scalar type.
    pub fn cast<U: Scalar>(&self) -> ScenarioConfig<U> {
        ScenarioConfig {
            carrier: CarrierSpec {
                frequency_hz: cast(self.carrier.frequency_hz),
            },
            micro: MicroBsConfig {
                position: self.micro.position.cast(),
                transmit_power_w: cast(self.micro.transmit_power_w),
                path_loss_exponent: cast(self.micro.path_loss_exponent),
            },
            macro_bs: MacroBsConfig {
                position: self.macro_bs.position.cast(),
                transmit_power_w: cast(self.macro_bs.transmit_power_w),
                path_loss_exponent: cast(self.macro_bs.path_loss_exponent),
            },
            irs: self.irs.map(|i| IrsConfig {
                position: i.position.cast(),
                elements_tx: i.elements_tx,
                elements_rx: i.elements_rx,
                element_len_x_m: cast(i.element_len_x_m),
                element_len_y_m: cast(i.element_len_y_m),
                tx_gain_db: cast(i.tx_gain_db),
                rx_gain_db: cast(i.rx_gain_db),
                theta_t_deg: cast(i.theta_t_deg),
                theta_r_deg: cast(i.theta_r_deg),
                reflection_coeff: cast(i.reflection_coeff),
            }),
            densities: TierDensities {
                micro_density_per_m2: cast(self.densities.micro_density_per_m2),
                macro_density_per_m2: cast(self.densities.macro_density_per_m2),
            },
            cell_center_xy: (cast(self.cell_center_xy.0), cast(self.cell_center_xy.1)),
            cell_radius_m: cast(self.cell_radius_m),
            user_height_m: cast(self.user_height_m),
            fading_mode: self.fading_mode,
        }
    }
}

/// `10^(g_db / 10)`.
pub fn db_to_linear<T: Scalar>(g_db: T) -> T {
    T::lit(10.0).powf(g_db / T::lit(10.0))
}

/// The parameter-table defaults for one mode and carrier.
pub fn default_scenario<T: Scalar>(mode: Mode, carrier_ghz: f64) -> Result<ScenarioConfig<T>> {
    if !SUPPORTED_CARRIERS_GHZ.contains(&carrier_ghz) {
        return Err(Error::UnsupportedCarrier(carrier_ghz));
    }
    let carrier = CarrierSpec::<T>::from_ghz(carrier_ghz);
    let half_wavelength = carrier.wavelength_m() / T::lit(2.0);

    // 500 micro BSs per pi * (100 m)^2, macro tier one fifth of that.
    let cell_radius = T::lit(100.0);
    let micro_density = T::lit(500.0) / (T::PI() * cell_radius * cell_radius);
    let densities = TierDensities {
        micro_density_per_m2: micro_density,
        macro_density_per_m2: micro_density / T::lit(5.0),
    };

    let (micro_position, micro_power, irs) = match mode {
        Mode::Conventional => (Point3::from_array([100.0, 100.0, 5.0]), T::lit(6.0), None),
        Mode::IrsAssisted => (
            Point3::from_array([0.0, 0.0, 5.0]),
            T::lit(1.0),
            Some(IrsConfig {
                position: Point3::from_array([100.0, 100.0, 5.0]),
                elements_tx: 128,
                elements_rx: 128,
                element_len_x_m: half_wavelength,
                element_len_y_m: half_wavelength,
                tx_gain_db: T::lit(20.0),
                rx_gain_db: T::lit(20.0),
                theta_t_deg: T::lit(45.0),
                theta_r_deg: T::lit(45.0),
                reflection_coeff: T::lit(0.9),
            }),
        ),
    };

    Ok(ScenarioConfig {
        carrier,
        micro: MicroBsConfig {
            position: micro_position,
            transmit_power_w: micro_power,
            path_loss_exponent: T::lit(2.5),
        },
        macro_bs: MacroBsConfig {
            position: Point3::from_array(DEFAULT_MACRO_POSITION),
            transmit_power_w: T::lit(50.0),
            path_loss_exponent: T::lit(4.5),
        },
        irs,
        densities,
        cell_center_xy: (T::lit(100.0), T::lit(100.0)),
        cell_radius_m: cell_radius,
        user_height_m: T::lit(DEFAULT_USER_HEIGHT_M),
        fading_mode: FadingMode::Deterministic,
    })
}

/// A configuration that passed [`validate`], with derived quantities cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScenario<T> {
    config: ScenarioConfig<T>,
    wavelength_m: T,
    tx_gain: T,
    rx_gain: T,
    scattering_gain: Option<T>,
    feed_distance_m: Option<T>,
    density_ratio: T,
    fingerprint: String,
}

impl<T: Scalar> ValidatedScenario<T> {
    pub fn config(&self) -> &ScenarioConfig<T> {
        &self.config
    }

    pub fn into_config(self) -> ScenarioConfig<T> {
        self.config
    }

    pub fn mode(&self) -> Mode {
        self.config.mode()
    }

    pub fn wavelength_m(&self) -> T {
        self.wavelength_m
    }

    /// Linear G_t (1 in conventional mode).
    pub fn tx_gain(&self) -> T {
        self.tx_gain
    }

    /// Linear G_r (1 in conventional mode).
    pub fn rx_gain(&self) -> T {
        self.rx_gain
    }

    pub fn scattering_gain(&self) -> Option<T> {
        self.scattering_gain
    }

    /// Micro BS to IRS distance `d1`, constant per scenario.
    pub fn feed_distance_m(&self) -> Option<T> {
        self.feed_distance_m
    }

    pub fn density_ratio(&self) -> T {
        self.density_ratio
    }

    /// Hex SHA-256 over the canonical encoding of every configured value.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

fn check_positive<T: Scalar>(out: &mut Vec<Violation>, field: &str, v: T) {
    if !(v.is_finite() && v > T::zero()) {
        out.push(Violation::new(field, format!("must be finite and > 0, got {v}")));
    }
}

fn check_finite<T: Scalar>(out: &mut Vec<Violation>, field: &str, v: T) {
    if !v.is_finite() {
        out.push(Violation::new(field, format!("must be finite, got {v}")));
    }
}

fn check_point<T: Scalar>(out: &mut Vec<Violation>, field: &str, p: &Point3<T>) {
    if !p.is_finite() {
        out.push(Violation::new(field, "all coordinates must be finite"));
    }
}

fn check_angle<T: Scalar>(out: &mut Vec<Violation>, field: &str, deg: T) {
    if !(deg.is_finite() && deg >= T::zero() && deg < T::lit(90.0)) {
        out.push(Violation::new(field, format!("must lie in [0, 90), got {deg}")));
    }
}

/// Checks every invariant of `config` and precomputes derived values.
pub fn validate<T: Scalar>(config: ScenarioConfig<T>) -> Result<ValidatedScenario<T>> {
    let mut v = Vec::new();

    check_positive(&mut v, "carrier.frequency_hz", config.carrier.frequency_hz);

    check_point(&mut v, "micro.position", &config.micro.position);
    check_positive(&mut v, "micro.transmit_power_w", config.micro.transmit_power_w);
    check_positive(&mut v, "micro.path_loss_exponent", config.micro.path_loss_exponent);

    check_point(&mut v, "macro_bs.position", &config.macro_bs.position);
    check_positive(&mut v, "macro_bs.transmit_power_w", config.macro_bs.transmit_power_w);
    check_positive(&mut v, "macro_bs.path_loss_exponent", config.macro_bs.path_loss_exponent);

    if let Some(irs) = &config.irs {
        check_point(&mut v, "irs.position", &irs.position);
        if irs.elements_tx < 1 {
            v.push(Violation::new("irs.elements_tx", "must be >= 1"));
        }
        if irs.elements_rx < 1 {
            v.push(Violation::new("irs.elements_rx", "must be >= 1"));
        }
        check_positive(&mut v, "irs.element_len_x_m", irs.element_len_x_m);
        check_positive(&mut v, "irs.element_len_y_m", irs.element_len_y_m);
        check_finite(&mut v, "irs.tx_gain_db", irs.tx_gain_db);
        check_finite(&mut v, "irs.rx_gain_db", irs.rx_gain_db);
        check_angle(&mut v, "irs.theta_t_deg", irs.theta_t_deg);
        check_angle(&mut v, "irs.theta_r_deg", irs.theta_r_deg);
        let a = irs.reflection_coeff;
        if !(a > T::zero() && a <= T::one()) {
            v.push(Violation::new(
                "irs.reflection_coeff",
                format!("must lie in (0, 1], got {a}"),
            ));
        }
    }

    check_positive(&mut v, "densities.micro_density_per_m2", config.densities.micro_density_per_m2);
    check_positive(&mut v, "densities.macro_density_per_m2", config.densities.macro_density_per_m2);

    check_finite(&mut v, "cell_center_xy.0", config.cell_center_xy.0);
    check_finite(&mut v, "cell_center_xy.1", config.cell_center_xy.1);
    check_positive(&mut v, "cell_radius_m", config.cell_radius_m);
    if !(config.user_height_m.is_finite() && config.user_height_m >= T::zero()) {
        v.push(Violation::new("user_height_m", "must be finite and >= 0"));
    }

    if let FadingMode::MonteCarlo { samples, .. } = config.fading_mode {
        if samples < 1 {
            v.push(Violation::new("fading_mode.monte_carlo.samples", "must be >= 1"));
        }
    }

    // Colocated transmitters make every cascaded distance degenerate.
    let guard = T::lit(MIN_DISTANCE_M);
    if v.is_empty() {
        if distance(&config.micro.position, &config.macro_bs.position) < guard {
            v.push(Violation::new("macro_bs.position", "colocated with the micro BS"));
        }
        if let Some(irs) = &config.irs {
            if distance(&config.micro.position, &irs.position) < guard {
                v.push(Violation::new("irs.position", "colocated with the micro BS"));
            }
            if distance(&config.macro_bs.position, &irs.position) < guard {
                v.push(Violation::new("irs.position", "colocated with the macro BS"));
            }
        }
    }

    if !v.is_empty() {
        return Err(Error::InvalidConfig(v));
    }

    let wavelength_m = config.carrier.wavelength_m();
    let (tx_gain, rx_gain, g_sc, d1) = match &config.irs {
        Some(irs) => (
            db_to_linear(irs.tx_gain_db),
            db_to_linear(irs.rx_gain_db),
            Some(scattering_gain(irs.element_len_x_m, irs.element_len_y_m, wavelength_m)),
            Some(distance(&config.micro.position, &irs.position)),
        ),
        None => (T::one(), T::one(), None, None),
    };
    let density_ratio = config.densities.ratio();
    let fingerprint = fingerprint(&config);

    Ok(ValidatedScenario {
        config,
        wavelength_m,
        tx_gain,
        rx_gain,
        scattering_gain: g_sc,
        feed_distance_m: d1,
        density_ratio,
        fingerprint,
    })
}

fn fingerprint<T: Scalar>(c: &ScenarioConfig<T>) -> String {
    let mut h = Sha256::new();
    let mut put = |v: T| h.update(v.as_f64().to_bits().to_le_bytes());
    put(c.carrier.frequency_hz);
    for p in [&c.micro.position, &c.macro_bs.position] {
        put(p.x);
        put(p.y);
        put(p.z);
    }
    put(c.micro.transmit_power_w);
    put(c.micro.path_loss_exponent);
    put(c.macro_bs.transmit_power_w);
    put(c.macro_bs.path_loss_exponent);
    put(c.densities.micro_density_per_m2);
    put(c.densities.macro_density_per_m2);
    put(c.cell_center_xy.0);
    put(c.cell_center_xy.1);
    put(c.cell_radius_m);
    put(c.user_height_m);
    if let Some(i) = &c.irs {
        for v in [
            i.position.x,
            i.position.y,
            i.position.z,
            i.element_len_x_m,
            i.element_len_y_m,
            i.tx_gain_db,
            i.rx_gain_db,
            i.theta_t_deg,
            i.theta_r_deg,
            i.reflection_coeff,
        ] {
            put(v);
        }
    }
    match c.irs {
        Some(i) => {
            h.update([1u8]);
            h.update(i.elements_tx.to_le_bytes());
            h.update(i.elements_rx.to_le_bytes());
        }
        None => h.update([0u8]),
    }
    match c.fading_mode {
        FadingMode::Deterministic => h.update([0u8]),
        FadingMode::MonteCarlo { samples, seed } => {
            h.update([1u8]);
            h.update(samples.to_le_bytes());
            h.update(seed.to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
