//! User placement, per-user evaluation and whole-cell sweeps.
//!
//! Monte Carlo draws for the user at index `i` come from a ChaCha8 stream
//! seeded with the scenario seed and switched to stream `i`, so a sweep
//! produces the same map no matter how rayon schedules the points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::association::{association_probability, AssociationProbability};
use crate::error::{Error, Result};
use crate::model::{FadingMode, Mode, ValidatedScenario};
use crate::propagation::{
    conventional_rx_power, distance, irs_rx_power, macro_rx_power, sample_fading, IrsLinkBudget,
};
use crate::scalar::Scalar;
use crate::Point3;

/// Users at least this fraction of the cell radius away (horizontally) from
/// the serving node count as cell-edge users.
pub const EDGE_BAND_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// `resolution × resolution` lattice including the region boundary.
    Grid { resolution: usize },
    /// Uniform i.i.d. points.
    Random { count: usize, seed: u64 },
}

/// Axis-aligned square evaluation region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    pub center_xy: (T, T),
    pub side_m: T,
}

impl<T: Scalar> Region<T> {
    /// `(x_min, y_min)`.
    pub fn origin(&self) -> (T, T) {
        let half = self.side_m / T::lit(2.0);
        (self.center_xy.0 - half, self.center_xy.1 - half)
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        let (x0, y0) = self.origin();
        x >= x0 && x <= x0 + self.side_m && y >= y0 && y <= y0 + self.side_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserDrop<T> {
    pub placement: Placement,
    pub region: Region<T>,
    pub height_m: T,
}

impl<T: Scalar> UserDrop<T> {
    pub fn new(placement: Placement, region: Region<T>, height_m: T) -> Result<Self> {
        match placement {
            Placement::Grid { resolution } if resolution < 2 => {
                return Err(Error::InvalidDrop(format!(
                    "grid resolution must be >= 2, got {resolution}"
                )))
            }
            Placement::Random { count: 0, .. } => {
                return Err(Error::InvalidDrop("random count must be >= 1".into()))
            }
            _ => {}
        }
        if !(region.side_m.is_finite() && region.side_m > T::zero())
            || !region.center_xy.0.is_finite()
            || !region.center_xy.1.is_finite()
        {
            return Err(Error::InvalidDrop("region must have a finite positive side".into()));
        }
        if !(height_m.is_finite() && height_m >= T::zero()) {
            return Err(Error::InvalidDrop("height must be finite and >= 0".into()));
        }
        Ok(Self {
            placement,
            region,
            height_m,
        })
    }

    /// Drop over the scenario's micro cell (a square of side twice the radius)
    /// at the configured user height.
    pub fn for_scenario(scenario: &ValidatedScenario<T>, placement: Placement) -> Result<Self> {
        Self::new(placement, cell_region(scenario), scenario.config().user_height_m)
    }
}

pub fn cell_region<T: Scalar>(scenario: &ValidatedScenario<T>) -> Region<T> {
    let c = scenario.config();
    Region {
        center_xy: c.cell_center_xy,
        side_m: T::lit(2.0) * c.cell_radius_m,
    }
}

pub fn generate_users<T: Scalar>(drop: &UserDrop<T>) -> Vec<Point3<T>> {
    let (x0, y0) = drop.region.origin();
    let side = drop.region.side_m;
    let z = drop.height_m;
    match drop.placement {
        Placement::Grid { resolution } => {
            let steps = T::from_usize(resolution - 1).unwrap();
            let coord = |i: usize| side * T::from_usize(i).unwrap() / steps;
            (0..resolution)
                .flat_map(|iy| {
                    (0..resolution).map(move |ix| Point3::new(x0 + coord(ix), y0 + coord(iy), z))
                })
                .collect()
        }
        Placement::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    Point3::new(x0 + side * T::lit(u), y0 + side * T::lit(v), z)
                })
                .collect()
        }
    }
}

/// Mean association over fading draws with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub samples: u32,
}

/// Received powers with `h = 1` on every faded link.
#[derive(Debug, Clone, Copy)]
struct UnitPowers<T> {
    micro: T,
    macro_: T,
    micro_faded: bool,
}

fn irs_budget<T: Scalar>(s: &ValidatedScenario<T>) -> Option<IrsLinkBudget<T>> {
    let c = s.config();
    c.irs.as_ref().map(|irs| IrsLinkBudget {
        transmit_power_w: c.micro.transmit_power_w,
        scattering_gain: s.scattering_gain().unwrap(),
        tx_gain: s.tx_gain(),
        rx_gain: s.rx_gain(),
        elements_tx: irs.elements_tx,
        elements_rx: irs.elements_rx,
        element_len_x_m: irs.element_len_x_m,
        element_len_y_m: irs.element_len_y_m,
        wavelength_m: s.wavelength_m(),
        theta_t_deg: irs.theta_t_deg,
        theta_r_deg: irs.theta_r_deg,
        reflection_coeff: irs.reflection_coeff,
    })
}

fn unit_powers<T: Scalar>(s: &ValidatedScenario<T>, user: &Point3<T>) -> Result<UnitPowers<T>> {
    let c = s.config();
    let lambda = s.wavelength_m();
    let (micro, micro_faded) = match irs_budget(s) {
        Some(budget) => {
            let irs = c.irs.as_ref().unwrap();
            let d2 = distance(&irs.position, user);
            (irs_rx_power(&budget, s.feed_distance_m().unwrap(), d2)?, false)
        }
        None => {
            let d = distance(&c.micro.position, user);
            let p = conventional_rx_power(
                c.micro.transmit_power_w,
                lambda,
                T::one(),
                d,
                c.micro.path_loss_exponent,
            )?;
            (p, true)
        }
    };
    let d_macro = distance(&c.macro_bs.position, user);
    let macro_ = macro_rx_power(
        c.macro_bs.transmit_power_w,
        lambda,
        T::one(),
        d_macro,
        c.macro_bs.path_loss_exponent,
    )?;
    Ok(UnitPowers {
        micro,
        macro_,
        micro_faded,
    })
}

fn associate_powers<T: Scalar>(s: &ValidatedScenario<T>, micro: T, macro_: T) -> Result<T> {
    // A faded-out micro link (h = 0) is the limit where the macro always wins.
    if micro == T::zero() && macro_ > T::zero() {
        return Ok(T::zero());
    }
    let alpha_macro = s.config().macro_bs.path_loss_exponent;
    association_probability(micro, macro_, s.density_ratio(), alpha_macro).map(|a| a.value())
}

/// Averages the association probability over `samples` independent draws
/// of the micro and macro fading coefficients. The IRS path is never faded.
pub fn monte_carlo_association<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    user: &Point3<T>,
    samples: u32,
    seed: u64,
    stream: u64,
) -> Result<MonteCarloEstimate<T>> {
    if samples == 0 {
        return Err(Error::InvalidDrop("monte carlo needs at least one sample".into()));
    }
    let base = unit_powers(scenario, user)?;
    let mode = FadingMode::MonteCarlo { samples, seed };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    // Welford in f64 so f32 scenarios do not lose precision over long runs.
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 0..samples {
        let h_micro = if base.micro_faded {
            sample_fading::<T, _>(mode, &mut rng).h
        } else {
            T::one()
        };
        let h_macro = sample_fading::<T, _>(mode, &mut rng).h;
        let a = associate_powers(scenario, base.micro * h_micro, base.macro_ * h_macro)?.as_f64();
        let delta = a - mean;
        mean += delta / f64::from(k + 1);
        m2 += delta * (a - mean);
    }
    let n = f64::from(samples);
    let std_error = if samples > 1 {
        (m2 / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean: T::lit(mean),
        std_error: T::lit(std_error),
        samples,
    })
}

/// Association probability of one user; Monte Carlo scenarios use stream 0.
pub fn evaluate_point<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    user: &Point3<T>,
) -> Result<AssociationProbability<T>> {
    evaluate_point_in_stream(scenario, user, 0)
}

/// As [`evaluate_point`], drawing fading from substream `stream`.
pub fn evaluate_point_in_stream<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    user: &Point3<T>,
    stream: u64,
) -> Result<AssociationProbability<T>> {
    let value = match scenario.config().fading_mode {
        FadingMode::Deterministic => {
            let p = unit_powers(scenario, user)?;
            associate_powers(scenario, p.micro, p.macro_)?
        }
        FadingMode::MonteCarlo { samples, seed } => {
            monte_carlo_association(scenario, user, samples, seed, stream)?.mean
        }
    };
    // Either a direct association output or an average of them.
    Ok(AssociationProbability::from_raw(value))
}

fn at_point<T: Scalar>(user: &Point3<T>, e: Error) -> Error {
    Error::AtPoint {
        x: user.x.as_f64(),
        y: user.y.as_f64(),
        z: user.z.as_f64(),
        source: Box::new(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint<T> {
    pub x: T,
    pub y: T,
    pub assoc_prob: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapStats<T> {
    pub max: T,
    pub min: T,
    pub mean: T,
    /// Minimum over the cell-edge band; `None` when no user fell in it.
    pub edge_min: Option<T>,
    pub edge_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationMap<T> {
    /// In generation order.
    pub points: Vec<MapPoint<T>>,
    pub stats: MapStats<T>,
    pub mode: Mode,
    pub scenario_fingerprint: String,
    /// Horizontal distance from the serving node where the edge band starts.
    pub edge_threshold_m: T,
}

/// Horizontal distance from the serving node beyond which users are cell-edge.
pub fn edge_threshold_m<T: Scalar>(scenario: &ValidatedScenario<T>) -> T {
    T::lit(EDGE_BAND_FRACTION) * scenario.config().cell_radius_m
}

fn is_edge<T: Scalar>(scenario: &ValidatedScenario<T>, user: &Point3<T>) -> bool {
    user.horizontal_distance(&scenario.config().serving_node()) >= edge_threshold_m(scenario)
}

fn evaluate_all<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    users: &[Point3<T>],
) -> Result<Vec<T>> {
    users
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            evaluate_point_in_stream(scenario, u, i as u64)
                .map(|a| a.value())
                .map_err(|e| at_point(u, e))
        })
        .collect()
}

/// Evaluates every user of `drop` and summarizes the map.
pub fn sweep<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    drop: &UserDrop<T>,
) -> Result<AssociationMap<T>> {
    let users = generate_users(drop);
    let values = evaluate_all(scenario, &users)?;

    let mut max = T::neg_infinity();
    let mut min = T::infinity();
    let mut sum = 0.0f64;
    let mut edge_min: Option<T> = None;
    let mut edge_points = 0;
    for (u, &v) in users.iter().zip(&values) {
        max = max.max(v);
        min = min.min(v);
        sum += v.as_f64();
        if is_edge(scenario, u) {
            edge_points += 1;
            edge_min = Some(edge_min.map_or(v, |m| m.min(v)));
        }
    }
    // Rounding in the f64 sum can push a constant map's mean one ulp outside.
    let mean = T::lit(sum / values.len() as f64).max(min).min(max);

    let points = users
        .iter()
        .zip(&values)
        .map(|(u, &v)| MapPoint {
            x: u.x,
            y: u.y,
            assoc_prob: v,
        })
        .collect();

    Ok(AssociationMap {
        points,
        stats: MapStats {
            max,
            min,
            mean,
            edge_min,
            edge_points,
        },
        mode: scenario.mode(),
        scenario_fingerprint: scenario.fingerprint().to_owned(),
        edge_threshold_m: edge_threshold_m(scenario),
    })
}

/// The users of `drop` that fall in the scenario's cell-edge band.
pub fn edge_users<T: Scalar>(scenario: &ValidatedScenario<T>, drop: &UserDrop<T>) -> Vec<Point3<T>> {
    generate_users(drop)
        .into_iter()
        .filter(|u| is_edge(scenario, u))
        .collect()
}

/// Minimum association over pre-filtered edge users.
pub fn edge_min_over<T: Scalar>(scenario: &ValidatedScenario<T>, edge: &[Point3<T>]) -> Result<T> {
    if edge.is_empty() {
        return Err(Error::EmptyEdgeBand);
    }
    let values = evaluate_all(scenario, edge)?;
    Ok(values.into_iter().fold(T::infinity(), T::min))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaStats<T> {
    pub max: T,
    pub min: T,
    pub mean: T,
    /// `irs.edge_min − conv.edge_min` when both maps have edge users.
    pub edge_min_delta: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeComparison<T> {
    pub conventional: AssociationMap<T>,
    pub irs: AssociationMap<T>,
    /// Per-point `irs − conv`, in generation order.
    pub deltas: Vec<T>,
    pub delta_stats: DeltaStats<T>,
}

pub fn compare_modes<T: Scalar>(
    conv: &ValidatedScenario<T>,
    irs: &ValidatedScenario<T>,
    drop: &UserDrop<T>,
) -> Result<ModeComparison<T>> {
    if conv.config().carrier != irs.config().carrier {
        return Err(Error::MismatchedScenarios(format!(
            "carriers differ: {} Hz vs {} Hz",
            conv.config().carrier.frequency_hz,
            irs.config().carrier.frequency_hz
        )));
    }
    if cell_region(conv) != cell_region(irs) {
        return Err(Error::MismatchedScenarios("cell regions differ".into()));
    }
    if drop.region != cell_region(conv) {
        return Err(Error::MismatchedScenarios(
            "user drop region differs from the scenarios' cell region".into(),
        ));
    }

    let conventional = sweep(conv, drop)?;
    let irs_map = sweep(irs, drop)?;
    let deltas: Vec<T> = irs_map
        .points
        .iter()
        .zip(&conventional.points)
        .map(|(a, b)| a.assoc_prob - b.assoc_prob)
        .collect();
    let max = deltas.iter().copied().fold(T::neg_infinity(), T::max);
    let min = deltas.iter().copied().fold(T::infinity(), T::min);
    let mean = T::lit(deltas.iter().map(|d| d.as_f64()).sum::<f64>() / deltas.len() as f64);
    let edge_min_delta = match (irs_map.stats.edge_min, conventional.stats.edge_min) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    Ok(ModeComparison {
        conventional,
        irs: irs_map,
        deltas,
        delta_stats: DeltaStats {
            max,
            min,
            mean,
            edge_min_delta,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_scenario, validate};

    fn scenario(mode: Mode, ghz: f64) -> ValidatedScenario<f64> {
        validate(default_scenario(mode, ghz).unwrap()).unwrap()
    }

    fn grid(s: &ValidatedScenario<f64>, n: usize) -> UserDrop<f64> {
        UserDrop::for_scenario(s, Placement::Grid { resolution: n }).unwrap()
    }

    #[test]
    fn grid_of_two_is_the_corners() {
        let s = scenario(Mode::Conventional, 28.0);
        let users = generate_users(&grid(&s, 2));
        let xy: Vec<(f64, f64)> = users.iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(xy, [(0.0, 0.0), (200.0, 0.0), (0.0, 200.0), (200.0, 200.0)]);
        assert!(users.iter().all(|p| p.z == 1.5));
    }

    #[test]
    fn fine_grid_has_unit_spacing() {
        let s = scenario(Mode::Conventional, 28.0);
        let users = generate_users(&grid(&s, 201));
        assert_eq!(users.len(), 40_401);
        let mut k = 0;
        for iy in 0..=200 {
            for ix in 0..=200 {
                assert_eq!((users[k].x, users[k].y), (ix as f64, iy as f64));
                k += 1;
            }
        }
    }

    #[test]
    fn random_drop_is_reproducible_and_inside() {
        let s = scenario(Mode::IrsAssisted, 28.0);
        let drop = UserDrop::for_scenario(&s, Placement::Random { count: 1000, seed: 42 }).unwrap();
        let a = generate_users(&drop);
        assert_eq!(a, generate_users(&drop));
        assert!(a.iter().all(|p| drop.region.contains(p.x, p.y)));
        let other = UserDrop::for_scenario(&s, Placement::Random { count: 1000, seed: 43 }).unwrap();
        assert_ne!(a, generate_users(&other));
    }

    #[test]
    fn invalid_drops() {
        let s = scenario(Mode::Conventional, 28.0);
        assert!(UserDrop::for_scenario(&s, Placement::Grid { resolution: 1 }).is_err());
        assert!(UserDrop::for_scenario(&s, Placement::Random { count: 0, seed: 0 }).is_err());
    }

    #[test]
    fn user_under_the_irs_is_the_maximum() {
        let s = scenario(Mode::IrsAssisted, 28.0);
        let map = sweep(&s, &grid(&s, 201)).unwrap();
        let centre = evaluate_point(&s, &Point3::new(100.0, 100.0, 1.5)).unwrap().value();
        assert_eq!(map.stats.max, centre);
    }

    #[test]
    fn symmetric_users_match() {
        // Mirror across the line x = y, which contains the micro BS and macro BS.
        let s = scenario(Mode::Conventional, 28.0);
        let a = evaluate_point(&s, &Point3::new(40.0, 170.0, 1.5)).unwrap();
        let b = evaluate_point(&s, &Point3::new(170.0, 40.0, 1.5)).unwrap();
        assert_eq!(a, b);
        let s = scenario(Mode::IrsAssisted, 70.0);
        let a = evaluate_point(&s, &Point3::new(10.0, 120.0, 1.5)).unwrap();
        let b = evaluate_point(&s, &Point3::new(120.0, 10.0, 1.5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_point_map() {
        let s = scenario(Mode::Conventional, 28.0);
        let drop = UserDrop::for_scenario(&s, Placement::Random { count: 1, seed: 5 }).unwrap();
        let map = sweep(&s, &drop).unwrap();
        assert_eq!(map.stats.max, map.stats.min);
        assert_eq!(map.stats.mean, map.stats.max);
    }

    #[test]
    fn colocated_user_reports_coordinates() {
        let mut c = default_scenario::<f64>(Mode::Conventional, 28.0).unwrap();
        c.user_height_m = 5.0;
        let s = validate(c).unwrap();
        let drop = grid(&s, 3);
        let err = sweep(&s, &drop).unwrap_err();
        match err {
            Error::AtPoint { x, y, z, source } => {
                assert_eq!((x, y, z), (100.0, 100.0, 5.0));
                assert!(matches!(*source, Error::DegenerateGeometry { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conventional_maps_are_carrier_invariant() {
        let a = sweep(&scenario(Mode::Conventional, 28.0), &grid(&scenario(Mode::Conventional, 28.0), 41)).unwrap();
        let b = sweep(&scenario(Mode::Conventional, 90.0), &grid(&scenario(Mode::Conventional, 90.0), 41)).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p.assoc_prob - q.assoc_prob).abs() <= 1e-12);
        }
    }

    #[test]
    fn conventional_decreases_along_rays_from_the_bs() {
        let s = scenario(Mode::Conventional, 28.0);
        for angle in (0..16).map(|k| k as f64 * std::f64::consts::PI / 8.0) {
            let mut last = f64::INFINITY;
            for r in (1..=100).map(f64::from) {
                let u = Point3::new(100.0 + r * angle.cos(), 100.0 + r * angle.sin(), 1.5);
                let v = evaluate_point(&s, &u).unwrap().value();
                assert!(v <= last, "angle {angle} r {r}");
                last = v;
            }
        }
    }

    #[test]
    fn compare_identical_conventional_is_zero() {
        let s = scenario(Mode::Conventional, 50.0);
        let cmp = compare_modes(&s, &s, &grid(&s, 21)).unwrap();
        assert!(cmp.deltas.iter().all(|d| *d == 0.0));
        assert_eq!(cmp.delta_stats.edge_min_delta, Some(0.0));
    }

    #[test]
    fn compare_rejects_mismatched_carriers() {
        let a = scenario(Mode::Conventional, 28.0);
        let b = scenario(Mode::IrsAssisted, 90.0);
        assert!(matches!(
            compare_modes(&a, &b, &grid(&a, 5)),
            Err(Error::MismatchedScenarios(_))
        ));
    }

    #[test]
    fn monte_carlo_streams_are_order_independent() {
        let mut c = default_scenario::<f64>(Mode::Conventional, 28.0).unwrap();
        c.fading_mode = FadingMode::MonteCarlo { samples: 64, seed: 9 };
        let s = validate(c).unwrap();
        let drop = UserDrop::for_scenario(&s, Placement::Random { count: 50, seed: 1 }).unwrap();
        let map = sweep(&s, &drop).unwrap();
        let users = generate_users(&drop);
        for (i, u) in users.iter().enumerate().rev() {
            let v = evaluate_point_in_stream(&s, u, i as u64).unwrap().value();
            assert_eq!(v, map.points[i].assoc_prob);
        }
        assert_eq!(map, sweep(&s, &drop).unwrap());
    }

    #[test]
    fn f32_sweep_tracks_f64() {
        let c = default_scenario::<f64>(Mode::IrsAssisted, 90.0).unwrap();
        let s64 = validate(c.clone()).unwrap();
        let s32 = validate(c.cast::<f32>()).unwrap();
        let m64 = sweep(&s64, &grid(&s64, 21)).unwrap();
        let d32 = UserDrop::for_scenario(&s32, Placement::Grid { resolution: 21 }).unwrap();
        let m32 = sweep(&s32, &d32).unwrap();
        for (a, b) in m64.points.iter().zip(&m32.points) {
            assert!((a.assoc_prob - b.assoc_prob as f64).abs() < 1e-5);
        }
    }
}
