//! Downlink user association in a two-tier (macro + micro) cellular network
//! where the micro cell is either served directly or through an intelligent
//! reflecting surface (IRS).
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below name the concrete instantiations. File I/O in
//! [`io`] works in `f64`.
//!
//! ```
//! use irs_hetnet::{default_scenario, sweep, validate, Mode, Placement, UserDrop};
//!
//! let scenario = validate(default_scenario::<f64>(Mode::IrsAssisted, 28.0)?)?;
//! let drop = UserDrop::for_scenario(&scenario, Placement::Grid { resolution: 11 })?;
//! let map = sweep(&scenario, &drop)?;
//! assert!(map.stats.min <= map.stats.max);
//! # Ok::<(), irs_hetnet::Error>(())
//! ```

pub mod association;
pub mod error;
pub mod io;
pub mod model;
pub mod optimizer;
pub mod propagation;
pub mod scalar;
pub mod scenario;

pub use association::{associate, association_probability, Association, AssociationProbability};
pub use error::{Error, Result, Violation};
pub use model::{
    db_to_linear, default_scenario, validate, CarrierSpec, FadingMode, IrsConfig, MacroBsConfig,
    MicroBsConfig, Mode, Point3, ScenarioConfig, TierDensities, ValidatedScenario,
};
pub use optimizer::{
    energy_saving_ratio, min_elements_for_edge_target, min_power_for_edge_target,
    OptimizationOutcome, Variable,
};
pub use propagation::{
    conventional_rx_power, distance, irs_rx_power, macro_rx_power, sample_fading,
    scattering_gain, FadingDraw, IrsLinkBudget, LinkPath, LinkResult,
};
pub use scalar::{Scalar, SPEED_OF_LIGHT_M_S};
pub use scenario::{
    compare_modes, evaluate_point, evaluate_point_in_stream, generate_users,
    monte_carlo_association, sweep, AssociationMap, MapPoint, MapStats, ModeComparison,
    MonteCarloEstimate, Placement, Region, UserDrop,
};

pub type Point64 = Point3<f64>;
pub type Point32 = Point3<f32>;
pub type Config64 = ScenarioConfig<f64>;
pub type Config32 = ScenarioConfig<f32>;
pub type Scenario64 = ValidatedScenario<f64>;
pub type Scenario32 = ValidatedScenario<f32>;
pub type Drop64 = UserDrop<f64>;
pub type Drop32 = UserDrop<f32>;
pub type Map64 = AssociationMap<f64>;
pub type Map32 = AssociationMap<f32>;
pub type Outcome64 = OptimizationOutcome<f64>;
pub type Outcome32 = OptimizationOutcome<f32>;
