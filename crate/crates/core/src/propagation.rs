//! Distances, received-power models and the Rayleigh power sampler.
//!
//! All powers are linear watts. The direct link (micro or macro BS to user)
//! follows `P_t λ² h / (16 π² d^α)`. The IRS cascade follows
//! `P_t G_Sc G_t G_r M² N² d_x d_y λ² cos θ_t cos θ_r A² / (d1² d2² 64 π³)`
//! and carries no fading term.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::FadingMode;
use crate::scalar::Scalar;
use crate::Point3;

/// Distances below this are treated as colocated nodes.
pub const MIN_DISTANCE_M: f64 = 1e-9;

/// Which physical path a received power belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkPath {
    ConventionalMicro,
    IrsMicro,
    Macro,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceTerms<T> {
    Direct(T),
    Cascaded { d1: T, d2: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkResult<T> {
    pub received_power_w: T,
    pub path: LinkPath,
    pub distance_terms: DistanceTerms<T>,
}

/// Small-scale power coefficient `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw<T> {
    pub h: T,
}

impl<T: Scalar> FadingDraw<T> {
    pub fn unit() -> Self {
        Self { h: T::one() }
    }

    /// Inverse-CDF of Exp(1): `h = -ln(u)` for `u` in (0, 1].
    pub fn from_uniform(u: T) -> Self {
        Self { h: -u.ln() }
    }
}

pub fn distance<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> T {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Draws `h`. Deterministic mode never touches `rng`.
pub fn sample_fading<T: Scalar, R: Rng + ?Sized>(mode: FadingMode, rng: &mut R) -> FadingDraw<T> {
    match mode {
        FadingMode::Deterministic => FadingDraw::unit(),
        FadingMode::MonteCarlo { .. } => {
            // random::<f64>() is in [0, 1); flip it to (0, 1] so ln never sees 0.
            let u = 1.0 - rng.random::<f64>();
            FadingDraw::from_uniform(T::lit(u))
        }
    }
}

fn guard_distance<T: Scalar>(what: &'static str, d: T) -> Result<()> {
    if d.is_finite() && d >= T::lit(MIN_DISTANCE_M) {
        Ok(())
    } else {
        Err(Error::DegenerateGeometry {
            what,
            distance_m: d.as_f64(),
        })
    }
}

fn direct_power<T: Scalar>(p_t: T, wavelength: T, h: T, d: T, alpha: T) -> T {
    let sixteen_pi2 = T::lit(16.0) * T::PI() * T::PI();
    p_t * wavelength * wavelength * h / (sixteen_pi2 * d.powf(alpha))
}

/// Received power from a conventional micro BS at distance `d`.
pub fn conventional_rx_power<T: Scalar>(p_t: T, wavelength: T, h: T, d: T, alpha: T) -> Result<T> {
    guard_distance("micro BS to user", d)?;
    Ok(direct_power(p_t, wavelength, h, d, alpha))
}

/// Received power from the macro BS; same functional form as the micro link.
pub fn macro_rx_power<T: Scalar>(
    p_t: T,
    wavelength: T,
    h: T,
    d: T,
    alpha_macro: T,
) -> Result<T> {
    guard_distance("macro BS to user", d)?;
    Ok(direct_power(p_t, wavelength, h, d, alpha_macro))
}

/// Per-element scattering gain `4π d_x d_y / λ²`.
pub fn scattering_gain<T: Scalar>(d_x: T, d_y: T, wavelength: T) -> T {
    T::lit(4.0) * T::PI() * d_x * d_y / (wavelength * wavelength)
}

/// Everything in the IRS cascade except the two hop distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsLinkBudget<T> {
    pub transmit_power_w: T,
    pub scattering_gain: T,
    /// Linear G_t.
    pub tx_gain: T,
    /// Linear G_r.
    pub rx_gain: T,
    pub elements_tx: u32,
    pub elements_rx: u32,
    pub element_len_x_m: T,
    pub element_len_y_m: T,
    pub wavelength_m: T,
    pub theta_t_deg: T,
    pub theta_r_deg: T,
    pub reflection_coeff: T,
}

fn angle_cos<T: Scalar>(field: &'static str, deg: T) -> Result<T> {
    let c = deg.to_radians().cos();
    if deg >= T::zero() && deg < T::lit(90.0) && c > T::zero() {
        Ok(c)
    } else {
        Err(Error::InvalidAngle {
            field,
            degrees: deg.as_f64(),
        })
    }
}

/// Received power through the IRS with hop distances `d1` (BS to IRS) and
/// `d2` (IRS to user).
pub fn irs_rx_power<T: Scalar>(b: &IrsLinkBudget<T>, d1: T, d2: T) -> Result<T> {
    guard_distance("micro BS to IRS", d1)?;
    guard_distance("IRS to user", d2)?;
    let cos_t = angle_cos("theta_t_deg", b.theta_t_deg)?;
    let cos_r = angle_cos("theta_r_deg", b.theta_r_deg)?;

    let m = T::from_u32(b.elements_tx).unwrap();
    let n = T::from_u32(b.elements_rx).unwrap();
    let lambda = b.wavelength_m;
    let a = b.reflection_coeff;
    let pi = T::PI();

    let numerator = b.transmit_power_w
        * b.scattering_gain
        * b.tx_gain
        * b.rx_gain
        * (m * m)
        * (n * n)
        * b.element_len_x_m
        * b.element_len_y_m
        * (lambda * lambda)
        * cos_t
        * cos_r
        * (a * a);
    let denominator = (d1 * d1) * (d2 * d2) * T::lit(64.0) * pi * pi * pi;
    Ok(numerator / denominator)
}

impl<T: Scalar> LinkResult<T> {
    pub fn conventional(p_t: T, wavelength: T, h: T, d: T, alpha: T) -> Result<Self> {
        Ok(Self {
            received_power_w: conventional_rx_power(p_t, wavelength, h, d, alpha)?,
            path: LinkPath::ConventionalMicro,
            distance_terms: DistanceTerms::Direct(d),
        })
    }

    pub fn macro_link(p_t: T, wavelength: T, h: T, d: T, alpha_macro: T) -> Result<Self> {
        Ok(Self {
            received_power_w: macro_rx_power(p_t, wavelength, h, d, alpha_macro)?,
            path: LinkPath::Macro,
            distance_terms: DistanceTerms::Direct(d),
        })
    }

    pub fn irs(budget: &IrsLinkBudget<T>, d1: T, d2: T) -> Result<Self> {
        Ok(Self {
            received_power_w: irs_rx_power(budget, d1, d2)?,
            path: LinkPath::IrsMicro,
            distance_terms: DistanceTerms::Cascaded { d1, d2 },
        })
    }
}
