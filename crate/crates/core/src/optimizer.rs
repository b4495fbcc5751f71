//! Smallest micro transmit power, or smallest IRS, that reaches a target
//! cell-edge association probability.
//!
//! Both searches run with deterministic fading: the objective (edge minimum
//! of the association map) is then monotone in power and in element count.

use crate::error::{Error, Result};
use crate::model::{validate, FadingMode, ScenarioConfig, ValidatedScenario};
use crate::scalar::Scalar;
use crate::scenario::{edge_min_over, edge_users, UserDrop};
use crate::Point3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    TransmitPowerW,
    /// M = N varied together.
    ElementCount,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationOutcome<T> {
    pub variable: Variable,
    /// Watts, or an integral element count.
    pub optimum: T,
    pub achieved_edge_min: T,
    pub iterations: usize,
    /// Final search interval.
    pub bracket: (T, T),
}

impl<T: Scalar> OptimizationOutcome<T> {
    pub fn element_count(&self) -> Option<u32> {
        match self.variable {
            Variable::ElementCount => self.optimum.to_u32(),
            Variable::TransmitPowerW => None,
        }
    }
}

fn deterministic<T: Scalar>(scenario: &ValidatedScenario<T>) -> ScenarioConfig<T> {
    let mut c = scenario.config().clone();
    c.fading_mode = FadingMode::Deterministic;
    c
}

/// Edge minimum of the map with micro transmit power `p_t`.
pub fn edge_min_at_power<T: Scalar>(
    base: &ScenarioConfig<T>,
    edge: &[Point3<T>],
    p_t: T,
) -> Result<T> {
    let mut c = base.clone();
    c.micro.transmit_power_w = p_t;
    c.fading_mode = FadingMode::Deterministic;
    edge_min_over(&validate(c)?, edge)
}

/// Edge minimum of the map with an `n × n` IRS.
pub fn edge_min_at_elements<T: Scalar>(
    base: &ScenarioConfig<T>,
    edge: &[Point3<T>],
    n: u32,
) -> Result<T> {
    let mut c = base.clone();
    let irs = c.irs.as_mut().ok_or(Error::RequiresIrs)?;
    irs.elements_tx = n;
    irs.elements_rx = n;
    c.fading_mode = FadingMode::Deterministic;
    edge_min_over(&validate(c)?, edge)
}

/// Bisection on the micro transmit power.
///
/// Requires `edge_min(p_lo) < target <= edge_min(p_hi)`. Returns the upper
/// end of a final bracket no wider than `tol_w`, so the achieved edge
/// minimum always meets the target.
pub fn min_power_for_edge_target<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    drop: &UserDrop<T>,
    target: T,
    p_lo: T,
    p_hi: T,
    tol_w: T,
) -> Result<OptimizationOutcome<T>> {
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::InvalidPower(format!("target must lie in (0, 1), got {target}")));
    }
    // Written positively so NaN inputs are rejected too.
    let well_formed = tol_w > T::zero() && p_lo > T::zero() && p_hi > p_lo;
    if !well_formed {
        return Err(Error::InvalidPower(format!(
            "need 0 < p_lo < p_hi and tol > 0, got [{p_lo}, {p_hi}] tol {tol_w}"
        )));
    }
    let base = deterministic(scenario);
    let edge = edge_users(scenario, drop);
    let f = |p: T| edge_min_at_power(&base, &edge, p);

    let (mut lo, mut hi) = (p_lo, p_hi);
    let (f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < target && target <= f_hi) {
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            value_lo: f_lo.as_f64(),
            value_hi: f_hi.as_f64(),
            target: target.as_f64(),
        });
    }

    let two = T::lit(2.0);
    let mut iterations = 0;
    while hi - lo > tol_w {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid >= target {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
        }
    }

    Ok(OptimizationOutcome {
        variable: Variable::TransmitPowerW,
        optimum: hi,
        achieved_edge_min: f_hi,
        iterations,
        bracket: (lo, hi),
    })
}

/// Least `n` in `[1, n_max]` such that an `n × n` IRS reaches `target`.
pub fn min_elements_for_edge_target<T: Scalar>(
    scenario: &ValidatedScenario<T>,
    drop: &UserDrop<T>,
    target: T,
    n_max: u32,
) -> Result<OptimizationOutcome<T>> {
    if scenario.config().irs.is_none() {
        return Err(Error::RequiresIrs);
    }
    if n_max < 1 {
        return Err(Error::InvalidDrop("n_max must be >= 1".into()));
    }
    let base = deterministic(scenario);
    let edge = edge_users(scenario, drop);
    let f = |n: u32| edge_min_at_elements(&base, &edge, n);

    let f_max = f(n_max)?;
    if f_max < target {
        return Err(Error::Infeasible {
            n_max,
            achieved: f_max.as_f64(),
            target: target.as_f64(),
        });
    }

    // Invariant: f(hi) >= target; every n < lo fails.
    let (mut lo, mut hi, mut f_hi) = (1u32, n_max, f_max);
    let mut iterations = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid >= target {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid + 1;
        }
    }

    Ok(OptimizationOutcome {
        variable: Variable::ElementCount,
        optimum: T::from_u32(hi).unwrap(),
        achieved_edge_min: f_hi,
        iterations,
        bracket: (T::one(), T::from_u32(n_max).unwrap()),
    })
}

/// Fraction of transmit power saved by running the micro BS at `irs_power`
/// instead of `conv_power`: `1 − irs_power / conv_power`.
pub fn energy_saving_ratio<T: Scalar>(conv_power: T, irs_power: T) -> Result<T> {
    if !(conv_power > T::zero() && irs_power > T::zero() && irs_power <= conv_power) {
        return Err(Error::InvalidPower(format!(
            "need 0 < irs_power <= conv_power, got irs {irs_power} W, conv {conv_power} W"
        )));
    }
    Ok(T::one() - irs_power / conv_power)
}
