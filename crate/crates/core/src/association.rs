//! Probability that a user attaches to the micro tier rather than the macro tier.

use crate::error::{Error, Result};
use crate::propagation::{LinkPath, LinkResult};
use crate::scalar::Scalar;

/// A micro-tier association probability in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AssociationProbability<T>(T);

impl<T: Scalar> AssociationProbability<T> {
    pub fn value(self) -> T {
        self.0
    }

    pub(crate) fn from_raw(v: T) -> Self {
        Self(v)
    }
}

/// `(1 + ratio · (P_macro / P_micro)^(2 / α_macro))⁻¹`
///
/// `density_ratio` is λ_Macro / λ_Micro. Only the power ratio matters, so any
/// common scale factor on the two powers cancels.
pub fn association_probability<T: Scalar>(
    p_r_micro: T,
    p_r_macro: T,
    density_ratio: T,
    alpha_macro: T,
) -> Result<AssociationProbability<T>> {
    if !(p_r_micro > T::zero() && p_r_micro.is_finite()) {
        return Err(Error::InvalidPower(format!(
            "micro received power must be finite and > 0, got {p_r_micro}"
        )));
    }
    if !(p_r_macro >= T::zero() && p_r_macro.is_finite()) {
        return Err(Error::InvalidPower(format!(
            "macro received power must be finite and >= 0, got {p_r_macro}"
        )));
    }
    if p_r_macro == T::zero() {
        return Ok(AssociationProbability(T::one()));
    }
    let exponent = T::lit(2.0) / alpha_macro;
    let interference = density_ratio * (p_r_macro / p_r_micro).powf(exponent);
    Ok(AssociationProbability((T::one() + interference).recip()))
}

/// An association probability tagged with the micro path that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association<T> {
    pub probability: AssociationProbability<T>,
    pub serving_path: LinkPath,
}

/// Combines a micro link (conventional or IRS) with the macro link.
pub fn associate<T: Scalar>(
    micro: &LinkResult<T>,
    macro_link: &LinkResult<T>,
    density_ratio: T,
    alpha_macro: T,
) -> Result<Association<T>> {
    if micro.path == LinkPath::Macro {
        return Err(Error::InvalidPower("serving link must be a micro path".into()));
    }
    if macro_link.path != LinkPath::Macro {
        return Err(Error::InvalidPower("competing link must be the macro path".into()));
    }
    Ok(Association {
        probability: association_probability(
            micro.received_power_w,
            macro_link.received_power_w,
            density_ratio,
            alpha_macro,
        )?,
        serving_path: micro.path,
    })
}
