//! Independent scalar reference for the link and association equations.
//!
//! Evaluated in the log domain with plain `f64` and hard-coded geometry so
//! it shares no code path with the library.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const C: f64 = 299_792_458.0;

pub fn wavelength(ghz: f64) -> f64 {
    C / (ghz * 1e9)
}

pub fn conv_power(p_t: f64, lambda: f64, h: f64, d: f64, alpha: f64) -> f64 {
    (p_t.ln() + 2.0 * lambda.ln() + h.ln() - 16f64.ln() - 2.0 * PI.ln() - alpha * d.ln()).exp()
}

#[allow(clippy::too_many_arguments)]
pub fn irs_power(
    p_t: f64,
    g_sc: f64,
    g_t: f64,
    g_r: f64,
    m: f64,
    n: f64,
    dx: f64,
    dy: f64,
    lambda: f64,
    theta_t_deg: f64,
    theta_r_deg: f64,
    a: f64,
    d1: f64,
    d2: f64,
) -> f64 {
    let log_num = p_t.ln()
        + g_sc.ln()
        + g_t.ln()
        + g_r.ln()
        + 2.0 * m.ln()
        + 2.0 * n.ln()
        + dx.ln()
        + dy.ln()
        + 2.0 * lambda.ln()
        + (theta_t_deg * PI / 180.0).cos().ln()
        + (theta_r_deg * PI / 180.0).cos().ln()
        + 2.0 * a.ln();
    let log_den = 2.0 * d1.ln() + 2.0 * d2.ln() + 64f64.ln() + 3.0 * PI.ln();
    (log_num - log_den).exp()
}

pub fn scattering(dx: f64, dy: f64, lambda: f64) -> f64 {
    (4f64.ln() + PI.ln() + dx.ln() + dy.ln() - 2.0 * lambda.ln()).exp()
}

pub fn assoc(p_micro: f64, p_macro: f64, ratio: f64, alpha_macro: f64) -> f64 {
    if p_macro == 0.0 {
        return 1.0;
    }
    let t = ratio * ((2.0 / alpha_macro) * (p_macro.ln() - p_micro.ln())).exp();
    1.0 / (1.0 + t)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Default two-tier geometry, written out independently of the library.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub ghz: f64,
    pub irs: bool,
    pub p_t: f64,
    pub elements: f64,
    pub theta_deg: f64,
}

pub const MACRO: [f64; 3] = [500.0, 500.0, 25.0];
pub const MACRO_P: f64 = 50.0;
pub const ALPHA: f64 = 2.5;
pub const ALPHA_MACRO: f64 = 4.5;
pub const RATIO: f64 = 0.2;
pub const USER_Z: f64 = 1.5;

impl Setup {
    pub fn conv(ghz: f64, p_t: f64) -> Self {
        Self {
            ghz,
            irs: false,
            p_t,
            elements: 0.0,
            theta_deg: 0.0,
        }
    }

    pub fn irs(ghz: f64, p_t: f64, elements: f64, theta_deg: f64) -> Self {
        Self {
            ghz,
            irs: true,
            p_t,
            elements,
            theta_deg,
        }
    }

    pub fn micro_power(&self, x: f64, y: f64, h: f64) -> f64 {
        let lambda = wavelength(self.ghz);
        let user = [x, y, USER_Z];
        if self.irs {
            let dx = lambda / 2.0;
            let d1 = dist([0.0, 0.0, 5.0], [100.0, 100.0, 5.0]);
            let d2 = dist([100.0, 100.0, 5.0], user);
            irs_power(
                self.p_t,
                scattering(dx, dx, lambda),
                100.0,
                100.0,
                self.elements,
                self.elements,
                dx,
                dx,
                lambda,
                self.theta_deg,
                self.theta_deg,
                0.9,
                d1,
                d2,
            )
        } else {
            conv_power(self.p_t, lambda, h, dist([100.0, 100.0, 5.0], user), ALPHA)
        }
    }

    pub fn macro_power(&self, x: f64, y: f64, h: f64) -> f64 {
        conv_power(MACRO_P, wavelength(self.ghz), h, dist(MACRO, [x, y, USER_Z]), ALPHA_MACRO)
    }

    pub fn at(&self, x: f64, y: f64) -> f64 {
        assoc(self.micro_power(x, y, 1.0), self.macro_power(x, y, 1.0), RATIO, ALPHA_MACRO)
    }

    /// Values on an `n × n` lattice over [0, 200]², row-major.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                let x = 200.0 * ix as f64 / (n - 1) as f64;
                let y = 200.0 * iy as f64 / (n - 1) as f64;
                out.push((x, y, self.at(x, y)));
            }
        }
        out
    }

    /// Edge users: horizontal distance >= 90 m from (100, 100).
    pub fn edge_points(n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for iy in 0..n {
            for ix in 0..n {
                let x = 200.0 * ix as f64 / (n - 1) as f64;
                let y = 200.0 * iy as f64 / (n - 1) as f64;
                if ((x - 100.0).powi(2) + (y - 100.0).powi(2)).sqrt() >= 90.0 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn edge_min(&self, edge: &[(f64, f64)]) -> f64 {
        edge.iter().map(|&(x, y)| self.at(x, y)).fold(f64::INFINITY, f64::min)
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}
