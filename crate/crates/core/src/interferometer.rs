//! Parity-detection Mach–Zehnder interferometry.
//!
//! `parity_signal(p, θ)` is the parity of the second output port after an MZI of phase θ.
//! `parity_expectation(p, φ)` is the same signal biased by π/2, which is where the
//! error-propagation formula samples it; all Δφ values are reported as functions of φ.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::engine::{deriv_extract, QuadExp};
use crate::error::{domain, Error, Result};
use crate::ngstate::{coefficients_parity, coefficients_probability, NgParams, PROBABILITY_FLOOR};

pub const FD_STEP: f64 = 1e-6;
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Raw parity signal at MZI phase θ.
pub fn parity_signal(p: &NgParams, theta: f64) -> Result<f64> {
    let pc = coefficients_probability(p);
    let den = deriv_extract(&QuadExp::from_real(&pc.m2, pc.d[0])?, p.order())?.re;
    if !(den > PROBABILITY_FLOOR) {
        return Err(Error::NegligibleProbability(den));
    }
    let xc = coefficients_parity(p, theta);
    let num = deriv_extract(&QuadExp::from_real(&xc.m3, xc.e[0])?, p.order())?.re;
    Ok(num / den)
}

pub fn parity_expectation(p: &NgParams, phi: f64) -> Result<f64> {
    parity_signal(p, phi + FRAC_PI_2)
}

pub fn parity_expectation_tmst(lambda: f64, kappa: f64, phi: f64) -> f64 {
    let l2 = lambda * lambda;
    (1.0 - l2) / (2.0 * kappa * (1.0 + l2 * l2 - 2.0 * l2 * (2.0 * phi).cos()).sqrt())
}

/// Central difference with one Richardson step (h and h/2).
fn derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let h2 = h / 2.0;
    let d2 = (f(x + h2)? - f(x - h2)?) / (2.0 * h2);
    Ok((4.0 * d2 - d1) / 3.0)
}

pub fn parity_derivative(p: &NgParams, phi: f64) -> Result<f64> {
    derivative(|x| parity_expectation(p, x), phi, FD_STEP)
}

fn uncertainty(f: f64, df: f64) -> f64 {
    if df.abs() < DERIVATIVE_FLOOR {
        return f64::INFINITY;
    }
    (1.0 - f * f).max(0.0).sqrt() / df.abs()
}

pub fn phase_uncertainty(p: &NgParams, phi: f64) -> Result<f64> {
    let f = parity_expectation(p, phi)?;
    let df = parity_derivative(p, phi)?;
    Ok(uncertainty(f, df))
}

pub fn phase_uncertainty_tmst(lambda: f64, kappa: f64, phi: f64) -> f64 {
    let l2 = lambda * lambda;
    let mu2 = 1.0 - l2;
    let s2 = (2.0 * phi).sin();
    if s2 == 0.0 {
        return f64::INFINITY;
    }
    let d = 1.0 + l2 * l2 - 2.0 * l2 * (2.0 * phi).cos();
    let num = (kappa * kappa - mu2 * mu2 / (4.0 * d)).max(0.0).sqrt();
    let den = (l2 * mu2 * s2 / d.powf(1.5)).abs();
    if den == 0.0 {
        return f64::INFINITY;
    }
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSensitivityRecord {
    pub params: NgParams,
    pub phi: f64,
    pub parity: f64,
    pub dparity_dphi: f64,
    pub delta_phi: f64,
    pub probability: f64,
}

impl PhaseSensitivityRecord {
    pub fn evaluate(p: &NgParams, phi: f64) -> Result<Self> {
        let probability = crate::ngstate::success_probability(p)?;
        let parity = parity_expectation(p, phi)?;
        let dparity_dphi = parity_derivative(p, phi)?;
        let rec =
            Self { params: *p, phi, parity, dparity_dphi, delta_phi: uncertainty(parity, dparity_dphi), probability };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        const SLACK: f64 = 1e-9;
        if !(self.parity.abs() <= 1.0 + SLACK) {
            return domain(format!("parity {} outside [-1, 1]", self.parity));
        }
        if !(self.delta_phi >= 0.0) {
            return domain(format!("delta_phi {} is negative or NaN", self.delta_phi));
        }
        if !(self.probability > 0.0 && self.probability <= 1.0 + SLACK) {
            return domain(format!("probability {} outside (0, 1]", self.probability));
        }
        Ok(())
    }
}

/// Δφ_TMST − Δφ_NG. Zero when the operation is the identity.
pub fn merit_thermal(p: &NgParams, phi: f64) -> Result<f64> {
    if p.is_identity_operation() {
        return Ok(0.0);
    }
    Ok(phase_uncertainty_tmst(p.lambda, p.kappa, phi) - phase_uncertainty(p, phi)?)
}

pub fn merit_vacuum(p: &NgParams, phi: f64) -> Result<f64> {
    if p.kappa != 0.5 {
        return domain(format!("vacuum merit needs kappa = 1/2, got {}", p.kappa));
    }
    merit_thermal(p, phi)
}

/// Parameters of a squeezing scan: everything but λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingTemplate {
    pub kappa: f64,
    pub tau: f64,
    pub m: usize,
    pub n: usize,
}

impl SqueezingTemplate {
    pub fn at(&self, r_sq: f64) -> Result<NgParams> {
        NgParams::new(r_sq.tanh(), self.kappa, self.tau, self.m, self.n)
    }
}

pub const OPTIMIZE_GRID: usize = 200;

/// Grid scan followed by golden-section refinement of Δφ over r_sq.
pub fn find_optimal_squeezing(template: &SqueezingTemplate, phi: f64, r_range: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = r_range;
    if !(lo > 0.0 && hi <= 4.0 && lo <= hi) {
        return domain(format!("squeezing range [{lo}, {hi}] not inside (0, 4]"));
    }
    let eval = |r: f64| -> Result<f64> {
        let p = template.at(r)?;
        if p.m == 0 && p.n == 0 && p.tau == 1.0 {
            Ok(phase_uncertainty_tmst(p.lambda, p.kappa, phi))
        } else {
            phase_uncertainty(&p, phi)
        }
    };
    if lo == hi {
        return Ok((lo, eval(lo)?));
    }

    let step = (hi - lo) / (OPTIMIZE_GRID - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..OPTIMIZE_GRID {
        let v = eval(lo + step * i as f64)?;
        if v < best.1 {
            best = (i, v);
        }
    }
    if best.1.is_infinite() || best.0 == 0 || best.0 == OPTIMIZE_GRID - 1 {
        return Err(Error::NoMinimumInRange { lo, hi });
    }

    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo + step * (best.0 - 1) as f64, lo + step * (best.0 + 1) as f64);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d)?;
        }
    }
    let r = (a + b) / 2.0;
    Ok((r, eval(r)?))
}
