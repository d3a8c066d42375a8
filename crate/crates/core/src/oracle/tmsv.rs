//! Vacuum-input special case as a pure state: √(1−λ²) Σ λ^k K(k) |k, k+m−n>, with the
//! beamsplitter amplitude K(k) = <k+m−n, n|U|k, m> expanded from U a† U† = t a† − r f†,
//! U f† U† = r a† + t f†. Shares no code with the block-density pipeline except the
//! displacement matrix elements.

use std::f64::consts::PI;

use nalgebra::Vector4;
use num_complex::Complex64;

use super::displacement::displacement_matrix;
use crate::engine::ln_factorial;
use crate::error::{domain, Error, Result};

const AMPLITUDE_FLOOR: f64 = 1e-22;
const MAX_TERMS: usize = 5000;

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// k·ln(x), with 0·ln(0) = 0.
fn ln_pow(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// <b', n| U_BS |b, m> for b' + n = b + m, cos θ = √τ.
pub fn beamsplitter_amplitude(tau: f64, b: usize, m: usize, bp: usize, n: usize) -> f64 {
    if bp + n != b + m {
        return 0.0;
    }
    let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
    let norm = 0.5 * (ln_factorial(bp) + ln_factorial(n) - ln_factorial(b) - ln_factorial(m));
    let mut sum = 0.0;
    for j in 0..=m.min(bp) {
        let i = bp - j;
        if i > b {
            continue;
        }
        let t_pow = i + m - j;
        let r_pow = b - i + j;
        if (t == 0.0 && t_pow > 0) || (r == 0.0 && r_pow > 0) {
            continue;
        }
        let ln_mag = ln_binomial(b, i) + ln_binomial(m, j) + ln_pow(t, t_pow) + ln_pow(r, r_pow) + norm;
        let sign = if (b - i) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ln_mag.exp();
    }
    sum
}

#[derive(Debug, Clone)]
pub struct TmsvHerald {
    pub lambda: f64,
    pub m: usize,
    pub n: usize,
    /// Unnormalized amplitudes on |k, k+m−n>, starting at k0.
    k0: usize,
    amps: Vec<f64>,
}

impl TmsvHerald {
    pub fn new(lambda: f64, tau: f64, m: usize, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) || !(tau > 0.0 && tau <= 1.0) {
            return domain("TMSV heralding needs 0 <= lambda < 1 and 0 < tau <= 1");
        }
        let k0 = n.saturating_sub(m);
        let kmax = if lambda == 0.0 {
            k0
        } else {
            let k = (AMPLITUDE_FLOOR.ln() / lambda.ln()).ceil() as usize + 20;
            (k0 + k).min(MAX_TERMS)
        };
        let norm = (1.0 - lambda * lambda).sqrt();
        let amps = (k0..=kmax)
            .map(|k| {
                let lk = if k == 0 { 1.0 } else { lambda.powi(k as i32) };
                norm * lk * beamsplitter_amplitude(tau, k, m, k + m - n, n)
            })
            .collect();
        Ok(Self { lambda, m, n, k0, amps })
    }

    pub fn probability(&self) -> f64 {
        self.amps.iter().map(|c| c * c).sum()
    }

    pub fn wigner_point(&self, xi: &Vector4<f64>) -> Result<f64> {
        let p = self.probability();
        if !(p >= 1e-14) {
            return Err(Error::NegligibleProbability(p));
        }
        let shift = self.m as i64 - self.n as i64;
        let top = self.k0 + self.amps.len();
        let dim2 = (top as i64 + shift).max(1) as usize;
        let b1 = Complex64::new(xi[0], xi[1]) * std::f64::consts::SQRT_2;
        let b2 = Complex64::new(xi[2], xi[3]) * std::f64::consts::SQRT_2;
        let d1 = displacement_matrix(b1, top);
        let d2 = displacement_matrix(b2, dim2);
        let mut acc = 0.0;
        for (i, ci) in self.amps.iter().enumerate() {
            let a = self.k0 + i;
            let b = (a as i64 + shift) as usize;
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            for (j, cj) in self.amps.iter().enumerate() {
                let c = self.k0 + j;
                let d = (c as i64 + shift) as usize;
                acc += sign * ci * cj * (d1[(c, a)] * d2[(d, b)]).re;
            }
        }
        Ok(acc / (PI * PI * p))
    }
}
