//! Heralded non-Gaussian TMST states: coefficients, Wigner function, success probability.
//!
//! Symbols: λ squeezing parameter, κ = n_th + 1/2, τ transmissivity of the heralding
//! beamsplitter, m ancilla photons, n detected photons. `r_bs` = √(1−τ) is the
//! beamsplitter reflection amplitude and never the squeezing strength.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{
    deriv_extract, deriv_extract_with_cap, factorial, hermite_2var_scaled, DerivOrder, QuadExp, DEFAULT_ORDER_CAP,
};
use crate::error::{domain, Error, Result};

pub const PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NgParams {
    pub lambda: f64,
    pub kappa: f64,
    pub tau: f64,
    pub m: usize,
    pub n: usize,
}

impl NgParams {
    pub fn new(lambda: f64, kappa: f64, tau: f64, m: usize, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return domain(format!("lambda {lambda} outside [0, 1)"));
        }
        if !(kappa >= 0.5) || !kappa.is_finite() {
            return domain(format!("kappa {kappa} < 1/2"));
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return domain(format!("tau {tau} outside (0, 1]"));
        }
        Ok(Self { lambda, kappa, tau, m, n })
    }

    /// From squeezing strength r_sq (λ = tanh r_sq) and thermal occupancy n_th.
    pub fn from_physical(r_sq: f64, n_th: f64, tau: f64, m: usize, n: usize) -> Result<Self> {
        if !(r_sq >= 0.0) || !r_sq.is_finite() {
            return domain(format!("squeezing {r_sq} must be finite and non-negative"));
        }
        if !(n_th >= 0.0) {
            return domain(format!("thermal occupancy {n_th} < 0"));
        }
        Self::new(r_sq.tanh(), n_th + 0.5, tau, m, n)
    }

    pub fn tmst(lambda: f64, kappa: f64) -> Result<Self> {
        Self::new(lambda, kappa, 1.0, 0, 0)
    }

    pub fn r_sq(&self) -> f64 {
        self.lambda.atanh()
    }

    pub fn n_th(&self) -> f64 {
        self.kappa - 0.5
    }

    pub fn mu2(&self) -> f64 {
        1.0 - self.lambda * self.lambda
    }

    pub fn t(&self) -> f64 {
        self.tau.sqrt()
    }

    pub fn r_bs(&self) -> f64 {
        (1.0 - self.tau).sqrt()
    }

    pub fn big_t(&self) -> f64 {
        1.0 + self.tau
    }

    pub fn big_lambda(&self) -> f64 {
        1.0 + self.lambda * self.lambda
    }

    pub fn op_kind(&self) -> OpKind {
        OpKind::classify(self.m, self.n)
    }

    /// True when the heralding leaves the TMST untouched (τ = 1 catalysis).
    pub fn is_identity_operation(&self) -> bool {
        self.tau == 1.0 && self.m == self.n
    }

    pub fn order(&self) -> DerivOrder {
        DerivOrder::new(self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    #[serde(rename = "PS")]
    Subtraction,
    #[serde(rename = "PA")]
    Addition,
    #[serde(rename = "PC")]
    Catalysis,
}

impl OpKind {
    pub fn classify(m: usize, n: usize) -> Self {
        match m.cmp(&n) {
            std::cmp::Ordering::Less => OpKind::Subtraction,
            std::cmp::Ordering::Greater => OpKind::Addition,
            std::cmp::Ordering::Equal => OpKind::Catalysis,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OpKind::Subtraction => "PS",
            OpKind::Addition => "PA",
            OpKind::Catalysis => "PC",
        }
    }
}

impl std::fmt::Display for OpKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Wigner-function coefficients at one phase point. `c[k]` holds c_{k+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerCoefficients {
    pub a: [Complex64; 8],
    pub b: [f64; 5],
    pub c: [f64; 3],
    pub m1: Matrix4<f64>,
}

/// Success-probability coefficients d_0..d_4 and M2.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCoefficients {
    pub d: [f64; 5],
    pub m2: Matrix4<f64>,
}

/// Parity coefficients at one MZI phase. `f[k]` holds f_{k+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityCoefficients {
    pub e: [f64; 8],
    pub f: [f64; 6],
    pub m3: Matrix4<f64>,
}

fn pattern_a(x1: f64, x2: f64, x3: f64, x4: f64) -> Matrix4<f64> {
    Matrix4::new(
        0.0, x1, 0.0, x2, //
        x1, 0.0, x2, 0.0, //
        0.0, x2, 0.0, x3, //
        x2, 0.0, x3, 0.0,
    ) * (1.0 / x4)
}

pub fn coefficients_wigner(p: &NgParams, xi: &Vector4<f64>) -> WignerCoefficients {
    let k = p.kappa;
    let lam = p.lambda;
    let mu2 = p.mu2();
    let t = p.t();
    let r = p.r_bs();
    let r2 = 1.0 - p.tau;
    let tt = p.big_t();
    let ll = p.big_lambda();
    let (q1, p1, q2, p2) = (xi[0], xi[1], xi[2], xi[3]);

    let b0 = -2.0 * k * (2.0 * k * mu2 * tt + ll * r2);
    let b1 = 2.0 * k * lam * r * t;
    let b2 = -k * r * (2.0 * k * mu2 + ll);
    let b3 = 2.0 * k * lam * r;
    let b4 = k * r * t * (2.0 * k * mu2 - ll);

    let z1 = Complex64::new(q1, p1);
    let z2 = Complex64::new(q2, p2);
    let lin_minus = |x: f64, y: f64| (z1.conj() * x + z2 * y) * (2.0 / b0);
    let lin_plus = |x: f64, y: f64| -(z1 * x + z2.conj() * y) * (2.0 / b0);

    let a0 = PI * PI * k * (2.0 * k * mu2 * tt + ll * r2) / mu2;
    let a1 = k * r2 * (2.0 * k * mu2 + ll) / b0;
    let a4 = -k * r2 * (2.0 * k * mu2 - ll) / b0;
    let a7 = 4.0 * k * k * mu2 * t / b0;
    let a = [
        Complex64::new(a0, 0.0),
        Complex64::new(a1, 0.0),
        lin_minus(b1, b2),
        lin_plus(b1, b2),
        Complex64::new(a4, 0.0),
        lin_minus(b3, b4),
        lin_plus(b3, b4),
        Complex64::new(a7, 0.0),
    ];

    let c1 = 2.0 * k * ll * tt + mu2 * r2;
    let c2 = -8.0 * k * lam * t;
    let c3 = 2.0 * k * ll * tt + 4.0 * k * k * mu2 * r2;
    let m1 = Matrix4::new(
        c1, 0.0, c2, 0.0, //
        0.0, c1, 0.0, -c2, //
        c2, 0.0, c3, 0.0, //
        0.0, -c2, 0.0, c3,
    ) * (1.0 / b0);

    WignerCoefficients { a, b: [b0, b1, b2, b3, b4], c: [c1, c2, c3], m1 }
}

pub fn coefficients_probability(p: &NgParams) -> ProbabilityCoefficients {
    let k = p.kappa;
    let mu2 = p.mu2();
    let t = p.t();
    let r2 = 1.0 - p.tau;
    let tt = p.big_t();
    let ll = p.big_lambda();

    let d0 = 2.0 * mu2 / (2.0 * k * ll * r2 + mu2 * tt);
    let d1 = -r2 * (mu2 + 2.0 * k * ll);
    let d2 = -2.0 * mu2 * t;
    let d3 = r2 * (mu2 - 2.0 * k * ll);
    let d4 = 8.0 * k * ll * r2 + 4.0 * mu2 * tt;
    ProbabilityCoefficients { d: [d0, d1, d2, d3, d4], m2: pattern_a(d1, d2, d3, d4) }
}

pub fn coefficients_parity(p: &NgParams, phi: f64) -> ParityCoefficients {
    let k = p.kappa;
    let lam = p.lambda;
    let mu2 = p.mu2();
    let t = p.t();
    let r2 = 1.0 - p.tau;
    let tt = p.big_t();
    let ll = p.big_lambda();
    let (c1, s1, s2) = (phi.cos(), phi.sin(), (2.0 * phi).sin());

    let f1 = 4.0 * k * k - 1.0;
    let f2 = 4.0 * k * k + 1.0;
    let f3 = c1 * f1 - f2;
    let f4 = f2 * mu2 + 4.0 * k * ll;
    let f5 = f2 * mu2 - 4.0 * k * ll;
    let f6 = f3 * mu2 * r2 - 4.0 * k * ll * tt;

    let e7 = 4.0 * ((4.0 * k * ll * tt - f3 * mu2 * r2).powi(2) - (16.0 * k * lam * s1 * t).powi(2));
    let e0 = 8.0 * mu2 / e7.sqrt();
    let e1 = 8.0 * k * lam * r2 * t * (s2 * f4 - 2.0 * s1 * f1 * mu2);
    let e2 = f6 * r2 * (f1 * mu2 - c1 * f4);
    let e3 = 8.0 * k * lam * r2 * s1 * (4.0 * k * ll * r2 - f3 * mu2 * tt);
    let e4 = -8.0 * k * t * (-ll * mu2 * r2 * f3 + 4.0 * k * tt * (ll * ll - 4.0 * lam * lam * s1 * s1));
    let e5 = 8.0 * k * lam * r2 * t * (s2 * f5 - 2.0 * s1 * f1 * mu2);
    let e6 = f6 * r2 * (f1 * mu2 - c1 * f5);

    let m3 = Matrix4::new(
        e1, e2, e3, e4, //
        e2, e1, e4, e3, //
        e3, e4, e5, e6, //
        e4, e3, e6, e5,
    ) * (1.0 / e7);
    ParityCoefficients { e: [e0, e1, e2, e3, e4, e5, e6, e7], f: [f1, f2, f3, f4, f5, f6], m3 }
}

/// Kernel exp(u^T M u + b^T u) acted on by D1 in the Wigner function.
pub fn wigner_kernel(c: &WignerCoefficients) -> QuadExp {
    let zero = Complex64::new(0.0, 0.0);
    let a = &c.a;
    let mut m = Matrix4::from_element(zero);
    m[(0, 1)] = -a[1] / 2.0;
    m[(1, 0)] = -a[1] / 2.0;
    m[(2, 3)] = -a[4] / 2.0;
    m[(3, 2)] = -a[4] / 2.0;
    m[(0, 3)] = a[7] / 2.0;
    m[(3, 0)] = a[7] / 2.0;
    m[(1, 2)] = a[7] / 2.0;
    m[(2, 1)] = a[7] / 2.0;
    let b = Vector4::new(a[2], a[3], a[5], a[6]);
    QuadExp::new(m, b, Complex64::new(1.0, 0.0)).expect("kernel is symmetric by construction")
}

/// Largest eigenvalue of M1; must be negative for the Wigner function to decay.
pub fn m1_max_eigenvalue(p: &NgParams) -> f64 {
    let c = coefficients_wigner(p, &Vector4::zeros());
    c.m1.symmetric_eigen().eigenvalues.max()
}

fn check_decay(p: &NgParams) -> Result<()> {
    let top = m1_max_eigenvalue(p);
    if top < 0.0 {
        Ok(())
    } else {
        Err(Error::NonDecayingKernel(top))
    }
}

/// Unnormalized Wigner function, complex before the real projection.
pub fn wigner_unnormalized_complex(p: &NgParams, xi: &Vector4<f64>) -> Result<Complex64> {
    let c = coefficients_wigner(p, xi);
    let gauss = (xi.transpose() * c.m1 * xi)[(0, 0)].exp() / c.a[0].re;
    Ok(deriv_extract(&wigner_kernel(&c), p.order())? * gauss)
}

pub fn wigner_unnormalized(p: &NgParams, xi: &Vector4<f64>) -> Result<f64> {
    check_decay(p)?;
    Ok(wigner_unnormalized_complex(p, xi)?.re)
}

/// The same quantity as a finite double sum of two-variable Hermite polynomials.
pub fn wigner_unnormalized_hermite(p: &NgParams, xi: &Vector4<f64>) -> Result<Complex64> {
    let (m, n) = (p.m, p.n);
    let c = coefficients_wigner(p, xi);
    let a = &c.a;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..=m.min(n) {
        for j in 0..=m.min(n) {
            let g1 = hermite_2var_scaled(m - i, m - j, a[2], a[3], a[1]);
            let g2 = hermite_2var_scaled(n - j, n - i, a[5], a[6], a[4]);
            let w = factorial(m) * factorial(m) * factorial(n) * factorial(n)
                / (factorial(i)
                    * factorial(j)
                    * factorial(m - i)
                    * factorial(m - j)
                    * factorial(n - i)
                    * factorial(n - j));
            sum += a[7].powu((i + j) as u32) * w * g1 * g2;
        }
    }
    let pref = (-2.0f64).powi((m + n) as i32) / (factorial(m) * factorial(n));
    let gauss = (xi.transpose() * c.m1 * xi)[(0, 0)].exp() / a[0].re;
    Ok(sum * pref * gauss)
}

pub fn success_probability(p: &NgParams) -> Result<f64> {
    success_probability_with_cap(p, DEFAULT_ORDER_CAP)
}

/// Success probability with a caller-chosen derivative-order cap (completeness sums need large n).
pub fn success_probability_with_cap(p: &NgParams, cap: usize) -> Result<f64> {
    let c = coefficients_probability(p);
    let k = QuadExp::from_real(&c.m2, c.d[0])?;
    Ok(deriv_extract_with_cap(&k, p.order(), cap)?.re)
}

pub fn wigner_normalized(p: &NgParams, xi: &Vector4<f64>) -> Result<f64> {
    NgState::new(*p)?.wigner(xi)
}

/// A heralded state with its success probability resolved once.
#[derive(Debug, Clone, Copy)]
pub struct NgState {
    params: NgParams,
    probability: f64,
}

impl NgState {
    pub fn new(params: NgParams) -> Result<Self> {
        check_decay(&params)?;
        let probability = success_probability(&params)?;
        if !(probability > PROBABILITY_FLOOR) {
            return Err(Error::NegligibleProbability(probability));
        }
        Ok(Self { params, probability })
    }

    pub fn params(&self) -> &NgParams {
        &self.params
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn wigner(&self, xi: &Vector4<f64>) -> Result<f64> {
        Ok(wigner_unnormalized_complex(&self.params, xi)?.re / self.probability)
    }
}
