//! Dense truncated-Fock operators. Practical only at small cutoffs; the block
//! representation in `density` covers production cutoffs.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector4};
use num_complex::Complex64;

use super::displacement::displacement_matrix;
use super::DEFAULT_EPS_TAIL;
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub cutoff: usize,
    pub modes: usize,
    pub data: DMatrix<Complex64>,
    /// Probability mass lost to truncation (0 for unitaries).
    pub tail: f64,
}

impl FockOperator {
    fn real(cutoff: usize, modes: usize, m: DMatrix<f64>, tail: f64) -> Self {
        Self { cutoff, modes, data: m.map(|x| Complex64::new(x, 0.0)), tail }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// max |U†U − 1| over basis states with total photon number ≤ limit.
    pub fn unitarity_residual(&self, limit: usize) -> f64 {
        let g = self.data.adjoint() * &self.data;
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| photon_total(i, self.cutoff, self.modes) <= limit).collect();
        let mut worst = 0.0f64;
        for &i in &keep {
            for &j in &keep {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - id).norm());
            }
        }
        worst
    }
}

fn photon_total(mut idx: usize, cutoff: usize, modes: usize) -> usize {
    let mut s = 0;
    for _ in 0..modes {
        s += idx % cutoff;
        idx /= cutoff;
    }
    s
}

pub fn annihilation(cutoff: usize) -> DMatrix<f64> {
    DMatrix::from_fn(cutoff, cutoff, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

fn number_parity(cutoff: usize) -> DMatrix<f64> {
    DMatrix::from_fn(cutoff, cutoff, |i, j| {
        if i == j {
            if i % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    })
}

pub fn thermal_weights(n_th: f64, cutoff: usize) -> (Vec<f64>, f64) {
    let p: Vec<f64> = (0..cutoff).map(|k| n_th.powi(k as i32) / (1.0 + n_th).powi(k as i32 + 1)).collect();
    let tail = (n_th / (1.0 + n_th)).powi(cutoff as i32);
    (p, tail)
}

pub fn thermal_density(n_th: f64, cutoff: usize) -> Result<FockOperator> {
    thermal_density_with_tol(n_th, cutoff, DEFAULT_EPS_TAIL)
}

pub fn thermal_density_with_tol(n_th: f64, cutoff: usize, eps_tail: f64) -> Result<FockOperator> {
    if !(n_th >= 0.0) || cutoff < 2 {
        return domain("thermal density needs n_th >= 0 and cutoff >= 2");
    }
    let (p, tail) = thermal_weights(n_th, cutoff);
    if tail > eps_tail {
        return Err(Error::TailTooLarge { tail, eps: eps_tail, cutoff });
    }
    Ok(FockOperator::real(cutoff, 1, DMatrix::from_diagonal(&p.into()), tail))
}

pub fn two_mode_squeeze_unitary(r: f64, cutoff: usize) -> Result<FockOperator> {
    two_mode_squeeze_unitary_with_tol(r, cutoff, DEFAULT_EPS_TAIL)
}

pub fn two_mode_squeeze_unitary_with_tol(r: f64, cutoff: usize, eps_tail: f64) -> Result<FockOperator> {
    let tail = r.tanh().abs().powi(cutoff as i32);
    if tail >= eps_tail {
        return Err(Error::TailTooLarge { tail, eps: eps_tail, cutoff });
    }
    let a = annihilation(cutoff);
    let id = DMatrix::identity(cutoff, cutoff);
    let a1 = a.kronecker(&id);
    let a2 = id.kronecker(&a);
    let gen = (a1.transpose() * a2.transpose() - &a1 * &a2) * r;
    Ok(FockOperator::real(cutoff, 2, gen.exp(), 0.0))
}

/// exp(θ(a†f − a f†)) on (mode, ancilla), cos θ = √τ.
pub fn beamsplitter_unitary(tau: f64, cutoff: usize) -> Result<FockOperator> {
    if !(0.0..=1.0).contains(&tau) {
        return domain(format!("transmissivity {tau} outside [0, 1]"));
    }
    let theta = tau.sqrt().acos();
    let a = annihilation(cutoff);
    let id = DMatrix::identity(cutoff, cutoff);
    let am = a.kronecker(&id);
    let f = id.kronecker(&a);
    let gen = (am.transpose() * &f - &am * f.transpose()) * theta;
    Ok(FockOperator::real(cutoff, 2, gen.exp(), 0.0))
}

/// exp(−iθ J2) = exp(−(θ/2)(a1†a2 − a1 a2†)).
pub fn mzi_unitary(theta: f64, cutoff: usize) -> FockOperator {
    let a = annihilation(cutoff);
    let id = DMatrix::identity(cutoff, cutoff);
    let a1 = a.kronecker(&id);
    let a2 = id.kronecker(&a);
    let gen = (a1.transpose() * &a2 - &a1 * a2.transpose()) * (-theta / 2.0);
    FockOperator::real(cutoff, 2, gen.exp(), 0.0)
}

/// U (ρ_th ⊗ ρ_th) U† on the dense two-mode space.
pub fn tmst_density_dense(r: f64, n_th: f64, cutoff: usize, eps_tail: f64) -> Result<FockOperator> {
    let th = thermal_density_with_tol(n_th, cutoff, eps_tail)?;
    let u = two_mode_squeeze_unitary_with_tol(r, cutoff, eps_tail)?;
    let rho = th.data.kronecker(&th.data);
    let out = &u.data * rho * u.data.adjoint();
    Ok(FockOperator { cutoff, modes: 2, data: out, tail: 1.0 - (1.0 - th.tail).powi(2) })
}

/// Mix mode 2 with |m> on a beamsplitter and project the ancilla onto |n>.
pub fn herald_dense(rho: &FockOperator, tau: f64, m: usize, n: usize) -> Result<(FockOperator, f64)> {
    let nc = rho.cutoff;
    if m >= nc || n >= nc {
        return domain("ancilla photon numbers must be below the cutoff");
    }
    let bs = beamsplitter_unitary(tau, nc)?;
    let k = DMatrix::from_fn(nc, nc, |bp, b| bs.data[(bp * nc + n, b * nc + m)]);
    let kk = DMatrix::<Complex64>::identity(nc, nc).kronecker(&k);
    let out = &kk * &rho.data * kk.adjoint();
    let p = out.trace().re;
    if p < 1e-14 {
        return Err(Error::NegligibleProbability(p));
    }
    Ok((FockOperator { cutoff: nc, modes: 2, data: out / Complex64::new(p, 0.0), tail: rho.tail / p }, p))
}

pub fn parity_dense(rho: &FockOperator, theta: f64) -> f64 {
    let nc = rho.cutoff;
    let u = mzi_unitary(theta, nc).data;
    let pi2 = DMatrix::<f64>::identity(nc, nc).kronecker(&number_parity(nc)).map(|x| Complex64::new(x, 0.0));
    (&u * &rho.data * u.adjoint() * pi2).trace().re
}

/// (1/π²) Tr[ρ D(ξ) Π D(ξ)†] with displacements by matrix exponential.
pub fn wigner_dense(rho: &FockOperator, xi: &Vector4<f64>) -> f64 {
    let nc = rho.cutoff;
    let b1 = Complex64::new(xi[0], xi[1]) * std::f64::consts::SQRT_2;
    let b2 = Complex64::new(xi[2], xi[3]) * std::f64::consts::SQRT_2;
    let d = displacement_matrix(b1, nc).kronecker(&displacement_matrix(b2, nc));
    let par = number_parity(nc).kronecker(&number_parity(nc)).map(|x| Complex64::new(x, 0.0));
    (&rho.data * d * par).trace().re / (PI * PI)
}
