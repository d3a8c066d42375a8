//! Two-mode Gaussian states and symplectic maps, ordering (q1, p1, q2, p2), vacuum variance 1/2.

use std::f64::consts::PI;
use std::ops::Mul;

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector4};

use crate::engine::laguerre;
use crate::error::{domain, Error, Result};

const SYMPLECTIC_TOL: f64 = 1e-12;
const UNCERTAINTY_TOL: f64 = 1e-12;

pub fn omega() -> Matrix4<f64> {
    let w = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let mut o = Matrix4::zeros();
    o.fixed_view_mut::<2, 2>(0, 0).copy_from(&w);
    o.fixed_view_mut::<2, 2>(2, 2).copy_from(&w);
    o
}

fn blocks(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>, d: Matrix2<f64>) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    s.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    s.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticTransform {
    s: Matrix4<f64>,
}

impl SymplecticTransform {
    pub fn new(s: Matrix4<f64>) -> Result<Self> {
        let t = Self { s };
        let scale = s.norm().powi(2).max(1.0);
        if t.symplectic_residual() > SYMPLECTIC_TOL * scale {
            return domain("matrix is not symplectic");
        }
        Ok(t)
    }

    pub fn identity() -> Self {
        Self { s: Matrix4::identity() }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.s
    }

    /// max |S Ω S^T − Ω|
    pub fn symplectic_residual(&self) -> f64 {
        (self.s * omega() * self.s.transpose() - omega()).abs().max()
    }

    pub fn inverse(&self) -> Self {
        // S^{-1} = -Ω S^T Ω for symplectic S
        Self { s: -omega() * self.s.transpose() * omega() }
    }
}

impl Mul for SymplecticTransform {
    type Output = SymplecticTransform;

    fn mul(self, rhs: Self) -> Self {
        Self { s: self.s * rhs.s }
    }
}

pub fn two_mode_squeezer(r: f64) -> SymplecticTransform {
    let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let (c, s) = (r.cosh(), r.sinh());
    SymplecticTransform { s: blocks(Matrix2::identity() * c, z * s, z * s, Matrix2::identity() * c) }
}

pub fn beamsplitter(tau: f64) -> Result<SymplecticTransform> {
    if !(0.0..=1.0).contains(&tau) {
        return domain(format!("transmissivity {tau} outside [0, 1]"));
    }
    let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
    let i = Matrix2::identity();
    Ok(SymplecticTransform { s: blocks(i * t, i * r, -i * r, i * t) })
}

pub fn mzi_transform(phi: f64) -> SymplecticTransform {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let i = Matrix2::identity();
    SymplecticTransform { s: blocks(i * c, -i * s, i * s, i * c) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    d: Vector4<f64>,
    v: Matrix4<f64>,
}

impl GaussianState {
    pub fn new(d: Vector4<f64>, v: Matrix4<f64>) -> Result<Self> {
        if (v - v.transpose()).abs().max() > 1e-12 * v.abs().max().max(1.0) {
            return domain("covariance matrix is not symmetric");
        }
        let st = Self { d, v };
        let low = st.uncertainty_min_eigenvalue();
        if low < -UNCERTAINTY_TOL * v.abs().max().max(1.0) {
            return domain(format!("covariance violates the uncertainty principle (eigenvalue {low:e})"));
        }
        Ok(st)
    }

    pub fn vacuum() -> Self {
        Self { d: Vector4::zeros(), v: Matrix4::identity() * 0.5 }
    }

    pub fn thermal(kappa: f64) -> Result<Self> {
        if kappa < 0.5 {
            return domain(format!("kappa {kappa} < 1/2"));
        }
        Ok(Self { d: Vector4::zeros(), v: Matrix4::identity() * kappa })
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.d
    }

    pub fn covariance(&self) -> &Matrix4<f64> {
        &self.v
    }

    /// Smallest eigenvalue of V + (i/2)Ω, via its real 8×8 embedding.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let half_omega = omega() * 0.5;
        let mut big = SMatrix::<f64, 8, 8>::zeros();
        big.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.v);
        big.fixed_view_mut::<4, 4>(4, 4).copy_from(&self.v);
        big.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-half_omega));
        big.fixed_view_mut::<4, 4>(4, 0).copy_from(&half_omega);
        big.symmetric_eigen().eigenvalues.min()
    }
}

pub fn apply(s: &SymplecticTransform, state: &GaussianState) -> GaussianState {
    let v = s.s * state.v * s.s.transpose();
    GaussianState { d: s.s * state.d, v: (v + v.transpose()) * 0.5 }
}

pub fn kappa_from_n_th(n_th: f64) -> f64 {
    n_th + 0.5
}

pub fn tmst_state(r: f64, n_th: f64) -> Result<GaussianState> {
    if !(n_th >= 0.0) {
        return domain(format!("thermal occupancy {n_th} < 0"));
    }
    let th = GaussianState::thermal(kappa_from_n_th(n_th))?;
    Ok(apply(&two_mode_squeezer(r), &th))
}

pub fn wigner_gaussian(state: &GaussianState, xi: &Vector4<f64>) -> Result<f64> {
    let det = state.v.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularCovariance(det));
    }
    let inv = state.v.try_inverse().ok_or(Error::SingularCovariance(det))?;
    let x = xi - state.d;
    let quad = (x.transpose() * inv * x)[(0, 0)];
    Ok((-0.5 * quad).exp() / ((2.0 * PI).powi(2) * det.sqrt()))
}

/// Closed-form TMST Wigner function in terms of the squeezing r and κ.
pub fn tmst_wigner(r: f64, kappa: f64, xi: &Vector4<f64>) -> f64 {
    let (q1, p1, q2, p2) = (xi[0], xi[1], xi[2], xi[3]);
    let arg = -(q1 * q1 + p1 * p1 + q2 * q2 + p2 * p2) * (2.0 * r).cosh() / (2.0 * kappa)
        + (q1 * q2 - p1 * p2) * (2.0 * r).sinh() / kappa;
    arg.exp() / (2.0 * PI * kappa).powi(2)
}

pub fn fock_wigner(n: usize, q: f64, p: f64) -> f64 {
    let rho2 = q * q + p * p;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / PI * (-rho2).exp() * laguerre(n, 2.0 * rho2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix4<f64>, b: &Matrix4<f64>, tol: f64) -> bool {
        (a - b).abs().max() <= tol
    }

    #[test]
    fn squeezer_values() {
        assert_eq!(*two_mode_squeezer(0.0).matrix(), Matrix4::identity());
        let s = two_mode_squeezer(1.0);
        let m = s.matrix();
        assert!((m[(0, 0)] - 1.0f64.cosh()).abs() < 1e-15);
        assert!((m[(0, 2)] - 1.0f64.sinh()).abs() < 1e-15);
        assert!((m[(1, 3)] + 1.0f64.sinh()).abs() < 1e-15);
        assert!(s.symplectic_residual() < 1e-12);
    }

    #[test]
    fn beamsplitter_values() {
        assert_eq!(*beamsplitter(1.0).unwrap().matrix(), Matrix4::identity());
        let b0 = beamsplitter(0.0).unwrap();
        assert_eq!(b0.matrix()[(0, 2)], 1.0);
        assert_eq!(b0.matrix()[(2, 0)], -1.0);
        let h = beamsplitter(0.5).unwrap();
        assert!(h.matrix().iter().all(|x| *x == 0.0 || (x.abs() - 0.5f64.sqrt()).abs() < 1e-15));
        assert!(beamsplitter(1.2).is_err());
        assert!(beamsplitter(-0.1).is_err());
    }

    #[test]
    fn mzi_values() {
        assert_eq!(*mzi_transform(0.0).matrix(), Matrix4::identity());
        let m = mzi_transform(PI);
        assert!((m.matrix()[(0, 2)] + 1.0).abs() < 1e-15);
        assert!((m.matrix()[(2, 0)] - 1.0).abs() < 1e-15);
        assert!(m.matrix()[(0, 0)].abs() < 1e-15);
        assert!(m.symplectic_residual() < 1e-12);
    }

    #[test]
    fn tmst_covariances() {
        let vac = tmst_state(0.0, 0.0).unwrap();
        assert!(close(vac.covariance(), &(Matrix4::identity() * 0.5), 1e-15));
        let k1 = tmst_state(0.0, 0.5).unwrap();
        assert!(close(k1.covariance(), &Matrix4::identity(), 1e-15));
        let v = *tmst_state(1.0, 0.0).unwrap().covariance();
        let (ch, sh) = (2.0f64.cosh() / 2.0, 2.0f64.sinh() / 2.0);
        assert!((v[(0, 0)] - ch).abs() < 1e-12);
        assert!((v[(0, 2)] - sh).abs() < 1e-12);
        assert!((v[(1, 3)] + sh).abs() < 1e-12);
        assert!(tmst_state(1.0, -0.1).is_err());
    }

    #[test]
    fn wigner_values() {
        let w = wigner_gaussian(&GaussianState::vacuum(), &Vector4::zeros()).unwrap();
        assert!((w - 1.0 / PI.powi(2)).abs() < 1e-15);
        let st = tmst_state(1.0, 0.5).unwrap();
        let w = wigner_gaussian(&st, &Vector4::zeros()).unwrap();
        assert!((w - 1.0 / (2.0 * PI).powi(2)).abs() < 1e-12);
        let bad = GaussianState { d: Vector4::zeros(), v: Matrix4::zeros() };
        assert!(matches!(wigner_gaussian(&bad, &Vector4::zeros()), Err(Error::SingularCovariance(_))));
    }

    #[test]
    fn fock_wigner_values() {
        assert!((fock_wigner(0, 0.0, 0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((fock_wigner(1, 0.0, 0.0) + 1.0 / PI).abs() < 1e-15);
        // L2(2) = 1 - 4 + 2 = -1
        assert!((fock_wigner(2, 1.0, 0.0) + (-1.0f64).exp() / PI).abs() < 1e-15);
    }

    #[test]
    fn apply_round_trips() {
        let st = tmst_state(0.8, 0.3).unwrap();
        assert_eq!(apply(&SymplecticTransform::identity(), &st), st);
        let back = apply(&mzi_transform(-0.7), &apply(&mzi_transform(0.7), &st));
        assert!(close(back.covariance(), st.covariance(), 1e-12));
        let th = GaussianState::thermal(1.3).unwrap();
        let direct = tmst_state(0.4, 0.8).unwrap();
        assert!(close(apply(&two_mode_squeezer(0.4), &th).covariance(), direct.covariance(), 1e-14));
    }

    #[test]
    fn inverse_is_inverse() {
        let s = two_mode_squeezer(0.6) * beamsplitter(0.3).unwrap() * mzi_transform(1.1);
        assert!(close(&(s.inverse() * s).matrix().clone(), &Matrix4::identity(), 1e-12));
    }
}
