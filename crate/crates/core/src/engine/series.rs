use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::special::factorial;
use crate::error::{domain, Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 8;

/// prefactor * exp(u^T M u + b^T u) over the variables (u1, v1, u2, v2).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExp {
    m: Matrix4<Complex64>,
    b: Vector4<Complex64>,
    prefactor: Complex64,
}

impl QuadExp {
    pub const DIM: usize = 4;

    pub fn new(m: Matrix4<Complex64>, b: Vector4<Complex64>, prefactor: Complex64) -> Result<Self> {
        if m != m.transpose() {
            return domain("kernel matrix must be symmetric");
        }
        Ok(Self { m, b, prefactor })
    }

    pub fn from_real(m: &Matrix4<f64>, prefactor: f64) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)), Vector4::zeros(), Complex64::new(prefactor, 0.0))
    }

    pub fn m(&self) -> &Matrix4<Complex64> {
        &self.m
    }

    pub fn b(&self) -> &Vector4<Complex64> {
        &self.b
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn with_prefactor(mut self, prefactor: Complex64) -> Self {
        self.prefactor = prefactor;
        self
    }

    /// Direct evaluation at a point u.
    pub fn eval(&self, u: &Vector4<Complex64>) -> Complex64 {
        let quad = (u.transpose() * self.m * u)[(0, 0)];
        let lin = (self.b.transpose() * u)[(0, 0)];
        self.prefactor * (quad + lin).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerivOrder {
    pub m: usize,
    pub n: usize,
}

impl DerivOrder {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }
}

/// Dense polynomial in (u1, v1, u2, v2) truncated at per-variable degree caps.
struct TruncPoly {
    caps: [usize; 4],
    coef: Vec<Complex64>,
}

impl TruncPoly {
    fn one(caps: [usize; 4]) -> Self {
        let len = caps.iter().map(|c| c + 1).product();
        let mut coef = vec![Complex64::new(0.0, 0.0); len];
        coef[0] = Complex64::new(1.0, 0.0);
        Self { caps, coef }
    }

    fn index(&self, e: [usize; 4]) -> usize {
        let c = &self.caps;
        ((e[0] * (c[1] + 1) + e[1]) * (c[2] + 1) + e[2]) * (c[3] + 1) + e[3]
    }

    fn exponents(&self, mut idx: usize) -> [usize; 4] {
        let mut e = [0; 4];
        for k in (0..4).rev() {
            let w = self.caps[k] + 1;
            e[k] = idx % w;
            idx /= w;
        }
        e
    }

    /// Multiply in place by exp(c * mono), mono given as an exponent vector.
    fn mul_exp_monomial(&mut self, c: Complex64, mono: [usize; 4]) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coef.len()];
        for idx in 0..self.coef.len() {
            let v = self.coef[idx];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut e = self.exponents(idx);
            let mut term = v;
            let mut k = 0usize;
            loop {
                out[self.index(e)] += term;
                k += 1;
                let mut fits = true;
                for j in 0..4 {
                    e[j] += mono[j];
                    fits &= e[j] <= self.caps[j];
                }
                if !fits {
                    break;
                }
                term = term * c / k as f64;
            }
        }
        self.coef = out;
    }
}

/// D1 applied to the kernel at the origin, including the (-2)^{m+n}/(m! n!) prefactor.
pub fn deriv_extract(kernel: &QuadExp, order: DerivOrder) -> Result<Complex64> {
    deriv_extract_with_cap(kernel, order, DEFAULT_ORDER_CAP)
}

pub fn deriv_extract_with_cap(kernel: &QuadExp, order: DerivOrder, cap: usize) -> Result<Complex64> {
    let DerivOrder { m, n } = order;
    if m > cap || n > cap {
        return Err(Error::OrderTooLarge { m, n, cap });
    }
    let caps = [m, m, n, n];
    let mut poly = TruncPoly::one(caps);
    for i in 0..4 {
        let mut mono = [0; 4];
        mono[i] = 1;
        poly.mul_exp_monomial(kernel.b[i], mono);
    }
    for i in 0..4 {
        for j in i..4 {
            let mut mono = [0; 4];
            mono[i] += 1;
            mono[j] += 1;
            let c = if i == j { kernel.m[(i, i)] } else { kernel.m[(i, j)] + kernel.m[(j, i)] };
            poly.mul_exp_monomial(c, mono);
        }
    }
    let top = poly.coef[poly.index(caps)];
    let scale = (-2.0f64).powi((m + n) as i32) * factorial(m) * factorial(n);
    Ok(kernel.prefactor * top * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeroth_order_is_prefactor() {
        let k = QuadExp::new(Matrix4::zeros(), Vector4::zeros(), c(2.5, -1.0)).unwrap();
        assert_eq!(deriv_extract(&k, DerivOrder::new(0, 0)).unwrap(), c(2.5, -1.0));
    }

    #[test]
    fn single_coupling() {
        let alpha = c(0.7, 0.2);
        let mut m = Matrix4::zeros();
        m[(0, 1)] = alpha;
        m[(1, 0)] = alpha;
        let k = QuadExp::new(m, Vector4::zeros(), c(1.0, 0.0)).unwrap();
        let got = deriv_extract(&k, DerivOrder::new(1, 0)).unwrap();
        assert!((got - (-2.0) * 2.0 * alpha).norm() < 1e-15);
    }

    #[test]
    fn linear_only_is_monomial() {
        let b = Vector4::new(c(0.3, 0.1), c(-1.2, 0.0), c(0.5, -0.5), c(2.0, 0.3));
        let k = QuadExp::new(Matrix4::zeros(), b, c(1.5, 0.0)).unwrap();
        let (m, n) = (2usize, 3usize);
        let expect = c(1.5, 0.0) * (-2.0f64).powi(5) / (factorial(m) * factorial(n))
            * b[0].powu(2)
            * b[1].powu(2)
            * b[2].powu(3)
            * b[3].powu(3);
        let got = deriv_extract(&k, DerivOrder::new(m, n)).unwrap();
        assert!((got - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn order_cap() {
        let k = QuadExp::new(Matrix4::zeros(), Vector4::zeros(), c(1.0, 0.0)).unwrap();
        assert_eq!(deriv_extract(&k, DerivOrder::new(9, 0)), Err(Error::OrderTooLarge { m: 9, n: 0, cap: 8 }));
        assert!(deriv_extract(&k, DerivOrder::new(8, 8)).is_ok());
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = Matrix4::zeros();
        m[(0, 2)] = c(1.0, 0.0);
        assert!(QuadExp::new(m, Vector4::zeros(), c(1.0, 0.0)).is_err());
    }
}
