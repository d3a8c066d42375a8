//! Two-mode density operators that commute with n1 − n2, stored as one block per
//! Δ = n1 − n2. Every state the oracle builds has this symmetry: thermal inputs are
//! diagonal, the squeezer conserves Δ and heralding shifts it uniformly.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use super::displacement::displacement_matrix;
use super::fock::{thermal_weights, FockOperator};
use crate::error::{domain, Error, Result};

/// Distance from the cutoff inside which diagonal mass counts as tail.
pub const BOUNDARY_MARGIN: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    /// Mode-1 photon number of the first row.
    pub a0: usize,
    pub mat: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeDensity {
    cutoff1: usize,
    cutoff2: usize,
    blocks: BTreeMap<i64, Block>,
    /// Mass lost before this state was formed (truncated thermal input).
    input_tail: f64,
}

fn block_range(delta: i64, cutoff1: usize, cutoff2: usize) -> (usize, usize) {
    let a0 = delta.max(0) as usize;
    let end = (cutoff1 as i64).min(cutoff2 as i64 + delta).max(0) as usize;
    (a0, end.max(a0))
}

/// Generator of exp(x(c1† c2 − c1 c2†)) on the fixed-total block |j, T−j>, j = 0..=T.
pub(crate) fn exchange_generator(total: usize) -> DMatrix<f64> {
    let dim = total + 1;
    let mut g = DMatrix::zeros(dim, dim);
    for j in 0..total {
        let v = (((j + 1) * (total - j)) as f64).sqrt();
        g[(j + 1, j)] = v;
        g[(j, j + 1)] = -v;
    }
    g
}

/// Beamsplitter (mode 2, ancilla) unitary per total photon number, cos θ = √τ.
#[derive(Debug, Clone)]
pub struct BeamsplitterBlocks {
    pub tau: f64,
    blocks: Vec<DMatrix<f64>>,
}

impl BeamsplitterBlocks {
    pub fn new(tau: f64, max_total: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return domain(format!("transmissivity {tau} outside [0, 1]"));
        }
        let theta = tau.sqrt().acos();
        let blocks = (0..=max_total).into_par_iter().map(|t| (exchange_generator(t) * theta).exp()).collect();
        Ok(Self { tau, blocks })
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// <b', n| U |b, m> with b' = b + m − n.
    pub fn amplitude(&self, b: usize, m: usize, n: usize) -> f64 {
        let total = b + m;
        if total < n {
            return 0.0;
        }
        self.blocks[total][(total - n, b)]
    }
}

/// Parity weights Σ_j |<j, T−j|U_MZI|a, T−a>|² (−1)^{T−j} per total T.
#[derive(Debug, Clone)]
pub struct MziWeights {
    pub theta: f64,
    weights: Vec<Vec<f64>>,
}

impl MziWeights {
    pub fn new(theta: f64, max_total: usize) -> Self {
        let weights = (0..=max_total)
            .into_par_iter()
            .map(|t| {
                let u = (exchange_generator(t) * (-theta / 2.0)).exp();
                (0..=t)
                    .map(|a| {
                        (0..=t)
                            .map(|j| {
                                let s = if (t - j) % 2 == 0 { 1.0 } else { -1.0 };
                                s * u[(j, a)] * u[(j, a)]
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Self { theta, weights }
    }

    pub fn max_total(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights[a + b][a]
    }
}

impl TwoModeDensity {
    pub fn cutoffs(&self) -> (usize, usize) {
        (self.cutoff1, self.cutoff2)
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Block> {
        &self.blocks
    }

    /// U_sq (ρ_th ⊗ ρ_th) U_sq† with U_sq = exp(r(a1†a2† − a1 a2)) truncated at `cutoff`.
    pub fn tmst(r: f64, n_th: f64, cutoff: usize) -> Result<Self> {
        if !(n_th >= 0.0) || cutoff < 2 {
            return domain("TMST needs n_th >= 0 and cutoff >= 2");
        }
        let (p, tail1) = thermal_weights(n_th, cutoff);
        let nc = cutoff as i64;
        let blocks = (-(nc - 1)..nc)
            .into_par_iter()
            .map(|delta| {
                let (a0, end) = block_range(delta, cutoff, cutoff);
                let len = end - a0;
                let mut g = DMatrix::zeros(len, len);
                for i in 0..len.saturating_sub(1) {
                    let a = a0 + i;
                    let b = (a as i64 - delta) as usize;
                    let v = (((a + 1) * (b + 1)) as f64).sqrt();
                    g[(i + 1, i)] = v;
                    g[(i, i + 1)] = -v;
                }
                let u = (g * r).exp();
                let w = DMatrix::from_fn(len, len, |i, j| {
                    if i == j {
                        let a = a0 + i;
                        p[a] * p[(a as i64 - delta) as usize]
                    } else {
                        0.0
                    }
                });
                let rho = &u * w * u.transpose();
                (delta, Block { a0, mat: rho })
            })
            .collect();
        Ok(Self { cutoff1: cutoff, cutoff2: cutoff, blocks, input_tail: 1.0 - (1.0 - tail1).powi(2) })
    }

    pub fn trace(&self) -> f64 {
        self.blocks.values().map(|b| b.mat.trace()).sum()
    }

    /// Diagonal probability P(a, b).
    pub fn populations(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.blocks.iter().flat_map(|(&delta, blk)| {
            (0..blk.mat.nrows()).map(move |i| {
                let a = blk.a0 + i;
                (a, (a as i64 - delta) as usize, blk.mat[(i, i)])
            })
        })
    }

    /// Truncation diagnostic: lost input mass plus diagonal mass near either cutoff, per unit trace.
    pub fn tail(&self) -> f64 {
        let edge: f64 = self
            .populations()
            .filter(|&(a, b, _)| a + BOUNDARY_MARGIN >= self.cutoff1 || b + BOUNDARY_MARGIN >= self.cutoff2)
            .map(|(_, _, p)| p.abs())
            .sum();
        (edge + self.input_tail) / self.trace()
    }

    /// Unnormalized conditional state after mixing mode 2 with |m> and detecting n.
    pub fn herald_branch(&self, bs: &BeamsplitterBlocks, m: usize, n: usize) -> Result<Self> {
        if self.cutoff2 - 1 + m > bs.max_total() {
            return domain("beamsplitter blocks too small for this state");
        }
        let cutoff2 = (self.cutoff2 + m).saturating_sub(n).max(1);
        let shift = m as i64 - n as i64;
        let mut blocks = BTreeMap::new();
        for (&delta, blk) in &self.blocks {
            let nd = delta - shift;
            let (a0, end) = block_range(nd, self.cutoff1, cutoff2);
            if end <= a0 {
                continue;
            }
            let k: Vec<f64> = (0..blk.mat.nrows())
                .map(|i| {
                    let b = (blk.a0 + i) as i64 - delta;
                    if b + shift < 0 {
                        0.0
                    } else {
                        bs.amplitude(b as usize, m, n)
                    }
                })
                .collect();
            let len = end - a0;
            let mut mat = DMatrix::zeros(len, len);
            for i in 0..blk.mat.nrows() {
                let ai = blk.a0 + i;
                if ai < a0 || ai >= end || k[i] == 0.0 {
                    continue;
                }
                for j in 0..blk.mat.nrows() {
                    let aj = blk.a0 + j;
                    if aj < a0 || aj >= end {
                        continue;
                    }
                    mat[(ai - a0, aj - a0)] = k[i] * k[j] * blk.mat[(i, j)];
                }
            }
            blocks.insert(nd, Block { a0, mat });
        }
        Ok(Self { cutoff1: self.cutoff1, cutoff2, blocks, input_tail: self.input_tail })
    }

    /// Normalized conditional state and the success probability.
    pub fn herald(&self, bs: &BeamsplitterBlocks, m: usize, n: usize) -> Result<(Self, f64)> {
        let mut out = self.herald_branch(bs, m, n)?;
        let p = out.trace();
        if !(p >= 1e-14) {
            return Err(Error::NegligibleProbability(p));
        }
        for blk in out.blocks.values_mut() {
            blk.mat /= p;
        }
        out.input_tail /= p;
        Ok((out, p))
    }

    /// <(−1)^{n2}> after the MZI.
    pub fn parity_after_mzi(&self, w: &MziWeights) -> Result<f64> {
        if self.cutoff1 + self.cutoff2 - 2 > w.max_total() {
            return domain("MZI weight table too small for this state");
        }
        Ok(self.populations().map(|(a, b, p)| p * w.weight(a, b)).sum())
    }

    /// (1/π²) Tr[ρ D(ξ) Π D(ξ)†] = (1/π²) Tr[ρ D(2α) Π].
    pub fn wigner_point(&self, xi: &Vector4<f64>) -> f64 {
        let b1 = Complex64::new(xi[0], xi[1]) * std::f64::consts::SQRT_2;
        let b2 = Complex64::new(xi[2], xi[3]) * std::f64::consts::SQRT_2;
        let d1 = displacement_matrix(b1, self.cutoff1);
        let d2 = displacement_matrix(b2, self.cutoff2);
        let mut acc = 0.0;
        for (&delta, blk) in &self.blocks {
            let len = blk.mat.nrows();
            for i in 0..len {
                let a = blk.a0 + i;
                let b = (a as i64 - delta) as usize;
                let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                for j in 0..len {
                    let rho = blk.mat[(i, j)];
                    if rho == 0.0 {
                        continue;
                    }
                    let c = blk.a0 + j;
                    let d = (c as i64 - delta) as usize;
                    acc += sign * rho * (d1[(c, a)] * d2[(d, b)]).re;
                }
            }
        }
        acc / (PI * PI)
    }

    /// Quadrature covariance matrix in (q1, p1, q2, p2) order.
    pub fn covariance(&self) -> Matrix4<f64> {
        let tr = self.trace();
        let (mut n1, mut n2, mut a1a2) = (0.0, 0.0, 0.0);
        for (&delta, blk) in &self.blocks {
            for i in 0..blk.mat.nrows() {
                let a = blk.a0 + i;
                let b = (a as i64 - delta) as usize;
                n1 += a as f64 * blk.mat[(i, i)];
                n2 += b as f64 * blk.mat[(i, i)];
                if i + 1 < blk.mat.nrows() {
                    a1a2 += blk.mat[(i + 1, i)] * (((a + 1) * (b + 1)) as f64).sqrt();
                }
            }
        }
        let (n1, n2, c) = (n1 / tr, n2 / tr, a1a2 / tr);
        Matrix4::new(
            n1 + 0.5,
            0.0,
            c,
            0.0, //
            0.0,
            n1 + 0.5,
            0.0,
            -c, //
            c,
            0.0,
            n2 + 0.5,
            0.0, //
            0.0,
            -c,
            0.0,
            n2 + 0.5,
        )
    }

    /// Dense embedding with a common per-mode cutoff.
    pub fn to_dense(&self) -> FockOperator {
        let nc = self.cutoff1.max(self.cutoff2);
        let mut data = DMatrix::from_element(nc * nc, nc * nc, Complex64::new(0.0, 0.0));
        for (&delta, blk) in &self.blocks {
            for i in 0..blk.mat.nrows() {
                let a = blk.a0 + i;
                let b = (a as i64 - delta) as usize;
                for j in 0..blk.mat.nrows() {
                    let c = blk.a0 + j;
                    let d = (c as i64 - delta) as usize;
                    data[(a * nc + b, c * nc + d)] = Complex64::new(blk.mat[(i, j)], 0.0);
                }
            }
        }
        FockOperator { cutoff: nc, modes: 2, data, tail: self.input_tail }
    }
}
