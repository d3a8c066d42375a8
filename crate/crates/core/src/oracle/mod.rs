//! Truncated Fock-basis brute force. Shares parameter definitions with the closed
//! forms and nothing else.

pub mod density;
pub mod displacement;
pub mod fock;
pub mod tmsv;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::Vector4;

pub use density::{BeamsplitterBlocks, MziWeights, TwoModeDensity};
pub use fock::{
    beamsplitter_unitary, herald_dense, mzi_unitary, parity_dense, thermal_density, two_mode_squeeze_unitary,
    wigner_dense, FockOperator,
};
pub use tmsv::TmsvHerald;

use crate::error::{Error, Result};

pub const DEFAULT_EPS_TAIL: f64 = 1e-10;
pub const DEFAULT_CUTOFF: usize = 40;
pub const CUTOFF_LADDER: [usize; 6] = [40, 60, 80, 100, 120, 160];
const STATE_CACHE_LIMIT: usize = 8;

#[derive(Debug, Clone)]
pub struct HeraldedState {
    pub rho: TwoModeDensity,
    pub probability: f64,
    pub cutoff: usize,
    pub tail: f64,
}

/// Oracle driver with cutoff selection and operator caches.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub eps_tail: f64,
    ladder: Vec<usize>,
    tmst: HashMap<(u64, u64, usize), Arc<TwoModeDensity>>,
    bs: HashMap<u64, Arc<BeamsplitterBlocks>>,
    mzi: HashMap<u64, Arc<MziWeights>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::auto()
    }
}

impl Oracle {
    /// Escalates the cutoff along [`CUTOFF_LADDER`] until the tail is below tolerance.
    pub fn auto() -> Self {
        Self::with_ladder(CUTOFF_LADDER.to_vec())
    }

    /// A single cutoff; insufficient cutoffs surface as `TailTooLarge`.
    pub fn fixed(cutoff: usize) -> Self {
        Self::with_ladder(vec![cutoff])
    }

    fn with_ladder(ladder: Vec<usize>) -> Self {
        Self { eps_tail: DEFAULT_EPS_TAIL, ladder, tmst: HashMap::new(), bs: HashMap::new(), mzi: HashMap::new() }
    }

    pub fn with_eps_tail(mut self, eps: f64) -> Self {
        self.eps_tail = eps;
        self
    }

    pub fn tmst(&mut self, r_sq: f64, n_th: f64, cutoff: usize) -> Result<Arc<TwoModeDensity>> {
        let key = (r_sq.to_bits(), n_th.to_bits(), cutoff);
        if let Some(s) = self.tmst.get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(TwoModeDensity::tmst(r_sq, n_th, cutoff)?);
        if self.tmst.len() >= STATE_CACHE_LIMIT {
            self.tmst.clear();
        }
        self.tmst.insert(key, s.clone());
        Ok(s)
    }

    fn beamsplitter(&mut self, tau: f64, max_total: usize) -> Result<Arc<BeamsplitterBlocks>> {
        if let Some(b) = self.bs.get(&tau.to_bits()) {
            if b.max_total() >= max_total {
                return Ok(b.clone());
            }
        }
        let b = Arc::new(BeamsplitterBlocks::new(tau, max_total)?);
        self.bs.insert(tau.to_bits(), b.clone());
        Ok(b)
    }

    fn mzi(&mut self, theta: f64, max_total: usize) -> Arc<MziWeights> {
        if let Some(w) = self.mzi.get(&theta.to_bits()) {
            if w.max_total() >= max_total {
                return w.clone();
            }
        }
        let w = Arc::new(MziWeights::new(theta, max_total));
        self.mzi.insert(theta.to_bits(), w.clone());
        w
    }

    /// TMST(r_sq, n_th) with mode 2 heralded by ancilla |m>, beamsplitter τ, detection of n.
    pub fn heralded(&mut self, r_sq: f64, n_th: f64, tau: f64, m: usize, n: usize) -> Result<HeraldedState> {
        let mut last = Error::TailTooLarge { tail: f64::INFINITY, eps: self.eps_tail, cutoff: 0 };
        for cutoff in self.ladder.clone() {
            let base = self.tmst(r_sq, n_th, cutoff)?;
            let base_tail = base.tail();
            if base_tail > self.eps_tail {
                last = Error::TailTooLarge { tail: base_tail, eps: self.eps_tail, cutoff };
                continue;
            }
            let bs = self.beamsplitter(tau, cutoff + m)?;
            let (rho, probability) = base.herald(&bs, m, n)?;
            let tail = rho.tail();
            if tail > self.eps_tail {
                last = Error::TailTooLarge { tail, eps: self.eps_tail, cutoff };
                continue;
            }
            return Ok(HeraldedState { rho, probability, cutoff, tail });
        }
        Err(last)
    }

    /// Parity of output port 2 after an MZI of phase θ.
    pub fn parity_signal(&mut self, state: &HeraldedState, theta: f64) -> Result<f64> {
        let (c1, c2) = state.rho.cutoffs();
        let w = self.mzi(theta, c1 + c2);
        state.rho.parity_after_mzi(&w)
    }

    /// Parity at the biased operating point φ + π/2.
    pub fn parity_expectation(&mut self, state: &HeraldedState, phi: f64) -> Result<f64> {
        self.parity_signal(state, phi + std::f64::consts::FRAC_PI_2)
    }

    pub fn wigner_point(&self, state: &HeraldedState, xi: &Vector4<f64>) -> f64 {
        state.rho.wigner_point(xi)
    }
}
