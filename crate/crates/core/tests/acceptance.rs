//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::Vector4;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use ngtmst::ngstate::{success_probability_with_cap, NgState};
use ngtmst::oracle::Oracle;
use ngtmst::{
    find_optimal_squeezing, merit_thermal, parity_expectation, parity_expectation_tmst, phase_uncertainty,
    phase_uncertainty_tmst, success_probability, NgParams, SqueezingTemplate,
};

const C1_TOL: f64 = 1e-10;
const C2_PROB_TOL: f64 = 1e-8;
const C2_PARITY_TOL: f64 = 1e-6;
const C2_WIGNER_TOL: f64 = 1e-6;
const C2_EPS_TAIL: f64 = 1e-10;
const C3_TOL: f64 = 0.05;
const C4_PEAK: f64 = 1e3;
const C5_PC_LIMIT: f64 = 1e-3;
const C6_TOL: f64 = 1e-8;
const C7_TOL: f64 = 1e-4;
const C8_TOL: f64 = 1e-10;

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn report(o: &Outcome) {
    println!("[{}] {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
}

fn grid(lo: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + step * i as f64).collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for lam in grid(0.1, 0.1, 9) {
        for kappa in [0.5, 1.0, 2.0] {
            let p = NgParams::tmst(lam, kappa).unwrap();
            for phi in grid(0.05, 0.05, 30) {
                let d = (parity_expectation(&p, phi).unwrap() - parity_expectation_tmst(lam, kappa, phi)).abs();
                worst = worst.max(d);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: "C1",
        title: "closed-form degeneration",
        pass: worst <= C1_TOL && secs < 1.0,
        detail: format!("max |f - f_TMST| = {worst:.2e} (tol {C1_TOL:.0e}), {secs:.3} s (limit 1 s)"),
    }
}

fn c2() -> Outcome {
    let start = Instant::now();
    let pairs = [(0, 1), (1, 0), (1, 1), (0, 2), (2, 0), (2, 2)];
    let mut oracle = Oracle::auto().with_eps_tail(C2_EPS_TAIL);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut wp, mut wf, mut ww) = (0.0f64, 0.0f64, 0.0f64);
    let mut cutoffs = std::collections::BTreeSet::new();
    let mut cases = 0;
    let mut errors = Vec::new();
    for &r_sq in &[0.5, 1.0] {
        for &n_th in &[0.0, 0.5] {
            for &tau in &[0.5, 0.8, 0.95] {
                for &(m, n) in &pairs {
                    let p = NgParams::from_physical(r_sq, n_th, tau, m, n).unwrap();
                    let h = match oracle.heralded(r_sq, n_th, tau, m, n) {
                        Ok(h) => h,
                        Err(e) => {
                            errors.push(format!("r={r_sq} nth={n_th} tau={tau} ({m},{n}): {e}"));
                            continue;
                        }
                    };
                    cases += 1;
                    cutoffs.insert(h.cutoff);
                    wp = wp.max((success_probability(&p).unwrap() - h.probability).abs());
                    for phi in [0.01, 0.3] {
                        let o = oracle.parity_expectation(&h, phi).unwrap();
                        wf = wf.max((parity_expectation(&p, phi).unwrap() - o).abs());
                    }
                    let st = NgState::new(p).unwrap();
                    let points: Vec<Vector4<f64>> =
                        (0..5).map(|_| Vector4::from_fn(|_, _| rng.gen_range(-1.5..1.5))).collect();
                    let d = points
                        .par_iter()
                        .map(|xi| (st.wigner(xi).unwrap() - h.rho.wigner_point(xi)).abs())
                        .reduce(|| 0.0, f64::max);
                    ww = ww.max(d);
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = errors.is_empty() && wp <= C2_PROB_TOL && wf <= C2_PARITY_TOL && ww <= C2_WIGNER_TOL;
    let mut detail = format!(
        "{cases}/72 cases, max |dP| = {wp:.2e} (tol {C2_PROB_TOL:.0e}), max |df| = {wf:.2e} (tol {C2_PARITY_TOL:.0e}), \
         max |dW| = {ww:.2e} (tol {C2_WIGNER_TOL:.0e}), cutoffs used {cutoffs:?} (tail < {C2_EPS_TAIL:.0e}), {secs:.1} s"
    );
    for e in errors {
        detail.push_str(&format!("\n      {e}"));
    }
    Outcome { id: "C2", title: "oracle equivalence", pass, detail }
}

fn c3() -> Outcome {
    let start = Instant::now();
    let run = |kappa: f64| {
        let t = SqueezingTemplate { kappa, tau: 1.0, m: 0, n: 0 };
        find_optimal_squeezing(&t, 0.01, (0.05, 4.0)).unwrap()
    };
    let (r_v, _) = run(0.5);
    let (r_t, _) = run(1.0);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: "C3",
        title: "squeezing optima",
        pass: (r_v - 2.65).abs() <= C3_TOL && (r_t - 2.80).abs() <= C3_TOL && secs < 1.0,
        detail: format!(
            "r_opt(kappa=1/2) = {r_v:.4} (2.65 +- {C3_TOL}), r_opt(kappa=1) = {r_t:.4} (2.80 +- {C3_TOL}), {secs:.3} s"
        ),
    }
}

fn c4() -> Outcome {
    let dphi = |r: f64| phase_uncertainty(&NgParams::from_physical(r, 0.5, 0.9, 0, 1).unwrap(), 0.01).unwrap();
    let rs = grid(0.2, 1e-4, 2001);
    let (r_peak, peak) =
        rs.par_iter().map(|&r| (r, dphi(r))).reduce(|| (0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let (lo, hi) = (dphi(0.15), dphi(0.6));
    Outcome {
        id: "C4",
        title: "1-PS divergence",
        pass: peak > C4_PEAK && lo.is_finite() && hi.is_finite(),
        detail: format!("max dphi on [0.2, 0.4] = {peak:.3e} at r = {r_peak:.4} (> {C4_PEAK:.0e}); dphi(0.15) = {lo:.4}, dphi(0.6) = {hi:.4}"),
    }
}

fn c5() -> Vec<Outcome> {
    let pairs = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)];
    let merits: Vec<((usize, usize), f64)> = pairs
        .iter()
        .map(|&(m, n)| ((m, n), merit_thermal(&NgParams::from_physical(1.0, 0.5, 0.9, m, n).unwrap(), 0.01).unwrap()))
        .collect();
    let a = Outcome {
        id: "C5a",
        title: "all operations beat TMST at tau = 0.9",
        pass: merits.iter().all(|(_, d)| *d > 0.0),
        detail: merits.iter().map(|((m, n), d)| format!("D_T({m},{n}) = {d:.4}")).collect::<Vec<_>>().join(", "),
    };
    let limits: Vec<((usize, usize), f64)> = [(1, 1), (2, 2)]
        .iter()
        .map(|&(m, n)| {
            ((m, n), merit_thermal(&NgParams::from_physical(1.0, 0.5, 0.9999, m, n).unwrap(), 0.01).unwrap())
        })
        .collect();
    // independent Δφ for (1,1) from oracle parities, same finite-difference stencil
    let mut oracle = Oracle::auto();
    let h = oracle.heralded(1.0, 0.5, 0.9999, 1, 1).unwrap();
    let mut f = |x: f64| oracle.parity_expectation(&h, x).unwrap();
    let (phi, step) = (0.01, ngtmst::interferometer::FD_STEP);
    let d1 = (f(phi + step) - f(phi - step)) / (2.0 * step);
    let d2 = (f(phi + step / 2.0) - f(phi - step / 2.0)) / step;
    let df = (4.0 * d2 - d1) / 3.0;
    let f0 = f(phi);
    let lam = 1.0f64.tanh();
    let oracle_dt = phase_uncertainty_tmst(lam, 1.0, phi) - (1.0 - f0 * f0).sqrt() / df.abs();
    let slope: Vec<String> = [0.99, 0.999, 0.9999]
        .iter()
        .map(|&tau| {
            let d = merit_thermal(&NgParams::from_physical(1.0, 0.5, tau, 1, 1).unwrap(), phi).unwrap();
            format!("{:.1}", d / (1.0 - tau))
        })
        .collect();
    let b = Outcome {
        id: "C5b",
        title: "catalysis merit vanishes as tau -> 1",
        pass: limits.iter().all(|(_, d)| d.abs() < C5_PC_LIMIT),
        detail: format!(
            "{} at tau = 0.9999 (tol {C5_PC_LIMIT:.0e}); oracle D_T(1,1) = {oracle_dt:.4e}; \
             D_T(1,1)/(1-tau) at tau = 0.99, 0.999, 0.9999: {}",
            limits.iter().map(|((m, n), d)| format!("|D_T({m},{n})| = {:.4e}", d.abs())).collect::<Vec<_>>().join(", "),
            slope.join(", ")
        ),
    };
    vec![a, b]
}

fn c6() -> Outcome {
    let mut worst = f64::INFINITY;
    for m in 0..=2 {
        for tau in [0.5, 0.8] {
            let total: f64 = (0..=60)
                .map(|n| {
                    success_probability_with_cap(&NgParams::from_physical(1.0, 0.5, tau, m, n).unwrap(), 64).unwrap()
                })
                .sum();
            worst = worst.min(total);
        }
    }
    Outcome {
        id: "C6",
        title: "heralding completeness",
        pass: worst >= 1.0 - C6_TOL,
        detail: format!("min sum_n P = 1 - {:.2e} (need >= 1 - {C6_TOL:.0e})", 1.0 - worst),
    }
}

/// Trapezoid rule on [-6, 6]^4.
fn integrate(st: &NgState, step: f64) -> f64 {
    let k = (12.0 / step).round() as usize;
    let xs = grid(-6.0, step, k + 1);
    let w = |i: usize| if i == 0 || i == k { 0.5 } else { 1.0 };
    let sum: f64 = (0..=k)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for j in 0..=k {
                for l in 0..=k {
                    for q in 0..=k {
                        let xi = Vector4::new(xs[i], xs[j], xs[l], xs[q]);
                        s += w(i) * w(j) * w(l) * w(q) * st.wigner(&xi).unwrap();
                    }
                }
            }
            s
        })
        .sum();
    sum * step.powi(4)
}

fn c7() -> Outcome {
    let lam = 0.5f64.tanh();
    let cases = [("PS", 0, 1), ("PA", 1, 0), ("PC", 1, 1)];
    let results: Vec<(&str, f64)> = cases
        .iter()
        .map(|&(label, m, n)| {
            let st = NgState::new(NgParams::new(lam, 0.5, 0.8, m, n).unwrap()).unwrap();
            (label, integrate(&st, 0.4))
        })
        .collect();
    Outcome {
        id: "C7",
        title: "normalization on [-6,6]^4",
        pass: results.iter().all(|(_, v)| (v - 1.0).abs() <= C7_TOL),
        detail: format!(
            "lambda = tanh 0.5, kappa = 1/2, tau = 0.8: {} (tol {C7_TOL:.0e})",
            results.iter().map(|(l, v)| format!("{l} {v:.8}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn c8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let phi: f64 = rng.gen_range(0.0..PI);
        let lam: f64 = rng.gen_range(0.05..0.95);
        let a = phase_uncertainty_tmst(lam, 1.0, phi);
        let b = phase_uncertainty_tmst(lam, 1.0, phi + PI);
        worst = worst.max((a - b).abs());
    }
    Outcome {
        id: "C8",
        title: "period-pi symmetry",
        pass: worst <= C8_TOL,
        detail: format!("max |dphi(phi) - dphi(phi+pi)| = {worst:.2e} over 50 random phi (tol {C8_TOL:.0e})"),
    }
}

fn c9() -> Outcome {
    let mut min_gap = f64::INFINITY;
    for lam in grid(0.1, 0.1, 9) {
        for phi in grid(0.05, 0.05, 10) {
            let gap = phase_uncertainty_tmst(lam, 1.0, phi) - phase_uncertainty_tmst(lam, 0.5, phi);
            min_gap = min_gap.min(gap);
        }
    }
    Outcome {
        id: "C9",
        title: "TMST worse than TMSV",
        pass: min_gap > 0.0,
        detail: format!("min dphi_TMST - dphi_TMSV = {min_gap:.4e} on lambda 0.1..0.9 x phi 0.05..0.5"),
    }
}

fn main() -> ExitCode {
    let mut all = vec![c1()];
    report(&all[0]);
    for f in [c3, c4] {
        let o = f();
        report(&o);
        all.push(o);
    }
    for o in c5() {
        report(&o);
        all.push(o);
    }
    for f in [c6, c7, c8, c9, c2] {
        let o = f();
        report(&o);
        all.push(o);
    }
    let failed = all.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {} failed", all.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
