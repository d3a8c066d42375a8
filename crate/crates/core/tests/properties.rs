use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;

use ngtmst::engine::{deriv_extract, hermite_2var, DerivOrder, QuadExp};
use ngtmst::gaussian::{beamsplitter, mzi_transform, tmst_state, tmst_wigner, two_mode_squeezer, wigner_gaussian};
use ngtmst::interferometer::{parity_expectation_tmst, phase_uncertainty_tmst, PhaseSensitivityRecord};
use ngtmst::ngstate::{success_probability, NgParams};
use ngtmst::{parity_expectation, phase_uncertainty};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn symmetric_kernel() -> impl Strategy<Value = QuadExp> {
    (prop::collection::vec(-0.8..0.8f64, 10), prop::collection::vec(-0.8..0.8f64, 4), 0.1..2.0f64).prop_map(
        |(tri, b, pre)| {
            let mut m = Matrix4::zeros();
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    m[(i, j)] = c(tri[k], 0.0);
                    m[(j, i)] = c(tri[k], 0.0);
                    k += 1;
                }
            }
            let b = Vector4::from_iterator(b.into_iter().map(|x| c(x, 0.0)));
            QuadExp::new(m, b, c(pre, 0.0)).unwrap()
        },
    )
}

fn params() -> impl Strategy<Value = NgParams> {
    (0.05..0.95f64, 0.5..3.0f64, 0.05..1.0f64, 0usize..4, 0usize..4)
        .prop_map(|(l, k, t, m, n)| NgParams::new(l, k, t, m, n).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn hermite_symmetry(m in 0usize..7, n in 0usize..7, x in complex(), y in complex()) {
        let a = hermite_2var(m, n, x, y);
        let b = hermite_2var(n, m, y, x);
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn hermite_recurrence(m in 0usize..6, n in 1usize..6, x in complex(), y in complex()) {
        let lhs = hermite_2var(m + 1, n, x, y);
        let rhs = x * hermite_2var(m, n, x, y) - (n as f64) * hermite_2var(m, n - 1, x, y);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn deriv_extract_is_linear_in_prefactor(k in symmetric_kernel(), s in complex(), m in 0usize..3, n in 0usize..3) {
        let order = DerivOrder::new(m, n);
        let base = deriv_extract(&k, order).unwrap();
        let scaled = deriv_extract(&k.clone().with_prefactor(k.prefactor() * s), order).unwrap();
        prop_assert!((scaled - s * base).norm() <= 1e-12 * (1.0 + scaled.norm()));
    }

    #[test]
    fn deriv_extract_low_order_matches_mixed_derivative(k in symmetric_kernel()) {
        // First order in (u1, v1): −2 ∂²/∂u1∂v1 at the origin, by central differences.
        let h = 1e-4;
        let e = |a: f64, b: f64| k.eval(&Vector4::new(c(a, 0.0), c(b, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        let mixed = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
        let got = deriv_extract(&k, DerivOrder::new(1, 0)).unwrap();
        prop_assert!((got - (-2.0) * mixed).norm() <= 1e-5 * (1.0 + got.norm()), "{got} vs {}", -2.0 * mixed);
    }

    #[test]
    fn symplectic_composition(r in -2.0..2.0f64, tau in 0.01..1.0f64, phi in -3.0..3.0f64) {
        let s = two_mode_squeezer(r) * beamsplitter(tau).unwrap() * mzi_transform(phi);
        prop_assert!(s.symplectic_residual() < 1e-10 * (2.0 * r).cosh().powi(2));
        let id = s * s.inverse();
        prop_assert!((id.matrix() - Matrix4::identity()).amax() < 1e-9 * (2.0 * r).cosh().powi(2));
    }

    #[test]
    fn gaussian_wigner_matches_closed_form(r in 0.0..1.5f64, n_th in 0.0..2.0f64, xi in prop::array::uniform4(-2.0..2.0f64)) {
        let xi = Vector4::from(xi);
        let a = wigner_gaussian(&tmst_state(r, n_th).unwrap(), &xi).unwrap();
        let b = tmst_wigner(r, n_th + 0.5, &xi);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn tmst_parity_agrees_with_general_engine(l in 0.05..0.95f64, k in 0.5..3.0f64, phi in -3.0..3.0f64) {
        let p = NgParams::tmst(l, k).unwrap();
        let a = parity_expectation(&p, phi).unwrap();
        let b = parity_expectation_tmst(l, k, phi);
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn tmst_uncertainty_agrees_with_general_engine(l in 0.05..0.95f64, k in 0.5..3.0f64, phi in 0.01..1.5f64) {
        let p = NgParams::tmst(l, k).unwrap();
        let a = phase_uncertainty(&p, phi).unwrap();
        let b = phase_uncertainty_tmst(l, k, phi);
        prop_assert!(close(a, b, 1e-6), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn record_invariants(p in params(), phi in -3.0..3.0f64) {
        let rec = PhaseSensitivityRecord::evaluate(&p, phi).unwrap();
        prop_assert!(rec.parity.abs() <= 1.0 + 1e-9);
        prop_assert!(rec.delta_phi >= 0.0);
        prop_assert!(rec.probability > 0.0 && rec.probability <= 1.0 + 1e-12);
    }

    #[test]
    fn parity_has_period_two_pi(p in params(), phi in -1.5..1.5f64) {
        let a = parity_expectation(&p, phi).unwrap();
        let b = parity_expectation(&p, phi + 2.0 * std::f64::consts::PI).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn symmetric_input_has_period_pi(l in 0.05..0.95f64, k in 0.5..3.0f64, phi in -1.5..1.5f64) {
        // Only the mode-symmetric bare input is invariant under the half-turn.
        let p = NgParams::tmst(l, k).unwrap();
        let a = parity_expectation(&p, phi).unwrap();
        let b = parity_expectation(&p, phi + std::f64::consts::PI).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn unit_transmissivity_heralds_with_certainty(l in 0.05..0.9f64, k in 0.5..2.0f64, m in 0usize..3) {
        // τ = 1 routes the ancilla straight to the detector: only n = m can click.
        let same = NgParams::new(l, k, 1.0, m, m).unwrap();
        prop_assert!((success_probability(&same).unwrap() - 1.0).abs() < 1e-10);
    }
}
