use num_complex::Complex64;

/// n! as f64. Exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Two-variable Hermite polynomial with generating function
/// exp(-st + sx + ty) = sum H_{m,n}(x, y) s^m t^n / (m! n!).
pub fn hermite_2var(m: usize, n: usize, x: Complex64, y: Complex64) -> Complex64 {
    hermite_2var_scaled(m, n, x, y, Complex64::new(1.0, 0.0))
}

/// Coefficient polynomial of exp(-c st + sx + ty), times m! n!.
///
/// Equals c^{(m+n)/2} H_{m,n}(x/sqrt(c), y/sqrt(c)) but stays finite at c = 0,
/// where it collapses to x^m y^n.
pub fn hermite_2var_scaled(m: usize, n: usize, x: Complex64, y: Complex64, c: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=m.min(n) {
        let w = factorial(m) * factorial(n) / (factorial(k) * factorial(m - k) * factorial(n - k));
        sum += (-c).powu(k as u32) * w * x.powu((m - k) as u32) * y.powu((n - k) as u32);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        let x: f64 = 1.3;
        let direct: f64 = (0..=5).map(|k| binomial(5, k) * (-x).powi(k as i32) / factorial(k)).sum();
        assert!((laguerre(5, x) - direct).abs() < 1e-14);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_2var(0, 0, c(0.3, 0.1), c(-2.0, 1.0)), c(1.0, 0.0));
        assert_eq!(hermite_2var(1, 1, c(2.0, 0.0), c(3.0, 0.0)), c(5.0, 0.0));
        for (x, y) in [(c(0.4, -1.1), c(2.0, 0.5)), (c(-3.0, 0.0), c(0.1, 0.2)), (c(1.5, 2.5), c(-0.7, -0.3))] {
            let expect = x * x * y - 2.0 * x;
            assert!((hermite_2var(2, 1, x, y) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn scaled_hermite_matches_rescaled() {
        let (x, y, s) = (c(0.7, -0.2), c(-1.3, 0.4), c(0.6, 0.9));
        let root = s.sqrt();
        for m in 0..5 {
            for n in 0..5 {
                let lhs = hermite_2var_scaled(m, n, x, y, s);
                let rhs = root.powu((m + n) as u32) * hermite_2var(m, n, x / root, y / root);
                assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
            }
        }
        assert!((hermite_2var_scaled(2, 3, x, y, c(0.0, 0.0)) - x * x * y * y * y).norm() < 1e-15);
    }
}
