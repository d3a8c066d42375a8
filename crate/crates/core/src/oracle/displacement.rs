use nalgebra::DMatrix;
use num_complex::Complex64;

/// Matrix elements <c|D(beta)|a> for c, a < dim, built column by column from
/// <c|D|0> = e^{-|β|²/2} β^c/√c! and √(a+1)<c|D|a+1> = √c<c-1|D|a> − β*<c|D|a>.
pub fn displacement_matrix(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut d = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    if dim == 0 {
        return d;
    }
    d[(0, 0)] = Complex64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    for c in 1..dim {
        d[(c, 0)] = d[(c - 1, 0)] * beta / (c as f64).sqrt();
    }
    let bc = beta.conj();
    for a in 0..dim - 1 {
        let norm = ((a + 1) as f64).sqrt();
        d[(0, a + 1)] = -bc * d[(0, a)] / norm;
        for c in 1..dim {
            d[(c, a + 1)] = ((c as f64).sqrt() * d[(c - 1, a)] - bc * d[(c, a)]) / norm;
        }
    }
    d
}
