use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Degree of the diagonal Padé approximant.
const PADE_DEGREE: usize = 10;

/// Matrix exponential by scaling and squaring around a diagonal Padé core.
pub fn matrix_exp(x: &Matrix<f64>) -> Matrix<f64> {
    assert!(x.is_square(), "matrix_exp of a non-square matrix");
    let n = x.rows();
    let norm1 = (0..n).map(|j| (0..n).map(|i| x[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0u32;
    if norm1 > 0.5 {
        s = (norm1 / 0.5).log2().ceil() as u32;
    }
    let a = x.scale(&0.5f64.powi(s as i32));

    // c_k = (2q−k)! q! / ((2q)! k! (q−k)!), built recursively.
    let q = PADE_DEGREE;
    let mut c = vec![1.0f64; q + 1];
    for k in 1..=q {
        c[k] = c[k - 1] * (q - k + 1) as f64 / (k as f64 * (2 * q - k + 1) as f64);
    }
    let id = Matrix::<f64>::identity(n);
    let mut num = id.scale(&c[0]);
    let mut den = id.scale(&c[0]);
    let mut pw = id.clone();
    for (k, &ck) in c.iter().enumerate().skip(1) {
        pw = &pw * &a;
        let term = pw.scale(&ck);
        num = &num + &term;
        den = if k % 2 == 0 { &den + &term } else { &den - &term };
    }
    let mut r = den.solve(&num, 0.0).expect("Padé denominator is invertible for scaled norm ≤ 1/2");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Eigen-decomposition `P = V diag(w) ᵗV` of a symmetric positive definite matrix.
pub fn spd_eigen(p: &Matrix<f64>) -> Result<(Vec<f64>, Matrix<f64>)> {
    if !p.is_square() {
        return Err(Error::Shape("SPD routine on a non-square matrix".into()));
    }
    let scale = p.max_abs().max(1.0);
    if !p.is_symmetric(1e-10 * scale) {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let eig = nalgebra::SymmetricEigen::new(p.symmetrized().to_nalgebra());
    let w: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if let Some(&bad) = w.iter().find(|&&v| v <= 0.0) {
        return Err(Error::NotPositiveDefinite(bad));
    }
    Ok((w, Matrix::from_nalgebra(&eig.eigenvectors)))
}

fn spectral_apply(p: &Matrix<f64>, f: impl Fn(f64) -> f64) -> Result<Matrix<f64>> {
    let (w, v) = spd_eigen(p)?;
    let fw: Vec<f64> = w.into_iter().map(f).collect();
    let out = &(&v * &Matrix::diag(&fw)) * &v.transpose();
    Ok(out.symmetrized())
}

/// Symmetric logarithm of an SPD matrix.
pub fn matrix_log_spd(p: &Matrix<f64>) -> Result<Matrix<f64>> {
    spectral_apply(p, f64::ln)
}

/// Principal square root of an SPD matrix.
pub fn matrix_sqrt_spd(p: &Matrix<f64>) -> Result<Matrix<f64>> {
    spectral_apply(p, f64::sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    /// Plain Taylor series without scaling; adequate for small norms.
    fn exp_series(x: &Matrix<f64>) -> Matrix<f64> {
        let n = x.rows();
        let mut term = Matrix::<f64>::identity(n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = (&term * x).scale(&(1.0 / k as f64));
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn zero_gives_identity() {
        let z = Matrix::<f64>::zeros(3, 3);
        assert!(matrix_exp(&z).approx_eq(&Matrix::identity(3), 1e-15));
    }

    #[test]
    fn diagonal_case() {
        let d = Matrix::diag(&[1.0, -1.0]);
        let e = matrix_exp(&d);
        assert!((e[(0, 0)] - E).abs() < 1e-14);
        assert!((e[(1, 1)] - 1.0 / E).abs() < 1e-15);
    }

    #[test]
    fn rotation_matches_series() {
        let t = 0.7;
        let x = Matrix::from_rows(vec![vec![0.0, t], vec![-t, 0.0]]).unwrap();
        let e = matrix_exp(&x);
        let oracle = exp_series(&x);
        assert!(e.max_diff(&oracle) < 1e-14);
        assert!((e[(0, 0)] - t.cos()).abs() < 1e-14);
        assert!((e[(0, 1)] - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn large_norm_relative_accuracy() {
        let x = Matrix::from_rows(vec![vec![2.0, 3.0, 0.5], vec![-1.0, 1.0, 2.0], vec![0.0, 1.5, -2.0]])
            .unwrap()
            .scale(&1.5);
        // exp(X) = exp(X/8)^8 through the unscaled series.
        let mut oracle = exp_series(&x.scale(&0.125));
        for _ in 0..3 {
            oracle = &oracle * &oracle;
        }
        let e = matrix_exp(&x);
        assert!(e.max_diff(&oracle) / oracle.max_abs() < 1e-12);
    }

    #[test]
    fn log_of_diag() {
        let p = Matrix::diag(&[E * E, 1.0]);
        let l = matrix_log_spd(&p).unwrap();
        assert!(l.approx_eq(&Matrix::diag(&[2.0, 0.0]), 1e-14));
        assert!(matrix_log_spd(&Matrix::identity(3)).unwrap().is_zero(1e-15));
    }

    #[test]
    fn log_rejects_indefinite() {
        let p = Matrix::diag(&[1.0, -2.0]);
        assert!(matches!(matrix_log_spd(&p), Err(Error::NotPositiveDefinite(v)) if v == -2.0));
    }

    #[test]
    fn sqrt_squares_back() {
        let p = Matrix::from_rows(vec![vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let r = matrix_sqrt_spd(&p).unwrap();
        assert!((&r * &r).max_diff(&p) < 1e-13);
    }
}
