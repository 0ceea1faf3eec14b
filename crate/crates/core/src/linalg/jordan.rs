use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Additive Jordan decomposition `X = X_h + X_e + X_n`.
#[derive(Debug, Clone)]
pub struct JordanParts {
    pub hyperbolic: Matrix<f64>,
    pub elliptic: Matrix<f64>,
    pub nilpotent: Matrix<f64>,
}

impl JordanParts {
    pub fn semisimple(&self) -> Matrix<f64> {
        &self.hyperbolic + &self.elliptic
    }

    pub fn sum(&self) -> Matrix<f64> {
        &self.semisimple() + &self.nilpotent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementClass {
    Nilpotent,
    Hyperbolic,
    Elliptic,
    SemisimpleMixed,
    General,
}

/// Minimal separation between distinct eigenvalue clusters, relative to ‖X‖_F.
const SEPARATION_TOL: f64 = 1e-8;
/// Acceptance threshold for the nilpotency and commutation checks.
const CHECK_TOL: f64 = 1e-9;

/// Eigenvalues of a real square matrix (via a real Schur form).
pub fn eigenvalues(x: &Matrix<f64>) -> Vec<Complex64> {
    assert!(x.is_square(), "eigenvalues of a non-square matrix");
    if x.rows() == 0 {
        return Vec::new();
    }
    x.to_nalgebra().complex_eigenvalues().iter().copied().collect()
}

/// Jordan–Chevalley decomposition of a real matrix.
///
/// The semisimple part is the Newton limit of `X ← X − P(X)·P'(X)⁻¹` where `P` is
/// the square-free polynomial vanishing on the clustered spectrum. The hyperbolic
/// part interpolates `Re λ` on the spectrum.
pub fn jordan_decompose(x: &Matrix<f64>) -> Result<JordanParts> {
    if !x.is_square() {
        return Err(Error::Shape("Jordan decomposition of a non-square matrix".into()));
    }
    let n = x.rows();
    let s = x.frobenius_norm();
    if s == 0.0 {
        let z = Matrix::zeros(n, n);
        return Ok(JordanParts { hyperbolic: z.clone(), elliptic: z.clone(), nilpotent: z });
    }
    let eig = eigenvalues(x);
    let mut last_err = String::from("no clustering radius validated");
    let mut radius = SEPARATION_TOL * s;
    while radius <= 1e-3 * s * (1.0 + 1e-12) {
        let centers = cluster(&eig, radius);
        match attempt(x, &centers, s) {
            Ok(parts) => return Ok(parts),
            Err(e) => last_err = e,
        }
        radius *= 10.0;
    }
    Err(Error::IllConditioned(last_err))
}

/// Single-linkage clustering; each cluster is represented by its mean, which is
/// well conditioned even when the individual eigenvalues of a defective block are not.
fn cluster(eig: &[Complex64], radius: f64) -> Vec<Complex64> {
    let k = eig.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if (eig[i] - eig[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += eig[i];
                g.2 += 1;
            }
            None => groups.push((r, eig[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, cnt)| {
            let c = sum / cnt as f64;
            if c.im.abs() <= radius {
                Complex64::new(c.re, 0.0)
            } else {
                c
            }
        })
        .collect()
}

fn attempt(x: &Matrix<f64>, centers: &[Complex64], s: f64) -> std::result::Result<JordanParts, String> {
    let n = x.rows();
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if (a - b).norm() < SEPARATION_TOL * s {
                return Err(format!("eigenvalues {a} and {b} closer than separation tolerance"));
            }
        }
    }
    // P(t) = Π (t − c_i) with real coefficients (the center set is conjugation closed).
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for c in centers {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &a) in coeffs.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * c;
        }
        coeffs = next;
    }
    let p: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
    let dp: Vec<f64> = (1..p.len()).map(|k| k as f64 * p[k]).collect();

    let mut xs = x.clone();
    let mut last_step = f64::INFINITY;
    for _ in 0..100 {
        let pv = horner(&p, &xs);
        let dv = horner(&dp, &xs);
        // P and P' are polynomials in X, so they commute and P'(X)⁻¹P(X) = P(X)P'(X)⁻¹.
        let step = dv.solve(&pv, 0.0).map_err(|_| "P'(X) singular in Newton step".to_string())?;
        xs = &xs - &step;
        last_step = step.frobenius_norm();
        if last_step <= 1e-14 * s {
            break;
        }
    }
    if last_step > 1e-10 * s {
        return Err("Newton iteration did not converge".into());
    }
    let nil = x - &xs;
    let tol = CHECK_TOL * s.max(1.0);
    let nil_pow = nil.pow(n as u32);
    if nil_pow.max_abs() > CHECK_TOL * s.max(1.0).powi(n as i32) {
        return Err("remainder is not nilpotent".into());
    }

    // Lagrange interpolation of Re c_i on the spectrum of X_s.
    let xc = xs.to_c64();
    let id = Matrix::<Complex64>::identity(n);
    let mut h = Matrix::<Complex64>::zeros(n, n);
    for (i, ci) in centers.iter().enumerate() {
        if ci.re == 0.0 {
            continue;
        }
        let mut term = id.scale(&Complex64::new(ci.re, 0.0));
        for (j, cj) in centers.iter().enumerate() {
            if i != j {
                let factor = (&xc - &id.scale(cj)).scale(&(1.0 / (ci - cj)));
                term = &term * &factor;
            }
        }
        h = &h + &term;
    }
    if h.im().max_abs() > tol {
        return Err("hyperbolic part is not real".into());
    }
    let hyperbolic = h.re();
    let elliptic = &xs - &hyperbolic;
    let ctol = CHECK_TOL * s.max(1.0).powi(2);
    for (a, b) in [(&hyperbolic, &elliptic), (&hyperbolic, &nil), (&elliptic, &nil)] {
        if a.commutator(b).max_abs() > ctol {
            return Err("parts do not commute".into());
        }
    }
    Ok(JordanParts { hyperbolic, elliptic, nilpotent: nil })
}

/// Evaluates Σ p_k X^k.
fn horner(p: &[f64], x: &Matrix<f64>) -> Matrix<f64> {
    let n = x.rows();
    let id = Matrix::<f64>::identity(n);
    let mut acc = Matrix::zeros(n, n);
    for &c in p.iter().rev() {
        acc = &(&acc * x) + &id.scale(&c);
    }
    acc
}

/// Classifies a real matrix by its Jordan parts and spectrum (tolerance 1e-9, relative).
pub fn classify_element(x: &Matrix<f64>) -> ElementClass {
    let n = x.rows();
    let s = x.frobenius_norm();
    if s == 0.0 {
        return ElementClass::Nilpotent;
    }
    let tol = CHECK_TOL * s.max(1.0);
    // Nilpotent iff the ranks of X, X², … reach zero by X^n.
    let mut pw = x.clone();
    for k in 1..=n {
        if pw.rank(CHECK_TOL * s.max(1.0).powi(k as i32)) == 0 {
            return ElementClass::Nilpotent;
        }
        pw = &pw * x;
    }
    let Ok(parts) = jordan_decompose(x) else {
        return ElementClass::General;
    };
    if parts.nilpotent.max_abs() > tol {
        return ElementClass::General;
    }
    let eig = eigenvalues(x);
    if eig.iter().all(|z| z.im.abs() <= tol) {
        ElementClass::Hyperbolic
    } else if eig.iter().all(|z| z.re.abs() <= tol) {
        ElementClass::Elliptic
    } else {
        ElementClass::SemisimpleMixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn nilpotent_e0() {
        let e0 = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let p = jordan_decompose(&e0).unwrap();
        assert!(p.hyperbolic.is_zero(1e-12));
        assert!(p.elliptic.is_zero(1e-12));
        assert!(p.nilpotent.approx_eq(&e0, 1e-12));
        assert_eq!(classify_element(&e0), ElementClass::Nilpotent);
    }

    #[test]
    fn elliptic_rotation() {
        let r = m(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let p = jordan_decompose(&r).unwrap();
        assert!(p.hyperbolic.is_zero(1e-12));
        assert!(p.elliptic.approx_eq(&r, 1e-12));
        assert!(p.nilpotent.is_zero(1e-12));
        assert_eq!(classify_element(&r), ElementClass::Elliptic);
    }

    #[test]
    fn hyperbolic_h0() {
        let h0 = m(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert_eq!(classify_element(&h0), ElementClass::Hyperbolic);
    }

    #[test]
    fn block_diag_h0_e0() {
        let h0 = m(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let e0 = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let z = Matrix::zeros(2, 2);
        let x = Matrix::block_diag(&[&h0, &e0]);
        let p = jordan_decompose(&x).unwrap();
        assert!(p.hyperbolic.approx_eq(&Matrix::block_diag(&[&h0, &z]), 1e-10));
        assert!(p.elliptic.is_zero(1e-10));
        assert!(p.nilpotent.approx_eq(&Matrix::block_diag(&[&z, &e0]), 1e-10));
        assert_eq!(classify_element(&x), ElementClass::General);
    }

    #[test]
    fn defective_three_block_conjugated() {
        // J_3(2) ⊕ rotation-by-3 plus a change of basis.
        let mut x = Matrix::<f64>::zeros(5, 5);
        for i in 0..3 {
            x[(i, i)] = 2.0;
        }
        x[(0, 1)] = 1.0;
        x[(1, 2)] = 1.0;
        x[(3, 4)] = 3.0;
        x[(4, 3)] = -3.0;
        let g = m(&[
            &[1.0, 0.5, 0.0, 0.2, 0.0],
            &[0.0, 1.0, 0.3, 0.0, 0.1],
            &[0.2, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.4, 0.0, 1.0, 0.3],
            &[0.1, 0.0, 0.0, 0.0, 1.0],
        ]);
        let gi = g.inverse(0.0).unwrap();
        let y = &(&g * &x) * &gi;
        let p = jordan_decompose(&y).unwrap();
        assert!(p.sum().max_diff(&y) < 1e-9);
        assert!(p.nilpotent.pow(5).max_abs() < 1e-9);
        let eh = eigenvalues(&p.hyperbolic);
        assert!(eh.iter().all(|z| z.im.abs() < 1e-7));
        let ee = eigenvalues(&p.elliptic);
        assert!(ee.iter().all(|z| z.re.abs() < 1e-7));
    }

    #[test]
    fn mixed_semisimple() {
        let x = m(&[&[1.0, 2.0], &[-2.0, 1.0]]);
        assert_eq!(classify_element(&x), ElementClass::SemisimpleMixed);
        let p = jordan_decompose(&x).unwrap();
        assert!(p.hyperbolic.approx_eq(&Matrix::identity(2), 1e-12));
    }
}
