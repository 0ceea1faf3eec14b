//! Sp(n,ℝ), the Siegel upper half space, the Cartan involution and the Cartan and
//! Iwasawa decompositions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, matrix_log_spd, matrix_sqrt_spd, spd_eigen};
use crate::matrix::{j_matrix, Matrix};
use crate::scalar::Scalar;

/// Tolerance of the symplectic predicate at construction.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// `ᵗM J M − J`, the defect of the symplectic condition.
pub fn symplectic_defect<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let n = m.rows() / 2;
    let j = j_matrix::<S>(n);
    &(&(&m.transpose() * &j) * m) - &j
}

/// Exact (exact kinds) or tolerance-based symplectic predicate.
pub fn is_symplectic<S: Scalar>(m: &Matrix<S>, tol: f64) -> bool {
    m.is_square() && m.rows().is_multiple_of(2) && symplectic_defect(m).is_zero(tol)
}

/// `ᵗX J + J X = 0`: membership in sp(n).
pub fn in_sp_algebra<S: Scalar>(x: &Matrix<S>, tol: f64) -> bool {
    if !x.is_square() || x.rows() % 2 == 1 {
        return false;
    }
    let j = j_matrix::<S>(x.rows() / 2);
    (&(&x.transpose() * &j) + &(&j * x)).is_zero(tol)
}

/// Element of Sp(n,ℝ) stored as its 2n×2n matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticElement {
    n: usize,
    m: Matrix<f64>,
}

impl SymplecticElement {
    pub fn new(m: Matrix<f64>) -> Result<Self> {
        Self::with_tol(m, SYMPLECTIC_TOL)
    }

    pub fn with_tol(m: Matrix<f64>, tol: f64) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 == 1 {
            return Err(Error::Shape(format!("{}x{} is not 2n×2n", m.rows(), m.cols())));
        }
        let defect = symplectic_defect(&m).max_abs();
        let scale = m.max_abs().max(1.0).powi(2);
        if defect > tol * scale {
            return Err(Error::Domain(format!("matrix is not symplectic (defect {defect:e})")));
        }
        Ok(SymplecticElement { n: m.rows() / 2, m })
    }

    /// Wraps without checking; for matrices symplectic by construction.
    pub(crate) fn from_trusted(m: Matrix<f64>) -> Self {
        SymplecticElement { n: m.rows() / 2, m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(Matrix::identity(2 * n))
    }

    /// `J_n` itself.
    pub fn j(n: usize) -> Self {
        Self::from_trusted(j_matrix(n))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<f64> {
        self.m
    }

    /// Blocks `(A, B, C, D)`.
    pub fn blocks(&self) -> (Matrix<f64>, Matrix<f64>, Matrix<f64>, Matrix<f64>) {
        let n = self.n;
        (self.m.block(0, 0, n, n), self.m.block(0, n, n, n), self.m.block(n, 0, n, n), self.m.block(n, n, n, n))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_trusted(&self.m * &rhs.m)
    }

    /// Inverse via `M⁻¹ = −J ᵗM J`.
    pub fn inverse(&self) -> Self {
        let j = j_matrix::<f64>(self.n);
        Self::from_trusted(-&(&(&j * &self.m.transpose()) * &j))
    }

    /// Re-projects onto Sp(n,ℝ) through the Cartan decomposition after long products.
    pub fn renormalize(&self) -> Result<Self> {
        let (k, x) = cartan_decompose(self)?;
        let k = polar_orthogonal(k.matrix())?;
        let x = project_p(&x);
        Ok(Self::from_trusted(&k * &matrix_exp(&x)))
    }
}

/// Projects onto `{X symmetric, X ∈ sp(n)}`: symmetrize, then average with `−J X J`.
fn project_p(x: &Matrix<f64>) -> Matrix<f64> {
    let n = x.rows() / 2;
    let j = j_matrix::<f64>(n);
    let s = x.symmetrized();
    // For symmetric X: X ∈ sp ⟺ J X J = X.
    (&s + &(&(&j * &s) * &j)).scale(&0.5)
}

/// Orthogonal polar factor `k (ᵗk k)^{-1/2}`.
fn polar_orthogonal(k: &Matrix<f64>) -> Result<Matrix<f64>> {
    let p = matrix_sqrt_spd(&(&k.transpose() * k))?;
    Ok(k * &p.inverse(0.0)?)
}

/// Point of the Siegel upper half space H_n.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    z: Matrix<Complex64>,
}

impl SiegelPoint {
    pub fn new(z: Matrix<Complex64>) -> Result<Self> {
        Self::with_tol(z, SYMPLECTIC_TOL)
    }

    pub fn with_tol(z: Matrix<Complex64>, tol: f64) -> Result<Self> {
        if !z.is_square() {
            return Err(Error::Shape("Siegel point must be square".into()));
        }
        let scale = z.max_abs().max(1.0);
        if !z.is_symmetric(tol * scale) {
            return Err(Error::Domain("Z is not symmetric".into()));
        }
        let y = z.im().symmetrized();
        match spd_eigen(&y) {
            Ok(_) => Ok(SiegelPoint { z: z.symmetrized() }),
            Err(Error::NotPositiveDefinite(v)) => {
                Err(Error::Domain(format!("Im Z is not positive definite (eigenvalue {v:e})")))
            }
            Err(e) => Err(e),
        }
    }

    /// `i·E_n`.
    pub fn i_e(n: usize) -> Self {
        SiegelPoint { z: Matrix::scalar(n, Complex64::new(0.0, 1.0)) }
    }

    pub fn degree(&self) -> usize {
        self.z.rows()
    }

    pub fn z(&self) -> &Matrix<Complex64> {
        &self.z
    }

    pub fn re(&self) -> Matrix<f64> {
        self.z.re()
    }

    pub fn im(&self) -> Matrix<f64> {
        self.z.im()
    }
}

/// `θ(g) = ᵗg⁻¹`.
pub fn cartan_involution(g: &SymplecticElement) -> Result<SymplecticElement> {
    let inv = g.matrix().inverse(0.0)?;
    Ok(SymplecticElement::from_trusted(inv.transpose()))
}

/// Polar decomposition `g = k·exp(X)` with `k ∈ K = Sp(n) ∩ O(2n)` and `X ∈ 𝔭`.
pub fn cartan_decompose(g: &SymplecticElement) -> Result<(SymplecticElement, Matrix<f64>)> {
    let gtg = &g.matrix().transpose() * g.matrix();
    let p = matrix_sqrt_spd(&gtg)?;
    let x = matrix_log_spd(&p)?;
    let k = g.matrix() * &p.inverse(0.0)?;
    Ok((SymplecticElement::from_trusted(k), x))
}

/// `M<Z> = (AZ + B)(CZ + D)⁻¹`.
pub fn moebius_action(m: &SymplecticElement, z: &SiegelPoint) -> Result<SiegelPoint> {
    if m.degree() != z.degree() {
        return Err(Error::DimMismatch(format!("Sp({}) acting on H_{}", m.degree(), z.degree())));
    }
    let (a, b, c, d) = m.blocks();
    let (a, b, c, d) = (a.to_c64(), b.to_c64(), c.to_c64(), d.to_c64());
    let num = &(&a * z.z()) + &b;
    let den = &(&c * z.z()) + &d;
    let det = den.det();
    if det.norm() < 1e-12 {
        return Err(Error::Degenerate(format!("|det(CZ+D)| = {:e}", det.norm())));
    }
    // (AZ+B)(CZ+D)⁻¹ = ᵗ( ᵗ(CZ+D)⁻¹ ᵗ(AZ+B) ).
    let w = den.transpose().solve(&num.transpose(), 0.0)?.transpose();
    let scale = w.max_abs().max(1.0);
    SiegelPoint::with_tol(w, 1e-8 * scale)
}

/// Factors `M = n(A,B)·t(H)·k` of the Iwasawa decomposition.
#[derive(Debug, Clone)]
pub struct IwasawaFactors {
    /// Unit upper triangular `A`.
    pub a: Matrix<f64>,
    pub b: Matrix<f64>,
    /// Positive diagonal of `H`.
    pub h: Vec<f64>,
    pub nil: SymplecticElement,
    pub diag: SymplecticElement,
    pub compact: SymplecticElement,
}

impl IwasawaFactors {
    pub fn product(&self) -> Matrix<f64> {
        &(self.nil.matrix() * self.diag.matrix()) * self.compact.matrix()
    }

    /// Checks the shape predicates of every factor.
    pub fn validate(&self, tol: f64) -> std::result::Result<(), String> {
        let n = self.a.rows();
        for i in 0..n {
            if (self.a[(i, i)] - 1.0).abs() > tol {
                return Err(format!("A[{i},{i}] != 1"));
            }
            for j in 0..i {
                if self.a[(i, j)].abs() > tol {
                    return Err("A is not upper triangular".into());
                }
            }
        }
        let at_b = &self.a * &self.b.transpose();
        if !at_b.is_symmetric(tol * at_b.max_abs().max(1.0)) {
            return Err("A ᵗB != B ᵗA".into());
        }
        if self.h.iter().any(|&v| v <= 0.0) {
            return Err("H is not positive".into());
        }
        let k = self.compact.matrix();
        if !(&k.transpose() * k).approx_eq(&Matrix::identity(2 * n), tol) {
            return Err("compact factor is not orthogonal".into());
        }
        if !is_symplectic(k, tol) {
            return Err("compact factor is not symplectic".into());
        }
        Ok(())
    }
}

/// `n(A,B) = [[A, B], [0, ᵗA⁻¹]]`.
pub fn n_matrix(a: &Matrix<f64>, b: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = a.rows();
    let ati = a.transpose().inverse(0.0)?;
    Ok(Matrix::from_blocks(a, b, &Matrix::zeros(n, n), &ati))
}

/// `t(H) = diag(H, H⁻¹)`.
pub fn t_matrix(h: &[f64]) -> Matrix<f64> {
    let inv: Vec<f64> = h.iter().map(|v| 1.0 / v).collect();
    Matrix::block_diag(&[&Matrix::diag(h), &Matrix::diag(&inv)])
}

/// `Y = A D ᵗA` with `A` unit upper triangular and `D` diagonal (reverse LDLᵗ).
pub fn udut(y: &Matrix<f64>) -> Result<(Matrix<f64>, Vec<f64>)> {
    let n = y.rows();
    let mut u = Matrix::<f64>::identity(n);
    let mut d = vec![0.0; n];
    for j in (0..n).rev() {
        let mut djj = y[(j, j)];
        for k in j + 1..n {
            djj -= u[(j, k)] * u[(j, k)] * d[k];
        }
        if djj <= 0.0 {
            return Err(Error::NotPositiveDefinite(djj));
        }
        d[j] = djj;
        for i in 0..j {
            let mut v = y[(i, j)];
            for k in j + 1..n {
                v -= u[(i, k)] * u[(j, k)] * d[k];
            }
            u[(i, j)] = v / djj;
        }
    }
    Ok((u, d))
}

/// Iwasawa decomposition `M = n(A,B)·t(H)·k` read off from `M<iE> = X + iY`:
/// `Y = A H² ᵗA`, `B = X ᵗA⁻¹`.
pub fn iwasawa_decompose(m: &SymplecticElement) -> Result<IwasawaFactors> {
    let n = m.degree();
    let z = moebius_action(m, &SiegelPoint::i_e(n))?;
    let (x, y) = (z.re(), z.im());
    let (a, d) = udut(&y).map_err(|e| Error::Domain(format!("internal: Im M<iE> not SPD ({e})")))?;
    let h: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
    let b = &x * &a.transpose().inverse(0.0)?;
    let nil = n_matrix(&a, &b)?;
    let diag = t_matrix(&h);
    let nt_inv = (&nil * &diag).inverse(0.0)?;
    let k = &nt_inv * m.matrix();
    Ok(IwasawaFactors {
        a,
        b,
        h,
        nil: SymplecticElement::from_trusted(nil),
        diag: SymplecticElement::from_trusted(diag),
        compact: SymplecticElement::from_trusted(k),
    })
}

/// `exp(J S)` for symmetric `S`: a convenient way to produce elements of Sp(n,ℝ).
pub fn exp_hamiltonian(s: &Matrix<f64>) -> SymplecticElement {
    let n = s.rows() / 2;
    let j = j_matrix::<f64>(n);
    SymplecticElement::from_trusted(matrix_exp(&(&j * &s.symmetrized())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, seed: u64) -> SymplecticElement {
        let mut st = seed;
        let mut next = || {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((st >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let s = Matrix::from_fn(2 * n, 2 * n, |_, _| next());
        exp_hamiltonian(&s)
    }

    #[test]
    fn involution_on_diagonal() {
        let g = SymplecticElement::new(Matrix::diag(&[2.0, 0.5])).unwrap();
        let t = cartan_involution(&g).unwrap();
        assert!(t.matrix().approx_eq(&Matrix::diag(&[0.5, 2.0]), 1e-15));
        let back = cartan_involution(&t).unwrap();
        assert!(back.matrix().approx_eq(g.matrix(), 1e-12));
    }

    #[test]
    fn rejects_non_symplectic() {
        assert!(SymplecticElement::new(Matrix::diag(&[2.0, 2.0])).is_err());
    }

    #[test]
    fn moebius_examples() {
        let z = SiegelPoint::i_e(1);
        let k = SymplecticElement::j(1);
        let w = moebius_action(&k, &z).unwrap();
        assert!((w.z()[(0, 0)] - c(0.0, 1.0)).norm() < 1e-15);
        let u = SymplecticElement::new(Matrix::from_i64_rows(&[&[1, 1], &[0, 1]])).unwrap();
        let w = moebius_action(&u, &z).unwrap();
        assert!((w.z()[(0, 0)] - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn iwasawa_of_unipotent() {
        let u = SymplecticElement::new(Matrix::from_i64_rows(&[&[1, 1], &[0, 1]])).unwrap();
        let f = iwasawa_decompose(&u).unwrap();
        assert!((f.a[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((f.b[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((f.h[0] - 1.0).abs() < 1e-15);
        assert!(f.compact.matrix().approx_eq(&Matrix::identity(2), 1e-14));
    }

    #[test]
    fn iwasawa_roundtrip_random() {
        for n in 1..=3 {
            for seed in 0..20 {
                let g = sample(n, seed * 31 + n as u64);
                let f = iwasawa_decompose(&g).unwrap();
                assert!(f.product().max_diff(g.matrix()) < 1e-9);
                f.validate(1e-9).unwrap();
            }
        }
    }

    #[test]
    fn cartan_roundtrip_and_theta_compatibility() {
        let g = sample(2, 7);
        let (k, x) = cartan_decompose(&g).unwrap();
        let rec = k.matrix() * &matrix_exp(&x);
        assert!(rec.max_diff(g.matrix()) < 1e-9);
        let tk = cartan_involution(&k).unwrap();
        assert!(tk.matrix().max_diff(k.matrix()) < 1e-9);
        assert!(x.is_symmetric(1e-12));
        assert!(in_sp_algebra(&x, 1e-9));
        let tg = cartan_involution(&g).unwrap();
        let rec_t = k.matrix() * &matrix_exp(&-&x);
        assert!(rec_t.max_diff(tg.matrix()) < 1e-9);
    }

    #[test]
    fn renormalize_is_close() {
        let g = sample(2, 3);
        let r = g.renormalize().unwrap();
        assert!(r.matrix().max_diff(g.matrix()) < 1e-9);
        assert!(is_symplectic(r.matrix(), 1e-12));
    }
}
