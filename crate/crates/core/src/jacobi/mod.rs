//! The Jacobi group `G^J = Sp(n,ℝ) ⋉ H^{(n,m)}`: group law, embedding into
//! Sp(n+m), action on `H_n × ℂ^{(m,n)}`, Iwasawa factors and the differential
//! of the action.
//!
//! Elements are stored in ∘-coordinates `(M, (λ,µ,κ))`. The bracket form
//! `[M, (λ,µ,κ)] := (E, (λ,µ,κ))∘(M, 0)` is available through [`from_bracket`].
//! Every 2(n+m)-square matrix uses the block order `(n, m, n, m)`.

pub mod algebra;
pub mod dual;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::HeisElement;
use crate::matrix::{j_matrix, Matrix};
use crate::scalar::Scalar;
use crate::symplectic::{
    is_symplectic, iwasawa_decompose, moebius_action, IwasawaFactors, SiegelPoint, SymplecticElement, SYMPLECTIC_TOL,
};

pub use algebra::*;
pub use dual::*;

/// Offsets of the `(n, m, n, m)` blocks.
pub(crate) fn offsets(n: usize, m: usize) -> [usize; 4] {
    [0, n, n + m, 2 * n + m]
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiElement<S: Scalar> {
    /// 2n×2n symplectic matrix.
    pub m: Matrix<S>,
    pub heis: HeisElement<S>,
}

impl<S: Scalar> JacobiElement<S> {
    pub fn new(m: Matrix<S>, heis: HeisElement<S>) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(Error::Shape(format!("M is {}x{}, expected 2n×2n", m.rows(), m.cols())));
        }
        let n = m.rows() / 2;
        if heis.dims().0 != n {
            return Err(Error::DimMismatch(format!("Heisenberg part has n = {}, M has n = {n}", heis.dims().0)));
        }
        let tol = if S::EXACT { 0.0 } else { SYMPLECTIC_TOL * m.max_abs().max(1.0).powi(2) };
        if !is_symplectic(&m, tol) {
            return Err(Error::Domain("M is not symplectic".into()));
        }
        Ok(JacobiElement { m, heis })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        JacobiElement { m: Matrix::identity(2 * n), heis: HeisElement::identity(n, m) }
    }

    /// `(n, m)`.
    pub fn dims(&self) -> (usize, usize) {
        let (g, h) = self.heis.dims();
        (g, h)
    }

    /// `(A, B, C, D)`.
    pub fn blocks(&self) -> (Matrix<S>, Matrix<S>, Matrix<S>, Matrix<S>) {
        let n = self.dims().0;
        (self.m.block(0, 0, n, n), self.m.block(0, n, n, n), self.m.block(n, 0, n, n), self.m.block(n, n, n, n))
    }
}

/// `M⁻¹ = −J ᵗM J`.
pub fn sp_inverse<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let j = j_matrix::<S>(m.rows() / 2);
    -&(&(&j * &m.transpose()) * &j)
}

/// `(λ, µ) ↦ (λ, µ)·M`, split back into the two m×n halves.
fn row_times<S: Scalar>(lambda: &Matrix<S>, mu: &Matrix<S>, m: &Matrix<S>) -> (Matrix<S>, Matrix<S>) {
    let (rows, n) = lambda.shape();
    let lm = &lambda.hstack(mu) * m;
    (lm.block(0, 0, rows, n), lm.block(0, n, rows, n))
}

/// `(M,(λ,µ,κ))·(M',(λ',µ',κ')) = (MM', (λ̃+λ', µ̃+µ', κ+κ'+λ̃ᵗµ'−µ̃ᵗλ'))`, `(λ̃,µ̃) = (λ,µ)M'`.
pub fn jacobi_mul<S: Scalar>(g1: &JacobiElement<S>, g2: &JacobiElement<S>) -> Result<JacobiElement<S>> {
    if g1.dims() != g2.dims() {
        return Err(Error::DimMismatch(format!("(n,m) = {:?} vs {:?}", g1.dims(), g2.dims())));
    }
    let (h1, h2) = (&g1.heis, &g2.heis);
    let (lt, mt) = row_times(&h1.lambda, &h1.mu, &g2.m);
    let kappa = &(&(&h1.kappa + &h2.kappa) + &(&lt * &h2.mu.transpose())) - &(&mt * &h2.lambda.transpose());
    Ok(JacobiElement { m: &g1.m * &g2.m, heis: HeisElement::raw(&lt + &h2.lambda, &mt + &h2.mu, kappa) })
}

pub fn jacobi_inv<S: Scalar>(g: &JacobiElement<S>) -> JacobiElement<S> {
    let mi = sp_inverse(&g.m);
    let (lt, mt) = row_times(&g.heis.lambda, &g.heis.mu, &mi);
    let kappa = &(&-&g.heis.kappa + &(&lt * &mt.transpose())) - &(&mt * &lt.transpose());
    JacobiElement { m: mi, heis: HeisElement::raw(-&lt, -&mt, kappa) }
}

/// `[M, (λ,µ,κ)] = (E,(λ,µ,κ))∘(M,0) = (M, ((λ,µ)M, κ))`.
pub fn from_bracket<S: Scalar>(m: &Matrix<S>, h: &HeisElement<S>) -> JacobiElement<S> {
    let (lt, mt) = row_times(&h.lambda, &h.mu, m);
    JacobiElement { m: m.clone(), heis: HeisElement::raw(lt, mt, h.kappa.clone()) }
}

/// Inverse of [`from_bracket`]: `(λ,µ) = (λ̃,µ̃)M⁻¹`.
pub fn to_bracket<S: Scalar>(g: &JacobiElement<S>) -> HeisElement<S> {
    let (l, mu) = row_times(&g.heis.lambda, &g.heis.mu, &sp_inverse(&g.m));
    HeisElement::raw(l, mu, g.heis.kappa.clone())
}

/// Which product order the block embedding respects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `embed(g₁g₂) = embed(g₁)·embed(g₂)`.
    Forward,
    /// `embed(g₁g₂) = embed(g₂)·embed(g₁)`.
    Reverse,
}

/// Frozen after checking random pairs for every tested `(n, m)`; see
/// [`detect_orientation`].
pub const EMBED_ORIENTATION: Orientation = Orientation::Forward;

/// Embedding into Sp(n+m):
///
/// ```text
/// ( A  0  B  Aᵗµ−Bᵗλ )
/// ( λ  E  µ  κ       )
/// ( C  0  D  Cᵗµ−Dᵗλ )
/// ( 0  0  0  E       )
/// ```
pub fn jacobi_embed<S: Scalar>(g: &JacobiElement<S>) -> Matrix<S> {
    let (n, m) = g.dims();
    let o = offsets(n, m);
    let (a, b, c, d) = g.blocks();
    let (l, mu, k) = (&g.heis.lambda, &g.heis.mu, &g.heis.kappa);
    let mut e = Matrix::zeros(2 * (n + m), 2 * (n + m));
    e.set_block(o[0], o[0], &a);
    e.set_block(o[0], o[2], &b);
    e.set_block(o[0], o[3], &(&(&a * &mu.transpose()) - &(&b * &l.transpose())));
    e.set_block(o[1], o[0], l);
    e.set_block(o[1], o[1], &Matrix::identity(m));
    e.set_block(o[1], o[2], mu);
    e.set_block(o[1], o[3], k);
    e.set_block(o[2], o[0], &c);
    e.set_block(o[2], o[2], &d);
    e.set_block(o[2], o[3], &(&(&c * &mu.transpose()) - &(&d * &l.transpose())));
    e.set_block(o[3], o[3], &Matrix::identity(m));
    e
}

/// Tests both product orders on the given pairs; `None` if neither holds for all.
pub fn detect_orientation<S: Scalar>(pairs: &[(JacobiElement<S>, JacobiElement<S>)], tol: f64) -> Option<Orientation> {
    let holds = |o: Orientation| {
        pairs.iter().all(|(g1, g2)| {
            let (e1, e2) = (jacobi_embed(g1), jacobi_embed(g2));
            let prod = jacobi_embed(&jacobi_mul(g1, g2).expect("matching dims"));
            let rhs = match o {
                Orientation::Forward => &e1 * &e2,
                Orientation::Reverse => &e2 * &e1,
            };
            let scale = prod.max_abs().max(1.0);
            prod.max_diff(&rhs) <= tol * scale
        })
    };
    [Orientation::Forward, Orientation::Reverse].into_iter().find(|&o| holds(o))
}

/// `Q(ξ, η) = λᵗµ' − µᵗλ'` for `ξ = (λ,µ)`, `η = (λ',µ')`.
pub fn q_form<S: Scalar>(xi: (&Matrix<S>, &Matrix<S>), eta: (&Matrix<S>, &Matrix<S>)) -> Result<Matrix<S>> {
    if xi.0.shape() != eta.0.shape() || xi.1.shape() != eta.1.shape() || xi.0.shape() != xi.1.shape() {
        return Err(Error::DimMismatch("Q(ξ, η) operands differ in shape".into()));
    }
    Ok(&(xi.0 * &eta.1.transpose()) - &(xi.1 * &eta.0.transpose()))
}

/// Point `(Z, W)` of `H_n × ℂ^{(m,n)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiPoint {
    pub z: SiegelPoint,
    pub w: Matrix<Complex64>,
}

impl JacobiPoint {
    pub fn new(z: SiegelPoint, w: Matrix<Complex64>) -> Result<Self> {
        if w.cols() != z.degree() {
            return Err(Error::DimMismatch(format!("W has {} columns, Z has degree {}", w.cols(), z.degree())));
        }
        Ok(JacobiPoint { z, w })
    }

    /// `(iE_n, 0)`.
    pub fn base(n: usize, m: usize) -> Self {
        JacobiPoint { z: SiegelPoint::i_e(n), w: Matrix::zeros(m, n) }
    }
}

/// `X·Y⁻¹` via `ᵗY ᵗ(XY⁻¹) = ᵗX`.
pub(crate) fn right_divide(x: &Matrix<Complex64>, y: &Matrix<Complex64>) -> Result<Matrix<Complex64>> {
    Ok(y.transpose().solve(&x.transpose(), 0.0)?.transpose())
}

pub(crate) fn cz_plus_d(g: &JacobiElement<f64>, z: &Matrix<Complex64>) -> Result<Matrix<Complex64>> {
    let (_, _, c, d) = g.blocks();
    let den = &(&c.to_c64() * z) + &d.to_c64();
    let det = den.det();
    if det.norm() < 1e-12 {
        return Err(Error::Degenerate(format!("|det(CZ+D)| = {:e}", det.norm())));
    }
    Ok(den)
}

/// `g·(Z, W) = (M<Z>, (W + λZ + µ)(CZ + D)⁻¹)`.
pub fn jacobi_action(g: &JacobiElement<f64>, pt: &JacobiPoint) -> Result<JacobiPoint> {
    let (n, m) = g.dims();
    if pt.z.degree() != n || pt.w.rows() != m {
        return Err(Error::DimMismatch(format!("point is not in H_{{{n},{m}}}")));
    }
    let sp = SymplecticElement::with_tol(g.m.clone(), SYMPLECTIC_TOL * g.m.max_abs().max(1.0).powi(2))?;
    let z_new = moebius_action(&sp, &pt.z)?;
    let den = cz_plus_d(g, pt.z.z())?;
    let num = &(&pt.w + &(&g.heis.lambda.to_c64() * pt.z.z())) + &g.heis.mu.to_c64();
    Ok(JacobiPoint { z: z_new, w: right_divide(&num, &den)? })
}

/// Differential of `g` at `(iE, 0)` applied to `(v, w)`:
/// `v ↦ ᵗ(iC+D)⁻¹ v (iC+D)⁻¹`, `w ↦ w(iC+D)⁻¹ + λ ᵗ(iC+D)⁻¹ v (iC+D)⁻¹`
/// with `λ` taken from the bracket coordinates of `g`.
pub fn jacobi_differential(
    g: &JacobiElement<f64>,
    v: &Matrix<Complex64>,
    w: &Matrix<Complex64>,
) -> Result<(Matrix<Complex64>, Matrix<Complex64>)> {
    let (n, m) = g.dims();
    if v.shape() != (n, n) || w.shape() != (m, n) {
        return Err(Error::DimMismatch(format!("v must be {n}x{n} and w {m}x{n}")));
    }
    let den = cz_plus_d(g, SiegelPoint::i_e(n).z())?;
    let inv = den.inverse(0.0)?;
    let dv = &(&inv.transpose() * v) * &inv;
    let lb = to_bracket(g).lambda.to_c64();
    let dw = &(w * &inv) + &(&lb * &dv);
    Ok((dv, dw))
}

/// The two Iwasawa decompositions of `G^J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IwasawaMode {
    /// `Ñ^J A^J K`: µ and κ ride with the unipotent factor, the compact factor is in Sp.
    NilpotentCenter,
    /// `N^J A^J K^J`: κ rides with the compact factor.
    CompactCenter,
}

/// Factors `g = nil · diag · compact`, each returned in ∘-coordinates.
#[derive(Debug, Clone)]
pub struct JacobiIwasawa {
    pub mode: IwasawaMode,
    pub sp: IwasawaFactors,
    /// Heisenberg parameters of the factors in bracket form: λ of the diagonal
    /// factor, µ of the unipotent factor, κ of the unipotent or compact factor.
    pub lambda: Matrix<f64>,
    pub mu: Matrix<f64>,
    pub kappa: Matrix<f64>,
    pub nil: JacobiElement<f64>,
    pub diag: JacobiElement<f64>,
    pub compact: JacobiElement<f64>,
}

impl JacobiIwasawa {
    pub fn product(&self) -> JacobiElement<f64> {
        let nd = jacobi_mul(&self.nil, &self.diag).expect("same dims");
        jacobi_mul(&nd, &self.compact).expect("same dims")
    }

    /// Largest entrywise deviation of the reconstruction from `g`.
    pub fn reconstruction_error(&self, g: &JacobiElement<f64>) -> f64 {
        let p = self.product();
        [
            p.m.max_diff(&g.m),
            p.heis.lambda.max_diff(&g.heis.lambda),
            p.heis.mu.max_diff(&g.heis.mu),
            p.heis.kappa.max_diff(&g.heis.kappa),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Shape predicates of the factors on top of the Sp(n) ones.
    pub fn validate(&self, tol: f64) -> std::result::Result<(), String> {
        self.sp.validate(tol)?;
        let zero_lm = |e: &JacobiElement<f64>| e.heis.lambda.is_zero(tol) && e.heis.mu.is_zero(tol);
        let nb = to_bracket(&self.nil);
        if !nb.lambda.is_zero(tol) {
            return Err("unipotent factor has λ ≠ 0 in bracket form".into());
        }
        let db = to_bracket(&self.diag);
        if !db.mu.is_zero(tol) || !db.kappa.is_zero(tol) {
            return Err("diagonal factor carries µ or κ".into());
        }
        match self.mode {
            IwasawaMode::NilpotentCenter => {
                if !zero_lm(&self.compact) || !self.compact.heis.kappa.is_zero(tol) {
                    return Err("compact factor is not in Sp(n)".into());
                }
            }
            IwasawaMode::CompactCenter => {
                if !zero_lm(&self.compact) {
                    return Err("compact factor is not in K^J".into());
                }
                if !nb.kappa.is_zero(tol) {
                    return Err("unipotent factor carries κ".into());
                }
            }
        }
        Ok(())
    }
}

/// Iwasawa decomposition of `g = [M, (λ,µ,κ)]` with `M = n(A,B) t(H) k`.
///
/// Shared: `λ' = λA`, `µ' = µ + λB ᵗA`. The nilpotent-center mode puts
/// `κ* = κ + µᵗλ + λB ᵗ(λA)` into `ñ = [n(A,B), (0, µ', κ*)]`, with
/// `t = [t(H), (λ', 0, 0)]` and `k` in Sp(n). The compact-center mode uses
/// `n = [n(A,B), (0, µ', 0)]` and `k = (k, (0, 0, κ + µ'ᵗλ))`.
pub fn jacobi_iwasawa(g: &JacobiElement<f64>, mode: IwasawaMode) -> Result<JacobiIwasawa> {
    let (n, m) = g.dims();
    let sp = SymplecticElement::with_tol(g.m.clone(), SYMPLECTIC_TOL * g.m.max_abs().max(1.0).powi(2))?;
    let f = iwasawa_decompose(&sp)?;
    let b = to_bracket(g);
    let (l, mu, kappa) = (&b.lambda, &b.mu, &b.kappa);
    let lam = l * &f.a;
    let mu_p = mu + &(&(l * &f.b) * &f.a.transpose());
    let zero_mn = Matrix::<f64>::zeros(m, n);
    let zero_mm = Matrix::<f64>::zeros(m, m);
    let bracket = |mat: &Matrix<f64>, l: &Matrix<f64>, mu: &Matrix<f64>, k: &Matrix<f64>| {
        from_bracket(mat, &HeisElement::raw(l.clone(), mu.clone(), k.clone()))
    };
    let diag = bracket(f.diag.matrix(), &lam, &zero_mn, &zero_mm);
    let (nil, compact, kap) = match mode {
        IwasawaMode::NilpotentCenter => {
            let k_star = &(kappa + &(mu * &l.transpose())) + &(&(l * &f.b) * &lam.transpose());
            (
                bracket(f.nil.matrix(), &zero_mn, &mu_p, &k_star),
                bracket(f.compact.matrix(), &zero_mn, &zero_mn, &zero_mm),
                k_star,
            )
        }
        IwasawaMode::CompactCenter => {
            let k_t = kappa + &(&mu_p * &l.transpose());
            (
                bracket(f.nil.matrix(), &zero_mn, &mu_p, &zero_mm),
                bracket(f.compact.matrix(), &zero_mn, &zero_mn, &k_t),
                k_t,
            )
        }
    };
    Ok(JacobiIwasawa { mode, sp: f, lambda: lam, mu: mu_p, kappa: kap, nil, diag, compact })
}

/// Heisenberg parameters exactly as printed: `λH` for the nilpotent-center mode
/// and `µ + λA⁻¹B ᵗA` for the compact-center one. They agree with
/// [`jacobi_iwasawa`] only when `n = 1`.
pub fn iwasawa_params_printed(g: &JacobiElement<f64>, mode: IwasawaMode) -> Result<(Matrix<f64>, Matrix<f64>)> {
    let sp = SymplecticElement::with_tol(g.m.clone(), SYMPLECTIC_TOL * g.m.max_abs().max(1.0).powi(2))?;
    let f = iwasawa_decompose(&sp)?;
    let b = to_bracket(g);
    Ok(match mode {
        IwasawaMode::NilpotentCenter => {
            (&b.lambda * &Matrix::diag(&f.h), &b.mu + &(&(&b.lambda * &f.b) * &f.a.transpose()))
        }
        IwasawaMode::CompactCenter => {
            let ai = f.a.inverse(0.0)?;
            (&b.lambda * &f.a, &b.mu + &(&(&(&b.lambda * &ai) * &f.b) * &f.a.transpose()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::scalar::Rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e11(l: i64, mu: i64, k: i64) -> HeisElement<Rat> {
        let m = |v| Matrix::from_i64_rows(&[&[v]]);
        HeisElement::raw(m(l), m(mu), m(k))
    }

    fn j1() -> Matrix<Rat> {
        j_matrix(1)
    }

    #[test]
    fn mul_examples() {
        let id = Matrix::<Rat>::identity(2);
        let a = JacobiElement::new(id.clone(), e11(1, 0, 0)).unwrap();
        let b = JacobiElement::new(id.clone(), e11(0, 1, 0)).unwrap();
        assert_eq!(jacobi_mul(&a, &b).unwrap(), JacobiElement { m: id.clone(), heis: e11(1, 1, 1) });
        let j = JacobiElement::new(j1(), e11(0, 0, 0)).unwrap();
        assert_eq!(jacobi_mul(&a, &j).unwrap(), JacobiElement { m: j1(), heis: e11(0, 1, 0) });
        let e = JacobiElement::<Rat>::identity(1, 1);
        assert_eq!(jacobi_mul(&e, &a).unwrap(), a);
    }

    #[test]
    fn exact_group_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, m) in &[(1, 1), (2, 1), (2, 2)] {
            for _ in 0..5 {
                let g1 = sampling::jacobi_rat(&mut rng, n, m, 3);
                let g2 = sampling::jacobi_rat(&mut rng, n, m, 3);
                let g3 = sampling::jacobi_rat(&mut rng, n, m, 3);
                let l = jacobi_mul(&jacobi_mul(&g1, &g2).unwrap(), &g3).unwrap();
                let r = jacobi_mul(&g1, &jacobi_mul(&g2, &g3).unwrap()).unwrap();
                assert_eq!(l, r);
                assert_eq!(jacobi_mul(&g1, &jacobi_inv(&g1)).unwrap(), JacobiElement::identity(n, m));
                let p = jacobi_mul(&g1, &g2).unwrap();
                assert!(p.heis.symmetric_part().is_symmetric(0.0));
                assert_eq!(from_bracket(&g1.m, &to_bracket(&g1)), g1);
            }
        }
    }

    #[test]
    fn embed_orientation_is_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, m) in &[(1, 1), (2, 1), (1, 2), (2, 2)] {
            let pairs: Vec<_> = (0..6)
                .map(|_| (sampling::jacobi_rat(&mut rng, n, m, 3), sampling::jacobi_rat(&mut rng, n, m, 3)))
                .collect();
            assert_eq!(detect_orientation(&pairs, 0.0), Some(EMBED_ORIENTATION));
            for (g, _) in &pairs {
                assert!(is_symplectic(&jacobi_embed(g), 0.0));
            }
        }
        assert_eq!(jacobi_embed(&JacobiElement::<Rat>::identity(2, 1)), Matrix::identity(6));
    }

    #[test]
    fn q_form_examples() {
        let one = Matrix::<Rat>::from_i64_rows(&[&[1]]);
        let zero = Matrix::<Rat>::from_i64_rows(&[&[0]]);
        assert_eq!(q_form((&one, &zero), (&zero, &one)).unwrap(), one);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (l, mu) = (sampling::int_matrix(&mut rng, 2, 3, 3), sampling::int_matrix(&mut rng, 2, 3, 3));
        let (l2, mu2) = (sampling::int_matrix(&mut rng, 2, 3, 3), sampling::int_matrix(&mut rng, 2, 3, 3));
        let q = q_form((&l, &mu), (&l, &mu)).unwrap();
        assert_eq!(q.transpose(), -&q);
        let q12 = q_form((&l, &mu), (&l2, &mu2)).unwrap();
        assert_eq!(q12.transpose(), -&q_form((&l2, &mu2), (&l, &mu)).unwrap());
        let m = sampling::symplectic_rat(&mut rng, 3);
        let (a, b) = row_times(&l, &mu, &m);
        let (a2, b2) = row_times(&l2, &mu2, &m);
        assert_eq!(q_form((&a, &b), (&a2, &b2)).unwrap(), q12);
        let shear = Matrix::<Rat>::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let (x, y) = row_times(&one, &zero, &shear);
        let (x2, y2) = row_times(&zero, &one, &shear);
        assert_eq!(q_form((&x, &y), (&x2, &y2)).unwrap(), one);
    }

    #[test]
    fn action_examples() {
        let g = JacobiElement::new(
            Matrix::identity(2),
            HeisElement::raw(Matrix::from_rows(vec![vec![1.0]]).unwrap(), Matrix::zeros(1, 1), Matrix::zeros(1, 1)),
        )
        .unwrap();
        let p = jacobi_action(&g, &JacobiPoint::base(1, 1)).unwrap();
        assert!((p.w[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((p.z.z()[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn stabilizer_of_base_point() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let k = Matrix::from_rows(vec![vec![c, s], vec![-s, c]]).unwrap();
        let g = JacobiElement::new(
            k,
            HeisElement::raw(Matrix::zeros(1, 1), Matrix::zeros(1, 1), Matrix::from_rows(vec![vec![2.5]]).unwrap()),
        )
        .unwrap();
        let p = jacobi_action(&g, &JacobiPoint::base(1, 1)).unwrap();
        assert!(p.z.z().max_diff(SiegelPoint::i_e(1).z()) < 1e-14);
        assert!(p.w.max_abs() < 1e-15);
    }

    #[test]
    fn action_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, m) in &[(1, 1), (2, 1), (2, 2)] {
            for _ in 0..5 {
                let g1 = sampling::jacobi_f64(&mut rng, n, m, 0.4);
                let g2 = sampling::jacobi_f64(&mut rng, n, m, 0.4);
                let p0 = jacobi_action(&sampling::jacobi_f64(&mut rng, n, m, 0.4), &JacobiPoint::base(n, m)).unwrap();
                let lhs = jacobi_action(&jacobi_mul(&g1, &g2).unwrap(), &p0).unwrap();
                let rhs = jacobi_action(&g1, &jacobi_action(&g2, &p0).unwrap()).unwrap();
                assert!(lhs.z.z().max_diff(rhs.z.z()) < 1e-9);
                assert!(lhs.w.max_diff(&rhs.w) < 1e-9);
            }
        }
    }

    #[test]
    fn differential_examples() {
        let v = Matrix::from_rows(vec![vec![Complex64::new(0.5, -0.25)]]).unwrap();
        let w = Matrix::from_rows(vec![vec![Complex64::new(1.0, 2.0)]]).unwrap();
        let (dv, dw) = jacobi_differential(&JacobiElement::identity(1, 1), &v, &w).unwrap();
        assert!(dv.max_diff(&v) < 1e-15 && dw.max_diff(&w) < 1e-15);
        let g = JacobiElement::new(j_matrix::<f64>(1), HeisElement::identity(1, 1)).unwrap();
        let (dv, dw) = jacobi_differential(&g, &v, &w).unwrap();
        assert!(dv.max_diff(&-&v) < 1e-15);
        assert!(dw.max_diff(&w.scale(&Complex64::new(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn differential_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-5;
        for &(n, m) in &[(1, 1), (2, 1)] {
            for _ in 0..5 {
                let g = sampling::jacobi_f64(&mut rng, n, m, 0.5);
                let v = Matrix::from_parts(
                    &sampling::symmetric_matrix(&mut rng, n, 1.0),
                    &sampling::symmetric_matrix(&mut rng, n, 1.0),
                );
                let w = Matrix::from_parts(
                    &sampling::uniform_matrix(&mut rng, m, n, 1.0),
                    &sampling::uniform_matrix(&mut rng, m, n, 1.0),
                );
                let at = |t: f64| {
                    let z = &SiegelPoint::i_e(n).z().clone() + &v.scale(&Complex64::new(t, 0.0));
                    let p = JacobiPoint::new(SiegelPoint::new(z).unwrap(), w.scale(&Complex64::new(t, 0.0))).unwrap();
                    jacobi_action(&g, &p).unwrap()
                };
                let (p, q) = (at(h), at(-h));
                let c = Complex64::new(1.0 / (2.0 * h), 0.0);
                let fd_v = (p.z.z() - q.z.z()).scale(&c);
                let fd_w = (&p.w - &q.w).scale(&c);
                let (dv, dw) = jacobi_differential(&g, &v, &w).unwrap();
                assert!(dv.max_diff(&fd_v) < 1e-6, "{}", dv.max_diff(&fd_v));
                assert!(dw.max_diff(&fd_w) < 1e-6, "{}", dw.max_diff(&fd_w));
            }
        }
    }

    #[test]
    fn iwasawa_identity() {
        for mode in [IwasawaMode::NilpotentCenter, IwasawaMode::CompactCenter] {
            let f = jacobi_iwasawa(&JacobiElement::identity(2, 1), mode).unwrap();
            for e in [&f.nil, &f.diag, &f.compact] {
                assert!(e.m.max_diff(&Matrix::identity(4)) < 1e-14);
                assert!(e.heis.lambda.max_abs() + e.heis.mu.max_abs() + e.heis.kappa.max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn iwasawa_trivial_sp_part() {
        let h = HeisElement::new(
            Matrix::from_rows(vec![vec![1.0, 2.0]]).unwrap(),
            Matrix::from_rows(vec![vec![-1.0, 0.5]]).unwrap(),
            Matrix::from_rows(vec![vec![0.5]]).unwrap(),
        )
        .unwrap();
        let g = JacobiElement::new(Matrix::identity(4), h.clone()).unwrap();
        let f = jacobi_iwasawa(&g, IwasawaMode::NilpotentCenter).unwrap();
        assert!(f.lambda.max_diff(&h.lambda) < 1e-14);
        assert!(f.mu.max_diff(&h.mu) < 1e-14);
        assert!(f.kappa.max_diff(&h.symmetric_part()) < 1e-14);
        assert!(f.reconstruction_error(&g) < 1e-12);
    }

    #[test]
    fn iwasawa_roundtrip_both_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &(n, m) in &[(1, 1), (2, 1), (2, 2), (3, 2)] {
            for _ in 0..5 {
                let g = sampling::jacobi_f64(&mut rng, n, m, 0.5);
                for mode in [IwasawaMode::NilpotentCenter, IwasawaMode::CompactCenter] {
                    let f = jacobi_iwasawa(&g, mode).unwrap();
                    assert!(f.reconstruction_error(&g) < 1e-9);
                    f.validate(1e-9).unwrap();
                }
            }
        }
    }

    #[test]
    fn printed_iwasawa_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // n = 1: A = 1, so the printed µ̃ coincides; the printed λH does not.
        let g = sampling::jacobi_f64(&mut rng, 1, 2, 0.7);
        let f = jacobi_iwasawa(&g, IwasawaMode::CompactCenter).unwrap();
        let (l, mu) = iwasawa_params_printed(&g, IwasawaMode::CompactCenter).unwrap();
        assert!(l.max_diff(&f.lambda) < 1e-12 && mu.max_diff(&f.mu) < 1e-12);
        let f = jacobi_iwasawa(&g, IwasawaMode::NilpotentCenter).unwrap();
        let (l, _) = iwasawa_params_printed(&g, IwasawaMode::NilpotentCenter).unwrap();
        assert!((f.sp.h[0] - 1.0).abs() < 1e-9 || l.max_diff(&f.lambda) > 1e-9);
        let g = sampling::jacobi_f64(&mut rng, 2, 1, 0.7);
        let (_, mu) = iwasawa_params_printed(&g, IwasawaMode::CompactCenter).unwrap();
        let f = jacobi_iwasawa(&g, IwasawaMode::CompactCenter).unwrap();
        assert!(mu.max_diff(&f.mu) > 1e-6);
    }
}
