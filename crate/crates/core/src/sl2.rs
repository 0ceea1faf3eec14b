//! sl(2)-triples: standard and normal bases, the Cayley transform,
//! Jacobson–Morozov completion and the triple-level Sekiguchi image.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{j_matrix, Matrix};
use crate::scalar::{i_unit, rat, ri, CRat, Lift, Rat, Scalar};

/// Float tolerance for triple relations.
pub const TRIPLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ambient", content = "n", rename_all = "lowercase")]
pub enum Ambient {
    /// sl(n): traceless n×n.
    Sl(usize),
    /// sp(2n): `ᵗZJ + JZ = 0` on 2n×2n.
    Sp(usize),
}

impl Ambient {
    pub fn size(self) -> usize {
        match self {
            Ambient::Sl(n) => n,
            Ambient::Sp(n) => 2 * n,
        }
    }

    /// Linear constraints cutting the ambient out of all matrices, as a list of scalars.
    fn constraints<S: Scalar>(self, z: &Matrix<S>) -> Vec<S> {
        match self {
            Ambient::Sl(_) => vec![z.trace()],
            Ambient::Sp(n) => {
                let j = j_matrix::<S>(n);
                (&(&z.transpose() * &j) + &(&j * z)).vectorize()
            }
        }
    }

    pub fn contains<S: Scalar>(self, z: &Matrix<S>, tol: f64) -> bool {
        z.shape() == (self.size(), self.size()) && self.constraints(z).iter().all(|v| v.is_negligible(tol))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Triple<S: Scalar> {
    pub h: Matrix<S>,
    pub x: Matrix<S>,
    pub y: Matrix<S>,
    pub ambient: Ambient,
}

fn tol_for<S: Scalar>(m: &Matrix<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        TRIPLE_TOL * m.max_abs().max(1.0).powi(2)
    }
}

impl<S: Scalar> Sl2Triple<S> {
    pub fn new(h: Matrix<S>, x: Matrix<S>, y: Matrix<S>, ambient: Ambient) -> Result<Self> {
        let t = Sl2Triple { h, x, y, ambient };
        t.check()?;
        Ok(t)
    }

    /// The three residuals `[H,X]−2X`, `[H,Y]+2Y`, `[X,Y]−H`.
    pub fn defects(&self) -> [Matrix<S>; 3] {
        let two = S::from_i64(2);
        [
            &self.h.commutator(&self.x) - &self.x.scale(&two),
            &self.h.commutator(&self.y) + &self.y.scale(&two),
            &self.x.commutator(&self.y) - &self.h,
        ]
    }

    /// Errors with the first failing bracket relation or ambient membership.
    pub fn check(&self) -> Result<()> {
        let n = self.ambient.size();
        for (name, m) in [("H", &self.h), ("X", &self.x), ("Y", &self.y)] {
            if m.shape() != (n, n) {
                return Err(Error::DimMismatch(format!("{name} is not {n}x{n}")));
            }
        }
        let tol = tol_for(&self.h).max(tol_for(&self.x)).max(tol_for(&self.y));
        let names = ["[H,X] = 2X", "[H,Y] = −2Y", "[X,Y] = H"];
        for (d, name) in self.defects().iter().zip(names) {
            if !d.is_zero(tol) {
                return Err(Error::Precondition(format!("relation {name} fails")));
            }
        }
        for (name, m) in [("H", &self.h), ("X", &self.x), ("Y", &self.y)] {
            if !self.ambient.contains(m, tol) {
                return Err(Error::Domain(format!("{name} is outside {:?}", self.ambient)));
            }
        }
        Ok(())
    }

    pub fn lift<T: Scalar>(&self) -> Sl2Triple<T>
    where
        S: Lift<T>,
    {
        Sl2Triple { h: self.h.lift(), x: self.x.lift(), y: self.y.lift(), ambient: self.ambient }
    }

    /// `(gHg⁻¹, gXg⁻¹, gYg⁻¹)`.
    pub fn conjugate(&self, g: &Matrix<S>, g_inv: &Matrix<S>) -> Self {
        let c = |m: &Matrix<S>| &(g * m) * g_inv;
        Sl2Triple { h: c(&self.h), x: c(&self.x), y: c(&self.y), ambient: self.ambient }
    }
}

/// Complex-linear Cartan involution `θ(Z) = −ᵗZ`.
pub fn theta<S: Scalar>(z: &Matrix<S>) -> Matrix<S> {
    -&z.transpose()
}

/// Conjugate-linear form `Z ↦ −ᵗZ̄` used for morphism classes.
pub fn theta_bar<S: Scalar>(z: &Matrix<S>) -> Matrix<S> {
    -&z.adjoint()
}

/// `H₀ = diag(1,−1)`, `E₀ = E₁₂`, `F₀ = E₂₁`.
pub fn standard_basis() -> Sl2Triple<CRat> {
    let m = |r: &[&[i64]]| Matrix::<Rat>::from_i64_rows(r).lift::<CRat>();
    Sl2Triple {
        h: m(&[&[1, 0], &[0, -1]]),
        x: m(&[&[0, 1], &[0, 0]]),
        y: m(&[&[0, 0], &[1, 0]]),
        ambient: Ambient::Sl(2),
    }
}

/// `h₀ = (0 i; −i 0)`, `x₀ = ½(1 −i; −i −1)`, `y₀ = ½(1 i; i −1)`.
pub fn normal_basis() -> Sl2Triple<CRat> {
    let i = i_unit();
    let half = CRat::new(rat(1, 2), ri(0));
    let one = CRat::new(ri(1), ri(0));
    let z = CRat::new(ri(0), ri(0));
    let h = Matrix::new(2, 2, vec![z.clone(), i.clone(), -i.clone(), z]).expect("2x2");
    let x = Matrix::new(2, 2, vec![one.clone(), -i.clone(), -i.clone(), -one.clone()]).expect("2x2").scale(&half);
    Sl2Triple { h, y: x.conj(), x, ambient: Ambient::Sl(2) }
}

/// `θ(H) = −H`, `θ(X) = −Y`, `θ(Y) = −X`; the first failing relation on error.
pub fn cayley_violation<S: Scalar>(t: &Sl2Triple<S>) -> Option<&'static str> {
    let tol = tol_for(&t.h).max(tol_for(&t.x));
    if !(&theta(&t.h) + &t.h).is_zero(tol) {
        return Some("θ(H) = −H");
    }
    if !(&theta(&t.x) + &t.y).is_zero(tol) {
        return Some("θ(X) = −Y");
    }
    if !(&theta(&t.y) + &t.x).is_zero(tol) {
        return Some("θ(Y) = −X");
    }
    None
}

pub fn is_cayley<S: Scalar>(t: &Sl2Triple<S>) -> bool {
    cayley_violation(t).is_none()
}

/// `H ∈ 𝔨_ℂ` (`θH = H`) and `X, Y ∈ 𝔭_ℂ` (`θX = −X`, `θY = −Y`).
pub fn is_normal<S: Scalar>(t: &Sl2Triple<S>) -> bool {
    let tol = tol_for(&t.h).max(tol_for(&t.x));
    (&theta(&t.h) - &t.h).is_zero(tol) && (&theta(&t.x) + &t.x).is_zero(tol) && (&theta(&t.y) + &t.y).is_zero(tol)
}

/// `H' = i(X−Y)`, `X' = ½(X+Y+iH)`, `Y' = ½(X+Y−iH)`.
pub fn cayley_transform(t: &Sl2Triple<CRat>) -> Result<Sl2Triple<CRat>> {
    t.check()?;
    if let Some(rel) = cayley_violation(t) {
        return Err(Error::Precondition(format!("not a Cayley triple: {rel} fails")));
    }
    let i = i_unit();
    let half = CRat::new(rat(1, 2), ri(0));
    let sum = &t.x + &t.y;
    let ih = t.h.scale(&i);
    let out = Sl2Triple {
        h: (&t.x - &t.y).scale(&i),
        x: (&sum + &ih).scale(&half),
        y: (&sum - &ih).scale(&half),
        ambient: t.ambient,
    };
    out.check()?;
    Ok(out)
}

/// `x = φ(x₀) = ½(H − i(X+Y))`.
pub fn sekiguchi_image(t: &Sl2Triple<CRat>) -> Result<Matrix<CRat>> {
    t.check()?;
    let half = CRat::new(rat(1, 2), ri(0));
    Ok((&t.h - &(&t.x + &t.y).scale(&i_unit())).scale(&half))
}

/// `φ(h₀) = i(X−Y)`, the grading element for the Sekiguchi image.
pub fn sekiguchi_grading(t: &Sl2Triple<CRat>) -> Matrix<CRat> {
    (&t.x - &t.y).scale(&i_unit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorphismClass {
    /// `σ∘φ = φ∘σ₀` for entrywise conjugation.
    pub real: bool,
    /// `θ∘φ = φ∘θ₀` for `θ(Z) = −ᵗZ̄`.
    pub theta: bool,
}

pub fn morphism_class<S: Scalar>(t: &Sl2Triple<S>) -> MorphismClass {
    let tol = tol_for(&t.h).max(tol_for(&t.x));
    let real = [&t.h, &t.x, &t.y].iter().all(|m| (&m.conj() - *m).is_zero(tol));
    let theta = (&theta_bar(&t.h) + &t.h).is_zero(tol)
        && (&theta_bar(&t.x) + &t.y).is_zero(tol)
        && (&theta_bar(&t.y) + &t.x).is_zero(tol);
    MorphismClass { real, theta }
}

/// Matrix of a linear map on n×n matrices, columns indexed by `vec(E_k)`.
fn operator_matrix<S: Scalar>(n: usize, f: impl Fn(&Matrix<S>) -> Vec<S>) -> Matrix<S> {
    let cols: Vec<Vec<S>> = (0..n * n).map(|k| f(&Matrix::unit(n, n, k / n, k % n))).collect();
    let rows = cols[0].len();
    Matrix::from_fn(rows, n * n, |i, j| cols[j][i].clone())
}

/// Minimum-norm solution of `A v = b` via `v = Aᴴ t`, `(A Aᴴ) t = b`.
fn min_norm_solve<S: Scalar>(a: &Matrix<S>, b: &[S], tol: f64) -> Result<Vec<S>> {
    let ah = a.adjoint();
    let rhs = Matrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    let t = (a * &ah).solve(&rhs, tol)?;
    Ok((&ah * &t).vectorize())
}

fn unvec<S: Scalar>(n: usize, v: &[S]) -> Matrix<S> {
    Matrix::new(n, n, v.to_vec()).expect("n² entries")
}

/// Completes a nonzero nilpotent `E` to a triple `(H, E, Y)`.
///
/// First `H = [E, Z]` with `[H, E] = 2E` and `Z` of minimal Frobenius norm in the
/// ambient, then `Y` of minimal norm with `[E, Y] = H`, `[H, Y] = −2Y`.
pub fn jacobson_morozov<S: Scalar>(e: &Matrix<S>, ambient: Ambient) -> Result<Sl2Triple<S>> {
    let n = ambient.size();
    if e.shape() != (n, n) {
        return Err(Error::DimMismatch(format!("E must be {n}x{n}")));
    }
    let tol = if S::EXACT { 0.0 } else { TRIPLE_TOL * e.max_abs().max(1.0) };
    if e.is_zero(tol) {
        return Err(Error::Precondition("E = 0".into()));
    }
    if !ambient.contains(e, tol) {
        return Err(Error::Domain(format!("E is outside {ambient:?}")));
    }
    let scale = e.max_abs().max(1.0);
    if !e.pow(n as u32).is_zero(if S::EXACT { 0.0 } else { TRIPLE_TOL * scale.powi(n as i32) }) {
        return Err(Error::Precondition("E is not nilpotent".into()));
    }
    let solve_tol = if S::EXACT { 0.0 } else { TRIPLE_TOL * scale.powi(4) };

    let two = S::from_i64(2);
    let mut target: Vec<S> = vec![S::zero(); ambient.constraints(e).len()];
    target.extend(e.scale(&two).vectorize());
    let a = operator_matrix(n, |z: &Matrix<S>| {
        let mut v = ambient.constraints(z);
        v.extend(e.commutator(z).commutator(e).vectorize());
        v
    });
    let z = unvec(n, &min_norm_solve(&a, &target, solve_tol).map_err(|_| inconsistent("H"))?);
    let h = e.commutator(&z);

    let mut target: Vec<S> = vec![S::zero(); ambient.constraints(e).len()];
    target.extend(h.vectorize());
    target.extend(vec![S::zero(); n * n]);
    let a = operator_matrix(n, |y: &Matrix<S>| {
        let mut v = ambient.constraints(y);
        v.extend(e.commutator(y).vectorize());
        v.extend((&h.commutator(y) + &y.scale(&two)).vectorize());
        v
    });
    let y = unvec(n, &min_norm_solve(&a, &target, solve_tol).map_err(|_| inconsistent("Y"))?);
    Sl2Triple::new(h, e.clone(), y, ambient)
}

fn inconsistent(what: &str) -> Error {
    Error::Domain(format!("linear system for {what} is inconsistent; E is not in the ambient nilpotent cone"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ci;

    fn rm(r: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_i64_rows(r)
    }

    #[test]
    fn standard_relations() {
        let t = standard_basis();
        t.check().unwrap();
        let two = ci(2, 0);
        assert_eq!(t.h.commutator(&t.x), t.x.scale(&two));
        assert_eq!(theta(&t.x), -&t.y);
        assert!(is_cayley(&t));
        assert!(!is_normal(&t));
    }

    #[test]
    fn normal_relations() {
        let t = normal_basis();
        t.check().unwrap();
        assert!(is_normal(&t));
        assert_eq!(t.x.conj(), t.y);
    }

    #[test]
    fn cayley_of_standard() {
        let c = cayley_transform(&standard_basis()).unwrap();
        assert_eq!(c.h, normal_basis().h);
        assert!(c.defects().iter().all(|d| d.is_zero(0.0)));
        assert!(is_normal(&c));
        assert_eq!(theta(&c.h), c.h);
        assert_eq!(theta(&c.x), -&c.x);
        let err = cayley_transform(&normal_basis()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref s) if s.contains("θ(H) = −H")));
    }

    #[test]
    fn sekiguchi_of_standard() {
        let t = standard_basis();
        let x = sekiguchi_image(&t).unwrap();
        assert_eq!(x, normal_basis().x);
        let h = sekiguchi_grading(&t);
        assert_eq!(h, normal_basis().h);
        assert_eq!(h.commutator(&x), x.scale(&ci(2, 0)));
    }

    #[test]
    fn morphism_classes() {
        assert_eq!(morphism_class(&standard_basis()), MorphismClass { real: true, theta: true });
        assert_eq!(morphism_class(&normal_basis()), MorphismClass { real: false, theta: true });
    }

    #[test]
    fn jm_sl2() {
        let t = jacobson_morozov(&rm(&[&[0, 1], &[0, 0]]), Ambient::Sl(2)).unwrap();
        assert_eq!(t.lift::<CRat>(), standard_basis());
    }

    #[test]
    fn jm_sp4_rank_one() {
        let mut e = Matrix::<Rat>::zeros(4, 4);
        e[(0, 2)] = ri(1);
        let t = jacobson_morozov(&e, Ambient::Sp(2)).unwrap();
        assert_eq!(t.h, Matrix::diag(&[ri(1), ri(0), ri(-1), ri(0)]));
        let mut y = Matrix::<Rat>::zeros(4, 4);
        y[(2, 0)] = ri(1);
        assert_eq!(t.y, y);
    }

    #[test]
    fn jm_principal_sl3() {
        let t = jacobson_morozov(&rm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]), Ambient::Sl(3)).unwrap();
        assert_eq!(t.h, Matrix::diag(&[ri(2), ri(0), ri(-2)]));
    }

    #[test]
    fn jm_errors() {
        assert!(matches!(jacobson_morozov(&Matrix::<Rat>::zeros(2, 2), Ambient::Sl(2)), Err(Error::Precondition(_))));
        assert!(jacobson_morozov(&rm(&[&[1, 1], &[0, -1]]), Ambient::Sl(2)).is_err());
        // nilpotent but not Hamiltonian
        let mut e = Matrix::<Rat>::zeros(4, 4);
        e[(0, 1)] = ri(1);
        assert!(matches!(jacobson_morozov(&e, Ambient::Sp(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn jm_float_input() {
        let e = Matrix::from_rows(vec![vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let t = jacobson_morozov(&e, Ambient::Sl(2)).unwrap();
        assert!(t.h.approx_eq(&Matrix::diag(&[1.0, -1.0]), 1e-12));
        assert!(t.y.approx_eq(&Matrix::from_rows(vec![vec![0.0, 0.0], vec![0.5, 0.0]]).unwrap(), 1e-12));
    }
}
