//! The Heisenberg group H^{(g,h)}: ∘- and ⋄-coordinates, the embedding into
//! Sp(g+h), the Lie algebra and its dual, coadjoint orbits, polarization and the
//! Pfaffian Plancherel density.
//!
//! Block layout of every 2(g+h)-square matrix is `(g, h, g, h)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::pfaffian_generic;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Tolerance for float symmetry checks on group elements.
pub const HEIS_TOL: f64 = 1e-12;
/// Nondegeneracy threshold `|det c| > 1e-10` for float `c`.
pub const NONDEGENERATE_TOL: f64 = 1e-10;

fn offsets(g: usize, h: usize) -> [usize; 4] {
    [0, g, g + h, 2 * g + h]
}

fn sym_tol<S: Scalar>(m: &Matrix<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        HEIS_TOL * m.max_abs().max(1.0)
    }
}

fn check_shape<S: Scalar>(name: &str, m: &Matrix<S>, r: usize, c: usize) -> Result<()> {
    if m.shape() != (r, c) {
        return Err(Error::DimMismatch(format!("{name} is {}x{}, expected {r}x{c}", m.rows(), m.cols())));
    }
    Ok(())
}

/// Group element `(λ, µ, κ)` in ∘-coordinates, with `κ + µᵗλ` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisElement<S: Scalar> {
    pub lambda: Matrix<S>,
    pub mu: Matrix<S>,
    pub kappa: Matrix<S>,
}

impl<S: Scalar> HeisElement<S> {
    pub fn new(lambda: Matrix<S>, mu: Matrix<S>, kappa: Matrix<S>) -> Result<Self> {
        let (h, g) = lambda.shape();
        check_shape("mu", &mu, h, g)?;
        check_shape("kappa", &kappa, h, h)?;
        let x = HeisElement { lambda, mu, kappa };
        let s = x.symmetric_part();
        if !s.is_symmetric(sym_tol(&s)) {
            return Err(Error::Domain("κ + µᵗλ is not symmetric".into()));
        }
        Ok(x)
    }

    /// No validation; for results of group operations on valid inputs.
    pub(crate) fn raw(lambda: Matrix<S>, mu: Matrix<S>, kappa: Matrix<S>) -> Self {
        HeisElement { lambda, mu, kappa }
    }

    pub fn identity(g: usize, h: usize) -> Self {
        HeisElement { lambda: Matrix::zeros(h, g), mu: Matrix::zeros(h, g), kappa: Matrix::zeros(h, h) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.lambda.cols(), self.lambda.rows())
    }

    /// `κ + µᵗλ`.
    pub fn symmetric_part(&self) -> Matrix<S> {
        &self.kappa + &(&self.mu * &self.lambda.transpose())
    }

    fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimMismatch(format!("(g,h) = {:?} vs {:?}", self.dims(), other.dims())));
        }
        Ok(())
    }
}

/// `(λ,µ,κ)∘(λ',µ',κ') = (λ+λ', µ+µ', κ+κ'+λᵗµ'−µᵗλ')`.
pub fn heis_mul<S: Scalar>(x: &HeisElement<S>, y: &HeisElement<S>) -> Result<HeisElement<S>> {
    x.same_dims(y)?;
    let kappa = &(&(&x.kappa + &y.kappa) + &(&x.lambda * &y.mu.transpose())) - &(&x.mu * &y.lambda.transpose());
    Ok(HeisElement::raw(&x.lambda + &y.lambda, &x.mu + &y.mu, kappa))
}

/// `(λ,µ,κ)⁻¹ = (−λ, −µ, −κ + λᵗµ − µᵗλ)`.
pub fn heis_inv<S: Scalar>(x: &HeisElement<S>) -> HeisElement<S> {
    let kappa = &(&-&x.kappa + &(&x.lambda * &x.mu.transpose())) - &(&x.mu * &x.lambda.transpose());
    HeisElement::raw(-&x.lambda, -&x.mu, kappa)
}

/// Element in ⋄-coordinates `[λ, µ, κ] := (0,µ,κ)∘(λ,0,0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisBracket<S: Scalar> {
    pub lambda: Matrix<S>,
    pub mu: Matrix<S>,
    pub kappa: Matrix<S>,
}

/// `[λ,µ,κ] ↦ (λ, µ, κ − µᵗλ)`.
pub fn from_bracket<S: Scalar>(b: &HeisBracket<S>) -> HeisElement<S> {
    let kappa = &b.kappa - &(&b.mu * &b.lambda.transpose());
    HeisElement::raw(b.lambda.clone(), b.mu.clone(), kappa)
}

/// `(λ,µ,κ) ↦ [λ, µ, κ + µᵗλ]`.
pub fn to_bracket<S: Scalar>(x: &HeisElement<S>) -> HeisBracket<S> {
    HeisBracket { lambda: x.lambda.clone(), mu: x.mu.clone(), kappa: x.symmetric_part() }
}

/// `[λ,µ,κ]⋄[λ₀,µ₀,κ₀] = [λ+λ₀, µ+µ₀, κ+κ₀+λᵗµ₀+µ₀ᵗλ]`.
pub fn diamond_mul<S: Scalar>(x: &HeisBracket<S>, y: &HeisBracket<S>) -> Result<HeisBracket<S>> {
    if x.lambda.shape() != y.lambda.shape() {
        return Err(Error::DimMismatch("⋄ operands differ in shape".into()));
    }
    let kappa = &(&(&x.kappa + &y.kappa) + &(&x.lambda * &y.mu.transpose())) + &(&y.mu * &x.lambda.transpose());
    Ok(HeisBracket { lambda: &x.lambda + &y.lambda, mu: &x.mu + &y.mu, kappa })
}

/// Mackey decomposition `x = k_x ∘ s_x` with `k_x = (0, µ, κ+µᵗλ)`, `s_x = (λ, 0, 0)`.
pub fn mackey_split<S: Scalar>(x: &HeisElement<S>) -> (HeisElement<S>, HeisElement<S>) {
    let (g, h) = x.dims();
    let k = HeisElement::raw(Matrix::zeros(h, g), x.mu.clone(), x.symmetric_part());
    let s = HeisElement::raw(x.lambda.clone(), Matrix::zeros(h, g), Matrix::zeros(h, h));
    (k, s)
}

/// Embedding into Sp(g+h) as a 2(g+h)-square matrix. It is a homomorphism for ∘.
pub fn heis_embed<S: Scalar>(x: &HeisElement<S>) -> Matrix<S> {
    let (g, h) = x.dims();
    let o = offsets(g, h);
    let mut m = Matrix::identity(2 * (g + h));
    m.set_block(o[0], o[3], &x.mu.transpose());
    m.set_block(o[1], o[0], &x.lambda);
    m.set_block(o[1], o[2], &x.mu);
    m.set_block(o[1], o[3], &x.kappa);
    m.set_block(o[2], o[3], &-&x.lambda.transpose());
    m
}

/// Lie algebra element `X(α, β, γ)` with `γ` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisLieElement<S: Scalar> {
    pub alpha: Matrix<S>,
    pub beta: Matrix<S>,
    pub gamma: Matrix<S>,
}

impl<S: Scalar> HeisLieElement<S> {
    pub fn new(alpha: Matrix<S>, beta: Matrix<S>, gamma: Matrix<S>) -> Result<Self> {
        let (h, g) = alpha.shape();
        check_shape("beta", &beta, h, g)?;
        check_shape("gamma", &gamma, h, h)?;
        if !gamma.is_symmetric(sym_tol(&gamma)) {
            return Err(Error::Domain("γ is not symmetric".into()));
        }
        Ok(HeisLieElement { alpha, beta, gamma })
    }

    pub fn zero(g: usize, h: usize) -> Self {
        HeisLieElement { alpha: Matrix::zeros(h, g), beta: Matrix::zeros(h, g), gamma: Matrix::zeros(h, h) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.alpha.cols(), self.alpha.rows())
    }

    /// Block matrix in sp(g+h).
    pub fn to_matrix(&self) -> Matrix<S> {
        let (g, h) = self.dims();
        let o = offsets(g, h);
        let mut m = Matrix::zeros(2 * (g + h), 2 * (g + h));
        m.set_block(o[0], o[3], &self.beta.transpose());
        m.set_block(o[1], o[0], &self.alpha);
        m.set_block(o[1], o[2], &self.beta);
        m.set_block(o[1], o[3], &self.gamma);
        m.set_block(o[2], o[3], &-&self.alpha.transpose());
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        HeisLieElement { alpha: &self.alpha + &o.alpha, beta: &self.beta + &o.beta, gamma: &self.gamma + &o.gamma }
    }

    pub fn scale(&self, s: &S) -> Self {
        HeisLieElement { alpha: self.alpha.scale(s), beta: self.beta.scale(s), gamma: self.gamma.scale(s) }
    }
}

/// `[X(α,β,γ), X(δ,ε,ξ)] = X(0, 0, αᵗε + εᵗα − βᵗδ − δᵗβ)`.
pub fn heis_lie_bracket<S: Scalar>(x: &HeisLieElement<S>, y: &HeisLieElement<S>) -> HeisLieElement<S> {
    let (g, h) = x.dims();
    let gamma = &(&(&x.alpha * &y.beta.transpose()) + &(&y.beta * &x.alpha.transpose()))
        - &(&(&x.beta * &y.alpha.transpose()) + &(&y.alpha * &x.beta.transpose()));
    HeisLieElement { alpha: Matrix::zeros(h, g), beta: Matrix::zeros(h, g), gamma }
}

/// Dual functional `F(a, b, c)` with `c` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisDual<S: Scalar> {
    pub a: Matrix<S>,
    pub b: Matrix<S>,
    pub c: Matrix<S>,
}

impl<S: Scalar> HeisDual<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>, c: Matrix<S>) -> Result<Self> {
        let (h, g) = a.shape();
        check_shape("b", &b, h, g)?;
        check_shape("c", &c, h, h)?;
        if !c.is_symmetric(sym_tol(&c)) {
            return Err(Error::Domain("c is not symmetric".into()));
        }
        Ok(HeisDual { a, b, c })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.cols(), self.a.rows())
    }

    /// Block realization whose trace pairing with [`HeisLieElement::to_matrix`]
    /// reproduces [`heis_pairing`].
    pub fn to_matrix(&self) -> Matrix<S> {
        let (g, h) = self.dims();
        let o = offsets(g, h);
        let mut m = Matrix::zeros(2 * (g + h), 2 * (g + h));
        m.set_block(o[0], o[1], &self.a.transpose());
        m.set_block(o[2], o[1], &self.b.transpose());
        m.set_block(o[3], o[0], &self.b);
        m.set_block(o[3], o[1], &self.c);
        m.set_block(o[3], o[2], &-&self.a);
        m
    }

    /// Reads `(a, b, c)` back from the block positions of [`Self::to_matrix`].
    pub fn project(phi: &Matrix<S>, g: usize, h: usize) -> Self {
        let o = offsets(g, h);
        HeisDual {
            a: phi.block(o[0], o[1], g, h).transpose(),
            b: phi.block(o[3], o[0], h, g),
            c: phi.block(o[3], o[1], h, h),
        }
    }
}

/// `⟨F, X⟩ = 2σ(ᵗαa + ᵗbβ) + σ(cγ)`.
pub fn heis_pairing<S: Scalar>(f: &HeisDual<S>, x: &HeisLieElement<S>) -> Result<S> {
    if f.dims() != x.dims() {
        return Err(Error::DimMismatch("pairing dims differ".into()));
    }
    let two = S::from_i64(2);
    let lin = (&x.alpha.transpose() * &f.a).trace() + (&f.b.transpose() * &x.beta).trace();
    Ok(two * lin + (&f.c * &x.gamma).trace())
}

/// Closed-form coadjoint action `Ad*(λ,µ,κ) F(a,b,c) = F(a + cµ, b − cλ, c)`.
pub fn heis_coadjoint<S: Scalar>(x: &HeisElement<S>, f: &HeisDual<S>) -> Result<HeisDual<S>> {
    if x.dims() != f.dims() {
        return Err(Error::DimMismatch("coadjoint dims differ".into()));
    }
    Ok(HeisDual { a: &f.a + &(&f.c * &x.mu), b: &f.b - &(&f.c * &x.lambda), c: f.c.clone() })
}

/// `(g F g⁻¹)_*` computed on block matrices and projected back.
pub fn heis_coadjoint_matrix<S: Scalar>(x: &HeisElement<S>, f: &HeisDual<S>) -> HeisDual<S> {
    let (g, h) = x.dims();
    let m = heis_embed(x);
    let mi = heis_embed(&heis_inv(x));
    HeisDual::project(&(&(&m * &f.to_matrix()) * &mi), g, h)
}

/// `B_F(X, Y) = σ(c(αᵗε + εᵗα − βᵗδ − δᵗβ))`.
pub fn heis_bform<S: Scalar>(f: &HeisDual<S>, x: &HeisLieElement<S>, y: &HeisLieElement<S>) -> S {
    let inner = &(&(&x.alpha * &y.beta.transpose()) + &(&y.beta * &x.alpha.transpose()))
        - &(&(&x.beta * &y.alpha.transpose()) + &(&y.alpha * &x.beta.transpose()));
    (&f.c * &inner).trace()
}

/// Standard basis of 𝔤: α-directions (row-major), then β-directions, then the
/// symmetric γ-directions `E_ab + E_ba` (a < b) and `E_aa`.
pub fn lie_basis<S: Scalar>(g: usize, h: usize) -> Vec<HeisLieElement<S>> {
    let mut out = Vec::new();
    for which in 0..2 {
        for p in 0..h {
            for q in 0..g {
                let mut x = HeisLieElement::zero(g, h);
                let e = Matrix::unit(h, g, p, q);
                if which == 0 {
                    x.alpha = e;
                } else {
                    x.beta = e;
                }
                out.push(x);
            }
        }
    }
    for a in 0..h {
        for b in a..h {
            let mut x = HeisLieElement::zero(g, h);
            x.gamma = sym_unit(h, a, b);
            out.push(x);
        }
    }
    out
}

fn sym_unit<S: Scalar>(n: usize, a: usize, b: usize) -> Matrix<S> {
    let mut m = Matrix::unit(n, n, a, b);
    if a != b {
        m[(b, a)] = S::one();
    }
    m
}

/// Gram matrix of `B_F` on [`lie_basis`].
pub fn bform_gram<S: Scalar>(f: &HeisDual<S>) -> Matrix<S> {
    let (g, h) = f.dims();
    let basis = lie_basis::<S>(g, h);
    let k = basis.len();
    Matrix::from_fn(k, k, |i, j| heis_bform(f, &basis[i], &basis[j]))
}

fn combine<S: Scalar>(basis: &[HeisLieElement<S>], coef: &[S]) -> HeisLieElement<S> {
    let (g, h) = basis[0].dims();
    basis.iter().zip(coef).fold(HeisLieElement::zero(g, h), |acc, (b, c)| acc.add(&b.scale(c)))
}

/// Basis of `rad B_F = {X : B_F(X, ·) = 0}` from the null space of the Gram matrix.
pub fn heis_radical<S: Scalar>(f: &HeisDual<S>, tol: f64) -> Vec<HeisLieElement<S>> {
    let (g, h) = f.dims();
    let basis = lie_basis::<S>(g, h);
    bform_gram(f).null_space(tol).iter().map(|v| combine(&basis, v)).collect()
}

/// Whether `c` is nondegenerate: exact for rationals, `|det c| > 1e-10` for floats.
pub fn is_nondegenerate<S: Scalar>(c: &Matrix<S>) -> bool {
    let d = c.det();
    if S::EXACT {
        !d.is_negligible(0.0)
    } else {
        d.modulus() > NONDEGENERATE_TOL
    }
}

/// Result of checking the polarization `𝔨 = {X(0, β, γ)}`.
#[derive(Debug, Clone)]
pub struct PolarizationReport<S: Scalar> {
    pub basis: Vec<HeisLieElement<S>>,
    pub isotropic: bool,
    pub radical_dim: usize,
    /// `dim 𝔨 = dim rad + hg`.
    pub maximal: bool,
    /// An α-direction whose addition breaks isotropy, with its partner in 𝔨.
    pub extension_witness: Option<(HeisLieElement<S>, HeisLieElement<S>)>,
}

/// Checks that `𝔨 = {X(0,β,γ)}` is a polarization for `F(0,0,c)`.
pub fn heis_polarization_check<S: Scalar>(c: &Matrix<S>, g: usize) -> Result<PolarizationReport<S>> {
    let h = c.rows();
    if !is_nondegenerate(c) {
        return Err(Error::Domain("c is degenerate".into()));
    }
    let f = HeisDual::new(Matrix::zeros(h, g), Matrix::zeros(h, g), c.clone())?;
    let all = lie_basis::<S>(g, h);
    let (alphas, rest) = all.split_at(h * g);
    let basis: Vec<_> = rest.to_vec();
    let isotropic = basis.iter().all(|x| basis.iter().all(|y| heis_bform(&f, x, y).is_negligible(0.0)));
    let radical_dim = heis_radical(&f, 0.0).len();
    let maximal = basis.len() == radical_dim + h * g;
    let extension_witness = alphas
        .iter()
        .find_map(|a| basis.iter().find(|y| !heis_bform(&f, a, y).is_negligible(0.0)).map(|y| (a.clone(), y.clone())));
    Ok(PolarizationReport { basis, isotropic, radical_dim, maximal, extension_witness })
}

/// Pfaffian of `a_ij = ⟨F, [y_i, y_j]⟩` over the non-central basis (α-directions, then β).
pub fn plancherel_density<S: Scalar>(f: &HeisDual<S>) -> Result<S> {
    if !is_nondegenerate(&f.c) {
        return Err(Error::Domain("c is degenerate".into()));
    }
    let (g, h) = f.dims();
    let basis = lie_basis::<S>(g, h);
    let y = &basis[..2 * h * g];
    let a =
        Matrix::from_fn(y.len(), y.len(), |i, j| heis_pairing(f, &heis_lie_bracket(&y[i], &y[j])).expect("same dims"));
    pfaffian_generic(&a)
}

/// `Plancherel` matrix itself, exposed for oracles.
pub fn plancherel_matrix<S: Scalar>(f: &HeisDual<S>) -> Matrix<S> {
    let (g, h) = f.dims();
    let basis = lie_basis::<S>(g, h);
    let y = &basis[..2 * h * g];
    Matrix::from_fn(y.len(), y.len(), |i, j| heis_pairing(f, &heis_lie_bracket(&y[i], &y[j])).expect("same dims"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitType {
    TypeI,
    TypeII,
    TypeIII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualOrbitClass {
    pub kind: OrbitType,
    pub stabilizer_dim: usize,
}

/// Type of the S-orbit of `(µ̂, κ̂)` under `λ ↦ (µ̂ + 2κ̂λ, κ̂)`. The stabilizer is
/// `{λ : κ̂λ = 0}` of dimension `(h − rank κ̂)·g`.
pub fn classify_dual_orbit<S: Scalar>(mu_hat: &Matrix<S>, kappa_hat: &Matrix<S>) -> Result<DualOrbitClass> {
    let h = kappa_hat.rows();
    check_shape("kappa_hat", kappa_hat, h, h)?;
    let g = mu_hat.cols();
    check_shape("mu_hat", mu_hat, h, g)?;
    let tol = sym_tol(kappa_hat);
    if !kappa_hat.is_symmetric(tol) {
        return Err(Error::Domain("κ̂ is not symmetric".into()));
    }
    let rank = kappa_hat.rank(tol);
    let kind = if rank == h {
        OrbitType::TypeI
    } else if rank == 0 {
        OrbitType::TypeIII
    } else {
        OrbitType::TypeII
    };
    Ok(DualOrbitClass { kind, stabilizer_dim: (h - rank) * g })
}
