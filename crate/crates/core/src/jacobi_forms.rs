//! Scalar-weight Jacobi forms: the slash action, the automorphic-factor
//! cocycle, theta series with a truncation bound, and Fourier coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::HeisElement;
use crate::jacobi::{cz_plus_d, jacobi_action, jacobi_mul, right_divide, JacobiElement, JacobiPoint};
use crate::matrix::{j_matrix, Matrix};
use crate::par::{map_collect, map_range, pairwise_sum, ExecMode};
use crate::scalar::{rat, rat_to_f64, Rat};
use crate::symplectic::SiegelPoint;

/// Weight `det^k` and index `𝓜` of a slash operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SlashContext {
    pub n: usize,
    pub m: usize,
    pub k: i64,
    /// Symmetric, positive semidefinite, `2𝓜` integral with integral diagonal.
    pub index: Matrix<Rat>,
}

impl SlashContext {
    pub fn new(n: usize, m: usize, k: i64, index: Matrix<Rat>) -> Result<Self> {
        if index.shape() != (m, m) {
            return Err(Error::DimMismatch(format!("index must be {m}x{m}")));
        }
        if !index.is_symmetric(0.0) {
            return Err(Error::Domain("index must be symmetric".into()));
        }
        for i in 0..m {
            for j in 0..m {
                let v = &index[(i, j)];
                let ok = if i == j { v.is_integer() } else { (v * Rat::from_integer(2.into())).is_integer() };
                if !ok {
                    return Err(Error::Domain("index must be half-integral".into()));
                }
            }
        }
        if m > 0 {
            let ev = index.map(rat_to_f64).to_nalgebra().symmetric_eigen().eigenvalues;
            if ev.iter().any(|&e| e < -1e-12) {
                return Err(Error::Domain("index must be positive semidefinite".into()));
            }
        }
        Ok(SlashContext { n, m, k, index })
    }

    fn index_f64(&self) -> Matrix<Complex64> {
        self.index.map(rat_to_f64).to_c64()
    }
}

/// `J_{𝓜,k}(g, (Z, W))` for `ρ = det^k`.
pub fn automorphic_factor(ctx: &SlashContext, g: &JacobiElement<f64>, pt: &JacobiPoint) -> Result<Complex64> {
    let (n, m) = g.dims();
    if (n, m) != (ctx.n, ctx.m) || pt.z.degree() != n || pt.w.rows() != m {
        return Err(Error::DimMismatch("slash: element, point and context differ in (n, m)".into()));
    }
    let z = pt.z.z();
    let (_, _, c, _) = g.blocks();
    let den = cz_plus_d(g, z)?;
    let mm = ctx.index_f64();
    let lambda = g.heis.lambda.to_c64();
    let mu = g.heis.mu.to_c64();
    let kappa = g.heis.kappa.to_c64();
    let shifted = &(&pt.w + &(&lambda * z)) + &mu;
    // σ(𝓜[X](CZ+D)⁻¹C) with 𝓜[X] = ᵗX𝓜X
    let tail = right_divide(&(&(&shifted.transpose() * &mm) * &shifted), &den)?;
    let e1 = (&tail * &c.to_c64()).trace();
    let inner = &(&(&(&lambda * z) * &lambda.transpose())
        + &(&lambda * &pt.w.transpose()).scale(&Complex64::new(2.0, 0.0)))
        + &(&kappa + &(&mu * &lambda.transpose()));
    let e2 = (&mm * &inner).trace();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Ok((two_pi_i * (e2 - e1)).exp() * den.det().powi(-ctx.k as i32))
}

/// `(f|_{k,𝓜}[g])(Z, W) = J(g, (Z,W)) f(g·(Z,W))`.
pub fn slash<F>(ctx: &SlashContext, f: F, g: &JacobiElement<f64>, pt: &JacobiPoint) -> Result<Complex64>
where
    F: Fn(&JacobiPoint) -> Result<Complex64>,
{
    let factor = automorphic_factor(ctx, g, pt)?;
    Ok(factor * f(&jacobi_action(g, pt)?)?)
}

/// `|((f|[g₁])|[g₂])(P) − (f|[g₁g₂])(P)|`.
pub fn cocycle_defect<F>(
    ctx: &SlashContext,
    f: F,
    g1: &JacobiElement<f64>,
    g2: &JacobiElement<f64>,
    pt: &JacobiPoint,
) -> Result<f64>
where
    F: Fn(&JacobiPoint) -> Result<Complex64> + Copy,
{
    let nested = slash(ctx, |q: &JacobiPoint| slash(ctx, f, g1, q), g2, pt)?;
    let direct = slash(ctx, f, &jacobi_mul(g1, g2)?, pt)?;
    Ok((nested - direct).norm())
}

/// Even positive definite `S` (2k×2k), characteristic `c` (2k×m) and box radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaSpec {
    #[serde(rename = "S")]
    pub s: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub radius: u32,
}

/// Cap on the estimated number of lattice points visited.
pub const THETA_POINT_CAP: usize = 50_000_000;

impl ThetaSpec {
    pub fn new(s: Vec<Vec<i64>>, c: Vec<Vec<i64>>, radius: u32) -> Result<Self> {
        let spec = ThetaSpec { s, c, radius };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.s.len();
        if d == 0 || !d.is_multiple_of(2) || self.s.iter().any(|r| r.len() != d) {
            return Err(Error::Shape("S must be square of even size".into()));
        }
        if self.c.len() != d || self.c.iter().any(|r| r.len() != self.c[0].len()) || self.c[0].is_empty() {
            return Err(Error::Shape("c must have as many rows as S and at least one column".into()));
        }
        for i in 0..d {
            if self.s[i][i] % 2 != 0 {
                return Err(Error::Domain("S must have even diagonal".into()));
            }
            for j in 0..d {
                if self.s[i][j] != self.s[j][i] {
                    return Err(Error::Domain("S must be symmetric".into()));
                }
            }
        }
        let s = self.s_rat();
        for k in 1..=d {
            if s.block(0, 0, k, k).det() <= Rat::zero() {
                return Err(Error::Domain("S must be positive definite".into()));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> i64 {
        self.s.len() as i64 / 2
    }

    pub fn m(&self) -> usize {
        self.c[0].len()
    }

    pub fn s_rat(&self) -> Matrix<Rat> {
        Matrix::from_fn(self.rank(), self.rank(), |i, j| Rat::from_integer(self.s[i][j].into()))
    }

    fn c_rat(&self) -> Matrix<Rat> {
        Matrix::from_fn(self.rank(), self.m(), |i, j| Rat::from_integer(self.c[i][j].into()))
    }

    /// `𝓜 = ½ ᵗc S c`.
    pub fn index(&self) -> Matrix<Rat> {
        let c = self.c_rat();
        (&(&c.transpose() * &self.s_rat()) * &c).scale(&rat(1, 2))
    }

    pub fn is_unimodular(&self) -> bool {
        self.s_rat().det().is_one()
    }

    pub fn slash_context(&self, n: usize) -> Result<SlashContext> {
        SlashContext::new(n, self.m(), self.weight(), self.index())
    }
}

/// Value of a truncated theta series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaValue {
    pub re: f64,
    pub im: f64,
    /// Bound on the neglected part of the series.
    pub tail_bound: f64,
    /// Lattice points summed.
    pub terms: usize,
}

impl ThetaValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn kron_f64(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())]
    })
}

fn unit_ball_volume(d: usize) -> f64 {
    // V_d = π^{d/2} / Γ(d/2 + 1), with Γ(1) = 1, Γ(1/2) = √π
    let half = d as f64 / 2.0;
    let (mut gamma, mut x) = if d.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x <= half + 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    PI.powf(half) / gamma
}

struct Lattice {
    d: usize,
    radius: i64,
    /// Upper-triangular Fincke–Pohst coefficients: `q[i][i]` diagonal, `q[i][j]` for `j > i`.
    q: Vec<Vec<f64>>,
    shift: Vec<f64>,
    qcut: f64,
    gz: Vec<Complex64>,
    b: Vec<Complex64>,
}

#[derive(Default)]
struct Slice {
    terms: Vec<Complex64>,
    skipped: Vec<f64>,
}

impl Lattice {
    fn exponent(&self, x: &[i64]) -> Complex64 {
        let d = self.d;
        let mut quad = Complex64::zero();
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            let mut row = Complex64::zero();
            for j in 0..d {
                if x[j] != 0 {
                    row += self.gz[i * d + j] * x[j] as f64;
                }
            }
            quad += row * x[i] as f64 + self.b[i] * (2.0 * x[i] as f64);
        }
        Complex64::new(0.0, PI) * quad
    }

    fn range(&self, i: usize, x: &[i64], budget: f64) -> (i64, i64, f64) {
        let t: f64 = (i + 1..self.d).map(|j| self.q[i][j] * (x[j] as f64 + self.shift[j])).sum();
        let center = -t - self.shift[i];
        let r = (budget.max(0.0) / self.q[i][i]).sqrt();
        ((center - r).ceil() as i64, (center + r).floor() as i64, t)
    }

    fn walk(&self, i: usize, x: &mut [i64], budget: f64, out: &mut Slice) {
        let (lo, hi, t) = self.range(i, x, budget);
        for xi in lo..=hi {
            let u = xi as f64 + self.shift[i] + t;
            let used = self.q[i][i] * u * u;
            if used > budget {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                let e = self.exponent(x);
                if x.iter().all(|v| v.abs() <= self.radius) {
                    out.terms.push(e.exp());
                } else {
                    out.skipped.push(e.re.exp());
                }
            } else {
                self.walk(i - 1, x, budget - used, out);
            }
        }
        x[i] = 0;
    }
}

/// `ϑ_{S,c}(Z, W) = Σ_λ e^{πi{σ(SλZᵗλ) + 2σ(ᵗcSλᵗW)}}` over `λ ∈ ℤ^{(2k,n)}`, `‖λ‖∞ ≤ radius`.
pub fn theta_eval(spec: &ThetaSpec, pt: &JacobiPoint) -> Result<ThetaValue> {
    theta_eval_with(spec, pt, ExecMode::default())
}

/// [`theta_eval`] with an explicit execution mode; both modes return identical bits.
pub fn theta_eval_with(spec: &ThetaSpec, pt: &JacobiPoint, mode: ExecMode) -> Result<ThetaValue> {
    spec.validate()?;
    let n = pt.z.degree();
    if pt.w.shape() != (spec.m(), n) {
        return Err(Error::DimMismatch(format!("W must be {}x{n}", spec.m())));
    }
    let s = spec.s_rat().map(rat_to_f64);
    let c = spec.c_rat().map(rat_to_f64);
    let d = spec.rank() * n;
    let g = kron_f64(&s, &pt.z.im());
    let gz = {
        let sz = s.to_c64();
        Matrix::from_fn(d, d, |i, j| sz[(i / n, j / n)] * pt.z.z()[(i % n, j % n)])
    };
    // λ indexed row-major: (a, i) ↦ a·n + i
    let b = &(&s.to_c64() * &c.to_c64()) * &pt.w;
    let b_vec = b.vectorize();
    let im_b = Matrix::from_fn(d, 1, |i, _| b_vec[i].im);
    let shift_m = g.solve(&im_b, 1e-14)?;
    let shift: Vec<f64> = (0..d).map(|i| shift_m[(i, 0)]).collect();
    let q_s: f64 = (0..d).map(|i| (0..d).map(|j| shift[i] * g[(i, j)] * shift[j]).sum::<f64>()).sum();

    let chol = nalgebra::Cholesky::new(g.to_nalgebra()).ok_or(Error::NotPositiveDefinite(f64::NAN))?;
    let r = chol.l().transpose();
    let mut q = vec![vec![0.0; d]; d];
    for i in 0..d {
        q[i][i] = r[(i, i)] * r[(i, i)];
        for j in i + 1..d {
            q[i][j] = r[(i, j)] / r[(i, i)];
        }
    }
    // Σ_λ e^{−πQ/2} ≤ C by summing one coordinate at a time (each shifted 1-D sum ≤ 2/(1−e^{−a})).
    let sigma_min = g.to_nalgebra().symmetric_eigen().eigenvalues.min();
    let geo = |a: f64| 2.0 / (1.0 - (-PI * a / 2.0).exp());
    let c_diag: f64 = (0..d).map(|i| geo(q[i][i])).product();
    let c_min = geo(sigma_min).powi(d as i32);
    let big_c = c_diag.min(c_min);
    let qcut = (2.0 / PI) * (big_c.ln() + 16.0 * 10f64.ln());
    let det = chol.determinant();
    let estimate = unit_ball_volume(d) * qcut.powf(d as f64 / 2.0) / det.sqrt() + 1.0;
    if estimate > THETA_POINT_CAP as f64 {
        return Err(Error::TooLarge { size: estimate as usize, cap: THETA_POINT_CAP });
    }
    let lattice = Lattice { d, radius: spec.radius as i64, q, shift, qcut, gz: gz.vectorize(), b: b_vec };

    let top = d - 1;
    let zero = vec![0i64; d];
    let (lo, hi, t) = lattice.range(top, &zero, lattice.qcut);
    let values: Vec<i64> = (lo..=hi).collect();
    let slices = map_collect(mode, &values, |&v| {
        let mut out = Slice::default();
        let u = v as f64 + lattice.shift[top] + t;
        let used = lattice.q[top][top] * u * u;
        if used <= lattice.qcut {
            let mut x = vec![0i64; d];
            x[top] = v;
            if top == 0 {
                let e = lattice.exponent(&x);
                if v.abs() <= lattice.radius {
                    out.terms.push(e.exp());
                } else {
                    out.skipped.push(e.re.exp());
                }
            } else {
                lattice.walk(top - 1, &mut x, lattice.qcut - used, &mut out);
            }
        }
        out
    });
    let sums: Vec<Complex64> = slices.iter().map(|s| pairwise_sum(&s.terms)).collect();
    let skipped: Vec<f64> = slices.iter().map(|s| pairwise_sum(&s.skipped)).collect();
    let value = pairwise_sum(&sums);
    let outside = (PI * q_s).exp() * (-PI * qcut / 2.0).exp() * big_c;
    Ok(ThetaValue {
        re: value.re,
        im: value.im,
        tail_bound: outside + pairwise_sum(&skipped),
        terms: slices.iter().map(|s| s.terms.len()).sum(),
    })
}

/// Generators of `Γ^J_1` used by the invariance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaGenerator {
    /// `((1 1; 0 1), 0)`.
    Translation,
    /// `(E, (1, 0, 0))` in the first row of λ.
    LambdaShift,
    /// `(E, (0, 1, 0))` in the first row of µ.
    MuShift,
    /// `(J₁, 0)`.
    Inversion,
}

impl ThetaGenerator {
    pub const ALL: [ThetaGenerator; 4] =
        [ThetaGenerator::Translation, ThetaGenerator::LambdaShift, ThetaGenerator::MuShift, ThetaGenerator::Inversion];

    pub fn element(self, m: usize) -> JacobiElement<f64> {
        let mut sp = Matrix::<f64>::identity(2);
        let mut lambda = Matrix::zeros(m, 1);
        let mut mu = Matrix::zeros(m, 1);
        match self {
            ThetaGenerator::Translation => sp[(0, 1)] = 1.0,
            ThetaGenerator::LambdaShift => lambda[(0, 0)] = 1.0,
            ThetaGenerator::MuShift => mu[(0, 0)] = 1.0,
            ThetaGenerator::Inversion => sp = j_matrix(1),
        }
        let heis = HeisElement::new(lambda, mu, Matrix::zeros(m, m)).expect("integral generator");
        JacobiElement::new(sp, heis).expect("integral generator")
    }
}

/// Five fixed test points of `H_{1,m}`.
pub fn invariance_points(m: usize) -> Vec<JacobiPoint> {
    let zs = [(0.0, 1.0), (0.3, 1.1), (-0.4, 0.9), (0.1, 1.5), (0.25, 0.8)];
    let ws = [(0.0, 0.0), (0.2, 0.1), (-0.3, 0.25), (0.5, -0.2), (0.1, 0.3)];
    zs.iter()
        .zip(ws)
        .map(|(&(x, y), (u, v))| {
            let z = SiegelPoint::new(Matrix::from_fn(1, 1, |_, _| Complex64::new(x, y))).expect("upper half plane");
            let w = Matrix::from_fn(m, 1, |i, _| Complex64::new(u / (i + 1) as f64, v / (i + 1) as f64));
            JacobiPoint::new(z, w).expect("shapes match")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// Largest `|(ϑ|[γ])(P) − ϑ(P)|` over the points.
    pub residual: f64,
    /// Largest tail bound over all evaluations, scaled by the automorphic factor.
    pub tail_bound: f64,
    pub points: usize,
}

/// Checks `ϑ|_{k,𝓜}[γ] = ϑ` at `points` (n = 1).
pub fn theta_slash_invariance(
    spec: &ThetaSpec,
    gamma: &JacobiElement<f64>,
    points: &[JacobiPoint],
) -> Result<InvarianceReport> {
    let (n, m) = gamma.dims();
    if n != 1 || m != spec.m() {
        return Err(Error::Precondition(format!("invariance runs at n = 1, m = {}", spec.m())));
    }
    let integral = |x: &Matrix<f64>| x.entries().iter().all(|v| v.fract() == 0.0);
    if !integral(&gamma.m) || !integral(&gamma.heis.lambda) || !integral(&gamma.heis.mu) || !integral(&gamma.heis.kappa)
    {
        return Err(Error::Precondition("generator must be integral".into()));
    }
    let (_, _, c, _) = gamma.blocks();
    if !c.is_zero(0.0) && !spec.is_unimodular() {
        return Err(Error::Precondition("generators with C != 0 need unimodular S".into()));
    }
    let ctx = spec.slash_context(1)?;
    let mut residual = 0.0f64;
    let mut tail = 0.0f64;
    for pt in points {
        let base = theta_eval(spec, pt)?;
        let moved = theta_eval(spec, &jacobi_action(gamma, pt)?)?;
        let factor = automorphic_factor(&ctx, gamma, pt)?;
        residual = residual.max((factor * moved.value() - base.value()).norm());
        tail = tail.max(base.tail_bound + factor.norm() * moved.tail_bound);
    }
    Ok(InvarianceReport { residual, tail_bound: tail, points: points.len() })
}

/// `c(T, R)` for n = m = 1 by trapezoid quadrature over one period in `X` and `U`.
pub fn fourier_coefficient<F>(f: F, t: &Rat, r: i64, y: f64, v: f64, grid: usize, mode: ExecMode) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64> + Sync + Send,
{
    if !(t * Rat::from_integer(2.into())).is_integer() || *t < Rat::zero() {
        return Err(Error::Domain("T must be a non-negative half-integer".into()));
    }
    if grid < 64 {
        return Err(Error::Precondition("quadrature grid must have at least 64 points per axis".into()));
    }
    if y <= 0.0 {
        return Err(Error::Domain("Y must be positive".into()));
    }
    let tf = rat_to_f64(t);
    let h = 1.0 / grid as f64;
    let rows = map_range(mode, grid, |a| -> Result<Complex64> {
        let x = a as f64 * h;
        let mut acc = Vec::with_capacity(grid);
        for bidx in 0..grid {
            let u = bidx as f64 * h;
            let val = f(Complex64::new(x, y), Complex64::new(u, v))?;
            let phase = Complex64::new(0.0, -2.0 * PI * (tf * x + r as f64 * u)).exp();
            acc.push(val * phase);
        }
        Ok(pairwise_sum(&acc))
    });
    let rows: Vec<Complex64> = rows.into_iter().collect::<Result<_>>()?;
    let mean = pairwise_sum(&rows) * (h * h);
    Ok(mean * (2.0 * PI * (tf * y + r as f64 * v)).exp())
}

/// Scalar point `(τ, z)` of `H_{1,1}`.
pub fn point11(tau: Complex64, z: Complex64) -> Result<JacobiPoint> {
    JacobiPoint::new(SiegelPoint::new(Matrix::from_fn(1, 1, |_, _| tau))?, Matrix::from_fn(1, 1, |_, _| z))
}

/// Gram matrix of the E₈ lattice in a basis of roots whose dual basis is also made of roots
/// (both `S` and `S⁻¹` have diagonal 2), so a vector of norm `2t` has coordinates at most `2√t`.
/// In the Cartan basis the same vectors need coordinates up to `6√t`.
pub fn e8_gram() -> Vec<Vec<i64>> {
    vec![
        vec![2, -1, 1, 0, 1, -1, 1, -1],
        vec![-1, 2, -1, 0, 0, 1, -1, 0],
        vec![1, -1, 2, -1, 1, -1, 0, 0],
        vec![0, 0, -1, 2, -1, 0, 1, -1],
        vec![1, 0, 1, -1, 2, -1, 0, 0],
        vec![-1, 1, -1, 0, -1, 2, -1, 0],
        vec![1, -1, 0, 1, 0, -1, 2, -1],
        vec![-1, 0, 0, -1, 0, 0, -1, 2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::jacobi_f64;
    use crate::scalar::ri;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_spec() -> ThetaSpec {
        ThetaSpec::new(vec![vec![2, 0], vec![0, 2]], vec![vec![1], vec![1]], 6).unwrap()
    }

    fn smooth(p: &JacobiPoint) -> Result<Complex64> {
        let (z, w) = (p.z.z()[(0, 0)], p.w[(0, 0)]);
        Ok((Complex64::new(0.3, 0.1) * z + Complex64::new(-0.2, 0.4) * w + 0.1 * w * w).exp())
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-12);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((unit_ball_volume(8) - PI.powi(4) / 24.0).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(ThetaSpec::new(vec![vec![1, 0], vec![0, 1]], vec![vec![1], vec![1]], 3).is_err());
        assert!(ThetaSpec::new(vec![vec![2, 3], vec![3, 2]], vec![vec![1], vec![1]], 3).is_err());
        assert_eq!(test_spec().index(), Matrix::from_fn(1, 1, |_, _| ri(2)));
        let e8 = ThetaSpec::new(e8_gram(), (0..8).map(|i| vec![i64::from(i == 0)]).collect(), 8).unwrap();
        assert!(e8.is_unimodular());
        assert_eq!(e8.index()[(0, 0)], ri(1));
    }

    #[test]
    fn theta_value_example() {
        let v = theta_eval(&test_spec(), &JacobiPoint::base(1, 1)).unwrap();
        let q = (-2.0 * PI).exp();
        let th3: f64 = 1.0 + 2.0 * (1..6).map(|k| q.powi(k * k)).sum::<f64>();
        assert!((v.value() - Complex64::new(th3 * th3, 0.0)).norm() < 1e-14);
        assert!((v.re - 1.00748).abs() < 1e-5);
        assert!(v.tail_bound < 1e-12);
    }

    #[test]
    fn e8_theta_is_e4() {
        // E₄(i) = 3Γ(1/4)⁸/(2π)⁶
        let e8 = ThetaSpec::new(e8_gram(), vec![vec![0]; 8], 8).unwrap();
        let v = theta_eval(&e8, &JacobiPoint::base(1, 1)).unwrap();
        assert!((v.value() - Complex64::new(1.4557628922687107, 0.0)).norm() < 1e-12);
        assert!(v.tail_bound < 1e-12);
    }

    #[test]
    fn theta_periodicity() {
        let spec = test_spec();
        let p = point11(Complex64::new(0.2, 0.9), Complex64::new(0.1, 0.3)).unwrap();
        let pw = point11(Complex64::new(0.2, 0.9), Complex64::new(1.1, 0.3)).unwrap();
        let pz = point11(Complex64::new(1.2, 0.9), Complex64::new(0.1, 0.3)).unwrap();
        let v = theta_eval(&spec, &p).unwrap().value();
        assert!((theta_eval(&spec, &pw).unwrap().value() - v).norm() < 1e-10);
        assert!((theta_eval(&spec, &pz).unwrap().value() - v).norm() < 1e-10);
    }

    #[test]
    fn modes_give_identical_bits() {
        let spec = test_spec();
        let p = point11(Complex64::new(0.2, 0.7), Complex64::new(0.1, 0.3)).unwrap();
        let a = theta_eval_with(&spec, &p, ExecMode::Sequential).unwrap();
        let b = theta_eval_with(&spec, &p, ExecMode::Parallel).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn small_radius_reports_tail() {
        let mut spec = test_spec();
        spec.radius = 0;
        let v = theta_eval(&spec, &JacobiPoint::base(1, 1)).unwrap();
        assert_eq!(v.terms, 1);
        assert!(v.tail_bound > 1e-3);
    }

    #[test]
    fn slash_identity_and_mu_shift() {
        let ctx = SlashContext::new(1, 1, 1, Matrix::from_fn(1, 1, |_, _| ri(2))).unwrap();
        let p = point11(Complex64::new(0.2, 0.9), Complex64::new(0.1, 0.3)).unwrap();
        let id = JacobiElement::<f64>::identity(1, 1);
        assert!((slash(&ctx, smooth, &id, &p).unwrap() - smooth(&p).unwrap()).norm() < 1e-14);
        let mu = JacobiElement::new(
            Matrix::identity(2),
            HeisElement::new(Matrix::zeros(1, 1), Matrix::from_fn(1, 1, |_, _| 0.7), Matrix::zeros(1, 1)).unwrap(),
        )
        .unwrap();
        let shifted = point11(Complex64::new(0.2, 0.9), Complex64::new(0.8, 0.3)).unwrap();
        assert!((slash(&ctx, smooth, &mu, &p).unwrap() - smooth(&shifted).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn cocycle_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ctx = SlashContext::new(1, 1, 3, Matrix::from_fn(1, 1, |_, _| rat(3, 1))).unwrap();
        for _ in 0..20 {
            let g1 = jacobi_f64(&mut rng, 1, 1, 0.4);
            let g2 = jacobi_f64(&mut rng, 1, 1, 0.4);
            let p = point11(
                Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.5)),
                Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
            )
            .unwrap();
            let d = cocycle_defect(&ctx, smooth, &g1, &g2, &p).unwrap();
            assert!(d < 1e-9, "{d}");
        }
    }

    #[test]
    fn invariance_small_theta() {
        let spec = test_spec();
        let pts = invariance_points(1);
        for g in [ThetaGenerator::Translation, ThetaGenerator::LambdaShift, ThetaGenerator::MuShift] {
            let r = theta_slash_invariance(&spec, &g.element(1), &pts).unwrap();
            assert!(r.residual < 1e-8, "{g:?} {r:?}");
        }
        let err = theta_slash_invariance(&spec, &ThetaGenerator::Inversion.element(1), &pts).unwrap_err();
        assert_eq!(err.kind(), "precondition");
    }

    #[test]
    fn fourier_examples() {
        let spec = test_spec();
        let f = |tau, z| Ok(theta_eval_with(&spec, &point11(tau, z)?, ExecMode::Sequential)?.value());
        let c = |t: Rat, r| fourier_coefficient(f, &t, r, 1.0, 0.0, 64, ExecMode::Parallel).unwrap();
        assert!((c(ri(0), 0) - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert!((c(ri(1), 2) - Complex64::new(2.0, 0.0)).norm() < 1e-6);
        assert!(c(ri(1), 3).norm() < 1e-6);
        assert!(fourier_coefficient(f, &rat(1, 3), 0, 1.0, 0.0, 64, ExecMode::Sequential).is_err());
    }
}
