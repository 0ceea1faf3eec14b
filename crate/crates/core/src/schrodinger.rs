//! Finite model of the Schrödinger representation on functions of a cyclic grid
//! `(ℤ/N)^{h×g}`, with `ω = e^{2πi/N}` in place of `e^{2πi}`.
//!
//! Functions are indexed by the entries of `ξ ∈ (ℤ/N)^{h×g}` read row-major,
//! most significant first.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest grid size `N^{hg}` accepted by [`commutant_dimension`].
pub const COMMUTANT_CAP: usize = 125;
/// Largest grid size for which [`rep_matrix`] builds a dense matrix.
pub const DENSE_CAP: usize = 4096;

type IntMat = Vec<Vec<i64>>;

fn reduce(v: i64, n: i64) -> i64 {
    v.rem_euclid(n)
}

fn check_dims(name: &str, m: &IntMat, r: usize, c: usize) -> Result<()> {
    if m.len() != r || m.iter().any(|row| row.len() != c) {
        return Err(Error::DimMismatch(format!("{name} must be {r}x{c}")));
    }
    Ok(())
}

fn int_det(m: &IntMat) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: IntMat = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * int_det(&minor)
        })
        .sum()
}

/// `Σ_k a[i][k]·b[j][k]`, i.e. the `(i,j)` entry of `a ᵗb`.
fn mul_t(a: &IntMat, b: &IntMat, i: usize, j: usize) -> i64 {
    a[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum()
}

/// `σ(c · a ᵗb) mod n`.
fn trace_pair(c: &IntMat, a: &IntMat, b: &IntMat, n: i64) -> i64 {
    let h = c.len();
    let mut s = 0i64;
    for i in 0..h {
        for j in 0..h {
            s = reduce(s + c[i][j] * reduce(mul_t(a, b, j, i), n), n);
        }
    }
    s
}

/// `(N, g, h, c)` with `N` odd and `det c` a unit mod `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRep {
    n: i64,
    g: usize,
    h: usize,
    c: IntMat,
}

impl GridRep {
    pub fn new(n: i64, g: usize, h: usize, c: IntMat) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::Precondition(format!("N = {n} must be odd and at least 3")));
        }
        if g == 0 || h == 0 {
            return Err(Error::Shape("g and h must be positive".into()));
        }
        check_dims("c", &c, h, h)?;
        let c: IntMat = c.iter().map(|r| r.iter().map(|&v| reduce(v, n)).collect()).collect();
        if (0..h).any(|i| (0..h).any(|j| c[i][j] != c[j][i])) {
            return Err(Error::Domain("c is not symmetric mod N".into()));
        }
        let d = reduce(int_det(&c), n);
        if d.gcd(&n) != 1 {
            return Err(Error::Precondition(format!("gcd(det c, N) = gcd({d}, {n}) ≠ 1")));
        }
        Ok(GridRep { n, g, h, c })
    }

    /// No invertibility check; lets tests build reducible models.
    #[cfg(test)]
    pub(crate) fn unchecked(n: i64, g: usize, h: usize, c: IntMat) -> Self {
        GridRep { n, g, h, c }
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.g, self.h)
    }

    pub fn c(&self) -> &IntMat {
        &self.c
    }

    /// `N^{hg}`, or `None` on overflow.
    pub fn grid_size(&self) -> Option<usize> {
        (self.n as usize).checked_pow((self.h * self.g) as u32)
    }

    pub fn omega_pow(&self, e: i64) -> Complex64 {
        let t = 2.0 * std::f64::consts::PI * reduce(e, self.n) as f64 / self.n as f64;
        Complex64::from_polar(1.0, t)
    }

    fn decode(&self, mut idx: usize) -> IntMat {
        let (g, h) = (self.g, self.h);
        let n = self.n as usize;
        let mut flat = vec![0i64; g * h];
        for k in (0..g * h).rev() {
            flat[k] = (idx % n) as i64;
            idx /= n;
        }
        flat.chunks(g).map(|r| r.to_vec()).collect()
    }

    fn encode(&self, m: &IntMat) -> usize {
        m.iter().flatten().fold(0usize, |acc, &v| acc * self.n as usize + reduce(v, self.n) as usize)
    }

    fn shift(&self, xi: &IntMat, by: &IntMat) -> IntMat {
        xi.iter().zip(by).map(|(r, s)| r.iter().zip(s).map(|(a, b)| reduce(a + b, self.n)).collect()).collect()
    }

    /// Exponent of `ω` in `(π(x)f)(ξ) = ω^{σ(c(κ+µᵗλ+2ξᵗµ))} f(ξ+λ)`.
    fn phase_exp(&self, x: &GridHeisElement, xi: &IntMat) -> i64 {
        let n = self.n;
        let h = self.h;
        let mut s = 0i64;
        for i in 0..h {
            for j in 0..h {
                s = reduce(s + self.c[i][j] * x.kappa[j][i], n);
            }
        }
        s = reduce(s + trace_pair(&self.c, &x.mu, &x.lambda, n), n);
        reduce(s + 2 * trace_pair(&self.c, xi, &x.mu, n), n)
    }

    fn validate(&self, x: &GridHeisElement) -> Result<()> {
        check_dims("lambda", &x.lambda, self.h, self.g)?;
        check_dims("mu", &x.mu, self.h, self.g)?;
        check_dims("kappa", &x.kappa, self.h, self.h)
    }
}

/// Grid element `(λ, µ, κ)` in ∘-coordinates, entries reduced to `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridHeisElement {
    pub lambda: IntMat,
    pub mu: IntMat,
    pub kappa: IntMat,
}

impl GridHeisElement {
    /// Reduces entries mod `N` and checks that `κ + µᵗλ` is symmetric mod `N`.
    pub fn new(rep: &GridRep, lambda: IntMat, mu: IntMat, kappa: IntMat) -> Result<Self> {
        let n = rep.n;
        let red = |m: IntMat| -> IntMat { m.iter().map(|r| r.iter().map(|&v| reduce(v, n)).collect()).collect() };
        let x = GridHeisElement { lambda: red(lambda), mu: red(mu), kappa: red(kappa) };
        rep.validate(&x)?;
        let h = rep.h;
        let s = |i: usize, j: usize| reduce(x.kappa[i][j] + mul_t(&x.mu, &x.lambda, i, j), n);
        if (0..h).any(|i| (0..h).any(|j| s(i, j) != s(j, i))) {
            return Err(Error::Domain("κ + µᵗλ is not symmetric mod N".into()));
        }
        Ok(x)
    }

    pub fn identity(rep: &GridRep) -> Self {
        let (g, h) = rep.dims();
        GridHeisElement { lambda: vec![vec![0; g]; h], mu: vec![vec![0; g]; h], kappa: vec![vec![0; h]; h] }
    }
}

/// Group law `(λ+λ', µ+µ', κ+κ'+λᵗµ'−µᵗλ')` mod `N`.
pub fn grid_mul(rep: &GridRep, x: &GridHeisElement, y: &GridHeisElement) -> Result<GridHeisElement> {
    rep.validate(x)?;
    rep.validate(y)?;
    let n = rep.n;
    let h = rep.h;
    let kappa = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    reduce(
                        x.kappa[i][j] + y.kappa[i][j] + mul_t(&x.lambda, &y.mu, i, j) - mul_t(&x.mu, &y.lambda, i, j),
                        n,
                    )
                })
                .collect()
        })
        .collect();
    Ok(GridHeisElement { lambda: rep.shift(&x.lambda, &y.lambda), mu: rep.shift(&x.mu, &y.mu), kappa })
}

/// The monomial matrix `P[ξ, ξ+λ] = ω^{σ(c(κ+µᵗλ+2ξᵗµ))}`.
pub fn rep_matrix(rep: &GridRep, x: &GridHeisElement) -> Result<Matrix<Complex64>> {
    rep.validate(x)?;
    let size = rep.grid_size().unwrap_or(usize::MAX);
    if size > DENSE_CAP {
        return Err(Error::TooLarge { size, cap: DENSE_CAP });
    }
    let mut m = Matrix::zeros(size, size);
    for (i, j, e) in monomial_entries(rep, x) {
        m[(i, j)] = rep.omega_pow(e);
    }
    Ok(m)
}

/// `(row, column, exponent)` of the nonzero entries, one per row.
fn monomial_entries(rep: &GridRep, x: &GridHeisElement) -> Vec<(usize, usize, i64)> {
    let size = rep.grid_size().expect("grid size fits in usize");
    (0..size)
        .map(|i| {
            let xi = rep.decode(i);
            let j = rep.encode(&rep.shift(&xi, &x.lambda));
            (i, j, rep.phase_exp(x, &xi))
        })
        .collect()
}

/// Trace of [`rep_matrix`], summed over the diagonal without building the matrix.
pub fn rep_trace(rep: &GridRep, x: &GridHeisElement) -> Result<Complex64> {
    rep.validate(x)?;
    if x.lambda.iter().flatten().any(|&v| v != 0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let size = rep.grid_size().ok_or(Error::TooLarge { size: usize::MAX, cap: usize::MAX })?;
    // Sum exponent multiplicities first so the floating sum has at most N terms.
    let mut counts = vec![0u64; rep.n as usize];
    for i in 0..size {
        counts[rep.phase_exp(x, &rep.decode(i)) as usize] += 1;
    }
    Ok(counts.iter().enumerate().map(|(e, &k)| rep.omega_pow(e as i64) * k as f64).sum())
}

/// Unit shifts in λ and µ; together with the center they generate the group.
pub fn generators(rep: &GridRep) -> Vec<GridHeisElement> {
    let (g, h) = rep.dims();
    let mut out = Vec::new();
    for which in 0..2 {
        for p in 0..h {
            for q in 0..g {
                let mut x = GridHeisElement::identity(rep);
                let target = if which == 0 { &mut x.lambda } else { &mut x.mu };
                target[p][q] = 1;
                out.push(x);
            }
        }
    }
    out
}

/// Union-find over matrix entries where each edge says `M[u] = ω^w M[v]`.
struct PhaseUnionFind {
    parent: Vec<usize>,
    /// `M[u] = ω^{offset[u]} M[parent[u]]`.
    offset: Vec<i64>,
    dead: Vec<bool>,
    n: i64,
}

impl PhaseUnionFind {
    fn new(size: usize, n: i64) -> Self {
        PhaseUnionFind { parent: (0..size).collect(), offset: vec![0; size], dead: vec![false; size], n }
    }

    fn find(&mut self, u: usize) -> (usize, i64) {
        let p = self.parent[u];
        if p == u {
            return (u, 0);
        }
        let (root, w) = self.find(p);
        self.offset[u] = reduce(self.offset[u] + w, self.n);
        self.parent[u] = root;
        (root, self.offset[u])
    }

    fn union(&mut self, u: usize, v: usize, w: i64) {
        let (ru, wu) = self.find(u);
        let (rv, wv) = self.find(v);
        if ru == rv {
            // M[ru]·ω^{wu} = ω^w·M[ru]·ω^{wv} forces zero unless the phases agree.
            if reduce(wu - w - wv, self.n) != 0 {
                self.dead[ru] = true;
            }
            return;
        }
        // M[ru] = ω^{w + wv − wu} M[rv]
        self.parent[ru] = rv;
        self.offset[ru] = reduce(w + wv - wu, self.n);
        if self.dead[ru] {
            self.dead[rv] = true;
        }
    }
}

/// Dimension of `{M : Mπ(x) = π(x)M}` over the generators.
///
/// For monomial `π(x)[a, a+λ] = ω^{d(a)}` the condition reads
/// `M[a, b] ω^{d(b)} = ω^{d(a)} M[a+λ, b+λ]`, so the solution space is spanned by
/// the consistent components of a phase-weighted union-find over the entries.
pub fn commutant_dimension(rep: &GridRep) -> Result<usize> {
    let size = rep.grid_size().unwrap_or(usize::MAX);
    if size > COMMUTANT_CAP {
        return Err(Error::TooLarge { size, cap: COMMUTANT_CAP });
    }
    let mut uf = PhaseUnionFind::new(size * size, rep.n);
    for x in generators(rep) {
        let entries = monomial_entries(rep, &x);
        for &(a, a_shift, da) in &entries {
            for &(b, b_shift, db) in &entries {
                // M[a+λ, b+λ] = ω^{d(b) − d(a)} M[a, b]
                uf.union(a_shift * size + b_shift, a * size + b, reduce(db - da, rep.n));
            }
        }
    }
    let mut roots: Vec<usize> = (0..size * size).map(|u| uf.find(u).0).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.into_iter().filter(|&r| !uf.dead[r]).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep11(n: i64, c: i64) -> GridRep {
        GridRep::new(n, 1, 1, vec![vec![c]]).unwrap()
    }

    fn el(rep: &GridRep, l: i64, m: i64, k: i64) -> GridHeisElement {
        GridHeisElement::new(rep, vec![vec![l]], vec![vec![m]], vec![vec![k]]).unwrap()
    }

    /// Dense null space of the stacked `M P − P M` system.
    fn commutant_dense(rep: &GridRep) -> usize {
        let size = rep.grid_size().unwrap();
        let gens: Vec<_> = generators(rep).iter().map(|x| rep_matrix(rep, x).unwrap()).collect();
        let k = size * size;
        let mut sys = Matrix::<Complex64>::zeros(gens.len() * k, k);
        for (gi, p) in gens.iter().enumerate() {
            for i in 0..size {
                for j in 0..size {
                    let row = gi * k + i * size + j;
                    // (MP − PM)[i,j] = Σ_l M[i,l]P[l,j] − P[i,l]M[l,j]
                    for l in 0..size {
                        sys[(row, i * size + l)] += p[(l, j)];
                        sys[(row, l * size + j)] -= p[(i, l)];
                    }
                }
            }
        }
        k - sys.rank(1e-9)
    }

    /// `Σ_x |tr π(x)|² / |G|` over the whole finite group; equals the commutant dimension.
    fn schur_sum(rep: &GridRep) -> f64 {
        let n = rep.modulus();
        let mut total = 0.0;
        let mut count = 0usize;
        for l in 0..n {
            for m in 0..n {
                for k in 0..n {
                    let t = rep_trace(rep, &el(rep, l, m, k)).unwrap();
                    total += t.norm_sqr();
                    count += 1;
                }
            }
        }
        total / count as f64
    }

    #[test]
    fn construction_preconditions() {
        assert!(GridRep::new(9, 1, 1, vec![vec![3]]).is_err());
        assert!(GridRep::new(4, 1, 1, vec![vec![1]]).is_err());
        assert!(GridRep::new(5, 1, 2, vec![vec![1, 2], vec![0, 1]]).is_err());
        assert!(GridRep::new(5, 1, 2, vec![vec![1, 2], vec![2, 1]]).is_ok());
        let r = GridRep::new(15, 1, 2, vec![vec![2, 1], vec![1, 2]]);
        assert!(r.is_err(), "det 3 shares a factor with 15");
    }

    #[test]
    fn central_elements_are_scalar() {
        let rep = rep11(5, 1);
        let m = rep_matrix(&rep, &el(&rep, 0, 0, 2)).unwrap();
        let expected = Matrix::<Complex64>::identity(5).scale(&rep.omega_pow(2));
        assert!(m.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn unit_lambda_is_cyclic_shift() {
        let rep = rep11(5, 1);
        let m = rep_matrix(&rep, &el(&rep, 1, 0, 0)).unwrap();
        let shift =
            Matrix::from_fn(
                5,
                5,
                |i, j| {
                    if j == (i + 1) % 5 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                },
            );
        assert!(m.approx_eq(&shift, 0.0));
    }

    #[test]
    fn homomorphism_and_unitarity() {
        let rep = GridRep::new(3, 2, 2, vec![vec![1, 1], vec![1, 2]]).unwrap();
        let lam = vec![vec![1, 2], vec![0, 1]];
        let mu = vec![vec![2, 0], vec![1, 1]];
        // κ = S − µᵗλ for symmetric S
        let kap = |s: IntMat, m: &IntMat, l: &IntMat| -> IntMat {
            (0..2).map(|i| (0..2).map(|j| s[i][j] - mul_t(m, l, i, j)).collect()).collect()
        };
        let x =
            GridHeisElement::new(&rep, lam.clone(), mu.clone(), kap(vec![vec![1, 2], vec![2, 0]], &mu, &lam)).unwrap();
        let y =
            GridHeisElement::new(&rep, mu.clone(), lam.clone(), kap(vec![vec![0, 1], vec![1, 1]], &lam, &mu)).unwrap();
        let px = rep_matrix(&rep, &x).unwrap();
        let py = rep_matrix(&rep, &y).unwrap();
        let pxy = rep_matrix(&rep, &grid_mul(&rep, &x, &y).unwrap()).unwrap();
        assert!((&px * &py).max_diff(&pxy) < 1e-10);
        let id = Matrix::<Complex64>::identity(81);
        assert!((&px.adjoint() * &px).max_diff(&id) < 1e-12);
    }

    #[test]
    fn trace_examples() {
        let rep = rep11(5, 1);
        let t0 = rep_trace(&rep, &GridHeisElement::identity(&rep)).unwrap();
        assert!((t0 - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        let t1 = rep_trace(&rep, &el(&rep, 0, 0, 1)).unwrap();
        assert!((t1 - rep.omega_pow(1) * 5.0).norm() < 1e-12);
        assert_eq!(rep_trace(&rep, &el(&rep, 1, 0, 0)).unwrap().norm(), 0.0);
        assert!(rep_trace(&rep, &el(&rep, 0, 1, 0)).unwrap().norm() < 1e-9);
        let m = rep_matrix(&rep, &el(&rep, 0, 2, 3)).unwrap();
        assert!((m.trace() - rep_trace(&rep, &el(&rep, 0, 2, 3)).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant_dimension(&rep11(5, 1)).unwrap(), 1);
        assert_eq!(commutant_dimension(&rep11(3, 1)).unwrap(), 1);
        assert_eq!(commutant_dimension(&rep11(7, 3)).unwrap(), 1);
        let big = GridRep::new(5, 2, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(commutant_dimension(&big), Err(Error::TooLarge { size: 625, cap: 125 })));
    }

    #[test]
    fn commutant_matches_dense_oracle() {
        for rep in [rep11(3, 1), rep11(5, 2), GridRep::new(3, 1, 2, vec![vec![1, 0], vec![0, 2]]).unwrap()] {
            assert_eq!(commutant_dimension(&rep).unwrap(), commutant_dense(&rep));
        }
        // c = 0 is a sum of characters: the commutant is the diagonal algebra.
        let triv = GridRep::unchecked(3, 1, 1, vec![vec![0]]);
        assert_eq!(commutant_dense(&triv), 3);
        assert_eq!(commutant_dimension(&triv).unwrap(), 3);
        // c ≡ 0 mod 3 inside N = 9 leaves a 3-dimensional commutant.
        let part = GridRep::unchecked(9, 1, 1, vec![vec![3]]);
        assert_eq!(commutant_dimension(&part).unwrap(), commutant_dense(&part));
    }

    #[test]
    fn schur_orthogonality_oracle() {
        for (n, c) in [(3, 1), (5, 1), (5, 3), (7, 2)] {
            let rep = rep11(n, c);
            assert!((schur_sum(&rep) - 1.0).abs() < 1e-9);
            assert_eq!(commutant_dimension(&rep).unwrap(), 1);
        }
    }
}
