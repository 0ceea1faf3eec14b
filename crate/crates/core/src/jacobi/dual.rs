//! Dual of 𝔤^J, the coadjoint action, the n = m = 1 orbit varieties and the
//! minimal orbit equation.
//!
//! Index map for the 2(n+m)-square matrices (blocks `n, m, n, m`):
//!
//! ```text
//! Lie element            dual element
//! ( a  0  b  ᵗQ )        ( x   p   y   0 )
//! ( P  0  Q  R  )        ( 0   0   0   0 )
//! ( c  0 −ᵗa −ᵗP )       ( z   q  −ᵗx  0 )
//! ( 0  0  0  0  )        ( ᵗq  r  −ᵗp  0 )
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{j_matrix, Matrix};
use crate::scalar::Scalar;

use super::{jacobi_embed, offsets, JacobiElement};

fn check_shape<S: Scalar>(m: &Matrix<S>, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::DimMismatch(format!("{what}: expected {rows}x{cols}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

fn check_sym<S: Scalar>(m: &Matrix<S>, what: &str) -> Result<()> {
    if !m.is_symmetric(1e-12) {
        return Err(Error::Domain(format!("{what} must be symmetric")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiLieElement<S: Scalar> {
    pub a: Matrix<S>,
    /// Symmetric.
    pub b: Matrix<S>,
    /// Symmetric.
    pub c: Matrix<S>,
    /// m×n.
    pub p: Matrix<S>,
    /// m×n.
    pub q: Matrix<S>,
    /// m×m symmetric.
    pub r: Matrix<S>,
}

impl<S: Scalar> JacobiLieElement<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>, c: Matrix<S>, p: Matrix<S>, q: Matrix<S>, r: Matrix<S>) -> Result<Self> {
        let n = a.rows();
        let m = r.rows();
        check_shape(&a, n, n, "a")?;
        check_shape(&b, n, n, "b")?;
        check_shape(&c, n, n, "c")?;
        check_shape(&p, m, n, "P")?;
        check_shape(&q, m, n, "Q")?;
        check_shape(&r, m, m, "R")?;
        check_sym(&b, "b")?;
        check_sym(&c, "c")?;
        check_sym(&r, "R")?;
        Ok(JacobiLieElement { a, b, c, p, q, r })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        JacobiLieElement {
            a: Matrix::zeros(n, n),
            b: Matrix::zeros(n, n),
            c: Matrix::zeros(n, n),
            p: Matrix::zeros(m, n),
            q: Matrix::zeros(m, n),
            r: Matrix::zeros(m, m),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.rows(), self.r.rows())
    }

    pub fn to_matrix(&self) -> Matrix<S> {
        let (n, m) = self.dims();
        let o = offsets(n, m);
        let mut x = Matrix::zeros(2 * (n + m), 2 * (n + m));
        x.set_block(o[0], o[0], &self.a);
        x.set_block(o[0], o[2], &self.b);
        x.set_block(o[0], o[3], &self.q.transpose());
        x.set_block(o[1], o[0], &self.p);
        x.set_block(o[1], o[2], &self.q);
        x.set_block(o[1], o[3], &self.r);
        x.set_block(o[2], o[0], &self.c);
        x.set_block(o[2], o[2], &-&self.a.transpose());
        x.set_block(o[2], o[3], &-&self.p.transpose());
        x
    }

    /// Reads the blocks back; assumes the matrix has the Lie element shape.
    pub fn from_matrix(n: usize, m: usize, x: &Matrix<S>) -> Self {
        let o = offsets(n, m);
        JacobiLieElement {
            a: x.block(o[0], o[0], n, n),
            b: x.block(o[0], o[2], n, n),
            c: x.block(o[2], o[0], n, n),
            p: x.block(o[1], o[0], m, n),
            q: x.block(o[1], o[2], m, n),
            r: x.block(o[1], o[3], m, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiDual<S: Scalar> {
    pub x: Matrix<S>,
    /// n×m.
    pub p: Matrix<S>,
    /// Symmetric.
    pub y: Matrix<S>,
    /// Symmetric.
    pub z: Matrix<S>,
    /// n×m.
    pub q: Matrix<S>,
    /// m×m symmetric.
    pub r: Matrix<S>,
}

impl<S: Scalar> JacobiDual<S> {
    pub fn new(x: Matrix<S>, p: Matrix<S>, y: Matrix<S>, z: Matrix<S>, q: Matrix<S>, r: Matrix<S>) -> Result<Self> {
        let n = x.rows();
        let m = r.rows();
        check_shape(&x, n, n, "x")?;
        check_shape(&p, n, m, "p")?;
        check_shape(&y, n, n, "y")?;
        check_shape(&z, n, n, "z")?;
        check_shape(&q, n, m, "q")?;
        check_shape(&r, m, m, "r")?;
        check_sym(&y, "y")?;
        check_sym(&z, "z")?;
        check_sym(&r, "r")?;
        Ok(JacobiDual { x, p, y, z, q, r })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        JacobiDual {
            x: Matrix::zeros(n, n),
            p: Matrix::zeros(n, m),
            y: Matrix::zeros(n, n),
            z: Matrix::zeros(n, n),
            q: Matrix::zeros(n, m),
            r: Matrix::zeros(m, m),
        }
    }

    /// Seed with `r = δ` and every other block zero.
    pub fn central(n: usize, delta: Matrix<S>) -> Self {
        let m = delta.rows();
        JacobiDual { r: delta, ..JacobiDual::zero(n, m) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.x.rows(), self.r.rows())
    }

    pub fn to_matrix(&self) -> Matrix<S> {
        let (n, m) = self.dims();
        let o = offsets(n, m);
        let mut f = Matrix::zeros(2 * (n + m), 2 * (n + m));
        f.set_block(o[0], o[0], &self.x);
        f.set_block(o[0], o[1], &self.p);
        f.set_block(o[0], o[2], &self.y);
        f.set_block(o[2], o[0], &self.z);
        f.set_block(o[2], o[1], &self.q);
        f.set_block(o[2], o[2], &-&self.x.transpose());
        f.set_block(o[3], o[0], &self.q.transpose());
        f.set_block(o[3], o[1], &self.r);
        f.set_block(o[3], o[2], &-&self.p.transpose());
        f
    }

    /// Projection of an sp(n+m) matrix onto the dual shape by zeroing the
    /// complementary blocks. See [`projection_defect`] for the certificate.
    pub fn readout(n: usize, m: usize, phi: &Matrix<S>) -> Self {
        let o = offsets(n, m);
        JacobiDual {
            x: phi.block(o[0], o[0], n, n),
            p: phi.block(o[0], o[1], n, m),
            y: phi.block(o[0], o[2], n, n),
            z: phi.block(o[2], o[0], n, n),
            q: phi.block(o[2], o[1], n, m),
            r: phi.block(o[3], o[1], m, m),
        }
    }

    /// `(x, y, z, p, q, r)` in the expansion `xX + yY + zZ + pP + qQ + rR`, n = m = 1.
    pub fn coords11(&self) -> Result<[S; 6]> {
        if self.dims() != (1, 1) {
            return Err(Error::Precondition("coordinates need n = m = 1".into()));
        }
        let half = S::from_ratio(1, 2);
        let (y, z) = (self.y[(0, 0)].clone(), self.z[(0, 0)].clone());
        Ok([
            self.x[(0, 0)].clone(),
            (y.clone() + z.clone()) * half.clone(),
            (y - z) * half,
            self.p[(0, 0)].clone(),
            self.q[(0, 0)].clone(),
            self.r[(0, 0)].clone(),
        ])
    }

    pub fn from_coords11(c: [S; 6]) -> Self {
        let [x, y, z, p, q, r] = c;
        let one = |v: S| Matrix::from_fn(1, 1, |_, _| v.clone());
        JacobiDual { x: one(x), p: one(p), y: one(y.clone() + z.clone()), z: one(y - z), q: one(q), r: one(r) }
    }
}

/// `tr(F X)`.
pub fn jacobi_pairing<S: Scalar>(f: &JacobiDual<S>, x: &JacobiLieElement<S>) -> Result<S> {
    if f.dims() != x.dims() {
        return Err(Error::DimMismatch("pairing: dual and algebra element differ in (n, m)".into()));
    }
    Ok((&f.to_matrix() * &x.to_matrix()).trace())
}

/// Inverse of a symplectic matrix, `−J ᵗE J`.
fn symplectic_inverse<S: Scalar>(e: &Matrix<S>) -> Matrix<S> {
    let j = j_matrix::<S>(e.rows() / 2);
    -&(&(&j * &e.transpose()) * &j)
}

/// `Ad*(g)F`: read-out of `E F E⁻¹` with `E` the embedding of `g`.
pub fn jacobi_coadjoint<S: Scalar>(g: &JacobiElement<S>, f: &JacobiDual<S>) -> Result<JacobiDual<S>> {
    let (n, m) = g.dims();
    if f.dims() != (n, m) {
        return Err(Error::DimMismatch("coadjoint: group element and dual differ in (n, m)".into()));
    }
    let e = jacobi_embed(g);
    let phi = &(&e * &f.to_matrix()) * &symplectic_inverse(&e);
    Ok(JacobiDual::readout(n, m, &phi))
}

/// `Ad(g)X = E X E⁻¹`.
pub fn jacobi_adjoint<S: Scalar>(g: &JacobiElement<S>, x: &JacobiLieElement<S>) -> JacobiLieElement<S> {
    let (n, m) = g.dims();
    let e = jacobi_embed(g);
    JacobiLieElement::from_matrix(n, m, &(&(&e * &x.to_matrix()) * &symplectic_inverse(&e)))
}

/// Basis of 𝔤^J: `a = E_ij`, then `b`, `c` symmetric units, then `P`, `Q`, then `R`.
pub fn lie_basis<S: Scalar>(n: usize, m: usize) -> Vec<JacobiLieElement<S>> {
    let sym =
        |k, i, j| &Matrix::<S>::unit(k, k, i, j) + &if i == j { Matrix::zeros(k, k) } else { Matrix::unit(k, k, j, i) };
    let z = JacobiLieElement::<S>::zero(n, m);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(JacobiLieElement { a: Matrix::unit(n, n, i, j), ..z.clone() });
        }
    }
    for i in 0..n {
        for j in i..n {
            out.push(JacobiLieElement { b: sym(n, i, j), ..z.clone() });
            out.push(JacobiLieElement { c: sym(n, i, j), ..z.clone() });
        }
    }
    for p in 0..m {
        for q in 0..n {
            out.push(JacobiLieElement { p: Matrix::unit(m, n, p, q), ..z.clone() });
            out.push(JacobiLieElement { q: Matrix::unit(m, n, p, q), ..z.clone() });
        }
    }
    for a in 0..m {
        for b in a..m {
            out.push(JacobiLieElement { r: sym(m, a, b), ..z.clone() });
        }
    }
    out
}

/// Largest `|⟨readout(Φ), X⟩ − tr(Φ X)|` over the basis of 𝔤^J.
pub fn projection_defect(n: usize, m: usize, phi: &Matrix<f64>) -> f64 {
    let f = JacobiDual::readout(n, m, phi).to_matrix();
    lie_basis::<f64>(n, m)
        .iter()
        .map(|x| {
            let xm = x.to_matrix();
            ((&f * &xm).trace() - (phi * &xm).trace()).abs()
        })
        .fold(0.0, f64::max)
}

/// Named coadjoint orbits of 𝔤^J for n = m = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum OrbitFamily {
    X,
    Y,
    Z,
    P,
    Q,
    S,
    T,
    R { h: f64 },
    MrAlphaX { m: f64, alpha: f64 },
    MrAlphaY { m: f64, alpha: f64 },
    MrKZ { m: f64, k: f64 },
}

impl OrbitFamily {
    /// Parses tags like `X`, `R(1.5)`, `mR+aX(1,0.5)`, `mR+kZ(2,1)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            _ => (s, ""),
        };
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad orbit parameter '{t}'"))))
                .collect::<Result<_>>()?
        };
        let want = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("orbit family {head} takes {k} parameter(s)")))
            }
        };
        let fam = match head {
            "X" => OrbitFamily::X,
            "Y" => OrbitFamily::Y,
            "Z" => OrbitFamily::Z,
            "P" => OrbitFamily::P,
            "Q" => OrbitFamily::Q,
            "S" => OrbitFamily::S,
            "T" => OrbitFamily::T,
            "R" => {
                want(1)?;
                OrbitFamily::R { h: nums[0] }
            }
            "mR+aX" => {
                want(2)?;
                OrbitFamily::MrAlphaX { m: nums[0], alpha: nums[1] }
            }
            "mR+aY" => {
                want(2)?;
                OrbitFamily::MrAlphaY { m: nums[0], alpha: nums[1] }
            }
            "mR+kZ" => {
                want(2)?;
                OrbitFamily::MrKZ { m: nums[0], k: nums[1] }
            }
            _ => return Err(Error::Domain(format!("unknown orbit family '{head}'"))),
        };
        if !matches!(head, "R" | "mR+aX" | "mR+aY" | "mR+kZ") {
            want(0)?;
        }
        Ok(fam)
    }

    /// Representative point of the orbit.
    pub fn seed(self) -> JacobiDual<f64> {
        let c = match self {
            OrbitFamily::X => [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            OrbitFamily::Y => [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            OrbitFamily::Z => [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            OrbitFamily::P => [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            OrbitFamily::Q => [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            OrbitFamily::S => [0.0, 0.5, 0.5, 0.0, 0.0, 0.0],
            OrbitFamily::T => [0.0, 0.5, -0.5, 0.0, 0.0, 0.0],
            OrbitFamily::R { h } => [0.0, 0.0, 0.0, 0.0, 0.0, h],
            OrbitFamily::MrAlphaX { m, alpha } => [alpha, 0.0, 0.0, 0.0, 0.0, m],
            OrbitFamily::MrAlphaY { m, alpha } => [0.0, alpha, 0.0, 0.0, 0.0, m],
            OrbitFamily::MrKZ { m, k } => [0.0, 0.0, k, 0.0, 0.0, m],
        };
        JacobiDual::from_coords11(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMembership {
    /// Largest absolute residual of the defining equations.
    pub residual: f64,
    /// Strict inequalities and side conditions of the family.
    pub side_conditions: bool,
    pub member: bool,
    /// Sign of `z` for the two-sheeted `mR+kZ` family; reported only.
    pub sheet: Option<i8>,
}

/// Evaluates the defining equations of `family` at `F` (n = m = 1).
pub fn orbit_membership(f: &JacobiDual<f64>, family: OrbitFamily, tol: f64) -> Result<OrbitMembership> {
    let [x, y, z, p, q, r] = f.coords11()?;
    let quad = x * x + y * y - z * z;
    let rho = x * x + y * y;
    let heis = 2.0 * p * q * x + (q * q - p * p) * y + (p * p + q * q) * z;
    let max = |v: &[f64]| v.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let mut sheet = None;
    let (residual, side) = match family {
        OrbitFamily::X | OrbitFamily::Y => (max(&[quad - 1.0, p, q, r]), true),
        OrbitFamily::Z => (max(&[quad + 1.0, p, q, r]), rho > tol),
        OrbitFamily::S => (max(&[quad, p, q, r]), rho > tol && z > 0.0),
        OrbitFamily::T => (max(&[quad, p, q, r]), rho > tol && z < 0.0),
        OrbitFamily::P | OrbitFamily::Q => (max(&[heis, r]), p.abs().max(q.abs()) > tol),
        OrbitFamily::R { h } => {
            if h == 0.0 {
                return Err(Error::Domain("R(h) needs h != 0".into()));
            }
            (max(&[quad, x - p * q / h, y + z + p * p / h, y - z - q * q / h, r - h]), true)
        }
        OrbitFamily::MrAlphaX { m, alpha } | OrbitFamily::MrAlphaY { m, alpha } => {
            if m == 0.0 {
                return Err(Error::Domain("mR+aX needs m != 0".into()));
            }
            (max(&[quad - alpha * alpha - heis / m, r - m]), true)
        }
        OrbitFamily::MrKZ { m, k } => {
            if m == 0.0 {
                return Err(Error::Domain("mR+kZ needs m != 0".into()));
            }
            sheet = Some(if z >= 0.0 { 1 } else { -1 });
            (max(&[quad + k * k - heis / m, r - m]), true)
        }
    };
    Ok(OrbitMembership { residual, side_conditions: side, member: residual <= tol && side, sheet })
}

/// Residual of `r = δ` and `X J_n = (p; q) δ⁻¹ ᵗ(p; q)` with `X = (x y; z −ᵗx)`,
/// in operator norm.
pub fn minimal_orbit_check(f: &JacobiDual<f64>, delta: &Matrix<f64>) -> Result<f64> {
    let (n, m) = f.dims();
    check_shape(delta, m, m, "delta")?;
    let dinv = delta.inverse(1e-12).map_err(|_| Error::Domain("delta is singular".into()))?;
    let big_x = Matrix::from_blocks(&f.x, &f.y, &f.z, &-&f.x.transpose());
    let pq = f.p.vstack(&f.q);
    let lhs = &big_x * &j_matrix::<f64>(n);
    let rhs = &(&pq * &dinv) * &pq.transpose();
    Ok((&f.r - delta).norm2().max((&lhs - &rhs).norm2()))
}

/// Rank of `X ↦ readout([X, F])` on the given Lie elements.
pub fn orbit_tangent_rank(f: &JacobiDual<f64>, directions: &[JacobiLieElement<f64>], tol: f64) -> usize {
    let (n, m) = f.dims();
    let fm = f.to_matrix();
    let rows: Vec<Vec<f64>> = directions
        .iter()
        .map(|x| {
            let xm = x.to_matrix();
            let d = JacobiDual::readout(n, m, &(&(&xm * &fm) - &(&fm * &xm)));
            d.to_matrix().vectorize()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows).expect("uniform rows").rank(tol)
}

/// The `P`, `Q` directions of 𝔤^J, tangent to `(λ, µ) ↦ Ad*(λ, µ, 0)F`.
pub fn heisenberg_directions(n: usize, m: usize) -> Vec<JacobiLieElement<f64>> {
    lie_basis::<f64>(n, m).into_iter().filter(|x| !x.p.is_zero(0.0) || !x.q.is_zero(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::HeisElement;
    use crate::sampling::{jacobi_f64, jacobi_rat, symmetric_matrix, uniform_matrix};
    use crate::scalar::{rat, ri, Rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairing_examples() {
        let fr = JacobiDual::<Rat>::from_coords11([ri(0), ri(0), ri(0), ri(0), ri(0), ri(1)]);
        let xr = JacobiLieElement { r: Matrix::identity(1), ..JacobiLieElement::<Rat>::zero(1, 1) };
        assert_eq!(jacobi_pairing(&fr, &xr).unwrap(), ri(1));
        let fx = JacobiDual::<Rat>::from_coords11([ri(1), ri(0), ri(0), ri(0), ri(0), ri(0)]);
        let a11 = JacobiLieElement { a: Matrix::identity(1), ..JacobiLieElement::<Rat>::zero(1, 1) };
        let d = JacobiLieElement { p: Matrix::identity(1), ..JacobiLieElement::<Rat>::zero(1, 1) };
        assert_ne!(jacobi_pairing(&fx, &a11).unwrap(), ri(0));
        assert_eq!(jacobi_pairing(&fx, &d).unwrap(), ri(0));
        assert!(jacobi_pairing(&fx, &JacobiLieElement::<Rat>::zero(2, 1)).is_err());
    }

    #[test]
    fn coadjoint_example() {
        let g = JacobiElement::new(
            Matrix::<Rat>::identity(2),
            HeisElement::new(Matrix::zeros(1, 1), Matrix::identity(1), Matrix::zeros(1, 1)).unwrap(),
        )
        .unwrap();
        let f = JacobiDual::<Rat>::from_coords11([ri(0), ri(0), ri(0), ri(0), ri(0), ri(1)]);
        let out = jacobi_coadjoint(&g, &f).unwrap().coords11().unwrap();
        assert_eq!(out, [ri(0), rat(-1, 2), rat(-1, 2), ri(1), ri(0), ri(1)]);
        let id = JacobiElement::<Rat>::identity(1, 1);
        assert_eq!(jacobi_coadjoint(&id, &f).unwrap(), f);
    }

    #[test]
    fn coadjoint_is_an_action_and_preserves_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, m) in &[(1, 1), (2, 1), (1, 2)] {
            let basis = lie_basis::<Rat>(n, m);
            for _ in 0..5 {
                let g1 = jacobi_rat(&mut rng, n, m, 3);
                let g2 = jacobi_rat(&mut rng, n, m, 3);
                let f = JacobiDual::readout(
                    n,
                    m,
                    &jacobi_embed(&jacobi_rat(&mut rng, n, m, 2)).commutator(&basis[0].to_matrix()),
                );
                let lhs = jacobi_coadjoint(&crate::jacobi::jacobi_mul(&g1, &g2).unwrap(), &f).unwrap();
                let rhs = jacobi_coadjoint(&g1, &jacobi_coadjoint(&g2, &f).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                let ad = jacobi_coadjoint(&g1, &f).unwrap();
                for x in &basis {
                    let moved = jacobi_adjoint(&g1, x);
                    assert_eq!(jacobi_pairing(&ad, &moved).unwrap(), jacobi_pairing(&f, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn readout_certified_by_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &(n, m) in &[(1, 1), (2, 2), (3, 2)] {
            let g = jacobi_f64(&mut rng, n, m, 0.4);
            let f = JacobiDual::new(
                uniform_matrix(&mut rng, n, n, 1.0),
                uniform_matrix(&mut rng, n, m, 1.0),
                symmetric_matrix(&mut rng, n, 1.0),
                symmetric_matrix(&mut rng, n, 1.0),
                uniform_matrix(&mut rng, n, m, 1.0),
                symmetric_matrix(&mut rng, m, 1.0),
            )
            .unwrap();
            let e = jacobi_embed(&g);
            let phi = &(&e * &f.to_matrix()) * &symplectic_inverse(&e);
            assert!(projection_defect(n, m, &phi) < 1e-9);
        }
    }

    #[test]
    fn membership_examples() {
        let x = orbit_membership(&OrbitFamily::X.seed(), OrbitFamily::X, 1e-9).unwrap();
        assert!(x.member && x.residual == 0.0);
        let pt = JacobiDual::from_coords11([0.0, -0.5, -0.5, 1.0, 0.0, 1.0]);
        assert_eq!(orbit_membership(&pt, OrbitFamily::R { h: 1.0 }, 1e-9).unwrap().residual, 0.0);
        let z = OrbitFamily::Z.seed();
        assert_eq!(orbit_membership(&z, OrbitFamily::X, 1e-9).unwrap().residual, 2.0);
        let zz = orbit_membership(&z, OrbitFamily::Z, 1e-9).unwrap();
        assert!(zz.residual == 0.0 && !zz.side_conditions && !zz.member);
        assert!(OrbitFamily::parse("W").is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(OrbitFamily::parse("R(1.5)").unwrap(), OrbitFamily::R { h: 1.5 });
        assert_eq!(OrbitFamily::parse("mR+kZ(2, 1)").unwrap(), OrbitFamily::MrKZ { m: 2.0, k: 1.0 });
        assert!(OrbitFamily::parse("R").is_err());
        assert!(OrbitFamily::parse("X(1)").is_err());
    }

    #[test]
    fn pushforwards_stay_on_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fams = [
            OrbitFamily::X,
            OrbitFamily::Y,
            OrbitFamily::Z,
            OrbitFamily::S,
            OrbitFamily::T,
            OrbitFamily::P,
            OrbitFamily::Q,
            OrbitFamily::R { h: 1.7 },
            OrbitFamily::MrAlphaX { m: 1.3, alpha: 0.8 },
            OrbitFamily::MrAlphaY { m: 1.3, alpha: 0.8 },
            OrbitFamily::MrKZ { m: 1.3, k: 2.0 },
        ];
        for fam in fams {
            for _ in 0..20 {
                let g = jacobi_f64(&mut rng, 1, 1, 0.5);
                let f = jacobi_coadjoint(&g, &fam.seed()).unwrap();
                let r = orbit_membership(&f, fam, 1e-9).unwrap();
                assert!(r.member, "{fam:?} {r:?}");
            }
        }
    }

    #[test]
    fn minimal_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for &(n, m) in &[(1, 1), (2, 1), (2, 2)] {
            let delta = Matrix::from_fn(m, m, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
            let seed = JacobiDual::central(n, delta.clone());
            assert_eq!(minimal_orbit_check(&seed, &delta).unwrap(), 0.0);
            for _ in 0..10 {
                let f = jacobi_coadjoint(&jacobi_f64(&mut rng, n, m, 0.5), &seed).unwrap();
                assert!(minimal_orbit_check(&f, &delta).unwrap() < 1e-9);
            }
            assert_eq!(orbit_tangent_rank(&seed, &lie_basis(n, m), 1e-9), 2 * m * n);
            assert_eq!(orbit_tangent_rank(&seed, &heisenberg_directions(n, m), 1e-9), 2 * m * n);
        }
        let seed = JacobiDual::central(1, Matrix::zeros(1, 1));
        assert!(minimal_orbit_check(&seed, &Matrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn hr_points_satisfy_minimal_equation() {
        let h = 1.7;
        for &(p, q) in &[(1.0, 0.0), (0.3, -2.0), (1.5, 0.5)] {
            let pt = JacobiDual::from_coords11([
                p * q / h,
                (q * q - p * p) / (2.0 * h),
                -(p * p + q * q) / (2.0 * h),
                p,
                q,
                h,
            ]);
            assert!(orbit_membership(&pt, OrbitFamily::R { h }, 1e-12).unwrap().member);
            let res = minimal_orbit_check(&pt, &Matrix::from_fn(1, 1, |_, _| h)).unwrap();
            assert!(res < 1e-12, "{res}");
        }
    }
}
