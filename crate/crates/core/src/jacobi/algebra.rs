//! The Lie algebra 𝔤^J: named generators, the real and complexified commutation
//! tables, inclusion checks for the Cartan-type splittings, the Killing form of
//! sp(n) and the complex structure on 𝔭^J.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::matrix::Matrix;
use crate::par::{map_collect, ExecMode};
use crate::scalar::{fmt_rat, i_unit, rat, ri, CRat, Rat, Scalar};

use super::offsets;

/// Named generator; indices are 0-based internally and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    A(usize, usize),
    B(usize, usize),
    S(usize, usize),
    T(usize, usize),
    D0(usize, usize),
    D(usize, usize),
    Dhat(usize, usize),
    Z0(usize, usize),
    Yp(usize, usize),
    Ym(usize, usize),
    Zp(usize, usize),
    Zm(usize, usize),
    Xp(usize, usize),
    Xm(usize, usize),
}

impl Gen {
    fn parts(self) -> (&'static str, usize, usize) {
        match self {
            Gen::A(i, j) => ("A", i, j),
            Gen::B(i, j) => ("B", i, j),
            Gen::S(i, j) => ("S", i, j),
            Gen::T(i, j) => ("T", i, j),
            Gen::D0(i, j) => ("D0", i, j),
            Gen::D(i, j) => ("D", i, j),
            Gen::Dhat(i, j) => ("Dhat", i, j),
            Gen::Z0(i, j) => ("Z0", i, j),
            Gen::Yp(i, j) => ("Y+", i, j),
            Gen::Ym(i, j) => ("Y-", i, j),
            Gen::Zp(i, j) => ("Z+", i, j),
            Gen::Zm(i, j) => ("Z-", i, j),
            Gen::Xp(i, j) => ("X+", i, j),
            Gen::Xm(i, j) => ("X-", i, j),
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Gen::A(..) | Gen::B(..) | Gen::S(..) | Gen::T(..) | Gen::D0(..) | Gen::D(..) | Gen::Dhat(..))
    }
}

impl Serialize for Gen {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, i, j) = self.parts();
        write!(f, "{name}({},{})", i + 1, j + 1)
    }
}

fn unit(r: usize, c: usize, i: usize, j: usize) -> Matrix<Rat> {
    Matrix::unit(r, c, i, j)
}

fn place(n: usize, m: usize, blocks: &[((usize, usize), Matrix<Rat>)]) -> Matrix<Rat> {
    let o = offsets(n, m);
    let mut out = Matrix::zeros(2 * (n + m), 2 * (n + m));
    for ((bi, bj), b) in blocks {
        out.add_block(o[*bi], o[*bj], b);
    }
    out
}

/// Matrix of a real generator in the `(n, m, n, m)` block layout.
pub fn real_gen_matrix(n: usize, m: usize, g: Gen) -> Option<Matrix<Rat>> {
    let e = |i, j| unit(n, n, i, j);
    let sym = |i, j| &e(i, j) + &e(j, i);
    let skew = |i, j| &e(i, j) - &e(j, i);
    Some(match g {
        Gen::A(i, j) => place(n, m, &[((0, 0), sym(i, j)), ((2, 2), -&sym(i, j))]),
        Gen::B(i, j) => place(n, m, &[((0, 2), sym(i, j)), ((2, 0), sym(i, j))]),
        Gen::S(i, j) => place(n, m, &[((0, 0), skew(i, j)), ((2, 2), skew(i, j))]),
        Gen::T(i, j) => place(n, m, &[((0, 2), sym(i, j)), ((2, 0), -&sym(i, j))]),
        Gen::D0(a, b) => {
            let s = &unit(m, m, a, b) + &unit(m, m, b, a);
            place(n, m, &[((1, 3), s.scale(&rat(1, 2)))])
        }
        Gen::D(p, q) => place(n, m, &[((1, 0), unit(m, n, p, q)), ((2, 3), -&unit(n, m, q, p))]),
        Gen::Dhat(p, q) => place(n, m, &[((0, 3), unit(n, m, q, p)), ((1, 2), unit(m, n, p, q))]),
        _ => return None,
    })
}

/// Matrix of any generator over the Gaussian rationals.
pub fn gen_matrix(n: usize, m: usize, g: Gen) -> Matrix<CRat> {
    if let Some(r) = real_gen_matrix(n, m, g) {
        return r.lift();
    }
    let real = |g| real_gen_matrix(n, m, g).expect("real generator").lift::<CRat>();
    let i = i_unit();
    let half = CRat::new(rat(1, 2), ri(0));
    match g {
        Gen::Z0(a, b) => real(Gen::D0(a, b)).scale(&-i),
        Gen::Yp(p, q) => (&real(Gen::D(p, q)) + &real(Gen::Dhat(p, q)).scale(&i)).scale(&half),
        Gen::Ym(p, q) => (&real(Gen::D(p, q)) - &real(Gen::Dhat(p, q)).scale(&i)).scale(&half),
        Gen::Zp(a, b) => -&real(Gen::S(a, b)),
        Gen::Zm(a, b) => real(Gen::T(a, b)).scale(&-i),
        Gen::Xp(a, b) => (&real(Gen::A(a, b)) + &real(Gen::B(a, b)).scale(&i)).scale(&half),
        Gen::Xm(a, b) => (&real(Gen::A(a, b)) - &real(Gen::B(a, b)).scale(&i)).scale(&half),
        _ => unreachable!("real generators handled above"),
    }
}

fn pairs_le(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

fn pairs_lt(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn pairs_all(r: usize, c: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).flat_map(move |i| (0..c).map(move |j| (i, j)))
}

/// `{S_ij (i<j), T_kl (k≤l), D⁰_ab (a≤b)}`.
pub fn k_basis(n: usize, m: usize) -> Vec<Gen> {
    let mut v: Vec<Gen> = pairs_lt(n).map(|(i, j)| Gen::S(i, j)).collect();
    v.extend(pairs_le(n).map(|(i, j)| Gen::T(i, j)));
    v.extend(pairs_le(m).map(|(a, b)| Gen::D0(a, b)));
    v
}

/// `{A_ij, B_ij (i≤j), D_pq, D̂_rs}`.
pub fn p_basis(n: usize, m: usize) -> Vec<Gen> {
    let mut v: Vec<Gen> = pairs_le(n).map(|(i, j)| Gen::A(i, j)).collect();
    v.extend(pairs_le(n).map(|(i, j)| Gen::B(i, j)));
    v.extend(pairs_all(m, n).map(|(p, q)| Gen::D(p, q)));
    v.extend(pairs_all(m, n).map(|(p, q)| Gen::Dhat(p, q)));
    v
}

/// Basis of 𝔨^J_ℂ. The printed index range for `Z⁻_kl` is `k < l`, which
/// drops the `n` diagonal elements; `diagonal_zm` restores them.
pub fn kc_basis(n: usize, m: usize, diagonal_zm: bool) -> Vec<Gen> {
    let mut v: Vec<Gen> = pairs_le(m).map(|(a, b)| Gen::Z0(a, b)).collect();
    v.extend(pairs_lt(n).map(|(i, j)| Gen::Zp(i, j)));
    if diagonal_zm {
        v.extend(pairs_le(n).map(|(k, l)| Gen::Zm(k, l)));
    } else {
        v.extend(pairs_lt(n).map(|(k, l)| Gen::Zm(k, l)));
    }
    v
}

pub fn p_plus_basis(n: usize, m: usize) -> Vec<Gen> {
    let mut v: Vec<Gen> = pairs_le(n).map(|(i, j)| Gen::Xp(i, j)).collect();
    v.extend(pairs_all(m, n).map(|(p, q)| Gen::Yp(p, q)));
    v
}

pub fn p_minus_basis(n: usize, m: usize) -> Vec<Gen> {
    let mut v: Vec<Gen> = pairs_le(n).map(|(i, j)| Gen::Xm(i, j)).collect();
    v.extend(pairs_all(m, n).map(|(p, q)| Gen::Ym(p, q)));
    v
}

pub fn dim_g_jacobi(n: usize, m: usize) -> usize {
    n * (2 * n + 1) + 2 * m * n + m * (m + 1) / 2
}

/// Real and complexified generators with their matrices.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub n: usize,
    pub m: usize,
    /// 𝔨^J basis followed by the 𝔭^J basis.
    pub real: Vec<(Gen, Matrix<Rat>)>,
    /// 𝔨^J_ℂ basis (with diagonal `Z⁻`), then 𝔭₊^J, then 𝔭₋^J.
    pub complex: Vec<(Gen, Matrix<CRat>)>,
}

pub fn basis_table(n: usize, m: usize) -> BasisTable {
    let real = k_basis(n, m)
        .into_iter()
        .chain(p_basis(n, m))
        .map(|g| (g, real_gen_matrix(n, m, g).expect("real generator")))
        .collect();
    let complex = kc_basis(n, m, true)
        .into_iter()
        .chain(p_plus_basis(n, m))
        .chain(p_minus_basis(n, m))
        .map(|g| (g, gen_matrix(n, m, g)))
        .collect();
    BasisTable { n, m, real, complex }
}

/// Incrementally reduced row space, for exact membership tests.
#[derive(Debug, Clone)]
pub struct Span<S: Scalar> {
    rows: Vec<(usize, Vec<S>)>,
    len: usize,
}

impl<S: Scalar> Span<S> {
    pub fn new(len: usize) -> Self {
        Span { rows: Vec::new(), len }
    }

    pub fn from_vectors(len: usize, vs: impl IntoIterator<Item = Vec<S>>) -> Self {
        let mut s = Span::new(len);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<S>) -> Vec<S> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.len);
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_negligible(0.0)) else {
            return false;
        };
        let inv = S::one() / v[p].clone();
        self.rows.push((p, v.into_iter().map(|x| x * inv.clone()).collect()));
        true
    }

    pub fn contains(&self, v: Vec<S>) -> bool {
        self.reduce(v).iter().all(|x| x.is_negligible(0.0))
    }
}

fn gen_span(mats: &BTreeMap<Gen, Matrix<CRat>>, gens: &[Gen], len: usize) -> Span<CRat> {
    Span::from_vectors(len, gens.iter().map(|g| mats[g].vectorize()))
}

/// Which table an identity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Real,
    Complex,
}

pub type Terms = Vec<(CRat, Gen)>;

/// One instance `[lhs.0, lhs.1] = Σ coef·gen` of a printed family.
#[derive(Debug, Clone)]
pub struct Identity {
    pub family: &'static str,
    pub table: Table,
    pub lhs: (Gen, Gen),
    pub printed: Terms,
    /// Present only for families whose printed right-hand side is wrong.
    pub corrected: Option<Terms>,
}

impl Identity {
    pub fn rhs(&self) -> &Terms {
        self.corrected.as_ref().unwrap_or(&self.printed)
    }
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

fn terms(items: &[(i64, Gen)]) -> Terms {
    items.iter().filter(|(c, _)| *c != 0).map(|&(c, g)| (CRat::new(ri(c), ri(0)), g)).collect()
}

fn scaled(t: Terms, s: &CRat) -> Terms {
    t.into_iter().map(|(c, g)| (c * s.clone(), g)).collect()
}

/// `s·(δ_ik G_jl + δ_il G_jk + δ_jk G_il + δ_jl G_ik)` with signs `s`.
fn four(s: [i64; 4], i: usize, j: usize, k: usize, l: usize, g: fn(usize, usize) -> Gen) -> Terms {
    terms(&[
        (s[0] * delta(i, k), g(j, l)),
        (s[1] * delta(i, l), g(j, k)),
        (s[2] * delta(j, k), g(i, l)),
        (s[3] * delta(j, l), g(i, k)),
    ])
}

/// `s₀ δ_qi G_pj + s₁ δ_qj G'_pi`.
fn two(
    s: [i64; 2],
    p: usize,
    q: usize,
    i: usize,
    j: usize,
    g1: fn(usize, usize) -> Gen,
    g2: fn(usize, usize) -> Gen,
) -> Terms {
    terms(&[(s[0] * delta(q, i), g1(p, j)), (s[1] * delta(q, j), g2(p, i))])
}

const PLUS4: [i64; 4] = [1, 1, 1, 1];
const MINUS4: [i64; 4] = [-1, -1, -1, -1];

/// Every instance of the real commutation table for `1 ≤ indices ≤ n, m`.
pub fn real_identities(n: usize, m: usize) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut push =
        |family, lhs, printed, corrected| out.push(Identity { family, table: Table::Real, lhs, printed, corrected });
    for (i, j, k, l) in quad(n) {
        push("[A,A]", (Gen::A(i, j), Gen::A(k, l)), four(PLUS4, i, j, k, l, Gen::S), None);
        push("[A,B]", (Gen::A(i, j), Gen::B(k, l)), four(PLUS4, i, j, k, l, Gen::T), None);
        push("[A,S]", (Gen::A(i, j), Gen::S(k, l)), four([1, -1, 1, -1], i, j, k, l, Gen::A), None);
        push("[A,T]", (Gen::A(i, j), Gen::T(k, l)), four(PLUS4, i, j, k, l, Gen::B), None);
        push("[B,B]", (Gen::B(i, j), Gen::B(k, l)), four(PLUS4, i, j, k, l, Gen::S), None);
        push("[B,S]", (Gen::B(i, j), Gen::S(k, l)), four([1, -1, 1, -1], i, j, k, l, Gen::B), None);
        push("[B,T]", (Gen::B(i, j), Gen::T(k, l)), four(MINUS4, i, j, k, l, Gen::A), None);
        push("[S,S]", (Gen::S(i, j), Gen::S(k, l)), four([-1, 1, 1, -1], i, j, k, l, Gen::S), None);
        push("[S,T]", (Gen::S(i, j), Gen::T(k, l)), four([-1, -1, 1, 1], i, j, k, l, Gen::T), None);
        push("[T,T]", (Gen::T(i, j), Gen::T(k, l)), four(MINUS4, i, j, k, l, Gen::S), None);
    }
    let mut others: Vec<Gen> = Vec::new();
    for (i, j) in pairs_all(n, n) {
        others.extend([Gen::A(i, j), Gen::B(i, j), Gen::S(i, j), Gen::T(i, j)]);
    }
    others.extend(pairs_all(m, m).map(|(c, d)| Gen::D0(c, d)));
    for (p, q) in pairs_all(m, n) {
        others.extend([Gen::D(p, q), Gen::Dhat(p, q)]);
    }
    for (a, b) in pairs_all(m, m) {
        for &x in &others {
            push("[D0,*]", (Gen::D0(a, b), x), Vec::new(), None);
        }
    }
    for (p, q) in pairs_all(m, n) {
        for (i, j) in pairs_all(n, n) {
            push("[D,A]", (Gen::D(p, q), Gen::A(i, j)), two([1, 1], p, q, i, j, Gen::D, Gen::D), None);
            push("[D,B]", (Gen::D(p, q), Gen::B(i, j)), two([1, 1], p, q, i, j, Gen::Dhat, Gen::Dhat), None);
            push("[D,T]", (Gen::D(p, q), Gen::T(i, j)), two([1, 1], p, q, i, j, Gen::Dhat, Gen::Dhat), None);
            push("[D,S]", (Gen::D(p, q), Gen::S(i, j)), two([1, -1], p, q, i, j, Gen::D, Gen::D), None);
            push("[Dhat,A]", (Gen::Dhat(p, q), Gen::A(i, j)), two([-1, -1], p, q, i, j, Gen::Dhat, Gen::Dhat), None);
            push("[Dhat,B]", (Gen::Dhat(p, q), Gen::B(i, j)), two([1, 1], p, q, i, j, Gen::D, Gen::D), None);
            push(
                "[Dhat,S]",
                (Gen::Dhat(p, q), Gen::S(i, j)),
                two([1, -1], p, q, i, j, Gen::D, Gen::Dhat),
                Some(two([1, -1], p, q, i, j, Gen::Dhat, Gen::Dhat)),
            );
            push("[Dhat,T]", (Gen::Dhat(p, q), Gen::T(i, j)), two([-1, -1], p, q, i, j, Gen::D, Gen::D), None);
        }
        for (r, s) in pairs_all(m, n) {
            push("[D,D]", (Gen::D(p, q), Gen::D(r, s)), Vec::new(), None);
            push("[D,Dhat]", (Gen::D(p, q), Gen::Dhat(r, s)), terms(&[(2 * delta(q, s), Gen::D0(p, r))]), None);
            push("[Dhat,Dhat]", (Gen::Dhat(p, q), Gen::Dhat(r, s)), Vec::new(), None);
        }
    }
    out
}

/// Every instance of the complexified commutation table.
pub fn complex_identities(n: usize, m: usize) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut push =
        |family, lhs, printed, corrected| out.push(Identity { family, table: Table::Complex, lhs, printed, corrected });
    let mut others: Vec<Gen> = pairs_all(m, m).map(|(c, d)| Gen::Z0(c, d)).collect();
    for (p, q) in pairs_all(m, n) {
        others.extend([Gen::Yp(p, q), Gen::Ym(p, q)]);
    }
    for (i, j) in pairs_all(n, n) {
        others.extend([Gen::Zp(i, j), Gen::Zm(i, j), Gen::Xp(i, j), Gen::Xm(i, j)]);
    }
    for (a, b) in pairs_all(m, m) {
        for &x in &others {
            push("[Z0,*]", (Gen::Z0(a, b), x), Vec::new(), None);
        }
    }
    for (p, q) in pairs_all(m, n) {
        for (r, s) in pairs_all(m, n) {
            push("[Y+,Y+]", (Gen::Yp(p, q), Gen::Yp(r, s)), Vec::new(), None);
            push("[Y+,Y-]", (Gen::Yp(p, q), Gen::Ym(r, s)), terms(&[(delta(q, s), Gen::Z0(p, r))]), None);
            push("[Y-,Y-]", (Gen::Ym(p, q), Gen::Ym(r, s)), Vec::new(), None);
        }
        for (i, j) in pairs_all(n, n) {
            push("[Y+,Z+]", (Gen::Yp(p, q), Gen::Zp(i, j)), two([-1, 1], p, q, i, j, Gen::Yp, Gen::Yp), None);
            push("[Y+,Z-]", (Gen::Yp(p, q), Gen::Zm(i, j)), two([-1, -1], p, q, i, j, Gen::Yp, Gen::Yp), None);
            push("[Y+,X+]", (Gen::Yp(p, q), Gen::Xp(i, j)), Vec::new(), None);
            push("[Y+,X-]", (Gen::Yp(p, q), Gen::Xm(i, j)), two([1, 1], p, q, i, j, Gen::Ym, Gen::Ym), None);
            push("[Y-,Z+]", (Gen::Ym(p, q), Gen::Zp(i, j)), two([-1, 1], p, q, i, j, Gen::Ym, Gen::Ym), None);
            push("[Y-,Z-]", (Gen::Ym(p, q), Gen::Zm(i, j)), two([1, 1], p, q, i, j, Gen::Ym, Gen::Ym), None);
            push("[Y-,X+]", (Gen::Ym(p, q), Gen::Xp(i, j)), two([1, 1], p, q, i, j, Gen::Yp, Gen::Yp), None);
            push("[Y-,X-]", (Gen::Ym(p, q), Gen::Xm(i, j)), Vec::new(), None);
        }
    }
    let half = CRat::new(rat(1, 2), ri(0));
    let neg_half = CRat::new(rat(-1, 2), ri(0));
    let i_half = CRat::new(ri(0), rat(1, 2));
    for (i, j, k, l) in quad(n) {
        push("[Z+,Z+]", (Gen::Zp(i, j), Gen::Zp(k, l)), four([1, -1, -1, 1], i, j, k, l, Gen::Zp), None);
        push(
            "[Z+,Z-]",
            (Gen::Zp(i, j), Gen::Zm(k, l)),
            four([1, -1, 1, -1], i, j, k, l, Gen::Zm),
            Some(four([1, 1, -1, -1], i, j, k, l, Gen::Zm)),
        );
        // printed order δ_ik X_jl − δ_jk X_il + δ_il X_jk − δ_jl X_ik
        push("[Z+,X+]", (Gen::Zp(i, j), Gen::Xp(k, l)), four([1, 1, -1, -1], i, j, k, l, Gen::Xp), None);
        push("[Z+,X-]", (Gen::Zp(i, j), Gen::Xm(k, l)), four([1, 1, -1, -1], i, j, k, l, Gen::Xm), None);
        push("[Z-,Z-]", (Gen::Zm(i, j), Gen::Zm(k, l)), four(MINUS4, i, j, k, l, Gen::Zp), None);
        // printed with X_ij on the left; the right-hand side is in k, l
        push("[Z-,X+]", (Gen::Zm(i, j), Gen::Xp(k, l)), four(PLUS4, i, j, k, l, Gen::Xp), None);
        push("[Z-,X-]", (Gen::Zm(i, j), Gen::Xm(k, l)), four(MINUS4, i, j, k, l, Gen::Xm), None);
        push("[X+,X+]", (Gen::Xp(i, j), Gen::Xp(k, l)), Vec::new(), None);
        push("[X-,X-]", (Gen::Xm(i, j), Gen::Xm(k, l)), Vec::new(), None);
        let zp = four(PLUS4, i, j, k, l, Gen::Zp);
        let zm = four(PLUS4, i, j, k, l, Gen::Zm);
        let mut printed = scaled(zp.clone(), &neg_half);
        printed.extend(scaled(zm.clone(), &i_half));
        let mut corrected = scaled(zp, &neg_half);
        corrected.extend(scaled(zm, &half));
        push("[X+,X-]", (Gen::Xp(i, j), Gen::Xm(k, l)), printed, Some(corrected));
    }
    out
}

fn quad(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l)))))
}

/// Outcome for one identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub family: &'static str,
    pub table: Table,
    pub lhs: (Gen, Gen),
    /// The printed right-hand side matches the commutator.
    pub printed_pass: bool,
    /// The right-hand side in force (corrected where a misprint is known) matches.
    pub pass: bool,
    pub corrected: bool,
}

/// A subspace relation, or a basis claim, checked by exact membership.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionCheck {
    pub name: &'static str,
    /// What the text asserts.
    pub expected: bool,
    pub holds: bool,
    /// A bracket pair leaving the target space, when the inclusion fails.
    pub witness: Option<(Gen, Gen)>,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutationReport {
    pub n: usize,
    pub m: usize,
    pub identities: Vec<IdentityCheck>,
    pub inclusions: Vec<InclusionCheck>,
}

impl CommutationReport {
    pub fn failures(&self) -> usize {
        self.identities.iter().filter(|c| !c.pass).count()
    }

    pub fn printed_failures(&self) -> usize {
        self.identities.iter().filter(|c| !c.printed_pass).count()
    }

    /// Families with at least one printed failure.
    pub fn printed_failure_families(&self) -> Vec<&'static str> {
        let mut v: Vec<_> = self.identities.iter().filter(|c| !c.printed_pass).map(|c| c.family).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn inclusions_consistent(&self) -> bool {
        self.inclusions.iter().filter(|c| c.note.is_none()).all(|c| c.expected == c.holds)
    }
}

fn all_gens(n: usize, m: usize) -> Vec<Gen> {
    let mut v = Vec::new();
    for (i, j) in pairs_all(n, n) {
        v.extend([Gen::A(i, j), Gen::B(i, j), Gen::S(i, j), Gen::T(i, j)]);
        v.extend([Gen::Zp(i, j), Gen::Zm(i, j), Gen::Xp(i, j), Gen::Xm(i, j)]);
    }
    for (a, b) in pairs_all(m, m) {
        v.extend([Gen::D0(a, b), Gen::Z0(a, b)]);
    }
    for (p, q) in pairs_all(m, n) {
        v.extend([Gen::D(p, q), Gen::Dhat(p, q), Gen::Yp(p, q), Gen::Ym(p, q)]);
    }
    v
}

fn combine(mats: &BTreeMap<Gen, Matrix<CRat>>, t: &Terms, size: usize) -> Matrix<CRat> {
    t.iter().fold(Matrix::zeros(size, size), |acc, (c, g)| &acc + &mats[g].scale(c))
}

/// Certifies both commutation tables and the subspace relations derived from them.
pub fn verify_commutation_table(n: usize, m: usize, mode: ExecMode) -> CommutationReport {
    let size = 2 * (n + m);
    let mats: BTreeMap<Gen, Matrix<CRat>> = all_gens(n, m).into_iter().map(|g| (g, gen_matrix(n, m, g))).collect();
    let mut ids = real_identities(n, m);
    ids.extend(complex_identities(n, m));
    let identities = map_collect(mode, &ids, |id| {
        let lhs = mats[&id.lhs.0].commutator(&mats[&id.lhs.1]);
        let printed_pass = lhs == combine(&mats, &id.printed, size);
        let pass = match &id.corrected {
            Some(c) => lhs == combine(&mats, c, size),
            None => printed_pass,
        };
        IdentityCheck {
            family: id.family,
            table: id.table,
            lhs: id.lhs,
            printed_pass,
            pass,
            corrected: id.corrected.is_some(),
        }
    });
    let inclusions = inclusion_checks(n, m, &mats, mode);
    CommutationReport { n, m, identities, inclusions }
}

/// `[X, Y] ∈ target` for all `X ∈ left`, `Y ∈ right`; the first failing pair otherwise.
fn bracket_inside(
    mats: &BTreeMap<Gen, Matrix<CRat>>,
    left: &[Gen],
    right: &[Gen],
    target: &Span<CRat>,
    mode: ExecMode,
) -> Option<(Gen, Gen)> {
    let pairs: Vec<(Gen, Gen)> = left.iter().flat_map(|&a| right.iter().map(move |&b| (a, b))).collect();
    let ok = map_collect(mode, &pairs, |(a, b)| target.contains(mats[a].commutator(&mats[b]).vectorize()));
    pairs.into_iter().zip(ok).find(|(_, ok)| !ok).map(|(p, _)| p)
}

fn inclusion_checks(n: usize, m: usize, mats: &BTreeMap<Gen, Matrix<CRat>>, mode: ExecMode) -> Vec<InclusionCheck> {
    let len = (2 * (n + m)).pow(2);
    let span = |gens: &[Gen]| gen_span(mats, gens, len);
    let zero = Span::<CRat>::new(len);
    let mut out = Vec::new();
    let mut incl = |name, expected, left: &[Gen], right: &[Gen], target: &Span<CRat>, note| {
        let witness = bracket_inside(mats, left, right, target, mode);
        out.push(InclusionCheck { name, expected, holds: witness.is_none(), witness, note });
    };

    let kj = k_basis(n, m);
    let pj = p_basis(n, m);
    let p: Vec<Gen> = pj.iter().copied().filter(|g| matches!(g, Gen::A(..) | Gen::B(..))).collect();
    let mut h: Vec<Gen> = pj.iter().copied().filter(|g| matches!(g, Gen::D(..) | Gen::Dhat(..))).collect();
    h.extend(pairs_le(m).map(|(a, b)| Gen::D0(a, b)));
    let (kj_s, pj_s, h_s) = (span(&kj), span(&pj), span(&h));
    incl("[k^J,k^J] in k^J", true, &kj, &kj, &kj_s, None);
    incl("[k^J,p^J] in p^J", true, &kj, &pj, &pj_s, None);
    incl("[p,h] in h", true, &p, &h, &h_s, None);
    incl("[h,h] in h", true, &h, &h, &h_s, None);
    incl("[p^J,p^J] in k^J", false, &pj, &pj, &kj_s, None);

    let kc = kc_basis(n, m, true);
    let pp = p_plus_basis(n, m);
    let pm = p_minus_basis(n, m);
    let (pp_s, pm_s) = (span(&pp), span(&pm));
    incl("[p+,p+] = 0", true, &pp, &pp, &zero, None);
    incl("[p-,p-] = 0", true, &pm, &pm, &zero, None);
    incl("[k_C,p+] in p+", true, &kc, &pp, &pp_s, None);
    incl("[k_C,p-] in p-", true, &kc, &pm, &pm_s, None);
    let gc: Vec<Gen> =
        pairs_all(n, n).flat_map(|(i, j)| [Gen::Zp(i, j), Gen::Zm(i, j), Gen::Xp(i, j), Gen::Xm(i, j)]).collect();
    let gc_s = span(&gc);
    incl("[g_C,g_C] in g_C", true, &gc, &gc, &gc_s, None);
    let mut hc: Vec<Gen> = pairs_all(m, n).flat_map(|(p, q)| [Gen::Yp(p, q), Gen::Ym(p, q)]).collect();
    hc.extend(pairs_le(m).map(|(a, b)| Gen::Z0(a, b)));
    let hc_s = span(&hc);
    let mut everything = kc.clone();
    everything.extend(pp.iter().chain(&pm));
    incl("[g^J_C,h_C] in h_C", true, &everything, &hc, &hc_s, None);

    let basis = |name, gens: &[Gen], dim: usize, note| InclusionCheck {
        name,
        expected: true,
        holds: gens.len() == dim && span(gens).dim() == dim,
        witness: None,
        note,
    };
    let dk = n * n + m * (m + 1) / 2;
    let dp = n * (n + 1) + 2 * m * n;
    out.push(basis("k^J basis", &kj, dk, None));
    out.push(basis("p^J basis", &pj, dp, None));
    let mut all = kj.clone();
    all.extend(&pj);
    out.push(basis("k^J + p^J spans g^J", &all, dim_g_jacobi(n, m), None));
    out.push(basis("k_C basis (Z- with k <= l)", &kc, dk, None));
    out.push(basis(
        "k_C basis (printed ranges)",
        &kc_basis(n, m, false),
        dk,
        Some("printed range k < l for Z-_kl omits the n diagonal elements"),
    ));
    let mut pc = pp.clone();
    pc.extend(&pm);
    out.push(basis("p_C basis", &pc, dp, None));
    out
}

/// One row of the exported structure-constant table.
#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub family: &'static str,
    pub lhs: [String; 2],
    pub rhs: Vec<TableTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableTerm {
    pub coef: serde_json::Value,
    pub gen: String,
}

/// Rational string for real coefficients, `{"re","im"}` otherwise.
pub fn coef_json(c: &CRat) -> serde_json::Value {
    if c.im.is_zero() {
        serde_json::Value::String(fmt_rat(&c.re))
    } else {
        serde_json::json!({ "re": fmt_rat(&c.re), "im": fmt_rat(&c.im) })
    }
}

/// The structure constants in force (corrected where needed), zero brackets omitted.
pub fn export_table(n: usize, m: usize, table: Table) -> Vec<TableEntry> {
    let ids = match table {
        Table::Real => real_identities(n, m),
        Table::Complex => complex_identities(n, m),
    };
    ids.iter()
        .filter(|id| !id.rhs().is_empty())
        .map(|id| TableEntry {
            family: id.family,
            lhs: [id.lhs.0.to_string(), id.lhs.1.to_string()],
            rhs: id.rhs().iter().map(|(c, g)| TableTerm { coef: coef_json(c), gen: g.to_string() }).collect(),
        })
        .collect()
}

/// Basis of sp(n) as 2n×2n matrices: `A_ij, B_ij, T_ij (i≤j)`, `S_ij (i<j)`.
pub fn sp_basis(n: usize) -> Vec<(Gen, Matrix<Rat>)> {
    let mut gens: Vec<Gen> = pairs_le(n).flat_map(|(i, j)| [Gen::A(i, j), Gen::B(i, j), Gen::T(i, j)]).collect();
    gens.extend(pairs_lt(n).map(|(i, j)| Gen::S(i, j)));
    gens.into_iter().map(|g| (g, real_gen_matrix(n, 0, g).expect("real"))).collect()
}

/// Matrix of `ad X` on [`sp_basis`].
fn ad_matrix(basis: &[(Gen, Matrix<Rat>)], x: &Matrix<Rat>) -> Matrix<Rat> {
    let d = basis.len();
    let len = x.rows() * x.rows();
    let b = Matrix::from_fn(len, d, |r, c| basis[c].1.entries()[r].clone());
    let images: Vec<Vec<Rat>> = basis.iter().map(|(_, y)| x.commutator(y).vectorize()).collect();
    let rhs = Matrix::from_fn(len, d, |r, c| images[c][r].clone());
    b.solve(&rhs, 0.0).expect("sp(n) is closed under brackets")
}

/// `tr(ad X ad Y)` on sp(n).
pub fn killing_form(n: usize, x: &Matrix<Rat>, y: &Matrix<Rat>) -> Rat {
    let basis = sp_basis(n);
    (&ad_matrix(&basis, x) * &ad_matrix(&basis, y)).trace()
}

#[derive(Debug, Clone, Serialize)]
pub struct KillingReport {
    pub n: usize,
    pub coefficient: i64,
    pub pairs: usize,
    pub failures: Vec<(Gen, Gen)>,
}

/// Checks `tr(ad X ad Y) = 2(n+1)σ(XY)` on every pair of basis elements.
pub fn killing_check(n: usize) -> KillingReport {
    let basis = sp_basis(n);
    let ads: Vec<Matrix<Rat>> = basis.iter().map(|(_, x)| ad_matrix(&basis, x)).collect();
    let coefficient = 2 * (n as i64 + 1);
    let mut failures = Vec::new();
    for (i, (gi, xi)) in basis.iter().enumerate() {
        for (j, (gj, xj)) in basis.iter().enumerate() {
            let lhs = (&ads[i] * &ads[j]).trace();
            let rhs = (xi * xj).trace() * ri(coefficient);
            if lhs != rhs {
                failures.push((*gi, *gj));
            }
        }
    }
    KillingReport { n, coefficient, pairs: basis.len().pow(2), failures }
}

/// Tangent vector of `H_{n,m}` at the base point, in 𝔭^J coordinates:
/// the sp part `(Y X; X −Y)` and the Heisenberg part `(P, Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentData<S: Scalar> {
    pub y: Matrix<S>,
    pub x: Matrix<S>,
    pub p: Matrix<S>,
    pub q: Matrix<S>,
}

impl<S: Scalar> TangentData<S> {
    /// Reads `Y` from the `(0,0)` block, `X` from `(0,2)`, `P` from `(1,0)` and `Q` from `(1,2)`.
    pub fn from_p_matrix(n: usize, m: usize, mat: &Matrix<S>) -> Self {
        let o = offsets(n, m);
        TangentData {
            y: mat.block(o[0], o[0], n, n),
            x: mat.block(o[0], o[2], n, n),
            p: mat.block(o[1], o[0], m, n),
            q: mat.block(o[1], o[2], m, n),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        TangentData { y: self.y.scale(s), x: self.x.scale(s), p: self.p.scale(s), q: self.q.scale(s) }
    }
}

/// `((Y X; X −Y), (P, Q)) ↦ ((X −Y; −Y −X), (Q, −P))`.
pub fn complex_structure<S: Scalar>(v: &TangentData<S>) -> TangentData<S> {
    TangentData { y: v.x.clone(), x: -&v.y, p: v.q.clone(), q: -&v.p }
}

/// `(X + iY, Q + iP)` for a real tangent vector.
pub fn complex_coordinates(v: &TangentData<f64>) -> (Matrix<num_complex::Complex64>, Matrix<num_complex::Complex64>) {
    (Matrix::from_parts(&v.x, &v.y), Matrix::from_parts(&v.q, &v.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ci;

    #[test]
    fn a11_block_pattern() {
        let a = real_gen_matrix(1, 1, Gen::A(0, 0)).unwrap();
        let mut expect = Matrix::<Rat>::zeros(4, 4);
        expect[(0, 0)] = ri(2);
        expect[(2, 2)] = ri(-2);
        assert_eq!(a, expect);
    }

    #[test]
    fn generator_symmetries() {
        let (n, m) = (3, 2);
        let g = |x| real_gen_matrix(n, m, x).unwrap();
        for (i, j) in pairs_all(n, n) {
            assert_eq!(g(Gen::A(i, j)), g(Gen::A(j, i)));
            assert_eq!(g(Gen::B(i, j)), g(Gen::B(j, i)));
            assert_eq!(g(Gen::S(i, j)), -&g(Gen::S(j, i)));
            assert_eq!(g(Gen::T(i, j)), g(Gen::T(j, i)));
        }
        for (p, q) in pairs_all(m, n) {
            assert!(g(Gen::D(p, q)).pow(2).is_zero(0.0));
            assert!(g(Gen::Dhat(p, q)).pow(2).is_zero(0.0));
        }
        assert_eq!(g(Gen::D0(0, 1)), g(Gen::D0(1, 0)));
        let j = crate::matrix::j_matrix::<Rat>(n + m);
        for (_, x) in basis_table(n, m).real {
            assert!((&(&x.transpose() * &j) + &(&j * &x)).is_zero(0.0));
        }
    }

    #[test]
    fn basis_counts() {
        for &(n, m) in &[(1, 1), (2, 1), (3, 2)] {
            assert_eq!(k_basis(n, m).len(), n * (n - 1) / 2 + n * (n + 1) / 2 + m * (m + 1) / 2);
            let t = basis_table(n, m);
            assert_eq!(t.real.len(), dim_g_jacobi(n, m));
            assert_eq!(t.complex.len(), dim_g_jacobi(n, m));
        }
    }

    #[test]
    fn spec_examples() {
        let mats = |g| gen_matrix(1, 1, g);
        let ab = mats(Gen::A(0, 0)).commutator(&mats(Gen::B(0, 0)));
        assert_eq!(ab, mats(Gen::T(0, 0)).scale(&ci(4, 0)));
        let dd = mats(Gen::D(0, 0)).commutator(&mats(Gen::Dhat(0, 0)));
        assert_eq!(dd, mats(Gen::D0(0, 0)).scale(&ci(2, 0)));
        let yy = mats(Gen::Yp(0, 0)).commutator(&mats(Gen::Ym(0, 0)));
        assert_eq!(yy, mats(Gen::Z0(0, 0)));
    }

    #[test]
    fn table_small() {
        let r = verify_commutation_table(2, 1, ExecMode::Sequential);
        assert_eq!(r.failures(), 0);
        assert_eq!(r.printed_failure_families(), vec!["[Dhat,S]", "[X+,X-]", "[Z+,Z-]"]);
        assert!(r.inclusions_consistent(), "{:?}", r.inclusions);
        let remark = r.inclusions.iter().find(|c| c.name == "[p^J,p^J] in k^J").unwrap();
        assert!(!remark.holds && remark.witness.is_some());
        let printed = r.inclusions.iter().find(|c| c.name == "k_C basis (printed ranges)").unwrap();
        assert!(!printed.holds);
    }

    #[test]
    fn table_modes_agree() {
        let a = verify_commutation_table(1, 2, ExecMode::Sequential);
        let b = verify_commutation_table(1, 2, ExecMode::Parallel);
        let key =
            |r: &CommutationReport| r.identities.iter().map(|c| (c.lhs, c.pass, c.printed_pass)).collect::<Vec<_>>();
        assert_eq!(key(&a), key(&b));
    }

    #[test]
    fn export_has_nonzero_rows() {
        let t = export_table(1, 1, Table::Real);
        let ab = t.iter().find(|e| e.lhs == ["A(1,1)".to_string(), "B(1,1)".to_string()]).unwrap();
        let total: usize = ab.rhs.len();
        assert_eq!(total, 4);
        assert!(ab.rhs.iter().all(|t| t.gen == "T(1,1)" && t.coef == "1"));
        let c = export_table(1, 1, Table::Complex);
        let xx = c.iter().find(|e| e.family == "[X+,X-]").unwrap();
        assert!(xx.rhs.iter().any(|t| t.coef == "1/2"));
    }

    #[test]
    fn killing_examples() {
        let h0: Matrix<Rat> = Matrix::diag(&[ri(1), ri(-1)]);
        assert_eq!(killing_form(1, &h0, &h0), ri(8));
        assert_eq!((&h0 * &h0).trace() * ri(4), ri(8));
        for n in 1..=2 {
            let r = killing_check(n);
            assert!(r.failures.is_empty());
            assert_eq!(r.coefficient, 2 * (n as i64 + 1));
        }
    }

    #[test]
    fn complex_structure_eigenvectors() {
        let (n, m) = (2, 1);
        let i = i_unit();
        for g in p_plus_basis(n, m) {
            let v = TangentData::from_p_matrix(n, m, &gen_matrix(n, m, g));
            assert_eq!(complex_structure(&v), v.scale(&i), "{g}");
        }
        for g in p_minus_basis(n, m) {
            let v = TangentData::from_p_matrix(n, m, &gen_matrix(n, m, g));
            assert_eq!(complex_structure(&v), v.scale(&-i.clone()), "{g}");
        }
        let z = TangentData::<Rat>::from_p_matrix(n, m, &Matrix::zeros(6, 6));
        assert_eq!(complex_structure(&z), z);
    }
}
