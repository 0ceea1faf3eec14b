//! Seeded samplers for symplectic, Heisenberg and Jacobi elements.
//!
//! Float samplers go through `exp(J S)`; rational samplers multiply integer
//! generators of Sp(n, ℤ) so that every product stays exact.

use rand::Rng;

use crate::heisenberg::HeisElement;
use crate::jacobi::JacobiElement;
use crate::matrix::{j_matrix, Matrix};
use crate::scalar::{ri, Rat};
use crate::symplectic::exp_hamiltonian;

pub fn uniform_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

pub fn symmetric_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Matrix<f64> {
    uniform_matrix(rng, n, n, scale).symmetrized()
}

/// Integer entries in `[-bound, bound]`.
pub fn int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<Rat> {
    Matrix::from_fn(rows, cols, |_, _| ri(rng.gen_range(-bound..=bound)))
}

/// Rationals `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ 4`.
pub fn rat_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<Rat> {
    Matrix::from_fn(rows, cols, |_, _| Rat::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=4i64).into()))
}

pub fn sym_rat_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<Rat> {
    let a = rat_matrix(rng, n, n, bound);
    Matrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)].clone() } else { a[(j, i)].clone() })
}

/// `exp(J S)` with `S` symmetric of entry size `scale`.
pub fn symplectic_f64<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Matrix<f64> {
    exp_hamiltonian(&symmetric_matrix(rng, 2 * n, scale)).into_matrix()
}

/// Product of a few unipotent integer generators and `J`.
pub fn symplectic_rat<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rat> {
    let id = Matrix::<Rat>::identity(n);
    let zero = Matrix::<Rat>::zeros(n, n);
    let mut m = Matrix::<Rat>::identity(2 * n);
    for _ in 0..3 {
        let s = {
            let a = int_matrix(rng, n, n, 2);
            Matrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)].clone() } else { a[(j, i)].clone() })
        };
        let g = match rng.gen_range(0..3) {
            0 => Matrix::from_blocks(&id, &s, &zero, &id),
            1 => Matrix::from_blocks(&id, &zero, &s, &id),
            _ => j_matrix(n),
        };
        m = &m * &g;
    }
    m
}

/// Heisenberg element with `κ = S − µᵗλ` for symmetric `S`.
pub fn heis_f64<R: Rng>(rng: &mut R, g: usize, h: usize, scale: f64) -> HeisElement<f64> {
    let lambda = uniform_matrix(rng, h, g, scale);
    let mu = uniform_matrix(rng, h, g, scale);
    let s = symmetric_matrix(rng, h, scale);
    let kappa = &s - &(&mu * &lambda.transpose());
    HeisElement::new(lambda, mu, kappa).expect("symmetric part by construction")
}

pub fn heis_rat<R: Rng>(rng: &mut R, g: usize, h: usize, bound: i64) -> HeisElement<Rat> {
    let lambda = rat_matrix(rng, h, g, bound);
    let mu = rat_matrix(rng, h, g, bound);
    let s = sym_rat_matrix(rng, h, bound);
    let kappa = &s - &(&mu * &lambda.transpose());
    HeisElement::new(lambda, mu, kappa).expect("symmetric part by construction")
}

pub fn jacobi_f64<R: Rng>(rng: &mut R, n: usize, m: usize, scale: f64) -> JacobiElement<f64> {
    JacobiElement::new(symplectic_f64(rng, n, scale), heis_f64(rng, n, m, scale)).expect("sampled element is valid")
}

pub fn jacobi_rat<R: Rng>(rng: &mut R, n: usize, m: usize, bound: i64) -> JacobiElement<Rat> {
    JacobiElement::new(symplectic_rat(rng, n), heis_rat(rng, n, m, bound)).expect("sampled element is valid")
}
