//! Oracles shared by the integration tests. Each one takes a different route
//! from the library code it checks.

#![allow(dead_code)]

use lieorbit::jacobi_forms::ThetaSpec;
use lieorbit::scalar::Rat;
use lieorbit::Matrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Every `λ ∈ ℤ^{(2k,1)}` in the box `‖λ‖∞ ≤ radius`, first coordinate fastest.
pub fn box_points(d: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (2 * radius + 1).pow(d as u32);
    (0..total).map(move |mut idx| {
        (0..d)
            .map(|_| {
                let v = idx % (2 * radius + 1) - radius;
                idx /= 2 * radius + 1;
                v
            })
            .collect()
    })
}

/// Direct box sum of the theta series for n = 1, with matrix products per term.
pub fn theta_brute_force(spec: &ThetaSpec, tau: Complex64, w: &[Complex64], radius: i64) -> Complex64 {
    let d = spec.s.len();
    let m = spec.c[0].len();
    let s = Matrix::from_fn(d, d, |i, j| Complex64::new(spec.s[i][j] as f64, 0.0));
    let c = Matrix::from_fn(d, m, |i, j| Complex64::new(spec.c[i][j] as f64, 0.0));
    let wm = Matrix::from_fn(m, 1, |i, _| w[i]);
    let mut acc = Complex64::new(0.0, 0.0);
    for lam in box_points(d, radius) {
        let l = Matrix::from_fn(d, 1, |i, _| Complex64::new(lam[i] as f64, 0.0));
        let quad = (&(&(&s * &l) * &Matrix::from_fn(1, 1, |_, _| tau)) * &l.transpose()).trace();
        let lin = (&(&(&c.transpose() * &s) * &l) * &wm.transpose()).trace();
        acc += (Complex64::new(0.0, PI) * (quad + lin * 2.0)).exp();
    }
    acc
}

/// `#{λ in the box : ᵗλSλ/2 = T, ᵗcSλ = R}` for m = 1.
pub fn lattice_count(spec: &ThetaSpec, t: &Rat, r: i64, radius: i64) -> usize {
    let d = spec.s.len();
    box_points(d, radius)
        .filter(|x| {
            let mut q = 0i64;
            let mut lin = 0i64;
            for i in 0..d {
                for j in 0..d {
                    q += x[i] * spec.s[i][j] * x[j];
                    lin += spec.c[i][0] * spec.s[i][j] * x[j];
                }
            }
            Rat::new(q.into(), 2.into()) == *t && lin == r
        })
        .count()
}
