use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Rat, Scalar};

/// Pfaffian of an exactly skew-symmetric rational matrix of even degree.
///
/// Sign convention: `Pf([[0, 1], [-1, 0]]) = 1`.
pub fn pfaffian(a: &Matrix<Rat>) -> Result<Rat> {
    pfaffian_generic(a)
}

/// Skew Gaussian elimination over any exact field: peel off the leading 2×2
/// block and recurse on its Schur complement.
pub fn pfaffian_generic<S: Scalar>(a: &Matrix<S>) -> Result<S> {
    if !a.is_square() {
        return Err(Error::Domain("Pfaffian of a non-square matrix".into()));
    }
    let n = a.rows();
    if n % 2 == 1 {
        return Err(Error::Domain(format!("Pfaffian of odd degree {n}")));
    }
    if !a.is_skew(0.0) {
        return Err(Error::Domain("Pfaffian of a non-skew-symmetric matrix".into()));
    }
    let mut m = a.clone();
    let mut pf = S::one();
    let mut k = 0;
    while k < n {
        let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_negligible(0.0)) else {
            return Ok(S::zero());
        };
        if j != k + 1 {
            swap_sym(&mut m, k + 1, j);
            pf = -pf;
        }
        let p = m[(k, k + 1)].clone();
        pf = pf * p.clone();
        for i in k + 2..n {
            for l in k + 2..n {
                let upd =
                    (m[(k + 1, i)].clone() * m[(k, l)].clone() - m[(k, i)].clone() * m[(k + 1, l)].clone()) / p.clone();
                m[(i, l)] = m[(i, l)].clone() + upd;
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Simultaneous row and column swap, preserving skew symmetry.
fn swap_sym<S: Scalar>(m: &mut Matrix<S>, a: usize, b: usize) {
    let n = m.rows();
    for j in 0..n {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
    for i in 0..n {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ri;

    /// Expansion along the first row: Pf(A) = Σ_j (−1)^{j+1} a_{0j} Pf(A without rows/cols 0, j).
    fn pf_expand(a: &Matrix<Rat>) -> Rat {
        let n = a.rows();
        if n == 0 {
            return ri(1);
        }
        let mut total = ri(0);
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&x| x != j).collect();
            let minor = Matrix::from_fn(n - 2, n - 2, |r, c| a[(keep[r], keep[c])].clone());
            let term = a[(0, j)].clone() * pf_expand(&minor);
            total = if j % 2 == 1 { total + term } else { total - term };
        }
        total
    }

    #[test]
    fn two_by_two_definition() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[0, 7], &[-7, 0]]);
        assert_eq!(pfaffian(&a).unwrap(), ri(7));
    }

    #[test]
    fn block_symplectic_form() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(pfaffian(&a).unwrap(), ri(1));
        assert_eq!(pf_expand(&a), ri(1));
    }

    #[test]
    fn zero_row_gives_zero() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[&[0, 0, 0, 0], &[0, 0, 2, 3], &[0, -2, 0, 5], &[0, -3, -5, 0]]);
        assert_eq!(pfaffian(&a).unwrap(), ri(0));
    }

    #[test]
    fn pivot_swap_sign_matches_expansion() {
        let a: Matrix<Rat> = Matrix::from_i64_rows(&[
            &[0, 0, 2, -1, 4, 1],
            &[0, 0, 3, 5, -2, 0],
            &[-2, -3, 0, 1, 1, 6],
            &[1, -5, -1, 0, 2, -3],
            &[-4, 2, -1, -2, 0, 1],
            &[-1, 0, -6, 3, -1, 0],
        ]);
        assert_eq!(pfaffian(&a).unwrap(), pf_expand(&a));
    }

    #[test]
    fn rejects_bad_input() {
        let odd: Matrix<Rat> = Matrix::zeros(3, 3);
        assert!(pfaffian(&odd).is_err());
        let sym: Matrix<Rat> = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert!(pfaffian(&sym).is_err());
    }
}
