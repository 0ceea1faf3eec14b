//! Scalar kinds carried by [`Matrix`](crate::matrix::Matrix).
//!
//! Four kinds are supported: exact rationals, exact Gaussian rationals, `f64`
//! and `Complex64`. Float comparisons always take an explicit tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Rat = BigRational;
/// Gaussian rational `a + bi` with `a, b` exact.
pub type CRat = Complex<BigRational>;

/// Field operations shared by every scalar kind.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the rational kinds, where equality is decidable.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p) / Self::from_i64(q)
    }

    /// Complex conjugate; identity for real kinds.
    fn conj(&self) -> Self;

    /// Absolute value as a double, used for pivoting and norms.
    fn modulus(&self) -> f64;

    /// Zero test. Exact kinds ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    fn to_c64(&self) -> Complex64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn conj(&self) -> Self {
        *self
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn modulus(&self) -> f64 {
        rat_to_f64(self).abs()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl Scalar for CRat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        CRat::new(Rat::from_i64(v), Rat::zero())
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        CRat::new(Rat::from_ratio(p, q), Rat::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// Nearest double to a rational (saturating on overflow).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // ToPrimitive can fail for huge numerators and denominators; fall back to scaled digits.
    let n = r.numer().to_f64().unwrap_or(if r.is_negative() { f64::MIN } else { f64::MAX });
    let d = r.denom().to_f64().unwrap_or(f64::MAX);
    n / d
}

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::from_ratio(p, q)
}

/// Exact rational from an integer.
pub fn ri(v: i64) -> Rat {
    Rat::from_i64(v)
}

/// Gaussian rational `re + im·i` from integers.
pub fn ci(re: i64, im: i64) -> CRat {
    CRat::new(ri(re), ri(im))
}

/// Gaussian rational from rational parts.
pub fn cr(re: Rat, im: Rat) -> CRat {
    CRat::new(re, im)
}

/// The imaginary unit as an exact Gaussian rational.
pub fn i_unit() -> CRat {
    ci(0, 1)
}

/// Exact rational nearest to a double (dyadic expansion, exact).
pub fn f64_to_rat(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(num, den);
        return Some(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(p))
}

/// Formats a rational as `"p/q"` or `"p"` when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Conversion of an exact integer-valued scalar to a double kind, used when an
/// exact construction feeds a float routine.
pub trait Lift<T> {
    fn lift(&self) -> T;
}

impl Lift<f64> for Rat {
    fn lift(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Lift<Complex64> for CRat {
    fn lift(&self) -> Complex64 {
        self.to_c64()
    }
}

impl Lift<CRat> for Rat {
    fn lift(&self) -> CRat {
        CRat::new(self.clone(), Rat::zero())
    }
}

impl Lift<Complex64> for f64 {
    fn lift(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Lift<Complex64> for Complex64 {
    fn lift(&self) -> Complex64 {
        *self
    }
}

impl Lift<f64> for f64 {
    fn lift(&self) -> f64 {
        *self
    }
}

impl Lift<Rat> for Rat {
    fn lift(&self) -> Rat {
        self.clone()
    }
}

impl Lift<CRat> for CRat {
    fn lift(&self) -> CRat {
        self.clone()
    }
}
