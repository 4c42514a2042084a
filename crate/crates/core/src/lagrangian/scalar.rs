//! Scalar abstraction for the Lagrangian layer.
//!
//! The same block algebra runs over two scalar types:
//! [`Complex64`] for floating-point work and [`CRational`]
//! (complex numbers with arbitrary-precision rational parts) for exact
//! arithmetic, where identities can be asserted with zero tolerance.

use num::BigRational;
use num_complex::{Complex, Complex64};
use num_traits::ToPrimitive;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex numbers with exact rational real and imaginary parts.
pub type CRational = Complex<BigRational>;

/// Field operations the Lagrangian block algebra needs, plus enough
/// introspection to report residuals uniformly across exact and
/// floating-point modes.
pub trait LagScalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact (identities may be asserted with
    /// zero tolerance).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    /// `|·|` — approximate for rationals (used only for reporting and
    /// float-mode comparisons, never for exact assertions).
    fn magnitude(&self) -> f64;
    /// Exact zero test (no tolerance).
    fn is_exactly_zero(&self) -> bool;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl LagScalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_exactly_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl LagScalar for CRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::from_integer(0.into()), BigRational::from_integer(0.into()))
    }

    fn one() -> Self {
        Complex::new(BigRational::from_integer(1.into()), BigRational::from_integer(0.into()))
    }

    fn i() -> Self {
        Complex::new(BigRational::from_integer(0.into()), BigRational::from_integer(1.into()))
    }

    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), BigRational::from_integer(0.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::from_integer(0.into()),
        )
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        // A nonzero rational must never report magnitude 0 (f64 underflow),
        // so fall back to the smallest positive float.
        let m = re.hypot(im);
        if m == 0.0 && !self.is_exactly_zero() {
            f64::MIN_POSITIVE
        } else {
            m
        }
    }

    fn is_exactly_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

use num_traits::Zero as _;

/// Parse an exact rational from `"p"`, `"-p"`, or `"p/q"` strings.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: num::BigInt = num.trim().parse().ok()?;
        let den: num::BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: num::BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

/// A rational scalar promoted to [`CRational`].
pub fn rational_scalar(r: BigRational) -> CRational {
    Complex::new(r, BigRational::from_integer(0.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_scalar_roundtrip() {
        let half = <CRational as LagScalar>::from_ratio(1, 2);
        let two = <CRational as LagScalar>::from_int(2);
        assert_eq!(half.clone() * two, <CRational as LagScalar>::one());
        let i = <CRational as LagScalar>::i();
        assert_eq!(i.clone() * i.clone(), -<CRational as LagScalar>::one());
        assert!(LagScalar::is_exactly_zero(&(i.clone() - i)));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/2"), Some(BigRational::new(3.into(), 2.into())));
        assert_eq!(parse_rational("-4"), Some(BigRational::from_integer((-4).into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn magnitude_never_hides_nonzero_exact_values() {
        let tiny = rational_scalar(BigRational::new(1.into(), num::BigInt::from(10).pow(400)));
        assert!(tiny.magnitude() > 0.0);
        assert!(!LagScalar::is_exactly_zero(&tiny));
    }
}
