//! Scalar backends.
//!
//! Every quantity in the pipeline is generic over [`Scalar`], which has two
//! implementations:
//!
//! * [`Rat`] — arbitrary-precision rationals. All arithmetic is exact, sign
//!   decisions are decisions, and the classification layer can rely on them.
//! * [`Fl`] — an `f64` tagged with a relative comparison tolerance `tau`.
//!   Every comparison routes through a single comparator,
//!   `|a - b| <= tau * max(1, |a|, |b|)`, so the tolerance in effect is
//!   auditable. Binary operations propagate the looser of the two tags.
//!
//! Sign queries and equality on scalars must go through [`Scalar::sign`],
//! [`Scalar::num_eq`] and [`Scalar::cmp_num`]; `PartialEq` on `Fl` is bitwise
//! and only suitable for caching/dedup, not for mathematical decisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default relative tolerance for the floating backend.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Three-valued sign of a scalar (the floating backend maps "within
/// tolerance of zero" to [`Sign::Zero`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Shared interface of the two scalar backends.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Real-number representation for (possibly irrational) cubic roots of
    /// polynomials over this backend.
    type Real: super::roots::RealNum<Self>;

    /// True for the exact rational backend.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// `num / den`; panics if `den == 0`.
    fn from_fraction(num: i64, den: i64) -> Self;

    fn sign(&self) -> Sign;

    fn is_zero_num(&self) -> bool {
        self.sign().is_zero()
    }

    /// Backend equality: exact for [`Rat`], tolerance comparison for [`Fl`].
    fn num_eq(&self, other: &Self) -> bool;

    /// Total order consistent with `num_eq` (ties are `Equal`).
    fn cmp_num(&self, other: &Self) -> Ordering;

    fn abs(&self) -> Self;

    /// Multiplicative inverse, `None` when the value counts as zero.
    fn recip(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Square root within the backend: exact rational square root when the
    /// value is a perfect square (and `None` otherwise), plain `sqrt` for
    /// the floating backend (`None` for negatives).
    fn sqrt_exact(&self) -> Option<Self>;

    /// Tolerance tag, `None` for the exact backend.
    fn tau(&self) -> Option<f64>;

    /// Return the same value re-tagged with tolerance `tau` (identity for
    /// the exact backend). Used to tighten re-checks.
    fn retag_tau(&self, tau: f64) -> Self;

    /// Isolate the roots of a monic cubic over this backend.
    fn cubic_roots(p: &super::poly::Poly<Self>) -> super::roots::RootData<Self>;

    /// Wrap a backend scalar as a real number.
    fn real_from_scalar(v: Self) -> Self::Real;
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Parse "n", "n/d" or a decimal string like "-1.25" exactly.
    pub fn parse(s: &str) -> Option<Rat> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(Rat(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int = BigInt::from_str(if int.is_empty() { "0" } else { int }).ok()?;
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let num = BigInt::from_str(frac).ok()?;
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part = BigRational::new(num, den);
            let int_part = BigRational::from_integer(int);
            let v = if neg {
                int_part - frac_part
            } else {
                int_part + frac_part
            };
            return Some(Rat(v));
        }
        BigInt::from_str(s)
            .ok()
            .map(|n| Rat(BigRational::from_integer(n)))
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Scalar for Rat {
    type Real = super::roots::ExactReal;

    const EXACT: bool = true;

    fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    fn one() -> Rat {
        Rat(BigRational::one())
    }

    fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_fraction(num: i64, den: i64) -> Rat {
        Rat::new(num, den)
    }

    fn sign(&self) -> Sign {
        if self.0.is_zero() {
            Sign::Zero
        } else if self.0.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn num_eq(&self, other: &Rat) -> bool {
        self.0 == other.0
    }

    fn cmp_num(&self, other: &Rat) -> Ordering {
        self.0.cmp(&other.0)
    }

    fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    fn recip(&self) -> Option<Rat> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Fallback for extreme magnitudes: divide after rounding.
            let n = self.0.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.0.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    fn sqrt_exact(&self) -> Option<Rat> {
        if self.0.is_negative() {
            return None;
        }
        let ns = self.0.numer().sqrt();
        let ds = self.0.denom().sqrt();
        if &(&ns * &ns) == self.0.numer() && &(&ds * &ds) == self.0.denom() {
            Some(Rat(BigRational::new(ns, ds)))
        } else {
            None
        }
    }

    fn tau(&self) -> Option<f64> {
        None
    }

    fn retag_tau(&self, _tau: f64) -> Rat {
        self.clone()
    }

    fn cubic_roots(p: &super::poly::Poly<Rat>) -> super::roots::RootData<Rat> {
        super::roots::cubic_roots_exact(p)
    }

    fn real_from_scalar(v: Rat) -> Self::Real {
        super::roots::ExactReal::Rational(v)
    }
}

// ---------------------------------------------------------------------------
// Floating backend
// ---------------------------------------------------------------------------

/// `f64` scalar with an attached relative comparison tolerance.
#[derive(Clone, Copy, PartialEq)]
pub struct Fl {
    pub value: f64,
    pub tau: f64,
}

impl Fl {
    pub fn new(value: f64) -> Fl {
        Fl {
            value,
            tau: DEFAULT_TAU,
        }
    }

    pub fn with_tau(value: f64, tau: f64) -> Fl {
        Fl { value, tau }
    }

    fn join_tau(a: Fl, b: Fl) -> f64 {
        a.tau.max(b.tau)
    }
}

impl fmt::Debug for Fl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fl {
    type Output = Fl;
    fn add(self, rhs: Fl) -> Fl {
        Fl {
            value: self.value + rhs.value,
            tau: Fl::join_tau(self, rhs),
        }
    }
}

impl Sub for Fl {
    type Output = Fl;
    fn sub(self, rhs: Fl) -> Fl {
        Fl {
            value: self.value - rhs.value,
            tau: Fl::join_tau(self, rhs),
        }
    }
}

impl Mul for Fl {
    type Output = Fl;
    fn mul(self, rhs: Fl) -> Fl {
        Fl {
            value: self.value * rhs.value,
            tau: Fl::join_tau(self, rhs),
        }
    }
}

impl Div for Fl {
    type Output = Fl;
    fn div(self, rhs: Fl) -> Fl {
        Fl {
            value: self.value / rhs.value,
            tau: Fl::join_tau(self, rhs),
        }
    }
}

impl Neg for Fl {
    type Output = Fl;
    fn neg(self) -> Fl {
        Fl {
            value: -self.value,
            tau: self.tau,
        }
    }
}

impl Scalar for Fl {
    type Real = Fl;

    const EXACT: bool = false;

    fn zero() -> Fl {
        Fl::new(0.0)
    }

    fn one() -> Fl {
        Fl::new(1.0)
    }

    fn from_int(n: i64) -> Fl {
        Fl::new(n as f64)
    }

    fn from_fraction(num: i64, den: i64) -> Fl {
        assert!(den != 0, "zero denominator");
        Fl::new(num as f64 / den as f64)
    }

    fn sign(&self) -> Sign {
        // The single comparator against zero: |v| <= tau * max(1, |v|).
        if self.value.abs() <= self.tau * self.value.abs().max(1.0) {
            Sign::Zero
        } else if self.value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn num_eq(&self, other: &Fl) -> bool {
        let tau = self.tau.max(other.tau);
        (self.value - other.value).abs() <= tau * self.value.abs().max(other.value.abs()).max(1.0)
    }

    fn cmp_num(&self, other: &Fl) -> Ordering {
        if self.num_eq(other) {
            Ordering::Equal
        } else if self.value < other.value {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn abs(&self) -> Fl {
        Fl {
            value: self.value.abs(),
            tau: self.tau,
        }
    }

    fn recip(&self) -> Option<Fl> {
        if self.sign().is_zero() {
            None
        } else {
            Some(Fl {
                value: 1.0 / self.value,
                tau: self.tau,
            })
        }
    }

    fn to_f64(&self) -> f64 {
        self.value
    }

    fn sqrt_exact(&self) -> Option<Fl> {
        if self.value < 0.0 {
            None
        } else {
            Some(Fl {
                value: self.value.sqrt(),
                tau: self.tau,
            })
        }
    }

    fn tau(&self) -> Option<f64> {
        Some(self.tau)
    }

    fn retag_tau(&self, tau: f64) -> Fl {
        Fl {
            value: self.value,
            tau,
        }
    }

    fn cubic_roots(p: &super::poly::Poly<Fl>) -> super::roots::RootData<Fl> {
        super::roots::cubic_roots_approx(p)
    }

    fn real_from_scalar(v: Fl) -> Fl {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_parse_forms() {
        assert_eq!(Rat::parse("3/4").unwrap(), Rat::new(3, 4));
        assert_eq!(Rat::parse("-6/8").unwrap(), Rat::new(-3, 4));
        assert_eq!(Rat::parse("5").unwrap(), Rat::from_int(5));
        assert_eq!(Rat::parse("-1.25").unwrap(), Rat::new(-5, 4));
        assert_eq!(Rat::parse("0.5").unwrap(), Rat::new(1, 2));
        assert!(Rat::parse("1/0").is_none());
        assert!(Rat::parse("x").is_none());
    }

    #[test]
    fn rat_field_closure() {
        let a = Rat::new(2, 3);
        let b = Rat::new(-7, 5);
        assert_eq!(a.clone() + b.clone(), Rat::new(-11, 15));
        assert_eq!(a.clone() * b.clone(), Rat::new(-14, 15));
        assert_eq!((a.clone() / b.clone()) * b.clone(), a);
    }

    #[test]
    fn rat_sqrt_exact() {
        assert_eq!(Rat::new(9, 4).sqrt_exact(), Some(Rat::new(3, 2)));
        assert_eq!(Rat::from_int(2).sqrt_exact(), None);
        assert_eq!(Rat::from_int(-4).sqrt_exact(), None);
        assert_eq!(Rat::zero().sqrt_exact(), Some(Rat::zero()));
    }

    #[test]
    fn fl_comparator_is_relative() {
        let a = Fl::new(1.0);
        let b = Fl::new(1.0 + 1e-12);
        assert!(a.num_eq(&b));
        let big = Fl::new(1e12);
        let big2 = Fl::new(1e12 + 1.0);
        assert!(big.num_eq(&big2));
        let c = Fl::new(1e-3);
        let d = Fl::new(2e-3);
        assert!(!c.num_eq(&d));
    }

    #[test]
    fn fl_tau_propagates_looser() {
        let a = Fl::with_tau(1.0, 1e-3);
        let b = Fl::new(2.0);
        assert_eq!((a * b).tau, 1e-3);
        assert_eq!((b - a).tau, 1e-3);
    }

    #[test]
    fn fl_sign_near_zero() {
        assert!(Fl::new(1e-12).sign().is_zero());
        assert!(Fl::new(1e-6).sign().is_positive());
        assert!(Fl::new(-1e-6).sign().is_negative());
    }

    #[test]
    fn rat_display() {
        assert_eq!(Rat::new(3, 4).to_string(), "3/4");
        assert_eq!(Rat::from_int(-2).to_string(), "-2");
    }
}
