//! Univariate polynomials with coefficients in a scalar backend.
//!
//! Coefficients are stored lowest degree first. Everything in the pipeline
//! is degree 3 or less, but the operations are written for general small
//! degrees so the Sturm/Euclid machinery in `roots` can use them.

use super::scalar::{Scalar, Sign};
use crate::error::KernelError;

/// Dense univariate polynomial, lowest-degree coefficient first.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> std::fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.sign().is_zero() && self.degree() != Some(0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Poly<S> {
    /// Build from coefficients (lowest first), trimming leading zeros.
    pub fn new(coeffs: Vec<S>) -> Poly<S> {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Poly<S> {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: S) -> Poly<S> {
        Poly::new(vec![c])
    }

    pub fn one() -> Poly<S> {
        Poly::constant(S::one())
    }

    /// The monomial `x`.
    pub fn x() -> Poly<S> {
        Poly {
            coeffs: vec![S::zero(), S::one()],
        }
    }

    /// `x - r`.
    pub fn linear_root(r: &S) -> Poly<S> {
        Poly {
            coeffs: vec![-r.clone(), S::one()],
        }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[S]) -> Poly<S> {
        let mut p = Poly::one();
        for r in roots {
            p = p.mul(&Poly::linear_root(r));
        }
        p
    }

    fn normalize(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.sign().is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(|c| c.num_eq(&S::one())).unwrap_or(false)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Poly<S> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| S::from_int(i as i64) * c.clone())
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly<S>) -> Poly<S> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, other: &Poly<S>) -> Poly<S> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly<S> {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip().expect("leading coefficient is zero");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &Poly<S>) -> (Poly<S>, Poly<S>) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead_inv = div
            .leading()
            .unwrap()
            .recip()
            .expect("zero leading coefficient");
        let mut rem = self.clone();
        let mut q = vec![S::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().clone() * lead_inv.clone();
            let shift = rd - dd;
            q[shift] = factor.clone();
            // rem -= factor * x^shift * div
            let mut coeffs = rem.coeffs.clone();
            for (j, c) in div.coeffs.iter().enumerate() {
                coeffs[shift + j] = coeffs[shift + j].clone() - factor.clone() * c.clone();
            }
            // Force the leading term away even if tolerance comparison
            // would keep it (floating backend).
            coeffs.truncate(rd);
            rem = Poly::new(coeffs);
        }
        (Poly::new(q), rem)
    }

    /// `p(a*x + b)`.
    pub fn compose_linear(&self, a: &S, b: &S) -> Poly<S> {
        let mut acc = Poly::zero();
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Discriminant of a monic cubic `x^3 + a x^2 + b x + c`.
    pub fn cubic_discriminant(&self) -> S {
        assert_eq!(self.degree(), Some(3), "cubic_discriminant needs degree 3");
        let p = self.monic();
        let a = p.coeff(2);
        let b = p.coeff(1);
        let c = p.coeff(0);
        let i = |n: i64| S::from_int(n);
        i(18) * a.clone() * b.clone() * c.clone()
            - i(4) * a.clone() * a.clone() * a.clone() * c.clone()
            + a.clone() * a.clone() * b.clone() * b.clone()
            - i(4) * b.clone() * b.clone() * b.clone()
            - i(27) * c.clone() * c.clone()
    }
}

/// Monic greatest common divisor via Euclid's algorithm. Exact backend only:
/// remainder-sequence pivoting is not meaningful under tolerance comparison.
pub fn poly_gcd<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Result<Poly<S>, KernelError> {
    if !S::EXACT {
        return Err(KernelError::ExactOnly("poly_gcd"));
    }
    if p.is_zero() && q.is_zero() {
        return Err(KernelError::BothZero);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Square-free part `p / gcd(p, p')` of an exact polynomial, monic.
pub fn squarefree_part<S: Scalar>(p: &Poly<S>) -> Result<Poly<S>, KernelError> {
    let g = poly_gcd(p, &p.derivative())?;
    let (q, r) = p.divrem(&g);
    debug_assert!(r.is_zero());
    Ok(q.monic())
}

/// Sign of `p` on the closed interval `[lo, hi]` by interval Horner
/// evaluation: `Some(sign)` when the enclosure excludes zero (or is exactly
/// zero), `None` when undecided.
pub fn interval_sign<S: Scalar>(p: &Poly<S>, lo: &S, hi: &S) -> Option<Sign> {
    let (mut acc_lo, mut acc_hi) = (S::zero(), S::zero());
    for c in p.coeffs().iter().rev() {
        // [acc_lo, acc_hi] * [lo, hi] + c
        let cands = [
            acc_lo.clone() * lo.clone(),
            acc_lo.clone() * hi.clone(),
            acc_hi.clone() * lo.clone(),
            acc_hi.clone() * hi.clone(),
        ];
        let mut new_lo = cands[0].clone();
        let mut new_hi = cands[0].clone();
        for v in &cands[1..] {
            if v.cmp_num(&new_lo) == std::cmp::Ordering::Less {
                new_lo = v.clone();
            }
            if v.cmp_num(&new_hi) == std::cmp::Ordering::Greater {
                new_hi = v.clone();
            }
        }
        acc_lo = new_lo + c.clone();
        acc_hi = new_hi + c.clone();
    }
    match (acc_lo.sign(), acc_hi.sign()) {
        (Sign::Positive, _) => Some(Sign::Positive),
        (_, Sign::Negative) => Some(Sign::Negative),
        (Sign::Zero, Sign::Zero) => Some(Sign::Zero),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::Rat;

    fn p(coeffs: &[i64]) -> Poly<Rat> {
        Poly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn divrem_round_trip() {
        let a = p(&[-3, -5, -1, 1]); // x^3 - x^2 - 5x - 3
        let b = p(&[1, 2, 1]); // (x+1)^2
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(&[-3, 1]));
    }

    #[test]
    fn gcd_shared_linear_factor() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let g = poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap();
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn gcd_power_factors() {
        // gcd(x^3, x^2) = x^2
        let g = poly_gcd(&p(&[0, 0, 0, 1]), &p(&[0, 0, 1])).unwrap();
        assert_eq!(g, p(&[0, 0, 1]));
    }

    #[test]
    fn gcd_derived_example() {
        // gcd((x-3)(x+1)^2, 3(x+1)^2) = (x+1)^2, checked by hand with
        // Euclid's algorithm: (x-3)(x+1)^2 = x^3 - x^2 - 5x - 3 and the
        // first remainder already vanishes.
        let a = p(&[-3, -5, -1, 1]);
        let b = p(&[3, 6, 3]);
        let g = poly_gcd(&a, &b).unwrap();
        assert_eq!(g, p(&[1, 2, 1]));
    }

    #[test]
    fn gcd_rejects_approx_backend() {
        use crate::kernel::scalar::Fl;
        let q: Poly<Fl> = Poly::new(vec![Fl::new(1.0), Fl::new(1.0)]);
        assert!(matches!(poly_gcd(&q, &q), Err(KernelError::ExactOnly(_))));
    }

    #[test]
    fn gcd_both_zero_rejected() {
        let z: Poly<Rat> = Poly::zero();
        assert!(matches!(poly_gcd(&z, &z), Err(KernelError::BothZero)));
    }

    #[test]
    fn squarefree_part_of_repeated_root() {
        // (x-3)(x+1)^2 -> (x-3)(x+1) = x^2 - 2x - 3
        let sf = squarefree_part(&p(&[-3, -5, -1, 1])).unwrap();
        assert_eq!(sf, p(&[-3, -2, 1]));
    }

    #[test]
    fn discriminant_signs() {
        // (x-1)(x-2)(x-3): positive discriminant
        assert!(
            p(&[-6, 11, -6, 1])
                .cubic_discriminant()
                .sign()
                .is_positive()
        );
        // (x-1)(x^2+1): negative
        assert!(p(&[-1, 1, -1, 1]).cubic_discriminant().sign().is_negative());
        // x^3: zero
        assert!(p(&[0, 0, 0, 1]).cubic_discriminant().sign().is_zero());
    }

    #[test]
    fn compose_linear_shifts_roots() {
        // p(x) = x^2 - 1, p(2x + 1) has roots x = 0, -1.
        let q = p(&[-1, 0, 1]).compose_linear(&Rat::from_int(2), &Rat::from_int(1));
        assert!(q.eval(&Rat::zero()).sign().is_zero());
        assert!(q.eval(&Rat::from_int(-1)).sign().is_zero());
    }

    #[test]
    fn interval_sign_resolves() {
        let q = p(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(
            interval_sign(&q, &Rat::from_int(2), &Rat::from_int(3)),
            Some(crate::kernel::scalar::Sign::Positive)
        );
        assert_eq!(
            interval_sign(&q, &Rat::from_int(1), &Rat::from_int(2)),
            None
        );
    }
}
