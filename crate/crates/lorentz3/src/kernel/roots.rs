//! Real roots of small polynomials.
//!
//! The exact backend isolates roots of rational cubics without ever
//! trusting a float: rational roots are found exactly (integer candidates
//! of the monic integer model), irrational roots are carried as
//! [`AlgebraicReal`] values — a square-free defining polynomial plus an
//! isolating interval with rational endpoints. Sign queries against such a
//! root refine the interval by bisection and detect exact zeros through a
//! gcd test, so downstream trichotomies (`< 0`, `= 0`, `> 0`) are decided,
//! never guessed.
//!
//! The floating backend solves the cubic numerically and clusters roots
//! with the tolerance machinery from `scalar`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::poly::{Poly, interval_sign, poly_gcd, squarefree_part};
use super::scalar::{Fl, Rat, Scalar, Sign};

/// Root fuzz floor for the floating backend: perturbing a polynomial's
/// coefficients at f64 precision moves a double root by roughly the square
/// root of that perturbation, so clustering below this width would split
/// structurally repeated eigenvalues.
pub const ROOT_CLUSTER_FLOOR: f64 = 1e-7;

/// A real number that supports exact sign queries.
pub trait RealNum<S: Scalar>: Clone + fmt::Debug + fmt::Display + Send + Sync {
    /// Sign of the number itself.
    fn sign(&self) -> Sign;

    /// Sign of `g` evaluated at this number.
    fn sign_of_poly(&self, g: &Poly<S>) -> Sign;

    fn to_f64(&self) -> f64;

    /// The value as a backend scalar, when it is exactly representable.
    fn as_scalar(&self) -> Option<S>;

    fn cmp_real(&self, other: &Self) -> Ordering;

    fn num_eq_real(&self, other: &Self) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }

    /// Compare against a backend scalar.
    fn cmp_scalar(&self, v: &S) -> Ordering;
}

// ---------------------------------------------------------------------------
// Exact real numbers
// ---------------------------------------------------------------------------

/// Root of a square-free rational polynomial, isolated in `(lo, hi)`.
///
/// Invariants: the polynomial has exactly one root in the open interval
/// and neither endpoint is a root. The value may happen to be rational
/// (identifying that exactly is only worthwhile for small denominators);
/// every sign query stays exact either way.
#[derive(Clone, PartialEq)]
pub struct AlgebraicReal {
    poly: Poly<Rat>,
    lo: Rat,
    hi: Rat,
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicReal(≈{})", self.to_f64())
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl AlgebraicReal {
    /// Callers must uphold the isolation invariants.
    fn new(poly: Poly<Rat>, lo: Rat, hi: Rat) -> AlgebraicReal {
        debug_assert!(lo.cmp_num(&hi) == Ordering::Less);
        debug_assert!(!poly.eval(&lo).sign().is_zero());
        debug_assert!(!poly.eval(&hi).sign().is_zero());
        AlgebraicReal { poly, lo, hi }
    }

    pub fn interval(&self) -> (Rat, Rat) {
        (self.lo.clone(), self.hi.clone())
    }

    pub fn defining_poly(&self) -> &Poly<Rat> {
        &self.poly
    }

    /// One bisection step. A midpoint hitting the root exactly (possible
    /// when the root is rational) shrinks the interval symmetrically; any
    /// other point of the interval is then a valid endpoint since the root
    /// is unique there.
    fn refine_step(&mut self) {
        let mid = (self.lo.clone() + self.hi.clone()) * Rat::new(1, 2);
        let sm = self.poly.eval(&mid).sign();
        if sm.is_zero() {
            let quarter = (self.hi.clone() - self.lo.clone()) * Rat::new(1, 4);
            self.lo = mid.clone() - quarter.clone();
            self.hi = mid + quarter;
            return;
        }
        let slo = self.poly.eval(&self.lo).sign();
        if slo != sm {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    fn width(&self) -> Rat {
        self.hi.clone() - self.lo.clone()
    }

    fn refine_below(&mut self, w: &Rat) {
        while self.width().cmp_num(w) == Ordering::Greater {
            self.refine_step();
        }
    }
}

impl RealNum<Rat> for AlgebraicReal {
    fn sign(&self) -> Sign {
        self.sign_of_poly(&Poly::x())
    }

    fn sign_of_poly(&self, g: &Poly<Rat>) -> Sign {
        if g.is_zero() {
            return Sign::Zero;
        }
        // Exact zero detection: g vanishes at this root iff gcd(p, g) does,
        // and any root of the gcd inside the isolating interval must be the
        // root itself.
        let d = poly_gcd(&self.poly, g).expect("gcd of nonzero polynomials");
        if d.degree().map(|dd| dd >= 1).unwrap_or(false)
            && count_roots_in(&d, &self.lo, &self.hi) > 0
        {
            return Sign::Zero;
        }
        // Otherwise g(root) != 0; refine until interval evaluation decides.
        let mut me = self.clone();
        loop {
            if let Some(s) = interval_sign(g, &me.lo, &me.hi) {
                debug_assert!(!s.is_zero());
                return s;
            }
            me.refine_step();
        }
    }

    fn to_f64(&self) -> f64 {
        let mut me = self.clone();
        // 2^-60 of the interval scale is far below f64 resolution for the
        // magnitudes involved here.
        let mut w = me.width();
        for _ in 0..60 {
            w = w * Rat::new(1, 2);
        }
        me.refine_below(&w);
        let mid = (me.lo.clone() + me.hi.clone()) * Rat::new(1, 2);
        mid.to_f64()
    }

    fn as_scalar(&self) -> Option<Rat> {
        None
    }

    fn cmp_real(&self, other: &AlgebraicReal) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi.cmp_num(&b.lo) != Ordering::Greater {
                // Intervals touching at an endpoint still separate the
                // roots: endpoints are never roots.
                return Ordering::Less;
            }
            if b.hi.cmp_num(&a.lo) != Ordering::Greater {
                return Ordering::Greater;
            }
            // Overlapping: the roots are equal iff a shared root of both
            // polynomials lies in the overlap.
            let d = poly_gcd(&a.poly, &b.poly).expect("nonzero polys");
            if d.degree().map(|dd| dd >= 1).unwrap_or(false) {
                let lo = if a.lo.cmp_num(&b.lo) == Ordering::Greater {
                    a.lo.clone()
                } else {
                    b.lo.clone()
                };
                let hi = if a.hi.cmp_num(&b.hi) == Ordering::Less {
                    a.hi.clone()
                } else {
                    b.hi.clone()
                };
                if lo.cmp_num(&hi) == Ordering::Less && count_roots_in(&d, &lo, &hi) > 0 {
                    return Ordering::Equal;
                }
            }
            a.refine_step();
            b.refine_step();
        }
    }

    fn cmp_scalar(&self, v: &Rat) -> Ordering {
        match self.sign_of_poly(&Poly::linear_root(v)) {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Exact real value: a rational, or an isolated irrational algebraic root.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactReal {
    Rational(Rat),
    Algebraic(AlgebraicReal),
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{r}"),
            ExactReal::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl RealNum<Rat> for ExactReal {
    fn sign(&self) -> Sign {
        match self {
            ExactReal::Rational(r) => r.sign(),
            ExactReal::Algebraic(a) => a.sign(),
        }
    }

    fn sign_of_poly(&self, g: &Poly<Rat>) -> Sign {
        match self {
            ExactReal::Rational(r) => g.eval(r).sign(),
            ExactReal::Algebraic(a) => a.sign_of_poly(g),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(r) => Scalar::to_f64(r),
            ExactReal::Algebraic(a) => a.to_f64(),
        }
    }

    fn as_scalar(&self) -> Option<Rat> {
        match self {
            ExactReal::Rational(r) => Some(r.clone()),
            ExactReal::Algebraic(_) => None,
        }
    }

    fn cmp_real(&self, other: &ExactReal) -> Ordering {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => a.cmp_num(b),
            (ExactReal::Rational(a), ExactReal::Algebraic(b)) => b.cmp_scalar(a).reverse(),
            (ExactReal::Algebraic(a), ExactReal::Rational(b)) => a.cmp_scalar(b),
            (ExactReal::Algebraic(a), ExactReal::Algebraic(b)) => a.cmp_real(b),
        }
    }

    fn cmp_scalar(&self, v: &Rat) -> Ordering {
        match self {
            ExactReal::Rational(r) => r.cmp_num(v),
            ExactReal::Algebraic(a) => a.cmp_scalar(v),
        }
    }
}

impl RealNum<Fl> for Fl {
    fn sign(&self) -> Sign {
        Scalar::sign(self)
    }

    fn sign_of_poly(&self, g: &Poly<Fl>) -> Sign {
        Scalar::sign(&g.eval(self))
    }

    fn to_f64(&self) -> f64 {
        self.value
    }

    fn as_scalar(&self) -> Option<Fl> {
        Some(*self)
    }

    fn cmp_real(&self, other: &Fl) -> Ordering {
        self.cmp_num(other)
    }

    fn cmp_scalar(&self, v: &Fl) -> Ordering {
        self.cmp_num(v)
    }
}

// ---------------------------------------------------------------------------
// Sturm sequences and isolation (exact)
// ---------------------------------------------------------------------------

fn sturm_chain(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        chain.push(r.neg());
    }
}

fn sign_variations(chain: &[Poly<Rat>], x: &Rat) -> usize {
    let mut prev: Option<Sign> = None;
    let mut var = 0;
    for p in chain {
        let s = p.eval(x).sign();
        if s.is_zero() {
            continue;
        }
        if let Some(ps) = prev {
            if ps != s {
                var += 1;
            }
        }
        prev = Some(s);
    }
    var
}

/// Number of distinct real roots of square-free `p` in the open interval
/// `(lo, hi)`; endpoints must not be roots.
pub fn count_roots_in(p: &Poly<Rat>, lo: &Rat, hi: &Rat) -> usize {
    debug_assert!(!p.eval(lo).sign().is_zero() && !p.eval(hi).sign().is_zero());
    let chain = sturm_chain(p);
    sign_variations(&chain, lo) - sign_variations(&chain, hi)
}

/// Cauchy bound: every real root lies in `(-B, B)`.
fn root_bound(p: &Poly<Rat>) -> Rat {
    let lead = p.leading().expect("nonzero polynomial").clone();
    let inv = lead.recip().unwrap();
    let mut m = Rat::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let v = (c.clone() * inv.clone()).abs();
        if v.cmp_num(&m) == Ordering::Greater {
            m = v;
        }
    }
    m + Rat::from_int(2)
}

/// All real roots of a square-free `p`, ascending, as exact reals.
/// Rational roots encountered at bisection midpoints are reported exactly;
/// others come back as isolating intervals.
pub fn isolate_real_roots(p: &Poly<Rat>) -> Vec<ExactReal> {
    let p = p.monic();
    if p.degree().map(|d| d == 0).unwrap_or(true) {
        return vec![];
    }
    let bound = root_bound(&p);
    let chain = sturm_chain(&p);
    let mut out: Vec<ExactReal> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
        match n {
            0 => {}
            1 => out.push(ExactReal::Algebraic(AlgebraicReal::new(p.clone(), lo, hi))),
            _ => {
                let mid = (lo.clone() + hi.clone()) * Rat::new(1, 2);
                if p.eval(&mid).sign().is_zero() {
                    // Found a rational root: split it off and restart on
                    // the quotient (at most a couple of levels deep).
                    let (q, rem) = p.divrem(&Poly::linear_root(&mid));
                    debug_assert!(rem.is_zero());
                    let mut rest = isolate_real_roots(&q);
                    rest.push(ExactReal::Rational(mid));
                    rest.sort_by(|a, b| a.cmp_real(b));
                    return rest;
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.cmp_real(b));
    out
}

/// All rational roots of `p` with multiplicities, or `None` when the
/// denominator lcm of its square-free part exceeds `max_l_bits` bits (the
/// integer-model search is then not worth its cost; isolation still
/// handles such roots soundly). Candidates are the integer roots of the
/// monic integer model `q(y) = L^deg sf(y/L)`, located by bisecting Sturm
/// intervals below width one.
pub fn rational_roots_bounded(p: &Poly<Rat>, max_l_bits: u64) -> Option<Vec<(Rat, usize)>> {
    assert!(!p.is_zero());
    let sf = squarefree_part(p).expect("exact backend");
    if sf.degree() == Some(0) {
        return Some(vec![]);
    }
    // Monic integer model.
    let sf = sf.monic();
    let deg = sf.degree().unwrap();
    let mut lcm = BigInt::one();
    for c in sf.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    if lcm.bits() > max_l_bits {
        return None;
    }
    let lval = Rat::from_big(lcm.clone(), BigInt::one());
    // q(y) = L^deg * sf(y / L), integer monic.
    let mut q_coeffs = Vec::with_capacity(deg + 1);
    let mut pow = Rat::one();
    for i in (0..=deg).rev() {
        // coefficient of y^i is sf_i * L^(deg - i)
        let c = sf.coeff(i) * pow.clone();
        q_coeffs.push((i, c));
        pow = pow * lval.clone();
    }
    q_coeffs.sort_by_key(|(i, _)| *i);
    let q = Poly::new(q_coeffs.into_iter().map(|(_, c)| c).collect());
    debug_assert!(q.coeffs().iter().all(|c| c.is_integer()));

    let mut candidates: Vec<BigInt> = Vec::new();
    let chain = sturm_chain(&q);
    // Roots of q are L times roots of sf: L * cauchy(sf) is far tighter
    // than cauchy(q), whose coefficients carry powers of L.
    let bound = root_bound(&sf) * lval.clone();
    let mut stack = vec![(-bound.clone(), bound)];
    'intervals: while let Some((mut lo, mut hi)) = stack.pop() {
        let n = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
        if n == 0 {
            continue;
        }
        if n > 1 {
            let mid = (lo.clone() + hi.clone()) * Rat::new(1, 2);
            if q.eval(&mid).sign().is_zero() {
                // Rational roots of a monic integer polynomial are integers,
                // so distinct ones are at least 1 apart: stepping 1/4 past
                // the found root cannot skip another.
                candidates.push(integer_of(&mid));
                let eps = Rat::new(1, 4);
                let left_hi = mid.clone() - eps.clone();
                let right_lo = mid + eps;
                if lo.cmp_num(&left_hi) == Ordering::Less {
                    stack.push((lo, left_hi));
                }
                if right_lo.cmp_num(&hi) == Ordering::Less {
                    stack.push((right_lo, hi));
                }
            } else {
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
            continue;
        }
        // One root: narrow below width 1, then test the integers inside.
        while (hi.clone() - lo.clone()).cmp_num(&Rat::new(1, 2)) == Ordering::Greater {
            let mid = (lo.clone() + hi.clone()) * Rat::new(1, 2);
            let sm = q.eval(&mid).sign();
            if sm.is_zero() {
                candidates.push(integer_of(&mid));
                continue 'intervals;
            }
            if sm != q.eval(&lo).sign() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lo_int = lo.0.ceil().to_integer();
        let hi_int = hi.0.floor().to_integer();
        let mut n = lo_int;
        while n <= hi_int {
            let v = Rat::from_big(n.clone(), BigInt::one());
            if q.eval(&v).sign().is_zero() {
                candidates.push(n.clone());
            }
            n += 1;
        }
    }

    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for n in candidates {
        let root = Rat::from_big(n, lcm.clone());
        debug_assert!(p.eval(&root).sign().is_zero());
        let mut mult = 0;
        let lin = Poly::linear_root(&root);
        let mut cur = p.clone();
        loop {
            let (quo, rem) = cur.divrem(&lin);
            if rem.is_zero() {
                mult += 1;
                cur = quo;
            } else {
                break;
            }
        }
        debug_assert!(mult >= 1);
        out.push((root, mult));
    }
    Some(out)
}

/// Unbounded-effort variant (every rational root is found).
pub fn rational_roots(p: &Poly<Rat>) -> Vec<(Rat, usize)> {
    rational_roots_bounded(p, u64::MAX).expect("unbounded search")
}

fn integer_of(r: &Rat) -> BigInt {
    debug_assert!(r.is_integer());
    r.0.to_integer()
}

// ---------------------------------------------------------------------------
// Cubic root data
// ---------------------------------------------------------------------------

/// Imaginary part of a complex root pair. For the exact backend the value
/// is kept exact as long as the quadratic factor is rational (`Exact` for a
/// rational square root, `SqrtOf` otherwise); with an irrational real root
/// in the way only a float approximation is carried — nothing downstream
/// decides on it.
#[derive(Clone, Debug, PartialEq)]
pub enum ImPart<S: Scalar> {
    Exact(S),
    SqrtOf { radicand: S, approx: f64 },
    Approx(f64),
}

impl<S: Scalar> ImPart<S> {
    pub fn to_f64(&self) -> f64 {
        match self {
            ImPart::Exact(v) => v.to_f64(),
            ImPart::SqrtOf { approx, .. } => *approx,
            ImPart::Approx(v) => *v,
        }
    }

    pub fn as_scalar(&self) -> Option<S> {
        match self {
            ImPart::Exact(v) => Some(v.clone()),
            _ => None,
        }
    }
}

/// Root structure of a monic cubic.
#[derive(Clone, Debug)]
pub enum CubicRoots<S: Scalar> {
    /// Three real roots in ascending order, repeats adjacent.
    ThreeReal([S::Real; 3]),
    /// One real root plus a conjugate complex pair with `im > 0`.
    OneRealPair {
        real: S::Real,
        re: S::Real,
        im: ImPart<S>,
    },
}

/// Discriminant together with the root multiset of a monic cubic.
#[derive(Clone, Debug)]
pub struct RootData<S: Scalar> {
    pub discriminant: S,
    pub roots: CubicRoots<S>,
}

impl<S: Scalar> RootData<S> {
    /// Real roots grouped into (value, multiplicity), ascending.
    pub fn grouped_real(&self) -> Vec<(S::Real, usize)> {
        match &self.roots {
            CubicRoots::OneRealPair { real, .. } => vec![(real.clone(), 1)],
            CubicRoots::ThreeReal(rs) => {
                let mut out: Vec<(S::Real, usize)> = Vec::new();
                for r in rs {
                    match out.last_mut() {
                        Some((v, m)) if v.num_eq_real(r) => *m += 1,
                        _ => out.push((r.clone(), 1)),
                    }
                }
                out
            }
        }
    }
}

/// Rational-root identification is attempted only while the square-free
/// part's denominator lcm stays below this many bits; beyond it the roots
/// are carried as isolating intervals (still exact for every decision).
const RATIONAL_ID_BITS: u64 = 48;

/// Exact root data for a monic rational cubic.
///
/// Repeated-root cases need no search at all: a repeated root of a
/// rational cubic is rational and drops out of `gcd(p, p')` in closed
/// form. Distinct-root cases isolate via Sturm bisection, identifying
/// rational roots exactly when cheap.
pub fn cubic_roots_exact(p: &Poly<Rat>) -> RootData<Rat> {
    assert_eq!(p.degree(), Some(3), "cubic expected");
    assert!(p.is_monic(), "monic cubic expected");
    let disc = p.cubic_discriminant();
    let a = p.coeff(2);

    if disc.sign().is_zero() {
        let g = poly_gcd(p, &p.derivative()).expect("nonzero cubic");
        let (rep, simple) = match g.degree() {
            Some(1) => {
                // Double root r, simple root s with r + r + s = -a.
                let r = -g.coeff(0);
                let s = -a - Rat::from_int(2) * r.clone();
                (r, s)
            }
            Some(2) => {
                // Triple root: g = (x - r)^2.
                let r = -g.coeff(1) * Rat::new(1, 2);
                (r.clone(), r)
            }
            other => unreachable!("gcd degree {other:?} for a cubic with zero discriminant"),
        };
        debug_assert!(p.eval(&rep).sign().is_zero());
        debug_assert!(p.eval(&simple).sign().is_zero());
        let mut rs = vec![rep.clone(), rep, simple];
        rs.sort_by(|x, y| x.cmp_num(y));
        let roots: [ExactReal; 3] = std::array::from_fn(|i| ExactReal::Rational(rs[i].clone()));
        return RootData {
            discriminant: disc,
            roots: CubicRoots::ThreeReal(roots),
        };
    }

    // Distinct roots: identify rational ones when the denominators are
    // small, divide them out, isolate the rest.
    let mut rem = p.clone();
    let mut found: Vec<ExactReal> = Vec::new();
    if let Some(rats) = rational_roots_bounded(p, RATIONAL_ID_BITS) {
        for (r, m) in rats {
            debug_assert_eq!(m, 1);
            found.push(ExactReal::Rational(r.clone()));
            let (q, rr) = rem.divrem(&Poly::linear_root(&r));
            debug_assert!(rr.is_zero());
            rem = q;
        }
    }

    if disc.sign().is_positive() {
        let mut rs = found;
        rs.extend(isolate_real_roots(&rem));
        rs.sort_by(|x, y| x.cmp_real(y));
        debug_assert_eq!(rs.len(), 3);
        let roots: [ExactReal; 3] = std::array::from_fn(|i| rs[i].clone());
        return RootData {
            discriminant: disc,
            roots: CubicRoots::ThreeReal(roots),
        };
    }

    // One real root plus a conjugate pair.
    let real = if let Some(r) = found.first() {
        r.clone()
    } else {
        let isolated = isolate_real_roots(&rem);
        debug_assert_eq!(isolated.len(), 1);
        isolated.into_iter().next().unwrap()
    };
    match real.as_scalar() {
        Some(r) => {
            // Exact quadratic factor x^2 + Bx + C.
            let (quad, rr) = p.divrem(&Poly::linear_root(&r));
            debug_assert!(rr.is_zero());
            let re = -quad.coeff(1) * Rat::new(1, 2);
            let radicand = quad.coeff(0) - re.clone() * re.clone();
            debug_assert!(radicand.sign().is_positive());
            let approx = Scalar::to_f64(&radicand).sqrt();
            let im = match radicand.sqrt_exact() {
                Some(v) => ImPart::Exact(v),
                None => ImPart::SqrtOf { radicand, approx },
            };
            RootData {
                discriminant: disc,
                roots: CubicRoots::OneRealPair {
                    real: ExactReal::Rational(r),
                    re: ExactReal::Rational(re),
                    im,
                },
            }
        }
        None => {
            let ExactReal::Algebraic(alg) = &real else {
                unreachable!()
            };
            // The pair's real part is the unique real root of
            // q(y) = p(-a - 2y), from the root sum r + 2 re = -a.
            let q = p.compose_linear(&Rat::from_int(-2), &-a.clone()).monic();
            let (rlo, rhi) = alg.interval();
            let ylo = (-a.clone() - rhi) * Rat::new(1, 2);
            let yhi = (-a - rlo) * Rat::new(1, 2);
            let re = AlgebraicReal::new(q, ylo, yhi);
            // Only an approximation of im is carried here; im != 0 is
            // certified by the discriminant sign, and nothing downstream
            // decides on its value.
            let approx = {
                let pf: Poly<Fl> = Poly::new(
                    p.coeffs()
                        .iter()
                        .map(|c| Fl::new(Scalar::to_f64(c)))
                        .collect(),
                );
                match cubic_roots_approx(&pf).roots {
                    CubicRoots::OneRealPair { im, .. } => im.to_f64(),
                    _ => f64::NAN,
                }
            };
            RootData {
                discriminant: disc,
                roots: CubicRoots::OneRealPair {
                    real,
                    re: ExactReal::Algebraic(re),
                    im: ImPart::Approx(approx),
                },
            }
        }
    }
}

/// Numeric root data for a monic cubic over the floating backend.
pub fn cubic_roots_approx(p: &Poly<Fl>) -> RootData<Fl> {
    assert_eq!(p.degree(), Some(3), "cubic expected");
    let pm = p.monic();
    let tau = pm
        .coeffs()
        .iter()
        .map(|c| c.tau)
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let a = pm.coeff(2).value;
    let b = pm.coeff(1).value;
    let c = pm.coeff(0).value;
    let disc = Fl::with_tau(
        18.0 * a * b * c - 4.0 * a * a * a * c + a * a * b * b - 4.0 * b * b * b - 27.0 * c * c,
        tau,
    );

    // Scale so roots are O(1).
    let s = 1.0_f64.max(a.abs()).max(b.abs().sqrt()).max(c.abs().cbrt());
    let (na, nb, nc) = (a / s, b / (s * s), c / (s * s * s));
    // Depress: y = t - na/3.
    let shift = na / 3.0;
    let dp = nb - na * na / 3.0;
    let dq = 2.0 * na * na * na / 27.0 - na * nb / 3.0 + nc;
    let ddisc = -4.0 * dp * dp * dp - 27.0 * dq * dq;

    let eval = |x: f64| ((x + na) * x + nb) * x + nc;
    let deriv = |x: f64| (3.0 * x + 2.0 * na) * x + nb;
    let polish = |mut x: f64| {
        for _ in 0..3 {
            let d = deriv(x);
            if d.abs() > 1e-8 {
                let step = eval(x) / d;
                if step.is_finite() && step.abs() < 0.5 {
                    x -= step;
                }
            }
        }
        x
    };

    let structural_eps = 1e-11;
    let mut reals: Vec<f64>;
    let mut pair: Option<(f64, f64)> = None;
    if ddisc > structural_eps {
        // Three distinct real roots, trigonometric form.
        let m = 2.0 * (-dp / 3.0).sqrt();
        let arg = (3.0 * dq / (dp * m)).clamp(-1.0, 1.0);
        let theta = arg.acos();
        reals = (0..3)
            .map(|k| m * ((theta - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() - shift)
            .map(polish)
            .collect();
    } else if ddisc < -structural_eps {
        let h = (dq * dq / 4.0 + dp * dp * dp / 27.0).max(0.0).sqrt();
        let u = (-dq / 2.0 + h).cbrt();
        let v = (-dq / 2.0 - h).cbrt();
        let r = polish(u + v - shift);
        // Quadratic cofactor t^2 + rt' ... in depressed coords: re/im of pair.
        let t = r + shift;
        let re_pair = -t / 2.0 - shift;
        let im2 = dp + 0.75 * t * t;
        let im = im2.max(0.0).sqrt();
        reals = vec![r];
        pair = Some((re_pair, im));
    } else {
        // Repeated roots (within structural tolerance).
        if dp.abs() <= 1e-7 {
            reals = vec![-shift, -shift, -shift];
        } else {
            let d = -3.0 * dq / (2.0 * dp);
            let simple = -2.0 * d;
            reals = vec![polish(simple - shift), d - shift, d - shift];
        }
    }

    // Cluster close real roots; the floor covers charpoly-roundtrip fuzz of
    // structurally repeated eigenvalues.
    let cluster_eps = tau.max(ROOT_CLUSTER_FLOOR);
    if let Some((re, im)) = pair {
        if im.abs() <= cluster_eps {
            reals.push(re);
            reals.push(re);
            pair = None;
        } else {
            let mk = |v: f64| Fl::with_tau(v * s, tau);
            return RootData {
                discriminant: disc,
                roots: CubicRoots::OneRealPair {
                    real: mk(reals[0]),
                    re: mk(re),
                    im: ImPart::Exact(mk(im)),
                },
            };
        }
    }
    debug_assert!(pair.is_none());
    reals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Merge clusters to their mean.
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for &r in &reals {
        match merged.last_mut() {
            Some((v, m)) if (r - *v).abs() <= cluster_eps * v.abs().max(r.abs()).max(1.0) => {
                *v = (*v * *m as f64 + r) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => merged.push((r, 1)),
        }
    }
    let mut flat: Vec<Fl> = Vec::with_capacity(3);
    for (v, m) in merged {
        for _ in 0..m {
            flat.push(Fl::with_tau(v * s, tau));
        }
    }
    while flat.len() < 3 {
        // Degenerate fallback; should not happen.
        let last = *flat.last().unwrap();
        flat.push(last);
    }
    RootData {
        discriminant: disc,
        roots: CubicRoots::ThreeReal([flat[0], flat[1], flat[2]]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(coeffs: &[i64]) -> Poly<Rat> {
        Poly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn triple_zero_root() {
        let d = cubic_roots_exact(&rp(&[0, 0, 0, 1]));
        assert!(d.discriminant.sign().is_zero());
        let g = d.grouped_real();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].1, 3);
        assert_eq!(g[0].0.as_scalar(), Some(Rat::zero()));
    }

    #[test]
    fn factored_double_root() {
        // (x-3)(x+1)^2 = x^3 - x^2 - 5x - 3
        let d = cubic_roots_exact(&rp(&[-3, -5, -1, 1]));
        assert!(d.discriminant.sign().is_zero());
        let g = d.grouped_real();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].0.as_scalar(), Some(Rat::from_int(-1)));
        assert_eq!(g[0].1, 2);
        assert_eq!(g[1].0.as_scalar(), Some(Rat::from_int(3)));
        assert_eq!(g[1].1, 1);
    }

    #[test]
    fn real_plus_unit_pair() {
        // (x-1)(x^2+1) = x^3 - x^2 + x - 1
        let d = cubic_roots_exact(&rp(&[-1, 1, -1, 1]));
        assert!(d.discriminant.sign().is_negative());
        match d.roots {
            CubicRoots::OneRealPair { real, re, im } => {
                assert_eq!(real.as_scalar(), Some(Rat::from_int(1)));
                assert_eq!(re.as_scalar(), Some(Rat::zero()));
                assert_eq!(im.as_scalar(), Some(Rat::one()));
            }
            _ => panic!("expected a complex pair"),
        }
    }

    #[test]
    fn irrational_real_root_of_x3_minus_2() {
        let d = cubic_roots_exact(&rp(&[-2, 0, 0, 1]));
        assert!(d.discriminant.sign().is_negative());
        match d.roots {
            CubicRoots::OneRealPair { real, re, .. } => {
                assert!(real.as_scalar().is_none());
                assert!((real.to_f64() - 2f64.cbrt()).abs() < 1e-12);
                // re = -cbrt(2)/2, sign test must be exact.
                assert_eq!(re.sign(), Sign::Negative);
                assert!((re.to_f64() + 2f64.cbrt() / 2.0).abs() < 1e-12);
            }
            _ => panic!("expected a complex pair"),
        }
    }

    #[test]
    fn three_irrational_roots() {
        // x^3 - 3x + 1: disc 81 > 0, no rational roots.
        let d = cubic_roots_exact(&rp(&[1, -3, 0, 1]));
        assert!(d.discriminant.sign().is_positive());
        match &d.roots {
            CubicRoots::ThreeReal(rs) => {
                assert!(rs.iter().all(|r| r.as_scalar().is_none()));
                for w in rs.windows(2) {
                    assert_eq!(w[0].cmp_real(&w[1]), Ordering::Less);
                }
                let sum: f64 = rs.iter().map(|r| r.to_f64()).sum();
                assert!(sum.abs() < 1e-9);
                let prod: f64 = rs.iter().map(|r| r.to_f64()).product();
                assert!((prod + 1.0).abs() < 1e-9);
            }
            _ => panic!("expected three real roots"),
        }
    }

    fn algebraic_of(p: &Poly<Rat>, positive: bool) -> AlgebraicReal {
        for r in isolate_real_roots(p) {
            if let ExactReal::Algebraic(a) = r {
                if a.sign().is_positive() == positive {
                    return a;
                }
            }
        }
        panic!("no matching algebraic root");
    }

    #[test]
    fn algebraic_sign_queries() {
        // sqrt(2) as the positive root of x^2 - 2.
        let sqrt2 = &algebraic_of(&rp(&[-2, 0, 1]), true);
        // Exact zero: x^2 - 2 vanishes there.
        assert_eq!(sqrt2.sign_of_poly(&rp(&[-2, 0, 1])), Sign::Zero);
        // 3x^2 - 6 shares the root.
        assert_eq!(sqrt2.sign_of_poly(&rp(&[-6, 0, 3])), Sign::Zero);
        // x - 1.5 is positive at sqrt(2) > 1.5? sqrt(2) < 1.5: negative.
        let g = Poly::new(vec![Rat::new(-3, 2), Rat::one()]);
        assert_eq!(sqrt2.sign_of_poly(&g), Sign::Negative);
        assert_eq!(sqrt2.cmp_scalar(&Rat::new(3, 2)), Ordering::Less);
        assert_eq!(sqrt2.cmp_scalar(&Rat::one()), Ordering::Greater);
    }

    #[test]
    fn algebraic_cmp_between_roots() {
        let neg = algebraic_of(&rp(&[-2, 0, 1]), false);
        let pos = algebraic_of(&rp(&[-2, 0, 1]), true);
        assert_eq!(neg.cmp_real(&pos), Ordering::Less);
        assert_eq!(pos.cmp_real(&pos), Ordering::Equal);
        // Same value isolated from a different polynomial: 2x^2 - 4.
        let pos2 = algebraic_of(&rp(&[-4, 0, 2]), true);
        assert_eq!(pos.cmp_real(&pos2), Ordering::Equal);
    }

    #[test]
    fn rational_root_zero_with_large_denominators() {
        // Regression: a vanishing constant term plus five-digit
        // denominators must identify the root x = 0 immediately instead
        // of enumerating the whole integer-model interval.
        let p = Poly::new(vec![
            Rat::new(0, 1),
            Rat::new(1315609, 160000),
            Rat::new(1369, 400),
            Rat::new(1, 1),
        ]);
        let start = std::time::Instant::now();
        let roots = rational_roots_bounded(&p, 48).unwrap();
        assert_eq!(roots, vec![(Rat::zero(), 1)]);
        assert!(
            start.elapsed().as_secs_f64() < 1.0,
            "root search took too long"
        );
        let data = cubic_roots_exact(&p);
        assert!(data.discriminant.sign().is_negative());
        match data.roots {
            CubicRoots::OneRealPair { real, .. } => {
                assert_eq!(real.as_scalar(), Some(Rat::zero()));
            }
            other => panic!("expected one real root, got {other:?}"),
        }
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2x-1)^2 (x+3) = (4x^2 -4x +1)(x+3)
        let p = rp(&[3, 1]).mul(&Poly::new(vec![
            Rat::from_int(1),
            Rat::from_int(-4),
            Rat::from_int(4),
        ]));
        let roots = rational_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(
            roots
                .iter()
                .any(|(r, m)| *r == Rat::from_int(-3) && *m == 1)
        );
        assert!(roots.iter().any(|(r, m)| *r == Rat::new(1, 2) && *m == 2));
    }

    #[test]
    fn approx_distinct_roots() {
        // (x-1)(x-2)(x-4)
        let p: Poly<Fl> = Poly::new(
            [-8.0, 14.0, -7.0, 1.0]
                .iter()
                .map(|&c| Fl::new(c))
                .collect(),
        );
        let d = cubic_roots_approx(&p);
        match d.roots {
            CubicRoots::ThreeReal(rs) => {
                let vals: Vec<f64> = rs.iter().map(|r| r.value).collect();
                assert!((vals[0] - 1.0).abs() < 1e-9);
                assert!((vals[1] - 2.0).abs() < 1e-9);
                assert!((vals[2] - 4.0).abs() < 1e-9);
            }
            _ => panic!("expected three real roots"),
        }
    }

    #[test]
    fn approx_double_root_clusters() {
        // (x-3)(x+1)^2 with a tiny perturbation of the middle coefficient.
        let p: Poly<Fl> = Poly::new(
            [-3.0, -5.0 + 1e-13, -1.0, 1.0]
                .iter()
                .map(|&c| Fl::new(c))
                .collect(),
        );
        let d = cubic_roots_approx(&p);
        let g = d.grouped_real();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].1, 2);
        assert!((g[0].0.value + 1.0).abs() < 1e-6);
        assert_eq!(g[1].1, 1);
        assert!((g[1].0.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn approx_complex_pair() {
        // (x-2)(x^2 + 2x + 5): pair -1 ± 2i
        let p: Poly<Fl> = Poly::new([-10.0, 1.0, 0.0, 1.0].iter().map(|&c| Fl::new(c)).collect());
        let d = cubic_roots_approx(&p);
        match d.roots {
            CubicRoots::OneRealPair { real, re, im } => {
                assert!((real.value - 2.0).abs() < 1e-9);
                assert!((re.value + 1.0).abs() < 1e-9);
                assert!((im.to_f64() - 2.0).abs() < 1e-9);
            }
            _ => panic!("expected a complex pair"),
        }
    }
}
