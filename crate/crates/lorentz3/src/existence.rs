//! Admissibility predicates for prescribed Segre data, closed-form
//! reconstruction in the A2 family, and a seeded multi-start numeric
//! realization search over the catalog.
//!
//! Condition identifiers are stable wire-format tokens: `T5.*` for the
//! locally symmetric catalog, `T6.*` for non-diagonalizable operators,
//! `T7.*` for diagonalizable ones.
//!
//! The `T7.*` tests run on possibly irrational spectra without rounding:
//! with `p = x^3 + a x^2 + b x + c` the symmetric conditions reduce to
//! rational evaluations (`T7.4` is `p(-a) < 0`, `T7.3` is "`-a` is a root
//! of multiplicity exactly two"), and each "up to renumeration" condition
//! reduces, for a distinguished root `r` and `e1 = -a`, `e2 = b`, to sign
//! tests of univariate polynomials at `r`, using the identities
//! `k2 + k3 = e1 - r` and `k2 k3 = e2 - r(e1 - r)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use serde_json::{Value, json};

use crate::curvature::operator_of;
use crate::error::ExistenceError;
use crate::jsonio::JsonScalar;
use crate::kernel::{Fl, ImPart, Mat3, Poly, Rat, RealNum, Scalar, Sign};
use crate::liealg::{Family, FamilyParams, MetricLieAlgebra, build};
use crate::segre::{SegreData, classify};
use crate::symspace::{ProductKind, SymmetricSpaceSpec, symmetric_operator};

pub const COND_SYM_CONSTANT: &str = "T5.1";
pub const COND_SYM_PRODUCT: &str = "T5.2";
pub const COND_SYM_NILPOTENT: &str = "T5.3";
pub const COND_ND_NILPOTENT: &str = "T6.1a";
pub const COND_ND_JORDAN_NEG: &str = "T6.1b";
pub const COND_ND_TRIPLE_NEG: &str = "T6.2";
pub const COND_ND_PAIR_NEG_RE: &str = "T6.3a";
pub const COND_ND_PAIR_BOUNDED: &str = "T6.3b";
pub const COND_DIAG: [&str; 7] = ["T7.1", "T7.2", "T7.3", "T7.4", "T7.5", "T7.6", "T7.7"];

/// A realizing witness: catalog family parameters or a symmetric space.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness<S: Scalar> {
    Family(FamilyParams<S>),
    Symmetric(SymmetricSpaceSpec<S>),
}

/// Outcome of an admissibility or realization query.
#[derive(Clone, Debug)]
pub struct Verdict<S: Scalar> {
    pub admissible: bool,
    pub matched_conditions: Vec<String>,
    pub witness: Option<Witness<S>>,
    pub residual: Option<f64>,
}

impl<S: Scalar> Verdict<S> {
    fn from_conditions(conds: Vec<&'static str>) -> Verdict<S> {
        Verdict {
            admissible: !conds.is_empty(),
            matched_conditions: conds.into_iter().map(String::from).collect(),
            witness: None,
            residual: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Non-diagonalizable admissibility
// ---------------------------------------------------------------------------

/// Existence conditions for non-diagonalizable operators: `{21}` with both
/// eigenvalues zero or Jordan eigenvalue negative, `{3}` with negative
/// eigenvalue, `{1zz}` with negative pair real part or `0 <= Re < -k1`.
pub fn admissible_nondiagonalizable<S: Scalar>(
    d: &SegreData<S>,
) -> Result<Verdict<S>, ExistenceError> {
    let mut conds = Vec::new();
    match d {
        SegreData::S111 { .. } => return Err(ExistenceError::WrongType),
        SegreData::S21 { simple, jordan } => {
            if simple.sign().is_zero() && jordan.sign().is_zero() {
                conds.push(COND_ND_NILPOTENT);
            }
            if jordan.sign().is_negative() {
                conds.push(COND_ND_JORDAN_NEG);
            }
        }
        SegreData::S3 { eigen } => {
            if eigen.sign().is_negative() {
                conds.push(COND_ND_TRIPLE_NEG);
            }
        }
        SegreData::S1zz {
            real, re, cubic, ..
        } => {
            match re.sign() {
                Sign::Negative => conds.push(COND_ND_PAIR_NEG_RE),
                Sign::Zero | Sign::Positive => {
                    // Re < -k1 iff k1 < a, since Re + k1 = (k1 - a)/2 with
                    // a the x^2 coefficient of the characteristic cubic.
                    let a = cubic.coeff(2);
                    if real.sign_of_poly(&Poly::linear_root(&a)).is_negative() {
                        conds.push(COND_ND_PAIR_BOUNDED);
                    }
                }
            }
        }
    }
    Ok(Verdict::from_conditions(conds))
}

// ---------------------------------------------------------------------------
// Diagonalizable admissibility
// ---------------------------------------------------------------------------

fn distinct_reals<S: Scalar>(eigen: &[S::Real; 3]) -> Vec<S::Real> {
    let mut out: Vec<S::Real> = Vec::new();
    for r in eigen {
        if !out.iter().any(|v| v.num_eq_real(r)) {
            out.push(r.clone());
        }
    }
    out
}

fn diagonalizable_conditions<S: Scalar>(
    eigen: &[S::Real; 3],
    cubic: &Poly<S>,
) -> Vec<&'static str> {
    let a = cubic.coeff(2);
    let b = cubic.coeff(1);
    let c = cubic.coeff(0);
    let e1 = -a.clone();
    let e2 = b.clone();
    let third = S::from_fraction(1, 3);
    let mut conds = Vec::new();

    // T7.1: triple root, p = (x + a/3)^3.
    let a2 = a.clone() * a.clone();
    if b.num_eq(&(a2.clone() * third.clone()))
        && c.num_eq(&(a2 * a.clone() * third.clone() * third.clone() * third.clone()))
    {
        conds.push(COND_DIAG[0]);
    }
    // T7.2: two zero, one nonzero.
    if b.sign().is_zero() && c.sign().is_zero() && !a.sign().is_zero() {
        conds.push(COND_DIAG[1]);
    }
    // T7.3: exactly two pairwise sums vanish, i.e. e1 is a root of p of
    // multiplicity exactly 2.
    let dp = cubic.derivative();
    if cubic.eval(&e1).sign().is_zero()
        && dp.eval(&e1).sign().is_zero()
        && !dp.derivative().eval(&e1).sign().is_zero()
    {
        conds.push(COND_DIAG[2]);
    }
    // T7.4: (k1+k2)(k1+k3)(k2+k3) = p(e1) < 0.
    if cubic.eval(&e1).sign().is_negative() {
        conds.push(COND_DIAG[3]);
    }

    // Renumerated conditions: distinguished root r against the pair sum
    // e1 - r and pair product e2 - r(e1 - r).
    let e1sq = e1.clone() * e1.clone();
    // T7.5: k2 k3 <= k1^2 < ((k2+k3)/2)^2 and k1 < (k2+k3)/2.
    let g1 = Poly::new(vec![-e2.clone(), e1.clone()]); // k1^2 - k2 k3 at r
    let g2 = Poly::new(vec![
        e1sq.clone(),
        S::from_int(-2) * e1.clone(),
        S::from_int(-3),
    ]);
    let g3 = Poly::new(vec![e1.clone(), S::from_int(-3)]); // e1 - 3x
    // T7.6: k2 < 0, k3 < 0, |k1| <= sqrt(k2 k3).
    let h_sum = Poly::new(vec![e1.clone(), -S::one()]); // k2 + k3 = e1 - x
    let h_prod = Poly::new(vec![e2.clone(), -e1.clone(), S::one()]); // k2 k3
    // T7.7: k1 < -|(k2+k3)/2|  <=>  k1 < 0 and 4 k1^2 > (e1 - k1)^2.
    let g7 = Poly::new(vec![-e1sq, S::from_int(2) * e1.clone(), S::from_int(3)]);

    let mut c5 = false;
    let mut c6 = false;
    let mut c7 = false;
    for r in distinct_reals::<S>(eigen) {
        if !c5
            && !r.sign_of_poly(&g1).is_negative()
            && r.sign_of_poly(&g2).is_positive()
            && r.sign_of_poly(&g3).is_positive()
        {
            c5 = true;
        }
        if !c6
            && r.sign_of_poly(&h_sum).is_negative()
            && r.sign_of_poly(&h_prod).is_positive()
            && !r.sign_of_poly(&g1).is_positive()
        {
            c6 = true;
        }
        if !c7 && r.sign().is_negative() && r.sign_of_poly(&g7).is_positive() {
            c7 = true;
        }
    }
    if c5 {
        conds.push(COND_DIAG[4]);
    }
    if c6 {
        conds.push(COND_DIAG[5]);
    }
    if c7 {
        conds.push(COND_DIAG[6]);
    }
    conds
}

/// Existence conditions for Segre type `{111}` with the given real triple.
pub fn admissible_diagonalizable<S: Scalar>(triple: &[S; 3]) -> Verdict<S> {
    let mut vals = triple.to_vec();
    vals.sort_by(|a, b| a.cmp_num(b));
    let cubic = Poly::from_roots(&vals);
    let eigen: [S::Real; 3] = std::array::from_fn(|i| S::real_from_scalar(vals[i].clone()));
    Verdict::from_conditions(diagonalizable_conditions::<S>(&eigen, &cubic))
}

// ---------------------------------------------------------------------------
// Locally symmetric admissibility
// ---------------------------------------------------------------------------

/// The three locally symmetric shapes: `{111}` with equal eigenvalues,
/// `{111}` with two zeros and one nonzero, `{21}` with zero eigenvalues.
/// A matching verdict carries a realizing catalog entry.
pub fn admissible_symmetric<S: Scalar>(d: &SegreData<S>) -> Verdict<S> {
    match d {
        SegreData::S111 { eigen, .. } => {
            if eigen[0].num_eq_real(&eigen[1]) && eigen[1].num_eq_real(&eigen[2]) {
                let c = eigen[0]
                    .as_scalar()
                    .expect("repeated eigenvalues are rational");
                return Verdict {
                    admissible: true,
                    matched_conditions: vec![COND_SYM_CONSTANT.into()],
                    witness: Some(Witness::Symmetric(SymmetricSpaceSpec::SpaceForm { c })),
                    residual: Some(0.0),
                };
            }
            let zeros = eigen.iter().filter(|e| e.sign().is_zero()).count();
            if zeros == 2 {
                let c = eigen
                    .iter()
                    .find(|e| !e.sign().is_zero())
                    .and_then(|e| e.as_scalar())
                    .expect("paired zero eigenvalues force a rational third");
                let kind = if c.sign().is_positive() {
                    ProductKind::S2xR1
                } else {
                    ProductKind::H2xR1
                };
                return Verdict {
                    admissible: true,
                    matched_conditions: vec![COND_SYM_PRODUCT.into()],
                    witness: Some(Witness::Symmetric(SymmetricSpaceSpec::Product { kind, c })),
                    residual: Some(0.0),
                };
            }
            Verdict::from_conditions(vec![])
        }
        SegreData::S21 { simple, jordan } if simple.sign().is_zero() && jordan.sign().is_zero() => {
            Verdict {
                admissible: true,
                matched_conditions: vec![COND_SYM_NILPOTENT.into()],
                witness: Some(Witness::Symmetric(SymmetricSpaceSpec::PlaneWave {
                    epsilon: 1,
                    alpha: S::one(),
                    beta: Poly::zero(),
                    xi: Poly::zero(),
                })),
                residual: Some(0.0),
            }
        }
        _ => Verdict::from_conditions(vec![]),
    }
}

/// Route to the matching predicate by Segre type, merging the locally
/// symmetric conditions into the verdict.
pub fn admissible<S: Scalar>(d: &SegreData<S>) -> Verdict<S> {
    let mut verdict = match d {
        SegreData::S111 { eigen, cubic } => {
            Verdict::from_conditions(diagonalizable_conditions::<S>(eigen, cubic))
        }
        _ => admissible_nondiagonalizable(d).expect("non-{111} type"),
    };
    let sym = admissible_symmetric(d);
    for c in sym.matched_conditions {
        verdict.matched_conditions.push(c);
    }
    if verdict.witness.is_none() {
        verdict.witness = sym.witness;
        verdict.residual = verdict.residual.or(sym.residual);
    }
    verdict.admissible = !verdict.matched_conditions.is_empty();
    verdict
}

// ---------------------------------------------------------------------------
// Forward verification
// ---------------------------------------------------------------------------

/// Compute, classify, and check that the matching predicate accepts.
pub fn verify_forward<S: Scalar>(alg: &MetricLieAlgebra<S>) -> bool {
    let Ok(op) = operator_of(alg) else {
        return false;
    };
    let d = classify(&op.k);
    match &d {
        SegreData::S111 { eigen, cubic } => {
            !diagonalizable_conditions::<S>(eigen, cubic).is_empty()
        }
        _ => admissible_nondiagonalizable(&d)
            .map(|v| v.admissible)
            .unwrap_or(false),
    }
}

/// Same check for the locally symmetric catalog.
pub fn verify_forward_symmetric<S: Scalar>(spec: &SymmetricSpaceSpec<S>) -> bool {
    let op = symmetric_operator(spec);
    admissible_symmetric(&classify(&op.k)).admissible
}

// ---------------------------------------------------------------------------
// A2 reconstruction
// ---------------------------------------------------------------------------

/// Result of prescribing `{21}` data `(k1, k2)` in the A2 family.
#[derive(Clone, Debug, PartialEq)]
pub enum A2Reconstruction<S: Scalar> {
    /// Both sign branches `lambda1 = ±2 sqrt(-k2)`,
    /// `lambda2 = ∓(k1 + 3 k2) / (2 sqrt(-k2))`.
    Branches(Vec<FamilyParams<S>>),
    /// `k1 = k2 = 0`: `lambda1 = 0` with `lambda2` free.
    FreeLambda2,
}

/// Invert the A2 eigenvalue formulas `k1 = 3/4 l1^2 - l1 l2`,
/// `k2 = -1/4 l1^2` for a prescribed `{21}` pair. On the exact backend a
/// non-square `-k2` is reported as `NonRationalData`; run the floating
/// backend for those targets.
///
/// The pair `k1 = -k2` (with `k2 < 0`) is degenerate: the formulas then
/// force `lambda2 = lambda1/2`, which is exactly the diagonalizable line,
/// so no A2 operator carries that `{21}` data and the branch list comes
/// back empty (other families may still realize it).
pub fn reconstruct_a2<S: Scalar>(k1: &S, k2: &S) -> Result<A2Reconstruction<S>, ExistenceError> {
    match k2.sign() {
        Sign::Positive => Err(ExistenceError::OutOfRange(
            "the Jordan eigenvalue k2 = -lambda1^2/4 cannot be positive".into(),
        )),
        Sign::Zero => {
            if k1.sign().is_zero() {
                Ok(A2Reconstruction::FreeLambda2)
            } else {
                Ok(A2Reconstruction::Branches(vec![]))
            }
        }
        Sign::Negative => {
            if (k1.clone() + k2.clone()).sign().is_zero() {
                return Ok(A2Reconstruction::Branches(vec![]));
            }
            let minus_k2 = -k2.clone();
            let root = minus_k2
                .sqrt_exact()
                .ok_or(ExistenceError::NonRationalData)?;
            let two_root = S::from_int(2) * root;
            let mut out = Vec::new();
            for sign in [S::one(), -S::one()] {
                let lambda1 = sign.clone() * two_root.clone();
                // lambda2 = (3/4 lambda1^2 - k1) / lambda1
                let l1sq = lambda1.clone() * lambda1.clone();
                let lambda2 = (S::from_fraction(3, 4) * l1sq - k1.clone()) / lambda1.clone();
                out.push(FamilyParams::A2 { lambda1, lambda2 });
            }
            Ok(A2Reconstruction::Branches(out))
        }
    }
}

// ---------------------------------------------------------------------------
// Numeric realization
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RealizeOptions {
    pub seed: u64,
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    /// Search order; `None` picks an order suited to the target's type.
    pub families: Option<Vec<Family>>,
    pub box_half_width: f64,
}

impl Default for RealizeOptions {
    fn default() -> RealizeOptions {
        RealizeOptions {
            seed: 0,
            starts: 48,
            max_iters: 600,
            tol: 1e-8,
            families: None,
            box_half_width: 6.0,
        }
    }
}

/// Family search order by target type, most productive first: A1 (and for
/// a repeated positive eigenvalue NC2) carries the diagonalizable spectra,
/// A2/A3/NB the defective ones, A3's diagonal the {3} stratum, and the
/// NC/A4 families the complex pairs.
fn default_family_order(d: &SegreData<Rat>) -> Vec<Family> {
    use Family::*;
    match d {
        SegreData::S111 { eigen, .. } => {
            let repeated_positive = (eigen[0].num_eq_real(&eigen[1])
                && eigen[1].sign().is_positive())
                || (eigen[1].num_eq_real(&eigen[2]) && eigen[1].sign().is_positive());
            if repeated_positive {
                vec![NC2, NC1, NA, A1, A2, A3, A4, NB]
            } else {
                vec![A1, NC2, NC1, NA, A2, A3, A4, NB]
            }
        }
        SegreData::S21 { .. } => vec![A2, A3, NB, A1, NC1, NC2, NA, A4],
        SegreData::S3 { .. } => vec![A3, A2, NB, NC1, NC2, A1, NA, A4],
        SegreData::S1zz { .. } => vec![NC2, NC1, A4, A3, A1, NA, A2, NB],
    }
}

/// Witness found by [`realize`], exact or numeric.
#[derive(Clone, Debug)]
pub enum RealizedWitness {
    Exact(Witness<Rat>),
    Numeric(Witness<Fl>),
}

#[derive(Clone, Debug)]
pub struct RealizeResult {
    pub conditions: Vec<String>,
    pub witness: RealizedWitness,
    pub residual: f64,
}

/// Monic characteristic cubic a target's operator must have.
fn target_cubic(d: &SegreData<Rat>) -> Poly<Rat> {
    match d {
        SegreData::S111 { cubic, .. } | SegreData::S1zz { cubic, .. } => cubic.clone(),
        SegreData::S21 { simple, jordan } => {
            Poly::from_roots(&[simple.clone(), jordan.clone(), jordan.clone()])
        }
        SegreData::S3 { eigen } => Poly::from_roots(&[eigen.clone(), eigen.clone(), eigen.clone()]),
    }
}

fn to_fl(d: &SegreData<Rat>) -> SegreData<Fl> {
    let conv_poly = |p: &Poly<Rat>| -> Poly<Fl> {
        Poly::new(
            p.coeffs()
                .iter()
                .map(|c| Fl::new(Scalar::to_f64(c)))
                .collect(),
        )
    };
    match d {
        SegreData::S111 { eigen, cubic } => SegreData::S111 {
            eigen: std::array::from_fn(|i| Fl::new(eigen[i].to_f64())),
            cubic: conv_poly(cubic),
        },
        SegreData::S1zz {
            real,
            re,
            im,
            cubic,
        } => SegreData::S1zz {
            real: Fl::new(real.to_f64()),
            re: Fl::new(re.to_f64()),
            im: ImPart::Exact(Fl::new(im.to_f64())),
            cubic: conv_poly(cubic),
        },
        SegreData::S21 { simple, jordan } => SegreData::S21 {
            simple: Fl::new(Scalar::to_f64(simple)),
            jordan: Fl::new(Scalar::to_f64(jordan)),
        },
        SegreData::S3 { eigen } => SegreData::S3 {
            eigen: Fl::new(Scalar::to_f64(eigen)),
        },
    }
}

/// Structural agreement between a computed approximate classification and
/// the target: same type, eigenvalue data within a root-sensitivity bound
/// (coefficients matched to `tol` pin a double root only to about
/// `sqrt(tol)`).
fn approx_matches(got: &SegreData<Fl>, want: &SegreData<Fl>) -> bool {
    if got.segre_type() != want.segre_type() {
        return false;
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-3 * x.abs().max(y.abs()).max(1.0);
    match (got, want) {
        (SegreData::S111 { eigen: a, .. }, SegreData::S111 { eigen: b, .. }) => {
            a.iter().zip(b).all(|(x, y)| close(x.value, y.value))
        }
        (
            SegreData::S1zz {
                real: ra,
                re: ea,
                im: ia,
                ..
            },
            SegreData::S1zz {
                real: rb,
                re: eb,
                im: ib,
                ..
            },
        ) => {
            close(ra.value, rb.value)
                && close(ea.value, eb.value)
                && close(ia.to_f64(), ib.to_f64())
        }
        (
            SegreData::S21 {
                simple: sa,
                jordan: ja,
            },
            SegreData::S21 {
                simple: sb,
                jordan: jb,
            },
        ) => close(sa.value, sb.value) && close(ja.value, jb.value),
        (SegreData::S3 { eigen: a }, SegreData::S3 { eigen: b }) => close(a.value, b.value),
        _ => false,
    }
}

/// Squared distance between characteristic cubic coefficients plus a hinge
/// penalty keeping the search in the right Segre stratum.
fn objective(family: Family, x: &[f64], target: &[f64; 3], d: &SegreData<Rat>) -> f64 {
    const INFEASIBLE: f64 = 1e9;
    let vals: Vec<Fl> = x.iter().map(|&v| Fl::new(v)).collect();
    let Ok(params) = FamilyParams::from_values(family, &vals) else {
        return INFEASIBLE;
    };
    if params.validate().is_err() {
        return INFEASIBLE;
    }
    let Ok(alg) = build(params) else {
        return INFEASIBLE;
    };
    let Ok(op) = operator_of(&alg) else {
        return INFEASIBLE;
    };
    let p = op.k.char_poly();
    let mut res = 0.0;
    for (i, t) in target.iter().enumerate() {
        let diff = p.coeff(i).value - t;
        res += diff * diff;
    }
    res + stratum_penalty(&op.k, d)
}

/// Hinged defect penalty for targets on a defective stratum. For `{21}`
/// and `{3}` targets a relative (bounded) defect measure must stay away
/// from zero; the hinge is zero throughout the generically defective
/// regions, so it only bites on the diagonalizable knife edge. For `{111}`
/// targets no penalty is applied: a landscape term pulling toward the
/// annihilation stratum empirically traps the simplex (0/48 starts succeed
/// with it, ~30/48 without), and the classification re-check already
/// enforces the class.
fn stratum_penalty(k: &Mat3<Fl>, d: &SegreData<Rat>) -> f64 {
    const DELTA_REL: f64 = 1e-8;
    let frob =
        |m: &Mat3<Fl>| -> f64 { m.m.iter().flatten().map(|v| v.value * v.value).sum::<f64>() };
    let shifted = |v: f64| {
        let mut m = k.clone();
        for i in 0..3 {
            m.m[i][i] = m.m[i][i] - Fl::new(v);
        }
        m
    };
    match d {
        SegreData::S21 { simple, jordan } => {
            let a = shifted(Scalar::to_f64(jordan));
            let b = shifted(Scalar::to_f64(simple));
            let rel = frob(&a.mul(&b)) / (frob(&a) * frob(&b)).max(f64::MIN_POSITIVE);
            (DELTA_REL - rel).max(0.0)
        }
        SegreData::S3 { eigen } => {
            let a = shifted(Scalar::to_f64(eigen));
            let fa = frob(&a);
            let rel = frob(&a.mul(&a)) / (fa * fa).max(f64::MIN_POSITIVE);
            (DELTA_REL - rel).max(0.0)
        }
        SegreData::S111 { .. } | SegreData::S1zz { .. } => 0.0,
    }
}

/// Nelder-Mead on an unconstrained objective; returns (best_x, best_f).
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += scale;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if simplex[n].1 - simplex[0].1 <= 1e-16 * (1.0 + simplex[0].1.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|j| 2.0 * centroid[j] - worst.0[j]).collect();
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|j| 3.0 * centroid[j] - 2.0 * worst.0[j])
                .collect();
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|j| centroid[j] + 0.5 * (worst.0[j] - centroid[j]))
                .collect();
            let fc = f(&contract);
            if fc < worst.1 {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|j| best[j] + 0.5 * (item.0[j] - best[j]))
                        .collect();
                    let fs = f(&shrunk);
                    *item = (shrunk, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    simplex.swap_remove(0)
}

/// Check an exact witness end to end.
fn try_exact_family_witness(
    d: &SegreData<Rat>,
    params: FamilyParams<Rat>,
) -> Option<RealizedWitness> {
    let alg = build(params.clone()).ok()?;
    let op = operator_of(&alg).ok()?;
    if classify(&op.k).matches(d) {
        Some(RealizedWitness::Exact(Witness::Family(params)))
    } else {
        None
    }
}

fn try_exact_symmetric_witness(d: &SegreData<Rat>) -> Option<RealizedWitness> {
    let v = admissible_symmetric(d);
    let Some(Witness::Symmetric(spec)) = v.witness else {
        return None;
    };
    let op = symmetric_operator(&spec);
    if classify(&op.k).matches(d) {
        Some(RealizedWitness::Exact(Witness::Symmetric(spec)))
    } else {
        None
    }
}

/// Closed-form candidates, tried before any search.
fn closed_form_witness(d: &SegreData<Rat>, family: Option<Family>) -> Option<RealizedWitness> {
    let allowed = |f: Family| family.is_none() || family == Some(f);
    if allowed(Family::A2) {
        if let SegreData::S21 { simple, jordan } = d {
            match reconstruct_a2(simple, jordan) {
                Ok(A2Reconstruction::Branches(branches)) => {
                    for params in branches {
                        if let Some(w) = try_exact_family_witness(d, params) {
                            return Some(w);
                        }
                    }
                }
                Ok(A2Reconstruction::FreeLambda2) => {
                    let params = FamilyParams::A2 {
                        lambda1: Rat::zero(),
                        lambda2: Rat::one(),
                    };
                    if let Some(w) = try_exact_family_witness(d, params) {
                        return Some(w);
                    }
                }
                Err(_) => {}
            }
        }
        // {111} with spectrum (-t, -t, t): lambda1 = 2 lambda2, t = lambda2^2.
        if let SegreData::S111 { eigen, .. } = d {
            let vals: Option<Vec<Rat>> = eigen.iter().map(|e| e.as_scalar()).collect();
            if let Some(vals) = vals {
                let t = vals[2].clone();
                if vals[0].num_eq(&-t.clone()) && vals[1].num_eq(&-t.clone()) {
                    if let Some(l2) = t.sqrt_exact() {
                        let params = FamilyParams::A2 {
                            lambda1: Rat::from_int(2) * l2.clone(),
                            lambda2: l2,
                        };
                        if let Some(w) = try_exact_family_witness(d, params) {
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    // A3's diagonal lambda1 = lambda carries the {3} stratum with
    // eigenvalue -lambda^2/4.
    if allowed(Family::A3) {
        if let SegreData::S3 { eigen } = d {
            if eigen.sign().is_negative() {
                if let Some(root) = (-eigen.clone()).sqrt_exact() {
                    for sgn in [1i64, -1] {
                        let t = Rat::from_int(2 * sgn) * root.clone();
                        let params = FamilyParams::A3 {
                            lambda: t.clone(),
                            lambda1: t,
                        };
                        if let Some(w) = try_exact_family_witness(d, params) {
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    // A1 with lambda2 = lambda3 = t: spectrum (-l1^2/4, -l1^2/4,
    // 3 l1^2/4 + l1 t) — any repeated negative eigenvalue with a free
    // simple one.
    if allowed(Family::A1) {
        if let SegreData::S111 { eigen, .. } = d {
            let vals: Option<Vec<Rat>> = eigen.iter().map(|e| e.as_scalar()).collect();
            if let Some(vals) = vals {
                for (ra, rb, simple) in [(0usize, 1usize, 2usize), (1, 2, 0), (0, 2, 1)] {
                    if !vals[ra].num_eq(&vals[rb]) || !vals[ra].sign().is_negative() {
                        continue;
                    }
                    let Some(root) = (-vals[ra].clone()).sqrt_exact() else {
                        continue;
                    };
                    let l1 = Rat::from_int(2) * root;
                    if l1.sign().is_zero() {
                        continue;
                    }
                    let t = (vals[simple].clone() - Rat::new(3, 4) * l1.clone() * l1.clone())
                        / l1.clone();
                    let params = FamilyParams::A1 {
                        lambda1: l1,
                        lambda2: t.clone(),
                        lambda3: t,
                    };
                    if let Some(w) = try_exact_family_witness(d, params) {
                        return Some(w);
                    }
                }
            }
        }
    }
    if family.is_none() {
        if let Some(w) = try_exact_symmetric_witness(d) {
            return Some(w);
        }
    }
    None
}

/// Float closed forms for targets whose exact square roots do not exist:
/// the same A2/A3 formulas evaluated in f64.
fn closed_form_numeric(
    d: &SegreData<Rat>,
    family: Option<Family>,
    target: &[f64; 3],
    want_fl: &SegreData<Fl>,
    tol: f64,
) -> Option<(Witness<Fl>, f64)> {
    let allowed = |f: Family| family.is_none() || family == Some(f);
    let mut candidates: Vec<FamilyParams<Fl>> = Vec::new();
    match d {
        SegreData::S21 { simple, jordan } if allowed(Family::A2) => {
            if let Ok(A2Reconstruction::Branches(bs)) = reconstruct_a2::<Fl>(
                &Fl::new(Scalar::to_f64(simple)),
                &Fl::new(Scalar::to_f64(jordan)),
            ) {
                candidates.extend(bs);
            }
        }
        SegreData::S3 { eigen } if allowed(Family::A3) => {
            let k = Scalar::to_f64(eigen);
            if k < 0.0 {
                let t = 2.0 * (-k).sqrt();
                for sgn in [1.0, -1.0] {
                    candidates.push(FamilyParams::A3 {
                        lambda: Fl::new(sgn * t),
                        lambda1: Fl::new(sgn * t),
                    });
                }
            }
        }
        _ => {}
    }
    for params in candidates {
        if params.validate().is_err() {
            continue;
        }
        let Ok(alg) = build(params.clone()) else {
            continue;
        };
        let Ok(op) = operator_of(&alg) else { continue };
        let p = op.k.char_poly();
        let residual: f64 = (0..3).map(|i| (p.coeff(i).value - target[i]).powi(2)).sum();
        if residual < tol && approx_matches(&classify(&op.k), want_fl) {
            return Some((Witness::Family(params), residual));
        }
    }
    None
}

/// Find a witness for admissible prescribed Segre data: exact closed forms
/// first, then a deterministic multi-start simplex search over the catalog
/// minimizing the characteristic-coefficient residual. The returned
/// residual is the objective at the witness; exact witnesses report zero.
/// `Err(SearchFailed)` is inconclusive, never a disproof.
pub fn realize(
    d: &SegreData<Rat>,
    family: Option<Family>,
    opts: &RealizeOptions,
) -> Result<RealizeResult, ExistenceError> {
    let verdict = admissible(d);
    if !verdict.admissible {
        return Err(ExistenceError::Invalid(
            "target is not admissible; nothing to realize".into(),
        ));
    }
    let conditions = verdict.matched_conditions;

    if let Some(w) = closed_form_witness(d, family) {
        return Ok(RealizeResult {
            conditions,
            witness: w,
            residual: 0.0,
        });
    }

    let target_poly = target_cubic(d);
    let target: [f64; 3] = std::array::from_fn(|i| Scalar::to_f64(&target_poly.coeff(i)));
    let want_fl = to_fl(d);

    if let Some((w, residual)) = closed_form_numeric(d, family, &target, &want_fl, opts.tol) {
        return Ok(RealizeResult {
            conditions,
            witness: RealizedWitness::Numeric(w),
            residual,
        });
    }

    let families: Vec<Family> = match family {
        Some(f) => vec![f],
        None => opts
            .families
            .clone()
            .unwrap_or_else(|| default_family_order(d)),
    };

    for fam in families {
        let n = fam.param_names().len();
        let results: Vec<(f64, usize, Vec<f64>)> = (0..opts.starts)
            .into_par_iter()
            .map(|start| {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    opts.seed ^ 0x9e3779b97f4a7c15u64.wrapping_mul(start as u64 + 1),
                );
                let x0: Vec<f64> = (0..n)
                    .map(|_| rng.random_range(-opts.box_half_width..opts.box_half_width))
                    .collect();
                let f = |x: &[f64]| objective(fam, x, &target, d);
                let (x, fx) = nelder_mead(&f, &x0, 0.5, opts.max_iters);
                (fx, start, x)
            })
            .collect();
        let mut ordered = results;
        ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for (residual, _start, x) in ordered {
            if !(residual < opts.tol) {
                break;
            }
            let vals: Vec<Fl> = x.iter().map(|&v| Fl::new(v)).collect();
            let Ok(params) = FamilyParams::from_values(fam, &vals) else {
                continue;
            };
            let Ok(alg) = build(params.clone()) else {
                continue;
            };
            let Ok(op) = operator_of(&alg) else { continue };
            if !approx_matches(&classify(&op.k), &want_fl) {
                continue;
            }
            // Tightened re-check: same classification at tau / 10.
            let tight = op.k.map(|v| v.retag_tau(v.tau / 10.0));
            if !approx_matches(&classify(&tight), &want_fl) {
                continue;
            }
            return Ok(RealizeResult {
                conditions,
                witness: RealizedWitness::Numeric(Witness::Family(params)),
                residual,
            });
        }
    }
    Err(ExistenceError::SearchFailed)
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

impl<S: JsonScalar> Witness<S> {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Family(params) => {
                let mut map = serde_json::Map::new();
                for (name, v) in params.family().param_names().iter().zip(params.values()) {
                    map.insert((*name).into(), v.to_json_value());
                }
                json!({ "family": params.family().name(), "params": Value::Object(map) })
            }
            Witness::Symmetric(spec) => spec.to_json(),
        }
    }
}

impl<S: JsonScalar> Verdict<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "admissible": self.admissible,
            "conditions": self.matched_conditions,
            "witness": self.witness.as_ref().map(|w| w.to_json()).unwrap_or(Value::Null),
            "residual": self.residual,
        })
    }
}

impl RealizedWitness {
    pub fn to_json(&self) -> Value {
        match self {
            RealizedWitness::Exact(w) => w.to_json(),
            RealizedWitness::Numeric(w) => w.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn s21(simple: i64, jordan: i64) -> SegreData<Rat> {
        SegreData::S21 {
            simple: r(simple),
            jordan: r(jordan),
        }
    }

    fn s111(vals: [i64; 3]) -> SegreData<Rat> {
        let mut v: Vec<Rat> = vals.iter().map(|&n| r(n)).collect();
        v.sort_by(|a, b| a.cmp_num(b));
        SegreData::S111 {
            eigen: std::array::from_fn(|i| Rat::real_from_scalar(v[i].clone())),
            cubic: Poly::from_roots(&v),
        }
    }

    fn s1zz(k1: i64, re: i64, im: i64) -> SegreData<Rat> {
        SegreData::<Rat>::from_json(&json!({
            "type": "{1zz}",
            "eigenvalues": [k1.to_string(), re.to_string(), im.to_string()],
        }))
        .unwrap()
    }

    #[test]
    fn nondiagonalizable_cases() {
        let v = admissible_nondiagonalizable(&s21(0, 0)).unwrap();
        assert!(v.admissible);
        assert_eq!(v.matched_conditions, vec!["T6.1a"]);

        let v = admissible_nondiagonalizable(&SegreData::S3 { eigen: r(-2) }).unwrap();
        assert!(v.admissible);
        assert_eq!(v.matched_conditions, vec!["T6.2"]);

        let v = admissible_nondiagonalizable(&SegreData::S3 { eigen: r(1) }).unwrap();
        assert!(!v.admissible);

        // k1 = -5, pair 1 ± 2i: 0 <= 1 < 5.
        let v = admissible_nondiagonalizable(&s1zz(-5, 1, 2)).unwrap();
        assert_eq!(v.matched_conditions, vec!["T6.3b"]);

        let v = admissible_nondiagonalizable(&s1zz(3, -1, 2)).unwrap();
        assert_eq!(v.matched_conditions, vec!["T6.3a"]);

        let v = admissible_nondiagonalizable(&s1zz(1, 2, 2)).unwrap();
        assert!(!v.admissible);

        assert!(matches!(
            admissible_nondiagonalizable(&s111([1, 2, 3])),
            Err(ExistenceError::WrongType)
        ));
    }

    #[test]
    fn diagonalizable_cases() {
        let v = admissible_diagonalizable(&[r(5), r(5), r(5)]);
        assert!(v.matched_conditions.contains(&"T7.1".to_string()));

        let v = admissible_diagonalizable(&[r(0), r(0), r(7)]);
        assert!(v.matched_conditions.contains(&"T7.2".to_string()));

        let v = admissible_diagonalizable(&[r(1), r(-1), r(-1)]);
        assert!(v.matched_conditions.contains(&"T7.3".to_string()));
        assert!(v.admissible);

        let v = admissible_diagonalizable(&[r(1), r(1), r(2)]);
        assert!(!v.admissible, "matched: {:?}", v.matched_conditions);

        let v = admissible_diagonalizable(&[r(-4), r(1), r(1)]);
        assert!(v.matched_conditions.contains(&"T7.7".to_string()));
    }

    #[test]
    fn diagonalizable_renumeration_invariance() {
        let triples: [[i64; 3]; 5] = [[1, -1, -1], [0, 0, 7], [-4, 1, 1], [2, 3, -5], [-2, -3, 1]];
        for t in triples {
            let base = admissible_diagonalizable(&[r(t[0]), r(t[1]), r(t[2])]);
            let perms: [[usize; 3]; 6] = [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ];
            for p in perms {
                let v = admissible_diagonalizable(&[r(t[p[0]]), r(t[p[1]]), r(t[p[2]])]);
                assert_eq!(
                    v.matched_conditions, base.matched_conditions,
                    "triple {t:?} perm {p:?}"
                );
            }
        }
    }

    #[test]
    fn symmetric_cases() {
        let v = admissible_symmetric(&s111([-3, -3, -3]));
        assert_eq!(v.matched_conditions, vec!["T5.1"]);
        match v.witness {
            Some(Witness::Symmetric(SymmetricSpaceSpec::SpaceForm { c })) => {
                assert_eq!(c, r(-3));
            }
            other => panic!("expected space form witness, got {other:?}"),
        }

        let v = admissible_symmetric(&s21(0, 0));
        assert_eq!(v.matched_conditions, vec!["T5.3"]);
        assert!(matches!(
            v.witness,
            Some(Witness::Symmetric(SymmetricSpaceSpec::PlaneWave { .. }))
        ));

        let v = admissible_symmetric(&SegreData::S3 { eigen: r(-1) });
        assert!(!v.admissible);

        let v = admissible_symmetric(&s111([0, 0, 5]));
        assert_eq!(v.matched_conditions, vec!["T5.2"]);
    }

    #[test]
    fn reconstruct_branches() {
        // (k1, k2) = (3, -1) -> (2, 0) and (-2, 0).
        match reconstruct_a2(&r(3), &r(-1)).unwrap() {
            A2Reconstruction::Branches(b) => {
                assert_eq!(b.len(), 2);
                assert!(b.contains(&FamilyParams::A2 {
                    lambda1: r(2),
                    lambda2: r(0)
                }));
                assert!(b.contains(&FamilyParams::A2 {
                    lambda1: r(-2),
                    lambda2: r(0)
                }));
            }
            other => panic!("expected branches, got {other:?}"),
        }
        // (k1, k2) = (-3, -1) -> lambda1 = ±2, lambda2 = ±3.
        match reconstruct_a2(&r(-3), &r(-1)).unwrap() {
            A2Reconstruction::Branches(b) => {
                assert!(b.contains(&FamilyParams::A2 {
                    lambda1: r(2),
                    lambda2: r(3)
                }));
                assert!(b.contains(&FamilyParams::A2 {
                    lambda1: r(-2),
                    lambda2: r(-3)
                }));
            }
            other => panic!("expected branches, got {other:?}"),
        }
        assert_eq!(
            reconstruct_a2(&r(0), &r(0)).unwrap(),
            A2Reconstruction::FreeLambda2
        );
        match reconstruct_a2(&r(5), &r(0)).unwrap() {
            A2Reconstruction::Branches(b) => assert!(b.is_empty()),
            other => panic!("expected empty branch list, got {other:?}"),
        }
        assert!(matches!(
            reconstruct_a2(&r(1), &r(2)),
            Err(ExistenceError::OutOfRange(_))
        ));
        assert!(matches!(
            reconstruct_a2(&r(1), &r(-2)),
            Err(ExistenceError::NonRationalData)
        ));
    }

    #[test]
    fn reconstruct_round_trip_through_pipeline() {
        for (k1, k2) in [(3i64, -1i64), (-3, -1), (7, -4), (0, -9)] {
            let A2Reconstruction::Branches(branches) = reconstruct_a2(&r(k1), &r(k2)).unwrap()
            else {
                panic!("expected branches");
            };
            assert_eq!(branches.len(), 2);
            for params in branches {
                let alg = build(params).unwrap();
                let op = operator_of(&alg).unwrap();
                match classify(&op.k) {
                    SegreData::S21 { simple, jordan } => {
                        assert_eq!(simple, r(k1));
                        assert_eq!(jordan, r(k2));
                    }
                    other => panic!("expected {{21}}, got {other:?}"),
                }
            }
        }
        // k1 = k2 = 0: lambda1 = 0, any lambda2; spot-check lambda2 = 5.
        let alg = build(FamilyParams::A2 {
            lambda1: r(0),
            lambda2: r(5),
        })
        .unwrap();
        let op = operator_of(&alg).unwrap();
        match classify(&op.k) {
            SegreData::S21 { simple, jordan } => {
                assert!(simple.sign().is_zero() && jordan.sign().is_zero());
            }
            other => panic!("expected nilpotent {{21}}, got {other:?}"),
        }
    }

    #[test]
    fn forward_consistency_spot_checks() {
        let alg = build(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: r(1),
        })
        .unwrap();
        assert!(verify_forward(&alg));
        let alg = build(FamilyParams::A1 {
            lambda1: r(0),
            lambda2: r(0),
            lambda3: r(0),
        })
        .unwrap();
        assert!(verify_forward(&alg));
        assert!(verify_forward_symmetric(&SymmetricSpaceSpec::SpaceForm {
            c: r(2)
        }));
        assert!(verify_forward_symmetric(&SymmetricSpaceSpec::Product {
            kind: ProductKind::RxH21,
            c: r(-2),
        }));
    }

    /// Regression fixture. NC2(1, -1, 3) is a valid catalog algebra whose
    /// operator is {21} with simple eigenvalue -5 and Jordan eigenvalue +3
    /// (every pipeline invariant checks out exactly). A positive Jordan
    /// eigenvalue matches none of the non-diagonalizable admissibility
    /// conditions, so the forward check flags it as a discrepancy rather
    /// than accepting or crashing. The stratum is measure-zero in the
    /// family's parameter space.
    #[test]
    fn forward_check_flags_defective_nc2_stratum() {
        let alg = build(FamilyParams::NC2 {
            p: r(1),
            q: r(-1),
            r: r(3),
        })
        .unwrap();
        let op = operator_of(&alg).unwrap();
        assert!(op.is_self_adjoint());
        match classify(&op.k) {
            SegreData::S21 { simple, jordan } => {
                assert_eq!(simple, r(-5));
                assert_eq!(jordan, r(3));
            }
            other => panic!("expected {{21}}, got {other:?}"),
        }
        assert!(
            !verify_forward(&alg),
            "the flagged stratum must stay flagged"
        );
    }

    #[test]
    fn realize_closed_forms() {
        let opts = RealizeOptions::default();
        let got = realize(&s21(3, -1), Some(Family::A2), &opts).unwrap();
        assert_eq!(got.residual, 0.0);
        assert!(matches!(
            got.witness,
            RealizedWitness::Exact(Witness::Family(_))
        ));

        let got = realize(&s111([1, -1, -1]), None, &opts).unwrap();
        assert_eq!(got.residual, 0.0);

        let got = realize(&s111([4, 4, 4]), None, &opts).unwrap();
        assert!(matches!(
            got.witness,
            RealizedWitness::Exact(Witness::Symmetric(SymmetricSpaceSpec::SpaceForm { .. }))
        ));

        assert!(realize(&s111([1, 1, 2]), None, &opts).is_err());
    }

    #[test]
    fn realize_is_deterministic_for_fixed_seed() {
        let opts = RealizeOptions {
            starts: 16,
            ..RealizeOptions::default()
        };
        let d = s111([-4, 1, 1]);
        let a = realize(&d, None, &opts).unwrap();
        let b = realize(&d, None, &opts).unwrap();
        assert_eq!(a.residual, b.residual);
        match (&a.witness, &b.witness) {
            (
                RealizedWitness::Numeric(Witness::Family(pa)),
                RealizedWitness::Numeric(Witness::Family(pb)),
            ) => {
                let va: Vec<f64> = pa.values().iter().map(|v| v.value).collect();
                let vb: Vec<f64> = pb.values().iter().map(|v| v.value).collect();
                assert_eq!(va, vb);
            }
            other => panic!("expected matching numeric witnesses, got {other:?}"),
        }
    }

    #[test]
    fn realize_numeric_search_finds_interior_target() {
        // (-4, 1, 1) is admissible through T7.7 but has no closed form
        // here; the search must find it.
        let opts = RealizeOptions {
            starts: 24,
            ..RealizeOptions::default()
        };
        let got = realize(&s111([-4, 1, 1]), None, &opts).unwrap();
        assert!(got.residual < 1e-8, "residual {}", got.residual);
    }
}
