//! The catalog of three-dimensional Lorentzian metric Lie algebras.
//!
//! Eight families cover every left-invariant Lorentzian metric on a 3D Lie
//! group in a pseudo-orthonormal (or, for family B, null) frame:
//!
//! | family | brackets (nonzero)                                           | frame        | constraints |
//! |--------|--------------------------------------------------------------|--------------|-------------|
//! | A1     | \[e1,e2\]=l3 e3, \[e1,e3\]=-l2 e2, \[e2,e3\]=l1 e1                 | e1 timelike  | —           |
//! | A2     | \[e1,e2\]=(1-l2)e3-e2, \[e1,e3\]=e3-(1+l2)e2, \[e2,e3\]=l1 e1      | e3 timelike  | —           |
//! | A3     | \[e1,e2\]=e1-l e3, \[e1,e3\]=-l e2-e1, \[e2,e3\]=l1 e1+e2+e3       | e3 timelike  | —           |
//! | A4     | \[e1,e2\]=l3 e3, \[e1,e3\]=-b e1-a e2, \[e2,e3\]=-a e1+b e2        | e1 timelike  | b != 0      |
//! | NA     | \[e1,e3\]=L sin(phi) e1 - M cos(phi) e2, \[e2,e3\]=L cos(phi) e1 + M sin(phi) e2 | e3 timelike | sin(phi)!=0, L+M!=0, L>=0, M>=0 |
//! | NB     | \[e1,e3\]=t e1 - s e2, \[e2,e3\]=p e1 + q e2                     | null frame   | q != t      |
//! | NC1    | \[e1,e3\]=s e1 + p e2, \[e2,e3\]=p e1 + q e2                     | e2 timelike  | q != s      |
//! | NC2    | \[e1,e3\]=q e1 - r e2, \[e2,e3\]=p e1 + q e2                     | e2 timelike  | q != 0, p+r != 0 |
//!
//! Family NA is parameterized by `t = tan(phi/2)`, which makes
//! `sin(phi) = 2t/(1+t^2)` and `cos(phi) = (1-t^2)/(1+t^2)` rational in a
//! rational parameter; `t != 0` is then exactly `sin(phi) != 0`.
//!
//! Free algebras (raw structure constants plus a frame Gram matrix) are
//! accepted as well, gated by the Jacobi identity and a Lorentzian
//! signature check.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Value, json};

use crate::error::LieAlgError;
use crate::jsonio::{JsonScalar, mat3_from_json, mat3_to_json};
use crate::kernel::{CubicRoots, Mat3, RealNum, Scalar, Sign, cubic_root_data};

/// Frame Gram matrix of signature (+,+,-).
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMetric<S: Scalar> {
    pub gram: Mat3<S>,
}

impl<S: Scalar> FrameMetric<S> {
    /// Validate symmetry, nondegeneracy and Lorentzian signature.
    pub fn new(gram: Mat3<S>) -> Result<FrameMetric<S>, LieAlgError> {
        if !gram.is_symmetric() {
            return Err(LieAlgError::BadMetric(
                "gram matrix is not symmetric".into(),
            ));
        }
        if gram.det().sign().is_zero() {
            return Err(LieAlgError::BadMetric("gram matrix is degenerate".into()));
        }
        let (pos, neg) = eigenvalue_signs(&gram);
        if !(pos == 2 && neg == 1) {
            return Err(LieAlgError::BadMetric(format!(
                "signature is not (+,+,-): {pos} positive, {neg} negative eigenvalues"
            )));
        }
        Ok(FrameMetric { gram })
    }

    pub fn pairing(&self, u: &[S; 3], v: &[S; 3]) -> S {
        let gv = self.gram.mul_vec(v);
        let mut acc = S::zero();
        for i in 0..3 {
            acc = acc + u[i].clone() * gv[i].clone();
        }
        acc
    }
}

/// Count (positive, negative) eigenvalues of a symmetric matrix.
pub fn eigenvalue_signs<S: Scalar>(m: &Mat3<S>) -> (usize, usize) {
    let data = cubic_root_data(&m.char_poly());
    match data.roots {
        CubicRoots::ThreeReal(rs) => {
            let pos = rs.iter().filter(|r| r.sign().is_positive()).count();
            let neg = rs.iter().filter(|r| r.sign().is_negative()).count();
            (pos, neg)
        }
        // Symmetric matrices have real spectra; a numeric pair report means
        // a borderline cluster, treat the pair as two real parts.
        CubicRoots::OneRealPair { real, re, .. } => {
            let mut pos = 0;
            let mut neg = 0;
            for s in [real.sign(), re.sign(), re.sign()] {
                match s {
                    Sign::Positive => pos += 1,
                    Sign::Negative => neg += 1,
                    Sign::Zero => {}
                }
            }
            (pos, neg)
        }
    }
}

/// Structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`, stored fully
/// antisymmetrized.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<S: Scalar> {
    c: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> StructureConstants<S> {
    /// Build from the three upper brackets `[e1,e2]`, `[e1,e3]`, `[e2,e3]`.
    pub fn from_upper(b12: [S; 3], b13: [S; 3], b23: [S; 3]) -> StructureConstants<S> {
        let mut c: [[[S; 3]; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| S::zero())));
        let pairs = [(0usize, 1usize, b12), (0, 2, b13), (1, 2, b23)];
        for (i, j, b) in pairs {
            for k in 0..3 {
                c[i][j][k] = b[k].clone();
                c[j][i][k] = -b[k].clone();
            }
        }
        StructureConstants { c }
    }

    pub fn bracket(&self, i: usize, j: usize) -> [S; 3] {
        std::array::from_fn(|k| self.c[i][j][k].clone())
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket_vec(&self, u: &[S; 3], v: &[S; 3]) -> [S; 3] {
        let mut out: [S; 3] = std::array::from_fn(|_| S::zero());
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let coeff = u[i].clone() * v[j].clone();
                for k in 0..3 {
                    out[k] = out[k].clone() + coeff.clone() * self.c[i][j][k].clone();
                }
            }
        }
        out
    }

    /// Entrywise transform (e.g. retagging the floating tolerance).
    pub fn map_scalars(&self, mut f: impl FnMut(&S) -> S) -> StructureConstants<S> {
        StructureConstants {
            c: std::array::from_fn(|i| {
                std::array::from_fn(|j| std::array::from_fn(|k| f(&self.c[i][j][k])))
            }),
        }
    }

    /// Trace of `ad(e_i)`.
    pub fn ad_trace(&self, i: usize) -> S {
        let mut acc = S::zero();
        for j in 0..3 {
            acc = acc + self.c[i][j][j].clone();
        }
        acc
    }
}

/// Cyclic Jacobi sum over the basis triple; true iff it vanishes.
pub fn check_jacobi<S: Scalar>(sc: &StructureConstants<S>) -> bool {
    let basis: [[S; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|k| if i == k { S::one() } else { S::zero() }));
    let mut total: [S; 3] = std::array::from_fn(|_| S::zero());
    for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
        let inner = sc.bracket(i, j);
        let term = sc.bracket_vec(&inner, &basis[k]);
        for t in 0..3 {
            total[t] = total[t].clone() + term[t].clone();
        }
    }
    total.iter().all(|v| v.sign().is_zero())
}

/// Family tags of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A1,
    A2,
    A3,
    A4,
    NA,
    NB,
    NC1,
    NC2,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::A1,
        Family::A2,
        Family::A3,
        Family::A4,
        Family::NA,
        Family::NB,
        Family::NC1,
        Family::NC2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::A3 => "A3",
            Family::A4 => "A4",
            Family::NA => "NA",
            Family::NB => "NB",
            Family::NC1 => "NC1",
            Family::NC2 => "NC2",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Some(Family::A1),
            "A2" => Some(Family::A2),
            "A3" => Some(Family::A3),
            "A4" => Some(Family::A4),
            "NA" | "A" => Some(Family::NA),
            "NB" | "B" => Some(Family::NB),
            "NC1" | "C1" => Some(Family::NC1),
            "NC2" | "C2" => Some(Family::NC2),
            _ => None,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::A1 => &["lambda1", "lambda2", "lambda3"],
            Family::A2 => &["lambda1", "lambda2"],
            Family::A3 => &["lambda", "lambda1"],
            Family::A4 => &["alpha", "beta", "lambda3"],
            Family::NA => &["lambda", "mu", "t"],
            Family::NB => &["p", "q", "s", "t"],
            Family::NC1 => &["p", "q", "s"],
            Family::NC2 => &["p", "q", "r"],
        }
    }

    pub fn is_unimodular(self) -> bool {
        matches!(self, Family::A1 | Family::A2 | Family::A3 | Family::A4)
    }
}

/// Parameters of one catalog family.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyParams<S: Scalar> {
    A1 { lambda1: S, lambda2: S, lambda3: S },
    A2 { lambda1: S, lambda2: S },
    A3 { lambda: S, lambda1: S },
    A4 { alpha: S, beta: S, lambda3: S },
    NA { lambda: S, mu: S, t: S },
    NB { p: S, q: S, s: S, t: S },
    NC1 { p: S, q: S, s: S },
    NC2 { p: S, q: S, r: S },
}

impl<S: Scalar> FamilyParams<S> {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::A1 { .. } => Family::A1,
            FamilyParams::A2 { .. } => Family::A2,
            FamilyParams::A3 { .. } => Family::A3,
            FamilyParams::A4 { .. } => Family::A4,
            FamilyParams::NA { .. } => Family::NA,
            FamilyParams::NB { .. } => Family::NB,
            FamilyParams::NC1 { .. } => Family::NC1,
            FamilyParams::NC2 { .. } => Family::NC2,
        }
    }

    /// Values in the family's canonical parameter order.
    pub fn values(&self) -> Vec<S> {
        match self {
            FamilyParams::A1 {
                lambda1,
                lambda2,
                lambda3,
            } => {
                vec![lambda1.clone(), lambda2.clone(), lambda3.clone()]
            }
            FamilyParams::A2 { lambda1, lambda2 } => vec![lambda1.clone(), lambda2.clone()],
            FamilyParams::A3 { lambda, lambda1 } => vec![lambda.clone(), lambda1.clone()],
            FamilyParams::A4 {
                alpha,
                beta,
                lambda3,
            } => {
                vec![alpha.clone(), beta.clone(), lambda3.clone()]
            }
            FamilyParams::NA { lambda, mu, t } => vec![lambda.clone(), mu.clone(), t.clone()],
            FamilyParams::NB { p, q, s, t } => {
                vec![p.clone(), q.clone(), s.clone(), t.clone()]
            }
            FamilyParams::NC1 { p, q, s } => vec![p.clone(), q.clone(), s.clone()],
            FamilyParams::NC2 { p, q, r } => vec![p.clone(), q.clone(), r.clone()],
        }
    }

    pub fn from_values(family: Family, vals: &[S]) -> Result<FamilyParams<S>, LieAlgError> {
        let names = family.param_names();
        if vals.len() != names.len() {
            return Err(LieAlgError::Invalid(format!(
                "family {} takes {} parameters ({}), got {}",
                family.name(),
                names.len(),
                names.join(","),
                vals.len()
            )));
        }
        let v = |i: usize| vals[i].clone();
        Ok(match family {
            Family::A1 => FamilyParams::A1 {
                lambda1: v(0),
                lambda2: v(1),
                lambda3: v(2),
            },
            Family::A2 => FamilyParams::A2 {
                lambda1: v(0),
                lambda2: v(1),
            },
            Family::A3 => FamilyParams::A3 {
                lambda: v(0),
                lambda1: v(1),
            },
            Family::A4 => FamilyParams::A4 {
                alpha: v(0),
                beta: v(1),
                lambda3: v(2),
            },
            Family::NA => FamilyParams::NA {
                lambda: v(0),
                mu: v(1),
                t: v(2),
            },
            Family::NB => FamilyParams::NB {
                p: v(0),
                q: v(1),
                s: v(2),
                t: v(3),
            },
            Family::NC1 => FamilyParams::NC1 {
                p: v(0),
                q: v(1),
                s: v(2),
            },
            Family::NC2 => FamilyParams::NC2 {
                p: v(0),
                q: v(1),
                r: v(2),
            },
        })
    }

    /// Check the family's parameter constraints.
    pub fn validate(&self) -> Result<(), LieAlgError> {
        let fail = |constraint: &str| {
            Err(LieAlgError::ConstraintViolation {
                family: self.family().name().into(),
                constraint: constraint.into(),
            })
        };
        match self {
            FamilyParams::A1 { .. } | FamilyParams::A2 { .. } | FamilyParams::A3 { .. } => Ok(()),
            FamilyParams::A4 { beta, .. } => {
                if beta.sign().is_zero() {
                    return fail("beta != 0");
                }
                Ok(())
            }
            FamilyParams::NA { lambda, mu, t } => {
                if t.sign().is_zero() {
                    return fail("sin(phi) != 0 (t != 0)");
                }
                if lambda.sign().is_negative() {
                    return fail("lambda >= 0");
                }
                if mu.sign().is_negative() {
                    return fail("mu >= 0");
                }
                if (lambda.clone() + mu.clone()).sign().is_zero() {
                    return fail("lambda + mu != 0");
                }
                Ok(())
            }
            FamilyParams::NB { q, t, .. } => {
                if (q.clone() - t.clone()).sign().is_zero() {
                    return fail("q != t");
                }
                Ok(())
            }
            FamilyParams::NC1 { q, s, .. } => {
                if (q.clone() - s.clone()).sign().is_zero() {
                    return fail("q != s");
                }
                Ok(())
            }
            FamilyParams::NC2 { p, q, r } => {
                if q.sign().is_zero() {
                    return fail("q != 0");
                }
                if (p.clone() + r.clone()).sign().is_zero() {
                    return fail("p + r != 0");
                }
                Ok(())
            }
        }
    }
}

/// A Lie algebra with a fixed frame inner product.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra<S: Scalar> {
    pub sc: StructureConstants<S>,
    pub metric: FrameMetric<S>,
    pub params: Option<FamilyParams<S>>,
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// Entrywise transform of every stored scalar (structure constants,
    /// gram matrix, family parameters).
    pub fn map_scalars(&self, mut f: impl FnMut(&S) -> S) -> MetricLieAlgebra<S> {
        let params = self.params.as_ref().map(|p| {
            let vals: Vec<S> = p.values().iter().map(&mut f).collect();
            FamilyParams::from_values(p.family(), &vals).expect("same arity")
        });
        MetricLieAlgebra {
            sc: self.sc.map_scalars(&mut f),
            metric: FrameMetric {
                gram: self.metric.gram.map(&mut f),
            },
            params,
        }
    }
}

/// Build a catalog algebra from family parameters.
pub fn build<S: Scalar>(params: FamilyParams<S>) -> Result<MetricLieAlgebra<S>, LieAlgError> {
    params.validate()?;
    let one = S::one;
    let zero = S::zero;
    let (b12, b13, b23, gram): ([S; 3], [S; 3], [S; 3], Mat3<S>) = match &params {
        FamilyParams::A1 {
            lambda1,
            lambda2,
            lambda3,
        } => (
            [zero(), zero(), lambda3.clone()],
            [zero(), -lambda2.clone(), zero()],
            [lambda1.clone(), zero(), zero()],
            Mat3::diag(-one(), one(), one()),
        ),
        FamilyParams::A2 { lambda1, lambda2 } => (
            [zero(), -one(), one() - lambda2.clone()],
            [zero(), -(one() + lambda2.clone()), one()],
            [lambda1.clone(), zero(), zero()],
            Mat3::diag(one(), one(), -one()),
        ),
        FamilyParams::A3 { lambda, lambda1 } => (
            [one(), zero(), -lambda.clone()],
            [-one(), -lambda.clone(), zero()],
            [lambda1.clone(), one(), one()],
            Mat3::diag(one(), one(), -one()),
        ),
        FamilyParams::A4 {
            alpha,
            beta,
            lambda3,
        } => (
            [zero(), zero(), lambda3.clone()],
            [-beta.clone(), -alpha.clone(), zero()],
            [-alpha.clone(), beta.clone(), zero()],
            Mat3::diag(-one(), one(), one()),
        ),
        FamilyParams::NA { lambda, mu, t } => {
            // sin(phi) = 2t/(1+t^2), cos(phi) = (1-t^2)/(1+t^2).
            let t2 = t.clone() * t.clone();
            let den = (one() + t2.clone()).recip().expect("1 + t^2 > 0");
            let sin_phi = S::from_int(2) * t.clone() * den.clone();
            let cos_phi = (one() - t2) * den;
            (
                [zero(), zero(), zero()],
                [
                    lambda.clone() * sin_phi.clone(),
                    -(mu.clone() * cos_phi.clone()),
                    zero(),
                ],
                [lambda.clone() * cos_phi, mu.clone() * sin_phi, zero()],
                Mat3::diag(one(), one(), -one()),
            )
        }
        FamilyParams::NB { p, q, s, t } => (
            [zero(), zero(), zero()],
            [t.clone(), -s.clone(), zero()],
            [p.clone(), q.clone(), zero()],
            {
                let mut g = Mat3::zero();
                g.m[0][2] = -one();
                g.m[2][0] = -one();
                g.m[1][1] = one();
                g
            },
        ),
        FamilyParams::NC1 { p, q, s } => (
            [zero(), zero(), zero()],
            [s.clone(), p.clone(), zero()],
            [p.clone(), q.clone(), zero()],
            Mat3::diag(one(), -one(), one()),
        ),
        FamilyParams::NC2 { p, q, r } => (
            [zero(), zero(), zero()],
            [q.clone(), -r.clone(), zero()],
            [p.clone(), q.clone(), zero()],
            Mat3::diag(one(), -one(), one()),
        ),
    };
    let sc = StructureConstants::from_upper(b12, b13, b23);
    debug_assert!(check_jacobi(&sc));
    Ok(MetricLieAlgebra {
        sc,
        metric: FrameMetric::new(gram).expect("catalog metrics are Lorentzian"),
        params: Some(params),
    })
}

/// Build a free (non-catalog) algebra, gated by Jacobi and signature.
pub fn build_free<S: Scalar>(
    sc: StructureConstants<S>,
    gram: Mat3<S>,
) -> Result<MetricLieAlgebra<S>, LieAlgError> {
    if !check_jacobi(&sc) {
        return Err(LieAlgError::JacobiViolation);
    }
    Ok(MetricLieAlgebra {
        sc,
        metric: FrameMetric::new(gram)?,
        params: None,
    })
}

// ---------------------------------------------------------------------------
// Unimodular type lookup
// ---------------------------------------------------------------------------

/// The six 3D unimodular Lie algebra types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieAlgebraType {
    Su2,
    Sl2R,
    E2,
    E11,
    Heisenberg,
    R3,
}

impl LieAlgebraType {
    pub fn name(self) -> &'static str {
        match self {
            LieAlgebraType::Su2 => "su(2)",
            LieAlgebraType::Sl2R => "sl(2,R)",
            LieAlgebraType::E2 => "e(2)",
            LieAlgebraType::E11 => "e(1,1)",
            LieAlgebraType::Heisenberg => "h",
            LieAlgebraType::R3 => "R^3",
        }
    }

    /// Structure-constant restrictions per unimodular family; `-` marks an
    /// impossible (type, family) cell.
    pub fn restrictions(self) -> [&'static str; 4] {
        match self {
            LieAlgebraType::Su2 => ["(+,+,+)", "-", "-", "-"],
            LieAlgebraType::Sl2R => [
                "(+,+,-)",
                "lambda1 != 0, lambda2 != 0",
                "lambda != 0",
                "lambda3 != 0",
            ],
            LieAlgebraType::E2 => ["(+,+,0)", "-", "-", "-"],
            LieAlgebraType::E11 => [
                "(+,-,0)",
                "lambda1 = 0, lambda2 != 0 or lambda1 != 0, lambda2 = 0",
                "lambda = 0",
                "lambda3 = 0",
            ],
            LieAlgebraType::Heisenberg => ["(+,0,0)", "lambda1 = 0, lambda2 = 0", "-", "-"],
            LieAlgebraType::R3 => ["(0,0,0)", "-", "-", "-"],
        }
    }
}

impl std::fmt::Display for LieAlgebraType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Type of an A1 algebra from the signs of its structure constant triple,
/// canonicalized up to reordering and a global sign flip.
pub fn a1_type_from_signs(signs: [Sign; 3]) -> LieAlgebraType {
    let pos = signs.iter().filter(|s| s.is_positive()).count();
    let neg = signs.iter().filter(|s| s.is_negative()).count();
    match (pos + neg, pos.min(neg) == 0) {
        (3, true) => LieAlgebraType::Su2,
        (3, false) => LieAlgebraType::Sl2R,
        (2, true) => LieAlgebraType::E2,
        (2, false) => LieAlgebraType::E11,
        (1, _) => LieAlgebraType::Heisenberg,
        _ => LieAlgebraType::R3,
    }
}

/// Unimodular type of an A1..A4 parameter set.
pub fn unimodular_type<S: Scalar>(params: &FamilyParams<S>) -> Result<LieAlgebraType, LieAlgError> {
    match params {
        FamilyParams::A1 {
            lambda1,
            lambda2,
            lambda3,
        } => Ok(a1_type_from_signs([
            lambda1.sign(),
            lambda2.sign(),
            lambda3.sign(),
        ])),
        FamilyParams::A2 { lambda1, lambda2 } => {
            let z1 = lambda1.sign().is_zero();
            let z2 = lambda2.sign().is_zero();
            Ok(match (z1, z2) {
                (false, false) => LieAlgebraType::Sl2R,
                (true, true) => LieAlgebraType::Heisenberg,
                _ => LieAlgebraType::E11,
            })
        }
        FamilyParams::A3 { lambda, .. } => Ok(if lambda.sign().is_zero() {
            LieAlgebraType::E11
        } else {
            LieAlgebraType::Sl2R
        }),
        FamilyParams::A4 { lambda3, .. } => Ok(if lambda3.sign().is_zero() {
            LieAlgebraType::E11
        } else {
            LieAlgebraType::Sl2R
        }),
        other => Err(LieAlgError::NotUnimodular(other.family().name().into())),
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Per-parameter closed sampling ranges.
#[derive(Clone, Debug)]
pub struct ParamRanges {
    pub ranges: BTreeMap<String, (f64, f64)>,
    pub default: (f64, f64),
}

impl Default for ParamRanges {
    fn default() -> ParamRanges {
        ParamRanges {
            ranges: BTreeMap::new(),
            default: (-3.0, 3.0),
        }
    }
}

impl ParamRanges {
    pub fn get(&self, name: &str) -> (f64, f64) {
        self.ranges.get(name).copied().unwrap_or(self.default)
    }
}

/// One unvalidated draw: each parameter is a rational with denominator
/// `denom` inside its range, so the whole pipeline stays exact when `S` is
/// the rational backend.
pub fn draw_params<S: Scalar>(
    family: Family,
    ranges: &ParamRanges,
    rng: &mut ChaCha8Rng,
    denom: i64,
) -> Result<FamilyParams<S>, LieAlgError> {
    let mut vals = Vec::new();
    for name in family.param_names() {
        let (lo, hi) = ranges.get(name);
        if !(lo <= hi) {
            return Err(LieAlgError::EmptyRange {
                family: family.name().into(),
                param: (*name).into(),
            });
        }
        let lo_n = (lo * denom as f64).ceil() as i64;
        let hi_n = (hi * denom as f64).floor() as i64;
        if lo_n > hi_n {
            return Err(LieAlgError::EmptyRange {
                family: family.name().into(),
                param: (*name).into(),
            });
        }
        let n = rng.random_range(lo_n..=hi_n);
        vals.push(S::from_fraction(n, denom));
    }
    FamilyParams::from_values(family, &vals)
}

/// Deterministic constrained sample: rejection-sample until the family
/// constraints hold.
pub fn sample<S: Scalar>(
    family: Family,
    ranges: &ParamRanges,
    rng: &mut ChaCha8Rng,
    denom: i64,
) -> Result<FamilyParams<S>, LieAlgError> {
    for _ in 0..64 {
        let params = draw_params::<S>(family, ranges, rng, denom)?;
        if params.validate().is_ok() {
            return Ok(params);
        }
    }
    Err(LieAlgError::EmptyRange {
        family: family.name().into(),
        param: "constraints".into(),
    })
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

impl<S: JsonScalar> MetricLieAlgebra<S> {
    pub fn to_json(&self) -> Value {
        let brackets: Vec<Value> = [(0usize, 1usize), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| {
                let b = self.sc.bracket(i, j);
                json!({
                    "i": i + 1,
                    "j": j + 1,
                    "coeffs": [b[0].to_json_value(), b[1].to_json_value(), b[2].to_json_value()],
                })
            })
            .collect();
        let mut obj = json!({
            "gram": mat3_to_json(&self.metric.gram),
            "brackets": brackets,
        });
        if let Some(params) = &self.params {
            obj["family"] = Value::String(params.family().name().into());
            let mut map = serde_json::Map::new();
            for (name, v) in params.family().param_names().iter().zip(params.values()) {
                map.insert((*name).into(), v.to_json_value());
            }
            obj["params"] = Value::Object(map);
        } else {
            obj["family"] = Value::String("free".into());
        }
        obj
    }

    pub fn from_json(v: &Value) -> Result<MetricLieAlgebra<S>, LieAlgError> {
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| LieAlgError::Invalid("missing field `family`".into()))?;
        if family != "free" {
            let fam = Family::parse(family)
                .ok_or_else(|| LieAlgError::Invalid(format!("unknown family `{family}`")))?;
            let pmap = v
                .get("params")
                .and_then(Value::as_object)
                .ok_or_else(|| LieAlgError::Invalid("missing field `params`".into()))?;
            let mut vals = Vec::new();
            for name in fam.param_names() {
                let raw = pmap
                    .get(*name)
                    .ok_or_else(|| LieAlgError::Invalid(format!("missing param `{name}`")))?;
                let val = S::from_json_value(raw)
                    .ok_or_else(|| LieAlgError::Invalid(format!("bad value for `{name}`")))?;
                vals.push(val);
            }
            return build(FamilyParams::from_values(fam, &vals)?);
        }
        let gram = v
            .get("gram")
            .and_then(mat3_from_json::<S>)
            .ok_or_else(|| LieAlgError::Invalid("missing or malformed `gram`".into()))?;
        let brackets = v
            .get("brackets")
            .and_then(Value::as_array)
            .ok_or_else(|| LieAlgError::Invalid("missing `brackets`".into()))?;
        let mut upper: [[S; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for b in brackets {
            let i = b.get("i").and_then(Value::as_u64).unwrap_or(0);
            let j = b.get("j").and_then(Value::as_u64).unwrap_or(0);
            let idx = match (i, j) {
                (1, 2) => 0,
                (1, 3) => 1,
                (2, 3) => 2,
                _ => {
                    return Err(LieAlgError::Invalid(format!(
                        "bracket indices must be (1,2), (1,3) or (2,3), got ({i},{j})"
                    )));
                }
            };
            let coeffs = b
                .get("coeffs")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 3)
                .ok_or_else(|| {
                    LieAlgError::Invalid("bracket `coeffs` must have 3 entries".into())
                })?;
            for (k, c) in coeffs.iter().enumerate() {
                upper[idx][k] = S::from_json_value(c)
                    .ok_or_else(|| LieAlgError::Invalid("bad bracket coefficient".into()))?;
            }
        }
        let sc =
            StructureConstants::from_upper(upper[0].clone(), upper[1].clone(), upper[2].clone());
        build_free(sc, gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Rat;
    use rand::SeedableRng;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn a2_brackets_match_catalog() {
        // A2(2, 1): [e1,e2] = -e2, [e1,e3] = e3 - 2*e2, [e2,e3] = 2*e1;
        // gram = diag(1,1,-1).
        let alg = build(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: r(1),
        })
        .unwrap();
        assert_eq!(alg.sc.bracket(0, 1), [r(0), r(-1), r(0)]);
        assert_eq!(alg.sc.bracket(0, 2), [r(0), r(-2), r(1)]);
        assert_eq!(alg.sc.bracket(1, 2), [r(2), r(0), r(0)]);
        assert_eq!(alg.metric.gram, Mat3::diag(r(1), r(1), r(-1)));
    }

    #[test]
    fn a1_zero_is_abelian() {
        let alg = build(FamilyParams::A1 {
            lambda1: r(0),
            lambda2: r(0),
            lambda3: r(0),
        })
        .unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(alg.sc.bracket(i, j), [r(0), r(0), r(0)]);
        }
    }

    #[test]
    fn nb_brackets_and_null_gram() {
        // q != t required; [e1,e3] = t e1 - s e2, [e2,e3] = p e1 + q e2.
        let alg = build(FamilyParams::NB {
            p: r(1),
            q: r(2),
            s: r(0),
            t: r(1),
        })
        .unwrap();
        assert_eq!(alg.sc.bracket(0, 2), [r(1), r(0), r(0)]);
        assert_eq!(alg.sc.bracket(1, 2), [r(1), r(2), r(0)]);
        let g = &alg.metric.gram;
        assert_eq!(g.m[0][2], r(-1));
        assert_eq!(g.m[1][1], r(1));
        assert_eq!(g.m[0][0], r(0));
        assert!(g.det().sign().is_negative());
    }

    #[test]
    fn constraint_violations_are_named() {
        let err = build(FamilyParams::A4 {
            alpha: r(1),
            beta: r(0),
            lambda3: r(2),
        })
        .unwrap_err();
        match err {
            LieAlgError::ConstraintViolation { family, constraint } => {
                assert_eq!(family, "A4");
                assert!(constraint.contains("beta"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(
            build(FamilyParams::NB {
                p: r(1),
                q: r(2),
                s: r(0),
                t: r(2)
            })
            .is_err()
        );
        assert!(
            build(FamilyParams::NC2 {
                p: r(1),
                q: r(0),
                r: r(1)
            })
            .is_err()
        );
        assert!(
            build(FamilyParams::NA {
                lambda: r(1),
                mu: r(-1),
                t: r(1)
            })
            .is_err()
        );
    }

    #[test]
    fn jacobi_catalog_and_counterexample() {
        let alg = build(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: r(1),
        })
        .unwrap();
        assert!(check_jacobi(&alg.sc));
        // [e1,e2]=e3, [e1,e3]=e2, [e2,e3]=e1 satisfies Jacobi.
        let sc = StructureConstants::from_upper(
            [r(0), r(0), r(1)],
            [r(0), r(1), r(0)],
            [r(1), r(0), r(0)],
        );
        assert!(check_jacobi(&sc));
        // [e1,e2]=e1+e2, [e1,e3]=0, [e2,e3]=e3 fails: the cyclic sum is e3,
        // by direct expansion of [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2].
        let bad = StructureConstants::from_upper(
            [r(1), r(1), r(0)],
            [r(0), r(0), r(0)],
            [r(0), r(0), r(1)],
        );
        assert!(!check_jacobi(&bad));
    }

    #[test]
    fn every_family_is_a_lie_algebra_with_lorentz_gram() {
        let samples: Vec<FamilyParams<Rat>> = vec![
            FamilyParams::A1 {
                lambda1: r(1),
                lambda2: r(-2),
                lambda3: r(3),
            },
            FamilyParams::A2 {
                lambda1: r(-1),
                lambda2: r(2),
            },
            FamilyParams::A3 {
                lambda: r(2),
                lambda1: r(-3),
            },
            FamilyParams::A4 {
                alpha: r(1),
                beta: r(2),
                lambda3: r(-1),
            },
            FamilyParams::NA {
                lambda: r(1),
                mu: r(2),
                t: Rat::new(1, 2),
            },
            FamilyParams::NB {
                p: r(1),
                q: r(2),
                s: r(-1),
                t: r(0),
            },
            FamilyParams::NC1 {
                p: r(1),
                q: r(2),
                s: r(-1),
            },
            FamilyParams::NC2 {
                p: r(1),
                q: r(2),
                r: r(3),
            },
        ];
        for params in samples {
            let alg = build(params.clone()).unwrap();
            assert!(check_jacobi(&alg.sc), "jacobi fails for {params:?}");
            assert!(alg.metric.gram.det().sign().is_negative());
            let (pos, neg) = eigenvalue_signs(&alg.metric.gram);
            assert_eq!((pos, neg), (2, 1), "signature wrong for {params:?}");
        }
    }

    #[test]
    fn a4_is_unimodular_all_ad_traceless() {
        let alg = build(FamilyParams::A4 {
            alpha: r(2),
            beta: r(1),
            lambda3: r(3),
        })
        .unwrap();
        for i in 0..3 {
            assert!(alg.sc.ad_trace(i).sign().is_zero());
        }
    }

    #[test]
    fn table_lookup_rows() {
        assert_eq!(
            a1_type_from_signs([Sign::Positive, Sign::Positive, Sign::Positive]),
            LieAlgebraType::Su2
        );
        assert_eq!(
            a1_type_from_signs([Sign::Positive, Sign::Negative, Sign::Zero]),
            LieAlgebraType::E11
        );
        assert_eq!(
            unimodular_type(&FamilyParams::A1 {
                lambda1: r(1),
                lambda2: r(2),
                lambda3: r(3)
            })
            .unwrap(),
            LieAlgebraType::Su2
        );
        assert_eq!(
            unimodular_type(&FamilyParams::A2 {
                lambda1: r(0),
                lambda2: r(0)
            })
            .unwrap(),
            LieAlgebraType::Heisenberg
        );
        assert_eq!(
            unimodular_type(&FamilyParams::A3 {
                lambda: r(0),
                lambda1: r(7)
            })
            .unwrap(),
            LieAlgebraType::E11
        );
        assert!(matches!(
            unimodular_type(&FamilyParams::NB {
                p: r(0),
                q: r(1),
                s: r(0),
                t: r(0)
            }),
            Err(LieAlgError::NotUnimodular(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_respects_constraints() {
        let ranges = ParamRanges::default();
        let mut rng1 = ChaCha8Rng::seed_from_u64(1);
        let mut rng2 = ChaCha8Rng::seed_from_u64(1);
        let a: FamilyParams<Rat> = sample(Family::A2, &ranges, &mut rng1, 1000).unwrap();
        let b: FamilyParams<Rat> = sample(Family::A2, &ranges, &mut rng2, 1000).unwrap();
        assert_eq!(a, b);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p: FamilyParams<Rat> = sample(Family::A4, &ranges, &mut rng, 100).unwrap();
            if let FamilyParams::A4 { beta, .. } = &p {
                assert!(!beta.sign().is_zero());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p: FamilyParams<Rat> = sample(Family::NA, &ranges, &mut rng, 100).unwrap();
            p.validate().unwrap();
        }
    }

    #[test]
    fn empty_range_detected() {
        let mut ranges = ParamRanges::default();
        ranges.ranges.insert("beta".into(), (0.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let got: Result<FamilyParams<Rat>, _> = sample(Family::A4, &ranges, &mut rng, 100);
        assert!(matches!(got, Err(LieAlgError::EmptyRange { .. })));
    }

    #[test]
    fn json_round_trip() {
        let alg = build::<Rat>(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: Rat::new(1, 3),
        })
        .unwrap();
        let v = alg.to_json();
        let back = MetricLieAlgebra::<Rat>::from_json(&v).unwrap();
        assert_eq!(back.params, alg.params);
        assert!(back.metric.gram.num_eq(&alg.metric.gram));
        // Free algebra round trip.
        let free = build_free(alg.sc.clone(), Mat3::diag(r(1), r(1), r(-1))).unwrap();
        let v2 = free.to_json();
        let back2 = MetricLieAlgebra::<Rat>::from_json(&v2).unwrap();
        assert!(back2.metric.gram.num_eq(&free.metric.gram));
        assert_eq!(back2.sc, free.sc);
    }
}
