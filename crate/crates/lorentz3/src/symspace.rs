//! Curvature operators of the locally symmetric catalog: space forms,
//! direct products with one curved factor, and the plane-wave-like
//! coordinate metric
//!
//! ```text
//!     g = [[0, 0, 1], [0, eps, 0], [1, 0, f]],   f = alpha*u2^2 + u2*beta(u3) + xi(u3),
//! ```
//!
//! with `eps = ±1` and polynomial `beta`, `xi`. For the latter the operator
//! is also computed from scratch in coordinates (metric inverse,
//! Christoffel symbols, curvature tensor, bivector gram at the point) as an
//! independent oracle; the operator matrix must come out point-independent
//! and equal to the closed form with the single `alpha/eps` entry.
//!
//! The bivector basis for the coordinate chart is the coordinate one
//! (d1^d2, d1^d3, d2^d3). A pseudo-orthonormalized frame cannot reproduce
//! the single-entry matrix: with a diagonal bivector gram, `gram2 * K`
//! symmetric forces the (3,1) entry to match the (1,3) one, so the closed
//! form is self-adjoint only against the non-diagonal coordinate gram.

use serde_json::{Value, json};

use crate::curvature::{CurvatureOperator, LAMBDA2_PAIRS};
use crate::error::LieAlgError;
use crate::jsonio::JsonScalar;
use crate::kernel::{Mat3, Poly, Scalar, Sign};

/// Direct products with exactly one curved two-dimensional factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    /// R x S^2_1: curved Lorentzian factor, positive curvature.
    RxS21,
    /// R x H^2_1: curved Lorentzian factor, negative curvature.
    RxH21,
    /// S^2 x R_1: curved Riemannian factor, positive curvature.
    S2xR1,
    /// H^2 x R_1: curved Riemannian factor, negative curvature.
    H2xR1,
}

impl ProductKind {
    pub fn name(self) -> &'static str {
        match self {
            ProductKind::RxS21 => "RxS2_1",
            ProductKind::RxH21 => "RxH2_1",
            ProductKind::S2xR1 => "S2xR_1",
            ProductKind::H2xR1 => "H2xR_1",
        }
    }

    pub fn parse(s: &str) -> Option<ProductKind> {
        match s {
            "RxS2_1" => Some(ProductKind::RxS21),
            "RxH2_1" => Some(ProductKind::RxH21),
            "S2xR_1" => Some(ProductKind::S2xR1),
            "H2xR_1" => Some(ProductKind::H2xR1),
            _ => None,
        }
    }

    fn curvature_sign(self) -> Sign {
        match self {
            ProductKind::RxS21 | ProductKind::S2xR1 => Sign::Positive,
            ProductKind::RxH21 | ProductKind::H2xR1 => Sign::Negative,
        }
    }
}

/// One entry of the locally symmetric catalog.
#[derive(Clone, Debug, PartialEq)]
pub enum SymmetricSpaceSpec<S: Scalar> {
    /// Constant sectional curvature `c` (R^3_1, S^3_1 or H^3_1 by sign).
    SpaceForm { c: S },
    /// Product with one curved factor of constant curvature `c != 0`.
    Product { kind: ProductKind, c: S },
    /// The coordinate metric above.
    PlaneWave {
        epsilon: i8,
        alpha: S,
        beta: Poly<S>,
        xi: Poly<S>,
    },
}

impl<S: Scalar> SymmetricSpaceSpec<S> {
    pub fn validate(&self) -> Result<(), LieAlgError> {
        match self {
            SymmetricSpaceSpec::SpaceForm { .. } => Ok(()),
            SymmetricSpaceSpec::Product { kind, c } => {
                if c.sign() != kind.curvature_sign() {
                    return Err(LieAlgError::Invalid(format!(
                        "product {} needs a curved factor with {} curvature",
                        kind.name(),
                        match kind.curvature_sign() {
                            Sign::Positive => "positive",
                            _ => "negative",
                        }
                    )));
                }
                Ok(())
            }
            SymmetricSpaceSpec::PlaneWave { epsilon, .. } => {
                if *epsilon != 1 && *epsilon != -1 {
                    return Err(LieAlgError::Invalid("epsilon must be +1 or -1".into()));
                }
                Ok(())
            }
        }
    }

    pub fn kind_name(&self) -> String {
        match self {
            SymmetricSpaceSpec::SpaceForm { c } => match c.sign() {
                Sign::Zero => "R3_1".into(),
                Sign::Positive => "S3_1".into(),
                Sign::Negative => "H3_1".into(),
            },
            SymmetricSpaceSpec::Product { kind, .. } => kind.name().into(),
            SymmetricSpaceSpec::PlaneWave { .. } => "plane_wave".into(),
        }
    }
}

/// Closed-form operator of a locally symmetric space.
///
/// Space forms give `c * I` on a pseudo-orthonormal frame, products a
/// diagonal operator whose only nonzero entry is the curved factor's
/// curvature placed at that factor's plane, and the plane-wave metric the
/// single `alpha/eps` entry at (1,3) in the coordinate bivector basis.
pub fn symmetric_operator<S: Scalar>(spec: &SymmetricSpaceSpec<S>) -> CurvatureOperator<S> {
    let one = S::one;
    let orthonormal_gram2 = || Mat3::diag(one(), -one(), -one());
    match spec {
        SymmetricSpaceSpec::SpaceForm { c } => CurvatureOperator {
            k: Mat3::diag(c.clone(), c.clone(), c.clone()),
            gram2: orthonormal_gram2(),
        },
        SymmetricSpaceSpec::Product { kind, c } => {
            let k = match kind {
                // Curved Riemannian factor spans (e1, e2): plane e1^e2.
                ProductKind::S2xR1 | ProductKind::H2xR1 => {
                    Mat3::diag(c.clone(), S::zero(), S::zero())
                }
                // Curved Lorentzian factor spans (e2, e3): plane e2^e3.
                ProductKind::RxS21 | ProductKind::RxH21 => {
                    Mat3::diag(S::zero(), S::zero(), c.clone())
                }
            };
            CurvatureOperator {
                k,
                gram2: orthonormal_gram2(),
            }
        }
        SymmetricSpaceSpec::PlaneWave {
            epsilon, alpha, xi, ..
        } => {
            let eps = S::from_int(*epsilon as i64);
            let mut k = Mat3::zero();
            k.m[0][2] = alpha.clone() / eps.clone();
            // Coordinate bivector gram at the origin (f(0,0) = xi(0)).
            let f0 = xi.eval(&S::zero());
            CurvatureOperator {
                k,
                gram2: plane_wave_gram2(&eps, &f0),
            }
        }
    }
}

fn plane_wave_gram2<S: Scalar>(eps: &S, f: &S) -> Mat3<S> {
    let mut g2 = Mat3::zero();
    g2.m[0][2] = -eps.clone();
    g2.m[2][0] = -eps.clone();
    g2.m[1][1] = -S::one();
    g2.m[2][2] = eps.clone() * f.clone();
    g2
}

// ---------------------------------------------------------------------------
// Coordinate-chart oracle
// ---------------------------------------------------------------------------

/// A point `(u1, u2, u3)` of the coordinate chart.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinatePoint<S: Scalar>(pub [S; 3]);

/// Bivariate polynomial in `(u2, u3)`: coefficient `i` multiplies `u2^i`
/// and is itself a polynomial in `u3`.
#[derive(Clone, Debug, PartialEq)]
struct Poly2<S: Scalar> {
    cu2: Vec<Poly<S>>,
}

impl<S: Scalar> Poly2<S> {
    fn zero() -> Poly2<S> {
        Poly2 { cu2: vec![] }
    }

    fn constant(c: S) -> Poly2<S> {
        Poly2 {
            cu2: vec![Poly::constant(c)],
        }
    }

    fn normalize(mut self) -> Poly2<S> {
        while self.cu2.last().map(|p| p.is_zero()).unwrap_or(false) {
            self.cu2.pop();
        }
        self
    }

    fn coeff(&self, i: usize) -> Poly<S> {
        self.cu2.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    fn add(&self, other: &Poly2<S>) -> Poly2<S> {
        let n = self.cu2.len().max(other.cu2.len());
        Poly2 {
            cu2: (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        }
        .normalize()
    }

    fn sub(&self, other: &Poly2<S>) -> Poly2<S> {
        let n = self.cu2.len().max(other.cu2.len());
        Poly2 {
            cu2: (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        }
        .normalize()
    }

    fn mul(&self, other: &Poly2<S>) -> Poly2<S> {
        if self.cu2.is_empty() || other.cu2.is_empty() {
            return Poly2::zero();
        }
        let mut cu2 = vec![Poly::zero(); self.cu2.len() + other.cu2.len() - 1];
        for (i, a) in self.cu2.iter().enumerate() {
            for (j, b) in other.cu2.iter().enumerate() {
                cu2[i + j] = cu2[i + j].add(&a.mul(b));
            }
        }
        Poly2 { cu2 }.normalize()
    }

    fn scale(&self, k: &S) -> Poly2<S> {
        Poly2 {
            cu2: self.cu2.iter().map(|p| p.scale(k)).collect(),
        }
        .normalize()
    }

    fn d_du2(&self) -> Poly2<S> {
        if self.cu2.len() <= 1 {
            return Poly2::zero();
        }
        Poly2 {
            cu2: self
                .cu2
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, p)| p.scale(&S::from_int(i as i64)))
                .collect(),
        }
        .normalize()
    }

    fn d_du3(&self) -> Poly2<S> {
        Poly2 {
            cu2: self.cu2.iter().map(|p| p.derivative()).collect(),
        }
        .normalize()
    }

    fn eval(&self, u2: &S, u3: &S) -> S {
        let mut acc = S::zero();
        for p in self.cu2.iter().rev() {
            acc = acc * u2.clone() + p.eval(u3);
        }
        acc
    }
}

/// Operator of the plane-wave metric computed from scratch in coordinates
/// at the point `p`: metric matrix, inverse, Christoffel symbols from the
/// closed-form partials of `f`, curvature tensor in the
/// `R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z` convention, bivector
/// gram at `p`, operator matrix. Everything is carried symbolically in
/// `(u2, u3)` so rational input stays exact.
pub fn coordinate_curvature_operator<S: Scalar>(
    spec: &SymmetricSpaceSpec<S>,
    point: &CoordinatePoint<S>,
) -> CurvatureOperator<S> {
    let SymmetricSpaceSpec::PlaneWave {
        epsilon,
        alpha,
        beta,
        xi,
    } = spec
    else {
        panic!("coordinate_curvature_operator expects a plane-wave spec");
    };
    let eps = S::from_int(*epsilon as i64);
    // f(u2, u3) = alpha*u2^2 + u2*beta(u3) + xi(u3)
    let f = Poly2 {
        cu2: vec![xi.clone(), beta.clone(), Poly::constant(alpha.clone())],
    }
    .normalize();

    // Metric and its inverse (det g = -eps, constant).
    let zero = Poly2::<S>::zero;
    let mut g: [[Poly2<S>; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
    g[0][2] = Poly2::constant(S::one());
    g[2][0] = Poly2::constant(S::one());
    g[1][1] = Poly2::constant(eps.clone());
    g[2][2] = f;

    let det = det3(&g);
    // Constant determinant: verify and invert by the adjugate.
    assert!(det.cu2.len() == 1 && det.coeff(0).degree() == Some(0));
    let det_inv = det.coeff(0).coeff(0).recip().expect("nondegenerate metric");
    let mut ginv: [[Poly2<S>; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
    #[allow(clippy::needless_range_loop)]
    for i in 0..3 {
        for j in 0..3 {
            ginv[i][j] = cofactor3(&g, j, i).scale(&det_inv);
        }
    }

    // Partial derivatives: nothing depends on u1.
    let d = |m: &Poly2<S>, dir: usize| -> Poly2<S> {
        match dir {
            0 => Poly2::zero(),
            1 => m.d_du2(),
            _ => m.d_du3(),
        }
    };

    // Lower Christoffel symbols, then raise.
    let half = S::from_fraction(1, 2);
    let mut gamma: [[[Poly2<S>; 3]; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| zero())));
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut lower_sum = Poly2::zero();
                for l in 0..3 {
                    let low = d(&g[j][l], i).add(&d(&g[i][l], j)).sub(&d(&g[i][j], l));
                    lower_sum = lower_sum.add(&ginv[k][l].mul(&low));
                }
                gamma[i][j][k] = lower_sum.scale(&half);
            }
        }
    }

    // R^l_{ijk} = d_j Gamma^l_{ik} - d_i Gamma^l_{jk}
    //           + Gamma^m_{ik} Gamma^l_{jm} - Gamma^m_{jk} Gamma^l_{im}.
    let riem = |i: usize, j: usize, k: usize, l: usize| -> Poly2<S> {
        let mut acc = d(&gamma[i][k][l], j).sub(&d(&gamma[j][k][l], i));
        for m in 0..3 {
            acc = acc.add(&gamma[i][k][m].mul(&gamma[j][m][l]));
            acc = acc.sub(&gamma[j][k][m].mul(&gamma[i][m][l]));
        }
        acc
    };

    let (u2, u3) = (&point.0[1], &point.0[2]);
    let ev = |m: &Poly2<S>| m.eval(u2, u3);

    // R4 and the bivector gram, evaluated at the point.
    let gp = Mat3::from_fn(|i, j| ev(&g[i][j]));
    let r4 = |i: usize, j: usize, k: usize, l: usize| -> S {
        let mut acc = S::zero();
        for m in 0..3 {
            acc = acc + ev(&riem(i, j, k, m)) * gp.m[m][l].clone();
        }
        acc
    };
    let rhat = Mat3::from_fn(|a, b| {
        let (a1, a2) = LAMBDA2_PAIRS[a];
        let (b1, b2) = LAMBDA2_PAIRS[b];
        r4(a1, a2, b1, b2)
    });
    let gram2 = Mat3::from_fn(|a, b| {
        let (a1, a2) = LAMBDA2_PAIRS[a];
        let (b1, b2) = LAMBDA2_PAIRS[b];
        gp.m[a1][b1].clone() * gp.m[a2][b2].clone() - gp.m[a1][b2].clone() * gp.m[a2][b1].clone()
    });
    let k = gram2
        .inverse()
        .expect("nondegenerate bivector gram")
        .mul(&rhat);
    CurvatureOperator { k, gram2 }
}

fn cofactor3<S: Scalar>(m: &[[Poly2<S>; 3]; 3], i: usize, j: usize) -> Poly2<S> {
    let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
    let minor = m[rows[0]][cols[0]]
        .mul(&m[rows[1]][cols[1]])
        .sub(&m[rows[0]][cols[1]].mul(&m[rows[1]][cols[0]]));
    if (i + j) % 2 == 0 {
        minor
    } else {
        minor.scale(&S::from_int(-1))
    }
}

fn det3<S: Scalar>(m: &[[Poly2<S>; 3]; 3]) -> Poly2<S> {
    let mut acc = Poly2::zero();
    for j in 0..3 {
        acc = acc.add(&m[0][j].mul(&cofactor3(m, 0, j)));
    }
    acc
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

impl<S: JsonScalar> SymmetricSpaceSpec<S> {
    pub fn to_json(&self) -> Value {
        match self {
            SymmetricSpaceSpec::SpaceForm { c } => json!({
                "kind": self.kind_name(),
                "c": c.to_json_value(),
            }),
            SymmetricSpaceSpec::Product { kind, c } => json!({
                "kind": kind.name(),
                "c": c.to_json_value(),
            }),
            SymmetricSpaceSpec::PlaneWave {
                epsilon,
                alpha,
                beta,
                xi,
            } => json!({
                "kind": "plane_wave",
                "epsilon": *epsilon as i64,
                "alpha": alpha.to_json_value(),
                "beta": beta.coeffs().iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
                "xi": xi.coeffs().iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<SymmetricSpaceSpec<S>, LieAlgError> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| LieAlgError::Invalid("missing field `kind`".into()))?;
        let scalar_field = |name: &str| -> Result<S, LieAlgError> {
            v.get(name)
                .and_then(S::from_json_value)
                .ok_or_else(|| LieAlgError::Invalid(format!("missing or bad field `{name}`")))
        };
        let poly_field = |name: &str| -> Result<Poly<S>, LieAlgError> {
            match v.get(name) {
                None | Some(Value::Null) => Ok(Poly::zero()),
                Some(Value::Array(a)) => {
                    let coeffs: Option<Vec<S>> = a.iter().map(S::from_json_value).collect();
                    coeffs.map(Poly::new).ok_or_else(|| {
                        LieAlgError::Invalid(format!("bad coefficients in `{name}`"))
                    })
                }
                Some(_) => Err(LieAlgError::Invalid(format!(
                    "field `{name}` must be an array"
                ))),
            }
        };
        let spec = match kind {
            "space_form" => SymmetricSpaceSpec::SpaceForm {
                c: scalar_field("c")?,
            },
            "R3_1" => {
                let c = v
                    .get("c")
                    .and_then(S::from_json_value)
                    .unwrap_or_else(S::zero);
                if !c.sign().is_zero() {
                    return Err(LieAlgError::Invalid("R3_1 requires c = 0".into()));
                }
                SymmetricSpaceSpec::SpaceForm { c }
            }
            "S3_1" => {
                let c = scalar_field("c")?;
                if !c.sign().is_positive() {
                    return Err(LieAlgError::Invalid("S3_1 requires c > 0".into()));
                }
                SymmetricSpaceSpec::SpaceForm { c }
            }
            "H3_1" => {
                let c = scalar_field("c")?;
                if !c.sign().is_negative() {
                    return Err(LieAlgError::Invalid("H3_1 requires c < 0".into()));
                }
                SymmetricSpaceSpec::SpaceForm { c }
            }
            "plane_wave" => {
                let eps = v
                    .get("epsilon")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| LieAlgError::Invalid("missing field `epsilon`".into()))?;
                SymmetricSpaceSpec::PlaneWave {
                    epsilon: eps as i8,
                    alpha: scalar_field("alpha")?,
                    beta: poly_field("beta")?,
                    xi: poly_field("xi")?,
                }
            }
            other => {
                let kind = ProductKind::parse(other).ok_or_else(|| {
                    LieAlgError::Invalid(format!("unknown symmetric space kind `{other}`"))
                })?;
                SymmetricSpaceSpec::Product {
                    kind,
                    c: scalar_field("c")?,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}
