//! Segre type classification of 3x3 operators.
//!
//! Four types according to the Jordan structure over the reals:
//! `{111}` diagonalizable with real spectrum, `{1zz}` one real eigenvalue
//! plus a conjugate complex pair, `{21}` a single 2x2 Jordan block, `{3}` a
//! single 3x3 Jordan block.
//!
//! The exact path is purely algebraic: the discriminant sign of the
//! characteristic cubic splits the distinct/complex cases, repeated roots
//! (always rational for a rational matrix) come from the square-free part,
//! and diagonalizability is decided by annihilation tests like `q(K) = 0`,
//! never by numeric eigenvectors. The floating path mirrors the same logic
//! with tolerance-clustered roots and tolerance-scaled annihilation tests.

use serde_json::{Value, json};

use crate::error::SegreError;
use crate::jsonio::JsonScalar;
use crate::kernel::{
    CubicRoots, Fl, ImPart, Mat3, Poly, RealNum, Scalar, cubic_root_data, mat_is_zero_scaled,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegreType {
    S111,
    S1zz,
    S21,
    S3,
}

impl SegreType {
    pub fn tag(self) -> &'static str {
        match self {
            SegreType::S111 => "{111}",
            SegreType::S1zz => "{1zz}",
            SegreType::S21 => "{21}",
            SegreType::S3 => "{3}",
        }
    }

    /// `{12}` is accepted as a synonym of `{21}`.
    pub fn parse(s: &str) -> Option<SegreType> {
        match s.trim() {
            "{111}" | "111" => Some(SegreType::S111),
            "{1zz}" | "1zz" | "{1zz̄}" => Some(SegreType::S1zz),
            "{21}" | "21" | "{12}" | "12" => Some(SegreType::S21),
            "{3}" | "3" => Some(SegreType::S3),
            _ => None,
        }
    }
}

impl std::fmt::Display for SegreType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Segre type plus eigenvalue data.
#[derive(Clone, Debug)]
pub enum SegreData<S: Scalar> {
    /// Diagonalizable, eigenvalues ascending (repeats adjacent).
    S111 { eigen: [S::Real; 3], cubic: Poly<S> },
    /// One real eigenvalue and a complex pair `re ± i*im`, `im > 0`.
    S1zz {
        real: S::Real,
        re: S::Real,
        im: ImPart<S>,
        cubic: Poly<S>,
    },
    /// One 2x2 Jordan block at `jordan`, a 1x1 block at `simple` (the two
    /// may coincide).
    S21 { simple: S, jordan: S },
    /// One 3x3 Jordan block.
    S3 { eigen: S },
}

impl<S: Scalar> SegreData<S> {
    pub fn segre_type(&self) -> SegreType {
        match self {
            SegreData::S111 { .. } => SegreType::S111,
            SegreData::S1zz { .. } => SegreType::S1zz,
            SegreData::S21 { .. } => SegreType::S21,
            SegreData::S3 { .. } => SegreType::S3,
        }
    }

    /// Largest tolerance tag across the data; `None` on the exact backend.
    pub fn tau(&self) -> Option<f64> {
        if S::EXACT {
            return None;
        }
        let mut tau: f64 = 0.0;
        let mut any = false;
        let mut upd = |t: Option<f64>| {
            if let Some(t) = t {
                tau = tau.max(t);
                any = true;
            }
        };
        match self {
            SegreData::S111 { cubic, .. } | SegreData::S1zz { cubic, .. } => {
                for c in cubic.coeffs() {
                    upd(c.tau());
                }
            }
            SegreData::S21 { simple, jordan } => {
                upd(simple.tau());
                upd(jordan.tau());
            }
            SegreData::S3 { eigen } => upd(eigen.tau()),
        }
        if any { Some(tau) } else { None }
    }

    /// Backend-aware structural equality.
    pub fn matches(&self, other: &SegreData<S>) -> bool {
        match (self, other) {
            (SegreData::S111 { eigen: a, .. }, SegreData::S111 { eigen: b, .. }) => {
                a.iter().zip(b).all(|(x, y)| x.num_eq_real(y))
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
            ) => ra.num_eq_real(rb) && ea.num_eq_real(eb) && im_eq::<S>(ia, ib),
            (
                SegreData::S21 {
                    simple: sa,
                    jordan: ja,
                },
                SegreData::S21 {
                    simple: sb,
                    jordan: jb,
                },
            ) => sa.num_eq(sb) && ja.num_eq(jb),
            (SegreData::S3 { eigen: a }, SegreData::S3 { eigen: b }) => a.num_eq(b),
            _ => false,
        }
    }
}

impl SegreData<Fl> {
    /// Re-tag every stored float with the tolerance `tau`.
    pub fn retag_tau(&self, tau: f64) -> SegreData<Fl> {
        let rp = |p: &Poly<Fl>| Poly::new(p.coeffs().iter().map(|c| c.retag_tau(tau)).collect());
        match self {
            SegreData::S111 { eigen, cubic } => SegreData::S111 {
                eigen: std::array::from_fn(|i| eigen[i].retag_tau(tau)),
                cubic: rp(cubic),
            },
            SegreData::S1zz {
                real,
                re,
                im,
                cubic,
            } => SegreData::S1zz {
                real: real.retag_tau(tau),
                re: re.retag_tau(tau),
                im: match im {
                    ImPart::Exact(v) => ImPart::Exact(v.retag_tau(tau)),
                    other => other.clone(),
                },
                cubic: rp(cubic),
            },
            SegreData::S21 { simple, jordan } => SegreData::S21 {
                simple: simple.retag_tau(tau),
                jordan: jordan.retag_tau(tau),
            },
            SegreData::S3 { eigen } => SegreData::S3 {
                eigen: eigen.retag_tau(tau),
            },
        }
    }
}

fn im_eq<S: Scalar>(a: &ImPart<S>, b: &ImPart<S>) -> bool {
    // Compare squares exactly when both sides carry exact data.
    let sq = |v: &ImPart<S>| -> Option<S> {
        match v {
            ImPart::Exact(x) => Some(x.clone() * x.clone()),
            ImPart::SqrtOf { radicand, .. } => Some(radicand.clone()),
            ImPart::Approx(_) => None,
        }
    };
    match (sq(a), sq(b)) {
        (Some(x), Some(y)) => x.num_eq(&y),
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
        }
    }
}

/// Classify the Segre type of a 3x3 operator.
pub fn classify<S: Scalar>(k: &Mat3<S>) -> SegreData<S> {
    let p = k.char_poly();
    let data = cubic_root_data(&p);
    let scale1 = k.max_abs_f64().max(1.0);
    let scale2 = scale1 * scale1;
    match data.roots {
        CubicRoots::OneRealPair { real, re, im } => SegreData::S1zz {
            real,
            re,
            im,
            cubic: p,
        },
        CubicRoots::ThreeReal(rs) => {
            let groups = {
                let mut out: Vec<(S::Real, usize)> = Vec::new();
                for r in &rs {
                    match out.last_mut() {
                        Some((v, m)) if v.num_eq_real(r) => *m += 1,
                        _ => out.push((r.clone(), 1)),
                    }
                }
                out
            };
            match groups.len() {
                3 => SegreData::S111 {
                    eigen: rs,
                    cubic: p,
                },
                2 => {
                    let (rep, simple) = if groups[0].1 == 2 {
                        (groups[0].0.clone(), groups[1].0.clone())
                    } else {
                        (groups[1].0.clone(), groups[0].0.clone())
                    };
                    let d = rep
                        .as_scalar()
                        .expect("repeated eigenvalue of a rational matrix is rational");
                    let s = simple
                        .as_scalar()
                        .expect("remaining simple eigenvalue is rational");
                    // Diagonalizable iff the square-free part annihilates K.
                    let md = sub_scaled_identity(k, &d);
                    let ms = sub_scaled_identity(k, &s);
                    if mat_is_zero_scaled(&md.mul(&ms), scale2) {
                        SegreData::S111 {
                            eigen: rs,
                            cubic: p,
                        }
                    } else {
                        SegreData::S21 {
                            simple: s,
                            jordan: d,
                        }
                    }
                }
                1 => {
                    let t = groups[0]
                        .0
                        .as_scalar()
                        .expect("triple eigenvalue of a rational matrix is rational");
                    let mt = sub_scaled_identity(k, &t);
                    if mat_is_zero_scaled(&mt, scale1) {
                        SegreData::S111 {
                            eigen: rs,
                            cubic: p,
                        }
                    } else if mat_is_zero_scaled(&mt.mul(&mt), scale2) {
                        SegreData::S21 {
                            simple: t.clone(),
                            jordan: t,
                        }
                    } else {
                        SegreData::S3 { eigen: t }
                    }
                }
                _ => unreachable!(),
            }
        }
    }
}

fn sub_scaled_identity<S: Scalar>(k: &Mat3<S>, v: &S) -> Mat3<S> {
    let mut m = k.clone();
    for i in 0..3 {
        m.m[i][i] = m.m[i][i].clone() - v.clone();
    }
    m
}

/// A matrix with the prescribed Segre data, in real canonical form.
pub fn canonical_witness<S: Scalar>(d: &SegreData<S>) -> Result<Mat3<S>, SegreError> {
    match d {
        SegreData::S111 { eigen, .. } => {
            let vals: Option<Vec<S>> = eigen.iter().map(|e| e.as_scalar()).collect();
            let vals = vals.ok_or(SegreError::NonScalarData)?;
            Ok(Mat3::diag(
                vals[0].clone(),
                vals[1].clone(),
                vals[2].clone(),
            ))
        }
        SegreData::S1zz { real, re, im, .. } => {
            let k = real.as_scalar().ok_or(SegreError::NonScalarData)?;
            let re = re.as_scalar().ok_or(SegreError::NonScalarData)?;
            let im = im.as_scalar().ok_or(SegreError::NonScalarData)?;
            let mut m = Mat3::diag(k, re.clone(), re);
            m.m[1][2] = -im.clone();
            m.m[2][1] = im;
            Ok(m)
        }
        SegreData::S21 { simple, jordan } => {
            let mut m = Mat3::diag(simple.clone(), jordan.clone(), jordan.clone());
            m.m[1][2] = S::one();
            Ok(m)
        }
        SegreData::S3 { eigen } => {
            let mut m = Mat3::diag(eigen.clone(), eigen.clone(), eigen.clone());
            m.m[0][1] = S::one();
            m.m[1][2] = S::one();
            Ok(m)
        }
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

fn real_to_json<S: JsonScalar>(r: &S::Real) -> Value {
    match r.as_scalar() {
        Some(v) => v.to_json_value(),
        None => serde_json::Number::from_f64(r.to_f64())
            .map(Value::Number)
            .unwrap_or(Value::Null),
    }
}

impl<S: JsonScalar> SegreData<S> {
    pub fn to_json(&self) -> Value {
        let mut obj = match self {
            SegreData::S111 { eigen, .. } => json!({
                "type": "{111}",
                "eigenvalues": eigen.iter().map(real_to_json::<S>).collect::<Vec<_>>(),
            }),
            SegreData::S1zz { real, re, im, .. } => {
                let mut o = json!({
                    "type": "{1zz}",
                    "eigenvalues": [
                        real_to_json::<S>(real),
                        real_to_json::<S>(re),
                        serde_json::Number::from_f64(im.to_f64()).map(Value::Number).unwrap_or(Value::Null),
                    ],
                });
                if let ImPart::SqrtOf { radicand, .. } = im {
                    o["im_squared"] = radicand.to_json_value();
                }
                if let ImPart::Exact(v) = im {
                    o["eigenvalues"][2] = v.to_json_value();
                }
                o
            }
            SegreData::S21 { simple, jordan } => json!({
                "type": "{21}",
                "eigenvalues": [simple.to_json_value(), jordan.to_json_value()],
                "jordan_eigenvalue": jordan.to_json_value(),
            }),
            SegreData::S3 { eigen } => json!({
                "type": "{3}",
                "eigenvalues": [eigen.to_json_value()],
            }),
        };
        if let Some(tau) = self.tau() {
            obj["tau"] = json!(tau);
        }
        obj
    }

    /// Parse prescribed Segre data (plain scalar eigenvalues only).
    pub fn from_json(v: &Value) -> Result<SegreData<S>, SegreError> {
        let ty = v
            .get("type")
            .and_then(Value::as_str)
            .and_then(SegreType::parse)
            .ok_or_else(|| SegreError::Invalid("missing or unknown `type`".into()))?;
        let eig: Vec<S> = v
            .get("eigenvalues")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(S::from_json_value).collect())
            .unwrap_or_default();
        let want = |n: usize| -> Result<(), SegreError> {
            if eig.len() == n {
                Ok(())
            } else {
                Err(SegreError::Invalid(format!(
                    "type {} needs {} eigenvalue entries, got {}",
                    ty.tag(),
                    n,
                    eig.len()
                )))
            }
        };
        match ty {
            SegreType::S111 => {
                want(3)?;
                let mut vals = eig;
                vals.sort_by(|a, b| a.cmp_num(b));
                let cubic = Poly::from_roots(&vals);
                let eigen: [S::Real; 3] =
                    std::array::from_fn(|i| S::real_from_scalar(vals[i].clone()));
                Ok(SegreData::S111 { eigen, cubic })
            }
            SegreType::S1zz => {
                want(3)?;
                let (k, re, im) = (eig[0].clone(), eig[1].clone(), eig[2].clone());
                if im.sign().is_zero() {
                    return Err(SegreError::Invalid("imaginary part must be nonzero".into()));
                }
                let im = im.abs();
                // (x - k)(x^2 - 2 re x + re^2 + im^2)
                let quad = Poly::new(vec![
                    re.clone() * re.clone() + im.clone() * im.clone(),
                    -(S::from_int(2) * re.clone()),
                    S::one(),
                ]);
                let cubic = quad.mul(&Poly::linear_root(&k));
                Ok(SegreData::S1zz {
                    real: S::real_from_scalar(k),
                    re: S::real_from_scalar(re),
                    im: ImPart::Exact(im),
                    cubic,
                })
            }
            SegreType::S21 => {
                if eig.is_empty() || eig.len() > 2 {
                    return Err(SegreError::Invalid(
                        "type {21} needs [simple, jordan] or a single shared eigenvalue".into(),
                    ));
                }
                let simple = eig[0].clone();
                let mut jordan = eig.get(1).cloned().unwrap_or_else(|| simple.clone());
                if let Some(j) = v.get("jordan_eigenvalue") {
                    jordan = S::from_json_value(j)
                        .ok_or_else(|| SegreError::Invalid("bad `jordan_eigenvalue`".into()))?;
                }
                Ok(SegreData::S21 { simple, jordan })
            }
            SegreType::S3 => {
                want(1)?;
                Ok(SegreData::S3 {
                    eigen: eig[0].clone(),
                })
            }
        }
    }
}
