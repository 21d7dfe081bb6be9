//! Property tests for the library's structural invariants.

use proptest::prelude::*;

use lorentz3::curvature::{curvature_tensor, lambda2_gram, levi_civita, operator_of};
use lorentz3::existence::admissible_diagonalizable;
use lorentz3::kernel::{
    CubicRoots, Fl, Mat3, Poly, Rat, RealNum, Scalar, cubic_root_data, poly_gcd,
};
use lorentz3::liealg::{FamilyParams, build, check_jacobi, eigenvalue_signs, unimodular_type};
use lorentz3::segre::{SegreData, canonical_witness, classify};
use lorentz3::symspace::{
    CoordinatePoint, SymmetricSpaceSpec, coordinate_curvature_operator, symmetric_operator,
};

fn rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rat::new(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |v| !v.sign().is_zero())
}

fn mat3() -> impl Strategy<Value = Mat3<Rat>> {
    proptest::array::uniform3(proptest::array::uniform3(rat())).prop_map(Mat3::from_rows)
}

/// Invertible matrix as a product of unit triangulars.
fn invertible_mat3() -> impl Strategy<Value = Mat3<Rat>> {
    (
        proptest::array::uniform3(small_rat()),
        proptest::array::uniform3(small_rat()),
    )
        .prop_map(|(lo, up)| {
            let mut l: Mat3<Rat> = Mat3::identity();
            l.m[1][0] = lo[0].clone();
            l.m[2][0] = lo[1].clone();
            l.m[2][1] = lo[2].clone();
            let mut u: Mat3<Rat> = Mat3::identity();
            u.m[0][1] = up[0].clone();
            u.m[0][2] = up[1].clone();
            u.m[1][2] = up[2].clone();
            l.mul(&u)
        })
}

fn family_params() -> impl Strategy<Value = FamilyParams<Rat>> {
    prop_oneof![
        (small_rat(), small_rat(), small_rat()).prop_map(|(a, b, c)| FamilyParams::A1 {
            lambda1: a,
            lambda2: b,
            lambda3: c
        }),
        (small_rat(), small_rat()).prop_map(|(a, b)| FamilyParams::A2 {
            lambda1: a,
            lambda2: b
        }),
        (small_rat(), small_rat()).prop_map(|(a, b)| FamilyParams::A3 {
            lambda: a,
            lambda1: b
        }),
        (small_rat(), nonzero_rat(), small_rat()).prop_map(|(a, b, c)| FamilyParams::A4 {
            alpha: a,
            beta: b,
            lambda3: c
        }),
        (0i64..=6, 0i64..=6, nonzero_rat())
            .prop_filter("lambda + mu != 0", |(l, m, _)| l + m != 0)
            .prop_map(|(l, m, t)| FamilyParams::NA {
                lambda: Rat::from_int(l),
                mu: Rat::from_int(m),
                t,
            }),
        (small_rat(), small_rat(), small_rat(), small_rat())
            .prop_filter("q != t", |(_, q, _, t)| q != t)
            .prop_map(|(p, q, s, t)| FamilyParams::NB { p, q, s, t }),
        (small_rat(), small_rat(), small_rat())
            .prop_filter("q != s", |(_, q, s)| q != s)
            .prop_map(|(p, q, s)| FamilyParams::NC1 { p, q, s }),
        (small_rat(), nonzero_rat(), small_rat())
            .prop_filter("p + r != 0", |(p, _, r)| !(p.clone() + r.clone())
                .sign()
                .is_zero())
            .prop_map(|(p, q, r)| FamilyParams::NC2 { p, q, r }),
    ]
}

fn segre_target() -> impl Strategy<Value = SegreData<Rat>> {
    prop_oneof![
        // {111}, including coincidences.
        proptest::array::uniform3(small_rat()).prop_map(|mut v| {
            v.sort_by(|a, b| a.cmp_num(b));
            SegreData::S111 {
                eigen: std::array::from_fn(|i| Rat::real_from_scalar(v[i].clone())),
                cubic: Poly::from_roots(&v),
            }
        }),
        (small_rat(), small_rat()).prop_map(|(a, b)| {
            let mut v = vec![a.clone(), a, b];
            v.sort_by(|x, y| x.cmp_num(y));
            SegreData::S111 {
                eigen: std::array::from_fn(|i| Rat::real_from_scalar(v[i].clone())),
                cubic: Poly::from_roots(&v),
            }
        }),
        (small_rat(), small_rat()).prop_map(|(s, j)| SegreData::S21 {
            simple: s,
            jordan: j
        }),
        small_rat().prop_map(|k| SegreData::S21 {
            simple: k.clone(),
            jordan: k
        }),
        small_rat().prop_map(|k| SegreData::S3 { eigen: k }),
        (small_rat(), small_rat(), nonzero_rat()).prop_map(|(k, re, im)| {
            let im = im.abs();
            let quad = Poly::new(vec![
                re.clone() * re.clone() + im.clone() * im.clone(),
                -(Rat::from_int(2) * re.clone()),
                Rat::one(),
            ]);
            SegreData::S1zz {
                real: Rat::real_from_scalar(k.clone()),
                re: Rat::real_from_scalar(re),
                im: lorentz3::kernel::ImPart::Exact(im),
                cubic: quad.mul(&Poly::linear_root(&k)),
            }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // char_poly is a similarity invariant.
    #[test]
    fn charpoly_similarity_invariant(m in mat3(), s in invertible_mat3()) {
        let inv = s.inverse().expect("unit-triangular product is invertible");
        let conj = inv.mul(&m).mul(&s);
        prop_assert_eq!(m.char_poly(), conj.char_poly());
    }

    // Root sum and product match the cubic's coefficients.
    #[test]
    fn cubic_vieta(m in mat3()) {
        let p = m.char_poly();
        let data = cubic_root_data(&p);
        let (sum, prod) = match &data.roots {
            CubicRoots::ThreeReal(rs) => (
                rs.iter().map(|r| r.to_f64()).sum::<f64>(),
                rs.iter().map(|r| r.to_f64()).product::<f64>(),
            ),
            CubicRoots::OneRealPair { real, re, im } => {
                let (r, re, im) = (real.to_f64(), re.to_f64(), im.to_f64());
                (r + 2.0 * re, r * (re * re + im * im))
            }
        };
        let scale = 1.0 + p.coeffs().iter().map(|c| Scalar::to_f64(c).abs()).fold(0.0, f64::max);
        prop_assert!((sum + Scalar::to_f64(&p.coeff(2))).abs() < 1e-7 * scale);
        prop_assert!((prod + Scalar::to_f64(&p.coeff(0))).abs() < 1e-7 * scale);
    }

    // gcd(p, p') is constant exactly when the discriminant is nonzero.
    #[test]
    fn squarefree_iff_nonzero_discriminant(m in mat3()) {
        let p = m.char_poly();
        let g = poly_gcd(&p, &p.derivative()).unwrap();
        prop_assert_eq!(g.degree() == Some(0), !p.cubic_discriminant().sign().is_zero());
    }

    // Every catalog instance is a Lie algebra with a Lorentzian frame.
    #[test]
    fn catalog_is_lie_and_lorentz(params in family_params()) {
        let alg = build(params).unwrap();
        prop_assert!(check_jacobi(&alg.sc));
        prop_assert!(alg.metric.gram.det().sign().is_negative());
        prop_assert_eq!(eigenvalue_signs(&alg.metric.gram), (2, 1));
    }

    // Connection invariants and operator self-adjointness, exactly.
    #[test]
    fn connection_and_operator_invariants(params in family_params()) {
        let alg = build(params).unwrap();
        let conn = levi_civita(&alg).unwrap();
        prop_assert!(conn.torsion_is_zero(&alg));
        prop_assert!(conn.metric_compatible(&alg.metric));
        let r4 = curvature_tensor(&alg, &conn);
        prop_assert!(r4.symmetries_hold());
        let frame = lorentz3::curvature::Lambda2Frame { gram2: lambda2_gram(&alg.metric) };
        let op = lorentz3::curvature::sectional_operator(&r4, &frame).unwrap();
        prop_assert!(op.is_self_adjoint());
    }

    // A1 type lookup is invariant under permutations and a global flip.
    #[test]
    fn a1_type_renumeration_invariant(
        a in small_rat(), b in small_rat(), c in small_rat(),
        perm in 0usize..6, flip in proptest::bool::ANY,
    ) {
        let base = [a, b, c];
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p = perms[perm];
        let f = |v: &Rat| if flip { -v.clone() } else { v.clone() };
        let t0 = unimodular_type(&FamilyParams::A1 {
            lambda1: base[0].clone(), lambda2: base[1].clone(), lambda3: base[2].clone(),
        }).unwrap();
        let t1 = unimodular_type(&FamilyParams::A1 {
            lambda1: f(&base[p[0]]), lambda2: f(&base[p[1]]), lambda3: f(&base[p[2]]),
        }).unwrap();
        prop_assert_eq!(t0, t1);
    }

    // classify is a similarity invariant and inverts canonical_witness.
    #[test]
    fn classify_similarity_and_round_trip(d in segre_target(), s in invertible_mat3()) {
        let w = canonical_witness(&d).unwrap();
        let got = classify(&w);
        prop_assert!(got.matches(&d), "round trip: {:?} -> {:?}", d, got);
        let inv = s.inverse().unwrap();
        let conj = inv.mul(&w).mul(&s);
        let got = classify(&conj);
        prop_assert!(got.matches(&d), "similarity: {:?} -> {:?}", d, got);
    }

    // Exact and floating classification agree away from boundaries.
    #[test]
    fn exact_approx_agreement(d in segre_target()) {
        // Enforce separations well above 10*tau so the hypothesis of the
        // agreement property holds.
        let separated = |xs: &[f64]| -> bool {
            xs.iter().enumerate().all(|(i, a)| {
                xs.iter().skip(i + 1).all(|b| (a - b).abs() > 1e-4 || (a - b).abs() == 0.0)
            })
        };
        let ok = match &d {
            SegreData::S111 { eigen, .. } => {
                separated(&eigen.iter().map(|e| e.to_f64()).collect::<Vec<_>>())
            }
            SegreData::S21 { simple, jordan } => {
                let (s, j) = (Scalar::to_f64(simple), Scalar::to_f64(jordan));
                s == j || (s - j).abs() > 1e-4
            }
            SegreData::S1zz { im, .. } => im.to_f64() > 1e-4,
            _ => true,
        };
        prop_assume!(ok);
        let w = canonical_witness(&d).unwrap();
        let wf: Mat3<Fl> = w.convert(|v| Fl::new(Scalar::to_f64(v)));
        let exact = classify(&w);
        let approx = classify(&wf);
        prop_assert_eq!(exact.segre_type(), approx.segre_type());
    }

    // The A2 case split: diagonalizable exactly on lambda1 = 2*lambda2.
    #[test]
    fn a2_case_split(l2 in small_rat(), off in small_rat()) {
        let on_line = build(FamilyParams::A2 {
            lambda1: Rat::from_int(2) * l2.clone(),
            lambda2: l2.clone(),
        }).unwrap();
        let op = operator_of(&on_line).unwrap();
        match classify(&op.k) {
            SegreData::S111 { eigen, .. } => {
                let t = l2.clone() * l2.clone();
                prop_assert!(eigen[2].as_scalar() == Some(t.clone()));
                prop_assert!(eigen[0].as_scalar() == Some(-t.clone()));
                prop_assert!(eigen[1].as_scalar() == Some(-t));
            }
            other => prop_assert!(false, "expected {{111}}, got {:?}", other.segre_type()),
        }
        // Off the line: a defective {21} with jordan = -lambda1^2/4.
        let l1 = Rat::from_int(2) * l2.clone() + off.clone();
        prop_assume!(!off.sign().is_zero());
        let alg = build(FamilyParams::A2 { lambda1: l1.clone(), lambda2: l2 }).unwrap();
        let op = operator_of(&alg).unwrap();
        match classify(&op.k) {
            SegreData::S21 { jordan, .. } => {
                prop_assert!(jordan.num_eq(&(-(l1.clone() * l1) * Rat::new(1, 4))));
            }
            other => prop_assert!(false, "expected {{21}}, got {:?}", other.segre_type()),
        }
    }

    // Admissibility of a {111} triple is renumeration-invariant.
    #[test]
    fn diagonalizable_renumeration_invariant(
        a in small_rat(), b in small_rat(), c in small_rat(), perm in 0usize..6,
    ) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let base = [a, b, c];
        let p = perms[perm];
        let v0 = admissible_diagonalizable(&[base[0].clone(), base[1].clone(), base[2].clone()]);
        let v1 = admissible_diagonalizable(&[
            base[p[0]].clone(), base[p[1]].clone(), base[p[2]].clone(),
        ]);
        prop_assert_eq!(v0.matched_conditions, v1.matched_conditions);
    }

    // Plane-wave oracle: point- and beta/xi-independence, nilpotency.
    #[test]
    fn plane_wave_oracle_independence(
        eps in prop_oneof![Just(1i8), Just(-1i8)],
        alpha in small_rat(),
        b0 in small_rat(), b1 in small_rat(),
        x0 in small_rat(), x1 in small_rat(), x2 in small_rat(),
        p1 in small_rat(), p2 in small_rat(), p3 in small_rat(),
        q2 in small_rat(), q3 in small_rat(),
    ) {
        let spec = SymmetricSpaceSpec::PlaneWave {
            epsilon: eps,
            alpha: alpha.clone(),
            beta: Poly::new(vec![b0, b1]),
            xi: Poly::new(vec![x0, x1, x2]),
        };
        let op1 = coordinate_curvature_operator(&spec, &CoordinatePoint([p1, p2.clone(), p3.clone()]));
        let op2 = coordinate_curvature_operator(&spec, &CoordinatePoint([Rat::zero(), q2, q3]));
        prop_assert!(op1.k.num_eq(&op2.k));
        let closed = symmetric_operator(&spec);
        prop_assert!(op1.k.num_eq(&closed.k));
        // Nilpotent of index <= 2; nonzero iff alpha != 0.
        prop_assert!(op1.k.mul(&op1.k).is_zero());
        prop_assert_eq!(op1.k.is_zero(), alpha.sign().is_zero());
        let spec2 = SymmetricSpaceSpec::PlaneWave {
            epsilon: eps,
            alpha,
            beta: Poly::zero(),
            xi: Poly::new(vec![Rat::from_int(1)]),
        };
        let op3 = coordinate_curvature_operator(&spec2, &CoordinatePoint([Rat::zero(), p2, p3]));
        prop_assert!(op3.k.num_eq(&op1.k));
    }

    // Forward direction of the existence conditions on random samples.
    #[test]
    fn forward_consistency(params in family_params()) {
        let alg = build(params.clone()).unwrap();
        prop_assert!(
            lorentz3::existence::verify_forward(&alg),
            "rejected sample {:?}", params
        );
    }
}
