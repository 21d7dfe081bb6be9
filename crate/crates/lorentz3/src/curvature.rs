//! Levi-Civita connection, curvature tensor and the curvature operator on
//! bivectors for a metric Lie algebra.
//!
//! Conventions. The curvature tensor is
//! `R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_[X,Y] Z`
//! (note the order: this is the negative of the more common convention),
//! and the (0,4) form is `R(X,Y,Z,T) = <R(X,Y)Z, T>`. The bivector basis is
//! fixed as `(e1^e2, e1^e3, e2^e3)` with the scalar product
//! `<X1^X2, Y1^Y2> = det(<Xi, Yj>)`. The operator satisfies
//! `<X^Y, K(Z^T)> = R(X,Y,Z,T)`, i.e. `K = gram2^-1 * Rhat`.

use crate::error::CurvatureError;
use crate::kernel::{Mat3, Scalar};
use crate::liealg::{FrameMetric, MetricLieAlgebra};

/// Index pairs of the bivector basis (e1^e2, e1^e3, e2^e3).
pub const LAMBDA2_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Human-readable labels for the bivector basis, in order.
pub const LAMBDA2_BASIS_LABELS: [&str; 3] = ["e1^e2", "e1^e3", "e2^e3"];

/// Connection coefficients `nabla[i][j] = coefficients of nabla_{e_i} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable<S: Scalar> {
    pub nabla: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> ConnectionTable<S> {
    pub fn entry(&self, i: usize, j: usize) -> &[S; 3] {
        &self.nabla[i][j]
    }

    /// `nabla_u v` for constant coefficient vectors in the frame.
    pub fn covariant(&self, u: &[S; 3], v: &[S; 3]) -> [S; 3] {
        let mut out: [S; 3] = std::array::from_fn(|_| S::zero());
        for i in 0..3 {
            for j in 0..3 {
                let c = u[i].clone() * v[j].clone();
                for k in 0..3 {
                    out[k] = out[k].clone() + c.clone() * self.nabla[i][j][k].clone();
                }
            }
        }
        out
    }

    /// Max |residual| of `nabla_i e_j - nabla_j e_i - [e_i, e_j]`.
    pub fn torsion_is_zero(&self, alg: &MetricLieAlgebra<S>) -> bool {
        for i in 0..3 {
            for j in 0..3 {
                let b = alg.sc.bracket(i, j);
                for k in 0..3 {
                    let r =
                        self.nabla[i][j][k].clone() - self.nabla[j][i][k].clone() - b[k].clone();
                    if !r.sign().is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Metric compatibility: `<nabla_i e_j, e_k> + <e_j, nabla_i e_k> = 0`.
    pub fn metric_compatible(&self, metric: &FrameMetric<S>) -> bool {
        let basis: [[S; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|k| if i == k { S::one() } else { S::zero() })
        });
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let a = metric.pairing(&self.nabla[i][j], &basis[k]);
                    let b = metric.pairing(&basis[j], &self.nabla[i][k]);
                    if !(a + b).sign().is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Solve the Koszul system on the frame:
/// `2 <nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>`
/// (derivative terms vanish on left-invariant fields).
pub fn levi_civita<S: Scalar>(
    alg: &MetricLieAlgebra<S>,
) -> Result<ConnectionTable<S>, CurvatureError> {
    let g_inv = alg
        .metric
        .gram
        .inverse()
        .ok_or(CurvatureError::DegenerateMetric(
            "frame gram matrix is not invertible",
        ))?;
    let basis: [[S; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|k| if i == k { S::one() } else { S::zero() }));
    let half = S::from_fraction(1, 2);
    let nabla = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // w[l] = <nabla_i e_j, e_l>
            let w: [S; 3] = std::array::from_fn(|l| {
                let t1 = alg.metric.pairing(&alg.sc.bracket(i, j), &basis[l]);
                let t2 = alg.metric.pairing(&alg.sc.bracket(j, l), &basis[i]);
                let t3 = alg.metric.pairing(&alg.sc.bracket(l, i), &basis[j]);
                half.clone() * (t1 - t2 + t3)
            });
            g_inv.mul_vec(&w)
        })
    });
    Ok(ConnectionTable { nabla })
}

/// The (0,4) curvature tensor on the frame, flat-indexed.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S: Scalar> {
    vals: Vec<S>, // 81 entries, index = ((i*3+j)*3+k)*3+l
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.vals[((i * 3 + j) * 3 + k) * 3 + l]
    }

    /// Antisymmetry in (i,j), (k,l) and pair symmetry.
    pub fn symmetries_hold(&self) -> bool {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let v = self.get(i, j, k, l);
                        let a = -self.get(j, i, k, l).clone();
                        let b = -self.get(i, j, l, k).clone();
                        let c = self.get(k, l, i, j);
                        if !v.num_eq(&a) || !v.num_eq(&b) || !v.num_eq(c) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Curvature tensor from the connection:
/// `R(e_i,e_j)e_k = nabla_j nabla_i e_k - nabla_i nabla_j e_k + nabla_[e_i,e_j] e_k`,
/// then `R4[i][j][k][l] = <R(e_i,e_j)e_k, e_l>`.
pub fn curvature_tensor<S: Scalar>(
    alg: &MetricLieAlgebra<S>,
    conn: &ConnectionTable<S>,
) -> CurvatureTensor<S> {
    let basis: [[S; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|k| if i == k { S::one() } else { S::zero() }));
    let mut vals = Vec::with_capacity(81);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                // R(e_i, e_j) e_k as a coefficient vector.
                let a = conn.covariant(&basis[j], conn.entry(i, k)); // nabla_j nabla_i e_k
                let b = conn.covariant(&basis[i], conn.entry(j, k)); // nabla_i nabla_j e_k
                let c = conn.covariant(&alg.sc.bracket(i, j), &basis[k]);
                let rvec: [S; 3] =
                    std::array::from_fn(|t| a[t].clone() - b[t].clone() + c[t].clone());
                for l in 0..3 {
                    vals.push(alg.metric.pairing(&rvec, &basis[l]));
                }
            }
        }
    }
    CurvatureTensor { vals }
}

/// Bivector basis data: the induced scalar product on (e1^e2, e1^e3, e2^e3).
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda2Frame<S: Scalar> {
    pub gram2: Mat3<S>,
}

/// `<Xa1 ^ Xa2, Yb1 ^ Yb2> = det(<X_i, Y_j>)` entrywise over the basis.
pub fn lambda2_gram<S: Scalar>(metric: &FrameMetric<S>) -> Mat3<S> {
    let g = &metric.gram;
    Mat3::from_fn(|a, b| {
        let (a1, a2) = LAMBDA2_PAIRS[a];
        let (b1, b2) = LAMBDA2_PAIRS[b];
        g.m[a1][b1].clone() * g.m[a2][b2].clone() - g.m[a1][b2].clone() * g.m[a2][b1].clone()
    })
}

/// The curvature operator `K` on bivectors together with the gram matrix it
/// is self-adjoint against.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator<S: Scalar> {
    pub k: Mat3<S>,
    pub gram2: Mat3<S>,
}

impl<S: Scalar> CurvatureOperator<S> {
    pub fn is_self_adjoint(&self) -> bool {
        self.gram2.mul(&self.k).is_symmetric()
    }
}

/// Assemble `K = gram2^-1 * Rhat` with `Rhat[a][b] = R4` on the basis pairs.
pub fn sectional_operator<S: Scalar>(
    r4: &CurvatureTensor<S>,
    frame: &Lambda2Frame<S>,
) -> Result<CurvatureOperator<S>, CurvatureError> {
    let rhat = Mat3::from_fn(|a, b| {
        let (a1, a2) = LAMBDA2_PAIRS[a];
        let (b1, b2) = LAMBDA2_PAIRS[b];
        r4.get(a1, a2, b1, b2).clone()
    });
    let inv = frame
        .gram2
        .inverse()
        .ok_or(CurvatureError::DegenerateMetric(
            "bivector gram matrix is not invertible",
        ))?;
    Ok(CurvatureOperator {
        k: inv.mul(&rhat),
        gram2: frame.gram2.clone(),
    })
}

/// Full pipeline: algebra -> connection -> curvature -> operator.
pub fn operator_of<S: Scalar>(
    alg: &MetricLieAlgebra<S>,
) -> Result<CurvatureOperator<S>, CurvatureError> {
    let conn = levi_civita(alg)?;
    let r4 = curvature_tensor(alg, &conn);
    let frame = Lambda2Frame {
        gram2: lambda2_gram(&alg.metric),
    };
    sectional_operator(&r4, &frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Rat;
    use crate::liealg::{FamilyParams, build};

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn abelian_algebra_is_flat() {
        let alg = build(FamilyParams::A1 {
            lambda1: r(0),
            lambda2: r(0),
            lambda3: r(0),
        })
        .unwrap();
        let conn = levi_civita(&alg).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(conn.nabla[i][j].iter().all(|v| v.sign().is_zero()));
            }
        }
        let op = operator_of(&alg).unwrap();
        assert!(op.k.is_zero());
    }

    #[test]
    fn biinvariant_connection_is_half_bracket() {
        // A1(-l, l, l) carries a bi-invariant metric (e1 timelike), where
        // nabla_X Y = [X,Y]/2.
        let l = 3;
        let alg = build(FamilyParams::A1 {
            lambda1: r(-l),
            lambda2: r(l),
            lambda3: r(l),
        })
        .unwrap();
        let conn = levi_civita(&alg).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let b = alg.sc.bracket(i, j);
                for k in 0..3 {
                    assert!(
                        conn.nabla[i][j][k].num_eq(&(b[k].clone() * rq(1, 2))),
                        "nabla_{i} e_{j} != [e_i,e_j]/2"
                    );
                }
            }
        }
    }

    #[test]
    fn a2_connection_table_hand_computed() {
        // Koszul system solved by hand for A2(2,0).
        let alg = build(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: r(0),
        })
        .unwrap();
        let conn = levi_civita(&alg).unwrap();
        let expect: [[[i64; 3]; 3]; 3] = [
            [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
            [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
            [[0, 2, -1], [-2, 0, 0], [-1, 0, 0]],
        ];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(
                        conn.nabla[i][j][k].num_eq(&r(expect[i][j][k])),
                        "nabla[{i}][{j}][{k}]"
                    );
                }
            }
        }
        assert!(conn.torsion_is_zero(&alg));
        assert!(conn.metric_compatible(&alg.metric));
    }

    #[test]
    fn connection_invariants_across_families() {
        let samples: Vec<FamilyParams<Rat>> = vec![
            FamilyParams::A1 {
                lambda1: r(2),
                lambda2: r(-1),
                lambda3: r(3),
            },
            FamilyParams::A3 {
                lambda: r(1),
                lambda1: r(2),
            },
            FamilyParams::A4 {
                alpha: r(-1),
                beta: r(2),
                lambda3: r(1),
            },
            FamilyParams::NA {
                lambda: r(2),
                mu: r(1),
                t: rq(1, 3),
            },
            FamilyParams::NB {
                p: r(2),
                q: r(-1),
                s: r(1),
                t: r(0),
            },
            FamilyParams::NC1 {
                p: r(1),
                q: r(3),
                s: r(-2),
            },
            FamilyParams::NC2 {
                p: r(2),
                q: r(1),
                r: r(-1),
            },
        ];
        for params in samples {
            let alg = build(params.clone()).unwrap();
            let conn = levi_civita(&alg).unwrap();
            assert!(conn.torsion_is_zero(&alg), "torsion for {params:?}");
            assert!(
                conn.metric_compatible(&alg.metric),
                "metric compat for {params:?}"
            );
            let r4 = curvature_tensor(&alg, &conn);
            assert!(r4.symmetries_hold(), "curvature symmetries for {params:?}");
            let op = operator_of(&alg).unwrap();
            assert!(op.is_self_adjoint(), "self-adjointness for {params:?}");
        }
    }

    #[test]
    fn lambda2_gram_examples() {
        // diag(1,1,-1) -> diag(1,-1,-1)
        let m = FrameMetric::new(Mat3::diag(r(1), r(1), r(-1))).unwrap();
        assert!(lambda2_gram(&m).num_eq(&Mat3::diag(r(1), r(-1), r(-1))));
        // diag(-1,1,1) -> diag(-1,-1,1)
        let m = FrameMetric::new(Mat3::diag(r(-1), r(1), r(1))).unwrap();
        assert!(lambda2_gram(&m).num_eq(&Mat3::diag(r(-1), r(-1), r(1))));
        // Family B null frame: nine 2x2 determinants give an antidiagonal
        // pairing of e1^e2 with e2^e3 and a unit-norm e1^e3.
        let g = {
            let mut g = Mat3::zero();
            g.m[0][2] = r(-1);
            g.m[2][0] = r(-1);
            g.m[1][1] = r(1);
            g
        };
        let m = FrameMetric::new(g).unwrap();
        let g2 = lambda2_gram(&m);
        let expect: Mat3<Rat> = Mat3::from_i64([[0, 0, 1], [0, -1, 0], [1, 0, 0]]);
        assert!(g2.num_eq(&expect));
    }

    #[test]
    fn a2_operator_block_structure() {
        // In the (e1^e2, e1^e3, e2^e3) basis the A2 operator is
        // [[-l1^2/4 + B, B, 0], [-B, -l1^2/4 - B, 0], [0, 0, 3l1^2/4 - l1 l2]]
        // with B = l1 - 2 l2 (hand computation from the Koszul table).
        for (l1, l2) in [(2i64, 0i64), (3, 1), (-1, 2), (5, -2)] {
            let alg = build(FamilyParams::A2 {
                lambda1: r(l1),
                lambda2: r(l2),
            })
            .unwrap();
            let op = operator_of(&alg).unwrap();
            let b = r(l1 - 2 * l2);
            let q = rq(-l1 * l1, 4);
            let expect = Mat3::from_rows([
                [q.clone() + b.clone(), b.clone(), r(0)],
                [-b.clone(), q.clone() - b.clone(), r(0)],
                [r(0), r(0), rq(3 * l1 * l1, 4) - r(l1 * l2)],
            ]);
            assert!(op.k.num_eq(&expect), "operator mismatch at ({l1},{l2})");
            assert!(op.is_self_adjoint());
        }
    }

    #[test]
    fn a2_case_one_eigenvalues() {
        // lambda1 = 2 lambda2: diagonal operator with (l2^2, -l2^2, -l2^2).
        let alg = build(FamilyParams::A2 {
            lambda1: r(4),
            lambda2: r(2),
        })
        .unwrap();
        let op = operator_of(&alg).unwrap();
        assert!(op.k.num_eq(&Mat3::diag(r(-4), r(-4), r(4))));
        // A2(2,1): similar to diag(1,-1,-1).
        let alg = build(FamilyParams::A2 {
            lambda1: r(2),
            lambda2: r(1),
        })
        .unwrap();
        let op = operator_of(&alg).unwrap();
        assert!(op.k.num_eq(&Mat3::diag(r(-1), r(-1), r(1))));
    }
}
