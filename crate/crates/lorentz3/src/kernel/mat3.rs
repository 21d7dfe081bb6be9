//! 3x3 matrices over a scalar backend.

use super::poly::Poly;
use super::scalar::Scalar;

/// Dense 3x3 matrix; `m[row][col]`.
#[derive(Clone, PartialEq)]
pub struct Mat3<S: Scalar> {
    pub m: [[S; 3]; 3],
}

impl<S: Scalar> std::fmt::Debug for Mat3<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for r in 0..3 {
            writeln!(
                f,
                "  [{}, {}, {}]",
                self.m[r][0], self.m[r][1], self.m[r][2]
            )?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn from_rows(m: [[S; 3]; 3]) -> Mat3<S> {
        Mat3 { m }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Mat3<S> {
        Mat3 {
            m: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Mat3<S> {
        Mat3::from_fn(|i, j| S::from_int(rows[i][j]))
    }

    pub fn zero() -> Mat3<S> {
        Mat3::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Mat3<S> {
        Mat3::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(a: S, b: S, c: S) -> Mat3<S> {
        let mut m = Mat3::zero();
        m.m[0][0] = a;
        m.m[1][1] = b;
        m.m[2][2] = c;
        m
    }

    pub fn map(&self, mut f: impl FnMut(&S) -> S) -> Mat3<S> {
        Mat3::from_fn(|i, j| f(&self.m[i][j]))
    }

    /// Entrywise conversion into another scalar backend.
    pub fn convert<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Mat3<T> {
        Mat3::from_fn(|i, j| f(&self.m[i][j]))
    }

    pub fn transpose(&self) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[j][i].clone())
    }

    pub fn add(&self, other: &Mat3<S>) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[i][j].clone() + other.m[i][j].clone())
    }

    pub fn sub(&self, other: &Mat3<S>) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[i][j].clone() - other.m[i][j].clone())
    }

    pub fn scale(&self, k: &S) -> Mat3<S> {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn mul(&self, other: &Mat3<S>) -> Mat3<S> {
        Mat3::from_fn(|i, j| {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc + self.m[i][k].clone() * other.m[k][j].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc + self.m[i][k].clone() * v[k].clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> S {
        self.m[0][0].clone() + self.m[1][1].clone() + self.m[2][2].clone()
    }

    pub fn det(&self) -> S {
        let m = &self.m;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone()
                * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone()
                * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    fn cofactor(&self, i: usize, j: usize) -> S {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = self.m[rows[0]][cols[0]].clone() * self.m[rows[1]][cols[1]].clone()
            - self.m[rows[0]][cols[1]].clone() * self.m[rows[1]][cols[0]].clone();
        if (i + j) % 2 == 0 { minor } else { -minor }
    }

    /// Inverse via the adjugate; `None` when the determinant counts as zero.
    pub fn inverse(&self) -> Option<Mat3<S>> {
        let det = self.det();
        let inv = det.recip()?;
        Some(Mat3::from_fn(|i, j| {
            self.cofactor(j, i).clone() * inv.clone()
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.m[i][j].num_eq(&self.m[j][i])))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|r| r.iter().all(|v| v.sign().is_zero()))
    }

    pub fn num_eq(&self, other: &Mat3<S>) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.m[i][j].num_eq(&other.m[i][j])))
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Monic characteristic polynomial `det(xI - M)`, degree exactly 3.
    pub fn char_poly(&self) -> Poly<S> {
        let tr = self.trace();
        // Sum of principal 2x2 minors.
        let mut m2 = S::zero();
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            m2 = m2
                + (self.m[i][i].clone() * self.m[j][j].clone()
                    - self.m[i][j].clone() * self.m[j][i].clone());
        }
        Poly::new(vec![-self.det(), m2, -tr, S::one()])
    }

    /// Evaluate a polynomial at this matrix.
    pub fn eval_poly(&self, p: &Poly<S>) -> Mat3<S> {
        let mut acc = Mat3::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..3 {
                acc.m[i][i] = acc.m[i][i].clone() + c.clone();
            }
        }
        acc
    }

    /// Rank by Gaussian elimination with full pivoting. The pivot zero test
    /// is exact for the rational backend and tolerance-based (relative to
    /// the largest entry of the original matrix) for the floating backend.
    pub fn rank(&self) -> usize {
        let scale = self.max_abs_f64().max(1.0);
        let mut a = self.clone();
        let mut rank = 0;
        let mut rows: Vec<usize> = (0..3).collect();
        let mut cols: Vec<usize> = (0..3).collect();
        while rank < 3 && !rows.is_empty() && !cols.is_empty() {
            // Full pivot: largest magnitude among remaining entries.
            let mut best: Option<(usize, usize, f64)> = None;
            for (ri, &r) in rows.iter().enumerate() {
                for (ci, &c) in cols.iter().enumerate() {
                    let mag = a.m[r][c].to_f64().abs();
                    if best.map(|(_, _, b)| mag > b).unwrap_or(true) {
                        best = Some((ri, ci, mag));
                    }
                }
            }
            let (ri, ci, _) = best.unwrap();
            let (pr, pc) = (rows[ri], cols[ci]);
            if pivot_is_zero(&a.m[pr][pc], scale) {
                break;
            }
            rank += 1;
            let pinv = a.m[pr][pc].recip().expect("nonzero pivot");
            rows.remove(ri);
            cols.remove(ci);
            for &r in &rows {
                let factor = a.m[r][pc].clone() * pinv.clone();
                for &c in &cols {
                    a.m[r][c] = a.m[r][c].clone() - factor.clone() * a.m[pr][c].clone();
                }
            }
        }
        rank
    }
}

fn pivot_is_zero<S: Scalar>(v: &S, scale: f64) -> bool {
    match v.tau() {
        None => v.sign().is_zero(),
        Some(tau) => v.to_f64().abs() <= tau * scale,
    }
}

/// Matrix zero test relative to a scale, for tolerance-aware annihilation
/// checks like `q(K) = 0`. Exact backend ignores the scale.
pub fn mat_is_zero_scaled<S: Scalar>(m: &Mat3<S>, scale: f64) -> bool {
    if S::EXACT {
        return m.is_zero();
    }
    let scale = scale.max(1.0);
    m.m.iter().flatten().all(|v| {
        let tau = v.tau().unwrap_or(0.0);
        v.to_f64().abs() <= tau * scale
    })
}
