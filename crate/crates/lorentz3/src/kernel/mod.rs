//! Shared scalar, polynomial and small-matrix primitives.

pub mod mat3;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use mat3::{Mat3, mat_is_zero_scaled};
pub use poly::{Poly, poly_gcd, squarefree_part};
pub use roots::{
    AlgebraicReal, CubicRoots, ExactReal, ImPart, RealNum, RootData, isolate_real_roots,
    rational_roots, rational_roots_bounded,
};
pub use scalar::{DEFAULT_TAU, Fl, Rat, Scalar, Sign};

/// Root data of a monic cubic, dispatched per backend.
pub fn cubic_root_data<S: Scalar>(p: &Poly<S>) -> RootData<S> {
    S::cubic_roots(p)
}
