//! Sectional curvature operators of three-dimensional locally homogeneous
//! Lorentzian spaces.
//!
//! The crate computes the curvature operator on the bivector bundle for the
//! catalog of 3D Lorentzian metric Lie algebras and for the locally
//! symmetric catalog (space forms, products, and the plane-wave-like
//! coordinate metric), classifies its Segre type exactly over rationals or
//! with an explicit tolerance over floats, and decides/realizes the inverse
//! problem of prescribing Segre type and eigenvalues.
//!
//! Modules follow the pipeline: [`kernel`] (scalars, cubics, 3x3 matrices),
//! [`liealg`] (the algebra catalog), [`curvature`] (Koszul connection,
//! curvature tensor, operator assembly), [`symspace`] (locally symmetric
//! catalog plus an independent coordinate-chart oracle), [`segre`]
//! (classification), [`existence`] (admissibility predicates, closed-form
//! reconstruction, numeric realization), [`sweep`] (parameter atlases) and
//! [`cli`].

pub mod cli;
pub mod curvature;
pub mod error;
pub mod existence;
pub mod kernel;
pub mod liealg;
pub mod segre;
pub mod sweep;
pub mod symspace;

pub use curvature::{ConnectionTable, CurvatureOperator, CurvatureTensor, Lambda2Frame};
pub mod jsonio;
pub use kernel::{Fl, Mat3, Poly, Rat, Scalar, Sign};
pub use liealg::{Family, FamilyParams, FrameMetric, MetricLieAlgebra, StructureConstants};
pub use segre::{SegreData, SegreType};
