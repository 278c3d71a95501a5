//! Successive approximations for autonomous second-order systems
//! `y'' = f(y)`, with tools for even and odd solutions.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod catalog;
pub mod error;
pub mod field;
pub mod norm;
pub mod oracle;
pub mod picard;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod symmetric;
pub mod symmetry;
pub mod trajectory;

pub use catalog::{lookup, CatalogEntry, Params};
pub use error::{Error, FieldError, Result};
pub use field::{Parity, VectorField};
pub use oracle::{compare, rk4_solve, rk4_symmetric, Deviation, OracleConfig, OracleRun};
pub use picard::{global_extend, solve_ivp, ConvergenceReport, DomainTube, GlobalRun, PicardConfig, StopReason};
pub use symmetric::{
    family_sweep, solve_even, solve_odd, FamilyParameter, FamilyResult, FamilySpec, SymmetricRun, SymmetryKind,
};
pub use symmetry::{classify_field_parity, ParityReport, SampleBall, SampledFunction};
pub use trajectory::Trajectory;
