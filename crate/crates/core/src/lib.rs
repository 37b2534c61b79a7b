//! Minkowski quaternionic operations on parametric point sets in R⁴.
//!
//! The pipeline: parse a scene in the small DSL ([`expr`]), build
//! [`ParamSet`]s and combine them with Minkowski sums and quaternion products
//! ([`minkowski`]), sample them on lattices ([`tessellate`]), project to the
//! modeling 3-space ([`projection`]) and export ([`obj`], [`scene`]).
//! [`verify`] checks the exact identities numerically.

pub mod expr;
pub mod gallery;
pub mod minkowski;
pub mod obj;
pub mod paramset;
pub mod projection;
pub mod quat;
pub mod scene;
pub mod tessellate;
pub mod verify;

pub use expr::{
    parse_expr, parse_program, print_expr, print_program, Expr, MinkowskiOp, ParseError,
    SceneProgram,
};
pub use minkowski::{mdiff, mdiv_left, mdiv_right, mprod, msum, MinkowskiError};
pub use paramset::{Constant, ParamInterval, ParamSet, ParamSetError};
pub use projection::{dop, perspective, PerspectiveConfig, Point3, ProjectionMode, Rotor4};
pub use quat::{QuatError, Quaternion, TrigForm};
pub use scene::{Scene, SceneError};
pub use tessellate::{sample, Mesh3, SampleGrid, TessellateError};
pub use verify::{CheckReport, VerifyError};
