//! Numerical laboratory for vortex filaments: mollified Biot–Savart fields
//! around closed curves, binormal curvature flow, flat-norm estimates and a
//! verification harness for the associated energy and flux asymptotics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bcf;
pub mod biot_savart;
pub mod error;
pub mod flat_norm;
pub mod functionals;
pub mod geometry;
pub mod harness;
pub mod numeric;

pub use error::{Error, Result};
pub use geometry::{BuiltinCurve, ClosedCurve, GeometryProfile, TubePoint};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
