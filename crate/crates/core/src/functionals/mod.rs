//! Scalar and tensor functionals of filaments and their mollified fields:
//! kinetic energy and excess, momentum flux, moments, Poisson brackets,
//! L^q norms and the weak-L¹/L² interpolation check.

mod curve;
mod energy;
mod interpolation;
mod testfield;
mod volume;

pub use curve::{bracket_bcf, curve_flux, moment_curve};
pub use energy::{excess, k_eps, kinetic_energy_l2, EnergyReport};
pub use interpolation::{interpolation_check, truncated_power, InterpolationNorms};
pub use testfield::{Bump, RingField, TensorField, TestField};
pub use volume::{
    bracket_euler, lq_norm, moment_field, momentum_flux, sup_norm, support_box, Aabb,
    FieldQuadrature, QuadNode, VolumeOptions,
};
