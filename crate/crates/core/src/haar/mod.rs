//! Haar measure on SO(2)_{p,d} and SO(3)_p in angle coordinates: densities,
//! exact integration over ultrametric regions, Jacobian identities, sampling
//! and invariance checks.

mod integrate;
mod invariance;
mod jacobian;
mod mobius;
mod region;
mod sample;

pub use integrate::{
    axis_integral, hquat_density, integrate_ball, integrate_piece, integrate_so2,
    integrate_so2_threads, integrate_so3, so2_density, so3_density, total_mass, GroupTag,
};
pub use invariance::{invariance_check, invariance_report, InvarianceReport, MIN_EXPECTED};
pub use jacobian::{
    chart_point, jacobian_det_closed, jacobian_matrix, jacobian_weight, JacobianWeight,
};
pub use mobius::{derivative_mass, mobius_image, Mobius};
pub use region::{complement_of_ball, BallQp, Piece, RegionQp, ShellQp};
pub use sample::{
    sample_batch, sample_so2_param, sample_so3, So2Sampler, So3Sampler, BATCH_SIZE,
};
