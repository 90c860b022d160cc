//! Exact arithmetic for the compact p-adic rotation group SO(3)_p.
//!
//! The crate is organized bottom-up:
//!
//! - [`padic`]: valuations, square classes, canonical units, truncated
//!   expansions and Hensel square roots.
//! - [`linalg`]: small exact matrices, the anisotropic diagonal forms and the
//!   quadratic extension Q_p(√v).
//! - [`quaternion`]: the quaternion algebra H_p and its conjugation action.
//! - [`rotation`]: SO(2)_{p,d}, SO(3)_p, the quaternion isomorphism and the
//!   nautical (Cardano) angles.
//! - [`haar`]: Haar densities, exact integration over ultrametric regions,
//!   sampling and invariance checks.
//! - [`verify`]: randomized identity suites.
//! - [`cli`]: the command-line front end used by the `padic-so3` binary.
//!
//! Everything is exact: masses are rationals, matrices are rational and group
//! membership is certified by exact equality.

pub mod cli;
pub mod error;
pub mod haar;
pub mod linalg;
pub mod padic;
pub mod quaternion;
pub mod rotation;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{FormParam, Mat, QuadForm};
pub use padic::{PadicApprox, PrimeCtx, ProjPoint, Rational, SquareClass, Valuation};
pub use quaternion::Quat;
pub use rotation::{Angles, Axis, Decomposition, Rot3};
