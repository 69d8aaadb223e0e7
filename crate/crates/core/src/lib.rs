//! Few-ray received power models for directional mmWave links.
//!
//! The crate predicts received power from first principles for two
//! environments:
//!
//! * a rectangular corridor, where the line-of-sight ray and the four
//!   single-bounce reflections off ground, ceiling and the two side walls
//!   dominate (the *five-ray* model), and
//! * an open area over flat ground, where only the line-of-sight ray and the
//!   ground reflection remain (the *two-ray* model).
//!
//! Around the models sit the tools needed to analyse them: Fresnel
//! reflection coefficients, sampled horn antenna patterns, alpha-beta
//! path-loss regression with z-tests, Rician K-factor and XPD estimates, and
//! a brute-force image-method tracer ([`oracle`]) that serves as the
//! independent reference for everything above.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and parallel sweeps live in the companion `corridor-rays`
//! crate.
//!
//! Conventions used throughout:
//!
//! * lengths in metres, frequency in hertz, power in dBm, gains in dBi;
//! * angles in radians internally; degrees appear only at IO boundaries;
//! * the link axis is `+x`, the transmitter sits at `x = 0` and the receiver
//!   at `x = d`; `y` is lateral (left wall at `y = 0`) and `z` is height
//!   (ground at `z = 0`);
//! * grazing angles are measured from the reflecting surface, not from its
//!   normal.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod antenna;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod raypower;
pub mod reflection;
pub mod stats;
pub mod sweep;
pub mod units;

pub use antenna::AntennaPattern;
pub use error::{Error, Result};
pub use geometry::{Direction, Environment, Ray, Scenario, Surface};
pub use raypower::{PowerCurve, RayContribution};
pub use reflection::{Material, MaterialDb};
pub use stats::{Ecdf, PathLossFit};
pub use sweep::Model;
pub use units::Extended;
