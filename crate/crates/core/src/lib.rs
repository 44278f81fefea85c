//! Geometry-based stochastic model of angle-of-arrival (AOA) dispersion for
//! radio sources with directional antennas, and the bearing-error statistics
//! derived from it.
//!
//! The pipeline runs in four stages:
//!
//! - [`profile`]: a power delay profile is reduced to time-clusters
//!   (delays and powers) by comparing it against its dB trend line.
//! - [`geometry`]: each delayed cluster becomes a confocal ellipse with foci
//!   at the transmitter and receiver; departure angles map to arrival angles.
//! - [`antenna`] and [`montecarlo`]: departure angles are drawn from a
//!   Gaussian transmit pattern, local scattering from a von Mises law, and
//!   powers from uniform laws, producing a [`montecarlo::PathSet`].
//! - [`estimation`]: path sets are binned into an angular probability mass
//!   function, from which the angle spread, mean offset, bearing-line error
//!   and correction are computed.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! runner and the command-line front end live in the `bearing-sim` crate.
//!
//! Angles are radians internally and degrees at the estimation boundary,
//! always wrapped to `(-π, π]` (or `(-180°, 180°]`).

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod angle;
pub mod antenna;
mod error;
pub mod estimation;
pub mod geometry;
pub mod montecarlo;
pub mod profile;
pub mod scenario;
pub mod special;

#[doc(inline)]
pub use self::{
    antenna::AntennaConfig,
    error::{Error, Result},
    estimation::{AngularPmf, Correction, DispersionReport, RegressionResult},
    geometry::{Ellipse, GeometryConfig},
    montecarlo::{Path, PathCounts, PathSet, ScatteringConfig},
    profile::{Cluster, ClusterOptions, ClusterSet, DelayProfile, Trend},
    scenario::Scenario,
};
