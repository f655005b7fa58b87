//! Decay of a discrete level coupled to a continuum, computed from the
//! analytic structure of its Green's function and checked against exact
//! diagonalization of finite discretizations.

// `!(a < b)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod band;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod poles;
pub mod quad;
pub mod self_energy;
pub mod survival;

pub use band::{BandModel, ModelKind};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use oracle::{DiscreteModel, Scheme};
pub use poles::Pole;
pub use self_energy::{SelfEnergySample, SheetPoint, Side};
pub use survival::{Method, QuadratureConfig, SurvivalSeries};
