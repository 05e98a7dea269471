//! Energy-efficiency simulator for the multi-antenna downlink.
//!
//! The library models a base station that adapts bandwidth, transmit
//! power and transmission mode (single-user eigenbeamforming or
//! multi-user block diagonalization, with the active antenna and user
//! counts) to maximize bits-per-Joule efficiency when its channel
//! knowledge is a Doppler-aged copy of the truth.
//!
//! Pipeline: [`channel`] draws correlated (current, delayed) channel
//! pairs, [`linkcap`] builds precoders and evaluates realized and
//! estimated capacities, [`optimizer`] solves the per-mode transmit
//! power fixed point, [`ergodic`] supplies closed-form averages for
//! offline decisions, [`modeswitch`] compares modes, and [`harness`]
//! runs the Monte Carlo sweeps behind the command-line tool.
//!
//! All numeric code is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `f64` aliases below are what the harness and
//! most callers use.

pub mod channel;
pub mod ergodic;
pub mod error;
pub mod harness;
pub mod linkcap;
pub mod modeswitch;
pub mod numerics;
pub mod optimizer;
pub mod power;
pub mod real;

pub use error::{Error, Result};
pub use real::Real;

/// Dynamically-sized complex matrix over the scalar `T`.
pub type CMatrix<T> = nalgebra::DMatrix<nalgebra::Complex<T>>;

/// `f64` instantiations of the scalar-generic types.
pub type Scenario64 = channel::Scenario<f64>;
pub type UserLink64 = channel::UserLink<f64>;
pub type ChannelSet64 = channel::ChannelSet<f64>;
pub type LinkStats64 = channel::LinkStats<f64>;
pub type PowerModel64 = power::PowerModel<f64>;
pub type OperatingPoint64 = optimizer::OperatingPoint<f64>;
pub type SwitchDecision64 = modeswitch::SwitchDecision<f64>;
pub type CMatrix64 = CMatrix<f64>;
