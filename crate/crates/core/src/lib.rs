//! Effective capacity and energy efficiency of pilot-assisted fixed-rate
//! transmission over block-fading channels with imperfect channel knowledge.
//!
//! * [`link_model`]: link configuration, MMSE estimate statistics, effective SNR.
//! * [`training`]: optimal pilot energy fraction.
//! * [`effcap`]: effective capacity, optimal fixed rate, bit energy.
//! * [`wideband`]: multichannel model and wideband bit-energy limits.
//! * [`queue_sim`]: Monte Carlo buffer simulation of the ON-OFF service process.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod effcap;
pub mod error;
pub mod link_model;
pub mod queue_sim;
pub mod solve;
pub mod training;
pub mod wideband;

pub use effcap::{EffCapResult, QosSpec};
pub use error::{Error, Result};
pub use link_model::LinkConfig;
pub use training::TrainingSolution;
pub use wideband::{WidebandAsymptotics, WidebandConfig};
