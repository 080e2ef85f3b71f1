pub mod config;
pub mod eos;
pub mod grid;
pub mod lane_emden;
pub mod error;
pub mod math;
pub mod potential;
pub mod resolvent;
pub mod runner;
pub mod pn;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
