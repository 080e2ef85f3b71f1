//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

pub mod ball;
pub mod ode;
pub mod direct;
pub mod fluid;
pub mod jet;
