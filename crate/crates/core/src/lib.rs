//! Secrecy analysis of active-RIS-assisted NOMA downlinks with a closed-form
//! engine ([`analytic`]) and an independent Monte Carlo engine
//! ([`montecarlo`]) built on the same scenario model.

pub mod analytic;
pub mod budget;
pub mod model;
pub mod montecarlo;
pub mod specfun;
