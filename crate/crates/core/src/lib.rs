//! Exact numerical laboratory for anomalous relaxation in chaotic spin
//! chains: statevector evolution of a U(1)-symmetric Floquet circuit and a
//! mixed-field Ising chain, subsystem thermalization witnesses, a classical
//! fluctuating-hydrodynamics ensemble, and the fitting/crossing analysis
//! that ties the two together.

pub mod analysis;
pub mod config;
pub mod eigen;
pub mod error;
pub mod hydro;
pub mod initial_states;
pub mod io;
pub mod models;
pub mod observables;
pub mod parallel;
pub mod rng;
pub mod run;
pub mod statevector;

pub use error::{Error, Result};
