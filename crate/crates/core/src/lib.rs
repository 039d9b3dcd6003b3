//! Exact output distributions, samplers and bounds for Boson Sampling with
//! Gaussian network noise, boson losses with compensating dark counts, and
//! partially distinguishable bosons.

pub mod analysis;
pub mod cli;
pub mod combinat;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod samplers;
