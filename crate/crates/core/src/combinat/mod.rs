//! Permutations, counting functions and enumeration of output configurations.

mod configuration;
mod counting;
mod identities;
mod permutation;

use thiserror::Error;

pub use self::configuration::{
    collision_free_port_lists, configuration_count, enumerate_configurations,
    enumerate_subconfigurations, mask_elements, subsets_of_size, visit_subconfigurations,
    ConfigurationIndexer, OutputConfiguration, PortLists, MAX_CONFIGURATIONS,
};
pub use self::counting::{
    binomial, binomial_f64, chi, chi_by_enumeration, derangement_count, factorial, factorial_f64,
    MAX_EXACT_N,
};
pub use self::identities::{
    configuration_sum_sides, symmetric_sum_sides, verify_symmetric_sum_identity, IDENTITY_MAX_N,
};
pub use self::permutation::{all_permutations, fixed_point_count, Permutation};

#[derive(Debug, Error)]
pub enum CombinatError {
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("{s} fixed points requested for a permutation of {n} elements")]
    FixedPointsExceedDegree { n: usize, s: usize },
    #[error("exact count overflows for n = {n} (limit {limit})")]
    Overflow { n: usize, limit: usize },
    #[error("occupation {0} does not fit in a port counter")]
    OccupationTooLarge(usize),
    #[error("port {port} out of range for {modes} modes")]
    PortOutOfRange { port: usize, modes: usize },
    #[error("at least one mode is required")]
    NoModes,
    #[error("{count} configurations of {n} bosons in {m} modes exceed the enumeration guard")]
    TooManyConfigurations { n: usize, m: usize, count: u128 },
    #[error("sub-configuration of size {n} requested from a configuration of size {total}")]
    SubsetTooLarge { n: usize, total: usize },
    #[error("identity check limited to N <= {limit}, got {n}")]
    IdentityTooLarge { n: usize, limit: usize },
}
