//! Continuous and discrete domain geometry: catalog shapes, lattice
//! discretizations, boundary regularity, and dyadic approximations.

pub mod domain;
pub mod dyadic;
pub mod grid;
pub mod regularity;

pub use domain::{parse_domain, parse_domain_dim, AaBox, ContinuousDomain, DomainKind};
pub use dyadic::{dyadic_approximations, DyadicCover, DyadicCube};
pub use grid::{discrete_ahlfors, discrete_boundary, discretize, lattice_count_check, GridSet};
pub use regularity::{
    boundary_measure, boundary_samples, continuous_ahlfors_estimate, BoundarySample,
    RegularityMode, RegularityReport,
};
