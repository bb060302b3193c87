//! Position-dependent effective mass (PDEM) toolkit.
//!
//! * [`orderings`]: von Roos ambiguity parameters, the η coefficients and the
//!   orderings that make the Liouville-mapped problem ordering-free.
//! * [`transform`]: the map `y = ∫ √m dx`, wavefunction remapping and the
//!   ordering-dependent effective-potential term.
//! * [`solver`]: finite-difference bound states and the isospectrality report.
//! * [`scattering`]: reflection and transmission at an abrupt heterojunction.
//!
//! Units follow ħ² = 2, so the Schrödinger prefactor `2m/ħ²` is just `m`.

// `!(a > b)` deliberately rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod grid;
pub mod orderings;
pub mod profile;
pub mod scattering;
pub mod solver;
pub mod transform;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::UniformGrid;
pub use orderings::{
    check_constraints, compute_etas, named_orderings, solve_isospectral_orderings, ConstraintReport, EtaPair, Ordering,
    SolveMode,
};
pub use profile::{MassProfile, PotentialProfile, Profile};
pub use scattering::{
    high_energy_limit_check, match_amplitudes, scattering_coefficients, transmission_spectrum, wavevectors,
    ScatteringResult, StepJunction, TransmissionMode,
};
pub use solver::{isospectral_report, solve_constant_mass_1d, solve_pdem_x, EigenReport};
pub use transform::{
    coordinate_map, effective_potential_term, invert_map, map_wavefunction, x_space_coefficients, CoordinateMap,
    MapDirection, MappedProblem,
};
