//! Exact analysis of small state spaces.
//!
//! A [`StateSpace`] lists every realization of a degree sequence. On top of
//! it this module builds the exact transition matrices of both chains,
//! partitions states into isomorphism classes, projects lumpable chains onto
//! the classes, and computes variation distances, mixing times and spectra.
//!
//! Floating-point results are checked against fixed tolerances: 1e-12 for
//! stochasticity and detailed balance, 1e-9 for lumpability before
//! projecting, 1e-10 for reversibility before a spectral decomposition.

mod families;
mod lump;
mod mixing;
mod space;
mod spectral;
mod transition;
mod verify;

pub use families::{binomial_family, quadratic_family};
pub use lump::{
    check_lumpability, iso_partition, lift_distribution, project, project_distribution, stationary, variation_distance,
    Distribution, IsoPartition,
};
pub use mixing::{
    distance_trace, mixing_time, mixing_time_lifted, state_graph_distance, worst_case_trace, MixingReport, MAX_ITERATIONS,
};
pub use space::{enumerate, StateSpace, DEFAULT_STATE_CAP};
pub use spectral::{jacobi_eigenvalues, spectral, SpectralSummary, MAX_SPECTRAL_DIM};
pub use transition::{curveball_matrix, exact_row, switch_matrix, transition_matrix, TransitionMatrix};
pub use verify::{
    detailed_balance, empirical_step_counts, multinomial_test, verify, Check, MultinomialTest, VerifyOptions, VerifyReport,
    STRUCTURAL_TOL,
};
