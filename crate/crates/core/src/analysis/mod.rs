//! Closed-form and semi-numerical analysis of the rest and moving
//! configurations: cubic roots, coefficient systems, residual equations,
//! nonexistence searches and gain certificates.

pub mod certificate;
pub mod cubic;
pub mod residuals;
pub mod search;

pub use certificate::{gain_certificate, Clause, GainCertificate, Regime, Verdict};
pub use cubic::{cubic_f_roots, solve_reduced_cubic_positive, threshold_distance, CubicPositiveRoots, FRoots, ReducedCubic};
pub use residuals::{
    back_substitution_coefficients, coefficients_equilibrium, coefficients_moving, d_param, difference_residual,
    evaluate_eq18_gap, iso_equilibrium_residuals, iso_moving_residuals, quadratic_branch_y, vector_equation_residual,
    BackSubstitution, Branch, BranchRoots, Coefficients, GapPoint,
};
pub use search::{find_zeros, search_equilibrium_zeros, search_moving_zeros, SearchBox, SearchOptions, SearchSummary, Zero};
