//! Independent ground truths for the driven oscillator: the closed-form
//! Floquet solution and brute-force one-period propagation.

pub mod analytic;
pub mod propagator;

pub use analytic::{
    circular_distance, displacement_column, exact_floquet_coefficients, exact_quasienergy,
    exact_quasienergy_unfolded, fold, stark_shift, ClassicalTrajectory,
};
pub use propagator::{
    one_period_matrix, propagate_one_period, raT_metric, strobe_eigenpairs, unitarity_defect, StrobeMatch,
    StrobePair, StrobeSpectrum,
};
