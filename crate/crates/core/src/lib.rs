//! Inconsistency analysis for pairwise-comparison (PC) matrices.
//!
//! The crate measures how far a reciprocal matrix of ratios is from
//! satisfying `a_ik = a_ij * a_jk` on every triad, using the normalized
//! indicator Kii (bounded in `[0, 1)`), and contrasts it with the unbounded
//! distance `|a_ik - a_ij * a_jk|`, which fails as an inconsistency measure.
//!
//! ```
//! use pc_inconsistency::{kii_matrix, PcMatrix};
//!
//! let m = PcMatrix::from_upper_triangle(3, &[2.0, 5.0, 3.0]).unwrap();
//! let report = kii_matrix(&m).unwrap();
//! assert!((report.matrix_kii - 1.0 / 6.0).abs() < 1e-12);
//! assert!(report.consistent); // below the 1/3 tolerance
//! ```

pub mod cli;
pub mod consistency;
pub mod error;
pub mod experiments;
pub mod indicators;
pub mod io;
pub mod matrix;
pub mod normalization;

pub use consistency::{
    complete_from_generators, complete_from_tree, consistent_alternatives, reduce, reduce_step, GeneratorSet,
    ReductionOptions, ReductionStep, ReductionTrace, TriadElement,
};
pub use error::{Error, Result};
pub use experiments::{
    constant_offset_table, convergence_table, monte_carlo_comparison, stick_example, tn_triad, ConvergenceRow,
    MonteCarloSummary, StickComparison,
};
pub use indicators::{
    additive_kii_triad, distance_indicator_triad, kii_matrix, kii_matrix_with_tolerance, kii_triad, kii_triad_exp,
    relative_error_triad, relative_error_true_value, saaty_ci, zero_one_indicator, IndicatorReport, TriadRecord,
    DEFAULT_TOLERANCE,
};
pub use matrix::{AdditivePcMatrix, AdditiveTriad, PcMatrix, Triad};
pub use normalization::{check_unit_interval_stability, NormalizationMap};
