//! Splitting types of vector bundles on rational curves, their degenerations
//! to nodal curves, slope panels of Fano varieties, and lattice-point
//! counting in the nef cone.
//!
//! All arithmetic is exact: integers for degrees, [`Rational`] for slopes
//! and counting sums.

pub mod counting;
pub mod error;
pub mod model_file;
pub mod nodal;
pub mod polyhedral;
pub mod rational;
pub mod splitting;
pub mod stability;
pub mod variety;

pub use counting::{
    count_n, count_n_liberated, lattice_slice, r_min, ratio_check, CountReport, CountRow,
    CountingConfig, EpsSchedule,
};
pub use error::{Error, Result};
pub use model_file::ModelFile;
pub use nodal::{
    admissible_smoothings, degbd, degbd_m1_closed_form, glue, sharpness_witness, Alignment,
    AlignmentSpec, NodalType, SharpnessWitness, TorsionFreeType,
};
pub use rational::Rational;
pub use splitting::{SlopePanel, SplittingType};
pub use stability::{
    balance, balance_step, hn_restriction_bounds, minimal_slope_ratio_lower_bound, sp_feasible,
    BalanceOptions, BalanceTrace, FiltrationData, Policy,
};
pub use variety::{esp, liberated_lower_bound, validate, ValidationReport, VarietyModel};
