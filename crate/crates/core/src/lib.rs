//! Coherent-error analysis of the universal ZXZXZ single-qubit decomposition.
//!
//! A target gate `U(θ, φ, λ)` is compiled as
//! `Z(φ − π/2) · X(π/2) · Z(π − θ) · X(π/2) · Z(λ − π/2)` with virtual Z
//! rotations. When the physical `X(π/2)` pulse is itself a miscalibrated
//! `U(θx, φx, λx)`, this crate answers:
//!
//! * what unitary is actually produced ([`decomposition`]),
//! * how close it is to the target with and without retuning ([`fidelity`]),
//! * which retuned parameters to program ([`mitigation`]),
//! * how much of the parameter space remains reachable ([`universality`]),
//! * and tabulates all of the above over parameter sweeps ([`sweep`]).

pub mod decomposition;
pub mod error;
pub mod fidelity;
pub mod mitigation;
mod optim;
pub mod su2;
pub mod sweep;
pub mod universality;

pub use decomposition::{
    classify_case, effective_params_case2, effective_params_case3, erroneous_decomposition,
    erroneous_decomposition_closed_form, erroneous_x_gate, ideal_decomposition, z_rotation,
    CaseKind, EffectiveParams, XErrorModel, CASE_TOLERANCE,
};
pub use error::{Error, Result};
pub use fidelity::{
    average_best_fidelity, average_original_fidelity, best_fidelity_analytic, fidelity_report,
    original_fidelity_analytic, original_fidelity_special_case, process_fidelity, FidelityReport,
};
pub use mitigation::{
    mitigate_closed_form, mitigate_numeric, MitigationMethod, MitigationResult, SearchConfig,
};
pub use su2::{
    canonicalize_params, mat_from_params, params_from_matrix, phase_invariant_distance, GateParams,
    Unitary2,
};
pub use sweep::{run_sweep, Column, OutputFormat, SweepAxis, SweepConfig, SweepMode, SweepTable};
pub use universality::{
    axis_angle_from_unitary, is_coverable, uncoverable_in_sphere, unitary_from_axis_angle,
    universality_analytic, universality_monte_carlo, AxisAngle, UniversalityReport,
};
