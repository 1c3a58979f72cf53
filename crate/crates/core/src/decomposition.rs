//! The five-gate `Z X Z X Z` decomposition, ideal and with a miscalibrated
//! `X(π/2)`.
//!
//! Two independent routes to the erroneous unitary are provided: the literal
//! product of five matrices ([`erroneous_decomposition`]) and the closed-form
//! entries ([`erroneous_decomposition_closed_form`]). They differ by the
//! global phase `e^{−i(λ+φ)/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::{canonicalize_with_phase, u3, wrap_2pi, wrap_pi, GateParams, Unitary2};

/// Angle tolerance (radians) for deciding whether an error component is zero.
pub const CASE_TOLERANCE: f64 = 1e-9;

/// Off-diagonal moduli below this fold the effective gate onto a diagonal.
const DEGENERATE_OFF_DIAGONAL: f64 = 1e-14;

/// Coherent error state of the physical `X(π/2)` pulse, which is realized as
/// `U(θx, φx, λx)` instead of `U(π/2, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XErrorModel {
    pub theta_x: f64,
    pub phi_x: f64,
    pub lambda_x: f64,
}

impl XErrorModel {
    pub const fn new(theta_x: f64, phi_x: f64, lambda_x: f64) -> Self {
        Self {
            theta_x,
            phi_x,
            lambda_x,
        }
    }

    pub const fn ideal() -> Self {
        Self::new(FRAC_PI_2, 0.0, 0.0)
    }

    /// Over/under-rotation `δ` with the given phase errors.
    pub fn from_delta(delta: f64, phi_x: f64, lambda_x: f64) -> Self {
        Self::new(FRAC_PI_2 + delta, phi_x, lambda_x)
    }

    /// `δ = θx − π/2` of the stored (not canonicalized) value.
    pub fn delta(&self) -> f64 {
        self.theta_x - FRAC_PI_2
    }

    pub fn a_plus(&self) -> f64 {
        self.lambda_x + self.phi_x
    }

    pub fn a_minus(&self) -> f64 {
        self.lambda_x - self.phi_x
    }

    pub fn is_finite(&self) -> bool {
        self.theta_x.is_finite() && self.phi_x.is_finite() && self.lambda_x.is_finite()
    }

    /// The same physical pulse with θx ∈ [0, π], hence δ ∈ [−π/2, π/2].
    /// Only the global phase of the pulse can change, so every decomposition
    /// built from it is unchanged up to global phase.
    pub fn canonical(&self) -> XErrorModel {
        let (p, _) = canonicalize_with_phase(self.theta_x, self.phi_x, self.lambda_x);
        XErrorModel::new(p.theta, p.phi, p.lambda)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("non-finite error model {self:?}")))
        }
    }
}

impl Default for XErrorModel {
    fn default() -> Self {
        Self::ideal()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    Ideal,
    /// Error on θx only.
    Case1,
    /// Errors on φx and/or λx only.
    Case2,
    /// Error on θx together with φx and/or λx.
    Case3,
}

impl CaseKind {
    /// Whether the error leaves every target reachable.
    pub fn preserves_universality(self) -> bool {
        matches!(self, CaseKind::Ideal | CaseKind::Case2)
    }
}

/// `e^{i·global_phase} · U(theta_eff, phi_eff, lambda_eff)` reproduces the
/// closed-form erroneous unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub theta_eff: f64,
    pub phi_eff: f64,
    pub lambda_eff: f64,
    pub global_phase: f64,
}

impl EffectiveParams {
    pub fn params(&self) -> GateParams {
        GateParams::new(self.theta_eff, self.phi_eff, self.lambda_eff)
    }

    pub fn matrix(&self) -> Unitary2 {
        u3(self.theta_eff, self.phi_eff, self.lambda_eff).with_phase(self.global_phase)
    }
}

/// `diag(e^{−iα/2}, e^{iα/2})`.
pub fn z_rotation(angle: f64) -> Unitary2 {
    Unitary2::diagonal(
        Complex64::from_polar(1.0, -angle / 2.0),
        Complex64::from_polar(1.0, angle / 2.0),
    )
}

fn five_gate_product(p: &GateParams, x: &Unitary2) -> Unitary2 {
    z_rotation(p.phi - FRAC_PI_2)
        * *x
        * z_rotation(PI - p.theta)
        * *x
        * z_rotation(p.lambda - FRAC_PI_2)
}

/// `Z(φ − π/2) X(π/2) Z(π − θ) X(π/2) Z(λ − π/2)`; equal to
/// `e^{−i(λ+φ)/2} U(θ, φ, λ)`.
pub fn ideal_decomposition(p: &GateParams) -> Result<Unitary2> {
    erroneous_decomposition(p, &XErrorModel::ideal())
}

pub fn erroneous_x_gate(e: &XErrorModel) -> Result<Unitary2> {
    e.check_finite()?;
    Ok(u3(e.theta_x, e.phi_x, e.lambda_x))
}

/// Direct product of the five gates with each `X(π/2)` replaced by the
/// erroneous pulse.
pub fn erroneous_decomposition(p: &GateParams, e: &XErrorModel) -> Result<Unitary2> {
    if !p.is_finite() {
        return Err(Error::domain(format!("non-finite gate parameters {p:?}")));
    }
    let x = erroneous_x_gate(e)?;
    Ok(five_gate_product(p, &x))
}

/// Infallible product used by the optimizer and sweeps; inputs are finite.
pub(crate) fn decomposition_unchecked(p: &GateParams, e: &XErrorModel) -> Unitary2 {
    five_gate_product(p, &u3(e.theta_x, e.phi_x, e.lambda_x))
}

/// Closed-form entries of the erroneous decomposition with the global phase
/// `e^{−i(λ+φ)/2}` removed.
pub fn erroneous_decomposition_closed_form(p: &GateParams, e: &XErrorModel) -> Result<Unitary2> {
    if !p.is_finite() {
        return Err(Error::domain(format!("non-finite gate parameters {p:?}")));
    }
    e.check_finite()?;
    let (theta, phi, lambda) = (p.theta, p.phi, p.lambda);
    let (lx, px, ap) = (e.lambda_x, e.phi_x, e.a_plus());
    let half = theta / 2.0;
    let cx2 = (e.theta_x / 2.0).cos().powi(2);
    let sx2 = (e.theta_x / 2.0).sin().powi(2);
    let sx_half = e.theta_x.sin() / 2.0;
    let cis = |a: f64| Complex64::from_polar(1.0, a);

    let u11 = cis(half) * cx2 + cis(-half + ap) * sx2;
    let u12 = (cis(-half + lambda + lx + ap) - cis(half + lambda + lx)) * sx_half;
    let u21 = (cis(-half + phi + px + ap) - cis(half + phi + px)) * sx_half;
    let u22 = cis(half + lambda + phi + ap) * sx2 + cis(-half + lambda + phi + 2.0 * ap) * cx2;
    Ok(Unitary2::from_entries(u11, u12, u21, u22))
}

fn is_zero_angle(x: f64, tol: f64) -> bool {
    wrap_pi(x).abs() < tol
}

/// Classifies the error by which of (δ, φx, λx) are non-zero, comparing
/// angles modulo 2π after bringing θx into [0, π].
pub fn classify_case(e: &XErrorModel, tol: f64) -> CaseKind {
    let c = e.canonical();
    let delta_zero = c.delta().abs() < tol;
    let phases_zero = is_zero_angle(c.phi_x, tol) && is_zero_angle(c.lambda_x, tol);
    match (delta_zero, phases_zero) {
        (true, true) => CaseKind::Ideal,
        (false, true) => CaseKind::Case1,
        (true, false) => CaseKind::Case2,
        (false, false) => CaseKind::Case3,
    }
}

/// Effective gate when θx = π/2: the phase errors shift θ by `−(λx + φx)`
/// and φ, λ by `φx`, `λx`. Result is canonicalized, with the global phase
/// adjusted accordingly.
pub fn effective_params_case2(p: &GateParams, e: &XErrorModel) -> Result<EffectiveParams> {
    if !p.is_finite() {
        return Err(Error::domain(format!("non-finite gate parameters {p:?}")));
    }
    e.check_finite()?;
    match classify_case(e, CASE_TOLERANCE) {
        CaseKind::Case2 | CaseKind::Ideal => {}
        other => {
            return Err(Error::domain(format!(
                "effective_params_case2 requires θx = π/2, got {other:?}"
            )))
        }
    }
    // The canonical model has θx within tolerance of π/2 exactly; the stored
    // one may differ from it by a global sign, which cancels in X·Z·X.
    let c = e.canonical();
    let ap = c.a_plus();
    let gamma2 = (ap / 2.0).sin().atan2((ap / 2.0).cos());
    let (q, alpha) = canonicalize_with_phase(p.theta - ap, p.phi + c.phi_x, p.lambda + c.lambda_x);
    Ok(EffectiveParams {
        theta_eff: q.theta,
        phi_eff: q.phi,
        lambda_eff: q.lambda,
        global_phase: wrap_pi(gamma2 + alpha),
    })
}

/// The phase angles γ₃, γ₄, γ₅ of the general closed form, each taken with a
/// two-argument arctangent of its (sine part, cosine part) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case3Phases {
    pub gamma3: f64,
    pub gamma4: Option<f64>,
    pub gamma5: f64,
    /// Modulus of the diagonal entries.
    pub diag_modulus: f64,
    /// Signed off-diagonal modulus `sin θx · |sin((θ − a₊)/2)|`.
    pub off_diag: f64,
}

impl Case3Phases {
    /// `(2γ₄ − 2γ₃ − π) − (γ₅ − γ₃)` wrapped into (−π, π]; `None` when γ₄ is
    /// undefined.
    pub fn identity_residual(&self) -> Option<f64> {
        self.gamma4
            .map(|g4| wrap_pi((2.0 * g4 - 2.0 * self.gamma3 - PI) - (self.gamma5 - self.gamma3)))
    }
}

pub fn case3_phases(theta: f64, e: &XErrorModel) -> Case3Phases {
    let ap = e.a_plus();
    let h = theta / 2.0;
    let b = ap - h;
    let cx2 = (e.theta_x / 2.0).cos().powi(2);
    let sx2 = (e.theta_x / 2.0).sin().powi(2);
    let (sh, ch) = h.sin_cos();
    let (sb, cb) = b.sin_cos();

    let (g3_sin, g3_cos) = (sh * cx2 + sb * sx2, ch * cx2 + cb * sx2);
    let (g4_sin, g4_cos) = (sh - sb, ch - cb);
    let (g5_sin, g5_cos) = (sh * sx2 + sb * cx2, ch * sx2 + cb * cx2);

    let off_diag = e.theta_x.sin() * ((theta - ap) / 2.0).sin().abs();
    let gamma4 = if off_diag.abs() < DEGENERATE_OFF_DIAGONAL || (g4_sin == 0.0 && g4_cos == 0.0) {
        None
    } else {
        Some(g4_sin.atan2(g4_cos))
    };
    Case3Phases {
        gamma3: g3_sin.atan2(g3_cos),
        gamma4,
        gamma5: g5_sin.atan2(g5_cos),
        diag_modulus: g3_sin.hypot(g3_cos),
        off_diag,
    }
}

/// Effective gate for an error on θx, with or without phase errors.
///
/// `θ_eff = 2 arcsin(sin θx |sin((θ − a₊)/2)|)`, `λ_eff = λ + λx + γ₄ − π/2 − γ₃`,
/// `φ_eff = φ + φx + γ₄ − π/2 − γ₃` and the global phase is γ₃. When the
/// off-diagonal entries vanish the gate is diagonal: θ_eff = 0, φ_eff = 0 and
/// the relative phase goes into λ_eff.
pub fn effective_params_case3(p: &GateParams, e: &XErrorModel) -> Result<EffectiveParams> {
    if !p.is_finite() {
        return Err(Error::domain(format!("non-finite gate parameters {p:?}")));
    }
    e.check_finite()?;
    match classify_case(e, CASE_TOLERANCE) {
        CaseKind::Case1 | CaseKind::Case3 => {}
        other => {
            return Err(Error::domain(format!(
                "effective_params_case3 requires δ ≠ 0, got {other:?}"
            )))
        }
    }
    let ph = case3_phases(p.theta, e);
    let Some(gamma4) = ph.gamma4 else {
        return Ok(EffectiveParams {
            theta_eff: 0.0,
            phi_eff: 0.0,
            lambda_eff: wrap_2pi(p.lambda + p.phi + e.a_plus() + ph.gamma5 - ph.gamma3),
            global_phase: ph.gamma3,
        });
    };
    debug_assert!(
        ph.identity_residual().is_none_or(|r| r.abs() < 1e-8),
        "γ identity violated: {:?}",
        ph.identity_residual()
    );

    // A negative sin θx (θx outside [0, π]) flips the sign of both
    // off-diagonal entries, i.e. shifts both phases by π.
    let flip = if ph.off_diag < 0.0 { PI } else { 0.0 };
    let shift = gamma4 - FRAC_PI_2 - ph.gamma3 + flip;
    Ok(EffectiveParams {
        theta_eff: 2.0 * ph.off_diag.abs().atan2(ph.diag_modulus),
        phi_eff: wrap_2pi(p.phi + e.phi_x + shift),
        lambda_eff: wrap_2pi(p.lambda + e.lambda_x + shift),
        global_phase: ph.gamma3,
    })
}

/// Dispatches to the closed form matching the error's case.
pub fn effective_params(p: &GateParams, e: &XErrorModel) -> Result<EffectiveParams> {
    match classify_case(e, CASE_TOLERANCE) {
        CaseKind::Ideal | CaseKind::Case2 => effective_params_case2(p, e),
        CaseKind::Case1 | CaseKind::Case3 => effective_params_case3(p, e),
    }
}
