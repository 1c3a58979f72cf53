//! Single-qubit unitaries in the `U(θ, φ, λ)` parameterization.
//!
//! ```text
//! U(θ, φ, λ) = [ cos(θ/2)              −i e^{iλ} sin(θ/2)      ]
//!              [ −i e^{iφ} sin(θ/2)    e^{i(λ+φ)} cos(θ/2)     ]
//! ```
//!
//! `θ` has period 4π (θ + 2π only flips the global sign) and
//! `U(−θ, φ, λ) = U(θ, φ + π, λ + π)`, so every gate has a canonical
//! representative with θ ∈ [0, π] and φ, λ ∈ [0, 2π).

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unitarity tolerance applied to matrices supplied from outside the crate.
pub const INPUT_UNITARY_TOL: f64 = 1e-10;

/// Entries with modulus below this are treated as exact zeros when reading
/// phases back out of a matrix.
const ZERO_AMPLITUDE: f64 = 1e-13;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_2pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_2pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A `(θ, φ, λ)` triple. Values are stored as given; use
/// [`GateParams::canonicalize`] to obtain the canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl GateParams {
    pub const fn new(theta: f64, phi: f64, lambda: f64) -> Self {
        Self { theta, phi, lambda }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.phi.is_finite() && self.lambda.is_finite()
    }

    pub fn is_canonical(&self) -> bool {
        (0.0..=PI).contains(&self.theta)
            && (0.0..TAU).contains(&self.phi)
            && (0.0..TAU).contains(&self.lambda)
    }

    pub fn canonicalize(&self) -> Result<GateParams> {
        canonicalize_params(self.theta, self.phi, self.lambda)
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "non-finite gate parameters {self:?}"
            )))
        }
    }
}

impl fmt::Display for GateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(θ={:.6}π, φ={:.6}π, λ={:.6}π)",
            self.theta / PI,
            self.phi / PI,
            self.lambda / PI
        )
    }
}

/// A 2×2 complex matrix known to be unitary.
///
/// Matrices built inside the crate are unitary by construction; matrices from
/// callers go through [`Unitary2::new`], which rejects anything further than
/// [`INPUT_UNITARY_TOL`] from unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [Complex64; 4],
}

impl Unitary2 {
    pub fn new(u11: Complex64, u12: Complex64, u21: Complex64, u22: Complex64) -> Result<Self> {
        let u = Self::from_entries(u11, u12, u21, u22);
        if u.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        let err = u.unitarity_error();
        if err > INPUT_UNITARY_TOL {
            return Err(Error::domain(format!(
                "matrix is not unitary (max |U†U − I| = {err:.3e})"
            )));
        }
        Ok(u)
    }

    pub(crate) const fn from_entries(
        u11: Complex64,
        u12: Complex64,
        u21: Complex64,
        u22: Complex64,
    ) -> Self {
        Self {
            m: [u11, u12, u21, u22],
        }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::from_entries(one, zero, zero, one)
    }

    pub(crate) fn diagonal(a: Complex64, d: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::from_entries(a, zero, zero, d)
    }

    pub fn u11(&self) -> Complex64 {
        self.m[0]
    }
    pub fn u12(&self) -> Complex64 {
        self.m[1]
    }
    pub fn u21(&self) -> Complex64 {
        self.m[2]
    }
    pub fn u22(&self) -> Complex64 {
        self.m[3]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::from_entries(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// Multiplies by the global phase `e^{iα}`.
    pub fn with_phase(&self, alpha: f64) -> Self {
        let p = Complex64::from_polar(1.0, alpha);
        Self {
            m: self.m.map(|z| z * p),
        }
    }

    /// Largest elementwise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        let id = Unitary2::identity();
        p.m.iter()
            .zip(id.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise `|a − b|`, without any phase alignment.
    pub fn max_abs_diff(&self, other: &Unitary2) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise `|a − e^{iα} b|` with α chosen to align the
    /// global phases through `Tr(b†a)`.
    pub fn max_abs_diff_up_to_phase(&self, other: &Unitary2) -> f64 {
        let overlap = (other.adjoint() * *self).trace();
        let alpha = if overlap.norm() > 0.0 {
            overlap.arg()
        } else {
            0.0
        };
        self.max_abs_diff(&other.with_phase(alpha))
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        Unitary2::from_entries(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

/// `U(θ, φ, λ)` without validation; callers guarantee finite inputs.
pub(crate) fn u3(theta: f64, phi: f64, lambda: f64) -> Unitary2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let minus_i = Complex64::new(0.0, -1.0);
    Unitary2::from_entries(
        Complex64::new(c, 0.0),
        minus_i * Complex64::from_polar(s, lambda),
        minus_i * Complex64::from_polar(s, phi),
        Complex64::from_polar(c, lambda + phi),
    )
}

pub fn mat_from_params(p: &GateParams) -> Result<Unitary2> {
    p.check_finite()?;
    Ok(u3(p.theta, p.phi, p.lambda))
}

/// Canonical representative together with the global phase `α` such that
/// `U(raw) = e^{iα} · U(canonical)`.
pub(crate) fn canonicalize_with_phase(theta: f64, phi: f64, lambda: f64) -> (GateParams, f64) {
    let mut t = theta.rem_euclid(2.0 * TAU);
    if t >= 2.0 * TAU {
        t = 0.0;
    }
    let (mut phi, mut lambda) = (phi, lambda);
    let mut phase = 0.0;
    if t >= TAU {
        t -= TAU;
        phase += PI;
    }
    if t > PI {
        // U(t) = −U(t − 2π) = −U(2π − t, φ + π, λ + π)
        t = TAU - t;
        phase += PI;
        phi += PI;
        lambda += PI;
    }
    (
        GateParams::new(t, wrap_2pi(phi), wrap_2pi(lambda)),
        wrap_pi(phase),
    )
}

pub fn canonicalize_params(raw_theta: f64, raw_phi: f64, raw_lambda: f64) -> Result<GateParams> {
    GateParams::new(raw_theta, raw_phi, raw_lambda).check_finite()?;
    Ok(canonicalize_with_phase(raw_theta, raw_phi, raw_lambda).0)
}

/// `1 − |Tr(a†b)| / 2`: zero exactly when `a = e^{iα} b`, one when the two
/// are trace-orthogonal.
pub fn phase_invariant_distance(a: &Unitary2, b: &Unitary2) -> f64 {
    let overlap = (a.adjoint() * *b).trace().norm() / 2.0;
    (1.0 - overlap).clamp(0.0, 1.0)
}

/// Reads canonical `(θ, φ, λ)` back out of a unitary, ignoring global phase.
///
/// At θ = 0 only φ + λ is meaningful; it is reported in φ with λ = 0. At
/// θ = π the global phase is taken as zero and φ, λ come straight from the
/// off-diagonal entries.
pub fn params_from_matrix(u: &Unitary2) -> Result<GateParams> {
    if u.unitarity_error() > INPUT_UNITARY_TOL {
        return Err(Error::domain("params_from_matrix: input is not unitary"));
    }
    let (c, s) = (u.u11().norm(), u.u21().norm());
    let theta = 2.0 * s.atan2(c);

    let (phi, lambda) = if s < ZERO_AMPLITUDE {
        let alpha = u.u11().arg();
        (u.u22().arg() - alpha, 0.0)
    } else if c < ZERO_AMPLITUDE {
        (u.u21().arg() + FRAC_PI_2, u.u12().arg() + FRAC_PI_2)
    } else {
        let alpha = u.u11().arg();
        (
            u.u21().arg() - alpha + FRAC_PI_2,
            u.u12().arg() - alpha + FRAC_PI_2,
        )
    };
    Ok(GateParams::new(
        theta.clamp(0.0, PI),
        wrap_2pi(phi),
        wrap_2pi(lambda),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> Unitary2 {
        Unitary2::from_entries(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
    }

    #[test]
    fn identity_from_zero_params() {
        let u = mat_from_params(&GateParams::new(0., 0., 0.)).unwrap();
        assert!(u.max_abs_diff(&Unitary2::identity()) < 1e-15);
    }

    #[test]
    fn pi_rotation_is_x_up_to_phase() {
        let u = mat_from_params(&GateParams::new(PI, 0., 0.)).unwrap();
        let expect = Unitary2::from_entries(c(0., 0.), c(0., -1.), c(0., -1.), c(0., 0.));
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn half_pi_rotation_is_sqrt_x() {
        let u = mat_from_params(&GateParams::new(FRAC_PI_2, 0., 0.)).unwrap();
        let r = FRAC_1_SQRT_2;
        let expect = Unitary2::from_entries(c(r, 0.), c(0., -r), c(0., -r), c(r, 0.));
        assert!(u.max_abs_diff(&expect) < 1e-15);
        assert!(phase_invariant_distance(&u, &u) < 1e-15);
    }

    #[test]
    fn non_finite_params_rejected() {
        assert!(mat_from_params(&GateParams::new(f64::NAN, 0., 0.)).is_err());
        assert!(canonicalize_params(0., f64::INFINITY, 0.).is_err());
    }

    #[test]
    fn negated_theta_canonicalizes() {
        let p = canonicalize_params(-FRAC_PI_2, 0., 0.).unwrap();
        assert!((p.theta - FRAC_PI_2).abs() < 1e-15);
        assert!((p.phi - PI).abs() < 1e-15);
        assert!((p.lambda - PI).abs() < 1e-15);
    }

    #[test]
    fn two_pi_shift_canonicalizes_to_same_params() {
        let (t, ph, la) = (0.7, 1.3, 4.1);
        let p = canonicalize_params(t + TAU, ph, la).unwrap();
        assert!((p.theta - t).abs() < 1e-14);
        assert!((p.phi - ph).abs() < 1e-14);
        assert!((p.lambda - la).abs() < 1e-14);
        let raw = u3(t + TAU, ph, la);
        assert!(phase_invariant_distance(&raw, &mat_from_params(&p).unwrap()) < 1e-15);
    }

    #[test]
    fn three_halves_pi_canonicalizes() {
        let p = canonicalize_params(1.5 * PI, 0.3, 0.4).unwrap();
        assert!(p.is_canonical());
        let raw = u3(1.5 * PI, 0.3, 0.4);
        assert!(phase_invariant_distance(&mat_from_params(&p).unwrap(), &raw) < 1e-12);
    }

    #[test]
    fn canonical_phase_is_reported() {
        for &(t, ph, la) in &[(1.5 * PI, 0.3, 0.4), (-0.2, 5.0, -1.0), (9.0, 2.0, 3.0)] {
            let (p, alpha) = canonicalize_with_phase(t, ph, la);
            let lhs = u3(t, ph, la);
            let rhs = u3(p.theta, p.phi, p.lambda).with_phase(alpha);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{t} {ph} {la}");
        }
    }

    #[test]
    fn distance_examples() {
        let u = u3(0.4, 1.1, 2.9);
        assert!(phase_invariant_distance(&u, &u) < 1e-15);
        assert!(phase_invariant_distance(&u, &u.with_phase(PI / 3.0)) < 1e-15);
        let d = phase_invariant_distance(&Unitary2::identity(), &pauli_x());
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_unitary_input_rejected() {
        let bad = Unitary2::new(c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.));
        assert!(matches!(bad, Err(Error::Domain(_))));
        let ok = Unitary2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.));
        assert!(ok.is_ok());
    }

    #[test]
    fn params_from_identity() {
        let p = params_from_matrix(&Unitary2::identity()).unwrap();
        assert_eq!(p, GateParams::new(0., 0., 0.));
    }

    #[test]
    fn params_from_degenerate_theta_zero_folds_into_phi() {
        let u = u3(0.0, 1.0, 2.0).with_phase(0.7);
        let p = params_from_matrix(&u).unwrap();
        assert_eq!(p.lambda, 0.0);
        assert!((p.phi - 3.0).abs() < 1e-12);
        assert!(phase_invariant_distance(&mat_from_params(&p).unwrap(), &u) < 1e-12);
    }

    #[test]
    fn params_from_degenerate_theta_pi() {
        let u = u3(PI, 1.0, 2.0);
        let p = params_from_matrix(&u).unwrap();
        assert!((p.theta - PI).abs() < 1e-12);
        assert!(phase_invariant_distance(&mat_from_params(&p).unwrap(), &u) < 1e-12);
    }

    #[test]
    fn params_from_hadamard_like() {
        let target = GateParams::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
        let p = params_from_matrix(&mat_from_params(&target).unwrap()).unwrap();
        assert!((p.theta - target.theta).abs() < 1e-12);
        assert!((p.phi - target.phi).abs() < 1e-12);
        assert!((p.lambda - target.lambda).abs() < 1e-12);
    }

    fn angle_gap(a: f64, b: f64) -> f64 {
        wrap_pi(a - b).abs()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn constructor_output_is_unitary(t in -10.0f64..10.0, ph in -10.0f64..10.0, la in -10.0f64..10.0) {
            let u = u3(t, ph, la);
            prop_assert!(u.unitarity_error() < 1e-12);
            prop_assert!((u.det().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn canonicalize_is_idempotent_and_phase_equivalent(t in -20.0f64..20.0, ph in -20.0f64..20.0, la in -20.0f64..20.0) {
            let p = canonicalize_params(t, ph, la).unwrap();
            prop_assert!(p.is_canonical());
            let q = p.canonicalize().unwrap();
            prop_assert_eq!(p, q);
            let d = phase_invariant_distance(&u3(t, ph, la), &mat_from_params(&p).unwrap());
            prop_assert!(d < 1e-12);
        }

        #[test]
        fn round_trip_params(t in 1e-6f64..(PI - 1e-6), ph in 0.0f64..TAU, la in 0.0f64..TAU) {
            let p = GateParams::new(t, ph, la);
            let back = params_from_matrix(&mat_from_params(&p).unwrap()).unwrap();
            prop_assert!((back.theta - t).abs() < 1e-9);
            prop_assert!(angle_gap(back.phi, ph) < 1e-9);
            prop_assert!(angle_gap(back.lambda, la) < 1e-9);
        }

        #[test]
        fn distance_symmetric_and_zero_on_phase_orbit(
            a in prop::array::uniform3(-5.0f64..5.0),
            b in prop::array::uniform3(-5.0f64..5.0),
            alpha in -5.0f64..5.0,
        ) {
            let (u, v) = (u3(a[0], a[1], a[2]), u3(b[0], b[1], b[2]));
            prop_assert!((phase_invariant_distance(&u, &v) - phase_invariant_distance(&v, &u)).abs() < 1e-14);
            prop_assert!(phase_invariant_distance(&u, &u.with_phase(alpha)) < 1e-14);
        }
    }
}
