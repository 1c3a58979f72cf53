//! How much of the target parameter box the erroneous decomposition can
//! still reach, in the `(θ, φ, λ)` box and in the axis-angle picture.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{classify_case, XErrorModel, CASE_TOLERANCE};
use crate::error::{Error, Result};
use crate::mitigation::{mitigate_closed_form, COVERED_SLACK};
use crate::su2::{canonicalize_with_phase, wrap_2pi, GateParams, Unitary2};

/// Slack for counting a target exactly on the slab boundary as reachable.
const BOUNDARY_SLACK: f64 = 1e-12;

pub const MIN_MC_SAMPLES: usize = 10_000;

/// Rotation by `omega` about the axis with polar angle `polar` and azimuth
/// `azimuth`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub polar: f64,
    pub azimuth: f64,
    pub omega: f64,
}

impl AxisAngle {
    pub fn new(polar: f64, azimuth: f64, omega: f64) -> Self {
        Self {
            polar,
            azimuth,
            omega,
        }
    }

    /// `√(1 − sin²(ω/2) sin²Θ)`, the modulus of the diagonal entries.
    pub fn diagonal_modulus(&self) -> f64 {
        let s = (self.omega / 2.0).sin() * self.polar.sin();
        (1.0 - s * s).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub un_analytic: f64,
    pub un_monte_carlo: f64,
    pub mc_samples: usize,
    pub mc_stderr: f64,
    /// Width of the unreachable slab along θ.
    pub delta_theta: f64,
}

impl UniversalityReport {
    /// Whether the estimate lies within four standard errors of the exact value.
    pub fn is_consistent(&self) -> bool {
        (self.un_analytic - self.un_monte_carlo).abs() <= 4.0 * self.mc_stderr + 1e-12
    }
}

fn slab_half_width(e: &XErrorModel) -> f64 {
    if classify_case(e, CASE_TOLERANCE).preserves_universality() {
        0.0
    } else {
        e.canonical().delta().abs()
    }
}

/// A target is reachable with unit fidelity iff θ ≤ π − 2|δ| (canonical θ).
pub fn is_coverable(target: &GateParams, e: &XErrorModel) -> bool {
    let (t, _) = canonicalize_with_phase(target.theta, target.phi, target.lambda);
    t.theta <= PI - 2.0 * slab_half_width(e) + BOUNDARY_SLACK
}

/// `UN = V / V_all`: 1 when δ = 0, else `1 − 2|δ|/π`.
pub fn universality_analytic(e: &XErrorModel) -> f64 {
    (1.0 - 2.0 * slab_half_width(e) / PI).max(0.0)
}

fn sample_target(seed: u64, index: u64) -> GateParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    GateParams::new(
        rng.gen::<f64>() * PI,
        rng.gen::<f64>() * TAU,
        rng.gen::<f64>() * TAU,
    )
}

/// Estimates UN by drawing uniform targets in the canonical box and counting
/// those the closed-form mitigation brings to unit fidelity. Sample `i` uses
/// its own ChaCha stream, so the estimate depends only on `(samples, seed)`.
pub fn universality_monte_carlo(
    e: &XErrorModel,
    samples: usize,
    seed: u64,
) -> Result<UniversalityReport> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::domain(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    e.check_finite()?;
    let hits = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let target = sample_target(seed, i);
            let r = mitigate_closed_form(&target, e)?;
            Ok::<usize, Error>(usize::from(r.achieved_fidelity >= 1.0 - COVERED_SLACK))
        })
        .try_reduce(|| 0usize, |a, b| Ok(a + b))?;
    let frac = hits as f64 / samples as f64;
    Ok(UniversalityReport {
        un_analytic: universality_analytic(e),
        un_monte_carlo: frac,
        mc_samples: samples,
        mc_stderr: (frac * (1.0 - frac) / samples as f64).sqrt(),
        delta_theta: 2.0 * slab_half_width(e),
    })
}

/// `I cos(ω/2) − i (σ·n̂) sin(ω/2)` with `n̂ = (sinΘ cosΦ, sinΘ sinΦ, cosΘ)`.
pub fn unitary_from_axis_angle(aa: &AxisAngle) -> Unitary2 {
    let (s, c) = (aa.omega / 2.0).sin_cos();
    let nx = aa.polar.sin() * aa.azimuth.cos();
    let ny = aa.polar.sin() * aa.azimuth.sin();
    let nz = aa.polar.cos();
    Unitary2::from_entries(
        Complex64::new(c, -nz * s),
        Complex64::new(-ny * s, -nx * s),
        Complex64::new(ny * s, -nx * s),
        Complex64::new(c, nz * s),
    )
}

/// Axis-angle form of `u` after removing its global phase.
///
/// The phase is fixed by scaling to unit determinant, with the remaining sign
/// chosen so that ω ∈ [0, π]. For ω = π the axis is taken in the upper
/// hemisphere (first non-zero of n_z, n_y, n_x positive). The identity maps
/// to ω = 0 with Θ = Φ = 0.
pub fn axis_angle_from_unitary(u: &Unitary2) -> Result<AxisAngle> {
    if u.unitarity_error() > crate::su2::INPUT_UNITARY_TOL {
        return Err(Error::domain(
            "axis_angle_from_unitary: input is not unitary",
        ));
    }
    let root = u.det().sqrt();
    let mut v = u.with_phase(-root.arg());
    if v.trace().re < 0.0 {
        v = v.with_phase(PI);
    }
    let c = v.trace().re / 2.0;
    let mut n = [
        -(v.u12() + v.u21()).im / 2.0,
        (v.u21() - v.u12()).re / 2.0,
        (v.u22() - v.u11()).im / 2.0,
    ];
    let s = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s < 1e-15 {
        return Ok(AxisAngle::new(0.0, 0.0, 0.0));
    }
    if c.abs() < 1e-12 {
        let lead = [n[2], n[1], n[0]]
            .into_iter()
            .find(|x| x.abs() > 1e-12)
            .unwrap_or(1.0);
        if lead < 0.0 {
            n = n.map(|x| -x);
        }
    }
    let omega = 2.0 * s.atan2(c.max(0.0));
    let polar = (n[2] / s).clamp(-1.0, 1.0).acos();
    let azimuth = if n[0].hypot(n[1]) < 1e-15 {
        0.0
    } else {
        wrap_2pi(n[1].atan2(n[0]))
    };
    Ok(AxisAngle::new(polar, azimuth, omega))
}

/// True when `aa` lies in the unreachable region around the π rotations
/// about in-plane axes: `√(1 − sin²(ω/2) sin²Θ) < |sin δ|`.
pub fn uncoverable_in_sphere(e: &XErrorModel, aa: &AxisAngle) -> bool {
    let limit = slab_half_width(e).sin();
    aa.diagonal_modulus() < limit - BOUNDARY_SLACK
}
