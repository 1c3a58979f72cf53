//! Retuning the virtual-Z parameters to undo a coherent `X(π/2)` error.
//!
//! [`mitigate_closed_form`] solves for the implemented parameters directly.
//! [`mitigate_numeric`] maximizes the matrix fidelity with a grid-seeded
//! Nelder-Mead search and serves as an independent check of the former.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{case3_phases, decomposition_unchecked, XErrorModel};
use crate::error::{Error, Result};
use crate::fidelity::{coverage_ratio, process_fidelity};
use crate::optim::NelderMead;
use crate::su2::{canonicalize_with_phase, u3, wrap_2pi, GateParams};

/// Achieved fidelity at or above `1 − COVERED_SLACK` counts as exact.
pub const COVERED_SLACK: f64 = 1e-9;

/// Sine of θx below which the pulse is treated as purely diagonal.
const DIAGONAL_PULSE: f64 = 1e-12;

/// Range searched for the implemented θ. Wider than one period so that
/// shifts by `λx + φx` never hit an edge.
const THETA_SEARCH: (f64, f64) = (-PI, 3.0 * PI);

/// Grid maxima used as Nelder-Mead starting points.
const RESTARTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MitigationMethod {
    ClosedForm,
    NumericSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MitigationResult {
    /// Canonical form of `raw`, i.e. the gate an ideal decomposition would
    /// produce from these settings.
    pub implemented: GateParams,
    /// The parameters to program into the erroneous decomposition. These are
    /// not interchangeable with `implemented`: the erroneous decomposition is
    /// not invariant under the θ → −θ symmetry used by canonicalization.
    pub raw: GateParams,
    pub achieved_fidelity: f64,
    pub coverable: bool,
    pub method: MitigationMethod,
    /// False when the numeric search hit `max_iters` before its simplex
    /// shrank below `tol`; the result is then the best point found.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_per_axis: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_per_axis: 10,
            tol: 1e-9,
            max_iters: 4000,
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_per_axis < 2 {
            return Err(Error::config(
                "search.grid",
                "grid_per_axis must be at least 2",
            ));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::config("search.tol", "tol must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::config(
                "search.max_iters",
                "max_iters must be positive",
            ));
        }
        Ok(())
    }
}

fn achieved(target: &GateParams, raw: &GateParams, e: &XErrorModel) -> f64 {
    process_fidelity(
        &u3(target.theta, target.phi, target.lambda),
        &decomposition_unchecked(raw, e),
    )
}

fn result(
    target: &GateParams,
    raw: GateParams,
    e: &XErrorModel,
    method: MitigationMethod,
    converged: bool,
) -> MitigationResult {
    let f = achieved(target, &raw, e);
    let (implemented, _) = canonicalize_with_phase(raw.theta, raw.phi, raw.lambda);
    MitigationResult {
        implemented,
        raw,
        achieved_fidelity: f,
        coverable: f >= 1.0 - COVERED_SLACK,
        method,
        converged,
    }
}

/// Root of `θ_imp ∈ {a₊ ± β + 2πn}` inside the search range closest to
/// `theta`, ties going to the smaller root.
fn closest_root(a_plus: f64, beta: f64, theta: f64) -> f64 {
    let (lo, hi) = THETA_SEARCH;
    let mut best: Option<f64> = None;
    for n in -4..=4 {
        for sign in [-1.0, 1.0] {
            let r = a_plus + sign * beta + TAU * n as f64;
            if r < lo - 1e-12 || r > hi + 1e-12 {
                continue;
            }
            best = match best {
                None => Some(r),
                Some(b) => {
                    let (db, dr) = ((b - theta).abs(), (r - theta).abs());
                    if dr < db - 1e-12 || ((dr - db).abs() <= 1e-12 && r < b) {
                        Some(r)
                    } else {
                        Some(b)
                    }
                }
            };
        }
    }
    best.expect("search range spans more than one period")
}

/// Implemented parameters from the closed-form solution.
///
/// The implemented θ sets `sin²((θ_imp − a₊)/2)` to `a₀ = sin²(θ/2) / sin²θx`
/// when `a₀ ≤ 1` (exact synthesis) and to 1 otherwise (nearest reachable
/// gate). φ and λ are then chosen so the effective phases equal the target's.
pub fn mitigate_closed_form(target: &GateParams, e: &XErrorModel) -> Result<MitigationResult> {
    if !target.is_finite() {
        return Err(Error::domain(format!("non-finite target {target:?}")));
    }
    e.check_finite()?;
    let (t, _) = canonicalize_with_phase(target.theta, target.phi, target.lambda);
    let ec = e.canonical();
    if ec.theta_x.sin() < DIAGONAL_PULSE {
        // X·Z·X is diagonal, so every setting yields a diagonal gate and only
        // the relative phase of the diagonal can be tuned, through φ.
        let u = decomposition_unchecked(&t, e);
        let rel = (u.u22() / u.u11()).arg();
        let raw = GateParams::new(t.theta, wrap_2pi(t.phi + t.phi + t.lambda - rel), t.lambda);
        let mut r = result(&t, raw, e, MitigationMethod::ClosedForm, true);
        r.coverable = coverage_ratio(t.theta, &ec) <= 1.0;
        return Ok(r);
    }

    let a0 = coverage_ratio(t.theta, &ec);
    let a = a0.min(1.0);
    let beta = 2.0 * a.sqrt().min(1.0).asin();
    let ap = ec.a_plus();
    let theta_imp = closest_root(ap, beta, t.theta);

    let ph = case3_phases(theta_imp, &ec);
    let raw = match ph.gamma4 {
        Some(g4) => {
            let shift = -g4 + FRAC_PI_2 + ph.gamma3;
            GateParams::new(
                theta_imp,
                wrap_2pi(t.phi - ec.phi_x + shift),
                wrap_2pi(t.lambda - ec.lambda_x + shift),
            )
        }
        // Diagonal effective gate; only the relative phase of the diagonal
        // needs matching.
        None => GateParams::new(
            theta_imp,
            t.phi,
            wrap_2pi(t.lambda - ap - ph.gamma5 + ph.gamma3),
        ),
    };
    let mut r = result(&t, raw, e, MitigationMethod::ClosedForm, true);
    r.coverable = a0 <= 1.0;
    Ok(r)
}

/// Maximizes `process_fidelity(U(target), Ũ(θ_i, φ_i, λ_i))` numerically.
///
/// A regular grid over θ ∈ [−π, 3π], φ, λ ∈ [0, 2π) seeds Nelder-Mead runs
/// from its best points, from the unmitigated setting (θ_i, φ_i, λ_i) =
/// target, and from two seeded random points. Each run is polished by one
/// restart from its own optimum.
pub fn mitigate_numeric(
    target: &GateParams,
    e: &XErrorModel,
    cfg: &SearchConfig,
) -> Result<MitigationResult> {
    if !target.is_finite() {
        return Err(Error::domain(format!("non-finite target {target:?}")));
    }
    e.check_finite()?;
    cfg.validate()?;
    if cfg.grid_per_axis < 8 {
        return Err(Error::config(
            "search.grid",
            "numeric mitigation needs at least 8 grid points per axis",
        ));
    }
    let (t, _) = canonicalize_with_phase(target.theta, target.phi, target.lambda);
    let target_u = u3(t.theta, t.phi, t.lambda);
    let loss = |x: &[f64; 3]| {
        let p = GateParams::new(x[0], x[1], x[2]);
        1.0 - process_fidelity(&target_u, &decomposition_unchecked(&p, e))
    };

    let n = cfg.grid_per_axis;
    let (lo, hi) = THETA_SEARCH;
    let theta_step = (hi - lo) / (n - 1) as f64;
    let phase_step = TAU / n as f64;
    let mut grid: Vec<([f64; 3], f64)> = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [
                    lo + theta_step * i as f64,
                    phase_step * j as f64,
                    phase_step * k as f64,
                ];
                grid.push((x, loss(&x)));
            }
        }
    }
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut seeds: Vec<[f64; 3]> = grid.iter().take(RESTARTS).map(|(x, _)| *x).collect();
    seeds.push([t.theta, t.phi, t.lambda]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    for _ in 0..2 {
        seeds.push([
            rng.gen_range(lo..hi),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        ]);
    }

    let nm = NelderMead {
        tol: cfg.tol,
        max_iters: cfg.max_iters,
    };
    let step = 0.5 * phase_step;
    let mut best: Option<([f64; 3], f64, bool)> = None;
    for seed in seeds {
        let first = nm.minimize(loss, seed, step);
        let polished = nm.minimize(loss, first.x, 0.05 * step);
        let (x, v, ok) = if polished.value <= first.value {
            (polished.x, polished.value, polished.converged)
        } else {
            (first.x, first.value, first.converged)
        };
        if best.is_none_or(|(_, bv, _)| v < bv) {
            best = Some((x, v, ok));
        }
    }
    let (x, _, converged) = best.expect("at least one seed");
    let raw = GateParams::new(x[0], wrap_2pi(x[1]), wrap_2pi(x[2]));
    Ok(result(
        &t,
        raw,
        e,
        MitigationMethod::NumericSearch,
        converged,
    ))
}
