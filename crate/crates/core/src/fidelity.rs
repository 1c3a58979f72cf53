//! Process fidelity and the analytic original / best / average fidelities.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::decomposition::{classify_case, CaseKind, XErrorModel, CASE_TOLERANCE};
use crate::error::{Error, Result};
use crate::su2::{wrap_pi, GateParams, Unitary2};

/// Midpoint-rule points used when an average has no closed form.
pub const DEFAULT_QUADRATURE_POINTS: usize = 20_000;

/// Fewest quadrature points accepted by [`average_original_fidelity`].
pub const MIN_QUADRATURE_POINTS: usize = 64;

/// `(Tr(U_imp† U_imp) + |Tr(U_tar† U_imp)|²) / (d (d + 1))` with `d = 2`.
pub fn process_fidelity(u_tar: &Unitary2, u_imp: &Unitary2) -> f64 {
    let norm = (u_imp.adjoint() * *u_imp).trace().re;
    let overlap = (u_tar.adjoint() * *u_imp).trace().norm_sqr();
    (norm + overlap) / 6.0
}

/// The overlap amplitude `f_x` with `F_ori = (1 + 2 f_x²) / 3`.
fn overlap_amplitude(theta: f64, e: &XErrorModel) -> f64 {
    let (ap, am) = (e.a_plus(), e.a_minus());
    let (sh, ch) = (theta / 2.0).sin_cos();
    let (sd, cd) = ((theta - ap) / 2.0).sin_cos();
    ch * cd * (ap / 2.0).cos()
        + ch * sd * (ap / 2.0).sin() * e.theta_x.cos()
        + sh * sd * (am / 2.0).cos() * e.theta_x.sin()
}

/// Fidelity of the erroneous decomposition run at the target's own
/// parameters. Depends on the target only through θ.
pub fn original_fidelity_analytic(p: &GateParams, e: &XErrorModel) -> f64 {
    let fx = overlap_amplitude(p.theta, e);
    (1.0 + 2.0 * fx * fx) / 3.0
}

/// The reduced formulas for the special error patterns, when `e` matches one
/// of them: ideal; θx = π/2 with only λx, only φx, or both non-zero; and an
/// error on θx alone.
pub fn original_fidelity_special_case(p: &GateParams, e: &XErrorModel) -> Option<f64> {
    let zero = |x: f64| wrap_pi(x).abs() < CASE_TOLERANCE;
    let delta = e.theta_x - FRAC_PI_2;
    let (px, lx) = (e.phi_x, e.lambda_x);
    let cos4 = |x: f64| (x / 2.0).cos().powi(4);
    if delta.abs() < CASE_TOLERANCE {
        let f = match (zero(px), zero(lx)) {
            (true, true) => 1.0,
            (true, false) => (1.0 + 2.0 * cos4(lx)) / 3.0,
            (false, true) => (1.0 + 2.0 * cos4(px)) / 3.0,
            (false, false) => {
                let fy = ((lx + px) / 2.0).cos() * (lx / 2.0).cos() * (px / 2.0).cos()
                    - (p.theta - (lx + px) / 2.0).cos() * (lx / 2.0).sin() * (px / 2.0).sin();
                (1.0 + 2.0 * fy * fy) / 3.0
            }
        };
        Some(f)
    } else if zero(px) && zero(lx) {
        let g = 1.0 - 2.0 * (delta / 2.0).sin().powi(2) * (p.theta / 2.0).sin().powi(2);
        Some((1.0 + 2.0 * g * g) / 3.0)
    } else {
        None
    }
}

/// `sin²(θ/2) / sin²θx`; the target is reachable exactly when this is ≤ 1.
pub(crate) fn coverage_ratio(theta: f64, e: &XErrorModel) -> f64 {
    let num = (theta / 2.0).sin().powi(2);
    let den = e.theta_x.sin().powi(2);
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Best fidelity reachable by retuning `(θ, φ, λ)`: 1 when the target is
/// reachable, otherwise `(1 + 2 sin²(θ/2 + |δ|)) / 3`.
///
/// The target and pulse are brought to canonical form first, so θ ∈ [0, π]
/// and δ ∈ [−π/2, π/2].
pub fn best_fidelity_analytic(p: &GateParams, e: &XErrorModel) -> f64 {
    let (target, _) = crate::su2::canonicalize_with_phase(p.theta, p.phi, p.lambda);
    let ec = e.canonical();
    if coverage_ratio(target.theta, &ec) <= 1.0 {
        1.0
    } else {
        let d = ec.delta().abs();
        (1.0 + 2.0 * (target.theta / 2.0 + d).sin().powi(2)) / 3.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub f_original: f64,
    pub f_best: f64,
    pub coverable: bool,
    pub case: CaseKind,
}

pub fn fidelity_report(p: &GateParams, e: &XErrorModel) -> Result<FidelityReport> {
    if !p.is_finite() || !e.is_finite() {
        return Err(Error::domain("non-finite gate or error parameters"));
    }
    Ok(FidelityReport {
        f_original: original_fidelity_analytic(p, e),
        f_best: best_fidelity_analytic(p, e),
        coverable: crate::universality::is_coverable(p, e),
        case: classify_case(e, CASE_TOLERANCE),
    })
}

/// Composite midpoint rule for `(1/π) ∫₀^π F_ori(θ) dθ`.
pub fn average_original_fidelity_quadrature(e: &XErrorModel, points: usize) -> f64 {
    let h = PI / points as f64;
    let sum: f64 = (0..points)
        .map(|i| {
            let theta = (i as f64 + 0.5) * h;
            original_fidelity_analytic(&GateParams::new(theta, 0.0, 0.0), e)
        })
        .sum();
    sum / points as f64
}

/// Closed-form average of `F_ori` over the target box, for the error patterns
/// that have one.
pub fn average_original_fidelity_closed_form(e: &XErrorModel) -> Option<f64> {
    let zero = |x: f64| wrap_pi(x).abs() < CASE_TOLERANCE;
    let delta = e.theta_x - FRAC_PI_2;
    let (px, lx) = (e.phi_x, e.lambda_x);
    if delta.abs() < CASE_TOLERANCE {
        let cos4 = |x: f64| (x / 2.0).cos().powi(4);
        Some(match (zero(px), zero(lx)) {
            (true, true) => 1.0,
            (true, false) => (1.0 + 2.0 * cos4(lx)) / 3.0,
            (false, true) => (1.0 + 2.0 * cos4(px)) / 3.0,
            (false, false) => {
                let (cl, cp) = ((lx / 2.0).cos(), (px / 2.0).cos());
                let (sl, sp) = ((lx / 2.0).sin(), (px / 2.0).sin());
                let cs = ((lx + px) / 2.0).cos();
                1.0 / 3.0 + 2.0 * (cs * cl * cp).powi(2) / 3.0 + (sl * sp).powi(2) / 3.0
                    - lx.sin() * px.sin() * (lx + px).sin() / (3.0 * PI)
            }
        })
    } else if zero(px) && zero(lx) {
        let s2 = (delta / 2.0).sin().powi(2);
        Some(1.0 - (4.0 * s2 - 3.0 * s2 * s2) / 3.0)
    } else {
        None
    }
}

/// Average of `F_ori` over θ ∈ [0, π], φ, λ ∈ [0, 2π). Uses the closed form
/// when one exists, otherwise the midpoint rule with `quadrature_points`
/// nodes along θ (the integrand does not depend on φ or λ).
pub fn average_original_fidelity(e: &XErrorModel, quadrature_points: usize) -> Result<f64> {
    if quadrature_points < MIN_QUADRATURE_POINTS {
        return Err(Error::domain(format!(
            "quadrature_points must be at least {MIN_QUADRATURE_POINTS}, got {quadrature_points}"
        )));
    }
    e.check_finite()?;
    Ok(average_original_fidelity_closed_form(e)
        .unwrap_or_else(|| average_original_fidelity_quadrature(e, quadrature_points)))
}

/// `1 − (2|δ| − sin 2|δ|) / (3π)`, independent of φx and λx.
pub fn average_best_fidelity(e: &XErrorModel) -> f64 {
    let d = e.canonical().delta().abs();
    1.0 - (2.0 * d - (2.0 * d).sin()) / (3.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{erroneous_decomposition, z_rotation};
    use crate::su2::mat_from_params;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn numeric(p: &GateParams, e: &XErrorModel) -> f64 {
        process_fidelity(
            &mat_from_params(p).unwrap(),
            &erroneous_decomposition(p, e).unwrap(),
        )
    }

    #[test]
    fn process_fidelity_examples() {
        let u = mat_from_params(&GateParams::new(0.3, 1.0, 2.0)).unwrap();
        assert!((process_fidelity(&u, &u) - 1.0).abs() < 1e-15);
        let x = Unitary2::new(
            Complex64::new(0., 0.),
            Complex64::new(1., 0.),
            Complex64::new(1., 0.),
            Complex64::new(0., 0.),
        )
        .unwrap();
        let id = Unitary2::identity();
        assert!((process_fidelity(&id, &x) - 1.0 / 3.0).abs() < 1e-15);
        assert!((process_fidelity(&id, &z_rotation(PI)) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn original_fidelity_ideal_is_one() {
        for i in 0..20 {
            let p = GateParams::new(PI * i as f64 / 19.0, 0.4 * i as f64, 0.3 * i as f64);
            assert!((original_fidelity_analytic(&p, &XErrorModel::ideal()) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn original_fidelity_lambda_only() {
        let e = XErrorModel::new(FRAC_PI_2, 0.0, FRAC_PI_2);
        for i in 0..20 {
            let p = GateParams::new(PI * i as f64 / 19.0, 1.0, 2.0);
            let f = original_fidelity_analytic(&p, &e);
            assert!((f - 0.5).abs() < 1e-14);
            assert!((numeric(&p, &e) - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn original_fidelity_reaches_one_third() {
        // δ = π/2 at θ = π, and an unrestricted θx = 1.2π with the θ solving
        // sin(θ/2) = 1/(√2 sin(δ/2)).
        let e = XErrorModel::from_delta(FRAC_PI_2, 0., 0.);
        let p = GateParams::new(PI, 0.3, 0.2);
        assert!((original_fidelity_analytic(&p, &e) - 1.0 / 3.0).abs() < 1e-12);

        let delta = 0.7 * PI;
        let e = XErrorModel::from_delta(delta, 0., 0.);
        let theta = 2.0 * (1.0 / (2f64.sqrt() * (delta / 2.0).sin())).asin();
        let p = GateParams::new(theta, 1.0, 2.0);
        assert!((original_fidelity_analytic(&p, &e) - 1.0 / 3.0).abs() < 1e-12);
        assert!((numeric(&p, &e) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn best_fidelity_examples() {
        let p = GateParams::new(0.999 * PI, 1.0, 2.0);
        for k in 0..10 {
            let q = GateParams::new(PI * k as f64 / 9.0, 0.1, 0.2);
            assert_eq!(
                best_fidelity_analytic(&q, &XErrorModel::new(FRAC_PI_2, 0.3, 0.7)),
                1.0
            );
        }
        let e = XErrorModel::from_delta(0.3, 0., 0.);
        let expect = (1.0 + 2.0 * (0.4995 * PI + 0.3).sin().powi(2)) / 3.0;
        assert!((best_fidelity_analytic(&p, &e) - expect).abs() < 1e-15);
        // coverable region
        let q = GateParams::new(PI - 0.6 - 1e-9, 0.0, 0.0);
        assert_eq!(best_fidelity_analytic(&q, &e), 1.0);
    }

    #[test]
    fn best_fidelity_uses_mirrored_theta_for_negative_targets() {
        let e = XErrorModel::from_delta(0.2 * PI, 0.3 * PI, 0.2 * PI);
        for i in 1..20 {
            let theta = -PI * i as f64 / 20.0;
            let expect_raw = (1.0 + 2.0 * (-theta / 2.0 + 0.2 * PI).sin().powi(2)) / 3.0;
            let expect = if -theta <= PI - 0.4 * PI {
                1.0
            } else {
                expect_raw
            };
            let f = best_fidelity_analytic(&GateParams::new(theta, 0.5, 0.6), &e);
            assert!((f - expect).abs() < 1e-12, "θ={theta}: {f} vs {expect}");
        }
    }

    #[test]
    fn special_cases_match_general_formula() {
        let errors = [
            XErrorModel::ideal(),
            XErrorModel::new(FRAC_PI_2, 0.0, 0.1 * PI),
            XErrorModel::new(FRAC_PI_2, 0.3 * PI, 0.0),
            XErrorModel::new(FRAC_PI_2, 0.3 * PI, 0.4 * PI),
            XErrorModel::new(0.7 * PI, 0.0, 0.0),
        ];
        for e in &errors {
            for i in 0..50 {
                let p = GateParams::new(PI * i as f64 / 49.0, 0.9, 4.0);
                let s = original_fidelity_special_case(&p, e).unwrap();
                assert!((s - original_fidelity_analytic(&p, e)).abs() < 1e-13);
            }
        }
        let general = XErrorModel::new(0.7 * PI, 0.3 * PI, 0.2 * PI);
        assert!(original_fidelity_special_case(&GateParams::new(1., 1., 1.), &general).is_none());
    }

    #[test]
    fn quadrature_points_floor() {
        assert!(average_original_fidelity(&XErrorModel::ideal(), 63).is_err());
        assert!(average_original_fidelity(&XErrorModel::ideal(), 64).is_ok());
    }

    #[test]
    fn average_original_examples() {
        let n = DEFAULT_QUADRATURE_POINTS;
        assert_eq!(
            average_original_fidelity(&XErrorModel::ideal(), n).unwrap(),
            1.0
        );
        let lx = 0.37;
        let e = XErrorModel::new(FRAC_PI_2, 0.0, lx);
        let expect = (1.0 + 2.0 * (lx / 2.0).cos().powi(4)) / 3.0;
        assert!((average_original_fidelity(&e, n).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn closed_form_averages_agree_with_quadrature() {
        let errors = [
            XErrorModel::new(FRAC_PI_2, 0.0, 0.1 * PI),
            XErrorModel::new(FRAC_PI_2, 0.3 * PI, 0.0),
            XErrorModel::new(FRAC_PI_2, 0.3 * PI, 0.4 * PI),
            XErrorModel::new(FRAC_PI_2, 1.7, 5.2),
            XErrorModel::from_delta(0.2, 0.0, 0.0),
            XErrorModel::from_delta(-1.1, 0.0, 0.0),
        ];
        for e in &errors {
            let closed = average_original_fidelity_closed_form(e).unwrap();
            let quad = average_original_fidelity_quadrature(e, DEFAULT_QUADRATURE_POINTS);
            assert!((closed - quad).abs() < 1e-8, "{e:?}: {closed} vs {quad}");
        }
    }

    #[test]
    fn average_best_examples() {
        assert_eq!(average_best_fidelity(&XErrorModel::ideal()), 1.0);
        let f = average_best_fidelity(&XErrorModel::from_delta(FRAC_PI_2, 0.3, 0.1));
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        let f = average_best_fidelity(&XErrorModel::from_delta(0.1, 0.0, 0.0));
        assert!((f - (1.0 - (0.2 - 0.2f64.sin()) / (3.0 * PI))).abs() < 1e-15);
    }

    #[test]
    fn original_fidelity_is_independent_of_target_phases() {
        let e = XErrorModel::new(0.6 * PI, 0.3, 1.9);
        for i in 0..30 {
            let theta = PI * i as f64 / 29.0;
            let base = numeric(&GateParams::new(theta, 0.0, 0.0), &e);
            for j in 0..6 {
                let p = GateParams::new(theta, TAU * j as f64 / 6.0, 1.3 * j as f64);
                assert!((numeric(&p, &e) - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn original_fidelity_symmetric_in_delta_without_phase_errors() {
        let p = GateParams::new(0.8 * PI, 1.1 * PI, 1.6 * PI);
        for i in 0..50 {
            let d = 0.5 * PI * i as f64 / 49.0;
            let a = original_fidelity_analytic(&p, &XErrorModel::from_delta(d, 0., 0.));
            let b = original_fidelity_analytic(&p, &XErrorModel::from_delta(-d, 0., 0.));
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn analytic_matches_matrix_fidelity(
            t in 0.0f64..PI, ph in 0.0f64..TAU, la in 0.0f64..TAU,
            tx in 0.0f64..PI, px in 0.0f64..TAU, lx in 0.0f64..TAU,
        ) {
            let p = GateParams::new(t, ph, la);
            let e = XErrorModel::new(tx, px, lx);
            let a = original_fidelity_analytic(&p, &e);
            prop_assert!((a - numeric(&p, &e)).abs() < 1e-10);
            let b = best_fidelity_analytic(&p, &e);
            prop_assert!(b >= a - 1e-12);
            prop_assert!((1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&a));
            prop_assert!((1.0 / 3.0 - 1e-12..=1.0 + 1e-12).contains(&b));
            let r = fidelity_report(&p, &e).unwrap();
            if r.coverable {
                prop_assert!((r.f_best - 1.0).abs() < 1e-9);
            }
        }
    }
}
