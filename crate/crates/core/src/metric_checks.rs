//! The batch of numeric checks run by `verify-metric`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harmonic::{
    self, a_lambda, check_higgs_form, conjugated_higgs, dbar_k_from_metric, dbar_k_matrix_closed_form,
    equivariance_residual, eval_metric, harmonic_residual, identity_metric, inclusion_metric, max_abs,
    theta_closed_form, theta_from_metric, CMat2, FiniteDiffScheme, Sl2, UpperHalfPoint, S, T,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricCheck {
    pub check_name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl MetricCheck {
    fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            check_name: name.to_string(),
            max_residual,
            tolerance,
            // NaN never passes
            pass: max_residual < tolerance,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MetricSuiteConfig {
    pub points: Vec<UpperHalfPoint>,
    pub step: FiniteDiffScheme,
    pub nested_step: FiniteDiffScheme,
    /// Coarse step for the convergence-order estimate.
    pub coarse_step: FiniteDiffScheme,
    /// Replaces every residual tolerance (not the order tolerance) when set.
    pub tolerance: Option<f64>,
}

impl MetricSuiteConfig {
    pub fn grid(count: usize, seed: u64) -> Self {
        Self::at_points(harmonic::sample_grid(count, seed))
    }

    pub fn at_points(points: Vec<UpperHalfPoint>) -> Self {
        Self {
            points,
            step: FiniteDiffScheme::default(),
            nested_step: FiniteDiffScheme::new(harmonic::DEFAULT_NESTED_STEP).expect("in range"),
            coarse_step: FiniteDiffScheme::new(1e-2).expect("in range"),
            tolerance: None,
        }
    }
}

pub const EQUIVARIANCE_TOL: f64 = 1e-10;
pub const FD_TOL: f64 = 1e-5;
pub const HARMONIC_TOL: f64 = 1e-4;
pub const ORDER_TARGET: f64 = 2.0;
pub const ORDER_TOL: f64 = 0.3;
pub const EXACT_TOL: f64 = 1e-12;
pub const ALGEBRA_TOL: f64 = 1e-10;

pub fn equivariance_generators() -> Vec<(&'static str, Sl2)> {
    let st = harmonic::sl2_mul(&S, &T);
    let ts = harmonic::sl2_mul(&T, &S);
    let t2s = harmonic::sl2_mul(&harmonic::sl2_mul(&T, &T), &S);
    vec![("S", S), ("T", T), ("ST", st), ("TS", ts), ("T2S", t2s)]
}

type Poly = fn(Complex64) -> Complex64;

fn higgs_test_pairs() -> Vec<(Poly, Poly)> {
    fn one(_: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn zero(_: Complex64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn sq(t: Complex64) -> Complex64 {
        t * t
    }
    fn id(t: Complex64) -> Complex64 {
        t
    }
    fn cubic(t: Complex64) -> Complex64 {
        t * t * t - t * 2.0
    }
    fn affine(t: Complex64) -> Complex64 {
        t + 1.0
    }
    vec![(one, zero), (zero, one), (sq, id), (cubic, affine)]
}

fn max_over<F: Fn(&UpperHalfPoint) -> f64>(points: &[UpperHalfPoint], f: F) -> f64 {
    // propagate NaN so a broken evaluation cannot pass
    points.iter().map(f).fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// Runs every check over the configured points.
pub fn run_suite(cfg: &MetricSuiteConfig) -> Result<Vec<MetricCheck>> {
    let pts = &cfg.points;
    let tol = |default: f64| cfg.tolerance.unwrap_or(default);
    let mut out = Vec::new();

    let metric = max_over(pts, |p| {
        let k = eval_metric(p);
        let defect = k.hermitian_defect().max((k.det() - Complex64::new(1.0, 0.0)).norm());
        if k.leading_minors().iter().all(|m| *m > 0.0) { defect } else { f64::INFINITY }
    });
    out.push(MetricCheck::new("metric_symmetric_det1_positive", metric, tol(EXACT_TOL)));

    for (name, g) in equivariance_generators() {
        let mut worst = 0.0f64;
        for p in pts {
            worst = worst.max(equivariance_residual(p, &g)?);
        }
        out.push(MetricCheck::new(&format!("equivariance_{name}"), worst, tol(EQUIVARIANCE_TOL)));
    }

    let theta_fd = max_over(pts, |p| {
        max_abs(&(theta_from_metric(inclusion_metric, p, &cfg.step).matrix - theta_closed_form(p).matrix))
    });
    out.push(MetricCheck::new("theta_closed_form_vs_log_derivative", theta_fd, tol(FD_TOL)));

    let dbar_fd = max_over(pts, |p| {
        max_abs(&(dbar_k_from_metric(inclusion_metric, p, &cfg.step).matrix - dbar_k_matrix_closed_form(p).matrix))
    });
    out.push(MetricCheck::new("dbar_k_closed_form_vs_log_derivative", dbar_fd, tol(FD_TOL)));

    let unitary = max_over(pts, |p| harmonic_residual(identity_metric, p, &cfg.nested_step));
    out.push(MetricCheck::new("harmonic_residual_identity_metric", unitary, tol(EXACT_TOL)));

    let fine: Vec<f64> = pts.iter().map(|p| harmonic_residual(inclusion_metric, p, &cfg.nested_step)).collect();
    let worst_fine = fine.iter().copied().fold(0.0, f64::max);
    out.push(MetricCheck::new("harmonic_residual", worst_fine, tol(HARMONIC_TOL)));

    let ratio = cfg.coarse_step.step() / cfg.nested_step.step();
    let order_dev = pts
        .iter()
        .zip(&fine)
        .map(|(p, f)| {
            let coarse = harmonic_residual(inclusion_metric, p, &cfg.coarse_step);
            ((coarse / f).ln() / ratio.ln() - ORDER_TARGET).abs()
        })
        .fold(0.0, |acc: f64, v| if v.is_nan() { f64::NAN } else { acc.max(v) });
    out.push(MetricCheck::new("harmonic_convergence_order", order_dev, ORDER_TOL));

    let nilpotent = max_over(pts, |p| {
        let th = theta_closed_form(p).matrix;
        let (tr, det) = harmonic::hitchin_invariants_2x2(&th);
        max_abs(&(th * th)).max(tr.norm()).max(det.norm())
    });
    out.push(MetricCheck::new("theta_nilpotent", nilpotent, tol(EXACT_TOL)));

    let shift = CMat2::new(0.0.into(), 1.0.into(), 0.0.into(), 0.0.into());
    let conj = max_over(pts, |p| max_abs(&(conjugated_higgs(p) - shift)));
    out.push(MetricCheck::new("conjugated_higgs_is_shift", conj, tol(ALGEBRA_TOL)));

    let lambdas = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut scaling = 0.0f64;
    let mut group = 0.0f64;
    for p in pts {
        let th = theta_closed_form(p).matrix;
        for lam in lambdas {
            let a = a_lambda(p, lam)?;
            let a_inv = a.try_inverse().unwrap_or_else(|| CMat2::from_element(f64::NAN.into()));
            scaling = scaling.max(max_abs(&(a * th * a_inv - th * lam)));
            for mu in lambdas {
                group = group.max(max_abs(&(a * a_lambda(p, mu)? - a_lambda(p, lam * mu)?)));
            }
        }
    }
    out.push(MetricCheck::new("a_lambda_rescales_theta", scaling, tol(ALGEBRA_TOL)));
    out.push(MetricCheck::new("a_lambda_group_law", group, tol(ALGEBRA_TOL)));

    let higgs = max_over(pts, |p| {
        higgs_test_pairs()
            .into_iter()
            .map(|(g, h)| check_higgs_form(g, h, p, &cfg.step))
            .fold(0.0, f64::max)
    });
    out.push(MetricCheck::new("higgs_form_dbar_k_closed", higgs, tol(FD_TOL)));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_default_grid() {
        let checks = run_suite(&MetricSuiteConfig::grid(20, 0)).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(checks.len(), 16);
    }

    #[test]
    fn nan_fails() {
        assert!(!MetricCheck::new("x", f64::NAN, 1.0).pass);
    }

    #[test]
    fn tight_override_fails() {
        let mut cfg = MetricSuiteConfig::grid(3, 1);
        cfg.tolerance = Some(1e-30);
        let checks = run_suite(&cfg).unwrap();
        assert!(checks.iter().any(|c| !c.pass));
    }
}
