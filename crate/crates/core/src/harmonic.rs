//! Numeric checks for the totally geodesic harmonic metric of the inclusion
//! representation `SL_2(R) ⊃ Γ -> GL_2(C)`:
//!
//! ```text
//! K(τ) = (1/y) [[1, -x], [-x, x² + y²]],   τ = x + iy
//! ```
//!
//! Derivatives are Wirtinger derivatives `∂ = (∂_x - i∂_y)/2`,
//! `∂̄ = (∂_x + i∂_y)/2` by central differences, and `D log G = G⁻¹ D(G)`.

use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat2 = Matrix2<Complex64>;

pub const DEFAULT_Y_MIN: f64 = 0.1;
pub const DEFAULT_STEP: f64 = 1e-4;
pub const DEFAULT_NESTED_STEP: f64 = 1e-3;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    x: f64,
    y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::with_floor(x, y, DEFAULT_Y_MIN)
    }

    pub fn with_floor(x: f64, y: f64, floor: f64) -> Result<Self> {
        if y.is_nan() || y <= floor || !x.is_finite() || !y.is_finite() {
            return Err(Error::BelowFloor { x, y, floor });
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(tau: Complex64) -> Result<Self> {
        Self::new(tau.re, tau.im)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

impl std::str::FromStr for UpperHalfPoint {
    type Err = Error;

    /// Accepts `"x+yi"`, `"x-yi"` is rejected by the floor, `"yi"` and `"i"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected x+yi, got {s:?}"));
        let t = s.trim().strip_suffix('i').ok_or_else(bad)?;
        let split = t.char_indices().skip(1).filter(|(_, ch)| *ch == '+' || *ch == '-').last().map(|(i, _)| i);
        let (re, im) = match split {
            Some(i) => (&t[..i], &t[i..]),
            None => ("0", t),
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse().map_err(|_| bad())?,
        };
        Self::new(re, im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDiffScheme {
    h: f64,
}

impl FiniteDiffScheme {
    pub fn new(h: f64) -> Result<Self> {
        if !(1e-6..=1e-2).contains(&h) {
            return Err(Error::Step(h));
        }
        Ok(Self { h })
    }

    pub fn step(&self) -> f64 {
        self.h
    }
}

impl Default for FiniteDiffScheme {
    fn default() -> Self {
        Self { h: DEFAULT_STEP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormType {
    #[serde(rename = "dtau")]
    DTau,
    #[serde(rename = "dtaubar")]
    DTauBar,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorSample {
    pub matrix: CMat2,
    pub form: FormType,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSample(pub CMat2);

impl MetricSample {
    pub fn matrix(&self) -> &CMat2 {
        &self.0
    }

    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(self.0 - self.0.adjoint()))
    }

    pub fn det(&self) -> Complex64 {
        self.0.determinant()
    }

    /// Leading principal minors, real parts.
    pub fn leading_minors(&self) -> [f64; 2] {
        [self.0[(0, 0)].re, self.det().re]
    }

    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol && self.leading_minors().iter().all(|m| *m > 0.0)
    }
}

/// Raw metric formula; no floor check so finite-difference stencils can use it.
pub fn inclusion_metric(tau: Complex64) -> CMat2 {
    let (x, y) = (tau.re, tau.im);
    CMat2::new(c(1.0), c(-x), c(-x), c(x * x + y * y)) / c(y)
}

pub fn identity_metric(_tau: Complex64) -> CMat2 {
    CMat2::identity()
}

pub fn eval_metric(tau: &UpperHalfPoint) -> MetricSample {
    MetricSample(inclusion_metric(tau.tau()))
}

pub type Sl2 = [[i64; 2]; 2];

pub const S: Sl2 = [[0, -1], [1, 0]];
pub const T: Sl2 = [[1, 1], [0, 1]];

pub fn sl2_mul(a: &Sl2, b: &Sl2) -> Sl2 {
    let mut m = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn mobius(g: &Sl2, tau: Complex64) -> Complex64 {
    let [[a, b], [cc, d]] = *g;
    (c(a as f64) * tau + c(b as f64)) / (c(cc as f64) * tau + c(d as f64))
}

/// Max-entry gap between `K(γτ)` and `ρ(γ)^{-T} K(τ) \bar ρ(γ)^{-1}` for the
/// inclusion `ρ`.
pub fn equivariance_residual(tau: &UpperHalfPoint, g: &Sl2) -> Result<f64> {
    let [[a, b], [cc, d]] = *g;
    if a * d - b * cc != 1 {
        return Err(Error::NotSl2(*g));
    }
    let moved = UpperHalfPoint::from_complex(mobius(g, tau.tau()))?;
    let rho = CMat2::new(c(a as f64), c(b as f64), c(cc as f64), c(d as f64));
    let rho_inv = rho.try_inverse().ok_or(Error::NotSl2(*g))?;
    let rho_bar_inv = rho.map(|z| z.conj()).try_inverse().ok_or(Error::NotSl2(*g))?;
    let expected = rho_inv.transpose() * inclusion_metric(tau.tau()) * rho_bar_inv;
    Ok(max_abs(&(inclusion_metric(moved.tau()) - expected)))
}

/// Central-difference Wirtinger derivatives `(∂f, ∂̄f)` at `τ`.
pub fn wirtinger<F, M>(f: F, tau: Complex64, scheme: &FiniteDiffScheme) -> (M, M)
where
    F: Fn(Complex64) -> M,
    M: Clone + Add<Output = M> + Sub<Output = M> + Mul<Complex64, Output = M>,
{
    let h = scheme.h;
    let dx = (f(tau + c(h)) - f(tau - c(h))) * c(0.5 / h);
    let dy = (f(tau + I * h) - f(tau - I * h)) * c(0.5 / h);
    let del = (dx.clone() - dy.clone() * I) * c(0.5);
    let delbar = (dx + dy * I) * c(0.5);
    (del, delbar)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivative {
    /// `∂`
    Del,
    /// `∂̄`
    DelBar,
}

fn log_derivative_raw<F>(metric: &F, d: Derivative, tau: Complex64, scheme: &FiniteDiffScheme) -> CMat2
where
    F: Fn(Complex64) -> CMat2,
{
    let (del, delbar) = wirtinger(metric, tau, scheme);
    let inv = metric(tau).try_inverse().expect("metric must be invertible");
    inv * match d {
        Derivative::Del => del,
        Derivative::DelBar => delbar,
    }
}

/// `G⁻¹ D(G)` for the metric `G`, with `D` applied entrywise.
pub fn log_derivative<F>(metric: F, d: Derivative, tau: &UpperHalfPoint, scheme: &FiniteDiffScheme) -> OperatorSample
where
    F: Fn(Complex64) -> CMat2,
{
    OperatorSample {
        matrix: log_derivative_raw(&metric, d, tau.tau(), scheme),
        form: match d {
            Derivative::Del => FormType::DTau,
            Derivative::DelBar => FormType::DTauBar,
        },
    }
}

/// `θ_K = -½ ∂ log K̄` by finite differences.
pub fn theta_from_metric<F>(metric: F, tau: &UpperHalfPoint, scheme: &FiniteDiffScheme) -> OperatorSample
where
    F: Fn(Complex64) -> CMat2,
{
    let conj = |t: Complex64| metric(t).map(|z| z.conj());
    let d = log_derivative(conj, Derivative::Del, tau, scheme);
    OperatorSample { matrix: d.matrix * c(-0.5), form: FormType::DTau }
}

/// Matrix part of `∂̄_K - ∂̄ = ½ ∂̄ log K̄` by finite differences.
pub fn dbar_k_from_metric<F>(metric: F, tau: &UpperHalfPoint, scheme: &FiniteDiffScheme) -> OperatorSample
where
    F: Fn(Complex64) -> CMat2,
{
    let conj = |t: Complex64| metric(t).map(|z| z.conj());
    let d = log_derivative(conj, Derivative::DelBar, tau, scheme);
    OperatorSample { matrix: d.matrix * c(0.5), form: FormType::DTauBar }
}

/// `θ_K = (τ - τ̄)⁻² [[-τ̄, τ̄²], [-1, τ̄]] dτ` for the inclusion metric.
pub fn theta_closed_form(tau: &UpperHalfPoint) -> OperatorSample {
    let t = tau.tau();
    let tb = t.conj();
    let s = (t - tb).powi(-2);
    OperatorSample {
        matrix: CMat2::new(-tb, tb * tb, c(-1.0), tb) * s,
        form: FormType::DTau,
    }
}

/// Matrix part of `∂̄_K = ∂̄ + (τ - τ̄)⁻² [[τ, -τ²], [1, -τ]] dτ̄`.
pub fn dbar_k_matrix_closed_form(tau: &UpperHalfPoint) -> OperatorSample {
    OperatorSample { matrix: dbar_k_matrix(tau.tau()), form: FormType::DTauBar }
}

fn dbar_k_matrix(t: Complex64) -> CMat2 {
    let tb = t.conj();
    CMat2::new(t, -t * t, c(1.0), -t) * (t - tb).powi(-2)
}

/// Max-entry norm of `∂(∂̄ log K) - ½[∂̄ log K, ∂ log K]` with nested
/// central differences.
pub fn harmonic_residual<F>(metric: F, tau: &UpperHalfPoint, scheme: &FiniteDiffScheme) -> f64
where
    F: Fn(Complex64) -> CMat2,
{
    let t = tau.tau();
    let dbar_log = |s: Complex64| log_derivative_raw(&metric, Derivative::DelBar, s, scheme);
    let (lhs, _) = wirtinger(dbar_log, t, scheme);
    let a = log_derivative_raw(&metric, Derivative::DelBar, t, scheme);
    let b = log_derivative_raw(&metric, Derivative::Del, t, scheme);
    let rhs = (a * b - b * a) * c(0.5);
    max_abs(&(lhs - rhs))
}

/// `M(τ) = [[-τ̄/(τ-τ̄), τ], [-1/(τ-τ̄), 1]]`, sending holomorphic pairs
/// `(g, h)` to Higgs forms.
pub fn higgs_basis_matrix(t: Complex64) -> CMat2 {
    let tb = t.conj();
    let w = t - tb;
    CMat2::new(-tb / w, t, c(-1.0) / w, c(1.0))
}

/// Residual of `∂̄_K f = 0` for `f = M(τ)·(g, h)ᵀ`.
pub fn check_higgs_form<G, H>(g: G, h: H, tau: &UpperHalfPoint, scheme: &FiniteDiffScheme) -> f64
where
    G: Fn(Complex64) -> Complex64,
    H: Fn(Complex64) -> Complex64,
{
    // carry f as the first column of a 2x2 so wirtinger sees one matrix type
    let f = |t: Complex64| {
        let v = higgs_basis_matrix(t) * nalgebra::Vector2::new(g(t), h(t));
        CMat2::new(v[0], c(0.0), v[1], c(0.0))
    };
    let t = tau.tau();
    let (_, dbar_f) = wirtinger(f, t, scheme);
    max_abs(&(dbar_f + dbar_k_matrix(t) * f(t)))
}

/// `M(τ)⁻¹ θ_K M(τ)`; equals `[[0, 1], [0, 0]]`.
pub fn conjugated_higgs(tau: &UpperHalfPoint) -> CMat2 {
    let m = higgs_basis_matrix(tau.tau());
    m.try_inverse().expect("M(τ) has determinant 1") * theta_closed_form(tau).matrix * m
}

/// `a_λ = (τ - τ̄)⁻¹ [[τ - λτ̄, (λ - 1)ττ̄], [1 - λ, λτ - τ̄]]`.
pub fn a_lambda(tau: &UpperHalfPoint, lambda: Complex64) -> Result<CMat2> {
    if lambda == c(0.0) {
        return Err(Error::ZeroLambda);
    }
    let t = tau.tau();
    let tb = t.conj();
    let one = c(1.0);
    Ok(CMat2::new(t - lambda * tb, (lambda - one) * t * tb, one - lambda, lambda * t - tb) / (t - tb))
}

/// Trace and determinant: the characteristic-polynomial coefficients of a
/// 2x2 Higgs field up to sign.
pub fn hitchin_invariants_2x2(m: &CMat2) -> (Complex64, Complex64) {
    (m.trace(), m.determinant())
}

/// Points drawn uniformly from `x ∈ [-1, 1]`, `y ∈ [0.5, 3]`.
pub fn sample_grid(count: usize, seed: u64) -> Vec<UpperHalfPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = rng.gen_range(-1.0..=1.0);
            let y = rng.gen_range(0.5..=3.0);
            UpperHalfPoint::new(x, y).expect("grid box lies above the floor")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y).unwrap()
    }

    fn close(a: &CMat2, b: &CMat2, tol: f64) -> bool {
        max_abs(&(a - b)) < tol
    }

    #[test]
    fn metric_examples() {
        assert!(close(eval_metric(&pt(0.0, 1.0)).matrix(), &CMat2::identity(), 1e-15));
        let k = eval_metric(&pt(1.0, 1.0));
        assert!(close(k.matrix(), &CMat2::new(c(1.0), c(-1.0), c(-1.0), c(2.0)), 1e-15));
        for (x, y) in [(0.3, 0.7), (-2.0, 5.0), (0.0, 0.2)] {
            let k = eval_metric(&pt(x, y));
            assert!((k.det() - c(1.0)).norm() < 1e-12);
            assert!(k.is_positive_definite(1e-14));
        }
    }

    #[test]
    fn floor_and_parsing() {
        assert!(UpperHalfPoint::new(0.0, 0.05).is_err());
        assert!(UpperHalfPoint::new(0.0, -1.0).is_err());
        assert!(UpperHalfPoint::with_floor(0.0, 0.05, 0.01).is_ok());
        assert_eq!("0.3+1.2i".parse::<UpperHalfPoint>().unwrap(), pt(0.3, 1.2));
        assert_eq!("-1+2i".parse::<UpperHalfPoint>().unwrap(), pt(-1.0, 2.0));
        assert_eq!("i".parse::<UpperHalfPoint>().unwrap(), pt(0.0, 1.0));
        assert_eq!("2.5i".parse::<UpperHalfPoint>().unwrap(), pt(0.0, 2.5));
        assert!("1-2i".parse::<UpperHalfPoint>().is_err());
        assert!("abc".parse::<UpperHalfPoint>().is_err());
    }

    #[test]
    fn scheme_range() {
        assert!(FiniteDiffScheme::new(1e-7).is_err());
        assert!(FiniteDiffScheme::new(0.1).is_err());
        assert!(FiniteDiffScheme::new(1e-3).is_ok());
    }

    #[test]
    fn equivariance_examples() {
        let id = [[1, 0], [0, 1]];
        assert_eq!(equivariance_residual(&pt(0.2, 0.9), &id).unwrap(), 0.0);
        assert!(equivariance_residual(&pt(0.0, 1.0), &T).unwrap() < 1e-12);
        assert!(equivariance_residual(&pt(0.0, 2.0), &S).unwrap() < 1e-12);
        assert!(matches!(equivariance_residual(&pt(0.0, 1.0), &[[2, 0], [0, 1]]), Err(Error::NotSl2(_))));
        // S sends 10i to 0.1i, on the floor
        assert!(matches!(equivariance_residual(&pt(0.0, 10.0), &S), Err(Error::BelowFloor { .. })));
    }

    #[test]
    fn wirtinger_examples() {
        let s = FiniteDiffScheme::default();
        let tau = c(0.3) + I * 1.1;
        let (d, db) = wirtinger(|t: Complex64| t, tau, &s);
        assert!((d - c(1.0)).norm() < 1e-10 && db.norm() < 1e-10);
        let (d, db) = wirtinger(|t: Complex64| t.conj(), tau, &s);
        assert!(d.norm() < 1e-10 && (db - c(1.0)).norm() < 1e-10);
        let (d, db) = wirtinger(|t: Complex64| c(t.norm_sqr()), tau, &s);
        assert!((d - tau.conj()).norm() < 1e-8 && (db - tau).norm() < 1e-8);
    }

    #[test]
    fn log_derivative_examples() {
        let s = FiniteDiffScheme::default();
        let p = pt(0.0, 1.0);
        let d = log_derivative(inclusion_metric, Derivative::Del, &p, &s);
        assert_eq!(d.form, FormType::DTau);
        assert!(d.matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()));

        let scaled = |t: Complex64| inclusion_metric(t) * c(3.5);
        let a = log_derivative(scaled, Derivative::DelBar, &p, &s);
        let b = log_derivative(inclusion_metric, Derivative::DelBar, &p, &s);
        assert!(close(&a.matrix, &b.matrix, 1e-10));

        let fd = theta_from_metric(inclusion_metric, &pt(0.4, 1.3), &s);
        assert!(close(&fd.matrix, &theta_closed_form(&pt(0.4, 1.3)).matrix, 1e-5));
    }

    #[test]
    fn theta_at_i() {
        let th = theta_closed_form(&pt(0.0, 1.0));
        let want = CMat2::new(I, c(-1.0), c(-1.0), -I) * c(-0.25);
        assert!(close(&th.matrix, &want, 1e-15));
        assert_eq!(th.form, FormType::DTau);
    }

    #[test]
    fn theta_is_nilpotent() {
        for p in sample_grid(10, 3) {
            let th = theta_closed_form(&p).matrix;
            assert!(max_abs(&(th * th)) < 1e-12);
            let (tr, det) = hitchin_invariants_2x2(&th);
            assert!(tr.norm() < 1e-12 && det.norm() < 1e-12);
        }
    }

    #[test]
    fn dbar_k_matches_metric() {
        let s = FiniteDiffScheme::default();
        let p = pt(-0.6, 0.8);
        let fd = dbar_k_from_metric(inclusion_metric, &p, &s);
        assert!(close(&fd.matrix, &dbar_k_matrix_closed_form(&p).matrix, 1e-5));
    }

    #[test]
    fn harmonic_examples() {
        let nested = FiniteDiffScheme::new(DEFAULT_NESTED_STEP).unwrap();
        assert!(harmonic_residual(identity_metric, &pt(0.1, 1.0), &nested) < 1e-14);
        assert!(harmonic_residual(inclusion_metric, &pt(0.3, 1.2), &nested) < 1e-4);
        // a non-harmonic metric: K = diag(1, e^{x^2})
        let bad = |t: Complex64| CMat2::new(c(1.0), c(0.0), c(0.0), c((t.re * t.re).exp()));
        assert!(harmonic_residual(bad, &pt(0.3, 1.2), &nested) > 0.1);
    }

    #[test]
    fn higgs_form_examples() {
        let s = FiniteDiffScheme::default();
        let zero = |_t: Complex64| c(0.0);
        assert_eq!(check_higgs_form(zero, zero, &pt(0.0, 1.0), &s), 0.0);
        assert!(check_higgs_form(|_| c(1.0), zero, &pt(0.0, 1.0), &s) < 1e-5);
        assert!(check_higgs_form(|t| t * t, |t| t, &pt(0.5, 1.5), &s) < 1e-5);
        // a non-holomorphic g breaks closedness
        assert!(check_higgs_form(|t: Complex64| t.conj(), zero, &pt(0.5, 1.5), &s) > 1e-2);
    }

    #[test]
    fn conjugation_and_scaling() {
        let n = CMat2::new(c(0.0), c(1.0), c(0.0), c(0.0));
        for p in sample_grid(5, 11) {
            assert!(close(&conjugated_higgs(&p), &n, 1e-10));
        }
        let p = pt(0.0, 1.0);
        assert!(close(&a_lambda(&p, c(1.0)).unwrap(), &CMat2::identity(), 1e-15));
        let a = a_lambda(&p, c(2.0)).unwrap();
        let th = theta_closed_form(&p).matrix;
        assert!(close(&(a * th * a.try_inverse().unwrap()), &(th * c(2.0)), 1e-10));
        assert_eq!(a_lambda(&p, c(0.0)), Err(Error::ZeroLambda));
    }

    #[test]
    fn grid_is_reproducible() {
        assert_eq!(sample_grid(4, 7), sample_grid(4, 7));
        assert_ne!(sample_grid(4, 7), sample_grid(4, 8));
    }
}
