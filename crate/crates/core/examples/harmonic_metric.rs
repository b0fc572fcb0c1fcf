//! The harmonic metric of the inclusion PSL_2(Z) -> PSL_2(R): evaluate it,
//! compare the Higgs field with finite differences and run the full suite.

use higgs_threeterm::harmonic::{
    a_lambda, conjugated_higgs, eval_metric, harmonic_residual, inclusion_metric, max_abs, theta_closed_form,
    theta_from_metric, FiniteDiffScheme, UpperHalfPoint,
};
use higgs_threeterm::metric_checks::{run_suite, MetricSuiteConfig};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: UpperHalfPoint = "0.3+1.2i".parse()?;
    let k = eval_metric(&p);
    println!("K(tau) at tau = {}:\n{:.6}", p.tau(), k.matrix());
    println!("det K = {:.3e}", k.det());

    let theta = theta_closed_form(&p).matrix;
    let fd = theta_from_metric(inclusion_metric, &p, &FiniteDiffScheme::default()).matrix;
    println!("theta_K dtau:\n{theta:.6}");
    println!("finite-difference error {:.2e}", max_abs(&(theta - fd)));
    println!("M^-1 theta M:\n{:.3}", conjugated_higgs(&p));

    let lam = Complex64::new(0.0, 1.0);
    let a = a_lambda(&p, lam)?;
    let scaled = a * theta * a.try_inverse().expect("invertible");
    println!("|a theta a^-1 - i theta| = {:.2e}", max_abs(&(scaled - theta * lam)));

    for h in [1e-2, 1e-3] {
        let res = harmonic_residual(inclusion_metric, &p, &FiniteDiffScheme::new(h)?);
        println!("harmonic residual at h = {h:e}: {res:.3e}");
    }

    println!();
    for c in run_suite(&MetricSuiteConfig::grid(20, 0))? {
        println!("{:<40} {:>10.2e} < {:<8.0e} {}", c.check_name, c.max_residual, c.tolerance, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
