//! Exhaustive sweep over normalized chains, with a per-length histogram and
//! the first chains showing that stability cannot be dropped.
//!
//!     cargo run --release --example theorem_sweep -- 7 12 12 4

use higgs_threeterm::sweep::{sweep, SweepParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let get = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let params = SweepParams {
        n_min: 2,
        n_max: get(0, 7),
        max_rise: get(1, 12) as i64,
        root_bound: get(2, 12) as i64,
    };
    let report = sweep(params, get(3, 4))?;

    println!(" n  generated  admissible  stable  marginal  unstable  failing  certificates");
    for h in &report.histograms {
        let c = &h.counts;
        println!(
            "{:>2} {:>10} {:>11} {:>7} {:>9} {:>9} {:>8} {:>13}",
            h.n, c.generated, c.admissible, c.stable, c.marginal, c.unstable, c.unstable_three_term_failures, c.certificates_verified
        );
    }
    println!("violations: {}  ({:.3}s)", report.violations.len(), report.wall_seconds);

    println!("\nunstable chains failing the inequality:");
    for w in report.necessity_witnesses.iter().take(6) {
        let heights: Vec<i64> = w.violations.iter().map(|v| v.height).collect();
        println!("  {} at heights {heights:?}", w.roots);
    }
    Ok(())
}
