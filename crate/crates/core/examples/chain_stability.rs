//! Classify a few chains: admissibility, tail stability, multiplicities and
//! the three-term inequality.
//!
//!     cargo run --example chain_stability -- 4,2,0,4,2,0,-2 0,4 0,2,2

use higgs_threeterm::chain::{
    hitchin_invariants, is_admissible, multiplicities, tail_slopes, three_term_holds, ChainHiggsBundle,
};
use higgs_threeterm::{RootSequence, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec!["4,2,0,4,2,0,-2".to_string(), "0,4".into(), "0,2,2".into(), "0,-2,0".into()]
    } else {
        args
    };

    for text in inputs {
        let seq: RootSequence = text.parse()?;
        println!("{seq}");

        let adm = is_admissible(&seq);
        println!("  step weights      {:?}", seq.step_weights());
        if !adm.admissible {
            println!("  inadmissible at steps {:?}", adm.violating_steps());
        }

        let report = tail_slopes(&seq);
        let tails: Vec<String> = report.tail_slopes.iter().map(|s| s.to_string()).collect();
        println!("  total slope {}, tails [{}]", report.total_slope, tails.join(", "));
        match report.verdict {
            Verdict::Stable => println!("  stable"),
            Verdict::Marginal { at } => println!("  semistable, tail {at} has equal slope"),
            Verdict::Destabilized { at } => println!("  unstable, tail {at} destabilizes"),
        }

        let profile = multiplicities(&seq);
        let three = three_term_holds(&profile);
        let counts: Vec<String> = profile.heights().map(|r| format!("m_{r}={}", profile.get(r))).collect();
        println!("  multiplicities    {}", counts.join(" "));
        if three.holds {
            println!("  m_r <= m_(r-2) + m_(r+2) everywhere");
        }
        for v in &three.violations {
            println!("  fails at r = {}: {} > {} + {}", v.height, v.count, v.below, v.above);
        }

        if let Ok(bundle) = ChainHiggsBundle::new(seq.clone()) {
            let nilpotent = hitchin_invariants(&bundle).iter().all(|c| *c.numer() == 0);
            println!("  Higgs field nilpotent: {nilpotent}");
        }
        println!();
    }
    Ok(())
}
