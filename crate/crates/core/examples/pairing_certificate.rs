//! Build the injective matching at every height of a stable chain and check
//! it with the independent verifier.
//!
//!     cargo run --example pairing_certificate -- 8,6,4,2,0,4,2

use higgs_threeterm::chain::multiplicities;
use higgs_threeterm::pairing::{build_matching, classify_regions, verify_certificate};
use higgs_threeterm::RootSequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "4,2,0,4,2,0,-2".into());
    let seq: RootSequence = text.parse()?;
    let profile = multiplicities(&seq);

    for r in profile.heights() {
        let regions = classify_regions(&seq, r)?;
        let cert = build_matching(&seq, r)?;
        let check = verify_certificate(&seq, &cert);

        println!("height {r}: m = {}, below {}, above {}", profile.get(r), profile.get(r - 2), profile.get(r + 2));
        for reg in &regions {
            println!("  region {:<14} vertices {}..{}", reg.kind.to_string(), reg.start, reg.end);
        }
        for p in &cert.pairs {
            println!("  {} -> {} (height {}, {})", p.source, p.target, seq.at(p.target), p.label);
        }
        println!("  verified: {}", check.valid);
    }
    Ok(())
}
