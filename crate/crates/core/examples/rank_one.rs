//! Rank-one filtered characters (chi^a, b): the jump, both degrees and the
//! residue angle, for every a and a few weights b.

use higgs_threeterm::filtered::{filtered_degree_rep, rank1_degrees, rank1_jump, rank1_representation, rank1_residue_angle};
use higgs_threeterm::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>2} {:>6} {:>6} {:>11} {:>9} {:>6}", "a", "b", "jump", "unfiltered", "filtered", "angle");
    for a in 0..6 {
        for b in [Rational::new(0, 1), Rational::new(1, 2), Rational::new(-7, 6)] {
            let d = rank1_degrees(a, b)?;
            let jump = rank1_jump(a, b)?;
            // degree is preserved across the correspondence
            assert_eq!(filtered_degree_rep(&rank1_representation(a, b)?)?, d.filtered);
            assert_eq!(d.unfiltered + jump, b);
            println!(
                "{a:>2} {:>6} {:>6} {:>11} {:>9} {:>6}",
                b.to_string(),
                jump.to_string(),
                d.unfiltered.to_string(),
                d.filtered.to_string(),
                rank1_residue_angle(a)?.to_string()
            );
        }
    }
    Ok(())
}
