//! Translate residue data between the representation, connection and Higgs
//! sides, and back.

use higgs_threeterm::filtered::{
    residue_connection_to_rep, residue_higgs_to_rep, residue_rep_to_connection, residue_rep_to_higgs,
    ResidueBlockData,
};
use higgs_threeterm::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = Rational::new;
    let blocks = [(q(0, 1), q(1, 6), q(0, 1)), (q(1, 2), q(0, 1), q(1, 1)), (q(-3, 4), q(5, 6), q(-2, 3))];

    println!("{:>28} | {:>22} | {:>22}", "representation", "connection", "Higgs");
    for (beta, u, v) in blocks {
        let blk = ResidueBlockData::new(beta, u, v)?;
        let conn = residue_rep_to_connection(&blk);
        let higgs = residue_rep_to_higgs(&blk);
        println!(
            "{:>28} | {:>22} | {:>22}",
            format!("b={beta} exp(2pi i({}))", blk.exponent()),
            format!("b={} eig {}", conn.jump, conn.eigenvalue),
            format!("b={} eig {}", higgs.jump, higgs.eigenvalue),
        );
        assert_eq!(residue_connection_to_rep(&conn)?, blk);
        assert_eq!(residue_higgs_to_rep(&higgs)?, blk);
    }

    // u is only defined mod 1; values outside [0,1) are rejected
    match ResidueBlockData::new(q(0, 1), q(7, 6), q(0, 1)) {
        Err(e) => println!("\nu = 7/6: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
