//! Cross-checks of the engine against homology computed independently.
//!
//! `cargo run --example oracle_report`

use polyloop::complex::SimplicialComplex;
use polyloop::engine::PairSpec;
use polyloop::oracle::{hochster_table, predicted_loop_series, verify_against_oracle};

fn main() -> polyloop::error::Result<()> {
    let p4 = SimplicialComplex::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])?;
    let c5 = SimplicialComplex::from_facets(5, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![1, 5]])?;

    for (name, k) in [("P4", &p4), ("C5", &c5)] {
        println!("{name}: Hochster ranks {:?}", hochster_table(k)?.ranks);
        match predicted_loop_series(k) {
            Ok(s) => println!("{name}: predicted loop series {s}"),
            Err(e) => println!("{name}: {e}"),
        }
        let report = verify_against_oracle(k, &PairSpec::moment_angle(k.m()), 20);
        for c in &report.checks {
            println!("  {:<18} {:?}", c.name, c.status);
        }
        println!("  passed: {}", report.passed);
    }
    Ok(())
}
