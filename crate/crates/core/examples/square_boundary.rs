//! Loops on the moment-angle complex of the boundary of a square.
//!
//! `cargo run --example square_boundary`

use polyloop::complex::SimplicialComplex;
use polyloop::engine::{decompose_loop, PairSpec};

fn main() -> polyloop::error::Result<()> {
    let k = SimplicialComplex::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]])?;
    let c = k.classify();
    println!("K = {:?}", k.facets());
    println!("flag: {}, chordal: {}", c.flag, c.chordal_1_skeleton);

    let (p, _) = decompose_loop(&k, &PairSpec::moment_angle(4), 20)?;
    println!("ΩZ_K ≃ {p}");
    println!("Poincaré series {}", p.series());
    println!("coefficients {:?}", p.series().expand(12).iter().map(|c| c.to_string()).collect::<Vec<_>>());
    Ok(())
}
