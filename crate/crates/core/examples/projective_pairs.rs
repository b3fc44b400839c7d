//! Polyhedral products of projective-space pairs via the fibre splitting.
//!
//! `cargo run --example projective_pairs`

use polyloop::complex::SimplicialComplex;
use polyloop::engine::{decompose_projective, ProjectivePair};

fn main() -> polyloop::error::Result<()> {
    let k = SimplicialComplex::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]])?;
    let pairs = [
        ("(CP^∞, *)", ProjectivePair::Based { n: None }),
        ("(CP^2, *)", ProjectivePair::Based { n: Some(2) }),
        ("(CP^∞, CP^1)", ProjectivePair::Sub { n: None, m: 1 }),
        ("(CP^3, CP^1)", ProjectivePair::Sub { n: Some(3), m: 1 }),
    ];
    for (name, pair) in pairs {
        let (p, _) = decompose_projective(&k, &[pair; 4], 12)?;
        println!("{name}: {p}");
    }
    Ok(())
}
