//! Polyhedral products over skeleta of a simplex are wedges of spheres;
//! their sphere counts agree with the Hochster ranks of `Z_K`.
//!
//! `cargo run --example skeleton_wedges`

use num_traits::Zero;
use polyloop::complex::SimplicialComplex;
use polyloop::engine::{skeleton_simplex_wedge, PairSpec};
use polyloop::oracle::hochster_table;

fn main() -> polyloop::error::Result<()> {
    for m in 2..=5 {
        for k in 0..m - 1 {
            let wedge = skeleton_simplex_wedge(m, k, PairSpec::moment_angle(m).cells())?;
            let spheres: Vec<String> = wedge
                .multiplicities(2 * m)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| format!("{c}·S^{d}"))
                .collect();
            let table = hochster_table(&SimplicialComplex::simplex_skeleton(m, k))?;
            println!("m={m} k={k}: {}   Hochster {:?}", spheres.join(" ∨ "), table.ranks);
        }
    }
    Ok(())
}
