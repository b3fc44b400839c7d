//! Lyndon-word counts, Hilton–Milnor factors and Porter's splitting.
//!
//! `cargo run --example free_lie_counts`

use polyloop::homotopy::{hilton_milnor, lyndon_counts, porter_loop_wedge, SphereWedge};
use polyloop::series::GradedSeries;

fn main() -> polyloop::error::Result<()> {
    // two generators of degree 1
    let counts = lyndon_counts(&GradedSeries::polynomial(&[0, 2]), 10)?;
    println!("binary Lyndon words by length: {:?}", counts[1..].iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let wedge = SphereWedge::from_dims(&[2, 2])?;
    println!("Ω(S² ∨ S²) ≃ {}", hilton_milnor(&wedge, 6)?);

    let s3 = hilton_milnor(&SphereWedge::from_dims(&[3])?, 20)?;
    let direct = hilton_milnor(&SphereWedge::from_dims(&[3, 3])?, 20)?;
    let porter = porter_loop_wedge(&[s3.clone(), s3], 20)?;
    println!("Hilton–Milnor: {}", direct.series());
    println!("Porter:        {}", porter.series());
    println!("same factors: {}", direct.factors() == porter.factors());
    Ok(())
}
