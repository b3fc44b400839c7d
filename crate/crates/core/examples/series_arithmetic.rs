//! Exact arithmetic on rational generating functions.
//!
//! `cargo run --example series_arithmetic`

use polyloop::homotopy::greedy_factorize;
use polyloop::series::GradedSeries;

fn main() -> polyloop::error::Result<()> {
    let s3 = GradedSeries::polynomial(&[1, 0, 0, 1]);
    let loop_s3 = GradedSeries::geometric(2);
    let p = &s3 * &loop_s3;
    println!("P(S³ × ΩS³) = {p}");
    println!("expanded    = {:?}", p.expand(10).iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("÷ P(ΩS³)    = {}", p.div(&loop_s3)?.reduced());
    println!("factors     = {}", greedy_factorize(&p, 12)?);

    let wedge_loops = GradedSeries::ratio(&[1], &[1, 0, -3, -2]);
    println!("1/(1 - 3t² - 2t³) = {}", greedy_factorize(&wedge_loops, 8)?);
    Ok(())
}
