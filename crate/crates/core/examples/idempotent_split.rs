//! Splitting `Z^n` along an idempotent integer matrix.
//!
//! `cargo run --example idempotent_split`

use polyloop::linalg::{
    idempotent_split, matrix_from_i64, primitive_bezout, run_idempotent_suite, vector_from_i64, verify_column_fixed,
};

fn main() -> polyloop::error::Result<()> {
    let a = matrix_from_i64(&[vec![1, 1], vec![0, 0]]);
    let split = idempotent_split(&a)?;
    println!("column basis {:?}", split.col_basis);
    println!("null basis   {:?}", split.null_basis);
    println!("det          {}", split.determinant());
    println!("(3,0) fixed: {}", verify_column_fixed(&a, &vector_from_i64(&[3, 0]))?);
    println!("(0,1) fixed: {}", verify_column_fixed(&a, &vector_from_i64(&[0, 1]))?);

    for v in [vec![2, 3], vec![4, 6], vec![6, 10, 15]] {
        let b = primitive_bezout(&vector_from_i64(&v))?;
        println!("{v:?}: gcd {} via {:?}", b.gcd, b.coefficients);
    }

    let report = run_idempotent_suite(200, 6, 1);
    println!("random suite: {} matrices, passed {}", report.matrices, report.passed);
    Ok(())
}
