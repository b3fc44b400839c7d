//! Idempotent integer matrices and the splitting `Z^n = N(A) ⊕ C(A)`.
//!
//! Everything is exact over `Z`: kernels come from column-style Hermite
//! reduction with a unimodular transform, and unimodularity is certified by a
//! fraction-free determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix.
pub type Matrix = Vec<Vec<BigInt>>;

pub fn matrix_from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn vector_from_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn check_square(a: &Matrix) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::BadShape);
    }
    Ok(n)
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(x).fold(BigInt::zero(), |acc, (r, v)| acc + r * v)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_idempotent(a: &Matrix) -> bool {
    check_square(a).is_ok() && mat_mul(a, a) == *a
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(a: &Matrix) -> Result<BigInt> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Column Hermite reduction: returns `(H, U)` with `A·U = H`, `U` unimodular
/// and `H` in column echelon form. The number of nonzero leading columns of
/// `H` is the rank; the remaining columns of `U` span the integer kernel.
pub fn column_hermite(a: &Matrix, cols: usize) -> (Matrix, Matrix, usize) {
    let rows = a.len();
    let mut h = a.clone();
    let mut u = identity(cols);
    let swap_cols = |m: &mut Matrix, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= q * col_i
    let sub_col = |m: &mut Matrix, j: usize, i: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let t = &row[i] * q;
            row[j] -= t;
        }
    };
    let negate_col = |m: &mut Matrix, i: usize| {
        for row in m.iter_mut() {
            row[i] = -row[i].clone();
        }
    };
    let mut rank = 0;
    for r in 0..rows {
        if rank == cols {
            break;
        }
        loop {
            let pivot = (rank..cols).filter(|&j| !h[r][j].is_zero()).min_by_key(|&j| h[r][j].abs());
            let Some(p) = pivot else { break };
            swap_cols(&mut h, rank, p);
            swap_cols(&mut u, rank, p);
            let mut done = true;
            for j in rank + 1..cols {
                if !h[r][j].is_zero() {
                    let q = h[r][j].div_floor(&h[r][rank]);
                    sub_col(&mut h, j, rank, &q);
                    sub_col(&mut u, j, rank, &q);
                    if !h[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rank < cols && !h[r][rank].is_zero() {
            if h[r][rank].is_negative() {
                negate_col(&mut h, rank);
                negate_col(&mut u, rank);
            }
            for j in 0..rank {
                let q = h[r][j].div_floor(&h[r][rank]);
                sub_col(&mut h, j, rank, &q);
                sub_col(&mut u, j, rank, &q);
            }
            rank += 1;
        }
    }
    (h, u, rank)
}

/// Row Hermite normal form of a list of row vectors (zero rows dropped).
pub fn row_hermite(vectors: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let transposed: Matrix = (0..cols).map(|c| vectors.iter().map(|v| v[c].clone()).collect()).collect();
    let (h, _, rank) = column_hermite(&transposed, vectors.len());
    (0..rank).map(|j| (0..cols).map(|c| h[c][j].clone()).collect()).collect()
}

/// A saturated basis of `{x ∈ Z^n : A·x = 0}`, in Hermite form.
pub fn integer_kernel(a: &Matrix, n: usize) -> Vec<Vec<BigInt>> {
    let (_, u, rank) = column_hermite(a, n);
    let basis: Vec<Vec<BigInt>> = (rank..n).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect();
    row_hermite(&basis, n)
}

/// Invariant factors of an integer matrix (the nonzero diagonal of its Smith form).
pub fn smith_invariants(a: &Matrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let p = m[t][t].clone();
        let mut clean = true;
        let (head, tail) = m.split_at_mut(t + 1);
        let pivot_row = &head[t];
        for row in tail.iter_mut() {
            let q = row[t].div_floor(&p);
            if !q.is_zero() {
                for (x, y) in row[t..].iter_mut().zip(&pivot_row[t..]) {
                    *x -= y * &q;
                }
            }
            clean &= row[t].is_zero();
        }
        for j in t + 1..cols {
            let q = m[t][j].div_floor(&p);
            if !q.is_zero() {
                for row in m[t..].iter_mut() {
                    let s = &row[t] * &q;
                    row[j] -= s;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p))) {
            let src = m[i].clone();
            for (x, y) in m[t][t..].iter_mut().zip(&src[t..]) {
                *x += y;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// `Z^n = N(A) ⊕ C(A)` for an idempotent `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdempotentSplit {
    #[serde(with = "vec_of_int_vec")]
    pub null_basis: Vec<Vec<BigInt>>,
    #[serde(with = "vec_of_int_vec")]
    pub col_basis: Vec<Vec<BigInt>>,
}

impl IdempotentSplit {
    /// Square matrix with the column basis followed by the null basis as columns.
    pub fn concatenated(&self) -> Matrix {
        let vs: Vec<&Vec<BigInt>> = self.col_basis.iter().chain(&self.null_basis).collect();
        let n = vs.len();
        (0..n).map(|i| vs.iter().map(|v| v[i].clone()).collect()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.concatenated()).expect("concatenated basis is square")
    }
}

pub fn idempotent_split(a: &Matrix) -> Result<IdempotentSplit> {
    let n = check_square(a)?;
    if !is_idempotent(a) {
        return Err(Error::NotIdempotent);
    }
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= 1;
    }
    Ok(IdempotentSplit { null_basis: integer_kernel(a, n), col_basis: integer_kernel(&shifted, n) })
}

/// Whether `x` lies in the integer column space of the idempotent `A`.
pub fn verify_column_fixed(a: &Matrix, x: &[BigInt]) -> Result<bool> {
    let n = check_square(a)?;
    if !is_idempotent(a) {
        return Err(Error::NotIdempotent);
    }
    if x.len() != n {
        return Err(Error::BadShape);
    }
    let (h, u, rank) = column_hermite(a, n);
    // solve H·y = x column by column along the echelon pivots
    let mut y = vec![BigInt::zero(); n];
    let mut residual = x.to_vec();
    let mut row = 0;
    for (j, yj) in y.iter_mut().enumerate().take(rank) {
        while row < n && h[row][j].is_zero() {
            if !residual[row].is_zero() {
                return Ok(false);
            }
            row += 1;
        }
        let (q, r) = residual[row].div_rem(&h[row][j]);
        if !r.is_zero() {
            return Ok(false);
        }
        for (i, res) in residual.iter_mut().enumerate() {
            *res -= &h[i][j] * &q;
        }
        *yj = q;
        row += 1;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return Ok(false);
    }
    let preimage = mat_vec(&u, &y);
    debug_assert_eq!(mat_vec(a, &preimage), x);
    let fixed = mat_vec(a, x) == x;
    if !fixed {
        return Err(Error::InternalCheck("column-space vector not fixed by an idempotent".into()));
    }
    Ok(true)
}

/// A gcd with its Bézout certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bezout {
    #[serde(with = "crate::bigjson::int")]
    pub gcd: BigInt,
    #[serde(with = "crate::bigjson::int_vec")]
    pub coefficients: Vec<BigInt>,
    pub primitive: bool,
    /// Some component is odd; always true for a primitive vector.
    pub has_odd_component: bool,
}

pub fn primitive_bezout(v: &[BigInt]) -> Result<Bezout> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut g = BigInt::zero();
    let mut c: Vec<BigInt> = Vec::with_capacity(v.len());
    for x in v {
        let e = g.extended_gcd(x);
        for ci in c.iter_mut() {
            *ci *= &e.x;
        }
        c.push(e.y);
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for ci in c.iter_mut() {
            *ci = -ci.clone();
        }
    }
    if dot(&c, v) != g {
        return Err(Error::InternalCheck("Bézout certificate does not re-verify".into()));
    }
    let has_odd_component = v.iter().any(|x| x.is_odd());
    let primitive = g.is_one();
    if primitive && !has_odd_component {
        return Err(Error::InternalCheck("primitive vector with only even components".into()));
    }
    Ok(Bezout { gcd: g, coefficients: c, primitive, has_odd_component })
}

/// A random unimodular matrix and its inverse, from `ops` elementary moves
/// with multipliers in `-bound..=bound`.
pub fn random_unimodular<R: Rng>(n: usize, ops: usize, bound: i64, rng: &mut R) -> (Matrix, Matrix) {
    let mut u = identity(n);
    let mut inv = identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let q = BigInt::from(rng.gen_range(-bound..=bound));
        // U ← U·(I + q·e_ij): col_j += q·col_i; inverse ← (I − q·e_ij)·inverse: row_i −= q·row_j
        for row in u.iter_mut() {
            let t = &row[i] * &q;
            row[j] += t;
        }
        let rj = inv[j].clone();
        for (x, y) in inv[i].iter_mut().zip(&rj) {
            *x -= y * &q;
        }
    }
    (u, inv)
}

/// `U·diag(d)·U^{-1}` with random 0/1 diagonal.
pub fn random_idempotent<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let (u, inv) = random_unimodular(n, 2 * n, 2, rng);
    let d: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j && rng.gen_bool(0.5) { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    mat_mul(&mat_mul(&u, &d), &inv)
}

/// Outcome of checking one idempotent matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCheck {
    #[serde(with = "vec_of_int_vec")]
    pub matrix: Matrix,
    pub null_rank: usize,
    pub col_rank: usize,
    #[serde(with = "crate::bigjson::int")]
    pub determinant: BigInt,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// All checks on one matrix: split, unimodular concatenation, fixed column
/// basis, annihilated null basis, and Bézout certificates for every basis vector.
pub fn check_idempotent(a: &Matrix) -> SplitCheck {
    let mut out = SplitCheck {
        matrix: a.clone(),
        null_rank: 0,
        col_rank: 0,
        determinant: BigInt::zero(),
        passed: false,
        error: None,
    };
    let result = (|| -> Result<()> {
        let n = check_square(a)?;
        let split = idempotent_split(a)?;
        out.null_rank = split.null_basis.len();
        out.col_rank = split.col_basis.len();
        out.determinant = split.determinant();
        if out.null_rank + out.col_rank != n {
            return Err(Error::InternalCheck("ranks do not sum to n".into()));
        }
        if !out.determinant.abs().is_one() {
            return Err(Error::InternalCheck("concatenated basis is not unimodular".into()));
        }
        for y in &split.col_basis {
            if mat_vec(a, y) != *y || !verify_column_fixed(a, y)? {
                return Err(Error::InternalCheck("column basis vector not fixed".into()));
            }
            primitive_bezout(y)?;
        }
        for x in &split.null_basis {
            if mat_vec(a, x).iter().any(|c| !c.is_zero()) {
                return Err(Error::InternalCheck("null basis vector not annihilated".into()));
            }
            primitive_bezout(x)?;
        }
        Ok(())
    })();
    match result {
        Ok(()) => out.passed = true,
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Aggregate of a seeded random run over idempotents and Bézout vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub seed: u64,
    pub matrices: usize,
    pub bezout_vectors: usize,
    pub failures: Vec<SplitCheck>,
    pub bezout_failures: Vec<String>,
}

/// `count` random idempotents of size `1..=max_n`, each followed by a
/// Bézout check on a random nonzero vector of the same length.
pub fn run_idempotent_suite(count: usize, max_n: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut bezout_failures = Vec::new();
    for _ in 0..count {
        let n = rng.gen_range(1..=max_n.max(1));
        let a = random_idempotent(n, &mut rng);
        let c = check_idempotent(&a);
        if !c.passed {
            failures.push(c);
        }
        let mut v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-30i64..=30))).collect();
        if v.iter().all(Zero::is_zero) {
            v[0] = BigInt::one();
        }
        if let Err(e) = primitive_bezout(&v) {
            bezout_failures.push(format!("{v:?}: {e}"));
        }
    }
    SuiteReport {
        passed: failures.is_empty() && bezout_failures.is_empty(),
        seed,
        matrices: count,
        bezout_vectors: count,
        failures,
        bezout_failures,
    }
}

/// Serde adapter for lists of integer vectors.
pub(crate) mod vec_of_int_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "crate::bigjson::int_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row> = v.iter().map(|r| Row(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        matrix_from_i64(rows)
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        vector_from_i64(x)
    }

    #[test]
    fn zero_and_identity() {
        let z = idempotent_split(&m(&[vec![0, 0], vec![0, 0]])).unwrap();
        assert_eq!(z.null_basis, vec![v(&[1, 0]), v(&[0, 1])]);
        assert!(z.col_basis.is_empty());
        let i = idempotent_split(&identity(2)).unwrap();
        assert!(i.null_basis.is_empty());
        assert_eq!(i.col_basis, vec![v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn rank_one_projection() {
        let a = m(&[vec![1, 1], vec![0, 0]]);
        let s = idempotent_split(&a).unwrap();
        assert_eq!(s.col_basis, vec![v(&[1, 0])]);
        assert_eq!(s.null_basis, vec![v(&[1, -1])]);
        assert_eq!(s.determinant(), BigInt::from(-1));
    }

    #[test]
    fn not_idempotent() {
        assert_eq!(idempotent_split(&m(&[vec![2, 0], vec![0, 1]])).unwrap_err(), Error::NotIdempotent);
        assert_eq!(verify_column_fixed(&m(&[vec![1, 1], vec![1, 0]]), &v(&[1, 0])).unwrap_err(), Error::NotIdempotent);
    }

    #[test]
    fn column_membership() {
        let a = m(&[vec![1, 1], vec![0, 0]]);
        assert!(verify_column_fixed(&a, &v(&[3, 0])).unwrap());
        assert!(!verify_column_fixed(&a, &v(&[0, 1])).unwrap());
        assert!(verify_column_fixed(&identity(3), &v(&[4, -7, 2])).unwrap());
    }

    #[test]
    fn bezout_examples() {
        let b = primitive_bezout(&v(&[2, 3])).unwrap();
        assert_eq!((b.gcd.clone(), b.coefficients.clone()), (BigInt::from(1), v(&[-1, 1])));
        assert!(b.primitive && b.has_odd_component);
        let b = primitive_bezout(&v(&[1, 0, 0])).unwrap();
        assert_eq!(b.coefficients, v(&[1, 0, 0]));
        let b = primitive_bezout(&v(&[4, 6])).unwrap();
        assert_eq!((b.gcd.clone(), b.coefficients.clone()), (BigInt::from(2), v(&[-1, 1])));
        assert!(!b.primitive);
        let b = primitive_bezout(&v(&[0, -3, 6])).unwrap();
        assert_eq!(b.gcd, BigInt::from(3));
        assert_eq!(primitive_bezout(&v(&[0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]])).unwrap(), BigInt::from(6));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn smith_of_boundary_like_matrices() {
        assert_eq!(smith_invariants(&m(&[vec![2, 0], vec![0, 3]])), v(&[1, 6]));
        assert_eq!(smith_invariants(&m(&[vec![2, 4], vec![4, 8]])), v(&[2]));
        assert!(smith_invariants(&m(&[vec![0, 0]])).is_empty());
    }

    #[test]
    fn random_idempotents_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let a = random_idempotent(n, &mut rng);
            assert!(is_idempotent(&a));
            let c = check_idempotent(&a);
            assert!(c.passed, "{:?}", c.error);
        }
    }

    #[test]
    fn unimodular_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (u, inv) = random_unimodular(5, 12, 2, &mut rng);
        assert_eq!(mat_mul(&u, &inv), identity(5));
    }
}

/// Serde adapter for lists of matrices.
pub(crate) mod vec_of_matrices {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    struct M(#[serde(with = "super::vec_of_int_vec")] Vec<Vec<BigInt>>);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<BigInt>>>, D::Error> {
        Ok(Vec::<M>::deserialize(d)?.into_iter().map(|m| m.0).collect())
    }
}
