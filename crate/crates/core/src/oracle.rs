//! Independent checks: simplicial homology of full subcomplexes, the
//! Hochster rank table of the moment-angle complex, and the loop-space series
//! it predicts when `Z_K` is a wedge of spheres.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::engine::{decompose_loop, verify_trace, PairSpec};
use crate::error::{Error, Result};
use crate::homotopy::greedy_factorize;
use crate::linalg::smith_invariants;
use crate::series::GradedSeries;

pub const DEFAULT_HOCHSTER_BOUND: usize = 12;

/// Faces grouped by dimension `-1..=dim`, each list sorted. The empty face
/// is always present.
fn faces_by_dim(k: &SimplicialComplex) -> Vec<Vec<u32>> {
    let top = (k.dim() + 1) as usize;
    let mut out = vec![Vec::new(); top + 1];
    out[0].push(0);
    for &f in k.face_masks() {
        out[f.count_ones() as usize].push(f);
    }
    out
}

/// Boundary from `size`-faces to `(size-1)`-faces, rows indexed by the latter.
fn boundary(lower: &[u32], upper: &[u32]) -> Vec<Vec<BigInt>> {
    let index: BTreeMap<u32, usize> = lower.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut d = vec![vec![BigInt::zero(); upper.len()]; lower.len()];
    for (j, &f) in upper.iter().enumerate() {
        let mut sign = 1i32;
        for v in 0..32 {
            if f >> v & 1 == 1 {
                d[index[&(f & !(1 << v))]][j] = BigInt::from(sign);
                sign = -sign;
            }
        }
    }
    d
}

/// Rank over the rationals by fraction-free elimination.
pub fn rational_rank(a: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..rows {
            if m[i][c].is_zero() {
                for j in c + 1..cols {
                    m[i][j] = &m[i][j] * &m[rank][c] / &prev;
                }
                continue;
            }
            for j in c + 1..cols {
                m[i][j] = (&m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j]) / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced rational homology ranks, nonzero degrees only. A complex with no
/// nonempty faces is `{∅}`, with `H̃_{-1} = Q`.
pub fn simplicial_homology_ranks(k: &SimplicialComplex) -> BTreeMap<isize, usize> {
    homology(k, false).0
}

fn homology(k: &SimplicialComplex, torsion: bool) -> (BTreeMap<isize, usize>, BTreeMap<isize, bool>) {
    let faces = faces_by_dim(k);
    let n = faces.len();
    // ranks[s] = rank of the boundary from size-s faces to size-(s-1) faces
    let mut ranks = vec![0usize; n + 1];
    let mut tors = vec![false; n + 1];
    for s in 1..n {
        let d = boundary(&faces[s - 1], &faces[s]);
        ranks[s] = rational_rank(&d);
        if torsion {
            tors[s] = smith_invariants(&d).iter().any(|x| x.abs() > BigInt::one());
        }
    }
    let mut out = BTreeMap::new();
    let mut tmap = BTreeMap::new();
    for s in 0..n {
        let r = faces[s].len() - ranks[s] - ranks[s + 1];
        let degree = s as isize - 1;
        if r > 0 {
            out.insert(degree, r);
        }
        if tors[s + 1] {
            tmap.insert(degree, true);
        }
    }
    (out, tmap)
}

/// Reduced cohomology ranks of `Z_K` by cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HochsterTable {
    pub ranks: BTreeMap<usize, usize>,
    /// Degrees of `Z_K` whose integral cohomology has torsion (when requested).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub torsion: BTreeMap<usize, bool>,
}

impl HochsterTable {
    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.values().any(|&t| t)
    }
}

pub fn hochster_table(k: &SimplicialComplex) -> Result<HochsterTable> {
    hochster_table_with(k, DEFAULT_HOCHSTER_BOUND, false)
}

/// `H̃^i(Z_K) = ⊕_{∅≠S} H̃^{i-|S|-1}(K_S)`, rational ranks, with optional
/// torsion detection via Smith forms of the boundary maps.
pub fn hochster_table_with(k: &SimplicialComplex, bound: usize, torsion: bool) -> Result<HochsterTable> {
    if k.m() > bound {
        return Err(Error::TooLarge { m: k.m(), bound });
    }
    let mut ranks = BTreeMap::new();
    let mut tmap = BTreeMap::new();
    for s in 1u32..(1u32 << k.m()) {
        let size = s.count_ones() as isize;
        let sub = k.full_subcomplex(&(0..k.m()).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>())?;
        let (h, t) = homology(&sub, torsion);
        for (j, r) in h {
            *ranks.entry((j + size + 1) as usize).or_insert(0) += r;
        }
        // torsion in H_j(K_S) shows up in H^{j+1}(K_S)
        for (j, _) in t {
            tmap.insert((j + size + 2) as usize, true);
        }
    }
    Ok(HochsterTable { ranks, torsion: tmap })
}

/// `Ω Z_K` when `Z_K` is a wedge of spheres: `1 / (1 - Σ r_j t^{j-1})`.
pub fn predicted_loop_series(k: &SimplicialComplex) -> Result<GradedSeries> {
    let c = k.classify();
    if !(c.flag || c.dimension <= 1) {
        return Err(Error::NotApplicable("complex is neither flag nor a graph".into()));
    }
    if !c.chordal_1_skeleton {
        return Err(Error::NotApplicable("1-skeleton is not chordal".into()));
    }
    let table = hochster_table(k)?;
    if table.ranks.is_empty() {
        return Ok(GradedSeries::one());
    }
    let top = *table.ranks.keys().last().expect("nonempty");
    let mut den = vec![0i64; top];
    den[0] = 1;
    for (&j, &r) in &table.ranks {
        if j == 0 {
            return Err(Error::NotApplicable("degree-0 class in Z_K".into()));
        }
        den[j - 1] -= r as i64;
    }
    Ok(GradedSeries::ratio(&[1], &den))
}

/// The boundary of a square up to relabelling.
pub fn is_four_cycle(k: &SimplicialComplex) -> bool {
    k.m() == 4
        && k.dim() == 1
        && k.edges().len() == 4
        && k.neighbors_and_domination().iter().all(|r| r.neighbors.len() == 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NoIndependentOracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_divergent_degree: Option<usize>,
}

impl CheckEntry {
    fn pass(name: &'static str, detail: Option<String>) -> Self {
        CheckEntry { name, status: Status::Pass, detail, first_divergent_degree: None }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckEntry { name, status: Status::Fail, detail: Some(detail), first_divergent_degree: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub passed: bool,
    pub cutoff: usize,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_coeffs")]
    pub engine_expansion: Option<Vec<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_coeffs")]
    pub reference_expansion: Option<Vec<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_source: Option<&'static str>,
}

mod opt_coeffs {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(c) => crate::bigjson::int_vec::serialize(c, s),
            None => s.serialize_none(),
        }
    }
}

fn first_difference(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Runs the engine and every available cross-check. Failures are report
/// entries, never errors.
pub fn verify_against_oracle(k: &SimplicialComplex, pairs: &PairSpec, cutoff: usize) -> OracleReport {
    let mut report = OracleReport {
        passed: false,
        cutoff,
        checks: Vec::new(),
        engine_expansion: None,
        reference_expansion: None,
        reference_source: None,
    };
    let (product, trace) = match decompose_loop(k, pairs, cutoff) {
        Ok(r) => r,
        Err(e) => {
            report.checks.push(CheckEntry::fail("decompose", format!("{}: {e}", e.code())));
            return report;
        }
    };
    report.checks.push(CheckEntry::pass("decompose", Some(product.to_string())));
    let engine = product.series().expand(cutoff);

    let moment_angle = *pairs == PairSpec::moment_angle(k.m());
    let reference = if !moment_angle {
        None
    } else if let Ok(s) = predicted_loop_series(k) {
        Some(("hochster_wedge_prediction", s))
    } else if is_four_cycle(k) {
        Some(("square_boundary_anchor", GradedSeries::ratio(&[1], &[1, 0, -2, 0, 1])))
    } else {
        None
    };
    match reference {
        Some((source, s)) => {
            let r = s.expand(cutoff);
            let exact = s == *product.series();
            let mut entry = if exact {
                CheckEntry::pass("oracle_series", None)
            } else {
                CheckEntry::fail("oracle_series", format!("engine {} vs reference {}", product.series(), s))
            };
            entry.first_divergent_degree = first_difference(&engine, &r);
            report.checks.push(entry);
            report.reference_expansion = Some(r);
            report.reference_source = Some(source);
        }
        None => report.checks.push(CheckEntry {
            name: "oracle_series",
            status: Status::NoIndependentOracle,
            detail: Some("no independent oracle".into()),
            first_divergent_degree: None,
        }),
    }

    let failures = verify_trace(&trace);
    report.checks.push(if failures.is_empty() {
        CheckEntry::pass("trace_identities", Some(format!("{} nodes", trace.distinct_nodes())))
    } else {
        CheckEntry::fail("trace_identities", format!("{} failing nodes, first: {:?}", failures.len(), failures[0]))
    });

    report.checks.push(match product.check() {
        Ok(()) => CheckEntry::pass("canonical_product", None),
        Err(e) => CheckEntry::fail("canonical_product", e.to_string()),
    });

    report.checks.push(match greedy_factorize(product.series(), cutoff) {
        Ok(g) if g.factors() == product.factors() => CheckEntry::pass("greedy_round_trip", None),
        Ok(g) => CheckEntry::fail("greedy_round_trip", format!("recovered {g}, listed {product}")),
        Err(e) => CheckEntry::fail("greedy_round_trip", e.to_string()),
    });

    report.engine_expansion = Some(engine);
    report.passed = report.checks.iter().all(|c| c.status != Status::Fail);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(m, &facets.iter().map(|f| f.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> SimplicialComplex {
        k(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]])
    }

    fn cycle5() -> SimplicialComplex {
        k(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[1, 5]])
    }

    fn path(n: usize) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = (1..n).map(|i| vec![i, i + 1]).collect();
        SimplicialComplex::from_facets(n, &f).unwrap()
    }

    #[test]
    fn homology_examples() {
        assert_eq!(simplicial_homology_ranks(&k(2, &[&[1], &[2]])), BTreeMap::from([(0, 1)]));
        assert_eq!(simplicial_homology_ranks(&k(3, &[&[1, 2], &[2, 3], &[1, 3]])), BTreeMap::from([(1, 1)]));
        assert_eq!(simplicial_homology_ranks(&square()), BTreeMap::from([(1, 1)]));
        assert!(simplicial_homology_ranks(&SimplicialComplex::simplex(3)).is_empty());
        assert_eq!(simplicial_homology_ranks(&SimplicialComplex::void()), BTreeMap::from([(-1, 1)]));
        let sphere2 = SimplicialComplex::simplex_skeleton(4, 2);
        assert_eq!(simplicial_homology_ranks(&sphere2), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn hochster_examples() {
        assert_eq!(hochster_table(&square()).unwrap().ranks, BTreeMap::from([(3, 2), (6, 1)]));
        assert_eq!(hochster_table(&k(2, &[&[1], &[2]])).unwrap().ranks, BTreeMap::from([(3, 1)]));
        assert_eq!(hochster_table(&cycle5()).unwrap().ranks, BTreeMap::from([(3, 5), (4, 5), (7, 1)]));
        let big = SimplicialComplex::simplex(13);
        assert_eq!(hochster_table(&big).unwrap_err(), Error::TooLarge { m: 13, bound: 12 });
    }

    #[test]
    fn torsion_free_for_moment_angle_examples() {
        let t = hochster_table_with(&cycle5(), 12, true).unwrap();
        assert!(!t.has_torsion());
    }

    #[test]
    fn predicted_series_examples() {
        assert_eq!(predicted_loop_series(&path(3)).unwrap(), GradedSeries::geometric(2));
        assert_eq!(predicted_loop_series(&path(4)).unwrap(), GradedSeries::ratio(&[1], &[1, 0, -3, -2]));
        assert!(matches!(predicted_loop_series(&square()), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn reports() {
        let r = verify_against_oracle(&path(3), &PairSpec::moment_angle(3), 20);
        assert!(r.passed);
        assert_eq!(r.reference_source, Some("hochster_wedge_prediction"));
        let r = verify_against_oracle(&square(), &PairSpec::moment_angle(4), 20);
        assert!(r.passed);
        assert_eq!(r.reference_source, Some("square_boundary_anchor"));
        let r = verify_against_oracle(&cycle5(), &PairSpec::moment_angle(5), 20);
        assert!(r.passed);
        let oracle = r.checks.iter().find(|c| c.name == "oracle_series").unwrap();
        assert_eq!(oracle.status, Status::NoIndependentOracle);
    }
}
