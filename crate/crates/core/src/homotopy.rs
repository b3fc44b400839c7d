//! Homotopy types in the two classes the engine works with:
//!
//! * wedges of simply connected spheres ([`SphereWedge`]), recorded by the
//!   generating function of sphere multiplicities, and
//! * products of spheres and loops on spheres ([`PProduct`]), recorded by an
//!   exact Poincaré series plus the canonical factor multiset up to a cutoff.
//!
//! The operations mirror the standard splittings: suspension of a product
//! (James), loops on a wedge (Hilton–Milnor), loops on a half-smash, and
//! Porter's splitting of loops on a wedge of arbitrary spaces. Everything is
//! carried out on series; factor lists are recovered by bottom-degree
//! induction in [`greedy_factorize`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{convolve, GradedSeries};

/// Reduced homology ranks of a connected space with free homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSeries {
    reduced: GradedSeries,
}

impl CellSeries {
    /// Checks a zero constant term and non-negative coefficients through `cutoff`.
    pub fn new(reduced: GradedSeries, cutoff: usize) -> Result<Self> {
        let c = reduced.expand(cutoff);
        if !c[0].is_zero() {
            return Err(Error::InvalidCells("nonzero degree-0 coefficient".into()));
        }
        if let Some(d) = c.iter().position(Signed::is_negative) {
            return Err(Error::InvalidCells(format!("negative coefficient in degree {d}")));
        }
        Ok(CellSeries { reduced: reduced.reduced() })
    }

    pub fn trivial() -> Self {
        CellSeries { reduced: GradedSeries::zero() }
    }

    /// `S^n`, `n >= 1`.
    pub fn sphere(n: usize) -> Self {
        assert!(n >= 1);
        CellSeries { reduced: GradedSeries::monomial(1, n) }
    }

    /// A space `A` with `ΣA` a wedge of spheres of the given dimensions (each `>= 2`).
    pub fn from_suspension_dims(dims: &[usize]) -> Result<Self> {
        let mut poly = Vec::new();
        for &d in dims {
            if d < 2 {
                return Err(Error::InvalidCells(format!("suspension sphere S^{d} is not simply connected")));
            }
            if poly.len() < d {
                poly.resize(d, BigInt::zero());
            }
            poly[d - 1] += 1;
        }
        Ok(CellSeries { reduced: GradedSeries::from_poly(poly) })
    }

    /// Reduced series of the Cartesian product of the given spaces.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a CellSeries>) -> Self {
        let one = GradedSeries::one();
        let total = factors.into_iter().fold(one.clone(), |acc, a| (&acc * &(&one + &a.reduced)).reduced());
        CellSeries { reduced: (&total - &one).reduced() }
    }

    pub fn series(&self) -> &GradedSeries {
        &self.reduced
    }

    pub fn is_trivial(&self) -> bool {
        self.reduced.is_zero()
    }
}

/// A finite-type wedge of simply connected spheres: the degree-`n`
/// coefficient of `cells` is the number of copies of `S^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereWedge {
    cells: GradedSeries,
}

impl SphereWedge {
    pub fn new(cells: GradedSeries, cutoff: usize) -> Result<Self> {
        let c = cells.expand(cutoff.max(1));
        if let Some(d) = c.iter().take(2).position(|x| !x.is_zero()) {
            return Err(Error::NotSimplyConnectedOutput(d));
        }
        if let Some(d) = c.iter().position(Signed::is_negative) {
            return Err(Error::InvalidCells(format!("negative sphere count in degree {d}")));
        }
        Ok(SphereWedge { cells: cells.reduced() })
    }

    pub fn trivial() -> Self {
        SphereWedge { cells: GradedSeries::zero() }
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        let mut poly = Vec::new();
        for &d in dims {
            if d < 2 {
                return Err(Error::NotSimplyConnectedOutput(d));
            }
            if poly.len() <= d {
                poly.resize(d + 1, BigInt::zero());
            }
            poly[d] += 1;
        }
        Ok(SphereWedge { cells: GradedSeries::from_poly(poly) })
    }

    pub fn cells(&self) -> &GradedSeries {
        &self.cells
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.is_zero()
    }

    pub fn wedge(&self, other: &SphereWedge) -> SphereWedge {
        SphereWedge { cells: (&self.cells + &other.cells).reduced() }
    }

    /// Sphere multiplicities `c_0..=c_cutoff`.
    pub fn multiplicities(&self, cutoff: usize) -> Vec<BigInt> {
        self.cells.expand(cutoff)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Sphere,
    LoopSphere,
}

/// One factor of a canonical product: `S^1`, `S^3`, `S^7`, or `ΩS^n` with
/// `n >= 3`, `n ∉ {4, 8}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PFactor {
    kind: FactorKind,
    dim: usize,
}

impl PFactor {
    pub fn sphere(dim: usize) -> Result<Self> {
        if matches!(dim, 1 | 3 | 7) {
            Ok(PFactor { kind: FactorKind::Sphere, dim })
        } else {
            Err(Error::Input(format!("S^{dim} is not an H-space factor")))
        }
    }

    pub fn loop_sphere(dim: usize) -> Result<Self> {
        if dim >= 3 && dim != 4 && dim != 8 {
            Ok(PFactor { kind: FactorKind::LoopSphere, dim })
        } else {
            Err(Error::Input(format!("ΩS^{dim} is not in canonical form")))
        }
    }

    /// The canonical factors of `ΩS^n`, `n >= 2`: the Hopf fibrations give
    /// `ΩS^n ≃ S^{n-1} × ΩS^{2n-1}` for `n = 2, 4, 8`.
    pub fn canonical_loop(n: usize) -> Vec<PFactor> {
        assert!(n >= 2);
        match n {
            2 | 4 | 8 => vec![
                PFactor { kind: FactorKind::Sphere, dim: n - 1 },
                PFactor { kind: FactorKind::LoopSphere, dim: 2 * n - 1 },
            ],
            _ => vec![PFactor { kind: FactorKind::LoopSphere, dim: n }],
        }
    }

    /// The canonical factor whose bottom homology sits in degree `d >= 1`.
    pub fn with_bottom_degree(d: usize) -> PFactor {
        if matches!(d, 1 | 3 | 7) {
            PFactor { kind: FactorKind::Sphere, dim: d }
        } else {
            PFactor { kind: FactorKind::LoopSphere, dim: d + 1 }
        }
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bottom_degree(&self) -> usize {
        match self.kind {
            FactorKind::Sphere => self.dim,
            FactorKind::LoopSphere => self.dim - 1,
        }
    }

    /// `1 + t^n` for `S^n`, `1 / (1 - t^{n-1})` for `ΩS^n`.
    pub fn series(&self) -> GradedSeries {
        match self.kind {
            FactorKind::Sphere => &GradedSeries::one() + &GradedSeries::monomial(1, self.dim),
            FactorKind::LoopSphere => GradedSeries::geometric(self.dim - 1),
        }
    }
}

impl Ord for PFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.bottom_degree(), self.kind, self.dim).cmp(&(other.bottom_degree(), other.kind, other.dim))
    }
}

impl PartialOrd for PFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::Sphere => write!(f, "S^{}", self.dim),
            FactorKind::LoopSphere => write!(f, "ΩS^{}", self.dim),
        }
    }
}

/// A finite-type product of spheres and loops on spheres.
///
/// `series` is the full Poincaré series and is exact; `factors` lists the
/// canonical factors whose bottom degree is at most `cutoff`. Factors above
/// the cutoff are accounted for only by the series.
#[derive(Clone, Debug)]
pub struct PProduct {
    series: GradedSeries,
    factors: BTreeMap<PFactor, BigUint>,
    cutoff: usize,
}

impl PartialEq for PProduct {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff && self.factors == other.factors && self.series == other.series
    }
}

impl Eq for PProduct {}

impl PProduct {
    /// The contractible product.
    pub fn trivial(cutoff: usize) -> Self {
        PProduct { series: GradedSeries::one(), factors: BTreeMap::new(), cutoff }
    }

    /// A finite product of the given factors.
    pub fn from_factors(factors: &[(PFactor, usize)], cutoff: usize) -> Self {
        let mut series = GradedSeries::one();
        let mut listed = BTreeMap::new();
        for &(f, mult) in factors {
            if mult == 0 {
                continue;
            }
            series = (&series * &f.series().pow(mult)).reduced();
            if f.bottom_degree() <= cutoff {
                *listed.entry(f).or_insert_with(BigUint::zero) += mult;
            }
        }
        PProduct { series, factors: listed, cutoff }
    }

    pub fn series(&self) -> &GradedSeries {
        &self.series
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn factors(&self) -> &BTreeMap<PFactor, BigUint> {
        &self.factors
    }

    pub fn multiplicity(&self, f: &PFactor) -> BigUint {
        self.factors.get(f).cloned().unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.series.is_one()
    }

    /// Reduced homology series of the product, as a space in its own right.
    pub fn reduced_cells(&self) -> CellSeries {
        CellSeries { reduced: (&self.series - &GradedSeries::one()).reduced() }
    }

    /// Cartesian product.
    pub fn times(&self, other: &PProduct) -> PProduct {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut factors: BTreeMap<PFactor, BigUint> = BTreeMap::new();
        for (f, k) in self.factors.iter().chain(other.factors.iter()) {
            if f.bottom_degree() <= cutoff {
                *factors.entry(*f).or_insert_with(BigUint::zero) += k;
            }
        }
        PProduct { series: (&self.series * &other.series).reduced(), factors, cutoff }
    }

    /// The listed factors' series, with multiplicities.
    pub fn listed_series(&self) -> Result<GradedSeries> {
        let mut s = GradedSeries::one();
        for (f, k) in &self.factors {
            let k = k.to_usize().ok_or_else(|| Error::Input("multiplicity too large to expand".into()))?;
            s = (&s * &f.series().pow(k)).reduced();
        }
        Ok(s)
    }

    /// Checks the class invariants: unit constant term, non-negative
    /// expansion, and `series / ∏ listed ≡ 1 (mod t^{cutoff+1})` with
    /// non-negative residual.
    pub fn check(&self) -> Result<()> {
        let c = self.series.expand(self.cutoff);
        if !c[0].is_one() {
            return Err(Error::NotCanonicalP(0));
        }
        if let Some(d) = c.iter().position(Signed::is_negative) {
            return Err(Error::NotCanonicalP(d));
        }
        let mut r = c;
        for (f, k) in &self.factors {
            remove_factor(&mut r, f, k, self.cutoff);
        }
        match r.iter().skip(1).position(|x| !x.is_zero()) {
            None if r[0].is_one() => Ok(()),
            Some(d) => Err(Error::NotCanonicalP(d + 1)),
            None => Err(Error::NotCanonicalP(0)),
        }
    }

    pub fn to_doc(&self) -> ProductDoc {
        ProductDoc {
            factors: self
                .factors
                .iter()
                .map(|(f, k)| FactorDoc { kind: f.kind, dim: f.dim, mult: k.clone() })
                .collect(),
            series: self.series.to_doc(),
            cutoff: self.cutoff,
        }
    }
}

impl fmt::Display for PProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "*")?;
        }
        let mut first = true;
        for (fac, k) in &self.factors {
            if !first {
                write!(f, " × ")?;
            }
            first = false;
            if k.is_one() {
                write!(f, "{fac}")?;
            } else {
                write!(f, "({fac})^{k}")?;
            }
        }
        write!(f, "  [{} through degree {}]", self.series, self.cutoff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub kind: FactorKind,
    pub dim: usize,
    #[serde(with = "crate::bigjson::uint")]
    pub mult: BigUint,
}

/// On-disk form of a [`PProduct`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub factors: Vec<FactorDoc>,
    pub series: crate::series::SeriesDoc,
    pub cutoff: usize,
}

impl TryFrom<ProductDoc> for PProduct {
    type Error = Error;
    fn try_from(doc: ProductDoc) -> Result<Self> {
        let series = GradedSeries::try_from(doc.series)?;
        let mut factors = BTreeMap::new();
        for fd in doc.factors {
            let f = match fd.kind {
                FactorKind::Sphere => PFactor::sphere(fd.dim)?,
                FactorKind::LoopSphere => PFactor::loop_sphere(fd.dim)?,
            };
            if f.bottom_degree() <= doc.cutoff && !fd.mult.is_zero() {
                *factors.entry(f).or_insert_with(BigUint::zero) += fd.mult;
            }
        }
        let p = PProduct { series, factors, cutoff: doc.cutoff };
        p.check()?;
        Ok(p)
    }
}

fn binomial_big(n: &BigUint, k: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        let i_big = BigUint::from(i);
        if *n < i_big {
            return BigUint::zero();
        }
        let top = n - i_big;
        c = c * top / BigUint::from(i + 1);
    }
    c
}

/// Truncated `(1 - t^n)^e`.
fn one_minus_power(n: usize, e: &BigUint, cutoff: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cutoff + 1];
    for k in 0..=cutoff / n {
        let c = BigInt::from_biguint(Sign::Plus, binomial_big(e, k));
        out[n * k] = if k % 2 == 0 { c } else { -c };
    }
    out
}

/// Truncated `(1 + t^n)^{-e}`.
fn one_plus_power_inverse(n: usize, e: &BigUint, cutoff: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cutoff + 1];
    for k in 0..=cutoff / n {
        // (-1)^k C(e+k-1, k)
        let c = if k == 0 { BigUint::one() } else { binomial_big(&(e + BigUint::from(k - 1)), k) };
        let c = BigInt::from_biguint(Sign::Plus, c);
        out[n * k] = if k % 2 == 0 { c } else { -c };
    }
    out
}

/// Divides a truncated expansion by `k` copies of a factor's series.
fn remove_factor(r: &mut Vec<BigInt>, f: &PFactor, k: &BigUint, cutoff: usize) {
    let d = f.bottom_degree();
    let inv = match f.kind {
        FactorKind::Sphere => one_plus_power_inverse(d, k, cutoff),
        FactorKind::LoopSphere => one_minus_power(d, k, cutoff),
    };
    *r = convolve(r, &inv, cutoff);
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("non-negative")
}

/// Graded basic-product counts `ℓ_n` for a free Lie algebra whose generators
/// are counted by `f`: the unique `ℓ_n >= 0` with
/// `∏_n (1 - t^n)^{ℓ_n} ≡ 1 - f (mod t^{cutoff+1})`.
/// The returned vector is indexed by degree, `0..=cutoff`, with `ℓ_0 = 0`.
pub fn lyndon_counts(f: &GradedSeries, cutoff: usize) -> Result<Vec<BigUint>> {
    let fc = f.expand(cutoff);
    if !fc[0].is_zero() {
        return Err(Error::InvalidCells("generating series has a constant term".into()));
    }
    if let Some(d) = fc.iter().position(Signed::is_negative) {
        return Err(Error::InvalidCells(format!("negative generator count in degree {d}")));
    }
    let gen = (&GradedSeries::one() - f).recip()?;
    let mut r = gen.expand(cutoff);
    let mut counts = vec![BigUint::zero(); cutoff + 1];
    for n in 1..=cutoff {
        if r[n].is_negative() {
            return Err(Error::NoSolution(n));
        }
        if r[n].is_zero() {
            continue;
        }
        let l = to_biguint(&r[n]);
        r = convolve(&r, &one_minus_power(n, &l, cutoff), cutoff);
        counts[n] = l;
    }
    debug_assert!(r[0].is_one() && r.iter().skip(1).all(Zero::is_zero));
    Ok(counts)
}

/// `X * Y ≃ Σ(X ∧ Y)`: cell series `t · a · b`.
pub fn join_cells(a: &CellSeries, b: &CellSeries) -> Result<SphereWedge> {
    let cells = (&a.reduced * &b.reduced).shift(1).reduced();
    let low = cells.expand(1);
    if let Some(d) = low.iter().position(|x| !x.is_zero()) {
        return Err(Error::NotSimplyConnectedOutput(d));
    }
    Ok(SphereWedge { cells })
}

/// Suspension of a product as a wedge of spheres: cell series `t · (P - 1)`.
pub fn suspension_splitting(p: &PProduct) -> SphereWedge {
    SphereWedge { cells: (&p.series - &GradedSeries::one()).shift(1).reduced() }
}

/// Loops on a wedge of spheres, expanded into basic products and written in
/// canonical form. The exact series is `1 / (1 - cells / t)`.
pub fn hilton_milnor(w: &SphereWedge, cutoff: usize) -> Result<PProduct> {
    if w.is_trivial() {
        return Ok(PProduct::trivial(cutoff));
    }
    let letters = w.cells.unshift(1)?;
    let counts = lyndon_counts(&letters, cutoff)?;
    let mut factors = BTreeMap::new();
    for (n, l) in counts.iter().enumerate().skip(1) {
        if l.is_zero() {
            continue;
        }
        for f in PFactor::canonical_loop(n + 1) {
            if f.bottom_degree() <= cutoff {
                *factors.entry(f).or_insert_with(BigUint::zero) += l;
            }
        }
    }
    let series = (&GradedSeries::one() - &letters).recip()?.reduced();
    Ok(PProduct { series, factors, cutoff })
}

/// `Ω(X ⋉ Y) ≃ Ω(X * ΩY) × ΩY`, with `ΣX` a wedge of spheres and `ΩY` given.
pub fn loop_half_smash(x: &CellSeries, y_loop: &PProduct, cutoff: usize) -> Result<PProduct> {
    let join = join_cells(x, &y_loop.reduced_cells())?;
    Ok(hilton_milnor(&join, cutoff)?.times(y_loop))
}

/// Residual wedge of Porter's splitting: `Σ_{|T|>=2} (|T|-1) · t · ∏_{i∈T} (P_i - 1)`.
pub fn porter_residual(summands: &[PProduct]) -> SphereWedge {
    let reduced: Vec<GradedSeries> =
        summands.iter().filter(|p| !p.is_trivial()).map(|p| p.reduced_cells().reduced).collect();
    let n = reduced.len();
    let mut cells = GradedSeries::zero();
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let term =
            (0..n).filter(|i| mask >> i & 1 == 1).fold(GradedSeries::one(), |acc, i| (&acc * &reduced[i]).reduced());
        cells = (&cells + &term.scale(&BigInt::from(size - 1))).reduced();
    }
    SphereWedge { cells: cells.shift(1) }
}

/// Loops on a wedge `X_1 ∨ … ∨ X_m` from the loops `ΩX_i`.
pub fn porter_loop_wedge(summands: &[PProduct], cutoff: usize) -> Result<PProduct> {
    let base = summands.iter().fold(PProduct::trivial(cutoff), |acc, p| acc.times(p));
    let residual = porter_residual(summands);
    Ok(base.times(&hilton_milnor(&residual, cutoff)?))
}

/// Recovers the canonical factor multiset from a Poincaré series by
/// bottom-degree induction: in degree `d` the lowest remaining coefficient
/// counts factors `S^d` if `d ∈ {1, 3, 7}` and `ΩS^{d+1}` otherwise.
pub fn greedy_factorize(s: &GradedSeries, cutoff: usize) -> Result<PProduct> {
    let mut r = s.expand(cutoff);
    if !r[0].is_one() {
        return Err(Error::NotCanonicalP(0));
    }
    if let Some(d) = r.iter().position(Signed::is_negative) {
        return Err(Error::NotCanonicalP(d));
    }
    let mut factors = BTreeMap::new();
    for d in 1..=cutoff {
        if r[d].is_zero() {
            continue;
        }
        let k = to_biguint(&r[d]);
        let f = PFactor::with_bottom_degree(d);
        remove_factor(&mut r, &f, &k, cutoff);
        if let Some(bad) = r.iter().position(Signed::is_negative) {
            return Err(Error::NotCanonicalP(bad));
        }
        factors.insert(f, k);
    }
    if !r[0].is_one() || r.iter().skip(1).any(|x| !x.is_zero()) {
        return Err(Error::NotCanonicalP(cutoff));
    }
    Ok(PProduct { series: s.reduced(), factors, cutoff })
}

/// The complementary factor of a retract: `big ≃ small × result`.
pub fn divide_products(big: &PProduct, small: &PProduct) -> Result<PProduct> {
    let cutoff = big.cutoff.min(small.cutoff);
    let q = big.series.div(&small.series)?.reduced();
    if let Some(d) = q.first_negative(cutoff) {
        return Err(Error::NotADivisor(d));
    }
    greedy_factorize(&q, cutoff)
}
