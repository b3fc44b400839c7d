//! Exact one-variable generating functions with integer coefficients.
//!
//! A [`GradedSeries`] is a fraction `num / den` of integer polynomials whose
//! denominator has constant term `±1`, so that the formal power series
//! expansion has integer coefficients. Equality is decided by
//! cross-multiplication; no normal form is required for correctness.
//! [`GradedSeries::reduced`] cancels the polynomial gcd when a caller wants to
//! keep degrees small.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default truncation degree for expansions and factor listings.
pub const DEFAULT_CUTOFF: usize = 20;

/// Dense integer polynomial, ascending degree, no trailing zeros.
pub type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_from_i64(c: &[i64]) -> Poly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) => x + y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_neg(a: &[BigInt]) -> Poly {
    a.iter().map(|x| -x).collect()
}

fn poly_sub(a: &[BigInt], b: &[BigInt]) -> Poly {
    poly_add(a, &poly_neg(b))
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_scale(a: &[BigInt], c: &BigInt) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(p: &[BigInt]) -> Poly {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    let mut q: Poly = p.iter().map(|x| x / &c).collect();
    if q.last().is_some_and(Signed::is_negative) {
        q = poly_neg(&q);
    }
    q
}

/// Pseudo-remainder of `a` by `b` (b nonzero).
fn prem(a: &[BigInt], b: &[BigInt]) -> Poly {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let top = r[dr].clone();
        r = r.iter().map(|x| x * lead).collect();
        for (j, y) in b.iter().enumerate() {
            r[dr - db + j] -= &top * y;
        }
        r = trim(r);
    }
    r
}

/// Primitive gcd over `Z[t]`, positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Poly {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    a
}

/// Exact quotient `a / g`, where `g(0) = ±1` and `g` divides `a`.
fn poly_div_exact(a: &[BigInt], g: &[BigInt]) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let n = a.len() + 1 - g.len();
    let unit = &g[0];
    let mut q = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut acc = a[k].clone();
        for i in 1..g.len().min(k + 1) {
            acc -= &g[i] * &q[k - i];
        }
        q[k] = acc * unit;
    }
    debug_assert_eq!(trim(poly_mul(&q, g)), trim(a.to_vec()));
    trim(q)
}

/// Degree-`<= cutoff` convolution of two coefficient lists.
pub fn convolve(a: &[BigInt], b: &[BigInt], cutoff: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cutoff + 1];
    for (i, x) in a.iter().enumerate().take(cutoff + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(cutoff + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// A rational generating function `num / den` with `den(0) = ±1`.
#[derive(Clone)]
pub struct GradedSeries {
    num: Poly,
    den: Poly,
}

impl GradedSeries {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        let c0 = den.first().cloned().unwrap_or_default();
        if !c0.abs().is_one() {
            return Err(Error::NonUnitConstant { what: "denominator", value: c0.to_string() });
        }
        let mut s = GradedSeries { num, den };
        if c0.is_negative() {
            s.num = poly_neg(&s.num);
            s.den = poly_neg(&s.den);
        }
        Ok(s)
    }

    /// Fraction from small coefficient lists; panics on a non-unit denominator.
    pub fn ratio(num: &[i64], den: &[i64]) -> Self {
        Self::new(poly_from_i64(num), poly_from_i64(den)).expect("denominator constant term must be ±1")
    }

    pub fn polynomial(coeffs: &[i64]) -> Self {
        Self::from_poly(poly_from_i64(coeffs))
    }

    pub fn from_poly(num: Poly) -> Self {
        GradedSeries { num: trim(num), den: vec![BigInt::one()] }
    }

    pub fn zero() -> Self {
        Self::from_poly(Vec::new())
    }

    pub fn one() -> Self {
        Self::polynomial(&[1])
    }

    /// `c · t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut p = vec![BigInt::zero(); k + 1];
        p[k] = BigInt::from(c);
        Self::from_poly(p)
    }

    /// `1 / (1 - t^k)` for `k >= 1`.
    pub fn geometric(k: usize) -> Self {
        assert!(k >= 1);
        let mut den = vec![BigInt::zero(); k + 1];
        den[0] = BigInt::one();
        den[k] = -BigInt::one();
        GradedSeries { num: vec![BigInt::one()], den }
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn constant_term(&self) -> BigInt {
        // den(0) = 1 after normalization
        self.num.first().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        GradedSeries { num: poly_scale(&self.num, c), den: self.den.clone() }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.num.iter().cloned());
        GradedSeries { num, den: self.den.clone() }
    }

    /// Divide by `t^k`; the numerator must vanish below degree `k`.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(d) = self.num.iter().take(k).position(|x| !x.is_zero()) {
            return Err(Error::InvalidCells(format!("nonzero coefficient in degree {d} below shift {k}")));
        }
        Ok(GradedSeries { num: self.num[k.min(self.num.len())..].to_vec(), den: self.den.clone() })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Quotient `self / other`; `other` must have constant term `±1`.
    pub fn div(&self, other: &GradedSeries) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionUndefined);
        }
        let c0 = other.constant_term();
        if !c0.abs().is_one() {
            return Err(Error::NonUnitConstant { what: "divisor", value: c0.to_string() });
        }
        Self::new(poly_mul(&self.num, &other.den), poly_mul(&self.den, &other.num))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Coefficients `c_0..=c_cutoff` of the formal expansion.
    pub fn expand(&self, cutoff: usize) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = Vec::with_capacity(cutoff + 1);
        let unit = &self.den[0];
        for n in 0..=cutoff {
            let mut acc = self.num.get(n).cloned().unwrap_or_default();
            for i in 1..self.den.len().min(n + 1) {
                if !self.den[i].is_zero() {
                    acc -= &self.den[i] * &c[n - i];
                }
            }
            c.push(acc * unit);
        }
        c
    }

    /// Lowest degree `<= cutoff` with a nonzero coefficient.
    pub fn valuation(&self, cutoff: usize) -> Option<usize> {
        self.expand(cutoff).iter().position(|x| !x.is_zero())
    }

    /// First degree `<= cutoff` with a negative coefficient.
    pub fn first_negative(&self, cutoff: usize) -> Option<usize> {
        self.expand(cutoff).iter().position(Signed::is_negative)
    }

    /// The same rational function with the polynomial gcd cancelled.
    pub fn reduced(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.den.len() == 1 {
            return self.clone();
        }
        let g = poly_gcd(&self.num, &self.den);
        if g.len() <= 1 {
            return self.clone();
        }
        Self::new(poly_div_exact(&self.num, &g), poly_div_exact(&self.den, &g))
            .expect("gcd of a unit-constant denominator has unit constant")
    }

    /// Structural equality of the stored fractions (not of the values).
    pub fn same_representation(&self, other: &GradedSeries) -> bool {
        self.num == other.num && self.den == other.den
    }

    /// Degree of the larger of numerator and denominator.
    pub fn height(&self) -> usize {
        self.num.len().max(self.den.len()).saturating_sub(1)
    }

    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc { num: self.num.clone(), den: self.den.clone() }
    }
}

impl PartialEq for GradedSeries {
    fn eq(&self, other: &Self) -> bool {
        poly_mul(&self.num, &other.den) == poly_mul(&other.num, &self.den)
    }
}

impl Eq for GradedSeries {}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", fmt_poly(&self.num), fmt_poly(&self.den))
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            write!(f, "{}", fmt_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

fn fmt_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        if mono.is_empty() || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Mul for &GradedSeries {
    type Output = GradedSeries;
    fn mul(self, rhs: &GradedSeries) -> GradedSeries {
        GradedSeries { num: poly_mul(&self.num, &rhs.num), den: poly_mul(&self.den, &rhs.den) }
    }
}

impl Add for &GradedSeries {
    type Output = GradedSeries;
    fn add(self, rhs: &GradedSeries) -> GradedSeries {
        if self.den == rhs.den {
            return GradedSeries { num: poly_add(&self.num, &rhs.num), den: self.den.clone() };
        }
        GradedSeries {
            num: poly_add(&poly_mul(&self.num, &rhs.den), &poly_mul(&rhs.num, &self.den)),
            den: poly_mul(&self.den, &rhs.den),
        }
    }
}

impl Neg for &GradedSeries {
    type Output = GradedSeries;
    fn neg(self) -> GradedSeries {
        GradedSeries { num: poly_neg(&self.num), den: self.den.clone() }
    }
}

impl Sub for &GradedSeries {
    type Output = GradedSeries;
    fn sub(self, rhs: &GradedSeries) -> GradedSeries {
        if self.den == rhs.den {
            return GradedSeries { num: poly_sub(&self.num, &rhs.num), den: self.den.clone() };
        }
        self + &(-rhs)
    }
}

/// On-disk form: two ascending coefficient arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    #[serde(with = "crate::bigjson::int_vec")]
    pub num: Vec<BigInt>,
    #[serde(with = "crate::bigjson::int_vec")]
    pub den: Vec<BigInt>,
}

impl TryFrom<SeriesDoc> for GradedSeries {
    type Error = Error;
    fn try_from(doc: SeriesDoc) -> Result<Self> {
        GradedSeries::new(doc.num, doc.den)
    }
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SeriesDoc::deserialize(d)?;
        GradedSeries::try_from(doc).map_err(serde::de::Error::custom)
    }
}
