//! Loop-space decomposition of `(CA, A)^K` for `K` a skeleton of a flag complex.
//!
//! The recursion follows the inductive proof that such loop spaces are
//! products of spheres and loops on spheres:
//!
//! 1. one vertex: the polyhedral product is a cone, hence contractible;
//! 2. `K` a skeleton of a simplex: the polyhedral product is an explicit
//!    wedge of spheres, and Hilton–Milnor applies;
//! 3. otherwise split `K = K1 ∪_L K2` at a non-dominating vertex `v`, with
//!    `K1 = K_{v ∪ N(v)}`, `L = K_{N(v)}`, `K2 = K_{V \ v}`, and use
//!
//!    `ΩK ≃ ΩL × Ω((𝒜 * 𝒜') ∨ (G ⋊ 𝒜') ∨ (𝒜 ⋉ H))`
//!
//!    where `ΩG = ΩK1 / ΩL`, `ΩH = ΩK2 / ΩL`, `𝒜 = A_v` and `𝒜'` is the
//!    product of the `A_i` over vertices not in `v ∪ N(v)`.
//!
//! Every step is recorded in a [`TraceNode`] tree whose series identities are
//! re-checked by [`verify_trace`].

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{binomial, ComplexDoc, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homotopy::{
    divide_products, hilton_milnor, join_cells, loop_half_smash, porter_loop_wedge, suspension_splitting, CellSeries,
    PFactor, PProduct, SphereWedge,
};
use crate::series::GradedSeries;

/// Per-vertex data of the pairs `(CA_i, A_i)`: the reduced homology series of
/// each `A_i`. `ΣA_i` is then the wedge of spheres with cell series `t · a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSpec {
    cells: Vec<CellSeries>,
}

impl PairSpec {
    /// `(D², S¹)` at every vertex: the moment-angle complex.
    pub fn moment_angle(m: usize) -> Self {
        PairSpec { cells: vec![CellSeries::sphere(1); m] }
    }

    /// `(D^n, S^{n-1})` at every vertex, `n >= 2`.
    pub fn disks(n: usize, m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPairs(format!("disks:{n} needs n >= 2")));
        }
        Ok(PairSpec { cells: vec![CellSeries::sphere(n - 1); m] })
    }

    /// Custom pairs: for each vertex, the sphere dimensions of `ΣA_i`.
    pub fn from_suspension_dims(dims: &[Vec<usize>]) -> Result<Self> {
        let cells = dims
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if d.is_empty() {
                    return Err(Error::InvalidPairs(format!("vertex {} has no suspension spheres", i + 1)));
                }
                CellSeries::from_suspension_dims(d).map_err(|e| Error::InvalidPairs(e.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(PairSpec { cells })
    }

    /// Arbitrary connected `A_i`, possibly of infinite type.
    pub fn from_cells(cells: Vec<CellSeries>) -> Self {
        PairSpec { cells }
    }

    /// `A_i` given as products in canonical form; `ΣA_i` splits as a wedge.
    pub fn from_products(spaces: &[PProduct]) -> Result<Self> {
        let cells = spaces
            .iter()
            .map(|p| CellSeries::new(suspension_splitting(p).cells().unshift(1)?, p.cutoff()))
            .collect::<Result<_>>()?;
        Ok(PairSpec { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellSeries] {
        &self.cells
    }

    /// Pairs moved along a vertex permutation: vertex `i` becomes `perm[i-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut cells = self.cells.clone();
        for (i, &p) in perm.iter().enumerate() {
            cells[p - 1] = self.cells[i].clone();
        }
        PairSpec { cells }
    }
}

/// Pairs `(CP^n, CP^m)` and `(CP^n, *)`, `n = ∞` allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectivePair {
    /// `(CP^n, *)`; `None` means `n = ∞`.
    Based { n: Option<usize> },
    /// `(CP^n, CP^m)` with `m < n`.
    Sub { n: Option<usize>, m: usize },
}

impl ProjectivePair {
    /// `ΩCP^∞ ≃ S¹`, `ΩCP^n ≃ S¹ × ΩS^{2n+1}`.
    pub fn loop_of_total(&self, cutoff: usize) -> Result<PProduct> {
        let n = match *self {
            ProjectivePair::Based { n } | ProjectivePair::Sub { n, .. } => n,
        };
        let s1 = (PFactor::sphere(1)?, 1);
        Ok(match n {
            None => PProduct::from_factors(&[s1], cutoff),
            Some(n) if n >= 1 => PProduct::from_factors(&[s1, (PFactor::loop_sphere(2 * n + 1)?, 1)], cutoff),
            Some(n) => return Err(Error::InvalidPairs(format!("CP^{n} is not a valid total space"))),
        })
    }

    /// Reduced homology series of the homotopy fibre `Y` of `A → X`.
    pub fn fibre_cells(&self, cutoff: usize) -> Result<CellSeries> {
        let one = GradedSeries::one();
        let total = match *self {
            ProjectivePair::Based { .. } => self.loop_of_total(cutoff)?.series().clone(),
            ProjectivePair::Sub { n: None, m } => &GradedSeries::monomial(1, 2 * m + 1) + &one,
            ProjectivePair::Sub { n: Some(n), m } => {
                if m >= n {
                    return Err(Error::InvalidPairs(format!("(CP^{n}, CP^{m}) needs m < n")));
                }
                &(&one + &GradedSeries::monomial(1, 2 * m + 1)) * &GradedSeries::geometric(2 * n)
            }
        };
        CellSeries::new(&total - &one, cutoff)
    }
}

/// The rule applied at a trace node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// One vertex: `(CA, A)^K = CA` is contractible.
    ContractibleVertex,
    /// The empty intersection `L = ∅` contributes a point.
    EmptyIntersection,
    /// `K = skel_k(Δ^{m-1})`: a wedge of spheres, looped by Hilton–Milnor.
    SkeletonOfSimplex,
    /// Pushout over a nonempty full subcomplex `L`.
    PushoutFullSubcomplex,
    /// Pushout over the empty face (`N(v) = ∅`).
    PushoutCommonFace,
    /// `ΩK_i ≃ ΩL × ΩF`: complementary factor of a retract.
    RetractComplement,
    /// `Ω(𝒜 * 𝒜')` via Hilton–Milnor.
    JoinLoop,
    /// `Ω(X ⋉ Y) ≃ Ω(X * ΩY) × ΩY`.
    HalfSmashLoop,
    /// Porter: loops on a wedge.
    PorterWedge,
    /// `Ω(X, A)^K ≃ ∏ ΩX_i × Ω(CY, Y)^K`.
    FibreSplitting,
}

impl Rule {
    pub fn anchor(&self) -> &'static str {
        match self {
            Rule::ContractibleVertex => "K = {v}: (CA,A)^K = CA_v is contractible",
            Rule::EmptyIntersection => "L = ∅: ΩL is a point",
            Rule::SkeletonOfSimplex => {
                "K = skel_k(Δ^{m-1}): (CA,A)^K ≃ ⋁_{j=k+2}^m ⋁_{|S|=j} (Σ^{k+1} A_S)^{∨ C(j-1,k+1)}"
            }
            Rule::PushoutFullSubcomplex => {
                "K = K1 ∪_L K2, L a proper full subcomplex: ΩK ≃ ΩL × Ω((𝒜*𝒜') ∨ (G⋊𝒜') ∨ (𝒜⋉H))"
            }
            Rule::PushoutCommonFace => "K = K1 ∪_∅ K2: ΩK ≃ Ω((𝒜*𝒜') ∨ (K1⋊𝒜') ∨ (𝒜⋉K2))",
            Rule::RetractComplement => "ΩK_i ≃ ΩL × ΩF, F the fibre of the retraction onto L",
            Rule::JoinLoop => "Ω(𝒜*𝒜') ≃ Ω Σ(𝒜∧𝒜'), a loop space on a wedge of spheres",
            Rule::HalfSmashLoop => "Ω(X⋉Y) ≃ Ω(X*ΩY) × ΩY",
            Rule::PorterWedge => "Ω(⋁X_i) ≃ ∏ΩX_i × Ω(⋁_{|T|≥2} (Σ ⋀_{i∈T} ΩX_i)^{∨(|T|-1)})",
            Rule::FibreSplitting => "Ω(X,A)^K ≃ ∏ΩX_i × Ω(CY,Y)^K, Y_i the fibre of A_i → X_i",
        }
    }
}

/// Labels of the three parts of a pushout, in the parent's local numbering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRecord {
    pub vertex: usize,
    pub k1_labels: Vec<usize>,
    pub l_labels: Vec<usize>,
    pub k2_labels: Vec<usize>,
}

/// One step of a derivation. Complexes are stored in local labels `1..=m`;
/// pushout nodes record how their parts embed.
#[derive(Clone, Debug, Serialize)]
pub struct TraceNode {
    pub rule: Rule,
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<(usize, usize)>,
    pub inputs: Vec<GradedSeries>,
    pub output: GradedSeries,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Arc<TraceNode>>,
}

impl TraceNode {
    fn op(rule: Rule, inputs: Vec<GradedSeries>, output: &PProduct) -> Arc<TraceNode> {
        Arc::new(TraceNode {
            rule,
            anchor: rule.anchor(),
            complex: None,
            split: None,
            skeleton: None,
            inputs,
            output: output.series().clone(),
            children: Vec::new(),
        })
    }

    /// Number of distinct nodes (shared subtrees counted once).
    pub fn distinct_nodes(self: &Arc<Self>) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(n) = stack.pop() {
            if seen.insert(Arc::as_ptr(&n)) {
                stack.extend(n.children.iter().cloned());
            }
        }
        seen.len()
    }

    /// The rule names in depth-first order, shared subtrees visited once.
    pub fn rules(self: &Arc<Self>) -> Vec<Rule> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(n) = stack.pop() {
            if seen.insert(Arc::as_ptr(&n)) {
                out.push(n.rule);
                stack.extend(n.children.iter().rev().cloned());
            }
        }
        out
    }
}

/// The wedge of spheres `(CA, A)^K` for `K = skel_k(Δ^{m-1})`:
/// cell series `Σ_{j=k+2}^m C(j-1, k+1) · t^{k+1} · e_j(a_1, …, a_m)`,
/// `e_j` the elementary symmetric functions of the reduced series of the `A_i`.
pub fn skeleton_simplex_wedge(m: usize, k: usize, pairs: &[CellSeries]) -> Result<SphereWedge> {
    if m == 0 || k >= m {
        return Err(Error::Input(format!("need 0 <= k < m, got m = {m}, k = {k}")));
    }
    if pairs.len() != m {
        return Err(Error::PairMismatch { given: pairs.len(), m });
    }
    let mut e = vec![GradedSeries::zero(); m + 1];
    e[0] = GradedSeries::one();
    for (i, a) in pairs.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] = (&e[j] + &(&e[j - 1] * a.series())).reduced();
        }
    }
    let mut cells = GradedSeries::zero();
    for (j, ej) in e.iter().enumerate().skip(k + 2) {
        let c = BigInt::from(binomial(j - 1, k + 1));
        cells = (&cells + &ej.scale(&c)).reduced();
    }
    SphereWedge::new(cells.shift(k + 1), 1)
}

/// How the engine picks the splitting vertex among non-dominating vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexChoice {
    /// Fewest neighbours, ties by smallest label.
    MinNeighbors,
    /// Most neighbours, ties by largest label.
    MaxNeighbors,
    /// Uniformly random, from a fixed seed.
    Seeded(u64),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    complex: SimplicialComplex,
    pairs: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

#[derive(Clone)]
struct Solved {
    product: PProduct,
    trace: Arc<TraceNode>,
}

/// Recursive solver with a memo table over relabelled full subcomplexes.
pub struct Decomposer {
    pairs: PairSpec,
    cutoff: usize,
    choice: VertexChoice,
    top_vertex: Option<usize>,
    rng: ChaCha8Rng,
    memo: HashMap<MemoKey, Solved>,
}

impl Decomposer {
    pub fn new(pairs: PairSpec, cutoff: usize) -> Self {
        Decomposer {
            pairs,
            cutoff,
            choice: VertexChoice::MinNeighbors,
            top_vertex: None,
            rng: ChaCha8Rng::seed_from_u64(0),
            memo: HashMap::new(),
        }
    }

    pub fn with_choice(mut self, choice: VertexChoice) -> Self {
        if let VertexChoice::Seeded(seed) = choice {
            self.rng = ChaCha8Rng::seed_from_u64(seed);
        }
        self.choice = choice;
        self
    }

    /// Force the splitting vertex (1-based) at the top level only.
    pub fn with_top_vertex(mut self, v: usize) -> Self {
        self.top_vertex = Some(v);
        self
    }

    /// Number of memoized subproblems so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn run(&mut self, k: &SimplicialComplex) -> Result<(PProduct, Arc<TraceNode>)> {
        if k.m() != self.pairs.len() {
            return Err(Error::PairMismatch { given: self.pairs.len(), m: k.m() });
        }
        if k.classify().k_skeleton_of_flag.is_none() {
            return Err(Error::NotFlagSkeleton);
        }
        let cells = self.pairs.cells.clone();
        let solved = self.solve(k, &cells, self.top_vertex)?;
        Ok((solved.product, solved.trace))
    }

    fn solve(&mut self, k: &SimplicialComplex, cells: &[CellSeries], forced: Option<usize>) -> Result<Solved> {
        let key = MemoKey {
            complex: k.clone(),
            pairs: cells.iter().map(|c| (c.series().numerator().to_vec(), c.series().denominator().to_vec())).collect(),
        };
        if forced.is_none() {
            if let Some(hit) = self.memo.get(&key) {
                return Ok(hit.clone());
            }
        }
        let solved = if k.m() == 1 {
            self.contractible(k)
        } else if let (Some(dim), None) = (k.simplex_skeleton_dim(), forced) {
            self.skeleton_case(k, dim, cells)?
        } else {
            self.pushout_case(k, cells, forced)?
        };
        solved.product.check()?;
        if forced.is_none() {
            self.memo.insert(key, solved.clone());
        }
        Ok(solved)
    }

    fn contractible(&self, k: &SimplicialComplex) -> Solved {
        let product = PProduct::trivial(self.cutoff);
        let trace = Arc::new(TraceNode {
            rule: Rule::ContractibleVertex,
            anchor: Rule::ContractibleVertex.anchor(),
            complex: Some(k.to_doc()),
            split: None,
            skeleton: None,
            inputs: Vec::new(),
            output: product.series().clone(),
            children: Vec::new(),
        });
        Solved { product, trace }
    }

    fn skeleton_case(&self, k: &SimplicialComplex, dim: usize, cells: &[CellSeries]) -> Result<Solved> {
        let wedge = skeleton_simplex_wedge(k.m(), dim, cells)?;
        let product = hilton_milnor(&wedge, self.cutoff)?;
        let trace = Arc::new(TraceNode {
            rule: Rule::SkeletonOfSimplex,
            anchor: Rule::SkeletonOfSimplex.anchor(),
            complex: Some(k.to_doc()),
            split: None,
            skeleton: Some((k.m(), dim)),
            inputs: cells.iter().map(|c| c.series().clone()).collect(),
            output: product.series().clone(),
            children: Vec::new(),
        });
        Ok(Solved { product, trace })
    }

    fn pick_vertex(&mut self, k: &SimplicialComplex, forced: Option<usize>) -> Result<usize> {
        let records = k.neighbors_and_domination();
        let legal: Vec<_> = records.iter().filter(|r| !r.dominating).collect();
        if let Some(v) = forced {
            return if legal.iter().any(|r| r.vertex == v) {
                Ok(v)
            } else if v == 0 || v > k.m() {
                Err(Error::BadIndex { index: v, m: k.m() })
            } else {
                Err(Error::DominatingVertex(v))
            };
        }
        // all vertices dominating but not a simplex skeleton: outside the admissible class
        let pick = match self.choice {
            VertexChoice::MinNeighbors => legal.iter().min_by_key(|r| (r.neighbors.len(), r.vertex)),
            VertexChoice::MaxNeighbors => legal.iter().max_by_key(|r| (r.neighbors.len(), r.vertex)),
            VertexChoice::Seeded(_) => {
                if legal.is_empty() {
                    None
                } else {
                    let i = self.rng.gen_range(0..legal.len());
                    legal.get(i)
                }
            }
        };
        pick.map(|r| r.vertex).ok_or(Error::NotFlagSkeleton)
    }

    fn pushout_case(&mut self, k: &SimplicialComplex, cells: &[CellSeries], forced: Option<usize>) -> Result<Solved> {
        let v = self.pick_vertex(k, forced)?;
        let split = k.pushout_split(v)?;
        let part_cells =
            |labels: &[usize]| -> Vec<CellSeries> { labels.iter().map(|&i| cells[i - 1].clone()).collect() };

        let k1 = self.solve(&split.k1, &part_cells(&split.k1_labels), None)?;
        let k2 = self.solve(&split.k2, &part_cells(&split.k2_labels), None)?;
        let l =
            if split.l.is_void() { None } else { Some(self.solve(&split.l, &part_cells(&split.l_labels), None)?) };
        let loop_l = l.as_ref().map_or_else(|| PProduct::trivial(self.cutoff), |s| s.product.clone());

        let loop_g = divide_products(&k1.product, &loop_l)?;
        let loop_h = divide_products(&k2.product, &loop_l)?;

        let a = cells[v - 1].clone();
        let in_k1: Vec<usize> = split.k1_labels.clone();
        let rest: Vec<&CellSeries> = (1..=k.m()).filter(|i| !in_k1.contains(i)).map(|i| &cells[i - 1]).collect();
        let a_rest = CellSeries::product(rest);

        let join = hilton_milnor(&join_cells(&a, &a_rest)?, self.cutoff)?;
        let g_half = loop_half_smash(&a_rest, &loop_g, self.cutoff)?;
        let h_half = loop_half_smash(&a, &loop_h, self.cutoff)?;
        let wedge = porter_loop_wedge(&[join.clone(), g_half.clone(), h_half.clone()], self.cutoff)?;
        let product = loop_l.times(&wedge);

        let rule = if l.is_some() { Rule::PushoutFullSubcomplex } else { Rule::PushoutCommonFace };
        let trivial_trace = || {
            Arc::new(TraceNode {
                rule: Rule::EmptyIntersection,
                anchor: Rule::EmptyIntersection.anchor(),
                complex: None,
                split: None,
                skeleton: None,
                inputs: Vec::new(),
                output: GradedSeries::one(),
                children: Vec::new(),
            })
        };
        let l_trace = l.as_ref().map_or_else(trivial_trace, |s| s.trace.clone());
        let children = vec![
            k1.trace.clone(),
            l_trace,
            k2.trace.clone(),
            TraceNode::op(Rule::RetractComplement, vec![k1.product.series().clone(), loop_l.series().clone()], &loop_g),
            TraceNode::op(Rule::RetractComplement, vec![k2.product.series().clone(), loop_l.series().clone()], &loop_h),
            TraceNode::op(Rule::JoinLoop, vec![a.series().clone(), a_rest.series().clone()], &join),
            TraceNode::op(Rule::HalfSmashLoop, vec![a_rest.series().clone(), loop_g.series().clone()], &g_half),
            TraceNode::op(Rule::HalfSmashLoop, vec![a.series().clone(), loop_h.series().clone()], &h_half),
            TraceNode::op(
                Rule::PorterWedge,
                vec![join.series().clone(), g_half.series().clone(), h_half.series().clone()],
                &wedge,
            ),
        ];
        let trace = Arc::new(TraceNode {
            rule,
            anchor: rule.anchor(),
            complex: Some(k.to_doc()),
            split: Some(SplitRecord {
                vertex: v,
                k1_labels: split.k1_labels,
                l_labels: split.l_labels,
                k2_labels: split.k2_labels,
            }),
            skeleton: None,
            inputs: vec![a.series().clone(), a_rest.series().clone()],
            output: product.series().clone(),
            children,
        });
        Ok(Solved { product, trace })
    }
}

/// `Ω(CA, A)^K` as a canonical product, with its derivation.
pub fn decompose_loop(k: &SimplicialComplex, pairs: &PairSpec, cutoff: usize) -> Result<(PProduct, Arc<TraceNode>)> {
    Decomposer::new(pairs.clone(), cutoff).run(k)
}

/// `Ω(X, A)^K ≃ ∏ ΩX_i × Ω(CY, Y)^K`, with `ΩX_i` given and `Y_i` described by `fibres`.
pub fn decompose_general_pair(
    k: &SimplicialComplex,
    loops_of_x: &[PProduct],
    fibres: &PairSpec,
    cutoff: usize,
) -> Result<(PProduct, Arc<TraceNode>)> {
    if loops_of_x.len() != k.m() {
        return Err(Error::PairMismatch { given: loops_of_x.len(), m: k.m() });
    }
    let (inner, inner_trace) = decompose_loop(k, fibres, cutoff)?;
    let product = loops_of_x.iter().fold(PProduct::trivial(cutoff), |acc, p| acc.times(p)).times(&inner);
    let trace = Arc::new(TraceNode {
        rule: Rule::FibreSplitting,
        anchor: Rule::FibreSplitting.anchor(),
        complex: Some(k.to_doc()),
        split: None,
        skeleton: None,
        inputs: loops_of_x.iter().map(|p| p.series().clone()).collect(),
        output: product.series().clone(),
        children: vec![inner_trace],
    });
    Ok((product, trace))
}

/// Projective-space pairs at every vertex.
pub fn decompose_projective(
    k: &SimplicialComplex,
    pairs: &[ProjectivePair],
    cutoff: usize,
) -> Result<(PProduct, Arc<TraceNode>)> {
    let loops = pairs.iter().map(|p| p.loop_of_total(cutoff)).collect::<Result<Vec<_>>>()?;
    let fibres = pairs.iter().map(|p| p.fibre_cells(cutoff)).collect::<Result<Vec<_>>>()?;
    decompose_general_pair(k, &loops, &PairSpec::from_cells(fibres), cutoff)
}

/// Non-dominating vertices at which the top level may split, or empty when
/// the engine would stop at a base case.
pub fn legal_split_vertices(k: &SimplicialComplex) -> Vec<usize> {
    if k.m() == 1 || k.simplex_skeleton_dim().is_some() {
        return Vec::new();
    }
    k.neighbors_and_domination().into_iter().filter(|r| !r.dominating).map(|r| r.vertex).collect()
}

// Series laws, written directly on generating functions and independent of
// the product bookkeeping used by the engine.

fn hm_law(letters: &GradedSeries) -> Result<GradedSeries> {
    (&GradedSeries::one() - letters).recip()
}

fn half_smash_law(x: &GradedSeries, y_loop: &GradedSeries) -> Result<GradedSeries> {
    let reduced = y_loop - &GradedSeries::one();
    Ok(&hm_law(&(x * &reduced))? * y_loop)
}

fn porter_law(loops: &[GradedSeries]) -> Result<GradedSeries> {
    let one = GradedSeries::one();
    // 1/P(Ω⋁X_i) = Σ 1/P_i - (n - 1)
    let n = loops.len() as i64;
    let mut inv = GradedSeries::polynomial(&[1 - n]);
    for p in loops {
        inv = (&inv + &one.div(p)?).reduced();
    }
    inv.recip()
}

fn skeleton_law(m: usize, k: usize, cells: &[GradedSeries]) -> Result<GradedSeries> {
    let mut letters = GradedSeries::zero();
    for subset in 1u32..(1 << m) {
        let j = subset.count_ones() as usize;
        if j < k + 2 {
            continue;
        }
        let term = (0..m).filter(|i| subset >> i & 1 == 1).fold(GradedSeries::one(), |acc, i| &acc * &cells[i]);
        letters = (&letters + &term.scale(&BigInt::from(binomial(j - 1, k + 1)))).reduced();
    }
    hm_law(&letters.shift(k))
}

fn pushout_law(
    k1: &GradedSeries,
    l: &GradedSeries,
    k2: &GradedSeries,
    a: &GradedSeries,
    a_rest: &GradedSeries,
) -> Result<GradedSeries> {
    let g = k1.div(l)?;
    let h = k2.div(l)?;
    let join = hm_law(&(a * a_rest))?;
    let wedge = porter_law(&[join, half_smash_law(a_rest, &g)?, half_smash_law(a, &h)?])?;
    Ok(l * &wedge)
}

/// A trace node whose series identity fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceFailure {
    pub rule: Rule,
    pub detail: String,
}

/// Re-checks every node's rule as an exact rational identity. Shared
/// subtrees are checked once.
pub fn verify_trace(root: &Arc<TraceNode>) -> Vec<TraceFailure> {
    let mut seen = HashSet::new();
    let mut failures = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(node) = stack.pop() {
        if !seen.insert(Arc::as_ptr(&node)) {
            continue;
        }
        if let Err(detail) = check_node(&node) {
            failures.push(TraceFailure { rule: node.rule, detail });
        }
        stack.extend(node.children.iter().cloned());
    }
    failures
}

fn check_node(n: &TraceNode) -> std::result::Result<(), String> {
    let expected = match n.rule {
        Rule::ContractibleVertex | Rule::EmptyIntersection => Ok(GradedSeries::one()),
        Rule::SkeletonOfSimplex => {
            let (m, k) = n.skeleton.ok_or("missing skeleton parameters")?;
            skeleton_law(m, k, &n.inputs)
        }
        Rule::RetractComplement => {
            let [big, small] = &n.inputs[..] else { return Err("expected two inputs".into()) };
            big.div(small)
        }
        Rule::JoinLoop => {
            let [a, b] = &n.inputs[..] else { return Err("expected two inputs".into()) };
            hm_law(&(a * b))
        }
        Rule::HalfSmashLoop => {
            let [x, y] = &n.inputs[..] else { return Err("expected two inputs".into()) };
            half_smash_law(x, y)
        }
        Rule::PorterWedge => porter_law(&n.inputs),
        Rule::PushoutFullSubcomplex | Rule::PushoutCommonFace => {
            let [a, a_rest] = &n.inputs[..] else { return Err("expected two inputs".into()) };
            if n.children.len() < 3 {
                return Err("missing part derivations".into());
            }
            pushout_law(&n.children[0].output, &n.children[1].output, &n.children[2].output, a, a_rest)
        }
        Rule::FibreSplitting => {
            let inner = n.children.first().ok_or("missing inner derivation")?;
            Ok(n.inputs.iter().fold(inner.output.clone(), |acc, p| &acc * p))
        }
    }
    .map_err(|e| e.to_string())?;
    if expected == n.output {
        Ok(())
    } else {
        Err(format!("output {} differs from rule value {}", n.output, expected.reduced()))
    }
}
