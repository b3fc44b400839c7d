//! Finite simplicial complexes on small vertex sets.
//!
//! Vertices are `1..=m` at the public surface and bits `0..m` of a `u32`
//! internally. Faces are stored as a sorted list of nonzero masks, closed
//! under taking nonempty subsets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 32;

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..MAX_VERTICES).filter(move |i| mask >> i & 1 == 1)
}

fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// Nonempty submasks of `mask`.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            return None;
        }
        sub = (sub - 1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(out)
    })
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplicialComplex {
    m: usize,
    faces: Vec<u32>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K(m={}, facets={:?})", self.m, self.facets())
    }
}

impl SimplicialComplex {
    /// Builds the downward closure of `facets` (1-based labels) on `[m]`.
    pub fn from_facets(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if m == 0 || m > MAX_VERTICES {
            return Err(Error::BadVertexCount(m));
        }
        let mut masks = Vec::with_capacity(facets.len());
        for facet in facets {
            let mut mask = 0u32;
            for &i in facet {
                if i == 0 || i > m {
                    return Err(Error::BadIndex { index: i, m });
                }
                mask |= 1 << (i - 1);
            }
            if mask != 0 {
                masks.push(mask);
            }
        }
        let k = Self::from_masks(m, &masks);
        let covered = k.faces.iter().fold(0u32, |acc, f| acc | f);
        if let Some(i) = (0..m).find(|&i| covered >> i & 1 == 0) {
            return Err(Error::GhostVertex(i + 1));
        }
        Ok(k)
    }

    /// Closure of the given generating masks. No ghost-vertex check.
    pub(crate) fn from_masks(m: usize, generators: &[u32]) -> Self {
        let mut set = BTreeSet::new();
        for &g in generators {
            if set.contains(&g) {
                continue;
            }
            set.extend(submasks(g));
        }
        let mut faces: Vec<u32> = set.into_iter().collect();
        faces.sort_by_key(|&f| (f.count_ones(), f));
        SimplicialComplex { m, faces }
    }

    /// The complex with no vertices and no nonempty faces.
    pub fn void() -> Self {
        SimplicialComplex { m: 0, faces: Vec::new() }
    }

    /// Full simplex on `m` vertices.
    pub fn simplex(m: usize) -> Self {
        Self::from_masks(m, &[full_mask(m)])
    }

    /// `k`-skeleton of the simplex on `m` vertices.
    pub fn simplex_skeleton(m: usize, k: usize) -> Self {
        let gens: Vec<u32> = submasks(full_mask(m)).filter(|s| s.count_ones() as usize == (k + 1).min(m)).collect();
        Self::from_masks(m, &gens)
    }

    /// Clique complex of a graph given by 1-based edges, truncated to dimension `max_dim`.
    pub fn clique_complex(m: usize, edges: &[(usize, usize)], max_dim: Option<usize>) -> Result<Self> {
        if m == 0 || m > MAX_VERTICES {
            return Err(Error::BadVertexCount(m));
        }
        let mut adj = vec![0u32; m];
        for &(a, b) in edges {
            for i in [a, b] {
                if i == 0 || i > m {
                    return Err(Error::BadIndex { index: i, m });
                }
            }
            if a != b {
                adj[a - 1] |= 1 << (b - 1);
                adj[b - 1] |= 1 << (a - 1);
            }
        }
        let limit = max_dim.map_or(usize::MAX, |d| d + 1);
        let mut faces = Vec::new();
        // grow cliques in increasing vertex order
        let mut stack: Vec<(u32, u32)> = (0..m).map(|i| (1u32 << i, adj[i] & !full_mask(i + 1))).collect();
        while let Some((clique, cand)) = stack.pop() {
            faces.push(clique);
            if clique.count_ones() as usize >= limit {
                continue;
            }
            for j in bits(cand) {
                stack.push((clique | 1 << j, cand & adj[j] & !full_mask(j + 1)));
            }
        }
        faces.sort_by_key(|&f| (f.count_ones(), f));
        Ok(SimplicialComplex { m, faces })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// All nonempty faces as bit masks, sorted by (size, mask).
    pub fn face_masks(&self) -> &[u32] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        mask == 0 || self.faces.binary_search_by_key(&(mask.count_ones(), mask), |&f| (f.count_ones(), f)).is_ok()
    }

    /// Tests whether the 1-based vertex set is a face.
    pub fn contains(&self, face: &[usize]) -> bool {
        let mut mask = 0u32;
        for &i in face {
            if i == 0 || i > self.m {
                return false;
            }
            mask |= 1 << (i - 1);
        }
        self.contains_mask(mask)
    }

    /// Dimension; `-1` for the void complex.
    pub fn dim(&self) -> isize {
        self.faces.last().map_or(-1, |f| f.count_ones() as isize - 1)
    }

    pub(crate) fn facet_masks(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for &f in self.faces.iter().rev() {
            if !out.iter().any(|&g| g & f == f) {
                out.push(f);
            }
        }
        out.sort();
        out
    }

    /// Maximal faces with 1-based labels, sorted.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> =
            self.facet_masks().into_iter().map(|f| bits(f).map(|i| i + 1).collect()).collect();
        out.sort();
        out
    }

    /// Faces of size `dim + 1`, as masks.
    pub(crate) fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = u32> + '_ {
        self.faces.iter().copied().filter(move |f| f.count_ones() as usize == d + 1)
    }

    pub(crate) fn neighbor_mask(&self, v: usize) -> u32 {
        self.faces_of_dim(1).filter(|e| e >> v & 1 == 1).fold(0, |acc, e| acc | e) & !(1 << v)
    }

    pub(crate) fn vertex_mask(&self) -> u32 {
        full_mask(self.m)
    }

    /// Full subcomplex on a vertex mask, relabelled in ascending order.
    /// Returns the complex and the 0-based parent index of each new vertex.
    pub(crate) fn restrict(&self, mask: u32) -> (SimplicialComplex, Vec<usize>) {
        let labels: Vec<usize> = bits(mask & self.vertex_mask()).collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (new, &old) in labels.iter().enumerate() {
            pos[old] = new;
        }
        let faces: Vec<u32> = self
            .faces
            .iter()
            .filter(|&&f| f & !mask == 0)
            .map(|&f| bits(f).fold(0u32, |acc, i| acc | 1 << pos[i]))
            .collect();
        let mut faces = faces;
        faces.sort_by_key(|&f| (f.count_ones(), f));
        (SimplicialComplex { m: labels.len(), faces }, labels)
    }

    /// Full subcomplex `K_S` for a nonempty 1-based vertex set.
    pub fn full_subcomplex(&self, subset: &[usize]) -> Result<SimplicialComplex> {
        let mut mask = 0u32;
        for &i in subset {
            if i == 0 || i > self.m {
                return Err(Error::BadIndex { index: i, m: self.m });
            }
            mask |= 1 << (i - 1);
        }
        if mask == 0 {
            return Err(Error::EmptySubset);
        }
        Ok(self.restrict(mask).0)
    }

    /// Apply a vertex permutation: vertex `i` (1-based) becomes `perm[i-1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimplicialComplex> {
        if perm.len() != self.m {
            return Err(Error::Input(format!("permutation of length {} for {} vertices", perm.len(), self.m)));
        }
        let mut seen = vec![false; self.m];
        for &p in perm {
            if p == 0 || p > self.m || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::Input("not a permutation".into()));
            }
        }
        let gens: Vec<u32> =
            self.facet_masks().iter().map(|&f| bits(f).fold(0u32, |acc, i| acc | 1 << (perm[i] - 1))).collect();
        Ok(Self::from_masks(self.m, &gens))
    }

    /// Faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let faces = self.faces.iter().copied().filter(|f| f.count_ones() as usize <= k + 1).collect();
        SimplicialComplex { m: self.m, faces }
    }

    /// 1-based edges of the 1-skeleton.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.faces_of_dim(1)
            .map(|e| {
                let mut it = bits(e);
                (it.next().unwrap() + 1, it.next().unwrap() + 1)
            })
            .collect()
    }

    /// Minimal non-faces as masks, sorted.
    pub(crate) fn minimal_non_face_masks(&self) -> Vec<u32> {
        let all = self.vertex_mask();
        let mut out = BTreeSet::new();
        for &f in &self.faces {
            for i in bits(all & !f) {
                let cand = f | 1 << i;
                if !self.contains_mask(cand) && bits(cand).all(|j| self.contains_mask(cand & !(1 << j))) {
                    out.insert(cand);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Minimal non-faces with 1-based labels.
    pub fn minimal_non_faces(&self) -> Vec<Vec<usize>> {
        self.minimal_non_face_masks().into_iter().map(|f| bits(f).map(|i| i + 1).collect()).collect()
    }

    /// Lexicographic breadth-first search order of the 1-skeleton (0-based).
    pub(crate) fn lex_bfs(&self) -> Vec<usize> {
        let n = self.m;
        let adj: Vec<u32> = (0..n).map(|v| self.neighbor_mask(v)).collect();
        let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for step in 0..n {
            let v = (0..n)
                .filter(|&u| !visited[u])
                .fold(None::<usize>, |best, u| match best {
                    Some(b) if labels[b] >= labels[u] => Some(b),
                    _ => Some(u),
                })
                .expect("unvisited vertex");
            visited[v] = true;
            order.push(v);
            for u in bits(adj[v]) {
                if !visited[u] {
                    labels[u].push(n - step);
                }
            }
        }
        order
    }

    /// Chordality of the 1-skeleton, certified by a perfect elimination ordering.
    pub fn is_chordal(&self) -> bool {
        let mut peo = self.lex_bfs();
        peo.reverse();
        let mut position = vec![0usize; self.m];
        for (p, &v) in peo.iter().enumerate() {
            position[v] = p;
        }
        let adj: Vec<u32> = (0..self.m).map(|v| self.neighbor_mask(v)).collect();
        peo.iter().all(|&v| {
            let later: Vec<usize> = bits(adj[v]).filter(|&u| position[u] > position[v]).collect();
            match later.iter().min_by_key(|&&u| position[u]) {
                None => true,
                Some(&u) => later.iter().all(|&w| w == u || adj[u] >> w & 1 == 1),
            }
        })
    }

    /// `Some(k)` when the faces are exactly all subsets of size `<= k + 1`.
    pub fn simplex_skeleton_dim(&self) -> Option<usize> {
        let d = self.dim();
        if d < 0 {
            return None;
        }
        let k = d as usize;
        let expected: u64 = (1..=k + 1).map(|i| binomial(self.m, i)).sum();
        (expected == self.faces.len() as u64).then_some(k)
    }

    pub fn classify(&self) -> Classification {
        let d = self.dim();
        let non_faces = self.minimal_non_face_masks();
        let flag = non_faces.iter().all(|f| f.count_ones() == 2);
        let k_skeleton_of_flag = (d >= 0
            && non_faces.iter().all(|f| f.count_ones() == 2 || f.count_ones() as isize >= d + 2))
        .then_some(d as usize);
        let skeleton_of_simplex = self.simplex_skeleton_dim();
        Classification {
            m: self.m,
            dimension: d,
            flag,
            k_skeleton_of_flag,
            skeleton_of_simplex: skeleton_of_simplex.map(|k| (self.m, k)),
            chordal_1_skeleton: self.is_chordal(),
        }
    }

    /// Per-vertex neighbourhoods in the 1-skeleton.
    pub fn neighbors_and_domination(&self) -> Vec<VertexRecord> {
        (0..self.m)
            .map(|v| {
                let nb = self.neighbor_mask(v);
                VertexRecord {
                    vertex: v + 1,
                    neighbors: bits(nb).map(|i| i + 1).collect(),
                    dominating: nb == self.vertex_mask() & !(1 << v),
                }
            })
            .collect()
    }

    /// Splits `K` at a non-dominating vertex `v` (1-based).
    pub fn pushout_split(&self, v: usize) -> Result<PushoutSplit> {
        if v == 0 || v > self.m {
            return Err(Error::BadIndex { index: v, m: self.m });
        }
        let vb = v - 1;
        let nb = self.neighbor_mask(vb);
        let all = self.vertex_mask();
        if nb == all & !(1 << vb) {
            return Err(Error::DominatingVertex(v));
        }
        let one_based = |l: Vec<usize>| l.into_iter().map(|i| i + 1).collect();
        let (k1, k1_labels) = self.restrict(nb | 1 << vb);
        let (l, l_labels) = self.restrict(nb);
        let (k2, k2_labels) = self.restrict(all & !(1 << vb));
        Ok(PushoutSplit {
            k1,
            l,
            k2,
            k1_labels: one_based(k1_labels),
            l_labels: one_based(l_labels),
            k2_labels: one_based(k2_labels),
        })
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc { m: self.m, facets: self.facets() }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub m: usize,
    pub dimension: isize,
    pub flag: bool,
    pub k_skeleton_of_flag: Option<usize>,
    pub skeleton_of_simplex: Option<(usize, usize)>,
    pub chordal_1_skeleton: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
    pub dominating: bool,
}

/// `K = K1 ∪_L K2` at a vertex `v`: `K1 = K_{v ∪ N(v)}`, `L = K_{N(v)}`,
/// `K2 = K_{V \ v}`. Each part is relabelled to `1..`; the label vectors map
/// local vertex `i` to `labels[i-1]` in `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutSplit {
    pub k1: SimplicialComplex,
    pub l: SimplicialComplex,
    pub k2: SimplicialComplex,
    pub k1_labels: Vec<usize>,
    pub l_labels: Vec<usize>,
    pub k2_labels: Vec<usize>,
}

/// Canonical on-disk form of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
}

impl TryFrom<ComplexDoc> for SimplicialComplex {
    type Error = Error;
    fn try_from(doc: ComplexDoc) -> Result<Self> {
        SimplicialComplex::from_facets(doc.m, &doc.facets)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn square() -> SimplicialComplex {
        SimplicialComplex::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]]).unwrap()
    }

    pub fn path(n: usize) -> SimplicialComplex {
        let facets: Vec<Vec<usize>> = (1..n).map(|i| vec![i, i + 1]).collect();
        SimplicialComplex::from_facets(n, &facets).unwrap()
    }

    fn points(n: usize) -> SimplicialComplex {
        let facets: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
        SimplicialComplex::from_facets(n, &facets).unwrap()
    }

    #[test]
    fn validate_examples() {
        let k = square();
        assert_eq!(k.face_count(), 8);
        assert_eq!(k.facets(), vec![vec![1, 2], vec![1, 4], vec![2, 3], vec![3, 4]]);
        let one = SimplicialComplex::from_facets(1, &[vec![1]]).unwrap();
        assert_eq!(one.face_count(), 1);
        assert_eq!(SimplicialComplex::from_facets(3, &[vec![1, 2]]), Err(Error::GhostVertex(3)));
        assert_eq!(SimplicialComplex::from_facets(3, &[vec![1, 4]]), Err(Error::BadIndex { index: 4, m: 3 }));
    }

    #[test]
    fn square_face_count_with_empty_face() {
        // 4 vertices, 4 edges, plus the empty face = 9
        assert_eq!(square().face_count() + 1, 9);
    }

    #[test]
    fn full_subcomplex_examples() {
        let diag = square().full_subcomplex(&[1, 3]).unwrap();
        assert_eq!(diag, points(2));
        assert_eq!(square().full_subcomplex(&[1, 2, 3, 4]).unwrap(), square());
        let e = path(3).full_subcomplex(&[2, 3]).unwrap();
        assert_eq!(e, SimplicialComplex::simplex(2));
        assert_eq!(square().full_subcomplex(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn classify_examples() {
        let c = square().classify();
        assert!(c.flag);
        assert_eq!(c.k_skeleton_of_flag, Some(1));
        assert_eq!(c.skeleton_of_simplex, None);
        assert!(!c.chordal_1_skeleton);
        assert_eq!(square().minimal_non_faces(), vec![vec![1, 3], vec![2, 4]]);

        let tri = SimplicialComplex::simplex_skeleton(3, 1);
        let c = tri.classify();
        assert!(!c.flag);
        assert_eq!(tri.minimal_non_faces(), vec![vec![1, 2, 3]]);
        assert_eq!(c.k_skeleton_of_flag, Some(1));
        assert_eq!(c.skeleton_of_simplex, Some((3, 1)));

        for m in 1..6 {
            let c = SimplicialComplex::simplex(m).classify();
            assert!(c.flag);
            assert_eq!(c.skeleton_of_simplex, Some((m, m - 1)));
        }
    }

    #[test]
    fn non_skeleton_detected() {
        // triangle {1,2,3} filled plus hollow triangle {2,3,4}... with dim 2 the
        // hollow one is a size-3 minimal non-face below dim+2
        let k = SimplicialComplex::from_facets(4, &[vec![1, 2, 3], vec![2, 4], vec![3, 4]]).unwrap();
        assert_eq!(k.classify().k_skeleton_of_flag, None);
    }

    #[test]
    fn chordality() {
        assert!(path(5).is_chordal());
        assert!(!square().is_chordal());
        let c5 = SimplicialComplex::clique_complex(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)], None).unwrap();
        assert!(!c5.is_chordal());
        // square with a chord
        let k = SimplicialComplex::clique_complex(4, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)], None).unwrap();
        assert!(k.is_chordal());
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn neighbors_examples() {
        let r = &square().neighbors_and_domination()[0];
        assert_eq!(r.neighbors, vec![2, 4]);
        assert!(!r.dominating);
        assert!(SimplicialComplex::simplex_skeleton(3, 1).neighbors_and_domination().iter().all(|r| r.dominating));
        let r = &points(2).neighbors_and_domination()[0];
        assert!(r.neighbors.is_empty() && !r.dominating);
    }

    #[test]
    fn pushout_examples() {
        let s = square().pushout_split(1).unwrap();
        assert_eq!(s.k1_labels, vec![1, 2, 4]);
        assert_eq!(s.k1, path(3).relabel(&[2, 1, 3]).unwrap());
        assert_eq!(s.l, points(2));
        assert_eq!(s.l_labels, vec![2, 4]);
        assert_eq!(s.k2, path(3));
        assert_eq!(s.k2_labels, vec![2, 3, 4]);

        let s = path(3).pushout_split(1).unwrap();
        assert_eq!(s.k1, SimplicialComplex::simplex(2));
        assert_eq!(s.l, SimplicialComplex::simplex(1));
        assert_eq!(s.l_labels, vec![2]);
        assert_eq!(s.k2, SimplicialComplex::simplex(2));

        let s = points(2).pushout_split(1).unwrap();
        assert_eq!(s.k1, SimplicialComplex::simplex(1));
        assert!(s.l.is_void());
        assert_eq!(s.k2, SimplicialComplex::simplex(1));

        assert_eq!(SimplicialComplex::simplex(3).pushout_split(2), Err(Error::DominatingVertex(2)));
    }

    #[test]
    fn doc_round_trip() {
        let text = r#"{"m":4,"facets":[[1,2],[2,3],[3,4],[1,4]]}"#;
        let doc: ComplexDoc = serde_json::from_str(text).unwrap();
        let k = SimplicialComplex::try_from(doc).unwrap();
        assert_eq!(k, square());
    }
}
