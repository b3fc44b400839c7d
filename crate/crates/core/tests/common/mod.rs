#![allow(dead_code)]

use polyloop::complex::SimplicialComplex;
use polyloop::homotopy::{PFactor, PProduct};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn complex(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::from_facets(m, &facets.iter().map(|f| f.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn square() -> SimplicialComplex {
    complex(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]])
}

pub fn cycle(n: usize) -> SimplicialComplex {
    let f: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, i % n + 1]).collect();
    SimplicialComplex::from_facets(n, &f).unwrap()
}

pub fn path(n: usize) -> SimplicialComplex {
    let f: Vec<Vec<usize>> = (1..n).map(|i| vec![i, i + 1]).collect();
    SimplicialComplex::from_facets(n, &f).unwrap()
}

/// Erdős–Rényi graph on `m` vertices.
pub fn random_graph<R: Rng>(m: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// A chordal graph: each new vertex is attached to a clique of earlier ones,
/// so the reverse insertion order is a perfect elimination ordering. Labels
/// are shuffled afterwards.
pub fn random_chordal_graph<R: Rng>(m: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut adj = vec![vec![false; m]; m];
    for v in 1..m {
        if rng.gen_bool(0.15) {
            continue;
        }
        let u = rng.gen_range(0..v);
        let mut clique = vec![u];
        let mut others: Vec<usize> = (0..v).filter(|&w| adj[u][w]).collect();
        others.shuffle(rng);
        for w in others {
            if rng.gen_bool(0.6) && clique.iter().all(|&c| adj[c][w]) {
                clique.push(w);
            }
        }
        for c in clique {
            adj[v][c] = true;
            adj[c][v] = true;
        }
    }
    let mut perm: Vec<usize> = (1..=m).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if adj[i][j] {
                let (a, b) = (perm[i], perm[j]);
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges
}

pub fn flag(m: usize, edges: &[(usize, usize)], max_dim: Option<usize>) -> SimplicialComplex {
    SimplicialComplex::clique_complex(m, edges, max_dim).unwrap()
}

pub fn random_permutation<R: Rng>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=m).collect();
    p.shuffle(rng);
    p
}

/// A random canonical product whose factors have bottom degree at most `max_bottom`.
pub fn random_product<R: Rng>(max_bottom: usize, cutoff: usize, rng: &mut R) -> PProduct {
    let count = rng.gen_range(0..=5);
    let factors: Vec<(PFactor, usize)> = (0..count)
        .map(|_| (PFactor::with_bottom_degree(rng.gen_range(1..=max_bottom)), rng.gen_range(1..=3)))
        .collect();
    PProduct::from_factors(&factors, cutoff)
}
