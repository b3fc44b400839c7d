mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use polyloop::complex::SimplicialComplex;
use polyloop::homotopy::{divide_products, greedy_factorize, hilton_milnor, porter_loop_wedge, SphereWedge};
use polyloop::series::{convolve, GradedSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 0..6)
}

/// Denominators with constant term 1.
fn unit_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 0..5).prop_map(|mut v| {
        v.insert(0, 1);
        v
    })
}

fn series() -> impl Strategy<Value = GradedSeries> {
    (poly(), unit_poly()).prop_map(|(n, d)| GradedSeries::ratio(&n, &d))
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn faces(k: &SimplicialComplex, labels: &[usize]) -> BTreeSet<Vec<usize>> {
    k.face_masks()
        .iter()
        .map(|&f| {
            let mut face: Vec<usize> = (0..32).filter(|i| f >> i & 1 == 1).map(|i| labels[i]).collect();
            face.sort();
            face
        })
        .collect()
}

fn random_flag_skeleton(seed: u64, m: usize, p: f64, k: usize) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = flag(m, &random_graph(m, p, &mut rng), None);
    base.skeleton(k.min(base.dim().max(0) as usize))
}

proptest! {
    #[test]
    fn product_expansion_is_convolution(a in series(), b in series()) {
        let d = 12;
        prop_assert_eq!((&a * &b).expand(d), convolve(&a.expand(d), &b.expand(d), d));
    }

    #[test]
    fn division_inverts_multiplication(a in series(), bn in unit_poly(), bd in unit_poly()) {
        let b = GradedSeries::ratio(&bn, &bd);
        prop_assert_eq!(&(&a * &b).div(&b).unwrap(), &a);
        prop_assert_eq!(&(&(&a + &b) - &b), &a);
    }

    #[test]
    fn equality_ignores_representation(a in series(), c in unit_poly()) {
        let c = GradedSeries::from_poly(big(&c));
        let scaled = GradedSeries::new(
            (&GradedSeries::from_poly(a.numerator().to_vec()) * &c).numerator().to_vec(),
            (&GradedSeries::from_poly(a.denominator().to_vec()) * &c).numerator().to_vec(),
        ).unwrap();
        prop_assert_eq!(&scaled, &a);
        prop_assert_eq!(scaled.expand(10), a.expand(10));
        prop_assert!(scaled.reduced().same_representation(&a.reduced()));
    }

    #[test]
    fn full_subcomplexes_compose(seed in 0u64..1000, m in 2usize..8, outer in 1u32..255, inner in 1u32..255) {
        let k = random_flag_skeleton(seed, m, 0.5, 3);
        let s: Vec<usize> = (1..=m).filter(|i| outer >> (i - 1) & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let t: Vec<usize> = (1..=s.len()).filter(|i| inner >> (i - 1) & 1 == 1).collect();
        prop_assume!(!t.is_empty());
        let composed: Vec<usize> = t.iter().map(|&i| s[i - 1]).collect();
        let ks = k.full_subcomplex(&s).unwrap();
        prop_assert_eq!(ks.full_subcomplex(&t).unwrap(), k.full_subcomplex(&composed).unwrap());
    }

    #[test]
    fn pushout_reassembles(seed in 0u64..1000, m in 2usize..8) {
        let k = random_flag_skeleton(seed, m, 0.5, 3);
        for r in k.neighbors_and_domination().into_iter().filter(|r| !r.dominating) {
            let s = k.pushout_split(r.vertex).unwrap();
            let f1 = faces(&s.k1, &s.k1_labels);
            let f2 = faces(&s.k2, &s.k2_labels);
            let fl = faces(&s.l, &s.l_labels);
            let union: BTreeSet<_> = f1.union(&f2).cloned().collect();
            let meet: BTreeSet<_> = f1.intersection(&f2).cloned().collect();
            prop_assert_eq!(union, faces(&k, &(1..=m).collect::<Vec<_>>()));
            prop_assert_eq!(meet, fl);
        }
    }

    #[test]
    fn relabelling_preserves_classification(seed in 0u64..1000, m in 1usize..8, pseed in 0u64..100) {
        let k = random_flag_skeleton(seed, m, 0.5, 2);
        let perm = random_permutation(m, &mut ChaCha8Rng::seed_from_u64(pseed));
        let r = k.relabel(&perm).unwrap();
        let (a, b) = (k.classify(), r.classify());
        prop_assert_eq!(a.flag, b.flag);
        prop_assert_eq!(a.k_skeleton_of_flag, b.k_skeleton_of_flag);
        prop_assert_eq!(a.chordal_1_skeleton, b.chordal_1_skeleton);
        prop_assert_eq!(k.face_count(), r.face_count());
        prop_assert_eq!(k.minimal_non_faces().len(), r.minimal_non_faces().len());
    }

    #[test]
    fn greedy_recovers_random_products(seed in 0u64..10_000) {
        let p = random_product(15, 15, &mut ChaCha8Rng::seed_from_u64(seed));
        let g = greedy_factorize(p.series(), 15).unwrap();
        prop_assert_eq!(g.factors(), p.factors());
    }

    #[test]
    fn division_recovers_factor(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_product(10, 16, &mut rng);
        let q = random_product(10, 16, &mut rng);
        let d = divide_products(&p.times(&q), &p).unwrap();
        prop_assert_eq!(d.factors(), q.factors());
        prop_assert_eq!(d.series(), q.series());
    }

    #[test]
    fn porter_agrees_with_hilton_milnor(dims in prop::collection::vec(2usize..7, 1..4)) {
        let direct = hilton_milnor(&SphereWedge::from_dims(&dims).unwrap(), 16).unwrap();
        let parts: Vec<_> = dims
            .iter()
            .map(|&d| hilton_milnor(&SphereWedge::from_dims(&[d]).unwrap(), 16).unwrap())
            .collect();
        let porter = porter_loop_wedge(&parts, 16).unwrap();
        prop_assert_eq!(direct.series(), porter.series());
        prop_assert_eq!(direct.factors(), porter.factors());
    }
}

#[test]
fn divisor_failure_is_reported() {
    use polyloop::error::Error;
    use polyloop::homotopy::{PFactor, PProduct};
    let s3 = PProduct::from_factors(&[(PFactor::sphere(3).unwrap(), 1)], 10);
    let s7 = PProduct::from_factors(&[(PFactor::sphere(7).unwrap(), 1)], 10);
    assert!(matches!(divide_products(&s3, &s7), Err(Error::NotADivisor(_))));
}
