#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use polynewt::classify::{bk_theorem_check, detect_bk, generate_bk, generate_convenient};
use polynewt::corpus::e_newton_instance;
use polynewt::degrees::{ed_degree, ed_degree_mv, ml_degree, ml_degree_mv, polar_degree};
use polynewt::e_newton::{e_newton_signed, ObstructionTable, ProjectivePoint};
use polynewt::ehrhart::{codegree, is_join, local_h_star};
use polynewt::geom::{count_interior_points, minkowski_combination};
use polynewt::newton::newton_number;
use polynewt::{ConeSpec, LatticeMap, LatticePointSet, Point, Polytope, Rational};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::Rng;

fn unimodular(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i != j {
            let c = r.gen_range(-1..=1);
            for k in 0..n {
                m[i][k] += c * m[j][k];
            }
        }
    }
    m
}

fn random_set(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> LatticePointSet {
    let k = r.gen_range(n + 1..=n + 3);
    LatticePointSet::new(n, (0..k).map(|_| (0..n).map(|_| r.gen_range(-2..=2)).collect()).collect()).unwrap()
}

/// `(dim, volume, c to the whole set, obstruction)` for every face, sorted.
fn table_signature(a: &LatticePointSet) -> Vec<(usize, u64, i64, i64)> {
    let t = ObstructionTable::compute(a).unwrap();
    let w = t.whole();
    let e = t.obstructions();
    let mut v: Vec<_> = (0..t.faces.len()).map(|i| (t.faces[i].dim, t.faces[i].volume, t.c[i][w], e[i])).collect();
    v.sort();
    v
}

fn sorted_vertices(p: &Polytope) -> Vec<Point> {
    let mut v = p.vertices().to_vec();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn e_newton_is_translation_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let a = random_set(&mut r, n);
        let q: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
        let v: Vec<i64> = (0..n).map(|_| r.gen_range(-4..=4)).collect();
        let q = ProjectivePoint::finite(&q);
        prop_assert_eq!(e_newton_signed(&a.translate(&v), &q.translate(&v)).unwrap(), e_newton_signed(&a, &q).unwrap());
    }

    #[test]
    fn obstructions_are_unimodular_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let a = random_set(&mut r, n);
        let shift: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        let m = LatticeMap::new(unimodular(&mut r, n), shift).unwrap();
        let b = LatticePointSet::new(n, a.points().iter().map(|p| m.apply(p)).collect()).unwrap();
        prop_assert_eq!(table_signature(&a), table_signature(&b));
    }

    #[test]
    fn inversion_recovers_the_volume(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let a = random_set(&mut r, n);
        let t = ObstructionTable::compute(&a).unwrap();
        prop_assume!(t.faces[t.whole()].dim == n);
        let q = ProjectivePoint::finite(&(0..n).map(|_| r.gen_range(-2..=2)).collect::<Vec<_>>());
        let (lhs, rhs) = t.inversion_identity(&q);
        prop_assert_eq!(lhs, rhs, "{:?} dim {} at {}", a.points(), t.faces[t.whole()].dim, q);
        // e is the inverse of c
        let m = t.faces.len();
        for i in 0..m {
            for j in 0..m {
                let s: i64 = (0..m).map(|k| t.c[i][k] * t.e[k][j]).sum();
                prop_assert_eq!(s, i64::from(i == j));
            }
        }
    }

    #[test]
    fn generic_points_see_only_the_volume(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let a = random_set(&mut r, n);
        let t = ObstructionTable::compute(&a).unwrap();
        prop_assume!(t.faces[t.whole()].dim == n);
        let coords: Vec<Rational> = (0..n).map(|_| Rational::new(r.gen_range(-300..=300), 101)).collect();
        let q = ProjectivePoint::new(coords, Rational::from_integer(1)).unwrap();
        prop_assume!(t.through(&q) == vec![t.whole()]);
        prop_assert_eq!(e_newton_signed(&a, &q).unwrap(), t.faces[t.whole()].volume as i64);
    }

    #[test]
    fn e_newton_is_below_newton(seed in 0u64..100_000) {
        let (a, c, x) = e_newton_instance(seed).unwrap();
        prop_assert!(newton_number(&a.hull(), &c).unwrap() >= e_newton_signed(&a, &x).unwrap());
    }

    #[test]
    fn bk_certificates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let m = r.gen_range(1..=n);
        let k = r.gen_range(1..=m);
        let p = generate_bk(seed, n, k, m).unwrap();
        let cone = ConeSpec::orthant(m, n).build().unwrap();
        let cert = detect_bk(&p, &cone).unwrap();
        prop_assert!(cert.is_some());
        let cert = cert.unwrap();
        prop_assert_eq!(sorted_vertices(&cert.reconstruct(n).unwrap()), sorted_vertices(&p));
        prop_assert!(local_h_star(&p).unwrap().is_zero());
        let v = bk_theorem_check(&p, &cone).unwrap();
        prop_assert!(v.negligible && v.consistent);

        // codegree against the Minkowski sum of the summands
        let d = n - cert.k;
        let sum = if d == 0 {
            None
        } else {
            let parts: Vec<Polytope> = cert.summands.iter().map(|s| Polytope::from_points(d, s.clone()).unwrap()).collect();
            let terms: Vec<(&Polytope, i64)> = parts.iter().map(|q| (q, 1)).collect();
            Some(minkowski_combination(&terms, d).unwrap())
        };
        let interior = sum.is_none_or(|s| count_interior_points(&s, 1) > 0);
        let cd = codegree(&p);
        prop_assert!(cd > cert.k);
        prop_assert_eq!(cd == cert.k + 1, interior);

        if d > 0 {
            let parts: Vec<Polytope> = cert.summands.iter().map(|s| Polytope::from_points(d, s.clone()).unwrap()).collect();
            if parts.iter().all(|q| q.dim() >= 1) && !is_join(&parts[0]) {
                prop_assert!(!is_join(&p), "{:?}", cert.summands);
            }
        }
    }

    #[test]
    fn convenient_polytopes_are_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let m = r.gen_range(1..=n);
        let p = generate_convenient(seed, n, m).unwrap();
        let v = bk_theorem_check(&p, &ConeSpec::orthant(m, n).build().unwrap()).unwrap();
        prop_assert!(v.consistent);
        if let Some(c) = v.certificate {
            prop_assert_eq!(sorted_vertices(&c.reconstruct(n).unwrap()), sorted_vertices(&p));
        }
    }
}

fn monomials(vars: usize, d: usize) -> Vec<Point> {
    if vars == 1 {
        return vec![vec![d as i64]];
    }
    (0..=d)
        .flat_map(|i| monomials(vars - 1, d - i).into_iter().map(move |mut v| {
            v.insert(0, i as i64);
            v
        }))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn polar_forms_agree_on_homogeneous_supports(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (vars, d) = if r.gen_bool(0.5) { (2, r.gen_range(2..=6)) } else { (3, r.gen_range(2..=3)) };
        let all = monomials(vars, d);
        let k = r.gen_range(2..=all.len());
        let pts: Vec<Point> = sample(&mut r, all.len(), k).into_iter().map(|i| all[i].clone()).collect();
        let a = LatticePointSet::new(vars, pts).unwrap();
        let rep = polar_degree(&a, Some(d as i64)).unwrap();
        prop_assert!(rep.all_equal, "{:?}", rep.checks);
        prop_assert!(rep.pdeg as usize <= (d - 1).pow(vars as u32 - 1));
    }
}

/// The mixed volume form is the value at generic weights; special weights
/// can only drop it.
#[test]
fn ed_and_ml_forms_agree() {
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let k = r.gen_range(2..=5);
        let mut pts: Vec<Point> = vec![vec![0, 0]];
        pts.extend((0..k).map(|_| vec![r.gen_range(0..=2), r.gen_range(0..=2)]));
        let a = LatticePointSet::new(2, pts).unwrap();
        if a.hull().dim() < 2 {
            continue;
        }
        assert_eq!(ed_degree(std::slice::from_ref(&a)).unwrap(), ed_degree_mv(std::slice::from_ref(&a)).unwrap(), "{:?}", a.points());
        for _ in 0..3 {
            let u = [r.gen_range(1..=10_000i64), r.gen_range(1..=10_000i64)];
            assert_eq!(ml_degree(std::slice::from_ref(&a), &u).unwrap(), ml_degree_mv(std::slice::from_ref(&a), &u).unwrap(), "{:?} u {u:?}", a.points());
        }
        let mv = ml_degree_mv(std::slice::from_ref(&a), &[1, 1]).unwrap();
        assert!(ml_degree(std::slice::from_ref(&a), &[1, 1]).unwrap() <= mv);
    }
}

#[test]
fn non_join_cayley_sums() {
    let mut qualifying = 0;
    for seed in 0..400u64 {
        let n = 3 + (seed % 3) as usize;
        let m = 2 + (seed / 3 % (n as u64 - 1)) as usize;
        let p = generate_bk(seed, n, 2, m).unwrap();
        let cert = detect_bk(&p, &ConeSpec::orthant(m, n).build().unwrap()).unwrap().unwrap();
        let d = n - cert.k;
        let parts: Vec<Polytope> = cert.summands.iter().map(|s| Polytope::from_points(d, s.clone()).unwrap()).collect();
        if parts.iter().all(|q| q.dim() >= 1) && !is_join(&parts[0]) {
            qualifying += 1;
            assert!(!is_join(&p), "seed {seed}: {:?}", cert.summands);
        }
    }
    assert!(qualifying >= 10, "only {qualifying} qualifying Cayley sums");
}
