//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Exits nonzero when the failing clauses differ from `KNOWN_FAILURES`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use polynewt::classify::detect_bk;
use polynewt::complex::{boundary_subdivision, far_facets, subdivision_of_polytope, PolyhedralComplex};
use polynewt::corpus::{bundled_entry, ehrhart_quadruple, ell_instance, homogeneous_supports, verify, CorpusOptions};
use polynewt::degrees::{ed_degree, ml_degree, mml_degree, pdeg_lstar_bound, polar_degree};
use polynewt::ehrhart::{codegree, free_join, h_star, is_join, is_trivially_thin, local_h_star};
use polynewt::geom::minkowski_combination;
use polynewt::newton::ell_newton;
use polynewt::poset::agglutinate_posets;
use polynewt::{BitSet, ConeSpec, FinitePoset, IntPolynomial, LatticePointSet, Polytope};
use rand::Rng;

/// Clauses that fail on purpose, with the reason recorded alongside the
/// build notes.
const KNOWN_FAILURES: &[(usize, &str)] = &[(1, "not a join"), (9, "Pdeg <= l*(P * simplex; 1)")];

const EXAMPLE_BUDGET: Duration = Duration::from_secs(60);
const SWEEP_BUDGET: Duration = Duration::from_secs(600);
const ORACLE_SEEDS: u64 = 5;

struct Clause {
    name: &'static str,
    ok: bool,
    detail: String,
}

type Criterion = (usize, &'static str, fn() -> Vec<Clause>);

fn clause(name: &'static str, ok: bool, detail: impl Into<String>) -> Clause {
    Clause { name, ok, detail: detail.into() }
}

fn corpus_check(name: &str, seeds: std::ops::Range<u64>) -> (usize, Vec<String>) {
    let opts = CorpusOptions { seeds, only: Some(vec![name.to_string()]), fault: None };
    let rep = verify(&opts).expect("corpus run");
    let c = &rep.checks[0];
    (c.instances, c.failures.clone())
}

fn criterion_1() -> Vec<Clause> {
    let t = Instant::now();
    let e = bundled_entry("cayley_b2_thin").unwrap();
    let p = e.polytope().unwrap();
    let cone = e.cone().unwrap().unwrap();
    let l = local_h_star(&p).unwrap();
    let cert = detect_bk(&p, &cone).unwrap();
    let rep = ell_newton(&p, &cone).unwrap();
    let interior = cert.as_ref().is_some_and(|c| {
        let d = p.ambient_dim() - c.k;
        let parts: Vec<Polytope> = c.summands.iter().map(|s| Polytope::from_points(d, s.clone()).unwrap()).collect();
        let terms: Vec<(&Polytope, i64)> = parts.iter().map(|q| (q, 1)).collect();
        minkowski_combination(&terms, d).unwrap().contains_in_relative_interior(&[1, 1, 1])
    });
    vec![
        clause("l* = 0", l.is_zero(), format!("{:?}", l.coeffs())),
        clause("not trivially thin", !is_trivially_thin(&p).unwrap(), ""),
        clause("codegree 3", codegree(&p) == 3, format!("{}", codegree(&p))),
        clause("(1,1,1) interior to the summand sum", interior, ""),
        clause("not a join", !is_join(&p), format!("is_join = {}", is_join(&p))),
        clause("B_2 certificate", cert.as_ref().is_some_and(|c| c.k == 2), format!("{:?}", cert.map(|c| c.coords))),
        clause("nu = ell_nu = 0", rep.nu == 0 && rep.ell_nu == 0, format!("{} / {}", rep.nu, rep.ell_nu)),
        clause("runtime", t.elapsed() < EXAMPLE_BUDGET, format!("{:.2?}", t.elapsed())),
    ]
}

fn criterion_2() -> Vec<Clause> {
    let t = Instant::now();
    let e = bundled_entry("twisted_thin").unwrap();
    let p = e.polytope().unwrap();
    let l = local_h_star(&p).unwrap();
    vec![
        clause("l* = 0", l.is_zero(), format!("{:?}", l.coeffs())),
        clause("not trivially thin", !is_trivially_thin(&p).unwrap(), ""),
        clause("not a join", !is_join(&p), ""),
        clause("runtime", t.elapsed() < EXAMPLE_BUDGET, format!("{:.2?}", t.elapsed())),
    ]
}

fn criterion_3() -> Vec<Clause> {
    let t = Instant::now();
    let (n, fails) = corpus_check("bk-theorem", 0..500);
    vec![
        clause("500 instances", n >= 500, format!("{n}")),
        clause("nu = 0 iff B_k", fails.is_empty(), fails.join("; ")),
        clause("runtime", t.elapsed() < SWEEP_BUDGET, format!("{:.2?}", t.elapsed())),
    ]
}

fn criterion_4() -> Vec<Clause> {
    let mut instances: Vec<(String, Polytope, polynewt::Cone)> = (0..80u64)
        .map(|s| {
            let (p, c) = ell_instance(s).unwrap();
            (format!("seed {s}"), p, c)
        })
        .collect();
    for id in ["tri_a2b2", "square_cone", "cayley_b2_thin", "twisted_thin"] {
        let e = bundled_entry(id).unwrap();
        if let Some(c) = e.cone().unwrap() {
            instances.push((id.to_string(), e.polytope().unwrap(), c));
        }
    }
    let mut eq_fail = Vec::new();
    let mut bound_fail = Vec::new();
    let mut non_boolean = 0;
    for (id, p, c) in &instances {
        let r = ell_newton(p, c).unwrap();
        if c.orthant_form().is_some() && r.nu != r.ell_nu as i64 {
            eq_fail.push(format!("{id}: {} vs {}", r.nu, r.ell_nu));
        }
        let l = local_h_star(p).unwrap().eval(1);
        if (r.ell_nu as i64) < l {
            bound_fail.push(format!("{id}: {} < {l}", r.ell_nu));
        }
        if !c.is_boolean() {
            non_boolean += 1;
        }
    }
    vec![
        clause("nu = ell_nu in orthant products", eq_fail.is_empty(), eq_fail.join("; ")),
        clause("ell_nu >= l*(P;1)", bound_fail.is_empty(), bound_fail.join("; ")),
        clause("20 non-boolean cones", non_boolean >= 20, format!("{non_boolean} of {}", instances.len())),
    ]
}

fn criterion_5() -> Vec<Clause> {
    let (n1, f1) = corpus_check("e-newton-bound", 0..200);
    let (n2, f2) = corpus_check("obstruction-inversion", 0..200);
    vec![
        clause("nu >= nu^e_X", n1 >= 200 && f1.is_empty(), format!("{n1} pairs {}", f1.join("; "))),
        clause("inversion identity", n2 >= 200 && f2.is_empty(), format!("{n2} sets {}", f2.join("; "))),
    ]
}

fn one_minus_t_pow(k: i64) -> IntPolynomial {
    IntPolynomial::t_minus_one_pow(k as usize).scale(if k % 2 == 0 { 1 } else { -1 })
}

fn poset_gluing_ok(seed: u64) -> bool {
    let mut r = rng(seed);
    let n = r.gen_range(2..=3);
    let k = r.gen_range(n + 1..=n + 4);
    let f = random_polytope(&mut r, n, k, 3).face_poset();
    let facets: Vec<usize> = (0..f.len()).filter(|&x| f.rank_of(x) == n as i64).collect();
    let mut pick = || {
        let mut s = BitSet::new();
        for _ in 0..r.gen_range(1..=2) {
            for x in f.down_set(facets[r.gen_range(0..facets.len())]).iter() {
                s.insert(x);
            }
        }
        s
    };
    let (a, b) = (pick(), pick());
    let ab = a.intersection(&b);
    let (g1, old1) = f.subposet(&a);
    let (g2, old2) = f.subposet(&b);
    let (gb, _) = f.subposet(&ab);
    let shared: Vec<(usize, usize)> = ab
        .iter()
        .map(|x| (old1.iter().position(|&o| o == x).unwrap(), old2.iter().position(|&o| o == x).unwrap()))
        .collect();
    let (glued, _) = agglutinate_posets(&g1, &g2, &shared).unwrap();
    let rk = glued.poset_rank();
    let h = glued.h_polynomial().unwrap();
    let term = |g: &FinitePoset| &one_minus_t_pow(rk - g.poset_rank()) * &g.h_polynomial().unwrap();
    h == &(&term(&g1) + &term(&g2)) - &term(&gb)
}

fn local_gluing_ok(seed: u64) -> bool {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let m = r.gen_range(1..=n);
    let p = polynewt::classify::generate_convenient(seed, n, m).unwrap();
    let cone = ConeSpec::orthant(m, n).build().unwrap();
    let far: Vec<Polytope> = far_facets(&p, &cone).into_iter().map(|f| p.face_polytope(f)).collect();
    let steps = r.gen_range(1..=2);
    let c2 = random_pulling(&mut r, &p, steps, |v| far.iter().any(|g| g.contains(v)));
    let s1 = boundary_subdivision(&p, &cone, &PolyhedralComplex::of_polytope(&p)).unwrap();
    let s2 = boundary_subdivision(&p, &cone, &c2).unwrap();
    let glued = s1.agglutinate(&s2).unwrap();
    let lb = s1.map.restrict_to_boundary().unwrap().0.local_h().unwrap();
    let expect = &(&s1.map.local_h().unwrap() + &s2.map.local_h().unwrap()) + &(&IntPolynomial::t_plus_one() * &lb);
    glued.map.local_h().unwrap() == expect
}

fn criterion_6() -> Vec<Clause> {
    let boolean = (0..=6).all(|r| {
        let b = FinitePoset::boolean(r);
        b.g_polynomial().unwrap() == IntPolynomial::one() && b.dual().g_polynomial().unwrap() == IntPolynomial::one()
    });
    let twins = (0..100u64).filter(|&s| {
        let p = random_lower_eulerian(&mut rng(s));
        p.twins().unwrap().h_polynomial().unwrap() != p.h_polynomial().unwrap()
    });
    let twins: Vec<u64> = twins.collect();
    let poset_glue: Vec<u64> = (0..100u64).filter(|&s| !poset_gluing_ok(s)).collect();
    let local_glue: Vec<u64> = (0..40u64).filter(|&s| !local_gluing_ok(s)).collect();
    let local_h: Vec<u64> = (0..60u64)
        .filter(|&s| {
            let mut r = rng(s);
            let n = r.gen_range(1..=3);
            let k = r.gen_range(n + 1..=n + 3);
            let p = random_polytope(&mut r, n, k, 2);
            let steps = r.gen_range(0..=3);
            let c = random_pulling(&mut r, &p, steps, |_| false);
            let m = subdivision_of_polytope(&p, &c).unwrap().map;
            let l = m.local_h().unwrap();
            !(l.is_nonnegative() && l.is_symmetric_about(m.source().poset_rank() as usize))
        })
        .collect();
    let mut corpus: Vec<(String, Polytope)> = ["tri_a2b2", "square_cone", "cayley_b2_thin", "twisted_thin", "binary_full", "ternary_cubic"]
        .iter()
        .map(|id| (id.to_string(), bundled_entry(id).unwrap().polytope().unwrap()))
        .collect();
    corpus.extend((0..100u64).map(|s| (format!("bk seed {s}"), polynewt::corpus::bk_instance(s).unwrap().0)));
    let quad: Vec<String> = corpus.iter().filter(|(_, p)| ehrhart_quadruple(p).unwrap().is_err()).map(|x| x.0.clone()).collect();
    let joins: Vec<u64> = (0..50u64)
        .filter(|&s| {
            let mut r = rng(s);
            let (a, b) = (r.gen_range(1..=2), r.gen_range(1..=2));
            let p = random_polytope(&mut r, a, a + 2, 2);
            let q = random_polytope(&mut r, b, b + 2, 2);
            let j = free_join(&p, &q);
            h_star(&j).unwrap() != &h_star(&p).unwrap() * &h_star(&q).unwrap()
                || local_h_star(&j).unwrap() != &local_h_star(&p).unwrap() * &local_h_star(&q).unwrap()
        })
        .collect();
    vec![
        clause("g(boolean) = 1 both ways", boolean, ""),
        clause("twins keep h (100)", twins.is_empty(), format!("{twins:?}")),
        clause("poset agglutination h (100)", poset_glue.is_empty(), format!("{poset_glue:?}")),
        clause("agglutinated local h (40)", local_glue.is_empty(), format!("{local_glue:?}")),
        clause("local h nonnegative, symmetric (60)", local_h.is_empty(), format!("{local_h:?}")),
        clause("h*/l* quadruple on the corpus", quad.is_empty(), format!("{} polytopes {quad:?}", corpus.len())),
        clause("free join multiplies (50)", joins.is_empty(), format!("{joins:?}")),
    ]
}

fn criterion_7() -> Vec<Clause> {
    let (n, fails) = corpus_check("stapledon", 0..50);
    vec![clause("stapledon consistency (50)", n >= 50 && fails.is_empty(), format!("{n} {}", fails.join("; ")))]
}

fn criterion_8() -> Vec<Clause> {
    let uni = |d: i64| LatticePointSet::new(1, (0..=d).map(|e| vec![e]).collect()).unwrap();
    let bin = |d: i64| LatticePointSet::new(2, (0..=d).map(|i| vec![i, d - i]).collect()).unwrap();
    let line = LatticePointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let mut mml = Vec::new();
    let mut polar = Vec::new();
    for d in 1..=6i64 {
        let v = mml_degree(&[uni(d)], &[1]).unwrap() as i64;
        if v != d - 1 {
            mml.push(format!("d {d}: {v}"));
        }
        if d >= 2 {
            let v = polar_degree(&bin(d), Some(d)).unwrap().pdeg as i64;
            if v != d - 1 {
                polar.push(format!("d {d}: {v}"));
            }
        }
    }
    let ml = ml_degree(std::slice::from_ref(&line), &[2, 3]).unwrap();
    let ed = ed_degree(std::slice::from_ref(&line)).unwrap();
    let mut oracle_fail = Vec::new();
    for seed in 0..ORACLE_SEEDS {
        let mut r = rng(seed);
        for d in 1..=6usize {
            let exps: Vec<usize> = (0..=d).collect();
            let n = oracle::mml_univariate(&exps, &mut r);
            if n as u64 != mml_degree(&[uni(d as i64)], &[1]).unwrap() {
                oracle_fail.push(format!("mml seed {seed} d {d}: {n}"));
            }
            if d >= 2 {
                let n = oracle::polar_binary(&exps, d, &mut r);
                if n as u64 != polar_degree(&bin(d as i64), Some(d as i64)).unwrap().pdeg {
                    oracle_fail.push(format!("polar seed {seed} d {d}: {n}"));
                }
            }
        }
        let n = oracle::ml_line([2.0, 3.0], &mut r);
        if n as u64 != ml {
            oracle_fail.push(format!("ml seed {seed}: {n}"));
        }
        let n = oracle::ed_line(&mut r);
        if n as u64 != ed {
            oracle_fail.push(format!("ed seed {seed}: {n}"));
        }
    }
    vec![
        clause("MMLdeg {0..d} = d-1", mml.is_empty(), mml.join("; ")),
        clause("polar binary = d-1", polar.is_empty(), polar.join("; ")),
        clause("ML line = 1", ml == 1, format!("{ml}")),
        clause("ED line = 1", ed == 1, format!("{ed}")),
        clause("numeric oracle agrees", oracle_fail.is_empty(), oracle_fail.join("; ")),
    ]
}

fn criterion_9() -> Vec<Clause> {
    let sup = homogeneous_supports();
    let mut forms = Vec::new();
    let mut bound = Vec::new();
    for (id, a) in &sup {
        let rep = polar_degree(a, None).unwrap();
        if !rep.all_equal {
            forms.push(format!("{id}: {:?}", rep.checks.iter().map(|c| c.value).collect::<Vec<_>>()));
        }
        let b = pdeg_lstar_bound(a).unwrap();
        if !b.holds {
            bound.push(format!("{id}: {} > {}", b.pdeg, b.bound));
        }
    }
    vec![
        clause("nu^e, nu and mixed volume forms agree", forms.is_empty(), format!("{} supports {}", sup.len(), forms.join("; "))),
        clause("Pdeg <= l*(P * simplex; 1)", bound.is_empty(), bound.join("; ")),
    ]
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "thin B_2 example", criterion_1),
        (2, "thin twisted example", criterion_2),
        (3, "B_k sweep", criterion_3),
        (4, "ell-Newton numbers", criterion_4),
        (5, "e-Newton bound and inversion", criterion_5),
        (6, "property suites", criterion_6),
        (7, "monodromy consistency", criterion_7),
        (8, "degree formulas", criterion_8),
        (9, "cross-formula agreement", criterion_9),
    ];
    let mut failed: BTreeSet<(usize, &str)> = BTreeSet::new();
    for (i, title, run) in criteria {
        let t = Instant::now();
        let clauses = run();
        let bad: Vec<&Clause> = clauses.iter().filter(|c| !c.ok).collect();
        let status = if bad.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {i} {status} {title} ({} clauses, {:.2?})", clauses.len(), t.elapsed());
        for c in bad {
            println!("    failed: {} [{}]", c.name, c.detail);
            failed.insert((i, c.name));
        }
    }
    let known: BTreeSet<(usize, &str)> = KNOWN_FAILURES.iter().copied().collect();
    if failed == known {
        println!("acceptance: failing clauses match the {} known failures", known.len());
    } else {
        println!("acceptance: unexpected result");
        for x in failed.difference(&known) {
            println!("    new failure: criterion {} {}", x.0, x.1);
        }
        for x in known.difference(&failed) {
            println!("    known failure now passes: criterion {} {}", x.0, x.1);
        }
        std::process::exit(1);
    }
}
