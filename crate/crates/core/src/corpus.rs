//! Bundled corpus, seeded instance families and the named invariant checks
//! driven by `corpus verify`.

use std::collections::BTreeMap;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{bk_theorem_check, detect_bk, generate_bk, generate_convenient, generate_in_cone};
use crate::degrees::{ed_degree, ed_degree_mv, ml_degree, ml_degree_mv, mml_degree, pdeg_lstar_bound, polar_degree};
use crate::e_newton::{e_newton_signed, ObstructionTable, ProjectivePoint};
use crate::ehrhart::{codegree, h_star, is_join, is_trivially_thin, local_h_star};
use crate::error::{Error, Result};
use crate::geom::{count_interior_points, count_lattice_points, Cone, ConeSpec, LatticeMap, LatticePointSet, Polytope};
use crate::newton::{ell_newton, newton_number, stapledon_consistency};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub points: LatticePointSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSpec>,
    /// Applied to `points` before anything is computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<LatticeMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homog_degree: Option<i64>,
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
}

impl CorpusEntry {
    pub fn point_set(&self) -> Result<LatticePointSet> {
        match &self.transform {
            None => Ok(self.points.clone()),
            Some(m) => {
                if m.source_dim() != self.points.ambient_dim() {
                    return Err(Error::DimensionMismatch(format!("transform of {} does not fit the points", self.id)));
                }
                LatticePointSet::new(m.target_dim(), self.points.points().iter().map(|x| m.apply(x)).collect())
            }
        }
    }

    pub fn polytope(&self) -> Result<Polytope> {
        Ok(self.point_set()?.hull())
    }

    pub fn cone(&self) -> Result<Option<Cone>> {
        self.cone.as_ref().map(ConeSpec::build).transpose()
    }

    /// Recomputes one golden key.
    pub fn compute(&self, key: &str) -> Result<Value> {
        let p = self.polytope()?;
        let need_cone = || self.cone()?.ok_or_else(|| Error::precondition(format!("{} has no cone", self.id)));
        Ok(match key {
            "lstar" => json!(local_h_star(&p)?),
            "hstar" => json!(h_star(&p)?),
            "volume" => json!(p.lattice_volume()),
            "codegree" => json!(codegree(&p)),
            "trivially_thin" => json!(is_trivially_thin(&p)?),
            "join" => json!(is_join(&p)),
            "nu" => json!(newton_number(&p, &need_cone()?)?),
            "ell_nu" => json!(ell_newton(&p, &need_cone()?)?.ell_nu),
            "bk_k" => json!(detect_bk(&p, &need_cone()?)?.map(|c| c.k)),
            "pdeg" => json!(polar_degree(&self.point_set()?, self.homog_degree)?.pdeg),
            _ => return Err(Error::precondition(format!("unknown golden key {key:?}"))),
        })
    }
}

const BUNDLED: &[&str] = &[
    include_str!("../corpus/cayley_b2_thin.json"),
    include_str!("../corpus/twisted_thin.json"),
    include_str!("../corpus/tri_a2b2.json"),
    include_str!("../corpus/square_cone.json"),
    include_str!("../corpus/binary_full.json"),
    include_str!("../corpus/ternary_cubic.json"),
];

pub fn bundled() -> Vec<CorpusEntry> {
    BUNDLED.iter().map(|t| serde_json::from_str(t).expect("bundled corpus entry")).collect()
}

pub fn bundled_entry(id: &str) -> Option<CorpusEntry> {
    bundled().into_iter().find(|e| e.id == id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Negates the off-diagonal c-numbers after the obstructions are solved.
    CNumberSign,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c-number-sign" => Ok(Fault::CNumberSign),
            _ => Err(Error::precondition(format!("unknown fault {s:?}"))),
        }
    }
}

pub const CHECKS: &[(&str, &str)] = &[
    ("golden", "bundled golden values replay exactly"),
    ("ehrhart-quadruple", "h*_0 = 1, h*_1 = #points - dim - 1, h*_dim = #interior, h*(1) = Vol"),
    ("bk-theorem", "ν = 0 exactly for B_k-polytopes"),
    ("ell-newton", "ν = ν^ℓ in orthant products and ν^ℓ >= ℓ*(P;1)"),
    ("e-newton-bound", "ν >= ν^e_X for X in the lineality lattice"),
    ("obstruction-inversion", "e-Newton numbers recovered by inverting the obstruction formula"),
    ("stapledon", "monodromy decomposition of ℓ* of the glued star subdivision"),
    ("degrees", "algebraic degree formulas agree"),
    ("polar-lstar-bound", "Pdeg <= ℓ*(P * Δ°; 1)"),
];

#[derive(Debug, Clone)]
pub struct CorpusOptions {
    pub seeds: Range<u64>,
    pub only: Option<Vec<String>>,
    pub fault: Option<Fault>,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { seeds: 0..500, only: None, fault: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statement: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub seeds: [u64; 2],
    pub fault: Option<Fault>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn capped(seeds: &Range<u64>, cap: u64) -> Vec<u64> {
    (seeds.start..seeds.end.min(seeds.start.saturating_add(cap))).collect()
}

/// Seeded polytope for the B_k sweep: even seeds B_k, odd seeds random
/// convenient, `n <= 5`.
pub fn bk_instance(seed: u64) -> Result<(Polytope, Cone)> {
    let n = 2 + (seed / 2 % 4) as usize;
    let m = 1 + (seed / 8 % n as u64) as usize;
    let p = if seed.is_multiple_of(2) {
        let k = 1 + (seed / 64 % m as u64) as usize;
        generate_bk(seed, n, k, m)?
    } else {
        generate_convenient(seed, n, m)?
    };
    Ok((p, ConeSpec::orthant(m, n).build()?))
}

const NON_BOOLEAN_RAYS: [&[[i64; 3]]; 2] = [
    &[[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]],
    &[[1, 0, 1], [1, 1, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]],
];

/// Seeded convenient polytope; every fourth seed lives in a cone whose face
/// poset is not boolean, the rest in orthant products of dimension <= 3.
pub fn ell_instance(seed: u64) -> Result<(Polytope, Cone)> {
    if seed % 4 == 3 {
        let rays = NON_BOOLEAN_RAYS[(seed / 4 % 2) as usize].iter().map(|r| r.to_vec()).collect();
        let c = ConeSpec::General { rays, lineality: Vec::new() }.build()?;
        return Ok((generate_in_cone(seed, &c)?, c));
    }
    let n = 1 + (seed % 3) as usize;
    let m = n - (seed / 3 % n as u64) as usize;
    Ok((generate_convenient(seed, n, m)?, ConeSpec::orthant(m, n).build()?))
}

/// Seeded `(A, C, X)` with `conv A` convenient in an orthant product of
/// dimension <= 3 and `X` in the lineality lattice.
pub fn e_newton_instance(seed: u64) -> Result<(LatticePointSet, Cone, ProjectivePoint)> {
    let n = 1 + (seed % 3) as usize;
    let m = n - (seed / 3 % n as u64) as usize;
    let p = generate_convenient(seed, n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5eed));
    let x: Vec<i64> = (0..n).map(|j| if j < m { 0 } else { rng.gen_range(-1..=1) }).collect();
    Ok((p.vertex_set(), ConeSpec::orthant(m, n).build()?, ProjectivePoint::finite(&x)))
}

/// Seeded convenient polytope in the full orthant, dimension <= 4.
pub fn stapledon_instance(seed: u64) -> Result<(Polytope, Cone)> {
    let n = 1 + (seed % 4) as usize;
    Ok((generate_convenient(seed, n, n)?, ConeSpec::orthant(n, n).build()?))
}

fn run_instances<T: Send>(
    seeds: &[u64],
    f: impl Fn(u64) -> Result<std::result::Result<T, String>> + Sync,
) -> (usize, Vec<String>) {
    let out: Vec<std::result::Result<(), String>> = seeds
        .par_iter()
        .map(|&s| match f(s) {
            Ok(Ok(_)) => Ok(()),
            Ok(Err(msg)) => Err(format!("seed {s}: {msg}")),
            Err(e) => Err(format!("seed {s}: error: {e}")),
        })
        .collect();
    (seeds.len(), out.into_iter().filter_map(|r| r.err()).collect())
}

fn check_golden() -> (usize, Vec<String>) {
    let mut n = 0;
    let mut fails = Vec::new();
    for e in bundled() {
        for (k, v) in &e.expected {
            n += 1;
            match e.compute(k) {
                Ok(got) if &got == v => {}
                Ok(got) => fails.push(format!("{}.{k}: expected {v}, got {got}", e.id)),
                Err(err) => fails.push(format!("{}.{k}: error: {err}", e.id)),
            }
        }
    }
    (n, fails)
}

/// The four h* sanity identities on one polytope.
pub fn ehrhart_quadruple(p: &Polytope) -> Result<std::result::Result<(), String>> {
    let h = h_star(p)?;
    let d = p.dim();
    let pts = count_lattice_points(p, 1) as i64;
    let int = count_interior_points(p, 1) as i64;
    let vol = p.lattice_volume() as i64;
    let got = [h.coeff(0), h.coeff(1), h.coeff(d), h.eval(1)];
    let want = [1, if d == 0 { 0 } else { pts - d as i64 - 1 }, if d == 0 { 1 } else { int }, vol];
    Ok(if got == want { Ok(()) } else { Err(format!("h* = {h}: got {got:?}, expected {want:?}")) })
}

fn check_degrees() -> (usize, Vec<String>) {
    let mut fails = Vec::new();
    let mut n = 0;
    let mut want = |name: String, got: Result<u64>, expected: u64| {
        n += 1;
        match got {
            Ok(v) if v == expected => {}
            Ok(v) => fails.push(format!("{name}: expected {expected}, got {v}")),
            Err(e) => fails.push(format!("{name}: error: {e}")),
        }
    };
    for d in 2..=6i64 {
        let uni = LatticePointSet::new(1, (0..=d).map(|i| vec![i]).collect()).unwrap();
        want(format!("mml {{0..{d}}}"), mml_degree(&[uni], &[1]), (d - 1) as u64);
        let bin = LatticePointSet::new(2, (0..=d).map(|i| vec![i, d - i]).collect()).unwrap();
        want(format!("polar binary {d}"), polar_degree(&bin, Some(d)).map(|r| r.pdeg), (d - 1) as u64);
    }
    let line = LatticePointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    want("ml line".into(), ml_degree(std::slice::from_ref(&line), &[2, 3]), 1);
    want("ml line mixed volume".into(), ml_degree_mv(std::slice::from_ref(&line), &[2, 3]), 1);
    want("ed line".into(), ed_degree(std::slice::from_ref(&line)), 1);
    want("ed line mixed volume".into(), ed_degree_mv(&[line]), 1);
    for e in bundled().into_iter().filter(|e| e.homog_degree.is_some()) {
        n += 1;
        match e.point_set().and_then(|a| polar_degree(&a, e.homog_degree)) {
            Ok(r) if r.all_equal => {}
            Ok(r) => fails.push(format!("{}: polar degree forms disagree: {:?}", e.id, r.checks)),
            Err(err) => fails.push(format!("{}: error: {err}", e.id)),
        }
    }
    (n, fails)
}

/// Homogeneous bundled supports and the full binary forms of degree 2 to 6.
pub fn homogeneous_supports() -> Vec<(String, LatticePointSet)> {
    let mut v: Vec<(String, LatticePointSet)> = bundled()
        .into_iter()
        .filter(|e| e.homog_degree.is_some())
        .map(|e| (e.id.clone(), e.point_set().expect("bundled point set")))
        .collect();
    for d in 2..=6i64 {
        v.push((format!("binary_{d}"), LatticePointSet::new(2, (0..=d).map(|i| vec![i, d - i]).collect()).unwrap()));
    }
    v
}

fn run_check(name: &str, opts: &CorpusOptions) -> (usize, Vec<String>) {
    let seeds = &opts.seeds;
    match name {
        "golden" => check_golden(),
        "ehrhart-quadruple" => {
            let mut polys: Vec<Polytope> = bundled().iter().filter_map(|e| e.polytope().ok()).collect();
            polys.extend(capped(seeds, 100).into_iter().filter_map(|s| bk_instance(s).ok().map(|x| x.0)));
            let (n, mut fails) = (polys.len(), Vec::new());
            for (i, p) in polys.iter().enumerate() {
                match ehrhart_quadruple(p) {
                    Ok(Ok(())) => {}
                    Ok(Err(m)) => fails.push(format!("polytope {i}: {m}")),
                    Err(e) => fails.push(format!("polytope {i}: error: {e}")),
                }
            }
            (n, fails)
        }
        "bk-theorem" => run_instances(&capped(seeds, u64::MAX), |s| {
            let (p, c) = bk_instance(s)?;
            let v = bk_theorem_check(&p, &c)?;
            Ok(if v.consistent {
                Ok(())
            } else {
                Err(format!("negligible = {} but B_k certificate = {:?}", v.negligible, v.certificate.map(|c| c.coords)))
            })
        }),
        "ell-newton" => run_instances(&capped(seeds, 80), |s| {
            let (p, c) = ell_instance(s)?;
            let r = ell_newton(&p, &c)?;
            let lstar = r.ell_star.eval(1);
            if c.orthant_form().is_some() && r.nu != r.ell_nu as i64 {
                return Ok(Err(format!("ν = {} but ν^ℓ = {}", r.nu, r.ell_nu)));
            }
            Ok(if (r.ell_nu as i64) < lstar { Err(format!("ν^ℓ = {} < ℓ*(1) = {lstar}", r.ell_nu)) } else { Ok(()) })
        }),
        "e-newton-bound" => run_instances(&capped(seeds, 200), |s| {
            let (a, c, x) = e_newton_instance(s)?;
            let nu = newton_number(&a.hull(), &c)?;
            let e = e_newton_signed(&a, &x)?;
            Ok(if nu < e { Err(format!("ν = {nu} < ν^e = {e} at {x}")) } else { Ok(()) })
        }),
        "obstruction-inversion" => run_instances(&capped(seeds, 200), |s| {
            let (a, _, x) = e_newton_instance(s)?;
            let t = ObstructionTable::compute_with_fault(&a, opts.fault == Some(Fault::CNumberSign))?;
            for q in [x.clone(), ProjectivePoint::origin(a.ambient_dim())] {
                let (lhs, rhs) = t.inversion_identity(&q);
                if lhs != rhs {
                    return Ok(Err(format!("at {q}: ν^e = {lhs} but inverted sum = {rhs}")));
                }
            }
            Ok(Ok(()))
        }),
        "stapledon" => run_instances(&capped(seeds, 50), |s| {
            let (p, c) = stapledon_instance(s)?;
            let r = stapledon_consistency(&p, &c)?;
            Ok(if r.holds {
                Ok(())
            } else {
                Err(format!("ν = {}, monodromy sum = {}, glued ℓ* = {}", r.nu, r.monodromy_sum, r.ell_star_star_glued))
            })
        }),
        "degrees" => check_degrees(),
        "polar-lstar-bound" => {
            let sup = homogeneous_supports();
            let mut fails = Vec::new();
            for (id, a) in &sup {
                match pdeg_lstar_bound(a) {
                    Ok(b) if b.holds => {}
                    Ok(b) => fails.push(format!("{id}: Pdeg = {} > ℓ*(1) = {}", b.pdeg, b.bound)),
                    Err(e) => fails.push(format!("{id}: error: {e}")),
                }
            }
            (sup.len(), fails)
        }
        _ => unreachable!("check names are validated"),
    }
}

/// Runs the selected checks; results follow the order of [`CHECKS`].
pub fn verify(opts: &CorpusOptions) -> Result<CorpusReport> {
    if let Some(only) = &opts.only {
        if let Some(bad) = only.iter().find(|o| !CHECKS.iter().any(|(n, _)| n == o)) {
            return Err(Error::precondition(format!("unknown check {bad:?}")));
        }
    }
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .filter(|(n, _)| opts.only.as_ref().is_none_or(|o| o.iter().any(|x| x == n)))
        .map(|&(name, statement)| {
            let (instances, failures) = run_check(name, opts);
            CheckResult { name: name.into(), statement: statement.into(), instances, passed: failures.is_empty(), failures }
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(CorpusReport { seeds: [opts.seeds.start, opts.seeds.end], fault: opts.fault, checks, passed })
}
