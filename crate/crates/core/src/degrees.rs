//! Algebraic degrees of Newton non-degenerate systems as e-Newton numbers.
//!
//! Cayley sets are laid out with the Cayley coordinates first, then the base
//! coordinates; projective points carry the homogenizing coordinate last.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::e_newton::{e_newton, ProjectivePoint};
use crate::ehrhart::local_h_star;
use crate::error::{Error, Result};
use crate::geom::{cayley_sum_leading, ConeSpec, LatticePointSet, Point, Polytope};
use crate::lattice::{to_i128, SpanLattice};
use crate::mixed_volume::{mixed_volume, MixedVolumeQuery};
use crate::newton::newton_number;
use crate::polynomial::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    Mml,
    Ml,
    Ed,
    Polar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeQuery {
    pub kind: DegreeKind,
    pub supports: Vec<LatticePointSet>,
    #[serde(default)]
    pub u: Option<Vec<i64>>,
    #[serde(default)]
    pub homog_degree: Option<i64>,
}

/// One alternative formula and its value.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DegreeCheck {
    pub name: String,
    pub value: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub kind: DegreeKind,
    pub value: u64,
    pub checks: Vec<DegreeCheck>,
    pub all_equal: bool,
    pub flags: Vec<String>,
}

fn base_dim(supports: &[LatticePointSet]) -> Result<usize> {
    let Some(first) = supports.first() else {
        return Err(Error::precondition("at least one support is needed"));
    };
    let d = first.ambient_dim();
    if supports.iter().any(|s| s.ambient_dim() != d) {
        return Err(Error::DimensionMismatch("supports live in different dimensions".into()));
    }
    Ok(d)
}

fn with_first(first: LatticePointSet, supports: &[LatticePointSet]) -> Result<LatticePointSet> {
    let mut sets = vec![first];
    sets.extend(supports.iter().cloned());
    cayley_sum_leading(&sets)
}

/// `ν^e_{Q_u}(O * P_1 * ... * P_m)` with `Q_u = (u_1 : ... : u_m : 0 : ... : 0)`.
pub fn mml_degree(supports: &[LatticePointSet], u: &[i64]) -> Result<u64> {
    let d = base_dim(supports)?;
    let m = supports.len();
    if u.len() != m {
        return Err(Error::DimensionMismatch(format!("u has {} entries for {m} supports", u.len())));
    }
    if u.iter().all(|&x| x == 0) {
        return Err(Error::precondition("u must be nonzero"));
    }
    let a = with_first(LatticePointSet::new(d, vec![vec![0; d]])?, supports)?;
    let mut dir = u.to_vec();
    dir.extend(std::iter::repeat_n(0, d));
    e_newton(&a, &ProjectivePoint::at_infinity(&dir)?)
}

fn ml_set(supports: &[LatticePointSet], u: &[i64]) -> Result<LatticePointSet> {
    let d = base_dim(supports)?;
    if u.len() != d {
        return Err(Error::DimensionMismatch(format!("u has {} entries in dimension {d}", u.len())));
    }
    with_first(LatticePointSet::new(d, vec![u.to_vec()])?, supports)
}

/// `ν^e_O(u * P_1 * ... * P_m)`.
pub fn ml_degree(supports: &[LatticePointSet], u: &[i64]) -> Result<u64> {
    let a = ml_set(supports, u)?;
    e_newton(&a, &ProjectivePoint::origin(a.ambient_dim()))
}

/// `MV(P_1, ..., P_m, P, ..., P)` with `P = conv(u * P_1 * ... * P_m)`.
pub fn ml_degree_mv(supports: &[LatticePointSet], u: &[i64]) -> Result<u64> {
    let a = ml_set(supports, u)?;
    let n = a.ambient_dim();
    let m = supports.len();
    let mut terms: Vec<(Polytope, usize)> = (0..m)
        .map(|i| {
            let pts: Vec<Point> = a.points().iter().filter(|p| p[i] == 1).cloned().collect();
            Ok((Polytope::from_points(n, pts)?, 1))
        })
        .collect::<Result<_>>()?;
    if n > m {
        terms.push((a.hull(), n - m));
    }
    mixed_volume(&MixedVolumeQuery::new(n, terms)?)
}

/// `Δ_ρ = {0} ∪ {e_i} ∪ {2 e_i}`.
pub fn distance_support(d: usize) -> Result<LatticePointSet> {
    let mut pts = vec![vec![0; d]];
    for i in 0..d {
        for c in [1, 2] {
            let mut v = vec![0; d];
            v[i] = c;
            pts.push(v);
        }
    }
    LatticePointSet::new(d, pts)
}

fn ed_set(supports: &[LatticePointSet]) -> Result<LatticePointSet> {
    let d = base_dim(supports)?;
    with_first(distance_support(d)?, supports)
}

/// `ν^e_O(Δ_ρ * P_1 * ... * P_m)`.
pub fn ed_degree(supports: &[LatticePointSet]) -> Result<u64> {
    let a = ed_set(supports)?;
    e_newton(&a, &ProjectivePoint::origin(a.ambient_dim()))
}

/// `MV(conv(P^ρ ∖ E_1), ..., conv(P^ρ ∖ E_n))`; meaningful when every
/// support contains the origin.
pub fn ed_degree_mv(supports: &[LatticePointSet]) -> Result<u64> {
    let a = ed_set(supports)?;
    let n = a.ambient_dim();
    let polys: Vec<Polytope> = (0..n)
        .map(|i| {
            let pts: Vec<Point> = a.points().iter().filter(|p| p[i] != 0).cloned().collect();
            Polytope::from_points(n, pts)
        })
        .collect::<Result<_>>()?;
    mixed_volume(&MixedVolumeQuery::from_list(n, &polys)?)
}

fn homogeneous(p: &LatticePointSet, d: Option<i64>) -> Result<i64> {
    let sums: Vec<i64> = p.points().iter().map(|x| x.iter().sum()).unique().collect();
    let [s] = sums.as_slice() else {
        return Err(Error::precondition("support is not homogeneous"));
    };
    if p.points().iter().flatten().any(|&x| x < 0) {
        return Err(Error::precondition("support has negative exponents"));
    }
    if let Some(d) = d {
        if d != *s {
            return Err(Error::precondition(format!("support has degree {s}, expected {d}")));
        }
    }
    if *s < 2 {
        return Err(Error::precondition("polar degree needs degree at least 2"));
    }
    Ok(*s)
}

fn unit_vectors(n: usize, with_origin: bool) -> Vec<Point> {
    let mut v: Vec<Point> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if with_origin {
        v.insert(0, vec![0; n]);
    }
    v
}

/// `P * Δ°` in `Z^{n+2}` with the Cayley coordinate first.
fn polar_cayley(p: &LatticePointSet) -> Result<LatticePointSet> {
    let n1 = p.ambient_dim();
    cayley_sum_leading(&[p.clone(), LatticePointSet::new(n1, unit_vectors(n1, false))?])
}

/// `ν_{C_d}(P * Δ°)` summed over the faces of `Δ°`; the apex contributes 0.
pub fn polar_cone_newton(p: &LatticePointSet) -> Result<i64> {
    let a = polar_cayley(p)?;
    let n1 = p.ambient_dim();
    let mut nu = 0i64;
    for k in 1..=n1 {
        for s in (0..n1).combinations(k) {
            let pts: Vec<Point> =
                a.points().iter().filter(|x| (0..n1).all(|j| s.contains(&j) || x[1 + j] == 0)).cloned().collect();
            let vol = Polytope::from_points(n1 + 1, pts)?.volume_in_dim(k) as i64;
            nu += if (n1 - k).is_multiple_of(2) { vol } else { -vol };
        }
    }
    Ok(nu)
}

/// `MV(D_0, ..., D_n)` with `D_i = conv((P * Δ°) ∖ E_i)`, computed in the
/// lattice of the hyperplane spanned by `P * Δ°`.
pub fn polar_degree_mv(p: &LatticePointSet) -> Result<u64> {
    let a = polar_cayley(p)?;
    let n1 = p.ambient_dim();
    let pts128: Vec<Vec<i128>> = a.points().iter().map(|x| to_i128(x)).collect();
    let span = SpanLattice::of_points(&pts128, n1 + 1);
    if span.dim != n1 {
        return Err(Error::invariant(format!("P * Δ° has dimension {} instead of {n1}", span.dim)));
    }
    let polys: Vec<Polytope> = (0..n1)
        .map(|i| {
            let pts: Vec<Point> = pts128
                .iter()
                .filter(|x| x[1 + i] != 0)
                .map(|x| crate::lattice::to_i64(&span.coords(x)))
                .collect::<Result<_>>()?;
            Polytope::from_points(n1, pts)
        })
        .collect::<Result<_>>()?;
    mixed_volume(&MixedVolumeQuery::from_list(n1, &polys)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarReport {
    pub pdeg: u64,
    pub checks: Vec<DegreeCheck>,
    pub all_equal: bool,
    pub flags: Vec<String>,
}

fn polar_flags(v: u64) -> Vec<String> {
    match v {
        0 => vec!["vanishing hessian candidate".to_string()],
        1 => vec!["homaloidal candidate".to_string()],
        _ => Vec::new(),
    }
}

/// `ν^e_O(P * Δ_{n+1})`, cross-checked against `ν_{R^{n+2}_{>=0}}` of the same
/// polytope, the reduced form `ν^e_{O_d}(P * Δ°) = ν_{C_d}(P * Δ°)` and the
/// mixed volume form.
pub fn polar_degree(p: &LatticePointSet, d: Option<i64>) -> Result<PolarReport> {
    let deg = homogeneous(p, d)?;
    let n1 = p.ambient_dim();
    let a = cayley_sum_leading(&[p.clone(), LatticePointSet::new(n1, unit_vectors(n1, true))?])?;
    let e = e_newton(&a, &ProjectivePoint::origin(n1 + 1))?;
    let orthant = ConeSpec::orthant(n1 + 1, n1 + 1).build()?;
    let nu = newton_number(&a.hull(), &orthant)?;
    if nu != e as i64 {
        return Err(Error::invariant(format!("polar degree forms disagree: ν^e = {e}, ν = {nu}")));
    }
    let reduced = polar_cayley(p)?;
    let mut apex = vec![Rational::new(deg.into(), (deg - 1).into())];
    apex.extend(std::iter::repeat_n(Rational::from_integer(0), n1));
    let od = ProjectivePoint::new(apex, Rational::from_integer(1))?;
    let checks = vec![
        DegreeCheck { name: "nu-orthant".into(), value: nu },
        DegreeCheck { name: "e-newton-apex".into(), value: e_newton(&reduced, &od)? as i64 },
        DegreeCheck { name: "nu-apex-cone".into(), value: polar_cone_newton(p)? },
        DegreeCheck { name: "mixed-volume".into(), value: polar_degree_mv(p)? as i64 },
    ];
    let all_equal = checks.iter().all(|c| c.value == e as i64);
    Ok(PolarReport { pdeg: e, checks, all_equal, flags: polar_flags(e) })
}

#[derive(Debug, Clone, Serialize)]
pub struct LstarBound {
    pub pdeg: u64,
    pub bound: i64,
    pub holds: bool,
}

/// `Pdeg <= ℓ*(conv(P) * Δ°; 1)`.
pub fn pdeg_lstar_bound(p: &LatticePointSet) -> Result<LstarBound> {
    let pdeg = polar_degree(p, None)?.pdeg;
    let bound = local_h_star(&polar_cayley(p)?.hull())?.eval(1);
    Ok(LstarBound { pdeg, bound, holds: pdeg as i64 <= bound })
}

impl DegreeQuery {
    pub fn evaluate(&self) -> Result<DegreeReport> {
        let u = || self.u.as_deref().ok_or_else(|| Error::precondition("this degree needs a weight u"));
        let (value, checks, flags) = match self.kind {
            DegreeKind::Mml => (mml_degree(&self.supports, u()?)?, Vec::new(), Vec::new()),
            DegreeKind::Ml => {
                let u = u()?;
                let v = ml_degree(&self.supports, u)?;
                let mv = ml_degree_mv(&self.supports, u)? as i64;
                (v, vec![DegreeCheck { name: "mixed-volume".into(), value: mv }], Vec::new())
            }
            DegreeKind::Ed => {
                let v = ed_degree(&self.supports)?;
                let mut checks = Vec::new();
                let d = base_dim(&self.supports)?;
                if self.supports.iter().all(|s| s.contains(&vec![0; d])) {
                    checks.push(DegreeCheck { name: "mixed-volume".into(), value: ed_degree_mv(&self.supports)? as i64 });
                }
                (v, checks, Vec::new())
            }
            DegreeKind::Polar => {
                let [p] = self.supports.as_slice() else {
                    return Err(Error::precondition("polar degree takes exactly one support"));
                };
                let r = polar_degree(p, self.homog_degree)?;
                (r.pdeg, r.checks, r.flags)
            }
        };
        let all_equal = checks.iter().all(|c| c.value == value as i64);
        Ok(DegreeReport { kind: self.kind, value, checks, all_equal, flags })
    }
}
