//! Euler obstructions of finite lattice sets and e-Newton numbers.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Cone, LatticeMap, LatticePointSet, Point, Polytope};
use crate::lattice::{rank, to_i128, SpanLattice};
use crate::mixed_volume::{mixed_volume, MixedVolumeQuery};
use crate::polynomial::Rational;

/// `A ∩ F` for a face `F` of `conv A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceOfSet {
    /// Indices into the sorted points of the parent set.
    pub members: Vec<usize>,
    pub points: Vec<Point>,
    pub dim: usize,
    pub volume: u64,
}

impl FaceOfSet {
    fn contains_all(&self, other: &FaceOfSet) -> bool {
        other.members.iter().all(|m| self.members.binary_search(m).is_ok())
    }

    fn directions(&self) -> Vec<Vec<i128>> {
        let p0 = &self.points[0];
        self.points[1..].iter().map(|p| p.iter().zip(p0).map(|(&a, &b)| a as i128 - b as i128).collect()).collect()
    }
}

/// Faces of a finite set, including the set itself, ordered by dimension.
pub fn faces_of_set(a: &LatticePointSet) -> Vec<FaceOfSet> {
    let hull = a.hull();
    let mut out: Vec<FaceOfSet> = (1..hull.num_faces())
        .map(|f| {
            let fp = hull.face_polytope(f);
            let members: Vec<usize> = (0..a.len()).filter(|&i| fp.contains(&a.points()[i])).collect();
            let points = members.iter().map(|&i| a.points()[i].clone()).collect();
            FaceOfSet { members, points, dim: fp.dim(), volume: fp.lattice_volume() }
        })
        .collect();
    out.sort_by(|x, y| x.dim.cmp(&y.dim).then_with(|| x.members.cmp(&y.members)));
    out
}

/// Homogeneous rational point `(x_0 : ... : x_{n-1} : w)`; `w = 0` is a
/// direction at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: Vec<i128>,
    w: i128,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>, w: Rational) -> Result<Self> {
        if w == Rational::from_integer(0) && coords.iter().all(|c| *c == Rational::from_integer(0)) {
            return Err(Error::precondition("projective point with all coordinates zero"));
        }
        let l = coords.iter().chain(std::iter::once(&w)).fold(1i128, |l, c| l.lcm(c.denom()));
        let int = |c: &Rational| (c * Rational::from_integer(l)).to_integer();
        let mut coords: Vec<i128> = coords.iter().map(int).collect();
        let mut w = int(&w);
        let g = coords.iter().fold(w.abs(), |g, c| g.gcd(c));
        coords.iter_mut().for_each(|c| *c /= g);
        w /= g;
        if w < 0 {
            coords.iter_mut().for_each(|c| *c = -*c);
            w = -w;
        }
        Ok(ProjectivePoint { coords, w })
    }

    pub fn finite(x: &[i64]) -> Self {
        ProjectivePoint { coords: to_i128(x), w: 1 }
    }

    pub fn origin(n: usize) -> Self {
        Self::finite(&vec![0; n])
    }

    pub fn at_infinity(direction: &[i64]) -> Result<Self> {
        Self::new(direction.iter().map(|&x| Rational::from_integer(x as i128)).collect(), Rational::from_integer(0))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.w != 0
    }

    /// Integer coordinates of a finite point with integral affine coordinates.
    pub fn integral_point(&self) -> Option<Point> {
        if self.w == 0 || self.coords.iter().any(|c| c % self.w != 0) {
            return None;
        }
        self.coords.iter().map(|c| i64::try_from(c / self.w).ok()).collect()
    }

    /// The affine span of `pts` contains the point (or, at infinity, the
    /// linear span of `pts - pts` contains the direction).
    pub fn in_affine_span(&self, pts: &[Point]) -> bool {
        let p0 = to_i128(&pts[0]);
        let mut dirs: Vec<Vec<i128>> =
            pts[1..].iter().map(|p| p.iter().zip(&p0).map(|(&a, &b)| a as i128 - b).collect()).collect();
        let r = rank(&dirs, self.dim());
        dirs.push(self.coords.iter().zip(&p0).map(|(x, b)| x - self.w * b).collect());
        rank(&dirs, self.dim()) == r
    }

    pub fn translate(&self, v: &[i64]) -> ProjectivePoint {
        ProjectivePoint { coords: self.coords.iter().zip(v).map(|(x, &t)| x + self.w * t as i128).collect(), w: self.w }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().chain(std::iter::once(&self.w)).map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(":"))
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<Rational> = s
            .split(':')
            .map(|p| p.trim().parse::<Rational>().map_err(|e| Error::precondition(format!("bad coordinate {p:?}: {e}"))))
            .collect::<Result<_>>()?;
        if parts.len() < 2 {
            return Err(Error::precondition("projective point needs at least two coordinates"));
        }
        let (w, xs) = parts.split_last().unwrap();
        ProjectivePoint::new(xs.to_vec(), *w)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// c-numbers and Euler obstructions of a finite set. `c[i][j]` is
/// `c^{F_i}_{F_j}` (zero unless `F_i ⊆ F_j`), `e = c^{-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionTable {
    pub faces: Vec<FaceOfSet>,
    pub c: Vec<Vec<i64>>,
    pub e: Vec<Vec<i64>>,
}

/// `Vol_Z conv π(big) - Vol_Z conv π(big ∖ small)` along the span of `small`.
fn c_number_faces(small: &FaceOfSet, big: &FaceOfSet, n: usize) -> Result<i64> {
    if small.members == big.members {
        return Ok(1);
    }
    if !big.contains_all(small) {
        return Ok(0);
    }
    let dirs: Vec<Vec<i64>> = small.directions().iter().map(|d| d.iter().map(|&x| x as i64).collect()).collect();
    let map = LatticeMap::quotient_along(n, &dirs)?;
    let img: Vec<Vec<i128>> = big.points.iter().map(|p| to_i128(&map.apply(p))).collect();
    let sl = SpanLattice::of_points(&img, map.target_dim());
    let k = big.dim - small.dim;
    let coords = |pts: Vec<&Vec<i128>>| -> Result<Vec<Point>> {
        pts.into_iter().map(|p| crate::lattice::to_i64(&sl.coords(p))).collect()
    };
    let all = coords(img.iter().collect())?;
    let rest = coords(img.iter().zip(&big.members).filter(|(_, m)| small.members.binary_search(m).is_err()).map(|x| x.0).collect())?;
    let vol = Polytope::from_points(sl.dim, all)?.volume_in_dim(k) as i64;
    let sub = if rest.is_empty() { 0 } else { Polytope::from_points(sl.dim, rest)?.volume_in_dim(k) as i64 };
    Ok(vol - sub)
}

/// `c^{A'}_A` for a subset `A'` of `A`; zero if `A'` is not a face.
pub fn c_number(a: &LatticePointSet, face: &LatticePointSet) -> Result<i64> {
    let faces = faces_of_set(a);
    let whole = faces.last().expect("nonempty set").clone();
    match faces.iter().find(|f| f.points == face.points()) {
        Some(f) => c_number_faces(f, &whole, a.ambient_dim()),
        None => Ok(0),
    }
}

impl ObstructionTable {
    pub fn compute(a: &LatticePointSet) -> Result<Self> {
        Self::compute_with_fault(a, false)
    }

    /// With `flip_sign`, the stored off-diagonal c-numbers are negated after
    /// inversion (harness self-test only).
    pub fn compute_with_fault(a: &LatticePointSet, flip_sign: bool) -> Result<Self> {
        let faces = faces_of_set(a);
        let m = faces.len();
        let n = a.ambient_dim();
        let mut c = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in i..m {
                c[i][j] = c_number_faces(&faces[i], &faces[j], n)?;
            }
        }
        // back substitution: Σ_k c[i][k] e[k][j] = δ_ij, upper triangular
        let mut e = vec![vec![0i64; m]; m];
        for j in 0..m {
            e[j][j] = 1;
            for i in (0..j).rev() {
                let s: i64 = (i + 1..=j).map(|k| c[i][k] * e[k][j]).sum();
                e[i][j] = -s;
            }
        }
        if flip_sign {
            for (i, row) in c.iter_mut().enumerate() {
                row.iter_mut().skip(i + 1).for_each(|x| *x = -*x);
            }
        }
        Ok(ObstructionTable { faces, c, e })
    }

    pub fn whole(&self) -> usize {
        self.faces.len() - 1
    }

    /// `e^{F}_A` for every face `F`.
    pub fn obstructions(&self) -> Vec<i64> {
        let w = self.whole();
        (0..self.faces.len()).map(|i| self.e[i][w]).collect()
    }

    /// Faces whose affine span contains `q`.
    pub fn through(&self, q: &ProjectivePoint) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| q.in_affine_span(&self.faces[i].points)).collect()
    }

    /// `ν^e_Q(F ∩ A)` for the face with index `j`, using that the faces of
    /// `F ∩ A` are the faces of `A` inside `F` with the same c-numbers.
    pub fn e_newton_of_face(&self, j: usize, q: &ProjectivePoint) -> i64 {
        self.through(q)
            .into_iter()
            .filter(|&i| self.faces[j].contains_all(&self.faces[i]))
            .map(|i| self.e[i][j] * self.faces[i].volume as i64)
            .sum()
    }

    /// `Vol_Z(conv A) = Σ_{Γ ∋ Q} c^Γ_A ν^e_Q(Γ ∩ A)`.
    pub fn inversion_identity(&self, q: &ProjectivePoint) -> (i64, i64) {
        let w = self.whole();
        let rhs = self.through(q).into_iter().map(|j| self.c[j][w] * self.e_newton_of_face(j, q)).sum();
        (self.faces[w].volume as i64, rhs)
    }
}

pub fn euler_obstructions(a: &LatticePointSet) -> Result<ObstructionTable> {
    ObstructionTable::compute(a)
}

fn check_dim(a: &LatticePointSet, q: &ProjectivePoint) -> Result<()> {
    if q.dim() != a.ambient_dim() {
        return Err(Error::DimensionMismatch(format!("point in dimension {}, set in {}", q.dim(), a.ambient_dim())));
    }
    Ok(())
}

/// `ν^e_Q(A)` without the sign check.
pub fn e_newton_signed(a: &LatticePointSet, q: &ProjectivePoint) -> Result<i64> {
    check_dim(a, q)?;
    let t = ObstructionTable::compute(a)?;
    Ok(t.e_newton_of_face(t.whole(), q))
}

/// `ν^e_Q(A) = Σ_{Γ : Q ∈ aff Γ} e^Γ_A Vol_Z(Γ)`.
pub fn e_newton(a: &LatticePointSet, q: &ProjectivePoint) -> Result<u64> {
    let v = e_newton_signed(a, q)?;
    u64::try_from(v).map_err(|_| Error::invariant(format!("e-Newton number {v} is negative")))
}

/// `ν^e_O(A) = 0`, after translating by a member when `O ∉ A`.
pub fn is_dual_defective(a: &LatticePointSet) -> Result<bool> {
    let n = a.ambient_dim();
    let o = ProjectivePoint::origin(n);
    let at = |v: &Point| -> Result<i64> {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        e_newton_signed(&a.translate(&neg), &o)
    };
    let zero = vec![0; n];
    let base = if a.contains(&zero) { e_newton_signed(a, &o)? } else { at(&a.points()[0])? };
    let other = at(a.points().last().unwrap())?;
    if base != other {
        return Err(Error::invariant(format!("ν^e at the origin changed under translation: {base} vs {other}")));
    }
    Ok(base == 0)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnewtonMvReport {
    pub e_newton: i64,
    pub mixed_volume: u64,
    pub holds: bool,
}

/// `ν^e_Q(A) = MV(conv(A∖E_1), ..., conv(A∖E_m), P, ..., P)` for a cone with
/// boolean face poset and facets `E_i`.
pub fn e_newton_mv_check(a: &LatticePointSet, c: &Cone, q: &ProjectivePoint) -> Result<EnewtonMvReport> {
    check_dim(a, q)?;
    let n = a.ambient_dim();
    if c.ambient_dim() != n {
        return Err(Error::DimensionMismatch("cone and set dimensions differ".into()));
    }
    if !c.is_boolean() {
        return Err(Error::precondition("the mixed volume formula needs a boolean face poset"));
    }
    if a.points().iter().any(|p| !c.contains(p)) {
        return Err(Error::precondition("set is not contained in the cone"));
    }
    if !q.is_finite() {
        return Err(Error::precondition("the point must be finite"));
    }
    for f in c.functionals() {
        if f.iter().zip(&q.coords).map(|(a, x)| a * x).sum::<i128>() != 0 {
            return Err(Error::precondition("the point is not on every facet of the cone"));
        }
    }
    let t = ObstructionTable::compute(a)?;
    for i in t.through(q) {
        if !span_is_cone_face(&t.faces[i].points, c) {
            return Err(Error::precondition(format!(
                "the affine span of face {:?} is not a face of the cone",
                t.faces[i].points
            )));
        }
    }
    let e = t.e_newton_of_face(t.whole(), q);
    let p = a.hull();
    let mut terms: Vec<(Polytope, usize)> = Vec::new();
    for f in c.functionals() {
        let rest: Vec<Point> = a
            .points()
            .iter()
            .filter(|x| f.iter().zip(x.iter()).map(|(a, &b)| a * b as i128).sum::<i128>() != 0)
            .cloned()
            .collect();
        if rest.is_empty() {
            return Err(Error::precondition("the set lies in a facet of the cone"));
        }
        terms.push((Polytope::from_points(n, rest)?, 1));
    }
    let copies = n - terms.len();
    if copies > 0 {
        terms.push((p, copies));
    }
    let mv = mixed_volume(&MixedVolumeQuery::new(n, terms)?)?;
    Ok(EnewtonMvReport { e_newton: e, mixed_volume: mv, holds: e == mv as i64 })
}

fn span_is_cone_face(pts: &[Point], c: &Cone) -> bool {
    let n = c.ambient_dim();
    let d = crate::geom::affine_dim_signed(pts) as usize;
    let mut with_origin = pts.to_vec();
    with_origin.push(vec![0; n]);
    if crate::geom::affine_dim_signed(&with_origin) as usize != d {
        return false;
    }
    (0..c.faces().len()).any(|f| c.faces()[f].dim == d && pts.iter().all(|p| c.face_contains(f, p)))
}

/// Smoothness of `A` at a face: `π(conv A) ∖ π(conv(A ∖ F))` is a unimodular
/// simplex. Checked as `c = 1` plus a unimodular simplicial tangent cone at
/// the image vertex, whose primitive edge generators are images of points.
pub fn is_smooth_at(a: &LatticePointSet, f: &FaceOfSet, whole: &FaceOfSet) -> Result<bool> {
    let n = a.ambient_dim();
    if f.members == whole.members {
        return Ok(true);
    }
    if c_number_faces(f, whole, n)? != 1 {
        return Ok(false);
    }
    let dirs: Vec<Vec<i64>> = f.directions().iter().map(|d| d.iter().map(|&x| x as i64).collect()).collect();
    let map = LatticeMap::quotient_along(n, &dirs)?;
    let img: Vec<Vec<i128>> = whole.points.iter().map(|p| to_i128(&map.apply(p))).collect();
    let sl = SpanLattice::of_points(&img, map.target_dim());
    let ys: Vec<Point> = img.iter().map(|p| crate::lattice::to_i64(&sl.coords(p))).collect::<Result<_>>()?;
    let apex = ys[whole.members.iter().position(|m| f.members.contains(m)).unwrap()].clone();
    let hull = Polytope::from_points(sl.dim, ys.clone())?;
    let Some(v) = hull.vertices().iter().position(|x| *x == apex) else { return Ok(false) };
    let vmask = crate::bitset::BitSet::from_indices([v]);
    let vi = hull.face_index(&vmask).expect("vertex face");
    let edges: Vec<usize> = (0..hull.num_faces()).filter(|&e| hull.faces()[e].dim == 1 && hull.faces()[vi].vertices.is_subset(&hull.faces()[e].vertices)).collect();
    if edges.len() != sl.dim {
        return Ok(false);
    }
    let mut gens: Vec<Vec<i128>> = Vec::new();
    for e in edges {
        let other = hull.face_points(e).into_iter().find(|x| *x != apex).unwrap();
        let d: Vec<i128> = other.iter().zip(&apex).map(|(&a, &b)| (a - b) as i128).collect();
        let g = crate::lattice::primitive(&d);
        let tip: Point = apex.iter().zip(&g).map(|(&a, &b)| a + b as i64).collect();
        if !ys.contains(&tip) {
            return Ok(false);
        }
        gens.push(g);
    }
    Ok(crate::lattice::determinant(&gens).abs() == 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnewtonSmoothReport {
    pub e_newton: i64,
    /// `ν` over the cone with vertex `Q` spanned by `A`.
    pub newton: i64,
    pub holds: bool,
}

/// `ν^e_Q(A) = ν_{C_Q}(conv A)` when `A` is smooth at every face through `Q`.
/// The Newton number of `C_Q` is summed over the faces `Γ` of `conv A` with
/// `Q ∈ aff Γ`, which are exactly the `P ∩ F` of full dimension in `F`.
pub fn e_newton_smooth_check(a: &LatticePointSet, q: &ProjectivePoint) -> Result<EnewtonSmoothReport> {
    check_dim(a, q)?;
    let t = ObstructionTable::compute(a)?;
    let whole = &t.faces[t.whole()];
    let through = t.through(q);
    for &i in &through {
        if !is_smooth_at(a, &t.faces[i], whole)? {
            return Err(Error::precondition(format!("the set is not smooth at face {:?}", t.faces[i].points)));
        }
    }
    let e = t.e_newton_of_face(t.whole(), q);
    let cone_dim = if q.in_affine_span(&whole.points) { whole.dim } else { whole.dim + 1 };
    let newton = through
        .iter()
        .map(|&i| {
            let v = t.faces[i].volume as i64;
            if (cone_dim - t.faces[i].dim) % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum();
    Ok(EnewtonSmoothReport { e_newton: e, newton, holds: e == newton })
}
