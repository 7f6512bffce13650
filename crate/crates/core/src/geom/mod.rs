//! Exact lattice geometry.

mod cone;
mod count;
pub(crate) mod hull;
mod map;
mod polytope;

pub use cone::{is_convenient, Cone, ConeFace, ConeSpec};
pub use count::{count_interior_points, count_lattice_points, count_lattice_points_box_scan, lattice_points};
pub use map::LatticeMap;
pub use polytope::{Face, Facet, Polytope};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Vec<i64>;

/// A finite, deduplicated set of lattice points, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePointSet {
    dim: usize,
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Point>,
}

impl<'de> Deserialize<'de> for LatticePointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPointSet::deserialize(d)?;
        LatticePointSet::new(raw.dim, raw.points).map_err(serde::de::Error::custom)
    }
}

impl LatticePointSet {
    pub fn new(dim: usize, mut points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::precondition("point set is empty"));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {p:?} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        points.sort();
        points.dedup();
        Ok(LatticePointSet { dim, points })
    }

    /// Builds a set from points of equal length.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or_else(|| Error::precondition("point set is empty"))?;
        Self::new(dim, points)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    pub fn translate(&self, v: &[i64]) -> LatticePointSet {
        let pts = self.points.iter().map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect()).collect();
        LatticePointSet::new(self.dim, pts).expect("translation keeps the set valid")
    }

    /// Affine dimension of the set.
    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.points)
    }

    pub fn hull(&self) -> Polytope {
        Polytope::from_set(self)
    }
}

/// Affine dimension of a point list; `-1` for the empty list.
pub fn affine_dim_signed(points: &[Point]) -> isize {
    if points.is_empty() {
        -1
    } else {
        affine_dim(points) as isize
    }
}

fn affine_dim(points: &[Point]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(&a, &b)| a as i128 - b as i128).collect())
        .collect();
    crate::lattice::rank(&diffs, first.len())
}

/// Convex hull of a point set.
pub fn convex_hull(pts: &LatticePointSet) -> Polytope {
    Polytope::from_set(pts)
}

/// Minkowski sum `P + Q`.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of polytopes in dimensions {} and {}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    let mut pts = Vec::with_capacity(p.vertices().len() * q.vertices().len());
    for a in p.vertices() {
        for b in q.vertices() {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    Polytope::from_points(p.ambient_dim(), pts)
}

/// `c P` for a nonnegative integer `c`; `0 P` is the origin.
pub fn dilate(p: &Polytope, c: i64) -> Polytope {
    let pts = p.vertices().iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
    Polytope::from_points(p.ambient_dim(), pts).expect("dilate keeps dimension")
}

/// Minkowski sum of a list of polytopes with multiplicities.
pub fn minkowski_combination(terms: &[(&Polytope, i64)], ambient: usize) -> Result<Polytope> {
    let mut acc = Polytope::from_points(ambient, vec![vec![0; ambient]])?;
    for (p, c) in terms {
        if *c == 0 {
            continue;
        }
        acc = minkowski_sum(&acc, &dilate(p, *c))?;
    }
    Ok(acc)
}

/// Cayley sum `P_0 * ... * P_k`: `P_i x {e_i}` in `Z^{n-k} + Z^k`
/// (base coordinates first, `e_0 = 0`).
pub fn cayley_sum(sets: &[LatticePointSet]) -> Result<LatticePointSet> {
    let Some(first) = sets.first() else {
        return Err(Error::precondition("Cayley sum of no sets"));
    };
    let base = first.ambient_dim();
    if let Some(s) = sets.iter().find(|s| s.ambient_dim() != base) {
        return Err(Error::DimensionMismatch(format!(
            "Cayley summands live in dimensions {base} and {}",
            s.ambient_dim()
        )));
    }
    let k = sets.len() - 1;
    let mut pts = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for p in s.points() {
            let mut q = p.clone();
            q.extend((1..=k).map(|j| i64::from(j == i)));
            pts.push(q);
        }
    }
    LatticePointSet::new(base + k, pts)
}

/// Cayley sum with the Cayley coordinates placed first.
pub fn cayley_sum_leading(sets: &[LatticePointSet]) -> Result<LatticePointSet> {
    let s = cayley_sum(sets)?;
    let k = sets.len() - 1;
    let base = s.ambient_dim() - k;
    let pts = s
        .points()
        .iter()
        .map(|p| p[base..].iter().chain(&p[..base]).copied().collect())
        .collect();
    LatticePointSet::new(s.ambient_dim(), pts)
}

/// Polytope flavour of [`cayley_sum`] taking vertex sets.
pub fn cayley_polytope(polys: &[&Polytope]) -> Result<Polytope> {
    let sets: Vec<LatticePointSet> = polys.iter().map(|p| p.vertex_set()).collect();
    Ok(cayley_sum(&sets)?.hull())
}

/// Image of `a` under `m`, in coordinates of the saturated lattice of the
/// image span.
pub fn project_set(a: &LatticePointSet, m: &LatticeMap) -> Result<LatticePointSet> {
    m.project(a)
}
