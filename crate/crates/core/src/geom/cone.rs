use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{dot, integer_kernel, primitive, rank, to_i128, SpanLattice};
use crate::poset::FinitePoset;

use super::Polytope;

/// Input form of a rational polyhedral cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ConeSpec {
    /// `R^orthant_{>=0} + R^{ambient - orthant}`, orthant coordinates first.
    Orthant { orthant: usize, ambient: usize },
    General {
        rays: Vec<Vec<i64>>,
        #[serde(default)]
        lineality: Vec<Vec<i64>>,
    },
}

impl ConeSpec {
    pub fn orthant(m: usize, n: usize) -> ConeSpec {
        ConeSpec::Orthant { orthant: m, ambient: n }
    }

    pub fn build(&self) -> Result<Cone> {
        Cone::new(self)
    }
}

/// A face of a cone, identified by the rays it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFace {
    pub rays: BitSet,
    /// Facets of the cone containing this face.
    pub facets: BitSet,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct Cone {
    spec: ConeSpec,
    ambient: usize,
    rays: Vec<Vec<i128>>,
    lineality: Vec<Vec<i128>>,
    span: SpanLattice,
    lineality_dim: usize,
    /// Ambient functionals `a` with `a . x >= 0` on the cone.
    functionals: Vec<Vec<i128>>,
    faces: Vec<ConeFace>,
    covers: Vec<Vec<usize>>,
}

impl Cone {
    pub fn new(spec: &ConeSpec) -> Result<Cone> {
        let (rays, lineality, ambient): (Vec<Vec<i64>>, Vec<Vec<i64>>, usize) = match spec {
            ConeSpec::Orthant { orthant, ambient } => {
                if orthant > ambient || *ambient == 0 {
                    return Err(Error::precondition(format!(
                        "orthant dimension {orthant} must be at most ambient dimension {ambient} >= 1"
                    )));
                }
                let e = |i: usize| (0..*ambient).map(|j| i64::from(i == j)).collect::<Vec<i64>>();
                ((0..*orthant).map(e).collect(), (*orthant..*ambient).map(e).collect(), *ambient)
            }
            ConeSpec::General { rays, lineality } => {
                let Some(n) = rays.iter().chain(lineality).map(|v| v.len()).next() else {
                    return Err(Error::precondition("cone needs at least one ray or lineality vector"));
                };
                if let Some(v) = rays.iter().chain(lineality).find(|v| v.len() != n) {
                    return Err(Error::DimensionMismatch(format!("generator {v:?} is not in dimension {n}")));
                }
                if n == 0 {
                    return Err(Error::precondition("cone ambient dimension must be positive"));
                }
                if rays.iter().any(|r| r.iter().all(|&x| x == 0)) {
                    return Err(Error::precondition("zero ray in cone generators"));
                }
                (rays.clone(), lineality.clone(), n)
            }
        };
        let rays: Vec<Vec<i128>> = rays.iter().map(|r| to_i128(r)).collect();
        let lin_all: Vec<Vec<i128>> = lineality.iter().map(|r| to_i128(r)).collect();
        let gens: Vec<Vec<i128>> = rays.iter().chain(&lin_all).cloned().collect();
        let span = SpanLattice::of_directions(&gens, ambient, vec![0; ambient]);
        let d = span.dim;
        // independent lineality basis
        let mut lineality: Vec<Vec<i128>> = Vec::new();
        for l in &lin_all {
            let mut cand = lineality.clone();
            cand.push(l.clone());
            if rank(&cand, ambient) == cand.len() {
                lineality = cand;
            }
        }
        let ld = lineality.len();
        let coords = |v: &[i128]| span.coords(v);
        let rays_y: Vec<Vec<i128>> = rays.iter().map(|r| coords(r)).collect();
        let lin_y: Vec<Vec<i128>> = lineality.iter().map(|r| coords(r)).collect();
        let lin_all_y: Vec<Vec<i128>> = lin_all.iter().map(|r| coords(r)).collect();

        let mut normals: Vec<Vec<i128>> = Vec::new();
        if d > ld {
            for pick in (0..rays.len()).combinations(d - 1 - ld) {
                let mut rows = lin_y.clone();
                rows.extend(pick.iter().map(|&i| rays_y[i].clone()));
                let ker = integer_kernel(&rows, d);
                if ker.len() != 1 {
                    continue;
                }
                let mut a = primitive(&ker[0]);
                let vals: Vec<i128> = rays_y.iter().map(|r| dot(&a, r)).collect();
                if vals.iter().any(|&v| v > 0) && vals.iter().any(|&v| v < 0) {
                    continue;
                }
                if lin_all_y.iter().any(|l| dot(&a, l) != 0) {
                    continue;
                }
                if vals.iter().all(|&v| v <= 0) {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
                if vals.iter().all(|&v| v == 0) {
                    continue;
                }
                if !normals.contains(&a) {
                    normals.push(a);
                }
            }
        }
        // a functional on span coordinates pulled back to the ambient space
        let functionals: Vec<Vec<i128>> = normals
            .iter()
            .map(|a| (0..ambient).map(|j| (0..d).map(|i| a[i] * span.transform[i][j]).sum()).collect())
            .collect();
        let ray_mask = |f: usize| -> BitSet { (0..rays.len()).filter(|&r| dot(&functionals[f], &rays[r]) == 0).collect() };
        let facet_masks: Vec<BitSet> = (0..functionals.len()).map(ray_mask).collect();

        let mut masks: Vec<BitSet> = vec![BitSet::full(rays.len())];
        let mut frontier = masks.clone();
        while let Some(s) = frontier.pop() {
            for fm in &facet_masks {
                let t = s.intersection(fm);
                if !masks.contains(&t) {
                    masks.push(t.clone());
                    frontier.push(t);
                }
            }
        }
        let face_dim = |m: &BitSet| -> usize {
            let mut v = lineality.clone();
            v.extend(m.iter().map(|i| rays[i].clone()));
            rank(&v, ambient)
        };
        let mut faces: Vec<ConeFace> = masks
            .into_iter()
            .map(|m| {
                let facets = (0..functionals.len()).filter(|&f| m.is_subset(&facet_masks[f])).collect();
                ConeFace { dim: face_dim(&m), facets, rays: m }
            })
            .collect();
        faces.sort_by(|a, b| {
            a.dim.cmp(&b.dim).then_with(|| a.rays.iter().collect::<Vec<_>>().cmp(&b.rays.iter().collect()))
        });
        if faces[0].dim != ld {
            return Err(Error::precondition("cone is not pointed modulo its lineality space"));
        }
        let covers = faces
            .iter()
            .map(|f| {
                faces
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.dim + 1 == f.dim && g.rays.is_subset(&f.rays))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(Cone { spec: spec.clone(), ambient, rays, lineality, span, lineality_dim: ld, functionals, faces, covers })
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.span.dim
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    /// `(m, n)` when the cone was given in orthant-product form.
    pub fn orthant_form(&self) -> Option<(usize, usize)> {
        match self.spec {
            ConeSpec::Orthant { orthant, ambient } => Some((orthant, ambient)),
            ConeSpec::General { .. } => None,
        }
    }

    pub fn faces(&self) -> &[ConeFace] {
        &self.faces
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn face_facets(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn functionals(&self) -> &[Vec<i128>] {
        &self.functionals
    }

    pub fn rays(&self) -> &[Vec<i128>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<i128>] {
        &self.lineality
    }

    /// True if the face poset is a boolean lattice.
    pub fn is_boolean(&self) -> bool {
        let k = self.dim() - self.lineality_dim;
        self.functionals.len() == k && self.faces.len() == 1 << k
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let w = to_i128(x);
        x.len() == self.ambient && self.span.contains(&w) && self.functionals.iter().all(|a| dot(a, &w) >= 0)
    }

    pub fn contains_polytope(&self, p: &Polytope) -> bool {
        p.ambient_dim() == self.ambient && p.vertices().iter().all(|v| self.contains(v))
    }

    /// True if `x` (assumed in the cone) lies in face `f`.
    pub fn face_contains(&self, f: usize, x: &[i64]) -> bool {
        let w = to_i128(x);
        self.faces[f].facets.iter().all(|a| dot(&self.functionals[a], &w) == 0)
    }

    /// Smallest face containing all the given points of the cone.
    pub fn minimal_face_containing(&self, pts: &[Vec<i64>]) -> usize {
        self.faces
            .iter()
            .enumerate()
            .find(|(i, _)| pts.iter().all(|p| self.face_contains(*i, p)))
            .map(|(i, _)| i)
            .expect("top face contains the cone")
    }

    /// Vertex indices of `P ∩ F` for a polytope contained in the cone.
    pub fn polytope_face(&self, p: &Polytope, f: usize) -> BitSet {
        (0..p.vertices().len()).filter(|&v| self.face_contains(f, &p.vertices()[v])).collect()
    }

    /// Face poset ranked by dimension; the lineality space is the bottom.
    pub fn face_poset(&self) -> FinitePoset {
        let labels = self
            .faces
            .iter()
            .map(|f| {
                let v: Vec<String> = f.rays.iter().map(|i| i.to_string()).collect();
                format!("<{}>", v.join(","))
            })
            .collect();
        let mut covers = Vec::new();
        for (i, c) in self.covers.iter().enumerate() {
            for &j in c {
                covers.push((j, i));
            }
        }
        let ranks = self.faces.iter().map(|f| f.dim as i64).collect();
        FinitePoset::from_covers(labels, &covers, Some(ranks)).expect("cone face lattice is a valid poset")
    }

    /// For each cone face, `dim(P ∩ F) == dim F`. Errors when `P ⊄ C`.
    pub fn is_convenient(&self, p: &Polytope) -> Result<bool> {
        if !self.contains_polytope(p) {
            return Err(Error::precondition("polytope is not contained in the cone"));
        }
        Ok((0..self.faces.len()).all(|f| {
            let vs = self.polytope_face(p, f);
            let pts: Vec<Vec<i64>> = vs.iter().map(|v| p.vertices()[v].clone()).collect();
            super::affine_dim_signed(&pts) == self.faces[f].dim as isize
        }))
    }
}

pub fn is_convenient(p: &Polytope, c: &Cone) -> Result<bool> {
    c.is_convenient(p)
}
