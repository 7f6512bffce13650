use std::collections::HashSet;
use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{to_i128, SpanLattice};
use crate::poset::FinitePoset;

use super::hull::facets_full_dim;
use super::{LatticePointSet, Point};

/// Facet inequality `normal . y <= offset` in span-lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i128>,
    pub offset: i128,
    pub vertices: BitSet,
}

/// A face, stored as the set of vertex indices it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub vertices: BitSet,
    pub dim: isize,
}

/// A lattice polytope with its full face lattice.
///
/// Vertices are sorted lexicographically. Faces are sorted by dimension,
/// then by vertex list; index 0 is the empty face and the last index is the
/// polytope itself.
#[derive(Debug)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<Point>,
    span: SpanLattice,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    /// For each face, the indices of the faces it covers.
    covers: Vec<Vec<usize>>,
    volumes: OnceLock<Vec<u64>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            ambient: self.ambient,
            vertices: self.vertices.clone(),
            span: self.span.clone(),
            facets: self.facets.clone(),
            faces: self.faces.clone(),
            covers: self.covers.clone(),
            volumes: OnceLock::new(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    pub fn from_set(set: &LatticePointSet) -> Polytope {
        Self::build(set.ambient_dim(), set.points())
    }

    pub fn from_points(ambient: usize, mut points: Vec<Point>) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::precondition("polytope needs at least one point"));
        }
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("points must have {ambient} coordinates")));
        }
        points.sort();
        points.dedup();
        Ok(Self::build(ambient, &points))
    }

    /// `points` must be sorted, deduplicated and nonempty.
    fn build(ambient: usize, points: &[Point]) -> Polytope {
        let wide: Vec<Vec<i128>> = points.iter().map(|p| to_i128(p)).collect();
        let span = SpanLattice::of_points(&wide, ambient);
        let d = span.dim;
        if d == 0 {
            let vertices = vec![points[0].clone()];
            let faces = vec![
                Face { vertices: BitSet::new(), dim: -1 },
                Face { vertices: BitSet::from_indices([0]), dim: 0 },
            ];
            return Polytope {
                ambient,
                vertices,
                span,
                facets: Vec::new(),
                faces,
                covers: vec![vec![], vec![0]],
                volumes: OnceLock::new(),
            };
        }
        let ys: Vec<Vec<i128>> = wide.iter().map(|p| span.coords(p)).collect();
        let raw = facets_full_dim(&ys, d);
        let vertex_idx: Vec<usize> = (0..points.len())
            .filter(|&i| {
                let mut meet: Option<BitSet> = None;
                for f in raw.iter().filter(|f| f.on.contains(i)) {
                    meet = Some(match meet {
                        None => f.on.clone(),
                        Some(m) => m.intersection(&f.on),
                    });
                }
                meet.is_some_and(|m| m.len() == 1)
            })
            .collect();
        let mut position = vec![usize::MAX; points.len()];
        for (k, &i) in vertex_idx.iter().enumerate() {
            position[i] = k;
        }
        let vertices: Vec<Point> = vertex_idx.iter().map(|&i| points[i].clone()).collect();
        let facets: Vec<Facet> = raw
            .into_iter()
            .map(|f| Facet {
                normal: f.normal,
                offset: f.offset,
                vertices: f.on.iter().filter(|&i| position[i] != usize::MAX).map(|i| position[i]).collect(),
            })
            .collect();
        let vy: Vec<Vec<i128>> = vertex_idx.iter().map(|&i| ys[i].clone()).collect();
        let (faces, covers) = face_closure(&facets, &vy, d);
        Polytope { ambient, vertices, span, facets, faces, covers, volumes: OnceLock::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.span.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> LatticePointSet {
        LatticePointSet::new(self.ambient, self.vertices.clone()).expect("vertices form a valid set")
    }

    pub fn span(&self) -> &SpanLattice {
        &self.span
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Index of the polytope itself in [`Polytope::faces`].
    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// Faces covered by face `i` (its facets).
    pub fn face_facets(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn face_points(&self, i: usize) -> Vec<Point> {
        self.faces[i].vertices.iter().map(|v| self.vertices[v].clone()).collect()
    }

    /// Face `i` as a polytope in the same ambient space. Panics on the empty face.
    pub fn face_polytope(&self, i: usize) -> Polytope {
        Polytope::from_points(self.ambient, self.face_points(i)).expect("nonempty face")
    }

    /// Index of the face with exactly the given vertex set.
    pub fn face_index(&self, vertices: &BitSet) -> Option<usize> {
        self.faces.iter().position(|f| &f.vertices == vertices)
    }

    /// Smallest face containing all listed vertices.
    pub fn smallest_face_containing(&self, vertices: &BitSet) -> usize {
        self.faces.iter().position(|f| vertices.is_subset(&f.vertices)).expect("top face contains everything")
    }

    /// Smallest face containing the given points of the polytope; the empty
    /// face for no points.
    pub fn minimal_face_containing_points(&self, pts: &[Point]) -> usize {
        if pts.is_empty() {
            return 0;
        }
        let ys: Vec<Vec<i128>> = pts.iter().map(|v| self.span.coords(&to_i128(v))).collect();
        let mut verts = BitSet::full(self.vertices.len());
        for f in &self.facets {
            if ys.iter().all(|y| crate::lattice::dot(&f.normal, y) == f.offset) {
                verts = verts.intersection(&f.vertices);
            }
        }
        self.face_index(&verts).expect("intersection of facets is a face")
    }

    /// Face poset with the empty face, ranked by `dim + 1`. Labels are
    /// vertex index lists.
    pub fn face_poset(&self) -> FinitePoset {
        let labels = self
            .faces
            .iter()
            .map(|f| {
                let v: Vec<String> = f.vertices.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", v.join(","))
            })
            .collect();
        let mut covers = Vec::new();
        for (i, c) in self.covers.iter().enumerate() {
            for &j in c {
                covers.push((j, i));
            }
        }
        let ranks = self.faces.iter().map(|f| f.dim as i64 + 1).collect();
        FinitePoset::from_covers(labels, &covers, Some(ranks)).expect("face lattice is a valid poset")
    }

    /// Normalized lattice volume in the lattice of the affine span.
    pub fn lattice_volume(&self) -> u64 {
        self.face_volumes()[self.top()]
    }

    pub fn face_volume(&self, i: usize) -> u64 {
        self.face_volumes()[i]
    }

    /// Lattice volume of every face, in its own span lattice.
    pub fn face_volumes(&self) -> &[u64] {
        self.volumes.get_or_init(|| {
            let mut vols = vec![0u64; self.faces.len()];
            for (i, f) in self.faces.iter().enumerate() {
                vols[i] = match f.dim {
                    -1 => 0,
                    0 => 1,
                    _ => {
                        let apex = f.vertices.first().expect("nonempty face");
                        let a = to_i128(&self.vertices[apex]);
                        let mut total: u128 = 0;
                        for &g in &self.covers[i] {
                            if self.faces[g].vertices.contains(apex) {
                                continue;
                            }
                            let pts: Vec<Vec<i128>> =
                                self.faces[g].vertices.iter().map(|v| to_i128(&self.vertices[v])).collect();
                            let sl = SpanLattice::of_points(&pts, self.ambient);
                            total += sl.lattice_distance(&a).unsigned_abs() * vols[g] as u128;
                        }
                        u64::try_from(total).expect("volume fits in u64")
                    }
                };
            }
            vols
        })
    }

    /// Volume in a fixed dimension: the lattice volume if `dim P == k`, else 0.
    pub fn volume_in_dim(&self, k: usize) -> u64 {
        if self.dim() == k {
            self.lattice_volume()
        } else {
            0
        }
    }

    /// True if `p` lies in the polytope.
    pub fn contains(&self, p: &[i64]) -> bool {
        let w = to_i128(p);
        if !self.span.contains(&w) {
            return false;
        }
        let y = self.span.coords(&w);
        self.facets.iter().all(|f| crate::lattice::dot(&f.normal, &y) <= f.offset)
    }

    /// True if `p` lies in the relative interior.
    pub fn contains_in_relative_interior(&self, p: &[i64]) -> bool {
        let w = to_i128(p);
        if !self.span.contains(&w) {
            return false;
        }
        let y = self.span.coords(&w);
        self.facets.iter().all(|f| crate::lattice::dot(&f.normal, &y) < f.offset)
    }

    /// The vertex set after an integer affine map `x -> A x + b`.
    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Result<Polytope> {
        let pts: Vec<Point> = self.vertices.iter().map(f).collect();
        let dim = pts[0].len();
        Polytope::from_points(dim, pts)
    }
}

/// All faces as intersections of facets, plus the empty face and the top.
fn face_closure(facets: &[Facet], vy: &[Vec<i128>], d: usize) -> (Vec<Face>, Vec<Vec<usize>>) {
    let nv = vy.len();
    let mut seen: HashSet<BitSet> = HashSet::new();
    let top = BitSet::full(nv);
    seen.insert(top.clone());
    let mut frontier: Vec<BitSet> = Vec::new();
    for f in facets {
        if seen.insert(f.vertices.clone()) {
            frontier.push(f.vertices.clone());
        }
    }
    while let Some(s) = frontier.pop() {
        for f in facets {
            let t = s.intersection(&f.vertices);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    seen.insert(BitSet::new());
    let dim_of = |s: &BitSet| -> isize {
        let idx: Vec<usize> = s.iter().collect();
        let Some(&f0) = idx.first() else { return -1 };
        let diffs: Vec<Vec<i128>> =
            idx[1..].iter().map(|&i| vy[i].iter().zip(&vy[f0]).map(|(a, b)| a - b).collect()).collect();
        crate::lattice::rank(&diffs, d) as isize
    };
    let mut faces: Vec<Face> = seen.into_iter().map(|s| Face { dim: dim_of(&s), vertices: s }).collect();
    faces.sort_by(|a, b| {
        a.dim.cmp(&b.dim).then_with(|| a.vertices.iter().collect::<Vec<_>>().cmp(&b.vertices.iter().collect()))
    });
    let covers = faces
        .iter()
        .map(|f| {
            faces
                .iter()
                .enumerate()
                .filter(|(_, g)| g.dim == f.dim - 1 && g.vertices.is_subset(&f.vertices))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    (faces, covers)
}
