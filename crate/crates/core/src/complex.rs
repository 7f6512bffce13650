//! Lattice polyhedral complexes and the strong formal subdivisions they
//! induce: subdivisions of a polytope, and boundary subdivisions of
//! convenient polytopes in cones.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geom::{Cone, Point, Polytope};
use crate::poset::{agglutinate_sfs, FinitePoset, SubdivisionMap};

/// A finite polyhedral complex in a common lattice. Element 0 is the empty
/// cell; cells are ordered by dimension, then by vertex list.
#[derive(Debug, Clone)]
pub struct PolyhedralComplex {
    poset: FinitePoset,
    cells: Vec<Option<Polytope>>,
}

impl PolyhedralComplex {
    /// The complex generated by the given cells and all their faces.
    pub fn from_maximal_cells(ambient: usize, maximal: Vec<Vec<Point>>) -> Result<Self> {
        let mut keys: HashMap<Vec<Point>, Polytope> = HashMap::new();
        for pts in maximal {
            let p = Polytope::from_points(ambient, pts)?;
            for f in 1..p.num_faces() {
                let key = p.face_points(f);
                keys.entry(key).or_insert_with(|| p.face_polytope(f));
            }
        }
        let mut cells: Vec<(Vec<Point>, Polytope)> = keys.into_iter().collect();
        cells.sort_by(|a, b| a.1.dim().cmp(&b.1.dim()).then_with(|| a.0.cmp(&b.0)));
        let mut out: Vec<Option<Polytope>> = vec![None];
        let mut verts: Vec<Vec<Point>> = vec![Vec::new()];
        for (k, p) in cells {
            verts.push(k);
            out.push(Some(p));
        }
        Self::from_cells(verts, out)
    }

    /// All faces of a polytope as a complex.
    pub fn of_polytope(p: &Polytope) -> Self {
        let verts: Vec<Vec<Point>> = (0..p.num_faces()).map(|f| p.face_points(f)).collect();
        let cells = (0..p.num_faces()).map(|f| (f > 0).then(|| p.face_polytope(f))).collect();
        Self::from_cells(verts, cells).expect("face lattice is a complex")
    }

    fn from_cells(verts: Vec<Vec<Point>>, cells: Vec<Option<Polytope>>) -> Result<Self> {
        let mut index: HashMap<&Point, usize> = HashMap::new();
        for v in verts.iter().flatten() {
            let k = index.len();
            index.entry(v).or_insert(k);
        }
        let masks: Vec<BitSet> = verts.iter().map(|vs| vs.iter().map(|v| index[v]).collect()).collect();
        let n = verts.len();
        let mut rel = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && masks[a].is_subset(&masks[b]) {
                    rel.push((a, b));
                }
            }
        }
        let labels = verts
            .iter()
            .map(|vs| {
                let s: Vec<String> = vs.iter().map(|v| format!("{v:?}")).collect();
                format!("{{{}}}", s.join(""))
            })
            .collect();
        let ranks = cells.iter().map(|c| c.as_ref().map_or(0, |p| p.dim() as i64 + 1)).collect();
        let poset = FinitePoset::from_relations(labels, &rel, Some(ranks))
            .map_err(|e| Error::precondition(format!("cells do not form a polyhedral complex: {e}")))?;
        Ok(PolyhedralComplex { poset, cells })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn cells(&self) -> &[Option<Polytope>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_dim(&self, i: usize) -> isize {
        self.cells[i].as_ref().map_or(-1, |p| p.dim() as isize)
    }

    pub fn cell_vertices(&self, i: usize) -> &[Point] {
        self.cells[i].as_ref().map_or(&[], |p| p.vertices())
    }
}

/// A strong formal subdivision whose source elements carry lattice
/// polytopes (`None` for the empty cell).
#[derive(Debug, Clone)]
pub struct PolyhedralSubdivision {
    pub map: SubdivisionMap,
    pub cells: Vec<Option<Polytope>>,
}

impl PolyhedralSubdivision {
    pub fn new(map: SubdivisionMap, cells: Vec<Option<Polytope>>) -> Result<Self> {
        if cells.len() != map.source().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for {} source elements",
                cells.len(),
                map.source().len()
            )));
        }
        let src = map.source();
        let b = src.bottom().ok_or_else(|| Error::precondition("complex has no empty cell"))?;
        for (i, c) in cells.iter().enumerate() {
            let d = c.as_ref().map_or(-1, |p| p.dim() as i64);
            if src.rank_of(i) - src.rank_of(b) != d + 1 {
                return Err(Error::precondition(format!("cell {} has dimension {d} off its rank", src.label(i))));
            }
        }
        Ok(PolyhedralSubdivision { map, cells })
    }

    pub fn cell_dim(&self, i: usize) -> isize {
        self.cells[i].as_ref().map_or(-1, |p| p.dim() as isize)
    }

    /// Glues two boundary subdivisions along their common boundary cells,
    /// matched by vertex lists.
    pub fn agglutinate(&self, other: &PolyhedralSubdivision) -> Result<PolyhedralSubdivision> {
        let (Some(b1), Some(b2)) = (self.map.boundary(), other.map.boundary()) else {
            return Err(Error::precondition("agglutination needs boundary subdivisions"));
        };
        let key = |c: &Option<Polytope>| c.as_ref().map_or(Vec::new(), |p| p.vertices().to_vec());
        let pos2: HashMap<Vec<Point>, usize> = b2.iter().map(|j| (key(&other.cells[j]), j)).collect();
        let mut shared = Vec::new();
        for i in b1.iter() {
            let j = pos2
                .get(&key(&self.cells[i]))
                .ok_or_else(|| Error::precondition("boundary cells differ between the subdivisions"))?;
            shared.push((i, *j));
        }
        let (map, map2) = agglutinate_sfs(&self.map, &other.map, &shared)?;
        let mut cells = self.cells.clone();
        cells.resize(map.source().len(), None);
        for (j, &g) in map2.iter().enumerate() {
            if g >= self.cells.len() {
                cells[g] = other.cells[j].clone();
            }
        }
        PolyhedralSubdivision::new(map, cells)
    }
}

/// The subdivision `S -> [∅, P]` sending a cell to the smallest face of `P`
/// containing it.
pub fn subdivision_of_polytope(p: &Polytope, s: &PolyhedralComplex) -> Result<PolyhedralSubdivision> {
    let target = p.face_poset();
    let mut sigma = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let pts = s.cell_vertices(i);
        if pts.iter().any(|v| !p.contains(v)) {
            return Err(Error::precondition("cell leaves the polytope"));
        }
        sigma.push(p.minimal_face_containing_points(pts));
    }
    let map = SubdivisionMap::new(s.poset().clone(), target, sigma, None)?;
    PolyhedralSubdivision::new(map, s.cells().to_vec())
}

/// Facets of `P` not contained in any facet of the cone.
pub fn far_facets(p: &Polytope, c: &Cone) -> Vec<usize> {
    let top = p.top();
    p.face_facets(top)
        .iter()
        .copied()
        .filter(|&f| {
            let pts = p.face_points(f);
            !(0..c.functionals().len()).any(|k| {
                let a = &c.functionals()[k];
                pts.iter().all(|v| v.iter().zip(a).map(|(&x, &y)| x as i128 * y).sum::<i128>() == 0)
            })
        })
        .collect()
}

/// Indices of the cells of `s` lying in `∂_C P`, the empty cell included.
pub fn boundary_cells(p: &Polytope, c: &Cone, s: &PolyhedralComplex) -> BitSet {
    let far: Vec<Polytope> = far_facets(p, c).into_iter().map(|f| p.face_polytope(f)).collect();
    (0..s.len()).filter(|&i| far_on(&far, s.cell_vertices(i))).collect()
}

fn far_on(far: &[Polytope], pts: &[Point]) -> bool {
    pts.is_empty() || far.iter().any(|g| pts.iter().all(|v| g.contains(v)))
}

/// The boundary subdivision of a convenient polytope: cells map to the
/// minimal cone face containing them, in the upper copy of the twins-poset
/// for interior cells and in the lower copy for boundary cells.
pub fn boundary_subdivision(p: &Polytope, c: &Cone, s: &PolyhedralComplex) -> Result<PolyhedralSubdivision> {
    if !c.is_convenient(p)? {
        return Err(Error::precondition("polytope is not convenient in the cone"));
    }
    let cp = c.face_poset();
    let half = cp.len();
    let target = cp.twins()?;
    let boundary = boundary_cells(p, c, s);
    let sigma = (0..s.len())
        .map(|i| {
            let f = c.minimal_face_containing(s.cell_vertices(i));
            if boundary.contains(i) {
                f
            } else {
                half + f
            }
        })
        .collect();
    let map = SubdivisionMap::new(s.poset().clone(), target, sigma, Some(boundary))?;
    PolyhedralSubdivision::new(map, s.cells().to_vec())
}

/// [`boundary_subdivision`] for the trivial subdivision of `P` by its faces.
pub fn boundary_sfs(p: &Polytope, c: &Cone) -> Result<PolyhedralSubdivision> {
    boundary_subdivision(p, c, &PolyhedralComplex::of_polytope(p))
}

/// The self-agglutination `P ♯_{P_B} P -> C`.
pub fn self_agglutination(p: &Polytope, c: &Cone) -> Result<PolyhedralSubdivision> {
    let b = boundary_sfs(p, c)?;
    b.agglutinate(&b)
}
