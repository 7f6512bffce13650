//! Exact beneath-beyond convex hull for full-dimensional integer point sets.

use crate::bitset::BitSet;
use crate::lattice::{dot, integer_kernel, primitive, rank};

/// A facet `normal . y <= offset` together with the input points on it.
#[derive(Debug, Clone)]
pub(crate) struct RawFacet {
    pub normal: Vec<i128>,
    pub offset: i128,
    pub on: BitSet,
}

fn affine_dim(ys: &[Vec<i128>], idx: &BitSet, d: usize) -> isize {
    let pts: Vec<usize> = idx.iter().collect();
    let Some(&first) = pts.first() else { return -1 };
    let diffs: Vec<Vec<i128>> =
        pts[1..].iter().map(|&i| ys[i].iter().zip(&ys[first]).map(|(a, b)| a - b).collect()).collect();
    rank(&diffs, d) as isize
}

/// Hyperplane through the given points, oriented so that `reference`
/// lies strictly on the negative side. Returns `None` unless the points
/// span a hyperplane avoiding `reference`.
fn hyperplane_through(
    ys: &[Vec<i128>],
    pts: &[usize],
    d: usize,
    reference: &[i128],
) -> Option<(Vec<i128>, i128)> {
    let base = &ys[pts[0]];
    let diffs: Vec<Vec<i128>> =
        pts[1..].iter().map(|&i| ys[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let ker = integer_kernel(&diffs, d);
    if ker.len() != 1 {
        return None;
    }
    let mut normal = primitive(&ker[0]);
    let mut offset = dot(&normal, base);
    let r = dot(&normal, reference) - offset;
    if r == 0 {
        return None;
    }
    if r > 0 {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Some((normal, offset))
}

/// Facets of `conv(ys)`, where `ys` affinely spans `Z^d` (`d >= 1`). The
/// `on` masks refer to indices of `ys` and include non-vertex points.
pub(crate) fn facets_full_dim(ys: &[Vec<i128>], d: usize) -> Vec<RawFacet> {
    // Initial simplex by greedy rank growth.
    let mut simplex = vec![0usize];
    for i in 1..ys.len() {
        if simplex.len() == d + 1 {
            break;
        }
        let mut cand = BitSet::from_indices(simplex.iter().copied());
        cand.insert(i);
        if affine_dim(ys, &cand, d) == simplex.len() as isize {
            simplex.push(i);
        }
    }
    assert_eq!(simplex.len(), d + 1, "points do not span the ambient lattice");

    let mut accepted = BitSet::from_indices(simplex.iter().copied());
    let mut facets: Vec<RawFacet> = Vec::new();
    for (j, &omit) in simplex.iter().enumerate() {
        let pts: Vec<usize> = simplex.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &p)| p).collect();
        let (normal, offset) =
            hyperplane_through(ys, &pts, d, &ys[omit]).expect("simplex facet must be a hyperplane");
        facets.push(RawFacet { normal, offset, on: BitSet::from_indices(pts) });
    }

    for p in 0..ys.len() {
        if accepted.contains(p) {
            continue;
        }
        let vals: Vec<i128> = facets.iter().map(|f| dot(&f.normal, &ys[p]) - f.offset).collect();
        if vals.iter().all(|&v| v <= 0) {
            continue;
        }
        let mut new_facets: Vec<RawFacet> = Vec::new();
        for (fi, f) in facets.iter().enumerate() {
            if vals[fi] <= 0 {
                continue;
            }
            for (gi, g) in facets.iter().enumerate() {
                // coplanar neighbours absorb p below; only strictly beneath ones spawn facets
                if vals[gi] >= 0 {
                    continue;
                }
                let ridge = f.on.intersection(&g.on);
                if ridge.len() + 1 < d || affine_dim(ys, &ridge, d) != d as isize - 2 {
                    continue;
                }
                let mut pts: Vec<usize> = ridge.iter().collect();
                pts.push(p);
                // any point of g off the ridge lies strictly inside the new facet
                let Some(inner) = g.on.difference(&ridge).first() else { continue };
                let Some((normal, offset)) = hyperplane_through(ys, &pts, d, &ys[inner]) else {
                    continue;
                };
                if new_facets.iter().any(|h| h.normal == normal && h.offset == offset) {
                    continue;
                }
                let mut on = BitSet::new();
                for q in accepted.iter().chain(std::iter::once(p)) {
                    if dot(&normal, &ys[q]) == offset {
                        on.insert(q);
                    }
                }
                new_facets.push(RawFacet { normal, offset, on });
            }
        }
        let mut kept: Vec<RawFacet> = Vec::with_capacity(facets.len() + new_facets.len());
        for (fi, mut f) in facets.into_iter().enumerate() {
            if vals[fi] > 0 {
                continue;
            }
            if vals[fi] == 0 {
                f.on.insert(p);
            }
            kept.push(f);
        }
        kept.extend(new_facets);
        facets = kept;
        accepted.insert(p);
    }

    for f in &mut facets {
        f.on = (0..ys.len()).filter(|&i| dot(&f.normal, &ys[i]) == f.offset).collect();
    }
    facets
}
