#![allow(dead_code)]

pub mod oracle;

use polynewt::complex::PolyhedralComplex;
use polynewt::geom::lattice_points;
use polynewt::{BitSet, FinitePoset, Point, Polytope, SubdivisionMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-dimensional hull of `k` random points in `[0, max]^n`.
pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize, k: usize, max: i64) -> Polytope {
    loop {
        let pts: Vec<Point> = (0..k.max(n + 1)).map(|_| (0..n).map(|_| rng.gen_range(0..=max)).collect()).collect();
        let p = Polytope::from_points(n, pts).unwrap();
        if p.dim() == n {
            return p;
        }
    }
}

/// Cells of `c` that are not faces of other cells.
pub fn maximal_cells(c: &PolyhedralComplex) -> Vec<Vec<Point>> {
    let poset = c.poset();
    (1..c.len())
        .filter(|&i| poset.up_set(i).len() == 1)
        .map(|i| c.cell_vertices(i).to_vec())
        .collect()
}

/// Pulling refinement of `c` at `v`: every maximal cell through `v` is
/// replaced by the cones from `v` over its facets missing `v`.
pub fn pull(c: &PolyhedralComplex, ambient: usize, v: &Point) -> PolyhedralComplex {
    let mut out = Vec::new();
    for cell in maximal_cells(c) {
        let p = Polytope::from_points(ambient, cell.clone()).unwrap();
        if !p.contains(v) || p.dim() == 0 {
            out.push(cell);
            continue;
        }
        for &f in p.face_facets(p.top()) {
            let pts = p.face_points(f);
            if p.face_polytope(f).contains(v) {
                continue;
            }
            let mut q = pts;
            q.push(v.clone());
            out.push(q);
        }
    }
    PolyhedralComplex::from_maximal_cells(ambient, out).unwrap()
}

/// Up to `steps` pullings of the face complex of `p` at random lattice
/// points of `p`, skipping those in `avoid`.
pub fn random_pulling(rng: &mut ChaCha8Rng, p: &Polytope, steps: usize, avoid: impl Fn(&Point) -> bool) -> PolyhedralComplex {
    let mut c = PolyhedralComplex::of_polytope(p);
    let mut pts: Vec<Point> = lattice_points(p).into_iter().filter(|x| !avoid(x)).collect();
    pts.shuffle(rng);
    for v in pts.into_iter().take(steps) {
        c = pull(&c, p.ambient_dim(), &v);
    }
    c
}

/// `fine -> coarse`, each cell to the smallest coarse cell containing it.
pub fn refinement(fine: &PolyhedralComplex, coarse: &PolyhedralComplex) -> SubdivisionMap {
    let sigma = (0..fine.len())
        .map(|i| {
            let pts = fine.cell_vertices(i);
            (0..coarse.len())
                .filter(|&j| match &coarse.cells()[j] {
                    None => pts.is_empty(),
                    Some(q) => pts.iter().all(|v| q.contains(v)),
                })
                .min_by_key(|&j| coarse.cell_dim(j))
                .expect("fine cell lies in a coarse cell")
        })
        .collect();
    SubdivisionMap::new(fine.poset().clone(), coarse.poset().clone(), sigma, None).unwrap()
}

/// A random down-closed subset of `p` containing its minimum.
pub fn random_lower_set(rng: &mut ChaCha8Rng, p: &FinitePoset) -> BitSet {
    let mut keep = BitSet::new();
    keep.insert(p.bottom().unwrap());
    let mut gens: Vec<usize> = (0..p.len()).collect();
    gens.shuffle(rng);
    let take = rng.gen_range(1..=p.len().min(5));
    for &g in &gens[..take] {
        for x in p.down_set(g).iter() {
            keep.insert(x);
        }
    }
    keep
}

/// A random lower Eulerian ranked poset: a down-closed subcomplex of the
/// face poset of a random polytope or of a boolean algebra.
pub fn random_lower_eulerian(rng: &mut ChaCha8Rng) -> FinitePoset {
    let base = if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(n + 1..=n + 4);
        random_polytope(rng, n, k, 3).face_poset()
    } else {
        FinitePoset::boolean(rng.gen_range(1..=5))
    };
    let keep = random_lower_set(rng, &base);
    base.subposet(&keep).0
}
