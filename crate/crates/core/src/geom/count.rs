//! Lattice-point enumeration in dilates of polytopes.

use rayon::prelude::*;

use crate::lattice::to_i128;

use super::{Point, Polytope};

struct Region {
    normals: Vec<Vec<i128>>,
    bounds: Vec<i128>,
    lo: Vec<i128>,
    hi: Vec<i128>,
    strict: bool,
}

impl Region {
    /// `m P` in span coordinates, with strict inequalities for the interior.
    fn new(p: &Polytope, m: i128, strict: bool) -> Region {
        let d = p.dim();
        let ys: Vec<Vec<i128>> = p.vertices().iter().map(|v| p.span().coords(&to_i128(v))).collect();
        let lo = (0..d).map(|j| ys.iter().map(|y| y[j]).min().unwrap() * m).collect();
        let hi = (0..d).map(|j| ys.iter().map(|y| y[j]).max().unwrap() * m).collect();
        Region {
            normals: p.facets().iter().map(|f| f.normal.clone()).collect(),
            bounds: p.facets().iter().map(|f| f.offset * m).collect(),
            lo,
            hi,
            strict,
        }
    }

    fn ok(&self, lhs: i128, b: i128) -> bool {
        if self.strict {
            lhs < b
        } else {
            lhs <= b
        }
    }

    /// Counts completions of `z[..level]`; `partial[f]` is the facet sum so far.
    fn count(&self, level: usize, partial: &mut [i128]) -> u64 {
        let d = self.lo.len();
        if level == d {
            return partial.iter().zip(&self.bounds).all(|(&s, &b)| self.ok(s, b)) as u64;
        }
        let mut total = 0;
        for z in self.lo[level]..=self.hi[level] {
            let mut feasible = true;
            for (f, n) in self.normals.iter().enumerate() {
                let mut s = partial[f] + n[level] * z;
                for j in level + 1..d {
                    s += (n[j] * self.lo[j]).min(n[j] * self.hi[j]);
                }
                if !self.ok(s, self.bounds[f]) {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            for (f, n) in self.normals.iter().enumerate() {
                partial[f] += n[level] * z;
            }
            total += self.count(level + 1, partial);
            for (f, n) in self.normals.iter().enumerate() {
                partial[f] -= n[level] * z;
            }
        }
        total
    }

    fn count_all(&self) -> u64 {
        if self.lo.is_empty() {
            return 1;
        }
        let nf = self.normals.len();
        (self.lo[0]..=self.hi[0])
            .into_par_iter()
            .map(|z| {
                let mut partial: Vec<i128> = self.normals.iter().map(|n| n[0] * z).collect();
                let d = self.lo.len();
                let feasible = (0..nf).all(|f| {
                    let mut s = partial[f];
                    for j in 1..d {
                        s += (self.normals[f][j] * self.lo[j]).min(self.normals[f][j] * self.hi[j]);
                    }
                    self.ok(s, self.bounds[f])
                });
                if feasible {
                    self.count(1, &mut partial)
                } else {
                    0
                }
            })
            .sum()
    }
}

/// `#(m P ∩ Z^n)` for `m >= 1`.
pub fn count_lattice_points(p: &Polytope, m: u64) -> u64 {
    Region::new(p, m as i128, false).count_all()
}

/// Number of lattice points in the relative interior of `m P`.
pub fn count_interior_points(p: &Polytope, m: u64) -> u64 {
    Region::new(p, m as i128, true).count_all()
}

/// Lattice points counted by scanning the ambient bounding box of `m P`
/// point by point. Slow; kept as an independent reference.
pub fn count_lattice_points_box_scan(p: &Polytope, m: u64) -> u64 {
    let m = m as i64;
    let n = p.ambient_dim();
    let lo: Vec<i64> = (0..n).map(|j| p.vertices().iter().map(|v| v[j]).min().unwrap() * m).collect();
    let hi: Vec<i64> = (0..n).map(|j| p.vertices().iter().map(|v| v[j]).max().unwrap() * m).collect();
    let scaled = super::dilate(p, m);
    let mut count = 0;
    let mut z = lo.clone();
    loop {
        if scaled.contains(&z) {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == n {
                return count;
            }
            if z[j] < hi[j] {
                z[j] += 1;
                break;
            }
            z[j] = lo[j];
            j += 1;
        }
    }
}

/// All lattice points of `P`, sorted.
pub fn lattice_points(p: &Polytope) -> Vec<Point> {
    let n = p.ambient_dim();
    let lo: Vec<i64> = (0..n).map(|j| p.vertices().iter().map(|v| v[j]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|j| p.vertices().iter().map(|v| v[j]).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut z = lo.clone();
    'outer: loop {
        if p.contains(&z) {
            out.push(z.clone());
        }
        let mut j = 0;
        loop {
            if j == n {
                break 'outer;
            }
            if z[j] < hi[j] {
                z[j] += 1;
                break;
            }
            z[j] = lo[j];
            j += 1;
        }
    }
    out.sort();
    out
}
