//! B_k-polytopes in coordinate form, negligibility and seeded generators.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{affine_dim_signed, minkowski_combination, Cone, Point, Polytope};
use crate::newton::{ell_newton, newton_number};

/// `P = P_0 * P_1 * ... * P_k` over the orthant coordinates `coords`.
#[derive(Debug, Clone, Serialize)]
pub struct BkCertificate {
    pub k: usize,
    pub coords: Vec<usize>,
    /// Vertex lists of `P_0, ..., P_k` in the remaining coordinates.
    pub summands: Vec<Vec<Point>>,
    pub sum_dim: usize,
    pub base_dim: usize,
}

impl BkCertificate {
    /// The Cayley sum placed back over `coords` in `Z^n`.
    pub fn reconstruct(&self, n: usize) -> Result<Polytope> {
        let rest: Vec<usize> = (0..n).filter(|j| !self.coords.contains(j)).collect();
        let mut pts = Vec::new();
        for (i, s) in self.summands.iter().enumerate() {
            for v in s {
                let mut x = vec![0; n];
                for (&j, &c) in rest.iter().zip(v) {
                    x[j] = c;
                }
                if i > 0 {
                    x[self.coords[i - 1]] = 1;
                }
                pts.push(x);
            }
        }
        Polytope::from_points(n, pts)
    }
}

fn orthant_cone(c: &Cone) -> Result<(usize, usize)> {
    c.orthant_form().ok_or_else(|| Error::precondition("B_k detection needs a cone of the form R^m_{>=0} + R^{n-m}"))
}

fn bk_over(p: &Polytope, coords: &[usize]) -> Option<BkCertificate> {
    let n = p.ambient_dim();
    let k = coords.len();
    let rest: Vec<usize> = (0..n).filter(|j| !coords.contains(j)).collect();
    let mut classes: Vec<Vec<Point>> = vec![Vec::new(); k + 1];
    for v in p.vertices() {
        let ones: Vec<usize> = (0..k).filter(|&i| v[coords[i]] != 0).collect();
        let class = match ones.as_slice() {
            [] => 0,
            [i] if v[coords[*i]] == 1 => i + 1,
            _ => return None,
        };
        classes[class].push(rest.iter().map(|&j| v[j]).collect());
    }
    if classes.iter().any(|c| c.is_empty()) {
        return None;
    }
    let base_dim = affine_dim_signed(&classes[0]) as usize;
    if base_dim != n - k {
        return None;
    }
    let polys: Vec<Polytope> = classes[1..].iter().map(|c| Polytope::from_points(n - k, c.clone()).unwrap()).collect();
    let terms: Vec<(&Polytope, i64)> = polys.iter().map(|q| (q, 1)).collect();
    let sum_dim = minkowski_combination(&terms, n - k).ok()?.dim();
    if sum_dim >= k {
        return None;
    }
    Some(BkCertificate { k, coords: coords.to_vec(), summands: classes, sum_dim, base_dim })
}

/// First B_k structure in order of `k`, then lexicographic coordinates.
pub fn detect_bk(p: &Polytope, c: &Cone) -> Result<Option<BkCertificate>> {
    let (m, _) = orthant_cone(c)?;
    if !c.is_convenient(p)? {
        return Err(Error::precondition("polytope is not convenient in the cone"));
    }
    for k in 1..=m {
        let subsets: Vec<Vec<usize>> = (0..m).combinations(k).collect();
        if let Some(cert) = subsets.par_iter().find_map_first(|s| bk_over(p, s)) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// `ν = 0` in orthant-product cones, `ν^ℓ = 0` otherwise.
pub fn is_negligible(p: &Polytope, c: &Cone) -> Result<bool> {
    if c.orthant_form().is_some() {
        if !c.is_convenient(p)? {
            return Err(Error::precondition("polytope is not convenient in the cone"));
        }
        Ok(newton_number(p, c)? == 0)
    } else {
        Ok(ell_newton(p, c)?.ell_nu == 0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BkVerdict {
    pub negligible: bool,
    pub certificate: Option<BkCertificate>,
    pub consistent: bool,
}

/// Negligible exactly when a B_k structure is found.
pub fn bk_theorem_check(p: &Polytope, c: &Cone) -> Result<BkVerdict> {
    orthant_cone(c)?;
    let negligible = is_negligible(p, c)?;
    let certificate = detect_bk(p, c)?;
    let consistent = negligible == certificate.is_some();
    Ok(BkVerdict { negligible, certificate, consistent })
}

const MAX_POINTS: usize = 12;

fn rng_for(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn convenient_points(rng: &mut ChaCha8Rng, n: usize, m: usize, budget: usize) -> Vec<Point> {
    let e = |i: usize, a: i64| -> Point { (0..n).map(|j| if j == i { a } else { 0 }).collect() };
    let mut pts: Vec<Point> = Vec::new();
    // full-dimensional part on the lineality space
    let base: Point = (0..n).map(|j| if j < m { 0 } else { rng.gen_range(-1..=1) }).collect();
    pts.push(base.clone());
    for j in m..n {
        let mut v = base.clone();
        v[j] += if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
        pts.push(v);
    }
    for i in 0..m {
        let mut v = e(i, rng.gen_range(1..=3));
        for (j, x) in v.iter_mut().enumerate().skip(m) {
            *x = base[j];
        }
        pts.push(v);
    }
    while pts.len() < budget {
        let v: Point = (0..n).map(|j| if j < m { rng.gen_range(0..=3) } else { rng.gen_range(-3..=3) }).collect();
        pts.push(v);
    }
    pts.truncate(budget.max(n + 1));
    pts
}

/// A convenient polytope in `R^m_{>=0} + R^{n-m}` with coordinates in
/// `[-3, 3]` and at most 12 points before taking the hull.
pub fn generate_convenient(seed: u64, n: usize, m: usize) -> Result<Polytope> {
    if n == 0 || m > n || n + 1 > MAX_POINTS {
        return Err(Error::precondition(format!("no convenient generator for n = {n}, m = {m}")));
    }
    let mut rng = rng_for(seed, 1);
    let budget = rng.gen_range(n + 1..=MAX_POINTS);
    Polytope::from_points(n, convenient_points(&mut rng, n, m, budget))
}

/// A B_k-polytope `P_0 * ... * P_k`, convenient in `R^m_{>=0} + R^{n-m}`,
/// over `k` random orthant coordinates.
pub fn generate_bk(seed: u64, n: usize, k: usize, m: usize) -> Result<Polytope> {
    if k == 0 || k > m || m > n {
        return Err(Error::precondition(format!("no B_k generator for n = {n}, k = {k}, m = {m}")));
    }
    let mut rng = rng_for(seed, 2);
    let d = n - k;
    let mo = m - k;
    let mut coords: Vec<usize> = (0..m).collect();
    coords.shuffle(&mut rng);
    let mut coords: Vec<usize> = coords[..k].to_vec();
    coords.sort();
    // P_0 convenient in R^{m-k}_{>=0} + R^{n-m}
    let base_budget = if d == 0 { 1 } else { rng.gen_range(d + 1..=(d + 3).min(MAX_POINTS - k)) };
    let base: Vec<Point> = if d == 0 { vec![Vec::new()] } else { convenient_points(&mut rng, d, mo, base_budget) };
    // P_1..P_k: translates along a common subspace of dimension < k, each
    // meeting the minimal cone face
    let sub_dim = rng.gen_range(0..k).min(d);
    let gens: Vec<Point> = (0..sub_dim)
        .map(|_| (0..d).map(|j| if j < mo { rng.gen_range(0..=1) } else { rng.gen_range(-1..=1) }).collect())
        .collect();
    let mut pieces: Vec<Vec<Point>> = Vec::new();
    let mut spare = MAX_POINTS.saturating_sub(base.len() + k);
    for _ in 0..k {
        let anchor: Point = (0..d).map(|j| if j < mo { 0 } else { rng.gen_range(-1..=1) }).collect();
        let mut piece = vec![anchor.clone()];
        for g in &gens {
            if spare > 0 && rng.gen_bool(0.7) {
                let t: i64 = rng.gen_range(1..=2);
                let v: Point = anchor.iter().zip(g).map(|(a, b)| (a + t * b).clamp(-3, 3)).collect();
                piece.push(v);
                spare -= 1;
            }
        }
        pieces.push(piece);
    }
    let rest: Vec<usize> = (0..n).filter(|j| !coords.contains(j)).collect();
    let mut pts = Vec::new();
    for (i, s) in std::iter::once(&base).chain(pieces.iter()).enumerate() {
        for v in s {
            let mut x = vec![0; n];
            for (&j, &c) in rest.iter().zip(v) {
                x[j] = c;
            }
            if i > 0 {
                x[coords[i - 1]] = 1;
            }
            pts.push(x);
        }
    }
    let p = Polytope::from_points(n, pts)?;
    if p.dim() != n {
        return Err(Error::invariant("generated Cayley sum is not full-dimensional"));
    }
    Ok(p)
}

/// A convenient polytope in a pointed cone: the apex, a multiple of every
/// primitive ray and random lattice points of the cone in `[-3, 3]^n`.
pub fn generate_in_cone(seed: u64, c: &Cone) -> Result<Polytope> {
    if c.lineality_dim() != 0 {
        return Err(Error::precondition("cone generator needs a pointed cone"));
    }
    let n = c.ambient_dim();
    let mut rng = rng_for(seed, 3);
    let mut pts: Vec<Point> = vec![vec![0; n]];
    for r in c.rays() {
        let scale = rng.gen_range(1..=2);
        let r: Point = r.iter().map(|&x| x as i64).collect();
        let v: Point = r.iter().map(|&x| x * scale).collect();
        pts.push(if v.iter().all(|x| x.abs() <= 3) { v } else { r });
    }
    let mut tries = 0;
    while pts.len() < MAX_POINTS && tries < 200 {
        tries += 1;
        let v: Point = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        if c.contains(&v) && rng.gen_bool(0.25) {
            pts.push(v);
        }
    }
    Polytope::from_points(n, pts)
}
