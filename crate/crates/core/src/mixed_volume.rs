//! Lattice-normalized mixed volumes and Cayley-sum volume identities.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{cayley_polytope, minkowski_combination, LatticeMap, Point, Polytope};
use crate::lattice::{determinant, rank, SpanLattice};

/// `n` polytopes in `R^n`, grouped by multiplicity.
#[derive(Debug, Clone)]
pub struct MixedVolumeQuery {
    pub ambient: usize,
    pub terms: Vec<(Polytope, usize)>,
}

impl MixedVolumeQuery {
    pub fn new(ambient: usize, terms: Vec<(Polytope, usize)>) -> Result<Self> {
        let count: usize = terms.iter().map(|t| t.1).sum();
        if count != ambient {
            return Err(Error::DimensionMismatch(format!("{count} polytopes in dimension {ambient}")));
        }
        if let Some((p, _)) = terms.iter().find(|(p, _)| p.ambient_dim() != ambient) {
            return Err(Error::DimensionMismatch(format!("polytope in dimension {}, expected {ambient}", p.ambient_dim())));
        }
        Ok(MixedVolumeQuery { ambient, terms })
    }

    /// One entry per polytope, in order.
    pub fn from_list(ambient: usize, polys: &[Polytope]) -> Result<Self> {
        let mut terms: Vec<(Polytope, usize)> = Vec::new();
        for p in polys {
            match terms.iter_mut().find(|(q, _)| q == p) {
                Some(t) => t.1 += 1,
                None => terms.push((p.clone(), 1)),
            }
        }
        Self::new(ambient, terms)
    }

    pub fn expanded(&self) -> Vec<&Polytope> {
        self.terms.iter().flat_map(|(p, m)| std::iter::repeat_n(p, *m)).collect()
    }
}

fn binom(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i as i128 + 1))
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// `MV(P_1,...,P_n) = (1/n!) Σ_{S ⊆ [n]} (-1)^{n-|S|} Vol_Z(Σ_{i∈S} P_i)`.
pub fn mixed_volume(q: &MixedVolumeQuery) -> Result<u64> {
    let n = q.ambient;
    if n == 0 {
        return Ok(1);
    }
    let choices: Vec<Vec<usize>> = q.terms.iter().map(|(_, m)| (0..=*m).collect()).collect();
    let combos: Vec<Vec<usize>> = choices.into_iter().multi_cartesian_product().collect();
    let total: i128 = combos
        .par_iter()
        .map(|ks| -> Result<i128> {
            let size: usize = ks.iter().sum();
            if size == 0 {
                return Ok(0);
            }
            let weight: i128 = q.terms.iter().zip(ks).map(|((_, m), &k)| binom(*m, k)).product();
            let parts: Vec<(&Polytope, i64)> = q.terms.iter().zip(ks).map(|((p, _), &k)| (p, k as i64)).collect();
            let vol = minkowski_combination(&parts, n)?.volume_in_dim(n) as i128;
            let sign = if (n - size).is_multiple_of(2) { 1 } else { -1 };
            Ok(sign * weight * vol)
        })
        .collect::<Result<Vec<i128>>>()?
        .into_iter()
        .sum();
    let f = factorial(n);
    if total % f != 0 || total < 0 {
        return Err(Error::invariant(format!("mixed volume polarization gave {total}/{f}")));
    }
    u64::try_from(total / f).map_err(|_| Error::Overflow("mixed volume"))
}

pub fn mixed_volume_of(ambient: usize, polys: &[Polytope]) -> Result<u64> {
    mixed_volume(&MixedVolumeQuery::from_list(ambient, polys)?)
}

fn direction_vectors(p: &Polytope) -> Vec<Vec<i128>> {
    let v = p.vertices();
    v[1..].iter().map(|x| x.iter().zip(&v[0]).map(|(&a, &b)| a as i128 - b as i128).collect()).collect()
}

/// Some `k` of the polytopes have a Minkowski sum of dimension `< k`.
pub fn mv_zero_structural(polys: &[&Polytope]) -> bool {
    let Some(n) = polys.first().map(|p| p.ambient_dim()) else { return false };
    let dirs: Vec<Vec<Vec<i128>>> = polys.iter().map(|p| direction_vectors(p)).collect();
    (1u64..1 << polys.len()).any(|mask| {
        let k = mask.count_ones() as usize;
        let all: Vec<Vec<i128>> =
            (0..polys.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| dirs[i].iter().cloned()).collect();
        rank(&all, n) < k
    })
}

/// One level of a unit mixed volume certificate: polytopes `indices` are
/// translates of faces of the unimodular simplex `simplex`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitStep {
    pub indices: Vec<usize>,
    pub simplex: Vec<Point>,
}

/// Certificate for `MV = 1` of the structural form: after translation, `k`
/// polytopes are faces of a unimodular `k`-simplex, and the projections of
/// the rest along its span again have such a certificate. Searched only for
/// `n <= 4`; `None` means no certificate was found.
pub fn unit_mv_certificate(polys: &[&Polytope]) -> Result<Option<Vec<UnitStep>>> {
    let Some(n) = polys.first().map(|p| p.ambient_dim()) else { return Ok(Some(Vec::new())) };
    if n > 4 {
        return Err(Error::precondition("unit mixed volume search is bounded to dimension 4"));
    }
    if polys.len() != n {
        return Err(Error::DimensionMismatch(format!("{} polytopes in dimension {n}", polys.len())));
    }
    if mv_zero_structural(polys) {
        return Ok(None);
    }
    certify(polys, &(0..n).collect::<Vec<_>>())
}

fn certify(polys: &[&Polytope], labels: &[usize]) -> Result<Option<Vec<UnitStep>>> {
    let n = polys.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    for k in 1..=n {
        for subset in (0..n).combinations(k) {
            let Some(simplex) = common_simplex(&subset.iter().map(|&i| polys[i]).collect::<Vec<_>>(), k) else {
                continue;
            };
            let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
            let dirs: Vec<Vec<i64>> = simplex[1..].to_vec();
            let map = LatticeMap::quotient_along(polys[0].ambient_dim(), &dirs)?;
            let projected: Vec<Polytope> = rest.iter().map(|&i| map.image(polys[i])).collect::<Result<_>>()?;
            let refs: Vec<&Polytope> = projected.iter().collect();
            let rest_labels: Vec<usize> = rest.iter().map(|&i| labels[i]).collect();
            if let Some(mut steps) = certify(&refs, &rest_labels)? {
                steps.insert(0, UnitStep { indices: subset.iter().map(|&i| labels[i]).collect(), simplex });
                return Ok(Some(steps));
            }
        }
    }
    Ok(None)
}

/// Vertex set `{0, w_1, ..., w_k}` of a unimodular `k`-simplex in its span
/// such that each polytope is a translate of one of its faces. Polytopes are
/// placed one at a time, each sharing a vertex with those already placed.
fn common_simplex(polys: &[&Polytope], k: usize) -> Option<Vec<Point>> {
    let n = polys[0].ambient_dim();
    let all_dirs: Vec<Vec<i128>> = polys.iter().flat_map(|p| direction_vectors(p)).collect();
    if rank(&all_dirs, n) != k || polys.iter().any(|p| p.vertices().len() != p.dim() + 1) {
        return None;
    }
    let start: Vec<Point> =
        polys[0].vertices().iter().map(|v| v.iter().zip(&polys[0].vertices()[0]).map(|(a, b)| a - b).collect()).collect();
    let mut placed = vec![false; polys.len()];
    placed[0] = true;
    let verts = place(polys, &mut placed, start, k)?;
    let mut full = verts.clone();
    let base = full[0].clone();
    for v in &mut full {
        v.iter_mut().zip(&base).for_each(|(x, b)| *x -= b);
    }
    Some(full)
}

fn place(polys: &[&Polytope], placed: &mut [bool], verts: Vec<Point>, k: usize) -> Option<Vec<Point>> {
    if verts.len() > k + 1 || !affinely_independent(&verts) {
        return None;
    }
    let Some(next) = placed.iter().position(|&b| !b) else {
        return (verts.len() == k + 1 && unimodular(&verts)).then_some(verts);
    };
    placed[next] = true;
    let pv = polys[next].vertices();
    for u in pv {
        for w in &verts {
            let t: Vec<i64> = w.iter().zip(u).map(|(a, b)| a - b).collect();
            let mut cand = verts.clone();
            for v in pv {
                let x: Point = v.iter().zip(&t).map(|(a, b)| a + b).collect();
                if !cand.contains(&x) {
                    cand.push(x);
                }
            }
            if let Some(r) = place(polys, placed, cand, k) {
                return Some(r);
            }
        }
    }
    placed[next] = false;
    None
}

fn affinely_independent(verts: &[Point]) -> bool {
    let d: Vec<Vec<i128>> =
        verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(&a, &b)| a as i128 - b as i128).collect()).collect();
    rank(&d, verts[0].len()) == d.len()
}

fn unimodular(verts: &[Point]) -> bool {
    let n = verts[0].len();
    let d: Vec<Vec<i128>> =
        verts[1..].iter().map(|v| v.iter().zip(&verts[0]).map(|(&a, &b)| a as i128 - b as i128).collect()).collect();
    if d.is_empty() {
        return true;
    }
    let sl = SpanLattice::of_directions(&d, n, vec![0; n]);
    let m: Vec<Vec<i128>> = d.iter().map(|v| sl.coords(v)).collect();
    determinant(&m).abs() == 1
}

#[derive(Debug, Clone, Serialize)]
pub struct CayleyReport {
    /// `Vol_Z(P_0 * ... * P_k)`.
    pub cayley_volume: u64,
    /// `Σ_{a_0+...+a_k = n-k, a_i >= 0} MV(P_0^{a_0},...,P_k^{a_k})`.
    pub mixed_sum: u64,
    /// `Σ_{I ⊆ [k]} (-1)^{k-|I|} Vol_Z(P_0 * P_I)`.
    pub alternating_volume: i64,
    /// `Σ_{a_0 >= 0, a_i > 0 for i >= 1} MV(P_0^{a_0},...,P_k^{a_k})`.
    pub alternating_mixed: i64,
    pub holds: bool,
}

fn mixed_sum(polys: &[&Polytope], d: usize, positive_from: usize) -> Result<u64> {
    let k = polys.len();
    let mut total = 0u64;
    for a in compositions(d, k) {
        if a[positive_from..].contains(&0) {
            continue;
        }
        let terms = polys.iter().zip(&a).filter(|(_, &m)| m > 0).map(|(p, &m)| ((*p).clone(), m)).collect();
        total += mixed_volume(&MixedVolumeQuery::new(d, terms)?)?;
    }
    Ok(total)
}

/// All `a ∈ Z_{>=0}^k` with `Σ a = d`.
fn compositions(d: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(d - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Checks the Cayley volume formula and its signed version for lattice
/// polytopes `P_0, ..., P_k` in a common `Z^{n-k}`.
pub fn cayley_volume_identity(polys: &[&Polytope]) -> Result<CayleyReport> {
    let Some(d) = polys.first().map(|p| p.ambient_dim()) else {
        return Err(Error::precondition("Cayley identity needs at least one polytope"));
    };
    if polys.iter().any(|p| p.ambient_dim() != d) {
        return Err(Error::DimensionMismatch("Cayley summands live in different dimensions".into()));
    }
    let k = polys.len() - 1;
    let cay = cayley_polytope(polys)?;
    let cayley_volume = cay.volume_in_dim(d + k);
    let mixed_sum_all = mixed_sum(polys, d, polys.len())?;
    let mut alternating_volume = 0i64;
    for size in 0..=k {
        for subset in (1..=k).combinations(size) {
            let mut chosen: Vec<&Polytope> = vec![polys[0]];
            chosen.extend(subset.iter().map(|&i| polys[i]));
            let v = cayley_polytope(&chosen)?.volume_in_dim(d + size) as i64;
            alternating_volume += if (k - size).is_multiple_of(2) { v } else { -v };
        }
    }
    let alternating_mixed = mixed_sum(polys, d, 1)? as i64;
    let holds = cayley_volume == mixed_sum_all && alternating_volume == alternating_mixed;
    Ok(CayleyReport { cayley_volume, mixed_sum: mixed_sum_all, alternating_volume, alternating_mixed, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i64]]) -> Polytope {
        Polytope::from_points(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn small_mixed_volumes() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume_of(2, &[a.clone(), b.clone()]).unwrap(), 1);
        let d1 = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let d2 = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(mixed_volume_of(2, &[d2.clone(), d1.clone()]).unwrap(), 2);
        assert_eq!(mixed_volume_of(2, &[d2.clone(), d2.clone()]).unwrap(), 4);
        assert_eq!(mixed_volume_of(2, &[a.clone(), a.clone()]).unwrap(), 0);
        assert!(mv_zero_structural(&[&a, &a]));
        assert!(!mv_zero_structural(&[&a, &b]));
    }

    #[test]
    fn unit_certificates() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        let d1 = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(unit_mv_certificate(&[&a, &b]).unwrap().is_some());
        assert!(unit_mv_certificate(&[&d1, &d1]).unwrap().is_some());
        let d2 = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert!(unit_mv_certificate(&[&d2, &d1]).unwrap().is_none());
        // a segment and a triangle with an edge parallel to it
        let s = poly(&[&[1, 1], &[2, 1]]);
        assert!(unit_mv_certificate(&[&s, &d1]).unwrap().is_some());
    }

    #[test]
    fn cayley_identities() {
        let p0 = poly(&[&[0], &[1]]);
        let p1 = poly(&[&[0], &[1]]);
        let r = cayley_volume_identity(&[&p0, &p1]).unwrap();
        assert_eq!(r.cayley_volume, 2);
        assert!(r.holds);
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 1]]);
        let r = cayley_volume_identity(&[&tri]).unwrap();
        assert_eq!(r.cayley_volume, 2);
        assert!(r.holds);
    }
}
