//! Ehrhart polynomials, h*- and local h*-polynomials.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bitset::BitSet;
use crate::complex::PolyhedralSubdivision;
use crate::error::{Error, Result};
use crate::geom::{count_interior_points, count_lattice_points, Point, Polytope};
use crate::polynomial::{IntPolynomial, Rational, RationalPolynomial};

#[derive(Debug, Clone, Serialize)]
pub struct EhrhartData {
    pub dim: usize,
    pub ehrhart: RationalPolynomial,
    pub h_star: IntPolynomial,
    pub local_h_star: IntPolynomial,
}

impl EhrhartData {
    pub fn compute(p: &Polytope) -> Result<EhrhartData> {
        Ok(EhrhartData {
            dim: p.dim(),
            ehrhart: ehrhart_polynomial(p),
            h_star: h_star(p)?,
            local_h_star: local_h_star(p)?,
        })
    }
}

fn counts(p: &Polytope) -> Vec<i128> {
    std::iter::once(1).chain((1..=p.dim() as u64).map(|m| count_lattice_points(p, m) as i128)).collect()
}

/// `f_P(m) = #(mP ∩ Z^n)`.
pub fn ehrhart_polynomial(p: &Polytope) -> RationalPolynomial {
    RationalPolynomial::interpolate(&counts(p))
}

fn binom(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i as i128 + 1))
}

/// Numerator of `Σ f_P(m) t^m = h*(P;t) / (1-t)^{dim P + 1}`.
pub fn h_star(p: &Polytope) -> Result<IntPolynomial> {
    let d = p.dim();
    let f = ehrhart_polynomial(p);
    let vals: Vec<Rational> = (0..=d as i64).map(|m| f.eval(m)).collect();
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut c = Rational::zero();
        for j in 0..=k {
            let term = vals[k - j] * Rational::from_integer(binom(d + 1, j));
            if j % 2 == 0 {
                c += term;
            } else {
                c -= term;
            }
        }
        if !c.denom().is_one() {
            return Err(Error::invariant(format!("h* coefficient {k} is {c}")));
        }
        out.push(i64::try_from(*c.numer()).map_err(|_| Error::Overflow("h*"))?);
    }
    Ok(IntPolynomial::new(out))
}

/// `ℓ*(P;t) = Σ_{Q ⊆ P} (-1)^{dim P - dim Q} h*(Q;t) g([Q,P]^*;t)`, the empty
/// face included.
pub fn local_h_star(p: &Polytope) -> Result<IntPolynomial> {
    let fp = p.face_poset();
    let top = p.top();
    let d = p.dim() as isize;
    let mut total = IntPolynomial::zero();
    for q in 0..p.num_faces() {
        let dq = p.faces()[q].dim;
        let h = if q == 0 { IntPolynomial::one() } else { h_star(&p.face_polytope(q))? };
        let term = &h * &fp.dual_interval_g(q, top);
        if (d - dq) % 2 == 0 {
            total += &term;
        } else {
            total -= &term;
        }
    }
    Ok(total)
}

pub fn is_thin(p: &Polytope) -> Result<bool> {
    Ok(local_h_star(p)?.is_zero())
}

/// Degree of `h*(P;t)`.
pub fn degree(p: &Polytope) -> Result<usize> {
    Ok(h_star(p)?.degree().unwrap_or(0))
}

/// Smallest `m` such that `mP` has a relative interior lattice point.
pub fn codegree(p: &Polytope) -> usize {
    (1..).find(|&m| count_interior_points(p, m as u64) > 0).expect("(dim+1)P has interior points")
}

/// `dim P >= 2 deg P`.
pub fn is_trivially_thin(p: &Polytope) -> Result<bool> {
    Ok(p.dim() >= 2 * degree(p)?)
}

fn directions(pts: &[Point]) -> Vec<Vec<i128>> {
    pts[1..].iter().map(|v| v.iter().zip(&pts[0]).map(|(&a, &b)| a as i128 - b as i128).collect()).collect()
}

/// Some pair of disjoint nonempty faces with independent direction spaces
/// has `P` as its convex hull.
pub fn is_join(p: &Polytope) -> bool {
    let nv = p.vertices().len();
    let all = BitSet::full(nv);
    let faces = p.faces();
    let top = p.top();
    for i in 1..top {
        for j in i + 1..top {
            let (a, b) = (&faces[i].vertices, &faces[j].vertices);
            if a.intersection_len(b) > 0 || a.len() + b.len() != nv || a.union(b) != all {
                continue;
            }
            let mut dirs = directions(&p.face_points(i));
            dirs.extend(directions(&p.face_points(j)));
            let r = crate::lattice::rank(&dirs, p.ambient_dim()) as isize;
            if r == faces[i].dim + faces[j].dim && p.dim() as isize == r + 1 {
                return true;
            }
        }
    }
    false
}

/// `P ∘ Q = conv(P × 0 × 0, 0 × Q × 1)`.
pub fn free_join(p: &Polytope, q: &Polytope) -> Polytope {
    let (a, b) = (p.ambient_dim(), q.ambient_dim());
    let mut pts: Vec<Point> = Vec::new();
    for v in p.vertices() {
        let mut x = v.clone();
        x.resize(a + b + 1, 0);
        pts.push(x);
    }
    for v in q.vertices() {
        let mut x = vec![0; a];
        x.extend(v);
        x.push(1);
        pts.push(x);
    }
    Polytope::from_points(a + b + 1, pts).expect("free join of nonempty polytopes")
}

/// h* of every source cell, memoized by vertex list.
fn cell_h_stars(s: &PolyhedralSubdivision) -> Result<Vec<IntPolynomial>> {
    let mut memo: HashMap<Vec<Point>, IntPolynomial> = HashMap::new();
    let mut out = Vec::with_capacity(s.cells.len());
    for c in &s.cells {
        match c {
            None => out.push(IntPolynomial::one()),
            Some(p) => {
                if let Some(h) = memo.get(p.vertices()) {
                    out.push(h.clone());
                } else {
                    let h = h_star(p)?;
                    memo.insert(p.vertices().to_vec(), h.clone());
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

fn check_cells(s: &PolyhedralSubdivision) -> Result<()> {
    let src = s.map.source();
    let b = src.bottom().ok_or_else(|| Error::precondition("complex has no empty cell"))?;
    if let Some(i) = (0..s.cells.len()).find(|&i| i != b && s.cells[i].is_none()) {
        return Err(Error::precondition(format!("source element {} carries no polytope", src.label(i))));
    }
    Ok(())
}

/// `h*_{[0̂,x]}(S_x)` for every target element `x`. `dim S_x` is the largest
/// dimension of a cell over `[0̂,x]`.
fn h_star_restricted(s: &PolyhedralSubdivision, hs: &[IntPolynomial]) -> Vec<IntPolynomial> {
    let tgt = s.map.target();
    let sigma = s.map.sigma();
    (0..tgt.len())
        .map(|x| {
            let cells: Vec<usize> = (0..sigma.len()).filter(|&f| tgt.leq(sigma[f], x)).collect();
            let dim_s = cells.iter().map(|&f| s.cell_dim(f)).max().unwrap_or(-1);
            let mut total = IntPolynomial::zero();
            for &f in &cells {
                if sigma[f] == x {
                    total += &(&hs[f] * &IntPolynomial::t_minus_one_pow((dim_s - s.cell_dim(f)) as usize));
                }
            }
            total
        })
        .collect()
}

/// `h*_R(S;t) = Σ_{σ(F) = 1̂} h*(F;t) (t-1)^{dim S - dim F}`.
pub fn h_star_sfs(s: &PolyhedralSubdivision) -> Result<IntPolynomial> {
    check_cells(s)?;
    let top = s.map.target().top().ok_or_else(|| Error::precondition("target has no maximum"))?;
    let hs = cell_h_stars(s)?;
    Ok(h_star_restricted(s, &hs).swap_remove(top))
}

/// One summand `(-1)^{rk 1̂ - rk x} h*_{[0̂,x]}(S_x;t) g([x,1̂]^*;t)`.
#[derive(Debug, Clone, Serialize)]
pub struct SfsTerm {
    pub element: String,
    pub rank: i64,
    pub h_star: IntPolynomial,
    pub g: IntPolynomial,
    pub sign: i64,
}

impl SfsTerm {
    pub fn value(&self) -> IntPolynomial {
        (&self.h_star * &self.g).scale(self.sign)
    }
}

/// The nonzero summands of [`local_h_star_sfs`].
pub fn local_h_star_terms(s: &PolyhedralSubdivision) -> Result<Vec<SfsTerm>> {
    check_cells(s)?;
    let tgt = s.map.target();
    if !tgt.class().is_locally_eulerian() {
        return Err(Error::precondition("local h*-polynomial needs a locally Eulerian target"));
    }
    let top = tgt.top().ok_or_else(|| Error::precondition("target has no maximum"))?;
    let hs = cell_h_stars(s)?;
    let hx = h_star_restricted(s, &hs);
    let rt = tgt.ranks().expect("validated");
    Ok(hx
        .into_iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero())
        .map(|(x, h)| SfsTerm {
            element: tgt.label(x).to_string(),
            rank: rt[x],
            h_star: h,
            g: tgt.dual_interval_g(x, top),
            sign: if (rt[top] - rt[x]) % 2 == 0 { 1 } else { -1 },
        })
        .collect())
}

/// `ℓ*_R(S;t) = Σ_x (-1)^{rk 1̂ - rk x} h*_{[0̂,x]}(S_x;t) g([x,1̂]^*;t)`.
pub fn local_h_star_sfs(s: &PolyhedralSubdivision) -> Result<IntPolynomial> {
    Ok(local_h_star_terms(s)?.iter().map(SfsTerm::value).sum())
}
