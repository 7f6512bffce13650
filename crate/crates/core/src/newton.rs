//! Newton numbers: the alternating volume sum `ν_C(P)` and the ℓ-Newton
//! number built from the self-agglutination of `P` along `∂_C P`.

use serde::Serialize;

use crate::complex::{boundary_sfs, boundary_subdivision, far_facets, self_agglutination, PolyhedralComplex};
use crate::ehrhart::{h_star_sfs, local_h_star, local_h_star_sfs, local_h_star_terms, SfsTerm};
use crate::error::{Error, Result};
use crate::geom::{Cone, ConeSpec, Point, Polytope};
use crate::polynomial::IntPolynomial;

#[derive(Debug, Clone, Serialize)]
pub struct NewtonFaceTerm {
    pub face_dim: usize,
    pub rays: Vec<usize>,
    pub volume: u64,
    pub sign: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonReport {
    pub nu: i64,
    pub ell_nu: u64,
    pub ell_star_agglutinated: IntPolynomial,
    pub h_star_agglutinated: IntPolynomial,
    pub ell_star: IntPolynomial,
    pub boolean_cone: bool,
    pub face_terms: Vec<NewtonFaceTerm>,
    pub sfs_terms: Vec<SfsTerm>,
}

fn newton_terms(p: &Polytope, c: &Cone) -> Result<Vec<NewtonFaceTerm>> {
    if !c.contains_polytope(p) {
        return Err(Error::precondition("polytope is not contained in the cone"));
    }
    let n = c.dim();
    Ok((0..c.faces().len())
        .map(|f| {
            let face = &c.faces()[f];
            let pts: Vec<Point> = c.polytope_face(p, f).iter().map(|v| p.vertices()[v].clone()).collect();
            let volume = if pts.is_empty() {
                0
            } else {
                Polytope::from_points(p.ambient_dim(), pts).expect("face of a polytope").volume_in_dim(face.dim)
            };
            NewtonFaceTerm {
                face_dim: face.dim,
                rays: face.rays.iter().collect(),
                volume,
                sign: if (n - face.dim).is_multiple_of(2) { 1 } else { -1 },
            }
        })
        .collect())
}

/// `ν_C(P) = Σ_{F <= C} (-1)^{dim C - dim F} Vol_Z(P ∩ F)`.
pub fn newton_number(p: &Polytope, c: &Cone) -> Result<i64> {
    Ok(newton_terms(p, c)?.iter().map(|t| t.sign * t.volume as i64).sum())
}

pub fn newton_number_spec(p: &Polytope, spec: &ConeSpec) -> Result<i64> {
    newton_number(p, &spec.build()?)
}

/// `ν^ℓ_C(P) = ½ ℓ*_C(P ♯_{P_B} P; 1)` with the intermediate data.
pub fn ell_newton(p: &Polytope, c: &Cone) -> Result<NewtonReport> {
    let face_terms = newton_terms(p, c)?;
    let nu = face_terms.iter().map(|t| t.sign * t.volume as i64).sum();
    let glued = self_agglutination(p, c)?;
    let sfs_terms = local_h_star_terms(&glued)?;
    let ell: IntPolynomial = sfs_terms.iter().map(SfsTerm::value).sum();
    let at_one = ell.eval(1);
    if at_one < 0 || at_one % 2 != 0 {
        return Err(Error::invariant(format!("ℓ* of the agglutination evaluates to {at_one} at 1")));
    }
    Ok(NewtonReport {
        nu,
        ell_nu: (at_one / 2) as u64,
        ell_star_agglutinated: ell,
        h_star_agglutinated: h_star_sfs(&glued)?,
        ell_star: local_h_star(p)?,
        boolean_cone: c.is_boolean(),
        face_terms,
        sfs_terms,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StapledonTerm {
    pub cell: Vec<Point>,
    /// `ℓ_{C⁻}(P_B, 1̂, F; t)`.
    pub boundary_local_h: IntPolynomial,
    pub ell_star_face: IntPolynomial,
    /// `ℓ*(conv(F, 0))`.
    pub ell_star_cone: IntPolynomial,
}

#[derive(Debug, Clone, Serialize)]
pub struct StapledonReport {
    pub nu: i64,
    /// `Σ_F ℓ_{C⁻}(P_B,1̂,F;1) (ℓ*(F;1) + ℓ*(F⁰;1))`.
    pub monodromy_sum: i64,
    /// `ℓ*_C(T ♯ T; t)` for the star subdivision `T` from the origin.
    pub ell_star_star_glued: IntPolynomial,
    /// `Σ_F ℓ_{C⁻}(P_B,1̂,F;t) ((t+1) ℓ*(F;t) + 2 ℓ*(F⁰;t))`.
    pub decomposition: IntPolynomial,
    /// `ℓ_{C±}(T, 1̂, F; t) = 0` for every boundary cell.
    pub twins_local_vanish: bool,
    pub terms: Vec<StapledonTerm>,
    pub holds: bool,
}

fn cone_over(pts: &[Point], n: usize) -> Result<Polytope> {
    let mut v = pts.to_vec();
    v.push(vec![0; n]);
    Polytope::from_points(n, v)
}

/// Monodromy-formula cross-check for a convenient polytope in an orthant.
pub fn stapledon_consistency(p: &Polytope, c: &Cone) -> Result<StapledonReport> {
    let n = c.ambient_dim();
    if c.orthant_form() != Some((n, n)) {
        return Err(Error::precondition("the monodromy check needs the full orthant"));
    }
    if !c.is_convenient(p)? {
        return Err(Error::precondition("polytope is not convenient in the cone"));
    }
    let nu = newton_number(p, c)?;

    let bsfs = boundary_sfs(p, c)?;
    let (bmap, old) = bsfs.map.restrict_to_boundary()?;
    let btop = bmap.target().top().ok_or_else(|| Error::invariant("boundary target has no maximum"))?;
    let mut terms = Vec::new();
    for (j, &i) in old.iter().enumerate() {
        let cell: Vec<Point> = bsfs.cells[i].as_ref().map_or(Vec::new(), |q| q.vertices().to_vec());
        let ell_star_face = match &bsfs.cells[i] {
            None => IntPolynomial::one(),
            Some(q) => local_h_star(q)?,
        };
        terms.push(StapledonTerm {
            boundary_local_h: bmap.local_h_at(btop, j)?,
            ell_star_face,
            ell_star_cone: local_h_star(&cone_over(&cell, n)?)?,
            cell,
        });
    }
    let monodromy_sum: i64 =
        terms.iter().map(|t| t.boundary_local_h.eval(1) * (t.ell_star_face.eval(1) + t.ell_star_cone.eval(1))).sum();
    let t_plus_one = IntPolynomial::t_plus_one();
    let decomposition: IntPolynomial = terms
        .iter()
        .map(|t| &t.boundary_local_h * &(&(&t_plus_one * &t.ell_star_face) + &t.ell_star_cone.scale(2)))
        .sum();

    let maximal: Vec<Vec<Point>> = far_facets(p, c).into_iter().map(|g| {
        let mut v = p.face_points(g);
        v.push(vec![0; n]);
        v
    }).collect();
    let t = PolyhedralComplex::from_maximal_cells(n, maximal)?;
    let tsub = boundary_subdivision(p, c, &t)?;
    let ttop = tsub.map.target().top().ok_or_else(|| Error::invariant("twins target has no maximum"))?;
    let mut twins_local_vanish = true;
    for y in tsub.map.boundary().expect("boundary subdivision").iter() {
        if !tsub.map.local_h_at(ttop, y)?.is_zero() {
            twins_local_vanish = false;
        }
    }
    let ell_star_star_glued = local_h_star_sfs(&tsub.agglutinate(&tsub)?)?;
    let holds = twins_local_vanish
        && monodromy_sum == nu
        && ell_star_star_glued == decomposition
        && ell_star_star_glued.eval(1) == 2 * nu;
    Ok(StapledonReport { nu, monodromy_sum, ell_star_star_glued, decomposition, twins_local_vanish, terms, holds })
}
