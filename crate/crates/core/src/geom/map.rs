use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{to_i128, to_i64, SpanLattice};

use super::{LatticePointSet, Polytope};

/// Integer affine map `x -> M x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl LatticeMap {
    pub fn new(matrix: Vec<Vec<i64>>, translation: Vec<i64>) -> Result<LatticeMap> {
        if matrix.len() != translation.len() {
            return Err(Error::DimensionMismatch(format!(
                "map has {} rows but translation of length {}",
                matrix.len(),
                translation.len()
            )));
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != matrix[0].len()) {
            return Err(Error::DimensionMismatch(format!("ragged matrix row of length {}", r.len())));
        }
        Ok(LatticeMap { matrix, translation })
    }

    pub fn linear(matrix: Vec<Vec<i64>>) -> Result<LatticeMap> {
        let t = vec![0; matrix.len()];
        Self::new(matrix, t)
    }

    pub fn identity(n: usize) -> LatticeMap {
        LatticeMap {
            matrix: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
            translation: vec![0; n],
        }
    }

    /// Projection `Z^n -> Z^n / (span(directions) ∩ Z^n)` to a basis of the
    /// quotient lattice.
    pub fn quotient_along(n: usize, directions: &[Vec<i64>]) -> Result<LatticeMap> {
        if let Some(d) = directions.iter().find(|d| d.len() != n) {
            return Err(Error::DimensionMismatch(format!("direction {d:?} is not in dimension {n}")));
        }
        let dirs: Vec<Vec<i128>> = directions.iter().map(|d| to_i128(d)).collect();
        let sl = SpanLattice::of_directions(&dirs, n, vec![0; n]);
        let rows = sl.transform[sl.dim..].iter().map(|r| to_i64(r)).collect::<Result<Vec<_>>>()?;
        Ok(LatticeMap { translation: vec![0; rows.len()], matrix: rows })
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.iter().zip(&self.translation).map(|(r, b)| r.iter().zip(x).map(|(a, y)| a * y).sum::<i64>() + b).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.source_dim() != other.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose a map from Z^{} with a map into Z^{}",
                self.source_dim(),
                other.target_dim()
            )));
        }
        let cols = other.source_dim();
        let matrix = self
            .matrix
            .iter()
            .map(|r| (0..cols).map(|j| r.iter().zip(&other.matrix).map(|(a, o)| a * o[j]).sum()).collect())
            .collect();
        let translation = self.apply(&other.translation);
        Ok(LatticeMap { matrix, translation })
    }

    /// Image of a point set, in coordinates of the saturated lattice of the
    /// affine span of the image.
    pub fn project(&self, a: &LatticePointSet) -> Result<LatticePointSet> {
        if a.ambient_dim() != self.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "map expects dimension {}, point set has {}",
                self.source_dim(),
                a.ambient_dim()
            )));
        }
        let img: Vec<Vec<i128>> = a.points().iter().map(|p| to_i128(&self.apply(p))).collect();
        let mut sorted = img.clone();
        sorted.sort();
        let sl = SpanLattice::of_points(&sorted, self.target_dim());
        let pts = img.iter().map(|p| to_i64(&sl.coords(p))).collect::<Result<Vec<_>>>()?;
        LatticePointSet::new(sl.dim, pts)
    }

    /// Image of a polytope, kept in the target coordinates.
    pub fn image(&self, p: &Polytope) -> Result<Polytope> {
        Polytope::from_points(self.target_dim(), p.vertices().iter().map(|v| self.apply(v)).collect())
    }

    /// Determinant of a square linear part.
    pub fn determinant(&self) -> Option<i128> {
        if self.source_dim() != self.target_dim() {
            return None;
        }
        let m: Vec<Vec<i128>> = self.matrix.iter().map(|r| to_i128(r)).collect();
        Some(crate::lattice::determinant(&m))
    }
}
