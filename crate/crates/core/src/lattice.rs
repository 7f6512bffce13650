//! Integer linear algebra: row-style Hermite reduction with a unimodular
//! transform, integer kernels, ranks and exact determinants.

use num_integer::Integer;

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i128>>;

pub fn to_i128(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub fn to_i64(v: &[i128]) -> Result<Vec<i64>> {
    v.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("coordinate conversion"))).collect()
}

pub fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &[i128]) -> Vec<i128> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Result of reducing an `n x k` matrix `M` by integer row operations.
///
/// `transform` is unimodular and `transform * M` is in row echelon form
/// whose first `rank` rows are nonzero.
#[derive(Debug, Clone)]
pub struct RowReduction {
    pub echelon: Matrix,
    pub transform: Matrix,
    pub rank: usize,
}

/// Row-reduces `m` (given as rows) over the integers.
pub fn row_reduce(m: &[Vec<i128>], ncols: usize) -> RowReduction {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut u: Matrix = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut row = 0;
    for col in 0..ncols {
        if row == n {
            break;
        }
        loop {
            let pivot = (row..n).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs());
            let Some(p) = pivot else { break };
            a.swap(row, p);
            u.swap(row, p);
            let mut done = true;
            for i in row + 1..n {
                if a[i][col] != 0 {
                    let q = Integer::div_floor(&a[i][col], &a[row][col]);
                    for j in 0..ncols {
                        a[i][j] -= q * a[row][j];
                    }
                    for j in 0..n {
                        u[i][j] -= q * u[row][j];
                    }
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                row += 1;
                break;
            }
        }
    }
    RowReduction { echelon: a, transform: u, rank: row }
}

/// Columns of the given vectors as an `n x k` matrix.
fn columns(vectors: &[Vec<i128>], n: usize) -> Matrix {
    (0..n).map(|i| vectors.iter().map(|v| v[i]).collect()).collect()
}

pub fn rank(vectors: &[Vec<i128>], n: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    row_reduce(&columns(vectors, n), vectors.len()).rank
}

/// Basis of `{x in Z^n : <r, x> = 0 for all rows r}`. The basis spans a
/// saturated sublattice.
pub fn integer_kernel(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    if rows.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    }
    let red = row_reduce(&columns(rows, n), rows.len());
    red.transform[red.rank..].to_vec()
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// A lattice basis adapted to the affine span of a point set.
///
/// With `R = transform`, `R (p - origin)` has zeros beyond the first `dim`
/// coordinates for every `p` in the span, and those first coordinates give
/// the position in the saturated lattice of the span. The remaining
/// coordinates of `R v` give the class of `v` in the quotient lattice
/// `Z^n / (span ∩ Z^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanLattice {
    pub ambient: usize,
    pub origin: Vec<i128>,
    pub dim: usize,
    pub transform: Matrix,
}

impl SpanLattice {
    /// Span lattice of the affine hull of `points`. Panics on empty input.
    pub fn of_points(points: &[Vec<i128>], ambient: usize) -> SpanLattice {
        let origin = points[0].clone();
        let diffs: Vec<Vec<i128>> =
            points[1..].iter().map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
        Self::of_directions(&diffs, ambient, origin)
    }

    /// Span lattice of `origin + span(directions)`.
    pub fn of_directions(directions: &[Vec<i128>], ambient: usize, origin: Vec<i128>) -> SpanLattice {
        let transform = if directions.is_empty() {
            (0..ambient).map(|i| (0..ambient).map(|j| i128::from(i == j)).collect()).collect()
        } else {
            row_reduce(&columns(directions, ambient), directions.len()).transform
        };
        let dim = rank(directions, ambient);
        SpanLattice { ambient, origin, dim, transform }
    }

    fn apply(&self, v: &[i128]) -> Vec<i128> {
        self.transform.iter().map(|r| dot(r, v)).collect()
    }

    /// Coordinates of a point of the affine span in the span lattice.
    pub fn coords(&self, p: &[i128]) -> Vec<i128> {
        let v: Vec<i128> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let mut w = self.apply(&v);
        w.truncate(self.dim);
        w
    }

    /// Class of a vector in the quotient lattice by the span directions.
    pub fn quotient(&self, v: &[i128]) -> Vec<i128> {
        self.apply(v)[self.dim..].to_vec()
    }

    /// True if `p` lies in the affine span.
    pub fn contains(&self, p: &[i128]) -> bool {
        let v: Vec<i128> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.quotient(&v).iter().all(|&x| x == 0)
    }

    /// Lattice distance of `p` from the affine span, measured inside any
    /// saturated lattice containing both.
    pub fn lattice_distance(&self, p: &[i128]) -> i128 {
        let v: Vec<i128> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        gcd_all(&self.quotient(&v))
    }
}
