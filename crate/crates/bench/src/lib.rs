//! Fixtures shared by the benchmarks.

use polynewt::Polytope;

/// `conv(0, a e_1, ..., a e_n)`.
pub fn dilated_simplex(n: usize, a: i64) -> Polytope {
    let mut pts = vec![vec![0; n]];
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = a;
        pts.push(v);
    }
    Polytope::from_points(n, pts).expect("simplex")
}

/// `[0, a]^n`.
pub fn cube(n: usize, a: i64) -> Polytope {
    let pts = (0..1usize << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { a } else { 0 }).collect()).collect();
    Polytope::from_points(n, pts).expect("cube")
}
