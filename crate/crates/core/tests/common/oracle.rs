//! Floating-point root counting, independent of the exact code paths.

use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Coefficients lowest degree first.
#[derive(Debug, Clone)]
pub struct Poly(pub Vec<C>);

impl Poly {
    pub fn constant(c: C) -> Poly {
        Poly(vec![c])
    }

    pub fn x() -> Poly {
        Poly(vec![C::new(0.0, 0.0), C::new(1.0, 0.0)])
    }

    pub fn eval(&self, x: C) -> C {
        self.0.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.0.get(i).copied().unwrap_or_default() + o.0.get(i).copied().unwrap_or_default()).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut v = vec![C::new(0.0, 0.0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v)
    }

    pub fn scale(&self, c: C) -> Poly {
        Poly(self.0.iter().map(|&a| a * c).collect())
    }

    fn trimmed(&self) -> Vec<C> {
        let mut v = self.0.clone();
        while v.last().is_some_and(|c| c.norm() < 1e-12) {
            v.pop();
        }
        v
    }

    /// All complex roots with multiplicity (Durand-Kerner, Newton polish).
    pub fn roots(&self) -> Vec<C> {
        let v = self.trimmed();
        if v.len() <= 1 {
            return vec![];
        }
        let lead = *v.last().unwrap();
        let monic: Vec<C> = v.iter().map(|c| c / lead).collect();
        let p = Poly(monic);
        let deg = v.len() - 1;
        let seed = C::new(0.4, 0.9);
        let mut z: Vec<C> = (0..deg).map(|k| seed.powu(k as u32)).collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..deg {
                let mut den = C::new(1.0, 0.0);
                for j in 0..deg {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                let step = p.eval(z[i]) / den;
                z[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        let dp = p.deriv();
        for r in z.iter_mut() {
            for _ in 0..5 {
                let d = dp.eval(*r);
                if d.norm() < 1e-300 {
                    break;
                }
                *r -= p.eval(*r) / d;
            }
        }
        z
    }
}

/// Distinct values up to a relative tolerance.
pub fn distinct(v: &[C], tol: f64) -> Vec<C> {
    let mut out: Vec<C> = Vec::new();
    for &x in v {
        if !out.iter().any(|y| (x - y).norm() <= tol * (1.0 + x.norm())) {
            out.push(x);
        }
    }
    out
}

pub fn random_coeff(r: &mut ChaCha8Rng) -> C {
    loop {
        let c = C::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        if c.norm() > 0.2 {
            return c;
        }
    }
}

fn nonzero(x: C) -> bool {
    x.norm() > 1e-7
}

/// Critical points in `C^*` of `log f` for generic `f` with the given
/// exponents, away from `f = 0`.
pub fn mml_univariate(exponents: &[usize], r: &mut ChaCha8Rng) -> usize {
    let deg = *exponents.iter().max().unwrap();
    let mut f = vec![C::new(0.0, 0.0); deg + 1];
    for &e in exponents {
        f[e] = random_coeff(r);
    }
    let f = Poly(f);
    let mut fp = f.deriv().0;
    // roots at 0 are outside the torus
    while fp.first().is_some_and(|c| c.norm() == 0.0) {
        fp.remove(0);
    }
    let roots: Vec<C> = Poly(fp).roots().into_iter().filter(|&x| nonzero(x) && nonzero(f.eval(x))).collect();
    distinct(&roots, 1e-6).len()
}

/// Preimages of a random point under the gradient map of a generic
/// binary form `Σ_{i ∈ support} c_i x^i y^{d-i}`, away from base points.
pub fn polar_binary(support: &[usize], d: usize, r: &mut ChaCha8Rng) -> usize {
    let mut c = vec![C::new(0.0, 0.0); d + 1];
    for &i in support {
        c[i] = random_coeff(r);
    }
    // chart y = 1; (1 : 0) is a preimage only if it is a base point
    let dx = Poly((0..d).map(|i| c[i + 1] * (i + 1) as f64).collect());
    let dy = Poly((0..d).map(|i| c[i] * (d - i) as f64).collect());
    let (a, b) = (random_coeff(r), random_coeff(r));
    let mut eq = dx.scale(b).add(&dy.scale(-a)).0;
    if dx.0[0].norm() == 0.0 && dy.0[0].norm() == 0.0 {
        while eq.first().is_some_and(|c| c.norm() == 0.0) {
            eq.remove(0);
        }
    }
    let roots: Vec<C> = Poly(eq).roots().into_iter().filter(|&x| nonzero(dx.eval(x)) || nonzero(dy.eval(x))).collect();
    distinct(&roots, 1e-6).len()
}

/// Critical points of `u_1 log x + u_2 log y` on a generic line in `(C^*)^2`.
pub fn ml_line(u: [f64; 2], r: &mut ChaCha8Rng) -> usize {
    let (a, b, c) = (random_coeff(r), random_coeff(r), random_coeff(r));
    // y(x) = -(a + b x) / c
    let y = Poly(vec![-a / c, -b / c]);
    let eq = y.scale(C::new(u[0], 0.0)).add(&Poly::x().mul(&y.deriv()).scale(C::new(u[1], 0.0)));
    let roots: Vec<C> = eq.roots().into_iter().filter(|&x| nonzero(x) && nonzero(y.eval(x))).collect();
    distinct(&roots, 1e-6).len()
}

/// Critical points of the squared distance from a generic point to a
/// generic line.
pub fn ed_line(r: &mut ChaCha8Rng) -> usize {
    let (a, b, c) = (random_coeff(r), random_coeff(r), random_coeff(r));
    let (p, q) = (random_coeff(r), random_coeff(r));
    let y = Poly(vec![-a / c, -b / c]);
    let eq = Poly(vec![-p, C::new(1.0, 0.0)]).add(&y.add(&Poly::constant(-q)).mul(&y.deriv()));
    distinct(&eq.roots(), 1e-6).len()
}
