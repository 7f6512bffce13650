//! Dense univariate polynomials with exact coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer polynomial, coefficient of `t^i` at index `i`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `(t - 1)^k`.
    pub fn t_minus_one_pow(k: usize) -> Self {
        let base = Self::new(vec![-1, 1]);
        (0..k).fold(Self::one(), |acc, _| &acc * &base)
    }

    /// `(t + 1)`.
    pub fn t_plus_one() -> Self {
        Self::new(vec![1, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `t^n p(1/t)`; requires `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.coeffs.len() <= n + 1, "reverse degree {n} below polynomial degree");
        let mut v = vec![0; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[n - i] = c;
        }
        Self::new(v)
    }

    /// Keeps only the terms of degree `< k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().take(k).copied().collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self::new(v)
    }

    /// True if `t^c p(1/t) = p(t)`, where `c` is twice the center.
    pub fn is_symmetric_about(&self, twice_center: usize) -> bool {
        if self.coeffs.len() > twice_center + 1 {
            return false;
        }
        (0..=twice_center).all(|i| self.coeff(i) == self.coeff(twice_center - i))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Unimodal: coefficients rise weakly then fall weakly.
    pub fn is_unimodal(&self) -> bool {
        let c = &self.coeffs;
        let mut i = 1;
        while i < c.len() && c[i] >= c[i - 1] {
            i += 1;
        }
        while i < c.len() && c[i] <= c[i - 1] {
            i += 1;
        }
        i >= c.len()
    }

    /// Exact division by `1 - t`, `None` when it leaves a remainder.
    pub fn div_one_minus_t(&self) -> Option<Self> {
        // p = (1 - t) q  =>  q_i = p_i + q_{i-1}
        let mut q = Vec::with_capacity(self.coeffs.len());
        let mut acc = 0;
        for &c in &self.coeffs {
            acc += c;
            q.push(acc);
        }
        if acc != 0 {
            return None;
        }
        q.pop();
        Some(Self::new(q))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{sign}{a}")?,
                (1, 1) => write!(f, "{sign}t")?,
                (1, _) => write!(f, "{sign}{a}t")?,
                (_, 1) => write!(f, "{sign}t^{i}")?,
                _ => write!(f, "{sign}{a}t^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_zero() {
            vec![0i64].serialize(s)
        } else {
            self.coeffs.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(IntPolynomial::new(Vec::<i64>::deserialize(d)?))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&IntPolynomial> for IntPolynomial {
    fn add_assign(&mut self, rhs: &IntPolynomial) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&IntPolynomial> for IntPolynomial {
    fn sub_assign(&mut self, rhs: &IntPolynomial) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::zero(), |a, b| &a + &b)
    }
}

pub type Rational = Ratio<i128>;

/// Polynomial with rational coefficients (Ehrhart polynomials).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Rational::from_integer(0)) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, m: i64) -> Rational {
        let x = Rational::from_integer(m as i128);
        self.coeffs.iter().rev().fold(Rational::from_integer(0), |acc, c| acc * x + c)
    }

    /// The interpolating polynomial with `p(i) = values[i]`, `i = 0..len`.
    pub fn interpolate(values: &[i128]) -> Self {
        // Newton forward differences in the binomial basis.
        let mut diffs = values.to_vec();
        let mut leading = Vec::with_capacity(values.len());
        for k in 0..values.len() {
            leading.push(diffs[0]);
            for i in 0..values.len() - k - 1 {
                diffs[i] = diffs[i + 1] - diffs[i];
            }
        }
        let zero = Rational::from_integer(0);
        let mut result = vec![zero; values.len().max(1)];
        // binom(m, k) as a polynomial in m, built incrementally.
        let mut basis = vec![Rational::from_integer(1)];
        for (k, &d) in leading.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                result[i] += *b * Rational::from_integer(d);
            }
            // basis *= (m - k) / (k + 1)
            let mut next = vec![zero; basis.len() + 1];
            let denom = Rational::from_integer(k as i128 + 1);
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += *b / denom;
                next[i] -= *b * Rational::from_integer(k as i128) / denom;
            }
            basis = next;
        }
        Self::new(result)
    }
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = if self.coeffs.is_empty() {
            vec!["0".into()]
        } else {
            self.coeffs.iter().map(|c| c.to_string()).collect()
        };
        v.serialize(s)
    }
}
