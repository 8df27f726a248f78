//! Dense polynomials as Chebyshev series in a mapped variable.
//!
//! A [`Poly`] stores coefficients `c_k` and an affine map
//! `u = slope·λ + offset`, and represents `λ ↦ Σ c_k T_k(u)`. Residual
//! polynomials of spectrum-aware methods use `u = m(λ)`, which sends
//! `[ℓ, L]` onto `[−1, 1]`; there the Chebyshev basis is well conditioned
//! at any degree. Monomial coefficients in `λ` are available through
//! [`Poly::monomial_coeffs`] for small degrees only: their magnitudes grow
//! like `(1+√2)^t` and swamp double precision long before degree 60.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Affine change of variable `u = slope·λ + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub slope: f64,
    pub offset: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        slope: 1.0,
        offset: 0.0,
    };

    pub fn new(slope: f64, offset: f64) -> Self {
        Self { slope, offset }
    }

    /// `m(λ) = (2λ − L − ℓ)/(L − ℓ)`, sending `[ℓ, L]` onto `[−1, 1]`.
    pub fn spectrum(ell: f64, big_l: f64) -> Self {
        let w = big_l - ell;
        Self {
            slope: 2.0 / w,
            offset: -(big_l + ell) / w,
        }
    }

    #[inline]
    pub fn apply(&self, lambda: f64) -> f64 {
        self.slope * lambda + self.offset
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Anything that can report `(p(λ), p'(λ))` at a point.
pub trait PolyEval {
    fn value_and_slope(&self, lambda: f64) -> (f64, f64);

    fn value(&self, lambda: f64) -> f64 {
        self.value_and_slope(lambda).0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    cheb: Vec<f64>,
    map: AffineMap,
}

impl Poly {
    /// Polynomial in `λ` from ascending monomial coefficients.
    pub fn new(monomial: Vec<f64>) -> Self {
        Self::from_monomial_in(&monomial, AffineMap::IDENTITY)
    }

    /// Polynomial `Σ c_k u^k` in the mapped variable `u = map(λ)`.
    pub fn from_monomial_in(monomial: &[f64], map: AffineMap) -> Self {
        let mut acc = Poly::zero(map);
        for &c in monomial.iter().rev() {
            acc = acc.mul_mapped_variable();
            acc.add_constant(c);
        }
        acc
    }

    /// Polynomial `Σ c_k T_k(u)`.
    pub fn from_chebyshev(cheb: Vec<f64>, map: AffineMap) -> Self {
        let mut p = Self { cheb, map };
        p.trim();
        p
    }

    pub fn zero(map: AffineMap) -> Self {
        Self::from_chebyshev(Vec::new(), map)
    }

    pub fn constant(c: f64, map: AffineMap) -> Self {
        Self::from_chebyshev(vec![c], map)
    }

    /// The mapped variable `u` itself.
    pub fn variable(map: AffineMap) -> Self {
        Self::from_chebyshev(vec![0.0, 1.0], map)
    }

    fn trim(&mut self) {
        while self.cheb.last() == Some(&0.0) {
            self.cheb.pop();
        }
    }

    fn add_constant(&mut self, c: f64) {
        if self.cheb.is_empty() {
            self.cheb.push(0.0);
        }
        self.cheb[0] += c;
        self.trim();
    }

    pub fn chebyshev_coeffs(&self) -> &[f64] {
        &self.cheb
    }

    pub fn map(&self) -> AffineMap {
        self.map
    }

    pub fn is_zero(&self) -> bool {
        self.cheb.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.cheb.len().saturating_sub(1)
    }

    /// Leading coefficient as a polynomial in the mapped variable.
    pub fn leading(&self) -> f64 {
        match self.cheb.len() {
            0 => 0.0,
            1 => self.cheb[0],
            n => self.cheb[n - 1] * 2f64.powi(n as i32 - 2),
        }
    }

    /// Ascending monomial coefficients in the mapped variable.
    pub fn mapped_monomial_coeffs(&self) -> Vec<f64> {
        let n = self.cheb.len();
        let mut out = vec![0.0; n];
        // T_k in the monomial basis, by T_{k+1} = 2u·T_k − T_{k−1}
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 1.0];
        for (k, &c) in self.cheb.iter().enumerate() {
            let basis = match k {
                0 => &prev,
                1 => &cur,
                _ => {
                    let mut next = vec![0.0; k + 1];
                    for (i, &v) in cur.iter().enumerate() {
                        next[i + 1] += 2.0 * v;
                    }
                    for (i, &v) in prev.iter().enumerate() {
                        next[i] -= v;
                    }
                    prev = std::mem::replace(&mut cur, next);
                    &cur
                }
            };
            for (i, &v) in basis.iter().enumerate() {
                out[i] += c * v;
            }
        }
        out
    }

    /// Ascending monomial coefficients in `λ`. Ill-conditioned beyond
    /// moderate degree; meant for inspection and tests.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        let AffineMap { slope, offset } = self.map;
        let mut acc: Vec<f64> = Vec::new();
        for &c in self.mapped_monomial_coeffs().iter().rev() {
            // acc ← acc·(slope·λ + offset) + c
            let mut next = vec![0.0; acc.len() + 1];
            for (i, &v) in acc.iter().enumerate() {
                next[i] += offset * v;
                next[i + 1] += slope * v;
            }
            next[0] += c;
            acc = next;
        }
        while acc.last() == Some(&0.0) {
            acc.pop();
        }
        acc
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_mapped(self.map.apply(lambda))
    }

    /// Clenshaw evaluation at a point of the mapped variable.
    pub fn eval_mapped(&self, u: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.cheb.iter().skip(1).rev() {
            let b0 = c + 2.0 * u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.cheb.first().copied().unwrap_or(0.0) + u * b1 - b2
    }

    /// Derivative with respect to `λ`.
    pub fn derivative(&self) -> Poly {
        let n = self.cheb.len();
        if n <= 1 {
            return Poly::zero(self.map);
        }
        let mut c = self.cheb.clone();
        let mut der = vec![0.0; n - 1];
        for j in (3..n).rev() {
            der[j - 1] = 2.0 * j as f64 * c[j];
            c[j - 2] += j as f64 * c[j] / (j as f64 - 2.0);
        }
        if n > 2 {
            der[1] = 4.0 * c[2];
        }
        der[0] = c[1];
        let s = self.map.slope;
        Poly::from_chebyshev(der.into_iter().map(|d| d * s).collect(), self.map)
    }

    /// Multiply by the mapped variable `u`.
    pub fn mul_mapped_variable(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0.0; self.cheb.len() + 1];
        for (k, &c) in self.cheb.iter().enumerate() {
            if k == 0 {
                out[1] += c;
            } else {
                out[k + 1] += 0.5 * c;
                out[k - 1] += 0.5 * c;
            }
        }
        Poly::from_chebyshev(out, self.map)
    }

    /// Multiply by `λ = (u − offset)/slope`.
    pub fn mul_lambda(&self) -> Poly {
        let AffineMap { slope, offset } = self.map;
        let shifted = self.mul_mapped_variable();
        (&shifted - &(self * offset)) * (1.0 / slope)
    }

    /// `p(H)` for a symmetric matrix, by Clenshaw in `U = slope·H + offset·I`.
    pub fn eval_matrix(&self, h: &DMatrix<f64>) -> DMatrix<f64> {
        let n = h.nrows();
        let eye = DMatrix::<f64>::identity(n, n);
        let u = h * self.map.slope + &eye * self.map.offset;
        let mut b1 = DMatrix::<f64>::zeros(n, n);
        let mut b2 = DMatrix::<f64>::zeros(n, n);
        for &c in self.cheb.iter().skip(1).rev() {
            let b0 = &u * &b1 * 2.0 - &b2 + &eye * c;
            b2 = std::mem::replace(&mut b1, b0);
        }
        &eye * self.cheb.first().copied().unwrap_or(0.0) + &u * &b1 - &b2
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.combine(other, 1.0)
    }

    fn combine(&self, other: &Poly, sign: f64) -> Result<Poly> {
        if self.map != other.map && !self.is_zero() && !other.is_zero() {
            return Err(Error::MapMismatch);
        }
        let map = if self.is_zero() { other.map } else { self.map };
        let n = self.cheb.len().max(other.cheb.len());
        let cheb = (0..n)
            .map(|k| {
                self.cheb.get(k).copied().unwrap_or(0.0)
                    + sign * other.cheb.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Ok(Poly::from_chebyshev(cheb, map))
    }
}

impl PolyEval for Poly {
    fn value_and_slope(&self, lambda: f64) -> (f64, f64) {
        (self.eval(lambda), self.derivative().eval(lambda))
    }
}

/// Panics when the operands use different maps; see [`Poly::try_add`].
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.combine(rhs, 1.0).expect("operands share a variable map")
    }
}

/// Panics when the operands use different maps.
impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.combine(rhs, -1.0).expect("operands share a variable map")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self * -1.0
    }
}

impl Mul<f64> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: f64) -> Poly {
        Poly::from_chebyshev(self.cheb.iter().map(|c| c * rhs).collect(), self.map)
    }
}

impl Mul<f64> for Poly {
    type Output = Poly;
    fn mul(self, rhs: f64) -> Poly {
        &self * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn eval_and_derivative_basics() {
        assert_eq!(Poly::new(vec![1.0, -1.0]).eval(1.0), 0.0);
        let d = Poly::new(vec![1.0, 0.0, 2.0]).derivative();
        assert!(close(&d.monomial_coeffs(), &[0.0, 4.0], 1e-15));
        let d = Poly::new(vec![1.0, -0.3]).derivative();
        assert!(close(&d.monomial_coeffs(), &[-0.3], 1e-15));
    }

    #[test]
    fn monomial_round_trip() {
        let c = vec![0.5, -1.0, 2.0, 0.25, -3.0];
        assert!(close(&Poly::new(c.clone()).monomial_coeffs(), &c, 1e-14));
        let map = AffineMap::spectrum(1.0, 3.0);
        let p = Poly::from_monomial_in(&c, map);
        assert!(close(&p.mapped_monomial_coeffs(), &c, 1e-14));
        assert!((p.leading() + 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_is_canonical() {
        assert!(Poly::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(Poly::new(vec![1.0, 2.0, 0.0]).degree(), 1);
    }

    #[test]
    fn mapped_matches_monomial() {
        let map = AffineMap::spectrum(1.0, 3.0);
        let p = Poly::from_chebyshev(vec![0.5, -1.0, 2.0, 0.7], map);
        let q = Poly::new(p.monomial_coeffs());
        for &x in &[0.0, 1.0, 1.7, 3.0] {
            assert!((p.eval(x) - q.eval(x)).abs() < 1e-12);
            let (_, dp) = p.value_and_slope(x);
            let (_, dq) = q.value_and_slope(x);
            assert!((dp - dq).abs() < 1e-11);
        }
    }

    #[test]
    fn mul_lambda_in_mapped_variable() {
        let map = AffineMap::spectrum(0.5, 10.0);
        let p = Poly::from_chebyshev(vec![1.0, 2.0, -0.5], map);
        let q = p.mul_lambda();
        for &x in &[0.0, 0.5, 4.0, 10.0] {
            assert!((q.eval(x) - x * p.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_evaluation_on_diagonal() {
        let p = Poly::from_chebyshev(vec![1.0, -1.0, 0.25, 0.1], AffineMap::new(0.5, -1.0));
        let h = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 2.0, 4.0]);
        let m = p.eval_matrix(&h);
        for i in 0..3 {
            assert!((m[(i, i)] - p.eval(h[(i, i)])).abs() < 1e-14);
        }
    }

    #[test]
    fn mismatched_maps_are_rejected() {
        let a = Poly::variable(AffineMap::IDENTITY);
        let b = Poly::variable(AffineMap::new(2.0, 0.0));
        assert!(a.try_add(&b).is_err());
    }
}
