//! Parametric quadratics `f(x, θ) = ½xᵀH(θ)x + b(θ)ᵀx` and their exact
//! solution maps.
//!
//! Sign convention: `x⋆(θ) = −H(θ)⁻¹b(θ)` and
//! `∂x⋆(θ) = −H⁻¹(∂H·x⋆ + ∂b)`.

mod data;
mod ridge;

pub use data::{read_csv, read_dataset, read_libsvm, Dataset};
pub use ridge::{make_ridge, make_synthetic, make_synthetic_with_metric, Ridge};

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest dimension handed to the dense eigensolver.
pub const SPECTRUM_DIM_CAP: usize = 2000;

/// A quadratic and its parameter derivatives at one `θ`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    pub h: DMatrix<f64>,
    pub b: DVector<f64>,
    /// `∂H/∂θ_i` for each parameter coordinate.
    pub dh: Vec<DMatrix<f64>>,
    /// `∂b/∂θ`, one column per parameter coordinate.
    pub db: DMatrix<f64>,
}

impl Quadratic {
    pub fn new(
        h: DMatrix<f64>,
        b: DVector<f64>,
        dh: Vec<DMatrix<f64>>,
        db: DMatrix<f64>,
    ) -> Result<Self> {
        let d = b.len();
        if h.shape() != (d, d) || db.nrows() != d || dh.len() != db.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "H {:?}, b {d}, dH x{}, db {:?}",
                h.shape(),
                dh.len(),
                db.shape()
            )));
        }
        if dh.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::DimensionMismatch("dH blocks must be d×d".into()));
        }
        let asym = (&h - h.transpose()).abs().max();
        if asym > 1e-12 * h.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(asym));
        }
        if h.iter().chain(b.iter()).chain(db.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quadratic data".into()));
        }
        Ok(Self { h, b, dh, db })
    }

    pub fn dim_x(&self) -> usize {
        self.b.len()
    }

    pub fn dim_theta(&self) -> usize {
        self.db.ncols()
    }

    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.h * x)) + self.b.dot(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.h * x + &self.b
    }

    /// `∂H·x`, one column per parameter coordinate.
    pub fn dh_times(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim_x(), self.dim_theta());
        for (i, m) in self.dh.iter().enumerate() {
            out.set_column(i, &(m * x));
        }
        out
    }

    fn cholesky(&self) -> Result<Cholesky<f64, nalgebra::Dyn>> {
        Cholesky::new(self.h.clone()).ok_or(Error::NotPositiveDefinite)
    }

    pub fn solve_exact(&self) -> Result<DVector<f64>> {
        Ok(-self.cholesky()?.solve(&self.b))
    }

    pub fn exact_jacobian(&self) -> Result<DMatrix<f64>> {
        let chol = self.cholesky()?;
        let x = -chol.solve(&self.b);
        let rhs = self.dh_times(&x) + &self.db;
        Ok(-chol.solve(&rhs))
    }

    /// `∂_θ∇f(x₀(θ), θ) = ∂H·x₀ + ∂b + H·∂x₀`.
    pub fn cross_derivative(&self, x0: &DVector<f64>, jac0: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x0.len() != self.dim_x() || jac0.shape() != (self.dim_x(), self.dim_theta()) {
            return Err(Error::DimensionMismatch(format!(
                "x0 has {} entries and jac0 is {:?}; expected {} and ({}, {})",
                x0.len(),
                jac0.shape(),
                self.dim_x(),
                self.dim_x(),
                self.dim_theta()
            )));
        }
        Ok(self.dh_times(x0) + &self.db + &self.h * jac0)
    }

    /// `max_i ‖∂H_i·H − H·∂H_i‖_F / (‖H‖_F‖∂H_i‖_F)`; zero when the
    /// Hessian commutes with its parameter derivative.
    pub fn commutativity_defect(&self) -> f64 {
        let hn = self.h.norm();
        self.dh
            .iter()
            .map(|m| {
                let c = m * &self.h - &self.h * m;
                c.norm() / (hn * m.norm() + f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    /// `(λ_min, λ_max)` of `H`.
    pub fn spectrum_bounds(&self) -> Result<(f64, f64)> {
        if self.dim_x() > SPECTRUM_DIM_CAP {
            return Err(Error::TooLarge(self.dim_x()));
        }
        let eig = SymmetricEigen::new(self.h.clone());
        let ev = eig.eigenvalues;
        Ok((ev.min(), ev.max()))
    }
}

/// A map `θ ↦ (H(θ), b(θ), ∂H(θ), ∂b(θ))` with spectrum bounds `ℓ ≤ L`
/// valid over the parameter range.
pub trait QuadraticFamily: Send + Sync {
    fn dim_x(&self) -> usize;
    fn dim_theta(&self) -> usize;
    fn evaluate(&self, theta: &DVector<f64>) -> Result<Quadratic>;
    /// `(ℓ, L)` enclosing the spectrum of `H(θ)` over the parameter range.
    fn spectrum_interval(&self) -> (f64, f64);
}

fn check_theta<F: QuadraticFamily + ?Sized>(family: &F, theta: &DVector<f64>) -> Result<()> {
    if theta.len() != family.dim_theta() {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} entries, family expects {}",
            theta.len(),
            family.dim_theta()
        )));
    }
    Ok(())
}

pub fn solve_exact<F: QuadraticFamily + ?Sized>(family: &F, theta: &DVector<f64>) -> Result<DVector<f64>> {
    family.evaluate(theta)?.solve_exact()
}

pub fn exact_jacobian<F: QuadraticFamily + ?Sized>(family: &F, theta: &DVector<f64>) -> Result<DMatrix<f64>> {
    family.evaluate(theta)?.exact_jacobian()
}

pub fn cross_derivative<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    x0: &DVector<f64>,
    jac0: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    family.evaluate(theta)?.cross_derivative(x0, jac0)
}

pub fn commutativity_defect<F: QuadraticFamily + ?Sized>(family: &F, theta: &DVector<f64>) -> Result<f64> {
    Ok(family.evaluate(theta)?.commutativity_defect())
}

pub fn spectrum_bounds<F: QuadraticFamily + ?Sized>(family: &F, theta: &DVector<f64>) -> Result<(f64, f64)> {
    family.evaluate(theta)?.spectrum_bounds()
}

/// `H(θ) = H₀ + Σθ_i·H_i`, `b(θ) = b₀ + B·θ`.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    h0: DMatrix<f64>,
    h_terms: Vec<DMatrix<f64>>,
    b0: DVector<f64>,
    b_jac: DMatrix<f64>,
    ell: f64,
    big_l: f64,
}

impl AffineFamily {
    pub fn new(
        h0: DMatrix<f64>,
        h_terms: Vec<DMatrix<f64>>,
        b0: DVector<f64>,
        b_jac: DMatrix<f64>,
        ell: f64,
        big_l: f64,
    ) -> Result<Self> {
        if !(ell > 0.0 && ell <= big_l && big_l.is_finite()) {
            return Err(Error::InvalidSpectrum { ell, big_l });
        }
        // validates shapes and symmetry
        Quadratic::new(h0.clone(), b0.clone(), h_terms.clone(), b_jac.clone())?;
        Ok(Self {
            h0,
            h_terms,
            b0,
            b_jac,
            ell,
            big_l,
        })
    }

    /// `f(x, θ) = ½θx² + x`, so `x⋆ = −1/θ` and `∂x⋆ = 1/θ²`. Spectrum
    /// bounds are those at `θ = 1`.
    pub fn scalar_toy() -> Self {
        Self::new(
            DMatrix::zeros(1, 1),
            vec![DMatrix::identity(1, 1)],
            DVector::from_element(1, 1.0),
            DMatrix::zeros(1, 1),
            1.0,
            1.0,
        )
        .expect("valid scalar family")
    }
}

impl QuadraticFamily for AffineFamily {
    fn dim_x(&self) -> usize {
        self.b0.len()
    }

    fn dim_theta(&self) -> usize {
        self.h_terms.len()
    }

    fn evaluate(&self, theta: &DVector<f64>) -> Result<Quadratic> {
        check_theta(self, theta)?;
        let mut h = self.h0.clone();
        for (m, &t) in self.h_terms.iter().zip(theta.iter()) {
            h += m * t;
        }
        let b = &self.b0 + &self.b_jac * theta;
        Quadratic::new(h, b, self.h_terms.clone(), self.b_jac.clone())
    }

    fn spectrum_interval(&self) -> (f64, f64) {
        (self.ell, self.big_l)
    }
}
