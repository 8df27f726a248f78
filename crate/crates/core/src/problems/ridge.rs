//! Ridge regression `f(x, θ) = ½(‖Ax − y‖² + θ‖x − x̄‖²_D)`.
//!
//! `H(θ) = AᵀA + θD`, `b(θ) = −Aᵀy − θDx̄`, `∂H = D`, `∂b = −Dx̄`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::{Quadratic, QuadraticFamily, SPECTRUM_DIM_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ridge {
    design: DMatrix<f64>,
    target: DVector<f64>,
    center: DVector<f64>,
    metric: DVector<f64>,
    theta_range: (f64, f64),
    gram: DMatrix<f64>,
    aty: DVector<f64>,
    gram_spectrum: (f64, f64),
}

/// Build a ridge family over `θ ∈ [θ_min, θ_max]`. A point range
/// `θ_min = θ_max` is allowed. `metric` defaults to the identity.
pub fn make_ridge(
    design: DMatrix<f64>,
    target: DVector<f64>,
    center: DVector<f64>,
    metric: Option<DVector<f64>>,
    theta_range: (f64, f64),
) -> Result<Ridge> {
    let (n, d) = design.shape();
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("design matrix is empty".into()));
    }
    if target.len() != n || center.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "design is {n}×{d}, target has {}, center has {}",
            target.len(),
            center.len()
        )));
    }
    if d > SPECTRUM_DIM_CAP {
        return Err(Error::TooLarge(d));
    }
    let metric = metric.unwrap_or_else(|| DVector::from_element(d, 1.0));
    if metric.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "metric has {} entries, expected {d}",
            metric.len()
        )));
    }
    if let Some(bad) = metric.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "metric entries must be positive, got {bad}"
        )));
    }
    let (lo, hi) = theta_range;
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "theta range [{lo}, {hi}] must be a nonempty subset of (0, inf)"
        )));
    }
    if design.iter().chain(target.iter()).chain(center.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("ridge data".into()));
    }
    let gram = design.tr_mul(&design);
    let aty = design.tr_mul(&target);
    let ev = SymmetricEigen::new(gram.clone()).eigenvalues;
    let gram_spectrum = (ev.min().max(0.0), ev.max());
    Ok(Ridge {
        design,
        target,
        center,
        metric,
        theta_range,
        gram,
        aty,
        gram_spectrum,
    })
}

impl Ridge {
    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn metric(&self) -> &DVector<f64> {
        &self.metric
    }

    pub fn theta_range(&self) -> (f64, f64) {
        self.theta_range
    }

    /// Spectral norm `‖A‖₂`.
    pub fn design_norm(&self) -> f64 {
        self.gram_spectrum.1.sqrt()
    }

    /// `1e-3·‖A‖₂`.
    pub fn default_theta(&self) -> f64 {
        1e-3 * self.design_norm()
    }

    /// Same data over another parameter range.
    pub fn with_theta_range(&self, theta_range: (f64, f64)) -> Result<Ridge> {
        make_ridge(
            self.design.clone(),
            self.target.clone(),
            self.center.clone(),
            Some(self.metric.clone()),
            theta_range,
        )
    }

    /// Same data with another center `x̄`.
    pub fn with_center(&self, center: DVector<f64>) -> Result<Ridge> {
        make_ridge(
            self.design.clone(),
            self.target.clone(),
            center,
            Some(self.metric.clone()),
            self.theta_range,
        )
    }
}

impl QuadraticFamily for Ridge {
    fn dim_x(&self) -> usize {
        self.design.ncols()
    }

    fn dim_theta(&self) -> usize {
        1
    }

    fn evaluate(&self, theta: &DVector<f64>) -> Result<Quadratic> {
        if theta.len() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "ridge has a scalar parameter, got {} entries",
                theta.len()
            )));
        }
        let t = theta[0];
        let dmat = DMatrix::from_diagonal(&self.metric);
        let h = &self.gram + &dmat * t;
        let dx = self.metric.component_mul(&self.center);
        let b = -&self.aty - &dx * t;
        let db = DMatrix::from_column_slice(dx.len(), 1, (-dx).as_slice());
        Quadratic::new(h, b, vec![dmat], db)
    }

    fn spectrum_interval(&self) -> (f64, f64) {
        let (g_lo, g_hi) = self.gram_spectrum;
        let (t_lo, t_hi) = self.theta_range;
        (
            g_lo + t_lo * self.metric.min(),
            g_hi + t_hi * self.metric.max(),
        )
    }
}

fn gaussian_data(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (DMatrix<f64>, DVector<f64>) {
    let a: Vec<f64> = (0..n * d).map(|_| StandardNormal.sample(rng)).collect();
    let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    (DMatrix::from_row_slice(n, d, &a), DVector::from_vec(y))
}

/// Gaussian ridge instance with `x̄ = 0`, `D = I` and `θ = 1e-3·‖A‖₂`.
///
/// Entries come from `ChaCha8Rng::seed_from_u64(seed)` through
/// `rand_distr::StandardNormal`: first `A` in row-major order, then `y`.
pub fn make_synthetic(n: usize, d: usize, seed: u64) -> Result<Ridge> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("n and d must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, y) = gaussian_data(&mut rng, n, d);
    finish_synthetic(a, y, None)
}

/// Like [`make_synthetic`], with a diagonal metric whose entries are drawn
/// from a chi-squared distribution with one degree of freedom after `y`.
/// The resulting Hessian does not commute with `∂H = D`.
pub fn make_synthetic_with_metric(n: usize, d: usize, seed: u64) -> Result<Ridge> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("n and d must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, y) = gaussian_data(&mut rng, n, d);
    let chi = ChiSquared::new(1.0).expect("valid degrees of freedom");
    let metric = DVector::from_iterator(d, (0..d).map(|_| chi.sample(&mut rng)));
    finish_synthetic(a, y, Some(metric))
}

fn finish_synthetic(a: DMatrix<f64>, y: DVector<f64>, metric: Option<DVector<f64>>) -> Result<Ridge> {
    let d = a.ncols();
    let norm = a.norm().max(f64::MIN_POSITIVE);
    let probe = make_ridge(a, y, DVector::zeros(d), metric, (norm, norm))?;
    let theta = probe.default_theta();
    probe.with_theta_range((theta, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{commutativity_defect, exact_jacobian, solve_exact};
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn one_dimensional_ridge() {
        let r = make_ridge(dmatrix![1.0], dvector![2.0], dvector![0.0], None, (1.0, 1.0)).unwrap();
        let q = r.evaluate(&dvector![1.0]).unwrap();
        assert_eq!(q.h, dmatrix![2.0]);
        assert_eq!(q.b, dvector![-2.0]);
        assert!((solve_exact(&r, &dvector![1.0]).unwrap()[0] - 1.0).abs() < 1e-15);
        assert!((exact_jacobian(&r, &dvector![1.0]).unwrap()[(0, 0)] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn proximity_only_ridge() {
        let r = make_ridge(dmatrix![0.0], dvector![0.0], dvector![3.0], None, (1.0, 1.0)).unwrap();
        assert!((solve_exact(&r, &dvector![1.0]).unwrap()[0] - 3.0).abs() < 1e-15);
        let c = r.evaluate(&dvector![1.0]).unwrap().cross_derivative(&dvector![0.0], &DMatrix::zeros(1, 1)).unwrap();
        assert_eq!(c[(0, 0)], -3.0);
    }

    #[test]
    fn rejects_bad_input() {
        let a = dmatrix![1.0];
        let y = dvector![1.0];
        let c = dvector![0.0];
        assert!(make_ridge(a.clone(), y.clone(), c.clone(), Some(dvector![0.0]), (1.0, 1.0)).is_err());
        assert!(make_ridge(a.clone(), y.clone(), c.clone(), None, (0.0, 1.0)).is_err());
        assert!(make_ridge(a.clone(), y.clone(), c.clone(), None, (2.0, 1.0)).is_err());
        assert!(make_ridge(DMatrix::zeros(0, 0), DVector::zeros(0), DVector::zeros(0), None, (1.0, 1.0)).is_err());
    }

    #[test]
    fn synthetic_is_reproducible() {
        let a = make_synthetic(200, 100, 0).unwrap();
        let b = make_synthetic(200, 100, 0).unwrap();
        let t = dvector![a.default_theta()];
        assert_eq!(a.evaluate(&t).unwrap().h, b.evaluate(&t).unwrap().h);
        assert_eq!(a.design().shape(), (200, 100));
        assert!(a.gram_spectrum.0 >= 0.0);
        assert_ne!(make_synthetic(20, 5, 1).unwrap().design(), make_synthetic(20, 5, 2).unwrap().design());
    }

    #[test]
    fn metric_controls_commutativity() {
        let r = make_synthetic(30, 10, 3).unwrap();
        let t = dvector![r.default_theta()];
        assert!(commutativity_defect(&r, &t).unwrap() <= 1e-13);
        let r = make_synthetic_with_metric(30, 10, 3).unwrap();
        assert!(commutativity_defect(&r, &dvector![1.0]).unwrap() > 1e-3);
    }
}
