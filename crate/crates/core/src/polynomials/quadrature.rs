//! Gauss rules for the Gegenbauer weight `(1 − x²)^{α−1/2}` on `[−1, 1]`.
//!
//! Nodes and weights come from the Golub–Welsch eigenproblem of the monic
//! three-term recurrence. The rule is exact for polynomials of degree
//! `2n − 1`; tests check it against the closed-form moments
//! `∫ x^{2k} w = B(k + 1/2, α + 1/2)`.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use super::families::gegenbauer_gamma;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    /// Raw weights; they sum to `∫ w`.
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Rule from the off-diagonal recurrence coefficients `γ_1..γ_{n−1}` of a
    /// symmetric weight with total mass `mu0`.
    pub fn golub_welsch(gammas: &[f64], mu0: f64) -> Result<Self> {
        let n = gammas.len() + 1;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for (k, &g) in gammas.iter().enumerate() {
            if !(g > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "recurrence coefficient {g} at index {} must be positive",
                    k + 1
                )));
            }
            let b = g.sqrt();
            jac[(k, k + 1)] = b;
            jac[(k + 1, k)] = b;
        }
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let v0 = eig.eigenvectors[(0, j)];
                (eig.eigenvalues[j], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `∫_{−1}^{1} (1 − x²)^{α−1/2} dx = B(1/2, α + 1/2)`.
pub fn gegenbauer_mass(alpha: f64) -> f64 {
    (ln_gamma(0.5) + ln_gamma(alpha + 0.5) - ln_gamma(alpha + 1.0)).exp()
}

/// `n`-point Gauss–Gegenbauer rule with raw weights.
pub fn gauss_gegenbauer(alpha: f64, n: usize) -> Result<GaussRule> {
    if !(alpha > -0.5) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must exceed -1/2, got {alpha}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    let gammas: Vec<f64> = (1..n).map(|t| gegenbauer_gamma(alpha, t)).collect();
    GaussRule::golub_welsch(&gammas, gegenbauer_mass(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_one_mass_is_half_pi() {
        let rule = gauss_gegenbauer(1.0, 8).unwrap();
        assert!((rule.total_mass() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_nodes_at_alpha_zero() {
        let n = 6;
        let rule = gauss_gegenbauer(0.0, n).unwrap();
        for (j, &x) in rule.nodes.iter().enumerate() {
            let k = n - j;
            let expect = ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            assert!((x - expect).abs() < 1e-13);
        }
        for &w in &rule.weights {
            assert!((w - std::f64::consts::PI / n as f64).abs() < 1e-13);
        }
    }
}
