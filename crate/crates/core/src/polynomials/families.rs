//! Monic Gegenbauer and Sobolev orthogonal polynomials on `[−1, 1]`.
//!
//! Monic Gegenbauer: `G̃_0 = 1`, `G̃_1 = x`, `G̃_{t+1} = x·G̃_t − γ_t·G̃_{t−1}`
//! with `γ_t = t(t+2α−1) / (4(t+α)(t+α−1))`. The same number is the squared
//! norm ratio `K_t = ‖G̃_t‖²/‖G̃_{t−1}‖²`.
//!
//! Monic Sobolev, orthogonal for `∫pq w + η̃∫p'q' w`:
//! `S̃_t = d_{t−2}·S̃_{t−2} + G̃_t − ξ_{t−2}·G̃_{t−2}`.

use super::poly::Poly;
use crate::error::{Error, Result};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must be finite and exceed -1/2, got {alpha}"
        )))
    }
}

/// Monic recurrence coefficient `γ_t`, `t ≥ 1`. At `t = 1` the closed form
/// `1/(2(1+α))` avoids the `0/0` of the general expression at `α = 0`.
pub fn gegenbauer_gamma(alpha: f64, t: usize) -> f64 {
    assert!(t >= 1, "gamma is defined for t >= 1");
    if t == 1 {
        return 1.0 / (2.0 * (1.0 + alpha));
    }
    let t = t as f64;
    t * (t + 2.0 * alpha - 1.0) / (4.0 * (t + alpha) * (t + alpha - 1.0))
}

/// Squared-norm ratio `K_t = ‖G̃_t‖² / ‖G̃_{t−1}‖²`.
pub fn norm_ratio(alpha: f64, t: usize) -> f64 {
    gegenbauer_gamma(alpha, t)
}

/// `ξ_t = (t+2)(t+1) / (4(t+α+1)(t+α))`, infinite for `t = 0, α = 0`.
pub fn sobolev_xi(alpha: f64, t: usize) -> f64 {
    let t = t as f64;
    let den = 4.0 * (t + alpha + 1.0) * (t + alpha);
    if den == 0.0 {
        f64::INFINITY
    } else {
        (t + 2.0) * (t + 1.0) / den
    }
}

/// Tabulated `γ_t`, `ξ_t`, `d_t` for `t ≤ horizon`.
#[derive(Clone, Debug)]
pub struct SobolevCoefficients {
    pub alpha: f64,
    pub eta_tilde: f64,
    /// `gamma[t]` for `t ≥ 1`; `gamma[0]` is unused and set to NaN.
    pub gamma: Vec<f64>,
    pub xi: Vec<f64>,
    pub d: Vec<f64>,
}

impl SobolevCoefficients {
    pub fn new(alpha: f64, eta_tilde: f64, horizon: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if !(eta_tilde >= 0.0) || !eta_tilde.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta must be finite and nonnegative, got {eta_tilde}"
            )));
        }
        let n = horizon.max(2) + 1;
        let mut gamma = vec![f64::NAN; n];
        for (t, g) in gamma.iter_mut().enumerate().skip(1) {
            *g = gegenbauer_gamma(alpha, t);
        }
        let xi: Vec<f64> = (0..n).map(|t| sobolev_xi(alpha, t)).collect();
        let mut d = vec![0.0; n];
        d[0] = xi[0];
        d[1] = xi[1] * gamma[1] / (gamma[1] + eta_tilde);
        for t in 2..n {
            let tf = t as f64;
            // ξ_0(ξ_0 − d_0) vanishes since d_0 = ξ_0, including the α = 0 limit.
            let tail = if t == 2 {
                0.0
            } else {
                xi[t - 2] * (xi[t - 2] - d[t - 2])
            };
            let den = gamma[t - 1] * (eta_tilde * tf * tf + gamma[t]) + tail;
            if den.abs() < 1e-14 {
                return Err(Error::DegenerateRecurrence { t });
            }
            d[t] = xi[t] * gamma[t] * gamma[t - 1] / den;
        }
        Ok(Self {
            alpha,
            eta_tilde,
            gamma,
            xi,
            d,
        })
    }

    pub fn horizon(&self) -> usize {
        self.d.len() - 1
    }
}

pub fn gegenbauer_monic(alpha: f64, t: usize) -> Poly {
    let mut prev = Poly::new(vec![1.0]);
    if t == 0 {
        return prev;
    }
    let mut cur = Poly::new(vec![0.0, 1.0]);
    for k in 1..t {
        let next = &cur.mul_mapped_variable() - &(&prev * gegenbauer_gamma(alpha, k));
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `G̃_0..G̃_t`.
pub fn gegenbauer_monic_family(alpha: f64, t: usize) -> Vec<Poly> {
    let mut out = vec![Poly::new(vec![1.0])];
    if t >= 1 {
        out.push(Poly::new(vec![0.0, 1.0]));
    }
    for k in 1..t {
        let next = &out[k].mul_mapped_variable() - &(&out[k - 1] * gegenbauer_gamma(alpha, k));
        out.push(next);
    }
    out
}

pub fn sobolev_monic(alpha: f64, eta_tilde: f64, t: usize) -> Result<Poly> {
    let coeffs = SobolevCoefficients::new(alpha, eta_tilde, t)?;
    Ok(sobolev_monic_family(&coeffs, t).pop().expect("non-empty family"))
}

/// All of `S̃_0..S̃_t` for a coefficient table covering `t`.
pub fn sobolev_monic_family(coeffs: &SobolevCoefficients, t: usize) -> Vec<Poly> {
    assert!(t <= coeffs.horizon(), "coefficient table too short");
    let g = gegenbauer_monic_family(coeffs.alpha, t);
    let mut s: Vec<Poly> = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let p = if k <= 2 {
            // S̃_2 = G̃_2 because d_0 = ξ_0.
            g[k].clone()
        } else {
            let a = &s[k - 2] * coeffs.d[k - 2];
            let b = &g[k - 2] * coeffs.xi[k - 2];
            &(&a + &g[k]) - &b
        };
        s.push(p);
    }
    s
}

/// `(G̃_k(x), G̃_k'(x))` for `k = 0..=t`, by the recurrence.
pub fn gegenbauer_monic_values(alpha: f64, x: f64, t: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(1.0, 0.0)];
    if t >= 1 {
        out.push((x, 1.0));
    }
    for k in 1..t {
        let g = gegenbauer_gamma(alpha, k);
        let (v, dv) = out[k];
        let (vp, dvp) = out[k - 1];
        out.push((x * v - g * vp, v + x * dv - g * dvp));
    }
    out
}

/// `(S̃_k(x), S̃_k'(x))` for `k = 0..=t`, by the recurrence.
pub fn sobolev_monic_values(coeffs: &SobolevCoefficients, x: f64, t: usize) -> Vec<(f64, f64)> {
    let g = gegenbauer_monic_values(coeffs.alpha, x, t);
    let mut s: Vec<(f64, f64)> = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let v = if k <= 2 {
            g[k]
        } else {
            let (d, xi) = (coeffs.d[k - 2], coeffs.xi[k - 2]);
            (
                d * s[k - 2].0 + g[k].0 - xi * g[k - 2].0,
                d * s[k - 2].1 + g[k].1 - xi * g[k - 2].1,
            )
        };
        s.push(v);
    }
    s
}
