//! Worst-case Jacobian suboptimality bounds.
//!
//! For a residual polynomial `P_t` the Jacobian error is controlled by
//! `max|P_t(λ) − λP_t'(λ)|·D₀ + max|P_t'(λ)|·G` over `λ ∈ [ℓ, L]`.

use super::poly::PolyEval;
use crate::error::{Error, Result};
use crate::methods::{Dual, MethodSchedule, SequenceState};

pub const GRID_POINTS: usize = 10001;

/// Uniform grid on `[ℓ, L]` with both endpoints.
pub fn lambda_grid(ell: f64, big_l: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let step = (big_l - ell) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| ell + step * i as f64).collect();
    grid[n - 1] = big_l;
    grid
}

/// Gradient descent with step `h`:
/// `max_λ |(1−hλ)^{t−1}((1 + (t−1)hλ)D₀ + htG)|`.
pub fn gd_bound(h: f64, ell: f64, big_l: f64, d0: f64, g: f64, t: usize) -> f64 {
    if t == 0 {
        return d0;
    }
    let tf = t as f64;
    let f = |lam: f64| {
        let r = 1.0 - h * lam;
        (r.powi(t as i32 - 1) * ((1.0 + (tf - 1.0) * h * lam) * d0 + h * tf * g)).abs()
    };
    let mut candidates = lambda_grid(ell, big_l, GRID_POINTS);
    // Stationary points of the bracketed expression: λ = 1/h and λ = −G/D₀.
    candidates.push(1.0 / h);
    if d0 > 0.0 {
        candidates.push(-g / d0);
    }
    candidates
        .into_iter()
        .filter(|&lam| lam >= ell && lam <= big_l)
        .map(f)
        .fold(0.0, f64::max)
}

fn xi(ell: f64, big_l: f64) -> f64 {
    let rk = (ell / big_l).sqrt();
    (1.0 - rk) / (1.0 + rk)
}

/// `2/(ξ^t + ξ^{−t})`, written to stay finite for large `t`.
fn chebyshev_decay(ell: f64, big_l: f64, t: usize) -> f64 {
    let q = xi(ell, big_l).powi(t as i32);
    2.0 * q / (1.0 + q * q)
}

/// Chebyshev method:
/// `2/(ξ^t + ξ^{−t})·(|2t²/(1−κ) − 1|·D₀ + 2t²/(L−ℓ)·G)`.
pub fn chebyshev_bound(ell: f64, big_l: f64, d0: f64, g: f64, t: usize) -> f64 {
    let kappa = ell / big_l;
    let t2 = (t * t) as f64;
    let bracket = (2.0 * t2 / (1.0 - kappa) - 1.0).abs() * d0 + 2.0 * t2 / (big_l - ell) * g;
    chebyshev_decay(ell, big_l, t) * bracket
}

/// Lower bound over all first-order methods: `2/(ξ^t + ξ^{−t})·D₀`.
pub fn lower_bound(ell: f64, big_l: f64, d0: f64, t: usize) -> f64 {
    chebyshev_decay(ell, big_l, t) * d0
}

pub fn jacobian_bound_of_poly<P: PolyEval + ?Sized>(
    p: &P,
    ell: f64,
    big_l: f64,
    d0: f64,
    g: f64,
) -> f64 {
    let mut q_max = 0.0f64;
    let mut d_max = 0.0f64;
    for lam in lambda_grid(ell, big_l, GRID_POINTS) {
        let (v, dv) = p.value_and_slope(lam);
        q_max = q_max.max((v - lam * dv).abs());
        d_max = d_max.max(dv.abs());
    }
    q_max * d0 + d_max * g
}

/// `jacobian_bound_of_poly` of `P_0..P_horizon` for a schedule, evaluated by
/// running the scalar recurrence once per grid point.
pub fn bound_curve_of_schedule(
    schedule: &MethodSchedule,
    ell: f64,
    big_l: f64,
    d0: f64,
    g: f64,
    horizon: usize,
    points: usize,
) -> Result<Vec<f64>> {
    let mut q_max = vec![0.0f64; horizon + 1];
    let mut d_max = vec![0.0f64; horizon + 1];
    for lam in lambda_grid(ell, big_l, points) {
        let mut state = SequenceState::new(schedule, Dual::ONE);
        for t in 0..=horizon {
            if t > 0 {
                schedule.advance(&mut state, |p: &Dual| p.times_lambda(lam))?;
            }
            let Dual { v, d } = state.x;
            q_max[t] = q_max[t].max((v - lam * d).abs());
            d_max[t] = d_max[t].max(d.abs());
        }
    }
    Ok(q_max
        .iter()
        .zip(&d_max)
        .map(|(q, d)| q * d0 + d * g)
        .collect())
}

/// Largest step for which the GD bound with `G = 0` is nonincreasing.
pub fn monotone_step_threshold(big_l: f64) -> f64 {
    std::f64::consts::SQRT_2 / big_l
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BurnInStats {
    pub peak_index: usize,
    pub peak_value: f64,
    /// First index after the peak where the curve falls below its start;
    /// the curve length if it never does, 0 for curves peaking at the start.
    pub burn_in_length: usize,
}

pub fn burn_in_stats(curve: &[f64]) -> Result<BurnInStats> {
    let first = *curve
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty curve".into()))?;
    let (peak_index, peak_value) =
        curve
            .iter()
            .enumerate()
            .fold((0, first), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let burn_in_length = if peak_index == 0 {
        0
    } else {
        (peak_index + 1..curve.len())
            .find(|&t| curve[t] < first)
            .unwrap_or(curve.len())
    };
    Ok(BurnInStats {
        peak_index,
        peak_value,
        burn_in_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burn_in_examples() {
        let s = burn_in_stats(&[3.0, 2.0, 1.0]).unwrap();
        assert_eq!((s.peak_index, s.peak_value, s.burn_in_length), (0, 3.0, 0));
        let s = burn_in_stats(&[1.0, 2.0, 3.0, 2.0, 0.5]).unwrap();
        assert_eq!((s.peak_index, s.peak_value, s.burn_in_length), (2, 3.0, 4));
        assert!(burn_in_stats(&[]).is_err());
    }

    #[test]
    fn closed_form_gd_cases() {
        let (ell, big_l, d0) = (0.5, 10.0, 1.3);
        let kappa = ell / big_l;
        for t in 1..40 {
            let tf = t as f64;
            let small = gd_bound(1.0 / big_l, ell, big_l, d0, 0.0, t);
            let expect = (1.0 - kappa).powi(t as i32 - 1) * (1.0 + kappa * (tf - 1.0)) * d0;
            assert!((small - expect).abs() <= 1e-12 * expect);
            let large = gd_bound(2.0 / (big_l + ell), ell, big_l, d0, 0.0, t);
            let rate = ((1.0 - kappa) / (1.0 + kappa)).powi(t as i32 - 1);
            let exact = rate * (2.0 * tf - 1.0 + kappa) / (1.0 + kappa) * d0;
            assert!((large - exact).abs() <= 1e-12 * exact);
            // the simplified |2t−1| form is an upper relaxation
            assert!(large <= rate * (2.0 * tf - 1.0) * d0 * (1.0 + 1e-12));
        }
        assert!((gd_bound(0.1, ell, big_l, d0, 2.0, 1) - (d0 + 0.2)).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_and_lower_start_at_d0() {
        assert_eq!(chebyshev_bound(1.0, 3.0, 2.5, 7.0, 0), 2.5);
        assert_eq!(lower_bound(1.0, 3.0, 2.5, 0), 2.5);
        assert!(lower_bound(1.0, 3.0, 1.0, 2000) < 1e-100);
    }

    #[test]
    fn threshold_values() {
        assert!((monotone_step_threshold(1.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((monotone_step_threshold(2.0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
