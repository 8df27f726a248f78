//! Residual polynomials, orthogonal families, Sobolev products and the
//! worst-case Jacobian bounds built on them.

mod bounds;
mod families;
mod poly;
mod quadrature;

pub use bounds::{
    bound_curve_of_schedule, burn_in_stats, chebyshev_bound, gd_bound, jacobian_bound_of_poly,
    lambda_grid, lower_bound, monotone_step_threshold, BurnInStats, GRID_POINTS,
};
pub use families::{
    gegenbauer_gamma, gegenbauer_monic, gegenbauer_monic_family, gegenbauer_monic_values,
    norm_ratio, sobolev_monic, sobolev_monic_family, sobolev_monic_values, sobolev_xi,
    SobolevCoefficients,
};
pub use poly::{AffineMap, Poly, PolyEval};
pub use quadrature::{gauss_gegenbauer, gegenbauer_mass, GaussRule};

pub(crate) use families::check_alpha;

use crate::error::{Error, Result};
use crate::methods::{Dual, MethodSchedule, SequenceState};

pub(crate) fn check_interval(ell: f64, big_l: f64) -> Result<()> {
    if ell.is_finite() && big_l.is_finite() && ell > 0.0 && ell < big_l {
        Ok(())
    } else {
        Err(Error::InvalidSpectrum { ell, big_l })
    }
}

/// Sobolev product `⟨p, q⟩_η = ∫pq dμ + η∫p'q' dμ` on `[ℓ, L]`, where `μ` is
/// the Gegenbauer weight pulled back through `m(λ)` and scaled to unit mass.
#[derive(Clone, Debug)]
pub struct SobolevProductSpec {
    pub alpha: f64,
    pub eta: f64,
    pub ell: f64,
    pub big_l: f64,
    rule: GaussRule,
    lambda_nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SobolevProductSpec {
    /// Quadrature exact for products of polynomials up to degree `max_degree`.
    pub fn new(alpha: f64, eta: f64, ell: f64, big_l: f64, max_degree: usize) -> Result<Self> {
        check_alpha(alpha)?;
        check_interval(ell, big_l)?;
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta must be finite and nonnegative, got {eta}"
            )));
        }
        let rule = gauss_gegenbauer(alpha, max_degree + 2)?;
        let map = AffineMap::spectrum(ell, big_l);
        let lambda_nodes = rule
            .nodes
            .iter()
            .map(|x| (x - map.offset) / map.slope)
            .collect();
        let mass = rule.total_mass();
        let weights = rule.weights.iter().map(|w| w / mass).collect();
        Ok(Self {
            alpha,
            eta,
            ell,
            big_l,
            rule,
            lambda_nodes,
            weights,
        })
    }

    pub fn map(&self) -> AffineMap {
        AffineMap::spectrum(self.ell, self.big_l)
    }

    pub fn sigma0(&self) -> f64 {
        self.map().offset
    }

    pub fn sigma1(&self) -> f64 {
        self.map().slope
    }

    /// `η̃ = σ₁²η`, the derivative weight on `[−1, 1]`.
    pub fn eta_tilde(&self) -> f64 {
        self.sigma1().powi(2) * self.eta
    }

    /// Raw rule on `[−1, 1]`.
    pub fn rule(&self) -> &GaussRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        &self.lambda_nodes
    }

    /// Weights normalized to unit mass.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn max_degree(&self) -> usize {
        self.rule.exact_degree()
    }

    pub fn product<P: PolyEval + ?Sized, Q: PolyEval + ?Sized>(&self, p: &P, q: &Q) -> f64 {
        self.lambda_nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| {
                let (pv, pd) = p.value_and_slope(x);
                let (qv, qd) = q.value_and_slope(x);
                w * (pv * qv + self.eta * pd * qd)
            })
            .sum()
    }

    pub fn norm_sq<P: PolyEval + ?Sized>(&self, p: &P) -> f64 {
        self.product(p, p)
    }
}

pub fn inner_product(p: &Poly, q: &Poly, spec: &SobolevProductSpec) -> Result<f64> {
    if p.degree() + q.degree() > spec.max_degree() {
        return Err(Error::InvalidParameter(format!(
            "quadrature exact to degree {} but product has degree {}",
            spec.max_degree(),
            p.degree() + q.degree()
        )));
    }
    Ok(spec.product(p, q))
}

/// `λ ↦ p(m(λ)) / p(m(0))`, reading `p` as a polynomial in `x ∈ [−1, 1]`.
pub fn shift_normalize(p: &Poly, ell: f64, big_l: f64) -> Result<Poly> {
    check_interval(ell, big_l)?;
    if !p.map().is_identity() {
        return Err(Error::MapMismatch);
    }
    let map = AffineMap::spectrum(ell, big_l);
    let at_zero = p.eval(map.offset);
    if at_zero.abs() < 1e-14 {
        return Err(Error::InvalidParameter(
            "polynomial vanishes at the image of zero".into(),
        ));
    }
    Ok(Poly::from_chebyshev(
        p.chebyshev_coeffs().iter().map(|c| c / at_zero).collect(),
        map,
    ))
}

/// Residual polynomial of minimal Sobolev norm and its construction weights.
#[derive(Clone, Debug)]
pub struct OptimalResidual {
    pub poly: Poly,
    /// `a_i = 1/‖S_i‖²_η`.
    pub weights: Vec<f64>,
    pub big_a: f64,
}

pub fn optimal_residual(spec: &SobolevProductSpec, t: usize) -> Result<OptimalResidual> {
    if 2 * t > spec.max_degree() {
        return Err(Error::InvalidParameter(format!(
            "quadrature exact to degree {} but degree {} is needed",
            spec.max_degree(),
            2 * t
        )));
    }
    let coeffs = SobolevCoefficients::new(spec.alpha, spec.eta_tilde(), t)?;
    let family = sobolev_monic_family(&coeffs, t);
    let mut poly = Poly::zero(spec.map());
    let mut weights = Vec::with_capacity(t + 1);
    for s in &family {
        let s = shift_normalize(s, spec.ell, spec.big_l)?;
        let a = 1.0 / spec.norm_sq(&s);
        poly = &poly + &(&s * a);
        weights.push(a);
    }
    let big_a: f64 = weights.iter().sum();
    Ok(OptimalResidual {
        poly: poly * (1.0 / big_a),
        weights,
        big_a,
    })
}

/// `P_t` of a schedule, built by running its recurrence on polynomials in
/// the schedule's natural variable.
pub fn residual_poly_of_schedule(schedule: &MethodSchedule, t: usize) -> Result<Poly> {
    let one = Poly::constant(1.0, schedule.natural_map());
    let mut state = SequenceState::new(schedule, one);
    for _ in 0..t {
        schedule.advance(&mut state, |p: &Poly| p.mul_lambda())?;
    }
    Ok(state.x)
}

/// Pointwise `P_t` of a schedule, evaluated by the scalar recurrence. Stable
/// at any degree, unlike coefficient expansion.
#[derive(Clone, Copy, Debug)]
pub struct ScheduleResidual<'a> {
    pub schedule: &'a MethodSchedule,
    pub t: usize,
}

impl PolyEval for ScheduleResidual<'_> {
    fn value_and_slope(&self, lambda: f64) -> (f64, f64) {
        let mut state = SequenceState::new(self.schedule, Dual::ONE);
        for _ in 0..self.t {
            self.schedule
                .advance(&mut state, |p: &Dual| p.times_lambda(lambda))
                .expect("schedule horizon covers t");
        }
        (state.x.v, state.x.d)
    }
}

/// `2‖p‖²_η`, the factor in front of `E‖∂x₀ − ∂x⋆‖²_F`.
pub fn average_case_bound<P: PolyEval + ?Sized>(spec: &SobolevProductSpec, p: &P) -> f64 {
    2.0 * spec.norm_sq(p)
}
