//! Step-coefficient schedules of first-order methods on quadratics.
//!
//! Two-sequence methods update
//! `x_{t+1} = x_t + m_t(x_t − x_{t−1}) − h_t∇f(x_t)`.
//! Three-sequence (Sobolev) methods run such a recurrence on `y`, combine
//! `z_t = c1·z_{t−2} + c2·y_t − c3·y_{t−2}` and average
//! `x_t = (A_{t−1}/A_t)·x_{t−1} + (a_t/A_t)·z_t`.
//! Missing history at `t = 1` is filled with the starting point.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::polynomials::{check_alpha, check_interval, AffineMap, Poly, SobolevCoefficients};

pub const DEFAULT_HORIZON: usize = 5000;

/// Linear-space operations needed to run a schedule.
pub trait Iterate: Clone {
    /// `self += a·x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn scale(&mut self, a: f64);
}

impl Iterate for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
}

impl Iterate for DVector<f64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        nalgebra::Vector::axpy(self, a, x, 1.0);
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
}

impl Iterate for Poly {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self = &*self + &(x * a);
    }
    fn scale(&mut self, a: f64) {
        *self = &*self * a;
    }
}

/// Value and `λ`-derivative of a residual polynomial at a fixed `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const ONE: Dual = Dual { v: 1.0, d: 0.0 };

    /// `λ·p` with its derivative `p + λp'`.
    pub fn times_lambda(&self, lambda: f64) -> Dual {
        Dual {
            v: lambda * self.v,
            d: self.v + lambda * self.d,
        }
    }
}

impl Iterate for Dual {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.v += a * x.v;
        self.d += a * x.d;
    }
    fn scale(&mut self, a: f64) {
        self.v *= a;
        self.d *= a;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    TwoSequence,
    ThreeSequence,
}

/// z-combination and averaging weights of a three-sequence step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Averaging {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `a_t`; may overflow to infinity at long horizons.
    pub a: f64,
    /// `A_t = a_0 + … + a_t`; may overflow to infinity at long horizons.
    pub big_a: f64,
    /// `A_{t−1}/A_t`, computed in log space.
    pub keep: f64,
    /// `a_t/A_t`, computed in log space.
    pub fresh: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepCoeffs {
    pub h: f64,
    pub m: f64,
    /// Present for three-sequence schedules only.
    pub averaging: Option<Averaging>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevParams {
    pub alpha: f64,
    pub eta: f64,
    pub ell: f64,
    pub big_l: f64,
}

impl SobolevParams {
    pub fn new(alpha: f64, eta: f64, ell: f64, big_l: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_interval(ell, big_l)?;
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta must be finite and nonnegative, got {eta}"
            )));
        }
        Ok(Self {
            alpha,
            eta,
            ell,
            big_l,
        })
    }

    pub fn sigma1(&self) -> f64 {
        2.0 / (self.big_l - self.ell)
    }

    pub fn sigma0(&self) -> f64 {
        -(self.big_l + self.ell) / (self.big_l - self.ell)
    }

    pub fn eta_tilde(&self) -> f64 {
        self.sigma1().powi(2) * self.eta
    }

    pub fn sequences(&self, horizon: usize) -> Result<SobolevSequences> {
        SobolevSequences::new(self, horizon)
    }
}

/// Every internal sequence of the Sobolev method, indexed by `t`.
/// Entries that are undefined at small `t` hold NaN.
#[derive(Clone, Debug)]
pub struct SobolevSequences {
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub xi: Vec<f64>,
    pub d: Vec<f64>,
    pub delta_p: Vec<f64>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub delta_s: Vec<f64>,
    /// `K_t = ‖G̃_t‖²/‖G̃_{t−1}‖²`.
    pub k: Vec<f64>,
    pub ln_a: Vec<f64>,
    pub ln_big_a: Vec<f64>,
}

fn delta_sequence(alpha: f64, sigma0: f64, horizon: usize) -> Result<Vec<f64>> {
    let mut delta = vec![f64::NAN; horizon + 1];
    if horizon >= 1 {
        delta[1] = 1.0 / sigma0;
    }
    for t in 2..=horizon {
        let den = sigma0 - crate::polynomials::gegenbauer_gamma(alpha, t - 1) * delta[t - 1];
        if den.abs() < 1e-14 {
            return Err(Error::DegenerateRecurrence { t });
        }
        delta[t] = 1.0 / den;
    }
    Ok(delta)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl SobolevSequences {
    fn new(p: &SobolevParams, horizon: usize) -> Result<Self> {
        let n = horizon.max(2);
        let c = SobolevCoefficients::new(p.alpha, p.eta_tilde(), n)?;
        let s0 = p.sigma0();
        let delta = delta_sequence(p.alpha, s0, n)?;
        let mut delta_p = vec![f64::NAN; n + 1];
        let mut kappa = vec![f64::NAN; n + 1];
        let mut tau = vec![f64::NAN; n + 1];
        let mut delta_s = vec![f64::NAN; n + 1];
        kappa[0] = 1.0;
        kappa[1] = 1.0;
        for t in 2..=n {
            delta_p[t] = delta[t] * delta[t - 1];
            kappa[t] = if t == 2 {
                1.0
            } else {
                let den = 1.0 + (c.d[t - 2] / kappa[t - 2] - c.xi[t - 2]) * delta_p[t];
                if den.abs() < 1e-14 {
                    return Err(Error::DegenerateRecurrence { t });
                }
                1.0 / den
            };
            tau[t] = delta_p[t] * kappa[t];
            delta_s[t] = tau[t] / kappa[t - 2];
        }

        let k = c.gamma.clone();
        let mut ln_a = vec![0.0; n + 1];
        let mut ln_big_a = vec![0.0; n + 1];
        ln_a[1] = (s0 * s0 * c.d[1] / (c.xi[1] * k[1])).ln();
        ln_big_a[1] = log_add_exp(0.0, ln_a[1]);
        for t in 2..=n {
            // ξ_0/d_0 = 1, also in the α = 0 limit.
            let prev_ratio = if t == 2 {
                0.0
            } else {
                (c.xi[t - 2] / c.d[t - 2]).ln()
            };
            ln_a[t] = ln_a[t - 2] + (c.d[t] / c.xi[t]).ln() + prev_ratio
                - k[t].ln()
                - k[t - 1].ln()
                - 2.0 * delta_s[t].abs().ln();
            ln_big_a[t] = log_add_exp(ln_big_a[t - 1], ln_a[t]);
        }
        for (t, v) in ln_a.iter().chain(&ln_big_a).enumerate() {
            if !v.is_finite() {
                return Err(Error::DegenerateRecurrence { t: t % (n + 1) });
            }
        }
        Ok(Self {
            gamma: c.gamma,
            delta,
            xi: c.xi,
            d: c.d,
            delta_p,
            kappa,
            tau,
            delta_s,
            k,
            ln_a,
            ln_big_a,
        })
    }

    pub fn horizon(&self) -> usize {
        self.delta.len() - 1
    }

    /// Coefficients of step `t ≥ 1`.
    fn step(&self, p: &SobolevParams, t: usize) -> StepCoeffs {
        let (c1, c2, c3) = if t <= 2 {
            (0.0, 1.0, 0.0)
        } else {
            (
                self.d[t - 2] * self.delta_s[t],
                self.kappa[t],
                self.xi[t - 2] * self.tau[t],
            )
        };
        StepCoeffs {
            h: -p.sigma1() * self.delta[t],
            m: if t == 1 {
                0.0
            } else {
                p.sigma0() * self.delta[t] - 1.0
            },
            averaging: Some(Averaging {
                c1,
                c2,
                c3,
                a: self.ln_a[t].exp(),
                big_a: self.ln_big_a[t].exp(),
                keep: (self.ln_big_a[t - 1] - self.ln_big_a[t]).exp(),
                fresh: (self.ln_a[t] - self.ln_big_a[t]).exp(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    GradientDescent { step: f64 },
    Gegenbauer { alpha: f64, ell: f64, big_l: f64 },
    HeavyBall { ell: f64, big_l: f64 },
    Sobolev(SobolevParams),
    SobolevAsymptotic { ell: f64, big_l: f64 },
}

#[derive(Clone, Debug)]
enum Rule {
    Constant { h: f64, m: f64 },
    Table(Vec<StepCoeffs>),
    Asymptotic { h: f64, m: f64 },
}

#[derive(Clone, Debug)]
pub struct MethodSchedule {
    method: Method,
    kind: ScheduleKind,
    rule: Rule,
    sobolev: Option<SobolevSequences>,
}

/// Heavy-ball constants `h = (2/(√ℓ+√L))²`, `m = ((√L−√ℓ)/(√L+√ℓ))²`.
pub fn heavy_ball_constants(ell: f64, big_l: f64) -> (f64, f64) {
    let (a, b) = (ell.sqrt(), big_l.sqrt());
    ((2.0 / (a + b)).powi(2), ((b - a) / (b + a)).powi(2))
}

pub fn gd_schedule(h: f64) -> Result<MethodSchedule> {
    MethodSchedule::build(Method::GradientDescent { step: h }, DEFAULT_HORIZON)
}

pub fn gegenbauer_schedule(alpha: f64, ell: f64, big_l: f64) -> Result<MethodSchedule> {
    MethodSchedule::build(Method::Gegenbauer { alpha, ell, big_l }, DEFAULT_HORIZON)
}

pub fn chebyshev_schedule(ell: f64, big_l: f64) -> Result<MethodSchedule> {
    gegenbauer_schedule(0.0, ell, big_l)
}

pub fn heavy_ball_schedule(ell: f64, big_l: f64) -> Result<MethodSchedule> {
    MethodSchedule::build(Method::HeavyBall { ell, big_l }, DEFAULT_HORIZON)
}

pub fn sobolev_schedule(params: SobolevParams) -> Result<MethodSchedule> {
    MethodSchedule::build(Method::Sobolev(params), DEFAULT_HORIZON)
}

pub fn sobolev_asymptotic_schedule(ell: f64, big_l: f64) -> Result<MethodSchedule> {
    MethodSchedule::build(Method::SobolevAsymptotic { ell, big_l }, DEFAULT_HORIZON)
}

impl MethodSchedule {
    /// Build a schedule, tabulating recurrence-based coefficients up to
    /// `horizon` steps.
    pub fn build(method: Method, horizon: usize) -> Result<Self> {
        let (kind, rule, sobolev) = match method {
            Method::GradientDescent { step } => {
                if !(step > 0.0) || !step.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "step size must be positive, got {step}"
                    )));
                }
                (ScheduleKind::TwoSequence, Rule::Constant { h: step, m: 0.0 }, None)
            }
            Method::Gegenbauer { alpha, ell, big_l } => {
                check_alpha(alpha)?;
                check_interval(ell, big_l)?;
                let map = AffineMap::spectrum(ell, big_l);
                let delta = delta_sequence(alpha, map.offset, horizon)?;
                let table = (1..=horizon)
                    .map(|t| StepCoeffs {
                        h: -map.slope * delta[t],
                        m: if t == 1 {
                            0.0
                        } else {
                            map.offset * delta[t] - 1.0
                        },
                        averaging: None,
                    })
                    .collect();
                (ScheduleKind::TwoSequence, Rule::Table(table), None)
            }
            Method::HeavyBall { ell, big_l } => {
                check_interval(ell, big_l)?;
                let (h, m) = heavy_ball_constants(ell, big_l);
                (ScheduleKind::TwoSequence, Rule::Constant { h, m }, None)
            }
            Method::Sobolev(params) => {
                let params = SobolevParams::new(params.alpha, params.eta, params.ell, params.big_l)?;
                let seq = params.sequences(horizon)?;
                let table = (1..=horizon).map(|t| seq.step(&params, t)).collect();
                (ScheduleKind::ThreeSequence, Rule::Table(table), Some(seq))
            }
            Method::SobolevAsymptotic { ell, big_l } => {
                check_interval(ell, big_l)?;
                let (h, m) = heavy_ball_constants(ell, big_l);
                (ScheduleKind::ThreeSequence, Rule::Asymptotic { h, m }, None)
            }
        };
        Ok(Self {
            method,
            kind,
            rule,
            sobolev,
        })
    }

    /// Same method tabulated to a different horizon.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Self::build(self.method, horizon)
    }

    pub fn method(&self) -> &Method {
        &self.method
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        match self.method {
            Method::GradientDescent { .. } => "gd",
            Method::Gegenbauer { alpha, .. } if alpha == 0.0 => "chebyshev",
            Method::Gegenbauer { .. } => "gegenbauer",
            Method::HeavyBall { .. } => "heavy_ball",
            Method::Sobolev(_) => "sobolev",
            Method::SobolevAsymptotic { .. } => "sobolev_asymptotic",
        }
    }

    /// Largest `t` with tabulated coefficients; `None` means unbounded.
    pub fn horizon(&self) -> Option<usize> {
        match &self.rule {
            Rule::Table(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn sobolev_sequences(&self) -> Option<&SobolevSequences> {
        self.sobolev.as_ref()
    }

    /// `(ℓ, L)` for spectrum-aware methods.
    pub fn spectrum(&self) -> Option<(f64, f64)> {
        match self.method {
            Method::GradientDescent { .. } => None,
            Method::Gegenbauer { ell, big_l, .. }
            | Method::HeavyBall { ell, big_l }
            | Method::SobolevAsymptotic { ell, big_l } => Some((ell, big_l)),
            Method::Sobolev(p) => Some((p.ell, p.big_l)),
        }
    }

    /// Variable in which residual polynomials have well-scaled coefficients:
    /// `1 − hλ` for gradient descent, `m(λ)` otherwise.
    pub fn natural_map(&self) -> AffineMap {
        match (self.method, self.spectrum()) {
            (Method::GradientDescent { step }, _) => AffineMap::new(-step, 1.0),
            (_, Some((ell, big_l))) => AffineMap::spectrum(ell, big_l),
            _ => AffineMap::IDENTITY,
        }
    }

    /// Coefficients of step `t ≥ 1`, the one producing iterate `t`.
    pub fn coeffs(&self, t: usize) -> Result<StepCoeffs> {
        assert!(t >= 1, "step indices start at 1");
        match &self.rule {
            Rule::Constant { h, m } => Ok(StepCoeffs {
                h: *h,
                m: *m,
                averaging: None,
            }),
            Rule::Table(v) => v.get(t - 1).copied().ok_or(Error::HorizonExceeded {
                t,
                horizon: v.len(),
            }),
            Rule::Asymptotic { h, m } => {
                // A_t = m^{−t}, so A_{t−1}/A_t = m and a_t/A_t = 1 − m.
                let big_a = m.powi(-(t as i32));
                Ok(StepCoeffs {
                    h: *h,
                    m: *m,
                    averaging: Some(Averaging {
                        c1: 0.0,
                        c2: 1.0 / (1.0 - m),
                        c3: m / (1.0 - m),
                        a: big_a * (1.0 - m),
                        big_a,
                        keep: *m,
                        fresh: 1.0 - m,
                    }),
                })
            }
        }
    }

    /// Advance `state` by one step. `grad` maps an iterate to the gradient
    /// of the objective at it.
    pub fn advance<V: Iterate>(
        &self,
        state: &mut SequenceState<V>,
        grad: impl Fn(&V) -> V,
    ) -> Result<()> {
        let c = self.coeffs(state.t + 1)?;
        match (&mut state.aux, c.averaging) {
            (None, None) => {
                let next = momentum_step(&state.x, &state.x_prev, &grad(&state.x), c.h, c.m);
                state.x_prev = std::mem::replace(&mut state.x, next);
            }
            (Some(aux), Some(w)) => {
                let y_next = momentum_step(&aux.y, &aux.y_prev, &grad(&aux.y), c.h, c.m);
                let mut z_next = y_next.clone();
                z_next.scale(w.c2);
                if w.c1 != 0.0 {
                    z_next.axpy(w.c1, &aux.z_prev);
                }
                if w.c3 != 0.0 {
                    z_next.axpy(-w.c3, &aux.y_prev);
                }
                let mut x_next = state.x.clone();
                x_next.scale(w.keep);
                x_next.axpy(w.fresh, &z_next);
                aux.y_prev = std::mem::replace(&mut aux.y, y_next);
                aux.z_prev = std::mem::replace(&mut aux.z, z_next);
                state.x_prev = std::mem::replace(&mut state.x, x_next);
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "state layout does not match the schedule kind".into(),
                ))
            }
        }
        state.t += 1;
        Ok(())
    }
}

fn momentum_step<V: Iterate>(x: &V, x_prev: &V, g: &V, h: f64, m: f64) -> V {
    let mut next = x.clone();
    if m != 0.0 {
        next.axpy(m, x);
        next.axpy(-m, x_prev);
    }
    next.axpy(-h, g);
    next
}

/// Auxiliary `y`, `z` sequences with one lag each.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxSequences<V> {
    pub y: V,
    pub y_prev: V,
    pub z: V,
    pub z_prev: V,
}

/// Iterate history needed by any schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceState<V> {
    pub t: usize,
    pub x: V,
    pub x_prev: V,
    pub aux: Option<AuxSequences<V>>,
}

impl<V: Iterate> SequenceState<V> {
    /// Start at `x0` with `y_0 = z_0 = x_0` and lags equal to the start.
    pub fn new(schedule: &MethodSchedule, x0: V) -> Self {
        let aux = match schedule.kind() {
            ScheduleKind::TwoSequence => None,
            ScheduleKind::ThreeSequence => Some(AuxSequences {
                y: x0.clone(),
                y_prev: x0.clone(),
                z: x0.clone(),
                z_prev: x0.clone(),
            }),
        };
        Self {
            t: 0,
            x_prev: x0.clone(),
            x: x0,
            aux,
        }
    }
}
