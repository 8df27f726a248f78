//! Property suites behind `unrolljac verify`. Every check reports the
//! measured quantity next to the tolerance it is held to.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::methods::{
    chebyshev_schedule, gd_schedule, heavy_ball_schedule, sobolev_asymptotic_schedule, sobolev_schedule,
    MethodSchedule, SobolevParams,
};
use crate::polynomials::{
    chebyshev_bound, gauss_gegenbauer, gd_bound, gegenbauer_mass, gegenbauer_monic_values, optimal_residual,
    sobolev_monic_family, sobolev_monic_values, sobolev_xi, PolyEval, ScheduleResidual, SobolevCoefficients,
    SobolevProductSpec,
};
use crate::problems::{cross_derivative, exact_jacobian, make_synthetic, QuadraticFamily, Ridge};
use crate::unroll::{finite_difference_jacobian, master_identity_residual, run, run_values, DEFAULT_FD_EPS};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Orthogonality,
    Oracles,
    BoundsDomination,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {:.3e}, tolerance {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Identities => identities(),
        Suite::Orthogonality => orthogonality(),
        Suite::Oracles => oracles(),
        Suite::BoundsDomination => bounds_domination(),
    }
}

fn ridge(n: usize, d: usize, seed: u64) -> Result<(Ridge, DVector<f64>)> {
    let r = make_synthetic(n, d, seed)?;
    let theta = DVector::from_element(1, r.default_theta());
    Ok((r, theta))
}

fn all_schedules(ell: f64, big_l: f64) -> Result<Vec<MethodSchedule>> {
    Ok(vec![
        gd_schedule(1.0 / big_l)?,
        gd_schedule(2.0 / (big_l + ell))?,
        chebyshev_schedule(ell, big_l)?,
        heavy_ball_schedule(ell, big_l)?,
        sobolev_schedule(SobolevParams::new(1.0, 1.0, ell, big_l)?)?,
        sobolev_asymptotic_schedule(ell, big_l)?,
    ])
}

fn describe(s: &MethodSchedule, ell: f64, big_l: f64) -> String {
    match s.method() {
        crate::methods::Method::GradientDescent { step } if (step * big_l - 1.0).abs() < 1e-12 => "gd h=1/L".into(),
        crate::methods::Method::GradientDescent { step } if (step * (big_l + ell) - 2.0).abs() < 1e-12 => {
            "gd h=2/(L+l)".into()
        }
        _ => s.label().into(),
    }
}

/// Master identity on commuting ridge instances, `t ≤ 30`.
pub fn identities() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for seed in 0..3 {
        let (r, theta) = ridge(40, 10, seed)?;
        let (ell, big_l) = r.spectrum_interval();
        let x0 = DVector::from_fn(10, |i, _| 0.1 * i as f64 - 0.3);
        let j0 = DMatrix::from_element(10, 1, 0.2);
        for s in all_schedules(ell, big_l)? {
            let mut worst = 0.0f64;
            for t in 0..=30 {
                worst = worst.max(master_identity_residual(&r, &theta, &s, t, &x0, Some(&j0))?);
            }
            out.push(Check::at_most(
                format!("master identity, {}, seed {seed}, t<=30", describe(&s, ell, big_l)),
                worst,
                1e-9,
            ));
        }
    }
    Ok(out)
}

/// Sobolev cross products, norm identities and the `d_t` relation.
pub fn orthogonality() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let n = 12;
    for &alpha in &[0.5, 1.0, 2.0] {
        for &eta_tilde in &[0.1, 1.0, 10.0] {
            let rule = gauss_gegenbauer(alpha, n + 2)?;
            let c = SobolevCoefficients::new(alpha, eta_tilde, n)?;
            let s = sobolev_monic_family(&c, n);
            let ip = |p: usize, q: usize| {
                rule.integrate(|x| {
                    let (pv, pd) = s[p].value_and_slope(x);
                    let (qv, qd) = s[q].value_and_slope(x);
                    pv * qv + eta_tilde * pd * qd
                })
            };
            let norms: Vec<f64> = (0..=n).map(|i| ip(i, i)).collect();
            let mut worst = 0.0f64;
            for i in 0..=n {
                for j in 0..i {
                    worst = worst.max(ip(i, j).abs() / (norms[i] * norms[j]).sqrt());
                }
            }
            out.push(Check::at_most(
                format!("sobolev cross products, alpha={alpha}, eta~={eta_tilde}, degree<={n}"),
                worst,
                1e-10,
            ));

            let mut g2 = vec![0.0; n + 1];
            let mut s2 = vec![0.0; n + 1];
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let gv = gegenbauer_monic_values(alpha, x, n);
                let sv = sobolev_monic_values(&c, x, n);
                for t in 0..=n {
                    g2[t] += w * gv[t].0 * gv[t].0;
                    s2[t] += w * (sv[t].0 * sv[t].0 + eta_tilde * sv[t].1 * sv[t].1);
                }
            }
            let worst = (0..=n)
                .map(|t| {
                    let p = sobolev_xi(alpha, t) * g2[t] / s2[t];
                    (c.d[t] - p).abs() / p
                })
                .fold(0.0, f64::max);
            out.push(Check::at_most(
                format!("d_t = xi_t |G_t|^2/|S_t|^2, alpha={alpha}, eta~={eta_tilde}"),
                worst,
                1e-8,
            ));
        }
    }
    for &(ell, big_l) in &[(0.5, 10.0), (1.0, 100.0)] {
        let spec = SobolevProductSpec::new(1.0, 1.0, ell, big_l, 2 * n)?;
        let sched = sobolev_schedule(SobolevParams::new(1.0, 1.0, ell, big_l)?)?;
        let (mut norm_err, mut stream_err) = (0.0f64, 0.0f64);
        for t in 1..=n {
            let opt = optimal_residual(&spec, t)?;
            norm_err = norm_err.max((spec.norm_sq(&opt.poly) * opt.big_a - 1.0).abs());
            let streamed = ScheduleResidual { schedule: &sched, t };
            for k in 0..20 {
                let lam = ell + (big_l - ell) * k as f64 / 19.0;
                stream_err = stream_err.max((streamed.value(lam) - opt.poly.eval(lam)).abs());
            }
        }
        out.push(Check::at_most(
            format!("|P*_t|^2 A_t = 1, [{ell}, {big_l}], t<={n}"),
            norm_err,
            1e-8,
        ));
        out.push(Check::at_most(
            format!("streaming schedule = optimal residual, [{ell}, {big_l}], t<={n}"),
            stream_err,
            1e-7,
        ));
    }
    Ok(out)
}

fn beta_moment(alpha: f64, k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        statrs::function::beta::beta(k as f64 / 2.0 + 0.5, alpha + 0.5)
    }
}

/// Finite differences, quadrature moments and value-path equality.
pub fn oracles() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &(n, d, seed, horizon) in &[(40usize, 10usize, 1u64, 30usize), (80, 50, 2, 50)] {
        let (r, theta) = ridge(n, d, seed)?;
        let (ell, big_l) = r.spectrum_interval();
        let x0 = DVector::zeros(d);
        for s in all_schedules(ell, big_l)? {
            let traj = run(&r, &theta, &s, &x0, None, horizon)?;
            let fd = finite_difference_jacobian(&r, &theta, &s, &x0, horizon, DEFAULT_FD_EPS)?;
            let err = (&traj.last().jac - &fd).norm() / fd.norm();
            out.push(Check::at_most(
                format!("forward mode vs finite differences, {}, d={d}, t={horizon}", describe(&s, ell, big_l)),
                err,
                1e-5,
            ));
            let values = run_values(&r, &theta, &s, &x0, horizon)?;
            let mismatches = traj
                .points
                .iter()
                .zip(&values)
                .filter(|(p, v)| p.x.iter().zip(v.iter()).any(|(a, b)| a.to_bits() != b.to_bits()))
                .count();
            out.push(Check::at_most(
                format!("value path bitwise equal, {}, d={d}", describe(&s, ell, big_l)),
                mismatches as f64,
                0.0,
            ));
        }
    }
    for &alpha in &[0.0, 0.5, 1.0, 2.0] {
        let rule = gauss_gegenbauer(alpha, 12)?;
        let worst = (0..=rule.exact_degree())
            .map(|k| {
                let q = rule.integrate(|x| x.powi(k as i32));
                (q - beta_moment(alpha, k)).abs() / beta_moment(alpha, k - k % 2)
            })
            .fold(0.0, f64::max);
        out.push(Check::at_most(
            format!("gauss-gegenbauer moments vs beta function, alpha={alpha}"),
            worst,
            1e-12,
        ));
        let mass = gegenbauer_mass(alpha);
        out.push(Check::at_most(
            format!("gegenbauer mass, alpha={alpha}"),
            (mass - beta_moment(alpha, 0)).abs() / mass,
            1e-14,
        ));
    }
    Ok(out)
}

/// Unrolled Jacobian error against the closed-form bounds on five seeds.
pub fn bounds_domination() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let d = 20;
    for seed in 0..5 {
        let (r, theta) = ridge(60, d, seed)?;
        let (ell, big_l) = r.spectrum_interval();
        let x0 = DVector::from_fn(d, |i, _| ((i * 7 + seed as usize) % 5) as f64 - 2.0);
        let j0 = DMatrix::zeros(d, 1);
        let d0 = (&j0 - exact_jacobian(&r, &theta)?).norm();
        let g = cross_derivative(&r, &theta, &x0, &j0)?.norm();
        let cases: [(MethodSchedule, Box<dyn Fn(usize) -> f64>); 3] = [
            (gd_schedule(1.0 / big_l)?, Box::new(move |t| gd_bound(1.0 / big_l, ell, big_l, d0, g, t))),
            (
                gd_schedule(2.0 / (big_l + ell))?,
                Box::new(move |t| gd_bound(2.0 / (big_l + ell), ell, big_l, d0, g, t)),
            ),
            (chebyshev_schedule(ell, big_l)?, Box::new(move |t| chebyshev_bound(ell, big_l, d0, g, t))),
        ];
        for (s, bound) in cases {
            let traj = run(&r, &theta, &s, &x0, Some(&j0), 100)?;
            let excess = traj
                .jacobian_errors()
                .into_iter()
                .enumerate()
                .map(|(t, e)| e - bound(t))
                .fold(f64::NEG_INFINITY, f64::max);
            out.push(Check::at_most(
                format!("max_t (|J_t - J*| - bound), {}, seed {seed}, t<=100", describe(&s, ell, big_l)),
                excess,
                1e-8,
            ));
        }
    }
    Ok(out)
}
