use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::config::{DatasetSpec, ExperimentConfig, MethodName};
use crate::error::{Error, Result};
use crate::methods::{
    chebyshev_schedule, gd_schedule, heavy_ball_schedule, sobolev_asymptotic_schedule, sobolev_schedule,
    MethodSchedule, SobolevParams,
};
use crate::polynomials::{
    bound_curve_of_schedule, burn_in_stats, chebyshev_bound, gd_bound, lower_bound, BurnInStats, GRID_POINTS,
};
use crate::problems::{
    cross_derivative, make_ridge, make_synthetic, read_dataset, AffineFamily, QuadraticFamily, Ridge,
};
use crate::unroll::{run, suboptimality_curves, SuboptimalityRow};

/// Format used for every float in CSV output (17 significant digits).
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: Option<&std::path::Path>, source: std::io::Error) -> Error {
    Error::Io {
        path: path.map(|p| p.to_path_buf()).unwrap_or_else(|| "<output>".into()),
        source,
    }
}

/// Header line, then one line per row: `t` as an integer, floats via
/// [`fmt_float`].
pub fn write_table<W: Write + ?Sized>(w: &mut W, header: &[&str], rows: &[(usize, Vec<f64>)]) -> std::io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for (t, vals) in rows {
        write!(w, "{t}")?;
        for v in vals {
            write!(w, ",{}", fmt_float(*v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub enum Instance {
    Ridge(Ridge),
    Toy(AffineFamily),
}

impl Instance {
    pub fn family(&self) -> &dyn QuadraticFamily {
        match self {
            Instance::Ridge(r) => r,
            Instance::Toy(f) => f,
        }
    }
}

/// Build the problem instance and the parameter value the run uses.
pub fn build_instance(cfg: &ExperimentConfig) -> Result<(Instance, DVector<f64>)> {
    let theta = cfg.theta.as_ref().map(|t| t.values()[0]);
    let ridge = |r: Ridge| -> Result<(Instance, DVector<f64>)> {
        let th = theta.unwrap_or_else(|| r.default_theta());
        let r = r.with_theta_range((th, th)).map_err(|e| match e {
            Error::InvalidParameter(m) => Error::Config(format!("theta: {m}")),
            other => other,
        })?;
        Ok((Instance::Ridge(r), DVector::from_element(1, th)))
    };
    match &cfg.dataset {
        DatasetSpec::ScalarToy => {
            let th = theta.unwrap_or(1.0);
            let f = AffineFamily::new(
                DMatrix::zeros(1, 1),
                vec![DMatrix::identity(1, 1)],
                DVector::from_element(1, 1.0),
                DMatrix::zeros(1, 1),
                th,
                th,
            )?;
            Ok((Instance::Toy(f), DVector::from_element(1, th)))
        }
        DatasetSpec::Synthetic { n, d } => ridge(make_synthetic(*n, *d, cfg.seed)?),
        DatasetSpec::BreastCancerFile { path, standardize } | DatasetSpec::BodyfatFile { path, standardize } => {
            let mut data = read_dataset(path)?;
            if *standardize {
                data.standardize();
            }
            let d = data.n_features();
            let probe = make_ridge(data.design, data.target, DVector::zeros(d), None, (1.0, 1.0))?;
            ridge(probe)
        }
    }
}

/// Schedule for a configured method on the spectrum interval `[ℓ, L]`.
pub fn build_schedule(cfg: &ExperimentConfig, ell: f64, big_l: f64) -> Result<MethodSchedule> {
    let s = match cfg.method {
        MethodName::Gd => gd_schedule(cfg.step_size.resolve(ell, big_l))?,
        MethodName::Chebyshev => chebyshev_schedule(ell, big_l)?,
        MethodName::HeavyBall => heavy_ball_schedule(ell, big_l)?,
        MethodName::Sobolev => sobolev_schedule(SobolevParams::new(cfg.alpha, cfg.eta, ell, big_l)?)?,
        MethodName::SobolevAsymptotic => sobolev_asymptotic_schedule(ell, big_l)?,
    };
    s.with_horizon(cfg.horizon)
}

#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub method: String,
    pub step_size: Option<f64>,
    pub dataset: String,
    pub n_features: usize,
    pub theta: Vec<f64>,
    pub seed: u64,
    pub ell: f64,
    pub big_l: f64,
    pub kappa: f64,
    pub d0: f64,
    pub g: f64,
    pub burn_in: BurnInStats,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<SuboptimalityRow>,
    pub metadata: RunMetadata,
}

pub const RUN_COLUMNS: [&str; 4] = ["t", "f_subopt", "iterate_subopt", "jacobian_subopt"];

/// Unroll the configured method from `x₀ = 0`, `∂x₀ = 0`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let (instance, theta) = build_instance(cfg)?;
    let family = instance.family();
    let (ell, big_l) = family.spectrum_interval();
    let schedule = build_schedule(cfg, ell, big_l)?;
    let d = family.dim_x();
    let x0 = DVector::zeros(d);
    let jac0 = DMatrix::zeros(d, family.dim_theta());
    let traj = run(family, &theta, &schedule, &x0, Some(&jac0), cfg.horizon)?;
    let rows = suboptimality_curves(&traj, family, &theta)?;
    let jac_curve: Vec<f64> = rows.iter().map(|r| r.jacobian_subopt).collect();
    let metadata = RunMetadata {
        method: schedule.label().to_string(),
        step_size: matches!(cfg.method, MethodName::Gd).then(|| cfg.step_size.resolve(ell, big_l)),
        dataset: cfg.dataset.name().to_string(),
        n_features: d,
        theta: theta.iter().copied().collect(),
        seed: cfg.seed,
        ell,
        big_l,
        kappa: ell / big_l,
        d0: (&jac0 - &traj.jac_star).norm(),
        g: cross_derivative(family, &theta, &x0, &jac0)?.norm(),
        burn_in: burn_in_stats(&jac_curve)?,
        config: cfg.clone(),
    };
    Ok(RunOutput { rows, metadata })
}

/// `# {metadata json}` followed by the suboptimality table.
pub fn write_run_csv<W: Write + ?Sized>(w: &mut W, out: &RunOutput) -> std::io::Result<()> {
    writeln!(w, "# {}", serde_json::to_string(&out.metadata).expect("metadata serializes"))?;
    let rows: Vec<(usize, Vec<f64>)> = out
        .rows
        .iter()
        .map(|r| (r.t, vec![r.f_subopt, r.iterate_subopt, r.jacobian_subopt]))
        .collect();
    write_table(w, &RUN_COLUMNS, &rows)
}

pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let out = run_experiment(cfg)?;
    emit(cfg.out.as_deref(), |w| write_run_csv(w, &out))?;
    Ok(out)
}

fn emit(path: Option<&std::path::Path>, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| io_err(Some(p), e))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(Some(p), e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w).map_err(|e| io_err(None, e))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsParams {
    pub ell: f64,
    pub big_l: f64,
    pub alpha: f64,
    pub eta: f64,
    pub d0: f64,
    pub g: f64,
    pub horizon: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsRow {
    pub t: usize,
    /// Gradient descent with `h = 1/L`.
    pub gd_small: f64,
    /// Gradient descent with `h = 2/(L + ℓ)`.
    pub gd_large: f64,
    pub chebyshev: f64,
    /// `2‖P★_t‖²_η·D₀`, the mean-square bound of the Sobolev method.
    pub sobolev: f64,
    /// Worst-case bound of Polyak's heavy ball on a grid of `[ℓ, L]`.
    pub heavyball_asymptotic: f64,
    pub lower_bound: f64,
}

pub const BOUNDS_COLUMNS: [&str; 7] = [
    "t",
    "gd_small",
    "gd_large",
    "chebyshev",
    "sobolev",
    "heavyball_asymptotic",
    "lower_bound",
];

pub fn bounds_table(p: &BoundsParams) -> Result<Vec<BoundsRow>> {
    let BoundsParams {
        ell,
        big_l,
        alpha,
        eta,
        d0,
        g,
        horizon,
    } = *p;
    if !(d0 >= 0.0 && g >= 0.0) {
        return Err(Error::InvalidParameter(format!("d0 and g must be nonnegative, got {d0}, {g}")));
    }
    let seq = SobolevParams::new(alpha, eta, ell, big_l)?.sequences(horizon)?;
    let hb = bound_curve_of_schedule(&heavy_ball_schedule(ell, big_l)?, ell, big_l, d0, g, horizon, GRID_POINTS)?;
    Ok((0..=horizon)
        .map(|t| BoundsRow {
            t,
            gd_small: gd_bound(1.0 / big_l, ell, big_l, d0, g, t),
            gd_large: gd_bound(2.0 / (big_l + ell), ell, big_l, d0, g, t),
            chebyshev: chebyshev_bound(ell, big_l, d0, g, t),
            sobolev: 2.0 * (-seq.ln_big_a[t]).exp() * d0,
            heavyball_asymptotic: hb[t],
            lower_bound: lower_bound(ell, big_l, d0, t),
        })
        .collect())
}

pub fn write_bounds_csv<W: Write + ?Sized>(w: &mut W, rows: &[BoundsRow]) -> std::io::Result<()> {
    let rows: Vec<(usize, Vec<f64>)> = rows
        .iter()
        .map(|r| {
            (
                r.t,
                vec![r.gd_small, r.gd_large, r.chebyshev, r.sobolev, r.heavyball_asymptotic, r.lower_bound],
            )
        })
        .collect();
    write_table(w, &BOUNDS_COLUMNS, &rows)
}

pub fn cmd_bounds(p: &BoundsParams, out: Option<&std::path::Path>) -> Result<Vec<BoundsRow>> {
    let rows = bounds_table(p)?;
    emit(out, |w| write_bounds_csv(w, &rows))?;
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamsRow {
    pub t: usize,
    pub h: f64,
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub a: f64,
    pub big_a: f64,
    pub ln_a: f64,
    pub ln_big_a: f64,
}

pub const PARAMS_COLUMNS: [&str; 10] = ["t", "h", "m", "c1", "c2", "c3", "a", "A", "ln_a", "ln_A"];

/// Sobolev coefficients for steps `1..=horizon`. `a` and `A` overflow for
/// long horizons; the log columns stay finite.
pub fn params_table(alpha: f64, eta: f64, ell: f64, big_l: f64, horizon: usize) -> Result<Vec<ParamsRow>> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let s = sobolev_schedule(SobolevParams::new(alpha, eta, ell, big_l)?)?.with_horizon(horizon)?;
    let seq = s.sobolev_sequences().expect("sobolev schedule");
    (1..=horizon)
        .map(|t| {
            let c = s.coeffs(t)?;
            let w = c.averaging.expect("three-sequence schedule");
            Ok(ParamsRow {
                t,
                h: c.h,
                m: c.m,
                c1: w.c1,
                c2: w.c2,
                c3: w.c3,
                a: w.a,
                big_a: w.big_a,
                ln_a: seq.ln_a[t],
                ln_big_a: seq.ln_big_a[t],
            })
        })
        .collect()
}

pub fn write_params_csv<W: Write + ?Sized>(w: &mut W, rows: &[ParamsRow]) -> std::io::Result<()> {
    let rows: Vec<(usize, Vec<f64>)> = rows
        .iter()
        .map(|r| (r.t, vec![r.h, r.m, r.c1, r.c2, r.c3, r.a, r.big_a, r.ln_a, r.ln_big_a]))
        .collect();
    write_table(w, &PARAMS_COLUMNS, &rows)
}

pub fn cmd_params(
    alpha: f64,
    eta: f64,
    ell: f64,
    big_l: f64,
    horizon: usize,
    out: Option<&std::path::Path>,
) -> Result<Vec<ParamsRow>> {
    let rows = params_table(alpha, eta, ell, big_l, horizon)?;
    emit(out, |w| write_params_csv(w, &rows))?;
    Ok(rows)
}
