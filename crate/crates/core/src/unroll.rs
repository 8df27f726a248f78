//! Forward-mode unrolled differentiation.
//!
//! The iterate and its Jacobian `∂x_t(θ)` travel together through the same
//! [`MethodSchedule::advance`] call. For the Jacobian block the gradient
//! `Hx + b` is replaced by its derivative `H·J + ∂H·x + ∂b`, so each linear
//! update has an exact differentiated twin.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::methods::{Iterate, MethodSchedule, ScheduleKind, SequenceState};
use crate::polynomials::residual_poly_of_schedule;
use crate::problems::{Quadratic, QuadraticFamily};

/// Largest commutativity defect accepted by [`master_identity_residual`].
pub const COMMUTING_TOLERANCE: f64 = 1e-10;

/// Default relative finite-difference step.
pub const DEFAULT_FD_EPS: f64 = 1e-6;

/// Iterate paired with its Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct Joint {
    pub x: DVector<f64>,
    pub jac: DMatrix<f64>,
}

impl Iterate for Joint {
    fn axpy(&mut self, a: f64, other: &Self) {
        Iterate::axpy(&mut self.x, a, &other.x);
        self.jac += &other.jac * a;
    }
    fn scale(&mut self, a: f64) {
        Iterate::scale(&mut self.x, a);
        self.jac *= a;
    }
}

/// Gradient `Hx + b`, shared by the joint and the value-only paths.
fn value_gradient(q: &Quadratic, x: &DVector<f64>) -> DVector<f64> {
    &q.h * x + &q.b
}

fn joint_gradient(q: &Quadratic, p: &Joint) -> Joint {
    Joint {
        x: value_gradient(q, &p.x),
        jac: &q.h * &p.jac + q.dh_times(&p.x) + &q.db,
    }
}

#[derive(Clone, Debug)]
pub struct JointState {
    inner: SequenceState<Joint>,
}

impl JointState {
    pub fn t(&self) -> usize {
        self.inner.t
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.inner.x.x
    }

    pub fn jac(&self) -> &DMatrix<f64> {
        &self.inner.x.jac
    }

    /// Current `(y, ∂y)` of a three-sequence method.
    pub fn aux_y(&self) -> Option<(&DVector<f64>, &DMatrix<f64>)> {
        self.inner.aux.as_ref().map(|a| (&a.y.x, &a.y.jac))
    }

    /// Current `(z, ∂z)` of a three-sequence method.
    pub fn aux_z(&self) -> Option<(&DVector<f64>, &DMatrix<f64>)> {
        self.inner.aux.as_ref().map(|a| (&a.z.x, &a.z.jac))
    }

    /// Attach the auxiliary sequences a schedule needs. Only valid at `t = 0`.
    fn prepare(&mut self, schedule: &MethodSchedule) -> Result<()> {
        let wants_aux = schedule.kind() == ScheduleKind::ThreeSequence;
        if wants_aux == self.inner.aux.is_some() {
            return Ok(());
        }
        if self.inner.t != 0 {
            return Err(Error::InvalidParameter(format!(
                "state at t = {} was built for another kind of schedule",
                self.inner.t
            )));
        }
        self.inner = SequenceState::new(schedule, self.inner.x.clone());
        Ok(())
    }
}

/// State at `t = 0`. `jac0` defaults to zero.
pub fn init_state<F: QuadraticFamily + ?Sized>(
    family: &F,
    x0: &DVector<f64>,
    jac0: Option<&DMatrix<f64>>,
) -> Result<JointState> {
    let (d, k) = (family.dim_x(), family.dim_theta());
    if x0.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "x0 has {} entries, expected {d}",
            x0.len()
        )));
    }
    let jac = match jac0 {
        Some(j) if j.shape() != (d, k) => {
            return Err(Error::DimensionMismatch(format!(
                "jac0 is {}×{}, expected {d}×{k}",
                j.nrows(),
                j.ncols()
            )))
        }
        Some(j) => j.clone(),
        None => DMatrix::zeros(d, k),
    };
    let start = Joint { x: x0.clone(), jac };
    Ok(JointState {
        inner: SequenceState {
            t: 0,
            x_prev: start.clone(),
            x: start,
            aux: None,
        },
    })
}

fn check_state(q: &Quadratic, state: &JointState) -> Result<()> {
    if state.x().len() != q.dim_x() || state.jac().shape() != (q.dim_x(), q.dim_theta()) {
        return Err(Error::DimensionMismatch(format!(
            "state is ({}, {}×{}), problem is d={}, k={}",
            state.x().len(),
            state.jac().nrows(),
            state.jac().ncols(),
            q.dim_x(),
            q.dim_theta()
        )));
    }
    Ok(())
}

/// One step on an already evaluated problem.
pub fn step_quadratic(q: &Quadratic, schedule: &MethodSchedule, state: &mut JointState) -> Result<()> {
    check_state(q, state)?;
    state.prepare(schedule)?;
    schedule.advance(&mut state.inner, |p| joint_gradient(q, p))
}

pub fn step<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    schedule: &MethodSchedule,
    mut state: JointState,
) -> Result<JointState> {
    let q = family.evaluate(theta)?;
    step_quadratic(&q, schedule, &mut state)?;
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    pub t: usize,
    pub x: DVector<f64>,
    pub jac: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub x_star: DVector<f64>,
    pub jac_star: DMatrix<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectories hold t = 0")
    }

    /// `‖J_t − J⋆‖_F` for every stored `t`.
    pub fn jacobian_errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| (&p.jac - &self.jac_star).norm()).collect()
    }
}

/// Run `horizon` steps and keep every iterate, `t = 0` included.
pub fn run<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    schedule: &MethodSchedule,
    x0: &DVector<f64>,
    jac0: Option<&DMatrix<f64>>,
    horizon: usize,
) -> Result<Trajectory> {
    let q = family.evaluate(theta)?;
    run_quadratic(&q, family, schedule, x0, jac0, horizon)
}

fn run_quadratic<F: QuadraticFamily + ?Sized>(
    q: &Quadratic,
    family: &F,
    schedule: &MethodSchedule,
    x0: &DVector<f64>,
    jac0: Option<&DMatrix<f64>>,
    horizon: usize,
) -> Result<Trajectory> {
    let mut state = init_state(family, x0, jac0)?;
    let mut points = Vec::with_capacity(horizon + 1);
    points.push(TrajectoryPoint {
        t: 0,
        x: state.x().clone(),
        jac: state.jac().clone(),
    });
    for _ in 0..horizon {
        step_quadratic(q, schedule, &mut state)?;
        points.push(TrajectoryPoint {
            t: state.t(),
            x: state.x().clone(),
            jac: state.jac().clone(),
        });
    }
    Ok(Trajectory {
        points,
        x_star: q.solve_exact()?,
        jac_star: q.exact_jacobian()?,
    })
}

/// Value-only run of the same schedule, `x_0, …, x_horizon`.
pub fn run_values<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    schedule: &MethodSchedule,
    x0: &DVector<f64>,
    horizon: usize,
) -> Result<Vec<DVector<f64>>> {
    let q = family.evaluate(theta)?;
    if x0.len() != q.dim_x() {
        return Err(Error::DimensionMismatch(format!(
            "x0 has {} entries, expected {}",
            x0.len(),
            q.dim_x()
        )));
    }
    let mut state = SequenceState::new(schedule, x0.clone());
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(x0.clone());
    for _ in 0..horizon {
        schedule.advance(&mut state, |x| value_gradient(&q, x))?;
        out.push(state.x.clone());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuboptimalityRow {
    pub t: usize,
    pub f_subopt: f64,
    pub iterate_subopt: f64,
    pub jacobian_subopt: f64,
}

/// Per-step `f(x_t) − f(x⋆)`, `‖x_t − x⋆‖₂` and `‖J_t − J⋆‖_F`.
///
/// The objective gap is computed as `½eᵀHe` with `e = x_t − x⋆`, which does
/// not cancel near the optimum.
pub fn suboptimality_curves<F: QuadraticFamily + ?Sized>(
    traj: &Trajectory,
    family: &F,
    theta: &DVector<f64>,
) -> Result<Vec<SuboptimalityRow>> {
    let q = family.evaluate(theta)?;
    Ok(traj
        .points
        .iter()
        .map(|p| {
            let e = &p.x - &traj.x_star;
            SuboptimalityRow {
                t: p.t,
                f_subopt: 0.5 * e.dot(&(&q.h * &e)),
                iterate_subopt: e.norm(),
                jacobian_subopt: (&p.jac - &traj.jac_star).norm(),
            }
        })
        .collect())
}

/// Central differences of the value-only `x_horizon` with step
/// `eps·(1 + |θ_i|)` per coordinate.
pub fn finite_difference_jacobian<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    schedule: &MethodSchedule,
    x0: &DVector<f64>,
    horizon: usize,
    eps: f64,
) -> Result<DMatrix<f64>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let k = theta.len();
    let mut jac = DMatrix::zeros(family.dim_x(), k);
    for i in 0..k {
        let step = eps * (1.0 + theta[i].abs());
        let mut plus = theta.clone();
        plus[i] += step;
        let mut minus = theta.clone();
        minus[i] -= step;
        let xp = run_values(family, &plus, schedule, x0, horizon)?.pop().expect("non-empty");
        let xm = run_values(family, &minus, schedule, x0, horizon)?.pop().expect("non-empty");
        jac.set_column(i, &((xp - xm) / (plus[i] - minus[i])));
    }
    Ok(jac)
}

/// Distance between the unrolled `J_t − J⋆` and the residual-polynomial
/// prediction `(P_t(H) − P_t′(H)H)(J₀ − J⋆) + P_t′(H)·C`, where
/// `C = ∂H x₀ + ∂b + H J₀`, divided by `1 + ‖J⋆‖_F`.
///
/// Refuses families whose Hessian does not commute with its derivative.
pub fn master_identity_residual<F: QuadraticFamily + ?Sized>(
    family: &F,
    theta: &DVector<f64>,
    schedule: &MethodSchedule,
    t: usize,
    x0: &DVector<f64>,
    jac0: Option<&DMatrix<f64>>,
) -> Result<f64> {
    let q = family.evaluate(theta)?;
    let defect = q.commutativity_defect();
    if defect > COMMUTING_TOLERANCE {
        return Err(Error::NonCommuting(defect));
    }
    let traj = run_quadratic(&q, family, schedule, x0, jac0, t)?;
    let jac0 = &traj.points[0].jac;
    let p = residual_poly_of_schedule(schedule, t)?;
    let dp = p.derivative();
    let p_h = p.eval_matrix(&q.h);
    let dp_h = dp.eval_matrix(&q.h);
    let c = q.cross_derivative(x0, jac0)?;
    let predicted = (&p_h - &dp_h * &q.h) * (jac0 - &traj.jac_star) + &dp_h * c;
    let unrolled = &traj.last().jac - &traj.jac_star;
    Ok((unrolled - predicted).norm() / (1.0 + traj.jac_star.norm()))
}
