//! With a non-identity metric `D`, `∂H` and `H` no longer commute. The master
//! identity is refused but forward mode still matches finite differences.

use nalgebra::DVector;
use unrolljac::methods::chebyshev_schedule;
use unrolljac::problems::{commutativity_defect, make_synthetic_with_metric, QuadraticFamily};
use unrolljac::unroll::{finite_difference_jacobian, master_identity_residual, run, DEFAULT_FD_EPS};
use unrolljac::Error;

fn main() -> unrolljac::Result<()> {
    let ridge = make_synthetic_with_metric(40, 10, 3)?;
    let theta = DVector::from_element(1, 0.5);
    let (ell, big_l) = ridge.spectrum_interval();
    let s = chebyshev_schedule(ell, big_l)?;
    let x0 = DVector::zeros(10);
    println!("commutativity defect {:.3e}", commutativity_defect(&ridge, &theta)?);

    match master_identity_residual(&ridge, &theta, &s, 10, &x0, None) {
        Err(Error::NonCommuting(defect)) => println!("master identity refused (defect {defect:.3e})"),
        other => println!("unexpected: {other:?}"),
    }
    let traj = run(&ridge, &theta, &s, &x0, None, 25)?;
    let fd = finite_difference_jacobian(&ridge, &theta, &s, &x0, 25, DEFAULT_FD_EPS)?;
    println!("forward vs finite differences: {:.3e}", (&traj.last().jac - &fd).norm() / fd.norm());
    Ok(())
}
