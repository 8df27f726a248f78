//! Unroll gradient descent on `f(x, θ) = ½θx² + x` and watch the Jacobian
//! estimate approach `1/θ²`.

use nalgebra::DVector;
use unrolljac::methods::gd_schedule;
use unrolljac::problems::{exact_jacobian, solve_exact, AffineFamily};
use unrolljac::unroll::run;

fn main() -> unrolljac::Result<()> {
    let family = AffineFamily::scalar_toy();
    let theta = DVector::from_element(1, 2.0);
    let schedule = gd_schedule(0.25)?;
    let traj = run(&family, &theta, &schedule, &DVector::zeros(1), None, 12)?;

    println!("x* = {}, dx*/dtheta = {}", solve_exact(&family, &theta)?[0], exact_jacobian(&family, &theta)?[(0, 0)]);
    println!("{:>3} {:>12} {:>12}", "t", "x_t", "J_t");
    for p in &traj.points {
        println!("{:>3} {:>12.8} {:>12.8}", p.t, p.x[0], p.jac[(0, 0)]);
    }
    Ok(())
}
