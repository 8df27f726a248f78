//! The Jacobian error of an unrolled method equals `P_t(H)·(J₀ − J*)` plus a
//! term driven by the cross derivative. Check it numerically.

use nalgebra::{DMatrix, DVector};
use unrolljac::methods::{chebyshev_schedule, gd_schedule, heavy_ball_schedule};
use unrolljac::problems::{make_synthetic, QuadraticFamily};
use unrolljac::unroll::master_identity_residual;

fn main() -> unrolljac::Result<()> {
    let ridge = make_synthetic(60, 20, 7)?;
    let theta = DVector::from_element(1, ridge.default_theta());
    let (ell, big_l) = ridge.spectrum_interval();
    let x0 = DVector::from_element(20, 0.3);
    let j0 = DMatrix::from_element(20, 1, -0.1);
    for (name, s) in [
        ("gd", gd_schedule(1.0 / big_l)?),
        ("chebyshev", chebyshev_schedule(ell, big_l)?),
        ("heavy ball", heavy_ball_schedule(ell, big_l)?),
    ] {
        let worst = (0..=30)
            .map(|t| master_identity_residual(&ridge, &theta, &s, t, &x0, Some(&j0)))
            .collect::<unrolljac::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{name:>10}: max residual over t<=30 = {worst:.3e}");
    }
    Ok(())
}
