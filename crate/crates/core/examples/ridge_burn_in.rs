//! Jacobian suboptimality of several methods on the standardized
//! breast-cancer ridge problem, summarized by peak and burn-in length.

use nalgebra::{DMatrix, DVector};
use unrolljac::methods::{chebyshev_schedule, gd_schedule, sobolev_schedule, SobolevParams};
use unrolljac::polynomials::burn_in_stats;
use unrolljac::problems::{make_ridge, read_libsvm, QuadraticFamily};
use unrolljac::unroll::run;

fn main() -> unrolljac::Result<()> {
    let mut ds = read_libsvm(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/breast-cancer.libsvm"))?;
    ds.standardize();
    let d = ds.n_features();
    let probe = make_ridge(ds.design, ds.target, DVector::zeros(d), None, (1.0, 1.0))?;
    let theta = probe.default_theta();
    let ridge = probe.with_theta_range((theta, theta))?;
    let theta = DVector::from_element(1, theta);
    let (ell, big_l) = ridge.spectrum_interval();
    println!("l = {ell:.4e}, L = {big_l:.4e}, kappa = {:.3e}", ell / big_l);

    let methods = [
        ("gd 1/L", gd_schedule(1.0 / big_l)?),
        ("gd 2/(L+l)", gd_schedule(2.0 / (big_l + ell))?),
        ("chebyshev", chebyshev_schedule(ell, big_l)?),
        ("sobolev eta=L/l", sobolev_schedule(SobolevParams::new(1.0, big_l / ell, ell, big_l)?)?),
    ];
    let x0 = DVector::zeros(ridge.dim_x());
    let j0 = DMatrix::zeros(ridge.dim_x(), 1);
    for (name, s) in methods {
        let traj = run(&ridge, &theta, &s, &x0, Some(&j0), 400)?;
        let errs = traj.jacobian_errors();
        let stats = burn_in_stats(&errs)?;
        println!(
            "{name:>16}: start {:.3e}, peak {:.3e} at t={}, burn-in {}, final {:.3e}",
            errs[0],
            stats.peak_value,
            stats.peak_index,
            stats.burn_in_length,
            errs.last().unwrap()
        );
    }
    Ok(())
}
