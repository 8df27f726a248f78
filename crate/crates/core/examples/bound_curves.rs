//! Closed-form Jacobian bounds for every method on one spectrum interval.

use unrolljac::cli::{bounds_table, BoundsParams};

fn main() -> unrolljac::Result<()> {
    let (ell, big_l) = (0.5, 10.0);
    let rows = bounds_table(&BoundsParams {
        ell,
        big_l,
        alpha: 1.0,
        eta: big_l / ell,
        d0: 1.0,
        g: 0.0,
        horizon: 60,
    })?;
    println!(
        "{:>3} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "t", "gd 1/L", "gd 2/(L+l)", "chebyshev", "sobolev", "heavyball", "lower"
    );
    for r in rows.iter().step_by(5) {
        println!(
            "{:>3} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            r.t, r.gd_small, r.gd_large, r.chebyshev, r.sobolev, r.heavyball_asymptotic, r.lower_bound
        );
    }
    Ok(())
}
