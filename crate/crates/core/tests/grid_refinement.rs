//! Worst-case bounds of schedules are maxima over a grid of `[ℓ, L]`.
//! Refining the grid must change them by a negligible amount, and grid values
//! must stay below the closed forms, which are exact suprema or relaxations.

use unrolljac::methods::{chebyshev_schedule, gd_schedule, heavy_ball_schedule};
use unrolljac::polynomials::{bound_curve_of_schedule, chebyshev_bound, gd_bound, GRID_POINTS};

#[test]
fn default_grid_is_converged() {
    for &(ell, big_l) in &[(0.5, 10.0), (1.0, 100.0), (0.01, 1.0)] {
        for s in [
            gd_schedule(2.0 / (ell + big_l)).unwrap(),
            chebyshev_schedule(ell, big_l).unwrap(),
            heavy_ball_schedule(ell, big_l).unwrap(),
        ] {
            let coarse = bound_curve_of_schedule(&s, ell, big_l, 1.0, 1.0, 60, 1001).unwrap();
            let default = bound_curve_of_schedule(&s, ell, big_l, 1.0, 1.0, 60, GRID_POINTS).unwrap();
            let fine = bound_curve_of_schedule(&s, ell, big_l, 1.0, 1.0, 60, 10 * GRID_POINTS).unwrap();
            for t in 0..=60 {
                let rel_default = (fine[t] - default[t]).abs() / fine[t];
                let rel_coarse = (fine[t] - coarse[t]).abs() / fine[t];
                assert!(rel_default <= 1e-5, "{} t={t}: {rel_default:e}", s.label());
                assert!(rel_default <= rel_coarse + 1e-15, "{} t={t}", s.label());
                assert!(default[t] <= fine[t] * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn grid_bounds_below_closed_forms() {
    for &(ell, big_l) in &[(0.5, 10.0), (1.0, 100.0)] {
        let (d0, g) = (1.0, 0.7);
        let cheb = bound_curve_of_schedule(&chebyshev_schedule(ell, big_l).unwrap(), ell, big_l, d0, g, 80, GRID_POINTS)
            .unwrap();
        for h in [1.0 / big_l, 2.0 / (ell + big_l)] {
            let gd = bound_curve_of_schedule(&gd_schedule(h).unwrap(), ell, big_l, d0, g, 80, GRID_POINTS).unwrap();
            for t in 0..=80 {
                let closed = gd_bound(h, ell, big_l, d0, g, t);
                assert!(gd[t] <= closed * (1.0 + 1e-9), "gd t={t}: {} > {closed}", gd[t]);
            }
        }
        for t in 0..=80 {
            let closed = chebyshev_bound(ell, big_l, d0, g, t);
            assert!(cheb[t] <= closed * (1.0 + 1e-9), "chebyshev t={t}: {} > {closed}", cheb[t]);
        }
    }
}
