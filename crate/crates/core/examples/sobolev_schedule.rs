//! Coefficients of the Sobolev method and their heavy-ball limit.

use unrolljac::methods::{heavy_ball_constants, sobolev_schedule, SobolevParams};

fn main() -> unrolljac::Result<()> {
    let (ell, big_l) = (0.5, 10.0);
    let (h_inf, m_inf) = heavy_ball_constants(ell, big_l);
    for eta in [1.0, big_l / ell] {
        let s = sobolev_schedule(SobolevParams::new(1.0, eta, ell, big_l)?)?;
        println!("eta = {eta}");
        for t in [1, 2, 5, 10, 20, 50, 100, 200] {
            let c = s.coeffs(t)?;
            let avg = c.averaging.expect("sobolev steps carry averaging weights");
            println!(
                "  t={t:>3}  h={:.6}  m={:.6}  c1={:+.4}  c2={:+.4}  c3={:+.4}",
                c.h, c.m, avg.c1, avg.c2, avg.c3
            );
        }
    }
    println!("heavy ball: h={h_inf:.6}  m={m_inf:.6}");
    Ok(())
}
