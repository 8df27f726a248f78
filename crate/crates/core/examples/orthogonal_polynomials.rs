//! Gauss-Gegenbauer quadrature and the optimal residual polynomial of the
//! Sobolev inner product.

use unrolljac::methods::{sobolev_schedule, SobolevParams};
use unrolljac::polynomials::{gauss_gegenbauer, gegenbauer_mass, optimal_residual, SobolevProductSpec};

fn main() -> unrolljac::Result<()> {
    let rule = gauss_gegenbauer(1.0, 6)?;
    println!("nodes   {:?}", rule.nodes);
    println!("weights {:?}", rule.weights);
    println!("mass {} vs {}", rule.weights.iter().sum::<f64>(), gegenbauer_mass(1.0));

    let (alpha, eta, ell, big_l) = (1.0, 1.0, 0.5, 10.0);
    let spec = SobolevProductSpec::new(alpha, eta, ell, big_l, 24)?;
    let seq = sobolev_schedule(SobolevParams::new(alpha, eta, ell, big_l)?)?
        .sobolev_sequences()
        .expect("sobolev schedule")
        .clone();
    for t in [1, 4, 8, 12] {
        let opt = optimal_residual(&spec, t)?;
        println!(
            "t={t:>2}: |P*|^2 = {:.6e}, 1/A_t = {:.6e}, P*(0) = {}",
            spec.norm_sq(&opt.poly),
            (-seq.ln_big_a[t]).exp(),
            opt.poly.eval(0.0)
        );
    }
    Ok(())
}
