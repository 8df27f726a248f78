//! Read a dataset from disk and build the ridge family used in experiments.
//!
//! ```text
//! cargo run --example load_dataset -- data/breast-cancer.libsvm
//! ```

use nalgebra::DVector;
use unrolljac::problems::{make_ridge, read_dataset, QuadraticFamily};

fn main() -> unrolljac::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/sample.libsvm").to_string());
    let mut ds = read_dataset(&path)?;
    println!("{path}: {} samples, {} features", ds.n_samples(), ds.n_features());
    for standardize in [false, true] {
        if standardize {
            ds.standardize();
        }
        let d = ds.n_features();
        let probe = make_ridge(ds.design.clone(), ds.target.clone(), DVector::zeros(d), None, (1.0, 1.0))?;
        let theta = probe.default_theta();
        let ridge = probe.with_theta_range((theta, theta))?;
        let (ell, big_l) = ridge.spectrum_interval();
        println!(
            "standardized={standardize}: theta={theta:.4e}, l={ell:.4e}, L={big_l:.4e}, kappa={:.3e}",
            ell / big_l
        );
    }
    Ok(())
}
