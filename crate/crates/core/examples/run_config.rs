//! Load a JSON experiment config and run it, as the `run` subcommand does.
//!
//! ```text
//! cargo run --example run_config -- configs/breast_cancer_gd.json
//! ```

use std::path::PathBuf;

use unrolljac::cli::{run_experiment, write_run_csv, ExperimentConfig};

fn main() -> unrolljac::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/synthetic_chebyshev.json")));
    let cfg = ExperimentConfig::load(&path)?;
    let out = run_experiment(&cfg)?;
    let m = &out.metadata;
    println!(
        "{} on {}: kappa={:.3e}, D0={:.3e}, G={:.3e}, peak {:.3e} at t={}",
        m.method, m.dataset, m.kappa, m.d0, m.g, m.burn_in.peak_value, m.burn_in.peak_index
    );
    let mut head = Vec::new();
    write_run_csv(&mut head, &out).map_err(|e| unrolljac::Error::Io { path: "<memory>".into(), source: e })?;
    for line in String::from_utf8_lossy(&head).lines().skip(1).take(6) {
        println!("{line}");
    }
    Ok(())
}
