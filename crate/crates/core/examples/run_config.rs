//! Loads a JSON model file and runs it.
//!
//! `cargo run --example run_config -- examples/configs/isotropic_hole.json`

use std::path::PathBuf;

use isobuckle::driver::{load_config, run_analysis};

fn main() -> isobuckle::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/ellipse_composite.json")));
    let cfg = load_config(&path)?;
    let out = run_analysis(&cfg)?;
    let r = &out.row;
    println!("case {}", r.case);
    println!("  DOFs {} (extra {}), free {}", r.n_dof, r.extra_dof, r.n_free);
    println!("  dT_cr = {:?}, lambda* = {:?}", r.delta_t_cr, r.lambda_star);
    println!("  static {:.3}s, eigen {:.3}s", r.static_seconds, r.eigen_seconds);
    Ok(())
}
