//! Solves a plate with a clover cutout and writes its first modes as CSV
//! and VTK files.

use isobuckle::driver::{export_modes, run_analysis, CutoutSpec, ModeFormat, ModelConfig};
use isobuckle::solver::Normalization;

fn main() -> isobuckle::Result<()> {
    let mut cfg = ModelConfig::composite_plate(4, 0.01, &[0.0, 90.0, 90.0, 0.0]);
    cfg.cutouts.push(CutoutSpec::Clover);
    cfg.analysis.n_modes = 3;
    cfg.analysis.normalization = Normalization::AlphaScaled {
        alpha0: 1.0,
        factor: 100.0,
    };
    let out = run_analysis(&cfg)?;
    for (m, lambda, star) in out.eigenvalues() {
        println!("mode {m}: lambda = {lambda:.6e}, lambda* = {star:.4}");
    }
    let dir = std::env::temp_dir().join("isobuckle_modes");
    let files = export_modes(
        &out.model.discretization,
        &out.analysis.solution.modes,
        61,
        &[ModeFormat::Csv, ModeFormat::Vtk],
        &dir,
    )?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
