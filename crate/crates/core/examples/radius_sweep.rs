//! Sweeps the radius of a central hole in a clamped isotropic plate and
//! writes the table to a CSV file.

use isobuckle::driver::{sweep, CutoutSpec, MaterialSpec, ModelConfig, SweepAxis};

fn main() -> isobuckle::Result<()> {
    let mut cfg = ModelConfig::composite_plate(4, 0.01, &[0.0]);
    cfg.name = "hole".into();
    cfg.plate.material = MaterialSpec::Isotropic {
        e: 208e9,
        nu: 0.3,
        alpha: 1.17e-5,
    };
    cfg.cutouts.push(CutoutSpec::Circle {
        center: [0.5, 0.5],
        radius: 0.1,
    });
    cfg.analysis.n_modes = 1;
    let table = sweep(&cfg, SweepAxis::Radius, &[0.0, 0.05, 0.1, 0.15, 0.2, 0.25]);
    for row in &table.rows {
        println!(
            "r = {:.2}: dT_cr = {:>8.3}  extra DOFs {:>4}  {}",
            row.parameter.unwrap_or_default(),
            row.delta_t_cr.unwrap_or(f64::NAN),
            row.extra_dof,
            row.status
        );
    }
    let path = std::env::temp_dir().join("radius_sweep.csv");
    table.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
