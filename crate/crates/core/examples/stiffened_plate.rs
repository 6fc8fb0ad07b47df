//! Clamped cross-ply plate with an elliptical hole, with and without a
//! curved stiffener, for a range of end offsets.

use isobuckle::driver::{run_analysis, CutoutSpec, ModelConfig, StiffenerSpec};
use isobuckle::solver::Normalization;

fn base() -> ModelConfig {
    let mut c = ModelConfig::composite_plate(4, 0.01, &[0.0, 90.0, 0.0, 90.0]);
    c.cutouts.push(CutoutSpec::Ellipse {
        center: [0.5, 0.5],
        semi_major: 0.2,
        semi_minor: 0.1,
        theta_deg: 90.0,
    });
    c.analysis.normalization = Normalization::AlphaScaled {
        alpha0: 1.0,
        factor: 100.0,
    };
    c.analysis.n_modes = 1;
    c
}

fn main() -> isobuckle::Result<()> {
    let plain = run_analysis(&base())?.row;
    println!("unstiffened: lambda* = {:.4}", plain.lambda_star.unwrap_or(f64::NAN));
    for delta_eps in [0.0, 0.1, 0.25] {
        let mut c = base();
        c.stiffeners.push(StiffenerSpec {
            start: [0.0, 1.0],
            end: [1.0, 0.0],
            delta_eps,
            delta_dist: 0.0,
            gamma: 5.0,
            delta: 0.1,
            refinement: 5,
            material: None,
        });
        let row = run_analysis(&c)?.row;
        println!(
            "delta_eps {delta_eps:.2}: lambda* = {:.4}",
            row.lambda_star.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
