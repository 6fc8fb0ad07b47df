//! Integrates the material area of a plate with a circular hole using the
//! cut-element rules and compares with the exact value.

use isobuckle::geometry::NurbsPatch;
use isobuckle::levelset::LevelSetShape;
use isobuckle::solver::{discretize, QuadratureOptions};

fn main() -> isobuckle::Result<()> {
    let r = 0.2;
    let exact = 1.0 - std::f64::consts::PI * r * r;
    println!("{:>6} {:>10} {:>14} {:>10}", "level", "elements", "area", "rel.err");
    for level in 2..=6 {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2)?.h_refine(level)?;
        let shape = LevelSetShape::circle([0.5, 0.5], r);
        let disc = discretize(patch, Some(shape), &QuadratureOptions::default())?;
        let area = disc.material_area();
        println!(
            "{level:>6} {:>10} {area:>14.10} {:>10.2e}",
            disc.fields.len(),
            ((area - exact) / exact).abs()
        );
    }
    Ok(())
}
