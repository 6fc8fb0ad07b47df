//! Builds the quarter annulus, refines it and checks that the mapped
//! geometry does not move.

use isobuckle::geometry::NurbsPatch;

fn main() -> isobuckle::Result<()> {
    let coarse = NurbsPatch::quarter_annulus(0.5, 1.0)?;
    let fine = coarse.h_refine(3)?;
    println!(
        "control points: {} -> {}, elements: {:?} -> {:?}",
        coarse.num_control_points(),
        fine.num_control_points(),
        coarse.element_grid(),
        fine.element_grid()
    );
    let mut worst: f64 = 0.0;
    for i in 0..=10 {
        for j in 0..=10 {
            let (xi, eta) = (i as f64 / 10.0, j as f64 / 10.0);
            let a = coarse.point(xi, eta)?;
            let b = fine.point(xi, eta)?;
            worst = worst.max((a - b).norm());
            let r = a.norm();
            assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
    }
    println!("max geometry drift after refinement: {worst:.2e}");
    let p = fine.point(0.5, 0.5)?;
    println!("S(0.5, 0.5) = ({:.6}, {:.6}), radius {:.6}", p.x, p.y, p.norm());
    Ok(())
}
