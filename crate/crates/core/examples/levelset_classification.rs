//! Tags the elements of a 16 x 16 plate against several cutouts and draws
//! the result as ASCII.

use isobuckle::geometry::NurbsPatch;
use isobuckle::levelset::{classify_elements, union_of, ElementTag, LevelSetShape};

fn main() -> isobuckle::Result<()> {
    let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2)?.h_refine(4)?;
    let (nx, ny) = patch.element_grid();
    let shapes = [
        ("circle r=0.2", LevelSetShape::circle([0.5, 0.5], 0.2)),
        ("ellipse 0.2x0.1 at 30 deg", LevelSetShape::ellipse([0.5, 0.5], 0.2, 0.1, 30f64.to_radians())),
        ("clover", LevelSetShape::clover()),
        (
            "two circles",
            union_of(&[
                LevelSetShape::circle([0.3, 0.3], 0.12),
                LevelSetShape::circle([0.7, 0.7], 0.12),
            ])
            .expect("non-empty"),
        ),
    ];
    for (name, shape) in shapes {
        let c = classify_elements(&patch, &shape)?;
        println!(
            "{name}: outer {}, inner {}, enriched {}, area {:.4}",
            c.count(ElementTag::Outer),
            c.count(ElementTag::Inner),
            c.count(ElementTag::Enriched),
            shape.area()
        );
        for j in (0..ny).rev() {
            let row: String = (0..nx)
                .map(|i| match c.tags[j * nx + i] {
                    ElementTag::Outer => '.',
                    ElementTag::Inner => ' ',
                    ElementTag::Enriched => '#',
                })
                .collect();
            println!("  {row}");
        }
    }
    Ok(())
}
