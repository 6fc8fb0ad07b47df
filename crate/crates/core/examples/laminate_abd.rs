//! Prints the A, B, D matrices and thermal resultants of a few layups of
//! the normalized composite lamina.

use isobuckle::laminate::{constitutive_set, normalized_composite_ply, LaminateStack};
use nalgebra::{Dim, Matrix, RawStorage};

fn rows<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(m: &Matrix<f64, R, C, S>) -> String {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| format!("{:>11.3e}", m[(i, j)])).collect::<String>())
        .collect::<Vec<_>>()
        .join(" |")
}

fn main() -> isobuckle::Result<()> {
    let layups: [(&str, &[f64]); 3] = [
        ("[0/90/90/0]", &[0.0, 90.0, 90.0, 0.0]),
        ("[0/90/0/90]", &[0.0, 90.0, 0.0, 90.0]),
        ("[45/-45/-45/45]", &[45.0, -45.0, -45.0, 45.0]),
    ];
    for (name, angles) in layups {
        let radians: Vec<f64> = angles.iter().map(|a| a.to_radians()).collect();
        let stack = LaminateStack::from_angles(normalized_composite_ply(), &radians, 0.01)?;
        let cs = constitutive_set(&stack, 5.0 / 6.0)?;
        println!("{name}  t = {}", cs.thickness);
        println!("  A   {}", rows(&cs.a));
        println!("  B   {}", rows(&cs.b));
        println!("  D   {}", rows(&cs.d));
        println!("  A_s {}", rows(&cs.a_s));
        println!("  N_T {}", rows(&cs.n_t.transpose()));
        println!("  M_T {}", rows(&cs.m_t.transpose()));
    }
    Ok(())
}
