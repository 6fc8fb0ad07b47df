//! Simply supported isotropic plate under uniform heating, compared with
//! the classical closed form.

use isobuckle::driver::{run_analysis, MaterialSpec, ModelConfig};
use isobuckle::solver::BoundaryConditionSet;

fn main() -> isobuckle::Result<()> {
    let (e, nu, alpha, t): (f64, f64, f64, f64) = (208e9, 0.3, 1.17e-5, 0.01);
    let d = e * t.powi(3) / (12.0 * (1.0 - nu * nu));
    let n_cr = 2.0 * std::f64::consts::PI.powi(2) * d;
    let exact = n_cr * (1.0 - nu) / (e * alpha * t);
    println!("closed form dT_cr = {exact:.6}");
    for level in 2..=5 {
        let mut cfg = ModelConfig::composite_plate(level, t, &[0.0]);
        cfg.plate.material = MaterialSpec::Isotropic { e, nu, alpha };
        cfg.boundary = BoundaryConditionSet::SimplySupported;
        cfg.analysis.n_modes = 3;
        let out = run_analysis(&cfg)?;
        let dt = out.row.delta_t_cr.expect("plate buckles");
        println!(
            "level {level}: dT_cr = {dt:.6}  rel.err {:.2e}  ({} DOFs)",
            ((dt - exact) / exact).abs(),
            out.row.n_dof
        );
    }
    Ok(())
}
