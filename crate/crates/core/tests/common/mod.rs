#![allow(dead_code)]

use isobuckle::driver::{run_analysis, CutoutSpec, MaterialSpec, ModelConfig, StiffenerSpec};
use isobuckle::solver::{BoundaryConditionSet, Normalization};

/// a/h = 100 on the unit square.
pub const THIN: f64 = 0.01;

pub const SYMMETRIC_CROSS_PLY: [f64; 4] = [0.0, 90.0, 90.0, 0.0];
pub const ANTISYMMETRIC_CROSS_PLY: [f64; 4] = [0.0, 90.0, 0.0, 90.0];

/// Thin-plate tables report `alpha0 dT_cr` scaled by 100.
pub fn thin_normalization() -> Normalization {
    Normalization::AlphaScaled {
        alpha0: 1.0,
        factor: 100.0,
    }
}

/// Clamped thin composite plate with the 0.2 x 0.1 central ellipse whose
/// major axis sits `theta_deg` from the y axis.
pub fn ellipse_case(level: usize, theta_deg: f64, layup: &[f64]) -> ModelConfig {
    let mut c = ModelConfig::composite_plate(level, THIN, layup);
    c.cutouts.push(CutoutSpec::Ellipse {
        center: [0.5, 0.5],
        semi_major: 0.2,
        semi_minor: 0.1,
        theta_deg: 90.0 + theta_deg,
    });
    c.analysis.normalization = thin_normalization();
    c.analysis.n_modes = 1;
    c
}

/// Steel plate, 10 mm thick, with a central hole of diameter `d` (0 = none).
pub fn isotropic_case(level: usize, d: f64, boundary: BoundaryConditionSet) -> ModelConfig {
    let mut c = ModelConfig::composite_plate(level, THIN, &[0.0]);
    c.plate.material = MaterialSpec::Isotropic {
        e: 208e9,
        nu: 0.3,
        alpha: 1.17e-5,
    };
    if d > 0.0 {
        c.cutouts.push(CutoutSpec::Circle {
            center: [0.5, 0.5],
            radius: d / 2.0,
        });
    }
    c.boundary = boundary;
    c.analysis.n_modes = 1;
    c
}

/// Corner-to-corner parabola bowed toward the origin, `gamma = 5`,
/// `delta = 0.1`.
pub fn corner_stiffener(delta_eps: f64) -> StiffenerSpec {
    StiffenerSpec {
        start: [0.0, 1.0],
        end: [1.0, 0.0],
        delta_eps,
        delta_dist: 0.0,
        gamma: 5.0,
        delta: 0.1,
        refinement: 5,
        material: None,
    }
}

pub fn lambda_star(c: &ModelConfig) -> f64 {
    run_analysis(c)
        .expect("analysis runs")
        .row
        .lambda_star
        .expect("plate buckles")
}

/// Classical simply supported plate under equal biaxial compression:
/// `N_cr = min_{m,n} pi^2 D (m^2/a^2 + n^2/b^2)`, converted to a temperature
/// through `N = E alpha t dT / (1 - nu)`.
pub fn classical_ssss_temperature(e: f64, nu: f64, alpha: f64, t: f64, a: f64, b: f64) -> f64 {
    let d = e * t.powi(3) / (12.0 * (1.0 - nu * nu));
    let pi2 = std::f64::consts::PI.powi(2);
    let mut n_cr = f64::INFINITY;
    for m in 1..=10 {
        for n in 1..=10 {
            let k = (m * m) as f64 / (a * a) + (n * n) as f64 / (b * b);
            n_cr = n_cr.min(pi2 * d * k);
        }
    }
    n_cr * (1.0 - nu) / (e * alpha * t)
}
