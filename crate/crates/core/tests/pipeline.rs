mod common;

use common::*;
use isobuckle::driver::{build_model, load_config, run_analysis, sweep, CutoutSpec, ModelConfig, SweepAxis};
use isobuckle::solver::{assemble, BoundaryConditionSet};
use isobuckle::stiffener::{Stiffener, StiffenerMaterial};

fn without_timings(c: &ModelConfig) -> isobuckle::driver::ResultRow {
    let mut row = run_analysis(c).unwrap().row;
    row.static_seconds = 0.0;
    row.eigen_seconds = 0.0;
    row
}

#[test]
fn identical_config_gives_identical_results() {
    let mut c = ellipse_case(3, 30.0, &ANTISYMMETRIC_CROSS_PLY);
    c.stiffeners.push(corner_stiffener(0.25));
    c.analysis.n_modes = 3;
    let (a, b) = (run_analysis(&c).unwrap(), run_analysis(&c).unwrap());
    assert_eq!(without_timings(&c), without_timings(&c));
    assert_eq!(a.analysis.solution.lambdas, b.analysis.solution.lambdas);
    assert_eq!(a.analysis.solution.modes, b.analysis.solution.modes);
}

#[test]
fn bundled_configs_validate() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 4);
}

#[test]
fn clamped_radius_sweep_dips_then_rises() {
    let base = isotropic_case(4, 0.2, BoundaryConditionSet::Clamped);
    let t = sweep(&base, SweepAxis::Radius, &[0.0, 0.05, 0.25]);
    let l: Vec<f64> = t.rows.iter().map(|r| r.lambda_star.unwrap()).collect();
    assert!(l[1] < l[0], "{l:?}");
    assert!(l[2] > 2.5 * l[0], "{l:?}");
}

#[test]
fn larger_holes_converge_more_slowly() {
    let spread = |r: f64| {
        let mut base = isotropic_case(2, 2.0 * r, BoundaryConditionSet::Clamped);
        base.plate.material = isobuckle::driver::MaterialSpec::NormalizedComposite;
        base.plate.layup_deg = SYMMETRIC_CROSS_PLY.to_vec();
        let t = sweep(&base, SweepAxis::Refinement, &[2.0, 3.0, 4.0]);
        let l: Vec<f64> = t.rows.iter().map(|r| r.lambda_star.unwrap()).collect();
        (l[0] - l[2]).abs() / l[2]
    };
    assert!(spread(0.25) > spread(0.1));
}

#[test]
fn stiffener_never_lowers_lambda() {
    let plain = ellipse_case(4, 15.0, &SYMMETRIC_CROSS_PLY);
    let mut stiff = plain.clone();
    stiff.stiffeners.push(corner_stiffener(0.1));
    assert!(lambda_star(&stiff) > lambda_star(&plain));
}

#[test]
fn vanishing_stiffener_modulus_leaves_matrices_unchanged() {
    let plain = ellipse_case(3, 0.0, &SYMMETRIC_CROSS_PLY);
    let m = build_model(&plain).unwrap();
    let spec = corner_stiffener(0.0);
    let section = plain.stiffener_section(&spec, &m.constitutive).unwrap();
    let soft = StiffenerMaterial {
        e: 1e-300,
        nu: 0.3,
        alpha: 1.0,
    };
    let d = &m.discretization;
    let path = plain.stiffener_path(&spec).unwrap();
    let s = Stiffener::build(&d.patch, &path, section, soft, 5, d.cutout.as_ref(), &|e| d.enrichment(e)).unwrap();
    let (kp, fp) = assemble(d, &m.constitutive, &[], 1.0).unwrap();
    let (ks, fs) = assemble(d, &m.constitutive, &[s], 1.0).unwrap();
    let (dp, ds) = (kp.to_dense(), ks.to_dense());
    assert!((&dp - &ds).norm() <= 1e-14 * dp.norm());
    assert!((&fp - &fs).norm() <= 1e-14 * fp.norm());
}

#[test]
fn extra_dofs_grow_slower_than_total() {
    let rows: Vec<_> = (3..=5)
        .map(|l| {
            let mut c = ModelConfig::composite_plate(l, THIN, &SYMMETRIC_CROSS_PLY);
            c.cutouts.push(CutoutSpec::Circle {
                center: [0.5, 0.5],
                radius: 0.15,
            });
            let m = build_model(&c).unwrap();
            (m.discretization.dofmap.n_dof(), m.discretization.dofmap.extra_dof())
        })
        .collect();
    for w in rows.windows(2) {
        assert!((w[1].1 as f64 / w[0].1 as f64) < (w[1].0 as f64 / w[0].0 as f64));
    }
}

#[test]
fn same_mesh_serves_circle_and_ellipse() {
    let mut c = ModelConfig::composite_plate(4, THIN, &SYMMETRIC_CROSS_PLY);
    c.cutouts.push(CutoutSpec::Circle {
        center: [0.5, 0.5],
        radius: 0.15,
    });
    let mut e = c.clone();
    e.cutouts[0] = CutoutSpec::Ellipse {
        center: [0.5, 0.5],
        semi_major: 0.2,
        semi_minor: 0.1,
        theta_deg: 30.0,
    };
    let (mc, me) = (build_model(&c).unwrap(), build_model(&e).unwrap());
    assert_eq!(mc.discretization.patch, me.discretization.patch);
    assert_ne!(mc.discretization.dofmap.extra_dof(), 0);
    assert_ne!(me.discretization.dofmap.extra_dof(), 0);
}
