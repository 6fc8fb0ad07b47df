//! Curvilinear Timoshenko stiffener bonded to the plate top surface.
//!
//! The stiffener is a quadratic NURBS curve with its own refinement. It adds
//! no DOFs: at each Gauss station along the curve the beam strains are written
//! in terms of the plate field through the plate basis, so every contribution
//! is a congruence transform of a small beam stiffness.
//!
//! Beam strains at a station with unit tangent `t` and normal `n`:
//! * axial: `t . grad(u_c) t` with `u_c = u0 + zbar beta`, `zbar = (t_p + h_s) / 2`
//! * bending: `t . grad(beta) t`
//! * shear: `t . (grad(w) + beta)`
//! * torsion: `n . grad(beta) t`
//!
//! Geometric stiffness uses the axial force acting on `w_,s`.

use nalgebra::{DMatrix, DVector, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::cut_quadrature::{gauss_legendre, ElementRule, QuadPoint};
use crate::error::{Error, Result};
use crate::geometry::{NurbsCurve, NurbsPatch};
use crate::laminate::SHEAR_CORRECTION;
use crate::levelset::LevelSetShape;
use crate::plate::{element_fields, ColumnBlock, ShapeFn, DOFS_PER_FUNCTION};

/// Three-control-point parabola with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffenerPath {
    pub curve: NurbsCurve,
    pub delta_eps: f64,
    pub delta_dist: f64,
}

/// Quadratic Bezier path from `p_start` to `p_end` through the control point
/// `(delta_dist, delta_dist)`.
///
/// `delta_eps` slides the start point horizontally and the end point
/// vertically, each toward the other end, so corner end points move along
/// the top and right edges of a path running from the top-left to the
/// bottom-right corner.
pub fn parabola_path(
    p_start: Vector2<f64>,
    p_end: Vector2<f64>,
    delta_eps: f64,
    delta_dist: f64,
) -> Result<StiffenerPath> {
    if !delta_eps.is_finite() || delta_eps < 0.0 || !delta_dist.is_finite() {
        return Err(Error::StiffenerGeometry(format!(
            "offsets must be finite and non-negative (delta_eps = {delta_eps})"
        )));
    }
    let start = p_start + Vector2::new(delta_eps * (p_end.x - p_start.x).signum(), 0.0);
    let end = p_end + Vector2::new(0.0, delta_eps * (p_start.y - p_end.y).signum());
    if (end - start).norm() < 1e-12 {
        return Err(Error::StiffenerGeometry("stiffener end points coincide".into()));
    }
    Ok(StiffenerPath {
        curve: NurbsCurve::quadratic_bezier(start, Vector2::new(delta_dist, delta_dist), end),
        delta_eps,
        delta_dist,
    })
}

/// Isotropic stiffener material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StiffenerMaterial {
    pub e: f64,
    pub nu: f64,
    pub alpha: f64,
}

impl StiffenerMaterial {
    pub fn shear_modulus(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.nu))
    }
}

/// Rectangular section `b_s x h_s` sitting on the plate top surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffenerSection {
    pub b_s: f64,
    pub h_s: f64,
    pub area: f64,
    /// Second moment about the plate mid-plane.
    pub inertia: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Distance from plate mid-plane to stiffener centroid.
    pub eccentricity: f64,
}

impl StiffenerSection {
    /// Second moment about the stiffener's own centroid.
    pub fn own_inertia(&self) -> f64 {
        self.b_s * self.h_s.powi(3) / 12.0
    }

    /// Saint-Venant torsion constant of the rectangle.
    pub fn torsion_constant(&self) -> f64 {
        let (long, short) = if self.b_s >= self.h_s {
            (self.b_s, self.h_s)
        } else {
            (self.h_s, self.b_s)
        };
        let r = short / long;
        (1.0 / 3.0 - 0.21 * r * (1.0 - r.powi(4) / 12.0)) * long * short.powi(3)
    }
}

/// Sizes the section from `gamma = E_s I / (b D11)` and
/// `delta = A_s / (b t_p)`, with `I` taken about the plate mid-plane.
///
/// Height solves `h^2 / 3 + t h / 2 + t^2 / 4 - I / A = 0`, then
/// `b_s = A_s / h_s`.
pub fn section_from_ratios(
    gamma: f64,
    delta: f64,
    plate_thickness: f64,
    plate_width: f64,
    d11: f64,
    e_s: f64,
) -> Result<StiffenerSection> {
    if !(gamma > 0.0 && delta > 0.0 && plate_thickness > 0.0 && plate_width > 0.0 && d11 > 0.0 && e_s > 0.0) {
        return Err(Error::Sizing(format!(
            "ratios and plate data must be positive (gamma = {gamma}, delta = {delta})"
        )));
    }
    let t = plate_thickness;
    let area = delta * plate_width * t;
    let inertia = gamma * plate_width * d11 / e_s;
    let c = t * t / 4.0 - inertia / area;
    let disc = t * t / 4.0 - 4.0 / 3.0 * c;
    if c >= 0.0 || disc < 0.0 {
        return Err(Error::Sizing(format!(
            "no positive stiffener height for I/A = {} with t = {t}",
            inertia / area
        )));
    }
    let h = (-t / 2.0 + disc.sqrt()) / (2.0 / 3.0);
    Ok(StiffenerSection {
        b_s: area / h,
        h_s: h,
        area,
        inertia,
        gamma,
        delta,
        eccentricity: 0.5 * (t + h),
    })
}

/// Plate field sampled at one stiffener Gauss point.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffenerStation {
    pub position: Vector2<f64>,
    pub tangent: Vector2<f64>,
    /// Gauss weight times arc-length Jacobian.
    pub weight: f64,
    pub element: usize,
    pub columns: Vec<ColumnBlock>,
    pub functions: Vec<ShapeFn>,
}

/// Stiffener discretized into plate-coupled stations.
#[derive(Debug, Clone, PartialEq)]
pub struct Stiffener {
    pub section: StiffenerSection,
    pub material: StiffenerMaterial,
    pub stations: Vec<StiffenerStation>,
}

impl Stiffener {
    /// Places two Gauss stations per span of the curve refined `refinement`
    /// times. `enrichment` returns the element corner level-set values where
    /// the plate basis is enriched.
    pub fn build(
        patch: &NurbsPatch,
        path: &StiffenerPath,
        section: StiffenerSection,
        material: StiffenerMaterial,
        refinement: usize,
        cutout: Option<&LevelSetShape>,
        enrichment: &dyn Fn(usize) -> Option<[f64; 4]>,
    ) -> Result<Self> {
        let curve = path.curve.h_refine(refinement)?;
        let (gx, gw) = gauss_legendre(2);
        let mut stations = Vec::new();
        for (_, a, b) in curve.knots().spans() {
            for (g, w) in gx.iter().zip(&gw) {
                let u = 0.5 * (a + b) + 0.5 * (b - a) * g;
                let cp = curve.evaluate(u)?;
                let speed = cp.tangent.norm();
                if speed == 0.0 {
                    return Err(Error::StiffenerGeometry(format!("zero tangent at u = {u}")));
                }
                if let Some(shape) = cutout {
                    if shape.signed_distance(cp.point) < 0.0 {
                        return Err(Error::StiffenerGeometry(format!(
                            "stiffener crosses the cutout at ({:.4}, {:.4})",
                            cp.point.x, cp.point.y
                        )));
                    }
                }
                let (el, s, t) = patch.locate(cp.point).map_err(|_| {
                    Error::StiffenerGeometry(format!(
                        "stiffener point ({:.4}, {:.4}) is outside the plate",
                        cp.point.x, cp.point.y
                    ))
                })?;
                let phi = enrichment(el.id);
                let rule = ElementRule {
                    points: vec![QuadPoint { s, t, weight: 1.0 }],
                    cut: false,
                };
                let mut f = element_fields(patch, &el, &rule, phi.as_ref())?;
                stations.push(StiffenerStation {
                    position: cp.point,
                    tangent: cp.tangent / speed,
                    weight: w * 0.5 * (b - a) * speed,
                    element: el.id,
                    columns: f.columns,
                    functions: f.points.swap_remove(0).functions,
                });
            }
        }
        Ok(Self {
            section,
            material,
            stations,
        })
    }

    pub fn length(&self) -> f64 {
        self.stations.iter().map(|s| s.weight).sum()
    }

    /// `diag(EA, E I_own, k G A, G J)`.
    pub fn section_stiffness(&self) -> Matrix4<f64> {
        let (e, g) = (self.material.e, self.material.shear_modulus());
        let s = &self.section;
        Matrix4::from_diagonal(&Vector4::new(
            e * s.area,
            e * s.own_inertia(),
            SHEAR_CORRECTION * g * s.area,
            g * s.torsion_constant(),
        ))
    }

    /// Beam strain operator (4 x 5n) and `w_,s` row at a station.
    pub fn strain_operator(&self, station: &StiffenerStation) -> (DMatrix<f64>, DVector<f64>) {
        let t = station.tangent;
        let nrm = Vector2::new(-t.y, t.x);
        let z = self.section.eccentricity;
        let m = station.functions.len();
        let mut op = DMatrix::zeros(4, DOFS_PER_FUNCTION * m);
        let mut ws = DVector::zeros(DOFS_PER_FUNCTION * m);
        for (k, f) in station.functions.iter().enumerate() {
            let c = DOFS_PER_FUNCTION * k;
            let ds = t.x * f.dx + t.y * f.dy;
            op[(0, c)] = t.x * ds;
            op[(0, c + 1)] = t.y * ds;
            op[(0, c + 3)] = z * t.x * ds;
            op[(0, c + 4)] = z * t.y * ds;
            op[(1, c + 3)] = t.x * ds;
            op[(1, c + 4)] = t.y * ds;
            op[(2, c + 2)] = ds;
            op[(2, c + 3)] = t.x * f.value;
            op[(2, c + 4)] = t.y * f.value;
            op[(3, c + 3)] = nrm.x * ds;
            op[(3, c + 4)] = nrm.y * ds;
            ws[c + 2] = ds;
        }
        (op, ws)
    }

    /// Per-station stiffness blocks.
    pub fn stiffness(&self) -> Vec<(&[ColumnBlock], DMatrix<f64>)> {
        let d = self.section_stiffness();
        let d = DMatrix::from_iterator(4, 4, d.iter().copied());
        self.stations
            .iter()
            .map(|st| {
                let (op, _) = self.strain_operator(st);
                let k = op.transpose() * (&d * &op) * st.weight;
                (st.columns.as_slice(), (&k + k.transpose()) * 0.5)
            })
            .collect()
    }

    /// Per-station thermal load from restrained axial expansion.
    pub fn thermal_force(&self, delta_t: f64) -> Vec<(&[ColumnBlock], DVector<f64>)> {
        let n_t = self.material.e * self.section.area * self.material.alpha * delta_t;
        self.stations
            .iter()
            .map(|st| {
                let (op, _) = self.strain_operator(st);
                (st.columns.as_slice(), op.row(0).transpose() * (n_t * st.weight))
            })
            .collect()
    }

    /// Axial force `EA (eps - alpha dT)` at each station for the station
    /// displacement vectors `u`.
    pub fn axial_forces(&self, u: &[DVector<f64>], delta_t: f64) -> Vec<f64> {
        let ea = self.material.e * self.section.area;
        self.stations
            .iter()
            .zip(u)
            .map(|(st, ue)| {
                let (op, _) = self.strain_operator(st);
                let eps = op.row(0).dot(&ue.transpose());
                ea * (eps - self.material.alpha * delta_t)
            })
            .collect()
    }

    /// Per-station geometric stiffness `N_s w_,s^2`.
    pub fn geometric_stiffness(&self, axial: &[f64]) -> Vec<(&[ColumnBlock], DMatrix<f64>)> {
        self.stations
            .iter()
            .zip(axial)
            .map(|(st, &n)| {
                let (_, ws) = self.strain_operator(st);
                (st.columns.as_slice(), &ws * ws.transpose() * (n * st.weight))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn material() -> StiffenerMaterial {
        StiffenerMaterial {
            e: 1.0,
            nu: 0.3,
            alpha: 1.0,
        }
    }

    #[test]
    fn straight_path_when_offsets_vanish() {
        let p = parabola_path(Vector2::new(0.0, 1.0), Vector2::new(1.0, 0.0), 0.0, 0.5).unwrap();
        for k in 0..=10 {
            let x = p.curve.evaluate(k as f64 / 10.0).unwrap().point;
            assert!((x.x + x.y - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn offset_ends_interpolated() {
        let p = parabola_path(Vector2::new(0.0, 1.0), Vector2::new(1.0, 0.0), 0.25, 0.25).unwrap();
        let a = p.curve.evaluate(0.0).unwrap().point;
        let b = p.curve.evaluate(1.0).unwrap().point;
        assert!((a - Vector2::new(0.25, 1.0)).norm() < 1e-15);
        assert!((b - Vector2::new(1.0, 0.25)).norm() < 1e-15);
        // bowed: the curve midpoint leaves the chord
        let m = p.curve.evaluate(0.5).unwrap().point;
        assert!((m.x + m.y - 1.25).abs() > 0.1);
    }

    #[test]
    fn sizing_reproduces_ratios() {
        let (t, b, d11, e) = (0.1, 1.0, 2.0e-3, 1.0);
        let s = section_from_ratios(5.0, 0.1, t, b, d11, e).unwrap();
        assert!((s.area - 0.1 * b * t).abs() < 1e-15);
        assert!((s.b_s * s.h_s - s.area).abs() < 1e-15);
        // I about the mid-plane = own + Steiner
        let i = s.own_inertia() + s.area * s.eccentricity.powi(2);
        assert!((i - 5.0 * b * d11 / e).abs() < 1e-12 * i);
    }

    #[test]
    fn sizing_rejects_impossible_ratios() {
        assert!(section_from_ratios(1e-9, 1.0, 0.1, 1.0, 1e-3, 1.0).is_err());
        assert!(section_from_ratios(-1.0, 0.1, 0.1, 1.0, 1e-3, 1.0).is_err());
    }

    #[test]
    fn torsion_constant_of_square() {
        let s = StiffenerSection {
            b_s: 1.0,
            h_s: 1.0,
            area: 1.0,
            inertia: 1.0,
            gamma: 1.0,
            delta: 1.0,
            eccentricity: 0.0,
        };
        // tabulated 0.1406 for a square
        assert!((s.torsion_constant() - 0.1406).abs() < 2e-3);
    }

    fn build(path: &StiffenerPath, mat: StiffenerMaterial) -> Stiffener {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(3).unwrap();
        let sec = section_from_ratios(5.0, 0.1, 0.1, 1.0, 1e-3, 1.0).unwrap();
        Stiffener::build(&patch, path, sec, mat, 2, None, &|_| None).unwrap()
    }

    #[test]
    fn stations_integrate_arc_length() {
        let path = parabola_path(Vector2::new(0.0, 0.5), Vector2::new(1.0, 0.5), 0.0, 0.5).unwrap();
        let s = build(&path, material());
        assert_eq!(s.stations.len(), 8);
        assert!((s.length() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stiffness_blocks_are_symmetric_psd() {
        let path = parabola_path(Vector2::new(0.0, 1.0), Vector2::new(1.0, 0.0), 0.25, 0.2).unwrap();
        let s = build(&path, material());
        for (_, k) in s.stiffness() {
            assert!((&k - k.transpose()).norm() <= 1e-14 * k.norm());
            let norm = k.norm();
            assert!(k.symmetric_eigen().eigenvalues.min() > -1e-12 * norm);
        }
    }

    #[test]
    fn zero_modulus_contributes_nothing() {
        let path = parabola_path(Vector2::new(0.0, 0.5), Vector2::new(1.0, 0.5), 0.0, 0.5).unwrap();
        let s = build(&path, StiffenerMaterial { e: 0.0, ..material() });
        assert!(s.stiffness().iter().all(|(_, k)| k.norm() == 0.0));
        assert!(s.thermal_force(1.0).iter().all(|(_, f)| f.norm() == 0.0));
    }

    /// A straight stiffener along x sees `eps = u_,x + zbar beta_x,x`.
    #[test]
    fn axial_strain_of_linear_field() {
        let path = parabola_path(Vector2::new(0.0, 0.5), Vector2::new(1.0, 0.5), 0.0, 0.5).unwrap();
        let s = build(&path, material());
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(3).unwrap();
        let pts = patch.control_points();
        let us: Vec<DVector<f64>> = s
            .stations
            .iter()
            .map(|st| {
                DVector::from_iterator(
                    5 * st.columns.len(),
                    st.columns.iter().flat_map(|c| {
                        let x = pts[c.control_point];
                        [0.01 * x.x, 0.0, 0.0, 0.02 * x.x, 0.0]
                    }),
                )
            })
            .collect();
        let n = s.axial_forces(&us, 0.0);
        let ea = s.section.area;
        for v in n {
            assert!((v - ea * (0.01 + s.section.eccentricity * 0.02)).abs() < 1e-14);
        }
    }

    #[test]
    fn crossing_the_cutout_is_rejected() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(3).unwrap();
        let path = parabola_path(Vector2::new(0.0, 0.5), Vector2::new(1.0, 0.5), 0.0, 0.5).unwrap();
        let sec = section_from_ratios(5.0, 0.1, 0.1, 1.0, 1e-3, 1.0).unwrap();
        let hole = LevelSetShape::circle([0.5, 0.5], 0.1);
        assert!(matches!(
            Stiffener::build(&patch, &path, sec, material(), 2, Some(&hole), &|_| None),
            Err(Error::StiffenerGeometry(_))
        ));
    }
}
