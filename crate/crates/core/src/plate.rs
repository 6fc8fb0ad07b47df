//! FSDT plate kernels: strain operators, stiffness, geometric stiffness and
//! thermal load.
//!
//! DOFs per basis function are `(u0, v0, w0, beta_x, beta_y)`. Element column
//! blocks list the standard functions first, then the enriched ones.

use nalgebra::{DMatrix, DVector, Matrix2, SMatrix, Vector2};

use crate::cut_quadrature::ElementRule;
use crate::error::Result;
use crate::geometry::{Element, NurbsPatch};
use crate::laminate::ConstitutiveSet;
use crate::levelset::enrichment_with_gradient;

pub const DOFS_PER_FUNCTION: usize = 5;

/// One scalar field function with physical derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShapeFn {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
}

/// A column block of an element: the control point and whether it is the
/// enriched copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColumnBlock {
    pub control_point: usize,
    pub enriched: bool,
}

/// Quadrature point with every active function evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationPoint {
    pub position: Vector2<f64>,
    /// Rule weight times the parent-to-physical determinant.
    pub weight: f64,
    pub functions: Vec<ShapeFn>,
}

/// Active columns and evaluated quadrature of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementFields {
    pub element: usize,
    pub columns: Vec<ColumnBlock>,
    pub points: Vec<IntegrationPoint>,
}

impl ElementFields {
    pub fn num_dofs(&self) -> usize {
        self.columns.len() * DOFS_PER_FUNCTION
    }

    /// Material area covered by the rule.
    pub fn area(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }
}

/// Evaluates the basis (and `psi`-enriched copies when `corner_phi` is given)
/// at every point of `rule`.
pub fn element_fields(
    patch: &NurbsPatch,
    element: &Element,
    rule: &ElementRule,
    corner_phi: Option<&[f64; 4]>,
) -> Result<ElementFields> {
    let cps = patch.element_control_points(element);
    let mut columns: Vec<ColumnBlock> = cps
        .iter()
        .map(|&cp| ColumnBlock {
            control_point: cp,
            enriched: false,
        })
        .collect();
    if corner_phi.is_some() {
        columns.extend(cps.iter().map(|&cp| ColumnBlock {
            control_point: cp,
            enriched: true,
        }));
    }
    let mut points = Vec::with_capacity(rule.points.len());
    for qp in &rule.points {
        let ep = patch.element_point(element, qp.s, qp.t)?;
        let mut functions: Vec<ShapeFn> = (0..ep.values.len())
            .map(|k| ShapeFn {
                value: ep.values[k],
                dx: ep.dx[k],
                dy: ep.dy[k],
            })
            .collect();
        if let Some(phi) = corner_phi {
            let (psi, ps, pt) = enrichment_with_gradient(phi, qp.s, qp.t);
            let grad = physical_gradient(&ep.jacobian, ps, pt);
            for k in 0..ep.values.len() {
                let n = functions[k];
                functions.push(ShapeFn {
                    value: psi * n.value,
                    dx: psi * n.dx + grad.x * n.value,
                    dy: psi * n.dy + grad.y * n.value,
                });
            }
        }
        points.push(IntegrationPoint {
            position: ep.point,
            weight: qp.weight * ep.det,
            functions,
        });
    }
    Ok(ElementFields {
        element: element.id,
        columns,
        points,
    })
}

/// Parent-coordinate gradient to physical, `J^{-T} (d/ds, d/dt)`.
fn physical_gradient(jacobian: &Matrix2<f64>, ds: f64, dt: f64) -> Vector2<f64> {
    let inv = jacobian.try_inverse().unwrap_or_else(Matrix2::zeros);
    inv.transpose() * Vector2::new(ds, dt)
}

/// `B_p`, 8 x 5n, rows `(eps_x, eps_y, gamma_xy, kappa_x, kappa_y, kappa_xy,
/// gamma_xz, gamma_yz)`.
pub fn strain_operator(functions: &[ShapeFn]) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(8, DOFS_PER_FUNCTION * functions.len());
    for (k, f) in functions.iter().enumerate() {
        let c = DOFS_PER_FUNCTION * k;
        b[(0, c)] = f.dx;
        b[(1, c + 1)] = f.dy;
        b[(2, c)] = f.dy;
        b[(2, c + 1)] = f.dx;
        b[(3, c + 3)] = f.dx;
        b[(4, c + 4)] = f.dy;
        b[(5, c + 3)] = f.dy;
        b[(5, c + 4)] = f.dx;
        b[(6, c + 2)] = f.dx;
        b[(6, c + 3)] = f.value;
        b[(7, c + 2)] = f.dy;
        b[(7, c + 4)] = f.value;
    }
    b
}

/// `B_NL`, 6 x 5n, rows `(w_x, w_y, bx_x, bx_y, by_x, by_y)`.
pub fn geometric_operator(functions: &[ShapeFn]) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(6, DOFS_PER_FUNCTION * functions.len());
    for (k, f) in functions.iter().enumerate() {
        let c = DOFS_PER_FUNCTION * k;
        for (row, dof) in [(0, 2), (2, 3), (4, 4)] {
            b[(row, c + dof)] = f.dx;
            b[(row + 1, c + dof)] = f.dy;
        }
    }
    b
}

/// Mid-plane prestress.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InPlaneStress {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
}

impl InPlaneStress {
    fn tensor(&self) -> Matrix2<f64> {
        Matrix2::new(self.sigma_x, self.tau_xy, self.tau_xy, self.sigma_y)
    }
}

/// `sigma_p`: `t S`, `t^3/12 S`, `t^3/12 S` on the diagonal with
/// `S = [sx txy; txy sy]`.
pub fn stress_matrix(stress: &InPlaneStress, thickness: f64) -> SMatrix<f64, 6, 6> {
    let s = stress.tensor();
    let mut m = SMatrix::<f64, 6, 6>::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(s * thickness));
    let r = s * (thickness.powi(3) / 12.0);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&r);
    m.fixed_view_mut::<2, 2>(4, 4).copy_from(&r);
    m
}

/// `K_e = sum w B^T D_p B`.
pub fn element_stiffness(fields: &ElementFields, dp: &SMatrix<f64, 8, 8>) -> DMatrix<f64> {
    let n = fields.num_dofs();
    let mut k = DMatrix::zeros(n, n);
    let d = DMatrix::from_iterator(8, 8, dp.iter().copied());
    for p in &fields.points {
        let b = strain_operator(&p.functions);
        let db = &d * &b;
        k.gemm_tr(p.weight, &b, &db, 1.0);
    }
    symmetrize(&mut k);
    k
}

/// `K_Ge = sum w B_NL^T sigma_p B_NL`, one stress state per point.
pub fn element_geometric_stiffness(fields: &ElementFields, stresses: &[InPlaneStress], thickness: f64) -> DMatrix<f64> {
    assert_eq!(stresses.len(), fields.points.len(), "one stress state per point");
    let n = fields.num_dofs();
    let mut k = DMatrix::zeros(n, n);
    let m = fields.columns.len();
    for (p, st) in fields.points.iter().zip(stresses) {
        let s = st.tensor();
        let membrane = s * (thickness * p.weight);
        let bending = s * (thickness.powi(3) / 12.0 * p.weight);
        // B_NL is block-sparse, so assemble the three gradient products directly
        for a in 0..m {
            let ga = Vector2::new(p.functions[a].dx, p.functions[a].dy);
            let (ma, ba) = (membrane * ga, bending * ga);
            for b in 0..m {
                let gb = Vector2::new(p.functions[b].dx, p.functions[b].dy);
                let (r, c) = (DOFS_PER_FUNCTION * a, DOFS_PER_FUNCTION * b);
                k[(r + 2, c + 2)] += ma.dot(&gb);
                let kb = ba.dot(&gb);
                k[(r + 3, c + 3)] += kb;
                k[(r + 4, c + 4)] += kb;
            }
        }
    }
    symmetrize(&mut k);
    k
}

/// `f_e = sum w B^T [N_T; M_T; 0] delta_t`.
pub fn element_thermal_force(fields: &ElementFields, cs: &ConstitutiveSet, delta_t: f64) -> DVector<f64> {
    let r = cs.thermal_resultant(delta_t);
    let r = DVector::from_iterator(8, r.iter().copied());
    let mut f = DVector::zeros(fields.num_dofs());
    for p in &fields.points {
        let b = strain_operator(&p.functions);
        f.gemv_tr(p.weight, &b, &r, 1.0);
    }
    f
}

/// Generalized strains at each point for element displacements `u_e`.
pub fn generalized_strains(fields: &ElementFields, u_e: &DVector<f64>) -> Vec<SMatrix<f64, 8, 1>> {
    fields
        .points
        .iter()
        .map(|p| {
            let e = strain_operator(&p.functions) * u_e;
            SMatrix::<f64, 8, 1>::from_iterator(e.iter().copied())
        })
        .collect()
}

/// Mid-plane stress `N / t` with `N = A eps0 + B kappa - N_T delta_t`.
pub fn recover_stress(strain: &SMatrix<f64, 8, 1>, cs: &ConstitutiveSet, delta_t: f64) -> InPlaneStress {
    let eps = strain.fixed_rows::<3>(0).into_owned();
    let kap = strain.fixed_rows::<3>(3).into_owned();
    let n = cs.a * eps + cs.b * kap - cs.n_t * delta_t;
    InPlaneStress {
        sigma_x: n[0] / cs.thickness,
        sigma_y: n[1] / cs.thickness,
        tau_xy: n[2] / cs.thickness,
    }
}

fn symmetrize(k: &mut DMatrix<f64>) {
    let n = k.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
}
