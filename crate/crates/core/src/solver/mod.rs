//! Global assembly, boundary conditions, thermal prestress and the buckling
//! eigenproblem.

pub mod eigen;
pub mod sparse;

use std::collections::BTreeSet;
use std::time::Instant;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cut_quadrature::{physical_rule, tensor_rule, TriangleRule};
use crate::error::{Error, Result};
use crate::geometry::NurbsPatch;
use crate::laminate::ConstitutiveSet;
use crate::levelset::{classify_elements, edge_intersections, ElementClassification, ElementTag, LevelSetShape};
use crate::plate::{
    element_fields, element_geometric_stiffness, element_stiffness, element_thermal_force, generalized_strains,
    recover_stress, ColumnBlock, ElementFields, InPlaneStress, DOFS_PER_FUNCTION,
};
use crate::stiffener::Stiffener;

pub use eigen::{normalize_mode, EigenOptions, DENSE_LIMIT};
pub use sparse::{CsrMatrix, SkylineCholesky};

/// Relative diagonal size below which a DOF is treated as unsupported and
/// constrained to zero.
pub const AUTO_CONSTRAINT_TOL: f64 = 1e-10;

/// Global numbering: per control point five standard DOFs followed, for
/// enriched points, by five enriched ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    std_base: Vec<usize>,
    enr_base: Vec<Option<usize>>,
    n_dof: usize,
}

impl DofMap {
    pub fn new(enriched: &[bool]) -> Self {
        let mut std_base = Vec::with_capacity(enriched.len());
        let mut enr_base = Vec::with_capacity(enriched.len());
        let mut next = 0;
        for &e in enriched {
            std_base.push(next);
            next += DOFS_PER_FUNCTION;
            if e {
                enr_base.push(Some(next));
                next += DOFS_PER_FUNCTION;
            } else {
                enr_base.push(None);
            }
        }
        Self {
            std_base,
            enr_base,
            n_dof: next,
        }
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn extra_dof(&self) -> usize {
        self.enr_base.iter().flatten().count() * DOFS_PER_FUNCTION
    }

    pub fn num_control_points(&self) -> usize {
        self.std_base.len()
    }

    pub fn is_enriched(&self, cp: usize) -> bool {
        self.enr_base[cp].is_some()
    }

    pub fn dof(&self, col: ColumnBlock, component: usize) -> Result<usize> {
        let base = if col.enriched {
            self.enr_base.get(col.control_point).copied().flatten()
        } else {
            self.std_base.get(col.control_point).copied()
        };
        match base {
            Some(b) if component < DOFS_PER_FUNCTION => Ok(b + component),
            _ => Err(Error::MissingDof {
                dof: col.control_point * DOFS_PER_FUNCTION + component,
                size: self.n_dof,
            }),
        }
    }

    pub fn dofs(&self, cols: &[ColumnBlock]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(cols.len() * DOFS_PER_FUNCTION);
        for &c in cols {
            for k in 0..DOFS_PER_FUNCTION {
                out.push(self.dof(c, k)?);
            }
        }
        Ok(out)
    }

    /// `(component, enriched)` of every DOF.
    pub fn kinds(&self) -> Vec<(usize, bool)> {
        let mut out = vec![(0, false); self.n_dof];
        for cp in 0..self.std_base.len() {
            for k in 0..DOFS_PER_FUNCTION {
                out[self.std_base[cp] + k] = (k, false);
                if let Some(e) = self.enr_base[cp] {
                    out[e + k] = (k, true);
                }
            }
        }
        out
    }
}

/// Quadrature choices for plate elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOptions {
    /// Gauss points per direction on uncut elements; `None` means degree + 1.
    pub gauss_points: Option<usize>,
    /// Points per triangle on cut elements (3 or 7).
    pub triangle_points: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            gauss_points: None,
            triangle_points: 7,
        }
    }
}

/// Plate mesh with cutout classification, DOF numbering and evaluated
/// element quadrature.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub patch: NurbsPatch,
    pub cutout: Option<LevelSetShape>,
    pub classification: ElementClassification,
    pub dofmap: DofMap,
    /// One entry per element with material; inner elements are absent.
    pub fields: Vec<ElementFields>,
    pub element_dofs: Vec<Vec<usize>>,
}

impl Discretization {
    /// Corner level-set values of an element carrying enrichment.
    pub fn enrichment(&self, element: usize) -> Option<[f64; 4]> {
        self.classification
            .has_enrichment(element)
            .then(|| self.classification.corner_phi[element])
    }

    /// Material area integrated by the element rules.
    pub fn material_area(&self) -> f64 {
        self.fields.iter().map(|f| f.area()).sum()
    }
}

pub fn discretize(patch: NurbsPatch, cutout: Option<LevelSetShape>, opts: &QuadratureOptions) -> Result<Discretization> {
    let classification = match &cutout {
        Some(shape) => classify_elements(&patch, shape)?,
        None => ElementClassification::uncut(&patch),
    };
    let elements = patch.elements();
    let mut enriched = vec![false; patch.num_control_points()];
    for el in &elements {
        if classification.has_enrichment(el.id) {
            for cp in patch.element_control_points(el) {
                enriched[cp] = true;
            }
        }
    }
    let dofmap = DofMap::new(&enriched);
    let p = patch.knots_xi().degree();
    let q = patch.knots_eta().degree();
    let (gx, gy) = match opts.gauss_points {
        Some(n) => (n, n),
        None => (p + 1, q + 1),
    };
    let full = tensor_rule(gx, gy);
    let tri = TriangleRule::with_points(opts.triangle_points)?;
    let mut fields = Vec::with_capacity(elements.len());
    let mut element_dofs = Vec::with_capacity(elements.len());
    for el in &elements {
        let rule = match classification.tags[el.id] {
            ElementTag::Inner => continue,
            ElementTag::Outer => full.clone(),
            ElementTag::Enriched => {
                let shape = cutout.as_ref().expect("enriched elements imply a cutout");
                let xs = edge_intersections(&patch, el, shape)?;
                physical_rule(&patch, el, shape, &xs, &tri)?
            }
        };
        let phi = classification
            .has_enrichment(el.id)
            .then(|| classification.corner_phi[el.id]);
        let f = element_fields(&patch, el, &rule, phi.as_ref())?;
        element_dofs.push(dofmap.dofs(&f.columns)?);
        fields.push(f);
    }
    Ok(Discretization {
        patch,
        cutout,
        classification,
        dofmap,
        fields,
        element_dofs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    /// `xi = 0` (x = 0 on a rectangle).
    Left,
    Right,
    /// `eta = 0`.
    Bottom,
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    U,
    V,
    W,
    BetaX,
    BetaY,
}

impl Component {
    pub const ALL: [Component; 5] = [Self::U, Self::V, Self::W, Self::BetaX, Self::BetaY];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConstraint {
    pub edge: Edge,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConditionSet {
    /// CCCC: all five DOFs fixed on every edge.
    Clamped,
    /// SSSS: `u0, v0, w0` fixed everywhere, plus `beta_y` on the x-edges and
    /// `beta_x` on the y-edges.
    SimplySupported,
    Custom(Vec<EdgeConstraint>),
}

impl BoundaryConditionSet {
    pub fn edge_constraints(&self) -> Vec<EdgeConstraint> {
        use Component::*;
        let all = |edge| EdgeConstraint {
            edge,
            components: Component::ALL.to_vec(),
        };
        match self {
            Self::Clamped => vec![all(Edge::Left), all(Edge::Right), all(Edge::Bottom), all(Edge::Top)],
            Self::SimplySupported => {
                let x_edge = |edge| EdgeConstraint {
                    edge,
                    components: vec![U, V, W, BetaY],
                };
                let y_edge = |edge| EdgeConstraint {
                    edge,
                    components: vec![U, V, W, BetaX],
                };
                vec![x_edge(Edge::Left), x_edge(Edge::Right), y_edge(Edge::Bottom), y_edge(Edge::Top)]
            }
            Self::Custom(list) => list.clone(),
        }
    }

    /// DOFs fixed by the edge constraints, enriched copies included.
    pub fn constrained_dofs(&self, patch: &NurbsPatch, dofmap: &DofMap) -> Result<BTreeSet<usize>> {
        let (nx, ny) = (patch.n_xi(), patch.n_eta());
        if dofmap.num_control_points() != nx * ny {
            return Err(Error::DimensionMismatch(format!(
                "DOF map covers {} control points, patch has {}",
                dofmap.num_control_points(),
                nx * ny
            )));
        }
        let mut out = BTreeSet::new();
        for c in self.edge_constraints() {
            let cps: Vec<usize> = match c.edge {
                Edge::Left => (0..ny).map(|j| j * nx).collect(),
                Edge::Right => (0..ny).map(|j| nx - 1 + j * nx).collect(),
                Edge::Bottom => (0..nx).collect(),
                Edge::Top => (0..nx).map(|i| i + (ny - 1) * nx).collect(),
            };
            for cp in cps {
                for comp in &c.components {
                    for enriched in [false, true] {
                        if enriched && !dofmap.is_enriched(cp) {
                            continue;
                        }
                        let col = ColumnBlock {
                            control_point: cp,
                            enriched,
                        };
                        out.insert(dofmap.dof(col, comp.index())?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Free/constrained split of the global DOFs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedSystem {
    pub n_dof: usize,
    /// Free DOFs in global order; reduced index = position.
    pub free: Vec<usize>,
    pub constrained: BTreeSet<usize>,
    /// DOFs removed because their stiffness vanishes (basis inside the void).
    pub auto_constrained: usize,
}

impl ConstrainedSystem {
    pub fn expand(&self, reduced: &DVector<f64>) -> DVector<f64> {
        let mut full = DVector::zeros(self.n_dof);
        for (r, &g) in self.free.iter().enumerate() {
            full[g] = reduced[r];
        }
        full
    }

    pub fn restrict_vec(&self, full: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&g| full[g]))
    }
}

/// Combines the boundary conditions with automatic removal of DOFs whose
/// diagonal stiffness is negligible within their class.
pub fn apply_bc(k: &CsrMatrix, disc: &Discretization, bcs: &BoundaryConditionSet) -> Result<ConstrainedSystem> {
    let n = disc.dofmap.n_dof();
    if k.dim() != n {
        return Err(Error::DimensionMismatch(format!("K is {}, DOF map has {n}", k.dim())));
    }
    let mut constrained = bcs.constrained_dofs(&disc.patch, &disc.dofmap)?;
    let diag = k.diagonal();
    let kinds = disc.dofmap.kinds();
    let mut class_max = [0.0f64; 2 * DOFS_PER_FUNCTION];
    let class = |(c, e): (usize, bool)| c + if e { DOFS_PER_FUNCTION } else { 0 };
    for (i, &d) in diag.iter().enumerate() {
        let c = class(kinds[i]);
        class_max[c] = class_max[c].max(d.abs());
    }
    let mut auto = 0;
    for (i, &d) in diag.iter().enumerate() {
        if d.abs() <= AUTO_CONSTRAINT_TOL * class_max[class(kinds[i])] && constrained.insert(i) {
            auto += 1;
        }
    }
    let free = (0..n).filter(|i| !constrained.contains(i)).collect();
    Ok(ConstrainedSystem {
        n_dof: n,
        free,
        constrained,
        auto_constrained: auto,
    })
}

/// Global stiffness and thermal load for a temperature rise `delta_t`.
pub fn assemble(
    disc: &Discretization,
    cs: &ConstitutiveSet,
    stiffeners: &[Stiffener],
    delta_t: f64,
) -> Result<(CsrMatrix, DVector<f64>)> {
    let n = disc.dofmap.n_dof();
    let stiffener_dofs = stiffener_dof_lists(disc, stiffeners)?;
    let mut k = pattern(disc, &stiffener_dofs);
    let mut f = DVector::zeros(n);
    for (fields, dofs) in disc.fields.iter().zip(&disc.element_dofs) {
        k.add_dense(dofs, &element_stiffness(fields, &cs.dp));
        let fe = element_thermal_force(fields, cs, delta_t);
        for (a, &i) in dofs.iter().enumerate() {
            f[i] += fe[a];
        }
    }
    for (s, lists) in stiffeners.iter().zip(&stiffener_dofs) {
        for ((_, ke), dofs) in s.stiffness().into_iter().zip(lists) {
            k.add_dense(dofs, &ke);
        }
        for ((_, fe), dofs) in s.thermal_force(delta_t).into_iter().zip(lists) {
            for (a, &i) in dofs.iter().enumerate() {
                f[i] += fe[a];
            }
        }
    }
    Ok((k, f))
}

fn stiffener_dof_lists(disc: &Discretization, stiffeners: &[Stiffener]) -> Result<Vec<Vec<Vec<usize>>>> {
    stiffeners
        .iter()
        .map(|s| s.stations.iter().map(|st| disc.dofmap.dofs(&st.columns)).collect())
        .collect()
}

fn pattern(disc: &Discretization, stiffener_dofs: &[Vec<Vec<usize>>]) -> CsrMatrix {
    let lists = disc
        .element_dofs
        .iter()
        .chain(stiffener_dofs.iter().flatten())
        .map(|v| v.as_slice());
    CsrMatrix::from_dof_lists(disc.dofmap.n_dof(), lists)
}

/// Recovered prestress state.
#[derive(Debug, Clone, PartialEq)]
pub struct Prestress {
    pub delta_t: f64,
    pub displacement: DVector<f64>,
    /// Per element (same order as [`Discretization::fields`]), per point.
    pub stresses: Vec<Vec<InPlaneStress>>,
    /// Per stiffener, per station.
    pub stiffener_axial: Vec<Vec<f64>>,
}

/// Solves `K u = F_T` and recovers `sigma = (A eps0 + B kappa - N_T dT) / t`
/// at every plate point and the axial force in every stiffener.
pub fn prestress_solve(
    disc: &Discretization,
    cs: &ConstitutiveSet,
    stiffeners: &[Stiffener],
    system: &ConstrainedSystem,
    factor: &SkylineCholesky,
    f: &DVector<f64>,
    delta_t: f64,
) -> Result<Prestress> {
    let mut rhs = system.restrict_vec(f);
    factor.solve_in_place(rhs.as_mut_slice());
    let u = system.expand(&rhs);
    let gather = |dofs: &[usize]| DVector::from_iterator(dofs.len(), dofs.iter().map(|&i| u[i]));
    let stresses = disc
        .fields
        .iter()
        .zip(&disc.element_dofs)
        .map(|(fields, dofs)| {
            generalized_strains(fields, &gather(dofs))
                .iter()
                .map(|e| recover_stress(e, cs, delta_t))
                .collect()
        })
        .collect();
    let stiffener_dofs = stiffener_dof_lists(disc, stiffeners)?;
    let stiffener_axial = stiffeners
        .iter()
        .zip(&stiffener_dofs)
        .map(|(s, lists)| {
            let us: Vec<DVector<f64>> = lists.iter().map(|d| gather(d)).collect();
            s.axial_forces(&us, delta_t)
        })
        .collect();
    Ok(Prestress {
        delta_t,
        displacement: u,
        stresses,
        stiffener_axial,
    })
}

/// Global geometric stiffness from a prestress state.
pub fn assemble_geometric(
    disc: &Discretization,
    thickness: f64,
    stiffeners: &[Stiffener],
    prestress: &Prestress,
) -> Result<CsrMatrix> {
    let stiffener_dofs = stiffener_dof_lists(disc, stiffeners)?;
    let mut kg = pattern(disc, &stiffener_dofs);
    for ((fields, dofs), st) in disc.fields.iter().zip(&disc.element_dofs).zip(&prestress.stresses) {
        kg.add_dense(dofs, &element_geometric_stiffness(fields, st, thickness));
    }
    for ((s, lists), axial) in stiffeners.iter().zip(&stiffener_dofs).zip(&prestress.stiffener_axial) {
        for ((_, ke), dofs) in s.geometric_stiffness(axial).into_iter().zip(lists) {
            kg.add_dense(dofs, &ke);
        }
    }
    Ok(kg)
}

/// Buckling multipliers of the reference temperature rise.
#[derive(Debug, Clone, PartialEq)]
pub struct BucklingSolution {
    /// Ascending, positive.
    pub lambdas: Vec<f64>,
    /// Full-length DOF vectors scaled to unit max-norm.
    pub modes: Vec<DVector<f64>>,
    pub delta_t_ref: f64,
    pub iterations: usize,
}

impl BucklingSolution {
    /// `lambda_1 * dT_ref`, or `None` when no compressive instability exists.
    pub fn critical_temperature(&self) -> Option<f64> {
        self.lambdas.first().map(|l| l * self.delta_t_ref)
    }
}

/// Smallest positive `lambda` of `K phi = -lambda K_G phi` on the free DOFs.
pub fn buckling_solve(
    k_free: &CsrMatrix,
    kg_free: &CsrMatrix,
    factor: &SkylineCholesky,
    system: &ConstrainedSystem,
    n_modes: usize,
    delta_t_ref: f64,
    opts: &EigenOptions,
) -> Result<BucklingSolution> {
    let r = eigen::solve_pencil(k_free, kg_free, factor, n_modes, opts)?;
    let modes = r
        .modes
        .iter()
        .map(|m| {
            let mut full = system.expand(m);
            normalize_mode(&mut full);
            full
        })
        .collect();
    Ok(BucklingSolution {
        lambdas: r.lambdas,
        modes,
        delta_t_ref,
        iterations: r.iterations,
    })
}

/// Scaling applied to the critical temperature for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Normalization {
    /// Report `dT_cr` unchanged.
    #[default]
    Identity,
    /// `alpha0 * dT_cr * factor`.
    AlphaScaled { alpha0: f64, factor: f64 },
}

impl Normalization {
    /// `alpha0 * dT_cr * 1e3`.
    pub fn composite(alpha0: f64) -> Self {
        Self::AlphaScaled { alpha0, factor: 1e3 }
    }

    pub fn factor(&self) -> f64 {
        match *self {
            Self::Identity => 1.0,
            Self::AlphaScaled { alpha0, factor } => alpha0 * factor,
        }
    }
}

pub fn normalized_critical_temperature(solution: &BucklingSolution, convention: &Normalization) -> Option<f64> {
    solution.critical_temperature().map(|t| t * convention.factor())
}

/// Everything a buckling run produces.
#[derive(Debug, Clone)]
pub struct BucklingAnalysis {
    pub solution: BucklingSolution,
    pub prestress: Prestress,
    pub n_dof: usize,
    pub extra_dof: usize,
    pub n_free: usize,
    pub auto_constrained: usize,
    pub static_seconds: f64,
    pub eigen_seconds: f64,
}

/// Full two-step pipeline: prestress at `delta_t_ref`, then the eigenproblem.
pub fn run_buckling(
    disc: &Discretization,
    cs: &ConstitutiveSet,
    stiffeners: &[Stiffener],
    bcs: &BoundaryConditionSet,
    delta_t_ref: f64,
    n_modes: usize,
    opts: &EigenOptions,
) -> Result<BucklingAnalysis> {
    let t0 = Instant::now();
    let (k, f) = assemble(disc, cs, stiffeners, delta_t_ref)?;
    let system = apply_bc(&k, disc, bcs)?;
    let k_free = k.restrict(&system.free);
    let factor = SkylineCholesky::factor(&k_free)?;
    let prestress = prestress_solve(disc, cs, stiffeners, &system, &factor, &f, delta_t_ref)?;
    let static_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let kg = assemble_geometric(disc, cs.thickness, stiffeners, &prestress)?;
    let kg_free = kg.restrict(&system.free);
    let solution = buckling_solve(&k_free, &kg_free, &factor, &system, n_modes, delta_t_ref, opts)?;
    let eigen_seconds = t1.elapsed().as_secs_f64();
    log::info!(
        "buckling run: {} DOF ({} enriched, {} free), lambda_1 = {:?}",
        disc.dofmap.n_dof(),
        disc.dofmap.extra_dof(),
        system.free.len(),
        solution.lambdas.first()
    );
    Ok(BucklingAnalysis {
        solution,
        prestress,
        n_dof: disc.dofmap.n_dof(),
        extra_dof: disc.dofmap.extra_dof(),
        n_free: system.free.len(),
        auto_constrained: system.auto_constrained,
        static_seconds,
        eigen_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laminate::{constitutive_set, LaminateStack, Ply, SHEAR_CORRECTION};

    fn iso(t: f64) -> ConstitutiveSet {
        let stack = LaminateStack::new(vec![Ply::isotropic(1.0, 0.3, 1.0, t)]).unwrap();
        constitutive_set(&stack, SHEAR_CORRECTION).unwrap()
    }

    fn plain(level: usize) -> Discretization {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(level).unwrap();
        discretize(patch, None, &QuadratureOptions::default()).unwrap()
    }

    #[test]
    fn dofmap_interleaves_enriched_blocks() {
        let m = DofMap::new(&[false, true, false]);
        assert_eq!(m.n_dof(), 20);
        assert_eq!(m.extra_dof(), 5);
        let col = |cp, enriched| ColumnBlock {
            control_point: cp,
            enriched,
        };
        assert_eq!(m.dof(col(1, true), 0).unwrap(), 10);
        assert_eq!(m.dof(col(2, false), 4).unwrap(), 19);
        assert!(matches!(m.dof(col(0, true), 0), Err(Error::MissingDof { .. })));
    }

    #[test]
    fn clamped_fixes_every_boundary_point() {
        let d = plain(4);
        let fixed = BoundaryConditionSet::Clamped.constrained_dofs(&d.patch, &d.dofmap).unwrap();
        // 18 x 18 control points, 68 on the boundary
        assert_eq!(fixed.len(), 68 * 5);
    }

    #[test]
    fn simply_supported_leaves_normal_rotation_free() {
        let d = plain(2);
        let fixed = BoundaryConditionSet::SimplySupported
            .constrained_dofs(&d.patch, &d.dofmap)
            .unwrap();
        let nx = d.patch.n_xi();
        // mid-point of the left edge: beta_x free, beta_y fixed
        let cp = 2 * nx;
        assert!(!fixed.contains(&(5 * cp + 3)));
        assert!(fixed.contains(&(5 * cp + 4)));
        // mid-point of the bottom edge: beta_y free, beta_x fixed
        assert!(fixed.contains(&(5 * 2 + 3)));
        assert!(!fixed.contains(&(5 * 2 + 4)));
    }

    #[test]
    fn global_matrices_symmetric() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(3).unwrap();
        let d = discretize(patch, Some(LevelSetShape::circle([0.5, 0.5], 0.15)), &QuadratureOptions::default()).unwrap();
        let cs = iso(0.05);
        let (k, f) = assemble(&d, &cs, &[], 1.0).unwrap();
        assert!(k.asymmetry() <= 1e-13);
        let sys = apply_bc(&k, &d, &BoundaryConditionSet::Clamped).unwrap();
        let kf = k.restrict(&sys.free);
        let fac = SkylineCholesky::factor(&kf).unwrap();
        let pre = prestress_solve(&d, &cs, &[], &sys, &fac, &f, 1.0).unwrap();
        let kg = assemble_geometric(&d, cs.thickness, &[], &pre).unwrap();
        assert!(kg.asymmetry() <= 1e-13);
    }

    /// Fully clamped plate: the membrane cannot expand, so the stress is the
    /// restrained value `-E alpha dT / (1 - nu)` everywhere.
    #[test]
    fn clamped_prestress_is_restrained_expansion() {
        let d = plain(2);
        let cs = iso(0.05);
        let (k, f) = assemble(&d, &cs, &[], 2.0).unwrap();
        let sys = apply_bc(&k, &d, &BoundaryConditionSet::Clamped).unwrap();
        let fac = SkylineCholesky::factor(&k.restrict(&sys.free)).unwrap();
        let pre = prestress_solve(&d, &cs, &[], &sys, &fac, &f, 2.0).unwrap();
        let expect = -2.0 / 0.7;
        for el in &pre.stresses {
            for s in el {
                assert!((s.sigma_x - expect).abs() < 1e-8 * expect.abs());
                assert!((s.sigma_y - expect).abs() < 1e-8 * expect.abs());
                assert!(s.tau_xy.abs() < 1e-8);
            }
        }
        let zero = prestress_solve(&d, &cs, &[], &sys, &fac, &(f * 0.0), 0.0).unwrap();
        assert!(zero.stresses.iter().flatten().all(|s| *s == InPlaneStress::default()));
    }

    #[test]
    fn inner_void_dofs_are_auto_constrained() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(4).unwrap();
        let d = discretize(patch, Some(LevelSetShape::circle([0.5, 0.5], 0.25)), &QuadratureOptions::default()).unwrap();
        let (k, _) = assemble(&d, &iso(0.05), &[], 1.0).unwrap();
        let sys = apply_bc(&k, &d, &BoundaryConditionSet::Clamped).unwrap();
        assert!(sys.auto_constrained > 0);
        assert!(SkylineCholesky::factor(&k.restrict(&sys.free)).is_ok());
    }

    #[test]
    fn no_cutout_has_no_extra_dofs() {
        let d = plain(3);
        assert_eq!(d.dofmap.extra_dof(), 0);
        assert_eq!(d.dofmap.n_dof(), 10 * 10 * 5);
        assert!((d.material_area() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn normalization_conventions() {
        let sol = BucklingSolution {
            lambdas: vec![2.5],
            modes: vec![],
            delta_t_ref: 1.0,
            iterations: 0,
        };
        assert_eq!(normalized_critical_temperature(&sol, &Normalization::Identity), Some(2.5));
        let c = Normalization::composite(1e-6);
        assert!((normalized_critical_temperature(&sol, &c).unwrap() - 2.5e-3).abs() < 1e-18);
        let doubled = BucklingSolution {
            lambdas: vec![5.0],
            ..sol.clone()
        };
        let thin = Normalization::AlphaScaled { alpha0: 1.0, factor: 100.0 };
        assert_eq!(
            normalized_critical_temperature(&doubled, &thin).unwrap(),
            2.0 * normalized_critical_temperature(&sol, &thin).unwrap()
        );
        let none = BucklingSolution { lambdas: vec![], ..sol };
        assert_eq!(normalized_critical_temperature(&none, &c), None);
    }
}
