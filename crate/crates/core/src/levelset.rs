//! Implicit cutout geometry.
//!
//! Shapes are negative inside the void. Material is `phi >= 0`, so a point
//! exactly on the interface counts as material.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Element, NurbsPatch};

/// Interior samples per element edge used by the classification and
/// crossing search, in addition to the two corners.
pub const EDGE_SAMPLES: usize = 8;

/// Bisection stops once `|phi|` falls below this value.
pub const ROOT_TOL: f64 = 1e-10;

/// Composable cutout description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevelSetShape {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// `theta` is the orientation of the semi-major axis, in radians.
    Ellipse {
        center: [f64; 2],
        semi_major: f64,
        semi_minor: f64,
        theta: f64,
    },
    /// Void is the union of the children's voids.
    Union {
        shapes: Vec<LevelSetShape>,
    },
}

impl LevelSetShape {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Self::Circle { center, radius }
    }

    pub fn ellipse(center: [f64; 2], semi_major: f64, semi_minor: f64, theta: f64) -> Self {
        Self::Ellipse {
            center,
            semi_major,
            semi_minor,
            theta,
        }
    }

    /// Three-circle clover: centres (0.4, 0.65), (0.5, 0.7), (0.5, 0.6),
    /// radius 0.15.
    pub fn clover() -> Self {
        Self::Union {
            shapes: vec![
                Self::circle([0.4, 0.65], 0.15),
                Self::circle([0.5, 0.7], 0.15),
                Self::circle([0.5, 0.6], 0.15),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Circle { center, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidShape(format!("circle radius {radius} must be positive")));
                }
            }
            Self::Ellipse {
                center,
                semi_major,
                semi_minor,
                theta,
            } => {
                if !(*semi_major > 0.0 && *semi_minor > 0.0)
                    || !theta.is_finite()
                    || center.iter().any(|c| !c.is_finite())
                {
                    return Err(Error::InvalidShape(format!(
                        "ellipse semi-axes ({semi_major}, {semi_minor}) must be positive"
                    )));
                }
            }
            Self::Union { shapes } => {
                if shapes.is_empty() {
                    return Err(Error::InvalidShape("union needs at least one shape".into()));
                }
                for s in shapes {
                    s.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Level-set value at a physical point: negative inside the cutout.
    ///
    /// Circles return the exact signed distance. Ellipses return
    /// `((x'/a)^2 + (y'/b)^2 - 1) * min(a, b)` in the rotated frame, which has
    /// the right zero set and sign. Unions take the minimum.
    pub fn signed_distance(&self, x: Vector2<f64>) -> f64 {
        match self {
            Self::Circle { center, radius } => (x - Vector2::new(center[0], center[1])).norm() - radius,
            Self::Ellipse {
                center,
                semi_major,
                semi_minor,
                theta,
            } => {
                let d = x - Vector2::new(center[0], center[1]);
                let (s, c) = theta.sin_cos();
                let xr = c * d.x + s * d.y;
                let yr = -s * d.x + c * d.y;
                ((xr / semi_major).powi(2) + (yr / semi_minor).powi(2) - 1.0) * semi_major.min(*semi_minor)
            }
            Self::Union { shapes } => shapes
                .iter()
                .map(|s| s.signed_distance(x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Void area, exact for circles and ellipses; unions use a sampled
    /// estimate on a fine grid over the bounding box.
    pub fn area(&self) -> f64 {
        match self {
            Self::Circle { radius, .. } => std::f64::consts::PI * radius * radius,
            Self::Ellipse {
                semi_major, semi_minor, ..
            } => std::f64::consts::PI * semi_major * semi_minor,
            Self::Union { .. } => {
                let (lo, hi) = self.bounding_box();
                let n = 2000;
                let (dx, dy) = ((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
                let mut inside = 0usize;
                for j in 0..n {
                    for i in 0..n {
                        let p = Vector2::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
                        if self.signed_distance(p) < 0.0 {
                            inside += 1;
                        }
                    }
                }
                inside as f64 * dx * dy
            }
        }
    }

    /// Axis-aligned box containing the void.
    pub fn bounding_box(&self) -> (Vector2<f64>, Vector2<f64>) {
        match self {
            Self::Circle { center, radius } => (
                Vector2::new(center[0] - radius, center[1] - radius),
                Vector2::new(center[0] + radius, center[1] + radius),
            ),
            Self::Ellipse {
                center,
                semi_major,
                semi_minor,
                theta,
            } => {
                let (s, c) = theta.sin_cos();
                let ex = ((semi_major * c).powi(2) + (semi_minor * s).powi(2)).sqrt();
                let ey = ((semi_major * s).powi(2) + (semi_minor * c).powi(2)).sqrt();
                (
                    Vector2::new(center[0] - ex, center[1] - ey),
                    Vector2::new(center[0] + ex, center[1] + ey),
                )
            }
            Self::Union { shapes } => shapes.iter().map(|s| s.bounding_box()).fold(
                (Vector2::repeat(f64::INFINITY), Vector2::repeat(f64::NEG_INFINITY)),
                |(lo, hi), (a, b)| (lo.inf(&a), hi.sup(&b)),
            ),
        }
    }
}

/// Any number of shapes treated as one void (empty means no cutout).
pub fn union_of(shapes: &[LevelSetShape]) -> Option<LevelSetShape> {
    match shapes {
        [] => None,
        [one] => Some(one.clone()),
        many => Some(LevelSetShape::Union { shapes: many.to_vec() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementTag {
    /// Entirely material.
    Outer,
    /// Entirely inside the cutout.
    Inner,
    /// Cut by the interface.
    Enriched,
}

/// Per-element tags plus level-set values at control points and corners.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementClassification {
    pub tags: Vec<ElementTag>,
    /// Level set at every control point.
    pub phi_control_points: Vec<f64>,
    /// Level set at each element's physical corners, in
    /// [`Element::PARENT_CORNERS`] order.
    pub corner_phi: Vec<[f64; 4]>,
}

impl ElementClassification {
    /// All-material classification for a plate without cutouts.
    pub fn uncut(patch: &NurbsPatch) -> Self {
        let n = patch.elements().len();
        Self {
            tags: vec![ElementTag::Outer; n],
            phi_control_points: vec![f64::INFINITY; patch.num_control_points()],
            corner_phi: vec![[f64::INFINITY; 4]; n],
        }
    }

    pub fn count(&self, tag: ElementTag) -> usize {
        self.tags.iter().filter(|t| **t == tag).count()
    }

    /// True when the element's corner values change sign, which is exactly
    /// when the enrichment function is not identically zero on it.
    pub fn has_enrichment(&self, element: usize) -> bool {
        self.tags[element] == ElementTag::Enriched && corner_signs_differ(&self.corner_phi[element])
    }
}

fn corner_signs_differ(phi: &[f64; 4]) -> bool {
    let neg = phi.iter().filter(|v| **v < 0.0).count();
    neg != 0 && neg != 4
}

/// Parent coordinates of the boundary samples of an element, counter-clockwise
/// from corner 0, each tagged with its edge and edge parameter in `[0, 1)`.
fn boundary_samples() -> Vec<(usize, f64, (f64, f64))> {
    let c = Element::PARENT_CORNERS;
    let mut out = Vec::with_capacity(4 * (EDGE_SAMPLES + 1));
    for e in 0..4 {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        for k in 0..=EDGE_SAMPLES {
            let tau = k as f64 / (EDGE_SAMPLES + 1) as f64;
            out.push((e, tau, (a.0 + tau * (b.0 - a.0), a.1 + tau * (b.1 - a.1))));
        }
    }
    out
}

/// Tags every element of the patch against the shape.
pub fn classify_elements(patch: &NurbsPatch, shape: &LevelSetShape) -> Result<ElementClassification> {
    shape.validate()?;
    let phi_control_points = patch
        .control_points()
        .iter()
        .map(|p| shape.signed_distance(*p))
        .collect();
    let samples = boundary_samples();
    let elements = patch.elements();
    let mut tags = Vec::with_capacity(elements.len());
    let mut corner_phi = Vec::with_capacity(elements.len());
    for el in &elements {
        let mut corners = [0.0; 4];
        for (k, &(s, t)) in Element::PARENT_CORNERS.iter().enumerate() {
            corners[k] = shape.signed_distance(patch.element_map(el, s, t)?);
        }
        let mut neg = 0usize;
        let mut pos = 0usize;
        for &(_, _, (s, t)) in &samples {
            if shape.signed_distance(patch.element_map(el, s, t)?) < 0.0 {
                neg += 1;
            } else {
                pos += 1;
            }
        }
        // interior probe catches a void strictly inside one element; such an
        // element is tagged enriched and rejected later by `edge_intersections`
        if neg == 0 {
            let m = 4;
            'probe: for j in 1..m {
                for i in 1..m {
                    let s = -1.0 + 2.0 * i as f64 / m as f64;
                    let t = -1.0 + 2.0 * j as f64 / m as f64;
                    if shape.signed_distance(patch.element_map(el, s, t)?) < 0.0 {
                        neg += 1;
                        break 'probe;
                    }
                }
            }
        }
        let tag = match (neg, pos) {
            (0, _) => ElementTag::Outer,
            (_, 0) => ElementTag::Inner,
            _ => ElementTag::Enriched,
        };
        tags.push(tag);
        corner_phi.push(corners);
    }
    Ok(ElementClassification {
        tags,
        phi_control_points,
        corner_phi,
    })
}

/// Point where the interface crosses an element edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Edge index, counter-clockwise from the `(-1,-1)`-`(1,-1)` edge.
    pub edge: usize,
    /// Position along the edge in `[0, 1]`.
    pub tau: f64,
    /// Parent coordinates.
    pub parent: (f64, f64),
    pub point: Vector2<f64>,
}

/// Parent coordinates of edge `e` at parameter `tau`.
pub fn edge_point(edge: usize, tau: f64) -> (f64, f64) {
    let c = Element::PARENT_CORNERS;
    let (a, b) = (c[edge % 4], c[(edge + 1) % 4]);
    (a.0 + tau * (b.0 - a.0), a.1 + tau * (b.1 - a.1))
}

/// Interface crossings on the boundary of an enriched element, ordered
/// counter-clockwise.
pub fn edge_intersections(patch: &NurbsPatch, element: &Element, shape: &LevelSetShape) -> Result<Vec<Crossing>> {
    let phi_at = |tau: f64, edge: usize| -> Result<f64> {
        let (s, t) = edge_point(edge, tau);
        Ok(shape.signed_distance(patch.element_map(element, s, t)?))
    };
    let mut out = Vec::new();
    for edge in 0..4 {
        let n = EDGE_SAMPLES + 1;
        let mut prev_tau = 0.0;
        let mut prev = phi_at(0.0, edge)?;
        for k in 1..=n {
            let tau = k as f64 / n as f64;
            let cur = phi_at(tau, edge)?;
            if (prev < 0.0) != (cur < 0.0) {
                let (mut lo, mut hi) = (prev_tau, tau);
                let lo_neg = prev < 0.0;
                let mut mid = 0.5 * (lo + hi);
                for _ in 0..200 {
                    mid = 0.5 * (lo + hi);
                    let v = phi_at(mid, edge)?;
                    if v.abs() < ROOT_TOL || hi - lo < 1e-15 {
                        break;
                    }
                    if (v < 0.0) == lo_neg {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let parent = edge_point(edge, mid);
                out.push(Crossing {
                    edge,
                    tau: mid,
                    parent,
                    point: patch.element_map(element, parent.0, parent.1)?,
                });
            }
            prev = cur;
            prev_tau = tau;
        }
    }
    if out.is_empty() {
        return Err(Error::ClassificationInconsistency(element.id));
    }
    Ok(out)
}

/// Bilinear corner basis on the parent square, in corner order.
pub fn corner_basis(s: f64, t: f64) -> [f64; 4] {
    [
        0.25 * (1.0 - s) * (1.0 - t),
        0.25 * (1.0 + s) * (1.0 - t),
        0.25 * (1.0 + s) * (1.0 + t),
        0.25 * (1.0 - s) * (1.0 + t),
    ]
}

fn corner_basis_grad(s: f64, t: f64) -> [(f64, f64); 4] {
    [
        (-0.25 * (1.0 - t), -0.25 * (1.0 - s)),
        (0.25 * (1.0 - t), -0.25 * (1.0 + s)),
        (0.25 * (1.0 + t), 0.25 * (1.0 + s)),
        (-0.25 * (1.0 + t), 0.25 * (1.0 - s)),
    ]
}

/// `psi = sum |phi_I| N_I - |sum phi_I N_I|`.
pub fn enrichment_psi(phi: &[f64; 4], n: &[f64; 4]) -> f64 {
    let abs_sum: f64 = phi.iter().zip(n).map(|(p, n)| p.abs() * n).sum();
    let interp: f64 = phi.iter().zip(n).map(|(p, n)| p * n).sum();
    abs_sum - interp.abs()
}

/// Enrichment value and parent-coordinate gradient `(psi, dpsi/ds, dpsi/dt)`.
pub fn enrichment_with_gradient(phi: &[f64; 4], s: f64, t: f64) -> (f64, f64, f64) {
    let n = corner_basis(s, t);
    let g = corner_basis_grad(s, t);
    let interp: f64 = phi.iter().zip(&n).map(|(p, n)| p * n).sum();
    let sign = if interp < 0.0 { -1.0 } else { 1.0 };
    let (mut ds, mut dt) = (0.0, 0.0);
    for k in 0..4 {
        let coef = phi[k].abs() - sign * phi[k];
        ds += coef * g[k].0;
        dt += coef * g[k].1;
    }
    (enrichment_psi(phi, &n), ds, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NurbsPatch;

    fn unit_patch(levels: usize) -> NurbsPatch {
        NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(levels).unwrap()
    }

    #[test]
    fn circle_values() {
        let c = LevelSetShape::circle([0.3, 0.7], 0.15);
        assert!((c.signed_distance(Vector2::new(0.3, 0.7)) + 0.15).abs() < 1e-15);
        assert!(c.signed_distance(Vector2::new(0.45, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn ellipse_vertex_on_boundary() {
        let e = LevelSetShape::ellipse([0.5, 0.5], 0.2, 0.1, 0.0);
        assert!(e.signed_distance(Vector2::new(0.7, 0.5)).abs() < 1e-15);
        assert!(e.signed_distance(Vector2::new(0.5, 0.6)).abs() < 1e-15);
        assert!(e.signed_distance(Vector2::new(0.5, 0.5)) < 0.0);
        let r = LevelSetShape::ellipse([0.5, 0.5], 0.2, 0.1, std::f64::consts::FRAC_PI_2);
        assert!(r.signed_distance(Vector2::new(0.5, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn union_is_minimum() {
        let u = LevelSetShape::clover();
        let LevelSetShape::Union { shapes } = &u else { panic!() };
        assert_eq!(shapes.len(), 3);
        let p = Vector2::new(0.2, 0.3);
        let m = shapes.iter().map(|s| s.signed_distance(p)).fold(f64::INFINITY, f64::min);
        assert_eq!(u.signed_distance(p), m);
    }

    #[test]
    fn invalid_shapes() {
        assert!(LevelSetShape::circle([0.0, 0.0], -1.0).validate().is_err());
        assert!(LevelSetShape::Union { shapes: vec![] }.validate().is_err());
        assert!(LevelSetShape::ellipse([0.0, 0.0], 0.1, 0.0, 0.0).validate().is_err());
    }

    #[test]
    fn far_shape_leaves_everything_outer() {
        let patch = unit_patch(2);
        let cls = classify_elements(&patch, &LevelSetShape::circle([5.0, 5.0], 0.5)).unwrap();
        assert_eq!(cls.count(ElementTag::Outer), 16);
    }

    #[test]
    fn covered_element_is_inner() {
        let patch = unit_patch(2);
        // element [0.25,0.5]^2 is inside a circle of radius 0.2 around its centre
        let cls = classify_elements(&patch, &LevelSetShape::circle([0.375, 0.375], 0.2)).unwrap();
        let el = patch.elements().into_iter().find(|e| e.ix == 1 && e.iy == 1).unwrap();
        assert_eq!(cls.tags[el.id], ElementTag::Inner);
    }

    /// Classification against a dense 500 x 500 sampling of the square.
    #[test]
    fn classification_matches_dense_sampling() {
        let patch = unit_patch(4);
        for shape in [
            LevelSetShape::circle([0.5, 0.5], 0.15),
            LevelSetShape::ellipse([0.5, 0.5], 0.2, 0.1, 0.7),
            LevelSetShape::clover(),
        ] {
            let cls = classify_elements(&patch, &shape).unwrap();
            let n = 500;
            let mut has_neg = vec![false; 256];
            let mut has_pos = vec![false; 256];
            for j in 0..=n {
                for i in 0..=n {
                    let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
                    let phi = shape.signed_distance(Vector2::new(x, y));
                    // a sample on a grid line belongs to every adjacent element
                    let ix: Vec<usize> = cells(x);
                    let iy: Vec<usize> = cells(y);
                    for &a in &ix {
                        for &b in &iy {
                            let e = a + 16 * b;
                            if phi < 0.0 {
                                has_neg[e] = true;
                            } else {
                                has_pos[e] = true;
                            }
                        }
                    }
                }
            }
            for e in 0..256 {
                let oracle = match (has_neg[e], has_pos[e]) {
                    (false, _) => ElementTag::Outer,
                    (_, false) => ElementTag::Inner,
                    _ => ElementTag::Enriched,
                };
                assert_eq!(cls.tags[e], oracle, "element {e} for {shape:?}");
            }
        }
    }

    fn cells(x: f64) -> Vec<usize> {
        let f = x * 16.0;
        let k = f.floor() as isize;
        let mut out = Vec::new();
        if (f - f.round()).abs() < 1e-12 {
            let r = f.round() as isize;
            for c in [r - 1, r] {
                if (0..16).contains(&c) {
                    out.push(c as usize);
                }
            }
        } else {
            out.push(k.clamp(0, 15) as usize);
        }
        out
    }

    #[test]
    fn crossings_on_axis_aligned_edge() {
        let patch = unit_patch(0);
        let el = patch.elements()[0];
        let shape = LevelSetShape::circle([0.4, -0.1], 0.3);
        let xs = edge_intersections(&patch, &el, &shape).unwrap();
        // bottom edge y = 0
        let bottom: Vec<_> = xs.iter().filter(|c| c.edge == 0).collect();
        assert_eq!(bottom.len(), 2);
        for c in bottom {
            let lhs = (c.point.x - 0.4).powi(2);
            let rhs = 0.09 - 0.01;
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn crossings_symmetric_about_edge_midpoint() {
        let patch = unit_patch(0);
        let el = patch.elements()[0];
        let shape = LevelSetShape::circle([0.5, 0.0], 0.2);
        let xs = edge_intersections(&patch, &el, &shape).unwrap();
        assert_eq!(xs.len(), 2);
        assert!((xs[0].point.x - 0.5 + (xs[1].point.x - 0.5)).abs() < 1e-10);
        assert!(xs.iter().all(|c| c.edge == 0));
    }

    /// All corners are material but the arc dips through one edge.
    #[test]
    fn shallow_intrusion_found_by_edge_samples() {
        let patch = unit_patch(0);
        let el = patch.elements()[0];
        let shape = LevelSetShape::circle([0.5, -0.25], 0.3);
        let corners: Vec<f64> = Element::PARENT_CORNERS
            .iter()
            .map(|&(s, t)| shape.signed_distance(patch.element_map(&el, s, t).unwrap()))
            .collect();
        assert!(corners.iter().all(|p| *p > 0.0));
        let xs = edge_intersections(&patch, &el, &shape).unwrap();
        assert_eq!(xs.len(), 2);
        // dense edge sampling oracle for the crossing locations
        let n = 100_000;
        let mut roots = Vec::new();
        let mut prev = shape.signed_distance(Vector2::new(0.0, 0.0));
        for k in 1..=n {
            let x = k as f64 / n as f64;
            let cur = shape.signed_distance(Vector2::new(x, 0.0));
            if (prev < 0.0) != (cur < 0.0) {
                roots.push(x);
            }
            prev = cur;
        }
        assert_eq!(roots.len(), 2);
        for (c, r) in xs.iter().zip(&roots) {
            assert!((c.point.x - r).abs() < 2.0 / n as f64);
        }
        let cls = classify_elements(&patch, &shape).unwrap();
        assert_eq!(cls.tags[0], ElementTag::Enriched);
        assert!(!cls.has_enrichment(0));
    }

    #[test]
    fn void_inside_one_element_is_inconsistent() {
        let patch = unit_patch(0);
        let el = patch.elements()[0];
        let shape = LevelSetShape::circle([0.5, 0.5], 0.1);
        let cls = classify_elements(&patch, &shape).unwrap();
        assert_eq!(cls.tags[0], ElementTag::Enriched);
        assert!(matches!(
            edge_intersections(&patch, &el, &shape),
            Err(Error::ClassificationInconsistency(0))
        ));
    }

    #[test]
    fn psi_examples() {
        let quarter = [0.25; 4];
        assert_eq!(enrichment_psi(&[0.1, 0.2, 0.3, 0.4], &quarter), 0.0);
        assert!(enrichment_psi(&[-0.1, -0.2, -0.3, -0.4], &quarter).abs() < 1e-16);
        assert_eq!(enrichment_psi(&[-1.0, 1.0, 1.0, -1.0], &quarter), 1.0);
    }

    #[test]
    fn psi_vanishes_at_corners_and_is_nonnegative() {
        let phi = [-0.3, 0.2, 0.5, -0.1];
        for &(s, t) in &Element::PARENT_CORNERS {
            assert!(enrichment_psi(&phi, &corner_basis(s, t)).abs() < 1e-16);
        }
        for j in 0..=20 {
            for i in 0..=20 {
                let (s, t) = (-1.0 + i as f64 / 10.0, -1.0 + j as f64 / 10.0);
                assert!(enrichment_psi(&phi, &corner_basis(s, t)) >= -1e-16);
            }
        }
    }

    #[test]
    fn psi_gradient_matches_finite_differences() {
        let phi = [-0.3, 0.2, 0.5, -0.1];
        let h = 1e-7;
        for &(s, t) in &[(0.3, 0.4), (-0.6, 0.1), (0.8, -0.7)] {
            let (_, ds, dt) = enrichment_with_gradient(&phi, s, t);
            let f = |s: f64, t: f64| enrichment_psi(&phi, &corner_basis(s, t));
            let fs = (f(s + h, t) - f(s - h, t)) / (2.0 * h);
            let ft = (f(s, t + h) - f(s, t - h)) / (2.0 * h);
            assert!((fs - ds).abs() < 1e-6 && (ft - dt).abs() < 1e-6);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn circle_distance_is_euclidean(x in -2.0..2.0f64, y in -2.0..2.0f64, cx in -1.0..1.0f64, cy in -1.0..1.0f64, r in 0.01..1.0f64) {
                let c = LevelSetShape::circle([cx, cy], r);
                let p = Vector2::new(x, y);
                let d = (p - Vector2::new(cx, cy)).norm();
                // distance to the circle curve
                prop_assert!((c.signed_distance(p).abs() - (d - r).abs()).abs() < 1e-14);
            }

            #[test]
            fn psi_zero_when_signs_agree(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64, d in 0.0..1.0f64, s in -1.0..1.0f64, t in -1.0..1.0f64, neg in any::<bool>()) {
                let k = if neg { -1.0 } else { 1.0 };
                let phi = [k * a, k * b, k * c, k * d];
                prop_assert!(enrichment_psi(&phi, &corner_basis(s, t)).abs() < 1e-15);
            }

            #[test]
            fn psi_nonnegative(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, d in -1.0..1.0f64, s in -1.0..1.0f64, t in -1.0..1.0f64) {
                prop_assert!(enrichment_psi(&[a, b, c, d], &corner_basis(s, t)) >= -1e-15);
            }
        }
    }
}
