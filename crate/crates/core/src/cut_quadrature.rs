//! Quadrature for full and interface-cut elements.
//!
//! Cut elements are split along the interface into triangles in parent
//! coordinates; each material triangle gets a triangle rule.

use crate::error::{Error, Result};
use crate::geometry::{Element, NurbsPatch};
use crate::levelset::{edge_point, Crossing, LevelSetShape};

/// Triangles smaller than this fraction of the parent square are dropped.
const SLIVER_AREA: f64 = 1e-12;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Symmetric rule on the reference triangle `{(0,0), (1,0), (0,1)}` with
/// weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl TriangleRule {
    /// Three interior points, exact for quadratics.
    pub fn three_point() -> Self {
        Self {
            points: vec![(1.0 / 6.0, 1.0 / 6.0), (2.0 / 3.0, 1.0 / 6.0), (1.0 / 6.0, 2.0 / 3.0)],
            weights: vec![1.0 / 3.0; 3],
            degree: 2,
        }
    }

    /// Dunavant seven-point rule, exact for quintics.
    pub fn seven_point() -> Self {
        let (a1, b1, w1) = (0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506);
        let (a2, b2, w2) = (0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827);
        Self {
            points: vec![
                (1.0 / 3.0, 1.0 / 3.0),
                (b1, b1),
                (a1, b1),
                (b1, a1),
                (b2, b2),
                (a2, b2),
                (b2, a2),
            ],
            weights: vec![0.225, w1, w1, w1, w2, w2, w2],
            degree: 5,
        }
    }

    /// Rule by number of points (3 or 7).
    pub fn with_points(n: usize) -> Result<Self> {
        match n {
            3 => Ok(Self::three_point()),
            7 => Ok(Self::seven_point()),
            _ => Err(Error::Configuration(format!(
                "triangle rule must have 3 or 7 points, got {n}"
            ))),
        }
    }
}

/// Quadrature point on the parent square. `weight` excludes the
/// parent-to-physical determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub s: f64,
    pub t: f64,
    pub weight: f64,
}

/// Maps a rule onto a triangle; weights become `w * |J|` with `|J| = 2 * area`.
pub fn map_triangle_gauss(vertices: &[(f64, f64); 3], rule: &TriangleRule) -> Result<Vec<QuadPoint>> {
    let [p0, p1, p2] = *vertices;
    let (e1, e2) = ((p1.0 - p0.0, p1.1 - p0.1), (p2.0 - p0.0, p2.1 - p0.1));
    let jac = (e1.0 * e2.1 - e1.1 * e2.0).abs();
    if !(jac > 0.0) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(rule
        .points
        .iter()
        .zip(&rule.weights)
        .map(|(&(u, v), &w)| QuadPoint {
            s: p0.0 + u * e1.0 + v * e2.0,
            t: p0.1 + u * e1.1 + v * e2.1,
            weight: w * jac,
        })
        .collect())
}

/// Triangle of a cut element with its material tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutTriangle {
    pub vertices: [(f64, f64); 3],
    pub material: bool,
}

impl CutTriangle {
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }
}

fn polygon_area(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
}

fn centroid(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(x, y), p| (x + p.0, y + p.1));
    (sx / n, sy / n)
}

/// Position of a boundary point measured counter-clockwise from corner 0,
/// in edge units.
fn boundary_key(c: &Crossing) -> f64 {
    c.edge as f64 + c.tau
}

/// Splits a cut element into material and void triangles in parent
/// coordinates.
///
/// `phi` evaluates the level set at a parent coordinate. The boundary is cut at
/// the crossings into arcs, each arc is closed by its interface chord, and for
/// four or more crossings the chords enclose a central polygon. Every polygon
/// is tagged by one interior sample and ear-clipped.
pub fn triangulate_cut_element(crossings: &[Crossing], phi: &dyn Fn(f64, f64) -> f64) -> Result<Vec<CutTriangle>> {
    let n = crossings.len();
    if n < 2 || n % 2 == 1 {
        return Err(Error::MissingCrossings(n));
    }
    let mut xs = crossings.to_vec();
    xs.sort_by(|a, b| boundary_key(a).total_cmp(&boundary_key(b)));

    // boundary arc from each crossing to the next, with its sign
    let mut arcs: Vec<(Vec<(f64, f64)>, bool, (f64, f64))> = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (&xs[k], &xs[(k + 1) % n]);
        let mut poly = vec![a.parent];
        let (ka, mut kb) = (boundary_key(a), boundary_key(b));
        if kb <= ka {
            kb += 4.0;
        }
        let first_corner = ka.floor() as usize + 1;
        for c in first_corner..=(kb.ceil() as usize).saturating_sub(1) {
            if (c as f64) > ka && (c as f64) < kb {
                poly.push(Element::PARENT_CORNERS[c % 4]);
            }
        }
        poly.push(b.parent);
        let probe_key = 0.5 * (ka + (first_corner as f64).min(kb));
        let probe = edge_point(probe_key.floor() as usize % 4, probe_key.fract());
        arcs.push((poly, phi(probe.0, probe.1) >= 0.0, probe));
    }

    // A chord is refined onto the interface only when its arc region differs
    // in sign from the central region; otherwise the chord is just a divider
    // inside one region.
    let central_material = (n >= 4).then(|| {
        let c = centroid(&xs.iter().map(|x| x.parent).collect::<Vec<_>>());
        phi(c.0, c.1) >= 0.0
    });
    let mut polygons: Vec<(Vec<(f64, f64)>, bool)> = Vec::new();
    let mut central = Vec::new();
    // arc probe lies left of a -> b when the cross product is positive
    let left_of = |a: (f64, f64), b: (f64, f64), p: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) > 0.0;
    let shared = (n == 2).then(|| {
        let (a, b) = (xs[0].parent, xs[1].parent);
        interface_polyline(a, b, arcs[0].1, left_of(a, b, arcs[0].2), phi, 0)
    });
    for (k, (mut poly, material, probe)) in arcs.into_iter().enumerate() {
        let (a, b) = (&xs[k], &xs[(k + 1) % n]);
        let interior = match (&shared, central_material) {
            // the shared line runs from xs[0] to xs[1]
            (Some(line), _) if k == 0 => line.clone(),
            (Some(line), _) => line.iter().rev().copied().collect(),
            (None, Some(c)) if c != material => interface_polyline(
                a.parent,
                b.parent,
                material,
                left_of(a.parent, b.parent, probe),
                phi,
                0,
            ),
            _ => Vec::new(),
        };
        poly.extend(interior.iter().rev().copied());
        polygons.push((poly, material));
        central.push(a.parent);
        central.extend(interior);
    }
    if let Some(material) = central_material {
        polygons.push((central, material));
    }

    let mut out = Vec::new();
    for (poly, material) in polygons {
        for tri in ear_clip(&poly) {
            let t = CutTriangle {
                vertices: tri,
                material,
            };
            if t.area().abs() < SLIVER_AREA * 4.0 {
                log::debug!("dropping sliver triangle of area {:e}", t.area());
                continue;
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// Every chord is split this many times recursively.
const INTERFACE_DEPTH: usize = 2;
/// Deeper splits continue while the interface bulges more than this
/// fraction of the chord length, up to [`INTERFACE_MAX_DEPTH`].
const INTERFACE_SAGITTA: f64 = 0.01;
const INTERFACE_MAX_DEPTH: usize = 6;

/// Points on the interface between two crossings, ordered from `a` to `b`,
/// endpoints excluded.
///
/// The interface separates a region `R` (sign `r_material`, lying left of
/// `a -> b` when `r_left`) from its neighbour. Each chord is bisected by a
/// root search from its midpoint along the normal, pointing out of `R` when the
/// midpoint lies in `R` and into `R` otherwise.
fn interface_polyline(
    a: (f64, f64),
    b: (f64, f64),
    r_material: bool,
    r_left: bool,
    phi: &dyn Fn(f64, f64) -> f64,
    level: usize,
) -> Vec<(f64, f64)> {
    let d = (b.0 - a.0, b.1 - a.1);
    let len = (d.0 * d.0 + d.1 * d.1).sqrt();
    if level >= INTERFACE_MAX_DEPTH || len < 1e-9 {
        return Vec::new();
    }
    let m = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
    let left = (-d.1 / len, d.0 / len);
    let in_r = (phi(m.0, m.1) >= 0.0) == r_material;
    let sgn = if in_r == r_left { -1.0 } else { 1.0 };
    let Some((r, x)) = root_along(m, (sgn * left.0, sgn * left.1), 3.0, phi) else {
        return Vec::new();
    };
    if r < 1e-9 * len.max(1.0) || (level >= INTERFACE_DEPTH && r < INTERFACE_SAGITTA * len) {
        return Vec::new();
    }
    let mut out = interface_polyline(a, x, r_material, r_left, phi, level + 1);
    out.push(x);
    out.extend(interface_polyline(x, b, r_material, r_left, phi, level + 1));
    out
}

/// First sign change of `phi` along a ray inside the parent square.
fn root_along(
    m: (f64, f64),
    dir: (f64, f64),
    reach: f64,
    phi: &dyn Fn(f64, f64) -> f64,
) -> Option<(f64, (f64, f64))> {
    let at = |r: f64| (m.0 + r * dir.0, m.1 + r * dir.1);
    // distance to the parent-square boundary along the ray
    let exit = [(m.0, dir.0), (m.1, dir.1)]
        .iter()
        .filter(|(_, d)| *d != 0.0)
        .map(|&(c, d)| (d.signum() - c) / d)
        .fold(reach, f64::min)
        .max(0.0);
    let neg0 = phi(m.0, m.1) < 0.0;
    let steps = 64;
    let mut prev = 0.0;
    for k in 1..=steps {
        let r = (reach * k as f64 / steps as f64).min(exit);
        if r <= prev {
            return None;
        }
        let p = at(r);
        if (phi(p.0, p.1) < 0.0) != neg0 {
            let (mut lo, mut hi) = (prev, r);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let q = at(mid);
                if (phi(q.0, q.1) < 0.0) == neg0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-14 {
                    break;
                }
            }
            let r = 0.5 * (lo + hi);
            return Some((r, at(r)));
        }
        prev = r;
    }
    None
}

/// Ear clipping for a simple polygon of either orientation.
fn ear_clip(poly: &[(f64, f64)]) -> Vec<[(f64, f64); 3]> {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(poly.len());
    for &p in poly {
        if pts.last().is_none_or(|q: &(f64, f64)| (q.0 - p.0).abs() + (q.1 - p.1).abs() > 1e-14) {
            pts.push(p);
        }
    }
    while pts.len() > 1 {
        let (f, l) = (pts[0], pts[pts.len() - 1]);
        if (f.0 - l.0).abs() + (f.1 - l.1).abs() <= 1e-14 {
            pts.pop();
        } else {
            break;
        }
    }
    if pts.len() < 3 {
        return Vec::new();
    }
    let orient = polygon_area(&pts).signum();
    let cross = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len() - 2);
    let mut guard = 0;
    while idx.len() > 3 && guard < 10_000 {
        guard += 1;
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (ia, ib, ic) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (a, b, c) = (pts[ia], pts[ib], pts[ic]);
            let turn = cross(a, b, c) * orient;
            if turn <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = pts[j];
                cross(a, b, p) * orient >= 0.0 && cross(b, c, p) * orient >= 0.0 && cross(c, a, p) * orient >= 0.0
            });
            if !blocked {
                out.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            // collinear or numerically degenerate remainder: fan it
            let a = pts[idx[0]];
            for w in idx[1..].windows(2) {
                out.push([a, pts[w[0]], pts[w[1]]]);
            }
            return out;
        }
    }
    if idx.len() == 3 {
        out.push([pts[idx[0]], pts[idx[1]], pts[idx[2]]]);
    }
    out
}

/// Quadrature for one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementRule {
    pub points: Vec<QuadPoint>,
    /// True when points came from a cut-element triangulation.
    pub cut: bool,
}

/// Tensor Gauss rule with `nx * ny` points.
pub fn tensor_rule(nx: usize, ny: usize) -> ElementRule {
    let (gx, wx) = gauss_legendre(nx);
    let (gy, wy) = gauss_legendre(ny);
    let mut points = Vec::with_capacity(nx * ny);
    for (t, wt) in gy.iter().zip(&wy) {
        for (s, ws) in gx.iter().zip(&wx) {
            points.push(QuadPoint {
                s: *s,
                t: *t,
                weight: ws * wt,
            });
        }
    }
    ElementRule { points, cut: false }
}

/// Parent-square quadrature over the material part of a cut element.
///
/// Weights carry the triangle rule times `|J_tri| / 2`, so a fully material
/// element would sum to 4, the parent-square area.
pub fn physical_rule(
    patch: &NurbsPatch,
    element: &Element,
    shape: &LevelSetShape,
    crossings: &[Crossing],
    rule: &TriangleRule,
) -> Result<ElementRule> {
    let phi = |s: f64, t: f64| {
        patch
            .element_map(element, s, t)
            .map(|x| shape.signed_distance(x))
            .unwrap_or(f64::NAN)
    };
    let tris = triangulate_cut_element(crossings, &phi)?;
    let mut points = Vec::new();
    for tri in tris.iter().filter(|t| t.material) {
        for mut qp in map_triangle_gauss(&tri.vertices, rule)? {
            qp.weight *= 0.5;
            points.push(qp);
        }
    }
    Ok(ElementRule { points, cut: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::{classify_elements, edge_intersections, ElementTag};

    fn integrate_monomial(rule: &TriangleRule, i: i32, j: i32) -> f64 {
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&(x, y), w)| w * x.powi(i) * y.powi(j))
            .sum::<f64>()
            * 0.5
    }

    fn factorial(n: i32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn triangle_rules_exact_to_degree() {
        for rule in [TriangleRule::three_point(), TriangleRule::seven_point()] {
            assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for i in 0..=rule.degree as i32 {
                for j in 0..=(rule.degree as i32 - i) {
                    // int x^i y^j over the unit triangle = i! j! / (i + j + 2)!
                    let exact = factorial(i) * factorial(j) / factorial(i + j + 2);
                    let got = integrate_monomial(&rule, i, j);
                    assert!((got - exact).abs() < 1e-13, "x^{i} y^{j}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=20 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for k in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn mapped_weights_sum_to_twice_area() {
        let tri = [(0.1, 0.2), (0.9, 0.3), (0.4, 0.8)];
        let area = polygon_area(&tri).abs();
        for rule in [TriangleRule::three_point(), TriangleRule::seven_point()] {
            let pts = map_triangle_gauss(&tri, &rule).unwrap();
            let sum: f64 = pts.iter().map(|p| p.weight).sum();
            assert!((sum - 2.0 * area).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let tri = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)];
        assert!(matches!(
            map_triangle_gauss(&tri, &TriangleRule::three_point()),
            Err(Error::DegenerateTriangle)
        ));
    }

    #[test]
    fn rule_selection() {
        assert_eq!(TriangleRule::with_points(7).unwrap().points.len(), 7);
        assert!(TriangleRule::with_points(4).is_err());
    }

    fn single_element_cut(shape: &LevelSetShape) -> (Vec<CutTriangle>, NurbsPatch) {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap();
        let el = patch.elements()[0];
        let xs = edge_intersections(&patch, &el, shape).unwrap();
        let phi = |s: f64, t: f64| shape.signed_distance(patch.element_map(&el, s, t).unwrap());
        (triangulate_cut_element(&xs, &phi).unwrap(), patch)
    }

    #[test]
    fn straight_cut_partitions_exactly() {
        // half-plane x < 0.3 as a huge circle; its boundary is nearly straight
        let shape = LevelSetShape::circle([-1e6 + 0.3, 0.5], 1e6);
        let (tris, _) = single_element_cut(&shape);
        let total: f64 = tris.iter().map(|t| t.area().abs()).sum();
        let material: f64 = tris.iter().filter(|t| t.material).map(|t| t.area().abs()).sum();
        assert!((total - 4.0).abs() < 1e-12);
        // material is x > 0.3, i.e. parent s > -0.4
        assert!((material - 1.4 * 2.0).abs() < 1e-6, "{material}");
    }

    #[test]
    fn corner_cut_tags() {
        let shape = LevelSetShape::circle([0.0, 0.0], 0.5);
        let (tris, _) = single_element_cut(&shape);
        let void: f64 = tris.iter().filter(|t| !t.material).map(|t| t.area().abs()).sum();
        // inscribed polygon of the quarter disc, parent x4
        let quarter = 4.0 * std::f64::consts::PI * 0.25 / 4.0;
        assert!(void < quarter && quarter - void < 1e-3, "{void}");
    }

    #[test]
    fn same_edge_crossings_get_interface_vertex() {
        let shape = LevelSetShape::circle([0.5, 0.0], 0.2);
        let (tris, _) = single_element_cut(&shape);
        let void: Vec<_> = tris.iter().filter(|t| !t.material).collect();
        // apex of the void bump lies on the circle: (0.5, 0.2) -> parent (0, -0.6)
        let apex = void
            .iter()
            .flat_map(|t| t.vertices)
            .any(|v| v.0.abs() < 1e-9 && (v.1 + 0.6).abs() < 1e-9);
        assert!(apex);
        let total: f64 = tris.iter().map(|t| t.area().abs()).sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn four_crossings_make_central_polygon() {
        // thin band through the element centre, void in the middle
        let shape = LevelSetShape::ellipse([0.5, 0.5], 10.0, 0.2, std::f64::consts::FRAC_PI_4);
        let (tris, _) = single_element_cut(&shape);
        let total: f64 = tris.iter().map(|t| t.area().abs()).sum();
        assert!((total - 4.0).abs() < 1e-12);
        let void: f64 = tris.iter().filter(|t| !t.material).map(|t| t.area().abs()).sum();
        // two material corner triangles with legs 1 - 0.2*sqrt2 each, in parent units x4
        let leg = 1.0 - 0.2 * std::f64::consts::SQRT_2;
        let material_phys = leg * leg;
        assert!((void - 4.0 * (1.0 - material_phys)).abs() < 5e-3, "{void}");
    }

    #[test]
    fn cut_areas_sum_to_material_area() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(5).unwrap();
        let shape = LevelSetShape::circle([0.5, 0.5], 0.15);
        let cls = classify_elements(&patch, &shape).unwrap();
        let rule = TriangleRule::seven_point();
        let mut area = 0.0;
        for el in patch.elements() {
            let pts = match cls.tags[el.id] {
                ElementTag::Inner => continue,
                ElementTag::Outer => tensor_rule(3, 3).points,
                ElementTag::Enriched => {
                    let xs = edge_intersections(&patch, &el, &shape).unwrap();
                    physical_rule(&patch, &el, &shape, &xs, &rule).unwrap().points
                }
            };
            for qp in pts {
                area += qp.weight * patch.element_point(&el, qp.s, qp.t).unwrap().det;
            }
        }
        let exact = 1.0 - std::f64::consts::PI * 0.15 * 0.15;
        assert!((area - exact).abs() < 2e-3, "{area} vs {exact}");
    }

    #[test]
    fn full_element_weights_sum_to_four() {
        let r = tensor_rule(3, 3);
        assert!((r.points.iter().map(|p| p.weight).sum::<f64>() - 4.0).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn triangulation_covers_parent_square(cx in -0.5..1.5f64, cy in -0.5..1.5f64, r in 0.05..3.0f64) {
                let shape = LevelSetShape::circle([cx, cy], r);
                let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap();
                let el = patch.elements()[0];
                let cls = classify_elements(&patch, &shape).unwrap();
                prop_assume!(cls.tags[0] == ElementTag::Enriched);
                let Ok(xs) = edge_intersections(&patch, &el, &shape) else { return Ok(()); };
                let phi = |s: f64, t: f64| shape.signed_distance(patch.element_map(&el, s, t).unwrap());
                let tris = triangulate_cut_element(&xs, &phi).unwrap();
                let total: f64 = tris.iter().map(|t| t.area().abs()).sum();
                prop_assert!((total - 4.0).abs() < 1e-9, "total {}", total);
                // material area against a sampled oracle
                let material: f64 = tris.iter().filter(|t| t.material).map(|t| t.area().abs()).sum::<f64>() / 4.0;
                let n = 400;
                let mut inside = 0usize;
                for j in 0..n { for i in 0..n {
                    let p = nalgebra::Vector2::new((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                    if shape.signed_distance(p) >= 0.0 { inside += 1; }
                }}
                let oracle = inside as f64 / (n * n) as f64;
                prop_assert!((material - oracle).abs() < 0.01, "{} vs {}", material, oracle);
            }
        }
    }
}
