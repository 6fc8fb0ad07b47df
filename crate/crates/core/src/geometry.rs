//! B-spline and NURBS machinery shared by the plate patch and the stiffener
//! curve.
//!
//! Parametric domains are open (clamped) knot vectors, normally on `[0, 1]`.
//! An *element* is a nonempty knot-span product; quadrature works on the
//! parent square `[-1, 1]^2`, so the parent-to-physical Jacobian of an element
//! is the parametric Jacobian scaled by half of each span length.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Relative slack accepted when a parameter sits a rounding error outside the
/// knot range.
const RANGE_SLACK: f64 = 1e-12;

/// Open, non-decreasing knot vector together with its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    values: Vec<f64>,
    degree: usize,
}

impl KnotVector {
    pub fn new(values: Vec<f64>, degree: usize) -> Result<Self> {
        if values.len() < 2 * (degree + 1) {
            return Err(Error::InvalidKnots(format!(
                "{} knots cannot carry degree {degree}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be non-decreasing".into()));
        }
        let first = values[0];
        let last = values[values.len() - 1];
        if last <= first {
            return Err(Error::InvalidKnots("knot vector has zero length".into()));
        }
        let open_start = values[..=degree].iter().all(|&v| v == first);
        let open_end = values[values.len() - degree - 1..].iter().all(|&v| v == last);
        if !open_start || !open_end {
            return Err(Error::InvalidKnots(format!(
                "end knots must be repeated {} times",
                degree + 1
            )));
        }
        // interior multiplicity above p would break continuity of the basis
        let mut run = 1;
        for w in values[degree..values.len() - degree].windows(2) {
            run = if w[1] == w[0] { run + 1 } else { 1 };
            if run > degree && w[0] != first && w[0] != last {
                return Err(Error::InvalidKnots(format!(
                    "interior knot {} repeated more than {degree} times",
                    w[0]
                )));
            }
        }
        Ok(Self { values, degree })
    }

    /// Bezier knot vector `[0; p+1] ++ [1; p+1]`.
    pub fn bezier(degree: usize) -> Self {
        let mut values = vec![0.0; degree + 1];
        values.extend(std::iter::repeat_n(1.0, degree + 1));
        Self { values, degree }
    }

    /// Open knot vector on `[0, 1]` with `elements` uniform spans.
    pub fn uniform(degree: usize, elements: usize) -> Self {
        let elements = elements.max(1);
        let mut values = vec![0.0; degree + 1];
        for k in 1..elements {
            values.push(k as f64 / elements as f64);
        }
        values.extend(std::iter::repeat_n(1.0, degree + 1));
        Self { values, degree }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions, `len - p - 1`.
    pub fn num_basis(&self) -> usize {
        self.values.len() - self.degree - 1
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Span index `i` with `knots[i] <= xi < knots[i+1]`; `xi == last` maps to
    /// the final nonempty span.
    pub fn find_span(&self, xi: f64) -> Result<usize> {
        let xi = self.clamp_param(xi)?;
        let n = self.num_basis();
        let p = self.degree;
        if xi >= self.values[n] {
            return Ok(n - 1);
        }
        if xi <= self.values[p] {
            // first nonempty span at or after p
            let mut span = p;
            while self.values[span + 1] <= xi {
                span += 1;
            }
            return Ok(span);
        }
        let (mut low, mut high) = (p, n);
        let mut mid = (low + high) / 2;
        while xi < self.values[mid] || xi >= self.values[mid + 1] {
            if xi < self.values[mid] {
                high = mid;
            } else {
                low = mid;
            }
            mid = (low + high) / 2;
        }
        Ok(mid)
    }

    fn clamp_param(&self, xi: f64) -> Result<f64> {
        let (lo, hi) = (self.first(), self.last());
        let slack = RANGE_SLACK * (hi - lo);
        if !xi.is_finite() || xi < lo - slack || xi > hi + slack {
            return Err(Error::Domain { value: xi, lo, hi });
        }
        Ok(xi.clamp(lo, hi))
    }

    /// Nonzero basis values and derivatives on the span containing `xi`.
    pub fn basis_with_derivatives(&self, xi: f64, max_order: usize) -> Result<BasisDerivatives> {
        let span = self.find_span(xi)?;
        self.basis_on_span(span, xi, max_order)
    }

    /// Basis values and derivatives for an explicitly chosen span.
    ///
    /// `ders[k][r]` is the k-th derivative of `N_{span-p+r}`. Orders above `p`
    /// are zero.
    pub fn basis_on_span(&self, span: usize, xi: f64, max_order: usize) -> Result<BasisDerivatives> {
        let p = self.degree;
        let u = &self.values;
        if span < p || span + 1 >= u.len() || u[span + 1] <= u[span] {
            return Err(Error::DegenerateSpan(span));
        }
        let xi = self.clamp_param(xi)?;

        // triangular table of basis values and knot differences
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = xi - u[span + 1 - j];
            right[j] = u[span + j] - xi;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![0.0; p + 1]; max_order + 1];
        for (j, slot) in ders[0].iter_mut().enumerate() {
            *slot = ndu[j][p];
        }
        let top = max_order.min(p);
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=top {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let col = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][col];
                    d += a[s2][j] * ndu[col][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for k in 1..=top {
            for v in ders[k].iter_mut() {
                *v *= factor;
            }
            factor *= (p - k) as f64;
        }
        Ok(BasisDerivatives { span, ders })
    }

    /// Nonempty spans as `(span index, start, end)`.
    pub fn spans(&self) -> Vec<(usize, f64, f64)> {
        let p = self.degree;
        (p..self.num_basis())
            .filter(|&i| self.values[i + 1] > self.values[i])
            .map(|i| (i, self.values[i], self.values[i + 1]))
            .collect()
    }

    /// Midpoints of every nonempty span.
    pub fn span_midpoints(&self) -> Vec<f64> {
        self.spans().into_iter().map(|(_, a, b)| 0.5 * (a + b)).collect()
    }
}

/// Output of [`KnotVector::basis_with_derivatives`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDerivatives {
    pub span: usize,
    /// `ders[k][r]`: k-th derivative of basis function `span - p + r`.
    pub ders: Vec<Vec<f64>>,
}

impl BasisDerivatives {
    pub fn values(&self) -> &[f64] {
        &self.ders[0]
    }

    /// Index of the first nonzero basis function.
    pub fn first_index(&self, degree: usize) -> usize {
        self.span - degree
    }
}

/// Homogeneous control point `(w x, w y, w)`.
type Homogeneous = [f64; 3];

/// Inserts `knot` once into a curve given by homogeneous control points.
fn insert_knot(knots: &KnotVector, points: &[Homogeneous], knot: f64) -> Result<(Vec<f64>, Vec<Homogeneous>)> {
    let p = knots.degree;
    let u = &knots.values;
    let k = knots.find_span(knot)?;
    let mut out = Vec::with_capacity(points.len() + 1);
    for i in 0..=points.len() {
        let q = if i + p <= k {
            points[i]
        } else if i > k {
            points[i - 1]
        } else {
            let alpha = (knot - u[i]) / (u[i + p] - u[i]);
            let (a, b) = (points[i], points[i - 1]);
            [
                alpha * a[0] + (1.0 - alpha) * b[0],
                alpha * a[1] + (1.0 - alpha) * b[1],
                alpha * a[2] + (1.0 - alpha) * b[2],
            ]
        };
        out.push(q);
    }
    let mut values = u.clone();
    values.insert(k + 1, knot);
    Ok((values, out))
}

/// Inserts every knot in `new_knots` (in order) into the curve.
fn refine_curve(knots: &KnotVector, points: &[Homogeneous], new_knots: &[f64]) -> Result<(KnotVector, Vec<Homogeneous>)> {
    let mut kv = knots.clone();
    let mut pts = points.to_vec();
    for &x in new_knots {
        let (values, next) = insert_knot(&kv, &pts, x)?;
        kv = KnotVector {
            values,
            degree: kv.degree,
        };
        pts = next;
    }
    Ok((kv, pts))
}

/// Nonzero rational basis functions of a surface at one parametric point.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBasis {
    /// Global control-point indices (`i + j * n_xi`), xi-fastest.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub d_xi: Vec<f64>,
    pub d_eta: Vec<f64>,
}

/// Physical point and parametric Jacobian `[dx/dxi dx/deta; dy/dxi dy/deta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub point: Vector2<f64>,
    pub jacobian: Matrix2<f64>,
}

/// One element of a patch: a nonempty knot-span product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub id: usize,
    /// Element position in the span grid.
    pub ix: usize,
    pub iy: usize,
    pub span_xi: usize,
    pub span_eta: usize,
    pub xi: (f64, f64),
    pub eta: (f64, f64),
}

impl Element {
    /// Parent `[-1, 1]^2` to parametric coordinates.
    pub fn to_parametric(&self, s: f64, t: f64) -> (f64, f64) {
        (
            self.xi.0 + 0.5 * (s + 1.0) * (self.xi.1 - self.xi.0),
            self.eta.0 + 0.5 * (t + 1.0) * (self.eta.1 - self.eta.0),
        )
    }

    /// `d(xi, eta) / d(s, t)`, a diagonal scaling.
    pub fn parent_scale(&self) -> (f64, f64) {
        (0.5 * (self.xi.1 - self.xi.0), 0.5 * (self.eta.1 - self.eta.0))
    }

    /// Parent corners in counter-clockwise order starting at `(-1, -1)`.
    pub const PARENT_CORNERS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
}

/// Basis functions pushed to physical coordinates at a parent-element point.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementPoint {
    pub point: Vector2<f64>,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    /// Parent-to-physical Jacobian (includes the half-span scaling).
    pub jacobian: Matrix2<f64>,
    pub det: f64,
}

/// Tensor-product NURBS surface with 2D control points.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsPatch {
    knots_xi: KnotVector,
    knots_eta: KnotVector,
    /// `points[i + j * n_xi]`
    points: Vec<Vector2<f64>>,
    weights: Vec<f64>,
}

impl NurbsPatch {
    pub fn new(
        knots_xi: KnotVector,
        knots_eta: KnotVector,
        points: Vec<Vector2<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let expected = knots_xi.num_basis() * knots_eta.num_basis();
        if points.len() != expected || weights.len() != expected {
            return Err(Error::InvalidPatch(format!(
                "expected {expected} control points and weights, got {} and {}",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPatch(format!("weight {w} is not positive")));
        }
        Ok(Self {
            knots_xi,
            knots_eta,
            points,
            weights,
        })
    }

    /// Single-element patch of degree `(p, q)` covering `[0, a] x [0, b]` with
    /// a linear parametrization.
    pub fn rectangle(a: f64, b: f64, p: usize, q: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidPatch(format!("rectangle {a} x {b}")));
        }
        let kx = KnotVector::bezier(p);
        let ky = KnotVector::bezier(q);
        let mut points = Vec::with_capacity((p + 1) * (q + 1));
        for j in 0..=q {
            for i in 0..=p {
                let x = if p == 0 { 0.5 } else { i as f64 / p as f64 };
                let y = if q == 0 { 0.5 } else { j as f64 / q as f64 };
                points.push(Vector2::new(a * x, b * y));
            }
        }
        let weights = vec![1.0; points.len()];
        Self::new(kx, ky, points, weights)
    }

    /// Quarter annulus between radii `r_in` and `r_out`; xi runs radially
    /// (degree 1) and eta along the arc (degree 2, exact circle weights).
    pub fn quarter_annulus(r_in: f64, r_out: f64) -> Result<Self> {
        let w = std::f64::consts::FRAC_1_SQRT_2;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (dir, wt) in [((1.0, 0.0), 1.0), ((1.0, 1.0), w), ((0.0, 1.0), 1.0)] {
            for r in [r_in, r_out] {
                points.push(Vector2::new(r * dir.0, r * dir.1));
                weights.push(wt);
            }
        }
        Self::new(KnotVector::bezier(1), KnotVector::bezier(2), points, weights)
    }

    pub fn knots_xi(&self) -> &KnotVector {
        &self.knots_xi
    }

    pub fn knots_eta(&self) -> &KnotVector {
        &self.knots_eta
    }

    pub fn control_points(&self) -> &[Vector2<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_xi(&self) -> usize {
        self.knots_xi.num_basis()
    }

    pub fn n_eta(&self) -> usize {
        self.knots_eta.num_basis()
    }

    pub fn num_control_points(&self) -> usize {
        self.points.len()
    }

    /// `(i, j)` grid position of a control point index.
    pub fn grid_index(&self, cp: usize) -> (usize, usize) {
        (cp % self.n_xi(), cp / self.n_xi())
    }

    pub fn surface_basis(&self, xi: f64, eta: f64) -> Result<SurfaceBasis> {
        let p = self.knots_xi.degree;
        let q = self.knots_eta.degree;
        let bx = self.knots_xi.basis_with_derivatives(xi, 1)?;
        let by = self.knots_eta.basis_with_derivatives(eta, 1)?;
        Ok(self.combine(&bx, &by, p, q))
    }

    fn combine(&self, bx: &BasisDerivatives, by: &BasisDerivatives, p: usize, q: usize) -> SurfaceBasis {
        let nx = self.n_xi();
        let i0 = bx.first_index(p);
        let j0 = by.first_index(q);
        let count = (p + 1) * (q + 1);
        let mut indices = Vec::with_capacity(count);
        let mut num = Vec::with_capacity(count);
        let mut num_xi = Vec::with_capacity(count);
        let mut num_eta = Vec::with_capacity(count);
        let (mut w, mut w_xi, mut w_eta) = (0.0, 0.0, 0.0);
        for b in 0..=q {
            for a in 0..=p {
                let idx = (i0 + a) + (j0 + b) * nx;
                let wt = self.weights[idx];
                let v = bx.ders[0][a] * by.ders[0][b] * wt;
                let vx = bx.ders[1][a] * by.ders[0][b] * wt;
                let vy = bx.ders[0][a] * by.ders[1][b] * wt;
                w += v;
                w_xi += vx;
                w_eta += vy;
                indices.push(idx);
                num.push(v);
                num_xi.push(vx);
                num_eta.push(vy);
            }
        }
        let values: Vec<f64> = num.iter().map(|v| v / w).collect();
        let d_xi = num_xi
            .iter()
            .zip(&values)
            .map(|(nx, r)| (nx - r * w_xi) / w)
            .collect();
        let d_eta = num_eta
            .iter()
            .zip(&values)
            .map(|(ny, r)| (ny - r * w_eta) / w)
            .collect();
        SurfaceBasis {
            indices,
            values,
            d_xi,
            d_eta,
        }
    }

    /// Physical point without the orientation check.
    pub fn point(&self, xi: f64, eta: f64) -> Result<Vector2<f64>> {
        let basis = self.surface_basis(xi, eta)?;
        Ok(self.point_from(&basis))
    }

    fn point_from(&self, basis: &SurfaceBasis) -> Vector2<f64> {
        basis
            .indices
            .iter()
            .zip(&basis.values)
            .fold(Vector2::zeros(), |acc, (&i, &r)| acc + self.points[i] * r)
    }

    fn jacobian_from(&self, basis: &SurfaceBasis) -> Matrix2<f64> {
        let mut jac = Matrix2::zeros();
        for (k, &i) in basis.indices.iter().enumerate() {
            let pt = self.points[i];
            jac[(0, 0)] += basis.d_xi[k] * pt.x;
            jac[(0, 1)] += basis.d_eta[k] * pt.x;
            jac[(1, 0)] += basis.d_xi[k] * pt.y;
            jac[(1, 1)] += basis.d_eta[k] * pt.y;
        }
        jac
    }

    /// Physical point and parametric Jacobian; fails on non-positive det.
    pub fn surface_map(&self, xi: f64, eta: f64) -> Result<SurfacePoint> {
        let basis = self.surface_basis(xi, eta)?;
        let jacobian = self.jacobian_from(&basis);
        let det = jacobian.determinant();
        if !(det > 0.0) {
            return Err(Error::InvertedElement { det, xi, eta });
        }
        Ok(SurfacePoint {
            point: self.point_from(&basis),
            jacobian,
        })
    }

    /// Parametric coordinates of a physical point, by Newton iteration on the
    /// geometric map.
    pub fn inverse_map(&self, x: Vector2<f64>) -> Result<(f64, f64)> {
        let (x0, x1) = (self.knots_xi.first(), self.knots_xi.last());
        let (e0, e1) = (self.knots_eta.first(), self.knots_eta.last());
        let (mut xi, mut eta) = (0.5 * (x0 + x1), 0.5 * (e0 + e1));
        let scale = self.points.iter().map(|p| p.norm()).fold(1.0, f64::max);
        for _ in 0..100 {
            let sp = self.surface_map(xi, eta)?;
            let r = sp.point - x;
            if r.norm() <= 1e-13 * scale {
                return Ok((xi, eta));
            }
            let step = sp
                .jacobian
                .try_inverse()
                .ok_or(Error::InvertedElement { det: 0.0, xi, eta })?
                * r;
            xi = (xi - step.x).clamp(x0, x1);
            eta = (eta - step.y).clamp(e0, e1);
        }
        let r = (self.point(xi, eta)? - x).norm();
        if r <= 1e-9 * scale {
            Ok((xi, eta))
        } else {
            Err(Error::InvalidPatch(format!(
                "point ({}, {}) lies outside the patch",
                x.x, x.y
            )))
        }
    }

    /// Element containing a physical point and the point's parent coordinates.
    pub fn locate(&self, x: Vector2<f64>) -> Result<(Element, f64, f64)> {
        let (xi, eta) = self.inverse_map(x)?;
        let sx = self.knots_xi.find_span(xi)?;
        let sy = self.knots_eta.find_span(eta)?;
        let el = self
            .elements()
            .into_iter()
            .find(|e| e.span_xi == sx && e.span_eta == sy)
            .ok_or_else(|| Error::InvalidPatch(format!("no element for spans ({sx}, {sy})")))?;
        let s = 2.0 * (xi - el.xi.0) / (el.xi.1 - el.xi.0) - 1.0;
        let t = 2.0 * (eta - el.eta.0) / (el.eta.1 - el.eta.0) - 1.0;
        Ok((el, s, t))
    }

    /// Elements in row-major order (xi fastest).
    pub fn elements(&self) -> Vec<Element> {
        let sx = self.knots_xi.spans();
        let sy = self.knots_eta.spans();
        let mut out = Vec::with_capacity(sx.len() * sy.len());
        for (iy, &(sj, e0, e1)) in sy.iter().enumerate() {
            for (ix, &(si, x0, x1)) in sx.iter().enumerate() {
                out.push(Element {
                    id: out.len(),
                    ix,
                    iy,
                    span_xi: si,
                    span_eta: sj,
                    xi: (x0, x1),
                    eta: (e0, e1),
                });
            }
        }
        out
    }

    /// Number of elements along xi and eta.
    pub fn element_grid(&self) -> (usize, usize) {
        (self.knots_xi.spans().len(), self.knots_eta.spans().len())
    }

    /// Control points whose basis functions are nonzero on `element`,
    /// xi-fastest; the order matches [`Self::element_point`].
    pub fn element_control_points(&self, element: &Element) -> Vec<usize> {
        let p = self.knots_xi.degree;
        let q = self.knots_eta.degree;
        let nx = self.n_xi();
        let mut out = Vec::with_capacity((p + 1) * (q + 1));
        for j in element.span_eta - q..=element.span_eta {
            for i in element.span_xi - p..=element.span_xi {
                out.push(i + j * nx);
            }
        }
        out
    }

    /// Basis values and physical derivatives at parent point `(s, t)`.
    pub fn element_point(&self, element: &Element, s: f64, t: f64) -> Result<ElementPoint> {
        let (xi, eta) = element.to_parametric(s, t);
        let p = self.knots_xi.degree;
        let q = self.knots_eta.degree;
        let bx = self.knots_xi.basis_on_span(element.span_xi, xi, 1)?;
        let by = self.knots_eta.basis_on_span(element.span_eta, eta, 1)?;
        let basis = self.combine(&bx, &by, p, q);
        let (hx, hy) = element.parent_scale();
        let param_jac = self.jacobian_from(&basis);
        let jacobian = param_jac * Matrix2::new(hx, 0.0, 0.0, hy);
        let det = jacobian.determinant();
        if !(det > 0.0) {
            return Err(Error::InvertedElement { det, xi, eta });
        }
        let inv = param_jac.try_inverse().ok_or(Error::InvertedElement { det, xi, eta })?;
        // dR/dx = dR/dxi * dxi/dx + dR/deta * deta/dx
        let dx = basis
            .d_xi
            .iter()
            .zip(&basis.d_eta)
            .map(|(a, b)| a * inv[(0, 0)] + b * inv[(1, 0)])
            .collect();
        let dy = basis
            .d_xi
            .iter()
            .zip(&basis.d_eta)
            .map(|(a, b)| a * inv[(0, 1)] + b * inv[(1, 1)])
            .collect();
        Ok(ElementPoint {
            point: self.point_from(&basis),
            indices: basis.indices,
            values: basis.values,
            dx,
            dy,
            jacobian,
            det,
        })
    }

    /// Physical point of a parent coordinate on an element.
    pub fn element_map(&self, element: &Element, s: f64, t: f64) -> Result<Vector2<f64>> {
        let (xi, eta) = element.to_parametric(s, t);
        let p = self.knots_xi.degree;
        let q = self.knots_eta.degree;
        let bx = self.knots_xi.basis_on_span(element.span_xi, xi, 0)?;
        let by = self.knots_eta.basis_on_span(element.span_eta, eta, 0)?;
        let nx = self.n_xi();
        let i0 = bx.first_index(p);
        let j0 = by.first_index(q);
        let mut w = 0.0;
        let mut acc = Vector2::zeros();
        for b in 0..=q {
            for a in 0..=p {
                let idx = (i0 + a) + (j0 + b) * nx;
                let v = bx.ders[0][a] * by.ders[0][b] * self.weights[idx];
                w += v;
                acc += self.points[idx] * v;
            }
        }
        Ok(acc / w)
    }

    /// Uniform h-refinement: each level inserts the midpoint of every nonempty
    /// span in both directions. The geometric map is unchanged.
    pub fn h_refine(&self, levels: usize) -> Result<Self> {
        let mut patch = self.clone();
        for _ in 0..levels {
            let mids_xi = patch.knots_xi.span_midpoints();
            let mids_eta = patch.knots_eta.span_midpoints();
            patch = patch.insert_knots(&mids_xi, &mids_eta)?;
        }
        Ok(patch)
    }

    /// Inserts the given knots (each sorted ascending) in xi and eta.
    pub fn insert_knots(&self, xi_knots: &[f64], eta_knots: &[f64]) -> Result<Self> {
        let nx = self.n_xi();
        let ny = self.n_eta();
        let hom: Vec<Homogeneous> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| [p.x * w, p.y * w, w])
            .collect();

        // refine along xi, row by row
        let mut rows = Vec::with_capacity(ny);
        let mut kx = self.knots_xi.clone();
        for j in 0..ny {
            let row = &hom[j * nx..(j + 1) * nx];
            let (k, pts) = refine_curve(&self.knots_xi, row, xi_knots)?;
            kx = k;
            rows.push(pts);
        }
        let nx2 = kx.num_basis();

        // then along eta, column by column
        let mut ky = self.knots_eta.clone();
        let mut cols = Vec::with_capacity(nx2);
        for i in 0..nx2 {
            let col: Vec<Homogeneous> = rows.iter().map(|r| r[i]).collect();
            let (k, pts) = refine_curve(&self.knots_eta, &col, eta_knots)?;
            ky = k;
            cols.push(pts);
        }
        let ny2 = ky.num_basis();
        let mut points = Vec::with_capacity(nx2 * ny2);
        let mut weights = Vec::with_capacity(nx2 * ny2);
        for j in 0..ny2 {
            for col in cols.iter() {
                let h = col[j];
                points.push(Vector2::new(h[0] / h[2], h[1] / h[2]));
                weights.push(h[2]);
            }
        }
        Self::new(kx, ky, points, weights)
    }

    /// Greville abscissae of the control points in each direction.
    pub fn greville(&self) -> (Vec<f64>, Vec<f64>) {
        (greville(&self.knots_xi), greville(&self.knots_eta))
    }
}

fn greville(kv: &KnotVector) -> Vec<f64> {
    let p = kv.degree;
    (0..kv.num_basis())
        .map(|i| {
            if p == 0 {
                0.5 * (kv.values[i] + kv.values[i + 1])
            } else {
                kv.values[i + 1..=i + p].iter().sum::<f64>() / p as f64
            }
        })
        .collect()
}

/// Point, first derivative and basis of a curve at one parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub point: Vector2<f64>,
    pub tangent: Vector2<f64>,
}

/// Planar NURBS curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsCurve {
    knots: KnotVector,
    points: Vec<Vector2<f64>>,
    weights: Vec<f64>,
}

impl NurbsCurve {
    pub fn new(knots: KnotVector, points: Vec<Vector2<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != knots.num_basis() || weights.len() != points.len() {
            return Err(Error::InvalidPatch(format!(
                "curve expects {} control points, got {} points and {} weights",
                knots.num_basis(),
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPatch(format!("weight {w} is not positive")));
        }
        Ok(Self { knots, points, weights })
    }

    /// Quadratic Bezier through three control points.
    pub fn quadratic_bezier(p0: Vector2<f64>, p1: Vector2<f64>, p2: Vector2<f64>) -> Self {
        Self {
            knots: KnotVector::bezier(2),
            points: vec![p0, p1, p2],
            weights: vec![1.0; 3],
        }
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn control_points(&self) -> &[Vector2<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn evaluate(&self, u: f64) -> Result<CurvePoint> {
        let p = self.knots.degree;
        let b = self.knots.basis_with_derivatives(u, 1)?;
        let i0 = b.first_index(p);
        let (mut w, mut dw) = (0.0, 0.0);
        let mut a = Vector2::zeros();
        let mut da = Vector2::zeros();
        for r in 0..=p {
            let wt = self.weights[i0 + r];
            w += b.ders[0][r] * wt;
            dw += b.ders[1][r] * wt;
            a += self.points[i0 + r] * (b.ders[0][r] * wt);
            da += self.points[i0 + r] * (b.ders[1][r] * wt);
        }
        let point = a / w;
        let tangent = (da - point * dw) / w;
        Ok(CurvePoint { point, tangent })
    }

    /// Uniform h-refinement by span-midpoint insertion.
    pub fn h_refine(&self, levels: usize) -> Result<Self> {
        let mut kv = self.knots.clone();
        let mut pts: Vec<Homogeneous> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| [p.x * w, p.y * w, w])
            .collect();
        for _ in 0..levels {
            let mids = kv.span_midpoints();
            let (k, next) = refine_curve(&kv, &pts, &mids)?;
            kv = k;
            pts = next;
        }
        let points = pts.iter().map(|h| Vector2::new(h[0] / h[2], h[1] / h[2])).collect();
        let weights = pts.iter().map(|h| h[2]).collect();
        Self::new(kv, points, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(values: &[f64], p: usize) -> KnotVector {
        KnotVector::new(values.to_vec(), p).unwrap()
    }

    #[test]
    fn locate_inverts_the_map() {
        let patch = NurbsPatch::quarter_annulus(1.0, 2.0).unwrap().h_refine(2).unwrap();
        for &(xi, eta) in &[(0.1, 0.2), (0.77, 0.5), (0.5, 0.99)] {
            let x = patch.point(xi, eta).unwrap();
            let (el, s, t) = patch.locate(x).unwrap();
            let y = patch.element_map(&el, s, t).unwrap();
            assert!((x - y).norm() < 1e-12);
            assert!(s.abs() <= 1.0 && t.abs() <= 1.0);
        }
        assert!(patch.locate(Vector2::new(5.0, 5.0)).is_err());
    }

    #[test]
    fn find_span_examples() {
        let k = kv(&[0., 0., 0., 1., 1., 1.], 2);
        assert_eq!(k.find_span(0.0).unwrap(), 2);
        assert_eq!(k.find_span(1.0).unwrap(), 2);
        let k = kv(&[0., 0., 0., 0.5, 1., 1., 1.], 2);
        assert_eq!(k.find_span(0.7).unwrap(), 3);
        assert_eq!(k.find_span(0.5).unwrap(), 3);
        assert_eq!(k.find_span(0.2).unwrap(), 2);
    }

    #[test]
    fn find_span_rejects_out_of_range() {
        let k = kv(&[0., 0., 0., 1., 1., 1.], 2);
        assert!(matches!(k.find_span(1.5), Err(Error::Domain { .. })));
        assert!(matches!(k.find_span(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(k.find_span(f64::NAN), Err(Error::Domain { .. })));
    }

    #[test]
    fn invalid_knot_vectors() {
        assert!(KnotVector::new(vec![0., 0., 1., 1., 1.], 2).is_err());
        assert!(KnotVector::new(vec![0., 0., 0., 0.7, 0.5, 1., 1., 1.], 2).is_err());
        assert!(KnotVector::new(vec![0., 0., 0., 0., 0., 0.], 2).is_err());
        assert!(KnotVector::new(vec![0., 0., 0., 0.5, 0.5, 0.5, 1., 1., 1.], 2).is_err());
    }

    #[test]
    fn degenerate_span_is_reported() {
        let k = kv(&[0., 0., 0., 0.5, 0.5, 1., 1., 1.], 2);
        assert!(matches!(k.basis_on_span(3, 0.5, 1), Err(Error::DegenerateSpan(3))));
    }

    #[test]
    fn bernstein_midpoint() {
        let k = kv(&[0., 0., 0., 1., 1., 1.], 2);
        let b = k.basis_with_derivatives(0.5, 1).unwrap();
        let v = b.values();
        assert!((v[0] - 0.25).abs() < 1e-15);
        assert!((v[1] - 0.5).abs() < 1e-15);
        assert!((v[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let k = kv(&[0., 0., 0., 0.5, 1., 1., 1.], 2);
        let h = 1e-6;
        let b = k.basis_with_derivatives(0.3, 1).unwrap();
        let plus = k.basis_on_span(b.span, 0.3 + h, 0).unwrap();
        let minus = k.basis_on_span(b.span, 0.3 - h, 0).unwrap();
        for r in 0..3 {
            let fd = (plus.ders[0][r] - minus.ders[0][r]) / (2.0 * h);
            let d = b.ders[1][r];
            assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{fd} vs {d}");
        }
    }

    #[test]
    fn orders_above_degree_are_zero() {
        let k = kv(&[0., 0., 1., 1.], 1);
        let b = k.basis_with_derivatives(0.3, 3).unwrap();
        assert!(b.ders[2].iter().chain(&b.ders[3]).all(|v| *v == 0.0));
    }

    #[test]
    fn equal_weights_reduce_to_tensor_bsplines() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(1).unwrap();
        let sb = patch.surface_basis(0.3, 0.8).unwrap();
        let bx = patch.knots_xi().basis_with_derivatives(0.3, 0).unwrap();
        let by = patch.knots_eta().basis_with_derivatives(0.8, 0).unwrap();
        for b in 0..3 {
            for a in 0..3 {
                let r = sb.values[a + 3 * b];
                assert!((r - bx.ders[0][a] * by.ders[0][b]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bilinear_unit_square_is_identity() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 1, 1).unwrap();
        let m = patch.surface_map(0.3, 0.6).unwrap();
        assert!((m.point - Vector2::new(0.3, 0.6)).norm() < 1e-15);
        assert!((m.jacobian - Matrix2::identity()).norm() < 1e-15);
        let el = patch.elements()[0];
        let ep = patch.element_point(&el, 0.2, -0.4).unwrap();
        assert!((ep.jacobian - Matrix2::identity() * 0.5).norm() < 1e-15);
        assert!((ep.det - 0.25).abs() < 1e-15);
    }

    #[test]
    fn quarter_annulus_midpoint_on_arc() {
        let patch = NurbsPatch::quarter_annulus(1.0, 2.0).unwrap();
        for &(xi, r) in &[(0.0, 1.0), (1.0, 2.0), (0.5, 1.5)] {
            let m = patch.surface_map(xi, 0.5).unwrap();
            assert!((m.point.norm() - r).abs() < 1e-12);
        }
        let m = patch.surface_map(0.0, 0.5).unwrap();
        assert!((m.point.x - m.point.y).abs() < 1e-12);
    }

    #[test]
    fn refine_levels_zero_is_identity() {
        let patch = NurbsPatch::quarter_annulus(1.0, 2.0).unwrap();
        assert_eq!(patch.h_refine(0).unwrap(), patch);
    }

    #[test]
    fn refine_counts_elements() {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(4).unwrap();
        assert_eq!(patch.element_grid(), (16, 16));
        assert_eq!(patch.num_control_points(), 18 * 18);
    }

    #[test]
    fn inverted_patch_is_rejected() {
        let mut patch = NurbsPatch::rectangle(1.0, 1.0, 1, 1).unwrap();
        patch.points.swap(0, 1);
        patch.points.swap(2, 3);
        assert!(matches!(patch.surface_map(0.5, 0.5), Err(Error::InvertedElement { .. })));
    }

    #[test]
    fn bezier_curve_midpoint() {
        let c = NurbsCurve::quadratic_bezier(
            Vector2::new(0.0, 0.0),
            Vector2::new(0.2, 0.7),
            Vector2::new(1.0, 0.4),
        );
        let m = c.evaluate(0.5).unwrap().point;
        let expect = Vector2::new(0.0, 0.0) * 0.25 + Vector2::new(0.2, 0.7) * 0.5 + Vector2::new(1.0, 0.4) * 0.25;
        assert!((m - expect).norm() < 1e-15);
        let r = c.h_refine(3).unwrap();
        for u in [0.1, 0.37, 0.5, 0.93] {
            let a = c.evaluate(u).unwrap();
            let b = r.evaluate(u).unwrap();
            assert!((a.point - b.point).norm() < 1e-14);
            assert!((a.tangent - b.tangent).norm() < 1e-12);
        }
    }
}
