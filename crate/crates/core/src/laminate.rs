//! Laminate constitutive matrices for first-order shear deformation theory.
//!
//! Strain ordering everywhere is `(eps_x, eps_y, gamma_xy, kappa_x, kappa_y,
//! kappa_xy, gamma_xz, gamma_yz)`, so the transverse shear block of
//! [`ConstitutiveSet::dp`] is ordered `(xz, yz)`.

use nalgebra::{Matrix2, Matrix3, SMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default transverse shear correction factor.
pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

/// One orthotropic lamina. `theta` is the fibre angle from the x axis in
/// radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ply {
    pub e_l: f64,
    pub e_t: f64,
    pub g_lt: f64,
    pub g_tt: f64,
    pub nu_lt: f64,
    pub nu_tt: f64,
    pub alpha_l: f64,
    pub alpha_t: f64,
    pub theta: f64,
    pub thickness: f64,
}

impl Ply {
    pub fn isotropic(e: f64, nu: f64, alpha: f64, thickness: f64) -> Self {
        let g = e / (2.0 * (1.0 + nu));
        Self {
            e_l: e,
            e_t: e,
            g_lt: g,
            g_tt: g,
            nu_lt: nu,
            nu_tt: nu,
            alpha_l: alpha,
            alpha_t: alpha,
            theta: 0.0,
            thickness,
        }
    }

    pub fn with_angle(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_thickness(mut self, thickness: f64) -> Self {
        self.thickness = thickness;
        self
    }

    /// Minor Poisson ratio `nu_TL = nu_LT * E_T / E_L`.
    pub fn nu_tl(&self) -> f64 {
        self.nu_lt * self.e_t / self.e_l
    }

    pub fn validate(&self) -> Result<()> {
        let moduli = [self.e_l, self.e_t, self.g_lt, self.g_tt];
        if moduli.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidPly(format!("moduli must be positive: {moduli:?}")));
        }
        if !(self.thickness > 0.0) || !self.thickness.is_finite() {
            return Err(Error::InvalidPly(format!("thickness {} must be positive", self.thickness)));
        }
        if !self.theta.is_finite() || !self.alpha_l.is_finite() || !self.alpha_t.is_finite() {
            return Err(Error::InvalidPly("non-finite angle or expansion coefficient".into()));
        }
        Ok(())
    }
}

/// Plane-stress reduced stiffnesses in material axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedStiffness {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    pub q66: f64,
    /// Transverse shear, 2-3 plane.
    pub q44: f64,
    /// Transverse shear, 1-3 plane.
    pub q55: f64,
}

/// Reduced stiffnesses rotated to plate axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedStiffness {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    pub q16: f64,
    pub q26: f64,
    pub q66: f64,
    pub q44: f64,
    pub q45: f64,
    pub q55: f64,
}

impl TransformedStiffness {
    /// In-plane block in `(x, y, xy)` ordering.
    pub fn membrane(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.q11, self.q12, self.q16, //
            self.q12, self.q22, self.q26, //
            self.q16, self.q26, self.q66,
        )
    }

    /// Transverse shear block in `(xz, yz)` ordering.
    pub fn shear(&self) -> Matrix2<f64> {
        Matrix2::new(self.q55, self.q45, self.q45, self.q44)
    }
}

pub fn reduced_stiffness(ply: &Ply) -> Result<ReducedStiffness> {
    ply.validate()?;
    let denom = 1.0 - ply.nu_lt * ply.nu_tl();
    if !(denom > 0.0) {
        return Err(Error::MaterialInstability(denom));
    }
    let q11 = ply.e_l / denom;
    let q22 = ply.e_t / denom;
    Ok(ReducedStiffness {
        q11,
        q12: ply.nu_lt * q22,
        q22,
        q66: ply.g_lt,
        q44: ply.g_tt,
        q55: ply.g_lt,
    })
}

pub fn transformed_stiffness(q: &ReducedStiffness, theta: f64) -> TransformedStiffness {
    let (s, c) = theta.sin_cos();
    let (c2, s2) = (c * c, s * s);
    let (c4, s4, c2s2) = (c2 * c2, s2 * s2, c2 * s2);
    let (c3s, cs3) = (c2 * c * s, c * s2 * s);
    let cs = c * s;
    TransformedStiffness {
        q11: c4 * q.q11 + 2.0 * c2s2 * q.q12 + s4 * q.q22 + 4.0 * c2s2 * q.q66,
        q12: c2s2 * q.q11 + (c4 + s4) * q.q12 + c2s2 * q.q22 - 4.0 * c2s2 * q.q66,
        q22: s4 * q.q11 + 2.0 * c2s2 * q.q12 + c4 * q.q22 + 4.0 * c2s2 * q.q66,
        q16: c3s * q.q11 + cs * (s2 - c2) * q.q12 - cs3 * q.q22 + 2.0 * cs * (s2 - c2) * q.q66,
        q26: cs3 * q.q11 + cs * (c2 - s2) * q.q12 - c3s * q.q22 + 2.0 * cs * (c2 - s2) * q.q66,
        q66: c2s2 * q.q11 - 2.0 * c2s2 * q.q12 + c2s2 * q.q22 + (c2 - s2).powi(2) * q.q66,
        q44: c2 * q.q44 + s2 * q.q55,
        q45: -cs * q.q44 + cs * q.q55,
        q55: s2 * q.q44 + c2 * q.q55,
    }
}

/// Thermal expansion in plate axes `(alpha_x, alpha_y, alpha_xy)`, with
/// engineering shear.
pub fn transformed_alpha(alpha_l: f64, alpha_t: f64, theta: f64) -> Vector3<f64> {
    let (s, c) = theta.sin_cos();
    Vector3::new(
        c * c * alpha_l + s * s * alpha_t,
        s * s * alpha_l + c * c * alpha_t,
        2.0 * c * s * (alpha_l - alpha_t),
    )
}

/// Plies listed bottom to top, centred on the mid-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaminateStack {
    plies: Vec<Ply>,
}

impl LaminateStack {
    pub fn new(plies: Vec<Ply>) -> Result<Self> {
        if plies.is_empty() {
            return Err(Error::EmptyStack);
        }
        for ply in &plies {
            ply.validate()?;
        }
        Ok(Self { plies })
    }

    /// Equal-thickness plies of one material at the given angles (radians).
    pub fn from_angles(base: Ply, angles: &[f64], total_thickness: f64) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::EmptyStack);
        }
        let t = total_thickness / angles.len() as f64;
        Self::new(angles.iter().map(|&a| base.with_angle(a).with_thickness(t)).collect())
    }

    pub fn plies(&self) -> &[Ply] {
        &self.plies
    }

    pub fn thickness(&self) -> f64 {
        self.plies.iter().map(|p| p.thickness).sum()
    }

    /// Ply interface coordinates `z_0 = -h/2 < ... < z_n = h/2`.
    ///
    /// Built from a bottom-up and a top-down running sum so that mirrored
    /// layups give exactly mirrored interfaces.
    pub fn interfaces(&self) -> Vec<f64> {
        let n = self.plies.len();
        let mut below = vec![0.0; n + 1];
        let mut above = vec![0.0; n + 1];
        for k in 0..n {
            below[k + 1] = below[k] + self.plies[k].thickness;
            above[n - k - 1] = above[n - k] + self.plies[n - k - 1].thickness;
        }
        (0..=n).map(|k| 0.5 * (below[k] - above[k])).collect()
    }

    /// Copy with every modulus multiplied by `factor`.
    pub fn scale_moduli(&self, factor: f64) -> Self {
        Self {
            plies: self
                .plies
                .iter()
                .map(|p| Ply {
                    e_l: p.e_l * factor,
                    e_t: p.e_t * factor,
                    g_lt: p.g_lt * factor,
                    g_tt: p.g_tt * factor,
                    ..*p
                })
                .collect(),
        }
    }

    /// Copy with both expansion coefficients multiplied by `factor`.
    pub fn scale_alpha(&self, factor: f64) -> Self {
        Self {
            plies: self
                .plies
                .iter()
                .map(|p| Ply {
                    alpha_l: p.alpha_l * factor,
                    alpha_t: p.alpha_t * factor,
                    ..*p
                })
                .collect(),
        }
    }
}

/// Thickness-integrated FSDT constitutive data.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstitutiveSet {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub d: Matrix3<f64>,
    /// Shear stiffness in `(xz, yz)` ordering, including the correction factor.
    pub a_s: Matrix2<f64>,
    /// `[A B 0; B D 0; 0 0 A_s]`.
    pub dp: SMatrix<f64, 8, 8>,
    /// Thermal force resultant per unit temperature rise.
    pub n_t: Vector3<f64>,
    /// Thermal moment resultant per unit temperature rise.
    pub m_t: Vector3<f64>,
    pub thickness: f64,
}

impl ConstitutiveSet {
    /// Generalized thermal resultant `[N_T; M_T; 0; 0]` for a temperature rise.
    pub fn thermal_resultant(&self, delta_t: f64) -> SMatrix<f64, 8, 1> {
        let mut r = SMatrix::<f64, 8, 1>::zeros();
        r.fixed_rows_mut::<3>(0).copy_from(&(self.n_t * delta_t));
        r.fixed_rows_mut::<3>(3).copy_from(&(self.m_t * delta_t));
        r
    }
}

pub fn constitutive_set(stack: &LaminateStack, shear_correction: f64) -> Result<ConstitutiveSet> {
    if stack.plies.is_empty() {
        return Err(Error::EmptyStack);
    }
    let z = stack.interfaces();
    let n = stack.plies.len();
    let mut a = Matrix3::zeros();
    let mut b = Matrix3::zeros();
    let mut d = Matrix3::zeros();
    let mut a_s = Matrix2::zeros();
    let mut n_t = Vector3::zeros();
    let mut m_t = Vector3::zeros();
    // plies are visited in mirrored pairs (outermost first) so odd moments of
    // symmetric layups cancel exactly
    let mut order = Vec::with_capacity(n);
    for k in 0..n.div_ceil(2) {
        order.push(k);
        if n - 1 - k != k {
            order.push(n - 1 - k);
        }
    }
    for pair in order.chunks(2) {
        let mut pb = Matrix3::zeros();
        let mut pm = Vector3::zeros();
        for &k in pair {
            let ply = &stack.plies[k];
            let (z0, z1) = (z[k], z[k + 1]);
            let qbar = transformed_stiffness(&reduced_stiffness(ply)?, ply.theta);
            let qm = qbar.membrane();
            let d1 = z1 - z0;
            let d2 = 0.5 * (z1 * z1 - z0 * z0);
            let d3 = (z1.powi(3) - z0.powi(3)) / 3.0;
            a += qm * d1;
            pb += qm * d2;
            d += qm * d3;
            a_s += qbar.shear() * d1;
            let q_alpha = qm * transformed_alpha(ply.alpha_l, ply.alpha_t, ply.theta);
            n_t += q_alpha * d1;
            pm += q_alpha * d2;
        }
        b += pb;
        m_t += pm;
    }
    a_s *= shear_correction;
    let mut dp = SMatrix::<f64, 8, 8>::zeros();
    dp.fixed_view_mut::<3, 3>(0, 0).copy_from(&a);
    dp.fixed_view_mut::<3, 3>(0, 3).copy_from(&b);
    dp.fixed_view_mut::<3, 3>(3, 0).copy_from(&b);
    dp.fixed_view_mut::<3, 3>(3, 3).copy_from(&d);
    dp.fixed_view_mut::<2, 2>(6, 6).copy_from(&a_s);
    Ok(ConstitutiveSet {
        a,
        b,
        d,
        a_s,
        dp,
        n_t,
        m_t,
        thickness: stack.thickness(),
    })
}

/// Lamina in the normalized composite set: `E_L/E_T = 15`, `G_LT/E_T = 0.5`,
/// `G_TT/E_T = 0.3356`, `nu_LT = 0.3`, `nu_TT = 0.49`, `alpha_L/alpha_0 =
/// 0.015`, `alpha_T/alpha_0 = 1`, with `E_T = alpha_0 = 1`.
pub fn normalized_composite_ply() -> Ply {
    Ply {
        e_l: 15.0,
        e_t: 1.0,
        g_lt: 0.5,
        g_tt: 0.3356,
        nu_lt: 0.3,
        nu_tt: 0.49,
        alpha_l: 0.015,
        alpha_t: 1.0,
        theta: 0.0,
        thickness: 1.0,
    }
}
