//! Model description file: JSON with a versioned top level, angles in
//! degrees and lengths in plate units.

use std::path::Path;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};
use crate::geometry::NurbsPatch;
use crate::laminate::{constitutive_set, normalized_composite_ply, ConstitutiveSet, LaminateStack, Ply, SHEAR_CORRECTION};
use crate::levelset::{union_of, LevelSetShape};
use crate::solver::{BoundaryConditionSet, EigenOptions, Normalization, QuadratureOptions};
use crate::stiffener::{parabola_path, section_from_ratios, StiffenerMaterial, StiffenerPath, StiffenerSection};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub plate: PlateConfig,
    /// Joined into one union when more than one is given.
    #[serde(default)]
    pub cutouts: Vec<CutoutSpec>,
    #[serde(default)]
    pub stiffeners: Vec<StiffenerSpec>,
    pub boundary: BoundaryConditionSet,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateConfig {
    #[serde(default = "unit")]
    pub width: f64,
    #[serde(default = "unit")]
    pub height: f64,
    #[serde(default = "quadratic")]
    pub degree: usize,
    /// `2^refinement` elements per side.
    pub refinement: usize,
    pub thickness: f64,
    pub material: MaterialSpec,
    /// Ply angles bottom to top, degrees; equal ply thickness.
    pub layup_deg: Vec<f64>,
}

fn unit() -> f64 {
    1.0
}

fn quadratic() -> usize {
    2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialSpec {
    /// `E_L/E_T = 15` composite set with `E_T = alpha_0 = 1`.
    NormalizedComposite,
    Isotropic {
        e: f64,
        nu: f64,
        alpha: f64,
    },
    Orthotropic {
        e_l: f64,
        e_t: f64,
        g_lt: f64,
        g_tt: f64,
        nu_lt: f64,
        nu_tt: f64,
        alpha_l: f64,
        alpha_t: f64,
    },
}

impl MaterialSpec {
    /// Lamina with unit thickness and zero angle.
    pub fn ply(&self) -> Ply {
        match *self {
            Self::NormalizedComposite => normalized_composite_ply(),
            Self::Isotropic { e, nu, alpha } => Ply::isotropic(e, nu, alpha, 1.0),
            Self::Orthotropic {
                e_l,
                e_t,
                g_lt,
                g_tt,
                nu_lt,
                nu_tt,
                alpha_l,
                alpha_t,
            } => Ply {
                e_l,
                e_t,
                g_lt,
                g_tt,
                nu_lt,
                nu_tt,
                alpha_l,
                alpha_t,
                theta: 0.0,
                thickness: 1.0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CutoutSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        semi_major: f64,
        semi_minor: f64,
        /// Major-axis angle from the x axis.
        #[serde(default)]
        theta_deg: f64,
    },
    /// Three overlapping circles of radius 0.15.
    Clover,
    Union {
        shapes: Vec<CutoutSpec>,
    },
}

impl CutoutSpec {
    pub fn to_shape(&self) -> LevelSetShape {
        match self {
            Self::Circle { center, radius } => LevelSetShape::circle(*center, *radius),
            Self::Ellipse {
                center,
                semi_major,
                semi_minor,
                theta_deg,
            } => LevelSetShape::ellipse(*center, *semi_major, *semi_minor, theta_deg.to_radians()),
            Self::Clover => LevelSetShape::clover(),
            Self::Union { shapes } => LevelSetShape::Union {
                shapes: shapes.iter().map(Self::to_shape).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiffenerSpec {
    pub start: [f64; 2],
    pub end: [f64; 2],
    #[serde(default)]
    pub delta_eps: f64,
    pub delta_dist: f64,
    /// `E_s I / (b D11)`.
    pub gamma: f64,
    /// `A_s / (b t)`.
    pub delta: f64,
    /// Curve h-refinement level; two stations per span.
    #[serde(default = "stiffener_refinement")]
    pub refinement: usize,
    /// Defaults to `E = E_T`, `nu = nu_LT`, `alpha = alpha_T` of the plate.
    #[serde(default)]
    pub material: Option<StiffenerMaterial>,
}

fn stiffener_refinement() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    #[serde(default = "five")]
    pub n_modes: usize,
    #[serde(default = "unit")]
    pub delta_t_ref: f64,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub quadrature: QuadratureOptions,
    #[serde(default)]
    pub eigen: EigenConfig,
}

fn five() -> usize {
    5
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            n_modes: 5,
            delta_t_ref: 1.0,
            normalization: Normalization::Identity,
            quadrature: QuadratureOptions::default(),
            eigen: EigenConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        let o = EigenOptions::default();
        Self {
            tolerance: o.tolerance,
            max_iterations: o.max_iterations,
            seed: o.seed,
        }
    }
}

impl EigenConfig {
    pub fn options(&self) -> EigenOptions {
        EigenOptions {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            seed: self.seed,
            force_iterative: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeFormat {
    Csv,
    Vtk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    /// Samples per side of the parametric grid for mode export.
    #[serde(default = "grid")]
    pub mode_grid: usize,
    #[serde(default = "formats")]
    pub formats: Vec<ModeFormat>,
}

fn grid() -> usize {
    101
}

fn formats() -> Vec<ModeFormat> {
    vec![ModeFormat::Csv, ModeFormat::Vtk]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            mode_grid: grid(),
            formats: formats(),
        }
    }
}

impl ModelConfig {
    /// Clamped unit square of the normalized composite, no cutout.
    pub fn composite_plate(refinement: usize, thickness: f64, layup_deg: &[f64]) -> Self {
        Self {
            version: CONFIG_VERSION,
            name: String::new(),
            plate: PlateConfig {
                width: 1.0,
                height: 1.0,
                degree: 2,
                refinement,
                thickness,
                material: MaterialSpec::NormalizedComposite,
                layup_deg: layup_deg.to_vec(),
            },
            cutouts: vec![],
            stiffeners: vec![],
            boundary: BoundaryConditionSet::Clamped,
            analysis: AnalysisConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn patch(&self) -> Result<NurbsPatch> {
        let p = &self.plate;
        NurbsPatch::rectangle(p.width, p.height, p.degree, p.degree)?.h_refine(p.refinement)
    }

    pub fn stack(&self) -> Result<LaminateStack> {
        let p = &self.plate;
        let angles: Vec<f64> = p.layup_deg.iter().map(|a| a.to_radians()).collect();
        LaminateStack::from_angles(p.material.ply(), &angles, p.thickness)
    }

    pub fn constitutive(&self) -> Result<ConstitutiveSet> {
        constitutive_set(&self.stack()?, SHEAR_CORRECTION)
    }

    pub fn cutout(&self) -> Option<LevelSetShape> {
        let shapes: Vec<LevelSetShape> = self.cutouts.iter().map(CutoutSpec::to_shape).collect();
        union_of(&shapes)
    }

    pub fn stiffener_material(&self, spec: &StiffenerSpec) -> StiffenerMaterial {
        spec.material.unwrap_or_else(|| {
            let ply = self.plate.material.ply();
            StiffenerMaterial {
                e: ply.e_t,
                nu: ply.nu_lt,
                alpha: ply.alpha_t,
            }
        })
    }

    pub fn stiffener_path(&self, spec: &StiffenerSpec) -> Result<StiffenerPath> {
        parabola_path(
            Vector2::from(spec.start),
            Vector2::from(spec.end),
            spec.delta_eps,
            spec.delta_dist,
        )
    }

    pub fn stiffener_section(&self, spec: &StiffenerSpec, cs: &ConstitutiveSet) -> Result<StiffenerSection> {
        section_from_ratios(
            spec.gamma,
            spec.delta,
            self.plate.thickness,
            self.plate.width,
            cs.d[(0, 0)],
            self.stiffener_material(spec).e,
        )
    }

    /// Every semantic problem in the config, each tagged with its path.
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errs = Vec::new();
        let cs = self.constitutive().ok();
        let mut push = |path: String, message: String| errs.push(FieldError { path, message });
        if self.version != CONFIG_VERSION {
            push("version".into(), format!("unsupported version {}, expected {CONFIG_VERSION}", self.version));
        }
        let p = &self.plate;
        for (name, v) in [("width", p.width), ("height", p.height), ("thickness", p.thickness)] {
            if !(v.is_finite() && v > 0.0) {
                push(format!("plate.{name}"), format!("must be positive, got {v}"));
            }
        }
        if !(1..=4).contains(&p.degree) {
            push("plate.degree".into(), format!("must be in 1..=4, got {}", p.degree));
        }
        if !(1..=8).contains(&p.refinement) {
            push("plate.refinement".into(), format!("must be in 1..=8, got {}", p.refinement));
        }
        if p.layup_deg.is_empty() {
            push("plate.layup_deg".into(), "needs at least one ply".into());
        }
        for (i, a) in p.layup_deg.iter().enumerate() {
            if !a.is_finite() {
                push(format!("plate.layup_deg[{i}]"), format!("angle must be finite, got {a}"));
            }
        }
        let mut ply = p.material.ply();
        ply.thickness = 1.0;
        if let Err(e) = ply.validate() {
            push("plate.material".into(), e.to_string());
        }
        let inside = |x: [f64; 2]| x[0] >= 0.0 && x[0] <= p.width && x[1] >= 0.0 && x[1] <= p.height;
        for (i, c) in self.cutouts.iter().enumerate() {
            let shape = c.to_shape();
            if let Err(e) = shape.validate() {
                push(format!("cutouts[{i}]"), e.to_string());
                continue;
            }
            let (lo, hi) = shape.bounding_box();
            if !inside([lo.x, lo.y]) || !inside([hi.x, hi.y]) {
                push(format!("cutouts[{i}]"), "cutout must lie inside the plate".into());
            }
        }
        let cutout = self.cutout().filter(|s| s.validate().is_ok());
        for (i, s) in self.stiffeners.iter().enumerate() {
            let base = format!("stiffeners[{i}]");
            for (name, x) in [("start", s.start), ("end", s.end)] {
                if !inside(x) {
                    push(format!("{base}.{name}"), format!("point {x:?} is outside the plate"));
                }
            }
            for (name, v) in [("gamma", s.gamma), ("delta", s.delta)] {
                if !(v.is_finite() && v > 0.0) {
                    push(format!("{base}.{name}"), format!("must be positive, got {v}"));
                }
            }
            if !(s.delta_eps.is_finite() && s.delta_eps >= 0.0) {
                push(format!("{base}.delta_eps"), format!("must be non-negative, got {}", s.delta_eps));
            }
            if s.refinement > 10 {
                push(format!("{base}.refinement"), format!("must be at most 10, got {}", s.refinement));
            }
            if let Some(m) = &s.material {
                if !(m.e > 0.0 && m.nu > -1.0 && m.nu < 0.5 && m.alpha.is_finite()) {
                    push(format!("{base}.material"), "needs E > 0, -1 < nu < 0.5, finite alpha".into());
                }
            }
            match self.stiffener_path(s) {
                Err(e) => push(base.clone(), e.to_string()),
                Ok(path) => {
                    for k in 0..=200 {
                        let Ok(cp) = path.curve.evaluate(k as f64 / 200.0) else { continue };
                        let x = [cp.point.x, cp.point.y];
                        if !inside(x) {
                            push(base.clone(), format!("path leaves the plate near ({:.3}, {:.3})", x[0], x[1]));
                            break;
                        }
                        if cutout.as_ref().is_some_and(|c| c.signed_distance(cp.point) < 0.0) {
                            push(base.clone(), format!("path crosses the cutout near ({:.3}, {:.3})", x[0], x[1]));
                            break;
                        }
                    }
                }
            }
            if let Some(cs) = &cs {
                if let Err(e) = self.stiffener_section(s, cs) {
                    push(base.clone(), e.to_string());
                }
            }
        }
        let a = &self.analysis;
        if a.n_modes == 0 {
            push("analysis.n_modes".into(), "must be at least 1".into());
        }
        if !(a.delta_t_ref.is_finite() && a.delta_t_ref != 0.0) {
            push("analysis.delta_t_ref".into(), format!("must be finite and non-zero, got {}", a.delta_t_ref));
        }
        if let Normalization::AlphaScaled { alpha0, factor } = a.normalization {
            if !(alpha0 > 0.0 && factor > 0.0) {
                push("analysis.normalization".into(), "alpha0 and factor must be positive".into());
            }
        }
        if !matches!(a.quadrature.triangle_points, 3 | 7) {
            push(
                "analysis.quadrature.triangle_points".into(),
                format!("must be 3 or 7, got {}", a.quadrature.triangle_points),
            );
        }
        if a.quadrature.gauss_points.is_some_and(|n| !(1..=20).contains(&n)) {
            push("analysis.quadrature.gauss_points".into(), "must be in 1..=20".into());
        }
        if !(a.eigen.tolerance > 0.0) || a.eigen.max_iterations == 0 {
            push("analysis.eigen".into(), "tolerance and max_iterations must be positive".into());
        }
        if self.output.mode_grid < 2 {
            push("output.mode_grid".into(), format!("must be at least 2, got {}", self.output.mode_grid));
        }
        errs
    }
}

/// Parses and validates, reporting unknown keys, the first structural error
/// and every semantic error together.
pub fn parse_config(text: &str) -> Result<ModelConfig> {
    let mut errs = Vec::new();
    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let mut record = |path: serde_ignored::Path| unknown.push(path.to_string());
    let ignored = serde_ignored::Deserializer::new(&mut de, &mut record);
    let parsed: std::result::Result<ModelConfig, _> = serde_path_to_error::deserialize(ignored);
    let trailing = de.end().err();
    for path in unknown {
        errs.push(FieldError {
            path,
            message: "unknown key".into(),
        });
    }
    if let Some(e) = trailing {
        errs.push(FieldError {
            path: "(root)".into(),
            message: e.to_string(),
        });
    }
    match parsed {
        Ok(cfg) => {
            errs.extend(cfg.validate());
            if errs.is_empty() {
                Ok(cfg)
            } else {
                Err(Error::Validation(errs))
            }
        }
        Err(e) => {
            let path = e.path().to_string();
            errs.push(FieldError {
                path: if path == "." { "(root)".into() } else { path },
                message: e.into_inner().to_string(),
            });
            Err(Error::Validation(errs))
        }
    }
}

pub fn load_config(path: &Path) -> Result<ModelConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
