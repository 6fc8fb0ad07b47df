//! Orchestration: model assembly from a config, buckling runs, result
//! tables, mode export and parameter sweeps.

mod config;
mod export;
mod sweep;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use config::{
    load_config, parse_config, AnalysisConfig, CutoutSpec, EigenConfig, MaterialSpec, ModeFormat, ModelConfig,
    OutputConfig, PlateConfig, StiffenerSpec, CONFIG_VERSION,
};
pub use export::{export_modes, read_mode_csv, sample_mode, ModeField};
pub use sweep::{sweep, SweepAxis};

use crate::error::{Error, Result};
use crate::laminate::ConstitutiveSet;
use crate::solver::{discretize, normalized_critical_temperature, run_buckling, BucklingAnalysis, Discretization};
use crate::stiffener::Stiffener;

/// Everything needed to solve one configuration.
#[derive(Debug, Clone)]
pub struct Model {
    pub config: ModelConfig,
    pub discretization: Discretization,
    pub constitutive: ConstitutiveSet,
    pub stiffeners: Vec<Stiffener>,
}

pub fn build_model(config: &ModelConfig) -> Result<Model> {
    let errs = config.validate();
    if !errs.is_empty() {
        return Err(Error::Validation(errs));
    }
    let constitutive = config.constitutive()?;
    let disc = discretize(config.patch()?, config.cutout(), &config.analysis.quadrature)?;
    let mut stiffeners = Vec::with_capacity(config.stiffeners.len());
    for (i, spec) in config.stiffeners.iter().enumerate() {
        let build = || {
            let path = config.stiffener_path(spec)?;
            let section = config.stiffener_section(spec, &constitutive)?;
            Stiffener::build(
                &disc.patch,
                &path,
                section,
                config.stiffener_material(spec),
                spec.refinement,
                disc.cutout.as_ref(),
                &|e| disc.enrichment(e),
            )
        };
        stiffeners.push(build().map_err(|e| e.with_context(format!("stiffener {i}")))?);
    }
    Ok(Model {
        config: config.clone(),
        discretization: disc,
        constitutive,
        stiffeners,
    })
}

/// One solved case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub case: String,
    /// Swept parameter value, if any.
    pub parameter: Option<f64>,
    /// Normalized critical temperature; empty when no mode buckles.
    pub lambda_star: Option<f64>,
    pub delta_t_cr: Option<f64>,
    pub n_modes: usize,
    pub n_dof: usize,
    pub extra_dof: usize,
    pub n_free: usize,
    pub static_seconds: f64,
    pub eigen_seconds: f64,
    /// `ok` or the failure message.
    pub status: String,
}

impl ResultRow {
    pub fn failed(case: impl Into<String>, parameter: Option<f64>, error: &Error) -> Self {
        Self {
            case: case.into(),
            parameter,
            lambda_star: None,
            delta_t_cr: None,
            n_modes: 0,
            n_dof: 0,
            extra_dof: 0,
            n_free: 0,
            static_seconds: 0.0,
            eigen_seconds: 0.0,
            status: format!("error: {error}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Rows in insertion order, written as CSV with the field order of
/// [`ResultRow`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = csv::Writer::from_writer(file);
        if self.rows.is_empty() {
            w.write_record(Self::header())?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
        Ok(Self { rows })
    }

    pub fn header() -> [&'static str; 11] {
        [
            "case",
            "parameter",
            "lambda_star",
            "delta_t_cr",
            "n_modes",
            "n_dof",
            "extra_dof",
            "n_free",
            "static_seconds",
            "eigen_seconds",
            "status",
        ]
    }
}

/// A solved model.
#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub model: Model,
    pub analysis: BucklingAnalysis,
    pub row: ResultRow,
}

impl AnalysisOutput {
    /// `(mode, lambda, lambda_star)` for every extracted mode.
    pub fn eigenvalues(&self) -> Vec<(usize, f64, f64)> {
        let f = self.model.config.analysis.normalization.factor();
        let dt = self.analysis.solution.delta_t_ref;
        self.analysis
            .solution
            .lambdas
            .iter()
            .enumerate()
            .map(|(i, &l)| (i + 1, l, l * dt * f))
            .collect()
    }

    pub fn write_eigenvalues(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["mode", "lambda", "lambda_star"])?;
        for (m, l, s) in self.eigenvalues() {
            w.write_record([m.to_string(), l.to_string(), s.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

pub fn run_analysis(config: &ModelConfig) -> Result<AnalysisOutput> {
    run_case(config, None)
}

fn run_case(config: &ModelConfig, parameter: Option<f64>) -> Result<AnalysisOutput> {
    let case = if config.name.is_empty() { "case".to_string() } else { config.name.clone() };
    let wrap = |e: Error| e.with_context(format!("case '{case}'"));
    let model = build_model(config).map_err(wrap)?;
    let a = &config.analysis;
    let analysis = run_buckling(
        &model.discretization,
        &model.constitutive,
        &model.stiffeners,
        &config.boundary,
        a.delta_t_ref,
        a.n_modes,
        &a.eigen.options(),
    )
    .map_err(wrap)?;
    let row = ResultRow {
        case,
        parameter,
        lambda_star: normalized_critical_temperature(&analysis.solution, &a.normalization),
        delta_t_cr: analysis.solution.critical_temperature(),
        n_modes: analysis.solution.lambdas.len(),
        n_dof: analysis.n_dof,
        extra_dof: analysis.extra_dof,
        n_free: analysis.n_free,
        static_seconds: analysis.static_seconds,
        eigen_seconds: analysis.eigen_seconds,
        status: "ok".into(),
    };
    Ok(AnalysisOutput { model, analysis, row })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::BoundaryConditionSet;

    #[test]
    fn plain_plate_has_no_extra_dofs() {
        let cfg = ModelConfig::composite_plate(2, 0.1, &[0.0, 90.0, 90.0, 0.0]);
        let out = run_analysis(&cfg).unwrap();
        assert_eq!(out.row.extra_dof, 0);
        assert_eq!(out.row.n_dof, 6 * 6 * 5);
        assert!(out.row.lambda_star.unwrap() > 0.0);
        assert_eq!(out.eigenvalues().len(), 5);
    }

    #[test]
    fn invalid_config_is_validation_error() {
        let mut cfg = ModelConfig::composite_plate(2, 0.1, &[0.0]);
        cfg.plate.thickness = 0.0;
        let err = run_analysis(&cfg).unwrap_err();
        assert!(matches!(err.root(), Error::Validation(_)));
    }

    #[test]
    fn results_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ModelConfig::composite_plate(1, 0.1, &[0.0, 90.0]);
        cfg.boundary = BoundaryConditionSet::SimplySupported;
        let table = ResultsTable {
            rows: vec![
                run_analysis(&cfg).unwrap().row,
                ResultRow::failed("bad", Some(0.5), &Error::Configuration("x".into())),
            ],
        };
        let path = dir.path().join("r.csv");
        table.write_csv(&path).unwrap();
        assert_eq!(ResultsTable::read_csv(&path).unwrap(), table);
        let head = std::fs::read_to_string(&path).unwrap();
        assert!(head.starts_with(&ResultsTable::header().join(",")));
    }
}
