//! One-parameter studies over a base configuration.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{CutoutSpec, ModelConfig};
use super::{run_case, ResultRow, ResultsTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Radius of the first cutout (a circle); 0 removes it.
    Radius,
    /// Orientation of the first cutout (an ellipse), degrees.
    Theta,
    Refinement,
    /// Curve refinement of every stiffener.
    StiffenerRefinement,
    /// Stiffness ratio of every stiffener.
    Gamma,
    /// End offset of every stiffener.
    DeltaEps,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "radius" => Self::Radius,
            "theta" => Self::Theta,
            "refinement" => Self::Refinement,
            "stiffener-refinement" | "stiffener_refinement" => Self::StiffenerRefinement,
            "gamma" => Self::Gamma,
            "delta-eps" | "delta_eps" => Self::DeltaEps,
            other => {
                return Err(Error::Configuration(format!(
                    "unknown sweep axis '{other}' (radius, theta, refinement, stiffener-refinement, gamma, delta-eps)"
                )))
            }
        })
    }
}

impl SweepAxis {
    /// Copy of `base` with the axis set to `value`.
    pub fn apply(self, base: &ModelConfig, value: f64) -> Result<ModelConfig> {
        let mut c = base.clone();
        let level = |v: f64| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Configuration(format!("refinement must be a non-negative integer, got {v}")))
            }
        };
        match self {
            Self::Radius => match c.cutouts.first_mut() {
                Some(CutoutSpec::Circle { radius, .. }) => {
                    if value == 0.0 {
                        c.cutouts.remove(0);
                    } else {
                        *radius = value;
                    }
                }
                _ => return Err(Error::Configuration("radius sweep needs a circular first cutout".into())),
            },
            Self::Theta => match c.cutouts.first_mut() {
                Some(CutoutSpec::Ellipse { theta_deg, .. }) => *theta_deg = value,
                _ => return Err(Error::Configuration("theta sweep needs an elliptical first cutout".into())),
            },
            Self::Refinement => c.plate.refinement = level(value)?,
            Self::StiffenerRefinement => {
                let l = level(value)?;
                c.stiffeners.iter_mut().for_each(|s| s.refinement = l);
            }
            Self::Gamma => c.stiffeners.iter_mut().for_each(|s| s.gamma = value),
            Self::DeltaEps => c.stiffeners.iter_mut().for_each(|s| s.delta_eps = value),
        }
        if matches!(self, Self::StiffenerRefinement | Self::Gamma | Self::DeltaEps) && c.stiffeners.is_empty() {
            return Err(Error::Configuration(format!("{self:?} sweep needs at least one stiffener")));
        }
        Ok(c)
    }
}

/// Runs every value in order; failed points become rows with an error
/// status and the sweep continues.
pub fn sweep(base: &ModelConfig, axis: SweepAxis, values: &[f64]) -> ResultsTable {
    let case = if base.name.is_empty() { "sweep" } else { base.name.as_str() };
    let rows = values
        .iter()
        .map(|&v| {
            let label = format!("{case}:{axis:?}={v}");
            let result = axis.apply(base, v).and_then(|mut c| {
                c.name = label.clone();
                run_case(&c, Some(v))
            });
            match result {
                Ok(out) => out.row,
                Err(e) => {
                    log::warn!("sweep point {label} failed: {e}");
                    ResultRow::failed(label, Some(v), &e)
                }
            }
        })
        .collect();
    ResultsTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelConfig {
        let mut c = ModelConfig::composite_plate(2, 0.1, &[0.0, 90.0, 90.0, 0.0]);
        c.cutouts.push(CutoutSpec::Circle {
            center: [0.5, 0.5],
            radius: 0.1,
        });
        c.analysis.n_modes = 1;
        c
    }

    #[test]
    fn empty_axis_gives_empty_table() {
        assert!(sweep(&base(), SweepAxis::Radius, &[]).rows.is_empty());
    }

    #[test]
    fn rows_follow_axis_order_and_failures_are_kept() {
        let t = sweep(&base(), SweepAxis::Radius, &[0.0, 0.1, 0.9]);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0].extra_dof, 0);
        assert!(t.rows[1].is_ok() && t.rows[1].extra_dof > 0);
        assert!(!t.rows[2].is_ok());
        assert_eq!(t.rows.iter().map(|r| r.parameter.unwrap()).collect::<Vec<_>>(), vec![0.0, 0.1, 0.9]);
    }

    #[test]
    fn axis_names_parse() {
        assert_eq!("delta-eps".parse::<SweepAxis>().unwrap(), SweepAxis::DeltaEps);
        assert!("width".parse::<SweepAxis>().is_err());
        assert!(SweepAxis::Theta.apply(&base(), 30.0).is_err());
        assert!(SweepAxis::Refinement.apply(&base(), 2.5).is_err());
    }
}
