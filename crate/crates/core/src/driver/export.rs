//! Transverse-deflection fields of buckling modes on a uniform parametric
//! grid, as CSV and legacy VTK structured points.

use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DVector;

use super::config::ModeFormat;
use crate::cut_quadrature::{ElementRule, QuadPoint};
use crate::error::{Error, Result};
use crate::plate::element_fields;
use crate::solver::Discretization;

/// `w` sampled at `n x n` parametric points; `None` inside the cutout.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    pub n: usize,
    /// Row-major over `(j, i)`: `i` runs along `xi`.
    pub points: Vec<[f64; 2]>,
    pub w: Vec<Option<f64>>,
}

impl ModeField {
    pub fn masked(&self) -> usize {
        self.w.iter().filter(|v| v.is_none()).count()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = csv::Writer::from_writer(file);
        out.write_record(["i", "j", "x", "y", "w"])?;
        for (k, (p, w)) in self.points.iter().zip(&self.w).enumerate() {
            let (i, j) = (k % self.n, k / self.n);
            let w = w.map(|v| v.to_string()).unwrap_or_default();
            out.write_record([i.to_string(), j.to_string(), p[0].to_string(), p[1].to_string(), w])?;
        }
        out.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Structured points over the parametric square; masked samples are
    /// written as NaN and flagged in a `material` scalar.
    pub fn write_vtk(&self, path: &Path, title: &str) -> Result<()> {
        let io = |e| Error::io(path, e);
        let file = std::fs::File::create(path).map_err(io)?;
        let mut f = std::io::BufWriter::new(file);
        let step = 1.0 / (self.n - 1) as f64;
        let count = self.n * self.n;
        write!(
            f,
            "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET STRUCTURED_POINTS\n\
             DIMENSIONS {n} {n} 1\nORIGIN 0 0 0\nSPACING {step} {step} 1\nPOINT_DATA {count}\n\
             SCALARS w double 1\nLOOKUP_TABLE default\n",
            n = self.n
        )
        .map_err(io)?;
        for w in &self.w {
            writeln!(f, "{}", w.unwrap_or(f64::NAN)).map_err(io)?;
        }
        writeln!(f, "SCALARS material int 1\nLOOKUP_TABLE default").map_err(io)?;
        for w in &self.w {
            writeln!(f, "{}", i32::from(w.is_some())).map_err(io)?;
        }
        f.flush().map_err(io)
    }
}

pub fn read_mode_csv(path: &Path) -> Result<ModeField> {
    let mut r = csv::Reader::from_path(path)?;
    let mut points = Vec::new();
    let mut w = Vec::new();
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Configuration(format!("bad number '{s}' in {}", path.display())))
    };
    for rec in r.records() {
        let rec = rec?;
        points.push([parse(&rec[2])?, parse(&rec[3])?]);
        w.push(if rec[4].is_empty() { None } else { Some(parse(&rec[4])?) });
    }
    let n = (points.len() as f64).sqrt().round() as usize;
    if n * n != points.len() {
        return Err(Error::DimensionMismatch(format!("{} samples is not a square grid", points.len())));
    }
    Ok(ModeField { n, points, w })
}

/// Evaluates `w = sum N_I w_I (+ psi N_I a_I)` of `mode` on the grid.
pub fn sample_mode(disc: &Discretization, mode: &DVector<f64>, n: usize) -> Result<ModeField> {
    if n < 2 {
        return Err(Error::Configuration(format!("grid needs at least 2 samples per side, got {n}")));
    }
    if mode.len() != disc.dofmap.n_dof() {
        return Err(Error::DimensionMismatch(format!(
            "mode has {} entries, model has {} DOFs",
            mode.len(),
            disc.dofmap.n_dof()
        )));
    }
    let patch = &disc.patch;
    let (kx, ky) = (patch.knots_xi(), patch.knots_eta());
    let mut points = Vec::with_capacity(n * n);
    let mut w = Vec::with_capacity(n * n);
    for j in 0..n {
        let eta = ky.first() + (ky.last() - ky.first()) * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let xi = kx.first() + (kx.last() - kx.first()) * i as f64 / (n - 1) as f64;
            let x = patch.point(xi, eta)?;
            points.push([x.x, x.y]);
            if disc.cutout.as_ref().is_some_and(|s| s.signed_distance(x) < 0.0) {
                w.push(None);
                continue;
            }
            let (el, s, t) = patch.locate(x)?;
            let rule = ElementRule {
                points: vec![QuadPoint { s, t, weight: 1.0 }],
                cut: false,
            };
            let f = element_fields(patch, &el, &rule, disc.enrichment(el.id).as_ref())?;
            let dofs = disc.dofmap.dofs(&f.columns)?;
            let value = f.points[0]
                .functions
                .iter()
                .enumerate()
                .map(|(k, sf)| sf.value * mode[dofs[5 * k + 2]])
                .sum();
            w.push(Some(value));
        }
    }
    Ok(ModeField { n, points, w })
}

/// Writes `mode_<k>.csv` / `mode_<k>.vtk` for each mode into `dir`.
pub fn export_modes(
    disc: &Discretization,
    modes: &[DVector<f64>],
    grid: usize,
    formats: &[ModeFormat],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (k, mode) in modes.iter().enumerate() {
        let field = sample_mode(disc, mode, grid)?;
        for fmt in formats {
            let path = match fmt {
                ModeFormat::Csv => dir.join(format!("mode_{}.csv", k + 1)),
                ModeFormat::Vtk => dir.join(format!("mode_{}.vtk", k + 1)),
            };
            match fmt {
                ModeFormat::Csv => field.write_csv(&path)?,
                ModeFormat::Vtk => field.write_vtk(&path, &format!("buckling mode {}", k + 1))?,
            }
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NurbsPatch;
    use crate::levelset::LevelSetShape;
    use crate::solver::{discretize, QuadratureOptions};

    fn disc(shape: Option<LevelSetShape>) -> Discretization {
        let patch = NurbsPatch::rectangle(1.0, 1.0, 2, 2).unwrap().h_refine(3).unwrap();
        discretize(patch, shape, &QuadratureOptions::default()).unwrap()
    }

    #[test]
    fn zero_mode_gives_zero_field() {
        let d = disc(None);
        let f = sample_mode(&d, &DVector::zeros(d.dofmap.n_dof()), 11).unwrap();
        assert!(f.w.iter().all(|v| *v == Some(0.0)));
    }

    #[test]
    fn constant_deflection_reproduced() {
        let d = disc(None);
        let mut m = DVector::zeros(d.dofmap.n_dof());
        for cp in 0..d.dofmap.num_control_points() {
            m[5 * cp + 2] = 1.0;
        }
        let f = sample_mode(&d, &m, 7).unwrap();
        assert!(f.w.iter().all(|v| (v.unwrap() - 1.0).abs() < 1e-13));
    }

    #[test]
    fn masked_fraction_matches_area() {
        let r = 0.15;
        let d = disc(Some(LevelSetShape::circle([0.5, 0.5], r)));
        let n = 201;
        let f = sample_mode(&d, &DVector::zeros(d.dofmap.n_dof()), n).unwrap();
        let expect = std::f64::consts::PI * r * r * (n * n) as f64;
        assert!((f.masked() as f64 - expect).abs() < 0.02 * expect);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let d = disc(Some(LevelSetShape::circle([0.5, 0.5], 0.2)));
        let m = DVector::from_fn(d.dofmap.n_dof(), |i, _| (i as f64 * 0.37).sin() / 3.0);
        let f = sample_mode(&d, &m, 21).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let written = export_modes(&d, &[m], 21, &[ModeFormat::Csv, ModeFormat::Vtk], dir.path()).unwrap();
        assert_eq!(written.len(), 2);
        let back = read_mode_csv(&written[0]).unwrap();
        assert_eq!(back, f);
        let vtk = std::fs::read_to_string(&written[1]).unwrap();
        assert!(vtk.contains("DIMENSIONS 21 21 1"));
        assert_eq!(vtk.matches("nan").count() + vtk.matches("NaN").count(), f.masked());
    }
}
