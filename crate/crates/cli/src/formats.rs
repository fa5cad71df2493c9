//! JSON file formats: parameter paths and model descriptions.
//!
//! Path file:
//! ```json
//! {"closed": false, "samples": [{"t": 0.0, "R": [0.78, 0.0]}, {"t": 1.0, "R": [0.78, 1.57]}]}
//! ```
//! Custom model table, one Hermitian matrix per grid point, entries as
//! `[re, im]` pairs:
//! ```json
//! {"parameters": ["x"], "points": [{"point": [0.0], "matrix": [[[1,0],[0,0]], [[0,0],[-1,0]]]}]}
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use geophase_core::model::Hamiltonian;
use geophase_core::path::PathSample;
use geophase_core::sphere::{SpherePath, SphericalPoint};
use geophase_core::{CMatrix, Complex64, ConicalModel, ParameterPath, SpinConfig, SpinModel, TabulatedModel};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

/// Resolves `file` against the directory of the document that named it.
pub fn resolve(base: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    pub t: f64,
    #[serde(rename = "R")]
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    /// Overrides endpoint detection; periodic coordinates need it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
    pub samples: Vec<SampleFile>,
}

impl PathFile {
    pub fn to_path(&self) -> Result<ParameterPath, CliError> {
        if self.samples.is_empty() {
            return Err(CliError::schema("path has no samples"));
        }
        let samples: Vec<PathSample> =
            self.samples.iter().map(|s| PathSample { time: s.t, point: s.r.clone() }).collect();
        let path = match self.closed {
            Some(c) => ParameterPath::with_closed(samples, c),
            None => ParameterPath::new(samples),
        };
        path.map_err(|e| CliError::schema(format!("invalid path: {e}")))
    }

    /// Reads `R = (Θ, Φ)`.
    pub fn to_sphere(&self) -> Result<SpherePath, CliError> {
        let mut pts = Vec::with_capacity(self.samples.len());
        for s in &self.samples {
            match s.r[..] {
                [theta, phi] => pts.push(SphericalPoint::new(theta, phi)),
                _ => return Err(CliError::schema("sphere paths need R = [theta, phi]")),
            }
        }
        SpherePath::new(pts).map_err(|e| CliError::schema(format!("invalid sphere path: {e}")))
    }

    pub fn from_path(path: &ParameterPath) -> Self {
        PathFile {
            closed: Some(path.is_closed()),
            samples: path.samples().iter().map(|s| SampleFile { t: s.time, r: s.point.clone() }).collect(),
        }
    }
}

/// A path given inline or as the name of a path file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathSource {
    File(String),
    Inline(PathFile),
}

impl PathSource {
    pub fn load(&self, base: &Path) -> Result<PathFile, CliError> {
        match self {
            PathSource::File(f) => read_json(&resolve(base, f)),
            PathSource::Inline(p) => Ok(p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablePoint {
    pub point: Vec<f64>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTable {
    pub parameters: Vec<String>,
    pub points: Vec<TablePoint>,
}

impl CustomTable {
    pub fn to_model(&self) -> Result<TabulatedModel, CliError> {
        let mut points = Vec::with_capacity(self.points.len());
        let mut matrices = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let rows: Vec<Vec<Complex64>> =
                p.matrix.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
            matrices.push(CMatrix::from_rows(&rows).map_err(|e| CliError::schema(format!("custom model matrix: {e}")))?);
            points.push(p.point.clone());
        }
        TabulatedModel::new(self.parameters.clone(), points, matrices)
            .map_err(|e| CliError::schema(format!("custom model: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableSource {
    File(String),
    Inline(CustomTable),
}

fn one() -> f64 {
    1.0
}

/// Model selection by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `R (sin Φ σ_x + cos Φ σ_z)`, parameter `Φ`.
    Conical {
        #[serde(default = "one")]
        radius: f64,
    },
    /// Spin-½ in a field of strength `ω_B`, parameters `(Θ, Φ)`.
    Spin {
        #[serde(default = "one")]
        omega_b: f64,
    },
    Custom { table: TableSource },
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec::Spin { omega_b: 1.0 }
    }
}

impl ModelSpec {
    pub fn build(&self, base: &Path) -> Result<Box<dyn Hamiltonian>, CliError> {
        Ok(match self {
            ModelSpec::Conical { radius } => Box::new(ConicalModel::new(*radius)?),
            ModelSpec::Spin { omega_b } => Box::new(SpinModel::new(SpinConfig::new(*omega_b)?)),
            ModelSpec::Custom { table } => {
                let t: CustomTable = match table {
                    TableSource::File(f) => read_json(&resolve(base, f))?,
                    TableSource::Inline(t) => t.clone(),
                };
                Box::new(t.to_model()?)
            }
        })
    }
}
