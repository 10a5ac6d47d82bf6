//! On-disk formats: human-readable JSON with complex entries as (re, im)
//! pairs. serde_json emits shortest-round-trip decimals, so serialize ->
//! parse reproduces every binary64 value bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use schur_compress::{
    build_cg_symmetric, complete_to_unitary, dim_symmetric, CgIsometry, CgUnitary,
    CompressedState, DenseState, PureQudit, C64,
};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Canonical weight-n occupation order, length C(n+d-1, d-1).
    Occupation,
    /// Computational strings, first factor most significant, length d^n.
    Computational,
}

/// A state vector with basis metadata. Hand-written files are accepted
/// with norms up to 1e-6 away from 1 and renormalized on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub d: usize,
    pub n: usize,
    pub basis: Basis,
    pub amplitudes: Vec<(f64, f64)>,
}

impl StateFile {
    pub fn from_compressed(cs: &CompressedState) -> Self {
        StateFile {
            d: cs.d(),
            n: cs.n(),
            basis: Basis::Occupation,
            amplitudes: to_pairs(cs.amplitudes()),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: StateFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed state file {}: {e}", path.display())))?;
        file.validate(path)?;
        Ok(file)
    }

    fn validate(&self, path: &Path) -> CliResult<()> {
        if self.d == 0 {
            return Err(CliError::Usage(format!("{}: d must be >= 1", path.display())));
        }
        let expected = match self.basis {
            Basis::Occupation => dim_symmetric(self.n, self.d)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
                as usize,
            Basis::Computational => {
                let mut size: usize = 1;
                for _ in 0..self.n {
                    size = size.checked_mul(self.d).ok_or_else(|| {
                        CliError::Usage(format!("{}: d^n does not fit in memory", path.display()))
                    })?;
                }
                size
            }
        };
        if self.amplitudes.len() != expected {
            return Err(CliError::Usage(format!(
                "{}: expected {expected} amplitudes for d={}, n={}, basis {:?}, got {}",
                path.display(),
                self.d,
                self.n,
                self.basis,
                self.amplitudes.len()
            )));
        }
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(CliError::Usage(format!(
                "{}: state norm {norm} is more than 1e-6 away from 1",
                path.display()
            )));
        }
        Ok(())
    }

    fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt()
    }

    fn normalized_amplitudes(&self) -> Vec<C64> {
        let norm = self.norm();
        self.amplitudes.iter().map(|&(re, im)| C64::new(re, im) / norm).collect()
    }

    /// Interprets an n = 1 file as a single qudit.
    pub fn to_qudit(&self) -> CliResult<PureQudit> {
        if self.n != 1 {
            return Err(CliError::Usage(format!(
                "expected a single-qudit file (n = 1), got n = {}",
                self.n
            )));
        }
        PureQudit::new(self.normalized_amplitudes())
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn to_dense(&self) -> CliResult<DenseState> {
        if self.basis != Basis::Computational {
            return Err(CliError::Usage(
                "expected a computational-basis state file".into(),
            ));
        }
        DenseState::new(self.d, self.n, self.normalized_amplitudes())
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Isometry,
    Unitary,
}

/// A CG matrix with shape metadata, entries row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub k: usize,
    pub kind: MatrixKind,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(f64, f64)>,
}

impl MatrixFile {
    pub fn from_isometry(w: &CgIsometry) -> Self {
        let dense = w.dense();
        MatrixFile {
            d: w.d(),
            k: w.k(),
            kind: MatrixKind::Isometry,
            rows: dense.nrows(),
            cols: dense.ncols(),
            entries: dense.iter().map(|z| (z.re, z.im)).collect(),
        }
    }

    pub fn from_unitary(u: &CgUnitary) -> Self {
        MatrixFile {
            d: u.d(),
            k: u.k(),
            kind: MatrixKind::Unitary,
            rows: u.side(),
            cols: u.side(),
            entries: u.matrix().iter().map(|z| (z.re, z.im)).collect(),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: MatrixFile = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("malformed matrix file {}: {e}", path.display()))
        })?;
        if file.entries.len() != file.rows * file.cols {
            return Err(CliError::Usage(format!(
                "{}: {} entries for a {}x{} matrix",
                path.display(),
                file.entries.len(),
                file.rows,
                file.cols
            )));
        }
        Ok(file)
    }

    /// Reconstructs the isometry, re-verifying the selection rule and row
    /// orthonormality within 1e-8.
    pub fn to_isometry(&self) -> CliResult<CgIsometry> {
        if self.kind != MatrixKind::Isometry {
            return Err(CliError::Usage("matrix file does not hold an isometry".into()));
        }
        let matrix = schur_compress::ndarray::Array2::from_shape_vec(
            (self.rows, self.cols),
            self.entries.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        )
        .map_err(|e| CliError::Usage(format!("bad matrix shape: {e}")))?;
        CgIsometry::from_dense(self.d, self.k, &matrix, 1e-8)
            .map_err(|e| CliError::Usage(format!("matrix failed re-verification: {e}")))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}

/// Builds the requested export: the step-k isometry or its completion.
pub fn export_matrix(d: usize, k: usize, complete: bool) -> CliResult<MatrixFile> {
    let w = build_cg_symmetric(d, k).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(if complete {
        MatrixFile::from_unitary(&complete_to_unitary(&w))
    } else {
        MatrixFile::from_isometry(&w)
    })
}

fn to_pairs(amps: &[C64]) -> Vec<(f64, f64)> {
    amps.iter().map(|z| (z.re, z.im)).collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
