//! JSON exchange format for matrices and generators.
//!
//! Matrices are row-major arrays of arrays of finite doubles; complex
//! entries are `[re, im]` pairs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::GaussianGenerator;
use crate::linalg::{CMat, RMat};

pub type RealRows = Vec<Vec<f64>>;
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn real_to_rows(m: &RMat) -> RealRows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn complex_to_rows(m: &CMat) -> ComplexRows {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn shape<T>(rows: &[Vec<T>], what: &str) -> Result<(usize, usize)> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != nc) {
        return Err(Error::InvalidInput(format!(
            "{what}: row {i} has {} entries, expected {nc}",
            r.len()
        )));
    }
    Ok((nr, nc))
}

pub fn rows_to_real(rows: &RealRows, what: &str) -> Result<RMat> {
    let (nr, nc) = shape(rows, what)?;
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what}: non-finite entry")));
    }
    Ok(RMat::from_fn(nr, nc, |i, j| rows[i][j]))
}

pub fn rows_to_complex(rows: &ComplexRows, what: &str) -> Result<CMat> {
    let (nr, nc) = shape(rows, what)?;
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what}: non-finite entry")));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// On-disk form of a [`GaussianGenerator`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub hamiltonian: RealRows,
    pub kossakowski: ComplexRows,
}

impl GeneratorFile {
    pub fn from_generator(gen: &GaussianGenerator) -> Self {
        Self {
            hamiltonian: real_to_rows(gen.hamiltonian()),
            kossakowski: complex_to_rows(gen.kossakowski()),
        }
    }

    pub fn to_generator(&self) -> Result<GaussianGenerator> {
        GaussianGenerator::new(
            rows_to_real(&self.hamiltonian, "hamiltonian")?,
            rows_to_complex(&self.kossakowski, "kossakowski")?,
        )
    }
}

pub fn generator_to_json(gen: &GaussianGenerator) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GeneratorFile::from_generator(gen))?)
}

pub fn generator_from_json(text: &str) -> Result<GaussianGenerator> {
    serde_json::from_str::<GeneratorFile>(text)?.to_generator()
}

pub fn read_generator(path: &Path) -> Result<GaussianGenerator> {
    generator_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_generator(path: &Path, gen: &GaussianGenerator) -> Result<()> {
    std::fs::write(path, generator_to_json(gen)? + "\n")?;
    Ok(())
}
