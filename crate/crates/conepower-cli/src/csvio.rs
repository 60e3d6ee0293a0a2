//! CSV parsing and formatting. Output files carry a `#schema=` tag line,
//! floats are written with 17 significant digits, and matrices are
//! symmetrized on load with a warning above a small asymmetry threshold.

use anyhow::{bail, Context, Result};
use conepower::linalg::SymMatrix;
use ndarray::{Array1, Array2};
use std::path::Path;

/// Largest tolerated asymmetry in a loaded square matrix before a warning
/// is printed.
pub const ASYMMETRY_WARN: f64 = 1e-8;

/// A float with 17 significant digits, round-trip safe for f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses one numeric cell.
pub fn parse_cell(tok: &str, line_no: usize) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .with_context(|| format!("non-numeric cell {tok:?} on line {line_no}"))
}

/// Loads a square numeric grid (no header) and symmetrizes it. Warns on
/// stderr when the asymmetry exceeds [`ASYMMETRY_WARN`].
pub fn load_matrix_csv(path: &Path) -> Result<SymMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read matrix file {}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| parse_cell(tok, i + 1))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("matrix file {} is empty", path.display());
    }
    let p = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != p {
            bail!(
                "row {} has {} cells, expected {p} (matrix must be square)",
                i + 1,
                row.len()
            );
        }
    }
    let mut max_asym = 0f64;
    let mut data = Array2::zeros((p, p));
    for i in 0..p {
        for j in 0..p {
            data[(i, j)] = rows[i][j];
            if j > i {
                max_asym = max_asym.max((rows[i][j] - rows[j][i]).abs());
            }
        }
    }
    if max_asym > ASYMMETRY_WARN {
        eprintln!(
            "warning: matrix {} has asymmetry up to {max_asym:.3e}; symmetrizing",
            path.display()
        );
    }
    Ok(SymMatrix::from_array(data)?)
}

/// Loads a vector: either one value per line or a single comma-separated
/// row.
pub fn load_vector_csv(path: &Path) -> Result<Array1<f64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read vector file {}", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        for tok in line.split(',') {
            values.push(parse_cell(tok, i + 1)?);
        }
    }
    if values.is_empty() {
        bail!("vector file {} is empty", path.display());
    }
    Ok(Array1::from_vec(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn float_formatting_is_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        let x = 0.1 + 0.2;
        let round_trip: f64 = fmt_float(x).parse().unwrap();
        assert_eq!(round_trip, x);
    }

    #[test]
    fn matrix_load_requires_square() {
        let f = write_tmp("1,2\n3\n");
        assert!(load_matrix_csv(f.path()).is_err());
    }

    #[test]
    fn matrix_load_symmetrizes() {
        let f = write_tmp("1,2\n2,5\n");
        let m = load_matrix_csv(f.path()).unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 1), 5.0);
    }

    #[test]
    fn matrix_load_rejects_garbage() {
        let f = write_tmp("1,x\n3,4\n");
        assert!(load_matrix_csv(f.path()).is_err());
    }

    #[test]
    fn vector_load_accepts_rows_and_columns() {
        let col = write_tmp("1\n2\n3\n");
        let row = write_tmp("1,2,3\n");
        assert_eq!(
            load_vector_csv(col.path()).unwrap().to_vec(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(
            load_vector_csv(row.path()).unwrap().to_vec(),
            vec![1.0, 2.0, 3.0]
        );
    }
}
