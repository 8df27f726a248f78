//! Dataset readers.
//!
//! libsvm text: one sample per line, `label idx:value ...` with 1-based
//! feature indices; absent features are zero, blank lines and `#` comments
//! are skipped.
//!
//! ```text
//! 1 1:0.5 3:-1.2
//! 0 2:4.0
//! 1 1:1.0 2:0.25 3:0.5
//! ```
//!
//! CSV: a header row followed by numeric rows. The target is the last
//! column unless named explicitly.
//!
//! ```text
//! x1,x2,y
//! 0.5,1.0,1
//! -0.3,2.2,0
//! ```

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Dataset {
    pub design: DMatrix<f64>,
    pub target: DVector<f64>,
}

impl Dataset {
    pub fn n_samples(&self) -> usize {
        self.design.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.design.ncols()
    }

    /// Center every column and scale it to unit variance; constant columns
    /// are only centered.
    pub fn standardize(&mut self) {
        let n = self.n_samples() as f64;
        for mut col in self.design.column_iter_mut() {
            let mean = col.sum() / n;
            col.add_scalar_mut(-mean);
            let sd = (col.norm_squared() / n).sqrt();
            if sd > 0.0 {
                col /= sd;
            }
        }
    }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut width = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label = parts.next().expect("non-empty line");
        let label: f64 = label
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("bad label {label:?}")))?;
        let mut row = Vec::new();
        for tok in parts {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(path, i + 1, format!("expected idx:value, got {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_err(path, i + 1, format!("bad index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err(path, i + 1, "feature indices start at 1"));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| parse_err(path, i + 1, format!("bad value {val:?}")))?;
            width = width.max(idx);
            row.push((idx - 1, val));
        }
        labels.push(label);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "no samples"));
    }
    let mut design = DMatrix::zeros(rows.len(), width);
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            design[(r, c)] = v;
        }
    }
    Ok(Dataset {
        design,
        target: DVector::from_vec(labels),
    })
}

pub fn read_csv(path: impl AsRef<Path>, target: Option<&str>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.len() < 2 {
        return Err(parse_err(path, 1, "need at least one feature and a target column"));
    }
    let target_col = match target {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(path, 1, format!("no column named {name:?}")))?,
        None => headers.len() - 1,
    };
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(path, i + 2, format!("bad number {field:?}")))?;
            if j == target_col {
                labels.push(v);
            } else {
                features.push(v);
            }
        }
    }
    if labels.is_empty() {
        return Err(parse_err(path, 1, "no samples"));
    }
    let width = headers.len() - 1;
    Ok(Dataset {
        design: DMatrix::from_row_slice(labels.len(), width, &features),
        target: DVector::from_vec(labels),
    })
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => parse_err(path, line, format!("{kind:?}")),
    }
}

/// CSV for `.csv` files, libsvm otherwise.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => read_csv(path, None),
        _ => read_libsvm(path),
    }
}
