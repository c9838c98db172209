//! CSV dataset ingestion for the regression objective.
//!
//! Format: comma-separated UTF-8, numeric columns, last column is the
//! target, optional single header line (auto-detected when the first row has
//! a non-numeric field). Rows with missing or non-numeric cells are dropped
//! and counted; zero-variance feature columns are dropped with a warning.
//! Features are standardized to zero mean and unit variance, targets are
//! centered.

use std::path::Path;

use crate::error::{Error, Result};

/// An in-memory numeric regression dataset.
#[derive(Clone, Debug)]
pub struct Dataset {
    name: String,
    features: Vec<Vec<f64>>,
    targets: Vec<f64>,
    dropped_rows: usize,
    dropped_columns: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset from rows as given, without any preprocessing.
    pub fn from_rows(
        name: impl Into<String>,
        features: Vec<Vec<f64>>,
        targets: Vec<f64>,
    ) -> Result<Self> {
        if features.len() != targets.len() {
            return Err(Error::Dataset(format!(
                "{} feature rows vs {} targets",
                features.len(),
                targets.len()
            )));
        }
        if features.is_empty() {
            return Err(Error::Dataset("dataset has no rows".into()));
        }
        let width = features[0].len();
        if width == 0 {
            return Err(Error::Dataset("dataset has no feature columns".into()));
        }
        for row in &features {
            if row.len() != width {
                return Err(Error::Dataset("ragged feature rows".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Dataset("non-finite feature value".into()));
            }
        }
        if targets.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dataset("non-finite target value".into()));
        }
        Ok(Self {
            name: name.into(),
            features,
            targets,
            dropped_rows: 0,
            dropped_columns: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Rows dropped during ingestion because of missing or bad cells.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }

    /// Original indices of zero-variance columns dropped during ingestion.
    pub fn dropped_columns(&self) -> &[usize] {
        &self.dropped_columns
    }
}

/// Loads and preprocesses a CSV file (see module docs for the policy).
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dropped_rows = 0usize;
    let mut width: Option<usize> = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Option<Vec<f64>> = record
            .iter()
            .map(|field| field.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match parsed {
            Some(values) => {
                match width {
                    None => {
                        if values.len() < 2 {
                            return Err(Error::Dataset(format!(
                                "{}: rows need at least one feature and a target",
                                path.display()
                            )));
                        }
                        width = Some(values.len());
                    }
                    Some(w) if values.len() != w => {
                        dropped_rows += 1;
                        continue;
                    }
                    Some(_) => {}
                }
                rows.push(values);
            }
            None if idx == 0 => {
                // header line
            }
            None => dropped_rows += 1,
        }
    }
    if rows.is_empty() {
        return Err(Error::Dataset(format!(
            "{}: no usable rows",
            path.display()
        )));
    }
    if dropped_rows > 0 {
        log::warn!(
            "{}: dropped {dropped_rows} row(s) with missing or non-numeric cells",
            path.display()
        );
    }

    let width = width.expect("rows imply width");
    let n = rows.len() as f64;
    let n_cols = width - 1;

    // Column statistics over the feature columns.
    let mut kept = Vec::new();
    let mut dropped_columns = Vec::new();
    for col in 0..n_cols {
        let mean = rows.iter().map(|r| r[col]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[col] - mean) * (r[col] - mean)).sum::<f64>() / n;
        if var == 0.0 {
            log::warn!("{}: dropping zero-variance column {col}", path.display());
            dropped_columns.push(col);
        } else {
            kept.push((col, mean, var.sqrt()));
        }
    }
    if kept.is_empty() {
        return Err(Error::Dataset(format!(
            "{}: no usable feature columns",
            path.display()
        )));
    }

    let target_mean = rows.iter().map(|r| r[n_cols]).sum::<f64>() / n;
    let features: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| kept.iter().map(|(c, m, s)| (r[*c] - m) / s).collect())
        .collect();
    let targets: Vec<f64> = rows.iter().map(|r| r[n_cols] - target_mean).collect();

    let mut ds = Dataset::from_rows(name, features, targets)?;
    ds.dropped_rows = dropped_rows;
    ds.dropped_columns = dropped_columns;
    Ok(ds)
}
