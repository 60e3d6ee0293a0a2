//! Time-series ingestion and train/test evaluation: entities are rows,
//! timestamps are columns (each timestamp is one variable). The series is
//! split in half along time, an eigenvector is estimated on the train-half
//! covariance, and methods are scored by the proportion of test-half
//! variance their direction explains.

use std::path::Path;

use anyhow::{bail, Context, Result};
use ndarray::{Array1, Array2};

use conepower::cones::ConeSpec;
use conepower::estimators::{
    cone_power_iteration_double, power_iteration, truncated_power_iteration, IterConfig,
};
use conepower::linalg::{norm, normalize, sample_covariance_centered};

use crate::csvio::parse_cell;
use crate::grid::Algorithm;

/// A cleaned entities × timestamps panel with no missing values.
#[derive(Debug, Clone)]
pub struct TimeSeriesDataset {
    pub entity_ids: Vec<String>,
    pub timestamps: Vec<String>,
    /// `values[(i, j)]` = observation of entity `i` at timestamp `j`.
    pub values: Array2<f64>,
}

impl TimeSeriesDataset {
    /// Number of entities (samples).
    pub fn entities(&self) -> usize {
        self.values.nrows()
    }

    /// Number of timestamps (variables).
    pub fn len_time(&self) -> usize {
        self.values.ncols()
    }
}

/// Loads `entity,<t1>,<t2>,...` CSV. Empty cells mark missing values;
/// every timestamp column containing a missing value is dropped.
pub fn load_timeseries_csv(path: &Path) -> Result<TimeSeriesDataset> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read dataset {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().context("dataset is empty")?;
    let mut header_cells = header.split(',');
    let first = header_cells.next().unwrap_or("").trim();
    if first != "entity" {
        bail!("first header cell must be \"entity\", got {first:?}");
    }
    let timestamps: Vec<String> = header_cells.map(|c| c.trim().to_string()).collect();
    if timestamps.is_empty() {
        bail!("dataset has no timestamp columns");
    }

    let mut entity_ids = Vec::new();
    let mut raw_rows: Vec<Vec<Option<f64>>> = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let id = cells.next().unwrap_or("").trim().to_string();
        let row = cells
            .map(|tok| {
                let tok = tok.trim();
                if tok.is_empty() {
                    Ok(None)
                } else {
                    parse_cell(tok, i + 1).map(Some)
                }
            })
            .collect::<Result<Vec<Option<f64>>>>()?;
        if row.len() != timestamps.len() {
            bail!(
                "row {} has {} data cells, header promises {}",
                i + 1,
                row.len(),
                timestamps.len()
            );
        }
        entity_ids.push(id);
        raw_rows.push(row);
    }
    if raw_rows.is_empty() {
        bail!("dataset has no entity rows");
    }

    let keep: Vec<usize> = (0..timestamps.len())
        .filter(|&j| raw_rows.iter().all(|row| row[j].is_some()))
        .collect();
    if keep.is_empty() {
        bail!("zero columns after cleaning: every timestamp has a missing value");
    }
    let n = raw_rows.len();
    let mut values = Array2::zeros((n, keep.len()));
    for (i, row) in raw_rows.iter().enumerate() {
        for (jj, &j) in keep.iter().enumerate() {
            values[(i, jj)] = row[j].expect("kept columns are complete");
        }
    }
    let timestamps = keep.iter().map(|&j| timestamps[j].clone()).collect();
    Ok(TimeSeriesDataset {
        entity_ids,
        timestamps,
        values,
    })
}

/// Splits along time: the first ⌈p/2⌉ timestamps go to train, the rest to
/// test. Column order is preserved.
pub fn split_half(ds: &TimeSeriesDataset) -> Result<(TimeSeriesDataset, TimeSeriesDataset)> {
    let p = ds.len_time();
    if p < 2 {
        bail!("need at least two timestamps to split, got {p}");
    }
    let cut = p.div_ceil(2);
    let take = |range: std::ops::Range<usize>| TimeSeriesDataset {
        entity_ids: ds.entity_ids.clone(),
        timestamps: ds.timestamps[range.clone()].to_vec(),
        values: ds.values.slice(ndarray::s![.., range]).to_owned(),
    };
    Ok((take(0..cut), take(cut..p)))
}

/// Proportion of test-half variance explained along `v`:
/// `vᵀΣ_test v / tr(Σ_test)` with the mean-centered covariance.
pub fn explained_variance(v: &Array1<f64>, test: &TimeSeriesDataset) -> Result<f64> {
    let p = test.len_time();
    if v.len() != p {
        bail!("direction has dimension {}, test half has {p}", v.len());
    }
    if (norm(v) - 1.0).abs() > 1e-8 {
        bail!("direction must be unit norm");
    }
    let cov = sample_covariance_centered(&test.values)?;
    let trace: f64 = (0..p).map(|i| cov.get(i, i)).sum();
    if trace <= 0.0 {
        bail!("test covariance has zero trace");
    }
    Ok(cov.quadratic_form(v)? / trace)
}

/// One algorithm's score on the test half.
#[derive(Debug, Clone)]
pub struct RealdataRow {
    pub algorithm: Algorithm,
    pub explained_variance: f64,
    pub iters: usize,
    pub stop_reason: String,
}

/// Loads a dataset, splits it, estimates the train-half principal
/// eigenvector with each method, and scores each direction on the test
/// half.
///
/// With an odd number of timestamps the train half is one column longer;
/// the estimated direction drops its final coordinate and renormalizes
/// before test evaluation.
pub fn run_realdata(path: &Path, cone_spec: &ConeSpec, delta: f64) -> Result<Vec<RealdataRow>> {
    let ds = load_timeseries_csv(path)?;
    let (train, test) = split_half(&ds)?;
    let p_train = train.len_time();
    let p_test = test.len_time();
    let cov_train = sample_covariance_centered(&train.values)?;
    let cone = cone_spec.build(p_train)?;
    let cfg = IterConfig {
        delta,
        max_iter: Some(crate::grid::GRID_MAX_ITER),
        v0: None,
    };

    let adapt = |v: &Array1<f64>| -> Result<Array1<f64>> {
        if p_train == p_test {
            Ok(v.clone())
        } else {
            let head = v.slice(ndarray::s![0..p_test]).to_owned();
            normalize(&head).context("direction vanishes after dropping the odd column")
        }
    };

    let mut rows = Vec::new();
    let runs: Vec<(
        Algorithm,
        conepower::Result<conepower::estimators::EstimateResult>,
    )> = vec![
        (
            Algorithm::ConeDouble,
            cone_power_iteration_double(&cov_train, &cone, &cfg),
        ),
        (Algorithm::Ordinary, power_iteration(&cov_train, &cfg)),
        (
            Algorithm::Truncated,
            truncated_power_iteration(&cov_train, p_train, &cfg),
        ),
    ];
    for (algorithm, outcome) in runs {
        let res = outcome.with_context(|| format!("{} failed", algorithm.as_str()))?;
        let direction = adapt(&res.v)?;
        rows.push(RealdataRow {
            algorithm,
            explained_variance: explained_variance(&direction, &test)?,
            iters: res.iters,
            stop_reason: res.stop_reason.as_str().to_string(),
        });
    }
    Ok(rows)
}

/// Writes the per-algorithm explained-variance table.
pub fn write_realdata_csv(rows: &[RealdataRow], out: &mut impl std::io::Write) -> Result<()> {
    writeln!(out, "#schema=realdata-v1")?;
    writeln!(out, "algorithm,explained_variance,iters,stop_reason")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.algorithm.as_str(),
            crate::csvio::fmt_float(row.explained_variance),
            row.iters,
            row.stop_reason
        )?;
    }
    Ok(())
}
