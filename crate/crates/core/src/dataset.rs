//! Canonical CSV ingestion.
//!
//! Subjective scores: header `id,score,stddev,group,polarity` with the
//! polarity column constant per file (`mos` or `dmos`). Predictions: header
//! `id,<metric>,...` with one column per metric. Sidecar polarity map:
//! header `metric,polarity` with `higher` or `lower` per metric. UTF-8,
//! `.` decimal separator.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Polarity, PredictionPolarity, PredictionSet, ScoreItem, ScoreSet};

/// A loaded evaluation dataset: one subjective set plus aligned predictions
/// per metric, in prediction-file column order.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub scores: ScoreSet<f64>,
    pub metrics: Vec<(String, PredictionSet<f64>)>,
}

impl Dataset {
    /// Restriction to the items at the given indices, keeping all metrics.
    pub fn subset(&self, keep: &[usize]) -> Result<Dataset> {
        Ok(Dataset {
            scores: self.scores.subset(keep)?,
            metrics: self
                .metrics
                .iter()
                .map(|(name, p)| Ok((name.clone(), p.subset(keep)?)))
                .collect::<Result<_>>()?,
        })
    }
}

fn data_err(file: &Path, row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::CsvData {
        file: file.display().to_string(),
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn parse_cell(file: &Path, row: usize, column: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| data_err(file, row, column, format!("non-numeric cell `{raw}`")))
}

/// Reads the canonical subjective-score CSV.
pub fn load_scores(path: &Path) -> Result<ScoreSet<f64>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let expected = ["id", "score", "stddev", "group", "polarity"];
    let actual: Vec<&str> = headers.iter().map(str::trim).collect();
    if actual != expected {
        return Err(data_err(
            path,
            1,
            "header",
            format!("expected `id,score,stddev,group,polarity`, got `{}`", actual.join(",")),
        ));
    }

    let mut items = Vec::new();
    let mut polarity: Option<Polarity> = None;
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 2; // 1-based, after the header
        let record = record?;
        if record.len() != 5 {
            return Err(data_err(path, row, "row", "expected 5 cells"));
        }
        let id = record[0].trim().to_string();
        let score = parse_cell(path, row, "score", &record[1])?;
        let stddev = parse_cell(path, row, "stddev", &record[2])?;
        let group = record[3].trim().to_string();
        let pol = match record[4].trim().to_ascii_lowercase().as_str() {
            "mos" => Polarity::Mos,
            "dmos" => Polarity::Dmos,
            other => {
                return Err(data_err(
                    path,
                    row,
                    "polarity",
                    format!("unknown polarity token `{other}`"),
                ))
            }
        };
        match polarity {
            None => polarity = Some(pol),
            Some(p) if p != pol => {
                return Err(data_err(
                    path,
                    row,
                    "polarity",
                    "polarity must be constant within a file",
                ))
            }
            _ => {}
        }
        items.push(ScoreItem {
            id,
            score,
            stddev,
            group,
        });
    }
    let polarity = polarity.ok_or_else(|| data_err(path, 2, "row", "no data rows"))?;
    ScoreSet::new(items, polarity)
}

/// Reads the metric-to-polarity sidecar.
pub fn load_polarity_map(path: &Path) -> Result<HashMap<String, PredictionPolarity>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let actual: Vec<&str> = headers.iter().map(str::trim).collect();
    if actual != ["metric", "polarity"] {
        return Err(data_err(
            path,
            1,
            "header",
            format!("expected `metric,polarity`, got `{}`", actual.join(",")),
        ));
    }
    let mut map = HashMap::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 2;
        let record = record?;
        if record.len() != 2 {
            return Err(data_err(path, row, "row", "expected 2 cells"));
        }
        let metric = record[0].trim().to_string();
        let polarity = match record[1].trim().to_ascii_lowercase().as_str() {
            "higher" => PredictionPolarity::HigherIsBetter,
            "lower" => PredictionPolarity::LowerIsBetter,
            other => {
                return Err(data_err(
                    path,
                    row,
                    "polarity",
                    format!("unknown polarity token `{other}` (use `higher` or `lower`)"),
                ))
            }
        };
        if map.insert(metric.clone(), polarity).is_some() {
            return Err(data_err(
                path,
                row,
                "metric",
                format!("duplicate metric `{metric}`"),
            ));
        }
    }
    Ok(map)
}

/// Loads the subjective scores plus the prediction table and polarity map,
/// re-sorting prediction rows into subjective-file id order.
pub fn load_dataset(
    subjective_path: &Path,
    predictions_path: &Path,
    polarity_map_path: &Path,
) -> Result<Dataset> {
    let scores = load_scores(subjective_path)?;
    let polarity_map = load_polarity_map(polarity_map_path)?;

    let mut reader = csv::Reader::from_path(predictions_path)?;
    let headers = reader.headers()?.clone();
    let header_cells: Vec<String> = headers.iter().map(|h| h.trim().to_string()).collect();
    if header_cells.first().map(String::as_str) != Some("id") || header_cells.len() < 2 {
        return Err(data_err(
            predictions_path,
            1,
            "header",
            "expected `id,<metric>,...`",
        ));
    }
    let metric_names = &header_cells[1..];

    // id -> per-metric values, with duplicate detection.
    let mut rows: HashMap<String, Vec<f64>> = HashMap::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 2;
        let record = record?;
        if record.len() != header_cells.len() {
            return Err(data_err(
                predictions_path,
                row,
                "row",
                format!("expected {} cells", header_cells.len()),
            ));
        }
        let id = record[0].trim().to_string();
        let values = metric_names
            .iter()
            .enumerate()
            .map(|(k, name)| parse_cell(predictions_path, row, name, &record[k + 1]))
            .collect::<Result<Vec<f64>>>()?;
        if rows.insert(id.clone(), values).is_some() {
            return Err(data_err(
                predictions_path,
                row,
                "id",
                format!("duplicate id `{id}`"),
            ));
        }
    }

    let ids: Vec<String> = scores.ids().iter().map(|s| s.to_string()).collect();
    let mut metrics = Vec::with_capacity(metric_names.len());
    for (k, name) in metric_names.iter().enumerate() {
        let polarity = *polarity_map.get(name).ok_or_else(|| {
            data_err(
                polarity_map_path,
                1,
                "metric",
                format!("metric `{name}` missing from the polarity map"),
            )
        })?;
        let values = ids
            .iter()
            .map(|id| {
                rows.get(id)
                    .map(|v| v[k])
                    .ok_or_else(|| {
                        data_err(
                            predictions_path,
                            0,
                            "id",
                            format!("prediction file is missing id `{id}`"),
                        )
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        metrics.push((name.clone(), PredictionSet::new(ids.clone(), values, polarity)?));
    }

    Ok(Dataset { scores, metrics })
}
