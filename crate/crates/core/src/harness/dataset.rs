use std::fs::File;
use std::path::Path;

use crate::ensemble::{ClassLabel, Dataset};
use crate::error::{Error, Result};

/// Reads a comma-separated file with a header row whose last column is the
/// class label (`1` or `2`) and whose other columns are real features.
///
/// Reported row numbers are 1-based file lines (the header is line 1);
/// column numbers are 1-based.
pub fn ingest_dataset(path: &Path) -> Result<Dataset> {
    let fail = |row: Option<usize>, column: Option<usize>, message: String| Error::Ingestion {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };
    let file = File::open(path).map_err(|e| fail(None, None, e.to_string()))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| fail(None, None, e.to_string()))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(fail(None, None, "file is empty".into()));
    }
    if headers.len() < 2 {
        return Err(fail(Some(1), None, "need at least one feature column and a label column".into()));
    }
    let width = headers.len();
    let names: Vec<String> = headers.iter().take(width - 1).map(str::to_owned).collect();

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map(|p| p.line() as usize);
            fail(row, None, e.to_string())
        })?;
        let row = record.position().map_or(features.len() + 2, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(fail(Some(row), None, format!("expected {width} fields, found {}", record.len())));
        }
        let mut values = Vec::with_capacity(width - 1);
        for (col, cell) in record.iter().take(width - 1).enumerate() {
            if cell.is_empty() {
                return Err(fail(Some(row), Some(col + 1), "missing value".into()));
            }
            let v: f64 =
                cell.parse().map_err(|_| fail(Some(row), Some(col + 1), format!("'{cell}' is not a number")))?;
            if !v.is_finite() {
                return Err(fail(Some(row), Some(col + 1), format!("'{cell}' is not finite")));
            }
            values.push(v);
        }
        let label_cell = &record[width - 1];
        let label: ClassLabel = label_cell
            .parse()
            .map_err(|_| fail(Some(row), Some(width), format!("label '{label_cell}' is not 1 or 2")))?;
        features.push(values);
        labels.push(label);
    }
    if features.is_empty() {
        return Err(fail(None, None, "no data rows".into()));
    }
    Dataset::with_names(features, labels, names)
}
