use std::collections::HashMap;
use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Which column of an input table holds the ground-truth class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    /// Header name; requires a header row.
    Name(String),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(if s == "last" {
            LabelColumn::Last
        } else {
            LabelColumn::Name(s.to_string())
        })
    }
}

/// Read a comma-separated numeric table.
///
/// Label values may be arbitrary strings; they are re-indexed to `0..k` in order of
/// first appearance. Every other cell must parse as a finite real.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: Option<&LabelColumn>,
    has_header: bool,
) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Data(format!("cannot open {}: {e}", path.display())))?;

    let header_width = if has_header {
        Some(reader.headers()?.len())
    } else {
        None
    };
    let label_idx = match (label_column, has_header) {
        (None, _) => None,
        (Some(LabelColumn::Last), _) => Some(usize::MAX),
        (Some(LabelColumn::Name(name)), true) => {
            let idx = reader
                .headers()?
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| {
                    Error::Data(format!(
                        "label column {name:?} not found in header of {}",
                        path.display()
                    ))
                })?;
            Some(idx)
        }
        (Some(LabelColumn::Name(name)), false) => {
            return Err(Error::Data(format!(
                "label column {name:?} given by name but the file has no header row"
            )))
        }
    };

    let mut width = header_width;
    let mut buf = Vec::new();
    let mut raw_labels = Vec::new();
    let mut label_ids: HashMap<String, usize> = HashMap::new();
    for record in reader.records() {
        let record = record?;
        let row = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                row,
                column: record.len().min(expected) + 1,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        let label_at = label_idx.map(|i| if i == usize::MAX { expected - 1 } else { i });
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_at {
                let next = label_ids.len();
                raw_labels.push(*label_ids.entry(cell.to_string()).or_insert(next));
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: col + 1,
                message: format!("cannot parse {cell:?} as a number"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: col + 1,
                    message: format!("non-finite value {cell:?}"),
                });
            }
            buf.push(value);
        }
    }

    let width = width.unwrap_or(0);
    let d = width.saturating_sub(usize::from(label_idx.is_some()));
    if buf.is_empty() || d == 0 {
        return Err(Error::Data(format!(
            "{} contains no feature data",
            path.display()
        )));
    }
    Dataset::new(buf, d, label_idx.map(|_| raw_labels)).map_err(|e| Error::Data(e.to_string()))
}
