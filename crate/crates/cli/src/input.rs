//! Sample files: one value per line, optional second column of weights,
//! optional header line.

use std::path::Path;

use licorm::measures::DiscreteMeasure;

use crate::error::{CliError, CliResult};

/// Snapping radius used by `--snap-atoms`.
pub const SNAP_RADIUS: f64 = 1e-12;

/// Parsed sample columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub values: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl Samples {
    pub fn to_measure(&self, snap: bool) -> CliResult<DiscreteMeasure<f64>> {
        let weights = self.weights.as_deref();
        let m = if snap {
            DiscreteMeasure::from_samples_snapped(&self.values, weights, SNAP_RADIUS)?
        } else {
            DiscreteMeasure::from_samples(&self.values, weights)?
        };
        Ok(m)
    }
}

pub fn read_samples(path: &Path) -> CliResult<Samples> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_samples(&text)
}

/// The first record is a header when its first field is not a number.
pub fn parse_samples(text: &str) -> CliResult<Samples> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut weighted = None;
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::parse(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if index == 0 && record[0].parse::<f64>().is_err() {
            continue;
        }
        let has_weight = match record.len() {
            1 => false,
            2 => true,
            n => return Err(CliError::parse(format!("line {line}: expected 1 or 2 columns, found {n}"))),
        };
        if *weighted.get_or_insert(has_weight) != has_weight {
            return Err(CliError::parse(format!("line {line}: weight column present on some lines only")));
        }
        values.push(number(&record[0], line)?);
        if has_weight {
            weights.push(number(&record[1], line)?);
        }
    }
    if values.is_empty() {
        return Err(CliError::parse("input contains no samples"));
    }
    Ok(Samples {
        values,
        weights: weighted.unwrap_or(false).then_some(weights),
    })
}

fn number(field: &str, line: u64) -> CliResult<f64> {
    field
        .parse()
        .map_err(|_| CliError::parse(format!("line {line}: {field:?} is not a number")))
}
