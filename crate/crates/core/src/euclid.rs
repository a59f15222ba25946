//! Points in Euclidean space: cutoff density as importance, L2 distance.
//! Fed to the generic builder these reproduce the density-peaks leading tree.

use crate::distance::{DistanceMatrix, DistanceMetric};
use crate::error::{GltError, Result};
use crate::importance::{ImportanceCriterion, ImportanceTable};

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Row-major coordinates, `dim` per point.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(GltError::InvalidParameter(
                "points need at least one dimension".into(),
            ));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(GltError::InvalidParameter(format!(
                "{} coordinates do not split into {dim}-dimensional points",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GltError::InvalidParameter(
                "coordinates must be finite".into(),
            ));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != dim) {
            return Err(GltError::InvalidParameter(
                "rows have different lengths".into(),
            ));
        }
        Self::new(
            dim,
            rows.iter()
                .flat_map(|r| r.as_ref().iter().copied())
                .collect(),
        )
    }

    /// One point per CSV row. A first row that does not parse as numbers is
    /// taken as a header; `#` starts a comment line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut dim = 0;
        let mut coords = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| GltError::Parse {
                line: e.position().map_or(i + 1, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(i + 1, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            let row = match parsed {
                Ok(row) => row,
                Err(_) if i == 0 => continue,
                Err(_) => {
                    return Err(GltError::Parse {
                        line,
                        message: "non-numeric coordinate".into(),
                    });
                }
            };
            if dim == 0 {
                dim = row.len();
            } else if row.len() != dim {
                return Err(GltError::Parse {
                    line,
                    message: format!("expected {dim} columns, found {}", row.len()),
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(GltError::Parse {
                    line,
                    message: "coordinates must be finite".into(),
                });
            }
            coords.extend(row);
        }
        if dim == 0 {
            return Err(GltError::Parse {
                line: 0,
                message: "no points found".into(),
            });
        }
        Self::new(dim, coords)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Labels `"0".."m-1"` in row order.
    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| i.to_string()).collect()
    }
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn euclidean_distance_matrix(p: &PointSet) -> DistanceMatrix {
    let m = p.len();
    let mut data = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let d = l2(p.point(i), p.point(j));
            data[i * m + j] = d;
            data[j * m + i] = d;
        }
    }
    DistanceMatrix::from_rows_unchecked(m, data, DistanceMetric::Euclidean)
}

/// Cutoff-kernel density: the number of other points strictly closer
/// than `dc`.
pub fn density_importance(p: &PointSet, dc: f64) -> Result<ImportanceTable> {
    if !(dc > 0.0) {
        return Err(GltError::InvalidParameter(format!(
            "cutoff distance must be positive, got {dc}"
        )));
    }
    let m = p.len();
    let mut counts = vec![0usize; m];
    for i in 0..m {
        for j in i + 1..m {
            if l2(p.point(i), p.point(j)) < dc {
                counts[i] += 1;
                counts[j] += 1;
            }
        }
    }
    ImportanceTable::new(
        counts.into_iter().map(|c| c as f64).collect(),
        ImportanceCriterion::Density,
    )
}
