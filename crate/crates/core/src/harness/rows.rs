use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Column order of trace CSVs. `wall_time_ms` is last so that determinism
/// checks can drop it by truncating each line at the final comma.
pub const TRACE_COLUMNS: [&str; 12] = [
    "experiment",
    "algorithm",
    "variant",
    "dim",
    "q",
    "seed",
    "iteration",
    "evaluations",
    "best_value",
    "optimality_gap",
    "status",
    "wall_time_ms",
];

/// One iteration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub experiment: String,
    pub algorithm: String,
    /// Experiment-specific axis, e.g. `transformed`, `z=4`, `latent-search`.
    pub variant: String,
    pub dim: usize,
    pub q: f64,
    pub seed: u64,
    pub iteration: u64,
    pub evaluations: u64,
    pub best_value: f64,
    pub optimality_gap: Option<f64>,
    /// `ok`, `target`, `truncated`, or `error: <message>`.
    pub status: String,
    pub wall_time_ms: f64,
}

pub const GEOMETRY_COLUMNS: [&str; 16] = [
    "experiment",
    "check",
    "dim",
    "q",
    "r1",
    "r2",
    "ell",
    "rung",
    "seed",
    "samples",
    "estimate",
    "stderr",
    "exact",
    "bound",
    "satisfied",
    "note",
];

/// One grid point of a geometric verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryRow {
    pub experiment: String,
    pub check: String,
    pub dim: usize,
    pub q: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub ell: Option<f64>,
    pub rung: Option<f64>,
    pub seed: u64,
    pub samples: u64,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub exact: Option<f64>,
    pub bound: Option<f64>,
    pub satisfied: bool,
    pub note: String,
}

impl GeometryRow {
    pub(crate) fn new(experiment: &str, check: &str, dim: usize, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            check: check.into(),
            dim,
            q: None,
            r1: None,
            r2: None,
            ell: None,
            rung: None,
            seed,
            samples: 0,
            estimate: f64::NAN,
            stderr: None,
            exact: None,
            bound: None,
            satisfied: false,
            note: String::new(),
        }
    }
}

pub const SUMMARY_COLUMNS: [&str; 14] = [
    "experiment",
    "algorithm",
    "variant",
    "dim",
    "q",
    "runs",
    "failed_runs",
    "target_gap",
    "reached_target",
    "median_evals_to_target",
    "final_gap_min",
    "final_gap_q25",
    "final_gap_median",
    "final_gap_q75",
];

/// Aggregate over the seeds of one `(experiment, algorithm, variant, dim, q)`
/// cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub algorithm: String,
    pub variant: String,
    pub dim: usize,
    pub q: f64,
    pub runs: usize,
    pub failed_runs: usize,
    pub target_gap: Option<f64>,
    pub reached_target: usize,
    /// Lower median over all runs, counting runs that missed the target as
    /// `+inf`; empty when that median is infinite.
    pub median_evals_to_target: Option<u64>,
    pub final_gap_min: Option<f64>,
    pub final_gap_q25: Option<f64>,
    pub final_gap_median: Option<f64>,
    pub final_gap_q75: Option<f64>,
}

/// Buffered CSV writer that flushes after each batch, so a run's rows land
/// together.
pub struct CsvSink {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvSink {
    /// Create (truncate) `path` and write `header`.
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            if !parent.is_dir() {
                return Err(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("output directory {} does not exist", parent.display()),
                )
                .into());
            }
        }
        let file = File::create(path)?;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(BufWriter::new(file));
        writer.write_record(header)?;
        writer.flush()?;
        Ok(Self {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn write_batch<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        for row in rows {
            self.writer.serialize(row)?;
        }
        self.writer.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        self.writer.into_inner().map_err(|e| e.into_error())?.flush()?;
        Ok(())
    }
}

/// Write `rows` to a fresh CSV at `path`.
pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut sink = CsvSink::create(path, header)?;
    sink.write_batch(rows)?;
    sink.finish()
}

/// Read every row of a CSV whose header must equal `header`.
pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(path, reader.headers()?, header)?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub(crate) fn check_header(path: &Path, found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let mismatch = |column: &str| crate::error::Error::Schema {
        path: path.display().to_string(),
        column: column.to_string(),
    };
    for (i, want) in expected.iter().enumerate() {
        match found.get(i) {
            Some(got) if got == *want => {}
            Some(got) => return Err(mismatch(got)),
            None => return Err(mismatch(want)),
        }
    }
    if let Some(extra) = found.get(expected.len()) {
        return Err(mismatch(extra));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(gap: Option<f64>) -> TraceRow {
        TraceRow {
            experiment: "ConvergenceByDim".into(),
            algorithm: "gld-fast".into(),
            variant: "base".into(),
            dim: 10,
            q: 8.0,
            seed: 1,
            iteration: 3,
            evaluations: 40,
            best_value: 1.25e-7,
            optimality_gap: gap,
            status: "ok".into(),
            wall_time_ms: 0.5,
        }
    }

    #[test]
    fn trace_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![row(Some(1.25e-7)), row(None)];
        write_csv(&path, &TRACE_COLUMNS, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&TRACE_COLUMNS.join(",")));
        // absent gap is an empty field
        assert!(text.lines().nth(2).unwrap().contains("1.25e-7,,ok"));
        let back: Vec<TraceRow> = read_csv(&path, &TRACE_COLUMNS).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn header_mismatch_names_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "experiment,algorithm,flavour\n").unwrap();
        let err = read_csv::<TraceRow>(&path, &TRACE_COLUMNS).unwrap_err();
        assert!(err.to_string().contains("flavour"), "{err}");

        std::fs::write(&path, "experiment,algorithm\n").unwrap();
        let err = read_csv::<TraceRow>(&path, &TRACE_COLUMNS).unwrap_err();
        assert!(err.to_string().contains("variant"), "{err}");
    }

    #[test]
    fn missing_directory_is_io_error() {
        let err = CsvSink::create(Path::new("/nonexistent-dir/x/t.csv"), &TRACE_COLUMNS)
            .err()
            .unwrap();
        assert!(err.is_io());
    }

    #[test]
    fn geometry_row_serializes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let mut r = GeometryRow::new("GeometryGrid", "cap-oracle", 5, 3);
        r.estimate = 0.25;
        r.satisfied = true;
        write_csv(&path, &GEOMETRY_COLUMNS, &[r.clone()]).unwrap();
        let back: Vec<GeometryRow> = read_csv(&path, &GEOMETRY_COLUMNS).unwrap();
        assert_eq!(back[0].check, "cap-oracle");
        assert!(back[0].satisfied);
        assert_eq!(back[0].q, None);
    }
}
