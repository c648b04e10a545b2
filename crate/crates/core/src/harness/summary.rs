use std::path::Path;

use crate::error::Result;
use crate::objectives::TransformId;

use super::rows::{read_csv, SummaryRow, TraceRow, TRACE_COLUMNS};
use super::runner::gap_equivalent_target;

/// Element at index `(m - 1) / 2` of the sorted values; for even `m` this is
/// the smaller of the two middle elements.
pub fn lower_median<T: Copy + PartialOrd>(values: &[T]) -> Option<T> {
    lower_quantile(values, 0.5)
}

/// Element at index `floor(p (m - 1))` of the sorted values.
pub fn lower_quantile<T: Copy + PartialOrd>(values: &[T], p: f64) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let idx = (p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64).floor() as usize;
    Some(sorted[idx])
}

type CellKey = (String, String, String, usize, u64);

fn cell_key(row: &TraceRow) -> CellKey {
    (
        row.experiment.clone(),
        row.algorithm.clone(),
        row.variant.clone(),
        row.dim,
        row.q.to_bits(),
    )
}

struct RunStats {
    failed: bool,
    evals_to_target: Option<u64>,
    final_gap: Option<f64>,
}

/// Aggregate trace rows per `(experiment, algorithm, variant, dim, q)`.
///
/// Cells appear in order of first occurrence. Within a cell, rows of one
/// seed form one run. Rows of the `transformed` variant are compared against
/// the gap-equivalent target under `-exp(-√y)`.
pub fn summarize_rows(rows: &[TraceRow], target_gap: Option<f64>) -> Vec<SummaryRow> {
    let mut cells: Vec<(CellKey, Vec<(u64, RunStats)>)> = Vec::new();
    for row in rows {
        let key = cell_key(row);
        let idx = match cells.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                cells.push((key, Vec::new()));
                cells.len() - 1
            }
        };
        let runs = &mut cells[idx].1;
        let run_idx = match runs.iter().position(|(s, _)| *s == row.seed) {
            Some(i) => i,
            None => {
                runs.push((
                    row.seed,
                    RunStats {
                        failed: false,
                        evals_to_target: None,
                        final_gap: None,
                    },
                ));
                runs.len() - 1
            }
        };
        let stats = &mut runs[run_idx].1;
        stats.failed |= row.status.starts_with("error");
        stats.final_gap = row.optimality_gap;
        if let (Some(t), Some(g), None) = (target_gap, row.optimality_gap, stats.evals_to_target) {
            let transform = if row.variant == "transformed" {
                TransformId::NegExpNegSqrt
            } else {
                TransformId::Identity
            };
            if g <= gap_equivalent_target(transform, t) {
                stats.evals_to_target = Some(row.evaluations);
            }
        }
    }

    cells
        .into_iter()
        .map(|((experiment, algorithm, variant, dim, q_bits), runs)| {
            let evals: Vec<u64> = runs
                .iter()
                .map(|(_, r)| r.evals_to_target.unwrap_or(u64::MAX))
                .collect();
            let gaps: Vec<f64> = runs.iter().filter_map(|(_, r)| r.final_gap).collect();
            SummaryRow {
                experiment,
                algorithm,
                variant,
                dim,
                q: f64::from_bits(q_bits),
                runs: runs.len(),
                failed_runs: runs.iter().filter(|(_, r)| r.failed).count(),
                target_gap,
                reached_target: runs.iter().filter(|(_, r)| r.evals_to_target.is_some()).count(),
                median_evals_to_target: target_gap
                    .and_then(|_| lower_median(&evals))
                    .filter(|&m| m != u64::MAX),
                final_gap_min: lower_quantile(&gaps, 0.0),
                final_gap_q25: lower_quantile(&gaps, 0.25),
                final_gap_median: lower_quantile(&gaps, 0.5),
                final_gap_q75: lower_quantile(&gaps, 0.75),
            }
        })
        .collect()
}

/// Read trace CSVs (all with the trace schema) and aggregate them.
pub fn summarize_traces<P: AsRef<Path>>(paths: &[P], target_gap: Option<f64>) -> Result<Vec<SummaryRow>> {
    let mut rows: Vec<TraceRow> = Vec::new();
    for path in paths {
        rows.extend(read_csv::<TraceRow>(path.as_ref(), &TRACE_COLUMNS)?);
    }
    Ok(summarize_rows(&rows, target_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::harness::rows::write_csv;

    fn row(seed: u64, evaluations: u64, gap: f64) -> TraceRow {
        TraceRow {
            experiment: "e".into(),
            algorithm: "gld-fast".into(),
            variant: "base".into(),
            dim: 10,
            q: 8.0,
            seed,
            iteration: evaluations / 10,
            evaluations,
            best_value: gap,
            optimality_gap: Some(gap),
            status: "ok".into(),
            wall_time_ms: 1.0,
        }
    }

    #[test]
    fn lower_median_rule() {
        assert_eq!(lower_median(&[100u64, 300]), Some(100));
        assert_eq!(lower_median(&[3u64, 1, 2]), Some(2));
        assert_eq!(lower_median::<u64>(&[]), None);
        assert_eq!(lower_quantile(&[4.0, 1.0, 3.0, 2.0], 0.25), Some(1.0));
        assert_eq!(lower_quantile(&[4.0, 1.0, 3.0, 2.0], 1.0), Some(4.0));
    }

    #[test]
    fn single_run_summary_equals_run() {
        let rows = vec![row(1, 10, 1.0), row(1, 20, 0.05), row(1, 30, 0.001)];
        let s = summarize_rows(&rows, Some(0.01));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].runs, 1);
        assert_eq!(s[0].median_evals_to_target, Some(30));
        assert_eq!(s[0].final_gap_median, Some(0.001));
        assert_eq!(s[0].final_gap_min, Some(0.001));
        assert_eq!(s[0].final_gap_q75, Some(0.001));
    }

    #[test]
    fn two_runs_take_lower_median() {
        let rows = vec![row(1, 100, 1e-4), row(2, 300, 1e-4)];
        let s = summarize_rows(&rows, Some(1e-3));
        assert_eq!(s[0].median_evals_to_target, Some(100));
        assert_eq!(s[0].reached_target, 2);
    }

    #[test]
    fn misses_count_as_infinite() {
        let rows = vec![row(1, 100, 1e-4), row(2, 300, 1.0), row(3, 50, 1.0)];
        let s = summarize_rows(&rows, Some(1e-3));
        assert_eq!(s[0].median_evals_to_target, None);
        let rows = vec![row(1, 100, 1e-4), row(2, 300, 1e-4), row(3, 50, 1.0)];
        assert_eq!(summarize_rows(&rows, Some(1e-3))[0].median_evals_to_target, Some(300));
    }

    #[test]
    fn cells_split_by_variant() {
        let mut b = row(1, 10, 0.5);
        b.variant = "transformed".into();
        let s = summarize_rows(&[row(1, 10, 0.5), b], None);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].median_evals_to_target, None);
    }

    #[test]
    fn files_round_trip_and_schema_errors() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_csv(&a, &TRACE_COLUMNS, &[row(1, 100, 1e-4)]).unwrap();
        write_csv(&b, &TRACE_COLUMNS, &[row(2, 300, 1e-4)]).unwrap();
        let s = summarize_traces(&[&a, &b], Some(1e-3)).unwrap();
        assert_eq!(s[0].runs, 2);
        assert_eq!(s[0].median_evals_to_target, Some(100));

        let bad = dir.path().join("bad.csv");
        let text = std::fs::read_to_string(&a).unwrap().replacen("best_value", "bestvalue", 1);
        std::fs::write(&bad, text).unwrap();
        match summarize_traces(&[&a, &bad], None) {
            Err(Error::Schema { column, .. }) => assert_eq!(column, "bestvalue"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }
}
