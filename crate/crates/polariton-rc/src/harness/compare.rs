//! Resource comparison between the quantum and classical reservoirs: for a
//! set of error thresholds, the smallest Fock dimension N (reported as
//! effective qubits log₂N) versus the smallest lattice size N_c whose mean
//! error reaches the threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::Mode;
use crate::harness::record::ResultRecord;

/// Effective qubit count N_q = log₂ N of an N-level reservoir.
pub fn effective_qubits(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid(format!("size must be ≥ 1, got {n}")));
    }
    Ok((n as f64).log2())
}

/// One threshold row; `None` sizes mark thresholds no swept size reached
/// (rendered as "unbounded").
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub threshold: f64,
    pub quantum_size: Option<usize>,
    pub effective_qubits: Option<f64>,
    pub classical_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    /// Rows sorted by threshold, descending.
    pub rows: Vec<ComparisonRow>,
}

pub const DEFAULT_THRESHOLDS: [f64; 6] = [0.30, 0.25, 0.20, 0.18, 0.16, 0.14];

fn min_size_reaching(records: &[ResultRecord], threshold: f64) -> Option<usize> {
    records
        .iter()
        .filter(|r| r.mean_error <= threshold)
        .map(|r| r.size)
        .min()
}

/// Pair each threshold with the minimum resources per system, using the
/// mean-error curves. Warns on stderr when no threshold is achieved by both.
pub fn build_comparison(
    quantum: &[ResultRecord],
    classical: &[ResultRecord],
    thresholds: &[f64],
) -> Result<ComparisonTable> {
    if quantum.iter().any(|r| r.mode != Mode::Quantum)
        || classical.iter().any(|r| r.mode != Mode::Classical)
    {
        return Err(Error::Config(
            "comparison inputs must be quantum records then classical records".into(),
        ));
    }
    let mut sorted: Vec<f64> = thresholds.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite thresholds"));
    sorted.dedup();
    let rows: Vec<ComparisonRow> = sorted
        .into_iter()
        .map(|threshold| {
            let quantum_size = min_size_reaching(quantum, threshold);
            ComparisonRow {
                threshold,
                quantum_size,
                effective_qubits: quantum_size.map(|n| effective_qubits(n).expect("n ≥ 1")),
                classical_size: min_size_reaching(classical, threshold),
            }
        })
        .collect();
    if !rows
        .iter()
        .any(|r| r.quantum_size.is_some() && r.classical_size.is_some())
    {
        eprintln!("warning: no threshold achieved by both systems; table rows are one-sided");
    }
    Ok(ComparisonTable { rows })
}

impl ComparisonTable {
    /// Plain-text rendering, one row per threshold.
    pub fn render(&self) -> String {
        let mut out = String::from("threshold  N_q (qubits)  quantum N  classical N_c\n");
        for row in &self.rows {
            let nq = row
                .effective_qubits
                .map_or("unbounded".to_string(), |q| format!("{q:.2}"));
            let n = row
                .quantum_size
                .map_or("unbounded".to_string(), |n| n.to_string());
            let nc = row
                .classical_size
                .map_or("unbounded".to_string(), |n| n.to_string());
            out.push_str(&format!(
                "{:>9.3}  {:>12}  {:>9}  {:>13}\n",
                row.threshold, nq, n, nc
            ));
        }
        out
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serialize comparison: {e}")))?;
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExperimentConfig;
    use crate::harness::record::{RealizationOutcome, SeedLedger};

    fn record(mode: Mode, size: usize, mean: f64) -> ResultRecord {
        let mut cfg = ExperimentConfig::default();
        cfg.mode = mode;
        ResultRecord::from_outcomes(
            mode,
            None,
            size,
            cfg.canonical(),
            SeedLedger::new(0, &[], 1),
            vec![RealizationOutcome {
                realization: 0,
                error_rate: mean,
                train_error_rate: mean,
                mean_leakage: None,
                max_leakage: None,
            }],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn effective_qubits_matches_log2() {
        assert_eq!(effective_qubits(16).unwrap(), 4.0);
        assert_eq!(effective_qubits(1).unwrap(), 0.0);
        assert!((effective_qubits(10).unwrap() - 3.321928094887362).abs() < 1e-12);
        assert!(effective_qubits(0).is_err());
    }

    #[test]
    fn rows_sort_descending_with_monotone_resources() {
        let q = vec![
            record(Mode::Quantum, 4, 0.28),
            record(Mode::Quantum, 8, 0.20),
            record(Mode::Quantum, 16, 0.13),
        ];
        let c = vec![
            record(Mode::Classical, 16, 0.30),
            record(Mode::Classical, 100, 0.18),
            record(Mode::Classical, 400, 0.14),
        ];
        let table = build_comparison(&q, &c, &[0.14, 0.30, 0.20, 0.18]).unwrap();
        let ts: Vec<f64> = table.rows.iter().map(|r| r.threshold).collect();
        assert_eq!(ts, vec![0.30, 0.20, 0.18, 0.14]);
        // Required sizes never shrink as the threshold tightens.
        for side in [
            table.rows.iter().map(|r| r.quantum_size).collect::<Vec<_>>(),
            table.rows.iter().map(|r| r.classical_size).collect::<Vec<_>>(),
        ] {
            for pair in side.windows(2) {
                match (pair[0], pair[1]) {
                    (Some(a), Some(b)) => assert!(b >= a),
                    (None, Some(_)) => panic!("resource became bounded as threshold tightened"),
                    _ => {}
                }
            }
        }
        // 14% row: quantum reaches it at N=16 (4 qubits), classical at 400.
        let last = table.rows.last().unwrap();
        assert_eq!(last.quantum_size, Some(16));
        assert_eq!(last.effective_qubits, Some(4.0));
        assert_eq!(last.classical_size, Some(400));
    }

    #[test]
    fn unreachable_threshold_is_marked_unbounded() {
        let q = vec![record(Mode::Quantum, 16, 0.15)];
        let c = vec![record(Mode::Classical, 100, 0.25)];
        let table = build_comparison(&q, &c, &[0.20]).unwrap();
        assert_eq!(table.rows[0].quantum_size, Some(16));
        assert_eq!(table.rows[0].classical_size, None);
        assert!(table.render().contains("unbounded"));
    }

    #[test]
    fn mode_mixups_are_rejected() {
        let q = vec![record(Mode::Quantum, 16, 0.15)];
        let c = vec![record(Mode::Classical, 100, 0.25)];
        assert!(build_comparison(&c, &q, &[0.2]).is_err());
    }
}
