// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Serialized command outputs and the JSON matrix input format.

use std::io::{self, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::EvolutionComparison;
use crate::fidelity::MethodKind;
use crate::statemath::ComplexMatrix;
use crate::sweep::Gate;

/// Parameters echoed with a fidelity report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityParams {
    pub omega: f64,
    pub eta: f64,
    pub n_ions: u32,
    pub phi: f64,
    pub tau: f64,
    /// Gate duration (s).
    pub time: f64,
    /// Monte Carlo draws; absent for deterministic methods.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub gate: Gate,
    pub method: MethodKind,
    pub fidelity: f64,
    pub one_minus_fidelity: f64,
    pub stderr: f64,
    pub params: FidelityParams,
}

/// Header of the `evolve` CSV.
pub const EVOLVE_CSV_HEADER: &str = "time,trace_distance,max_offdiag_error";

pub fn write_evolution_csv<W: Write>(mut w: W, c: &EvolutionComparison) -> io::Result<()> {
    writeln!(w, "{EVOLVE_CSV_HEADER}")?;
    for ((t, d), o) in c
        .times
        .iter()
        .zip(&c.trace_distance)
        .zip(&c.max_offdiag_error)
    {
        writeln!(w, "{t:.11e},{d:.11e},{o:.11e}")?;
    }
    Ok(())
}

/// Malformed matrix file. `row` and `column` are zero-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixFormatError {
    #[error("not valid JSON: {0}")]
    Json(String),
    #[error("expected a non-empty list of rows")]
    NotRows,
    #[error("row {row}: expected a list of {expected} entries")]
    BadRow { row: usize, expected: usize },
    #[error("row {row}, column {column}: expected a [re, im] pair of numbers")]
    BadEntry { row: usize, column: usize },
}

/// Parses `[[[re, im], ...], ...]` into a square complex matrix.
pub fn parse_matrix_json(text: &str) -> Result<ComplexMatrix, MatrixFormatError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| MatrixFormatError::Json(e.to_string()))?;
    let rows = v
        .as_array()
        .filter(|r| !r.is_empty())
        .ok_or(MatrixFormatError::NotRows)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (row, r) in rows.iter().enumerate() {
        let entries = r
            .as_array()
            .filter(|e| e.len() == n)
            .ok_or(MatrixFormatError::BadRow { row, expected: n })?;
        let mut parsed = Vec::with_capacity(n);
        for (column, e) in entries.iter().enumerate() {
            let bad = MatrixFormatError::BadEntry { row, column };
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or(bad.clone())?;
            let re = pair[0].as_f64().ok_or(bad.clone())?;
            let im = pair[1].as_f64().ok_or(bad)?;
            parsed.push(C64::new(re, im));
        }
        out.push(parsed);
    }
    Ok(ComplexMatrix::from_rows(&out).expect("rows are square by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_square_matrix() {
        let m = parse_matrix_json("[[[0,0],[1,-2]],[[1,2],[3.5,0]]]").unwrap();
        assert_eq!(m[(0, 1)], C64::new(1.0, -2.0));
        assert_eq!(m[(1, 1)], C64::new(3.5, 0.0));
    }

    #[test]
    fn errors_name_position() {
        assert_eq!(
            parse_matrix_json("[[[0,0],[1,0]],[[1,0],[1]]]").unwrap_err(),
            MatrixFormatError::BadEntry { row: 1, column: 1 }
        );
        assert_eq!(
            parse_matrix_json("[[[0,0],[1,0]],[[1,0]]]").unwrap_err(),
            MatrixFormatError::BadRow {
                row: 1,
                expected: 2
            }
        );
        assert_eq!(
            parse_matrix_json("[]").unwrap_err(),
            MatrixFormatError::NotRows
        );
        assert!(matches!(
            parse_matrix_json("{").unwrap_err(),
            MatrixFormatError::Json(_)
        ));
    }

    #[test]
    fn report_round_trip() {
        let r = FidelityReport {
            gate: Gate::TwoBit,
            method: MethodKind::MonteCarlo,
            fidelity: 0.998_821_3,
            one_minus_fidelity: 1.178_7e-3,
            stderr: 3.1e-7,
            params: FidelityParams {
                omega: 1e5,
                eta: 0.1,
                n_ions: 20,
                phi: 0.0,
                tau: 1e-8,
                time: 5.6e-3,
                samples: Some(1000),
                seed: Some(0),
            },
        };
        let a = serde_json::to_string_pretty(&r).unwrap();
        let back: FidelityReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), a);
        assert!(a.contains("\"gate\": \"two-bit\"") && a.contains("\"method\": \"monte_carlo\""));
    }

    proptest::proptest! {
        #[test]
        fn report_json_round_trips_bytes(
            f in 0.0f64..=1.0,
            se in 0.0f64..1e-2,
            omega in 1.0f64..1e9,
            tau in 0.0f64..1e-3,
            ions in 1u32..1000,
            mc in proptest::bool::ANY,
        ) {
            let r = FidelityReport {
                gate: if mc { Gate::TwoBit } else { Gate::OneBit },
                method: if mc { MethodKind::MonteCarlo } else { MethodKind::Analytic },
                fidelity: f,
                one_minus_fidelity: 1.0 - f,
                stderr: se,
                params: FidelityParams {
                    omega, eta: 0.1, n_ions: ions, phi: 0.0, tau, time: 1.0 / omega,
                    samples: mc.then_some(1000), seed: mc.then_some(9),
                },
            };
            let a = serde_json::to_string_pretty(&r).unwrap();
            let back: FidelityReport = serde_json::from_str(&a).unwrap();
            proptest::prop_assert_eq!(serde_json::to_string_pretty(&back).unwrap(), a);
        }
    }
}
