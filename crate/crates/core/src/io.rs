//! File formats.
//!
//! States and witnesses are JSON objects holding a row-major matrix of
//! `[re, im]` pairs:
//!
//! ```json
//! {"d_a": 2, "d_b": 2, "matrix": [[[0.5, 0.0], ...], ...]}
//! ```
//!
//! Witness files add `"kind"` (`W`, `TW`, `TW_SCALAR`, `W_OPT`) and
//! `"params"`. Tables are written as CSV with `.` decimals, LF line endings
//! and reals printed with 17 significant digits.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::decomp::DecompositionReport;
use crate::error::{Error, Result};
use crate::qla::{CMatrix, C64};
use crate::scan::ScanRow;
use crate::states::DensityMatrix;
use crate::witness::{Witness, WitnessKind};

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    d_a: usize,
    d_b: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    params: Option<Map<String, Value>>,
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn parse_matrix_file(text: &str) -> Result<(MatrixFile, CMatrix)> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.d_a * file.d_b;
    if n == 0 {
        return Err(Error::Parse("subsystem dimensions must be positive".into()));
    }
    if file.matrix.len() != n {
        return Err(Error::Parse(format!(
            "matrix has {} rows, expected {n} for a {}x{} system",
            file.matrix.len(),
            file.d_a,
            file.d_b
        )));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in file.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    let m = CMatrix::from_vec(n, n, data)?;
    Ok((file, m))
}

/// Parses and validates a state file. Structural problems yield
/// [`Error::Parse`]; violated density-matrix invariants yield
/// [`Error::Invariant`] naming the invariant.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let (file, m) = parse_matrix_file(text)?;
    DensityMatrix::new(file.d_a, file.d_b, m)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let file = MatrixFile {
        d_a: rho.d_a(),
        d_b: rho.d_b(),
        matrix: matrix_rows(rho.matrix()),
        kind: None,
        params: None,
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn witness_to_json(w: &Witness) -> String {
    let mut params = Map::new();
    match w.kind() {
        WitnessKind::W => {}
        WitnessKind::Tw { f0 } => {
            params.insert("f0".into(), f0.into());
        }
        WitnessKind::TwScalar { s } => {
            params.insert("s".into(), s.into());
        }
        WitnessKind::WOpt { r } => {
            params.insert("r".into(), r.into());
        }
    }
    let file = MatrixFile {
        d_a: w.d(),
        d_b: w.d(),
        matrix: matrix_rows(w.matrix()),
        kind: Some(w.kind().name().to_string()),
        params: Some(params),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let (file, m) = parse_matrix_file(text)?;
    if file.d_a != file.d_b {
        return Err(Error::Parse("witness files require d_a == d_b".into()));
    }
    let params = file.params.unwrap_or_default();
    let real = |key: &str| -> Result<f64> {
        params
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse(format!("missing numeric param {key:?}")))
    };
    let kind = match file.kind.as_deref() {
        Some("W") => WitnessKind::W,
        Some("TW") => WitnessKind::Tw { f0: real("f0")? },
        Some("TW_SCALAR") => WitnessKind::TwScalar { s: real("s")? },
        Some("W_OPT") => WitnessKind::WOpt {
            r: params
                .get("r")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("missing integer param \"r\"".into()))? as usize,
        },
        Some(other) => return Err(Error::Parse(format!("unknown witness kind {other:?}"))),
        None => return Err(Error::Parse("missing witness kind".into())),
    };
    Witness::new(file.d_a, m, kind)
}

/// Real number with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn decomposition_csv(report: &DecompositionReport) -> String {
    let mut out = String::from("label_a,label_b,coefficient\n");
    for c in &report.coefficients {
        out.push_str(&format!("{},{},{}\n", c.label_a, c.label_b, fmt_real(c.value)));
    }
    out
}

pub const SCAN_HEADER: &str = "beta,overlap,tw_expectation,ppt_min_eig,schmidt_class,useful";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_real(r.beta),
            fmt_real(r.overlap),
            fmt_real(r.tw_expectation),
            fmt_real(r.ppt_min_eig),
            r.schmidt_class,
            r.useful
        ));
    }
    out
}
