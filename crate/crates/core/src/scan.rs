//! Sweeps of the isotropic family.

use serde::Serialize;

use crate::criteria::ppt_min_eigenvalue;
use crate::error::{out_of_range, Result};
use crate::fef::USEFUL_GUARD;
use crate::states::{check_dim, isotropic_beta_min, isotropic_state, singlet_overlap};
use crate::witness::{classify_schmidt_range, expectation, witness_tw_from_overlap};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub beta: f64,
    /// Singlet overlap; equals the FEF on this family for `β ≥ 0`.
    pub overlap: f64,
    pub tw_expectation: f64,
    pub ppt_min_eig: f64,
    pub schmidt_class: usize,
    pub useful: bool,
}

/// Evaluates `steps` evenly spaced `β` values in `[beta_min, beta_max]`.
pub fn scan_isotropic(d: usize, f0: f64, beta_min: f64, beta_max: f64, steps: usize) -> Result<Vec<ScanRow>> {
    check_dim(d)?;
    if steps < 2 {
        return Err(out_of_range("steps", steps as f64, ">= 2"));
    }
    let lo = isotropic_beta_min(d);
    if !(beta_min >= lo - 1e-12 && beta_min <= 1.0 + 1e-12) {
        return Err(out_of_range("beta_min", beta_min, format!("[{lo}, 1]")));
    }
    if !(beta_max >= lo - 1e-12 && beta_max <= 1.0 + 1e-12) {
        return Err(out_of_range("beta_max", beta_max, format!("[{lo}, 1]")));
    }
    if !(beta_max > beta_min) {
        return Err(out_of_range("beta_max", beta_max, format!("> beta_min = {beta_min}")));
    }
    let w = witness_tw_from_overlap(d, f0)?;
    let useful_at = 1.0 / d as f64 + USEFUL_GUARD;
    (0..steps)
        .map(|k| {
            let beta = if k + 1 == steps {
                beta_max
            } else {
                beta_min + (beta_max - beta_min) * k as f64 / (steps - 1) as f64
            };
            let rho = isotropic_state(d, beta)?;
            let overlap = singlet_overlap(&rho)?;
            Ok(ScanRow {
                beta,
                overlap,
                tw_expectation: expectation(&w, &rho)?,
                ppt_min_eig: ppt_min_eigenvalue(&rho),
                schmidt_class: classify_schmidt_range(d, beta)?,
                useful: overlap > useful_at,
            })
        })
        .collect()
}

/// Consecutive grid points `(β_k, β_{k+1})` where `f` changes sign.
pub fn sign_changes(rows: &[ScanRow], f: impl Fn(&ScanRow) -> f64) -> Vec<(f64, f64)> {
    rows.windows(2)
        .filter(|w| (f(&w[0]) >= 0.0) != (f(&w[1]) >= 0.0))
        .map(|w| (w[0].beta, w[1].beta))
        .collect()
}
