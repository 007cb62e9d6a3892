//! One-shot analysis of a loaded state.

use std::fmt::Write as _;

use serde::Serialize;

use crate::criteria::CriteriaReport;
use crate::error::Result;
use crate::fef::{fef_maximize, FefConfig, USEFUL_GUARD};
use crate::qla::hermitian_eigen;
use crate::states::{singlet_overlap, DensityMatrix};
use crate::witness::{expectation, witness_tw_from_overlap, DETECTION_GUARD};

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub hermiticity_deviation: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FefSummary {
    pub value: f64,
    pub converged: bool,
    pub restarts: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessEvaluation {
    pub f0: f64,
    pub expectation: f64,
    pub detects: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub d_a: usize,
    pub d_b: usize,
    pub diagnostics: Diagnostics,
    pub singlet_overlap: f64,
    pub fef: FefSummary,
    pub ppt_min_eig: f64,
    pub realignment_sum: f64,
    pub useful_for_teleportation: bool,
    /// `T_W` at `f₀ = 1/d, 2/d, …, 1`.
    pub witnesses: Vec<WitnessEvaluation>,
}

pub fn analyze(rho: &DensityMatrix, cfg: &FefConfig) -> Result<AnalysisReport> {
    let d = rho.square_dim()?;
    let m = rho.matrix();
    let diagnostics = Diagnostics {
        hermiticity_deviation: m.hermiticity_deviation(),
        trace: m.trace().re,
        min_eigenvalue: hermitian_eigen(m)?.values[0],
    };
    let crit = CriteriaReport::evaluate(rho)?;
    let fef = fef_maximize(rho, cfg)?;
    let mut witnesses = Vec::with_capacity(d);
    for k in 1..=d {
        let f0 = k as f64 / d as f64;
        let w = witness_tw_from_overlap(d, f0)?;
        let e = expectation(&w, rho)?;
        witnesses.push(WitnessEvaluation {
            f0,
            expectation: e,
            detects: e < -DETECTION_GUARD,
        });
    }
    Ok(AnalysisReport {
        d_a: rho.d_a(),
        d_b: rho.d_b(),
        diagnostics,
        singlet_overlap: singlet_overlap(rho)?,
        useful_for_teleportation: fef.value > 1.0 / d as f64 + USEFUL_GUARD,
        fef: FefSummary {
            value: fef.value,
            converged: fef.converged,
            restarts: fef.restarts_used,
            iterations: fef.iterations,
        },
        ppt_min_eig: crit.ppt_min_eig,
        realignment_sum: crit.realignment_sum,
        witnesses,
    })
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dimensions         {} x {}", self.d_a, self.d_b);
        let _ = writeln!(s, "hermiticity dev    {:.3e}", self.diagnostics.hermiticity_deviation);
        let _ = writeln!(s, "trace              {:.12}", self.diagnostics.trace);
        let _ = writeln!(s, "min eigenvalue     {:.6e}", self.diagnostics.min_eigenvalue);
        let _ = writeln!(s, "singlet overlap    {:.10}", self.singlet_overlap);
        let _ = writeln!(
            s,
            "FEF                {:.10} (converged: {}, restarts: {}, iterations: {})",
            self.fef.value, self.fef.converged, self.fef.restarts, self.fef.iterations
        );
        let _ = writeln!(s, "PPT min eigenvalue {:.6e}", self.ppt_min_eig);
        let _ = writeln!(s, "realignment sum    {:.10}", self.realignment_sum);
        let _ = writeln!(s, "useful             {}", self.useful_for_teleportation);
        let _ = writeln!(s, "T_W expectations:");
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "  f0 = {:.6}  <T_W> = {:+.10}  {}",
                w.f0,
                w.expectation,
                if w.detects { "detected" } else { "-" }
            );
        }
        s
    }
}
