//! Witness-free entanglement criteria: partial transpose, realignment and
//! Schmidt rank.

use crate::error::Result;
use crate::qla::{hermitian_eigen, partial_transpose_b, singular_values, CMatrix};
use crate::states::{DensityMatrix, PureState};

pub const PPT_TOL: f64 = 1e-9;
pub const REALIGNMENT_TOL: f64 = 1e-9;
pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriteriaReport {
    pub ppt_min_eig: f64,
    pub realignment_sum: f64,
    pub is_ppt: bool,
    pub realignment_flags_entangled: bool,
}

impl CriteriaReport {
    pub fn evaluate(rho: &DensityMatrix) -> Result<Self> {
        let ppt_min_eig = ppt_min_eigenvalue(rho);
        let realignment_sum = realignment_sum(rho)?;
        Ok(Self {
            ppt_min_eig,
            realignment_sum,
            is_ppt: ppt_min_eig >= -PPT_TOL,
            realignment_flags_entangled: realignment_sum > 1.0 + REALIGNMENT_TOL,
        })
    }
}

pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose_b(rho.matrix(), rho.d_a(), rho.d_b()).expect("shape validated");
    hermitian_eigen(&pt).expect("partial transpose of a Hermitian matrix")
        .values[0]
}

/// Realigned matrix `R((i,k),(j,l)) = ρ((i,j),(k,l))`, of shape `d_a² × d_b²`.
pub fn realign(rho: &DensityMatrix) -> CMatrix {
    let (da, db) = (rho.d_a(), rho.d_b());
    let m = rho.matrix();
    CMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, k) = (r / da, r % da);
        let (j, l) = (c / db, c % db);
        m[(i * db + j, k * db + l)]
    })
}

/// Trace norm of the realigned matrix; exceeds 1 only for entangled states.
pub fn realignment_sum(rho: &DensityMatrix) -> Result<f64> {
    rho.square_dim()?;
    Ok(singular_values(&realign(rho)).iter().sum())
}

/// Number of Schmidt coefficients above `tol`.
pub fn schmidt_rank(psi: &PureState, tol: f64) -> usize {
    singular_values(&psi.coefficient_matrix())
        .into_iter()
        .filter(|&s| s > tol)
        .count()
}
