//! Fully entangled fraction `F(ρ) = max_U ⟨φ⁺|(U†⊗I) ρ (U⊗I)|φ⁺⟩`.
//!
//! Closed forms are provided for pure and isotropic states. For arbitrary
//! states the maximum is found by multi-start ascent on the unitary group:
//! each iterate is moved along `U ← U · exp(i t H)` where `H` is the
//! finite-difference gradient with respect to a Hermitian generator expanded
//! around the current point, and `t` comes from a backtracking line search.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{out_of_range, Error, Result};
use crate::qla::{singular_values, unitary_from_generator, CMatrix, C64};
use crate::states::{rng_from_seed, DensityMatrix, IsotropicParams, PureState};

/// Strict-inequality guard for `F > 1/d`.
pub const USEFUL_GUARD: f64 = 1e-9;

const FD_STEP: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct FefConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for FefConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 500,
            step_tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl FefConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(out_of_range("restarts", 0.0, ">= 1"));
        }
        if self.max_iterations == 0 {
            return Err(out_of_range("max_iterations", 0.0, ">= 1"));
        }
        if !(self.step_tolerance > 0.0) {
            return Err(out_of_range("step_tolerance", self.step_tolerance, "> 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FefResult {
    pub value: f64,
    pub u_opt: CMatrix,
    pub restarts_used: usize,
    /// Iterations spent by the winning restart.
    pub iterations: usize,
    /// Whether the winning restart met the step tolerance.
    pub converged: bool,
}

/// Objective at a fixed unitary.
pub fn fef_overlap(rho: &DensityMatrix, u: &CMatrix) -> Result<f64> {
    let d = rho.square_dim()?;
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} unitary for local dimension {d}",
            u.rows(),
            u.cols()
        )));
    }
    let dev = u.unitarity_deviation();
    if !(dev <= UNITARY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    Ok(overlap_unchecked(rho.matrix(), u, d))
}

/// `⟨v|ρ|v⟩` with `v = (U⊗I)|φ⁺⟩`, i.e. `v[a·d + i] = U[a, i] / √d`.
fn overlap_unchecked(rho: &CMatrix, u: &CMatrix, d: usize) -> f64 {
    let v: Vec<C64> = u.as_slice().iter().map(|&z| z / (d as f64).sqrt()).collect();
    rho.quadratic_form(&v).expect("dimensions checked").re
}

/// `(Σ_k σ_k(C))² / d` for the coefficient matrix `C` of `ψ`.
pub fn fef_pure(psi: &PureState) -> Result<f64> {
    if psi.d_a() != psi.d_b() {
        return Err(Error::NonSquareBipartition {
            d_a: psi.d_a(),
            d_b: psi.d_b(),
        });
    }
    let s: f64 = singular_values(&psi.coefficient_matrix()).iter().sum();
    Ok(s * s / psi.d_a() as f64)
}

/// Isotropic FEF: `β + (1-β)/d²` for `β ≥ 0`, and `(1-β)/d²` for `β < 0`
/// where a traceless `U` removes the projector term.
pub fn fef_isotropic(d: usize, beta: f64) -> Result<f64> {
    let p = IsotropicParams::new(d, beta)?;
    let d2 = (p.d() * p.d()) as f64;
    Ok(p.beta().max(0.0) + (1.0 - p.beta()) / d2)
}

/// Random Hermitian generator with Gaussian entries of standard deviation `scale`.
pub fn random_generator<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for p in 0..d {
        let x: f64 = rng.sample(StandardNormal);
        h[(p, p)] = C64::new(scale * x, 0.0);
        for q in (p + 1)..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = C64::new(re, im) * (scale / std::f64::consts::SQRT_2);
            h[(p, q)] = z;
            h[(q, p)] = z.conj();
        }
    }
    h
}

/// Hermitian matrix from `d²` real coordinates: diagonal first, then
/// `(re, im)` pairs of the strict upper triangle in row order.
fn generator_from_params(d: usize, x: &[f64]) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    let mut k = d;
    for p in 0..d {
        h[(p, p)] = C64::new(x[p], 0.0);
        for q in (p + 1)..d {
            let z = C64::new(x[k], x[k + 1]);
            h[(p, q)] = z;
            h[(q, p)] = z.conj();
            k += 2;
        }
    }
    h
}

struct Ascent {
    value: f64,
    u: CMatrix,
    iterations: usize,
    converged: bool,
}

fn step_from(u: &CMatrix, d: usize, x: &[f64], t: f64) -> CMatrix {
    let h = generator_from_params(d, x).scale_re(t);
    let e = unitary_from_generator(&h).expect("generator is Hermitian");
    u * &e
}

fn ascend(rho: &CMatrix, d: usize, start: CMatrix, cfg: &FefConfig) -> Ascent {
    let n = d * d;
    let mut u = start;
    let mut value = overlap_unchecked(rho, &u, d);
    let mut t = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    let mut probe = vec![0.0; n];

    while iterations < cfg.max_iterations {
        iterations += 1;
        let mut grad = vec![0.0; n];
        for k in 0..n {
            probe[k] = FD_STEP;
            let up = overlap_unchecked(rho, &step_from(&u, d, &probe, 1.0), d);
            probe[k] = -FD_STEP;
            let dn = overlap_unchecked(rho, &step_from(&u, d, &probe, 1.0), d);
            probe[k] = 0.0;
            grad[k] = (up - dn) / (2.0 * FD_STEP);
        }
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2.sqrt() < 1e-12 {
            converged = true;
            break;
        }

        let mut accepted = None;
        let mut trial = t;
        for _ in 0..MAX_HALVINGS {
            let cand = step_from(&u, d, &grad, trial);
            let cv = overlap_unchecked(rho, &cand, d);
            if cv >= value + ARMIJO * trial * g2 {
                accepted = Some((cand, cv));
                break;
            }
            trial *= 0.5;
        }
        match accepted {
            Some((cand, cv)) => {
                let gain = cv - value;
                u = cand;
                value = cv;
                t = (trial * 2.0).min(1e3);
                if gain < cfg.step_tolerance {
                    converged = true;
                    break;
                }
            }
            None => {
                // No ascent step at working precision: stationary point.
                converged = true;
                break;
            }
        }
    }
    Ascent {
        value,
        u,
        iterations,
        converged,
    }
}

fn restart_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 finaliser over (seed, index)
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_restart(rho: &CMatrix, d: usize, cfg: &FefConfig, index: usize) -> Ascent {
    let start = if index == 0 {
        CMatrix::identity(d)
    } else {
        let mut rng = rng_from_seed(restart_seed(cfg.seed, index));
        let h = random_generator(&mut rng, d, std::f64::consts::PI);
        unitary_from_generator(&h).expect("generator is Hermitian")
    };
    ascend(rho, d, start, cfg)
}

/// Multi-start maximisation of the overlap over local unitaries.
///
/// Restart 0 starts at the identity, so the result never falls below the
/// singlet overlap. Restarts are independent; the best value wins with ties
/// going to the lowest restart index, which makes the parallel and serial
/// schedules agree exactly.
pub fn fef_maximize(rho: &DensityMatrix, cfg: &FefConfig) -> Result<FefResult> {
    let d = rho.square_dim()?;
    cfg.validate()?;
    let m = rho.matrix();

    #[cfg(feature = "parallel")]
    let runs: Vec<Ascent> = {
        use rayon::prelude::*;
        (0..cfg.restarts)
            .into_par_iter()
            .map(|k| run_restart(m, d, cfg, k))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Ascent> = (0..cfg.restarts).map(|k| run_restart(m, d, cfg, k)).collect();

    let mut best = 0;
    for (k, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = k;
        }
    }
    let winner = runs.into_iter().nth(best).expect("at least one restart");
    let value = overlap_unchecked(m, &winner.u, d);
    Ok(FefResult {
        value,
        u_opt: winner.u,
        restarts_used: cfg.restarts,
        iterations: winner.iterations,
        converged: winner.converged,
    })
}

/// `F(ρ) > 1/d`, with boundary states counted as not useful.
pub fn is_useful_for_teleportation(rho: &DensityMatrix, cfg: &FefConfig) -> Result<bool> {
    let d = rho.square_dim()?;
    Ok(fef_maximize(rho, cfg)?.value > 1.0 / d as f64 + USEFUL_GUARD)
}
