//! Teleportation and Schmidt-number witnesses.
//!
//! All witnesses here are of the form `a·I − b·|φ⁺⟩⟨φ⁺|`:
//!
//! | kind        | operator                    | parameter |
//! |-------------|-----------------------------|-----------|
//! | `W`         | `(1/d) I − |φ⁺⟩⟨φ⁺|`        | none      |
//! | `TW`        | `f₀ I − |φ⁺⟩⟨φ⁺|`           | `f₀ = ⟨φ⁺|ρ₀|φ⁺⟩` of a reference state |
//! | `TW_SCALAR` | `s I − |φ⁺⟩⟨φ⁺|`            | free constant `s` |
//! | `W_OPT`     | `I − (d/(r−1)) |φ⁺⟩⟨φ⁺|`    | Schmidt number `r` |

use crate::error::{out_of_range, Error, Result};
use crate::fef::{fef_isotropic, USEFUL_GUARD};
use crate::qla::{hermitian_eigen, trace_inner, CMatrix, HERMITIAN_TOL};
use crate::states::{
    check_dim, horodecki_3x3, isotropic_beta_min, isotropic_state, phi_plus_projector,
    random_product_vector, random_separable_mixture, reference_state, rng_from_seed,
    singlet_overlap, DensityMatrix,
};

/// Expectation below which a state counts as detected.
pub const DETECTION_GUARD: f64 = 1e-12;
/// Allowed negativity on states that must not be detected.
pub const NONNEG_TOL: f64 = 1e-9;
/// Endpoint granularity for the Schmidt-range intervals.
pub const RANGE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WitnessKind {
    W,
    Tw { f0: f64 },
    TwScalar { s: f64 },
    WOpt { r: usize },
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::W => "W",
            WitnessKind::Tw { .. } => "TW",
            WitnessKind::TwScalar { .. } => "TW_SCALAR",
            WitnessKind::WOpt { .. } => "W_OPT",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    d: usize,
    mat: CMatrix,
    kind: WitnessKind,
}

impl Witness {
    /// Wraps an arbitrary Hermitian `d² × d²` operator.
    pub fn new(d: usize, mat: CMatrix, kind: WitnessKind) -> Result<Self> {
        check_dim(d)?;
        if !mat.is_square() || mat.rows() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} witness for local dimension {d}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if !(dev <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { d, mat, kind })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigen(&self.mat).expect("Hermitian by construction").values
    }
}

/// `a·I − b·|φ⁺⟩⟨φ⁺|`
fn shifted_projector(d: usize, a: f64, b: f64) -> CMatrix {
    let id = CMatrix::identity(d * d).scale_re(a);
    let proj = phi_plus_projector(d).expect("d checked").scale_re(b);
    &id - &proj
}

pub fn witness_w(d: usize) -> Result<Witness> {
    check_dim(d)?;
    Ok(Witness {
        d,
        mat: shifted_projector(d, 1.0 / d as f64, 1.0),
        kind: WitnessKind::W,
    })
}

/// `⟨φ⁺|ρ₀|φ⁺⟩ I − |φ⁺⟩⟨φ⁺|`; the reference overlap must be at least `1/d`.
pub fn witness_tw(d: usize, rho0: &DensityMatrix) -> Result<Witness> {
    check_dim(d)?;
    if rho0.d_a() != d || rho0.d_b() != d {
        return Err(Error::DimensionMismatch(format!(
            "reference state is {}x{}, expected {d}x{d}",
            rho0.d_a(),
            rho0.d_b()
        )));
    }
    let f0 = singlet_overlap(rho0)?;
    let lo = 1.0 / d as f64;
    if f0 < lo - 1e-12 {
        return Err(out_of_range("reference overlap", f0, format!("[{lo}, 1]")));
    }
    Ok(Witness {
        d,
        mat: shifted_projector(d, f0, 1.0),
        kind: WitnessKind::Tw { f0 },
    })
}

/// `witness_tw` with the canonical isotropic reference state of overlap `f0`.
pub fn witness_tw_from_overlap(d: usize, f0: f64) -> Result<Witness> {
    witness_tw(d, &reference_state(d, f0)?)
}

pub fn witness_scalar(d: usize, s: f64) -> Result<Witness> {
    check_dim(d)?;
    let lo = 1.0 / d as f64;
    if !(s >= lo - 1e-12 && s <= 1.0 + 1e-12) {
        return Err(out_of_range("s", s, format!("[{lo}, 1]")));
    }
    Ok(Witness {
        d,
        mat: shifted_projector(d, s, 1.0),
        kind: WitnessKind::TwScalar { s },
    })
}

/// Optimal Schmidt-number-`r` witness `I − (d/(r−1)) |φ⁺⟩⟨φ⁺|`.
pub fn schmidt_witness(d: usize, r: usize) -> Result<Witness> {
    check_dim(d)?;
    if r < 2 || r > d {
        return Err(out_of_range("r", r as f64, format!("2..={d}")));
    }
    Ok(Witness {
        d,
        mat: shifted_projector(d, 1.0, d as f64 / (r - 1) as f64),
        kind: WitnessKind::WOpt { r },
    })
}

/// `Tr(W ρ)`.
pub fn expectation(w: &Witness, rho: &DensityMatrix) -> Result<f64> {
    if rho.d_a() != w.d || rho.d_b() != w.d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} state for a witness on {}x{}",
            rho.d_a(),
            rho.d_b(),
            w.d,
            w.d
        )));
    }
    Ok(trace_inner(&w.mat, rho.matrix())?.re)
}

/// `Tr(T_W χ_β) = ((d²f₀−1) − β(d²−1)) / d²`.
pub fn tw_isotropic_expectation(d: usize, f0: f64, beta: f64) -> Result<f64> {
    check_dim(d)?;
    let lo = 1.0 / d as f64;
    if !(f0 >= lo - 1e-12 && f0 <= 1.0 + 1e-12) {
        return Err(out_of_range("f0", f0, format!("[{lo}, 1]")));
    }
    let bmin = isotropic_beta_min(d);
    if !(beta >= bmin - 1e-12 && beta <= 1.0 + 1e-12) {
        return Err(out_of_range("beta", beta, format!("[{bmin}, 1]")));
    }
    let d2 = (d * d) as f64;
    Ok(((d2 * f0 - 1.0) - beta * (d2 - 1.0)) / d2)
}

/// Schmidt number certified by `T_W` at overlap `f0`: `d·f₀ + 1`.
pub fn schmidt_number_from_f0(d: usize, f0: f64) -> f64 {
    d as f64 * f0 + 1.0
}

/// Lower (open) and upper (closed) ends of the isotropic interval of Schmidt number `r`.
pub fn schmidt_interval(d: usize, r: usize) -> (f64, f64) {
    let (df, d2) = (d as f64, (d * d) as f64);
    let r = r as f64;
    ((df * (r - 1.0) - 1.0) / (d2 - 1.0), (df * r - 1.0) / (d2 - 1.0))
}

/// Schmidt number `r ∈ {2..d}` whose interval `((d(r−1)−1)/(d²−1), (dr−1)/(d²−1)]`
/// holds `β`, or 1 at or below the entanglement threshold `1/(d+1)`.
pub fn classify_schmidt_range(d: usize, beta: f64) -> Result<usize> {
    check_dim(d)?;
    let bmin = isotropic_beta_min(d);
    if !(beta >= bmin - RANGE_EPS && beta <= 1.0 + RANGE_EPS) {
        return Err(out_of_range("beta", beta, format!("[{bmin}, 1]")));
    }
    if beta <= 1.0 / (d as f64 + 1.0) + RANGE_EPS {
        return Ok(1);
    }
    for r in 2..=d {
        if beta <= schmidt_interval(d, r).1 + RANGE_EPS {
            return Ok(r);
        }
    }
    Ok(d)
}

/// Isotropic state found negative by a witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    pub beta: f64,
    pub expectation: f64,
    pub fef: f64,
}

/// Sampled check of the two defining witness conditions.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub product_samples: usize,
    pub mixture_samples: usize,
    pub fixture_samples: usize,
    /// Minimum expectation over the sampled states that are not useful.
    pub min_not_useful: f64,
    /// Most negative expectation on a useful isotropic state, if any.
    pub best_detection: Option<Detection>,
    /// Smallest grid `β` that is detected.
    pub first_detected_beta: Option<f64>,
}

impl ConditionReport {
    pub fn nonnegative_on_not_useful(&self) -> bool {
        self.min_not_useful >= -NONNEG_TOL
    }

    pub fn detects_useful_state(&self) -> bool {
        self.best_detection.is_some()
    }

    pub fn is_teleportation_witness(&self) -> bool {
        self.nonnegative_on_not_useful() && self.detects_useful_state()
    }
}

/// Number of isotropic grid points searched for a detected useful state.
pub const DETECTION_GRID: usize = 1001;

/// Samples `trials` random product states, `max(trials/10, 1)` random mixtures
/// of up to `d²` product states, and (for `d = 3`) the Horodecki family at
/// `a = 0.1, …, 0.9`; then scans the isotropic family for a useful state the
/// witness detects.
pub fn verify_witness_conditions(w: &Witness, trials: usize, seed: u64) -> ConditionReport {
    let mixtures = (trials / 10).max(1);
    verify_witness_conditions_with(w, trials, mixtures, seed)
}

pub fn verify_witness_conditions_with(
    w: &Witness,
    products: usize,
    mixtures: usize,
    seed: u64,
) -> ConditionReport {
    let d = w.d;
    let mut rng = rng_from_seed(seed);
    let mut min_nu = f64::INFINITY;

    for _ in 0..products {
        let v = random_product_vector(&mut rng, d);
        let e = w.mat.quadratic_form(&v).expect("dimensions match").re;
        min_nu = min_nu.min(e);
    }
    for _ in 0..mixtures {
        let terms = 2 + (rand::Rng::random_range(&mut rng, 0..(d * d - 1)));
        let rho = random_separable_mixture(&mut rng, d, terms);
        min_nu = min_nu.min(expectation(w, &rho).expect("dimensions match"));
    }
    let mut fixtures = 0;
    if d == 3 {
        for k in 1..=9 {
            let rho = horodecki_3x3(k as f64 / 10.0).expect("a in (0,1)");
            min_nu = min_nu.min(expectation(w, &rho).expect("dimensions match"));
            fixtures += 1;
        }
    }

    let threshold = 1.0 / d as f64 + USEFUL_GUARD;
    let bmin = isotropic_beta_min(d);
    let mut best: Option<Detection> = None;
    let mut first = None;
    for k in 0..DETECTION_GRID {
        let beta = bmin + (1.0 - bmin) * k as f64 / (DETECTION_GRID - 1) as f64;
        let fef = fef_isotropic(d, beta).expect("grid inside range");
        if fef <= threshold {
            continue;
        }
        let rho = isotropic_state(d, beta).expect("grid inside range");
        let e = expectation(w, &rho).expect("dimensions match");
        if e < -DETECTION_GUARD {
            first.get_or_insert(beta);
            if best.is_none_or(|b| e < b.expectation) {
                best = Some(Detection {
                    beta,
                    expectation: e,
                    fef,
                });
            }
        }
    }

    ConditionReport {
        product_samples: products,
        mixture_samples: mixtures,
        fixture_samples: fixtures,
        min_not_useful: min_nu,
        best_detection: best,
        first_detected_beta: first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn witness_w_cases() {
        let w = witness_w(2).unwrap();
        let phi = max_entangled(2).unwrap().to_density();
        assert!(close(expectation(&w, &phi).unwrap(), -0.5, 1e-14));
        for d in 2..=4 {
            let w = witness_w(d).unwrap();
            let ev = w.spectrum();
            assert!(close(ev[0], 1.0 / d as f64 - 1.0, 1e-12));
            assert!(ev[1..].iter().all(|&l| close(l, 1.0 / d as f64, 1e-12)));
            assert!(close(w.matrix().trace().re, d as f64 - 1.0, 1e-12));
            let tw = witness_tw_from_overlap(d, 1.0 / d as f64).unwrap();
            assert!(tw.matrix().max_abs_diff(w.matrix()) < 1e-12);
        }
    }

    #[test]
    fn witness_tw_cases() {
        let w = witness_tw(3, &max_entangled(3).unwrap().to_density()).unwrap();
        let expect = &CMatrix::identity(9) - &phi_plus_projector(3).unwrap();
        assert!(w.matrix().max_abs_diff(&expect) < 1e-14);
        assert!(w.spectrum()[0] >= -1e-12);

        let w = witness_tw_from_overlap(3, 2.0 / 3.0).unwrap();
        let ev = w.spectrum();
        assert!(close(ev[0], -1.0 / 3.0, 1e-12));
        assert!(ev[1..].iter().all(|&l| close(l, 2.0 / 3.0, 1e-12)));
        assert_eq!(w.kind().name(), "TW");

        let low = isotropic_state(3, 0.1).unwrap();
        assert!(witness_tw(3, &low).is_err());
        assert!(witness_tw(2, &low).is_err());
    }

    #[test]
    fn tw_spectrum_has_single_negative_eigenvalue() {
        for d in 2..=4 {
            for k in 0..5 {
                let f0 = 1.0 / d as f64 + (1.0 - 1.0 / d as f64) * k as f64 / 5.0;
                let ev = witness_tw_from_overlap(d, f0).unwrap().spectrum();
                assert!(close(ev[0], f0 - 1.0, 1e-12));
                assert!(ev[0] < 0.0);
                assert!(ev[1..].iter().all(|&l| close(l, f0, 1e-12)));
            }
        }
    }

    #[test]
    fn scalar_witness_cases() {
        let w = witness_scalar(3, 1.0 / 3.0).unwrap();
        assert!(w.matrix().max_abs_diff(witness_w(3).unwrap().matrix()) < 1e-15);
        let w = witness_scalar(2, 0.6).unwrap();
        let e = |beta: f64| expectation(&w, &isotropic_state(2, beta).unwrap()).unwrap();
        assert!(close(e(0.7), -0.175, 1e-14));
        assert!(close(e(0.55), -0.0625, 1e-14));
        assert!(close(e(0.45), 0.0125, 1e-14));
        assert!(witness_scalar(3, 0.2).is_err());
        assert!(witness_scalar(3, 1.1).is_err());
    }

    #[test]
    fn schmidt_witness_cases() {
        for d in 2..=5 {
            let w2 = schmidt_witness(d, 2).unwrap();
            let scaled = witness_w(d).unwrap().matrix().scale_re(d as f64);
            assert!(w2.matrix().max_abs_diff(&scaled) < 1e-12);
            for r in 2..=d {
                let f0 = (r - 1) as f64 / d as f64;
                let tw = witness_tw_from_overlap(d, f0).unwrap();
                let wopt = schmidt_witness(d, r).unwrap().matrix().scale_re(f0);
                assert!(tw.matrix().max_abs_diff(&wopt) < 1e-12);
            }
        }
        assert!(schmidt_witness(3, 1).is_err());
        assert!(schmidt_witness(3, 4).is_err());
    }

    #[test]
    fn schmidt_witness_nonnegative_on_low_rank_states() {
        // Sampling oracle: Haar-random states of Schmidt rank k < r.
        let mut rng = rng_from_seed(31);
        let d = 4;
        for r in 2..=d {
            let w = schmidt_witness(d, r).unwrap();
            for _ in 0..300 {
                let k = 1 + rand::Rng::random_range(&mut rng, 0..(r - 1));
                let mut amps = vec![C64::new(0.0, 0.0); d * d];
                let mut coeffs = random_unit_vector(&mut rng, k);
                for (i, c) in coeffs.drain(..).enumerate() {
                    amps[i * d + i] = c;
                }
                let u = crate::qla::unitary_from_generator(&crate::fef::random_generator(&mut rng, d, 3.0)).unwrap();
                let v = crate::qla::unitary_from_generator(&crate::fef::random_generator(&mut rng, d, 3.0)).unwrap();
                let psi = PureState::new(d, d, amps).unwrap().apply_local(&u, &v).unwrap();
                assert!(expectation(&w, &psi.to_density()).unwrap() >= -1e-10);
            }
        }
    }

    use crate::qla::C64;

    #[test]
    fn expectation_matches_overlap_difference() {
        let mut rng = rng_from_seed(5);
        for d in 2..=4 {
            let rho0 = reference_state(d, 0.8).unwrap();
            let w = witness_tw(d, &rho0).unwrap();
            for _ in 0..10 {
                let psi = random_pure_state(&mut rng, d, d).to_density();
                let rho = psi.mix(&random_separable_mixture(&mut rng, d, 3), 0.6).unwrap();
                let lhs = expectation(&w, &rho).unwrap();
                let rhs = singlet_overlap(&rho0).unwrap() - singlet_overlap(&rho).unwrap();
                assert!(close(lhs, rhs, 1e-12));
            }
        }
        let w = witness_w(2).unwrap();
        assert!(expectation(&w, &isotropic_state(3, 0.5).unwrap()).is_err());
    }

    #[test]
    fn isotropic_closed_form_values() {
        assert!(close(tw_isotropic_expectation(2, 0.5, 1.0).unwrap(), -0.5, 1e-15));
        assert!(close(tw_isotropic_expectation(3, 1.0 / 3.0, 1.0).unwrap(), -2.0 / 3.0, 1e-15));
        assert!(close(tw_isotropic_expectation(3, 1.0 / 3.0, 0.25).unwrap(), 0.0, 1e-15));
        for d in 2..=4 {
            for &f0 in &[0.5f64, 0.7, 1.0] {
                let f0 = f0.max(1.0 / d as f64);
                let root = beta_for_overlap(d, f0);
                assert!(close(tw_isotropic_expectation(d, f0, root).unwrap(), 0.0, 1e-15));
                let w = witness_tw_from_overlap(d, f0).unwrap();
                for &beta in &[-0.05, 0.3, 0.9] {
                    let full = expectation(&w, &isotropic_state(d, beta).unwrap()).unwrap();
                    assert!(close(full, tw_isotropic_expectation(d, f0, beta).unwrap(), 1e-12));
                }
            }
        }
        assert!(tw_isotropic_expectation(3, 0.2, 0.5).is_err());
        assert!(tw_isotropic_expectation(3, 0.5, 1.5).is_err());
    }

    #[test]
    fn schmidt_number_formula() {
        assert!(close(schmidt_number_from_f0(2, 0.5), 2.0, 1e-15));
        assert!(close(schmidt_number_from_f0(3, 2.0 / 3.0), 3.0, 1e-15));
        assert!(close(schmidt_number_from_f0(4, 0.25), 2.0, 1e-15));
    }

    #[test]
    fn schmidt_range_classification() {
        assert_eq!(classify_schmidt_range(3, 0.5).unwrap(), 2);
        assert_eq!(classify_schmidt_range(3, 0.7).unwrap(), 3);
        assert_eq!(classify_schmidt_range(3, 0.2).unwrap(), 1);
        assert_eq!(classify_schmidt_range(3, 0.25).unwrap(), 1);
        assert_eq!(classify_schmidt_range(3, 0.625).unwrap(), 2);
        assert_eq!(classify_schmidt_range(3, 1.0).unwrap(), 3);
        assert_eq!(classify_schmidt_range(3, -0.125).unwrap(), 1);
        assert!(classify_schmidt_range(3, 1.1).is_err());
        assert_eq!(schmidt_interval(3, 2), (0.25, 0.625));
        for d in 2..=6 {
            assert!(close(schmidt_interval(d, 2).0, 1.0 / (d as f64 + 1.0), 1e-15));
            assert!(close(schmidt_interval(d, d).1, 1.0, 1e-15));
        }
    }

    #[test]
    fn condition_checks() {
        let rep = verify_witness_conditions(&witness_w(2).unwrap(), 10_000, 1);
        assert!(rep.min_not_useful >= -1e-9);
        let best = rep.best_detection.unwrap();
        assert!(close(best.beta, 1.0, 1e-12) && close(best.expectation, -0.5, 1e-12));
        assert!(rep.is_teleportation_witness());

        let w = witness_tw_from_overlap(3, 2.0 / 3.0).unwrap();
        let rep = verify_witness_conditions(&w, 2_000, 2);
        assert!(rep.nonnegative_on_not_useful());
        assert_eq!(rep.fixture_samples, 9);
        assert!(rep.first_detected_beta.unwrap() <= 0.9);
        let at_09 = expectation(&w, &isotropic_state(3, 0.9).unwrap()).unwrap();
        assert!(close(at_09, (5.0 - 7.2) / 9.0, 1e-12));

        let psd = witness_tw_from_overlap(3, 1.0).unwrap();
        let rep = verify_witness_conditions(&psd, 100, 3);
        assert!(rep.best_detection.is_none());
        assert!(!rep.is_teleportation_witness());
    }
}
