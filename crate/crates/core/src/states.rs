//! Validated bipartite states and the state families used throughout the crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{out_of_range, Error, Invariant, Result};
use crate::qla::{hermitian_eigen, kron, CMatrix, C64, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;

/// Generator used for every seeded sampler in the crate.
pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian, unit-trace, positive semidefinite operator on `d_a ⊗ d_b`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    d_a: usize,
    d_b: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(d_a: usize, d_b: usize, mat: CMatrix) -> Result<Self> {
        let n = d_a * d_b;
        if d_a == 0 || d_b == 0 || !mat.is_square() || mat.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {d_a}x{d_b} system",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if !(dev <= HERMITIAN_TOL) {
            return Err(Error::Invariant {
                invariant: Invariant::Hermiticity,
                detail: format!("max |a - a†| = {dev:.3e} exceeds {HERMITIAN_TOL:e}"),
            });
        }
        let tr = mat.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(Error::Invariant {
                invariant: Invariant::Trace,
                detail: format!("trace = {} + {}i, expected 1", tr.re, tr.im),
            });
        }
        let min = hermitian_eigen(&mat)?.values[0];
        if min < -PSD_TOL {
            return Err(Error::Invariant {
                invariant: Invariant::Positivity,
                detail: format!("minimum eigenvalue {min:.3e} is negative"),
            });
        }
        Ok(Self { d_a, d_b, mat })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts(d_a: usize, d_b: usize, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.rows(), d_a * d_b);
        Self { d_a, d_b, mat }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Common subsystem dimension, or an error for `d_a != d_b`.
    pub fn square_dim(&self) -> Result<usize> {
        if self.d_a == self.d_b {
            Ok(self.d_a)
        } else {
            Err(Error::NonSquareBipartition {
                d_a: self.d_a,
                d_b: self.d_b,
            })
        }
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        crate::qla::trace_inner(&self.mat, &self.mat)
            .expect("square by construction")
            .re
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if (self.d_a, self.d_b) != (other.d_a, other.d_b) {
            return Err(Error::DimensionMismatch("mixing states of different shape".into()));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(out_of_range("weight", w, "[0, 1]"));
        }
        let mat = &self.mat.scale_re(w) + &other.mat.scale_re(1.0 - w);
        Ok(Self::from_parts(self.d_a, self.d_b, mat))
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn conjugate_local(&self, u_a: &CMatrix, u_b: &CMatrix) -> Result<DensityMatrix> {
        let u = kron(u_a, u_b);
        let mat = u.matmul(&self.mat)?.matmul(&u.adjoint())?;
        Ok(Self::from_parts(self.d_a, self.d_b, mat))
    }
}

/// Unit vector on `d_a ⊗ d_b`.
#[derive(Clone, Debug)]
pub struct PureState {
    d_a: usize,
    d_b: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(d_a: usize, d_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if d_a == 0 || d_b == 0 || amplitudes.len() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a {d_a}x{d_b} system",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant {
                invariant: Invariant::Normalization,
                detail: format!("norm = {norm}"),
            });
        }
        Ok(Self { d_a, d_b, amplitudes })
    }

    /// Normalises `amplitudes` before validating.
    pub fn normalized(d_a: usize, d_b: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Invariant {
                invariant: Invariant::Normalization,
                detail: "zero vector".into(),
            });
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(d_a, d_b, amplitudes)
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `d_a × d_b` matrix `C` with `|ψ⟩ = Σ C_ij |i, j⟩`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        CMatrix::from_vec(self.d_a, self.d_b, self.amplitudes.clone()).expect("length checked")
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.d_a, self.d_b, CMatrix::outer(&self.amplitudes))
    }

    /// `(U_A ⊗ U_B)|ψ⟩`.
    pub fn apply_local(&self, u_a: &CMatrix, u_b: &CMatrix) -> Result<PureState> {
        let amps = kron(u_a, u_b).matvec(&self.amplitudes)?;
        Self::normalized(self.d_a, self.d_b, amps)
    }
}

/// Mixing parameter of `β|φ⁺⟩⟨φ⁺| + (1-β) I/d²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicParams {
    d: usize,
    beta: f64,
}

impl IsotropicParams {
    pub fn new(d: usize, beta: f64) -> Result<Self> {
        check_dim(d)?;
        let lo = isotropic_beta_min(d);
        if !(beta >= lo - 1e-12 && beta <= 1.0 + 1e-12) {
            return Err(out_of_range("beta", beta, format!("[{lo}, 1]")));
        }
        Ok(Self { d, beta })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Lower end of the physical isotropic range, `-1/(d²-1)`.
pub fn isotropic_beta_min(d: usize) -> f64 {
    let d2 = (d * d) as f64;
    -1.0 / (d2 - 1.0)
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(out_of_range("d", d as f64, "d >= 2"));
    }
    Ok(())
}

/// `|φ⁺⟩ = Σ_i |ii⟩ / √d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    check_dim(d)?;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    let a = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        amps[i * d + i] = C64::new(a, 0.0);
    }
    Ok(PureState {
        d_a: d,
        d_b: d,
        amplitudes: amps,
    })
}

/// `|φ⁺⟩⟨φ⁺|` as a raw matrix.
pub fn phi_plus_projector(d: usize) -> Result<CMatrix> {
    Ok(CMatrix::outer(max_entangled(d)?.amplitudes()))
}

pub fn isotropic(p: IsotropicParams) -> DensityMatrix {
    let d = p.d;
    let n = d * d;
    let beta = p.beta;
    let shift = (1.0 - beta) / n as f64;
    let proj = beta / d as f64;
    let mat = CMatrix::from_fn(n, n, |r, c| {
        let mut v = if r == c { shift } else { 0.0 };
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            v += proj;
        }
        C64::new(v, 0.0)
    });
    DensityMatrix::from_parts(d, d, mat)
}

/// Convenience wrapper validating `(d, β)` first.
pub fn isotropic_state(d: usize, beta: f64) -> Result<DensityMatrix> {
    Ok(isotropic(IsotropicParams::new(d, beta)?))
}

/// Isotropic mixing parameter whose singlet overlap is `f0`: `(d²f₀-1)/(d²-1)`.
pub fn beta_for_overlap(d: usize, f0: f64) -> f64 {
    let d2 = (d * d) as f64;
    (d2 * f0 - 1.0) / (d2 - 1.0)
}

/// `((1-f₀)/(d²-1)) I + ((d²f₀-1)/(d²-1)) |φ⁺⟩⟨φ⁺|`, whose singlet overlap is `f0`.
pub fn reference_state(d: usize, f0: f64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let lo = 1.0 / d as f64;
    if !(f0 >= lo - 1e-12 && f0 <= 1.0 + 1e-12) {
        return Err(out_of_range("f0", f0, format!("[{lo}, 1]")));
    }
    let d2 = (d * d) as f64;
    let id = CMatrix::identity(d * d).scale_re((1.0 - f0) / (d2 - 1.0));
    let proj = phi_plus_projector(d)?.scale_re(beta_for_overlap(d, f0));
    Ok(DensityMatrix::from_parts(d, d, &id + &proj))
}

/// `⟨φ⁺|ρ|φ⁺⟩`.
pub fn singlet_overlap(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.square_dim()?;
    Ok(singlet_overlap_matrix(rho.matrix(), d))
}

pub(crate) fn singlet_overlap_matrix(m: &CMatrix, d: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += m[(i * d + i, j * d + j)].re;
        }
    }
    acc / d as f64
}

/// The 3⊗3 Horodecki PPT entangled family, `0 < a < 1`.
pub fn horodecki_3x3(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a < 1.0) {
        return Err(out_of_range("a", a, "(0, 1)"));
    }
    let mut m = CMatrix::zeros(9, 9);
    for i in 0..9 {
        m[(i, i)] = C64::new(a, 0.0);
    }
    for &(i, j) in &[(0, 4), (0, 8), (4, 8)] {
        m[(i, j)] = C64::new(a, 0.0);
        m[(j, i)] = C64::new(a, 0.0);
    }
    let edge = (1.0 + a) / 2.0;
    let corner = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 6)] = C64::new(edge, 0.0);
    m[(8, 8)] = C64::new(edge, 0.0);
    m[(6, 8)] = C64::new(corner, 0.0);
    m[(8, 6)] = C64::new(corner, 0.0);
    let m = m.scale_re(1.0 / (8.0 * a + 1.0));
    Ok(DensityMatrix::from_parts(3, 3, m))
}

/// Haar-distributed unit vector in `C^n` (normalised complex Gaussian).
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Product vector `u ⊗ v` with independent Haar factors.
pub fn random_product_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    let u = random_unit_vector(rng, d);
    let v = random_unit_vector(rng, d);
    u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect()
}

/// `|u⟩⟨u| ⊗ |v⟩⟨v|`, deterministic per seed.
pub fn random_product_state(d: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut rng = rng_from_seed(seed);
    Ok(random_product_state_with(&mut rng, d))
}

pub fn random_product_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    DensityMatrix::from_parts(d, d, CMatrix::outer(&random_product_vector(rng, d)))
}

/// Random convex mixture of `terms` product states with Dirichlet-like weights.
pub fn random_separable_mixture<R: Rng + ?Sized>(rng: &mut R, d: usize, terms: usize) -> DensityMatrix {
    let terms = terms.max(1);
    let weights: Vec<f64> = (0..terms).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = weights.iter().sum();
    let n = d * d;
    let mut acc = CMatrix::zeros(n, n);
    for w in weights {
        let v = random_product_vector(rng, d);
        acc = &acc + &CMatrix::outer(&v).scale_re(w / total);
    }
    DensityMatrix::from_parts(d, d, acc)
}

/// Haar-random pure state on `d_a ⊗ d_b`.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d_a: usize, d_b: usize) -> PureState {
    PureState {
        d_a,
        d_b,
        amplitudes: random_unit_vector(rng, d_a * d_b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::partial_transpose_b;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn max_entangled_amplitudes() {
        let s = max_entangled(2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let expect = [h, 0.0, 0.0, h];
        for (z, e) in s.amplitudes().iter().zip(expect) {
            assert!(close(z.re, e, 1e-15) && z.im == 0.0);
        }
        let s3 = max_entangled(3).unwrap();
        for (k, z) in s3.amplitudes().iter().enumerate() {
            let e = if [0, 4, 8].contains(&k) { 1.0 / 3f64.sqrt() } else { 0.0 };
            assert!(close(z.re, e, 1e-15));
        }
        let norm: f64 = s3.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!(close(norm, 1.0, 1e-15));
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn isotropic_endpoints_and_overlap() {
        for d in 2..=4 {
            let one = isotropic_state(d, 1.0).unwrap();
            assert!(one.matrix().max_abs_diff(&phi_plus_projector(d).unwrap()) < 1e-15);
            let zero = isotropic_state(d, 0.0).unwrap();
            let mixed = CMatrix::identity(d * d).scale_re(1.0 / (d * d) as f64);
            assert!(zero.matrix().max_abs_diff(&mixed) < 1e-15);
        }
        let chi = isotropic_state(3, 0.5).unwrap();
        assert!(close(singlet_overlap(&chi).unwrap(), 5.0 / 9.0, 1e-14));
        assert!(isotropic_state(3, 1.01).is_err());
        assert!(isotropic_state(3, -0.2).is_err());
        assert!(isotropic_state(3, -0.125).is_ok());
    }

    #[test]
    fn constructors_pass_validation() {
        let states = [
            isotropic_state(3, -0.125).unwrap(),
            isotropic_state(4, 0.3).unwrap(),
            reference_state(3, 0.5).unwrap(),
            horodecki_3x3(0.37).unwrap(),
            random_product_state(3, 5).unwrap(),
            random_separable_mixture(&mut rng_from_seed(1), 3, 9),
        ];
        for s in states {
            DensityMatrix::new(s.d_a(), s.d_b(), s.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn isotropic_is_affine() {
        for &beta in &[-0.1, 0.2, 0.77] {
            let lhs = isotropic_state(3, beta).unwrap();
            let rhs = isotropic_state(3, 1.0)
                .unwrap()
                .mix(&isotropic_state(3, 0.0).unwrap(), beta.clamp(0.0, 1.0))
                .unwrap();
            if (0.0..=1.0).contains(&beta) {
                assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
            }
            let direct = &phi_plus_projector(3).unwrap().scale_re(beta)
                + &CMatrix::identity(9).scale_re((1.0 - beta) / 9.0);
            assert!(lhs.matrix().max_abs_diff(&direct) < 1e-12);
        }
    }

    #[test]
    fn reference_state_cases() {
        let r = reference_state(3, 1.0).unwrap();
        assert!(r.matrix().max_abs_diff(&phi_plus_projector(3).unwrap()) < 1e-15);

        let r = reference_state(2, 0.5).unwrap();
        let expect = &CMatrix::identity(4).scale_re(1.0 / 6.0) + &phi_plus_projector(2).unwrap().scale_re(1.0 / 3.0);
        assert!(r.matrix().max_abs_diff(&expect) < 1e-15);
        assert!(close(singlet_overlap(&r).unwrap(), 0.5, 1e-12));

        for d in 2..=5 {
            assert!(close(beta_for_overlap(d, 1.0 / d as f64), 1.0 / (d as f64 + 1.0), 1e-15));
            for &f0 in &[1.0 / d as f64, 0.6, 0.9] {
                let f0 = f0.max(1.0 / d as f64);
                let r = reference_state(d, f0).unwrap();
                assert!(close(singlet_overlap(&r).unwrap(), f0, 1e-12));
                let iso = isotropic_state(d, beta_for_overlap(d, f0)).unwrap();
                assert!(r.matrix().max_abs_diff(iso.matrix()) < 1e-12);
            }
        }
        assert!(reference_state(3, 0.2).is_err());
        assert!(reference_state(3, 1.2).is_err());
    }

    #[test]
    fn singlet_overlap_cases() {
        let s = max_entangled(4).unwrap().to_density();
        assert!(close(singlet_overlap(&s).unwrap(), 1.0, 1e-14));
        let mixed = isotropic_state(4, 0.0).unwrap();
        assert!(close(singlet_overlap(&mixed).unwrap(), 1.0 / 16.0, 1e-15));
        let rect = DensityMatrix::new(2, 3, CMatrix::identity(6).scale_re(1.0 / 6.0)).unwrap();
        assert!(matches!(singlet_overlap(&rect), Err(Error::NonSquareBipartition { .. })));
    }

    #[test]
    fn horodecki_fixture() {
        let h = horodecki_3x3(0.5).unwrap();
        assert!(close(h.matrix().trace().re, 1.0, 1e-14));
        for k in 1..=9 {
            let a = k as f64 / 10.0;
            let h = horodecki_3x3(a).unwrap();
            let pt = partial_transpose_b(h.matrix(), 3, 3).unwrap();
            assert!(hermitian_eigen(&pt).unwrap().values[0] >= -1e-10, "a = {a}");
        }
        let near_one = horodecki_3x3(1.0 - 1e-9).unwrap();
        let pt = partial_transpose_b(near_one.matrix(), 3, 3).unwrap();
        assert!(hermitian_eigen(&pt).unwrap().values[0] >= -1e-10);
        assert!(horodecki_3x3(0.0).is_err());
        assert!(horodecki_3x3(1.0).is_err());
    }

    #[test]
    fn random_product_state_contract() {
        for seed in 0..50 {
            let s = random_product_state(3, seed).unwrap();
            assert!(singlet_overlap(&s).unwrap() <= 1.0 / 3.0 + 1e-10);
            assert!(close(s.purity(), 1.0, 1e-12));
        }
        let a = random_product_state(4, 99).unwrap();
        let b = random_product_state(4, 99).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn validation_names_invariant() {
        let bad_trace = CMatrix::identity(4).scale_re(0.9 / 4.0);
        match DensityMatrix::new(2, 2, bad_trace) {
            Err(Error::Invariant { invariant, .. }) => assert_eq!(invariant, Invariant::Trace),
            other => panic!("unexpected {other:?}"),
        }
        let mut not_herm = CMatrix::identity(4).scale_re(0.25);
        not_herm[(0, 1)] = C64::new(0.1, 0.0);
        match DensityMatrix::new(2, 2, not_herm) {
            Err(Error::Invariant { invariant, .. }) => assert_eq!(invariant, Invariant::Hermiticity),
            other => panic!("unexpected {other:?}"),
        }
        let neg = CMatrix::diag(&[1.5, -0.5, 0.0, 0.0]);
        match DensityMatrix::new(2, 2, neg) {
            Err(Error::Invariant { invariant, .. }) => assert_eq!(invariant, Invariant::Positivity),
            other => panic!("unexpected {other:?}"),
        }
    }
}
