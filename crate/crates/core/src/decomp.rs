//! Expansion of two-qudit operators in products of local observables.
//!
//! Qubits use the Pauli matrices, higher dimensions the generalised Gell-Mann
//! matrices. Non-identity elements are normalised to `Tr(λ_k λ_l) = 2 δ_kl`,
//! so for `T_W = f₀ I − |φ⁺⟩⟨φ⁺|` every correlation coefficient has magnitude
//! `1/(2d)` and the identity coefficient is `f₀ − 1/d²`.

use crate::error::{Error, Result};
use crate::qla::{kron, trace_inner, CMatrix, C64, HERMITIAN_TOL};
use crate::witness::Witness;

/// Coefficients at or below this modulus are treated as zero.
pub const ZERO_COEFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisFamily {
    Identity,
    Symmetric,
    Antisymmetric,
    Diagonal,
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub family: BasisFamily,
    pub mat: CMatrix,
}

impl BasisElement {
    fn new(label: impl Into<String>, family: BasisFamily, mat: CMatrix) -> Self {
        Self {
            label: label.into(),
            family,
            mat,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.family == BasisFamily::Identity
    }

    /// `Tr(λ²)`: `d` for the identity, 2 otherwise.
    pub fn norm_sqr(&self) -> f64 {
        trace_inner(&self.mat, &self.mat).expect("square").re
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `{I, σ_x, σ_y, σ_z}`.
pub fn pauli_basis() -> Vec<BasisElement> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let mk = |v: [C64; 4]| CMatrix::from_vec(2, 2, v.to_vec()).expect("2x2");
    vec![
        BasisElement::new("identity", BasisFamily::Identity, CMatrix::identity(2)),
        BasisElement::new("pauli_x", BasisFamily::Symmetric, mk([z, one, one, z])),
        BasisElement::new("pauli_y", BasisFamily::Antisymmetric, mk([z, c(0.0, -1.0), c(0.0, 1.0), z])),
        BasisElement::new("pauli_z", BasisFamily::Diagonal, mk([one, z, z, -one])),
    ]
}

fn pair_label(prefix: &str, d: usize, i: usize, j: usize) -> String {
    if d < 10 {
        format!("{prefix}_{i}{j}")
    } else {
        format!("{prefix}_{i}_{j}")
    }
}

/// Identity, then symmetric, antisymmetric (pairs `i < j`, 1-indexed) and
/// diagonal elements; `d²` in total.
pub fn gellmann_basis(d: usize) -> Vec<BasisElement> {
    let mut out = vec![BasisElement::new("identity", BasisFamily::Identity, CMatrix::identity(d))];
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = c(1.0, 0.0);
        m[(j, i)] = c(1.0, 0.0);
        out.push(BasisElement::new(pair_label("sym", d, i + 1, j + 1), BasisFamily::Symmetric, m));
    }
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(i, j)] = c(0.0, -1.0);
        m[(j, i)] = c(0.0, 1.0);
        out.push(BasisElement::new(pair_label("asym", d, i + 1, j + 1), BasisFamily::Antisymmetric, m));
    }
    for m in 1..d {
        let norm = (2.0 / (m * (m + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..m].iter_mut().for_each(|x| *x = norm);
        diag[m] = -(m as f64) * norm;
        out.push(BasisElement::new(format!("diag_{m}"), BasisFamily::Diagonal, CMatrix::diag(&diag)));
    }
    out
}

/// Pauli basis for `d = 2`, Gell-Mann otherwise.
pub fn local_basis(d: usize) -> Vec<BasisElement> {
    if d == 2 {
        pauli_basis()
    } else {
        gellmann_basis(d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub label_a: String,
    pub label_b: String,
    pub a_is_identity: bool,
    pub b_is_identity: bool,
    pub value: f64,
}

impl Coefficient {
    pub fn is_correlation(&self) -> bool {
        !self.a_is_identity && !self.b_is_identity
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub d: usize,
    /// All `d⁴` coefficients, ordered by basis index of the first factor, then the second.
    pub coefficients: Vec<Coefficient>,
    /// Frobenius norm of the operator minus its reconstruction.
    pub reconstruction_error: f64,
    /// Largest discarded imaginary part.
    pub max_imaginary_part: f64,
    pub nonzero_correlation_terms: usize,
}

impl DecompositionReport {
    pub fn get(&self, label_a: &str, label_b: &str) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|c| c.label_a == label_a && c.label_b == label_b)
            .map(|c| c.value)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Coefficient> {
        self.coefficients.iter().filter(|c| c.value.abs() > ZERO_COEFF)
    }
}

pub fn decompose(w: &Witness) -> Result<DecompositionReport> {
    decompose_operator(w.d(), w.matrix())
}

/// `c_kl = Tr(A (λ_k ⊗ λ_l)) / (Tr(λ_k²) Tr(λ_l²))` over the local basis.
pub fn decompose_operator(d: usize, op: &CMatrix) -> Result<DecompositionReport> {
    if !op.is_square() || op.rows() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator for local dimension {d}",
            op.rows(),
            op.cols()
        )));
    }
    let dev = op.hermiticity_deviation();
    if !(dev <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian(dev));
    }
    let basis = local_basis(d);
    let mut coefficients = Vec::with_capacity(basis.len() * basis.len());
    let mut recon = CMatrix::zeros(d * d, d * d);
    let mut max_im = 0.0f64;
    for a in &basis {
        for b in &basis {
            let prod = kron(&a.mat, &b.mat);
            let z = trace_inner(op, &prod)? / (a.norm_sqr() * b.norm_sqr());
            max_im = max_im.max(z.im.abs());
            recon = &recon + &prod.scale_re(z.re);
            coefficients.push(Coefficient {
                label_a: a.label.clone(),
                label_b: b.label.clone(),
                a_is_identity: a.is_identity(),
                b_is_identity: b.is_identity(),
                value: z.re,
            });
        }
    }
    let nonzero_correlation_terms = coefficients
        .iter()
        .filter(|c| c.is_correlation() && c.value.abs() > ZERO_COEFF)
        .count();
    Ok(DecompositionReport {
        d,
        coefficients,
        reconstruction_error: (&recon - op).frobenius_norm(),
        max_imaginary_part: max_im,
        nonzero_correlation_terms,
    })
}

/// Local measurement settings: nonzero terms with no identity factor.
pub fn measurement_count(report: &DecompositionReport) -> usize {
    report
        .coefficients
        .iter()
        .filter(|c| c.is_correlation() && c.value.abs() > ZERO_COEFF)
        .count()
}

/// Real parameters of a `d ⊗ d` density matrix: `d⁴ − 1`.
pub fn tomography_parameter_count(d: usize) -> usize {
    d.pow(4) - 1
}
