//! Pure states, reduced density matrices and the entanglement invariants
//! (von Neumann entropy, two-qubit concurrence, three-tangle).

use std::fmt;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance::{EPS_EIG, EPS_INV, EPS_NORM, INPUT_NORM_BAND, MAX_QUBITS};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit matrices used throughout the protocols.
pub mod gates {
    use super::{Complex64, Matrix2, ONE, ZERO};

    const I: Complex64 = Complex64::new(0.0, 1.0);

    pub fn identity() -> Matrix2<Complex64> {
        Matrix2::new(ONE, ZERO, ZERO, ONE)
    }

    /// Pauli X.
    pub fn sigma1() -> Matrix2<Complex64> {
        Matrix2::new(ZERO, ONE, ONE, ZERO)
    }

    /// Pauli Y.
    pub fn sigma2() -> Matrix2<Complex64> {
        Matrix2::new(ZERO, -I, I, ZERO)
    }

    /// Pauli Z.
    pub fn sigma3() -> Matrix2<Complex64> {
        Matrix2::new(ONE, ZERO, ZERO, -ONE)
    }

    /// `σ3·σ1`, the fourth encoding operator of superdense coding.
    pub fn sigma3_sigma1() -> Matrix2<Complex64> {
        sigma3() * sigma1()
    }

    /// `σ1·σ3 = -iσ2`, the correction for the last teleportation outcome.
    pub fn sigma1_sigma3() -> Matrix2<Complex64> {
        sigma1() * sigma3()
    }

    /// Hadamard matrix.
    pub fn hadamard() -> Matrix2<Complex64> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Matrix2::new(h, h, h, -h)
    }
}

/// Normalized amplitude vector over `n` qubits, qubit 1 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::arg(format!(
            "amplitude vector length {len} is not 2^n for n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::arg(format!("{n} qubits exceeds the limit of {MAX_QUBITS}")));
    }
    Ok(n)
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

impl PureState {
    /// Builds a state from amplitudes whose norm is already 1 up to
    /// serialization rounding. Inputs further than `INPUT_NORM_BAND` from
    /// unit norm are rejected; the rest are renormalized exactly.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_of(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > INPUT_NORM_BAND {
            return Err(Error::arg(format!("state norm {norm} is not 1")));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self { n_qubits, amplitudes })
    }

    /// Builds a state by rescaling any nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_of(&amplitudes);
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::arg("cannot normalize a zero vector"));
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS || index >= 1 << n_qubits {
            return Err(Error::arg(format!("no basis state {index} on {n_qubits} qubits")));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Ok(Self { n_qubits, amplitudes })
    }

    /// Builds a state from `(basis index, amplitude)` pairs, normalizing.
    pub fn from_terms(n_qubits: usize, terms: &[(usize, Complex64)]) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::arg(format!("unsupported qubit count {n_qubits}")));
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        for &(i, c) in terms {
            if i >= amplitudes.len() {
                return Err(Error::arg(format!("basis index {i} out of range")));
            }
            amplitudes[i] += c;
        }
        Self::normalized(amplitudes)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let last = (1usize << n_qubits) - 1;
        Self::from_terms(n_qubits, &[(0, ONE), (last, ONE)])
    }

    /// `(|001⟩ + |010⟩ + |100⟩)/√3`.
    pub fn w() -> Self {
        Self::from_terms(3, &[(1, ONE), (2, ONE), (4, ONE)]).expect("W state")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::arg(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(inner_product(&self.amplitudes, &other.amplitudes))
    }

    pub(crate) fn require_qubits(&self, n: usize) -> Result<()> {
        if self.n_qubits != n {
            return Err(Error::arg(format!(
                "expected a {n}-qubit state, got {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for PureState {
    /// Lists the nonzero terms as `(re+imi)|bits⟩`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.amplitudes.iter().enumerate() {
            if c.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:.6}{:+.6}i)|{:0width$b}⟩",
                c.re,
                c.im,
                i,
                width = self.n_qubits
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    n_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateWire {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = StateWire::deserialize(d)?;
        if wire.n_qubits == 0 || wire.n_qubits > MAX_QUBITS {
            return Err(serde::de::Error::custom(format!(
                "n_qubits {} out of range",
                wire.n_qubits
            )));
        }
        if wire.amplitudes.len() != 1 << wire.n_qubits {
            return Err(serde::de::Error::custom(format!(
                "expected {} amplitudes for {} qubits, got {}",
                1usize << wire.n_qubits,
                wire.n_qubits,
                wire.amplitudes.len()
            )));
        }
        let amps = wire
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        PureState::new(amps).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A qubit `α|0⟩ + β|1⟩` to be teleported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnknownQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl UnknownQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > INPUT_NORM_BAND {
            return Err(Error::arg(format!("unknown qubit norm {norm} is not 1")));
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn as_state(&self) -> PureState {
        PureState {
            n_qubits: 1,
            amplitudes: vec![self.alpha, self.beta],
        }
    }
}

/// Tensor product of single-qubit unitaries, one factor per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    factors: Vec<Matrix2<Complex64>>,
}

impl LocalUnitary {
    pub fn new(factors: Vec<Matrix2<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("a local unitary needs at least one factor"));
        }
        for (k, u) in factors.iter().enumerate() {
            let defect = unitarity_defect(u);
            if defect > EPS_NORM {
                return Err(Error::arg(format!(
                    "factor {} is not unitary (|U†U - I| = {defect:e})",
                    k + 1
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            factors: vec![gates::identity(); n],
        }
    }

    pub fn factors(&self) -> &[Matrix2<Complex64>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor-wise adjoint, the inverse operator.
    pub fn adjoint(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|u| u.adjoint()).collect(),
        }
    }

    /// Largest `‖U†U − I‖_max` over the factors.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors.iter().map(unitarity_defect).fold(0.0, f64::max)
    }
}

fn unitarity_defect(u: &Matrix2<Complex64>) -> f64 {
    (u.adjoint() * u - gates::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[derive(Serialize, Deserialize)]
struct LocalUnitaryWire(Vec<[[[f64; 2]; 2]; 2]>);

pub(crate) fn matrix_to_wire(u: &Matrix2<Complex64>) -> [[[f64; 2]; 2]; 2] {
    let e = |r: usize, c: usize| [u[(r, c)].re, u[(r, c)].im];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub(crate) fn matrix_from_wire(w: &[[[f64; 2]; 2]; 2]) -> Matrix2<Complex64> {
    let e = |r: usize, c: usize| Complex64::new(w[r][c][0], w[r][c][1]);
    Matrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

impl Serialize for LocalUnitary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LocalUnitaryWire(self.factors.iter().map(matrix_to_wire).collect()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalUnitary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = LocalUnitaryWire::deserialize(d)?;
        LocalUnitary::new(wire.0.iter().map(matrix_from_wire).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Applies `u` to qubit `qubit` (0-based from the most significant bit).
pub(crate) fn apply_single_qubit(amps: &mut [Complex64], n: usize, qubit: usize, u: &Matrix2<Complex64>) {
    let stride = 1usize << (n - 1 - qubit);
    for base in 0..amps.len() {
        if base & stride != 0 {
            continue;
        }
        let a0 = amps[base];
        let a1 = amps[base | stride];
        amps[base] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
        amps[base | stride] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
    }
}

/// `U₁ ⊗ ⋯ ⊗ Uₙ |ψ⟩`.
pub fn apply_local_unitary(state: &PureState, lu: &LocalUnitary) -> Result<PureState> {
    if lu.len() != state.n_qubits {
        return Err(Error::arg(format!(
            "local unitary has {} factors for a {}-qubit state",
            lu.len(),
            state.n_qubits
        )));
    }
    let mut amps = state.amplitudes.clone();
    for (q, u) in lu.factors.iter().enumerate() {
        apply_single_qubit(&mut amps, state.n_qubits, q, u);
    }
    // Unitaries preserve the norm up to rounding; strip that rounding here.
    PureState::normalized(amps)
}

/// Hermitian, trace-one, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::arg(format!(
                "density matrix must be square with power-of-two size, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > EPS_NORM {
            return Err(Error::NumericDomain(format!("matrix is not Hermitian (defect {herm:e})")));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > EPS_NORM || trace.im.abs() > EPS_NORM {
            return Err(Error::NumericDomain(format!("trace {trace} is not 1")));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = if self.dim() == 2 {
            hermitian2_eigenvalues(&self.entries).to_vec()
        } else {
            SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect()
        };
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Closed-form spectrum of a 2×2 Hermitian matrix.
fn hermitian2_eigenvalues(m: &DMatrix<Complex64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

/// Partial trace keeping the qubits listed in `keep` (1-based, any order;
/// the result orders them ascending).
pub fn reduced_density(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::arg("duplicate qubit index in keep set"));
    }
    if kept.is_empty() || kept.len() >= n {
        return Err(Error::arg(format!(
            "keep set must be a nonempty proper subset of 1..={n}"
        )));
    }
    if kept.iter().any(|&q| q == 0 || q > n) {
        return Err(Error::arg(format!("qubit index out of range 1..={n}")));
    }
    let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
    let dk = 1usize << kept.len();
    let de = 1usize << traced.len();

    // Reshape the amplitudes into a (kept × traced) matrix M, then ρ = M M†.
    let bit = |q: usize| 1usize << (n - q);
    let gather = |idx: usize, qubits: &[usize]| -> usize {
        qubits.iter().fold(0, |acc, &q| (acc << 1) | usize::from(idx & bit(q) != 0))
    };
    let mut m = DMatrix::<Complex64>::zeros(dk, de);
    for (i, &c) in state.amplitudes.iter().enumerate() {
        m[(gather(i, &kept), gather(i, &traced))] = c;
    }
    let rho = &m * m.adjoint();
    DensityMatrix::new(rho)
}

/// `S(ρ) = −Σ ηᵢ ln ηᵢ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = rho.eigenvalues();
    if let Some(&min) = eig.first() {
        if min < -EPS_NORM {
            return Err(Error::NumericDomain(format!("negative eigenvalue {min:e}")));
        }
    }
    let s: f64 = eig
        .iter()
        .filter(|&&eta| eta >= EPS_EIG)
        .map(|&eta| -eta * eta.ln())
        .sum();
    Ok(s.max(0.0))
}

/// Entropy of the single-qubit marginal of `qubit` (1-based).
pub fn qubit_entropy(state: &PureState, qubit: usize) -> Result<f64> {
    von_neumann_entropy(&reduced_density(state, &[qubit])?)
}

/// `2|c₀c₃ − c₁c₂|` for a two-qubit state.
pub fn concurrence2(state: &PureState) -> Result<f64> {
    state.require_qubits(2)?;
    let c = &state.amplitudes;
    Ok(2.0 * (c[0] * c[3] - c[1] * c[2]).norm())
}

/// The three algebraically equivalent expressions for the three-tangle.
pub fn three_tangle_versions(state: &PureState) -> Result<[f64; 3]> {
    state.require_qubits(3)?;
    let c = &state.amplitudes;
    let v1 = (c[0] * c[7] - c[1] * c[6] + c[2] * c[5] - c[3] * c[4]).powi(2)
        - 4.0 * (c[1] * c[4] - c[0] * c[5]) * (c[3] * c[6] - c[2] * c[7]);
    let v2 = (c[0] * c[7] + c[1] * c[6] - c[2] * c[5] - c[3] * c[4]).powi(2)
        - 4.0 * (c[2] * c[4] - c[0] * c[6]) * (c[3] * c[5] - c[1] * c[7]);
    let v3 = (c[0] * c[7] - c[1] * c[6] - c[2] * c[5] + c[3] * c[4]).powi(2)
        - 4.0 * (c[0] * c[3] - c[1] * c[2]) * (c[4] * c[7] - c[5] * c[6]);
    Ok([4.0 * v1.norm(), 4.0 * v2.norm(), 4.0 * v3.norm()])
}

/// Three-tangle τ₁₂₃; fails if the three expressions disagree.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    let v = three_tangle_versions(state)?;
    let spread = v.iter().fold(f64::MIN, |a, &b| a.max(b)) - v.iter().fold(f64::MAX, |a, &b| a.min(b));
    if spread > EPS_INV {
        return Err(Error::Consistency(format!("tangle expressions disagree: {v:?}")));
    }
    Ok(v[0])
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Largest `|⟨sᵢ|sⱼ⟩|` over distinct pairs.
pub fn gram_offdiag_max(states: &[PureState]) -> Result<f64> {
    let vectors: Vec<&[Complex64]> = states.iter().map(|s| s.amplitudes()).collect();
    gram_offdiag_max_vectors(&vectors)
}

/// Same as [`gram_offdiag_max`] for raw (possibly unnormalized) vectors.
pub fn gram_offdiag_max_vectors(vectors: &[&[Complex64]]) -> Result<f64> {
    if vectors.len() < 2 {
        return Err(Error::arg("need at least two states for a Gram check"));
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::arg("states in a Gram check must share a dimension"));
    }
    let mut worst = 0.0f64;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            worst = worst.max(inner_product(vectors[i], vectors[j]).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag2(rho: &DensityMatrix) -> [f64; 4] {
        [rho.get(0, 0).re, rho.get(0, 1).norm(), rho.get(1, 0).norm(), rho.get(1, 1).re]
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        let rho = reduced_density(&PureState::ghz(3).unwrap(), &[3]).unwrap();
        let d = diag2(&rho);
        assert!(close(d[0], 0.5, 1e-15) && close(d[3], 0.5, 1e-15));
        assert!(d[1] < 1e-15 && d[2] < 1e-15);
    }

    #[test]
    fn product_marginal_is_pure() {
        let rho = reduced_density(&PureState::basis(3, 0).unwrap(), &[3]).unwrap();
        assert_eq!(diag2(&rho), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn c_ab_sd_form_has_pure_third_qubit() {
        // λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ3|110⟩
        let s = PureState::from_terms(3, &[(0, c(0.6, 0.0)), (4, Complex64::from_polar(0.48, 1.1)), (6, c(0.64, 0.0))])
            .unwrap();
        let d = diag2(&reduced_density(&s, &[3]).unwrap());
        assert!(close(d[0], 1.0, 1e-15) && d[1] < 1e-15 && close(d[3], 0.0, 1e-15));
    }

    #[test]
    fn keep_set_validation() {
        let s = PureState::ghz(3).unwrap();
        assert!(matches!(reduced_density(&s, &[]), Err(Error::Argument(_))));
        assert!(matches!(reduced_density(&s, &[1, 2, 3]), Err(Error::Argument(_))));
        assert!(matches!(reduced_density(&s, &[4]), Err(Error::Argument(_))));
        assert!(matches!(reduced_density(&s, &[0]), Err(Error::Argument(_))));
        assert!(matches!(reduced_density(&s, &[2, 2]), Err(Error::Argument(_))));
        assert_eq!(reduced_density(&s, &[1, 3]).unwrap().dim(), 4);
    }

    #[test]
    fn entropy_values() {
        let ln2 = std::f64::consts::LN_2;
        let w_expected = (3.0 * 3f64.ln() - 2.0 * ln2) / 3.0;
        assert!(close(w_expected, 0.6365142, 1e-7));
        for k in 1..=3 {
            assert!(close(qubit_entropy(&PureState::ghz(3).unwrap(), k).unwrap(), ln2, 1e-12));
            assert!(close(qubit_entropy(&PureState::w(), k).unwrap(), w_expected, 1e-12));
            assert_eq!(qubit_entropy(&PureState::basis(3, 0).unwrap(), k).unwrap(), 0.0);
        }
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(matches!(von_neumann_entropy(&rho), Err(Error::NumericDomain(_))));
    }

    #[test]
    fn density_matrix_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NumericDomain(_))));
    }

    #[test]
    fn concurrence_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_real(&[h, 0.0, 0.0, h]).unwrap();
        assert!(close(concurrence2(&bell).unwrap(), 1.0, 1e-15));
        assert_eq!(concurrence2(&PureState::basis(2, 1).unwrap()).unwrap(), 0.0);
        // k = ℓ = 1/2 with θ0 = π, other phases zero
        let psi3 = PureState::from_real(&[-0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(close(concurrence2(&psi3).unwrap(), 1.0, 1e-15));
        assert!(matches!(concurrence2(&PureState::ghz(3).unwrap()), Err(Error::Argument(_))));
    }

    #[test]
    fn tangle_examples() {
        let kappa1 = PureState::from_real(&[0.0, 0.0, 0.5, 0.5, 0.5, -0.5, 0.0, 0.0]).unwrap();
        assert!(close(three_tangle(&kappa1).unwrap(), 1.0, 1e-12));
        let s = 1.0 / 6f64.sqrt();
        let phi = PureState::from_real(&[s, 0.0, s, 0.0, s, s, -s, s]).unwrap();
        assert!(three_tangle(&phi).unwrap() < 1e-12);
        assert_eq!(three_tangle(&PureState::basis(3, 0).unwrap()).unwrap(), 0.0);
        assert!(matches!(three_tangle(&PureState::ghz(2).unwrap()), Err(Error::Argument(_))));
    }

    #[test]
    fn local_unitary_examples() {
        let ghz = PureState::ghz(3).unwrap();
        let same = apply_local_unitary(&ghz, &LocalUnitary::identity(3)).unwrap();
        assert!(close(fidelity(&same, &ghz).unwrap(), 1.0, 1e-15));

        let h_ii = LocalUnitary::new(vec![gates::hadamard(), gates::identity(), gates::identity()]).unwrap();
        let c_state = PureState::from_real(&[0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, -0.5]).unwrap();
        let out = apply_local_unitary(&ghz, &h_ii).unwrap();
        for (a, b) in out.amplitudes().iter().zip(c_state.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }

        let i_x_h = LocalUnitary::new(vec![gates::identity(), gates::sigma1(), gates::hadamard()]).unwrap();
        let kappa1 = PureState::from_real(&[0.0, 0.0, 0.5, 0.5, 0.5, -0.5, 0.0, 0.0]).unwrap();
        let out = apply_local_unitary(&ghz, &i_x_h).unwrap();
        for (a, b) in out.amplitudes().iter().zip(kappa1.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }

        assert!(matches!(apply_local_unitary(&ghz, &LocalUnitary::identity(2)), Err(Error::Argument(_))));
    }

    #[test]
    fn local_unitary_rejects_non_unitary_factor() {
        let bad = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(LocalUnitary::new(vec![bad]).is_err());
        assert!(LocalUnitary::new(vec![]).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        let plus = PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!(close(fidelity(&zero, &plus).unwrap(), 0.5, 1e-15));
        assert!(fidelity(&zero, &PureState::ghz(2).unwrap()).is_err());
    }

    #[test]
    fn gram_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(gram_offdiag_max(&[zero.clone(), one]).unwrap(), 0.0);
        assert_eq!(gram_offdiag_max(&[zero.clone(), zero.clone()]).unwrap(), 1.0);
        assert!(gram_offdiag_max(&[zero]).is_err());
    }

    #[test]
    fn constructor_normalization_policy() {
        assert!(PureState::from_real(&[1.0 + 5e-7, 0.0]).is_ok());
        assert!(PureState::from_real(&[1.0 + 5e-6, 0.0]).is_err());
        let s = PureState::from_real(&[1.0 + 5e-7, 0.0]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(PureState::from_real(&[1.0, 0.0, 0.0]).is_err());
        assert!(PureState::basis(13, 0).is_err());
    }

    #[test]
    fn json_wire_format() {
        let s = PureState::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let text = s.to_json();
        assert_eq!(text, r#"{"n_qubits":1,"amplitudes":[[0.6,0.0],[0.0,0.8]]}"#);
        assert_eq!(PureState::from_json(&text).unwrap(), s);
        assert!(PureState::from_json(r#"{"n_qubits":2,"amplitudes":[[1.0,0.0]]}"#).is_err());
        assert!(PureState::from_json(r#"{"n_qubits":1,"amplitudes":[[1.0,0.0],[1.0,0.0]]}"#).is_err());
    }

    #[test]
    fn local_unitary_json_round_trip() {
        let lu = LocalUnitary::new(vec![gates::hadamard(), gates::sigma2()]).unwrap();
        let text = serde_json::to_string(&lu).unwrap();
        let back: LocalUnitary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lu);
    }
}
