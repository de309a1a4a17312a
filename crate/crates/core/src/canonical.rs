//! Five-term Schmidt decomposition of three-qubit states and SLOCC
//! classification.
//!
//! The canonical form is
//! `λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`
//! with real nonnegative `λ` and `φ ∈ [0, 2π)`.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{apply_local_unitary, gates, reduced_density, three_tangle, LocalUnitary, PureState};
use crate::tolerance::{EPS_CLASS, EPS_NORM};

/// Amplitude indices carrying `λ0 … λ4`.
pub const SD_SUPPORT: [usize; 5] = [0, 4, 5, 6, 7];

/// Below this `λ1` the phase `φ` is unobservable and is reported as 0.
const PHI_VISIBLE: f64 = 1e-10;

/// Determinants below this are treated as exactly singular.
const DET_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SdWire", into = "SdWire")]
pub struct SchmidtDecomposition {
    lambda: [f64; 5],
    phi: f64,
    unitaries: LocalUnitary,
}

#[derive(Serialize, Deserialize)]
struct SdWire {
    lambda: [f64; 5],
    phi: f64,
    unitaries: LocalUnitary,
}

impl TryFrom<SdWire> for SchmidtDecomposition {
    type Error = Error;
    fn try_from(w: SdWire) -> Result<Self> {
        SchmidtDecomposition::with_unitaries(w.lambda, w.phi, w.unitaries)
    }
}

impl From<SchmidtDecomposition> for SdWire {
    fn from(sd: SchmidtDecomposition) -> Self {
        SdWire {
            lambda: sd.lambda,
            phi: sd.phi,
            unitaries: sd.unitaries,
        }
    }
}

fn canonical_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

impl SchmidtDecomposition {
    /// An SD given directly by its coefficients, with identity unitaries
    /// (the state it describes is the SD vector itself).
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        Self::with_unitaries(lambda, phi, LocalUnitary::identity(3))
    }

    pub fn with_unitaries(lambda: [f64; 5], phi: f64, unitaries: LocalUnitary) -> Result<Self> {
        if lambda.iter().any(|&l| !l.is_finite() || l < 0.0) {
            return Err(Error::arg(format!("λ must be finite and nonnegative: {lambda:?}")));
        }
        let norm2: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm2 - 1.0).abs() > EPS_NORM {
            return Err(Error::arg(format!("Σλ² = {norm2}, expected 1")));
        }
        if !phi.is_finite() {
            return Err(Error::arg("φ must be finite"));
        }
        if unitaries.len() != 3 {
            return Err(Error::arg("an SD carries exactly three unitaries"));
        }
        let phi = if lambda[1] < PHI_VISIBLE { 0.0 } else { canonical_phi(phi) };
        Ok(Self { lambda, phi, unitaries })
    }

    pub fn lambda(&self) -> [f64; 5] {
        self.lambda
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `U1 ⊗ U2 ⊗ U3` taking the input state to [`Self::to_state`].
    pub fn unitaries(&self) -> &LocalUnitary {
        &self.unitaries
    }

    /// The canonical-form vector.
    pub fn to_state(&self) -> PureState {
        let l = self.lambda;
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = l[0].into();
        amps[4] = Complex64::from_polar(l[1], self.phi);
        amps[5] = l[2].into();
        amps[6] = l[3].into();
        amps[7] = l[4].into();
        PureState::normalized(amps).expect("SD coefficients are normalized")
    }

    /// Undoes the unitaries, recovering the decomposed state.
    pub fn reconstruct(&self) -> PureState {
        apply_local_unitary(&self.to_state(), &self.unitaries.adjoint()).expect("three factors")
    }
}

impl fmt::Display for SchmidtDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.lambda;
        write!(
            f,
            "λ = ({:.9}, {:.9}, {:.9}, {:.9}, {:.9}), φ = {:.9}",
            l[0], l[1], l[2], l[3], l[4], self.phi
        )
    }
}

fn det2(m: &Matrix2<Complex64>) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn arg_or_zero(z: Complex64) -> f64 {
    if z.norm() < 1e-300 {
        0.0
    } else {
        z.arg()
    }
}

/// Picks `U1` so that the qubit-1 = 0 slice of `U1 ⊗ I ⊗ I |ψ⟩` is singular.
fn first_unitary(t0: &Matrix2<Complex64>, t1: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let c = det2(t0);
    let a = det2(t1);
    let b = t0[(0, 0)] * t1[(1, 1)] + t0[(1, 1)] * t1[(0, 0)]
        - t0[(0, 1)] * t1[(1, 0)]
        - t0[(1, 0)] * t1[(0, 1)];
    if c.norm() <= DET_ZERO {
        return gates::identity();
    }
    if a.norm() <= DET_ZERO {
        if b.norm() > DET_ZERO {
            return row_unitary(-c / b);
        }
        return gates::sigma1();
    }
    // det(T0 + z T1) = A z² + B z + C
    let disc = b * b - 4.0 * a * c;
    let z = if disc.norm() <= 1e-12 * (b.norm_sqr() + 4.0 * a.norm() * c.norm()) {
        -b / (2.0 * a)
    } else {
        let s = disc.sqrt();
        let q = if (b.conj() * s).re >= 0.0 { -(b + s) / 2.0 } else { -(b - s) / 2.0 };
        let r1 = q / a;
        let r2 = c / q;
        if r1.norm() <= r2.norm() {
            r1
        } else {
            r2
        }
    };
    row_unitary(z)
}

/// For `s0 = x yᵀ` returns `(U2, U3)` with `U2 s0 U3ᵀ = diag(|x||y|, 0)`.
///
/// Built by hand: nalgebra's SVD can miss a nearly singular complex 2x2
/// by a few percent.
fn rank_one_frames(s0: &Matrix2<Complex64>) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    if s0.norm() <= DET_ZERO {
        return (gates::identity(), gates::identity());
    }
    let col = if s0.column(0).norm() >= s0.column(1).norm() { 0 } else { 1 };
    let row = if s0.row(0).norm() >= s0.row(1).norm() { 0 } else { 1 };
    let x = s0.column(col).normalize();
    let y = s0.row(row).transpose().normalize();
    (frame(x[0].conj(), x[1].conj()), frame(y[0].conj(), y[1].conj()))
}

/// Unitary with first row `(a, b)`, `|a|² + |b|² = 1`.
fn frame(a: Complex64, b: Complex64) -> Matrix2<Complex64> {
    Matrix2::new(a, b, -b.conj(), a.conj())
}

/// Unitary whose first row is proportional to `(1, z)`.
fn row_unitary(z: Complex64) -> Matrix2<Complex64> {
    let n = (1.0 + z.norm_sqr()).sqrt();
    let one = Complex64::new(1.0, 0.0);
    Matrix2::new(one / n, z / n, -z.conj() / n, one / n)
}

fn slices(amps: &[Complex64]) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    (
        Matrix2::new(amps[0], amps[1], amps[2], amps[3]),
        Matrix2::new(amps[4], amps[5], amps[6], amps[7]),
    )
}

/// Computes the canonical form together with the local unitaries reaching it.
pub fn schmidt_decompose(state: &PureState) -> Result<SchmidtDecomposition> {
    state.require_qubits(3)?;
    let (t0, t1) = slices(state.amplitudes());
    let mut u1 = first_unitary(&t0, &t1);

    let s0 = t0 * u1[(0, 0)] + t1 * u1[(0, 1)];
    let (mut u2, mut u3) = rank_one_frames(&s0);

    let lu = LocalUnitary::new(vec![u1, u2, u3])?;
    let d = apply_local_unitary(state, &lu)?;
    let d = d.amplitudes();
    let (a, b, c, dd) = (d[4], d[5], d[6], d[7]);
    let (arg_a, arg_b, arg_c, arg_d) = (arg_or_zero(a), arg_or_zero(b), arg_or_zero(c), arg_or_zero(dd));

    let gamma0 = -arg_or_zero(d[0]);
    let gamma1 = -arg_b - arg_c + arg_d;
    let alpha1 = arg_b - arg_d;
    let beta1 = arg_c - arg_d;
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    u1 = Matrix2::new(phase(gamma0), zero, zero, phase(gamma1)) * u1;
    u2 = Matrix2::new(one, zero, zero, phase(alpha1)) * u2;
    u3 = Matrix2::new(one, zero, zero, phase(beta1)) * u3;
    let phi = arg_a - arg_b - arg_c + arg_d;

    let lu = LocalUnitary::new(vec![u1, u2, u3])?;
    let fin = apply_local_unitary(state, &lu)?;
    let mut lambda = SD_SUPPORT.map(|i| fin.amplitude(i).norm());
    let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
    for l in &mut lambda {
        *l /= norm;
    }
    SchmidtDecomposition::with_unitaries(lambda, phi, lu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum SloccClass {
    GHZ,
    W,
    A_BC,
    B_AC,
    C_AB,
    A_B_C,
}

impl SloccClass {
    pub const ALL: [SloccClass; 6] = [Self::GHZ, Self::W, Self::A_BC, Self::B_AC, Self::C_AB, Self::A_B_C];

    pub fn label(self) -> &'static str {
        match self {
            Self::GHZ => "GHZ",
            Self::W => "W",
            Self::A_BC => "A_BC",
            Self::B_AC => "B_AC",
            Self::C_AB => "C_AB",
            Self::A_B_C => "A_B_C",
        }
    }
}

impl fmt::Display for SloccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for SloccClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|c| c.label() == key)
            .ok_or_else(|| Error::arg(format!("unknown SLOCC class '{s}'")))
    }
}

/// Reads the class off the shape of the canonical form.
///
/// The GHZ test is on `4(λ0λ4)²`, which is the three-tangle of the SD
/// vector, so the threshold means the same thing as in [`classify_slocc`].
pub fn sd_class_of(sd: &SchmidtDecomposition) -> SloccClass {
    let l = sd.lambda;
    let nz = |x: f64| x > EPS_CLASS;
    let z = |x: f64| x <= EPS_CLASS;
    if nz(4.0 * (l[0] * l[4]).powi(2)) {
        return SloccClass::GHZ;
    }
    if nz(l[0] * l[2] * l[3]) {
        return SloccClass::W;
    }
    let abc = Complex64::from_polar(l[1] * l[4], sd.phi) - l[2] * l[3];
    if z(l[0]) && nz(abc.norm()) {
        return SloccClass::A_BC;
    }
    if z(l[3]) && z(l[4]) && nz(l[0] * l[2]) {
        return SloccClass::B_AC;
    }
    if z(l[2]) && z(l[4]) && nz(l[0] * l[3]) {
        return SloccClass::C_AB;
    }
    SloccClass::A_B_C
}

/// Classifies by the three-tangle and the purity of the one-qubit marginals.
pub fn classify_slocc(state: &PureState) -> Result<SloccClass> {
    state.require_qubits(3)?;
    if three_tangle(state)? > EPS_CLASS {
        return Ok(SloccClass::GHZ);
    }
    let mut mixed = [false; 3];
    for (k, m) in mixed.iter_mut().enumerate() {
        let ev = reduced_density(state, &[k + 1])?.eigenvalues();
        *m = ev[0] > EPS_CLASS;
    }
    Ok(match mixed {
        [true, true, true] => SloccClass::W,
        [false, true, true] => SloccClass::A_BC,
        [true, false, true] => SloccClass::B_AC,
        [true, true, false] => SloccClass::C_AB,
        _ => SloccClass::A_B_C,
    })
}

/// Random canonical form with the shape of `class`; every coefficient that
/// the shape allows is drawn from [0.1, 1] before normalization.
pub fn sample_sd_of_class<R: Rng + ?Sized>(class: SloccClass, rng: &mut R) -> SchmidtDecomposition {
    let mut draw = || rng.random_range(0.1..1.0);
    let mut lambda = match class {
        SloccClass::GHZ => [draw(), draw(), draw(), draw(), draw()],
        SloccClass::W => [draw(), draw(), draw(), draw(), 0.0],
        SloccClass::A_BC => [0.0, draw(), draw(), draw(), draw()],
        SloccClass::B_AC => [draw(), draw(), draw(), 0.0, 0.0],
        SloccClass::C_AB => [draw(), draw(), 0.0, draw(), 0.0],
        SloccClass::A_B_C => [draw(), draw(), 0.0, 0.0, 0.0],
    };
    let phi = rng.random_range(0.0..TAU);
    let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
    for l in &mut lambda {
        *l /= norm;
    }
    SchmidtDecomposition::new(lambda, phi).expect("normalized by construction")
}
