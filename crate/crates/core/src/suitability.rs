//! Closed-form suitability conditions for perfect teleportation and
//! superdense coding.
//!
//! Every checker returns the magnitude of violation of each condition, so a
//! caller can see the margin even when the verdict is positive.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canonical::SchmidtDecomposition;
use crate::error::{Error, Result};
use crate::state::{qubit_entropy, PureState};
use crate::tolerance::{EPS_CLASS, EPS_COND};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum Protocol {
    PTP,
    PTP_N,
    BENNETT,
    PSDC2,
    PSDC3,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [Self::PTP, Self::PTP_N, Self::BENNETT, Self::PSDC2, Self::PSDC3];

    pub fn label(self) -> &'static str {
        match self {
            Self::PTP => "PTP",
            Self::PTP_N => "PTP_N",
            Self::BENNETT => "BENNETT",
            Self::PSDC2 => "PSDC2",
            Self::PSDC3 => "PSDC3",
        }
    }

    /// Runs the matching checker with the default tolerance.
    pub fn check(self, state: &PureState) -> Result<SuitabilityReport> {
        match self {
            Self::PTP => check_ptp3(state),
            Self::PTP_N => check_ptp_n(state),
            Self::BENNETT => check_bennett2(state),
            Self::PSDC2 => check_psdc2(state),
            Self::PSDC3 => check_psdc3(state),
        }
    }

    /// Qubit count the checker accepts; `None` for any count ≥ 2.
    pub fn qubits(self) -> Option<usize> {
        match self {
            Self::PTP | Self::PSDC2 | Self::PSDC3 => Some(3),
            Self::BENNETT => Some(2),
            Self::PTP_N => None,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Protocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|p| p.label() == key)
            .ok_or_else(|| Error::arg(format!("unknown protocol '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitabilityReport {
    pub protocol: Protocol,
    pub verdict: bool,
    pub residuals: IndexMap<String, f64>,
    #[serde(skip, default = "default_tolerance")]
    tolerance: f64,
}

fn default_tolerance() -> f64 {
    EPS_COND
}

impl SuitabilityReport {
    pub fn new(protocol: Protocol, residuals: IndexMap<String, f64>) -> Self {
        Self {
            protocol,
            verdict: false,
            residuals,
            tolerance: EPS_COND,
        }
        .with_tolerance(EPS_COND)
    }

    fn from_pairs(protocol: Protocol, pairs: &[(&str, f64)]) -> Self {
        Self::new(protocol, pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }

    /// Re-evaluates the verdict against a different threshold.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.verdict = self.residuals.values().all(|&r| r < tolerance);
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Labels of the conditions that are violated.
    pub fn failing(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(_, &r)| r.is_nan() || r >= self.tolerance)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// `|Σ_even |c|² − 1/2|` and `|Σ c_{2i} c*_{2i+1}|` over the whole vector.
fn even_odd_residuals(c: &[Complex64]) -> (f64, f64) {
    let even: f64 = c.iter().step_by(2).map(|z| z.norm_sqr()).sum();
    let cross: Complex64 = c.chunks_exact(2).map(|p| p[0] * p[1].conj()).sum();
    ((even - 0.5).abs(), cross.norm())
}

/// Three-qubit teleportation conditions, labels `cod-1` and `cod-4`.
pub fn check_ptp3(state: &PureState) -> Result<SuitabilityReport> {
    state.require_qubits(3)?;
    let (r1, r2) = even_odd_residuals(state.amplitudes());
    Ok(SuitabilityReport::from_pairs(Protocol::PTP, &[("cod-1", r1), ("cod-4", r2)]))
}

/// n-qubit teleportation conditions, labels `n-q-1` and `n-q-2`.
pub fn check_ptp_n(state: &PureState) -> Result<SuitabilityReport> {
    if state.n_qubits() < 2 {
        return Err(Error::arg("n-qubit teleportation needs at least two qubits"));
    }
    let (r1, r2) = even_odd_residuals(state.amplitudes());
    Ok(SuitabilityReport::from_pairs(Protocol::PTP_N, &[("n-q-1", r1), ("n-q-2", r2)]))
}

/// Teleportation conditions in terms of the canonical form.
///
/// `SD-2/SD-3` is `|λ1λ2 e^{iφ} + λ3λ4|`, which vanishes exactly when
/// `λ1λ2 = λ3λ4 = 0` or when `φ = π` and `λ1λ2 = λ3λ4 ≠ 0`.
pub fn check_ptp_sd(sd: &SchmidtDecomposition) -> SuitabilityReport {
    let l = sd.lambda();
    let sd1 = (l[0] * l[0] + l[1] * l[1] + l[3] * l[3] - 0.5)
        .abs()
        .max((l[2] * l[2] + l[4] * l[4] - 0.5).abs());
    let sd23 = (Complex64::from_polar(l[1] * l[2], sd.phi()) + l[3] * l[4]).norm();
    SuitabilityReport::from_pairs(Protocol::PTP, &[("SD-1", sd1), ("SD-2/SD-3", sd23)])
}

/// Two-qubit teleportation conditions, labels `Bennett-1` and `Bennett-2`.
pub fn check_bennett2(state: &PureState) -> Result<SuitabilityReport> {
    state.require_qubits(2)?;
    let c = state.amplitudes();
    let r1 = (c[0].norm_sqr() + c[2].norm_sqr() - 0.5).abs();
    let r2 = (c[0] * c[1].conj() + c[2] * c[3].conj()).norm();
    Ok(SuitabilityReport::from_pairs(Protocol::BENNETT, &[("Bennett-1", r1), ("Bennett-2", r2)]))
}

/// Two-bit dense coding conditions, labels `1-qubit-1` and `1-qubit-2`.
pub fn check_psdc2(state: &PureState) -> Result<SuitabilityReport> {
    state.require_qubits(3)?;
    let c = state.amplitudes();
    let low: f64 = c[..4].iter().map(|z| z.norm_sqr()).sum();
    let cross: Complex64 = (0..4).map(|i| c[i].conj() * c[i + 4]).sum();
    Ok(SuitabilityReport::from_pairs(
        Protocol::PSDC2,
        &[("1-qubit-1", (low - 0.5).abs()), ("1-qubit-2", cross.norm())],
    ))
}

/// Three-bit dense coding conditions, eight labelled residuals.
pub fn check_psdc3(state: &PureState) -> Result<SuitabilityReport> {
    state.require_qubits(3)?;
    let c = state.amplitudes();
    let n = |i: usize| c[i].norm_sqr();
    let cj = |i: usize| c[i].conj();
    Ok(SuitabilityReport::from_pairs(
        Protocol::PSDC3,
        &[
            ("x3", (n(0) + n(1) - n(6) - n(7)).abs()),
            ("x4", (n(2) + n(3) - n(4) - n(5)).abs()),
            ("a1", (cj(2) * c[6] + cj(3) * c[7]).re.abs()),
            ("a3", (cj(0) * c[4] + cj(1) * c[5] + cj(2) * c[6] + cj(3) * c[7]).norm()),
            ("u1", (cj(0) * c[2] + cj(1) * c[3]).norm()),
            ("u2", (cj(4) * c[6] + cj(5) * c[7]).norm()),
            ("t1", (c[2] * cj(4) + c[3] * cj(5)).norm()),
            ("t2", (cj(0) * c[6] + cj(1) * c[7]).norm()),
        ],
    ))
}

/// One-ebit criterion: `S(ρ3) = ln 2` for teleportation, `S(ρ1) = ln 2`
/// for two-bit dense coding.
pub fn entropy_criterion(state: &PureState, protocol: Protocol) -> Result<bool> {
    entropy_criterion_with_tolerance(state, protocol, EPS_COND)
}

pub fn entropy_criterion_with_tolerance(state: &PureState, protocol: Protocol, tolerance: f64) -> Result<bool> {
    state.require_qubits(3)?;
    let qubit = match protocol {
        Protocol::PTP => 3,
        Protocol::PSDC2 => 1,
        other => return Err(Error::arg(format!("no entropy criterion for {other}"))),
    };
    Ok((qubit_entropy(state, qubit)? - LN_2).abs() < tolerance)
}

fn phase_of(z: Complex64) -> f64 {
    z.arg().rem_euclid(TAU) % TAU
}

/// The two-qubit states meeting the teleportation conditions, with their
/// parameters. Phases are in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum BennettFamily {
    /// `(e^{iω1}|01⟩ + e^{iω2}|10⟩)/√2`
    PSI1 { omega1: f64, omega2: f64 },
    /// `(e^{iω0}|00⟩ + e^{iω3}|11⟩)/√2`
    PSI2 { omega0: f64, omega3: f64 },
    /// `k e^{iθ0}|00⟩ + ℓ e^{iθ1}|01⟩ + ℓ e^{iθ2}|10⟩ + k e^{iθ3}|11⟩`
    /// with `θ0 + θ3 − θ1 − θ2 = ±π` and `k² + ℓ² = 1/2`.
    PSI3 { k: f64, l: f64, theta: [f64; 4] },
    NONE,
}

impl BennettFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PSI1 { .. } => "PSI1",
            Self::PSI2 { .. } => "PSI2",
            Self::PSI3 { .. } => "PSI3",
            Self::NONE => "NONE",
        }
    }
}

pub fn classify_bennett_family(state: &PureState) -> Result<BennettFamily> {
    if !check_bennett2(state)?.verdict {
        return Ok(BennettFamily::NONE);
    }
    let c = state.amplitudes();
    let zero = |i: usize| c[i].norm() <= EPS_CLASS;
    Ok(if zero(0) && zero(3) {
        BennettFamily::PSI1 {
            omega1: phase_of(c[1]),
            omega2: phase_of(c[2]),
        }
    } else if zero(1) && zero(2) {
        BennettFamily::PSI2 {
            omega0: phase_of(c[0]),
            omega3: phase_of(c[3]),
        }
    } else {
        BennettFamily::PSI3 {
            k: 0.5 * (c[0].norm() + c[3].norm()),
            l: 0.5 * (c[1].norm() + c[2].norm()),
            theta: [phase_of(c[0]), phase_of(c[1]), phase_of(c[2]), phase_of(c[3])],
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Psdc3Family {
    F0,
    F1,
    F2,
    F3,
    PI1,
    PI2,
    PI3,
    PI4,
    NONE,
}

impl Psdc3Family {
    pub const ALL: [Psdc3Family; 8] = [
        Self::F0,
        Self::F1,
        Self::F2,
        Self::F3,
        Self::PI1,
        Self::PI2,
        Self::PI3,
        Self::PI4,
    ];

    /// Amplitude indices that are nonzero for members of the family.
    pub fn support(self) -> &'static [usize] {
        match self {
            Self::F0 => &[0, 7],
            Self::F1 => &[1, 6],
            Self::F2 => &[2, 5],
            Self::F3 => &[3, 4],
            Self::PI1 => &[2, 3, 4, 5],
            Self::PI2 => &[0, 1, 6, 7],
            Self::PI3 => &[1, 2, 5, 6],
            Self::PI4 => &[0, 3, 4, 7],
            Self::NONE => &[],
        }
    }
}

impl fmt::Display for Psdc3Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Psdc3Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase();
        Self::ALL
            .into_iter()
            .find(|f| f.to_string() == key)
            .ok_or_else(|| Error::arg(format!("unknown family '{s}'")))
    }
}

/// Residuals of the extra membership constraints of the four-term families.
fn pi_constraints(family: Psdc3Family, c: &[Complex64]) -> Vec<f64> {
    let m = |i: usize| c[i].norm();
    match family {
        // c2 c4* + c3 c5* = 0, |c2| = |c5|, |c4| = |c3|
        Psdc3Family::PI1 => vec![(c[2] * c[4].conj() + c[3] * c[5].conj()).norm(), (m(2) - m(5)).abs(), (m(4) - m(3)).abs()],
        // c0* c6 + c1* c7 = 0, |c0| = |c7|, |c1| = |c6|
        Psdc3Family::PI2 => vec![(c[0].conj() * c[6] + c[1].conj() * c[7]).norm(), (m(0) - m(7)).abs(), (m(1) - m(6)).abs()],
        // c1* c5 + c2* c6 = 0, Re(c2* c6) = 0, |c2| = |c5|, |c1| = |c6|
        Psdc3Family::PI3 => vec![
            (c[1].conj() * c[5] + c[2].conj() * c[6]).norm(),
            (c[2].conj() * c[6]).re.abs(),
            (m(2) - m(5)).abs(),
            (m(1) - m(6)).abs(),
        ],
        // c0* c4 + c3* c7 = 0, Re(c3* c7) = 0, |c3| = |c4|, |c0| = |c7|
        Psdc3Family::PI4 => vec![
            (c[0].conj() * c[4] + c[3].conj() * c[7]).norm(),
            (c[3].conj() * c[7]).re.abs(),
            (m(3) - m(4)).abs(),
            (m(0) - m(7)).abs(),
        ],
        _ => Vec::new(),
    }
}

/// Names the family a three-bit dense coding resource belongs to.
///
/// Resources with all eight amplitudes nonzero are reported as `NONE`: no
/// complete description of such solutions is known, although
/// [`check_psdc3`] still evaluates them.
pub fn classify_psdc3_family(state: &PureState) -> Result<Psdc3Family> {
    if !check_psdc3(state)?.verdict {
        return Ok(Psdc3Family::NONE);
    }
    let c = state.amplitudes();
    let support: Vec<usize> = (0..8).filter(|&i| c[i].norm() > EPS_CLASS).collect();
    let found = Psdc3Family::ALL.into_iter().find(|f| f.support() == support.as_slice());
    Ok(match found {
        Some(f) if pi_constraints(f, c).iter().all(|&r| r < EPS_COND) => f,
        _ => Psdc3Family::NONE,
    })
}

/// Draws a random member of `family`; deterministic in `seed`.
pub fn sample_psdc3_family(family: Psdc3Family, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = [Complex64::new(0.0, 0.0); 8];
    let phase = |rng: &mut ChaCha8Rng| rng.random_range(0.0..TAU);
    // Two amplitudes with |a|² + |b|² = 1/2, both bounded away from zero.
    let pair = |rng: &mut ChaCha8Rng| {
        let t = rng.random_range(0.15..(PI / 2.0 - 0.15));
        let (a, b) = (FRAC_1_SQRT_2 * t.cos(), FRAC_1_SQRT_2 * t.sin());
        (
            Complex64::from_polar(a, rng.random_range(0.0..TAU)),
            Complex64::from_polar(b, rng.random_range(0.0..TAU)),
        )
    };
    let sign = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { PI / 2.0 } else { -PI / 2.0 };
    match family {
        Psdc3Family::F0 | Psdc3Family::F1 | Psdc3Family::F2 | Psdc3Family::F3 => {
            for &i in family.support() {
                c[i] = Complex64::from_polar(FRAC_1_SQRT_2, phase(&mut rng));
            }
        }
        Psdc3Family::PI1 => {
            let (c2, c3) = pair(&mut rng);
            c[2] = c2;
            c[3] = c3;
            c[4] = Complex64::from_polar(c3.norm(), phase(&mut rng));
            c[5] = -c2.conj() * c[4] / c3.conj();
        }
        Psdc3Family::PI2 => {
            let (c0, c1) = pair(&mut rng);
            c[0] = c0;
            c[1] = c1;
            c[7] = Complex64::from_polar(c0.norm(), phase(&mut rng));
            c[6] = -c1.conj() * c[7] / c0.conj();
        }
        Psdc3Family::PI3 => {
            let (c1, c2) = pair(&mut rng);
            c[1] = c1;
            c[2] = c2;
            c[6] = Complex64::from_polar(c1.norm(), c2.arg() + sign(&mut rng));
            c[5] = -c[6] * c2.conj() / c1.conj();
        }
        Psdc3Family::PI4 => {
            let (c0, c3) = pair(&mut rng);
            c[0] = c0;
            c[3] = c3;
            c[7] = Complex64::from_polar(c0.norm(), c3.arg() + sign(&mut rng));
            c[4] = -c[7] * c3.conj() / c0.conj();
        }
        Psdc3Family::NONE => return Err(Error::arg("cannot sample the NONE family")),
    }
    PureState::normalized(c.to_vec())
}
