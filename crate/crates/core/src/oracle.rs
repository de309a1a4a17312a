//! Brute-force protocol simulation.
//!
//! Nothing here reads the closed-form conditions: the measurement bases and
//! coded-state sets are built from the resource amplitudes, tested for
//! orthogonality numerically, and the protocols are run outcome by outcome.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{apply_local_unitary, gates, gram_offdiag_max_vectors, inner_product, LocalUnitary, PureState, UnknownQubit};
use crate::tolerance::{EPS_COND, EPS_EIG};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Result of one measurement branch of a teleportation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// Fidelity of Bob's corrected qubit with the input; `None` when the
    /// branch has zero probability and Bob's state is undefined.
    pub fidelity: Option<f64>,
}

/// The four measurement vectors on qubits `a, 1, 2` (qubit `a` most
/// significant), as built from the resource without normalizing.
#[derive(Debug, Clone, PartialEq)]
pub struct PtpBasis {
    pub chi_plus: Vec<Complex64>,
    pub chi_minus: Vec<Complex64>,
    pub sigma_plus: Vec<Complex64>,
    pub sigma_minus: Vec<Complex64>,
}

impl PtpBasis {
    /// Vectors in outcome order `χ+, χ−, ς+, ς−`.
    pub fn vectors(&self) -> [&[Complex64]; 4] {
        [&self.chi_plus, &self.chi_minus, &self.sigma_plus, &self.sigma_minus]
    }

    /// Bob's correction for each outcome: `I, σ3, σ1, σ1σ3`.
    pub fn corrections() -> [Matrix2<Complex64>; 4] {
        [gates::identity(), gates::sigma3(), gates::sigma1(), gates::sigma1_sigma3()]
    }
}

/// `Ξ = (c0, c2, c4, c6)` and `Π = (c1, c3, c5, c7)` on qubits 1, 2, then
/// `χ± = |0⟩Ξ ± |1⟩Π`, `ς± = |1⟩Ξ ± |0⟩Π`.
pub fn ptp_basis(resource: &PureState) -> Result<PtpBasis> {
    resource.require_qubits(3)?;
    let c = resource.amplitudes();
    let xi: Vec<Complex64> = (0..4).map(|j| c[2 * j]).collect();
    let pi: Vec<Complex64> = (0..4).map(|j| c[2 * j + 1]).collect();
    let join = |first: &[Complex64], second: &[Complex64], sign: f64| -> Vec<Complex64> {
        first.iter().copied().chain(second.iter().map(|z| z * sign)).collect()
    };
    Ok(PtpBasis {
        chi_plus: join(&xi, &pi, 1.0),
        chi_minus: join(&xi, &pi, -1.0),
        sigma_plus: join(&pi, &xi, 1.0),
        sigma_minus: {
            let mut v: Vec<Complex64> = pi.iter().map(|z| -z).collect();
            v.extend_from_slice(&xi);
            v
        },
    })
}

fn orthonormal(vectors: &[&[Complex64]]) -> Result<bool> {
    let norms_ok = vectors
        .iter()
        .all(|v| (inner_product(v, v).re.sqrt() - 1.0).abs() < EPS_COND);
    Ok(norms_ok && gram_offdiag_max_vectors(vectors)? < EPS_COND)
}

/// Whether the teleportation measurement basis is orthonormal.
pub fn ptp_orthogonality(resource: &PureState) -> Result<bool> {
    let basis = ptp_basis(resource)?;
    orthonormal(&basis.vectors())
}

/// Projects `joint` (measured register most significant, Bob's qubit
/// least significant) on each basis vector and scores the corrected result.
fn teleport_by_projection(
    joint: &[Complex64],
    basis: &[&[Complex64]],
    corrections: &[Matrix2<Complex64>],
    unknown: &UnknownQubit,
) -> Vec<TeleportOutcome> {
    let target = [unknown.alpha, unknown.beta];
    basis
        .iter()
        .zip(corrections)
        .enumerate()
        .map(|(outcome, (vector, corr))| {
            let mut bob = [ZERO; 2];
            for (m, v) in vector.iter().enumerate() {
                for (k, b) in bob.iter_mut().enumerate() {
                    *b += v.conj() * joint[2 * m + k];
                }
            }
            score_branch(outcome, bob, corr, &target)
        })
        .collect()
}

fn score_branch(outcome: usize, bob: [Complex64; 2], corr: &Matrix2<Complex64>, target: &[Complex64; 2]) -> TeleportOutcome {
    let probability = bob[0].norm_sqr() + bob[1].norm_sqr();
    let fidelity = (probability > EPS_EIG).then(|| {
        let fixed = [
            corr[(0, 0)] * bob[0] + corr[(0, 1)] * bob[1],
            corr[(1, 0)] * bob[0] + corr[(1, 1)] * bob[1],
        ];
        inner_product(target, &fixed).norm_sqr() / probability
    });
    TeleportOutcome {
        outcome,
        probability,
        fidelity,
    }
}

fn joint_state(unknown: &UnknownQubit, resource: &PureState) -> Vec<Complex64> {
    let r = resource.amplitudes();
    let mut joint = Vec::with_capacity(2 * r.len());
    joint.extend(r.iter().map(|c| unknown.alpha * c));
    joint.extend(r.iter().map(|c| unknown.beta * c));
    joint
}

/// Runs three-qubit teleportation over all four measurement outcomes.
pub fn simulate_ptp(resource: &PureState, unknown: &UnknownQubit) -> Result<Vec<TeleportOutcome>> {
    let basis = ptp_basis(resource)?;
    if !orthonormal(&basis.vectors())? {
        return Err(Error::ProtocolUndefined(
            "the teleportation measurement basis built from this resource is not orthonormal".into(),
        ));
    }
    let joint = joint_state(unknown, resource);
    Ok(teleport_by_projection(&joint, &basis.vectors(), &PtpBasis::corrections(), unknown))
}

/// Two-qubit measurement vectors on qubits `a, 1`:
/// `ξ± = c0|00⟩ + c2|01⟩ ± c1|10⟩ ± c3|11⟩`,
/// `μ± = ±c1|00⟩ ± c3|01⟩ + c0|10⟩ + c2|11⟩`.
pub fn bennett_basis(resource: &PureState) -> Result<[Vec<Complex64>; 4]> {
    resource.require_qubits(2)?;
    let c = resource.amplitudes();
    let xi = |s: f64| vec![c[0], c[2], c[1] * s, c[3] * s];
    let mu = |s: f64| vec![c[1] * s, c[3] * s, c[0], c[2]];
    Ok([xi(1.0), xi(-1.0), mu(1.0), mu(-1.0)])
}

/// Runs two-qubit teleportation with corrections `I, σ3, σ1, σ1σ3`.
pub fn simulate_bennett(resource: &PureState, unknown: &UnknownQubit) -> Result<Vec<TeleportOutcome>> {
    let basis = bennett_basis(resource)?;
    let refs: Vec<&[Complex64]> = basis.iter().map(|v| v.as_slice()).collect();
    if !orthonormal(&refs)? {
        return Err(Error::ProtocolUndefined(
            "the two-qubit teleportation basis built from this resource is not orthonormal".into(),
        ));
    }
    let joint = joint_state(unknown, resource);
    Ok(teleport_by_projection(&joint, &refs, &PtpBasis::corrections(), unknown))
}

/// Circuit teleportation: CNOT from `a` onto qubit 1, Hadamard on `a`,
/// computational-basis measurement of `a` and 1, then `Z^{m_a} X^{m_1}` on
/// qubit 2. There is no suitability gate; every branch is reported.
pub fn simulate_nielsen_circuit(resource: &PureState, unknown: &UnknownQubit) -> Result<Vec<TeleportOutcome>> {
    resource.require_qubits(2)?;
    let mut joint = joint_state(unknown, resource);
    // CNOT: when a = 1 flip qubit 1 (bit value 2 in the a,1,2 register)
    for i in 4..6 {
        joint.swap(i, i + 2);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..4 {
        let (x, y) = (joint[i], joint[i + 4]);
        joint[i] = (x + y) * h;
        joint[i + 4] = (x - y) * h;
    }
    let target = [unknown.alpha, unknown.beta];
    let mut out = Vec::with_capacity(4);
    for ma in 0..2 {
        for m1 in 0..2 {
            let base = 4 * ma + 2 * m1;
            let bob = [joint[base], joint[base + 1]];
            let mut corr = gates::identity();
            if m1 == 1 {
                corr = gates::sigma1() * corr;
            }
            if ma == 1 {
                corr = gates::sigma3() * corr;
            }
            out.push(score_branch(2 * ma + m1, bob, &corr, &target));
        }
    }
    Ok(out)
}

/// Draws one outcome according to the branch probabilities.
pub fn sample_outcome<R: Rng + ?Sized>(outcomes: &[TeleportOutcome], rng: &mut R) -> usize {
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let mut x = rng.random_range(0.0..total);
    for o in outcomes {
        if x < o.probability {
            return o.outcome;
        }
        x -= o.probability;
    }
    outcomes.last().map_or(0, |o| o.outcome)
}

/// Alice's encoding operators: `A1 … A4` for two bits, `A1 … A8` for three.
/// Message `m` (read as a binary number) is encoded by `A_{m+1}`.
pub fn sdc_operators(bits: usize) -> Result<Vec<LocalUnitary>> {
    let (i, x, z, zx) = (gates::identity(), gates::sigma1(), gates::sigma3(), gates::sigma3_sigma1());
    let pairs = [(i, i), (z, i), (x, i), (zx, i), (i, x), (i, zx), (x, x), (x, zx)];
    let count = match bits {
        2 => 4,
        3 => 8,
        _ => return Err(Error::arg(format!("dense coding carries 2 or 3 bits, not {bits}"))),
    };
    Ok(pairs[..count]
        .iter()
        .map(|&(a, b)| LocalUnitary::new(vec![a, b, i]).expect("Pauli products are unitary"))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodedSet {
    pub operators: Vec<LocalUnitary>,
    pub states: Vec<PureState>,
}

pub fn sdc_coded_set(resource: &PureState, bits: usize) -> Result<CodedSet> {
    resource.require_qubits(3)?;
    let operators = sdc_operators(bits)?;
    let states = operators
        .iter()
        .map(|op| apply_local_unitary(resource, op))
        .collect::<Result<Vec<_>>>()?;
    Ok(CodedSet { operators, states })
}

pub fn sdc_orthogonality(resource: &PureState, bits: usize) -> Result<bool> {
    let set = sdc_coded_set(resource, bits)?;
    let refs: Vec<&[Complex64]> = set.states.iter().map(|s| s.amplitudes()).collect();
    Ok(gram_offdiag_max_vectors(&refs)? < EPS_COND)
}

fn parse_message(message: &str) -> Result<(usize, usize)> {
    let bits = message.len();
    if !(bits == 2 || bits == 3) || !message.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(Error::arg(format!("message must be 2 or 3 binary digits, got '{message}'")));
    }
    Ok((bits, usize::from_str_radix(message, 2).expect("binary digits")))
}

/// Probability of each decoding outcome after Alice encodes `message`.
pub fn sdc_measurement(resource: &PureState, message: &str) -> Result<Vec<f64>> {
    let (bits, index) = parse_message(message)?;
    let set = sdc_coded_set(resource, bits)?;
    let refs: Vec<&[Complex64]> = set.states.iter().map(|s| s.amplitudes()).collect();
    if gram_offdiag_max_vectors(&refs)? >= EPS_COND {
        return Err(Error::ProtocolUndefined(format!(
            "the {} coded states built from this resource are not mutually orthogonal",
            refs.len()
        )));
    }
    let basis = gram_schmidt(&refs);
    let sent = set.states[index].amplitudes();
    Ok(basis.iter().map(|b| inner_product(b, sent).norm_sqr()).collect())
}

/// Encodes `message`, lets Bob measure in the coded basis, returns his
/// most likely reading.
pub fn simulate_sdc(resource: &PureState, message: &str) -> Result<String> {
    let probs = sdc_measurement(resource, message)?;
    let best = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty");
    Ok(format!("{best:0width$b}", width = message.len()))
}

fn gram_schmidt(vectors: &[&[Complex64]]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.to_vec();
        for b in &out {
            let p = inner_product(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= p * bi;
            }
        }
        let n = inner_product(&w, &w).re.sqrt();
        out.push(w.into_iter().map(|z| z / n).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(v: &[f64]) -> PureState {
        PureState::from_real(v).unwrap()
    }

    fn qubit(alpha: Complex64, beta: Complex64) -> UnknownQubit {
        UnknownQubit::new(alpha, beta).unwrap()
    }

    fn assert_perfect(outcomes: &[TeleportOutcome]) {
        assert_eq!(outcomes.len(), 4);
        for o in outcomes {
            assert!((o.probability - 0.25).abs() < 1e-12, "{o:?}");
            assert!((o.fidelity.unwrap() - 1.0).abs() < 1e-12, "{o:?}");
        }
    }

    #[test]
    fn ghz_basis_by_substitution() {
        let b = ptp_basis(&PureState::ghz(3).unwrap()).unwrap();
        let expect = |i: usize, j: usize, s: f64| {
            let mut v = vec![c(0.0, 0.0); 8];
            v[i] = c(H, 0.0);
            v[j] = c(s * H, 0.0);
            v
        };
        let same = |a: &[Complex64], b: Vec<Complex64>| a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-15);
        assert!(same(&b.chi_plus, expect(0, 7, 1.0)));
        assert!(same(&b.chi_minus, expect(0, 7, -1.0)));
        assert!(same(&b.sigma_plus, expect(4, 3, 1.0)));
        assert!(same(&b.sigma_minus, expect(4, 3, -1.0)));
    }

    #[test]
    fn product_basis_is_degenerate() {
        let b = ptp_basis(&PureState::basis(3, 0).unwrap()).unwrap();
        assert_eq!(b.chi_plus, b.chi_minus);
        assert!(!ptp_orthogonality(&PureState::basis(3, 0).unwrap()).unwrap());
    }

    #[test]
    fn ptp_orthogonality_examples() {
        assert!(ptp_orthogonality(&PureState::ghz(3).unwrap()).unwrap());
        assert!(!ptp_orthogonality(&PureState::w()).unwrap());
        assert!(ptp_orthogonality(&real(&[0.0, 0.0, 0.0, 0.0, 0.0, H, H, 0.0])).unwrap());
        let s = 0.5;
        let w_n1 = real(&[0.0, H, s, 0.0, s, 0.0, 0.0, 0.0]);
        assert!(ptp_orthogonality(&w_n1).unwrap());
    }

    #[test]
    fn ghz_teleports() {
        let ghz = PureState::ghz(3).unwrap();
        assert_perfect(&simulate_ptp(&ghz, &qubit(c(1.0, 0.0), c(0.0, 0.0))).unwrap());
        assert_perfect(&simulate_ptp(&ghz, &qubit(c(0.6, 0.0), Complex64::from_polar(0.8, 1.3))).unwrap());
        assert!(matches!(
            simulate_ptp(&PureState::w(), &qubit(c(1.0, 0.0), c(0.0, 0.0))),
            Err(Error::ProtocolUndefined(_))
        ));
    }

    #[test]
    fn bennett_resources() {
        let singlet = real(&[0.0, H, -H, 0.0]);
        let u = qubit(c(0.28, 0.96 * 0.6), c(0.96 * 0.8, 0.0));
        assert_perfect(&simulate_bennett(&singlet, &u).unwrap());
        let psi3 = real(&[-0.5, 0.5, 0.5, 0.5]);
        assert_perfect(&simulate_bennett(&psi3, &u).unwrap());
        assert!(matches!(
            simulate_bennett(&PureState::basis(2, 0).unwrap(), &u),
            Err(Error::ProtocolUndefined(_))
        ));
    }

    #[test]
    fn nielsen_circuit_on_bell() {
        let bell = real(&[H, 0.0, 0.0, H]);
        let u = qubit(c(0.6, 0.0), Complex64::from_polar(0.8, 0.3));
        assert_perfect(&simulate_nielsen_circuit(&bell, &u).unwrap());
    }

    #[test]
    fn nielsen_circuit_reports_zero_probability_branches() {
        let out = simulate_nielsen_circuit(&PureState::basis(2, 0).unwrap(), &qubit(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_eq!(out.iter().filter(|o| o.fidelity.is_none()).count(), 2);
        let total: f64 = out.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coded_sets() {
        let ghz = PureState::ghz(3).unwrap();
        let set = sdc_coded_set(&ghz, 2).unwrap();
        assert_eq!(set.states.len(), 4);
        let want = [[(0, H), (7, H)], [(0, H), (7, -H)], [(4, H), (3, H)], [(4, -H), (3, H)]];
        for (s, terms) in set.states.iter().zip(want) {
            for (i, a) in terms {
                assert!((s.amplitude(i) - c(a, 0.0)).norm() < 1e-15, "{s}");
            }
        }
        assert!(sdc_orthogonality(&ghz, 3).unwrap());
        let c_state = real(&[0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, -0.5]);
        assert!(sdc_orthogonality(&c_state, 2).unwrap());
        assert!(!sdc_orthogonality(&c_state, 3).unwrap());
        let set = sdc_coded_set(&c_state, 3).unwrap();
        assert!(set.states[4].inner(&set.states[7]).unwrap().norm() > 0.1);
        assert!(!sdc_orthogonality(&PureState::w(), 2).unwrap());
        assert!(sdc_coded_set(&ghz, 4).is_err());
    }

    #[test]
    fn varpi_coded_states() {
        let varpi = real(&[0.0, 0.0, 0.0, H, 0.0, 0.0, H, 0.0]);
        let set = sdc_coded_set(&varpi, 2).unwrap();
        let want = [[(3, H), (6, H)], [(3, H), (6, -H)], [(7, H), (2, H)], [(7, -H), (2, H)]];
        for (s, terms) in set.states.iter().zip(want) {
            for (i, a) in terms {
                assert!((s.amplitude(i) - c(a, 0.0)).norm() < 1e-15, "{s}");
            }
        }
        assert!(sdc_orthogonality(&varpi, 2).unwrap());
    }

    #[test]
    fn dense_coding_round_trip() {
        let ghz = PureState::ghz(3).unwrap();
        for m in ["00", "01", "10", "11", "000", "011", "101", "111"] {
            assert_eq!(simulate_sdc(&ghz, m).unwrap(), m);
        }
        assert!(matches!(simulate_sdc(&PureState::w(), "01"), Err(Error::ProtocolUndefined(_))));
        assert!(simulate_sdc(&ghz, "2").is_err());
        assert!(simulate_sdc(&ghz, "0101").is_err());
    }

    #[test]
    fn sampling_respects_support() {
        use rand::SeedableRng;
        let out = simulate_nielsen_circuit(&PureState::basis(2, 0).unwrap(), &qubit(c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k = sample_outcome(&out, &mut rng);
            assert!(out[k].probability > 0.0);
        }
    }
}
