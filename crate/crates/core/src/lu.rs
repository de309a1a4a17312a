//! Haar-random local unitaries, seeded sampling of resources, and the
//! local-unitary invariance harness.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{sample_sd_of_class, SloccClass};
use crate::error::{Error, Result};
use crate::state::{apply_local_unitary, gates, qubit_entropy, three_tangle, LocalUnitary, PureState};
use crate::suitability::Protocol;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generators derived from one root seed by index, so a batch
/// gives the same draws whether it runs serially or in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    root: u64,
}

impl SeedStream {
    pub fn new(root: u64) -> Self {
        Self { root }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(splitmix64(self.root ^ splitmix64(index)))
    }

    /// A stream for a sub-task, independent of this one's per-index rngs.
    pub fn child(&self, label: u64) -> SeedStream {
        SeedStream::new(splitmix64(self.root.wrapping_add(splitmix64(!label))))
    }
}

fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-distributed 2×2 unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: rand::Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    let z = Matrix2::from_fn(|_, _| gaussian(rng));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..2 {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..2 {
            u[(i, j)] *= ph;
        }
    }
    u
}

pub fn random_local_unitary<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Result<LocalUnitary> {
    if n == 0 {
        return Err(Error::arg("a local unitary needs at least one factor"));
    }
    LocalUnitary::new((0..n).map(|_| haar_unitary(rng)).collect())
}

/// Uniformly random pure state on `n` qubits.
pub fn random_state<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Result<PureState> {
    if n == 0 || n > crate::tolerance::MAX_QUBITS {
        return Err(Error::arg(format!("unsupported qubit count {n}")));
    }
    PureState::normalized((0..1usize << n).map(|_| gaussian(rng)).collect())
}

/// Columns of a random 4×2 isometry.
fn random_isometry<R: rand::Rng + ?Sized>(rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(4, 2, |_, _| gaussian(rng));
    z.qr().q()
}

/// Random three-qubit state whose qubit-3 marginal is exactly `I/2`:
/// `c_{jk} = V_{jk}/√2` with `j` indexing qubits 1, 2 and `k` qubit 3.
pub fn random_state_mixed_last<R: rand::Rng + ?Sized>(rng: &mut R) -> PureState {
    let v = random_isometry(rng);
    let amps = (0..8).map(|i| v[(i >> 1, i & 1)] * std::f64::consts::FRAC_1_SQRT_2).collect();
    PureState::normalized(amps).expect("isometry columns are unit vectors")
}

/// Random three-qubit state whose qubit-1 marginal is exactly `I/2`.
pub fn random_state_mixed_first<R: rand::Rng + ?Sized>(rng: &mut R) -> PureState {
    let v = random_isometry(rng);
    let amps = (0..8).map(|i| v[(i & 3, i >> 2)] * std::f64::consts::FRAC_1_SQRT_2).collect();
    PureState::normalized(amps).expect("isometry columns are unit vectors")
}

/// Canonical form of the given class, scrambled by a random local unitary.
pub fn random_state_of_class<R: rand::Rng + ?Sized>(rng: &mut R, class: SloccClass) -> PureState {
    let sd = sample_sd_of_class(class, rng);
    let lu = random_local_unitary(rng, 3).expect("three factors");
    apply_local_unitary(&sd.to_state(), &lu).expect("three factors")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LuTrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub protocol: Protocol,
}

impl LuTrialConfig {
    pub fn new(protocol: Protocol, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::arg("trials must be at least 1"));
        }
        Ok(Self { trials, seed, protocol })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuTrialReport {
    pub trials: usize,
    pub agree: usize,
    pub witnesses: Vec<LocalUnitary>,
}

/// Compares the protocol verdict on `state` with the verdict on `U·state`
/// for `config.trials` Haar-random local unitaries `U`.
pub fn lu_invariance_trial(state: &PureState, config: &LuTrialConfig) -> Result<LuTrialReport> {
    if config.trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let reference = config.protocol.check(state)?.verdict;
    let stream = SeedStream::new(config.seed);
    let n = state.n_qubits();
    let outcomes = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Option<LocalUnitary>> {
            let mut rng = stream.rng(t);
            let lu = random_local_unitary(&mut rng, n)?;
            let moved = apply_local_unitary(state, &lu)?;
            let verdict = config.protocol.check(&moved)?.verdict;
            Ok((verdict != reference).then_some(lu))
        })
        .collect::<Result<Vec<_>>>()?;
    let witnesses: Vec<LocalUnitary> = outcomes.into_iter().flatten().collect();
    Ok(LuTrialReport {
        trials: config.trials,
        agree: config.trials - witnesses.len(),
        witnesses,
    })
}

/// GHZ, `|C⟩ = (H ⊗ I ⊗ I)|GHZ⟩` and `H ⊗ I ⊗ I`: the first is a three-bit
/// dense coding resource, the second is not.
pub fn psdc3_counterexample() -> (PureState, PureState, LocalUnitary) {
    let ghz = PureState::ghz(3).expect("GHZ");
    let lu = LocalUnitary::new(vec![gates::hadamard(), gates::identity(), gates::identity()]).expect("unitary");
    let c = apply_local_unitary(&ghz, &lu).expect("three factors");
    (ghz, c, lu)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LuInvariants {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub tangle: f64,
}

impl LuInvariants {
    pub fn as_array(&self) -> [f64; 4] {
        [self.s1, self.s2, self.s3, self.tangle]
    }
}

/// Single-qubit entropies and three-tangle.
pub fn lu_invariants(state: &PureState) -> Result<LuInvariants> {
    state.require_qubits(3)?;
    Ok(LuInvariants {
        s1: qubit_entropy(state, 1)?,
        s2: qubit_entropy(state, 2)?,
        s3: qubit_entropy(state, 3)?,
        tangle: three_tangle(state)?,
    })
}
