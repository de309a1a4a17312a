//! Named resource states with the verdicts the literature assigns to them.
//!
//! Each entry is built from its defining parameters. The shipped JSON copy
//! (`data/catalog.json`) is produced by [`catalog_json`] and a test keeps
//! the two in sync.

use std::f64::consts::{FRAC_1_SQRT_2 as H, PI};

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::Serialize;

use crate::canonical::{classify_slocc, SchmidtDecomposition, SloccClass};
use crate::error::{Error, Result};
use crate::state::{three_tangle, PureState};
use crate::suitability::{classify_bennett_family, classify_psdc3_family, Protocol, Psdc3Family};
use crate::tolerance::EPS_INV;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Verdict { protocol: Protocol, value: bool },
    /// The verdict is negative and exactly these conditions fail.
    Failing { protocol: Protocol, labels: Vec<String> },
    Class { value: SloccClass },
    Tangle { value: f64 },
    Psdc3Family { value: Psdc3Family },
    BennettFamily { value: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    pub claim: String,
}

/// Result of evaluating one expectation against the live checkers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Expectation {
    pub fn evaluate(&self, state: &PureState) -> Result<CheckOutcome> {
        let (expected, actual, ok) = match &self.check {
            Check::Verdict { protocol, value } => {
                let got = protocol.check(state)?.verdict;
                (format!("{protocol}={value}"), format!("{protocol}={got}"), got == *value)
            }
            Check::Failing { protocol, labels } => {
                let r = protocol.check(state)?;
                let got: Vec<String> = r.failing().into_iter().map(String::from).collect();
                (
                    format!("{protocol} fails {labels:?}"),
                    format!("{protocol} fails {got:?}"),
                    !r.verdict && &got == labels,
                )
            }
            Check::Class { value } => {
                let got = classify_slocc(state)?;
                (format!("class {value}"), format!("class {got}"), got == *value)
            }
            Check::Tangle { value } => {
                let got = three_tangle(state)?;
                (format!("tangle {value}"), format!("tangle {got:.12}"), (got - value).abs() < EPS_INV)
            }
            Check::Psdc3Family { value } => {
                let got = classify_psdc3_family(state)?;
                (format!("family {value}"), format!("family {got}"), got == *value)
            }
            Check::BennettFamily { value } => {
                let got = classify_bennett_family(state)?;
                (format!("family {value}"), format!("family {}", got.name()), got.name() == value)
            }
        };
        Ok(CheckOutcome { expected, actual, ok })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    #[serde(skip_serializing_if = "IndexMap::is_empty")]
    pub parameters: IndexMap<String, f64>,
    pub state: PureState,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    /// Evaluates every stored expectation.
    pub fn verify(&self) -> Result<Vec<CheckOutcome>> {
        self.expected.iter().map(|e| e.evaluate(&self.state)).collect()
    }

    /// Expected verdict for `protocol`, if one is stored.
    pub fn expected_verdict(&self, protocol: Protocol) -> Option<bool> {
        self.expected.iter().find_map(|e| match &e.check {
            Check::Verdict { protocol: p, value } if *p == protocol => Some(*value),
            Check::Failing { protocol: p, .. } if *p == protocol => Some(false),
            _ => None,
        })
    }

    pub fn expected_class(&self) -> Option<SloccClass> {
        self.expected.iter().find_map(|e| match e.check {
            Check::Class { value } => Some(value),
            _ => None,
        })
    }
}

struct Builder {
    entry: CatalogEntry,
}

impl Builder {
    fn new(name: &str, description: &str, state: PureState) -> Self {
        Self {
            entry: CatalogEntry {
                name: name.into(),
                description: description.into(),
                parameters: IndexMap::new(),
                state,
                expected: Vec::new(),
            },
        }
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.entry.parameters.insert(key.into(), value);
        self
    }

    fn push(mut self, check: Check, claim: &str) -> Self {
        self.entry.expected.push(Expectation {
            check,
            claim: claim.into(),
        });
        self
    }

    fn verdict(self, protocol: Protocol, value: bool, claim: &str) -> Self {
        self.push(Check::Verdict { protocol, value }, claim)
    }

    fn failing(self, protocol: Protocol, labels: &[&str], claim: &str) -> Self {
        let labels = labels.iter().map(|s| s.to_string()).collect();
        self.push(Check::Failing { protocol, labels }, claim)
    }

    fn class(self, value: SloccClass, claim: &str) -> Self {
        self.push(Check::Class { value }, claim)
    }

    fn tangle(self, value: f64, claim: &str) -> Self {
        self.push(Check::Tangle { value }, claim)
    }

    fn psdc3_family(self, value: Psdc3Family, claim: &str) -> Self {
        self.push(Check::Psdc3Family { value }, claim)
    }

    fn bennett_family(self, value: &str, claim: &str) -> Self {
        self.push(Check::BennettFamily { value: value.into() }, claim)
    }

    fn done(self) -> CatalogEntry {
        self.entry
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn terms(n: usize, t: &[(usize, Complex64)]) -> PureState {
    PureState::from_terms(n, t).expect("catalog state")
}

fn real_terms(n: usize, t: &[(usize, f64)]) -> PureState {
    let t: Vec<(usize, Complex64)> = t.iter().map(|&(i, a)| (i, c(a, 0.0))).collect();
    terms(n, &t)
}

fn sd_state(lambda: [f64; 5], phi: f64) -> PureState {
    SchmidtDecomposition::new(lambda, phi).expect("catalog SD").to_state()
}

/// `(|100⟩ + √n e^{iγ}|010⟩ + √(n+1) e^{iδ}|001⟩) / √(2(n+1))`.
pub fn w_n_state(n: f64, gamma: f64, delta: f64) -> Result<PureState> {
    if n.is_nan() || n < 1.0 {
        return Err(Error::arg("W_n needs n ≥ 1"));
    }
    let s = 1.0 / (2.0 * (n + 1.0)).sqrt();
    Ok(terms(
        3,
        &[
            (4, c(s, 0.0)),
            (2, Complex64::from_polar(s * n.sqrt(), gamma)),
            (1, Complex64::from_polar(s * (n + 1.0).sqrt(), delta)),
        ],
    ))
}

/// SD with `φ = π`, `λ1 = 0.57`, `λ3 = 0.4` and the other coefficients
/// solved from the teleportation conditions with `λ1λ2 = λ3λ4 ≠ 0`.
fn ghz4_lambda() -> [f64; 5] {
    let (l1, l3) = (0.57f64, 0.4f64);
    let l0 = (0.5 - l1 * l1 - l3 * l3).sqrt();
    let l2 = (0.5 / (1.0 + (l1 / l3).powi(2))).sqrt();
    let l4 = l1 * l2 / l3;
    [l0, l1, l2, l3, l4]
}

const PTP_HOLDS: &str = "satisfies both three-qubit teleportation conditions";
const PSDC2_HOLDS: &str = "satisfies both two-bit dense coding conditions";
const PSDC3_HOLDS: &str = "satisfies all eight three-bit dense coding conditions";

/// All named states, in display order.
pub fn catalog() -> Vec<CatalogEntry> {
    use Protocol::*;
    use SloccClass as S;
    let r3 = 1.0 / 3f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    let q = 1.0 / (2.0 * 2f64.sqrt());
    let mut out = vec![
        Builder::new("ghz", "(|000⟩ + |111⟩)/√2", PureState::ghz(3).unwrap())
            .verdict(PTP, true, "standard three-qubit teleportation resource")
            .verdict(PSDC2, true, "standard two-bit dense coding resource")
            .verdict(PSDC3, true, "coded states A1…A8 applied to it are mutually orthogonal")
            .class(S::GHZ, "GHZ class representative")
            .tangle(1.0, "maximal three-tangle")
            .psdc3_family(Psdc3Family::F0, "two-term family on |000⟩, |111⟩")
            .done(),
        Builder::new("w", "(|001⟩ + |010⟩ + |100⟩)/√3", PureState::w())
            .failing(PTP, &["cod-1"], "even/odd weight condition fails, so no perfect teleportation")
            .verdict(PSDC2, false, "not a two-bit dense coding resource")
            .verdict(PSDC3, false, "no W-class state carries three bits")
            .class(S::W, "W class representative")
            .tangle(0.0, "W-class states have zero three-tangle")
            .done(),
        Builder::new("w-sd", "(|000⟩ + |101⟩ + |110⟩)/√3, canonical form of W", sd_state([r3, 0.0, r3, r3, 0.0], 0.0))
            .verdict(PTP, false, "canonical form of W is not of the teleporting W shape")
            .verdict(PSDC2, false, "canonical form of W fails the weight condition")
            .class(S::W, "W class")
            .done(),
    ];
    for (n, gamma, delta) in [(1.0, 0.0, 0.0), (2.0, 0.0, 0.0), (3.0, 0.7, 1.9)] {
        let name = if gamma == 0.0 && delta == 0.0 {
            format!("w-n-{n}")
        } else {
            format!("w-n-{n}-phased")
        };
        out.push(
            Builder::new(&name, "(|100⟩ + √n e^{iγ}|010⟩ + √(n+1) e^{iδ}|001⟩)/√(2(n+1))", w_n_state(n, gamma, delta).unwrap())
                .param("n", n)
                .param("gamma", gamma)
                .param("delta", delta)
                .verdict(PTP, true, PTP_HOLDS)
                .verdict(PSDC2, false, "qubit-1 weight condition fails")
                .verdict(PSDC3, false, "no W-class state carries three bits")
                .class(S::W, "W class")
                .done(),
        );
    }
    out.extend([
        Builder::new("g-state", "(|000⟩ + |010⟩ + |101⟩ − |111⟩)/2", real_terms(3, &[(0, 0.5), (2, 0.5), (5, 0.5), (7, -0.5)]))
            .verdict(PTP, true, PTP_HOLDS)
            .verdict(PSDC2, true, PSDC2_HOLDS)
            .done(),
        Builder::new(
            "graph-1",
            "(|000⟩+|001⟩+|010⟩−|011⟩+|100⟩+|101⟩−|110⟩+|111⟩)/(2√2)",
            real_terms(3, &[(0, q), (1, q), (2, q), (3, -q), (4, q), (5, q), (6, -q), (7, q)]),
        )
        .verdict(PTP, true, PTP_HOLDS)
        .verdict(PSDC2, true, PSDC2_HOLDS)
        .done(),
        Builder::new(
            "graph-2",
            "(|000⟩+|001⟩+|010⟩−|011⟩+|100⟩−|101⟩−|110⟩−|111⟩)/(2√2)",
            real_terms(3, &[(0, q), (1, q), (2, q), (3, -q), (4, q), (5, -q), (6, -q), (7, -q)]),
        )
        .verdict(PTP, true, PTP_HOLDS)
        .verdict(PSDC2, true, PSDC2_HOLDS)
        .done(),
        Builder::new("general-ghz", "0.6|000⟩ + 0.8|111⟩", real_terms(3, &[(0, 0.6), (7, 0.8)]))
            .param("alpha", 0.6)
            .param("beta", 0.8)
            .failing(PTP, &["cod-1"], "unequal GHZ weights break the even/odd weight condition")
            .class(S::GHZ, "GHZ class")
            .done(),
        Builder::new("c-state", "(|000⟩ + |011⟩ + |100⟩ − |111⟩)/2 = (H⊗I⊗I)|GHZ⟩", real_terms(3, &[(0, 0.5), (3, 0.5), (4, 0.5), (7, -0.5)]))
            .verdict(PSDC2, true, PSDC2_HOLDS)
            .failing(PSDC3, &["a1"], "local Hadamard image of GHZ violates only the a1 condition")
            .class(S::GHZ, "local-unitary image of GHZ")
            .done(),
        Builder::new("a-bc-5", "(e^{iφ}|100⟩ + |111⟩)/√2", terms(3, &[(4, Complex64::from_polar(H, 0.9)), (7, c(H, 0.0))]))
            .param("phi", 0.9)
            .verdict(PTP, true, "teleporting canonical form of the A-BC class")
            .class(S::A_BC, "qubit 1 factors out")
            .done(),
        Builder::new("a-bc-5-2", "(|101⟩ + |110⟩)/√2", real_terms(3, &[(5, H), (6, H)]))
            .verdict(PTP, true, "separable state meeting both teleportation conditions")
            .class(S::A_BC, "qubit 1 factors out")
            .done(),
        {
            let l1: f64 = 0.4;
            let l2 = (0.5 - l1 * l1).sqrt();
            Builder::new("a-bc-6", "−λ1|100⟩ + λ2|101⟩ + λ2|110⟩ + λ1|111⟩", real_terms(3, &[(4, -l1), (5, l2), (6, l2), (7, l1)]))
                .param("lambda1", l1)
                .param("lambda2", l2)
                .verdict(PTP, true, "teleporting canonical form of the A-BC class")
                .class(S::A_BC, "qubit 1 factors out")
                .done()
        },
        Builder::new("b-ac-s", "(|000⟩ + |101⟩)/√2", real_terms(3, &[(0, H), (5, H)]))
            .verdict(PTP, true, "the unique teleporting canonical form of the B-AC class")
            .verdict(PSDC2, true, "separable two-bit dense coding resource")
            .class(S::B_AC, "qubit 2 factors out")
            .done(),
        Builder::new("c-ab-s", "(|000⟩ + |110⟩)/√2", real_terms(3, &[(0, H), (6, H)]))
            .verdict(PTP, false, "no C-AB class state teleports")
            .verdict(PSDC2, true, "separable two-bit dense coding resource")
            .class(S::C_AB, "qubit 3 factors out")
            .done(),
        Builder::new("eta1-plus", "(|010⟩ + |001⟩ + √2|100⟩)/2", real_terms(3, &[(2, 0.5), (1, 0.5), (4, H)]))
            .verdict(PSDC2, true, "W-like two-bit dense coding resource")
            .class(S::W, "W-like state")
            .done(),
        Builder::new("varpi-plus", "(|011⟩ + |110⟩)/√2", real_terms(3, &[(3, H), (6, H)]))
            .verdict(PSDC2, true, PSDC2_HOLDS)
            .class(S::B_AC, "separable, local-unitary image of (|000⟩ + |101⟩)/√2")
            .done(),
        Builder::new(
            "phi",
            "(|000⟩ + |010⟩ + |100⟩ + |101⟩ − |110⟩ + |111⟩)/√6",
            real_terms(3, &[(0, r6), (2, r6), (4, r6), (5, r6), (6, -r6), (7, r6)]),
        )
        .verdict(PSDC2, false, "fails the qubit-1 weight condition")
        .class(S::W, "entangled with vanishing three-tangle")
        .tangle(0.0, "three-tangle vanishes")
        .done(),
        Builder::new("kappa1", "(|010⟩ + |011⟩ + |100⟩ − |101⟩)/2 = (I⊗σ1⊗H)|GHZ⟩", real_terms(3, &[(2, 0.5), (3, 0.5), (4, 0.5), (5, -0.5)]))
            .verdict(PSDC3, true, PSDC3_HOLDS)
            .tangle(1.0, "three-tangle is 1")
            .class(S::GHZ, "local-unitary image of GHZ")
            .done(),
        Builder::new("kappa2", "(|010⟩ + |101⟩)/√2", real_terms(3, &[(2, H), (5, H)]))
            .verdict(PSDC3, true, PSDC3_HOLDS)
            .psdc3_family(Psdc3Family::F2, "two-term family on |010⟩, |101⟩")
            .class(S::GHZ, "local-unitary image of GHZ")
            .done(),
        Builder::new("kappa3", "(|011⟩ + |100⟩)/√2", real_terms(3, &[(3, H), (4, H)]))
            .verdict(PSDC3, true, PSDC3_HOLDS)
            .psdc3_family(Psdc3Family::F3, "two-term family on |011⟩, |100⟩")
            .class(S::GHZ, "local-unitary image of GHZ")
            .done(),
        Builder::new("w-pt-sd", "|000⟩/2 + |101⟩/√2 + |110⟩/2", sd_state([0.5, 0.0, H, 0.5, 0.0], 0.0))
            .param("lambda0", 0.5)
            .param("lambda3", 0.5)
            .verdict(PTP, true, "teleporting canonical form of the W class")
            .class(S::W, "W class")
            .done(),
        {
            let (l2, l3) = (H * 0.6, H * 0.8);
            Builder::new("w-sdc-sd", "|000⟩/√2 + λ2|101⟩ + λ3|110⟩", sd_state([H, 0.0, l2, l3, 0.0], 0.0))
                .param("lambda2", l2)
                .param("lambda3", l3)
                .verdict(PSDC2, true, "dense coding canonical form of the W class")
                .class(S::W, "W class")
                .done()
        },
        {
            let l2: f64 = 0.3;
            let l4 = (0.5 - l2 * l2).sqrt();
            Builder::new("ghz-1", "|000⟩/√2 + λ2|101⟩ + λ4|111⟩", sd_state([H, 0.0, l2, 0.0, l4], 0.0))
                .param("lambda2", l2)
                .param("lambda4", l4)
                .verdict(PTP, true, "teleporting canonical form of the GHZ class")
                .class(S::GHZ, "GHZ class")
                .done()
        },
        Builder::new("ghz-2", "λ0|000⟩ + λ1e^{iφ}|100⟩ + |111⟩/√2", sd_state([0.5, 0.5, 0.0, 0.0, H], 1.0))
            .param("lambda0", 0.5)
            .param("lambda1", 0.5)
            .param("phi", 1.0)
            .verdict(PTP, true, "teleporting canonical form of the GHZ class")
            .class(S::GHZ, "GHZ class")
            .done(),
    ]);
    let l = ghz4_lambda();
    out.push(
        Builder::new("ghz-4", "λ0|000⟩ − λ1|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩", sd_state(l, PI))
            .param("lambda0", l[0])
            .param("lambda1", l[1])
            .param("lambda2", l[2])
            .param("lambda3", l[3])
            .param("lambda4", l[4])
            .verdict(PTP, true, "teleporting canonical form of the GHZ class with φ = π")
            .class(S::GHZ, "GHZ class")
            .done(),
    );
    let (beta, gamma) = (Complex64::from_polar(0.5, 0.5), Complex64::from_polar(0.5, -1.1));
    out.push(
        Builder::new("w-like-ex7", "γ|001⟩ + β|010⟩ + |100⟩/√2", terms(3, &[(1, gamma), (2, beta), (4, c(H, 0.0))]))
            .verdict(PSDC2, true, "W-like two-bit dense coding resource")
            .class(S::W, "W class")
            .done(),
    );
    out.push(
        Builder::new("product", "|000⟩", PureState::basis(3, 0).unwrap())
            .failing(PTP, &["cod-1"], "product state")
            .verdict(PSDC2, false, "product state")
            .verdict(PSDC3, false, "product state")
            .class(S::A_B_C, "fully separable")
            .tangle(0.0, "product state")
            .done(),
    );
    out.push(
        Builder::new("pi1-example", "(|010⟩ + |011⟩ − |100⟩ + |101⟩)/2", real_terms(3, &[(2, 0.5), (3, 0.5), (4, -0.5), (5, 0.5)]))
            .verdict(PSDC3, true, "four-term family on |010⟩, |011⟩, |100⟩, |101⟩")
            .psdc3_family(Psdc3Family::PI1, "four-term family on |010⟩, |011⟩, |100⟩, |101⟩")
            .class(S::GHZ, "members of the four-term families have nonzero three-tangle")
            .done(),
    );
    for (name, i, j, fam) in [
        ("f1-example", 1, 6, Psdc3Family::F1),
        ("f2-example", 2, 5, Psdc3Family::F2),
        ("f3-example", 3, 4, Psdc3Family::F3),
    ] {
        out.push(
            Builder::new(name, "(e^{iθ}|a⟩ + e^{iθ'}|ā⟩)/√2", terms(3, &[(i, Complex64::from_polar(H, 0.4)), (j, Complex64::from_polar(H, 2.5))]))
                .verdict(PSDC3, true, "two-term three-bit dense coding family")
                .psdc3_family(fam, "two-term three-bit dense coding family")
                .done(),
        );
    }
    // two-qubit resources
    out.extend([
        Builder::new("bell-phi-plus", "(|00⟩ + |11⟩)/√2", real_terms(2, &[(0, H), (3, H)]))
            .verdict(BENNETT, true, "Bell state")
            .verdict(PTP_N, true, "n-qubit conditions reduce to the two-qubit ones")
            .bennett_family("PSI2", "(e^{iω0}|00⟩ + e^{iω3}|11⟩)/√2 family")
            .done(),
        Builder::new("singlet", "(|01⟩ − |10⟩)/√2", real_terms(2, &[(1, H), (2, -H)]))
            .verdict(BENNETT, true, "singlet resource")
            .bennett_family("PSI1", "(e^{iω1}|01⟩ + e^{iω2}|10⟩)/√2 family")
            .done(),
        Builder::new("psi3-example", "(−|00⟩ + |01⟩ + |10⟩ + |11⟩)/2", real_terms(2, &[(0, -0.5), (1, 0.5), (2, 0.5), (3, 0.5)]))
            .param("k", 0.5)
            .param("l", 0.5)
            .param("theta0", PI)
            .verdict(BENNETT, true, "four-term family with θ0 + θ3 − θ1 − θ2 = ±π")
            .bennett_family("PSI3", "four-term family")
            .done(),
        Builder::new("lu-bell", "(|00⟩ + i|01⟩ + i|10⟩ + |11⟩)/2", terms(2, &[(0, c(0.5, 0.0)), (1, c(0.0, 0.5)), (2, c(0.0, 0.5)), (3, c(0.5, 0.0))]))
            .verdict(BENNETT, true, "local-unitary image of a Bell state")
            .done(),
        Builder::new("product-ii", "(|00⟩ + i|01⟩ − i|10⟩ + |11⟩)/2", terms(2, &[(0, c(0.5, 0.0)), (1, c(0.0, 0.5)), (2, c(0.0, -0.5)), (3, c(0.5, 0.0))]))
            .done(),
        Builder::new("ghz4", "(|0000⟩ + |1111⟩)/√2", PureState::ghz(4).unwrap())
            .verdict(PTP_N, true, "n-qubit teleportation conditions hold")
            .done(),
    ]);
    out
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::arg(format!("no catalog state named '{name}'")))
}

pub fn names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

/// Pretty JSON of the whole catalog.
pub fn catalog_json() -> String {
    let mut text = serde_json::to_string_pretty(&catalog()).expect("catalog serialization");
    text.push('\n');
    text
}
