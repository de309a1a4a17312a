use proptest::prelude::*;
use qresource::canonical::{classify_slocc, schmidt_decompose, sd_class_of};
use qresource::lu::{lu_invariants, random_local_unitary, SeedStream};
use qresource::oracle::{bennett_basis, ptp_orthogonality, sdc_orthogonality};
use qresource::state::{qubit_entropy, three_tangle_versions};
use qresource::suitability::{check_bennett2, check_psdc2, check_psdc3, check_ptp3};
use qresource::{apply_local_unitary, concurrence2, reduced_density, Complex64, PureState};

fn state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-2)
        .prop_map(|v| PureState::normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn scrambled(s: &PureState, seed: u64) -> PureState {
    let mut rng = SeedStream::new(seed).rng(0);
    let lu = random_local_unitary(&mut rng, s.n_qubits()).unwrap();
    apply_local_unitary(s, &lu).unwrap()
}

proptest! {
    #[test]
    fn local_unitaries_preserve_norm(s in state(3), seed in any::<u64>()) {
        prop_assert!((scrambled(&s, seed).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn marginals_are_density_matrices(s in state(3), k in 1usize..=3) {
        let rho = reduced_density(&s, &[k]).unwrap();
        let ev = rho.eigenvalues();
        prop_assert!(ev.iter().all(|&x| x > -1e-12));
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complementary_marginals_share_spectrum(s in state(3)) {
        // |ψ⟩ on 1|23: ρ₁ and ρ₂₃ have the same nonzero eigenvalues
        let one = reduced_density(&s, &[1]).unwrap().eigenvalues();
        let rest = reduced_density(&s, &[2, 3]).unwrap().eigenvalues();
        prop_assert!((one[1] - rest[3]).abs() < 1e-10);
        prop_assert!((one[0] - rest[2]).abs() < 1e-10);
        prop_assert!(rest[0].abs() < 1e-10 && rest[1].abs() < 1e-10);
    }

    #[test]
    fn invariants_are_lu_invariant(s in state(3), seed in any::<u64>()) {
        let a = lu_invariants(&s).unwrap().as_array();
        let b = lu_invariants(&scrambled(&s, seed)).unwrap().as_array();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn entropies_are_bounded(s in state(3), k in 1usize..=3) {
        let e = qubit_entropy(&s, k).unwrap();
        prop_assert!((-1e-12..=std::f64::consts::LN_2 + 1e-12).contains(&e));
    }

    #[test]
    fn concurrence_in_unit_interval_and_lu_invariant(s in state(2), seed in any::<u64>()) {
        let c = concurrence2(&s).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        prop_assert!((c - concurrence2(&scrambled(&s, seed)).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn tangle_formulas_agree(s in state(3)) {
        let [a, b, c] = three_tangle_versions(&s).unwrap();
        prop_assert!((a - b).abs() < 1e-8 && (a - c).abs() < 1e-8);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn canonical_form_round_trips(s in state(3)) {
        let sd = schmidt_decompose(&s).unwrap();
        let back = sd.reconstruct();
        let overlap = s.inner(&back).unwrap().norm();
        prop_assert!((overlap - 1.0).abs() < 1e-10);
        let l = sd.lambda();
        prop_assert!(l.iter().all(|&x| x >= 0.0));
        prop_assert!((0.0..std::f64::consts::TAU).contains(&sd.phi()));
    }

    #[test]
    fn shape_class_matches_marginal_class(s in state(3)) {
        let sd = schmidt_decompose(&s).unwrap();
        prop_assert_eq!(sd_class_of(&sd), classify_slocc(&s).unwrap());
    }

    #[test]
    fn checkers_match_oracles(s in state(3)) {
        prop_assert_eq!(check_ptp3(&s).unwrap().verdict, ptp_orthogonality(&s).unwrap());
        prop_assert_eq!(check_psdc2(&s).unwrap().verdict, sdc_orthogonality(&s, 2).unwrap());
        prop_assert_eq!(check_psdc3(&s).unwrap().verdict, sdc_orthogonality(&s, 3).unwrap());
    }

    #[test]
    fn bennett_checker_matches_basis_orthonormality(s in state(2)) {
        let basis = bennett_basis(&s).unwrap();
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let ip: Complex64 = basis[i].iter().zip(&basis[j]).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        prop_assert_eq!(check_bennett2(&s).unwrap().verdict, worst < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn checkers_match_oracles_on_catalog_orbits(seed in any::<u64>()) {
        for entry in qresource::catalog::catalog().into_iter().filter(|e| e.state.n_qubits() == 3) {
            let s = scrambled(&entry.state, seed);
            prop_assert_eq!(check_ptp3(&s).unwrap().verdict, ptp_orthogonality(&s).unwrap(), "{}", entry.name);
            prop_assert_eq!(check_psdc2(&s).unwrap().verdict, sdc_orthogonality(&s, 2).unwrap(), "{}", entry.name);
            prop_assert_eq!(check_psdc3(&s).unwrap().verdict, sdc_orthogonality(&s, 3).unwrap(), "{}", entry.name);
        }
    }
}

proptest! {
    #[test]
    fn bennett_checker_matches_oracle_on_bell_orbit(seed in any::<u64>()) {
        let bell = PureState::ghz(2).unwrap();
        let s = scrambled(&bell, seed);
        let teleports = qresource::oracle::simulate_bennett(&s, &qresource::UnknownQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap());
        prop_assert_eq!(check_bennett2(&s).unwrap().verdict, teleports.is_ok());
    }
}
