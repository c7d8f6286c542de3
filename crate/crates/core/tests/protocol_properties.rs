mod common;

use common::{ops, pair, photons_from, tableau_from};
use photon_cluster::protocol::{apply_frame, run_cz_module, run_parity_module, CorrectionMode, PauliFrame};
use photon_cluster::stab::{stabilizer_group_equals, ForcedOutcomes, PauliString, StabilizerGroup};
use proptest::prelude::*;

fn n_and_state() -> impl Strategy<Value = (usize, Vec<common::Op>)> {
    (2usize..=8).prop_flat_map(|n| (Just(n), ops(n, 30, true)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cz_module_equals_direct_cz(
        (n, prep, (x, y)) in (2usize..=8).prop_flat_map(|n| (Just(n), ops(n, 30, true), pair(n))),
        branch in any::<bool>(),
    ) {
        let mut reg = photons_from(n, &prep);
        let mut frame = PauliFrame::new(n);
        let rec = run_cz_module(&mut reg, x, y, &mut frame, CorrectionMode::Immediate, &mut ForcedOutcomes::constant(branch)).unwrap();
        prop_assert!(!rec.outcome.deterministic);
        prop_assert_eq!(rec.outcome.bit(), branch);

        let mut direct = tableau_from(n, &prep);
        direct.apply_cz(x, y).unwrap();
        let photons: Vec<usize> = (0..n).collect();
        let got = reg.tableau().restricted_group(&photons).unwrap();
        prop_assert!(stabilizer_group_equals(&got, &direct).unwrap());
    }

    #[test]
    fn deferred_corrections_match_immediate(
        (n, prep) in n_and_state(),
        firings in prop::collection::vec((0usize..8, 1usize..8), 1..6),
        bits in prop::collection::vec(any::<bool>(), 1..6),
    ) {
        let run = |mode| {
            let mut reg = photons_from(n, &prep);
            let mut frame = PauliFrame::new(n);
            let mut coins = ForcedOutcomes::sequence(bits.clone());
            for &(a, d) in &firings {
                let (x, y) = (a % n, (a % n + d) % n);
                if x != y {
                    run_cz_module(&mut reg, x, y, &mut frame, mode, &mut coins).unwrap();
                }
            }
            if mode == CorrectionMode::Immediate {
                assert!(frame.is_empty());
            }
            apply_frame(&mut reg, &mut frame).unwrap();
            reg.tableau().canonical_form()
        };
        prop_assert_eq!(run(CorrectionMode::Immediate), run(CorrectionMode::Deferred));
    }

    #[test]
    fn parity_outcome_is_deterministic_iff_zz_stabilizes(
        (n, prep, (x, y)) in (2usize..=8).prop_flat_map(|n| (Just(n), ops(n, 30, true), pair(n))),
        coin in any::<bool>(),
    ) {
        let group: StabilizerGroup = tableau_from(n, &prep).canonical_form();
        let mut zz = PauliString::identity(n);
        zz.set(x, photon_cluster::stab::Pauli::Z);
        zz.set(y, photon_cluster::stab::Pauli::Z);
        let plus = group.contains(&zz).unwrap();
        zz.flip_sign();
        let minus = group.contains(&zz).unwrap();

        let mut reg = photons_from(n, &prep);
        let rec = run_parity_module(&mut reg, x, y, &mut ForcedOutcomes::constant(coin)).unwrap();
        prop_assert_eq!(rec.outcome.deterministic, plus || minus);
        if plus || minus {
            prop_assert_eq!(rec.outcome.bit(), minus);
        }
        prop_assert!(rec.correction_target.is_none());
    }

    #[test]
    fn ancilla_is_disentangled_after_firing(
        (n, prep, (x, y)) in (2usize..=8).prop_flat_map(|n| (Just(n), ops(n, 30, true), pair(n))),
        branch in any::<bool>(),
        parity in any::<bool>(),
    ) {
        let mut reg = photons_from(n, &prep);
        let mut frame = PauliFrame::new(n);
        let mut coins = ForcedOutcomes::constant(branch);
        let rec = if parity {
            run_parity_module(&mut reg, x, y, &mut coins).unwrap()
        } else {
            run_cz_module(&mut reg, x, y, &mut frame, CorrectionMode::Deferred, &mut coins).unwrap()
        };
        let a = rec.ancilla;
        prop_assert_eq!(reg.tableau().peek_z(a).unwrap(), Some(rec.outcome.bit()));
        for g in reg.tableau().canonical_form().generators() {
            if (0..n).any(|q| !matches!(g.get(q), photon_cluster::stab::Pauli::I)) {
                prop_assert_eq!(g.get(a), photon_cluster::stab::Pauli::I);
            }
        }
        prop_assert!(reg.tableau().restricted_group(&(0..n).collect::<Vec<_>>()).is_ok());
    }
}
