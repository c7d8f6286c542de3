mod common;

use common::{apply_sv, apply_tableau, ops, random_ops};
use photon_cluster::lattice::{cluster_generators, cubic_graph, grid_graph, pruned_cubic_graph, TargetGraph};
use photon_cluster::oracle::StateVector;
use photon_cluster::protocol::{run_cz_module, CorrectionMode, PauliFrame, PhotonicRegister};
use photon_cluster::stab::{stabilizer_group_equals, StabilizerTableau};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_agrees(t: &StabilizerTableau, sv: &StateVector) {
    for g in t.canonical_form().generators() {
        assert!(
            sv.stabilizer_check(g).unwrap(),
            "{g} does not stabilize the oracle state"
        );
    }
}

#[test]
fn thousand_random_circuits_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let n = 1 + trial % 10;
        let circuit = random_ops(&mut rng, n, 40, true);
        let mut t = StabilizerTableau::new(n).unwrap();
        let mut sv = StateVector::zero(n).unwrap();
        for op in circuit {
            let m = apply_tableau(&mut t, op);
            apply_sv(&mut sv, op, m);
        }
        assert_agrees(&t, &sv);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn every_step_agrees((n, circuit) in (1usize..=6).prop_flat_map(|n| (Just(n), ops(n, 25, true)))) {
        let mut t = StabilizerTableau::new(n).unwrap();
        let mut sv = StateVector::zero(n).unwrap();
        for op in circuit {
            let before = t.clone();
            let m = apply_tableau(&mut t, op);
            if let common::Op::Measure(q, _) = op {
                // Oracle probabilities confirm whether the outcome was random.
                let p1 = sv.prob_one(q).unwrap();
                match before.peek_z(q).unwrap() {
                    Some(v) => prop_assert!((p1 - f64::from(u8::from(v))).abs() < 1e-9),
                    None => prop_assert!((p1 - 0.5).abs() < 1e-9),
                }
            }
            apply_sv(&mut sv, op, m);
            assert_agrees(&t, &sv);
        }
    }
}

/// Building a graph state from `|+>` with one CZ per edge gives the cluster
/// generators, both with direct CZs and with CZ modules.
fn check_graph(g: &TargetGraph, seed: u64) {
    let n = g.num_vertices();
    let mut direct = StabilizerTableau::new(n).unwrap();
    let mut reg = PhotonicRegister::new(n).unwrap();
    for q in 0..n {
        direct.apply_h(q).unwrap();
        reg.tableau_mut().apply_h(q).unwrap();
    }
    let mut frame = PauliFrame::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(a, b) in g.edges() {
        direct.apply_cz(a, b).unwrap();
        run_cz_module(&mut reg, a, b, &mut frame, CorrectionMode::Immediate, &mut rng).unwrap();
    }
    let target = cluster_generators(g);
    assert!(stabilizer_group_equals(&direct, &target.generators).unwrap());
    let photons: Vec<usize> = (0..n).collect();
    let built = reg.tableau().restricted_group(&photons).unwrap();
    assert!(stabilizer_group_equals(&built, &target.generators).unwrap());
    if n <= 10 {
        let mut sv = StateVector::zero(n).unwrap();
        for q in 0..n {
            sv.apply_gate(photon_cluster::oracle::Gate::H, &[q]).unwrap();
        }
        for &(a, b) in g.edges() {
            sv.apply_gate(photon_cluster::oracle::Gate::Cz, &[a, b]).unwrap();
        }
        for k in &target.generators {
            assert!(sv.stabilizer_check(k).unwrap());
        }
    }
}

#[test]
fn small_graph_states_match_their_generators() {
    let mut graphs = Vec::new();
    for r in 1..=10 {
        for c in 1..=10 / r {
            graphs.push(grid_graph(r, c).unwrap());
        }
    }
    for (x, y, z) in [(1, 1, 1), (2, 2, 2), (2, 2, 1), (3, 3, 1), (1, 2, 5)] {
        graphs.push(cubic_graph(x, y, z).unwrap());
    }
    for (x, y, z) in [(2, 2, 2), (3, 3, 1), (2, 3, 1), (3, 2, 2)] {
        graphs.push(pruned_cubic_graph(x, y, z).unwrap());
    }
    for (i, g) in graphs.iter().enumerate() {
        assert!(g.num_vertices() <= 10);
        check_graph(g, i as u64);
    }
}
