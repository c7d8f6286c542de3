use photon_cluster::lattice::{grid_graph, Color};
use photon_cluster::netsim::{
    build_2d_layout, build_3d_layout, injection_schedule, simulate, ControlMode, Event, NetworkLayout, SimConfig,
    SimError, Switching, PERIOD,
};
use photon_cluster::protocol::CorrectionMode;
use photon_cluster::report::{recheck_report, target_3d, verify_2d, verify_3d, verify_layout, RunOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn any_seed_builds_the_grid(
        m in 1usize..=6,
        n in 1usize..=6,
        seed in any::<u64>(),
        active in any::<bool>(),
        global in any::<bool>(),
    ) {
        let opts = RunOptions {
            seed,
            switching: if active { Switching::ActiveFlipflop } else { Switching::PassivePbs },
            control: if global { ControlMode::Global } else { ControlMode::Individual },
            ..Default::default()
        };
        let r = verify_2d(m, n, &opts).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.resources.measurement_count, 2 * m * n - m - n);
        prop_assert!(recheck_report(&r).unwrap().is_empty());
    }
}

#[test]
fn three_d_regions_verify_under_both_controls() {
    for (nx, ny, nz) in [(3, 3, 3), (4, 3, 2), (2, 2, 2), (4, 4, 3)] {
        for control in [ControlMode::Individual, ControlMode::Global] {
            let r = verify_3d(
                nx,
                ny,
                nz,
                &RunOptions {
                    seed: 5,
                    control,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r.pass, "{nx}x{ny}x{nz} {control:?}");
            assert!(r.photons.list.iter().all(|p| p.degree <= 4));
        }
    }
}

#[test]
fn slabs_reduce_to_two_dimensional_patterns() {
    for (nx, ny) in [(4, 3), (5, 5), (1, 4), (3, 1)] {
        let r = verify_3d(nx, ny, 1, &RunOptions::default()).unwrap();
        assert!(r.pass, "slab {nx}x{ny}");
        assert_eq!(r.photons.total, target_3d(nx, ny, 1).unwrap().num_vertices());
    }
}

#[test]
fn green_rails_carry_half_the_photons() {
    let layout = build_3d_layout(4, 4, 8, ControlMode::Individual).unwrap();
    let schedule = injection_schedule(&layout);
    for rail in &layout.rails {
        let count = schedule.iter().filter(|p| p.rail == rail.index).count();
        match rail.color {
            Color::Red => assert_eq!(count, 8),
            Color::Green => assert_eq!(count, 4),
        }
    }
}

#[test]
fn layout_descriptor_round_trips_and_runs() {
    let layout = build_2d_layout(3, 3, Switching::PassivePbs, ControlMode::Global).unwrap();
    let back = NetworkLayout::from_json(&layout.to_json()).unwrap();
    assert_eq!(back, layout);
    let (report, _) = verify_layout(&back, &grid_graph(3, 3).unwrap(), &RunOptions::default()).unwrap();
    assert!(report.pass);
}

#[test]
fn event_log_is_time_ordered_and_complete() {
    let layout = build_2d_layout(3, 4, Switching::ActiveFlipflop, ControlMode::Individual).unwrap();
    let out = simulate(&layout, &injection_schedule(&layout), &SimConfig::default()).unwrap();
    let times: Vec<u64> = out
        .events
        .iter()
        .map(|e| match e {
            Event::Arrive { time, .. }
            | Event::Switch { time, .. }
            | Event::Pulse { time, .. }
            | Event::Latch { time, .. }
            | Event::Fire { time, .. } => *time,
        })
        .collect();
    assert!(times.windows(2).all(|w| w[0] <= w[1]));
    let arrivals = out.events.iter().filter(|e| matches!(e, Event::Arrive { .. })).count();
    let expected: usize = out.photons.iter().map(|p| layout.module_visits(p.rail)).sum();
    assert_eq!(arrivals, expected);
    // Every M2 arrival sets the switch once.
    assert_eq!(out.resources.switch_event_count, 2 * 2 * 4);
    assert!(out.resources.layer_firings.iter().sum::<usize>() == out.records.len());
}

#[test]
fn corrections_mode_does_not_change_outcomes() {
    let layout = build_2d_layout(4, 4, Switching::PassivePbs, ControlMode::Individual).unwrap();
    let s = injection_schedule(&layout);
    let a = simulate(
        &layout,
        &s,
        &SimConfig {
            seed: 3,
            corrections: CorrectionMode::Immediate,
        },
    )
    .unwrap();
    let b = simulate(
        &layout,
        &s,
        &SimConfig {
            seed: 3,
            corrections: CorrectionMode::Deferred,
        },
    )
    .unwrap();
    assert_eq!(a.records, b.records);
    assert!(a.frame.is_empty());
    assert_eq!(a.photon_group().unwrap(), b.photon_group().unwrap());
}

#[test]
fn perturbed_schedules_are_rejected() {
    // A photon delayed by one period misses its control window.
    let layout = build_3d_layout(3, 3, 4, ControlMode::Global).unwrap();
    let mut s = injection_schedule(&layout);
    let last = s.iter().map(|p| p.injected_at).max().unwrap();
    let p = s.iter_mut().find(|p| p.color == Color::Red && p.time_bin == 3).unwrap();
    assert!(p.injected_at + PERIOD > last);
    p.injected_at += PERIOD;
    let err = simulate(&layout, &s, &SimConfig::default()).unwrap_err();
    assert!(matches!(err, SimError::TimingViolation { .. }), "{err}");

    // A schedule whose photon sits on a silent bin is malformed.
    let mut s = injection_schedule(&layout);
    let green = s.iter_mut().find(|p| p.color == Color::Green).unwrap();
    green.time_bin += 1;
    assert!(matches!(
        simulate(&layout, &s, &SimConfig::default()),
        Err(SimError::Schedule(_))
    ));
}

#[test]
fn single_rail_of_three_is_a_linear_chain() {
    use photon_cluster::oracle::{Gate, StateVector};
    use photon_cluster::stab::StabilizerGroup;

    let r = verify_2d(1, 3, &RunOptions { seed: 8, ..Default::default() }).unwrap();
    assert!(r.pass);
    let want = StabilizerGroup::parse(&["+XZI", "+ZXZ", "+IZX"]).unwrap();
    assert_eq!(r.canonical_stabilizers, want.to_strings());

    let mut sv = StateVector::zero(3).unwrap();
    for q in 0..3 {
        sv.apply_gate(Gate::H, &[q]).unwrap();
    }
    sv.apply_gate(Gate::Cz, &[0, 1]).unwrap();
    sv.apply_gate(Gate::Cz, &[1, 2]).unwrap();
    let got = StabilizerGroup::parse(&r.canonical_stabilizers).unwrap();
    assert!(got.generators().iter().all(|g| sv.stabilizer_check(g).unwrap()));
}
