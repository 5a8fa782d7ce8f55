use interferoq::config::default_phi_grid;
use interferoq::protocols::{
    compare_protocols, conditional_fringes, fringe_sweep, fringe_sweep_with, prepared_state, BuildOptions, ProtocolId,
};
use std::f64::consts::PI;

fn fock(n: usize) -> Vec<ProtocolId> {
    use ProtocolId::*;
    vec![
        ConventionalQubit(n),
        ConventionalModal(n),
        FockSingleMode(n),
        FockSingleModeQubit(n),
        Noon(n),
        NoonQubit(n),
        CatState(n),
        FockPostselected(n),
        FockCoherentPrep(n),
        NoonPostselected(n),
        NoonCoherentPrep(n),
        ObboKerrPrepQubits(n),
    ]
}

fn coherent(a: f64) -> Vec<ProtocolId> {
    use ProtocolId::*;
    vec![
        ConventionalCoherent(a),
        CoherentSingleModeQubit(a),
        ModalCatPostselected(a),
        ModalCatCoherent(a),
        CoherentTwoModeQubit(a),
        ObboPostselected(a),
        ObboCoherent(a),
        ObboKerrPrep(a),
    ]
}

#[test]
fn fock_fringes_match_closed_forms() {
    for n in 1..=4 {
        for id in fock(n) {
            let r = fringe_sweep(id, &default_phi_grid()).unwrap();
            let dev = r.max_deviation.unwrap();
            assert!(dev < 1e-9, "{id}: deviation {dev}");
        }
    }
}

#[test]
fn coherent_fringes_match_closed_forms() {
    for a in [1.0, 2f64.sqrt()] {
        for id in coherent(a) {
            let r = fringe_sweep(id, &default_phi_grid()).unwrap();
            let dev = r.max_deviation.unwrap();
            assert!(dev < 1e-6, "{id}: deviation {dev}");
        }
    }
}

#[test]
fn fringe_shift_moves_the_pattern() {
    for theta in [PI / 4.0, PI / 2.0] {
        for id in [
            ProtocolId::FockSingleModeQubit(3),
            ProtocolId::NoonQubit(3),
            ProtocolId::CatState(3),
        ] {
            let opts = BuildOptions {
                fringe_shift: Some(theta),
                ..Default::default()
            };
            let r = fringe_sweep_with(id, &opts, &default_phi_grid()).unwrap();
            assert!(r.max_deviation.unwrap() < 1e-9, "{id} θ={theta}");
        }
    }
}

#[test]
fn noon_coherent_prep_parity_form_for_odd_n() {
    for n in [1, 3, 5] {
        let opts = BuildOptions {
            parity_for_pn: true,
            ..Default::default()
        };
        let r = fringe_sweep_with(ProtocolId::NoonCoherentPrep(n), &opts, &default_phi_grid()).unwrap();
        assert!(r.max_deviation.unwrap() < 1e-9);
    }
}

#[test]
fn postselected_conditionals() {
    for id in [
        ProtocolId::FockPostselected(3),
        ProtocolId::NoonPostselected(2),
        ProtocolId::ModalCatPostselected(1.2),
        ProtocolId::ObboPostselected(1.2),
    ] {
        let r = conditional_fringes(id, &default_phi_grid()).unwrap();
        assert!(r.max_deviation < 1e-6, "{id}: {}", r.max_deviation);
        for p in &r.points {
            for ry in p.r.values() {
                assert!((ry - 0.5).abs() < 1e-6, "{id}");
            }
        }
    }
}

#[test]
fn obbo_x_marginal_is_flat() {
    let a = 1.1f64;
    let r = conditional_fringes(ProtocolId::ObboPostselected(a), &default_phi_grid()).unwrap();
    for p in &r.points {
        for (x, v) in &p.x_marginal {
            let want = 0.5 * (1.0 + x.get() * (-a * a).exp());
            assert!((v - want).abs() < 1e-9);
        }
    }
}

#[test]
fn equivalence_suite_fock() {
    use ProtocolId::*;
    let grid = default_phi_grid();
    for n in 1..=3 {
        for (a, b) in [
            (FockSingleModeQubit(n), FockSingleMode(n)),
            (NoonQubit(n), Noon(n)),
            (FockSingleModeQubit(n), Noon(n)),
            (CatState(n), NoonQubit(n)),
            (FockPostselected(n), FockSingleMode(n)),
            (FockCoherentPrep(n), FockSingleMode(n)),
            (NoonPostselected(n), Noon(n)),
            (NoonCoherentPrep(n), Noon(n)),
        ] {
            let v = compare_protocols(a, b, &grid).unwrap();
            assert!(v.equal, "{a} vs {b}: {v:?}");
        }
    }
}

#[test]
fn prepared_noon_state() {
    use interferoq::hilbert::{HilbertSpec, StateVector};
    use interferoq::C64;
    let n = 3;
    let p = prepared_state(ProtocolId::Noon(n)).unwrap();
    assert_eq!(p.branches.len(), 1);
    let spec = HilbertSpec::modes(&[n, n]).unwrap();
    let a = StateVector::from_levels(&spec, &[n, 0]).unwrap();
    let b = StateVector::from_levels(&spec, &[0, n]).unwrap();
    let target = a.add(&b).unwrap().scaled(C64::new(0.5f64.sqrt(), 0.0));
    let f = p.branches[0].state.reduced_fidelity(&p.probe_wires, &target).unwrap();
    assert!((f - 1.0).abs() < 1e-12);
}
