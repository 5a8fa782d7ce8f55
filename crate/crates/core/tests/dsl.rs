use interferoq::circuit::{simulate, Circuit};
use interferoq::dsl::{self, corpus::read_corpus, parse, serialize};
use interferoq::gates::{Angle, GateSpec};
use interferoq::protocols::{fringe_sweep, BuildOptions, ProtocolId};
use interferoq::C64;
use proptest::prelude::*;
use std::path::PathBuf;

fn circuits_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

#[test]
fn diagnostic_corpus() {
    let text = std::fs::read_to_string(circuits_dir().join("corpus/diagnostics.txt")).unwrap();
    let cases = read_corpus(&text).unwrap();
    assert_eq!(cases.len(), 30);
    let failures: Vec<String> = cases.iter().filter_map(|c| c.check().err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    // Every diagnostic class appears at least once.
    for code in dsl::Code::ALL {
        assert!(
            cases.iter().any(|c| c.expect.iter().any(|e| e.0 == code)),
            "{code} not covered"
        );
    }
}

/// Protocol behind a shipped file name such as `noon_3.qc` or `obbo_coherent_a1.qc`.
fn protocol_of(stem: &str) -> ProtocolId {
    let (name, param) = stem.rsplit_once('_').unwrap();
    let name = name.replace('_', "-");
    match param.strip_prefix('a') {
        Some(a) => ProtocolId::from_name(&name, None, Some(a.parse().unwrap())).unwrap(),
        None => ProtocolId::from_name(&name, Some(param.parse().unwrap()), None).unwrap(),
    }
}

#[test]
fn shipped_files_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(circuits_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("qc") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse(&text).unwrap_or_else(|d| panic!("{}: {d}", path.display()));
        let id = protocol_of(path.file_stem().unwrap().to_str().unwrap());
        assert_eq!(
            parsed,
            id.build_with(&BuildOptions::default()).unwrap(),
            "{}",
            path.display()
        );
        assert_eq!(parse(&serialize(&parsed).unwrap()).unwrap(), parsed);
        seen += 1;
    }
    assert_eq!(seen, ProtocolId::names().len());
}

#[test]
fn every_protocol_round_trips() {
    for n in 1..=4 {
        for name in ProtocolId::names() {
            let id = ProtocolId::from_name(name, Some(n), Some(n as f64 * 0.5)).unwrap();
            let c = id.build().unwrap();
            assert_eq!(dsl::round_trip(&c).unwrap(), c, "{id}");
        }
    }
}

#[test]
fn shipped_noon_sample_gives_cos_3phi_fringes() {
    let c = parse(&std::fs::read_to_string(circuits_dir().join("noon_3.qc")).unwrap()).unwrap();
    for k in 0..25 {
        let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / 24.0;
        let p = simulate(&c, phi).unwrap().marginal(&["z"]).unwrap();
        let want = 0.5 * (1.0 + (3.0 * phi).cos());
        assert!((p.probability(&[interferoq::measurement::Value::PLUS]) - want).abs() < 1e-12);
    }
    let reference = fringe_sweep(ProtocolId::Noon(3), &[0.3]).unwrap();
    assert!(reference.max_deviation.unwrap() < 1e-12);
}

fn arb_angle() -> impl Strategy<Value = Angle> {
    let x = prop_oneof![
        -10.0..10.0f64,
        (-8i32..8, 1u32..7).prop_map(|(k, d)| k as f64 * std::f64::consts::PI / d as f64),
        Just(0.0),
    ];
    (x.clone(), prop_oneof![Just(0.0), Just(1.0), Just(-1.0), -5.0..5.0f64]).prop_map(|(o, s)| Angle::linear(o, s))
}

fn arb_gate() -> impl Strategy<Value = (GateSpec, bool)> {
    // (gate, acts on the two modes) ; otherwise it acts on the qubit.
    prop_oneof![
        arb_angle().prop_map(|a| (GateSpec::Beamsplitter(a), true)),
        arb_angle().prop_map(|a| (GateSpec::CrossKerr(a), true)),
        arb_angle().prop_map(|a| (GateSpec::QubitPhase(a), false)),
        (-1.0..1.0f64, -1.0..1.0f64, arb_angle()).prop_map(|(x, y, t)| {
            let n = (x * x + y * y + 1.0).sqrt();
            (GateSpec::rotation([x / n, y / n, 1.0 / n], t), false)
        }),
        (-2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(re, im)| (GateSpec::controlled(GateSpec::Displacement(C64::new(re, im)), 1), false)),
        Just((GateSpec::Hadamard, false)),
    ]
}

proptest! {
    #[test]
    fn random_circuits_round_trip(gates in prop::collection::vec(arb_gate(), 0..12)) {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        let m0 = c.mode("m0", 4);
        let m1 = c.mode_init("m1", 4, 1);
        for (g, modal) in gates {
            match (&g, modal) {
                (GateSpec::Controlled { .. }, _) => c.gate(g, &[q, m0]),
                (_, true) => c.gate(g, &[m0, m1]),
                _ => c.gate(g, &[q]),
            };
        }
        let y = c.measure(interferoq::measurement::MeasurementKind::QubitZ, &[q], "y");
        c.conditional(GateSpec::Parity, &[m1], y, interferoq::measurement::Value::MINUS);
        let text = serialize(&c).unwrap();
        prop_assert_eq!(parse(&text).unwrap(), c, "{}", text);
    }
}
