use super::expr::eval_str;
use super::lexer::{lex_line, Tok};
use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{Angle, GateSpec, SubspaceKind};
use crate::hilbert::WireKind;
use crate::measurement::{ClassicalGate, MeasurementKind, Observable};
use crate::C64;
use std::collections::HashMap;
use std::fmt::Write;
use std::sync::OnceLock;

/// Render a circuit as `.qc` text that parses back to an identical circuit.
///
/// Custom gates, observables and classical tables have no text form.
pub fn serialize(c: &Circuit) -> Result<String> {
    let mut out = String::new();
    for w in &c.quantum {
        check_name(&w.name)?;
        match w.subsystem.kind() {
            WireKind::Qubit => write!(out, "qubit {}", w.name),
            WireKind::Mode => write!(out, "mode {} cutoff {}", w.name, w.subsystem.cutoff()),
        }
        .ok();
        if w.init != 0 {
            write!(out, " init {}", w.init).ok();
        }
        out.push('\n');
    }
    for w in &c.classical {
        check_name(&w.name)?;
        writeln!(out, "classical {} {}", w.name, w.kind).ok();
    }
    let q = |ws: &[usize]| -> Result<Vec<&str>> {
        ws.iter()
            .map(|&w| {
                c.quantum
                    .get(w)
                    .map(|x| x.name.as_str())
                    .ok_or_else(|| Error::MalformedCircuit(format!("quantum wire {w} does not exist")))
            })
            .collect()
    };
    let cl = |w: usize| -> Result<&str> {
        c.classical
            .get(w)
            .map(|x| x.name.as_str())
            .ok_or_else(|| Error::MalformedCircuit(format!("classical wire {w} does not exist")))
    };
    for ins in &c.instructions {
        match ins {
            Instruction::Unitary { gate, wires } => out.push_str(&gate_line(gate, &q(wires)?)?),
            Instruction::Conditional {
                gate,
                wires,
                condition,
                value,
            } => {
                out.push_str(&gate_line(gate, &q(wires)?)?);
                let v = value.get();
                write!(
                    out,
                    " cctrl {}={}{}",
                    cl(*condition)?,
                    if v >= 0.0 { "+" } else { "" },
                    value
                )
                .ok();
            }
            Instruction::Measure { kind, wires, output } => match (kind, output) {
                (MeasurementKind::Discard, _) => write!(out, "discard {}", q(wires)?.join(" ")).ok().unwrap_or(()),
                (_, Some(o)) => {
                    write!(
                        out,
                        "measure {} {} -> {}",
                        measurement_name(kind)?,
                        q(wires)?.join(" "),
                        cl(*o)?
                    )
                    .ok();
                }
                (_, None) => return Err(Error::MalformedCircuit("measurement without output".into())),
            },
            Instruction::Classical { gate, inputs, output } => {
                let names: Vec<&str> = inputs.iter().map(|&i| cl(i)).collect::<Result<_>>()?;
                write!(
                    out,
                    "post {} {} -> {}",
                    classical_name(gate)?,
                    names.join(" "),
                    cl(*output)?
                )
                .ok();
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn check_name(name: &str) -> Result<()> {
    let ok = matches!(lex_line(name, 1).as_deref(), Ok([t]) if t.tok == Tok::Ident(name.to_string()))
        && !matches!(name, "ctrl" | "cctrl" | "phi" | "pi");
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "wire name `{name}` cannot be written as .qc text"
        )))
    }
}

fn gate_line(gate: &GateSpec, wires: &[&str]) -> Result<String> {
    if let GateSpec::Controlled { inner, level } = gate {
        let (ctrl, rest) = wires
            .split_first()
            .ok_or_else(|| Error::MalformedCircuit("controlled gate without wires".into()))?;
        return Ok(format!("{} ctrl {ctrl}={level}", gate_line(inner, rest)?));
    }
    let head = match gate {
        GateSpec::Rotation { axis, theta } => format!(
            "rot({}, {}, {}, {})",
            real(axis[0])?,
            real(axis[1])?,
            real(axis[2])?,
            angle(theta)?
        ),
        GateSpec::Beamsplitter(a) => format!("bs({})", angle(a)?),
        GateSpec::PhaseShift(a) => format!("phase({})", angle(a)?),
        GateSpec::QubitPhase(a) => format!("p({})", angle(a)?),
        GateSpec::SelfKerr(a) => format!("kerr({})", angle(a)?),
        GateSpec::CrossKerr(a) => format!("xkerr({})", angle(a)?),
        GateSpec::Displacement(z) => format!("disp({})", complex(*z)?),
        GateSpec::Subspace(k, n) => {
            let name = match k {
                SubspaceKind::X => "xn",
                SubspaceKind::Z => "zn",
                SubspaceKind::H => "hn",
                SubspaceKind::P => "pn",
            };
            format!("{name}({n})")
        }
        GateSpec::Parity => "parity".into(),
        GateSpec::PauliX => "x".into(),
        GateSpec::PauliY => "y".into(),
        GateSpec::PauliZ => "z".into(),
        GateSpec::Hadamard => "h".into(),
        GateSpec::SGate => "s".into(),
        GateSpec::ModalSwap => "swap".into(),
        GateSpec::Custom { name, .. } => {
            return Err(Error::Unsupported(format!("custom gate `{name}` has no text form")))
        }
        GateSpec::Controlled { .. } => unreachable!(),
    };
    Ok(format!("{head} {}", wires.join(" ")))
}

fn measurement_name(kind: &MeasurementKind) -> Result<String> {
    Ok(match kind {
        MeasurementKind::QubitZ => "z".into(),
        MeasurementKind::PhotonCount => "count".into(),
        MeasurementKind::Discard => "discard".into(),
        MeasurementKind::Observable(o) => match o {
            Observable::Parity => "parity".into(),
            Observable::PauliX => "x".into(),
            Observable::PauliY => "y".into(),
            Observable::PauliZ => "pauliz".into(),
            Observable::ModalSwap => "swap".into(),
            Observable::SubspaceX(n) => format!("xn({n})"),
            Observable::SubspaceZ(n) => format!("zn({n})"),
            Observable::PhotonDifference => "ndiff".into(),
            Observable::Custom { name, .. } => {
                return Err(Error::Unsupported(format!(
                    "custom observable `{name}` has no text form"
                )))
            }
        },
    })
}

fn classical_name(gate: &ClassicalGate) -> Result<String> {
    Ok(match gate {
        ClassicalGate::Sum => "sum".into(),
        ClassicalGate::Difference => "diff".into(),
        ClassicalGate::Product => "prod".into(),
        ClassicalGate::ParityOfCount => "parity".into(),
        ClassicalGate::MapCount(n) => format!("mapcount({n})"),
        ClassicalGate::ControlledExchange { n, when } => format!("exchange({n}, {when})"),
        ClassicalGate::Custom(_) => return Err(Error::Unsupported("classical lookup tables have no text form".into())),
    })
}

/// Exact multiples `k·π/d` keyed by bit pattern, with their source text.
fn pi_forms() -> &'static HashMap<u64, String> {
    static FORMS: OnceLock<HashMap<u64, String>> = OnceLock::new();
    FORMS.get_or_init(|| {
        let mut m = HashMap::new();
        for d in [1i64, 2, 3, 4, 6, 8, 12, 16] {
            for k in -32i64..=32 {
                if k == 0 || gcd(k.unsigned_abs(), d as u64) != 1 {
                    continue;
                }
                let num = match k {
                    1 => "pi".to_string(),
                    -1 => "-pi".to_string(),
                    _ => format!("{k}*pi"),
                };
                let text = if d == 1 { num } else { format!("{num}/{d}") };
                if let Some(v) = eval_str(&text).and_then(|l| l.real()) {
                    m.entry(v.to_bits()).or_insert(text);
                }
            }
        }
        m
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn real(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Unsupported(format!("non-finite parameter {x}")));
    }
    Ok(pi_forms().get(&x.to_bits()).cloned().unwrap_or_else(|| format!("{x}")))
}

fn angle(a: &Angle) -> Result<String> {
    if a.scale == 0.0 {
        return real(a.offset);
    }
    let mag = match a.scale.abs() {
        1.0 => "phi".to_string(),
        s => format!("{}*phi", real(s)?),
    };
    let neg = a.scale < 0.0;
    Ok(match (a.offset == 0.0, neg) {
        (true, false) => mag,
        (true, true) => format!("-{mag}"),
        (false, false) => format!("{} + {mag}", real(a.offset)?),
        (false, true) => format!("{} - {mag}", real(a.offset)?),
    })
}

fn complex(z: C64) -> Result<String> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Unsupported(format!("non-finite parameter {z}")));
    }
    Ok(match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{}", z.re),
        (true, false) => format!("{}i", z.im),
        (false, false) if z.im < 0.0 => format!("{}-{}i", z.re, -z.im),
        (false, false) => format!("{}+{}i", z.re, z.im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::measurement::ClassicalKind;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [
            0.5,
            -1.25,
            1e-300,
            123456.789,
            std::f64::consts::FRAC_PI_3,
            -3.0 * std::f64::consts::PI / 4.0,
        ] {
            let s = real(x).unwrap();
            assert_eq!(eval_str(&s).unwrap().real().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(real(std::f64::consts::FRAC_PI_2).unwrap(), "pi/2");
        let a = Angle::linear(-std::f64::consts::FRAC_PI_4, -2.5);
        assert_eq!(eval_str(&angle(&a).unwrap()).unwrap().angle(), Some(a));
        for z in [C64::new(1.5, -0.5), C64::new(0.0, 2.0), C64::new(-0.1, 0.3)] {
            assert_eq!(eval_str(&complex(z).unwrap()).unwrap().complex(), Some(z));
        }
    }

    #[test]
    fn circuit_round_trip() {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        let m = c.mode_init("m0", 3, 2);
        let m1 = c.mode("m1", 3);
        c.gate(GateSpec::Hadamard, &[q]);
        c.gate(
            GateSpec::controlled(GateSpec::PhaseShift(Angle::linear(0.1, 3.0)), 1),
            &[q, m],
        );
        c.gate(
            GateSpec::Beamsplitter(Angle::constant(-std::f64::consts::FRAC_PI_2)),
            &[m, m1],
        );
        c.gate(GateSpec::Displacement(C64::new(0.25, -1.0)), &[m1]);
        let y = c.measure(MeasurementKind::QubitZ, &[q], "y");
        c.conditional(GateSpec::Parity, &[m], y, crate::measurement::Value::MINUS);
        let n = c.measure(MeasurementKind::PhotonCount, &[m], "n");
        c.post(
            ClassicalGate::ControlledExchange {
                n: 3,
                when: crate::measurement::Value::MINUS,
            },
            &[y, n],
            "2m",
        );
        c.discard(&[m1]);
        c.classical_wire("r", ClassicalKind::Real);
        c.classical.pop();
        let text = serialize(&c).unwrap();
        assert_eq!(parse(&text).unwrap(), c, "{text}");
    }
}
