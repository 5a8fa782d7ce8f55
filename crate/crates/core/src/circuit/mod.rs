//! Circuit IR over quantum and classical wires, its simulator, measurement
//! deferral and equivalence checks.

mod defer;
mod equiv;
mod sim;

pub use defer::defer_measurement;
pub use equiv::{check_equivalence, Compare, Domain, EquivalenceQuery, Verdict, Witness};
pub use sim::{sample, simulate, unitary_of, SimBranch, SimOptions, Simulator};

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::hilbert::{HilbertSpec, StateVector, Subsystem};
use crate::measurement::{ClassicalGate, ClassicalKind, MeasurementKind, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumWire {
    pub name: String,
    pub subsystem: Subsystem,
    /// Initial basis level (qubit value or Fock number).
    pub init: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalWire {
    pub name: String,
    pub kind: ClassicalKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Unitary {
        gate: GateSpec,
        wires: Vec<usize>,
    },
    /// Consumes the quantum wires; writes `output` unless discarding.
    Measure {
        kind: MeasurementKind,
        wires: Vec<usize>,
        output: Option<usize>,
    },
    Classical {
        gate: ClassicalGate,
        inputs: Vec<usize>,
        output: usize,
    },
    /// Applies `gate` on branches where classical wire `condition` equals `value`.
    Conditional {
        gate: GateSpec,
        wires: Vec<usize>,
        condition: usize,
        value: Value,
    },
}

/// Category of a well-formedness problem, used for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IssueKind {
    DuplicateName,
    InitOutOfRange,
    UnknownWire,
    WireKind,
    Arity,
    ReuseAfterMeasure,
    Reassigned,
    ReadBeforeWrite,
    Alphabet,
    NeverWritten,
    InvalidParameter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Issue {
    /// Instruction index, or `None` for declarations.
    pub instruction: Option<usize>,
    /// Wire index (quantum or classical, per context) for declaration issues.
    pub wire: Option<usize>,
    pub kind: IssueKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub quantum: Vec<QuantumWire>,
    pub classical: Vec<ClassicalWire>,
    pub instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn qubit(&mut self, name: &str) -> usize {
        self.qubit_init(name, 0)
    }

    pub fn qubit_init(&mut self, name: &str, init: usize) -> usize {
        self.quantum.push(QuantumWire {
            name: name.into(),
            subsystem: Subsystem::qubit(),
            init,
        });
        self.quantum.len() - 1
    }

    pub fn mode(&mut self, name: &str, cutoff: usize) -> usize {
        self.mode_init(name, cutoff, 0)
    }

    pub fn mode_init(&mut self, name: &str, cutoff: usize, init: usize) -> usize {
        self.quantum.push(QuantumWire {
            name: name.into(),
            subsystem: Subsystem::mode(cutoff),
            init,
        });
        self.quantum.len() - 1
    }

    pub fn classical_wire(&mut self, name: &str, kind: ClassicalKind) -> usize {
        self.classical.push(ClassicalWire {
            name: name.into(),
            kind,
        });
        self.classical.len() - 1
    }

    pub fn gate(&mut self, gate: GateSpec, wires: &[usize]) -> &mut Self {
        self.instructions.push(Instruction::Unitary {
            gate,
            wires: wires.to_vec(),
        });
        self
    }

    /// Measure and declare a classical wire of the measurement's kind.
    pub fn measure(&mut self, kind: MeasurementKind, wires: &[usize], label: &str) -> usize {
        let out_kind = kind.output_kind().unwrap_or(ClassicalKind::Real);
        let out = self.classical_wire(label, out_kind);
        self.instructions.push(Instruction::Measure {
            kind,
            wires: wires.to_vec(),
            output: Some(out),
        });
        out
    }

    pub fn discard(&mut self, wires: &[usize]) -> &mut Self {
        self.instructions.push(Instruction::Measure {
            kind: MeasurementKind::Discard,
            wires: wires.to_vec(),
            output: None,
        });
        self
    }

    /// Classical post-processing into a new wire of the gate's output kind.
    pub fn post(&mut self, gate: ClassicalGate, inputs: &[usize], label: &str) -> usize {
        let kinds: Vec<ClassicalKind> = inputs
            .iter()
            .map(|&i| self.classical.get(i).map_or(ClassicalKind::Real, |w| w.kind))
            .collect();
        let kind = gate.output_kind(&kinds).unwrap_or(ClassicalKind::Real);
        let out = self.classical_wire(label, kind);
        self.instructions.push(Instruction::Classical {
            gate,
            inputs: inputs.to_vec(),
            output: out,
        });
        out
    }

    pub fn conditional(&mut self, gate: GateSpec, wires: &[usize], condition: usize, value: Value) -> &mut Self {
        self.instructions.push(Instruction::Conditional {
            gate,
            wires: wires.to_vec(),
            condition,
            value,
        });
        self
    }

    pub fn spec(&self) -> Result<HilbertSpec> {
        HilbertSpec::new(self.quantum.iter().map(|w| w.subsystem).collect())
    }

    /// Product of the declared initial levels.
    pub fn input_state(&self) -> Result<StateVector> {
        let levels: Vec<usize> = self.quantum.iter().map(|w| w.init).collect();
        StateVector::from_levels(&self.spec()?, &levels)
    }

    pub fn quantum_index(&self, name: &str) -> Option<usize> {
        self.quantum.iter().position(|w| w.name == name)
    }

    pub fn classical_index(&self, name: &str) -> Option<usize> {
        self.classical.iter().position(|w| w.name == name)
    }

    pub fn depends_on_phi(&self) -> bool {
        self.instructions.iter().any(|ins| match ins {
            Instruction::Unitary { gate, .. } | Instruction::Conditional { gate, .. } => gate.depends_on_phi(),
            _ => false,
        })
    }

    pub fn is_measurement_free(&self) -> bool {
        self.instructions
            .iter()
            .all(|i| matches!(i, Instruction::Unitary { .. }))
    }

    /// Classical wire names in declaration order (the distribution labels).
    pub fn labels(&self) -> Vec<String> {
        self.classical.iter().map(|w| w.name.clone()).collect()
    }

    /// All well-formedness problems, in program order.
    pub fn check(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        let mut push = |instruction, wire, kind, message: String| {
            issues.push(Issue {
                instruction,
                wire,
                kind,
                message,
            })
        };
        let mut names = std::collections::HashSet::new();
        for (i, w) in self.quantum.iter().enumerate() {
            if !names.insert(w.name.as_str()) {
                push(
                    None,
                    Some(i),
                    IssueKind::DuplicateName,
                    format!("wire `{}` declared twice", w.name),
                );
            }
            if w.init > w.subsystem.cutoff() {
                push(
                    None,
                    Some(i),
                    IssueKind::InitOutOfRange,
                    format!(
                        "initial level {} of `{}` exceeds cutoff {}",
                        w.init,
                        w.name,
                        w.subsystem.cutoff()
                    ),
                );
            }
        }
        for (i, w) in self.classical.iter().enumerate() {
            if !names.insert(w.name.as_str()) {
                push(
                    None,
                    Some(i),
                    IssueKind::DuplicateName,
                    format!("wire `{}` declared twice", w.name),
                );
            }
        }
        let nq = self.quantum.len();
        let nc = self.classical.len();
        let mut consumed = vec![false; nq];
        let mut written = vec![false; nc];
        let qname = |w: usize| self.quantum[w].name.clone();
        for (idx, ins) in self.instructions.iter().enumerate() {
            let at = Some(idx);
            let quantum_ok =
                |wires: &[usize], push: &mut dyn FnMut(Option<usize>, Option<usize>, IssueKind, String)| -> bool {
                    let mut ok = true;
                    for &w in wires {
                        if w >= nq {
                            push(
                                at,
                                None,
                                IssueKind::UnknownWire,
                                format!("quantum wire {w} does not exist"),
                            );
                            ok = false;
                        } else if consumed[w] {
                            push(
                                at,
                                Some(w),
                                IssueKind::ReuseAfterMeasure,
                                format!("wire `{}` was already measured", qname(w)),
                            );
                            ok = false;
                        }
                    }
                    let mut seen = wires.to_vec();
                    seen.sort_unstable();
                    seen.dedup();
                    if seen.len() != wires.len() {
                        push(at, None, IssueKind::Arity, "a wire is listed twice".into());
                        ok = false;
                    }
                    ok
                };
            let subs =
                |wires: &[usize]| -> Vec<Subsystem> { wires.iter().map(|&w| self.quantum[w].subsystem).collect() };
            match ins {
                Instruction::Unitary { gate, wires } | Instruction::Conditional { gate, wires, .. } => {
                    if let Instruction::Conditional { condition, value, .. } = ins {
                        match self.classical.get(*condition) {
                            None => push(
                                at,
                                None,
                                IssueKind::UnknownWire,
                                format!("classical wire {condition} does not exist"),
                            ),
                            Some(cw) => {
                                if !written[*condition] {
                                    push(
                                        at,
                                        Some(*condition),
                                        IssueKind::ReadBeforeWrite,
                                        format!("`{}` is read before it is written", cw.name),
                                    );
                                }
                                if !cw.kind.admits(*value) {
                                    push(
                                        at,
                                        Some(*condition),
                                        IssueKind::Alphabet,
                                        format!("value {value} is not a {} value", cw.kind),
                                    );
                                }
                            }
                        }
                    }
                    if quantum_ok(wires, &mut push) {
                        if let Err(e) = gate.check_wires(&subs(wires)) {
                            push(at, None, issue_kind(&e), e.to_string());
                        }
                    }
                }
                Instruction::Measure { kind, wires, output } => {
                    if quantum_ok(wires, &mut push) {
                        if let Err(e) = kind.check_wires(&subs(wires)) {
                            push(at, None, issue_kind(&e), e.to_string());
                        }
                    }
                    for &w in wires {
                        if w < nq {
                            consumed[w] = true;
                        }
                    }
                    match (kind.output_kind(), output) {
                        (None, None) => {}
                        (None, Some(_)) => push(at, None, IssueKind::Arity, "discard has no output".into()),
                        (Some(_), None) => push(at, None, IssueKind::Arity, "measurement needs an output wire".into()),
                        (Some(k), Some(o)) => self.check_output(*o, k, at, &mut written, &mut push),
                    }
                }
                Instruction::Classical { gate, inputs, output } => {
                    let mut kinds = Vec::new();
                    let mut ok = true;
                    for &i in inputs {
                        match self.classical.get(i) {
                            None => {
                                push(
                                    at,
                                    None,
                                    IssueKind::UnknownWire,
                                    format!("classical wire {i} does not exist"),
                                );
                                ok = false;
                            }
                            Some(cw) => {
                                if !written[i] {
                                    push(
                                        at,
                                        Some(i),
                                        IssueKind::ReadBeforeWrite,
                                        format!("`{}` is read before it is written", cw.name),
                                    );
                                }
                                kinds.push(cw.kind);
                            }
                        }
                    }
                    if ok {
                        match gate.output_kind(&kinds) {
                            Ok(k) => self.check_output(*output, k, at, &mut written, &mut push),
                            Err(m) => {
                                let kind = if gate.arity().is_some_and(|n| n != kinds.len()) || kinds.is_empty() {
                                    IssueKind::Arity
                                } else {
                                    IssueKind::Alphabet
                                };
                                push(at, None, kind, m);
                                if *output < nc {
                                    written[*output] = true;
                                }
                            }
                        }
                    }
                }
            }
        }
        for (i, w) in written.iter().enumerate() {
            if !w {
                push(
                    None,
                    Some(i),
                    IssueKind::NeverWritten,
                    format!("classical wire `{}` is never written", self.classical[i].name),
                );
            }
        }
        issues
    }

    fn check_output(
        &self,
        out: usize,
        kind: ClassicalKind,
        at: Option<usize>,
        written: &mut [bool],
        push: &mut dyn FnMut(Option<usize>, Option<usize>, IssueKind, String),
    ) {
        let Some(cw) = self.classical.get(out) else {
            push(
                at,
                None,
                IssueKind::UnknownWire,
                format!("classical wire {out} does not exist"),
            );
            return;
        };
        if written[out] {
            push(
                at,
                Some(out),
                IssueKind::Reassigned,
                format!("`{}` is written twice", cw.name),
            );
        }
        written[out] = true;
        if !cw.kind.accepts(kind) {
            push(
                at,
                Some(out),
                IssueKind::Alphabet,
                format!("`{}` is declared {} but receives {kind} values", cw.name, cw.kind),
            );
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.check().into_iter().next() {
            None => Ok(()),
            Some(issue) => Err(match issue.kind {
                IssueKind::ReuseAfterMeasure => {
                    Error::ReuseAfterMeasure(issue.wire.map(|w| self.quantum[w].name.clone()).unwrap_or_default())
                }
                IssueKind::WireKind => Error::WireKindMismatch(issue.message),
                _ => Error::MalformedCircuit(match issue.instruction {
                    Some(i) => format!("instruction {i}: {}", issue.message),
                    None => issue.message,
                }),
            }),
        }
    }
}

fn issue_kind(e: &Error) -> IssueKind {
    match e {
        Error::WireKindMismatch(_) => IssueKind::WireKind,
        Error::MalformedCircuit(_) | Error::DimMismatch { .. } => IssueKind::Arity,
        _ => IssueKind::InvalidParameter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::MeasurementKind;

    #[test]
    fn detects_reuse_and_reassignment() {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        c.gate(GateSpec::Hadamard, &[q]);
        let z = c.measure(MeasurementKind::QubitZ, &[q], "z");
        c.gate(GateSpec::PauliX, &[q]);
        assert!(matches!(c.validate(), Err(Error::ReuseAfterMeasure(_))));
        let mut c = Circuit::new();
        let q = c.qubit("q");
        let z2 = c.measure(MeasurementKind::QubitZ, &[q], "z");
        c.instructions.push(Instruction::Classical {
            gate: ClassicalGate::Product,
            inputs: vec![z2],
            output: z2,
        });
        assert_eq!(c.check()[0].kind, IssueKind::Reassigned);
        let _ = z;
    }

    #[test]
    fn detects_wire_kinds_and_reads() {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        let m = c.mode("m", 3);
        c.gate(GateSpec::Beamsplitter(0.0.into()), &[q, m]);
        let y = c.classical_wire("y", ClassicalKind::Sign);
        c.conditional(GateSpec::PauliX, &[q], y, Value::PLUS);
        let kinds: Vec<IssueKind> = c.check().into_iter().map(|i| i.kind).collect();
        assert_eq!(
            kinds,
            vec![IssueKind::WireKind, IssueKind::ReadBeforeWrite, IssueKind::NeverWritten]
        );
    }
}
