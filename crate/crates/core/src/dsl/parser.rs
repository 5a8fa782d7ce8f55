use super::expr::{ExprParser, Lin};
use super::lexer::{lex_line, Tok, Token};
use super::{Code, Diagnostic, Diagnostics, Pos, MAX_DIAGNOSTICS};
use crate::circuit::{Circuit, Instruction, IssueKind};
use crate::gates::{GateSpec, SubspaceKind};
use crate::hilbert::WireKind;
use crate::measurement::{ClassicalGate, ClassicalKind, MeasurementKind, Observable, Value};
use std::collections::HashMap;

/// Parse a document into a circuit, or the diagnostics that reject it.
pub fn parse(text: &str) -> Result<Circuit, Diagnostics> {
    let (circuit, diags) = run(text);
    if diags.is_empty() {
        Ok(circuit)
    } else {
        Err(Diagnostics(diags))
    }
}

/// All diagnostics for a document; empty when it is accepted.
pub fn check_text(text: &str) -> Vec<Diagnostic> {
    run(text).1
}

fn run(text: &str) -> (Circuit, Vec<Diagnostic>) {
    let mut b = Builder::default();
    for (n, raw) in text.lines().enumerate() {
        if b.diags.len() >= MAX_DIAGNOSTICS {
            break;
        }
        let line = n + 1;
        let toks = match lex_line(raw, line) {
            Ok(t) => t,
            Err(d) => {
                b.diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut l = Line {
            toks: &toks,
            i: 0,
            end: Pos {
                line,
                col: raw.chars().count() + 1,
            },
        };
        if let Err(d) = b.statement(&mut l) {
            b.diags.push(d);
        }
    }
    if b.diags.is_empty() {
        b.semantic();
    }
    let mut diags = b.diags;
    diags.sort_by_key(|d| d.pos);
    diags.truncate(MAX_DIAGNOSTICS);
    (b.circuit, diags)
}

#[derive(Clone, Copy)]
enum Wire {
    Quantum(usize),
    Classical(usize),
}

/// Source positions of one instruction's parts, in IR order.
#[derive(Default)]
struct Span {
    head: Option<Pos>,
    quantum: Vec<(usize, Pos)>,
    /// Index into `quantum` where the base gate's targets start.
    targets_from: usize,
    expect: Option<WireKind>,
    classical: Vec<(usize, Pos)>,
    output: Option<(usize, Pos)>,
}

#[derive(Default)]
struct Builder {
    circuit: Circuit,
    names: HashMap<String, Wire>,
    quantum_decl: Vec<Pos>,
    classical_decl: Vec<Pos>,
    spans: Vec<Span>,
    diags: Vec<Diagnostic>,
}

struct Line<'a> {
    toks: &'a [Token],
    i: usize,
    end: Pos,
}

impl Line<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn found(&self) -> String {
        self.peek().map_or("end of line".into(), |t| t.describe())
    }

    fn syntax(&self, what: &str) -> Diagnostic {
        Diagnostic::new(
            Code::Syntax,
            self.pos(),
            format!("expected {what}, found {}", self.found()),
        )
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let out = (s.clone(), self.pos());
                self.i += 1;
                Ok(out)
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == w)
    }

    fn keyword(&mut self, w: &str) -> Result<(), Diagnostic> {
        if self.is_word(w) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("`{w}`")))
        }
    }

    fn token(&mut self, t: Tok) -> Result<(), Diagnostic> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.syntax(&t.describe()))
        }
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        if self.i < self.toks.len() {
            Err(self.syntax("end of line"))
        } else {
            Ok(())
        }
    }

    /// Non-negative integer literal.
    fn count(&mut self, what: &str) -> Result<usize, Diagnostic> {
        let at = self.pos();
        match self.peek() {
            Some(&Tok::Num(x)) => {
                self.i += 1;
                if x >= 0.0 && x.fract() == 0.0 && x < 1e9 {
                    Ok(x as usize)
                } else {
                    Err(Diagnostic::new(
                        Code::InvalidParameter,
                        at,
                        format!("{what} must be a non-negative integer, found {x}"),
                    ))
                }
            }
            _ => Err(self.syntax(what)),
        }
    }

    /// Optionally signed number.
    fn signed(&mut self, what: &str) -> Result<f64, Diagnostic> {
        let sign = match self.peek() {
            Some(Tok::Minus) => {
                self.i += 1;
                -1.0
            }
            Some(Tok::Plus) => {
                self.i += 1;
                1.0
            }
            _ => 1.0,
        };
        match self.peek() {
            Some(&Tok::Num(x)) => {
                self.i += 1;
                Ok(sign * x)
            }
            _ => Err(self.syntax(what)),
        }
    }

    /// Parenthesised parameter list, if present.
    fn params(&mut self) -> Result<Vec<(Lin, Pos)>, Diagnostic> {
        let mut out = Vec::new();
        if self.peek() != Some(&Tok::LParen) {
            return Ok(out);
        }
        self.i += 1;
        if self.peek() == Some(&Tok::RParen) {
            self.i += 1;
            return Ok(out);
        }
        loop {
            let at = self.pos();
            let mut e = ExprParser {
                toks: self.toks,
                i: self.i,
                end: self.end,
            };
            let v = e.expr()?;
            self.i = e.i;
            out.push((v, at));
            match self.peek() {
                Some(Tok::Comma) => self.i += 1,
                Some(Tok::RParen) => {
                    self.i += 1;
                    return Ok(out);
                }
                _ => return Err(self.syntax("`,` or `)`")),
            }
        }
    }

    /// Identifiers up to (not including) a stop word, `->` or end of line.
    fn operands(&mut self) -> Vec<(String, Pos)> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(s)) = self.peek() {
            if s == "ctrl" || s == "cctrl" {
                break;
            }
            out.push((s.clone(), self.pos()));
            self.i += 1;
        }
        out
    }
}

fn param_count(name: &str, at: Pos, params: &[(Lin, Pos)], want: usize) -> Result<(), Diagnostic> {
    if params.len() == want {
        Ok(())
    } else {
        Err(Diagnostic::new(
            Code::Arity,
            at,
            format!("`{name}` takes {want} parameter(s), found {}", params.len()),
        ))
    }
}

fn invalid(at: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Code::InvalidParameter, at, msg)
}

fn angle(p: &(Lin, Pos)) -> Result<crate::gates::Angle, Diagnostic> {
    p.0.angle().ok_or_else(|| invalid(p.1, "angle must be real"))
}

fn real(p: &(Lin, Pos)) -> Result<f64, Diagnostic> {
    p.0.real().ok_or_else(|| invalid(p.1, "expected a real constant"))
}

fn level(p: &(Lin, Pos)) -> Result<usize, Diagnostic> {
    match p.0.count() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(invalid(p.1, "photon number must be a positive integer")),
    }
}

/// Wire-kind expectation and fixed wire count for a base gate.
type Shape = (Option<WireKind>, Option<usize>);

fn gate_from(name: &str, at: Pos, params: &[(Lin, Pos)]) -> Result<(GateSpec, Shape), Diagnostic> {
    use WireKind::{Mode, Qubit};
    let n = |want| param_count(name, at, params, want);
    let angle1 = |f: fn(crate::gates::Angle) -> GateSpec| -> Result<GateSpec, Diagnostic> {
        n(1)?;
        Ok(f(angle(&params[0])?))
    };
    Ok(match name {
        "rot" => {
            n(4)?;
            let axis = [real(&params[0])?, real(&params[1])?, real(&params[2])?];
            let theta = angle(&params[3])?;
            (GateSpec::Rotation { axis, theta }, (None, None))
        }
        "bs" => (angle1(GateSpec::Beamsplitter)?, (Some(Mode), Some(2))),
        "phase" => (angle1(GateSpec::PhaseShift)?, (Some(Mode), Some(1))),
        "p" => (angle1(GateSpec::QubitPhase)?, (Some(Qubit), Some(1))),
        "kerr" => (angle1(GateSpec::SelfKerr)?, (Some(Mode), Some(1))),
        "xkerr" => (angle1(GateSpec::CrossKerr)?, (Some(Mode), Some(2))),
        "disp" => {
            n(1)?;
            let z = params[0]
                .0
                .complex()
                .ok_or_else(|| invalid(params[0].1, "displacement must be a constant"))?;
            (GateSpec::Displacement(z), (Some(Mode), Some(1)))
        }
        "xn" | "zn" | "hn" | "pn" => {
            n(1)?;
            let kind = match name {
                "xn" => SubspaceKind::X,
                "zn" => SubspaceKind::Z,
                "hn" => SubspaceKind::H,
                _ => SubspaceKind::P,
            };
            (GateSpec::Subspace(kind, level(&params[0])?), (Some(Mode), Some(1)))
        }
        _ => {
            let (g, shape) = match name {
                "parity" => (GateSpec::Parity, (Some(Mode), Some(1))),
                "swap" => (GateSpec::ModalSwap, (Some(Mode), Some(2))),
                "x" => (GateSpec::PauliX, (Some(Qubit), Some(1))),
                "y" => (GateSpec::PauliY, (Some(Qubit), Some(1))),
                "z" => (GateSpec::PauliZ, (Some(Qubit), Some(1))),
                "h" => (GateSpec::Hadamard, (Some(Qubit), Some(1))),
                "s" => (GateSpec::SGate, (Some(Qubit), Some(1))),
                _ => return Err(Diagnostic::new(Code::UnknownName, at, format!("unknown gate `{name}`"))),
            };
            n(0)?;
            (g, shape)
        }
    })
}

fn measurement_from(name: &str, at: Pos, params: &[(Lin, Pos)]) -> Result<(MeasurementKind, Shape), Diagnostic> {
    use WireKind::{Mode, Qubit};
    let obs = |o| MeasurementKind::Observable(o);
    let (kind, shape) = match name {
        "xn" | "zn" => {
            param_count(name, at, params, 1)?;
            let n = level(&params[0])?;
            let o = if name == "xn" {
                Observable::SubspaceX(n)
            } else {
                Observable::SubspaceZ(n)
            };
            return Ok((obs(o), (Some(Mode), Some(1))));
        }
        "z" => (MeasurementKind::QubitZ, (Some(Qubit), Some(1))),
        "count" => (MeasurementKind::PhotonCount, (Some(Mode), Some(1))),
        "parity" => (obs(Observable::Parity), (Some(Mode), Some(1))),
        "x" => (obs(Observable::PauliX), (Some(Qubit), Some(1))),
        "y" => (obs(Observable::PauliY), (Some(Qubit), Some(1))),
        "pauliz" => (obs(Observable::PauliZ), (Some(Qubit), Some(1))),
        "swap" => (obs(Observable::ModalSwap), (Some(Mode), Some(2))),
        "ndiff" => (obs(Observable::PhotonDifference), (Some(Mode), Some(2))),
        _ => {
            return Err(Diagnostic::new(
                Code::UnknownName,
                at,
                format!("unknown measurement `{name}`"),
            ))
        }
    };
    param_count(name, at, params, 0)?;
    Ok((kind, shape))
}

fn classical_from(name: &str, at: Pos, params: &[(Lin, Pos)]) -> Result<ClassicalGate, Diagnostic> {
    let n = |want| param_count(name, at, params, want);
    Ok(match name {
        "sum" => n(0).map(|_| ClassicalGate::Sum)?,
        "diff" => n(0).map(|_| ClassicalGate::Difference)?,
        "prod" => n(0).map(|_| ClassicalGate::Product)?,
        "parity" => n(0).map(|_| ClassicalGate::ParityOfCount)?,
        "mapcount" => {
            n(1)?;
            ClassicalGate::MapCount(level(&params[0])?)
        }
        "exchange" => {
            n(2)?;
            let when = real(&params[1])?;
            if when != 1.0 && when != -1.0 {
                return Err(invalid(params[1].1, "exchange condition must be +1 or -1"));
            }
            ClassicalGate::ControlledExchange {
                n: level(&params[0])?,
                when: Value::new(when),
            }
        }
        _ => {
            return Err(Diagnostic::new(
                Code::UnknownName,
                at,
                format!("unknown classical gate `{name}`"),
            ))
        }
    })
}

fn check_count(name: &str, at: Pos, shape: Shape, found: usize) -> Result<(), Diagnostic> {
    let ok = match shape.1 {
        Some(k) => k == found,
        None => found == 1 || found == 2,
    };
    if ok {
        Ok(())
    } else {
        let want = shape.1.map_or("1 or 2".to_string(), |k| k.to_string());
        Err(Diagnostic::new(
            Code::Arity,
            at,
            format!("`{name}` acts on {want} wire(s), found {found}"),
        ))
    }
}

impl Builder {
    fn declare(&mut self, name: &str, at: Pos, wire: Wire) -> Result<(), Diagnostic> {
        if self.names.contains_key(name) {
            return Err(Diagnostic::new(
                Code::Duplicate,
                at,
                format!("`{name}` is already declared"),
            ));
        }
        if matches!(name, "ctrl" | "cctrl" | "phi" | "pi") {
            return Err(Diagnostic::new(Code::Syntax, at, format!("`{name}` is reserved")));
        }
        self.names.insert(name.to_string(), wire);
        Ok(())
    }

    fn quantum(&self, name: &str, at: Pos) -> Result<usize, Diagnostic> {
        match self.names.get(name) {
            Some(Wire::Quantum(i)) => Ok(*i),
            Some(Wire::Classical(_)) => Err(Diagnostic::new(
                Code::WireKind,
                at,
                format!("`{name}` is a classical wire"),
            )),
            None => Err(Diagnostic::new(Code::UnknownWire, at, format!("unknown wire `{name}`"))),
        }
    }

    fn classical(&self, name: &str, at: Pos) -> Result<usize, Diagnostic> {
        match self.names.get(name) {
            Some(Wire::Classical(i)) => Ok(*i),
            Some(Wire::Quantum(_)) => Err(Diagnostic::new(
                Code::WireKind,
                at,
                format!("`{name}` is a quantum wire"),
            )),
            None => Err(Diagnostic::new(Code::UnknownWire, at, format!("unknown wire `{name}`"))),
        }
    }

    /// Resolve `-> name`, declaring it with `kind` when new.
    fn output(&mut self, name: &str, at: Pos, kind: ClassicalKind) -> Result<usize, Diagnostic> {
        if self.names.contains_key(name) {
            return self.classical(name, at);
        }
        let idx = self.circuit.classical.len();
        self.declare(name, at, Wire::Classical(idx))?;
        self.circuit.classical_wire(name, kind);
        self.classical_decl.push(at);
        Ok(idx)
    }

    fn statement(&mut self, l: &mut Line) -> Result<(), Diagnostic> {
        let (word, head) = l.ident("a declaration or instruction")?;
        match word.as_str() {
            "qubit" => {
                let (name, at) = l.ident("a wire name")?;
                let init = if l.is_word("init") {
                    l.i += 1;
                    l.count("an initial level")?
                } else {
                    0
                };
                l.finish()?;
                self.declare(&name, at, Wire::Quantum(self.circuit.quantum.len()))?;
                self.circuit.qubit_init(&name, init);
                self.quantum_decl.push(at);
            }
            "mode" => {
                let (name, at) = l.ident("a wire name")?;
                l.keyword("cutoff")?;
                let cut_at = l.pos();
                let cutoff = l.count("a cutoff")?;
                if cutoff == 0 {
                    return Err(invalid(cut_at, "cutoff must be at least 1"));
                }
                let init = if l.is_word("init") {
                    l.i += 1;
                    l.count("an initial level")?
                } else {
                    0
                };
                l.finish()?;
                self.declare(&name, at, Wire::Quantum(self.circuit.quantum.len()))?;
                self.circuit.mode_init(&name, cutoff, init);
                self.quantum_decl.push(at);
            }
            "classical" => {
                let (name, at) = l.ident("a wire name")?;
                let (k, kat) = l.ident("a classical kind (sign, int or real)")?;
                let kind = ClassicalKind::parse(&k)
                    .ok_or_else(|| Diagnostic::new(Code::Alphabet, kat, format!("unknown classical kind `{k}`")))?;
                l.finish()?;
                self.declare(&name, at, Wire::Classical(self.circuit.classical.len()))?;
                self.circuit.classical_wire(&name, kind);
                self.classical_decl.push(at);
            }
            "measure" => {
                let (k, kat) = l.ident("a measurement kind")?;
                let params = l.params()?;
                let (kind, shape) = measurement_from(&k, kat, &params)?;
                let ops = l.operands();
                l.token(Tok::Arrow)?;
                let (out, oat) = l.ident("an output wire name")?;
                l.finish()?;
                check_count(&k, kat, shape, ops.len())?;
                let wires = self.resolve_quantum(&ops)?;
                let output = self.output(&out, oat, kind.output_kind().unwrap_or(ClassicalKind::Real))?;
                self.push(
                    Instruction::Measure {
                        kind,
                        wires: wires.iter().map(|w| w.0).collect(),
                        output: Some(output),
                    },
                    Span {
                        head: Some(kat),
                        quantum: wires,
                        expect: shape.0,
                        output: Some((output, oat)),
                        ..Span::default()
                    },
                );
            }
            "discard" => {
                let ops = l.operands();
                l.finish()?;
                if ops.is_empty() {
                    return Err(Diagnostic::new(Code::Arity, head, "discard needs at least one wire"));
                }
                let wires = self.resolve_quantum(&ops)?;
                self.push(
                    Instruction::Measure {
                        kind: MeasurementKind::Discard,
                        wires: wires.iter().map(|w| w.0).collect(),
                        output: None,
                    },
                    Span {
                        head: Some(head),
                        quantum: wires,
                        ..Span::default()
                    },
                );
            }
            "post" => {
                let (g, gat) = l.ident("a classical gate")?;
                let params = l.params()?;
                let gate = classical_from(&g, gat, &params)?;
                let ops = l.operands();
                l.token(Tok::Arrow)?;
                let (out, oat) = l.ident("an output wire name")?;
                l.finish()?;
                let mut inputs = Vec::new();
                for (name, at) in &ops {
                    inputs.push((self.classical(name, *at)?, *at));
                }
                let kinds: Vec<ClassicalKind> = inputs.iter().map(|&(i, _)| self.circuit.classical[i].kind).collect();
                let kind = gate.output_kind(&kinds).unwrap_or(ClassicalKind::Real);
                let output = self.output(&out, oat, kind)?;
                self.push(
                    Instruction::Classical {
                        gate,
                        inputs: inputs.iter().map(|w| w.0).collect(),
                        output,
                    },
                    Span {
                        head: Some(gat),
                        classical: inputs,
                        output: Some((output, oat)),
                        ..Span::default()
                    },
                );
            }
            _ => self.gate_statement(&word, head, l)?,
        }
        Ok(())
    }

    fn gate_statement(&mut self, name: &str, head: Pos, l: &mut Line) -> Result<(), Diagnostic> {
        let params = l.params()?;
        let (mut gate, shape) = gate_from(name, head, &params)?;
        let targets = l.operands();
        let mut ctrls = Vec::new();
        let mut cond = None;
        while l.i < l.toks.len() {
            if l.is_word("ctrl") {
                if cond.is_some() {
                    return Err(Diagnostic::new(
                        Code::Syntax,
                        l.pos(),
                        "`ctrl` clauses must precede `cctrl`",
                    ));
                }
                l.i += 1;
                let (w, at) = l.ident("a control wire")?;
                l.token(Tok::Eq)?;
                let lvl = l.count("a control level")?;
                ctrls.push((w, at, lvl));
            } else if l.is_word("cctrl") {
                if cond.is_some() {
                    return Err(Diagnostic::new(Code::Syntax, l.pos(), "at most one `cctrl` clause"));
                }
                l.i += 1;
                let (w, at) = l.ident("a classical wire")?;
                l.token(Tok::Eq)?;
                let v = l.signed("a classical value")?;
                cond = Some((w, at, v));
            } else {
                return Err(l.syntax("a wire, `ctrl`, `cctrl` or end of line"));
            }
        }
        check_count(name, head, shape, targets.len())?;
        let mut wires = self.resolve_quantum(&targets)?;
        for (w, at, lvl) in &ctrls {
            let q = self.quantum(w, *at)?;
            gate = GateSpec::controlled(gate, *lvl);
            wires.insert(0, (q, *at));
        }
        let mut span = Span {
            head: Some(head),
            targets_from: ctrls.len(),
            expect: shape.0,
            ..Span::default()
        };
        let ws: Vec<usize> = wires.iter().map(|w| w.0).collect();
        span.quantum = wires;
        let ins = match cond {
            None => Instruction::Unitary { gate, wires: ws },
            Some((c, at, v)) => {
                let condition = self.classical(&c, at)?;
                span.classical.push((condition, at));
                Instruction::Conditional {
                    gate,
                    wires: ws,
                    condition,
                    value: Value::new(v),
                }
            }
        };
        self.push(ins, span);
        Ok(())
    }

    fn resolve_quantum(&self, ops: &[(String, Pos)]) -> Result<Vec<(usize, Pos)>, Diagnostic> {
        ops.iter().map(|(n, at)| Ok((self.quantum(n, *at)?, *at))).collect()
    }

    fn push(&mut self, ins: Instruction, span: Span) {
        self.circuit.instructions.push(ins);
        self.spans.push(span);
    }

    /// Well-formedness checks on the assembled circuit, mapped back to source.
    fn semantic(&mut self) {
        let origin = Pos { line: 1, col: 1 };
        for issue in self.circuit.check() {
            let code = match issue.kind {
                IssueKind::DuplicateName => Code::Duplicate,
                IssueKind::InitOutOfRange | IssueKind::InvalidParameter => Code::InvalidParameter,
                IssueKind::UnknownWire => Code::UnknownWire,
                IssueKind::WireKind => Code::WireKind,
                IssueKind::Arity => Code::Arity,
                IssueKind::ReuseAfterMeasure => Code::ReuseAfterMeasure,
                IssueKind::Reassigned => Code::Reassigned,
                IssueKind::ReadBeforeWrite => Code::ReadBeforeWrite,
                IssueKind::Alphabet => Code::Alphabet,
                IssueKind::NeverWritten => Code::NeverWritten,
            };
            let pos = match (issue.instruction, issue.kind) {
                (None, IssueKind::NeverWritten) => issue.wire.and_then(|w| self.classical_decl.get(w).copied()),
                (None, _) => issue.wire.and_then(|w| self.quantum_decl.get(w).copied()),
                (Some(i), kind) => {
                    let s = &self.spans[i];
                    let find = |list: &[(usize, Pos)], w: Option<usize>| {
                        w.and_then(|w| list.iter().find(|e| e.0 == w).map(|e| e.1))
                    };
                    match kind {
                        IssueKind::ReuseAfterMeasure => find(&s.quantum, issue.wire),
                        IssueKind::ReadBeforeWrite => find(&s.classical, issue.wire),
                        IssueKind::Reassigned | IssueKind::Alphabet => s
                            .output
                            .filter(|o| Some(o.0) == issue.wire)
                            .map(|o| o.1)
                            .or_else(|| find(&s.classical, issue.wire)),
                        IssueKind::WireKind => s.expect.and_then(|want| {
                            s.quantum[s.targets_from..]
                                .iter()
                                .find(|(w, _)| self.circuit.quantum[*w].subsystem.kind() != want)
                                .map(|e| e.1)
                        }),
                        _ => None,
                    }
                    .or(s.head)
                }
            };
            self.diags
                .push(Diagnostic::new(code, pos.unwrap_or(origin), issue.message));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(text: &str) -> Vec<(Code, usize, usize)> {
        check_text(text)
            .iter()
            .map(|d| (d.code, d.pos.line, d.pos.col))
            .collect()
    }

    #[test]
    fn hadamard_and_measure() {
        let c = parse("qubit q\nh q\nmeasure z q -> y\n").unwrap();
        assert_eq!(c.quantum.len(), 1);
        assert_eq!(c.classical[0].kind, ClassicalKind::Sign);
        assert_eq!(c.instructions.len(), 2);
    }

    #[test]
    fn controls_nest_innermost_first() {
        let c = parse("qubit a\nqubit b\nmode m cutoff 2\nphase(phi) m ctrl b=1 ctrl a=0\n").unwrap();
        let Instruction::Unitary { gate, wires } = &c.instructions[0] else {
            panic!()
        };
        assert_eq!(wires, &vec![0, 1, 2]);
        let GateSpec::Controlled { inner, level: 0 } = gate else {
            panic!()
        };
        assert!(matches!(**inner, GateSpec::Controlled { level: 1, .. }));
    }

    #[test]
    fn beamsplitter_on_qubit_points_at_operand() {
        assert_eq!(
            codes("qubit q\nmode m cutoff 2\nbs(0) m q\n"),
            vec![(Code::WireKind, 3, 9)]
        );
    }

    #[test]
    fn each_class_has_its_code() {
        assert_eq!(codes("qubit q\nfoo q\n"), vec![(Code::UnknownName, 2, 1)]);
        assert_eq!(codes("qubit q\nh q q2\n"), vec![(Code::Arity, 2, 1)]);
        assert_eq!(codes("qubit q\nh r\n"), vec![(Code::UnknownWire, 2, 3)]);
        assert_eq!(codes("qubit q\nqubit q\n"), vec![(Code::Duplicate, 2, 7)]);
        assert_eq!(
            codes("qubit q\nqubit r\nmeasure z q -> y\nmeasure z r -> y\n"),
            vec![(Code::Reassigned, 4, 16)]
        );
        assert_eq!(
            codes("qubit q\nclassical y sign\nx q cctrl y=1\nmeasure z q -> y\n"),
            vec![(Code::ReadBeforeWrite, 3, 11)]
        );
        assert_eq!(
            codes("qubit q\nmeasure z q -> y\nh q\n"),
            vec![(Code::ReuseAfterMeasure, 3, 3)]
        );
        assert_eq!(
            codes("mode m cutoff 2\nclassical n sign\nmeasure count m -> n\n"),
            vec![(Code::Alphabet, 3, 20)]
        );
        assert_eq!(codes("qubit q init 2\n"), vec![(Code::InvalidParameter, 1, 7)]);
        assert_eq!(codes("classical y sign\n"), vec![(Code::NeverWritten, 1, 11)]);
        assert_eq!(codes("qubit q $\n"), vec![(Code::Lex, 1, 9)]);
        assert_eq!(codes("qubit\n"), vec![(Code::Syntax, 1, 6)]);
    }

    #[test]
    fn diagnostics_are_capped() {
        let text = "foo\n".repeat(40);
        assert_eq!(check_text(&text).len(), MAX_DIAGNOSTICS);
    }
}
