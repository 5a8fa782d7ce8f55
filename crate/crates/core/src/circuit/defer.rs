use std::collections::HashSet;

use super::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::measurement::{MeasurementKind, Value};

/// Replace the mid-circuit measurement that writes classical wire `outcome`,
/// and every gate classically conditioned on it, by quantum-controlled gates.
/// The measurement (and any post-processing that reads it) moves to the end.
///
/// The joint distribution over all classical wires is unchanged.
pub fn defer_measurement(circuit: &Circuit, outcome: usize) -> Result<Circuit> {
    circuit.validate()?;
    let pos = circuit
        .instructions
        .iter()
        .position(|ins| matches!(ins, Instruction::Measure { output: Some(o), .. } if *o == outcome))
        .ok_or_else(|| {
            Error::DeferralPrecondition(format!("classical wire {outcome} is not written by a measurement"))
        })?;
    let Instruction::Measure { kind, output, wires } = &circuit.instructions[pos] else {
        unreachable!()
    };
    let wire = wires[0];
    let level_of: fn(Value) -> Option<usize> = match kind {
        MeasurementKind::QubitZ => |v| Some(if v == Value::PLUS { 0 } else { 1 }),
        MeasurementKind::PhotonCount => |v| v.as_count(),
        _ => {
            return Err(Error::DeferralPrecondition(
                "only Z measurements and photon counts can be deferred".into(),
            ))
        }
    };
    let Some(out) = *output else {
        return Err(Error::DeferralPrecondition("measurement has no output".into()));
    };

    // Classical wires derived from the outcome must only feed post-processing.
    let mut tainted: HashSet<usize> = HashSet::from([out]);
    let mut head = Vec::new();
    let mut tail = vec![circuit.instructions[pos].clone()];
    for ins in &circuit.instructions[pos + 1..] {
        match ins {
            Instruction::Conditional {
                gate,
                wires,
                condition,
                value,
            } if *condition == out => {
                let level = level_of(*value)
                    .ok_or_else(|| Error::DeferralPrecondition(format!("condition value {value} is not a level")))?;
                let mut all = vec![wire];
                all.extend(wires);
                head.push(Instruction::Unitary {
                    gate: GateSpec::controlled(gate.clone(), level),
                    wires: all,
                });
            }
            Instruction::Conditional { condition, .. } if tainted.contains(condition) => {
                return Err(Error::DeferralPrecondition(
                    "a gate is conditioned on post-processed outcome data".into(),
                ));
            }
            Instruction::Classical { inputs, output, .. } if inputs.iter().any(|i| tainted.contains(i)) => {
                tainted.insert(*output);
                tail.push(ins.clone());
            }
            other => head.push(other.clone()),
        }
    }
    let mut instructions = circuit.instructions[..pos].to_vec();
    instructions.extend(head);
    instructions.extend(tail);
    let deferred = Circuit {
        quantum: circuit.quantum.clone(),
        classical: circuit.classical.clone(),
        instructions,
    };
    deferred.validate()?;
    Ok(deferred)
}
