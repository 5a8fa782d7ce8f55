use super::{ClassicalKind, Value};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Finite lookup table; inputs not listed are outside the alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalTable {
    pub arity: usize,
    pub entries: BTreeMap<Vec<Value>, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalGate {
    Sum,
    /// First input minus second.
    Difference,
    Product,
    /// `(−1)^n` of a photon count.
    ParityOfCount,
    /// Count `0 ↦ +1`, `N ↦ −1`.
    MapCount(usize),
    /// Inputs `(y, n)`: when `y == when`, counts `0` and `N` are exchanged.
    ControlledExchange {
        n: usize,
        when: Value,
    },
    Custom(ClassicalTable),
}

impl ClassicalGate {
    pub fn name(&self) -> &'static str {
        match self {
            ClassicalGate::Sum => "sum",
            ClassicalGate::Difference => "diff",
            ClassicalGate::Product => "prod",
            ClassicalGate::ParityOfCount => "parity",
            ClassicalGate::MapCount(_) => "mapcount",
            ClassicalGate::ControlledExchange { .. } => "exchange",
            ClassicalGate::Custom(_) => "table",
        }
    }

    /// Number of inputs, `None` for variadic gates.
    pub fn arity(&self) -> Option<usize> {
        match self {
            ClassicalGate::Sum | ClassicalGate::Product => None,
            ClassicalGate::Difference | ClassicalGate::ControlledExchange { .. } => Some(2),
            ClassicalGate::ParityOfCount | ClassicalGate::MapCount(_) => Some(1),
            ClassicalGate::Custom(t) => Some(t.arity),
        }
    }

    /// Output kind for the given input kinds, or a description of the mismatch.
    pub fn output_kind(&self, inputs: &[ClassicalKind]) -> std::result::Result<ClassicalKind, String> {
        match self.arity() {
            Some(n) if n != inputs.len() => {
                return Err(format!("`{}` takes {n} input(s), found {}", self.name(), inputs.len()))
            }
            None if inputs.is_empty() => return Err(format!("`{}` needs at least one input", self.name())),
            _ => {}
        }
        let widest = inputs.iter().copied().max().unwrap_or(ClassicalKind::Sign);
        let need = |i: usize, k: ClassicalKind| -> std::result::Result<(), String> {
            if k.accepts(inputs[i]) {
                Ok(())
            } else {
                Err(format!(
                    "input {} of `{}` must be {k}, found {}",
                    i + 1,
                    self.name(),
                    inputs[i]
                ))
            }
        };
        match self {
            ClassicalGate::Sum | ClassicalGate::Difference => Ok(widest.max(ClassicalKind::Int)),
            ClassicalGate::Product => Ok(widest),
            ClassicalGate::ParityOfCount | ClassicalGate::MapCount(_) => {
                need(0, ClassicalKind::Int)?;
                Ok(ClassicalKind::Sign)
            }
            ClassicalGate::ControlledExchange { .. } => {
                need(0, ClassicalKind::Sign)?;
                need(1, ClassicalKind::Int)?;
                Ok(ClassicalKind::Int)
            }
            ClassicalGate::Custom(t) => Ok(t
                .entries
                .values()
                .map(|&v| {
                    if v.is_sign() {
                        ClassicalKind::Sign
                    } else if v.as_int().is_some() {
                        ClassicalKind::Int
                    } else {
                        ClassicalKind::Real
                    }
                })
                .max()
                .unwrap_or(ClassicalKind::Sign)),
        }
    }

    pub fn eval(&self, inputs: &[Value]) -> Result<Value> {
        if let Some(n) = self.arity() {
            if n != inputs.len() {
                return Err(Error::DimMismatch {
                    expected: n,
                    found: inputs.len(),
                });
            }
        }
        let outside = |v: Value| Error::OutsideAlphabet {
            gate: self.name().into(),
            value: v.to_string(),
        };
        let count = |v: Value| v.as_count().ok_or_else(|| outside(v));
        match self {
            ClassicalGate::Sum => Ok(Value::new(inputs.iter().map(|v| v.get()).sum())),
            ClassicalGate::Difference => Ok(Value::new(inputs[0].get() - inputs[1].get())),
            ClassicalGate::Product => Ok(Value::new(inputs.iter().map(|v| v.get()).product())),
            ClassicalGate::ParityOfCount => Ok(Value::sign(count(inputs[0])? % 2 == 0)),
            ClassicalGate::MapCount(n) => match count(inputs[0])? {
                0 => Ok(Value::PLUS),
                k if k == *n => Ok(Value::MINUS),
                _ => Err(outside(inputs[0])),
            },
            ClassicalGate::ControlledExchange { n, when } => {
                if !inputs[0].is_sign() {
                    return Err(outside(inputs[0]));
                }
                let k = count(inputs[1])?;
                if inputs[0] != *when {
                    return Ok(inputs[1]);
                }
                Ok(match k {
                    0 => Value::int(*n as i64),
                    k if k == *n => Value::int(0),
                    _ => inputs[1],
                })
            }
            ClassicalGate::Custom(t) => t.entries.get(inputs).copied().ok_or_else(|| Error::OutsideAlphabet {
                gate: "table".into(),
                value: format!("{inputs:?}"),
            }),
        }
    }
}
