//! Tensor-product Hilbert spaces of qubits and truncated bosonic modes.

mod operator;
mod phase;
mod state;

pub use operator::{Block, Operator};
pub use phase::{equal_up_to_global_phase, PhaseComparable, PhaseMatch};
pub use state::StateVector;

use crate::config;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireKind {
    Qubit,
    Mode,
}

impl fmt::Display for WireKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireKind::Qubit => f.write_str("qubit"),
            WireKind::Mode => f.write_str("mode"),
        }
    }
}

/// One tensor factor: a qubit, or a mode truncated to Fock levels `0..=cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subsystem {
    kind: WireKind,
    dim: usize,
}

impl Subsystem {
    pub const QUBIT: Subsystem = Subsystem {
        kind: WireKind::Qubit,
        dim: 2,
    };

    pub fn qubit() -> Self {
        Self::QUBIT
    }

    pub fn mode(cutoff: usize) -> Self {
        Subsystem {
            kind: WireKind::Mode,
            dim: cutoff + 1,
        }
    }

    pub fn kind(&self) -> WireKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest Fock level (1 for a qubit).
    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WireKind::Qubit => f.write_str("qubit"),
            WireKind::Mode => write!(f, "mode(cutoff {})", self.cutoff()),
        }
    }
}

/// Ordered list of subsystems. The first subsystem is the most significant
/// digit of the flat amplitude index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpec {
    subsystems: Vec<Subsystem>,
    total: usize,
}

impl HilbertSpec {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::with_limit(subsystems, config::max_dim())
    }

    pub fn with_limit(subsystems: Vec<Subsystem>, limit: usize) -> Result<Self> {
        let mut total: usize = 1;
        for s in &subsystems {
            match s.kind {
                WireKind::Qubit if s.dim != 2 => {
                    return Err(Error::InvalidSubsystem(format!("qubit with dimension {}", s.dim)))
                }
                WireKind::Mode if s.dim < 2 => {
                    return Err(Error::InvalidSubsystem("mode cutoff must be at least 1".into()))
                }
                _ => {}
            }
            total = total
                .checked_mul(s.dim)
                .ok_or(Error::DimensionLimit { dim: usize::MAX, limit })?;
        }
        if total > limit {
            return Err(Error::DimensionLimit { dim: total, limit });
        }
        Ok(Self { subsystems, total })
    }

    pub fn empty() -> Self {
        Self {
            subsystems: Vec::new(),
            total: 1,
        }
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![Subsystem::QUBIT; n])
    }

    pub fn modes(cutoffs: &[usize]) -> Result<Self> {
        Self::new(cutoffs.iter().map(|&c| Subsystem::mode(c)).collect())
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn subsystem(&self, wire: usize) -> Result<Subsystem> {
        self.subsystems
            .get(wire)
            .copied()
            .ok_or_else(|| Error::SpecMismatch(format!("wire {wire} out of range (len {})", self.len())))
    }

    pub fn concat(&self, other: &HilbertSpec) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs.extend_from_slice(&other.subsystems);
        Self::new(subs)
    }

    /// The spec formed by the listed wires, in the listed order.
    pub fn select(&self, wires: &[usize]) -> Result<Self> {
        let subs = wires.iter().map(|&w| self.subsystem(w)).collect::<Result<Vec<_>>>()?;
        Self::new(subs)
    }

    /// Stride of each wire in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.subsystems[k + 1].dim;
        }
        strides
    }

    pub fn index_of(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.len() {
            return Err(Error::DimMismatch {
                expected: self.len(),
                found: levels.len(),
            });
        }
        let mut idx = 0;
        for (s, &l) in self.subsystems.iter().zip(levels) {
            if l >= s.dim {
                return Err(Error::ExceedsCutoff {
                    level: l,
                    cutoff: s.cutoff(),
                });
            }
            idx = idx * s.dim + l;
        }
        Ok(idx)
    }

    pub fn levels_of(&self, mut index: usize) -> Vec<usize> {
        let mut levels = vec![0; self.len()];
        for k in (0..self.len()).rev() {
            let d = self.subsystems[k].dim;
            levels[k] = index % d;
            index /= d;
        }
        levels
    }

    /// Check that `op_spec` matches the subsystems at `targets`.
    pub(crate) fn check_targets(&self, targets: &[usize], op_spec: &HilbertSpec) -> Result<()> {
        if targets.len() != op_spec.len() {
            return Err(Error::DimMismatch {
                expected: op_spec.len(),
                found: targets.len(),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            let s = self.subsystem(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::SpecMismatch(format!("wire {t} targeted twice")));
            }
            let want = op_spec.subsystems[i];
            if s.kind != want.kind {
                return Err(Error::WireKindMismatch(format!(
                    "operator expects {} on wire {t}, found {}",
                    want.kind, s.kind
                )));
            }
            if s.dim != want.dim {
                return Err(Error::DimMismatch {
                    expected: want.dim,
                    found: s.dim,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for HilbertSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.subsystems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

/// Offsets of the local basis of `targets` inside the flat index, and the
/// base indices of every slice through the remaining wires.
pub(crate) struct Layout {
    pub offsets: Vec<usize>,
    pub bases: Vec<usize>,
}

impl Layout {
    pub fn new(spec: &HilbertSpec, targets: &[usize]) -> Self {
        let strides = spec.strides();
        let mut offsets = vec![0usize];
        for &t in targets {
            let d = spec.subsystems[t].dim;
            let st = strides[t];
            offsets = offsets.iter().flat_map(|&o| (0..d).map(move |k| o + k * st)).collect();
        }
        let mut bases = vec![0usize];
        for (w, &st) in strides.iter().enumerate() {
            if targets.contains(&w) {
                continue;
            }
            let d = spec.subsystems[w].dim;
            bases = bases.iter().flat_map(|&b| (0..d).map(move |k| b + k * st)).collect();
        }
        Self { offsets, bases }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip() {
        let spec = HilbertSpec::new(vec![Subsystem::qubit(), Subsystem::mode(3), Subsystem::mode(2)]).unwrap();
        assert_eq!(spec.total_dim(), 24);
        for i in 0..24 {
            assert_eq!(spec.index_of(&spec.levels_of(i)).unwrap(), i);
        }
        assert_eq!(spec.index_of(&[1, 0, 0]).unwrap(), 12);
        assert_eq!(spec.strides(), vec![12, 3, 1]);
    }

    #[test]
    fn dimension_limit() {
        let err = HilbertSpec::with_limit(vec![Subsystem::mode(9); 3], 999).unwrap_err();
        assert_eq!(err, Error::DimensionLimit { dim: 1000, limit: 999 });
        assert!(HilbertSpec::new(vec![Subsystem::mode(0)]).is_err());
    }

    #[test]
    fn layout_covers_every_index_once() {
        let spec = HilbertSpec::new(vec![Subsystem::mode(2), Subsystem::qubit(), Subsystem::mode(1)]).unwrap();
        let lay = Layout::new(&spec, &[2, 0]);
        let mut seen: Vec<usize> = lay
            .bases
            .iter()
            .flat_map(|b| lay.offsets.iter().map(move |o| b + o))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..spec.total_dim()).collect::<Vec<_>>());
        // target order fixes the local index: wire 2 is the most significant digit
        assert_eq!(lay.offsets[..3], [0, 4, 8]);
    }
}
