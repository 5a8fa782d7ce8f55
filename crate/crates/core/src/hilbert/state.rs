use super::{HilbertSpec, Operator, Subsystem};
use crate::config::TOL_NORM;
use crate::error::{Error, Result};
use crate::C64;

/// Pure state over a [`HilbertSpec`]. Normalization is not enforced;
/// [`StateVector::is_normalized`] reports it.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    spec: HilbertSpec,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(spec: HilbertSpec, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != spec.total_dim() {
            return Err(Error::DimMismatch {
                expected: spec.total_dim(),
                found: amps.len(),
            });
        }
        Ok(Self { spec, amps })
    }

    pub fn zero(spec: &HilbertSpec) -> Self {
        Self {
            spec: spec.clone(),
            amps: vec![C64::new(0.0, 0.0); spec.total_dim()],
        }
    }

    pub fn basis(spec: &HilbertSpec, index: usize) -> Result<Self> {
        if index >= spec.total_dim() {
            return Err(Error::DimMismatch {
                expected: spec.total_dim(),
                found: index,
            });
        }
        let mut s = Self::zero(spec);
        s.amps[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Product basis state with the given level on each wire.
    pub fn from_levels(spec: &HilbertSpec, levels: &[usize]) -> Result<Self> {
        Self::basis(spec, spec.index_of(levels)?)
    }

    /// Single-mode coherent state `e^{-|α|²/2} Σ αⁿ/√n! |n⟩`, truncated at
    /// `cutoff` without renormalization.
    pub fn coherent(alpha: C64, cutoff: usize) -> Result<Self> {
        let spec = HilbertSpec::new(vec![Subsystem::mode(cutoff)])?;
        let mut amps = Vec::with_capacity(cutoff + 1);
        let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..=cutoff {
            amps.push(a);
            a = a * alpha / ((n + 1) as f64).sqrt();
        }
        Self::new(spec, amps)
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL_NORM
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::OutOfRange("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            spec: self.spec.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!("{} vs {}", self.spec, other.spec)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            spec: self.spec.clone(),
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let ip = self.inner(other)?;
        Ok(ip.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let spec = self.spec.concat(&other.spec)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        Self::new(spec, amps)
    }

    /// Apply `op` to `targets`, identity elsewhere.
    pub fn apply(&self, op: &Operator, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_mut(op, targets)?;
        Ok(out)
    }

    pub fn apply_mut(&mut self, op: &Operator, targets: &[usize]) -> Result<()> {
        op.apply_to(&self.spec, targets, &mut self.amps)
    }

    /// Probability mass on each level of `wire`.
    pub fn level_weights(&self, wire: usize) -> Result<Vec<f64>> {
        let d = self.spec.subsystem(wire)?.dim();
        let stride = self.spec.strides()[wire];
        let mut w = vec![0.0; d];
        for (i, a) in self.amps.iter().enumerate() {
            w[(i / stride) % d] += a.norm_sqr();
        }
        Ok(w)
    }

    /// The (unnormalized) state of the other wires given `wire` at `level`.
    pub fn slice(&self, wire: usize, level: usize) -> Result<Self> {
        let sub = self.spec.subsystem(wire)?;
        if level >= sub.dim() {
            return Err(Error::ExceedsCutoff {
                level,
                cutoff: sub.cutoff(),
            });
        }
        let rest: Vec<Subsystem> = self
            .spec
            .subsystems()
            .iter()
            .enumerate()
            .filter(|&(w, _)| w != wire)
            .map(|(_, &s)| s)
            .collect();
        let stride = self.spec.strides()[wire];
        let amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| (i / stride) % sub.dim() == level)
            .map(|(_, &a)| a)
            .collect();
        Self::new(HilbertSpec::new(rest)?, amps)
    }

    /// `⟨T|ρ|T⟩` for the reduced state `ρ` of `wires` (in the given order)
    /// and a pure target `T` on those wires.
    pub fn reduced_fidelity(&self, wires: &[usize], target: &StateVector) -> Result<f64> {
        let kept = self.spec.select(wires)?;
        if &kept != target.spec() {
            return Err(Error::SpecMismatch(format!(
                "target lives on {}, selected wires on {kept}",
                target.spec()
            )));
        }
        let strides = self.spec.strides();
        let dims: Vec<usize> = self.spec.subsystems().iter().map(|s| s.dim()).collect();
        let mut overlaps: std::collections::HashMap<usize, C64> = std::collections::HashMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let mut k = 0;
            for &w in wires {
                k = k * dims[w] + (i / strides[w]) % dims[w];
            }
            let mut rest = i;
            for &w in wires {
                rest -= ((i / strides[w]) % dims[w]) * strides[w];
            }
            *overlaps.entry(rest).or_insert(C64::new(0.0, 0.0)) += target.amps[k].conj() * a;
        }
        Ok(overlaps.values().map(|c| c.norm_sqr()).sum())
    }

    /// Zero every amplitude whose level on `wire` differs from `level`.
    pub(crate) fn project_level(&mut self, wire: usize, level: usize) {
        let d = self.spec.subsystems()[wire].dim();
        let stride = self.spec.strides()[wire];
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i / stride) % d != level {
                *a = C64::new(0.0, 0.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn basis_tensor_products() {
        let q = HilbertSpec::qubits(1).unwrap();
        let k0 = StateVector::basis(&q, 0).unwrap();
        let k1 = StateVector::basis(&q, 1).unwrap();
        let k01 = k0.tensor(&k1).unwrap();
        assert_eq!(k01.amplitudes(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let plus = StateVector::new(q.clone(), vec![c(FRAC_1_SQRT_2); 2]).unwrap();
        let s = k0.tensor(&plus).unwrap();
        assert_eq!(s.amplitudes(), &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0), c(0.0)]);
    }

    #[test]
    fn vacuum_overlap_with_coherent_state() {
        let vac = StateVector::basis(&HilbertSpec::modes(&[30]).unwrap(), 0).unwrap();
        let a = StateVector::coherent(c(1.0), 30).unwrap();
        let ip = vac.inner(&a).unwrap();
        assert!((ip.norm() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((ip.norm() - 0.60653).abs() < 1e-5);
        assert!(a.is_normalized());
    }

    #[test]
    fn slice_and_weights() {
        let spec = HilbertSpec::new(vec![Subsystem::qubit(), Subsystem::mode(2)]).unwrap();
        let s = StateVector::new(spec, vec![c(0.6), c(0.0), c(0.0), c(0.0), c(0.0), c(0.8)]).unwrap();
        let w = s.level_weights(0).unwrap();
        assert!((w[0] - 0.36).abs() < 1e-15 && (w[1] - 0.64).abs() < 1e-15);
        let m = s.slice(0, 1).unwrap();
        assert_eq!(m.amplitudes(), &[c(0.0), c(0.0), c(0.8)]);
    }
}
