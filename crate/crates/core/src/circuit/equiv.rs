use rayon::prelude::*;

use super::{Circuit, SimOptions, Simulator};
use crate::error::{Error, Result};
use crate::hilbert::{equal_up_to_global_phase, HilbertSpec, PhaseComparable, StateVector, WireKind};
use crate::measurement::Value;
use crate::schwinger::{dicke_state, fock_state, DickeIndex};
use crate::C64;

/// Inputs on which two circuits are compared.
#[derive(Clone, Debug)]
pub enum Domain {
    /// Every computational basis state.
    Full,
    /// Dicke states of N qubits, or two-mode Fock states `|N−k, k⟩`.
    SymmetricSector(usize),
    /// Caller-supplied vectors (compared by linearity on their span).
    SubspaceSpan(Vec<StateVector>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compare {
    /// Outputs agree up to one global phase across the whole domain.
    UnitaryUpToGlobalPhase,
    /// Joint outcome distributions agree in total variation for each input.
    JointDistribution,
}

#[derive(Clone, Debug)]
pub struct EquivalenceQuery {
    pub left: Circuit,
    pub right: Circuit,
    pub domain: Domain,
    pub compare: Compare,
    pub tol: f64,
    /// Sweep points; ignored when neither circuit depends on φ.
    pub phis: Vec<f64>,
    /// For distribution comparison: labels to compare (default: all, which
    /// must then coincide).
    pub observe: Option<Vec<String>>,
    /// For distribution comparison under `Domain::Full`: use each circuit's
    /// own declared input rather than enumerating basis states.
    pub declared_inputs: bool,
}

impl EquivalenceQuery {
    pub fn new(left: Circuit, right: Circuit, domain: Domain, compare: Compare) -> Self {
        Self {
            left,
            right,
            domain,
            compare,
            tol: crate::config::TOL_EXACT,
            phis: crate::config::default_phi_grid(),
            observe: None,
            declared_inputs: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub phi: f64,
    /// Index into the domain's input list.
    pub input: Option<usize>,
    pub outcome: Option<Vec<Value>>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub equal: bool,
    pub max_deviation: f64,
    pub witness: Option<Witness>,
}

struct Columns<'a> {
    spec: &'a HilbertSpec,
    cols: Vec<Vec<C64>>,
}

impl PhaseComparable for Columns<'_> {
    fn spec(&self) -> &HilbertSpec {
        self.spec
    }

    fn chunks(&self) -> Box<dyn Iterator<Item = Vec<C64>> + '_> {
        Box::new(self.cols.iter().cloned())
    }
}

fn domain_states(domain: &Domain, spec: &HilbertSpec) -> Result<Vec<StateVector>> {
    match domain {
        Domain::Full => (0..spec.total_dim()).map(|j| StateVector::basis(spec, j)).collect(),
        Domain::SymmetricSector(n) => {
            let subs = spec.subsystems();
            if subs.len() == *n && subs.iter().all(|s| s.kind() == WireKind::Qubit) {
                (0..=*n).map(|k| dicke_state(DickeIndex::new(*n, k)?)).collect()
            } else if subs.len() == 2 && subs.iter().all(|s| s.kind() == WireKind::Mode && s.cutoff() >= *n) {
                (0..=*n).map(|k| fock_state(n - k, k, spec)).collect()
            } else {
                Err(Error::IncompatibleQuery(format!(
                    "no symmetric sector with N={n} on {spec}"
                )))
            }
        }
        Domain::SubspaceSpan(states) => {
            for s in states {
                if s.spec() != spec {
                    return Err(Error::IncompatibleQuery("span vector lives on a different spec".into()));
                }
            }
            Ok(states.clone())
        }
    }
}

/// Decide whether two circuits agree on a domain, within `tol`.
pub fn check_equivalence(q: &EquivalenceQuery) -> Result<Verdict> {
    let left = Simulator::new(&q.left)?;
    let right = Simulator::new(&q.right)?;
    let phis: Vec<f64> = if q.left.depends_on_phi() || q.right.depends_on_phi() {
        q.phis.clone()
    } else {
        vec![0.0]
    };
    if phis.is_empty() {
        return Err(Error::IncompatibleQuery("empty φ grid".into()));
    }
    let per_phi: Vec<Result<(f64, Option<Witness>)>> = match q.compare {
        Compare::UnitaryUpToGlobalPhase => {
            if !q.left.is_measurement_free() || !q.right.is_measurement_free() {
                return Err(Error::NotMeasurementFree);
            }
            if left.spec() != right.spec() {
                return Err(Error::IncompatibleQuery("circuits act on different wires".into()));
            }
            let inputs = domain_states(&q.domain, left.spec())?;
            phis.par_iter()
                .map(|&phi| unitary_deviation(&left, &right, &inputs, phi, q.tol))
                .collect()
        }
        Compare::JointDistribution => {
            let pairs: Vec<(StateVector, StateVector)> = if q.declared_inputs {
                vec![(q.left.input_state()?, q.right.input_state()?)]
            } else {
                if left.spec() != right.spec() {
                    return Err(Error::IncompatibleQuery(
                        "circuits act on different wires; compare declared inputs instead".into(),
                    ));
                }
                domain_states(&q.domain, left.spec())?
                    .into_iter()
                    .map(|s| (s.clone(), s))
                    .collect()
            };
            let observe = match &q.observe {
                Some(o) => o.clone(),
                None => {
                    if q.left.labels() != q.right.labels() {
                        return Err(Error::IncompatibleQuery(
                            "classical outputs differ; name the labels to observe".into(),
                        ));
                    }
                    q.left.labels()
                }
            };
            phis.par_iter()
                .map(|&phi| distribution_deviation(&left, &right, &pairs, &observe, phi))
                .collect()
        }
    };
    let mut max_deviation = 0.0f64;
    let mut witness = None;
    for r in per_phi {
        let (dev, w) = r?;
        if dev > max_deviation || witness.is_none() && w.is_some() && dev >= max_deviation {
            max_deviation = dev;
            witness = w;
        }
    }
    let equal = max_deviation <= q.tol;
    Ok(Verdict {
        equal,
        max_deviation,
        witness: if equal { None } else { witness },
    })
}

fn unitary_deviation(
    left: &Simulator,
    right: &Simulator,
    inputs: &[StateVector],
    phi: f64,
    tol: f64,
) -> Result<(f64, Option<Witness>)> {
    let evolve = |sim: &Simulator, s: &StateVector| -> Result<Vec<C64>> {
        let (b, _) = sim.branches(s, phi, usize::MAX, 0.0)?;
        Ok(b[0].state.amplitudes().to_vec())
    };
    let spec = left.spec();
    let a = Columns {
        spec,
        cols: inputs.iter().map(|s| evolve(left, s)).collect::<Result<_>>()?,
    };
    let b = Columns {
        spec,
        cols: inputs.iter().map(|s| evolve(right, s)).collect::<Result<_>>()?,
    };
    let m = equal_up_to_global_phase(&a, &b, tol);
    let input = m.worst.map(|w| w / spec.total_dim());
    Ok((
        m.deviation,
        Some(Witness {
            phi,
            input,
            outcome: None,
            description: format!(
                "output amplitudes differ by {:.3e} beyond a common phase at phi = {phi}",
                m.deviation
            ),
        }),
    ))
}

fn distribution_deviation(
    left: &Simulator,
    right: &Simulator,
    pairs: &[(StateVector, StateVector)],
    observe: &[String],
    phi: f64,
) -> Result<(f64, Option<Witness>)> {
    let opts = SimOptions::default();
    let mut worst = (0.0f64, None);
    for (k, (sl, sr)) in pairs.iter().enumerate() {
        let dl = left.run_from(sl, phi, &opts)?.marginal(observe)?;
        let dr = right.run_from(sr, phi, &opts)?.marginal(observe)?;
        let tv = dl.total_variation(&dr)?;
        if tv >= worst.0 || worst.1.is_none() {
            let (gap, outcome) = dl.max_abs_difference(&dr)?;
            worst = (
                tv,
                Some(Witness {
                    phi,
                    input: Some(k),
                    outcome,
                    description: format!("total variation {tv:.3e} at phi = {phi}; largest probability gap {gap:.3e}"),
                }),
            );
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{Angle, GateSpec};
    use crate::measurement::MeasurementKind;

    fn hzh(extra_phase: bool) -> Circuit {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        c.gate(GateSpec::Hadamard, &[q]);
        c.gate(GateSpec::rotation([0.0, 0.0, 1.0], Angle::phi()), &[q]);
        if extra_phase {
            c.gate(GateSpec::QubitPhase(Angle::constant(0.3)), &[q]);
        }
        c.gate(GateSpec::Hadamard, &[q]);
        c
    }

    #[test]
    fn global_phase_is_ignored_relative_phase_is_not() {
        let mut c = Circuit::new();
        let q = c.qubit("q");
        c.gate(GateSpec::rotation([1.0, 0.0, 0.0], Angle::phi()), &[q]);
        let v = check_equivalence(&EquivalenceQuery::new(
            hzh(false),
            c,
            Domain::Full,
            Compare::UnitaryUpToGlobalPhase,
        ))
        .unwrap();
        assert!(v.equal, "{v:?}");
        let v = check_equivalence(&EquivalenceQuery::new(
            hzh(false),
            hzh(true),
            Domain::Full,
            Compare::UnitaryUpToGlobalPhase,
        ))
        .unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
    }

    #[test]
    fn distributions_compare_on_observed_labels() {
        let mut a = hzh(false);
        a.measure(MeasurementKind::QubitZ, &[0], "z");
        let mut b = hzh(true);
        b.measure(MeasurementKind::QubitZ, &[0], "z");
        let v = check_equivalence(&EquivalenceQuery::new(a, b, Domain::Full, Compare::JointDistribution)).unwrap();
        assert!(!v.equal);
        assert!(v.witness.unwrap().outcome.is_some());
    }
}
