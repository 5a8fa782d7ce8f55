use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Instruction};
use crate::config::MAX_DENSE_DIM;
use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpec, Operator, StateVector, Subsystem};
use crate::measurement::{split, OutcomeDistribution, Value};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    /// Branches whose Born weight falls below this are dropped and their
    /// mass reported. Zero keeps everything with nonzero weight.
    pub branch_prune: f64,
    pub keep_states: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            branch_prune: 0.0,
            keep_states: false,
        }
    }
}

/// A partial trajectory: classical record so far, Born weight, normalized state.
#[derive(Clone, Debug)]
pub struct SimBranch {
    pub record: Vec<Option<Value>>,
    pub weight: f64,
    pub state: StateVector,
}

/// Circuit with its φ-independent operators prebuilt.
pub struct Simulator<'c> {
    circuit: &'c Circuit,
    spec: HilbertSpec,
    cache: Vec<Option<Operator>>,
}

impl<'c> Simulator<'c> {
    pub fn new(circuit: &'c Circuit) -> Result<Self> {
        circuit.validate()?;
        let spec = circuit.spec()?;
        let mut cache = Vec::with_capacity(circuit.instructions.len());
        for ins in &circuit.instructions {
            cache.push(match ins {
                Instruction::Unitary { gate, wires } | Instruction::Conditional { gate, wires, .. }
                    if !gate.depends_on_phi() =>
                {
                    Some(gate.operator(&subsystems(&spec, wires), 0.0)?)
                }
                _ => None,
            });
        }
        Ok(Self { circuit, spec, cache })
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    fn operator(&self, i: usize, phi: f64) -> Result<std::borrow::Cow<'_, Operator>> {
        if let Some(op) = &self.cache[i] {
            return Ok(std::borrow::Cow::Borrowed(op));
        }
        match &self.circuit.instructions[i] {
            Instruction::Unitary { gate, wires } | Instruction::Conditional { gate, wires, .. } => Ok(
                std::borrow::Cow::Owned(gate.operator(&subsystems(&self.spec, wires), phi)?),
            ),
            _ => Err(Error::Unsupported("no operator for this instruction".into())),
        }
    }

    /// Evolve `input` through the first `upto` instructions, branching at
    /// measurements. Returns the surviving branches and the pruned mass.
    pub fn branches(&self, input: &StateVector, phi: f64, upto: usize, prune: f64) -> Result<(Vec<SimBranch>, f64)> {
        self.evolve(input, phi, upto, prune, false)
    }

    /// With `compact`, measured wires are sliced out of each branch by basis
    /// level. They are consumed, so later statistics are unchanged, and the
    /// total amplitude count never exceeds one full state per branch layer.
    /// Branch states then live on the surviving wires only.
    fn evolve(
        &self,
        input: &StateVector,
        phi: f64,
        upto: usize,
        prune: f64,
        compact: bool,
    ) -> Result<(Vec<SimBranch>, f64)> {
        if input.spec() != &self.spec {
            return Err(Error::SpecMismatch(format!(
                "input state lives on {:?}, circuit on {:?}",
                input.spec(),
                self.spec
            )));
        }
        let mut live = vec![SimBranch {
            record: vec![None; self.circuit.classical.len()],
            weight: 1.0,
            state: input.clone(),
        }];
        let mut dropped = 0.0;
        // Position of each original wire in the branch states, `None` once sliced out.
        let mut place: Vec<Option<usize>> = (0..self.spec.len()).map(Some).collect();
        let at = |place: &[Option<usize>], wires: &[usize]| -> Result<Vec<usize>> {
            wires
                .iter()
                .map(|&w| place[w].ok_or_else(|| Error::MalformedCircuit(format!("wire {w} used after measurement"))))
                .collect()
        };
        for (i, ins) in self.circuit.instructions.iter().enumerate().take(upto) {
            match ins {
                Instruction::Unitary { wires, .. } => {
                    let op = self.operator(i, phi)?;
                    let wires = at(&place, wires)?;
                    for b in &mut live {
                        b.state.apply_mut(&op, &wires)?;
                    }
                }
                Instruction::Conditional {
                    wires,
                    condition,
                    value,
                    ..
                } => {
                    if live.iter().any(|b| b.record[*condition] == Some(*value)) {
                        let op = self.operator(i, phi)?;
                        let wires = at(&place, wires)?;
                        for b in live.iter_mut().filter(|b| b.record[*condition] == Some(*value)) {
                            b.state.apply_mut(&op, &wires)?;
                        }
                    }
                }
                Instruction::Classical { gate, inputs, output } => {
                    for b in &mut live {
                        let args: Vec<Value> = inputs
                            .iter()
                            .map(|&k| b.record[k].ok_or(Error::MalformedCircuit("unwritten input".into())))
                            .collect::<Result<_>>()?;
                        b.record[*output] = Some(gate.eval(&args)?);
                    }
                }
                Instruction::Measure { kind, wires, output } => {
                    let mut next = Vec::with_capacity(live.len());
                    let local = at(&place, wires)?;
                    for b in live {
                        for (value, p, state) in split(&b.state, kind, &local)? {
                            let weight = b.weight * p;
                            if weight < prune {
                                dropped += weight;
                                continue;
                            }
                            let mut record = b.record.clone();
                            if let Some(o) = output {
                                record[*o] = value;
                            }
                            next.push(SimBranch { record, weight, state });
                        }
                    }
                    live = next;
                    if compact {
                        live = self.slice_out(live, wires, &mut place)?;
                    }
                }
            }
        }
        Ok((live, dropped))
    }

    fn slice_out(
        &self,
        mut live: Vec<SimBranch>,
        wires: &[usize],
        place: &mut [Option<usize>],
    ) -> Result<Vec<SimBranch>> {
        for &w in wires {
            let Some(k) = place[w] else { continue };
            if place.iter().flatten().count() == 1 {
                break;
            }
            let d = self.spec.subsystems()[w].dim();
            let mut next = Vec::with_capacity(live.len());
            for b in live {
                for level in 0..d {
                    let s = b.state.slice(k, level)?;
                    let p = s.norm_sqr();
                    if p > 0.0 {
                        next.push(SimBranch {
                            record: b.record.clone(),
                            weight: b.weight * p,
                            state: s.scaled(C64::new(1.0 / p.sqrt(), 0.0)),
                        });
                    }
                }
            }
            live = next;
            place[w] = None;
            for q in place.iter_mut().flatten() {
                if *q > k {
                    *q -= 1;
                }
            }
        }
        Ok(live)
    }

    /// Joint distribution of all classical wires for a given input.
    pub fn run_from(&self, input: &StateVector, phi: f64, opts: &SimOptions) -> Result<OutcomeDistribution> {
        let (branches, dropped) = self.evolve(input, phi, usize::MAX, opts.branch_prune, !opts.keep_states)?;
        let mut probs: BTreeMap<Vec<Value>, f64> = BTreeMap::new();
        let mut states: BTreeMap<Vec<Value>, StateVector> = BTreeMap::new();
        for b in branches {
            let key: Vec<Value> = b
                .record
                .iter()
                .map(|v| v.ok_or(Error::MalformedCircuit("classical wire never written".into())))
                .collect::<Result<_>>()?;
            *probs.entry(key.clone()).or_insert(0.0) += b.weight;
            if opts.keep_states {
                states.insert(key, b.state);
            }
        }
        let mut dist = OutcomeDistribution::new(self.circuit.labels(), probs)?.with_dropped(dropped);
        if opts.keep_states {
            dist = dist.with_states(states);
        }
        Ok(dist)
    }

    pub fn run(&self, phi: f64, opts: &SimOptions) -> Result<OutcomeDistribution> {
        self.run_from(&self.circuit.input_state()?, phi, opts)
    }
}

fn subsystems(spec: &HilbertSpec, wires: &[usize]) -> Vec<Subsystem> {
    wires.iter().map(|&w| spec.subsystems()[w]).collect()
}

/// Exact joint distribution at `phi` from the declared input.
pub fn simulate(circuit: &Circuit, phi: f64) -> Result<OutcomeDistribution> {
    Simulator::new(circuit)?.run(phi, &SimOptions::default())
}

/// Seeded multinomial sampling from the exact distribution.
pub fn sample(circuit: &Circuit, phi: f64, shots: usize, seed: u64) -> Result<BTreeMap<Vec<Value>, usize>> {
    let dist = simulate(circuit, phi)?;
    let keys: Vec<&Vec<Value>> = dist.entries().keys().collect();
    let weights: Vec<f64> = dist.entries().values().copied().collect();
    let index = WeightedIndex::new(&weights).map_err(|e| Error::Unsupported(format!("cannot sample: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Vec<Value>, usize> = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(keys[index.sample(&mut rng)].clone()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Dense unitary of a measurement-free circuit at `phi`.
pub fn unitary_of(circuit: &Circuit, phi: f64) -> Result<Operator> {
    if !circuit.is_measurement_free() {
        return Err(Error::NotMeasurementFree);
    }
    let sim = Simulator::new(circuit)?;
    let spec = sim.spec().clone();
    let dim = spec.total_dim();
    if dim > MAX_DENSE_DIM {
        return Err(Error::DimensionLimit {
            dim,
            limit: MAX_DENSE_DIM,
        });
    }
    let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim {
        let (b, _) = sim.branches(&StateVector::basis(&spec, j)?, phi, usize::MAX, 0.0)?;
        for (i, a) in b[0].state.amplitudes().iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    Operator::dense(&spec, m)
}
