//! Measurements, outcome distributions and classical post-processing.

mod classical;
mod distribution;
mod value;

pub use classical::{ClassicalGate, ClassicalTable};
pub use distribution::OutcomeDistribution;
pub use value::{round12, ClassicalKind, Value};

use crate::config::{EIG_TOL, TOL_SYM, TOL_UNITARY};
use crate::error::{Error, Result};
use crate::gates::{self, SubspaceKind};
use crate::hilbert::{Block, HilbertSpec, Operator, StateVector, Subsystem, WireKind};
use crate::C64;
use nalgebra::{DMatrix, SymmetricEigen};
use std::collections::BTreeMap;

/// Hermitian observables that can be measured directly.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    /// `(−1)^{a†a}` on one mode.
    Parity,
    PauliX,
    PauliY,
    PauliZ,
    /// Mode exchange `|n₀,n₁⟩ ↦ |n₁,n₀⟩`.
    ModalSwap,
    /// `|0⟩⟨N| + |N⟩⟨0|`, zero elsewhere.
    SubspaceX(usize),
    /// `|0⟩⟨0| − |N⟩⟨N|`, zero elsewhere.
    SubspaceZ(usize),
    /// `a†a − b†b = 2J_z` on two modes.
    PhotonDifference,
    Custom {
        name: String,
        op: Operator,
    },
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::Parity => "parity".into(),
            Observable::PauliX => "x".into(),
            Observable::PauliY => "y".into(),
            Observable::PauliZ => "z".into(),
            Observable::ModalSwap => "swap".into(),
            Observable::SubspaceX(_) => "xn".into(),
            Observable::SubspaceZ(_) => "zn".into(),
            Observable::PhotonDifference => "diff".into(),
            Observable::Custom { name, .. } => name.clone(),
        }
    }

    /// Kind of the classical values produced.
    pub fn output_kind(&self) -> ClassicalKind {
        match self {
            Observable::Parity
            | Observable::PauliX
            | Observable::PauliY
            | Observable::PauliZ
            | Observable::ModalSwap => ClassicalKind::Sign,
            Observable::SubspaceX(_) | Observable::SubspaceZ(_) | Observable::PhotonDifference => ClassicalKind::Int,
            Observable::Custom { .. } => ClassicalKind::Real,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Observable::ModalSwap | Observable::PhotonDifference => 2,
            Observable::Custom { op, .. } => op.spec().len(),
            _ => 1,
        }
    }

    pub fn operator(&self, wires: &[Subsystem]) -> Result<Operator> {
        let kinds: Vec<WireKind> = wires.iter().map(|s| s.kind()).collect();
        let want = |k: &[WireKind]| -> Result<()> {
            if kinds != k {
                return Err(Error::WireKindMismatch(format!(
                    "observable `{}` expects {:?}, found {:?}",
                    self.name(),
                    k,
                    kinds
                )));
            }
            Ok(())
        };
        use WireKind::{Mode, Qubit};
        match self {
            Observable::Parity => {
                want(&[Mode])?;
                gates::parity(wires[0].cutoff())
            }
            Observable::PauliX => want(&[Qubit]).map(|_| gates::pauli_x()),
            Observable::PauliY => want(&[Qubit]).map(|_| gates::pauli_y()),
            Observable::PauliZ => want(&[Qubit]).map(|_| gates::pauli_z()),
            Observable::ModalSwap => {
                want(&[Mode, Mode])?;
                gates::modal_swap(wires[0].cutoff(), wires[1].cutoff())
            }
            Observable::SubspaceX(n) | Observable::SubspaceZ(n) => {
                want(&[Mode])?;
                let cutoff = wires[0].cutoff();
                if *n == 0 || *n > cutoff {
                    return Err(Error::ExceedsCutoff { level: *n, cutoff });
                }
                let spec = HilbertSpec::new(vec![wires[0]])?;
                let mut diag = vec![C64::new(0.0, 0.0); cutoff + 1];
                if let Observable::SubspaceZ(_) = self {
                    diag[0] = C64::new(1.0, 0.0);
                    diag[*n] = C64::new(-1.0, 0.0);
                    return Operator::diagonal(&spec, diag);
                }
                let one = C64::new(1.0, 0.0);
                let zero = C64::new(0.0, 0.0);
                Operator::from_blocks(
                    &spec,
                    vec![Block {
                        indices: vec![0, *n],
                        matrix: DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
                    }],
                    Some(diag),
                )
            }
            Observable::PhotonDifference => {
                want(&[Mode, Mode])?;
                let spec = HilbertSpec::new(wires.to_vec())?;
                let d1 = wires[1].dim();
                let diag = (0..spec.total_dim())
                    .map(|i| C64::new((i / d1) as f64 - (i % d1) as f64, 0.0))
                    .collect();
                Operator::diagonal(&spec, diag)
            }
            Observable::Custom { op, .. } => {
                if op.spec().subsystems() != wires {
                    return Err(Error::WireKindMismatch(format!(
                        "observable `{}` acts on {}",
                        self.name(),
                        op.spec()
                    )));
                }
                Ok(op.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasurementKind {
    Observable(Observable),
    PhotonCount,
    QubitZ,
    Discard,
}

impl MeasurementKind {
    pub fn output_kind(&self) -> Option<ClassicalKind> {
        match self {
            MeasurementKind::Observable(o) => Some(o.output_kind()),
            MeasurementKind::PhotonCount => Some(ClassicalKind::Int),
            MeasurementKind::QubitZ => Some(ClassicalKind::Sign),
            MeasurementKind::Discard => None,
        }
    }

    /// Check wire kinds (and observable construction) without a state.
    pub fn check_wires(&self, wires: &[Subsystem]) -> Result<()> {
        match self {
            MeasurementKind::Observable(o) => o.operator(wires).map(|_| ()),
            MeasurementKind::PhotonCount => match wires {
                [s] if s.kind() == WireKind::Mode => Ok(()),
                [_] => Err(Error::WireKindMismatch("photon counting needs a mode wire".into())),
                _ => Err(Error::MalformedCircuit("photon counting takes one wire".into())),
            },
            MeasurementKind::QubitZ => match wires {
                [s] if s.kind() == WireKind::Qubit => Ok(()),
                [_] => Err(Error::WireKindMismatch("Z measurement needs a qubit wire".into())),
                _ => Err(Error::MalformedCircuit("Z measurement takes one wire".into())),
            },
            MeasurementKind::Discard => {
                if wires.is_empty() {
                    Err(Error::MalformedCircuit("discard needs at least one wire".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSpec {
    pub kind: MeasurementKind,
    pub wires: Vec<usize>,
    pub label: Option<String>,
}

impl MeasurementSpec {
    pub fn new(kind: MeasurementKind, wires: Vec<usize>, label: impl Into<String>) -> Self {
        Self {
            kind,
            wires,
            label: Some(label.into()),
        }
    }

    pub fn discard(wires: Vec<usize>) -> Self {
        Self {
            kind: MeasurementKind::Discard,
            wires,
            label: None,
        }
    }
}

/// One post-measurement branch: outcome, Born weight, normalized state.
pub(crate) type Branch = (Option<Value>, f64, StateVector);

/// Projectors of a Hermitian operator grouped by eigenvalue.
pub(crate) struct Spectrum {
    pub groups: Vec<(Value, Operator)>,
}

impl Spectrum {
    pub fn new(op: &Operator) -> Result<Self> {
        let dev = op.hermiticity_deviation();
        if dev > TOL_UNITARY {
            return Err(Error::NonHermitian(dev));
        }
        let spec = op.spec().clone();
        let n = op.dim();
        // (eigenvalue, block id or usize::MAX, column in block or flat index)
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        let mut eigvecs: Vec<DMatrix<C64>> = Vec::new();
        let mut covered = vec![false; n];
        for (b, blk) in op.blocks().iter().enumerate() {
            let eig = SymmetricEigen::new(blk.matrix.clone());
            for (k, &l) in eig.eigenvalues.iter().enumerate() {
                pairs.push((l, b, k));
            }
            eigvecs.push(eig.eigenvectors);
            for &i in &blk.indices {
                covered[i] = true;
            }
        }
        for (i, d) in op.diagonal_entries().iter().enumerate() {
            if !covered[i] {
                pairs.push((d.re, usize::MAX, i));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut clusters: Vec<Vec<(f64, usize, usize)>> = Vec::new();
        for p in pairs {
            match clusters.last_mut() {
                Some(c) if p.0 - c.last().unwrap().0 <= EIG_TOL => c.push(p),
                _ => clusters.push(vec![p]),
            }
        }
        let mut groups = Vec::with_capacity(clusters.len());
        for c in clusters {
            let mean = c.iter().map(|p| p.0).sum::<f64>() / c.len() as f64;
            let snapped = if (mean - mean.round()).abs() <= EIG_TOL {
                mean.round()
            } else {
                mean
            };
            let mut diag = vec![C64::new(0.0, 0.0); n];
            let mut per_block: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &(_, b, k) in &c {
                if b == usize::MAX {
                    diag[k] = C64::new(1.0, 0.0);
                } else {
                    per_block.entry(b).or_default().push(k);
                }
            }
            let blocks = per_block
                .into_iter()
                .map(|(b, cols)| {
                    let v = &eigvecs[b];
                    let sel = v.select_columns(&cols);
                    Block {
                        indices: op.blocks()[b].indices.clone(),
                        matrix: &sel * sel.adjoint(),
                    }
                })
                .collect();
            groups.push((Value::new(snapped), Operator::from_blocks(&spec, blocks, Some(diag))?));
        }
        Ok(Self { groups })
    }
}

fn project_branches(state: &StateVector, wire: usize, value_of: impl Fn(usize) -> Value) -> Result<Vec<Branch>> {
    let weights = state.level_weights(wire)?;
    let mut out = Vec::new();
    for (level, &p) in weights.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut s = state.clone();
        s.project_level(wire, level);
        out.push((Some(value_of(level)), p, s.scaled(C64::new(1.0 / p.sqrt(), 0.0))));
    }
    Ok(out)
}

/// Split a state into measurement branches.
pub(crate) fn split(state: &StateVector, kind: &MeasurementKind, wires: &[usize]) -> Result<Vec<Branch>> {
    let subs = wires
        .iter()
        .map(|&w| state.spec().subsystem(w))
        .collect::<Result<Vec<_>>>()?;
    kind.check_wires(&subs)?;
    match kind {
        MeasurementKind::Discard => Ok(vec![(None, 1.0, state.clone())]),
        MeasurementKind::QubitZ => project_branches(state, wires[0], |l| Value::sign(l == 0)),
        MeasurementKind::PhotonCount => project_branches(state, wires[0], |l| Value::int(l as i64)),
        MeasurementKind::Observable(o) => {
            let spectrum = Spectrum::new(&o.operator(&subs)?)?;
            let mut out = Vec::new();
            for (value, proj) in &spectrum.groups {
                let s = state.apply(proj, wires)?;
                let p = s.norm_sqr();
                if p == 0.0 {
                    continue;
                }
                out.push((Some(*value), p, s.scaled(C64::new(1.0 / p.sqrt(), 0.0))));
            }
            Ok(out)
        }
    }
}

/// Born distribution of a measurement, with conditional states retained.
pub fn measure(state: &StateVector, spec: &MeasurementSpec) -> Result<OutcomeDistribution> {
    let branches = split(state, &spec.kind, &spec.wires)?;
    let labels = match spec.kind {
        MeasurementKind::Discard => Vec::new(),
        _ => vec![spec.label.clone().unwrap_or_else(|| "out".into())],
    };
    let total = state.norm_sqr();
    let mut entries = Vec::new();
    let mut states = BTreeMap::new();
    for (v, p, s) in branches {
        let key: Vec<Value> = v.into_iter().collect();
        entries.push((key.clone(), p / total));
        states.insert(key, s);
    }
    Ok(OutcomeDistribution::new(labels, entries)?.with_states(states))
}

/// Pushforward through a classical gate; the input labels are replaced by
/// `output`.
pub fn postprocess<S: AsRef<str>>(
    dist: &OutcomeDistribution,
    gate: &ClassicalGate,
    inputs: &[S],
    output: &str,
) -> Result<OutcomeDistribution> {
    let pos = inputs
        .iter()
        .map(|l| dist.position(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    dist.pushforward(&pos, output, |args| gate.eval(args))
}

/// `U† O U`; measuring it on ψ equals measuring `O` on `Uψ`.
pub fn conjugate_observable(u: &Operator, o: &Operator) -> Result<Operator> {
    let dev = o.hermiticity_deviation();
    if dev > TOL_UNITARY {
        return Err(Error::NonHermitian(dev));
    }
    u.adjoint().mul(o)?.mul(u)
}

/// Outcome relabelling induced by conjugating an observable with a unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomePermutation {
    pub table: BTreeMap<Value, Value>,
}

impl OutcomePermutation {
    pub fn apply(&self, v: Value) -> Option<Value> {
        self.table.get(&v).copied()
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().all(|(a, b)| a == b)
    }
}

/// Verify that `P† O P` has the eigenprojectors of `O` with permuted
/// eigenvalues, and return the permutation.
pub fn permute_outcomes(p: &Operator, o: &Operator) -> Result<OutcomePermutation> {
    let dev = p.unitarity_deviation();
    if dev > TOL_UNITARY {
        return Err(Error::NotPermutation(format!("P is not unitary (deviation {dev:e})")));
    }
    let conj = conjugate_observable(p, o)?;
    let spectrum = Spectrum::new(o)?;
    let mut table = BTreeMap::new();
    for (value, proj) in &spectrum.groups {
        // P†OP restricted to this eigenspace must be a multiple of the projector.
        let restricted = proj.mul(&conj)?.mul(proj)?;
        let trace: f64 = (0..proj.dim()).map(|i| proj.entry(i, i).re).sum();
        let lambda = (0..proj.dim()).map(|i| restricted.entry(i, i).re).sum::<f64>() / trace;
        let lambda = if (lambda - lambda.round()).abs() <= EIG_TOL {
            lambda.round()
        } else {
            lambda
        };
        let target = proj.scale(C64::new(lambda, 0.0));
        let off = conj.mul(proj)?.max_abs_diff(&target)?;
        if off > 1e-9 {
            return Err(Error::NotPermutation(format!(
                "eigenspace {value} is not mapped onto an eigenspace (residual {off:e})"
            )));
        }
        table.insert(*value, Value::new(lambda));
    }
    let domain: Vec<Value> = table.keys().copied().collect();
    let mut image: Vec<Value> = table.values().copied().collect();
    image.sort();
    if domain != image {
        return Err(Error::NotPermutation(format!(
            "eigenvalues {domain:?} map onto {image:?}"
        )));
    }
    Ok(OutcomePermutation { table })
}

/// Measurement of `X_N` in its photocounting form: `H_N`, count, then
/// `0 ↦ +1`, `N ↦ −1`. The state on `wire` must lie in `span{|0⟩, |N⟩}`.
pub fn measure_xn(state: &StateVector, n: usize, wire: usize) -> Result<OutcomeDistribution> {
    let sub = state.spec().subsystem(wire)?;
    if sub.kind() != WireKind::Mode {
        return Err(Error::WireKindMismatch("X_N measurement needs a mode wire".into()));
    }
    let weights = state.level_weights(wire)?;
    let total: f64 = weights.iter().sum();
    let outside: f64 = weights
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != 0 && k != n)
        .map(|(_, w)| w)
        .sum();
    if n == 0 || n > sub.cutoff() {
        return Err(Error::ExceedsCutoff {
            level: n,
            cutoff: sub.cutoff(),
        });
    }
    if outside > TOL_SYM * total {
        return Err(Error::OutsideSubspace(format!("span of |0> and |{n}>")));
    }
    let h = gates::subspace_gate(SubspaceKind::H, n, sub.cutoff())?;
    let rotated = state.apply(&h, &[wire])?;
    let counts = measure(
        &rotated,
        &MeasurementSpec::new(MeasurementKind::PhotonCount, vec![wire], "n"),
    )?;
    let counts = keep_levels(&counts, &[0, n]);
    postprocess(&counts, &ClassicalGate::MapCount(n), &["n"], "x")
}

fn keep_levels(d: &OutcomeDistribution, levels: &[usize]) -> OutcomeDistribution {
    let entries: Vec<_> = d
        .iter()
        .filter(|(k, _)| k[0].as_count().is_some_and(|c| levels.contains(&c)))
        .map(|(k, p)| (k.clone(), p))
        .collect();
    OutcomeDistribution::new(d.labels().to_vec(), entries).expect("filtered distribution")
}

/// SWAP measurement of two modes: the beamsplitter `e^{iJ_y π/2}`, photon
/// counting on the second mode, then parity.
pub fn measure_modal_swap(state: &StateVector, wires: [usize; 2]) -> Result<OutcomeDistribution> {
    let (a, b) = (state.spec().subsystem(wires[0])?, state.spec().subsystem(wires[1])?);
    if a.kind() != WireKind::Mode || b.kind() != WireKind::Mode {
        return Err(Error::WireKindMismatch("SWAP measurement needs two mode wires".into()));
    }
    let bs = gates::rotation_modes([0.0, 1.0, 0.0], -std::f64::consts::FRAC_PI_2, a.cutoff(), b.cutoff())?;
    let rotated = state.apply(&bs, &wires)?;
    let counts = measure(
        &rotated,
        &MeasurementSpec::new(MeasurementKind::PhotonCount, vec![wires[1]], "n"),
    )?;
    postprocess(&counts, &ClassicalGate::ParityOfCount, &["n"], "x")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Subsystem;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn mode_state(cutoff: usize, amps: &[(usize, C64)]) -> StateVector {
        let spec = HilbertSpec::new(vec![Subsystem::mode(cutoff)]).unwrap();
        let mut v = vec![c(0.0); cutoff + 1];
        for &(k, a) in amps {
            v[k] = a;
        }
        StateVector::new(spec, v).unwrap()
    }

    #[test]
    fn qubit_z_on_plus() {
        let plus = StateVector::new(HilbertSpec::qubits(1).unwrap(), vec![c(FRAC_1_SQRT_2); 2]).unwrap();
        let d = measure(&plus, &MeasurementSpec::new(MeasurementKind::QubitZ, vec![0], "z")).unwrap();
        assert!((d.probability(&[Value::PLUS]) - 0.5).abs() < 1e-15);
        assert!((d.probability(&[Value::MINUS]) - 0.5).abs() < 1e-15);
        let post = d.conditional_state(&[Value::MINUS]).unwrap();
        assert_eq!(post.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn photon_count_on_coherent_state() {
        let alpha = 2f64.sqrt();
        let s = StateVector::coherent(c(alpha), 40).unwrap();
        let d = measure(&s, &MeasurementSpec::new(MeasurementKind::PhotonCount, vec![0], "n")).unwrap();
        let mut pois = (-2f64).exp();
        for n in 0..20 {
            assert!((d.probability(&[Value::int(n)]) - pois).abs() < 1e-14);
            pois *= 2.0 / (n + 1) as f64;
        }
        let par = postprocess(&d, &ClassicalGate::ParityOfCount, &["n"], "x").unwrap();
        let want = (1.0 + (-4f64).exp()) / 2.0;
        assert!((par.probability(&[Value::PLUS]) - want).abs() < 1e-13);
    }

    #[test]
    fn parity_observable() {
        let h = c(FRAC_1_SQRT_2);
        let s = mode_state(4, &[(0, h), (3, h)]);
        let d = measure(
            &s,
            &MeasurementSpec::new(MeasurementKind::Observable(Observable::Parity), vec![0], "x"),
        )
        .unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.probability(&[Value::PLUS]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn postprocess_examples() {
        let d = OutcomeDistribution::new(
            vec!["n0".into(), "n1".into()],
            [(vec![Value::int(2), Value::int(1)], 1.0)],
        )
        .unwrap();
        let m = postprocess(&d, &ClassicalGate::Difference, &["n0", "n1"], "2m").unwrap();
        assert_eq!(m.labels(), &["2m".to_string()]);
        assert_eq!(m.probability(&[Value::int(1)]), 1.0);
        assert!(matches!(
            postprocess(&d, &ClassicalGate::Sum, &["q"], "s"),
            Err(Error::LabelMissing(_))
        ));
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let s = StateVector::basis(&HilbertSpec::qubits(1).unwrap(), 0).unwrap();
        let o = Observable::Custom {
            name: "s".into(),
            op: gates::s_gate(),
        };
        assert!(matches!(
            measure(&s, &MeasurementSpec::new(MeasurementKind::Observable(o), vec![0], "o")),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn conjugation_examples() {
        let x = conjugate_observable(&gates::hadamard(), &gates::pauli_z()).unwrap();
        assert!(x.max_abs_diff(&gates::pauli_x()).unwrap() < 1e-15);
        let id = Operator::identity(gates::pauli_z().spec());
        let z = conjugate_observable(&id, &gates::pauli_z()).unwrap();
        assert_eq!(z.max_abs_diff(&gates::pauli_z()).unwrap(), 0.0);
    }

    #[test]
    fn beamsplitter_conjugates_jz_to_jx() {
        let cut = 4;
        let bs = gates::rotation_modes([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2, cut, cut).unwrap();
        let subs = [Subsystem::mode(cut), Subsystem::mode(cut)];
        let two_jz = Observable::PhotonDifference.operator(&subs).unwrap();
        let conj = conjugate_observable(&bs, &two_jz).unwrap();
        let spec = HilbertSpec::new(subs.to_vec()).unwrap();
        let two_jx = crate::schwinger::j_operator(crate::schwinger::Axis::X, &crate::schwinger::JRep::Modes(spec))
            .unwrap()
            .scale(c(2.0));
        // e^{iJyπ/2} Jz e^{−iJyπ/2} = −Jx; compare on complete sectors
        let idx: Vec<usize> = (0..25).filter(|&i| i / 5 + i % 5 <= cut).collect();
        let diff = conj.submatrix(&idx) + two_jx.submatrix(&idx);
        assert!(diff.map(|z| z.norm()).max() < 1e-12);
    }

    #[test]
    fn permutation_examples() {
        let t = permute_outcomes(&gates::pauli_x(), &gates::pauli_z()).unwrap();
        assert_eq!(t.apply(Value::PLUS), Some(Value::MINUS));
        assert_eq!(t.apply(Value::MINUS), Some(Value::PLUS));
        let (n, cut) = (3, 5);
        let xn = Observable::SubspaceX(n).operator(&[Subsystem::mode(cut)]).unwrap();
        let zn = gates::subspace_gate(SubspaceKind::Z, n, cut).unwrap();
        let t = permute_outcomes(&zn, &xn).unwrap();
        assert_eq!(t.apply(Value::PLUS), Some(Value::MINUS));
        assert_eq!(t.apply(Value::int(0)), Some(Value::int(0)));
        let id = Operator::identity(xn.spec());
        assert!(permute_outcomes(&id, &xn).unwrap().is_identity());
        // a Hadamard does not permute Z eigenspaces
        assert!(permute_outcomes(&gates::hadamard(), &gates::pauli_z()).is_err());
    }

    #[test]
    fn xn_measurement_examples() {
        let (n, cut) = (3, 4);
        let h = c(FRAC_1_SQRT_2);
        let plus = mode_state(cut, &[(0, h), (n, h)]);
        assert!((measure_xn(&plus, n, 0).unwrap().probability(&[Value::PLUS]) - 1.0).abs() < 1e-15);
        let vac = mode_state(cut, &[(0, c(1.0))]);
        let d = measure_xn(&vac, n, 0).unwrap();
        assert!((d.probability(&[Value::PLUS]) - 0.5).abs() < 1e-15);
        let minus = mode_state(cut, &[(0, h), (n, -h)]);
        assert!((measure_xn(&minus, n, 0).unwrap().probability(&[Value::MINUS]) - 1.0).abs() < 1e-15);
        let bad = mode_state(cut, &[(1, c(1.0))]);
        assert!(matches!(measure_xn(&bad, n, 0), Err(Error::OutsideSubspace(_))));
    }

    #[test]
    fn swap_measurement_examples() {
        let n = 2;
        let spec = HilbertSpec::modes(&[n, n]).unwrap();
        let h = c(FRAC_1_SQRT_2);
        let noon = |sign: f64| {
            let mut v = StateVector::zero(&spec).into_amplitudes();
            v[spec.index_of(&[n, 0]).unwrap()] = h;
            v[spec.index_of(&[0, n]).unwrap()] = h * sign;
            StateVector::new(spec.clone(), v).unwrap()
        };
        let d = measure_modal_swap(&noon(1.0), [0, 1]).unwrap();
        assert!((d.probability(&[Value::PLUS]) - 1.0).abs() < 1e-14);
        let d = measure_modal_swap(&noon(-1.0), [0, 1]).unwrap();
        assert!((d.probability(&[Value::MINUS]) - 1.0).abs() < 1e-14);
        let d = measure_modal_swap(&StateVector::basis(&spec, 0).unwrap(), [0, 1]).unwrap();
        assert_eq!(d.probability(&[Value::PLUS]), 1.0);
    }
}
