//! Gate constructors and the [`GateSpec`] description used by circuits.

mod truncation;

pub use truncation::{displacement_margin, poisson_tail, policy_cutoff};

use crate::config::TAIL_TOL;
use crate::error::{Error, Result};
use crate::hilbert::{Block, HilbertSpec, Operator, Subsystem, WireKind};
use crate::schwinger::{sector_generator, sectors};
use crate::C64;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::FRAC_1_SQRT_2;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Angle linear in the circuit phase: `offset + scale·φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    pub offset: f64,
    pub scale: f64,
}

impl Angle {
    pub const fn constant(x: f64) -> Self {
        Self { offset: x, scale: 0.0 }
    }

    /// The circuit phase φ itself.
    pub const fn phi() -> Self {
        Self {
            offset: 0.0,
            scale: 1.0,
        }
    }

    pub const fn linear(offset: f64, scale: f64) -> Self {
        Self { offset, scale }
    }

    pub fn eval(&self, phi: f64) -> f64 {
        if self.scale == 0.0 {
            self.offset
        } else {
            self.offset + self.scale * phi
        }
    }

    pub fn depends_on_phi(&self) -> bool {
        self.scale != 0.0
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::constant(x)
    }
}

/// Gates acting on the two-level subspace `span{|0⟩, |N⟩}` of a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubspaceKind {
    X,
    Z,
    H,
    P,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateSpec {
    /// `e^{−i n̂·σ θ/2}` on a qubit or `e^{−i n̂·J θ}` on two modes.
    Rotation {
        axis: [f64; 3],
        theta: Angle,
    },
    /// Rotation by π/2 about `(cos φ_bs, sin φ_bs, 0)` on two modes.
    Beamsplitter(Angle),
    /// `e^{−i a†a φ}` on one mode.
    PhaseShift(Angle),
    /// `diag(1, e^{iθ})` on a qubit.
    QubitPhase(Angle),
    Displacement(C64),
    Parity,
    SelfKerr(Angle),
    CrossKerr(Angle),
    Subspace(SubspaceKind, usize),
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    SGate,
    ModalSwap,
    /// Acts as `inner` on the remaining wires when the first wire is at
    /// `level` (a qubit value, or a Fock level for a mode control).
    Controlled {
        inner: Box<GateSpec>,
        level: usize,
    },
    /// Fixed matrix on wires matching its spec.
    Custom {
        name: String,
        op: Operator,
    },
}

impl GateSpec {
    pub fn controlled(inner: GateSpec, level: usize) -> Self {
        GateSpec::Controlled {
            inner: Box::new(inner),
            level,
        }
    }

    pub fn rotation(axis: [f64; 3], theta: impl Into<Angle>) -> Self {
        GateSpec::Rotation {
            axis,
            theta: theta.into(),
        }
    }

    pub fn depends_on_phi(&self) -> bool {
        match self {
            GateSpec::Rotation { theta: a, .. }
            | GateSpec::Beamsplitter(a)
            | GateSpec::PhaseShift(a)
            | GateSpec::QubitPhase(a)
            | GateSpec::SelfKerr(a)
            | GateSpec::CrossKerr(a) => a.depends_on_phi(),
            GateSpec::Controlled { inner, .. } => inner.depends_on_phi(),
            _ => false,
        }
    }

    /// Short name used in diagnostics.
    pub fn name(&self) -> String {
        match self {
            GateSpec::Rotation { .. } => "rot".into(),
            GateSpec::Beamsplitter(_) => "bs".into(),
            GateSpec::PhaseShift(_) => "phase".into(),
            GateSpec::QubitPhase(_) => "p".into(),
            GateSpec::Displacement(_) => "disp".into(),
            GateSpec::Parity => "parity".into(),
            GateSpec::SelfKerr(_) => "kerr".into(),
            GateSpec::CrossKerr(_) => "xkerr".into(),
            GateSpec::Subspace(k, _) => match k {
                SubspaceKind::X => "xn".into(),
                SubspaceKind::Z => "zn".into(),
                SubspaceKind::H => "hn".into(),
                SubspaceKind::P => "pn".into(),
            },
            GateSpec::PauliX => "x".into(),
            GateSpec::PauliY => "y".into(),
            GateSpec::PauliZ => "z".into(),
            GateSpec::Hadamard => "h".into(),
            GateSpec::SGate => "s".into(),
            GateSpec::ModalSwap => "swap".into(),
            GateSpec::Controlled { inner, .. } => format!("controlled {}", inner.name()),
            GateSpec::Custom { name, .. } => name.clone(),
        }
    }

    /// Wire kinds accepted by the gate, without dimensions. Rotations accept
    /// either one qubit or two modes; the first alternative is returned and
    /// [`GateSpec::check_wires`] handles the other.
    pub fn arity(&self) -> usize {
        match self {
            GateSpec::Rotation { .. } => 1,
            GateSpec::Beamsplitter(_) | GateSpec::CrossKerr(_) | GateSpec::ModalSwap => 2,
            GateSpec::Controlled { inner, .. } => 1 + inner.arity(),
            GateSpec::Custom { op, .. } => op.spec().len(),
            _ => 1,
        }
    }

    /// Validate the target subsystems.
    pub fn check_wires(&self, wires: &[Subsystem]) -> Result<()> {
        let kinds: Vec<WireKind> = wires.iter().map(|s| s.kind()).collect();
        let want = |expected: &[WireKind]| -> Result<()> {
            if kinds.len() != expected.len() {
                return Err(Error::MalformedCircuit(format!(
                    "`{}` takes {} wire(s), found {}",
                    self.name(),
                    expected.len(),
                    kinds.len()
                )));
            }
            for (k, e) in kinds.iter().zip(expected) {
                if k != e {
                    return Err(Error::WireKindMismatch(format!(
                        "`{}` expects a {e} wire, found a {k} wire",
                        self.name()
                    )));
                }
            }
            Ok(())
        };
        use WireKind::{Mode, Qubit};
        match self {
            GateSpec::Rotation { .. } => {
                if kinds.len() == 2 {
                    want(&[Mode, Mode])
                } else {
                    want(&[Qubit])
                }
            }
            GateSpec::Beamsplitter(_) | GateSpec::CrossKerr(_) => want(&[Mode, Mode]),
            GateSpec::ModalSwap => {
                want(&[Mode, Mode])?;
                if wires[0].dim() != wires[1].dim() {
                    return Err(Error::UnequalCutoffs(wires[0].cutoff(), wires[1].cutoff()));
                }
                Ok(())
            }
            GateSpec::PhaseShift(_) | GateSpec::Displacement(_) | GateSpec::Parity | GateSpec::SelfKerr(_) => {
                want(&[Mode])
            }
            GateSpec::Subspace(_, n) => {
                want(&[Mode])?;
                if *n == 0 || *n > wires[0].cutoff() {
                    return Err(Error::ExceedsCutoff {
                        level: *n,
                        cutoff: wires[0].cutoff(),
                    });
                }
                Ok(())
            }
            GateSpec::QubitPhase(_)
            | GateSpec::PauliX
            | GateSpec::PauliY
            | GateSpec::PauliZ
            | GateSpec::Hadamard
            | GateSpec::SGate => want(&[Qubit]),
            GateSpec::Controlled { inner, level } => {
                let Some((ctrl, rest)) = wires.split_first() else {
                    return Err(Error::MalformedCircuit("controlled gate without wires".into()));
                };
                if *level >= ctrl.dim() {
                    return Err(Error::ExceedsCutoff {
                        level: *level,
                        cutoff: ctrl.cutoff(),
                    });
                }
                inner.check_wires(rest)
            }
            GateSpec::Custom { op, .. } => {
                if op.spec().subsystems() != wires {
                    return Err(Error::WireKindMismatch(format!(
                        "`{}` acts on {}, wires are {:?}",
                        self.name(),
                        op.spec(),
                        wires
                    )));
                }
                Ok(())
            }
        }
    }

    /// The operator on `wires` at phase `phi`.
    pub fn operator(&self, wires: &[Subsystem], phi: f64) -> Result<Operator> {
        self.check_wires(wires)?;
        let cutoff = |k: usize| wires[k].cutoff();
        match self {
            GateSpec::Rotation { axis, theta } => {
                if wires.len() == 2 {
                    rotation_modes(*axis, theta.eval(phi), cutoff(0), cutoff(1))
                } else {
                    rotation_qubit(*axis, theta.eval(phi))
                }
            }
            GateSpec::Beamsplitter(a) => beamsplitter(a.eval(phi), cutoff(0), cutoff(1)),
            GateSpec::PhaseShift(a) => phase_shifter(a.eval(phi), cutoff(0)),
            GateSpec::QubitPhase(a) => Ok(qubit_phase(a.eval(phi))),
            GateSpec::Displacement(alpha) => displacement(*alpha, cutoff(0)),
            GateSpec::Parity => parity(cutoff(0)),
            GateSpec::SelfKerr(a) => self_kerr(a.eval(phi), cutoff(0)),
            GateSpec::CrossKerr(a) => cross_kerr(a.eval(phi), cutoff(0), cutoff(1)),
            GateSpec::Subspace(kind, n) => subspace_gate(*kind, *n, cutoff(0)),
            GateSpec::PauliX => Ok(pauli_x()),
            GateSpec::PauliY => Ok(pauli_y()),
            GateSpec::PauliZ => Ok(pauli_z()),
            GateSpec::Hadamard => Ok(hadamard()),
            GateSpec::SGate => Ok(s_gate()),
            GateSpec::ModalSwap => modal_swap(cutoff(0), cutoff(1)),
            GateSpec::Controlled { inner, level } => {
                let op = inner.operator(&wires[1..], phi)?;
                controlled(&op, wires[0], *level)
            }
            GateSpec::Custom { op, .. } => Ok(op.clone()),
        }
    }
}

fn qubit_spec() -> HilbertSpec {
    HilbertSpec::qubits(1).expect("one qubit fits any limit")
}

fn mode_spec(cutoff: usize) -> Result<HilbertSpec> {
    HilbertSpec::new(vec![Subsystem::mode(cutoff)])
}

fn two_mode_spec(c0: usize, c1: usize) -> Result<HilbertSpec> {
    HilbertSpec::new(vec![Subsystem::mode(c0), Subsystem::mode(c1)])
}

fn qubit(m: [C64; 4]) -> Operator {
    Operator::dense(&qubit_spec(), DMatrix::from_row_slice(2, 2, &m)).expect("2x2 on a qubit")
}

pub fn pauli_x() -> Operator {
    qubit([ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> Operator {
    qubit([ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> Operator {
    Operator::diagonal(&qubit_spec(), vec![ONE, -ONE]).expect("qubit diagonal")
}

pub fn hadamard() -> Operator {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    qubit([h, h, h, -h])
}

pub fn s_gate() -> Operator {
    qubit_phase(std::f64::consts::FRAC_PI_2)
}

/// `diag(1, e^{iθ})`.
pub fn qubit_phase(theta: f64) -> Operator {
    Operator::diagonal(&qubit_spec(), vec![ONE, C64::from_polar(1.0, theta)]).expect("qubit diagonal")
}

fn check_axis(axis: [f64; 3]) -> Result<()> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(())
}

/// The 2×2 matrix `M = cos(θ/2) I − i sin(θ/2) n̂·σ`.
pub fn rotation_matrix(axis: [f64; 3], theta: f64) -> Result<DMatrix<C64>> {
    check_axis(axis)?;
    let [nx, ny, nz] = axis;
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c, -s * nz),
            C64::new(-s * ny, -s * nx),
            C64::new(s * ny, -s * nx),
            C64::new(c, s * nz),
        ],
    ))
}

pub fn rotation_qubit(axis: [f64; 3], theta: f64) -> Result<Operator> {
    Operator::dense(&qubit_spec(), rotation_matrix(axis, theta)?)
}

/// `e^{−iθH}` for a Hermitian `H`, by eigendecomposition.
pub(crate) fn exp_hermitian(h: DMatrix<C64>, theta: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -theta * l)));
    &v * phases * v.adjoint()
}

/// `e^{−i n̂·J θ}` on two truncated modes, one block per photon-number sector.
pub fn rotation_modes(axis: [f64; 3], theta: f64, c0: usize, c1: usize) -> Result<Operator> {
    check_axis(axis)?;
    let spec = two_mode_spec(c0, c1)?;
    if axis[0] == 0.0 && axis[1] == 0.0 {
        let nz = axis[2];
        let diag = (0..spec.total_dim())
            .map(|i| {
                let (n0, n1) = ((i / (c1 + 1)) as f64, (i % (c1 + 1)) as f64);
                C64::from_polar(1.0, -theta * nz * (n0 - n1) / 2.0)
            })
            .collect();
        return Operator::diagonal(&spec, diag);
    }
    let blocks = sectors(c0, c1)
        .into_iter()
        .map(|s| Block {
            matrix: exp_hermitian(sector_generator(&s, axis), theta),
            indices: s.indices,
        })
        .collect();
    Operator::from_blocks(&spec, blocks, None)
}

/// 50/50 beamsplitter about the equatorial axis at angle `phi_bs`.
pub fn beamsplitter(phi_bs: f64, c0: usize, c1: usize) -> Result<Operator> {
    let (s, c) = phi_bs.sin_cos();
    rotation_modes([c, s, 0.0], std::f64::consts::FRAC_PI_2, c0, c1)
}

fn mode_diagonal(cutoff: usize, f: impl Fn(usize) -> C64) -> Result<Operator> {
    Operator::diagonal(&mode_spec(cutoff)?, (0..=cutoff).map(f).collect())
}

/// `e^{−i a†a φ}`.
pub fn phase_shifter(phi: f64, cutoff: usize) -> Result<Operator> {
    mode_diagonal(cutoff, |n| C64::from_polar(1.0, -(n as f64) * phi))
}

/// `(−1)^{a†a}`.
pub fn parity(cutoff: usize) -> Result<Operator> {
    mode_diagonal(cutoff, |n| if n % 2 == 0 { ONE } else { -ONE })
}

/// `e^{−iθ n²}`.
pub fn self_kerr(theta: f64, cutoff: usize) -> Result<Operator> {
    mode_diagonal(cutoff, |n| {
        let n2 = (n * n) as f64;
        C64::from_polar(1.0, -theta * n2)
    })
}

/// `e^{−iθ n₀n₁}`.
pub fn cross_kerr(theta: f64, c0: usize, c1: usize) -> Result<Operator> {
    let spec = two_mode_spec(c0, c1)?;
    let diag = (0..spec.total_dim())
        .map(|i| {
            let prod = ((i / (c1 + 1)) * (i % (c1 + 1))) as f64;
            C64::from_polar(1.0, -theta * prod)
        })
        .collect();
    Operator::diagonal(&spec, diag)
}

/// `D(α) = exp(α a† − α* a)` on the truncated space.
///
/// The truncated generator is exponentiated exactly, so the result is
/// unitary on the truncated space; it agrees with the infinite-dimensional
/// displacement only on levels well below the cutoff (see
/// [`displacement_margin`]).
pub fn displacement(alpha: C64, cutoff: usize) -> Result<Operator> {
    let spec = mode_spec(cutoff)?;
    if alpha == ZERO {
        return Ok(Operator::identity(&spec));
    }
    let tail = poisson_tail(alpha.norm_sqr(), cutoff);
    if tail >= TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            amplitude: alpha.norm(),
            tail,
        });
    }
    // K = i(α a† − α* a) is Hermitian and D = e^{−iK}.
    let d = cutoff + 1;
    let mut k = DMatrix::zeros(d, d);
    for n in 0..cutoff {
        let v = I * alpha * ((n + 1) as f64).sqrt();
        k[(n + 1, n)] = v;
        k[(n, n + 1)] = v.conj();
    }
    Operator::dense(&spec, exp_hermitian(k, 1.0))
}

/// Two-level gate on `span{|0⟩, |N⟩}`, identity on every other level.
pub fn subspace_gate(kind: SubspaceKind, n: usize, cutoff: usize) -> Result<Operator> {
    if n == 0 || n > cutoff {
        return Err(Error::ExceedsCutoff { level: n, cutoff });
    }
    let spec = mode_spec(cutoff)?;
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let m = match kind {
        SubspaceKind::X => [ZERO, ONE, ONE, ZERO],
        SubspaceKind::Z | SubspaceKind::P => [ONE, ZERO, ZERO, -ONE],
        SubspaceKind::H => [h, h, h, -h],
    };
    Operator::from_blocks(
        &spec,
        vec![Block {
            indices: vec![0, n],
            matrix: DMatrix::from_row_slice(2, 2, &m),
        }],
        None,
    )
}

/// `|level⟩⟨level| ⊗ inner + (I − |level⟩⟨level|) ⊗ I`, control first.
pub fn controlled(inner: &Operator, control: Subsystem, level: usize) -> Result<Operator> {
    inner.controlled_by(control, level)
}

/// `|n₀, n₁⟩ ↦ |n₁, n₀⟩`; cutoffs must be equal.
pub fn modal_swap(c0: usize, c1: usize) -> Result<Operator> {
    if c0 != c1 {
        return Err(Error::UnequalCutoffs(c0, c1));
    }
    let spec = two_mode_spec(c0, c1)?;
    let d = c0 + 1;
    let swap = DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let blocks = (0..d)
        .flat_map(|a| ((a + 1)..d).map(move |b| (a, b)))
        .map(|(a, b)| Block {
            indices: vec![a * d + b, b * d + a],
            matrix: swap.clone(),
        })
        .collect();
    Operator::from_blocks(&spec, blocks, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::StateVector;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
        (a - b).map(|z| z.norm()).max() <= tol
    }

    #[test]
    fn rotation_matrix_examples() {
        let h = FRAC_1_SQRT_2;
        let x = [1.0, 0.0, 0.0];
        assert!(close(&rotation_matrix(x, 0.0).unwrap(), &DMatrix::identity(2, 2), 0.0));
        let bs = DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, -h), c(0.0, -h), c(h, 0.0)]);
        assert!(close(&rotation_matrix(x, FRAC_PI_2).unwrap(), &bs, 1e-15));
        let flip = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        assert!(close(&rotation_matrix(x, PI).unwrap(), &flip, 1e-15));
        assert!(matches!(
            rotation_qubit([1.0, 1.0, 0.0], 1.0),
            Err(Error::NonUnitAxis(_))
        ));
    }

    #[test]
    fn y_quarter_turn_identities() {
        let r = rotation_qubit([0.0, 1.0, 0.0], FRAC_PI_2).unwrap();
        let hz = hadamard().mul(&pauli_z()).unwrap();
        let xh = pauli_x().mul(&hadamard()).unwrap();
        assert!(r.max_abs_diff(&hz).unwrap() < 1e-15);
        assert!(r.max_abs_diff(&xh).unwrap() < 1e-15);
    }

    #[test]
    fn beamsplitter_on_single_photon() {
        let u = rotation_modes([1.0, 0.0, 0.0], FRAC_PI_2, 2, 2).unwrap();
        let spec = u.spec().clone();
        let out = StateVector::from_levels(&spec, &[1, 0])
            .unwrap()
            .apply(&u, &[0, 1])
            .unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[3] - c(h, 0.0)).norm() < 1e-14);
        assert!((out.amplitudes()[1] - c(0.0, -h)).norm() < 1e-14);
    }

    #[test]
    fn beamsplitter_binomial_output() {
        let n = 6;
        let u = rotation_modes([1.0, 0.0, 0.0], FRAC_PI_2, n, n).unwrap();
        let out = StateVector::from_levels(u.spec(), &[n, 0])
            .unwrap()
            .apply(&u, &[0, 1])
            .unwrap();
        for k in 0..=n {
            let p = out.amplitudes()[(n - k) * (n + 1) + k].norm_sqr();
            let want = crate::schwinger::binomial(n, k) / 2f64.powi(n as i32);
            assert!((p - want).abs() < 1e-13);
        }
    }

    #[test]
    fn jz_phase_splits_into_shifters() {
        let phi = 0.73;
        let jz = rotation_modes([0.0, 0.0, 1.0], phi, 4, 3).unwrap();
        let split = phase_shifter(phi / 2.0, 4)
            .unwrap()
            .tensor(&phase_shifter(-phi / 2.0, 3).unwrap())
            .unwrap();
        assert!(jz.max_abs_diff(&split).unwrap() < 1e-15);
    }

    #[test]
    fn phase_shifter_on_fock() {
        let p = phase_shifter(0.4, 5).unwrap();
        assert!((p.entry(3, 3) - C64::from_polar(1.0, -1.2)).norm() < 1e-15);
        assert!(
            phase_shifter(0.0, 5)
                .unwrap()
                .max_abs_diff(&Operator::identity(p.spec()))
                .unwrap()
                == 0.0
        );
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        for alpha in [c(1.0, 0.0), c(0.6, -1.1), c(2.0, 1.0)] {
            let cut = policy_cutoff(alpha.norm());
            let d = displacement(alpha, cut).unwrap();
            let v = StateVector::basis(d.spec(), 0).unwrap().apply(&d, &[0]).unwrap();
            let want = StateVector::coherent(alpha, cut).unwrap();
            assert!(v.max_abs_diff(&want).unwrap() < 1e-9);
        }
        assert!(displacement(c(0.0, 0.0), 4).unwrap().is_diagonal());
        assert!(matches!(
            displacement(c(3.0, 0.0), 10),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn displacement_composition_on_guarded_levels() {
        let (a, b) = (c(0.7, 0.2), c(-0.3, 0.9));
        let cut = policy_cutoff(a.norm() + b.norm()) + 10;
        let ab = displacement(a, cut)
            .unwrap()
            .mul(&displacement(b, cut).unwrap())
            .unwrap();
        let phase = C64::from_polar(1.0, (a * b.conj()).im);
        let sum = displacement(a + b, cut).unwrap().scale(phase);
        let keep = cut + 1 - displacement_margin(a.norm() + b.norm()) - 16;
        let idx: Vec<usize> = (0..keep).collect();
        let dev = (ab.submatrix(&idx) - sum.submatrix(&idx)).map(|z| z.norm()).max();
        assert!(dev < 1e-9, "deviation {dev}");
    }

    #[test]
    fn kerr_and_parity() {
        let p = parity(5).unwrap();
        assert_eq!(p.entry(3, 3), c(-1.0, 0.0));
        assert!(p.mul(&p).unwrap().max_abs_diff(&Operator::identity(p.spec())).unwrap() == 0.0);
        let k = cross_kerr(0.3, 3, 3).unwrap();
        assert!((k.entry(11, 11) - C64::from_polar(1.0, -0.3 * 6.0)).norm() < 1e-15);
        let id = Operator::identity(&mode_spec(3).unwrap());
        assert!(self_kerr(0.0, 3).unwrap().max_abs_diff(&id).unwrap() == 0.0);
    }

    #[test]
    fn yurke_stoler_cat() {
        let alpha = c(1.3, 0.4);
        let cut = 40;
        let plus = StateVector::coherent(alpha, cut).unwrap();
        let minus = StateVector::coherent(-alpha, cut).unwrap();
        let out = plus.apply(&self_kerr(FRAC_PI_2, cut).unwrap(), &[0]).unwrap();
        let want = plus
            .add(&minus.scaled(I))
            .unwrap()
            .scaled(C64::from_polar(FRAC_1_SQRT_2, -PI / 4.0));
        assert!(1.0 - out.fidelity(&want).unwrap() < 1e-12);
        assert!(out.max_abs_diff(&want).unwrap() < 1e-14);
    }

    #[test]
    fn subspace_gates() {
        let n = 3;
        let spec = mode_spec(5).unwrap();
        let xn = subspace_gate(SubspaceKind::X, n, 5).unwrap();
        let k0 = StateVector::basis(&spec, 0).unwrap();
        assert_eq!(k0.apply(&xn, &[0]).unwrap(), StateVector::basis(&spec, 3).unwrap());
        for k in [1, 2, 4] {
            let s = StateVector::basis(&spec, k).unwrap();
            assert_eq!(s.apply(&xn, &[0]).unwrap(), s);
        }
        let hn = subspace_gate(SubspaceKind::H, n, 5).unwrap();
        let plus = k0
            .add(&StateVector::basis(&spec, 3).unwrap())
            .unwrap()
            .scaled(c(FRAC_1_SQRT_2, 0.0));
        assert!(plus.apply(&hn, &[0]).unwrap().max_abs_diff(&k0).unwrap() < 1e-15);
        assert!(subspace_gate(SubspaceKind::Z, 6, 5).is_err());
    }

    #[test]
    fn modal_swap_matches_rotated_flip() {
        let c0 = 3;
        let sw = modal_swap(c0, c0).unwrap();
        let spec = sw.spec().clone();
        let s = StateVector::from_levels(&spec, &[1, 0])
            .unwrap()
            .apply(&sw, &[0, 1])
            .unwrap();
        assert_eq!(s, StateVector::from_levels(&spec, &[0, 1]).unwrap());
        let s = StateVector::from_levels(&spec, &[2, 2]).unwrap();
        assert_eq!(s.apply(&sw, &[0, 1]).unwrap(), s);
        let flip = rotation_modes([1.0, 0.0, 0.0], PI, c0, c0).unwrap();
        for sec in sectors(c0, c0).into_iter().filter(|s| s.n <= c0) {
            let phase = I.powu(sec.n as u32);
            assert!(close(
                &(flip.submatrix(&sec.indices) * phase),
                &sw.submatrix(&sec.indices),
                1e-12
            ));
        }
        assert!(matches!(modal_swap(2, 3), Err(Error::UnequalCutoffs(2, 3))));
    }

    #[test]
    fn full_turn_is_double_parity() {
        let c0 = 4;
        let axis = [0.48, -0.6, 0.64];
        let r = rotation_modes(axis, 2.0 * PI, c0, c0).unwrap();
        let pp = parity(c0).unwrap().tensor(&parity(c0).unwrap()).unwrap();
        for sec in sectors(c0, c0).into_iter().filter(|s| s.n <= c0) {
            assert!(close(&r.submatrix(&sec.indices), &pp.submatrix(&sec.indices), 1e-12));
        }
    }

    #[test]
    fn coherent_inputs_follow_m() {
        let (a, b) = (c(0.8, 0.3), c(-0.4, 0.5));
        let axis = [0.6, 0.0, 0.8];
        let theta = 1.1;
        let cut = 30;
        let u = rotation_modes(axis, theta, cut, cut).unwrap();
        let input = StateVector::coherent(a, cut)
            .unwrap()
            .tensor(&StateVector::coherent(b, cut).unwrap())
            .unwrap();
        let m = rotation_matrix(axis, theta).unwrap();
        let a2 = m[(0, 0)] * a + m[(0, 1)] * b;
        let b2 = m[(1, 0)] * a + m[(1, 1)] * b;
        let want = StateVector::coherent(a2, cut)
            .unwrap()
            .tensor(&StateVector::coherent(b2, cut).unwrap())
            .unwrap();
        let out = input.apply(&u, &[0, 1]).unwrap();
        assert!(out.fidelity(&want).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn constructors_are_unitary() {
        let ops = [
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            s_gate(),
            rotation_qubit([0.0, 0.6, 0.8], 0.9).unwrap(),
            rotation_modes([0.36, 0.48, 0.8], 2.3, 5, 4).unwrap(),
            beamsplitter(0.3, 4, 4).unwrap(),
            phase_shifter(1.3, 6).unwrap(),
            self_kerr(0.7, 6).unwrap(),
            cross_kerr(0.7, 3, 4).unwrap(),
            subspace_gate(SubspaceKind::H, 2, 4).unwrap(),
            modal_swap(3, 3).unwrap(),
            controlled(&displacement(c(0.5, 0.5), 20).unwrap(), Subsystem::qubit(), 1).unwrap(),
        ];
        for op in &ops {
            assert!(op.is_unitary(), "{:?}", op.spec());
        }
        let d = displacement(c(2.0, 0.0), 40).unwrap();
        assert!(d.unitarity_deviation() < 1e-10);
    }
}
