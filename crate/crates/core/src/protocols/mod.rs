//! Constructors for the phase-estimation protocols and the harness that
//! turns their simulations into fringes, sensitivities and scaling laws.

mod harness;
mod reference;

pub use harness::{
    circuit_sweep, compare_protocols, conditional_fringes, fit_power_law, fringe_sweep, fringe_sweep_with,
    prepared_state, prepared_state_of, scaling_fit, sensitivity, sensitivity_of, ConditionalPoint, ConditionalReport,
    FringePoint, PreparedBranch, PreparedState, ProtocolReport, ScalingFit, ScalingPoint, Sensitivity,
};

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{policy_cutoff, Angle, GateSpec, SubspaceKind};
use crate::measurement::{ClassicalGate, MeasurementKind, Value};
use crate::C64;

const Y_AXIS: [f64; 3] = [0.0, 1.0, 0.0];
const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

/// Every protocol, parameterized by a particle number `N` or a real
/// coherent amplitude `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProtocolId {
    ConventionalQubit(usize),
    ConventionalModal(usize),
    ConventionalCoherent(f64),
    FockSingleMode(usize),
    FockSingleModeQubit(usize),
    Noon(usize),
    NoonQubit(usize),
    CatState(usize),
    FockPostselected(usize),
    FockCoherentPrep(usize),
    NoonPostselected(usize),
    NoonCoherentPrep(usize),
    CoherentSingleModeQubit(f64),
    ModalCatPostselected(f64),
    ModalCatCoherent(f64),
    CoherentTwoModeQubit(f64),
    ObboPostselected(f64),
    ObboCoherent(f64),
    ObboKerrPrep(f64),
    ObboKerrPrepQubits(usize),
}

/// Whether a protocol is parameterized by `N` or by `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Fock,
    Coherent,
}

/// Optional variations of a protocol circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BuildOptions {
    /// Insert `e^{iθ/2}e^{−iZθ/2}` on the qubit between the two controls
    /// (qubit-assisted Fock protocols and the cat-state interferometer).
    pub fringe_shift: Option<f64>,
    /// Use a controlled parity in place of controlled `P_N` (valid for odd N).
    pub parity_for_pn: bool,
}

const NAMES: [&str; 20] = [
    "conventional-qubit",
    "conventional-modal",
    "conventional-coherent",
    "fock-single-mode",
    "fock-single-mode-qubit",
    "noon",
    "noon-qubit",
    "cat-state",
    "fock-postselected",
    "fock-coherent-prep",
    "noon-postselected",
    "noon-coherent-prep",
    "coherent-single-mode-qubit",
    "modal-cat-postselected",
    "modal-cat-coherent",
    "coherent-two-mode-qubit",
    "obbo-postselected",
    "obbo-coherent",
    "obbo-kerr-prep",
    "obbo-kerr-prep-qubits",
];

impl ProtocolId {
    pub fn names() -> &'static [&'static str] {
        &NAMES
    }

    /// Command-line name (kebab case).
    pub fn name(&self) -> &'static str {
        use ProtocolId::*;
        let i = match self {
            ConventionalQubit(_) => 0,
            ConventionalModal(_) => 1,
            ConventionalCoherent(_) => 2,
            FockSingleMode(_) => 3,
            FockSingleModeQubit(_) => 4,
            Noon(_) => 5,
            NoonQubit(_) => 6,
            CatState(_) => 7,
            FockPostselected(_) => 8,
            FockCoherentPrep(_) => 9,
            NoonPostselected(_) => 10,
            NoonCoherentPrep(_) => 11,
            CoherentSingleModeQubit(_) => 12,
            ModalCatPostselected(_) => 13,
            ModalCatCoherent(_) => 14,
            CoherentTwoModeQubit(_) => 15,
            ObboPostselected(_) => 16,
            ObboCoherent(_) => 17,
            ObboKerrPrep(_) => 18,
            ObboKerrPrepQubits(_) => 19,
        };
        NAMES[i]
    }

    /// Build an identifier from its name and the parameter it needs.
    pub fn from_name(name: &str, n: Option<usize>, alpha: Option<f64>) -> Result<Self> {
        use ProtocolId::*;
        let idx = NAMES
            .iter()
            .position(|&s| s == name)
            .ok_or_else(|| Error::OutOfRange(format!("unknown protocol `{name}`")))?;
        let template = [
            ConventionalQubit(1),
            ConventionalModal(1),
            ConventionalCoherent(1.0),
            FockSingleMode(1),
            FockSingleModeQubit(1),
            Noon(1),
            NoonQubit(1),
            CatState(1),
            FockPostselected(1),
            FockCoherentPrep(1),
            NoonPostselected(1),
            NoonCoherentPrep(1),
            CoherentSingleModeQubit(1.0),
            ModalCatPostselected(1.0),
            ModalCatCoherent(1.0),
            CoherentTwoModeQubit(1.0),
            ObboPostselected(1.0),
            ObboCoherent(1.0),
            ObboKerrPrep(1.0),
            ObboKerrPrepQubits(1),
        ][idx];
        let p = match template.family() {
            Family::Fock => n
                .map(|n| n as f64)
                .ok_or_else(|| Error::OutOfRange(format!("`{name}` needs a particle number N")))?,
            Family::Coherent => {
                alpha.ok_or_else(|| Error::OutOfRange(format!("`{name}` needs a coherent amplitude alpha")))?
            }
        };
        let id = template.with_param(p);
        id.check()?;
        Ok(id)
    }

    pub fn family(&self) -> Family {
        use ProtocolId::*;
        match self {
            ConventionalCoherent(_)
            | CoherentSingleModeQubit(_)
            | ModalCatPostselected(_)
            | ModalCatCoherent(_)
            | CoherentTwoModeQubit(_)
            | ObboPostselected(_)
            | ObboCoherent(_)
            | ObboKerrPrep(_) => Family::Coherent,
            _ => Family::Fock,
        }
    }

    /// `N` or `α` as a real number.
    pub fn param(&self) -> f64 {
        use ProtocolId::*;
        match *self {
            ConventionalQubit(n)
            | ConventionalModal(n)
            | FockSingleMode(n)
            | FockSingleModeQubit(n)
            | Noon(n)
            | NoonQubit(n)
            | CatState(n)
            | FockPostselected(n)
            | FockCoherentPrep(n)
            | NoonPostselected(n)
            | NoonCoherentPrep(n)
            | ObboKerrPrepQubits(n) => n as f64,
            ConventionalCoherent(a)
            | CoherentSingleModeQubit(a)
            | ModalCatPostselected(a)
            | ModalCatCoherent(a)
            | CoherentTwoModeQubit(a)
            | ObboPostselected(a)
            | ObboCoherent(a)
            | ObboKerrPrep(a) => a,
        }
    }

    /// Same protocol with a different parameter (rounded for Fock families).
    pub fn with_param(&self, p: f64) -> Self {
        use ProtocolId::*;
        let n = p.round().max(0.0) as usize;
        match self {
            ConventionalQubit(_) => ConventionalQubit(n),
            ConventionalModal(_) => ConventionalModal(n),
            ConventionalCoherent(_) => ConventionalCoherent(p),
            FockSingleMode(_) => FockSingleMode(n),
            FockSingleModeQubit(_) => FockSingleModeQubit(n),
            Noon(_) => Noon(n),
            NoonQubit(_) => NoonQubit(n),
            CatState(_) => CatState(n),
            FockPostselected(_) => FockPostselected(n),
            FockCoherentPrep(_) => FockCoherentPrep(n),
            NoonPostselected(_) => NoonPostselected(n),
            NoonCoherentPrep(_) => NoonCoherentPrep(n),
            CoherentSingleModeQubit(_) => CoherentSingleModeQubit(p),
            ModalCatPostselected(_) => ModalCatPostselected(p),
            ModalCatCoherent(_) => ModalCatCoherent(p),
            CoherentTwoModeQubit(_) => CoherentTwoModeQubit(p),
            ObboPostselected(_) => ObboPostselected(p),
            ObboCoherent(_) => ObboCoherent(p),
            ObboKerrPrep(_) => ObboKerrPrep(p),
            ObboKerrPrepQubits(_) => ObboKerrPrepQubits(n),
        }
    }

    /// Resource count used for scaling fits: `N`, or `|α|²`.
    pub fn resource(&self) -> f64 {
        match self.family() {
            Family::Fock => self.param(),
            Family::Coherent => self.param() * self.param(),
        }
    }

    fn check(&self) -> Result<()> {
        let p = self.param();
        let ok = match self.family() {
            Family::Fock => p >= 1.0,
            Family::Coherent => p.is_finite() && p > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "{} needs {}",
                self.name(),
                match self.family() {
                    Family::Fock => "N ≥ 1",
                    Family::Coherent => "α > 0",
                }
            )))
        }
    }

    pub fn is_conventional(&self) -> bool {
        matches!(
            self,
            ProtocolId::ConventionalQubit(_) | ProtocolId::ConventionalModal(_) | ProtocolId::ConventionalCoherent(_)
        )
    }

    /// Variants that post-select on a qubit outcome `y` and output `z = xy`.
    pub fn is_postselected(&self) -> bool {
        matches!(
            self,
            ProtocolId::FockPostselected(_)
                | ProtocolId::NoonPostselected(_)
                | ProtocolId::ModalCatPostselected(_)
                | ProtocolId::ObboPostselected(_)
        )
    }

    /// Final outcome wire: `2m` for conventional protocols, otherwise `z`.
    pub fn output_label(&self) -> &'static str {
        if self.is_conventional() {
            "2m"
        } else {
            "z"
        }
    }

    /// Factor turning the output value into the estimator signal
    /// (`m = (2m)/2` for conventional protocols).
    pub fn signal_scale(&self) -> f64 {
        if self.is_conventional() {
            0.5
        } else {
            1.0
        }
    }

    /// Default φ₀: fringe quadrature for Fock protocols, `π/2` for the
    /// conventional ones, and `0` for the S-shifted coherent protocols.
    pub fn operating_point(&self) -> f64 {
        if self.is_conventional() {
            return FRAC_PI_2;
        }
        match (self.family(), self) {
            (_, ProtocolId::ObboKerrPrepQubits(_)) | (Family::Coherent, _) => 0.0,
            (Family::Fock, _) => PI / (2.0 * self.param()),
        }
    }

    /// Amplitude that sets the mode cutoff under the truncation policy.
    pub fn cutoff_amplitude(&self) -> Option<f64> {
        use ProtocolId::*;
        match *self {
            CoherentSingleModeQubit(a) | ModalCatPostselected(a) | ModalCatCoherent(a) => Some(2.0 * a.abs()),
            ConventionalCoherent(a)
            | CoherentTwoModeQubit(a)
            | ObboPostselected(a)
            | ObboCoherent(a)
            | ObboKerrPrep(a) => Some(a.abs()),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Circuit> {
        self.build_with(&BuildOptions::default())
    }

    pub fn build_with(&self, opts: &BuildOptions) -> Result<Circuit> {
        use ProtocolId::*;
        self.check()?;
        if opts.fringe_shift.is_some() && !matches!(self, FockSingleModeQubit(_) | NoonQubit(_) | CatState(_)) {
            return Err(Error::Unsupported(format!("{} has no fringe-shift slot", self.name())));
        }
        if opts.parity_for_pn && !matches!(self, NoonCoherentPrep(n) if n % 2 == 1) {
            return Err(Error::Unsupported(
                "the parity form of P_N needs NoonCoherentPrep with odd N".into(),
            ));
        }
        let cut = self.cutoff_amplitude().map(policy_cutoff);
        let c = match *self {
            ConventionalQubit(n) => conventional_qubit(n),
            ConventionalModal(n) => conventional_modal(n, n, None),
            ConventionalCoherent(a) => conventional_modal(0, cut.unwrap(), Some(a)),
            FockSingleMode(n) => fock_single_mode(n),
            FockSingleModeQubit(n) => fock_single_mode_qubit(n, opts.fringe_shift),
            Noon(n) => noon(n),
            NoonQubit(n) => noon_qubit(n, opts.fringe_shift),
            CatState(n) => cat_state(n, opts.fringe_shift),
            FockPostselected(n) => fock_postselected(n),
            FockCoherentPrep(n) => fock_coherent_prep(n),
            NoonPostselected(n) => noon_postselected(n),
            NoonCoherentPrep(n) => noon_coherent_prep(n, opts.parity_for_pn),
            CoherentSingleModeQubit(a) => coherent_single_mode_qubit(a, cut.unwrap()),
            ModalCatPostselected(a) => modal_cat_postselected(a, cut.unwrap()),
            ModalCatCoherent(a) => modal_cat_coherent(a, cut.unwrap()),
            CoherentTwoModeQubit(a) => coherent_two_mode_qubit(a, cut.unwrap()),
            ObboPostselected(a) => obbo_postselected(a, cut.unwrap()),
            ObboCoherent(a) => obbo_coherent(a, cut.unwrap()),
            ObboKerrPrep(a) => obbo_kerr_prep(a, cut.unwrap()),
            ObboKerrPrepQubits(n) => obbo_kerr_prep_qubits(n),
        };
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            Family::Fock => write!(f, "{}(N={})", self.name(), self.param()),
            Family::Coherent => write!(f, "{}(alpha={})", self.name(), self.param()),
        }
    }
}

fn rot(axis: [f64; 3], theta: f64) -> GateSpec {
    GateSpec::rotation(axis, theta)
}

fn rot_phi() -> GateSpec {
    GateSpec::rotation(Z_AXIS, Angle::phi())
}

fn ctrl(g: GateSpec, level: usize) -> GateSpec {
    GateSpec::controlled(g, level)
}

fn disp(a: f64) -> GateSpec {
    GateSpec::Displacement(C64::new(a, 0.0))
}

fn sub(kind: SubspaceKind, n: usize) -> GateSpec {
    GateSpec::Subspace(kind, n)
}

fn bs(phi_bs: f64) -> GateSpec {
    GateSpec::Beamsplitter(Angle::constant(phi_bs))
}

fn phase_phi() -> GateSpec {
    GateSpec::PhaseShift(Angle::phi())
}

/// Count `mode` and take its parity.
fn parity_readout(c: &mut Circuit, mode: usize, count: &str, label: &str) -> usize {
    let n = c.measure(MeasurementKind::PhotonCount, &[mode], count);
    c.post(ClassicalGate::ParityOfCount, &[n], label)
}

/// Rotation about z by φ, a −π/2 beamsplitter and mode-1 parity: the SWAP
/// measurement on two modes.
fn swap_readout(c: &mut Circuit, m0: usize, m1: usize, label: &str) -> usize {
    c.gate(rot_phi(), &[m0, m1]);
    c.gate(bs(-FRAC_PI_2), &[m0, m1]);
    parity_readout(c, m1, "n", label)
}

fn conventional_qubit(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let qs: Vec<usize> = (1..=n).map(|j| c.qubit(&format!("q{j}"))).collect();
    for &q in &qs {
        c.gate(rot(Y_AXIS, FRAC_PI_2), &[q]);
        c.gate(rot_phi(), &[q]);
        c.gate(rot(Y_AXIS, -FRAC_PI_2), &[q]);
    }
    let zs: Vec<usize> = qs
        .iter()
        .enumerate()
        .map(|(j, &q)| c.measure(MeasurementKind::QubitZ, &[q], &format!("z{}", j + 1)))
        .collect();
    c.post(ClassicalGate::Sum, &zs, "2m");
    c
}

fn conventional_modal(n: usize, cutoff: usize, alpha: Option<f64>) -> Circuit {
    let mut c = Circuit::new();
    let m0 = c.mode_init("m0", cutoff, n);
    let m1 = c.mode("m1", cutoff);
    if let Some(a) = alpha {
        c.gate(disp(a), &[m0]);
    }
    c.gate(bs(FRAC_PI_2), &[m0, m1]);
    c.gate(rot_phi(), &[m0, m1]);
    c.gate(bs(-FRAC_PI_2), &[m0, m1]);
    let n0 = c.measure(MeasurementKind::PhotonCount, &[m0], "n0");
    let n1 = c.measure(MeasurementKind::PhotonCount, &[m1], "n1");
    c.post(ClassicalGate::Difference, &[n0, n1], "2m");
    c
}

fn fock_single_mode(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let m = c.mode("m", n);
    c.gate(sub(SubspaceKind::H, n), &[m]);
    c.gate(phase_phi(), &[m]);
    c.gate(sub(SubspaceKind::H, n), &[m]);
    let k = c.measure(MeasurementKind::PhotonCount, &[m], "n");
    c.post(ClassicalGate::MapCount(n), &[k], "z");
    c
}

fn fringe(c: &mut Circuit, q: usize, shift: Option<f64>) {
    if let Some(theta) = shift {
        c.gate(GateSpec::QubitPhase(Angle::constant(theta)), &[q]);
    }
}

fn fock_single_mode_qubit(n: usize, shift: Option<f64>) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 1), &[q, m]);
    fringe(&mut c, q, shift);
    c.gate(phase_phi(), &[m]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 1), &[q, m]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.measure(MeasurementKind::QubitZ, &[q], "z");
    c
}

fn noon(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let m0 = c.mode("m0", n);
    let m1 = c.mode("m1", n);
    c.gate(sub(SubspaceKind::H, n), &[m1]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 0), &[m1, m0]);
    c.gate(rot_phi(), &[m0, m1]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 0), &[m1, m0]);
    c.gate(sub(SubspaceKind::H, n), &[m1]);
    let k = c.measure(MeasurementKind::PhotonCount, &[m1], "n");
    c.post(ClassicalGate::MapCount(n), &[k], "z");
    c
}

fn noon_qubit(n: usize, shift: Option<f64>) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m0 = c.mode_init("m0", n, n);
    let m1 = c.mode("m1", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(rot(Y_AXIS, PI), 1), &[q, m0, m1]);
    fringe(&mut c, q, shift);
    c.gate(rot_phi(), &[m0, m1]);
    c.gate(ctrl(rot(Y_AXIS, -PI), 1), &[q, m0, m1]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.measure(MeasurementKind::QubitZ, &[q], "z");
    c
}

fn cat_state(n: usize, shift: Option<f64>) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("c");
    let ds: Vec<usize> = (1..=n).map(|j| c.qubit(&format!("d{j}"))).collect();
    let flip = |c: &mut Circuit| {
        for &d in &ds {
            c.gate(ctrl(GateSpec::PauliZ, 1), &[q, d]);
            c.gate(ctrl(GateSpec::PauliX, 1), &[q, d]);
        }
    };
    c.gate(GateSpec::Hadamard, &[q]);
    flip(&mut c);
    for &d in &ds {
        c.gate(rot_phi(), &[d]);
    }
    fringe(&mut c, q, shift);
    flip(&mut c);
    if n % 2 == 1 {
        c.gate(GateSpec::PauliZ, &[q]);
    }
    c.gate(GateSpec::Hadamard, &[q]);
    c.measure(MeasurementKind::QubitZ, &[q], "z");
    c
}

fn fock_postselected(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 1), &[q, m]);
    c.gate(GateSpec::Hadamard, &[q]);
    let y = c.measure(MeasurementKind::QubitZ, &[q], "y");
    c.gate(phase_phi(), &[m]);
    c.gate(sub(SubspaceKind::H, n), &[m]);
    let k = c.measure(MeasurementKind::PhotonCount, &[m], "n");
    c.post(ClassicalGate::MapCount(n), &[k], "x");
    let k2 = c.post(
        ClassicalGate::ControlledExchange { n, when: Value::MINUS },
        &[y, k],
        "n2",
    );
    c.post(ClassicalGate::MapCount(n), &[k2], "z");
    c
}

fn fock_coherent_prep(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(sub(SubspaceKind::X, n), 1), &[q, m]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(sub(SubspaceKind::Z, n), 1), &[q, m]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.discard(&[q]);
    c.gate(phase_phi(), &[m]);
    c.gate(sub(SubspaceKind::H, n), &[m]);
    let k = c.measure(MeasurementKind::PhotonCount, &[m], "n");
    c.post(ClassicalGate::MapCount(n), &[k], "z");
    c
}

fn noon_postselected(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m0 = c.mode_init("m0", n, n);
    let m1 = c.mode("m1", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(rot(Y_AXIS, PI), 1), &[q, m0, m1]);
    c.gate(GateSpec::Hadamard, &[q]);
    let y = c.measure(MeasurementKind::QubitZ, &[q], "y");
    let x = swap_readout(&mut c, m0, m1, "x");
    c.post(ClassicalGate::Product, &[x, y], "z");
    c
}

fn noon_coherent_prep(n: usize, parity_form: bool) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m0 = c.mode_init("m0", n, n);
    let m1 = c.mode("m1", n);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(rot(Y_AXIS, PI), 1), &[q, m0, m1]);
    c.gate(GateSpec::Hadamard, &[q]);
    let p = if parity_form {
        GateSpec::Parity
    } else {
        sub(SubspaceKind::P, n)
    };
    c.gate(ctrl(p, 1), &[q, m1]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.discard(&[q]);
    swap_readout(&mut c, m0, m1, "z");
    c
}

fn coherent_single_mode_qubit(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", cut);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(disp(-a), 1), &[q, m]);
    c.gate(GateSpec::SGate, &[q]);
    c.gate(phase_phi(), &[m]);
    c.gate(ctrl(disp(a), 1), &[q, m]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.measure(MeasurementKind::QubitZ, &[q], "z");
    c
}

fn modal_cat_postselected(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", cut);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(disp(a), 1), &[q, m]);
    c.gate(GateSpec::SGate, &[q]);
    c.gate(GateSpec::Hadamard, &[q]);
    let y = c.measure(MeasurementKind::QubitZ, &[q], "y");
    c.gate(phase_phi(), &[m]);
    c.gate(disp(-a / 2.0), &[m]);
    let x = parity_readout(&mut c, m, "n", "x");
    c.post(ClassicalGate::Product, &[x, y], "z");
    c
}

fn modal_cat_coherent(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", cut);
    c.gate(GateSpec::Hadamard, &[q]);
    for _ in 0..2 {
        c.gate(disp(-a / 2.0), &[m]);
        c.gate(ctrl(GateSpec::Parity, 1), &[q, m]);
        c.gate(disp(a / 2.0), &[m]);
        c.gate(GateSpec::SGate, &[q]);
        c.gate(GateSpec::Hadamard, &[q]);
    }
    c.discard(&[q]);
    c.gate(phase_phi(), &[m]);
    c.gate(disp(-a / 2.0), &[m]);
    parity_readout(&mut c, m, "n", "z");
    c
}

/// `(|0⟩|0,α⟩ + |1⟩|α,0⟩)/√2` followed by an S gate on the qubit.
fn obbo_switch_prep(c: &mut Circuit, a: f64, cut: usize) -> (usize, usize, usize) {
    let q = c.qubit("q");
    let m0 = c.mode("m0", cut);
    let m1 = c.mode("m1", cut);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(disp(a), 1), &[q, m1]);
    c.gate(GateSpec::PauliX, &[q]);
    c.gate(ctrl(disp(a), 1), &[q, m0]);
    c.gate(GateSpec::PauliX, &[q]);
    c.gate(GateSpec::SGate, &[q]);
    (q, m0, m1)
}

fn coherent_two_mode_qubit(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let (q, m0, m1) = obbo_switch_prep(&mut c, a, cut);
    c.gate(rot_phi(), &[m0, m1]);
    c.gate(ctrl(rot(Y_AXIS, -PI), 1), &[q, m0, m1]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.measure(MeasurementKind::QubitZ, &[q], "z");
    c
}

fn obbo_postselected(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let (q, m0, m1) = obbo_switch_prep(&mut c, a, cut);
    c.gate(GateSpec::Hadamard, &[q]);
    let y = c.measure(MeasurementKind::QubitZ, &[q], "y");
    let x = swap_readout(&mut c, m0, m1, "x");
    c.post(ClassicalGate::Product, &[x, y], "z");
    c
}

fn obbo_coherent(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let (q, m0, m1) = obbo_switch_prep(&mut c, a, cut);
    c.gate(GateSpec::Hadamard, &[q]);
    c.gate(ctrl(GateSpec::Parity, 1), &[q, m0]);
    c.gate(ctrl(GateSpec::Parity, 1), &[q, m1]);
    c.gate(ctrl(disp(a), 1), &[q, m0]);
    c.gate(ctrl(disp(a), 1), &[q, m1]);
    c.gate(GateSpec::SGate, &[q]);
    c.gate(GateSpec::Hadamard, &[q]);
    c.discard(&[q]);
    swap_readout(&mut c, m0, m1, "z");
    c
}

/// Nonlinear interferometer: beamsplitter, self-Kerr and π phase on mode 1,
/// beamsplitter.
pub(crate) fn kerr_interferometer(c: &mut Circuit, m0: usize, m1: usize) {
    c.gate(bs(FRAC_PI_2), &[m0, m1]);
    c.gate(GateSpec::SelfKerr(Angle::constant(FRAC_PI_2)), &[m1]);
    c.gate(GateSpec::PhaseShift(Angle::constant(PI)), &[m1]);
    c.gate(bs(FRAC_PI_2), &[m0, m1]);
}

fn obbo_kerr_prep(a: f64, cut: usize) -> Circuit {
    let mut c = Circuit::new();
    let m0 = c.mode("m0", cut);
    let m1 = c.mode("m1", cut);
    c.gate(disp(a), &[m0]);
    kerr_interferometer(&mut c, m0, m1);
    swap_readout(&mut c, m0, m1, "z");
    c
}

/// The Kerr interferometer acting on `|N,0⟩` (no displacement).
pub fn kerr_interferometer_fock(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    let m0 = c.mode_init("m0", n, n);
    let m1 = c.mode("m1", n);
    kerr_interferometer(&mut c, m0, m1);
    c.validate()?;
    Ok(c)
}

/// Qubit translation of the Kerr interferometer (no phase or readout).
pub fn kerr_prep_qubits(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    let qs: Vec<usize> = (1..=n).map(|j| c.qubit(&format!("q{j}"))).collect();
    kerr_prep_qubit_gates(&mut c, &qs);
    c.validate()?;
    Ok(c)
}

fn kerr_prep_qubit_gates(c: &mut Circuit, qs: &[usize]) {
    for &q in qs {
        c.gate(GateSpec::PauliZ, &[q]);
        c.gate(GateSpec::Hadamard, &[q]);
    }
    for (j, &a) in qs.iter().enumerate() {
        for &b in &qs[j + 1..] {
            c.gate(ctrl(GateSpec::PauliZ, 1), &[a, b]);
        }
    }
    for &q in qs {
        c.gate(GateSpec::SGate, &[q]);
        c.gate(GateSpec::Hadamard, &[q]);
        c.gate(GateSpec::PauliX, &[q]);
    }
}

fn obbo_kerr_prep_qubits(n: usize) -> Circuit {
    let mut c = Circuit::new();
    let qs: Vec<usize> = (1..=n).map(|j| c.qubit(&format!("q{j}"))).collect();
    kerr_prep_qubit_gates(&mut c, &qs);
    for &q in &qs {
        c.gate(rot_phi(), &[q]);
    }
    for &q in &qs {
        c.gate(GateSpec::Hadamard, &[q]);
    }
    let zs: Vec<usize> = qs
        .iter()
        .enumerate()
        .map(|(j, &q)| c.measure(MeasurementKind::QubitZ, &[q], &format!("z{}", j + 1)))
        .collect();
    c.post(ClassicalGate::Product, &zs, "z");
    c
}

/// Quantum switch `controlled-D(α)` on (qubit, mode).
pub fn quantum_switch(alpha: C64, cutoff: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", cutoff);
    c.gate(ctrl(GateSpec::Displacement(alpha), 1), &[q, m]);
    c.validate()?;
    Ok(c)
}

/// Displacements and controlled parities equivalent to the quantum switch.
pub fn quantum_switch_via_parity(alpha: C64, cutoff: usize) -> Result<Circuit> {
    let mut c = Circuit::new();
    let q = c.qubit("q");
    let m = c.mode("m", cutoff);
    c.gate(ctrl(GateSpec::Parity, 1), &[q, m]);
    c.gate(GateSpec::Displacement(-alpha / 2.0), &[m]);
    c.gate(ctrl(GateSpec::Parity, 1), &[q, m]);
    c.gate(GateSpec::Displacement(alpha / 2.0), &[m]);
    c.validate()?;
    Ok(c)
}
