//! Schwinger dictionary between N qubits and two bosonic modes.
//!
//! Mode 0 holds the photons of qubits in `|0⟩`, mode 1 those in `|1⟩`:
//! `J_z = (a†a − b†b)/2`, `J_x = (a†b + b†a)/2`, `J_y = −i(a†b − b†a)/2`.

use crate::config::TOL_SYM;
use crate::error::{Error, Result};
use crate::hilbert::{Block, HilbertSpec, Operator, StateVector, Subsystem, WireKind};
use crate::C64;
use nalgebra::DMatrix;

/// Symmetric N-qubit state with `n1` qubits in `|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DickeIndex {
    n: usize,
    n1: usize,
}

impl DickeIndex {
    pub fn new(n: usize, n1: usize) -> Result<Self> {
        if n == 0 || n1 > n {
            return Err(Error::OutOfRange(format!("Dicke index N={n}, n1={n1}")));
        }
        Ok(Self { n, n1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n0(&self) -> usize {
        self.n - self.n1
    }
}

pub fn dicke_state(idx: DickeIndex) -> Result<StateVector> {
    let spec = HilbertSpec::qubits(idx.n)?;
    let amp = C64::new(1.0 / binomial(idx.n, idx.n1).sqrt(), 0.0);
    let amps = (0..spec.total_dim())
        .map(|b: usize| {
            if b.count_ones() as usize == idx.n1 {
                amp
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    StateVector::new(spec, amps)
}

/// Basis state `|n0, n1⟩` of a two-mode spec.
pub fn fock_state(n0: usize, n1: usize, mode_spec: &HilbertSpec) -> Result<StateVector> {
    check_two_modes(mode_spec)?;
    StateVector::from_levels(mode_spec, &[n0, n1])
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_two_modes(spec: &HilbertSpec) -> Result<(usize, usize)> {
    match spec.subsystems() {
        [a, b] if a.kind() == WireKind::Mode && b.kind() == WireKind::Mode => Ok((a.cutoff(), b.cutoff())),
        _ => Err(Error::WireKindMismatch(format!("expected two modes, found {spec}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }
}

/// Representation in which angular-momentum operators are built.
#[derive(Clone, Debug)]
pub enum JRep {
    Qubits(usize),
    Modes(HilbertSpec),
}

/// Photon-number sector of two truncated modes: flat indices ordered by `n1`
/// ascending, plus the `n1` of each entry.
pub(crate) struct Sector {
    pub n: usize,
    pub indices: Vec<usize>,
    pub n1: Vec<usize>,
}

pub(crate) fn sectors(c0: usize, c1: usize) -> Vec<Sector> {
    (0..=c0 + c1)
        .map(|n| {
            let lo = n.saturating_sub(c0);
            let hi = n.min(c1);
            let n1: Vec<usize> = (lo..=hi).collect();
            let indices = n1.iter().map(|&k| (n - k) * (c1 + 1) + k).collect();
            Sector { n, indices, n1 }
        })
        .collect()
}

/// `n̂·J` restricted to a sector.
pub(crate) fn sector_generator(sector: &Sector, axis: [f64; 3]) -> DMatrix<C64> {
    let k = sector.n1.len();
    let [nx, ny, nz] = axis;
    let mut g = DMatrix::zeros(k, k);
    for p in 0..k {
        let n1 = sector.n1[p];
        let n0 = sector.n - n1;
        g[(p, p)] = C64::new(nz * (n0 as f64 - n1 as f64) / 2.0, 0.0);
        if p > 0 {
            // a†b takes entry p (n1) to p-1 (n1-1)
            let amp = (((n0 + 1) * n1) as f64).sqrt();
            let v = C64::new(nx, -ny) * (amp / 2.0);
            g[(p - 1, p)] = v;
            g[(p, p - 1)] = v.conj();
        }
    }
    g
}

fn pauli(axis: Axis) -> DMatrix<C64> {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
    }
}

/// Angular-momentum component along `axis`.
pub fn j_operator(axis: Axis, rep: &JRep) -> Result<Operator> {
    match rep {
        JRep::Qubits(n) => {
            let spec = HilbertSpec::qubits(*n)?;
            let dim = spec.total_dim();
            if axis == Axis::Z {
                let diag = (0..dim)
                    .map(|b: usize| C64::new(*n as f64 / 2.0 - b.count_ones() as f64, 0.0))
                    .collect();
                return Operator::diagonal(&spec, diag);
            }
            let p = pauli(axis);
            let mut m = DMatrix::zeros(dim, dim);
            for q in 0..*n {
                let shift = n - 1 - q;
                for col in 0..dim {
                    let bit = (col >> shift) & 1;
                    for out in 0..2 {
                        let v = p[(out, bit)];
                        if v != C64::new(0.0, 0.0) {
                            let row = (col & !(1 << shift)) | (out << shift);
                            m[(row, col)] += v * 0.5;
                        }
                    }
                }
            }
            Operator::dense(&spec, m)
        }
        JRep::Modes(spec) => {
            let (c0, c1) = check_two_modes(spec)?;
            let blocks = sectors(c0, c1)
                .into_iter()
                .map(|s| Block {
                    matrix: sector_generator(&s, axis.unit()),
                    indices: s.indices,
                })
                .collect();
            Operator::from_blocks(spec, blocks, Some(vec![C64::new(0.0, 0.0); spec.total_dim()]))
        }
    }
}

/// Isometry between the symmetric subspace of N qubits and the N-photon
/// sector of two modes.
#[derive(Clone, Debug)]
pub struct SectorMap {
    n: usize,
    qubit_spec: HilbertSpec,
    mode_spec: HilbertSpec,
    /// Row `n1` is the Dicke state with `n1` ones.
    isometry: DMatrix<C64>,
}

impl SectorMap {
    pub fn new(n: usize, cutoffs: (usize, usize)) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("sector map needs N >= 1".into()));
        }
        for c in [cutoffs.0, cutoffs.1] {
            if c < n {
                return Err(Error::ExceedsCutoff { level: n, cutoff: c });
            }
        }
        let qubit_spec = HilbertSpec::qubits(n)?;
        let mode_spec = HilbertSpec::new(vec![Subsystem::mode(cutoffs.0), Subsystem::mode(cutoffs.1)])?;
        let mut isometry = DMatrix::zeros(n + 1, qubit_spec.total_dim());
        for n1 in 0..=n {
            let d = dicke_state(DickeIndex::new(n, n1)?)?;
            for (b, a) in d.amplitudes().iter().enumerate() {
                isometry[(n1, b)] = a.conj();
            }
        }
        Ok(Self {
            n,
            qubit_spec,
            mode_spec,
            isometry,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn qubit_spec(&self) -> &HilbertSpec {
        &self.qubit_spec
    }

    pub fn mode_spec(&self) -> &HilbertSpec {
        &self.mode_spec
    }

    pub fn isometry(&self) -> &DMatrix<C64> {
        &self.isometry
    }

    /// Flat mode indices of the sector, ordered by `n1` ascending.
    pub fn sector_indices(&self) -> Vec<usize> {
        let c1 = self.mode_spec.subsystems()[1].cutoff();
        (0..=self.n).map(|n1| (self.n - n1) * (c1 + 1) + n1).collect()
    }

    pub fn symmetric_to_modes(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.spec() != &self.qubit_spec {
            return Err(Error::SpecMismatch(format!(
                "expected {}, found {}",
                self.qubit_spec,
                psi.spec()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let s = &self.isometry * &v;
        let back = self.isometry.adjoint() * &s;
        let residual = (v - back).norm();
        if residual > TOL_SYM {
            return Err(Error::NonSymmetricInput(residual));
        }
        let mut out = StateVector::zero(&self.mode_spec).into_amplitudes();
        for (n1, idx) in self.sector_indices().into_iter().enumerate() {
            out[idx] = s[n1];
        }
        StateVector::new(self.mode_spec.clone(), out)
    }

    pub fn modes_to_symmetric(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.spec() != &self.mode_spec {
            return Err(Error::SpecMismatch(format!(
                "expected {}, found {}",
                self.mode_spec,
                psi.spec()
            )));
        }
        let idx = self.sector_indices();
        let s = nalgebra::DVector::from_iterator(self.n + 1, idx.iter().map(|&i| psi.amplitudes()[i]));
        let residual = (psi.norm_sqr() - s.norm_squared()).max(0.0).sqrt();
        if residual > TOL_SYM {
            return Err(Error::NotInSector(residual));
        }
        let q = self.isometry.adjoint() * s;
        StateVector::new(self.qubit_spec.clone(), q.iter().copied().collect())
    }

    /// `V U V†` for an operator on the qubits.
    pub fn qubit_operator_on_sector(&self, op: &Operator) -> Result<DMatrix<C64>> {
        if op.spec() != &self.qubit_spec {
            return Err(Error::SpecMismatch("operator is not on the qubit spec".into()));
        }
        Ok(&self.isometry * op.to_dense()? * self.isometry.adjoint())
    }

    /// Restriction of a two-mode operator to the sector.
    pub fn mode_operator_on_sector(&self, op: &Operator) -> Result<DMatrix<C64>> {
        if op.spec() != &self.mode_spec {
            return Err(Error::SpecMismatch("operator is not on the mode spec".into()));
        }
        Ok(op.submatrix(&self.sector_indices()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn dicke_examples() {
        let d = dicke_state(DickeIndex::new(1, 0).unwrap()).unwrap();
        assert_eq!(d.amplitudes(), &[c(1.0), c(0.0)]);
        let d = dicke_state(DickeIndex::new(2, 1).unwrap()).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(
            d.max_abs_diff(&StateVector::new(d.spec().clone(), vec![c(0.0), c(h), c(h), c(0.0)]).unwrap())
                .unwrap()
                < 1e-15
        );
        // (|011⟩+|101⟩+|110⟩)/√3, by enumeration
        let d = dicke_state(DickeIndex::new(3, 2).unwrap()).unwrap();
        let t = 1.0 / 3f64.sqrt();
        let want: Vec<C64> = (0..8)
            .map(|b| if [3, 5, 6].contains(&b) { c(t) } else { c(0.0) })
            .collect();
        assert!(
            d.max_abs_diff(&StateVector::new(d.spec().clone(), want).unwrap())
                .unwrap()
                < 1e-15
        );
        assert!(DickeIndex::new(2, 3).is_err());
    }

    #[test]
    fn fock_states() {
        let spec = HilbertSpec::modes(&[3, 3]).unwrap();
        let s = fock_state(3, 0, &spec).unwrap();
        assert_eq!(s.amplitudes()[12], c(1.0));
        assert!(fock_state(4, 0, &spec).is_err());
    }

    #[test]
    fn jz_on_modes_and_jx_single_qubit() {
        let spec = HilbertSpec::modes(&[2, 3]).unwrap();
        let jz = j_operator(Axis::Z, &JRep::Modes(spec.clone())).unwrap();
        for n0 in 0..=2 {
            for n1 in 0..=3 {
                let i = spec.index_of(&[n0, n1]).unwrap();
                assert_eq!(jz.entry(i, i), c((n0 as f64 - n1 as f64) / 2.0));
            }
        }
        let jx = j_operator(Axis::X, &JRep::Qubits(1)).unwrap().to_dense().unwrap();
        assert_eq!(jx, DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.5), c(0.5), c(0.0)]));
    }

    fn commutator_check(rep: JRep, sector_only: Option<Vec<usize>>) {
        let jx = j_operator(Axis::X, &rep).unwrap();
        let jy = j_operator(Axis::Y, &rep).unwrap();
        let jz = j_operator(Axis::Z, &rep).unwrap();
        let lhs = jx.mul(&jy).unwrap().to_dense().unwrap() - jy.mul(&jx).unwrap().to_dense().unwrap();
        let rhs = jz.to_dense().unwrap() * C64::new(0.0, 1.0);
        let diff = lhs - rhs;
        let idx = sector_only.unwrap_or_else(|| (0..diff.nrows()).collect());
        for &r in &idx {
            for &cc in &idx {
                assert!(diff[(r, cc)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn angular_momentum_algebra() {
        commutator_check(JRep::Qubits(3), None);
        // truncation breaks the algebra only in sectors above the smaller cutoff
        let spec = HilbertSpec::modes(&[3, 3]).unwrap();
        let complete: Vec<usize> = (0..16).filter(|&i| i / 4 + i % 4 <= 3).collect();
        commutator_check(JRep::Modes(spec), Some(complete));
    }

    #[test]
    fn sector_map_examples() {
        let sm = SectorMap::new(2, (2, 2)).unwrap();
        let d = dicke_state(DickeIndex::new(2, 1).unwrap()).unwrap();
        let m = sm.symmetric_to_modes(&d).unwrap();
        assert!((m.amplitudes()[4] - c(1.0)).norm() < 1e-15);
        let h = FRAC_1_SQRT_2;
        let ghz = StateVector::new(sm.qubit_spec().clone(), vec![c(h), c(0.0), c(0.0), c(-h)]).unwrap();
        let m = sm.symmetric_to_modes(&ghz).unwrap();
        assert!((m.amplitudes()[6] - c(h)).norm() < 1e-15); // |2,0⟩
        assert!((m.amplitudes()[2] - c(-h)).norm() < 1e-15); // |0,2⟩
        let back = sm.modes_to_symmetric(&m).unwrap();
        assert!(back.max_abs_diff(&ghz).unwrap() < 1e-15);
        let asym = StateVector::new(sm.qubit_spec().clone(), vec![c(0.0), c(h), c(-h), c(0.0)]).unwrap();
        assert!(matches!(sm.symmetric_to_modes(&asym), Err(Error::NonSymmetricInput(_))));
        let off = fock_state(1, 0, sm.mode_spec()).unwrap();
        assert!(matches!(sm.modes_to_symmetric(&off), Err(Error::NotInSector(_))));
    }

    #[test]
    fn isometry_is_coisometric() {
        let sm = SectorMap::new(4, (5, 4)).unwrap();
        let v = sm.isometry();
        let g = v * v.adjoint();
        assert!((g - DMatrix::identity(5, 5)).map(|z| z.norm()).max() < 1e-14);
    }
}
