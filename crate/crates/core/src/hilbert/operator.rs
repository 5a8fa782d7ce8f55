use super::{HilbertSpec, Layout};
use crate::config::{MAX_DENSE_DIM, TOL_UNITARY};
use crate::error::{Error, Result};
use crate::C64;
use nalgebra::DMatrix;

const NONE: u32 = u32::MAX;

/// A dense sub-matrix acting on a set of basis indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub indices: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

/// Square operator on a [`HilbertSpec`].
///
/// Stored block-diagonally: disjoint index sets carry dense blocks and every
/// uncovered basis index carries a diagonal entry. A fully dense operator is
/// one block over all indices; a diagonal operator has no blocks. This keeps
/// number-conserving two-mode gates (one block per photon-number sector)
/// cheap without giving up dense semantics.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    spec: HilbertSpec,
    diag: Vec<C64>,
    blocks: Vec<Block>,
    owner: Vec<u32>,
}

impl Operator {
    pub fn identity(spec: &HilbertSpec) -> Self {
        let n = spec.total_dim();
        Self {
            spec: spec.clone(),
            diag: vec![C64::new(1.0, 0.0); n],
            blocks: Vec::new(),
            owner: vec![NONE; n],
        }
    }

    pub fn diagonal(spec: &HilbertSpec, diag: Vec<C64>) -> Result<Self> {
        let n = spec.total_dim();
        if diag.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        Ok(Self {
            spec: spec.clone(),
            diag,
            blocks: Vec::new(),
            owner: vec![NONE; n],
        })
    }

    pub fn dense(spec: &HilbertSpec, matrix: DMatrix<C64>) -> Result<Self> {
        let n = spec.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Self::from_blocks(
            spec,
            vec![Block {
                indices: (0..n).collect(),
                matrix,
            }],
            None,
        )
    }

    /// Blocks over disjoint index sets; `diag` gives the entries on uncovered
    /// indices (identity when `None`).
    pub fn from_blocks(spec: &HilbertSpec, blocks: Vec<Block>, diag: Option<Vec<C64>>) -> Result<Self> {
        let n = spec.total_dim();
        let diag = diag.unwrap_or_else(|| vec![C64::new(1.0, 0.0); n]);
        if diag.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        let mut owner = vec![NONE; n];
        let mut kept = Vec::with_capacity(blocks.len());
        for b in blocks {
            let k = b.indices.len();
            if b.matrix.nrows() != k || b.matrix.ncols() != k {
                return Err(Error::DimMismatch {
                    expected: k,
                    found: b.matrix.nrows(),
                });
            }
            if k == 0 {
                continue;
            }
            let id = kept.len() as u32;
            for &i in &b.indices {
                if i >= n || owner[i] != NONE {
                    return Err(Error::SpecMismatch(format!(
                        "block index {i} out of range or overlapping"
                    )));
                }
                owner[i] = id;
            }
            kept.push(b);
        }
        let mut op = Self {
            spec: spec.clone(),
            diag,
            blocks: Vec::new(),
            owner,
        };
        // 1x1 blocks are folded into the diagonal.
        for b in kept {
            if b.indices.len() == 1 {
                op.diag[b.indices[0]] = b.matrix[(0, 0)];
                op.owner[b.indices[0]] = NONE;
            } else {
                let id = op.blocks.len() as u32;
                for &i in &b.indices {
                    op.owner[i] = id;
                }
                op.blocks.push(b);
            }
        }
        Ok(op)
    }

    /// Dense operator from a function of (row, column).
    pub fn from_fn(spec: &HilbertSpec, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let n = spec.total_dim();
        Self::dense(spec, DMatrix::from_fn(n, n, f))
    }

    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Diagonal entries on indices not covered by a block.
    pub fn diagonal_entries(&self) -> &[C64] {
        &self.diag
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match self.owner[col] {
            NONE => {
                if row == col {
                    self.diag[col]
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            id => {
                let b = &self.blocks[id as usize];
                if self.owner[row] != id {
                    return C64::new(0.0, 0.0);
                }
                let r = b.indices.iter().position(|&i| i == row).unwrap();
                let c = b.indices.iter().position(|&i| i == col).unwrap();
                b.matrix[(r, c)]
            }
        }
    }

    /// Column `j` as a full vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        let mut col = vec![C64::new(0.0, 0.0); self.dim()];
        match self.owner[j] {
            NONE => col[j] = self.diag[j],
            id => {
                let b = &self.blocks[id as usize];
                let c = b.indices.iter().position(|&i| i == j).unwrap();
                for (r, &i) in b.indices.iter().enumerate() {
                    col[i] = b.matrix[(r, c)];
                }
            }
        }
        col
    }

    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let n = self.dim();
        if n > MAX_DENSE_DIM {
            return Err(Error::DimensionLimit {
                dim: n,
                limit: MAX_DENSE_DIM,
            });
        }
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.diag
                .iter()
                .zip(&self.owner)
                .map(|(&d, &o)| if o == NONE { d } else { C64::new(0.0, 0.0) }),
        ));
        for b in &self.blocks {
            for (c, &j) in b.indices.iter().enumerate() {
                for (r, &i) in b.indices.iter().enumerate() {
                    m[(i, j)] = b.matrix[(r, c)];
                }
            }
        }
        Ok(m)
    }

    /// Apply to a vector of length `dim()`.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        let offsets: Vec<usize> = (0..self.dim()).collect();
        self.apply_slice(&mut out, 0, &offsets, &mut Vec::new());
        out
    }

    /// Apply in place to the amplitudes at `base + offsets[k]`.
    pub(crate) fn apply_slice(&self, amps: &mut [C64], base: usize, offsets: &[usize], buf: &mut Vec<C64>) {
        for (k, &o) in offsets.iter().enumerate() {
            if self.owner[k] == NONE {
                amps[base + o] *= self.diag[k];
            }
        }
        for b in &self.blocks {
            buf.clear();
            buf.extend(b.indices.iter().map(|&i| amps[base + offsets[i]]));
            let m = &b.matrix;
            let k = b.indices.len();
            for (r, &i) in b.indices.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..k {
                    acc += m[(r, c)] * buf[c];
                }
                amps[base + offsets[i]] = acc;
            }
        }
    }

    /// Apply to the `targets` of a full state vector over `spec`.
    pub(crate) fn apply_to(&self, spec: &HilbertSpec, targets: &[usize], amps: &mut [C64]) -> Result<()> {
        spec.check_targets(targets, &self.spec)?;
        let lay = Layout::new(spec, targets);
        let mut buf = Vec::new();
        for &base in &lay.bases {
            self.apply_slice(amps, base, &lay.offsets, &mut buf);
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            diag: self.diag.iter().map(|d| d.conj()).collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    indices: b.indices.clone(),
                    matrix: b.matrix.adjoint(),
                })
                .collect(),
            owner: self.owner.clone(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.diag.iter_mut().for_each(|d| *d *= c);
        out.blocks.iter_mut().for_each(|b| b.matrix *= c);
        out
    }

    /// Restriction to a set of indices closed under this operator's blocks.
    fn restrict_closed(&self, list: &[usize], pos: &[u32]) -> DMatrix<C64> {
        let k = list.len();
        let mut m = DMatrix::zeros(k, k);
        let mut done = vec![false; self.blocks.len()];
        for (p, &i) in list.iter().enumerate() {
            match self.owner[i] {
                NONE => m[(p, p)] = self.diag[i],
                id if !done[id as usize] => {
                    done[id as usize] = true;
                    let b = &self.blocks[id as usize];
                    for (c, &j) in b.indices.iter().enumerate() {
                        for (r, &ii) in b.indices.iter().enumerate() {
                            m[(pos[ii] as usize, pos[j] as usize)] = b.matrix[(r, c)];
                        }
                    }
                }
                _ => {}
            }
        }
        m
    }

    /// Matrix entries on an arbitrary index list (rows and columns).
    pub fn submatrix(&self, list: &[usize]) -> DMatrix<C64> {
        DMatrix::from_fn(list.len(), list.len(), |r, c| self.entry(list[r], list[c]))
    }

    /// Operator product `self · rhs` (`rhs` acts first).
    pub fn mul(&self, rhs: &Operator) -> Result<Operator> {
        if self.spec != rhs.spec {
            return Err(Error::SpecMismatch(format!(
                "cannot multiply operators on {} and {}",
                self.spec, rhs.spec
            )));
        }
        let n = self.dim();
        // union-find over the block structures of both factors
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for op in [self, rhs] {
            for b in &op.blocks {
                let r0 = find(&mut parent, b.indices[0]);
                for &i in &b.indices[1..] {
                    let ri = find(&mut parent, i);
                    if ri != r0 {
                        parent[ri] = r0;
                    }
                }
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        let mut diag = vec![C64::new(1.0, 0.0); n];
        for (i, d) in diag.iter_mut().enumerate() {
            if self.owner[i] == NONE && rhs.owner[i] == NONE {
                *d = self.diag[i] * rhs.diag[i];
            } else {
                let r = find(&mut parent, i);
                comps.entry(r).or_default().push(i);
            }
        }
        let mut pos = vec![0u32; n];
        let mut blocks = Vec::with_capacity(comps.len());
        for (_, list) in comps {
            for (p, &i) in list.iter().enumerate() {
                pos[i] = p as u32;
            }
            let a = self.restrict_closed(&list, &pos);
            let b = rhs.restrict_closed(&list, &pos);
            blocks.push(Block {
                indices: list,
                matrix: a * b,
            });
        }
        Operator::from_blocks(&self.spec, blocks, Some(diag))
    }

    /// Kronecker product; the spec of `self` comes first.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        let spec = self.spec.concat(&other.spec)?;
        let nb = other.dim();
        let diag: Vec<C64> = self
            .diag
            .iter()
            .flat_map(|&a| other.diag.iter().map(move |&b| a * b))
            .collect();
        // Each factor is a list of "groups": blocks plus singleton diagonal indices.
        let groups = |op: &Operator| -> Vec<(Vec<usize>, DMatrix<C64>)> {
            let mut g: Vec<_> = op
                .blocks
                .iter()
                .map(|b| (b.indices.clone(), b.matrix.clone()))
                .collect();
            for i in 0..op.dim() {
                if op.owner[i] == NONE {
                    g.push((vec![i], DMatrix::from_element(1, 1, op.diag[i])));
                }
            }
            g
        };
        let ga = groups(self);
        let gb = groups(other);
        let mut blocks = Vec::new();
        for (ia, ma) in &ga {
            for (ib, mb) in &gb {
                if ia.len() == 1 && ib.len() == 1 {
                    continue;
                }
                let indices = ia.iter().flat_map(|&a| ib.iter().map(move |&b| a * nb + b)).collect();
                blocks.push(Block {
                    indices,
                    matrix: ma.kronecker(mb),
                });
            }
        }
        Operator::from_blocks(&spec, blocks, Some(diag))
    }

    /// `|level><level| ⊗ self + (I - |level><level|) ⊗ I` with the control
    /// subsystem `control` placed first.
    pub fn controlled_by(&self, control: super::Subsystem, level: usize) -> Result<Operator> {
        if level >= control.dim() {
            return Err(Error::ExceedsCutoff {
                level,
                cutoff: control.cutoff(),
            });
        }
        let spec = HilbertSpec::new(vec![control])?.concat(&self.spec)?;
        let d = self.dim();
        let shift = level * d;
        let mut diag = vec![C64::new(1.0, 0.0); spec.total_dim()];
        diag[shift..shift + d].copy_from_slice(&self.diag);
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                indices: b.indices.iter().map(|&i| i + shift).collect(),
                matrix: b.matrix.clone(),
            })
            .collect();
        Operator::from_blocks(&spec, blocks, Some(diag))
    }

    /// Largest |(U†U − I)_ij|.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, d) in self.diag.iter().enumerate() {
            if self.owner[i] == NONE {
                dev = dev.max((d.norm_sqr() - 1.0).abs());
            }
        }
        for b in &self.blocks {
            let g = b.matrix.adjoint() * &b.matrix;
            for r in 0..g.nrows() {
                for c in 0..g.ncols() {
                    let target = if r == c { 1.0 } else { 0.0 };
                    dev = dev.max((g[(r, c)] - target).norm());
                }
            }
        }
        dev
    }

    /// Largest |(A − A†)_ij|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, d) in self.diag.iter().enumerate() {
            if self.owner[i] == NONE {
                dev = dev.max(2.0 * d.im.abs());
            }
        }
        for b in &self.blocks {
            let m = &b.matrix;
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
                }
            }
        }
        dev
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= TOL_UNITARY
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= TOL_UNITARY
    }

    /// Largest entrywise difference; specs must agree.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "cannot compare operators on {} and {}",
                self.spec, other.spec
            )));
        }
        let mut dev: f64 = 0.0;
        for j in 0..self.dim() {
            let a = self.column(j);
            let b = other.column(j);
            for (x, y) in a.iter().zip(&b) {
                dev = dev.max((x - y).norm());
            }
        }
        Ok(dev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Subsystem;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn q1() -> HilbertSpec {
        HilbertSpec::qubits(1).unwrap()
    }

    fn x() -> Operator {
        Operator::from_fn(&q1(), |r, k| if r != k { c_one() } else { c(0.0, 0.0) }).unwrap()
    }

    fn c_one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = Operator::identity(&q1());
        let i4 = i2.tensor(&i2).unwrap();
        assert_eq!(i4.to_dense().unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn mul_mixed_structure_matches_dense() {
        let spec = HilbertSpec::new(vec![Subsystem::mode(3)]).unwrap();
        let a = Operator::from_blocks(
            &spec,
            vec![Block {
                indices: vec![0, 2],
                matrix: DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0), c(4.0, 0.0)]),
            }],
            Some(vec![c(1.0, 0.0), c(0.5, 0.5), c(1.0, 0.0), c(-1.0, 0.0)]),
        )
        .unwrap();
        let b = Operator::from_blocks(
            &spec,
            vec![Block {
                indices: vec![1, 2],
                matrix: DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, -1.0)]),
            }],
            Some(vec![c(3.0, 0.0); 4]),
        )
        .unwrap();
        let ab = a.mul(&b).unwrap().to_dense().unwrap();
        let expect = a.to_dense().unwrap() * b.to_dense().unwrap();
        assert!((ab - expect).map(|z| z.norm()).max() < 1e-14);
    }

    #[test]
    fn controlled_x_is_cnot() {
        let cx = x().controlled_by(Subsystem::qubit(), 1).unwrap().to_dense().unwrap();
        let mut cnot = DMatrix::<C64>::identity(4, 4);
        cnot[(2, 2)] = c(0.0, 0.0);
        cnot[(3, 3)] = c(0.0, 0.0);
        cnot[(2, 3)] = c_one();
        cnot[(3, 2)] = c_one();
        assert_eq!(cx, cnot);
    }

    #[test]
    fn control_on_zero_is_conjugated_control_on_one() {
        let u = Operator::from_fn(&q1(), |r, cc| c((r + 2 * cc) as f64, r as f64)).unwrap();
        let c0 = u.controlled_by(Subsystem::qubit(), 0).unwrap();
        let c1 = u.controlled_by(Subsystem::qubit(), 1).unwrap();
        let xi = x().tensor(&Operator::identity(&q1())).unwrap();
        let conj = xi.mul(&c1).unwrap().mul(&xi).unwrap();
        assert!(conj.max_abs_diff(&c0).unwrap() < 1e-15);
    }

    #[test]
    fn unitarity_and_hermiticity() {
        assert!(x().is_unitary() && x().is_hermitian());
        let s = Operator::diagonal(&q1(), vec![c_one(), c(0.0, 1.0)]).unwrap();
        assert!(s.is_unitary());
        assert!(!s.is_hermitian());
        assert!((s.hermiticity_deviation() - 2.0).abs() < 1e-15);
    }
}
