use super::{HilbertSpec, Operator, StateVector};
use crate::C64;

/// Objects that can be compared entrywise up to a global phase.
pub trait PhaseComparable {
    fn spec(&self) -> &HilbertSpec;
    /// Entries in a fixed order, delivered in chunks (columns for operators).
    fn chunks(&self) -> Box<dyn Iterator<Item = Vec<C64>> + '_>;
}

impl PhaseComparable for StateVector {
    fn spec(&self) -> &HilbertSpec {
        StateVector::spec(self)
    }

    fn chunks(&self) -> Box<dyn Iterator<Item = Vec<C64>> + '_> {
        Box::new(std::iter::once(self.amplitudes().to_vec()))
    }
}

impl PhaseComparable for Operator {
    fn spec(&self) -> &HilbertSpec {
        Operator::spec(self)
    }

    fn chunks(&self) -> Box<dyn Iterator<Item = Vec<C64>> + '_> {
        Box::new((0..self.dim()).map(|j| self.column(j)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMatch {
    pub equal: bool,
    /// Unit-modulus `c` with `A ≈ cB`; `None` when `B` vanishes or specs differ.
    pub phase: Option<C64>,
    /// `max |A − cB|` (or `max |A|` when `B` vanishes).
    pub deviation: f64,
    /// Flat position of the worst entry in chunk order.
    pub worst: Option<usize>,
}

/// True iff some unit-modulus `c` gives `‖A − cB‖_max ≤ tol`, with `c` read
/// off the largest-magnitude entry of `B`.
pub fn equal_up_to_global_phase<T: PhaseComparable>(a: &T, b: &T, tol: f64) -> PhaseMatch {
    if a.spec() != b.spec() {
        return PhaseMatch {
            equal: false,
            phase: None,
            deviation: f64::INFINITY,
            worst: None,
        };
    }
    let mut best = (0.0f64, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for (ca, cb) in a.chunks().zip(b.chunks()) {
        for (x, y) in ca.iter().zip(&cb) {
            if y.norm() > best.0 {
                best = (y.norm(), *x, *y);
            }
        }
    }
    let phase = if best.0 > 0.0 {
        let r = best.1 / best.2;
        if r.norm() > 0.0 {
            r / r.norm()
        } else {
            C64::new(1.0, 0.0)
        }
    } else {
        C64::new(0.0, 0.0)
    };
    let mut deviation = 0.0f64;
    let mut worst = None;
    let mut k = 0usize;
    for (ca, cb) in a.chunks().zip(b.chunks()) {
        for (x, y) in ca.iter().zip(&cb) {
            let d = (x - phase * y).norm();
            if d > deviation || worst.is_none() {
                deviation = deviation.max(d);
                worst = Some(k);
            }
            k += 1;
        }
    }
    PhaseMatch {
        equal: deviation <= tol,
        phase: (best.0 > 0.0).then_some(phase),
        deviation,
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn detects_constructed_phase() {
        let q = HilbertSpec::qubits(1).unwrap();
        let u = Operator::from_fn(&q, |r, c| C64::new((r + 1) as f64 * 0.3, c as f64 - 0.2)).unwrap();
        let ph = C64::from_polar(1.0, PI / 3.0);
        let m = equal_up_to_global_phase(&u.scale(ph), &u, 1e-12);
        assert!(m.equal);
        assert!((m.phase.unwrap() - ph).norm() < 1e-15);
    }

    #[test]
    fn x_is_not_z() {
        let q = HilbertSpec::qubits(1).unwrap();
        let one = C64::new(1.0, 0.0);
        let x = Operator::from_fn(&q, |r, c| if r != c { one } else { C64::new(0.0, 0.0) }).unwrap();
        let z = Operator::diagonal(&q, vec![one, -one]).unwrap();
        assert!(!equal_up_to_global_phase(&x, &z, 1e-12).equal);
    }

    #[test]
    fn zero_reference() {
        let q = HilbertSpec::qubits(1).unwrap();
        let zero = StateVector::zero(&q);
        let one = StateVector::basis(&q, 0).unwrap();
        let m = equal_up_to_global_phase(&zero, &zero, 0.0);
        assert!(m.equal && m.phase.is_none());
        assert!(!equal_up_to_global_phase(&one, &zero, 1e-12).equal);
    }
}
