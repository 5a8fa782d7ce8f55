//! Closed-form outcome probabilities used as oracles.

use super::ProtocolId;
use crate::measurement::Value;
use crate::schwinger::binomial;

/// `sin(|α|² sin φ)·e^{−2|α|² sin²(φ/2)}`, the imaginary part of the
/// displaced-vacuum overlap that drives every coherent fringe.
pub(crate) fn coherent_signal(a2: f64, phi: f64) -> f64 {
    let s = (phi / 2.0).sin();
    (a2 * phi.sin()).sin() * (-2.0 * a2 * s * s).exp()
}

fn pois(mean: f64, k: u64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    (k as f64 * mean.ln() - mean - ln_fact).exp()
}

/// `P(n₀ − n₁ = d)` for independent Poisson counts.
fn skellam(mu0: f64, mu1: f64, d: i64) -> f64 {
    let mut total = 0.0;
    let start = (-d).max(0) as u64;
    for n1 in start..start + 400 {
        let n0 = (n1 as i64 + d) as u64;
        let term = pois(mu0, n0) * pois(mu1, n1);
        total += term;
        if n1 > start + 20 && term < 1e-30 {
            break;
        }
    }
    total
}

impl ProtocolId {
    /// Exact probability of `value` on the output wire at `phi`, with an
    /// optional fringe shift `θ`. `None` when no closed form is known.
    pub fn reference_probability(&self, phi: f64, value: Value, shift: f64) -> Option<f64> {
        use ProtocolId::*;
        let p = self.param();
        let a2 = p * p;
        if self.is_conventional() {
            let d = value.as_int()?;
            let (c2, s2) = ((phi / 2.0).cos().powi(2), (phi / 2.0).sin().powi(2));
            return Some(match self {
                ConventionalCoherent(_) => skellam(a2 * c2, a2 * s2, d),
                _ => {
                    let n = p as i64;
                    if (n - d) % 2 != 0 || d.abs() > n {
                        return Some(0.0);
                    }
                    let k = ((n - d) / 2) as usize;
                    binomial(n as usize, k) * s2.powi(k as i32) * c2.powi((n as usize - k) as i32)
                }
            });
        }
        let z = if value == Value::PLUS {
            1.0
        } else if value == Value::MINUS {
            -1.0
        } else {
            return Some(0.0);
        };
        let nphi = p * phi;
        let sig = coherent_signal(a2, phi);
        Some(match self {
            FockSingleModeQubit(_) => 0.5 * (1.0 + z * (nphi - shift).cos()),
            NoonQubit(_) | CatState(_) => 0.5 * (1.0 + z * (nphi + shift).cos()),
            FockSingleMode(_) | Noon(_) | FockPostselected(_) | FockCoherentPrep(_) | NoonPostselected(_)
            | NoonCoherentPrep(_) => 0.5 * (1.0 + z * nphi.cos()),
            ObboKerrPrepQubits(_) => 0.5 * (1.0 - z * nphi.sin()),
            CoherentSingleModeQubit(_) | ModalCatPostselected(_) => 0.5 * (1.0 + z * sig),
            CoherentTwoModeQubit(_) | ObboPostselected(_) => 0.5 * (1.0 - z * sig),
            ObboCoherent(_) | ObboKerrPrep(_) => 0.5 * (1.0 + z * (-a2).exp() - z * sig),
            ModalCatCoherent(_) => self.reference_conditional(phi, z, 1.0)?,
            ConventionalQubit(_) | ConventionalModal(_) | ConventionalCoherent(_) => unreachable!(),
        })
    }

    /// Outcomes with nonzero reference probability, when finitely many.
    pub fn reference_support(&self) -> Option<Vec<Value>> {
        match self {
            ProtocolId::ConventionalCoherent(_) => None,
            ProtocolId::ConventionalQubit(n) | ProtocolId::ConventionalModal(n) => {
                Some((0..=*n).map(|k| Value::int(*n as i64 - 2 * k as i64)).collect())
            }
            _ => Some(vec![Value::MINUS, Value::PLUS]),
        }
    }

    /// Reference `⟨m⟩` and `Δ²m` for conventional protocols.
    pub fn reference_moments(&self, phi: f64) -> Option<(f64, f64)> {
        let r = match self {
            ProtocolId::ConventionalQubit(n) | ProtocolId::ConventionalModal(n) => *n as f64,
            ProtocolId::ConventionalCoherent(a) => a * a,
            _ => return None,
        };
        let var = match self {
            // Independent Poisson counts: the variance does not depend on φ.
            ProtocolId::ConventionalCoherent(_) => r / 4.0,
            _ => r / 4.0 * phi.sin().powi(2),
        };
        Some((r / 2.0 * phi.cos(), var))
    }

    /// Exact `p_{x|y}` for post-selected variants (also used for the
    /// deterministic `y = +1` preparation of the modal-cat protocol).
    pub fn reference_conditional(&self, phi: f64, x: f64, y: f64) -> Option<f64> {
        use ProtocolId::*;
        let p = self.param();
        let a2 = p * p;
        let sig = coherent_signal(a2, phi);
        match self {
            FockPostselected(_) | NoonPostselected(_) => Some(0.5 * (1.0 + x * y * (p * phi).cos())),
            ModalCatPostselected(_) | ModalCatCoherent(_) => {
                let s = (phi / 2.0).sin();
                let even = 0.5 * (-a2 / 2.0).exp() * (1.0 + (-4.0 * a2 * s * s).exp());
                Some(0.5 * (1.0 + x * even + x * y * sig))
            }
            ObboPostselected(_) => Some(0.5 * (1.0 + x * (-a2).exp() - x * y * sig)),
            _ => None,
        }
    }

    /// Reference probability of the post-selection outcome `y`.
    pub fn reference_r(&self, _y: f64) -> Option<f64> {
        self.is_postselected().then_some(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skellam_sums_to_one() {
        let total: f64 = (-40..=40).map(|d| skellam(2.3, 0.7, d)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_reference_is_normalized() {
        let id = ProtocolId::ConventionalModal(5);
        let total: f64 = id
            .reference_support()
            .unwrap()
            .into_iter()
            .map(|v| id.reference_probability(0.7, v, 0.0).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
