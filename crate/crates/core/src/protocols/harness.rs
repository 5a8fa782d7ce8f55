use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{BuildOptions, Family, ProtocolId};
use crate::circuit::{check_equivalence, Circuit, Compare, Domain, EquivalenceQuery, SimOptions, Simulator, Verdict};
use crate::config::{DERIV_FLOOR, FD_STEP, TOL_COHERENT, TOL_EXACT};
use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::measurement::{OutcomeDistribution, Value};

#[derive(Clone, Debug)]
pub struct FringePoint {
    pub phi: f64,
    /// Marginal on the output wire.
    pub distribution: OutcomeDistribution,
    /// Mean and variance of the estimator signal.
    pub mean: f64,
    pub variance: f64,
    /// Closed-form probability per outcome, empty when none is known.
    pub reference: BTreeMap<Value, f64>,
    pub max_abs_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ProtocolReport {
    pub protocol: ProtocolId,
    pub label: String,
    pub points: Vec<FringePoint>,
    /// Largest `|simulated − reference|` over the grid.
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sensitivity {
    pub phi0: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub derivative: f64,
    pub delta_phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub param: f64,
    pub resource: f64,
    pub delta_phi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub points: Vec<ScalingPoint>,
}

#[derive(Clone, Debug)]
pub struct ConditionalPoint {
    pub phi: f64,
    /// `r_y`.
    pub r: BTreeMap<Value, f64>,
    /// `p_{x|y}` keyed by `(x, y)`.
    pub x_given_y: BTreeMap<(Value, Value), f64>,
    pub x_marginal: BTreeMap<Value, f64>,
    pub z: BTreeMap<Value, f64>,
    pub reference_x_given_y: BTreeMap<(Value, Value), f64>,
    pub reference_z: BTreeMap<Value, f64>,
}

#[derive(Clone, Debug)]
pub struct ConditionalReport {
    pub protocol: ProtocolId,
    pub points: Vec<ConditionalPoint>,
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct PreparedBranch {
    /// Outcomes recorded before the phase shifter.
    pub outcomes: Vec<(String, Value)>,
    pub probability: f64,
    pub state: StateVector,
}

#[derive(Clone, Debug)]
pub struct PreparedState {
    /// Wires touched by φ-dependent gates.
    pub probe_wires: Vec<usize>,
    pub branches: Vec<PreparedBranch>,
}

fn signal_stats(dist: &OutcomeDistribution, label: &str, scale: f64) -> Result<(f64, f64)> {
    Ok((scale * dist.expectation(label)?, scale * scale * dist.variance(label)?))
}

/// Simulate `id` over `phis` and attach closed-form references.
pub fn fringe_sweep(id: ProtocolId, phis: &[f64]) -> Result<ProtocolReport> {
    fringe_sweep_with(id, &BuildOptions::default(), phis)
}

pub fn fringe_sweep_with(id: ProtocolId, opts: &BuildOptions, phis: &[f64]) -> Result<ProtocolReport> {
    let circuit = id.build_with(opts)?;
    let sim = Simulator::new(&circuit)?;
    let label = id.output_label();
    let shift = opts.fringe_shift.unwrap_or(0.0);
    let points = phis
        .par_iter()
        .map(|&phi| -> Result<FringePoint> {
            let distribution = sim.run(phi, &SimOptions::default())?.marginal(&[label])?;
            let (mean, variance) = signal_stats(&distribution, label, id.signal_scale())?;
            let mut outcomes: Vec<Value> = distribution.entries().keys().map(|k| k[0]).collect();
            if let Some(support) = id.reference_support() {
                outcomes.extend(support);
            }
            outcomes.sort();
            outcomes.dedup();
            let mut reference = BTreeMap::new();
            let mut err: Option<f64> = None;
            for v in outcomes {
                if let Some(r) = id.reference_probability(phi, v, shift) {
                    let e = (distribution.probability(&[v]) - r).abs();
                    err = Some(err.map_or(e, |m| m.max(e)));
                    reference.insert(v, r);
                }
            }
            Ok(FringePoint {
                phi,
                distribution,
                mean,
                variance,
                reference,
                max_abs_error: err,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = points
        .iter()
        .filter_map(|p| p.max_abs_error)
        .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
    Ok(ProtocolReport {
        protocol: id,
        label: label.into(),
        points,
        max_deviation,
    })
}

/// Fringe points of an arbitrary circuit's `label` marginal, without references.
pub fn circuit_sweep(circuit: &Circuit, label: &str, scale: f64, phis: &[f64]) -> Result<Vec<FringePoint>> {
    let sim = Simulator::new(circuit)?;
    phis.par_iter()
        .map(|&phi| -> Result<FringePoint> {
            let distribution = sim.run(phi, &SimOptions::default())?.marginal(&[label])?;
            let (mean, variance) = signal_stats(&distribution, label, scale)?;
            Ok(FringePoint {
                phi,
                distribution,
                mean,
                variance,
                reference: BTreeMap::new(),
                max_abs_error: None,
            })
        })
        .collect()
}

/// `δφ = Δs/|d⟨s⟩/dφ|` for signal `s = scale·label` of an arbitrary circuit.
pub fn sensitivity_of(circuit: &Circuit, label: &str, scale: f64, phi0: f64) -> Result<Sensitivity> {
    let sim = Simulator::new(circuit)?;
    let opts = SimOptions::default();
    let mean_at = |phi: f64| -> Result<f64> { Ok(scale * sim.run(phi, &opts)?.expectation(label)?) };
    let central = |h: f64| -> Result<f64> { Ok((mean_at(phi0 + h)? - mean_at(phi0 - h)?) / (2.0 * h)) };
    let d_h = central(FD_STEP)?;
    let d_h2 = central(FD_STEP / 2.0)?;
    let derivative = (4.0 * d_h2 - d_h) / 3.0;
    if derivative.abs() <= DERIV_FLOOR {
        return Err(Error::DegenerateOperatingPoint(derivative));
    }
    let dist = sim.run(phi0, &opts)?;
    let (mean, variance) = signal_stats(&dist, label, scale)?;
    let std_dev = variance.max(0.0).sqrt();
    Ok(Sensitivity {
        phi0,
        mean,
        std_dev,
        derivative,
        delta_phi: std_dev / derivative.abs(),
    })
}

pub fn sensitivity(id: ProtocolId, phi0: f64) -> Result<Sensitivity> {
    sensitivity_of(&id.build()?, id.output_label(), id.signal_scale(), phi0)
}

/// Least-squares slope and intercept of `log y` against `log x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::OutOfRange("a power-law fit needs at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::OutOfRange("power-law fit needs positive data".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::OutOfRange("power-law fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Fit `δφ ∝ resource^exponent` across `params`, each at its own operating
/// point. The resource is `N`, or `|α|²` for coherent families.
pub fn scaling_fit(template: ProtocolId, params: &[f64]) -> Result<ScalingFit> {
    let points = params
        .par_iter()
        .map(|&p| -> Result<ScalingPoint> {
            let id = template.with_param(p);
            let s = sensitivity(id, id.operating_point())?;
            Ok(ScalingPoint {
                param: id.param(),
                resource: id.resource(),
                delta_phi: s.delta_phi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.resource, p.delta_phi)).collect();
    let (exponent, intercept) = fit_power_law(&xy)?;
    Ok(ScalingFit {
        exponent,
        intercept,
        points,
    })
}

/// Conditional fringes `p_{x|y}`, the flat `y`-marginal and `z = xy`.
pub fn conditional_fringes(id: ProtocolId, phis: &[f64]) -> Result<ConditionalReport> {
    if !id.is_postselected() {
        return Err(Error::Unsupported(format!(
            "{} is not a post-selected protocol",
            id.name()
        )));
    }
    let circuit = id.build()?;
    let sim = Simulator::new(&circuit)?;
    let points = phis
        .par_iter()
        .map(|&phi| -> Result<ConditionalPoint> {
            let joint = sim.run(phi, &SimOptions::default())?;
            let xy = joint.marginal(&["x", "y"])?;
            let mut r = BTreeMap::new();
            let mut x_marginal = BTreeMap::new();
            let mut x_given_y = BTreeMap::new();
            let mut reference_x_given_y = BTreeMap::new();
            for y in [Value::MINUS, Value::PLUS] {
                let ry = xy.prob("y", y)?;
                r.insert(y, ry);
                for x in [Value::MINUS, Value::PLUS] {
                    let pxy = xy.probability(&[x, y]);
                    x_given_y.insert((x, y), if ry > 0.0 { pxy / ry } else { 0.0 });
                    if let Some(v) = id.reference_conditional(phi, x.get(), y.get()) {
                        reference_x_given_y.insert((x, y), v);
                    }
                }
            }
            for x in [Value::MINUS, Value::PLUS] {
                x_marginal.insert(x, xy.prob("x", x)?);
            }
            let zd = joint.marginal(&["z"])?;
            let mut z = BTreeMap::new();
            let mut reference_z = BTreeMap::new();
            for v in [Value::MINUS, Value::PLUS] {
                z.insert(v, zd.probability(&[v]));
                if let Some(p) = id.reference_probability(phi, v, 0.0) {
                    reference_z.insert(v, p);
                }
            }
            Ok(ConditionalPoint {
                phi,
                r,
                x_given_y,
                x_marginal,
                z,
                reference_x_given_y,
                reference_z,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_deviation: f64 = 0.0;
    for p in &points {
        for (k, v) in &p.reference_x_given_y {
            max_deviation = max_deviation.max((p.x_given_y[k] - v).abs());
        }
        for (k, v) in &p.reference_z {
            max_deviation = max_deviation.max((p.z[k] - v).abs());
        }
    }
    Ok(ConditionalReport {
        protocol: id,
        points,
        max_deviation,
    })
}

/// State entering the phase shifter, per pre-phase measurement record.
pub fn prepared_state(id: ProtocolId) -> Result<PreparedState> {
    prepared_state_of(&id.build()?)
}

pub fn prepared_state_of(circuit: &Circuit) -> Result<PreparedState> {
    use crate::circuit::Instruction;
    let phase_dep = |ins: &Instruction| match ins {
        Instruction::Unitary { gate, .. } | Instruction::Conditional { gate, .. } => gate.depends_on_phi(),
        _ => false,
    };
    let stop = circuit
        .instructions
        .iter()
        .position(phase_dep)
        .ok_or_else(|| Error::Unsupported("circuit has no phase-dependent gate".into()))?;
    let mut probe_wires: Vec<usize> = circuit
        .instructions
        .iter()
        .filter(|i| phase_dep(i))
        .flat_map(|i| match i {
            Instruction::Unitary { wires, .. } | Instruction::Conditional { wires, .. } => wires.clone(),
            _ => Vec::new(),
        })
        .collect();
    probe_wires.sort_unstable();
    probe_wires.dedup();
    let sim = Simulator::new(circuit)?;
    let (branches, _) = sim.branches(&circuit.input_state()?, 0.0, stop, 0.0)?;
    let branches = branches
        .into_iter()
        .map(|b| PreparedBranch {
            outcomes: b
                .record
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (circuit.classical[i].name.clone(), v)))
                .collect(),
            probability: b.weight,
            state: b.state,
        })
        .collect();
    Ok(PreparedState { probe_wires, branches })
}

/// Compare the output-wire distributions of two protocols on the default
/// grid, with the exact or truncation-limited tolerance as appropriate.
pub fn compare_protocols(a: ProtocolId, b: ProtocolId, phis: &[f64]) -> Result<Verdict> {
    let tol = if a.family() == Family::Coherent || b.family() == Family::Coherent {
        TOL_COHERENT
    } else {
        TOL_EXACT
    };
    let mut q = EquivalenceQuery::new(a.build()?, b.build()?, Domain::Full, Compare::JointDistribution);
    q.declared_inputs = true;
    q.observe = Some(vec![a.output_label().into()]);
    q.tol = tol;
    q.phis = phis.to_vec();
    check_equivalence(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn power_law_recovers_slope() {
        let pts: Vec<(f64, f64)> = (1..6).map(|n| (n as f64, 3.0 * (n as f64).powf(-0.5))).collect();
        let (s, b) = fit_power_law(&pts).unwrap();
        assert!((s + 0.5).abs() < 1e-12);
        assert!((b - 3f64.ln()).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (1..6).map(|n| (n as f64, 0.2)).collect();
        assert!(fit_power_law(&flat).unwrap().0.abs() < 1e-12);
    }

    #[test]
    fn noon_sensitivity_is_heisenberg() {
        for n in 1..=4 {
            let id = ProtocolId::Noon(n);
            let s = sensitivity(id, PI / (2.0 * n as f64)).unwrap();
            assert!((s.delta_phi - 1.0 / n as f64).abs() < 1e-6, "N={n}: {s:?}");
        }
    }

    #[test]
    fn degenerate_point_is_rejected() {
        assert!(matches!(
            sensitivity(ProtocolId::Noon(2), 0.0),
            Err(Error::DegenerateOperatingPoint(_))
        ));
    }
}
