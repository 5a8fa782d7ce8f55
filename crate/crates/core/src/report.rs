//! Deterministic JSON and CSV renderings of results.
//!
//! JSON objects have sorted keys and every float is rounded to 12
//! significant digits, so identical inputs give byte-identical output.

use crate::circuit::Verdict;
use crate::measurement::{round12, OutcomeDistribution, Value};
use crate::protocols::{ConditionalReport, FringePoint, ProtocolId, ProtocolReport, ScalingFit, Sensitivity};
use serde_json::{json, Map, Value as Json};
use std::collections::BTreeSet;
use std::fmt::Write;

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json(v: &Json) -> String {
    let mut v = v.clone();
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).unwrap_or_default();
    s.push('\n');
    s
}

fn round_floats(v: &mut Json) {
    match v {
        Json::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round12).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Json::Array(a) => a.iter_mut().for_each(round_floats),
        Json::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// A number rounded to 12 significant digits, as text.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round12(x))
}

fn value(v: Value) -> Json {
    serde_json::to_value(v).unwrap_or(Json::Null)
}

fn opt(x: Option<f64>) -> Json {
    x.map_or(Json::Null, |x| json!(x))
}

pub fn distribution_json(d: &OutcomeDistribution) -> Json {
    let outcomes: Vec<Json> = d
        .iter()
        .map(|(key, p)| {
            let o: Map<String, Json> = d.labels().iter().cloned().zip(key.iter().map(|&v| value(v))).collect();
            json!({ "outcome": o, "probability": p })
        })
        .collect();
    json!({
        "labels": d.labels(),
        "outcomes": outcomes,
        "total": d.total(),
        "dropped_mass": d.dropped_mass(),
    })
}

fn point_json(p: &FringePoint) -> Json {
    let probs: Map<String, Json> = p
        .distribution
        .iter()
        .map(|(k, q)| (k[0].to_string(), json!(q)))
        .collect();
    let reference: Map<String, Json> = p.reference.iter().map(|(k, q)| (k.to_string(), json!(q))).collect();
    json!({
        "phi": p.phi,
        "probabilities": probs,
        "reference": reference,
        "mean": p.mean,
        "variance": p.variance,
        "max_abs_error": opt(p.max_abs_error),
    })
}

/// Fringe points of a circuit file, without a protocol.
pub fn points_json(label: &str, points: &[FringePoint]) -> Json {
    json!({
        "label": label,
        "points": points.iter().map(point_json).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &ProtocolReport) -> Json {
    json!({
        "protocol": r.protocol.to_string(),
        "label": r.label,
        "points": r.points.iter().map(point_json).collect::<Vec<_>>(),
        "max_deviation": opt(r.max_deviation),
    })
}

pub fn sensitivity_json(id: ProtocolId, s: &Sensitivity) -> Json {
    json!({
        "protocol": id.to_string(),
        "phi0": s.phi0,
        "mean": s.mean,
        "std_dev": s.std_dev,
        "derivative": s.derivative,
        "delta_phi": s.delta_phi,
    })
}

pub fn scaling_json(family: &str, fit: &ScalingFit) -> Json {
    let points: Vec<Json> = fit
        .points
        .iter()
        .map(|p| json!({ "param": p.param, "resource": p.resource, "delta_phi": p.delta_phi }))
        .collect();
    json!({
        "family": family,
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "points": points,
    })
}

pub fn verdict_json(v: &Verdict) -> Json {
    let witness = v.witness.as_ref().map_or(Json::Null, |w| {
        json!({
            "phi": w.phi,
            "input": w.input,
            "outcome": w.outcome.as_ref().map(|o| o.iter().map(|&x| value(x)).collect::<Vec<_>>()),
            "description": w.description,
        })
    });
    json!({
        "equal": v.equal,
        "max_deviation": v.max_deviation,
        "witness": witness,
    })
}

pub fn conditional_json(r: &ConditionalReport) -> Json {
    let keyed = |m: &std::collections::BTreeMap<Value, f64>| -> Map<String, Json> {
        m.iter().map(|(k, p)| (k.to_string(), json!(p))).collect()
    };
    let pairs = |m: &std::collections::BTreeMap<(Value, Value), f64>| -> Map<String, Json> {
        m.iter().map(|((x, y), p)| (format!("x={x}|y={y}"), json!(p))).collect()
    };
    let points: Vec<Json> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "phi": p.phi,
                "r": keyed(&p.r),
                "x_given_y": pairs(&p.x_given_y),
                "x_marginal": keyed(&p.x_marginal),
                "z": keyed(&p.z),
                "reference_x_given_y": pairs(&p.reference_x_given_y),
                "reference_z": keyed(&p.reference_z),
            })
        })
        .collect();
    json!({
        "protocol": r.protocol.to_string(),
        "points": points,
        "max_deviation": r.max_deviation,
    })
}

/// Long fringe table: one row per grid point and outcome.
pub fn fringe_csv(points: &[FringePoint]) -> String {
    let mut s = String::from("phi,outcome,probability,reference_value,abs_error\n");
    for p in points {
        let outcomes: BTreeSet<Value> = p
            .distribution
            .iter()
            .map(|(k, _)| k[0])
            .chain(p.reference.keys().copied())
            .collect();
        for o in outcomes {
            let prob = p.distribution.probability(&[o]);
            let (reference, err) = match p.reference.get(&o) {
                Some(&q) => (fmt_num(q), fmt_num((prob - q).abs())),
                None => (String::new(), String::new()),
            };
            writeln!(s, "{},{o},{},{reference},{err}", fmt_num(p.phi), fmt_num(prob)).ok();
        }
    }
    s
}

/// Wide fringe table: `phi,p_plus,p_minus` for two-valued outputs,
/// otherwise one `p_<value>` column per outcome.
pub fn fringe_csv_wide(points: &[FringePoint]) -> String {
    let values: BTreeSet<Value> = points
        .iter()
        .flat_map(|p| {
            p.distribution
                .iter()
                .map(|(k, _)| k[0])
                .chain(p.reference.keys().copied())
        })
        .collect();
    let sign = values.iter().all(|v| v.is_sign());
    let columns: Vec<Value> = if sign {
        vec![Value::PLUS, Value::MINUS]
    } else {
        values.into_iter().collect()
    };
    let mut s = String::from("phi");
    for v in &columns {
        match (sign, *v == Value::PLUS) {
            (true, true) => s.push_str(",p_plus"),
            (true, false) => s.push_str(",p_minus"),
            _ => write!(s, ",p_{v}").unwrap_or(()),
        }
    }
    s.push('\n');
    for p in points {
        s.push_str(&fmt_num(p.phi));
        for v in &columns {
            write!(s, ",{}", fmt_num(p.distribution.probability(&[*v]))).ok();
        }
        s.push('\n');
    }
    s
}

/// Joint distribution as CSV: one column per label, then the probability.
pub fn distribution_csv(d: &OutcomeDistribution) -> String {
    let mut s = d.labels().join(",");
    s.push_str(if d.labels().is_empty() {
        "probability\n"
    } else {
        ",probability\n"
    });
    for (k, p) in d.iter() {
        for v in k {
            write!(s, "{v},").ok();
        }
        writeln!(s, "{}", fmt_num(p)).ok();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_rounded() {
        let s = to_json(&json!({ "b": 0.1 + 0.2, "a": [1.0 / 3.0] }));
        assert_eq!(s, "{\n  \"a\": [\n    0.333333333333\n  ],\n  \"b\": 0.3\n}\n");
    }

    #[test]
    fn noon_csv_columns() {
        let r = crate::protocols::fringe_sweep(ProtocolId::Noon(2), &[0.0, 1.0]).unwrap();
        let wide = fringe_csv_wide(&r.points);
        assert!(wide.starts_with("phi,p_plus,p_minus\n0,1,0\n"), "{wide}");
        let long = fringe_csv(&r.points);
        assert_eq!(long.lines().count(), 5);
        assert_eq!(to_json(&report_json(&r)), to_json(&report_json(&r)));
    }
}
