use super::Value;
use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use std::collections::BTreeMap;

/// Joint distribution over labelled classical outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<String>,
    probs: BTreeMap<Vec<Value>, f64>,
    states: Option<BTreeMap<Vec<Value>, StateVector>>,
    dropped: f64,
}

impl OutcomeDistribution {
    /// Probabilities above `-1e-14` are accepted and negatives clamped to 0.
    pub fn new(labels: Vec<String>, entries: impl IntoIterator<Item = (Vec<Value>, f64)>) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (k, p) in entries {
            if k.len() != labels.len() {
                return Err(Error::DimMismatch {
                    expected: labels.len(),
                    found: k.len(),
                });
            }
            if p < -1e-14 || !p.is_finite() {
                return Err(Error::OutOfRange(format!("probability {p}")));
            }
            *probs.entry(k).or_insert(0.0) += p.max(0.0);
        }
        Ok(Self {
            labels,
            probs,
            states: None,
            dropped: 0.0,
        })
    }

    /// A single certain outcome.
    pub fn certain(labels: Vec<String>, key: Vec<Value>) -> Result<Self> {
        Self::new(labels, [(key, 1.0)])
    }

    pub(crate) fn with_states(mut self, states: BTreeMap<Vec<Value>, StateVector>) -> Self {
        self.states = Some(states);
        self
    }

    pub(crate) fn with_dropped(mut self, dropped: f64) -> Self {
        self.dropped = dropped;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Value>, f64> {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Value>, f64)> {
        self.probs.iter().map(|(k, &p)| (k, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Probability mass removed by branch pruning.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped
    }

    pub fn probability(&self, key: &[Value]) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    pub fn conditional_state(&self, key: &[Value]) -> Option<&StateVector> {
        self.states.as_ref().and_then(|s| s.get(key))
    }

    pub fn conditional_states(&self) -> Option<&BTreeMap<Vec<Value>, StateVector>> {
        self.states.as_ref()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::LabelMissing(label.to_string()))
    }

    /// Marginal over the listed labels, in the listed order.
    pub fn marginal<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let pos = keep
            .iter()
            .map(|l| self.position(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let labels = keep.iter().map(|l| l.as_ref().to_string()).collect();
        let mut out = Self::new(
            labels,
            self.probs
                .iter()
                .map(|(k, &p)| (pos.iter().map(|&i| k[i]).collect(), p)),
        )?;
        out.dropped = self.dropped;
        Ok(out)
    }

    /// Probability that `label` takes `value`.
    pub fn prob(&self, label: &str, value: Value) -> Result<f64> {
        let i = self.position(label)?;
        Ok(self.iter().filter(|(k, _)| k[i] == value).map(|(_, p)| p).sum())
    }

    pub fn expectation(&self, label: &str) -> Result<f64> {
        let i = self.position(label)?;
        Ok(self.iter().map(|(k, p)| p * k[i].get()).sum::<f64>() / self.total())
    }

    pub fn variance(&self, label: &str) -> Result<f64> {
        let i = self.position(label)?;
        let mean = self.expectation(label)?;
        Ok(self.iter().map(|(k, p)| p * (k[i].get() - mean).powi(2)).sum::<f64>() / self.total())
    }

    /// Distribution conditioned on `label == value`, renormalized. The
    /// conditioning label is kept.
    pub fn conditional(&self, label: &str, value: Value) -> Result<Self> {
        let i = self.position(label)?;
        let mass = self.prob(label, value)?;
        if mass <= 0.0 {
            return Err(Error::OutOfRange(format!("{label} = {value} has probability 0")));
        }
        let mut out = Self::new(
            self.labels.clone(),
            self.iter()
                .filter(|(k, _)| k[i] == value)
                .map(|(k, p)| (k.clone(), p / mass)),
        )?;
        if let Some(states) = &self.states {
            out.states = Some(
                states
                    .iter()
                    .filter(|(k, _)| k[i] == value)
                    .map(|(k, s)| (k.clone(), s.clone()))
                    .collect(),
            );
        }
        Ok(out)
    }

    /// Rename labels positionally.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::DimMismatch {
                expected: self.labels.len(),
                found: labels.len(),
            });
        }
        let mut out = self.clone();
        out.labels = labels.iter().map(|l| l.as_ref().to_string()).collect();
        Ok(out)
    }

    /// `½ Σ |p − q|`; `other` is reordered to this label order.
    pub fn total_variation(&self, other: &Self) -> Result<f64> {
        let mut a = self.labels.clone();
        let mut b = other.labels.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::IncompatibleQuery(format!(
                "labels {:?} vs {:?}",
                self.labels, other.labels
            )));
        }
        let other = other.marginal(&self.labels)?;
        let mut keys: Vec<&Vec<Value>> = self.probs.keys().chain(other.probs.keys()).collect();
        keys.sort();
        keys.dedup();
        Ok(0.5
            * keys
                .into_iter()
                .map(|k| (self.probability(k) - other.probability(k)).abs())
                .sum::<f64>())
    }

    /// Largest per-outcome absolute difference, and the outcome where it occurs.
    pub fn max_abs_difference(&self, other: &Self) -> Result<(f64, Option<Vec<Value>>)> {
        let other = other.marginal(&self.labels)?;
        let mut worst = (0.0, None);
        for k in self.probs.keys().chain(other.probs.keys()) {
            let d = (self.probability(k) - other.probability(k)).abs();
            if d > worst.0 || worst.1.is_none() {
                worst = (d.max(worst.0), Some(k.clone()));
            }
        }
        Ok(worst)
    }

    /// Pushforward through `f`, replacing the input labels by `output`.
    pub(crate) fn pushforward(
        &self,
        inputs: &[usize],
        output: &str,
        mut f: impl FnMut(&[Value]) -> Result<Value>,
    ) -> Result<Self> {
        let keep: Vec<usize> = (0..self.labels.len()).filter(|i| !inputs.contains(i)).collect();
        let mut labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        labels.push(output.to_string());
        let mut entries = Vec::with_capacity(self.probs.len());
        for (k, &p) in &self.probs {
            let args: Vec<Value> = inputs.iter().map(|&i| k[i]).collect();
            let mut key: Vec<Value> = keep.iter().map(|&i| k[i]).collect();
            key.push(f(&args)?);
            entries.push((key, p));
        }
        let mut out = Self::new(labels, entries)?;
        out.dropped = self.dropped;
        Ok(out)
    }
}
