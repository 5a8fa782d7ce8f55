use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A classical outcome value.
///
/// Stored as `f64` rounded to 12 significant digits with `-0` folded to `0`,
/// so equal outcomes computed along different paths compare equal.
#[derive(Clone, Copy, Debug)]
pub struct Value(f64);

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl Value {
    pub fn new(x: f64) -> Self {
        Value(round12(x))
    }

    pub fn int(n: i64) -> Self {
        Value(n as f64)
    }

    pub const PLUS: Value = Value(1.0);
    pub const MINUS: Value = Value(-1.0);

    /// `+1` for true, `−1` for false.
    pub fn sign(plus: bool) -> Self {
        if plus {
            Self::PLUS
        } else {
            Self::MINUS
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn as_int(self) -> Option<i64> {
        (self.0.fract() == 0.0 && self.0.abs() < 9.0e15).then_some(self.0 as i64)
    }

    pub fn as_count(self) -> Option<usize> {
        self.as_int().and_then(|n| usize::try_from(n).ok())
    }

    pub fn is_sign(self) -> bool {
        self.0 == 1.0 || self.0 == -1.0
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}", self.0),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_f64(self.0),
        }
    }
}

/// Alphabet of a classical wire. `Sign ⊂ Int ⊂ Real`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalKind {
    Sign,
    Int,
    Real,
}

impl ClassicalKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::Sign => "sign",
            ClassicalKind::Int => "int",
            ClassicalKind::Real => "real",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sign" => Some(ClassicalKind::Sign),
            "int" => Some(ClassicalKind::Int),
            "real" => Some(ClassicalKind::Real),
            _ => None,
        }
    }

    /// Can a wire of this kind store values of kind `k`?
    pub fn accepts(self, k: ClassicalKind) -> bool {
        k <= self
    }

    pub fn admits(self, v: Value) -> bool {
        match self {
            ClassicalKind::Sign => v.is_sign(),
            ClassicalKind::Int => v.as_int().is_some(),
            ClassicalKind::Real => true,
        }
    }
}

impl fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_values() {
        assert_eq!(Value::new(1.0000000000000002), Value::int(1));
        assert_eq!(Value::new(-0.0), Value::new(0.0));
        assert_eq!(Value::new(-0.0).get().to_bits(), 0.0f64.to_bits());
        assert!(Value::MINUS < Value::new(0.0));
        assert_eq!(Value::new(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(Value::int(-3).to_string(), "-3");
    }

    #[test]
    fn kinds() {
        assert!(ClassicalKind::Int.accepts(ClassicalKind::Sign));
        assert!(!ClassicalKind::Sign.accepts(ClassicalKind::Int));
        assert!(ClassicalKind::Sign.admits(Value::MINUS));
        assert!(!ClassicalKind::Sign.admits(Value::int(0)));
        assert!(!ClassicalKind::Int.admits(Value::new(0.5)));
    }
}
