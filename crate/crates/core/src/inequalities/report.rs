use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::majorization::WeightVector;

/// Relative tolerance used for every `holds_*` verdict.
pub const HOLD_TOL: f64 = 1e-9;

/// A real number or the symbol `INF`, which stands for a fraction with a
/// vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Inf,
}

impl ExtendedReal {
    /// `f64::INFINITY` for `Inf`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Inf => f64::INFINITY,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, ExtendedReal::Inf)
    }

    /// `Inf` when `den` is at or below `floor`, otherwise `num / den`.
    pub fn ratio(num: f64, den: f64, floor: f64) -> Self {
        if den.abs() <= floor {
            ExtendedReal::Inf
        } else {
            ExtendedReal::Finite(num / den)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Inf => f.write_str("INF"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Inf => s.serialize_str("INF"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"INF\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtendedReal, E> {
                if v == "INF" {
                    Ok(ExtendedReal::Inf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Signed relative gap for the claim `small ≤ big`.
///
/// Finite pairs give `(big − small) / max(|big|, |small|)`; the value lies in
/// `[-2, 2]`, is `0` when both sides vanish, `1` when only `big` is `INF`,
/// `-1` when only `small` is `INF` and `0` when both are.
pub fn relative_gap(small: ExtendedReal, big: ExtendedReal) -> f64 {
    match (small, big) {
        (ExtendedReal::Inf, ExtendedReal::Inf) => 0.0,
        (ExtendedReal::Finite(_), ExtendedReal::Inf) => 1.0,
        (ExtendedReal::Inf, ExtendedReal::Finite(_)) => -1.0,
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (b - a) / scale
            }
        }
    }
}

/// Equality-case markers attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EqualityFlag {
    /// Some eigenvalue of Z is within `1e-9` of one.
    EigenvalueOne,
    /// Spec(UZ) = Spec(−Z) within `1e-7`.
    SpecNegMatch,
    /// Spec(UZ) = Spec(Z) within `1e-7`.
    SpecPosMatch,
    /// All ensemble members agree within `1e-9`.
    AllEnsembleEqual,
    /// ‖U − I‖_max ≤ `1e-8`.
    UIsIdentity,
    /// ‖U + I‖_max ≤ `1e-8`.
    UIsNegIdentity,
    None,
}

impl fmt::Display for EqualityFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sorted, de-duplicated flag set; `[None]` when nothing was detected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EqualityClassification(Vec<EqualityFlag>);

impl EqualityClassification {
    pub fn new(mut flags: Vec<EqualityFlag>) -> Self {
        flags.retain(|f| *f != EqualityFlag::None);
        flags.sort();
        flags.dedup();
        if flags.is_empty() {
            flags.push(EqualityFlag::None);
        }
        Self(flags)
    }

    pub fn none() -> Self {
        Self(vec![EqualityFlag::None])
    }

    pub fn flags(&self) -> &[EqualityFlag] {
        &self.0
    }

    pub fn contains(&self, flag: EqualityFlag) -> bool {
        self.0.contains(&flag)
    }

    pub fn is_none(&self) -> bool {
        self.0 == [EqualityFlag::None]
    }
}

/// Result of evaluating one two-sided determinantal bound.
///
/// `slack_lower` is the relative gap for `lower ≤ mid` and `slack_upper` for
/// `mid ≤ upper`; a slack below `-HOLD_TOL` is a violation. A bound that a
/// verifier does not assert is reported as the trivial bound (`0` below,
/// `INF` above) and explained in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lower: ExtendedReal,
    pub mid: ExtendedReal,
    pub upper: ExtendedReal,
    pub holds_lower: bool,
    pub holds_upper: bool,
    pub slack_lower: f64,
    pub slack_upper: f64,
    #[serde(rename = "equality_flags")]
    pub equality: EqualityClassification,
    pub notes: String,
}

impl InequalityReport {
    pub(crate) fn assemble(
        name: &str,
        lower: ExtendedReal,
        mid: ExtendedReal,
        upper: ExtendedReal,
        equality: EqualityClassification,
        notes: Vec<String>,
    ) -> Self {
        let slack_lower = relative_gap(lower, mid);
        let slack_upper = relative_gap(mid, upper);
        Self {
            name: name.to_string(),
            lower,
            mid,
            upper,
            holds_lower: slack_lower >= -HOLD_TOL,
            holds_upper: slack_upper >= -HOLD_TOL,
            slack_lower,
            slack_upper,
            equality,
            notes: notes.join("; "),
        }
    }

    pub fn holds(&self) -> bool {
        self.holds_lower && self.holds_upper
    }

    pub fn min_slack(&self) -> f64 {
        self.slack_lower.min(self.slack_upper)
    }
}

/// Matrices Z₁…Z_m of a common order with convex weights w₁…w_m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub matrices: Vec<ComplexMatrix>,
    pub weights: WeightVector,
}

impl EnsembleSpec {
    pub fn new(matrices: Vec<ComplexMatrix>, weights: WeightVector) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidMatrix("ensemble needs at least one matrix".into()))?;
        if matrices.len() != weights.len() {
            return Err(Error::WeightError(format!(
                "{} matrices but {} weights",
                matrices.len(),
                weights.len()
            )));
        }
        for m in &matrices {
            first.same_order(m)?;
        }
        Ok(Self { matrices, weights })
    }

    pub fn order(&self) -> usize {
        self.matrices[0].order()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// W = Σ wᵢ Zᵢ.
    pub fn weighted_sum(&self) -> ComplexMatrix {
        ComplexMatrix::weighted_sum(&self.matrices, self.weights.values())
            .expect("validated on construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_real_json() {
        assert_eq!(
            serde_json::to_string(&ExtendedReal::Inf).unwrap(),
            "\"INF\""
        );
        assert_eq!(
            serde_json::to_string(&ExtendedReal::Finite(0.5)).unwrap(),
            "0.5"
        );
        let v: ExtendedReal = serde_json::from_str("3").unwrap();
        assert_eq!(v, ExtendedReal::Finite(3.0));
        assert!(serde_json::from_str::<ExtendedReal>("\"inf\"").is_err());
    }

    #[test]
    fn gaps() {
        use ExtendedReal::*;
        assert_eq!(relative_gap(Finite(1.0), Finite(2.0)), 0.5);
        assert_eq!(relative_gap(Finite(2.0), Finite(1.0)), -0.5);
        assert_eq!(relative_gap(Finite(0.0), Finite(0.0)), 0.0);
        assert_eq!(relative_gap(Finite(5.0), Inf), 1.0);
        assert_eq!(relative_gap(Inf, Finite(5.0)), -1.0);
        assert_eq!(relative_gap(Inf, Inf), 0.0);
    }

    #[test]
    fn classification_normalizes() {
        let c = EqualityClassification::new(vec![
            EqualityFlag::UIsIdentity,
            EqualityFlag::SpecPosMatch,
            EqualityFlag::UIsIdentity,
        ]);
        assert_eq!(
            c.flags(),
            &[EqualityFlag::SpecPosMatch, EqualityFlag::UIsIdentity]
        );
        assert!(EqualityClassification::new(vec![]).is_none());
    }
}
