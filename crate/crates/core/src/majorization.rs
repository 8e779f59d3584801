//! Additive and multiplicative majorization, the shifted-vector lemma, and
//! the classical relations (Lewent, Fan, Weyl) used to bound determinants.
//!
//! Vectors are always sorted descending internally, so every predicate is
//! invariant under permutation of its arguments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_general, eig_hermitian, spec_multiset_equal, svd_values};
use crate::linalg::{ComplexMatrix, ComplexSpectrum, Spectrum};

/// Multiset tolerance for deciding that one vector is a permutation of
/// another in the lemma hypotheses.
pub const PERMUTATION_TOL: f64 = 1e-12;

/// Positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Accepts weights whose sum is within `1e-12` of one and rescales them
    /// to remove that drift; anything further off is an error.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::WeightError("at least one weight is required".into()));
        }
        if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::WeightError(format!("weight {bad} is not positive")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightError(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(w.into_iter().map(|x| x / sum).collect()))
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::WeightError("at least one weight is required".into()));
        }
        Ok(Self(vec![1.0 / m as f64; m]))
    }

    /// Normalizes arbitrary positive values onto the simplex.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() || raw.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::WeightError(
                "weights must be positive and finite".into(),
            ));
        }
        let sum: f64 = raw.iter().sum();
        Ok(Self(raw.iter().map(|x| x / sum).collect()))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Outcome of a majorization test.
///
/// `failing_prefix` is the 1-based length of the first prefix that breaks
/// the relation (`n` when only the total-equality requirement fails).
/// `slack` is the smallest prefix gap `y − x` (sums or products).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub failing_prefix: Option<usize>,
    pub slack: f64,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn verdict(
    prefixes: impl Iterator<Item = (f64, f64, f64)>,
    total: Option<(f64, f64, f64)>,
    n: usize,
) -> MajorizationVerdict {
    let mut failing = None;
    let mut slack = f64::INFINITY;
    for (l, (px, py, tol)) in prefixes.enumerate() {
        slack = slack.min(py - px);
        if failing.is_none() && px > py + tol {
            failing = Some(l + 1);
        }
    }
    if failing.is_none() {
        if let Some((sx, sy, tol)) = total {
            if (sx - sy).abs() > tol {
                failing = Some(n);
            }
        }
    }
    if n == 0 {
        slack = 0.0;
    }
    MajorizationVerdict {
        holds: failing.is_none(),
        failing_prefix: failing,
        slack,
    }
}

/// `x ≺ y` (or `x ≺_w y` when `weak`): descending prefix sums of `x` never
/// exceed those of `y`, with equal totals unless weak. Each comparison uses
/// the tolerance `1e-10·(1 + ‖y‖₁)`.
pub fn majorizes_add(x: &Spectrum, y: &Spectrum, weak: bool) -> Result<MajorizationVerdict> {
    majorizes_add_slice(x.values(), y.values(), weak)
}

pub fn majorizes_add_slice(x: &[f64], y: &[f64], weak: bool) -> Result<MajorizationVerdict> {
    check_lengths(x, y)?;
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let tol = 1e-10 * (1.0 + ys.iter().map(|v| v.abs()).sum::<f64>());
    let mut px = 0.0;
    let mut py = 0.0;
    let prefixes: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(&ys)
        .map(|(a, b)| {
            px += a;
            py += b;
            (px, py, tol)
        })
        .collect();
    let total = (!weak).then_some((px, py, tol));
    Ok(verdict(prefixes.into_iter(), total, xs.len()))
}

/// `x ≺_log y` (or `≺_wlog` when `weak`) for nonnegative vectors, comparing
/// raw prefix products so zero entries need no special handling.
///
/// The tolerance at prefix `ℓ` is `1e-10·max(Πx, Πy) + 1e-11·ℓ·m^ℓ` with
/// `m` the largest entry of either vector; the second term absorbs the
/// absolute rounding error of products whose factors carry errors on the
/// scale of `m`.
pub fn majorizes_log(x: &Spectrum, y: &Spectrum, weak: bool) -> Result<MajorizationVerdict> {
    majorizes_log_slice(x.values(), y.values(), weak)
}

pub fn majorizes_log_slice(x: &[f64], y: &[f64], weak: bool) -> Result<MajorizationVerdict> {
    check_lengths(x, y)?;
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::BadDomain(
            "log-majorization needs nonnegative entries".into(),
        ));
    }
    let xs = sorted_desc(x);
    let ys = sorted_desc(y);
    let m = xs
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(ys.first().copied().unwrap_or(0.0));
    let tol = |l: usize, px: f64, py: f64| 1e-10 * px.max(py) + 1e-11 * l as f64 * m.powi(l as i32);
    let mut px = 1.0;
    let mut py = 1.0;
    let prefixes: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(&ys)
        .enumerate()
        .map(|(k, (a, b))| {
            px *= a;
            py *= b;
            (px, py, tol(k + 1, px, py))
        })
        .collect();
    let n = xs.len();
    let total = (!weak).then(|| (px, py, tol(n, px, py)));
    Ok(verdict(prefixes.into_iter(), total, n))
}

/// Report of a shifted-vector lemma check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// Π(1+xₖ) for the shift form, Π(1−xₖ) for the reverse form.
    pub lhs: f64,
    /// Same product over `y`.
    pub rhs: f64,
    /// Signed margin in the direction of the claimed strict inequality;
    /// positive when the claim holds.
    pub margin: f64,
    /// `(1+x) ≺_wlog (1+y)`; only present for the shift form.
    pub shifted_weak_log: Option<MajorizationVerdict>,
    /// `(1+x) ≺_log (1+y)` fails (totals differ); only for the shift form.
    pub shifted_strong_log_fails: Option<bool>,
    pub holds: bool,
}

fn lemma_hypotheses(x: &Spectrum, y: &Spectrum) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::HypothesisFailed(format!(
            "lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.values().iter().chain(y.values()).any(|v| *v < 0.0) {
        return Err(Error::HypothesisFailed(
            "entries must be nonnegative".into(),
        ));
    }
    let lm = majorizes_log(x, y, false)?;
    if !lm.holds {
        return Err(Error::HypothesisFailed(format!(
            "x is not log-majorized by y (prefix {:?})",
            lm.failing_prefix
        )));
    }
    let same = spec_multiset_equal(
        &ComplexSpectrum::from_real(x.values()),
        &ComplexSpectrum::from_real(y.values()),
        PERMUTATION_TOL,
    )?;
    if same {
        return Err(Error::HypothesisFailed("y is a permutation of x".into()));
    }
    Ok(())
}

/// For nonnegative `x ≺_log y` with `y` not a permutation of `x`: checks
/// `(1+x) ≺_wlog (1+y)` and the strict bound `Π(1+xₖ) < Π(1+yₖ)`.
pub fn lemma_shift(x: &Spectrum, y: &Spectrum) -> Result<LemmaReport> {
    lemma_hypotheses(x, y)?;
    let sx: Vec<f64> = x.values().iter().map(|v| 1.0 + v).collect();
    let sy: Vec<f64> = y.values().iter().map(|v| 1.0 + v).collect();
    let weak = majorizes_log_slice(&sx, &sy, true)?;
    let strong = majorizes_log_slice(&sx, &sy, false)?;
    let lhs: f64 = sx.iter().product();
    let rhs: f64 = sy.iter().product();
    let margin = rhs - lhs;
    Ok(LemmaReport {
        lhs,
        rhs,
        margin,
        holds: weak.holds && margin > 0.0,
        shifted_weak_log: Some(weak),
        shifted_strong_log_fails: Some(!strong.holds),
    })
}

/// Reverse form on `[0, 1)`: checks `Π(1−xₖ) > Π(1−yₖ)`.
pub fn lemma_reverse(x: &Spectrum, y: &Spectrum) -> Result<LemmaReport> {
    if x.values().iter().chain(y.values()).any(|v| *v >= 1.0) {
        return Err(Error::HypothesisFailed("entries must lie in [0, 1)".into()));
    }
    lemma_hypotheses(x, y)?;
    let lhs: f64 = x.values().iter().map(|v| 1.0 - v).product();
    let rhs: f64 = y.values().iter().map(|v| 1.0 - v).product();
    let margin = lhs - rhs;
    Ok(LemmaReport {
        lhs,
        rhs,
        margin,
        shifted_weak_log: None,
        shifted_strong_log_fails: None,
        holds: margin > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LewentReport {
    /// (1 + Σαᵢxᵢ) / (1 − Σαᵢxᵢ)
    pub lhs: f64,
    /// Π((1 + xᵢ)/(1 − xᵢ))^{αᵢ}
    pub rhs: f64,
    /// All xᵢ equal within `1e-10`.
    pub equality: bool,
    pub holds: bool,
}

pub fn lewent(x: &[f64], alpha: &WeightVector) -> Result<LewentReport> {
    if x.len() != alpha.len() {
        return Err(Error::BadDomain(format!(
            "{} values for {} weights",
            x.len(),
            alpha.len()
        )));
    }
    if let Some(bad) = x.iter().find(|v| !(**v >= 0.0 && **v < 1.0)) {
        return Err(Error::BadDomain(format!("{bad} is outside [0, 1)")));
    }
    let mean: f64 = x.iter().zip(alpha.values()).map(|(v, a)| v * a).sum();
    let lhs = (1.0 + mean) / (1.0 - mean);
    let log_rhs: f64 = x
        .iter()
        .zip(alpha.values())
        .map(|(v, a)| a * ((1.0 + v) / (1.0 - v)).ln())
        .sum();
    let rhs = log_rhs.exp();
    let spread = x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - x.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LewentReport {
        lhs,
        rhs,
        equality: spread <= 1e-10,
        holds: lhs <= rhs + 1e-12 * rhs,
    })
}

/// `λ(h + s) ≺ λ(h) + λ(s)` for Hermitian `h`, `s` (eigenvalues descending).
pub fn fan_check(h: &ComplexMatrix, s: &ComplexMatrix) -> Result<MajorizationVerdict> {
    h.same_order(s)?;
    let (lh, _) = eig_hermitian(h)?;
    let (ls, _) = eig_hermitian(s)?;
    let (lsum, _) = eig_hermitian(&(h + s))?;
    let combined: Vec<f64> = lh
        .values()
        .iter()
        .zip(ls.values())
        .map(|(a, b)| a + b)
        .collect();
    majorizes_add_slice(lsum.values(), &combined, false)
}

/// `|λ(a)| ≺_log σ(a)`; the totals agree since both equal `|det a|`.
pub fn weyl_check(a: &ComplexMatrix) -> Result<MajorizationVerdict> {
    let moduli = eig_general(a)?.moduli();
    let sigma = svd_values(a);
    majorizes_log(&moduli, &sigma, false)
}
