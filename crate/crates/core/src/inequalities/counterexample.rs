//! The published 2×2 example showing that the corollary's upper bound has
//! no matching lower bound.

use serde::{Deserialize, Serialize};

use super::report::{EqualityClassification, ExtendedReal, InequalityReport};
use super::verify::corollary_terms;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::majorization::WeightVector;

/// Published four-decimal value of the weighted lower product.
pub const PUBLISHED_LOWER: f64 = 0.6281;
/// Published four-decimal value of the determinant ratio.
pub const PUBLISHED_MID: f64 = 0.6250;
/// Backstop on the unrounded values, covering truncation as well as rounding.
pub const PUBLISHED_ABS_TOL: f64 = 5e-4;

/// `(Z₁, Z₂, U)` exactly as published; weights are ½, ½.
pub fn published_matrices() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let z1 = ComplexMatrix::from_real_rows(&[vec![0.34, -0.15], vec![-0.15, 0.07]]);
    let z2 = ComplexMatrix::from_real_rows(&[vec![0.02, -0.01], vec![-0.01, 0.01]]);
    let u = ComplexMatrix::from_real_rows(&[vec![-0.60, 0.80], vec![0.80, 0.60]]);
    (z1.unwrap(), z2.unwrap(), u.unwrap())
}

/// Rounds half away from zero to four decimals.
pub fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOutcome {
    pub report: InequalityReport,
    pub lower: f64,
    pub mid: f64,
    pub lower_rounded: f64,
    pub mid_rounded: f64,
    pub lower_matches: bool,
    pub mid_matches: bool,
    pub lower_exceeds_mid: bool,
    pub passed: bool,
}

fn matches_published(value: f64, published: f64) -> bool {
    (round4(value) - published).abs() < 1e-12 && (value - published).abs() <= PUBLISHED_ABS_TOL
}

/// Evaluates `ΠₖΠᵢ((1−rᵢₖ)/(1+rᵢₖ))^{1/2}` against
/// `det(I−½Z₁*Z₁−½Z₂*Z₂)/|det(I−U(½|Z₁|+½|Z₂|))|²` for arbitrary inputs.
pub fn counterexample_with(
    z1: &ComplexMatrix,
    z2: &ComplexMatrix,
    u: &ComplexMatrix,
) -> Result<CounterexampleOutcome> {
    let w = WeightVector::uniform(2)?;
    let t = corollary_terms(&[z1.clone(), z2.clone()], &w, u)?;
    let report = InequalityReport::assemble(
        "published_counterexample",
        t.lower,
        t.mid,
        t.upper,
        EqualityClassification::none(),
        vec![
            "lower: weighted product over eigenvalues of Z_1, Z_2".into(),
            "mid: det(I - sum w Z_i*Z_i) / |det(I - U sum w |Z_i|)|^2".into(),
            "the lower side is expected to fail".into(),
        ],
    );
    let lower = t.lower.to_f64();
    let mid = match t.mid {
        ExtendedReal::Finite(v) => v,
        ExtendedReal::Inf => f64::INFINITY,
    };
    let lower_matches = matches_published(lower, PUBLISHED_LOWER);
    let mid_matches = matches_published(mid, PUBLISHED_MID);
    let lower_exceeds_mid = lower > mid;
    Ok(CounterexampleOutcome {
        report,
        lower,
        mid,
        lower_rounded: round4(lower),
        mid_rounded: round4(mid),
        lower_matches,
        mid_matches,
        lower_exceeds_mid,
        passed: lower_matches && mid_matches && lower_exceeds_mid,
    })
}

/// Reproduces the published counterexample.
pub fn published_counterexample() -> CounterexampleOutcome {
    let (z1, z2, u) = published_matrices();
    counterexample_with(&z1, &z2, &u).expect("published matrices are valid contractions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;

    #[test]
    fn reproduces_published_values() {
        let out = published_counterexample();
        assert_eq!(out.lower_rounded, 0.6281);
        assert_eq!(out.mid_rounded, 0.6250);
        assert!(out.lower_exceeds_mid && out.passed);
        assert!(!out.report.holds_lower);
        assert!(out.report.holds_upper);
    }

    #[test]
    fn published_unitary_is_exact() {
        let (_, _, u) = published_matrices();
        assert!(u.unitarity_defect() <= 1e-15);
    }

    #[test]
    fn first_matrix_spectrum() {
        let (z1, _, _) = published_matrices();
        let (r, _) = eig_hermitian(&z1).unwrap();
        assert!((r.values()[0] - 0.40680).abs() < 5e-6);
        assert!((r.values()[1] - 0.00320).abs() < 5e-6);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round4(0.62815), 0.6282);
        assert_eq!(round4(-0.00005), -0.0001);
        assert_eq!(round4(0.625015766), 0.625);
    }

    #[test]
    fn perturbed_input_fails() {
        let (z1, z2, u) = published_matrices();
        let out = counterexample_with(&z1.scale_real(0.9), &z2, &u).unwrap();
        assert!(!out.passed);
    }
}
