use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::matrix::Complex;
use crate::error::{Error, Result};

/// Real spectrum kept in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` descending. Non-finite values are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadDomain("spectrum entries must be finite".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self(values)
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

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Complex spectrum in canonical order: descending modulus, then descending
/// real part, then descending imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexSpectrum(Vec<Complex>);

fn canonical_cmp(a: &Complex, b: &Complex) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

impl ComplexSpectrum {
    pub fn new(mut values: Vec<Complex>) -> Self {
        values.sort_by(canonical_cmp);
        Self(values)
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Moduli sorted descending.
    pub fn moduli(&self) -> Spectrum {
        let m: Vec<f64> = self.0.iter().map(|z| z.norm()).collect();
        Spectrum::new(m).expect("finite moduli")
    }

    pub fn sum(&self) -> Complex {
        self.0.iter().sum()
    }

    pub fn product(&self) -> Complex {
        self.0.iter().product()
    }
}

/// Multiset equality of two spectra up to `tol` in modulus distance.
///
/// Walks `a` in canonical order and greedily pairs each element with the
/// first unused element of `b` within `tol`; every element must be matched.
pub fn spec_multiset_equal(a: &ComplexSpectrum, b: &ComplexSpectrum, tol: f64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut used = vec![false; b.len()];
    for x in a.values() {
        let hit = b
            .values()
            .iter()
            .enumerate()
            .position(|(j, y)| !used[j] && (x - y).norm() <= tol);
        match hit {
            Some(j) => used[j] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[f64]) -> ComplexSpectrum {
        ComplexSpectrum::from_real(v)
    }

    #[test]
    fn permutation_is_equal() {
        assert!(spec_multiset_equal(&re(&[1.0, -1.0]), &re(&[-1.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn outside_tolerance_is_unequal() {
        let tol = 1e-9;
        assert!(!spec_multiset_equal(&re(&[1.0]), &re(&[1.0 + 2.0 * tol]), tol).unwrap());
    }

    #[test]
    fn multiplicities_are_respected() {
        assert!(!spec_multiset_equal(&re(&[1.0, 1.0, 0.0]), &re(&[1.0, 0.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn length_mismatch_errors() {
        assert!(matches!(
            spec_multiset_equal(&re(&[1.0]), &re(&[1.0, 2.0]), 1e-9),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn canonical_order() {
        let s = ComplexSpectrum::new(vec![
            Complex::new(0.0, -1.0),
            Complex::new(-1.0, 0.0),
            Complex::new(0.5, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(1.0, 0.0),
        ]);
        let expect = [
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(0.0, -1.0),
            Complex::new(-1.0, 0.0),
            Complex::new(0.5, 0.0),
        ];
        assert_eq!(s.values(), &expect);
    }

    #[test]
    fn spectrum_sorts_descending() {
        let s = Spectrum::new(vec![0.1, 3.0, -2.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 0.1, -2.0]);
        assert!(Spectrum::new(vec![f64::NAN]).is_err());
    }
}
