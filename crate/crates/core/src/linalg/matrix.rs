use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used for every matrix entry.
pub type Complex = Complex64;

/// Largest matrix order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 64;

/// Dense square complex matrix stored row-major.
///
/// Every constructor checks that the order lies in `1..=MAX_ORDER` and that
/// all entries are finite, so downstream kernels never see NaN or infinity
/// on input.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex>,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidMatrix(format!(
            "order {n} outside 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major data of length `n * n`.
    pub fn from_vec(n: usize, data: Vec<Complex>) -> Result<Self> {
        check_order(n)?;
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                k / n,
                k % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        Self::from_vec(n, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        if !diag.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidMatrix("diagonal entry is not finite".into()));
        }
        Ok(m)
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex> = diag.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, c: Complex) -> Result<Self> {
        Self::from_diag(&vec![c; n])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus, written ‖·‖_max throughout.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Self {
        let mut out = self.neg();
        for i in 0..self.n {
            out[(i, i)] += 1.0;
        }
        out
    }

    /// ‖self − self*‖_max.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// ‖self*·self − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let g = &self.adjoint() * self;
        g.identity_minus().max_abs()
    }

    /// (self + self*) / 2, used to strip roundoff asymmetry from products that
    /// are Hermitian in exact arithmetic.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(0.5)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "order mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }

    /// Weighted sum Σ wᵢ·Mᵢ over matrices of a common order.
    pub fn weighted_sum(mats: &[ComplexMatrix], weights: &[f64]) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidMatrix("empty matrix list".into()))?;
        if mats.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: mats.len(),
                right: weights.len(),
            });
        }
        let mut acc = Self::zeros(first.n)?;
        for (m, &w) in mats.iter().zip(weights) {
            first.same_order(m)?;
            for (a, b) in acc.data.iter_mut().zip(&m.data) {
                *a += b * w;
            }
        }
        Ok(acc)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "order mismatch in product");
        let n = self.n;
        let mut out = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        ComplexMatrix { n, data: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "order mismatch in sum");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "order mismatch in difference");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One entry of the shared matrix JSON format: `[re, im]` or a bare real.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum EntryJson {
    Pair([f64; 2]),
    Real(f64),
}

/// Wire form `{ "n": int, "entries": [[[re, im], ...], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<EntryJson>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = String;

    fn try_from(m: MatrixJson) -> std::result::Result<Self, String> {
        let n = m.n;
        if n == 0 || n > MAX_ORDER {
            return Err(format!("n: order {n} outside 1..={MAX_ORDER}"));
        }
        if m.entries.len() != n {
            return Err(format!(
                "entries: expected {n} rows, got {}",
                m.entries.len()
            ));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in m.entries.iter().enumerate() {
            if row.len() != n {
                return Err(format!(
                    "entries[{i}]: expected {n} entries, got {}",
                    row.len()
                ));
            }
            for (j, e) in row.iter().enumerate() {
                let z = match *e {
                    EntryJson::Pair([re, im]) => Complex::new(re, im),
                    EntryJson::Real(re) => Complex::new(re, 0.0),
                };
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(format!("entries[{i}][{j}]: not finite"));
                }
                data.push(z);
            }
        }
        Ok(ComplexMatrix { n, data })
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let n = m.n;
        let entries = (0..n)
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|z| EntryJson::Pair([z.re, z.im]))
                    .collect()
            })
            .collect();
        MatrixJson { n, entries }
    }
}
