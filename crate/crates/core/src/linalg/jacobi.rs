//! Cyclic complex Jacobi method for Hermitian eigenproblems, plus the plane
//! rotation it shares with the one-sided Jacobi SVD.

use super::matrix::{Complex, ComplexMatrix};
use super::spectrum::Spectrum;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Unitary plane rotation acting on indices (p, q):
///
/// ```text
/// J = [ c              s            ]
///     [ -s·e^{-iφ}     c·e^{-iφ}    ]
/// ```
///
/// chosen so that `J* [[app, apq], [conj(apq), aqq]] J` is diagonal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub j00: Complex,
    pub j01: Complex,
    pub j10: Complex,
    pub j11: Complex,
}

impl Rotation {
    /// `None` when `apq` is already zero.
    pub(crate) fn annihilating(app: f64, aqq: f64, apq: Complex) -> Option<Self> {
        let b = apq.norm();
        if b == 0.0 {
            return None;
        }
        let phase = (apq / b).conj();
        let theta = (aqq - app) / (2.0 * b);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
            sign / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        Some(Self {
            j00: Complex::new(c, 0.0),
            j01: Complex::new(s, 0.0),
            j10: phase * (-s),
            j11: phase * c,
        })
    }

    /// M ← M·J on columns p and q.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.order() {
            let a = m[(k, p)];
            let b = m[(k, q)];
            m[(k, p)] = a * self.j00 + b * self.j10;
            m[(k, q)] = a * self.j01 + b * self.j11;
        }
    }

    /// M ← J*·M on rows p and q.
    pub(crate) fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.order() {
            let a = m[(p, k)];
            let b = m[(q, k)];
            m[(p, k)] = self.j00.conj() * a + self.j10.conj() * b;
            m[(q, k)] = self.j01.conj() * a + self.j11.conj() * b;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.order();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Returns the eigenvalues in descending order and a unitary `Q` whose
/// columns are the matching eigenvectors, so `h ≈ Q·diag(λ)·Q*`.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    let scale = 1.0 + h.max_abs();
    let asymmetry = h.hermitian_defect();
    if asymmetry > 1e-10 * scale {
        return Err(Error::NotHermitian { asymmetry });
    }

    let n = h.order();
    let mut a = h.hermitian_part();
    let mut q = ComplexMatrix::identity(n)?;
    let target = OFF_DIAGONAL_TOL * h.frobenius();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let Some(rot) = Rotation::annihilating(a[(p, p)].re, a[(r, r)].re, a[(p, r)])
                else {
                    continue;
                };
                rot.apply_right(&mut a, p, r);
                rot.apply_left_adjoint(&mut a, p, r);
                rot.apply_right(&mut q, p, r);
                a[(p, r)] = Complex::new(0.0, 0.0);
                a[(r, p)] = Complex::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(r, r)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut sorted_q = ComplexMatrix::zeros(n)?;
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            sorted_q[(k, dst)] = q[(k, src)];
        }
    }
    Ok((Spectrum::from_sorted(values), sorted_q))
}

/// Q·diag(values)·Q*.
pub(crate) fn reconstruct(values: &[f64], q: &ComplexMatrix) -> ComplexMatrix {
    let n = q.order();
    let mut out = ComplexMatrix::zeros(n).expect("order already validated");
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex::new(0.0, 0.0);
            for k in 0..n {
                s += q[(i, k)] * values[k] * q[(j, k)].conj();
            }
            out[(i, j)] = s;
        }
    }
    out
}
