//! Singular values, full SVD, polar decomposition and matrix absolute value.
//!
//! The SVD is computed by one-sided (Hestenes) Jacobi: plane rotations are
//! applied from the right until all columns are mutually orthogonal. The
//! singular values are then the column norms, which avoids squaring the
//! condition number the way forming `a*a` does.

use serde::{Deserialize, Serialize};

use super::jacobi::Rotation;
use super::matrix::{Complex, ComplexMatrix};
use super::spectrum::Spectrum;
use crate::error::Result;

const MAX_SWEEPS: usize = 100;
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// `a = u · diag(sigma) · v*` with `u`, `v` unitary and `sigma` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Spectrum,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        let n = us.order();
        for j in 0..n {
            let s = self.sigma.values()[j];
            for i in 0..n {
                us[(i, j)] *= s;
            }
        }
        &us * &self.v.adjoint()
    }
}

/// Polar factors `z = v · p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarFactors {
    pub v: ComplexMatrix,
    pub p: ComplexMatrix,
}

fn column_dot(b: &ComplexMatrix, p: usize, q: usize) -> Complex {
    (0..b.order()).map(|k| b[(k, p)].conj() * b[(k, q)]).sum()
}

fn column_norm_sqr(b: &ComplexMatrix, p: usize) -> f64 {
    (0..b.order()).map(|k| b[(k, p)].norm_sqr()).sum()
}

/// Fills column `j` of `w` with a unit vector orthogonal to every column
/// listed in `basis`.
fn complete_column(w: &mut ComplexMatrix, j: usize, basis: &[usize]) {
    let n = w.order();
    let mut best: Option<(f64, Vec<Complex>)> = None;
    for e in 0..n {
        let mut x = vec![Complex::new(0.0, 0.0); n];
        x[e] = Complex::new(1.0, 0.0);
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for &b in basis {
                let dot: Complex = (0..n).map(|k| w[(k, b)].conj() * x[k]).sum();
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk -= w[(k, b)] * dot;
                }
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
            best = Some((norm, x));
        }
    }
    let (norm, x) = best.expect("n >= 1");
    for (k, xk) in x.into_iter().enumerate() {
        w[(k, j)] = xk / norm;
    }
}

/// Full singular value decomposition of a square matrix.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.order();
    let mut b = a.clone();
    let mut v = ComplexMatrix::identity(n)?;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = column_norm_sqr(&b, p);
                let beta = column_norm_sqr(&b, q);
                let gamma = column_dot(&b, p, q);
                if gamma.norm() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                if let Some(rot) = Rotation::annihilating(alpha, beta, gamma) {
                    rot.apply_right(&mut b, p, q);
                    rot.apply_right(&mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| column_norm_sqr(&b, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = ComplexMatrix::zeros(n)?;
    let mut v_sorted = ComplexMatrix::zeros(n)?;
    let mut sigma = Vec::with_capacity(n);
    let mut good = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        for k in 0..n {
            v_sorted[(k, dst)] = v[(k, src)];
        }
        if s > 1e-300 {
            for k in 0..n {
                u[(k, dst)] = b[(k, src)] / s;
            }
            good.push(dst);
        } else {
            deficient.push(dst);
        }
    }
    for j in deficient {
        complete_column(&mut u, j, &good);
        good.push(j);
    }

    Ok(Svd {
        u,
        sigma: Spectrum::from_sorted(sigma),
        v: v_sorted,
    })
}

/// Singular values in descending order.
pub fn svd_values(a: &ComplexMatrix) -> Spectrum {
    svd(a).expect("square matrix of valid order").sigma
}

/// Polar decomposition `z = v · p` with `p = (z*z)^{1/2}`.
///
/// For singular `z` the unitary factor comes from the completed full SVD:
/// with `z = W·Σ·X*`, `v = W·X*` and `p = X·Σ·X*`.
pub fn polar(z: &ComplexMatrix) -> PolarFactors {
    let f = svd(z).expect("square matrix of valid order");
    let n = z.order();
    let x_adj = f.v.adjoint();
    let unitary = &f.u * &x_adj;
    let mut xs = f.v.clone();
    for j in 0..n {
        let s = f.sigma.values()[j];
        for i in 0..n {
            xs[(i, j)] *= s;
        }
    }
    let p = (&xs * &x_adj).hermitian_part();
    PolarFactors { v: unitary, p }
}

/// Matrix absolute value `|z| = (z*z)^{1/2}`.
pub fn abs_matrix(z: &ComplexMatrix) -> ComplexMatrix {
    polar(z).p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det::det_lu;
    use crate::linalg::jacobi::eig_hermitian;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_moduli() {
        let s = svd_values(&ComplexMatrix::from_real_diag(&[-2.0, 0.5]).unwrap());
        assert_eq!(s.values(), &[2.0, 0.5]);
    }

    #[test]
    fn jordan_like_block_matches_quadratic_formula() {
        // AᵀA = [[0.25, 0.5], [0.5, 1.25]]: trace 1.5, det 0.0625
        let a = ComplexMatrix::from_real_rows(&[vec![0.5, 1.0], vec![0.0, 0.5]]).unwrap();
        let s = svd_values(&a);
        let (tr, det): (f64, f64) = (1.5, 0.0625);
        let disc = (tr * tr / 4.0 - det).sqrt();
        let expect = [(tr / 2.0 + disc).sqrt(), (tr / 2.0 - disc).sqrt()];
        assert!((s.values()[0] - expect[0]).abs() < 1e-14);
        assert!((s.values()[1] - expect[1]).abs() < 1e-14);
        assert!((s.values()[0] - 1.207107).abs() < 1e-6);
        assert!((s.values()[1] - 0.207107).abs() < 1e-6);
    }

    #[test]
    fn polar_of_unitary_is_trivial() {
        let r = 0.5f64.sqrt();
        let z = ComplexMatrix::from_rows(&[vec![c(r, 0.0), c(0.0, r)], vec![c(0.0, r), c(r, 0.0)]])
            .unwrap();
        let f = polar(&z);
        assert!(f.v.max_abs_diff(&z) < 1e-14);
        assert!(f.p.max_abs_diff(&ComplexMatrix::identity(2).unwrap()) < 1e-14);
    }

    #[test]
    fn polar_of_psd_is_trivial() {
        let z = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.5)],
            vec![c(0.5, -0.5), c(1.0, 0.0)],
        ])
        .unwrap();
        let f = polar(&z);
        assert!(f.v.max_abs_diff(&ComplexMatrix::identity(2).unwrap()) < 1e-13);
        assert!(f.p.max_abs_diff(&z) < 1e-13);
    }

    #[test]
    fn polar_sign_split() {
        let f = polar(&ComplexMatrix::from_real_diag(&[-1.0, 2.0]).unwrap());
        assert!(f.v.max_abs_diff(&ComplexMatrix::from_real_diag(&[-1.0, 1.0]).unwrap()) < 1e-15);
        assert!(f.p.max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 2.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn polar_of_singular_matrix_completes_unitary() {
        let z = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 2.0), c(0.0, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let f = polar(&z);
        assert!(f.v.unitarity_defect() < 1e-12);
        assert!((&f.v * &f.p).max_abs_diff(&z) < 1e-12);
        let (ps, _) = eig_hermitian(&f.p).unwrap();
        assert!(ps.min() > -1e-12);
    }

    #[test]
    fn abs_matrix_diagonal() {
        let z = ComplexMatrix::from_diag(&[c(-3.0, 0.0), c(0.0, 4.0)]).unwrap();
        let a = abs_matrix(&z);
        assert!(a.max_abs_diff(&ComplexMatrix::from_real_diag(&[3.0, 4.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn singular_values_multiply_to_det_modulus() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.2, 1.0), c(-1.0, 0.3), c(0.5, 0.0)],
            vec![c(1.0, 0.0), c(0.0, -0.7), c(2.0, 1.0)],
            vec![c(-0.4, 0.4), c(0.9, 0.0), c(0.0, 0.1)],
        ])
        .unwrap();
        let f = svd(&a).unwrap();
        let prod: f64 = f.sigma.values().iter().product();
        assert!((prod - det_lu(&a).norm()).abs() < 1e-12 * prod);
        assert!(f.reconstruct().max_abs_diff(&a) < 1e-13);
        assert!(f.u.unitarity_defect() < 1e-14);
        assert!(f.v.unitarity_defect() < 1e-14);
    }
}
