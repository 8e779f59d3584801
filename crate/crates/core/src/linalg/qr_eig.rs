//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift QR iteration with Wilkinson
//! shifts and Givens rotations.

use super::matrix::{Complex, ComplexMatrix};
use super::spectrum::ComplexSpectrum;
use crate::error::{Error, Result};

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Reduces `a` in place to upper Hessenberg form by unitary similarity.
pub(crate) fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.order();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        // v = x − alpha·e1
        let mut v: Vec<Complex> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A ← (I − 2vv*)·A on rows k+1..n
        for j in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * a[(k + 1 + t, j)])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vt * dot * 2.0;
            }
        }
        // A ← A·(I − 2vv*) on columns k+1..n
        for i in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(t, vt)| a[(i, k + 1 + t)] * vt)
                .sum();
            for (t, vt) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= dot * vt.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G·[x; y] = [r; 0]`.
fn givens(x: Complex, y: Complex) -> (f64, Complex) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let norm = ax.hypot(ay);
    let c = ax / norm;
    let s = (x / ax) * y.conj() / norm;
    (c, s)
}

/// Eigenvalue of the 2×2 block [[a, b], [c, d]] closer to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a general complex matrix, in canonical order.
pub fn eig_general(a: &ComplexMatrix) -> Result<ComplexSpectrum> {
    let n = a.order();
    let mut h = a.clone();
    hessenberg(&mut h);
    let norm = h.max_abs();
    let eps = f64::EPSILON;
    let max_iter = 100 * n;

    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if sub <= eps * scale {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence {
                iterations: max_iter,
            });
        }

        let shift = if iter % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + h[(hi, hi - 1)].norm() * 0.75
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // explicit QR step on the active window l..=hi
        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rots.push((c, s));
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let k = l + t;
            for i in l..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }

    Ok(ComplexSpectrum::new(h.diagonal()))
}
