use super::matrix::{Complex, ComplexMatrix};

/// Determinant by LU factorization with partial pivoting.
///
/// Each row interchange flips the sign; a pivot column that is exactly zero
/// makes the determinant zero.
pub fn det_lu(m: &ComplexMatrix) -> Complex {
    let n = m.order();
    let mut a = m.as_slice().to_vec();
    let mut det = Complex::new(1.0, 0.0);

    for k in 0..n {
        let (p, pivot_abs) =
            (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            if factor == Complex::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= factor * u;
            }
        }
    }
    det
}
