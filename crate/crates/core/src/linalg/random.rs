//! Seeded sampling of unitary, orthogonal and positive-semidefinite test
//! matrices.
//!
//! [`RngState`] is a counter-based generator: draw `k` of stream `s` under
//! seed `x` is a fixed 64-bit hash of `(x, s, k)`. Streams are therefore
//! independent of execution order, which is what lets the search harness
//! fan trials out across threads without perturbing results.

use super::matrix::{Complex, ComplexMatrix};
use crate::error::{Error, Result};
use rand::RngCore;
use rand_distr::{Distribution, Exp1, StandardNormal};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_MULT: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based 64-bit generator keyed by `(seed, stream)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    stream: u64,
    counter: u64,
    key: u64,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64(stream.wrapping_mul(STREAM_MULT).wrapping_add(GOLDEN)));
        Self {
            seed,
            stream,
            counter: 0,
            key,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Uniform draw from `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    pub fn exponential(&mut self) -> f64 {
        Exp1.sample(self)
    }

    /// Standard complex Gaussian, E|z|² = 1.
    pub fn complex_normal(&mut self) -> Complex {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex::new(self.normal() * s, self.normal() * s)
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let x = self.key ^ self.counter.wrapping_mul(GOLDEN);
        self.counter = self.counter.wrapping_add(1);
        mix64(mix64(x))
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        rand::rand_core::impls::fill_bytes_via_next(self, dest)
    }
}

/// Independent stream for trial `trial_index` under `seed`.
pub fn derive_trial_rng(seed: u64, trial_index: u64) -> RngState {
    RngState::new(seed, trial_index)
}

fn gaussian_matrix(n: usize, rng: &mut RngState, real: bool) -> Result<ComplexMatrix> {
    let data = (0..n * n)
        .map(|_| {
            if real {
                Complex::new(rng.normal(), 0.0)
            } else {
                rng.complex_normal()
            }
        })
        .collect();
    ComplexMatrix::from_vec(n, data)
}

/// Q factor of a Householder QR with the phases of diag(R) divided out,
/// so that the result does not depend on the sign convention of the
/// reflectors. Real input yields a real orthogonal factor.
fn qr_phase_corrected(mut a: ComplexMatrix) -> ComplexMatrix {
    let n = a.order();
    let mut q = ComplexMatrix::identity(n).expect("valid order");
    for k in 0..n {
        let norm: f64 = (k..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k, k)];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex> = (k..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        for j in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * a[(k + t, j)])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                a[(k + t, j)] -= vt * dot * 2.0;
            }
        }
        for i in 0..n {
            let dot: Complex = v.iter().enumerate().map(|(t, vt)| q[(i, k + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= dot * vt.conj() * 2.0;
            }
        }
    }
    for j in 0..n {
        let r = a[(j, j)];
        if r.norm() == 0.0 {
            continue;
        }
        let ph = r / r.norm();
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar-distributed unitary matrix of order `n`.
pub fn haar_unitary(n: usize, rng: &mut RngState) -> Result<ComplexMatrix> {
    Ok(qr_phase_corrected(gaussian_matrix(n, rng, false)?))
}

/// Haar-distributed real orthogonal matrix of order `n`.
pub fn haar_orthogonal(n: usize, rng: &mut RngState) -> Result<ComplexMatrix> {
    Ok(qr_phase_corrected(gaussian_matrix(n, rng, true)?))
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi < 1.0) {
        return Err(Error::BadRange { lo, hi });
    }
    Ok(())
}

fn conjugate_diag(q: &ComplexMatrix, r: &[f64]) -> ComplexMatrix {
    super::jacobi::reconstruct(r, q).hermitian_part()
}

/// `Q·diag(r)·Q*` with `Q` Haar unitary and `r_k` uniform on `[eig_lo, eig_hi]`.
pub fn random_psd_contraction(
    n: usize,
    rng: &mut RngState,
    eig_lo: f64,
    eig_hi: f64,
) -> Result<ComplexMatrix> {
    check_range(eig_lo, eig_hi)?;
    let q = haar_unitary(n, rng)?;
    let r: Vec<f64> = (0..n).map(|_| rng.uniform_in(eig_lo, eig_hi)).collect();
    Ok(conjugate_diag(&q, &r))
}

/// Real symmetric variant of [`random_psd_contraction`] (orthogonal `Q`).
pub fn random_real_psd_contraction(
    n: usize,
    rng: &mut RngState,
    eig_lo: f64,
    eig_hi: f64,
) -> Result<ComplexMatrix> {
    check_range(eig_lo, eig_hi)?;
    let q = haar_orthogonal(n, rng)?;
    let r: Vec<f64> = (0..n).map(|_| rng.uniform_in(eig_lo, eig_hi)).collect();
    Ok(conjugate_diag(&q, &r))
}

/// `U₁·diag(sigma)·U₂*` with independent Haar `U₁`, `U₂`.
pub fn random_with_singular_values(sigma: &[f64], rng: &mut RngState) -> Result<ComplexMatrix> {
    let n = sigma.len();
    let u1 = haar_unitary(n, rng)?;
    let u2 = haar_unitary(n, rng)?;
    let mut left = u1;
    for j in 0..n {
        for i in 0..n {
            left[(i, j)] *= sigma[j];
        }
    }
    Ok(&left * &u2.adjoint())
}

/// General (non-normal) strict contraction with singular values uniform on
/// `[sigma_lo, sigma_hi]`.
pub fn random_general_contraction(
    n: usize,
    rng: &mut RngState,
    sigma_lo: f64,
    sigma_hi: f64,
) -> Result<ComplexMatrix> {
    check_range(sigma_lo, sigma_hi)?;
    let sigma: Vec<f64> = (0..n).map(|_| rng.uniform_in(sigma_lo, sigma_hi)).collect();
    random_with_singular_values(&sigma, rng)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex_matrix(n: usize, rng: &mut RngState) -> Result<ComplexMatrix> {
    gaussian_matrix(n, rng, false)
}

/// Hermitian matrix `(G + G*)/2` for Gaussian `G`.
pub fn random_hermitian(n: usize, rng: &mut RngState) -> Result<ComplexMatrix> {
    Ok(gaussian_matrix(n, rng, false)?.hermitian_part())
}
