//! Dense complex linear algebra for small square matrices.

pub mod det;
pub mod jacobi;
pub mod matrix;
pub mod qr_eig;
pub mod random;
pub mod spectrum;
pub mod svd;

pub use det::det_lu;
pub use jacobi::eig_hermitian;
pub use matrix::{Complex, ComplexMatrix, MAX_ORDER};
pub use qr_eig::eig_general;
pub use random::{
    derive_trial_rng, haar_orthogonal, haar_unitary, random_complex_matrix,
    random_general_contraction, random_hermitian, random_psd_contraction,
    random_real_psd_contraction, random_with_singular_values, RngState,
};
pub use spectrum::{spec_multiset_equal, ComplexSpectrum, Spectrum};
pub use svd::{abs_matrix, polar, svd, svd_values, PolarFactors, Svd};
