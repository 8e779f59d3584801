//! One verifier per determinantal bound. Each returns an
//! [`InequalityReport`] with both sides, relative slacks and the detected
//! equality case.

use super::report::{
    EnsembleSpec, EqualityClassification, EqualityFlag, ExtendedReal, InequalityReport,
};
use crate::error::{Error, Result};
use crate::linalg::{
    abs_matrix, det_lu, eig_general, eig_hermitian, polar, spec_multiset_equal, svd_values,
    ComplexMatrix, ComplexSpectrum, Spectrum,
};
use crate::majorization::WeightVector;

pub const UNITARY_TOL: f64 = 1e-8;
pub const SPECTRUM_MATCH_TOL: f64 = 1e-7;
pub const SIGN_IDENTITY_TOL: f64 = 1e-8;
pub const EIGENVALUE_ONE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
/// Denominators `|det(I − UZ)|²` at or below this are treated as zero.
pub const ZERO_DENOMINATOR: f64 = 1e-300;
/// `|det(I − UZ)|` at or below this violates the nonsingularity hypothesis.
pub const SINGULAR_TOL: f64 = 1e-12;
/// `|1 − r|` at or below this makes the upper product infinite.
pub const UNIT_VALUE_TOL: f64 = 1e-12;

const THRESHOLDS_NOTE: &str = "equality thresholds: spectrum 1e-7, U=±I 1e-8, eigenvalue one 1e-9";

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let residual = u.unitarity_defect();
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

fn check_strict_contraction(z: &ComplexMatrix) -> Result<Spectrum> {
    let sigma = svd_values(z);
    if sigma.max() >= 1.0 {
        return Err(Error::StrictContractionRequired {
            sigma_max: sigma.max(),
        });
    }
    Ok(sigma)
}

/// Hermitian part of `z` and its eigenvalues, provided `z` is PSD within
/// [`PSD_TOL`].
fn psd_spectrum(z: &ComplexMatrix) -> Result<(ComplexMatrix, Spectrum)> {
    let asymmetry = z.hermitian_defect();
    if asymmetry > PSD_TOL * (1.0 + z.max_abs()) {
        return Err(Error::NotHermitian { asymmetry });
    }
    let h = z.hermitian_part();
    let (r, _) = eig_hermitian(&h)?;
    if r.min() < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: r.min(),
        });
    }
    Ok((h, r))
}

/// Weighted Harnack products
/// `ΠᵢΠₖ(|1−rᵢₖ|/(1+rᵢₖ))^{wᵢ}` and `ΠᵢΠₖ((1+rᵢₖ)/|1−rᵢₖ|)^{wᵢ}`.
///
/// Negative roundoff in `r` is clamped to zero. The upper product is `INF`
/// when some `rᵢₖ` is within [`UNIT_VALUE_TOL`] of one.
pub fn harnack_bounds_weighted(parts: &[(&Spectrum, f64)]) -> (ExtendedReal, ExtendedReal) {
    let mut lower = 1.0;
    let mut upper = 1.0;
    let mut unbounded = false;
    for (r, w) in parts {
        for &rk in r.values() {
            let rk = rk.max(0.0);
            let a = (1.0 - rk).abs();
            let b = 1.0 + rk;
            lower *= (a / b).powf(*w);
            if a <= UNIT_VALUE_TOL {
                unbounded = true;
            } else {
                upper *= (b / a).powf(*w);
            }
        }
    }
    let upper = if unbounded {
        ExtendedReal::Inf
    } else {
        ExtendedReal::Finite(upper)
    };
    (ExtendedReal::Finite(lower), upper)
}

/// `Π|1−rₖ|/(1+rₖ)` and `Π(1+rₖ)/|1−rₖ|`.
pub fn harnack_bounds(r: &Spectrum) -> (ExtendedReal, ExtendedReal) {
    harnack_bounds_weighted(&[(r, 1.0)])
}

/// Real part of a determinant that is real in exact arithmetic.
fn real_det(m: &ComplexMatrix, what: &str) -> Result<f64> {
    let d = det_lu(m);
    if d.im.abs() > 1e-9 * (1.0 + d.re.abs()) {
        return Err(Error::Numerical(format!(
            "{what} has imaginary part {:.3e}",
            d.im
        )));
    }
    Ok(d.re)
}

/// `det(I − Z*Z) / |det(I − UZ)|²`, `INF` when the denominator vanishes.
pub fn tung_ratio(z: &ComplexMatrix, u: &ComplexMatrix) -> Result<ExtendedReal> {
    z.same_order(u)?;
    check_unitary(u)?;
    let gram = (&z.adjoint() * z).hermitian_part();
    let num = real_det(&gram.identity_minus(), "det(I - Z*Z)")?;
    let den = det_lu(&(u * z).identity_minus()).norm_sqr();
    Ok(ExtendedReal::ratio(num, den, ZERO_DENOMINATOR))
}

/// Equality-case flags of the PSD bound for `z` (Hermitian, eigenvalues `r`)
/// and unitary `u`.
pub fn classify_equality(
    z: &ComplexMatrix,
    r: &Spectrum,
    u: &ComplexMatrix,
) -> Result<Vec<EqualityFlag>> {
    let n = z.order();
    let mut flags = Vec::new();
    if r.values()
        .iter()
        .any(|v| (v - 1.0).abs() <= EIGENVALUE_ONE_TOL)
    {
        flags.push(EqualityFlag::EigenvalueOne);
    }
    let uz = eig_general(&(u * z))?;
    let pos = ComplexSpectrum::from_real(r.values());
    let neg_values: Vec<f64> = r.values().iter().map(|v| -v).collect();
    let neg = ComplexSpectrum::from_real(&neg_values);
    if spec_multiset_equal(&uz, &neg, SPECTRUM_MATCH_TOL)? {
        flags.push(EqualityFlag::SpecNegMatch);
    }
    if spec_multiset_equal(&uz, &pos, SPECTRUM_MATCH_TOL)? {
        flags.push(EqualityFlag::SpecPosMatch);
    }
    let id = ComplexMatrix::identity(n)?;
    if u.max_abs_diff(&id) <= SIGN_IDENTITY_TOL {
        flags.push(EqualityFlag::UIsIdentity);
    }
    if u.max_abs_diff(&(-&id)) <= SIGN_IDENTITY_TOL {
        flags.push(EqualityFlag::UIsNegIdentity);
    }
    Ok(flags)
}

/// Two-sided bound for a strict contraction `z` and unitary `u`:
/// `Π(1−rₖ)/(1+rₖ) ≤ det(I−Z*Z)/|det(I−UZ)|² ≤ Π(1+rₖ)/(1−rₖ)` over the
/// singular values `rₖ` of `z`.
///
/// Equality flags are computed on the polar reduction: with `z = v·p`,
/// the ratio equals the PSD ratio for `(p, u·v)`.
pub fn verify_tung(z: &ComplexMatrix, u: &ComplexMatrix) -> Result<InequalityReport> {
    z.same_order(u)?;
    let sigma = check_strict_contraction(z)?;
    check_unitary(u)?;
    let (lower, upper) = harnack_bounds(&sigma);
    let mid = tung_ratio(z, u)?;

    let f = polar(z);
    let uv = u * &f.v;
    let flags = classify_equality(&f.p, &sigma, &uv)?;
    Ok(InequalityReport::assemble(
        "tung",
        lower,
        mid,
        upper,
        EqualityClassification::new(flags),
        vec![
            "bounds over singular values of Z".into(),
            "equality flags refer to (|Z|, U·V) with Z = V|Z|".into(),
            THRESHOLDS_NOTE.into(),
        ],
    ))
}

/// `Π(1−rₖ) ≤ |det(I−A)| ≤ Π(1+rₖ)` over the singular values of `a`. The
/// upper side holds for every square `a`; the lower side is asserted only
/// when `a` is a strict contraction.
pub fn verify_marcus(a: &ComplexMatrix) -> Result<InequalityReport> {
    let r = svd_values(a);
    let mid = det_lu(&a.identity_minus()).norm();
    let upper: f64 = r.values().iter().map(|v| 1.0 + v).product();
    let mut notes = vec!["bounds over singular values of A".to_string()];
    let lower = if r.max() < 1.0 {
        r.values().iter().map(|v| 1.0 - v).product()
    } else {
        notes.push(format!(
            "lower bound not asserted: largest singular value {} is not < 1",
            r.max()
        ));
        0.0
    };
    Ok(InequalityReport::assemble(
        "marcus",
        ExtendedReal::Finite(lower),
        ExtendedReal::Finite(mid),
        ExtendedReal::Finite(upper),
        EqualityClassification::none(),
        notes,
    ))
}

/// `Π|1−rₖ|/(1+rₖ) ≤ |det(I−Z*Z)|/|det(I−UZ)|²` for any square `z`, with a
/// vanishing denominator read as `INF`.
pub fn verify_general_lower(z: &ComplexMatrix, u: &ComplexMatrix) -> Result<InequalityReport> {
    z.same_order(u)?;
    check_unitary(u)?;
    let r = svd_values(z);
    let (lower, _) = harnack_bounds(&r);
    let gram = (&z.adjoint() * z).hermitian_part();
    let num = real_det(&gram.identity_minus(), "det(I - Z*Z)")?.abs();
    let den = det_lu(&(u * z).identity_minus()).norm_sqr();
    let mid = ExtendedReal::ratio(num, den, ZERO_DENOMINATOR);
    let mut notes = vec![
        "bounds over singular values of Z".to_string(),
        "upper side not asserted".to_string(),
    ];
    if mid.is_inf() {
        notes.push("I - UZ is singular; ratio taken as INF".into());
    }
    Ok(InequalityReport::assemble(
        "general-lower",
        lower,
        mid,
        ExtendedReal::Inf,
        EqualityClassification::none(),
        notes,
    ))
}

/// PSD form: `Π|1−rₖ|/(1+rₖ) ≤ |det(I−Z²)|/|det(I−UZ)|² ≤ Π(1+rₖ)/(1−rₖ)`
/// over the eigenvalues of `z`; the upper side only when all `rₖ < 1`.
pub fn verify_psd(z: &ComplexMatrix, u: &ComplexMatrix) -> Result<InequalityReport> {
    z.same_order(u)?;
    let (h, r) = psd_spectrum(z)?;
    check_unitary(u)?;
    psd_report("psd", &h, &r, &[(&r, 1.0)], u, Vec::new())
}

fn psd_report(
    name: &str,
    w: &ComplexMatrix,
    s: &Spectrum,
    parts: &[(&Spectrum, f64)],
    u: &ComplexMatrix,
    extra_flags: Vec<EqualityFlag>,
) -> Result<InequalityReport> {
    let d = det_lu(&(u * w).identity_minus());
    if d.norm() <= SINGULAR_TOL {
        return Err(Error::SingularHypothesis { det_abs: d.norm() });
    }
    let num = real_det(&(w * w).hermitian_part().identity_minus(), "det(I - Z^2)")?.abs();
    let mid = ExtendedReal::Finite(num / d.norm_sqr());

    let mut notes = vec![format!(
        "bounds over eigenvalues of {}",
        if parts.len() > 1 { "each Z_i" } else { "Z" }
    )];
    let (lower, mut upper) = harnack_bounds_weighted(parts);
    let contraction = parts.iter().all(|(r, _)| r.max() < 1.0);
    if !contraction {
        upper = ExtendedReal::Inf;
        notes.push("upper bound not asserted: an eigenvalue is >= 1".into());
    }
    notes.push(THRESHOLDS_NOTE.into());

    let mut flags = extra_flags;
    flags.extend(classify_equality(w, s, u)?);
    Ok(InequalityReport::assemble(
        name,
        lower,
        mid,
        upper,
        EqualityClassification::new(flags),
        notes,
    ))
}

fn all_equal(mats: &[ComplexMatrix], tol: f64) -> bool {
    mats.iter()
        .all(|m| mats.iter().all(|k| m.max_abs_diff(k) <= tol))
}

/// Weighted multi-matrix bound for PSD strict contractions Zᵢ and
/// `W = Σ wᵢ Zᵢ`:
/// `ΠₖΠᵢ((1−rᵢₖ)/(1+rᵢₖ))^{wᵢ} ≤ det(I−W²)/|det(I−UW)|² ≤ ΠₖΠᵢ((1+rᵢₖ)/(1−rᵢₖ))^{wᵢ}`.
pub fn verify_multi(ens: &EnsembleSpec, u: &ComplexMatrix) -> Result<InequalityReport> {
    ens.matrices[0].same_order(u)?;
    let mut spectra = Vec::with_capacity(ens.len());
    let mut hermitian = Vec::with_capacity(ens.len());
    for z in &ens.matrices {
        let (h, r) = psd_spectrum(z)?;
        if r.max() >= 1.0 {
            return Err(Error::StrictContractionRequired { sigma_max: r.max() });
        }
        spectra.push(r);
        hermitian.push(h);
    }
    check_unitary(u)?;
    let w = ComplexMatrix::weighted_sum(&hermitian, ens.weights.values())?.hermitian_part();
    let (s, _) = eig_hermitian(&w)?;
    let parts: Vec<(&Spectrum, f64)> = spectra
        .iter()
        .zip(ens.weights.values())
        .map(|(r, &wi)| (r, wi))
        .collect();
    let mut extra = Vec::new();
    if all_equal(&hermitian, PSD_TOL) {
        extra.push(EqualityFlag::AllEnsembleEqual);
    }
    psd_report("multi", &w, &s, &parts, u, extra)
}

/// Largest eigenvalue of `(Σwᵢ|Zᵢ|)² − Σwᵢ|Zᵢ|²`, which is `≤ 0` by operator
/// convexity of the square.
pub fn operator_convexity_gap(abs: &[ComplexMatrix], w: &WeightVector) -> Result<f64> {
    let a = ComplexMatrix::weighted_sum(abs, w.values())?.hermitian_part();
    let squares: Vec<ComplexMatrix> = abs.iter().map(|m| m * m).collect();
    let mean_sq = ComplexMatrix::weighted_sum(&squares, w.values())?;
    let diff = (&(&a * &a) - &mean_sq).hermitian_part();
    let (ev, _) = eig_hermitian(&diff)?;
    Ok(ev.max())
}

/// Pieces shared by the corollary, the conjecture and the published example.
struct EnsembleTerms {
    sigma: Vec<Spectrum>,
    /// det(I − Σ wᵢ Zᵢ*Zᵢ)
    gram_det: f64,
}

fn ensemble_terms(zs: &[ComplexMatrix], w: &WeightVector) -> Result<EnsembleTerms> {
    if zs.len() != w.len() {
        return Err(Error::WeightError(format!(
            "{} matrices but {} weights",
            zs.len(),
            w.len()
        )));
    }
    let mut sigma = Vec::with_capacity(zs.len());
    for z in zs {
        zs[0].same_order(z)?;
        sigma.push(check_strict_contraction(z)?);
    }
    let grams: Vec<ComplexMatrix> = zs.iter().map(|z| &z.adjoint() * z).collect();
    let g = ComplexMatrix::weighted_sum(&grams, w.values())?.hermitian_part();
    let gram_det = real_det(&g.identity_minus(), "det(I - sum w Z*Z)")?;
    Ok(EnsembleTerms { sigma, gram_det })
}

fn weighted_parts<'a>(sigma: &'a [Spectrum], w: &WeightVector) -> Vec<(&'a Spectrum, f64)> {
    sigma
        .iter()
        .zip(w.values())
        .map(|(r, &wi)| (r, wi))
        .collect()
}

/// Upper bound with absolute values:
/// `det(I−Σwᵢ Zᵢ*Zᵢ)/|det(I−U Σwᵢ|Zᵢ|)|² ≤ ΠₖΠᵢ((1+rᵢₖ)/(1−rᵢₖ))^{wᵢ}`
/// over singular values. Also checks the operator-convexity step
/// `(Σwᵢ|Zᵢ|)² ≤ Σwᵢ|Zᵢ|²` and fails the upper verdict if it is violated
/// beyond `1e-9`.
pub fn verify_corollary(
    zs: &[ComplexMatrix],
    w: &WeightVector,
    u: &ComplexMatrix,
) -> Result<InequalityReport> {
    let CorollaryTerms {
        mid, upper, abs, a, ..
    } = corollary_terms(zs, w, u)?;
    let gap = operator_convexity_gap(&abs, w)?;

    let mut flags = Vec::new();
    if all_equal(&abs, PSD_TOL) {
        flags.push(EqualityFlag::AllEnsembleEqual);
    }
    let (s, _) = eig_hermitian(&a)?;
    flags.extend(classify_equality(&a, &s, u)?);

    let mut report = InequalityReport::assemble(
        "corollary",
        ExtendedReal::Finite(0.0),
        mid,
        upper,
        EqualityClassification::new(flags),
        vec![
            "bounds over singular values of each Z_i".into(),
            "lower side not asserted".into(),
            format!("operator convexity gap {gap:.3e}"),
            THRESHOLDS_NOTE.into(),
        ],
    );
    if gap > 1e-9 {
        report.holds_upper = false;
        report.notes.push_str("; operator convexity check FAILED");
    }
    Ok(report)
}

/// Evaluates both sides of
/// `ΠₖΠᵢ((1−rᵢₖ)/(1+rᵢₖ))^{wᵢ} ≤ det(I−Σwᵢ Zᵢ*Zᵢ)/|det(I−Σwᵢ Zᵢ)|² ≤ ΠₖΠᵢ((1+rᵢₖ)/(1−rᵢₖ))^{wᵢ}`
/// without asserting either. The left side is false in general and the
/// right side is unresolved, so a failed side is a finding, not an error.
pub fn conjecture_eval(zs: &[ComplexMatrix], w: &WeightVector) -> Result<InequalityReport> {
    let terms = ensemble_terms(zs, w)?;
    let sum = ComplexMatrix::weighted_sum(zs, w.values())?;
    let den = det_lu(&sum.identity_minus()).norm_sqr();
    let mid = ExtendedReal::ratio(terms.gram_det, den, ZERO_DENOMINATOR);
    let (lower, upper) = harnack_bounds_weighted(&weighted_parts(&terms.sigma, w));
    Ok(InequalityReport::assemble(
        "conjecture",
        lower,
        mid,
        upper,
        EqualityClassification::none(),
        vec![
            "bounds over singular values of each Z_i".into(),
            "lower side is false in general; upper side is unresolved".into(),
            "violations are findings, not errors".into(),
        ],
    ))
}

pub(crate) struct CorollaryTerms {
    pub lower: ExtendedReal,
    pub mid: ExtendedReal,
    pub upper: ExtendedReal,
    abs: Vec<ComplexMatrix>,
    a: ComplexMatrix,
}

/// Both weighted products and the ratio `det(I−Σwᵢ Zᵢ*Zᵢ)/|det(I−U Σwᵢ|Zᵢ|)|²`.
pub(crate) fn corollary_terms(
    zs: &[ComplexMatrix],
    w: &WeightVector,
    u: &ComplexMatrix,
) -> Result<CorollaryTerms> {
    let terms = ensemble_terms(zs, w)?;
    zs[0].same_order(u)?;
    check_unitary(u)?;
    let abs: Vec<ComplexMatrix> = zs.iter().map(abs_matrix).collect();
    let a = ComplexMatrix::weighted_sum(&abs, w.values())?.hermitian_part();
    let den = det_lu(&(u * &a).identity_minus()).norm_sqr();
    let mid = ExtendedReal::ratio(terms.gram_det, den, ZERO_DENOMINATOR);
    let (lower, upper) = harnack_bounds_weighted(&weighted_parts(&terms.sigma, w));
    Ok(CorollaryTerms {
        lower,
        mid,
        upper,
        abs,
        a,
    })
}
