//! Seeded Monte-Carlo harness over the inequality verifiers.
//!
//! Every trial draws from its own [`RngState`] stream (`stream = trial
//! index`), so a trial's inputs depend only on `(seed, trial)`. Trials are
//! evaluated in parallel and merged by index, which makes the serialized
//! [`SearchOutcome`] identical for any thread count.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{
    conjecture_eval, verify_corollary, verify_general_lower, verify_marcus, verify_multi,
    verify_psd, verify_tung, EnsembleSpec, InequalityReport, HOLD_TOL,
};
use crate::linalg::{
    abs_matrix, derive_trial_rng, haar_orthogonal, haar_unitary, random_general_contraction,
    random_psd_contraction, random_real_psd_contraction, ComplexMatrix, RngState, MAX_ORDER,
};
use crate::majorization::WeightVector;

/// Label attached to every outcome: a clean run is not a proof.
pub const EVIDENCE_LABEL: &str = "evidence, not proof";

/// At most this many per-trial error messages are kept verbatim.
const MAX_ERROR_RECORDS: usize = 20;

/// Which verifier a search drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    Tung,
    Marcus,
    GeneralLower,
    Psd,
    Multi,
    Corollary,
    /// Conjectured lower side only; known to fail.
    ConjectureLower,
    /// Conjectured upper side only; unresolved.
    ConjectureUpper,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 8] = [
        Self::Tung,
        Self::Marcus,
        Self::GeneralLower,
        Self::Psd,
        Self::Multi,
        Self::Corollary,
        Self::ConjectureLower,
        Self::ConjectureUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tung => "tung",
            Self::Marcus => "marcus",
            Self::GeneralLower => "general-lower",
            Self::Psd => "psd",
            Self::Multi => "multi",
            Self::Corollary => "corollary",
            Self::ConjectureLower => "conjecture-lower",
            Self::ConjectureUpper => "conjecture-upper",
        }
    }

    /// The slack that decides a violation for this kind.
    pub fn slack_of(self, report: &InequalityReport) -> f64 {
        match self {
            Self::ConjectureLower => report.slack_lower,
            Self::ConjectureUpper => report.slack_upper,
            _ => report.min_slack(),
        }
    }

    fn needs_psd(self) -> bool {
        matches!(self, Self::Psd | Self::Multi)
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityKind {
    type Err = Error;

    /// Accepts the short names and the `verify_*` / `conjecture_eval_*` spellings.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = key.strip_prefix("verify-").unwrap_or(&key);
        let key = key
            .strip_prefix("conjecture-eval-")
            .map_or_else(|| key.to_string(), |rest| format!("conjecture-{rest}"));
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

/// How ensemble matrices are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// `Q·diag(r)·Q*`, Haar unitary `Q`, `r` uniform on the eigenvalue range.
    Psd,
    /// `U₁·diag(r)·U₂*`, independent Haar `U₁, U₂`, `r` uniform on the range.
    GeneralContraction,
    /// `U₀·Pᵢ` with one real Haar orthogonal `U₀` shared by the ensemble and
    /// real symmetric PSD `Pᵢ` drawn like [`MatrixKind::Psd`].
    PolarShifted,
}

impl MatrixKind {
    fn describe(self) -> &'static str {
        match self {
            Self::Psd => "Q diag(r) Q*, Q Haar unitary, r iid uniform on [eig_lo, eig_hi]",
            Self::GeneralContraction => {
                "U1 diag(r) U2*, U1 and U2 independent Haar unitaries, r iid uniform on [eig_lo, eig_hi]"
            }
            Self::PolarShifted => {
                "U0 P_i, U0 real Haar orthogonal shared by the ensemble, P_i = O diag(r) O^T with O real Haar orthogonal, r iid uniform on [eig_lo, eig_hi]"
            }
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "psd" => Ok(Self::Psd),
            "general-contraction" | "general" => Ok(Self::GeneralContraction),
            "polar-shifted" => Ok(Self::PolarShifted),
            _ => Err(Error::InvalidConfig(format!("unknown matrix kind '{s}'"))),
        }
    }
}

/// How convex weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Uniform,
    /// Normalized i.i.d. unit exponentials, i.e. uniform on the simplex.
    DirichletFlat,
}

impl WeightKind {
    fn describe(self) -> &'static str {
        match self {
            Self::Uniform => "w_i = 1/m",
            Self::DirichletFlat => "w = e / sum(e), e_i iid Exp(1)",
        }
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "uniform" => Ok(Self::Uniform),
            "dirichlet-flat" | "dirichlet" => Ok(Self::DirichletFlat),
            _ => Err(Error::InvalidConfig(format!("unknown weight kind '{s}'"))),
        }
    }
}

/// A seeded trial plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub inequality: InequalityKind,
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub matrix_kind: MatrixKind,
    pub weight_kind: WeightKind,
    pub top_k: usize,
}

impl SearchConfig {
    pub const DEFAULT_EIG_LO: f64 = 0.0;
    pub const DEFAULT_EIG_HI: f64 = 0.95;
    pub const DEFAULT_TOP_K: usize = 10;

    /// Defaults: psd matrices, uniform weights, range `[0, 0.95]`, `top_k = 10`.
    pub fn new(inequality: InequalityKind, n: usize, m: usize, trials: u64, seed: u64) -> Self {
        Self {
            inequality,
            n,
            m,
            trials,
            seed,
            eig_lo: Self::DEFAULT_EIG_LO,
            eig_hi: Self::DEFAULT_EIG_HI,
            matrix_kind: MatrixKind::Psd,
            weight_kind: WeightKind::Uniform,
            top_k: Self::DEFAULT_TOP_K,
        }
    }

    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.matrix_kind = kind;
        self
    }

    pub fn with_weights(mut self, kind: WeightKind) -> Self {
        self.weight_kind = kind;
        self
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.eig_lo = lo;
        self.eig_hi = hi;
        self
    }

    pub fn with_top_k(mut self, k: usize) -> Self {
        self.top_k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n == 0 || self.n > MAX_ORDER {
            return Err(Error::InvalidConfig(format!(
                "n must lie in 1..={MAX_ORDER}, got {}",
                self.n
            )));
        }
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        let (lo, hi) = (self.eig_lo, self.eig_hi);
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi < 1.0) {
            return Err(Error::BadRange { lo, hi });
        }
        if self.inequality.needs_psd() && self.matrix_kind != MatrixKind::Psd {
            return Err(Error::InvalidConfig(format!(
                "{} requires matrix kind psd",
                self.inequality
            )));
        }
        Ok(())
    }
}

/// Everything a verifier consumed in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialInputs {
    pub ensemble: EnsembleSpec,
    pub unitary: ComplexMatrix,
}

/// One evaluated trial with its replayable inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub slack: f64,
    pub report: InequalityReport,
    pub inputs: TrialInputs,
}

/// A trial whose verifier returned an error (e.g. a singular hypothesis).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial_index: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub trials_run: u64,
    pub evaluated: u64,
    pub violation_count: u64,
    pub error_count: u64,
    pub min_slack: Option<f64>,
    pub mean_slack: Option<f64>,
    /// Wall time; excluded from JSON so outputs stay byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Sampling choices, recorded with every outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingHeader {
    pub label: String,
    pub matrices: String,
    pub unitary: String,
    pub weights: String,
    pub rng: String,
    pub violation_threshold: f64,
    pub slack_used: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub header: SamplingHeader,
    pub config: SearchConfig,
    pub violations: Vec<TrialRecord>,
    pub tightest: Vec<TrialRecord>,
    pub errors: Vec<TrialError>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty()
    }
}

fn header(cfg: &SearchConfig) -> SamplingHeader {
    let slack_used = match cfg.inequality {
        InequalityKind::ConjectureLower => "slack_lower",
        InequalityKind::ConjectureUpper => "slack_upper",
        _ => "min(slack_lower, slack_upper)",
    };
    SamplingHeader {
        label: EVIDENCE_LABEL.into(),
        matrices: cfg.matrix_kind.describe().into(),
        unitary: "Haar unitary via phase-corrected QR of a complex Gaussian matrix".into(),
        weights: cfg.weight_kind.describe().into(),
        rng: "counter-based SplitMix64 hash, stream = trial index".into(),
        violation_threshold: -HOLD_TOL,
        slack_used: slack_used.into(),
    }
}

/// `Zᵢ' = U₀·|Zᵢ|` for each base matrix.
pub fn polar_shifted_ensemble(
    u0: &ComplexMatrix,
    bases: &[ComplexMatrix],
    weights: WeightVector,
) -> Result<EnsembleSpec> {
    let shifted = bases
        .iter()
        .map(|z| {
            u0.same_order(z)?;
            Ok(u0 * &abs_matrix(z))
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleSpec::new(shifted, weights)
}

fn sample_weights(cfg: &SearchConfig, rng: &mut RngState) -> Result<WeightVector> {
    match cfg.weight_kind {
        WeightKind::Uniform => WeightVector::uniform(cfg.m),
        WeightKind::DirichletFlat => {
            // Exp(1) is positive with probability one; the floor only guards
            // against an exact zero from the sampler.
            let raw: Vec<f64> = (0..cfg.m)
                .map(|_| rng.exponential().max(f64::MIN_POSITIVE))
                .collect();
            WeightVector::normalized(&raw)
        }
    }
}

/// Draws one ensemble and a Haar unitary. Matrices come first, then the
/// weights, then the unitary, all from `rng`.
pub fn sample_instance(
    cfg: &SearchConfig,
    rng: &mut RngState,
) -> Result<(EnsembleSpec, ComplexMatrix)> {
    cfg.validate()?;
    let (n, lo, hi) = (cfg.n, cfg.eig_lo, cfg.eig_hi);
    let matrices = match cfg.matrix_kind {
        MatrixKind::Psd => (0..cfg.m)
            .map(|_| random_psd_contraction(n, rng, lo, hi))
            .collect::<Result<Vec<_>>>()?,
        MatrixKind::GeneralContraction => (0..cfg.m)
            .map(|_| random_general_contraction(n, rng, lo, hi))
            .collect::<Result<Vec<_>>>()?,
        MatrixKind::PolarShifted => {
            let u0 = haar_orthogonal(n, rng)?;
            (0..cfg.m)
                .map(|_| Ok(&u0 * &random_real_psd_contraction(n, rng, lo, hi)?))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let weights = sample_weights(cfg, rng)?;
    let u = haar_unitary(n, rng)?;
    Ok((EnsembleSpec::new(matrices, weights)?, u))
}

/// Runs the named verifier on stored inputs. Single-matrix verifiers use the
/// first ensemble member.
pub fn evaluate(kind: InequalityKind, inputs: &TrialInputs) -> Result<InequalityReport> {
    let ens = &inputs.ensemble;
    let u = &inputs.unitary;
    let z = &ens.matrices[0];
    match kind {
        InequalityKind::Tung => verify_tung(z, u),
        InequalityKind::Marcus => verify_marcus(z),
        InequalityKind::GeneralLower => verify_general_lower(z, u),
        InequalityKind::Psd => verify_psd(z, u),
        InequalityKind::Multi => verify_multi(ens, u),
        InequalityKind::Corollary => verify_corollary(&ens.matrices, &ens.weights, u),
        InequalityKind::ConjectureLower | InequalityKind::ConjectureUpper => {
            conjecture_eval(&ens.matrices, &ens.weights)
        }
    }
}

/// Re-evaluates a stored record; the returned slack is bit-identical to the
/// recorded one when the record came from [`run_search`].
pub fn replay(kind: InequalityKind, record: &TrialRecord) -> Result<(InequalityReport, f64)> {
    let report = evaluate(kind, &record.inputs)?;
    let slack = kind.slack_of(&report);
    Ok((report, slack))
}

fn run_trial(cfg: &SearchConfig, trial: u64) -> Result<TrialRecord> {
    let mut rng = derive_trial_rng(cfg.seed, trial);
    let (ensemble, unitary) = sample_instance(cfg, &mut rng)?;
    let inputs = TrialInputs { ensemble, unitary };
    let report = evaluate(cfg.inequality, &inputs)?;
    Ok(TrialRecord {
        trial_index: trial,
        slack: cfg.inequality.slack_of(&report),
        report,
        inputs,
    })
}

/// Evaluates `cfg.trials` independent trials and collects violations (slack
/// below `-1e-9`) and the `top_k` tightest trials, both ordered
/// deterministically.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let start = Instant::now();

    // Only slacks are kept in the parallel pass; the few interesting trials
    // are regenerated afterwards from their streams.
    let slacks: Vec<std::result::Result<f64, String>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(cfg, t)
                .map(|r| r.slack)
                .map_err(|e| e.to_string())
        })
        .collect();

    let mut ok: Vec<(u64, f64)> = Vec::new();
    let mut errors = Vec::new();
    let mut error_count = 0u64;
    for (t, s) in slacks.into_iter().enumerate() {
        match s {
            Ok(v) => ok.push((t as u64, v)),
            Err(message) => {
                error_count += 1;
                if errors.len() < MAX_ERROR_RECORDS {
                    errors.push(TrialError {
                        trial_index: t as u64,
                        message,
                    });
                }
            }
        }
    }

    let violation_ids: Vec<u64> = ok
        .iter()
        .filter(|(_, s)| *s < -HOLD_TOL)
        .map(|(t, _)| *t)
        .collect();
    let mut ranked = ok.clone();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    ranked.truncate(cfg.top_k);

    let rebuild = |t: u64| run_trial(cfg, t);
    let violations = violation_ids
        .par_iter()
        .map(|&t| rebuild(t))
        .collect::<Result<Vec<_>>>()?;
    let tightest = ranked
        .par_iter()
        .map(|&(t, _)| rebuild(t))
        .collect::<Result<Vec<_>>>()?;

    let evaluated = ok.len() as u64;
    let min_slack = ok.iter().map(|(_, s)| *s).min_by(f64::total_cmp);
    let mean_slack =
        (evaluated > 0).then(|| ok.iter().map(|(_, s)| s).sum::<f64>() / evaluated as f64);

    Ok(SearchOutcome {
        header: header(cfg),
        config: cfg.clone(),
        stats: SearchStats {
            trials_run: cfg.trials,
            evaluated,
            violation_count: violations.len() as u64,
            error_count,
            min_slack,
            mean_slack,
            elapsed: start.elapsed(),
        },
        violations,
        tightest,
        errors,
    })
}
