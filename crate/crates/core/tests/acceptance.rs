//! End-to-end acceptance suite. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use harnack::inequalities::{published_counterexample, verify_psd, EqualityFlag};
use harnack::linalg::{
    derive_trial_rng, det_lu, eig_general, eig_hermitian, random_complex_matrix, random_hermitian,
    random_psd_contraction, svd, Complex, ComplexMatrix, RngState, Spectrum,
};
use harnack::majorization::{
    fan_check, lemma_reverse, lemma_shift, lewent, weyl_check, WeightVector,
};
use harnack::search::{
    run_search, InequalityKind, MatrixKind, SearchConfig, SearchOutcome, WeightKind,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

// 1. Published counterexample.
fn counterexample() -> Verdict {
    let out = published_counterexample();
    verdict(
        out.passed && !out.report.holds_lower,
        format!(
            "lower {:.6} -> {:.4}, mid {:.6} -> {:.4}, lower > mid: {}",
            out.lower, out.lower_rounded, out.mid, out.mid_rounded, out.lower_exceeds_mid
        ),
    )
}

/// Trial counts per order, summing to `total`.
fn split(total: u64, parts: u64) -> Vec<u64> {
    (0..parts)
        .map(|i| total / parts + u64::from(i < total % parts))
        .collect()
}

fn psd_suite_configs() -> Vec<SearchConfig> {
    (1..=6)
        .zip(split(1000, 6))
        .map(|(n, t)| SearchConfig::new(InequalityKind::Psd, n, 1, t, 1000 + n as u64))
        .collect()
}

fn multi_suite_configs() -> Vec<SearchConfig> {
    let shapes: Vec<(usize, usize)> = [2, 3]
        .into_iter()
        .flat_map(|m| (2..=5).map(move |n| (m, n)))
        .collect();
    shapes
        .iter()
        .zip(split(500, shapes.len() as u64))
        .map(|(&(m, n), t)| {
            SearchConfig::new(InequalityKind::Multi, n, m, t, 2000 + (10 * m + n) as u64)
                .with_weights(WeightKind::DirichletFlat)
        })
        .collect()
}

fn conjecture_configs() -> Vec<SearchConfig> {
    vec![
        SearchConfig::new(InequalityKind::ConjectureUpper, 2, 2, 100_000, 8)
            .with_kind(MatrixKind::GeneralContraction)
            .with_weights(WeightKind::DirichletFlat),
        SearchConfig::new(InequalityKind::ConjectureLower, 2, 2, 10_000, 8)
            .with_kind(MatrixKind::PolarShifted)
            .with_weights(WeightKind::DirichletFlat),
    ]
}

fn run_all(cfgs: &[SearchConfig]) -> Vec<SearchOutcome> {
    cfgs.iter()
        .map(|c| run_search(c).expect("valid config"))
        .collect()
}

// 2. PSD bounds over n = 1..6.
fn psd_suite() -> Verdict {
    let outs = run_all(&psd_suite_configs());
    let violations: u64 = outs.iter().map(|o| o.stats.violation_count).sum();
    let errors: u64 = outs.iter().map(|o| o.stats.error_count).sum();
    let trials: u64 = outs.iter().map(|o| o.stats.evaluated).sum();
    let min = outs
        .iter()
        .filter_map(|o| o.stats.min_slack)
        .fold(f64::INFINITY, f64::min);
    verdict(
        violations == 0 && errors == 0 && trials == 1000,
        format!("{trials} trials, {violations} violations, {errors} errors, min slack {min:.3e}"),
    )
}

// 3. Multi-matrix bounds and strictness.
fn multi_suite() -> Verdict {
    let outs = run_all(&multi_suite_configs());
    let violations: u64 = outs.iter().map(|o| o.stats.violation_count).sum();
    let errors: u64 = outs.iter().map(|o| o.stats.error_count).sum();
    let trials: u64 = outs.iter().map(|o| o.stats.evaluated).sum();
    let min = outs
        .iter()
        .filter_map(|o| o.stats.min_slack)
        .fold(f64::INFINITY, f64::min);
    // Sampled ensembles are never all equal, so every slack must be strict.
    verdict(
        violations == 0 && errors == 0 && trials == 500 && min > 1e-12,
        format!("{trials} trials, {violations} violations, {errors} errors, min slack {min:.3e}"),
    )
}

// 4. Equality at U = I and U = -I.
fn equality_cases() -> Verdict {
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for t in 0..100u64 {
        let mut rng = derive_trial_rng(4, t);
        let n = 1 + (t as usize % 6);
        let z = random_psd_contraction(n, &mut rng, 0.0, 0.95).unwrap();
        let id = ComplexMatrix::identity(n).unwrap();
        let neg = id.scale_real(-1.0);
        let p = verify_psd(&z, &id).unwrap();
        let q = verify_psd(&z, &neg).unwrap();
        let e1 = (p.mid.to_f64() - p.upper.to_f64()).abs() / p.upper.to_f64();
        let e2 = (q.mid.to_f64() - q.lower.to_f64()).abs() / q.lower.to_f64();
        worst = worst.max(e1).max(e2);
        let ok = e1 <= 1e-10
            && e2 <= 1e-10
            && p.equality.flags() == [EqualityFlag::SpecPosMatch, EqualityFlag::UIsIdentity]
            && q.equality.flags() == [EqualityFlag::SpecNegMatch, EqualityFlag::UIsNegIdentity];
        if !ok {
            bad += 1;
        }
    }
    verdict(
        bad == 0,
        format!("100 matrices, {bad} mismatches, worst relative gap {worst:.2e}"),
    )
}

// 5. Fan and Weyl majorization.
fn majorization_oracles() -> Verdict {
    let mut fan_fail = 0;
    let mut weyl_fail = 0;
    for t in 0..1000u64 {
        let mut rng = RngState::new(5, t);
        let n = 1 + (t as usize % 6);
        let h = random_hermitian(n, &mut rng).unwrap();
        let s = random_hermitian(n, &mut rng).unwrap();
        if !fan_check(&h, &s).unwrap().holds {
            fan_fail += 1;
        }
        let a = random_complex_matrix(n, &mut rng).unwrap();
        if !weyl_check(&a).unwrap().holds {
            weyl_fail += 1;
        }
    }
    verdict(
        fan_fail == 0 && weyl_fail == 0,
        format!("1000 + 1000 instances, fan failures {fan_fail}, weyl failures {weyl_fail}"),
    )
}

/// `y` uniform on `[0.05, 0.95]`; `log x` is `log y` pulled towards its
/// mean, so `x ≺_log y` with equal products and `x` not a permutation of `y`.
fn lemma_pair(rng: &mut RngState, n: usize) -> (Spectrum, Spectrum) {
    let y: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.05, 0.95)).collect();
    let logs: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    let t = rng.uniform_in(0.1, 0.9);
    let x: Vec<f64> = logs
        .iter()
        .map(|l| ((1.0 - t) * l + t * mean).exp())
        .collect();
    (Spectrum::new(x).unwrap(), Spectrum::new(y).unwrap())
}

// 6. Shift lemma, reverse lemma and Lewent.
fn lemma_suites() -> Verdict {
    let mut lemma_fail = 0;
    let mut lewent_fail = 0;
    let mut min_margin = f64::INFINITY;
    for t in 0..1000u64 {
        let mut rng = RngState::new(6, t);
        let n = 2 + (t as usize % 5);
        let (x, y) = lemma_pair(&mut rng, n);
        let a = lemma_shift(&x, &y).unwrap();
        let b = lemma_reverse(&x, &y).unwrap();
        min_margin = min_margin.min(a.margin).min(b.margin);
        if !(a.holds && b.holds && a.margin > 0.0 && b.margin > 0.0) {
            lemma_fail += 1;
        }

        let raw: Vec<f64> = (0..n).map(|_| rng.exponential() + 1e-3).collect();
        let w = WeightVector::normalized(&raw).unwrap();
        let constant = t % 2 == 0;
        let xs: Vec<f64> = if constant {
            vec![rng.uniform_in(0.0, 0.95); n]
        } else {
            let mut v: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.0, 0.95)).collect();
            v[0] = (v[1] + 0.01).min(0.99);
            v
        };
        let r = lewent(&xs, &w).unwrap();
        if !(r.holds && r.equality == constant) {
            lewent_fail += 1;
        }
    }
    verdict(
        lemma_fail == 0 && lewent_fail == 0,
        format!(
            "1000 pairs, lemma failures {lemma_fail}, lewent failures {lewent_fail}, min margin {min_margin:.3e}"
        ),
    )
}

fn quadratic_roots(m: &ComplexMatrix) -> [Complex; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

fn matched(got: &[Complex], want: [Complex; 2], tol: f64) -> bool {
    let direct = (got[0] - want[0]).norm().max((got[1] - want[1]).norm());
    let swapped = (got[0] - want[1]).norm().max((got[1] - want[0]).norm());
    direct.min(swapped) <= tol
}

// 7. Eigen, SVD and determinant kernels on 2×2 input.
fn kernel_oracles() -> Verdict {
    let mut failures = Vec::new();
    let mut worst_recon: f64 = 0.0;
    for t in 0..1000u64 {
        let mut rng = RngState::new(7, t);
        let a = random_complex_matrix(2, &mut rng).unwrap();
        let h = random_hermitian(2, &mut rng).unwrap();

        let ev = eig_general(&a).unwrap();
        if !matched(ev.values(), quadratic_roots(&a), 1e-9) {
            failures.push(format!("eig_general #{t}"));
        }
        let (hv, q) = eig_hermitian(&h).unwrap();
        let hv_c: Vec<Complex> = hv.values().iter().map(|&v| Complex::new(v, 0.0)).collect();
        if !matched(&hv_c, quadratic_roots(&h), 1e-9) {
            failures.push(format!("eig_hermitian #{t}"));
        }
        let d = ComplexMatrix::from_real_diag(hv.values()).unwrap();
        let eig_res = (&(&q * &d) * &q.adjoint()).max_abs_diff(&h);
        let svd_res = svd(&a).unwrap().reconstruct().max_abs_diff(&a);
        worst_recon = worst_recon.max(eig_res).max(svd_res);
        if eig_res > 1e-9 || svd_res > 1e-9 {
            failures.push(format!("reconstruction #{t}"));
        }
        let det = det_lu(&a);
        let prod = ev.product();
        if (det - prod).norm() > 1e-8 * det.norm().max(prod.norm()) {
            failures.push(format!("det #{t}"));
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "1000 matrices, {} failures{}, worst residual {worst_recon:.2e}",
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

// 8. Conjecture evidence runs.
fn conjecture_runs() -> Verdict {
    let outs = run_all(&conjecture_configs());
    let (upper, lower) = (&outs[0], &outs[1]);
    let labelled = outs.iter().all(|o| o.header.label == "evidence, not proof");
    verdict(
        upper.stats.violation_count == 0
            && upper.stats.error_count == 0
            && lower.stats.violation_count >= 1
            && labelled,
        format!(
            "upper: {} trials, {} violations, min slack {:.3e}; lower: {} violations in {} trials",
            upper.stats.evaluated,
            upper.stats.violation_count,
            upper.stats.min_slack.unwrap_or(f64::NAN),
            lower.stats.violation_count,
            lower.stats.evaluated
        ),
    )
}

fn serialized_with_threads(threads: usize, cfgs: &[SearchConfig]) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        run_all(cfgs)
            .iter()
            .map(|o| serde_json::to_string(o).unwrap())
            .collect()
    })
}

// 9. Byte-identical output for 1 and 4 threads, run twice.
fn determinism() -> Verdict {
    let mut cfgs = psd_suite_configs();
    cfgs.extend(multi_suite_configs());
    cfgs.extend(conjecture_configs());
    let a = serialized_with_threads(1, &cfgs);
    let b = serialized_with_threads(4, &cfgs);
    let c = serialized_with_threads(4, &cfgs);
    let differing = a
        .iter()
        .zip(&b)
        .zip(&c)
        .filter(|((x, y), z)| x != y || y != z)
        .count();
    let bytes: usize = a.iter().map(String::len).sum();
    verdict(
        differing == 0,
        format!(
            "{} outcomes ({bytes} bytes), {differing} differ",
            cfgs.len()
        ),
    )
}

fn main() -> ExitCode {
    type Check = (u32, &'static str, fn() -> Verdict, Option<Duration>);
    let checks: [Check; 9] = [
        (
            1,
            "published counterexample",
            counterexample,
            Some(Duration::from_secs(1)),
        ),
        (
            2,
            "psd bound suite",
            psd_suite,
            Some(Duration::from_secs(10)),
        ),
        (
            3,
            "multi-matrix suite",
            multi_suite,
            Some(Duration::from_secs(10)),
        ),
        (4, "equality cases", equality_cases, None),
        (5, "majorization oracles", majorization_oracles, None),
        (6, "lemma and lewent suites", lemma_suites, None),
        (7, "kernel oracles", kernel_oracles, None),
        (
            8,
            "conjecture evidence runs",
            conjecture_runs,
            Some(Duration::from_secs(60)),
        ),
        (9, "determinism across thread counts", determinism, None),
    ];

    let mut failed = 0;
    for (id, name, check, budget) in checks {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget_note = budget
            .map(|b| format!(", budget {}s", b.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {id} [{name}]: {} ({}; {:.2}s{budget_note})",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
