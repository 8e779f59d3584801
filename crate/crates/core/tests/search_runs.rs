use harnack::search::{
    replay, run_search, InequalityKind, MatrixKind, SearchConfig, SearchOutcome, WeightKind,
};

fn json(o: &SearchOutcome) -> String {
    serde_json::to_string(o).unwrap()
}

#[test]
fn theorem_backed_runs_are_clean() {
    let cases = [
        (InequalityKind::Tung, MatrixKind::GeneralContraction),
        (InequalityKind::GeneralLower, MatrixKind::GeneralContraction),
        (InequalityKind::Marcus, MatrixKind::GeneralContraction),
        (InequalityKind::Psd, MatrixKind::Psd),
        (InequalityKind::Multi, MatrixKind::Psd),
        (InequalityKind::Corollary, MatrixKind::GeneralContraction),
        (InequalityKind::Corollary, MatrixKind::PolarShifted),
    ];
    for (kind, mk) in cases {
        let cfg = SearchConfig::new(kind, 3, 2, 300, 21)
            .with_kind(mk)
            .with_weights(WeightKind::DirichletFlat);
        let out = run_search(&cfg).unwrap();
        assert!(out.violations.is_empty(), "{kind}: {:?}", out.stats);
        assert_eq!(out.stats.error_count, 0, "{kind}: {:?}", out.errors);
    }
}

#[test]
fn psd_seed_seven_has_no_violations() {
    let out = run_search(&SearchConfig::new(InequalityKind::Psd, 4, 1, 1000, 7)).unwrap();
    assert_eq!(out.stats.violation_count, 0);
    assert_eq!(out.tightest.len(), 10);
}

#[test]
fn violations_replay_exactly() {
    let cfg = SearchConfig::new(InequalityKind::ConjectureLower, 2, 2, 3000, 5)
        .with_kind(MatrixKind::PolarShifted);
    let out = run_search(&cfg).unwrap();
    assert!(out.has_violations());
    let back: SearchOutcome = serde_json::from_str(&json(&out)).unwrap();
    for rec in &back.violations {
        assert!(rec.slack < -1e-9);
        let (rep, slack) = replay(cfg.inequality, rec).unwrap();
        assert!((slack - rec.slack).abs() <= 1e-12);
        assert!(!rep.holds_lower);
    }
}

#[test]
fn identical_across_runs_and_pools() {
    let cfg = SearchConfig::new(InequalityKind::Corollary, 3, 3, 400, 99)
        .with_kind(MatrixKind::GeneralContraction)
        .with_weights(WeightKind::DirichletFlat);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| json(&run_search(&cfg).unwrap()))
    };
    let a = run(1);
    assert_eq!(a, run(3));
    assert_eq!(a, run(8));
    assert!(!a.contains("elapsed"));
    assert!(a.contains("evidence, not proof"));
}

#[test]
fn unknown_name_is_rejected() {
    assert!("verify_nothing".parse::<InequalityKind>().is_err());
}
