use spreadlab::suite::{run_criterion, run_suite, Profile, CRITERIA};

#[test]
fn exact_criteria_pass_in_quick_profile() {
    // 1-6 are exact; the statistical ones are judged by the acceptance target
    for id in 1..=6 {
        let r = run_criterion(id, Profile::Quick).unwrap();
        assert!(r.passed, "criterion {id}: {}", r.detail);
        assert_eq!(r.failures, 0);
    }
}

#[test]
fn reports_cover_every_criterion() {
    let reports = run_suite(Profile::Quick).unwrap();
    assert_eq!(reports.len(), CRITERIA.len());
    for (r, (id, title)) in reports.iter().zip(CRITERIA) {
        assert_eq!((r.id, r.title), (*id, *title));
        assert!(r.failures <= r.checked);
        assert!(!r.passed || r.failures == 0);
    }
    assert!(reports[6].vacuous);
    assert!(run_criterion(11, Profile::Quick).is_err());
}
