use gwl::estimation::{default_starts, fit_multistart, wald_ci};
use gwl::gof::fit_and_compare;
use gwl::simstudy::{export_report, run_study, StudyConfig};
use gwl::specfun::MinimizeOptions;
use gwl::{datasets, fit, GwlParams, Method};

#[test]
fn sample_fit_and_interval() {
    let truth = GwlParams::new(2.0, 0.5, 1.5).unwrap();
    let data = truth.distribution().sample(2000, 11);
    let r = fit(Method::Mle, &data, None, MinimizeOptions::default());
    assert!(!r.failed());
    let ci = wald_ci(&r, 0.99).unwrap();
    for (i, (lo, hi)) in ci.iter().enumerate() {
        let t = truth.to_array()[i];
        assert!(*lo <= t && t <= *hi, "coordinate {i}: {t} outside ({lo}, {hi})");
    }
}

#[test]
fn every_method_runs_on_the_bundled_data() {
    for data in [datasets::aarset(), datasets::cantareira()] {
        for m in Method::ALL {
            let r = fit_multistart(m, &data, &default_starts(&data), MinimizeOptions::default()).unwrap();
            assert!(r.objective_value.is_finite(), "{m}");
        }
    }
}

#[test]
fn cantareira_comparison_has_all_five_models() {
    let run = fit_and_compare(&datasets::cantareira(), MinimizeOptions::default());
    assert!(run.comparison.excluded.is_empty());
    assert_eq!(run.comparison.rows.len(), 5);
    assert_eq!(run.comparison.rows.iter().filter(|r| r.best).count(), 1);
    let gwl = run.comparison.row("GWL").unwrap();
    assert!((gwl.aic - 775.431).abs() < 0.5);
    let gg = run.comparison.row("GG").unwrap();
    assert!((gg.aic - 775.461).abs() < 1.0);
}

#[test]
fn study_export_has_one_row_per_parameter() {
    let config = StudyConfig {
        truth: GwlParams::new(0.5, 0.7, 1.5).unwrap(),
        n_grid: vec![20, 30],
        replicates: 4,
        methods: vec![Method::Mps, Method::Cme],
        master_seed: 3,
    };
    let mut out = Vec::new();
    export_report(&run_study(&config).unwrap(), &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1 + 3 * 2 * 2);
}
