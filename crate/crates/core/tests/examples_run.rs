//! Every example runs and produces what it describes.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(regularizer_tour, "regularizer_tour.rs");
example!(lasso_identification, "lasso_identification.rs");
example!(rate_prediction, "rate_prediction.rs");
example!(certificates, "certificates.rs");
example!(tv_deconvolution, "tv_deconvolution.rs");
example!(nuclear_recovery, "nuclear_recovery.rs");
example!(degenerate_lasso, "degenerate_lasso.rs");
example!(config_run, "config_run.rs");
example!(reproduce_all, "reproduce_all.rs");

#[test]
fn regularizer_tour_covers_every_kind() {
    let lines = regularizer_tour::run_example().unwrap();
    let names: Vec<&str> = lines.iter().map(|l| l.name).collect();
    assert_eq!(names.len(), 5);
    assert!(lines.iter().all(|l| !l.manifold.is_empty()));
    assert!(lines.iter().any(|l| l.dim > 0));
}

#[test]
fn lasso_identifies_before_the_end() {
    let r = lasso_identification::run_example().unwrap();
    assert!(r.k.unwrap() < r.iterations);
    assert!(r.observed_rate.unwrap() < 1.0);
}

#[test]
fn rate_prediction_runs() {
    let preds = rate_prediction::run_example().unwrap();
    assert_eq!(preds[0].rho, 0.75);
    assert!(preds.iter().all(|p| p.rho < 1.0));
}

#[test]
fn certificates_separate_the_two_cases() {
    let (good, bad) = certificates::run_example().unwrap();
    assert!(good.passes());
    assert!(!bad.passes());
}

#[test]
fn tv_deconvolution_identifies_jumps() {
    let r = tv_deconvolution::run_example().unwrap();
    assert!(r.flags.certificate, "{}", r.summary());
    assert!(r.identification.k.is_some());
}

#[test]
fn nuclear_recovery_identifies_rank() {
    let r = nuclear_recovery::run_example().unwrap();
    assert!(r.flags.all_pass(), "{}", r.summary());
}

#[test]
fn degenerate_lasso_converges_linearly() {
    let d = degenerate_lasso::run_example().unwrap();
    assert!(d.kernel_dim >= 1);
    assert!(d.passes());
}

#[test]
fn config_run_produces_report() {
    let r = config_run::run_example().unwrap();
    assert_eq!(r.name, "piecewise-demo");
    assert!(r.flags.certificate);
}

#[test]
fn reproduce_all_runs_every_builtin() {
    let reports = reproduce_all::run_example().unwrap();
    assert_eq!(reports.len(), fbps::harness::BUILTIN_ALL.len());
    assert!(reports.iter().all(|r| r.flags.all_pass()));
}
