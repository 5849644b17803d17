//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria 7 and 8 are known not to hold as stated (the bound is false; the
//! kernel limit converges like `1 - α` and one tilde residual rises before it
//! falls). They print FAIL; the run only errors if the set of failing
//! criteria differs from that.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::Value;

use holoherm::eval::{bound_sweep, Alpha, ComplexPoint};
use holoherm::kernels::{kernel_closed, KernelArgs, KERNEL_ORDER};
use holoherm::quadrature::{gauss_hermite_rule, moment_exactness};
use holoherm::report::VerificationReport;
use holoherm::verify::bargmann::bargmann_suite;
use holoherm::verify::identities::exact_sweeps;
use holoherm::verify::kernel_checks::{kernel_series_suite, reproducing_suite};
use holoherm::verify::limits::limits_suite;
use holoherm::verify::orthogonality::{orthogonality_suite, raw_calibration_integral};
use holoherm::verify::quadrature_checks::mc_agreement_reports;
use holoherm::verify::representation::representation_suite;
use holoherm::verify::{SuiteConfig, BOUND_MAX_DEGREE, BOUND_RADIUS, BOUND_SAMPLES};

const EXPECTED_FAILURES: [u32; 2] = [7, 8];

struct Outcome {
    passed: bool,
    summary: String,
}

fn max_err<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> f64 {
    reports.into_iter().map(|r| r.abs_err).fold(0.0, f64::max)
}

fn with_id<'a>(reports: &'a [VerificationReport], id: &'a str) -> impl Iterator<Item = &'a VerificationReport> + 'a {
    reports.iter().filter(move |r| r.check_id == id)
}

fn all_pass<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> bool {
    let mut any = false;
    for r in reports {
        any = true;
        if !r.passed {
            return false;
        }
    }
    any
}

fn criterion_1(cfg: &SuiteConfig) -> Outcome {
    let start = Instant::now();
    let reports = exact_sweeps(cfg);
    let secs = start.elapsed().as_secs_f64();
    let failures: f64 = reports.iter().map(|r| r.computed.re).sum();
    let names: Vec<&str> = reports.iter().map(|r| r.check_id.trim_start_matches("identities.")).collect();
    Outcome {
        passed: all_pass(&reports) && secs < 30.0,
        summary: format!("exact identities [{}]: {failures} failures, {secs:.1} s (limit 30 s)", names.join(", ")),
    }
}

fn criterion_2(cfg: &SuiteConfig) -> Outcome {
    let reports = orthogonality_suite(cfg).expect("orthogonality suite runs");
    let normalized = max_err(with_id(&reports, "orthogonality.normalized"));
    let a = Alpha::new(0.5).unwrap();
    let raw = raw_calibration_integral(a, &gauss_hermite_rule(cfg.nodes_per_axis).unwrap()).unwrap();
    let raw_rel = (raw - Complex64::new(8.0, 0.0)).norm() / 8.0;
    Outcome {
        passed: normalized < 1e-9 && raw_rel <= 1e-9 && all_pass(&reports),
        summary: format!(
            "orthogonality: max |<H~,H~> - delta| = {normalized:.2e} (< 1e-9) over degrees <= {}, N = {}; raw (0,0,0,0) at alpha 1/2 = {:.15} (8, rel {raw_rel:.1e})",
            cfg.max_degree, cfg.nodes_per_axis, raw.re
        ),
    }
}

fn criterion_3(cfg: &SuiteConfig) -> Outcome {
    let reports = kernel_series_suite(cfg).expect("kernel suite runs");
    let series_rel = with_id(&reports, "kernels.series")
        .filter_map(|r| r.rel_err)
        .fold(0.0, f64::max);
    let norm_rel = with_id(&reports, "kernels.norm_sum")
        .filter_map(|r| r.rel_err)
        .fold(0.0, f64::max);
    let origin = kernel_closed(Alpha::new(0.5).unwrap(), KernelArgs::diagonal(ComplexPoint::origin()));
    let origin_ok = (origin.re - 0.140625).abs() < 1e-15 && origin.im == 0.0;
    let ok = all_pass(with_id(&reports, "kernels.series"))
        && all_pass(with_id(&reports, "kernels.norm_sum"))
        && all_pass(with_id(&reports, "kernels.origin_value"))
        && origin_ok;
    Outcome {
        passed: ok,
        summary: format!(
            "kernel: truncated (M = {KERNEL_ORDER}) vs closed max rel {series_rel:.2e} (1e-8); norm sum max rel {norm_rel:.2e} (1e-9); K(0;0) at alpha 1/2 = {}",
            origin.re
        ),
    }
}

fn criterion_4(cfg: &SuiteConfig) -> Outcome {
    let reports = reproducing_suite(cfg).expect("reproducing suite runs");
    Outcome {
        passed: all_pass(&reports) && max_err(&reports) < 1e-8,
        summary: format!(
            "reproducing property: max residual {:.2e} (< 1e-8) over {} cases",
            max_err(&reports),
            reports.len()
        ),
    }
}

fn criterion_5(cfg: &SuiteConfig) -> Outcome {
    let reports = bargmann_suite(cfg).expect("bargmann suite runs");
    let forward = max_err(with_id(&reports, "bargmann.forward"));
    let composition = max_err(with_id(&reports, "bargmann.composition"));
    let inverse = max_err(with_id(&reports, "bargmann.inverse"));
    let half = with_id(&reports, "bargmann.inverse")
        .filter_map(|r| r.details.get("half_exponent_residual").and_then(Value::as_f64))
        .fold(0.0, f64::max);
    Outcome {
        passed: all_pass(with_id(&reports, "bargmann.forward"))
            && all_pass(with_id(&reports, "bargmann.composition"))
            && all_pass(with_id(&reports, "bargmann.inverse"))
            && forward < 1e-8
            && inverse < 1e-7,
        summary: format!(
            "transform: forward {forward:.2e} (1e-8), composition {composition:.2e} (1e-7), inverse full-Gaussian {inverse:.2e} (1e-7), half-exponent reading {half:.2e} (reported)"
        ),
    }
}

fn criterion_6(cfg: &SuiteConfig) -> Outcome {
    let reports = representation_suite(cfg).expect("representation suite runs");
    Outcome {
        passed: all_pass(&reports) && max_err(&reports) < 1e-6,
        summary: format!(
            "integral representation: max residual {:.2e} (< 1e-6), m,n <= 6, N = 64",
            max_err(&reports)
        ),
    }
}

fn criterion_7(cfg: &SuiteConfig) -> Outcome {
    let r = bound_sweep(cfg.seed, BOUND_SAMPLES, BOUND_MAX_DEGREE, BOUND_RADIUS);
    let violations = r.details["violations"].as_u64().unwrap_or(u64::MAX);
    Outcome {
        passed: violations == 0,
        summary: format!(
            "bound |H| <= sqrt(m!n!) e^(|z1||z2|): {violations} violating (point, m, n) cases over {BOUND_SAMPLES} points x m,n <= {BOUND_MAX_DEGREE} (|z| <= {BOUND_RADIUS}), worst log-margin {:.3}, first {}",
            r.details["worst_log_margin"].as_f64().unwrap_or(f64::NAN),
            r.details["first_violation"]
        ),
    }
}

fn criterion_8(cfg: &SuiteConfig) -> Outcome {
    let reports = limits_suite(cfg).expect("limits suite runs");
    let scaling = max_err(with_id(&reports, "limits.scaling_closed_form"));
    let tilde: Vec<_> = with_id(&reports, "eval.tilde_limit").collect();
    let tilde_fail: Vec<String> = tilde
        .iter()
        .filter(|r| !r.passed)
        .map(|r| {
            let u = |key: &str| format!("{}{:+}i", r.inputs[key]["re"], r.inputs[key]["im"].as_f64().unwrap_or(f64::NAN));
            format!("({},{}) at u = ({}, {})", r.inputs["m"], r.inputs["n"], u("u1"), u("u2"))
        })
        .collect();
    let tilde_last = tilde.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    let kernel: Vec<_> = reports.iter().filter(|r| r.check_id.starts_with("limits.kernel")).collect();
    let kernel_err = with_id(&reports, "limits.kernel").map(|r| r.abs_err).fold(0.0, f64::max);
    let ito = max_err(with_id(&reports, "orthogonality.ito"));
    Outcome {
        passed: all_pass(with_id(&reports, "limits.scaling_closed_form"))
            && tilde_fail.is_empty()
            && kernel.iter().all(|r| r.passed)
            && all_pass(with_id(&reports, "orthogonality.ito")),
        summary: format!(
            "limits: e(t) - t^2 max {scaling:.1e} (1e-12); tilde residual at k = 10 max {tilde_last:.2e} (< 1e-3), not monotone for [{}]; kernel limit max rel error at k = 10 {kernel_err:.2e} (1e-4); Ito orthogonality {ito:.1e} (1e-9)",
            tilde_fail.join(", ")
        ),
    }
}

fn criterion_9(cfg: &SuiteConfig) -> Outcome {
    let moments: Vec<(usize, f64)> = [2, 4, 8, 16, 32, 64]
        .into_iter()
        .map(|n| (n, moment_exactness(&gauss_hermite_rule(n).unwrap())))
        .collect();
    let worst_moment = moments.iter().map(|m| m.1).fold(0.0, f64::max);
    let reports = mc_agreement_reports(cfg).expect("Monte Carlo runs");
    let mc: Vec<_> = with_id(&reports, "quadrature.mc_agreement").collect();
    let worst_sigma = mc
        .iter()
        .map(|r| r.abs_err / r.details["stderr"].as_f64().unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    Outcome {
        passed: worst_moment <= 1e-12 && mc.len() == 20 && mc.iter().all(|r| r.passed),
        summary: format!(
            "quadrature: moment exactness to degree 2N-1 worst rel {worst_moment:.1e} (1e-12) for N in 2..64; MC vs quadrature worst {worst_sigma:.2} stderr (<= 4) over {} integrands",
            mc.len()
        ),
    }
}

fn main() {
    let cfg = SuiteConfig::default();
    type Criterion = fn(&SuiteConfig) -> Outcome;
    let criteria: [(u32, Criterion); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = BTreeSet::new();
    for (k, f) in criteria {
        let o = f(&cfg);
        println!("{} criterion {k}: {}", if o.passed { "PASS" } else { "FAIL" }, o.summary);
        if !o.passed {
            failed.insert(k);
        }
    }
    let expected: BTreeSet<u32> = EXPECTED_FAILURES.into_iter().collect();
    if failed != expected {
        eprintln!("failing criteria {failed:?} differ from the known set {expected:?}");
        std::process::exit(1);
    }
    println!("criteria 7 and 8 fail as stated; all others pass");
}
