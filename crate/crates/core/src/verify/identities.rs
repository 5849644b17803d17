//! Exact identity sweeps and floating-point consistency of the evaluators.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde_json::json;

use super::config::SuiteConfig;
use super::{point_json, seeded_points, streams, worst_case};
use crate::error::Result;
use crate::eval::{
    eval_hermite, eval_hermite_normalized, generating_function_check, partial_generating_check, Alpha,
    ComplexPoint, EvalMethod, PartialSum,
};
use crate::exact::{
    binomial, factorial, hermite_exact_direct, sweep_coefficients, sweep_constructions, sweep_laguerre,
    sweep_natural_link, sweep_raising_lowering, sweep_rodrigues, DegreePair, GaussianRational, SweepOutcome,
};
use crate::report::{timed, Tolerance, VerificationReport};

/// Degree bounds of the exact sweeps when no override is configured.
pub const DEFAULT_SWEEP_DEGREES: [(&str, u32); 6] = [
    ("constructions_agree", 12),
    ("rodrigues", 8),
    ("raising_lowering", 10),
    ("natural_link", 8),
    ("laguerre_identity", 7),
    ("coefficient_identity", 5),
];

pub const METHOD_MAX_DEGREE: u32 = 15;
pub const METHOD_POINTS: usize = 200;
pub const METHOD_RADIUS: f64 = 3.0;
pub const METHOD_TOL: Tolerance = Tolerance::new(1e-12, 1e-10);

pub fn sweep_report(outcome: &SweepOutcome, max_degree: u32) -> VerificationReport {
    let failures = outcome.failures.len() as f64;
    VerificationReport::compare(
        format!("identities.{}", outcome.name),
        match outcome.name {
            "constructions_agree" => "direct sum, recurrence and one-variable Hermite constructions give the same polynomial",
            "rodrigues" => "Rodrigues formula, both partial Rodrigues formulae and the Leibniz consequence",
            "raising_lowering" => "raising and lowering operators shift the indices",
            "natural_link" => "relation to the polynomials in the real and imaginary parts",
            "laguerre_identity" => "Laguerre form and product form on the conjugate pair",
            "coefficient_identity" => "finite quadruple sum equals m! n! delta_{m,p} delta_{n,q}",
            _ => "exact identity",
        },
        json!({"max_degree": max_degree, "cases": outcome.cases}),
        Complex64::new(failures, 0.0),
        Complex64::new(0.0, 0.0),
        Tolerance::abs(0.0),
    )
    .with_details(json!({"failures": outcome.failures}))
}

pub fn exact_sweeps(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    DEFAULT_SWEEP_DEGREES
        .iter()
        .map(|&(name, default)| {
            let max = cfg.identity_max_degree.unwrap_or(default);
            timed(|| {
                let outcome = match name {
                    "constructions_agree" => sweep_constructions(max),
                    "rodrigues" => sweep_rodrigues(max),
                    "raising_lowering" => sweep_raising_lowering(max),
                    "natural_link" => sweep_natural_link(max),
                    "laguerre_identity" => sweep_laguerre(max),
                    _ => sweep_coefficients(max),
                };
                sweep_report(&outcome, max)
            })
        })
        .collect()
}

fn dyadic(re: i64, im: i64, shift: u32) -> GaussianRational {
    let den = BigInt::from(1u64 << shift);
    GaussianRational::new(
        BigRational::new(BigInt::from(re), den.clone()),
        BigRational::new(BigInt::from(im), den),
    )
}

pub fn float_checks(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let points = seeded_points(cfg.seed, streams::METHODS, METHOD_POINTS, METHOD_RADIUS);
    let tol = cfg.tol(METHOD_TOL);

    for method in [EvalMethod::Recurrence, EvalMethod::Hermite1d] {
        let mut cases = Vec::new();
        for p in &points {
            for d in DegreePair::square(METHOD_MAX_DEGREE) {
                cases.push((
                    json!({"m": d.m, "n": d.n, "point": point_json(*p), "method": method.name()}),
                    eval_hermite(d, *p, method)?,
                    eval_hermite(d, *p, EvalMethod::Direct)?,
                ));
            }
        }
        out.push(worst_case(
            &format!("eval.method_agreement.{}", method.name()),
            "evaluator agrees with the direct finite sum",
            cases,
            tol,
        ));
    }

    let mut cases = Vec::new();
    for p in points.iter().take(50) {
        let q = ComplexPoint::diagonal(p.z1);
        for d in DegreePair::square(METHOD_MAX_DEGREE) {
            cases.push((
                json!({"m": d.m, "n": d.n, "point": point_json(q)}),
                eval_hermite(d, q, EvalMethod::LaguerreDiagonal)?,
                eval_hermite(d, q, EvalMethod::Direct)?,
            ));
        }
    }
    out.push(worst_case(
        "eval.method_agreement.laguerre_diagonal",
        "Laguerre form agrees with the direct finite sum on z2 = conj z1",
        cases,
        tol,
    ));

    let sym_tol = cfg.tol(Tolerance::new(1e-12, 1e-12));
    let mut conj_cases = Vec::new();
    let mut swap_cases = Vec::new();
    let mut polar_cases = Vec::new();
    for p in points.iter().take(50) {
        for d in DegreePair::square(10) {
            let v = eval_hermite(d, *p, EvalMethod::Recurrence)?;
            conj_cases.push((
                json!({"m": d.m, "n": d.n, "point": point_json(*p)}),
                eval_hermite(d, p.conj(), EvalMethod::Recurrence)?,
                v.conj(),
            ));
            swap_cases.push((
                json!({"m": d.m, "n": d.n, "point": point_json(*p)}),
                eval_hermite(d.swapped(), p.swapped(), EvalMethod::Recurrence)?,
                v,
            ));
            let (r, theta) = (p.z1.norm(), p.z1.arg());
            let q = ComplexPoint::polar(r, theta);
            let polar = polar_radial_sum(d, q.z1);
            polar_cases.push((
                json!({"m": d.m, "n": d.n, "r": r, "theta": theta}),
                eval_hermite(d, q, EvalMethod::Recurrence)?,
                Complex64::from_polar(1.0, q.z1.arg() * (f64::from(d.m) - f64::from(d.n))) * polar,
            ));
        }
    }
    out.push(worst_case("eval.conjugation_symmetry", "H_{m,n}(conj z) equals conj H_{m,n}(z)", conj_cases, sym_tol));
    out.push(worst_case("eval.swap_symmetry", "H_{m,n}(z1, z2) equals H_{n,m}(z2, z1)", swap_cases, sym_tol));
    out.push(worst_case(
        "eval.polar_form",
        "on z = r e^{i theta} the polynomial is the finite sum in r with phase e^{i theta (m-n)}",
        polar_cases,
        sym_tol,
    ));

    // Exact rational evaluation rounded once to double.
    let exact_points = [(3, -2, 2), (-5, 1, 2), (7, 3, 3), (1, 1, 0)];
    let mut cases = Vec::new();
    for &(re, im, shift) in &exact_points {
        let z1 = dyadic(re, im, shift);
        let z2 = dyadic(im - 1, re, shift);
        let p = ComplexPoint::new(z1.to_complex64(), z2.to_complex64())?;
        for d in DegreePair::square(10) {
            let exact = hermite_exact_direct(d).eval(&z1, &z2).to_complex64();
            for method in [EvalMethod::Direct, EvalMethod::Recurrence, EvalMethod::Hermite1d] {
                cases.push((
                    json!({"m": d.m, "n": d.n, "point": point_json(p), "method": method.name()}),
                    eval_hermite(d, p, method)?,
                    exact,
                ));
            }
        }
    }
    out.push(worst_case(
        "eval.exact_agreement",
        "floating-point evaluators match exact rational evaluation",
        cases,
        cfg.tol(Tolerance::new(1e-13, 1e-13)),
    ));

    out.push(timed(|| high_degree_normalized_check(cfg)));

    let c = Complex64::new;
    out.push(generating_function_check(c(0.0, 0.0), c(0.0, 0.0), ComplexPoint::real(1.0, 1.0), 10));
    out.push(generating_function_check(c(0.5, 0.0), c(0.5, 0.0), ComplexPoint::real(1.0, 1.0), 25));
    out.push(generating_function_check(c(1.0, 0.0), c(-1.0, 0.0), ComplexPoint::real(2.0, 0.0), 30));
    out.push(generating_function_check(c(0.3, -0.4), c(-0.2, 0.6), ComplexPoint::raw(c(1.0, 0.5), c(-0.7, 1.2)), 40));
    out.push(partial_generating_check(PartialSum::SumOverM, c(0.0, 0.0), 3, ComplexPoint::real(1.0, 2.0), 30));
    out.push(partial_generating_check(PartialSum::SumOverM, c(0.3, 0.0), 1, ComplexPoint::real(1.0, 2.0), 30));
    out.push(partial_generating_check(PartialSum::SumOverM, c(-0.5, 0.0), 2, ComplexPoint::raw(c(0.0, 1.0), c(1.0, 0.0)), 30));
    out.push(partial_generating_check(PartialSum::SumOverN, c(0.4, -0.2), 3, ComplexPoint::raw(c(0.5, 1.0), c(-1.0, 0.3)), 30));
    Ok(out)
}

/// `Σ_k (-1)^k C(m,k) C(n,k) k! r^{m+n-2k}` at `r = |z|`. The alternating sum
/// cancels heavily in floating point, so it is formed exactly in `r² = |z|²`
/// (rational for a double `z`) and only the odd power of `r` is rounded.
pub fn polar_radial_sum(d: DegreePair, z: Complex64) -> f64 {
    let exact = GaussianRational::from_complex64(z).expect("finite point");
    let r2 = exact.re() * exact.re() + exact.im() * exact.im();
    let half = (d.m + d.n) / 2;
    let mut acc = BigRational::from_integer(BigInt::from(0));
    for k in 0..=d.m.min(d.n) {
        let c = binomial(d.m, k) * binomial(d.n, k) * factorial(k);
        let c = if k % 2 == 0 { c } else { -c };
        acc += BigRational::from_integer(c) * num_traits::pow(r2.clone(), (half - k) as usize);
    }
    let even = num_traits::ToPrimitive::to_f64(&acc).unwrap_or(f64::NAN);
    if (d.m + d.n) % 2 == 1 {
        even * z.norm()
    } else {
        even
    }
}

/// `H̃^(1/2)_{60,60}` at a dyadic point against the exact value
/// `3^{-60} H_{60,60}(z) / 60!` (λ² = 1/3 is rational at α = 1/2).
pub fn high_degree_normalized_check(cfg: &SuiteConfig) -> VerificationReport {
    let d = DegreePair::new(60, 60);
    let z1 = dyadic(3, -2, 2);
    let z2 = dyadic(-1, 5, 2);
    let exact = hermite_exact_direct(d).eval(&z1, &z2);
    let scale = BigRational::new(BigInt::one(), BigInt::from(3).pow(60) * factorial(60));
    let reference = exact.scale(&scale).to_complex64();
    let p = ComplexPoint::raw(z1.to_complex64(), z2.to_complex64());
    let a = Alpha::new(0.5).expect("valid alpha");
    VerificationReport::compare(
        "eval.normalized_high_degree",
        "rescaled recurrence at degree (60, 60) matches the exact rational value",
        json!({"m": 60, "n": 60, "alpha": 0.5, "point": point_json(p)}),
        eval_hermite_normalized(d, a, p),
        reference,
        cfg.tol(Tolerance::new(0.0, 1e-10)),
    )
}

pub fn identities_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = exact_sweeps(cfg);
    out.extend(float_checks(cfg)?);
    Ok(out)
}
