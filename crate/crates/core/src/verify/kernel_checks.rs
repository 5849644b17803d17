//! Series-versus-closed-form kernel checks and the reproducing property.

use num_complex::Complex64;
use serde_json::json;

use super::config::SuiteConfig;
use super::{cv, nonpolynomial_nodes, point_json, seeded_points, streams};
use crate::error::Result;
use crate::eval::{Alpha, ComplexPoint};
use crate::exact::DegreePair;
use crate::kernels::{
    gram_spectrum, kernel_closed, kernel_prefactor, kernel_truncated, norm_sum_closed, norm_sum_truncated,
    tilde_kernel_closed, tilde_kernel_truncated, HermiteFunctionTable, KernelArgs, KERNEL_ORDER,
};
use crate::quadrature::{gauss_hermite_rule, integrate_mu_alpha_vec, QuadratureRule};
use crate::report::{timed, Tolerance, VerificationReport};

pub const SERIES_POINTS: usize = 50;
pub const SERIES_RADIUS: f64 = 2.0;
pub const SERIES_TOL: Tolerance = Tolerance::new(0.0, 1e-8);
pub const NORM_SUM_TOL: Tolerance = Tolerance::new(0.0, 1e-9);
/// The norm sum converges more slowly than the kernel series for small α
/// (its terms are squared moduli, with no oscillation to help).
pub const NORM_SUM_ORDER: u32 = 120;
pub const REPRODUCING_TOL: Tolerance = Tolerance::new(1e-8, 0.0);
pub const REPRODUCING_RADIUS: f64 = 1.5;
pub const REPRODUCING_MAX_DEGREE: u32 = 4;

/// `Σ_n |h_{n,n}(0)|² = c² Σ λ^{4n} = c²/(1-λ⁴)`, the kernel at the origin by
/// an independent route (only the diagonal terms survive at `z = 0`).
pub fn origin_geometric_sum(a: Alpha) -> f64 {
    let c = a.hermite_function_prefactor();
    c * c / (1.0 - a.lambda_sq().powi(2))
}

pub fn kernel_series_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let origin = KernelArgs::diagonal(ComplexPoint::origin());

    let half = Alpha::new(0.5)?;
    for (label, value) in [
        ("closed", kernel_closed(half, origin)),
        ("truncated", kernel_truncated(half, origin, KERNEL_ORDER)),
    ] {
        out.push(VerificationReport::compare(
            "kernels.origin_value",
            "kernel at the origin for alpha = 1/2 equals 9/64",
            json!({"alpha": 0.5, "form": label, "order": KERNEL_ORDER}),
            value,
            Complex64::new(0.140625, 0.0),
            cfg.tol(Tolerance::new(1e-15, 1e-14)),
        ));
    }

    for (ai, &a) in cfg.alphas.iter().enumerate() {
        out.push(VerificationReport::compare(
            "kernels.origin_geometric",
            "closed kernel at the origin equals the geometric series of diagonal terms",
            json!({"alpha": a.value()}),
            kernel_closed(a, origin),
            Complex64::new(origin_geometric_sum(a), 0.0),
            cfg.tol(Tolerance::new(0.0, 1e-14)),
        ));
        out.push(VerificationReport::compare(
            "kernels.prefactor",
            "closed kernel prefactor equals (1-alpha^2)^2/(16 alpha^2)",
            json!({"alpha": a.value()}),
            kernel_closed(a, origin),
            Complex64::new(kernel_prefactor(a), 0.0),
            cfg.tol(Tolerance::new(0.0, 1e-15)),
        ));

        let zs = seeded_points(cfg.seed, streams::KERNEL_Z + ai as u64, SERIES_POINTS, SERIES_RADIUS);
        let ws = seeded_points(cfg.seed, streams::KERNEL_W + ai as u64, SERIES_POINTS, SERIES_RADIUS);
        for (z, w) in zs.iter().zip(&ws) {
            let k = KernelArgs::new(*z, *w);
            out.push(timed(|| {
                VerificationReport::compare(
                    "kernels.series",
                    "truncated sum of h(z) conj h(w) equals the closed-form kernel",
                    json!({"alpha": a.value(), "z": point_json(*z), "w": point_json(*w), "order": KERNEL_ORDER}),
                    kernel_truncated(a, k, KERNEL_ORDER),
                    kernel_closed(a, k),
                    cfg.tol(SERIES_TOL),
                )
            }));
            out.push(timed(|| {
                VerificationReport::compare(
                    "kernels.norm_sum",
                    "sum of |h(z)|^2 equals the closed-form norm sum",
                    json!({"alpha": a.value(), "z": point_json(*z), "order": NORM_SUM_ORDER}),
                    Complex64::new(norm_sum_truncated(a, *z, NORM_SUM_ORDER), 0.0),
                    Complex64::new(norm_sum_closed(a, *z), 0.0),
                    cfg.tol(NORM_SUM_TOL),
                )
            }));
            let partial = norm_sum_truncated(a, *z, 10);
            let full = norm_sum_closed(a, *z);
            out.push(
                VerificationReport::with_error(
                    "kernels.norm_sum_tail",
                    "partial sums of |h(z)|^2 stay below the closed-form norm sum",
                    json!({"alpha": a.value(), "z": point_json(*z), "order": 10}),
                    Complex64::new(partial, 0.0),
                    Complex64::new(full, 0.0),
                    (partial - full).max(0.0),
                    Tolerance::abs(1e-12 * full),
                )
                .with_verdict(partial <= full * (1.0 + 1e-12)),
            );
        }

        for (z, w) in zs.iter().zip(&ws).take(5) {
            let k = KernelArgs::new(*z, *w);
            for (name, f) in [
                ("kernels.hermitian", kernel_closed as fn(Alpha, KernelArgs) -> Complex64),
                ("kernels.tilde_hermitian", tilde_kernel_closed),
            ] {
                out.push(VerificationReport::compare(
                    name,
                    "K(z; w) equals conj K(w; z)",
                    json!({"alpha": a.value(), "z": point_json(*z), "w": point_json(*w)}),
                    f(a, k),
                    f(a, k.swapped()).conj(),
                    cfg.tol(Tolerance::new(0.0, 1e-12)),
                ));
            }
        }

        out.push(VerificationReport::compare(
            "kernels.tilde_origin",
            "tilde kernel series at the origin equals (1+alpha)^2/(4 alpha)",
            json!({"alpha": a.value(), "order": 80}),
            tilde_kernel_truncated(a, origin, 80),
            tilde_kernel_closed(a, origin),
            cfg.tol(Tolerance::new(1e-10, 1e-10)),
        ));

        let gram_points = seeded_points(cfg.seed, streams::GRAM + ai as u64, 6, SERIES_RADIUS);
        let (min, trace) = gram_spectrum(a, &gram_points);
        out.push(
            VerificationReport::with_error(
                "kernels.gram_positive",
                "Gram matrix of the kernel on 6 points is positive semidefinite",
                json!({"alpha": a.value(), "points": gram_points.iter().map(|p| point_json(*p)).collect::<Vec<_>>()}),
                Complex64::new(min, 0.0),
                Complex64::new(trace, 0.0),
                (-min).max(0.0),
                Tolerance::abs(1e-10 * trace),
            )
            .with_verdict(min >= -1e-10 * trace),
        );
    }
    Ok(out)
}

/// Reproducing property for all `m, n ≤ max_degree` at each `w`:
/// `∫ h_{m,n}(z) K(w; z) dμ_α(z)` against `h_{m,n}(w)`.
///
/// The pairing with `conj K(w; z)` is evaluated on the same grid and its
/// residual reported under `details`.
pub fn reproducing_batch(
    a: Alpha,
    max_degree: u32,
    ws: &[ComplexPoint],
    rule: &QuadratureRule,
    tol: Tolerance,
) -> Result<Vec<VerificationReport>> {
    let pairs: Vec<DegreePair> = DegreePair::square(max_degree).collect();
    let np = pairs.len();
    let start = std::time::Instant::now();
    let values = integrate_mu_alpha_vec(
        |z, out| {
            let h = HermiteFunctionTable::new(a, z, max_degree);
            for (j, w) in ws.iter().enumerate() {
                let k = kernel_closed(a, KernelArgs::new(*w, z));
                for (i, d) in pairs.iter().enumerate() {
                    let hv = h.get(d.m, d.n);
                    out[(2 * j) * np + i] = hv * k;
                    out[(2 * j + 1) * np + i] = hv * k.conj();
                }
            }
        },
        2 * np * ws.len(),
        a,
        rule,
    )?;
    let ms = start.elapsed().as_secs_f64() * 1e3 / (np * ws.len()) as f64;
    let mut out = Vec::with_capacity(np * ws.len());
    for (j, w) in ws.iter().enumerate() {
        let hw = HermiteFunctionTable::new(a, *w, max_degree);
        for (i, d) in pairs.iter().enumerate() {
            let reference = hw.get(d.m, d.n);
            let conj_form = values[(2 * j + 1) * np + i];
            out.push(
                VerificationReport::compare(
                    "kernels.reproducing",
                    "integral of h_{m,n}(z) K(w; z) against mu_alpha reproduces h_{m,n}(w)",
                    json!({"alpha": a.value(), "m": d.m, "n": d.n, "w": point_json(*w), "nodes": rule.order()}),
                    values[2 * j * np + i],
                    reference,
                    tol,
                )
                .with_runtime_ms(ms)
                .with_details(json!({
                    "conjugated_kernel_value": cv(conj_form),
                    "conjugated_kernel_residual": (conj_form - reference).norm(),
                })),
            );
        }
    }
    Ok(out)
}

pub fn reproducing_property_check(
    a: Alpha,
    d: DegreePair,
    w: ComplexPoint,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    let max = d.m.max(d.n);
    let reports = reproducing_batch(a, max, &[w], rule, REPRODUCING_TOL)?;
    Ok(reports
        .into_iter()
        .find(|r| r.inputs["m"] == d.m && r.inputs["n"] == d.n)
        .expect("requested degree is in the batch"))
}

/// Fixed spot points plus seeded ones with `|w₁|, |w₂| ≤ 1.5`.
pub fn reproducing_points(cfg: &SuiteConfig, stream: u64) -> Vec<ComplexPoint> {
    let mut ws = vec![
        ComplexPoint::origin(),
        ComplexPoint::real(1.0, 1.0),
        ComplexPoint::raw(Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.3)),
    ];
    ws.extend(seeded_points(cfg.seed, stream, 3, REPRODUCING_RADIUS));
    ws
}

pub fn reproducing_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for (ai, &a) in cfg.alphas.iter().enumerate() {
        let rule = gauss_hermite_rule(nonpolynomial_nodes(a).max(cfg.nodes_per_axis))?;
        let ws = reproducing_points(cfg, streams::REPRODUCING + ai as u64);
        out.extend(reproducing_batch(a, REPRODUCING_MAX_DEGREE, &ws, &rule, cfg.tol(REPRODUCING_TOL))?);
    }
    Ok(out)
}
