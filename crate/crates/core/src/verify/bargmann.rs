//! The Bargmann-type transform: generating identity for the kernel `A`,
//! the forward map, the kernel composition rule and the inverse map.

use num_complex::Complex64;
use serde_json::json;

use super::config::SuiteConfig;
use super::{cv, nonpolynomial_nodes, point_json, seeded_points, streams};
use crate::error::Result;
use crate::eval::{Alpha, ComplexPoint};
use crate::exact::DegreePair;
use crate::kernels::{
    bargmann_kernel_a, bargmann_kernel_a_truncated, bargmann_kernel_b2, bargmann_kernel_b2_truncated,
    HermiteFunctionTable, KernelArgs, PhiTable, BARGMANN_ORDER,
};
use crate::quadrature::{gauss_hermite_rule, integrate_mu_alpha_vec, integrate_std_gaussian_c2_vec, QuadratureRule};
use crate::report::{Tolerance, VerificationReport};

pub const FORWARD_TOL: Tolerance = Tolerance::new(1e-8, 0.0);
pub const COMPOSITION_TOL: Tolerance = Tolerance::new(1e-7, 1e-7);
pub const INVERSE_TOL: Tolerance = Tolerance::new(1e-7, 0.0);
pub const BARGMANN_MAX_DEGREE: u32 = 4;
pub const BARGMANN_RADIUS: f64 = 2.0;
/// Nodes per axis for the forward map and the composition rule. After the
/// substitution both integrands are a polynomial times the exponential of a
/// linear form, for which Gauss–Hermite converges superexponentially.
pub const FORWARD_NODES: usize = 24;

/// `(U h_{m,n})(z) = ∫ A(z, w̄) h_{m,n}(w) dμ_α(w)` for all `m, n ≤ max_degree`
/// and every `z`, against `Φ_{m,n}(z)`.
pub fn forward_batch(
    a: Alpha,
    max_degree: u32,
    zs: &[ComplexPoint],
    rule: &QuadratureRule,
    tol: Tolerance,
) -> Result<Vec<VerificationReport>> {
    let pairs: Vec<DegreePair> = DegreePair::square(max_degree).collect();
    let np = pairs.len();
    let start = std::time::Instant::now();
    let values = integrate_mu_alpha_vec(
        |w, out| {
            let h = HermiteFunctionTable::new(a, w, max_degree);
            for (j, z) in zs.iter().enumerate() {
                let k = bargmann_kernel_a(a, *z, w.z1.conj(), w.z2.conj());
                for (i, d) in pairs.iter().enumerate() {
                    out[j * np + i] = k * h.get(d.m, d.n);
                }
            }
        },
        np * zs.len(),
        a,
        rule,
    )?;
    let ms = start.elapsed().as_secs_f64() * 1e3 / (np * zs.len()) as f64;
    let mut out = Vec::new();
    for (j, z) in zs.iter().enumerate() {
        let phi = PhiTable::new(*z, max_degree);
        for (i, d) in pairs.iter().enumerate() {
            out.push(
                VerificationReport::compare(
                    "bargmann.forward",
                    "U maps h_{m,n} to the Bargmann monomial Phi_{m,n}",
                    json!({"alpha": a.value(), "m": d.m, "n": d.n, "z": point_json(*z), "nodes": rule.order()}),
                    values[j * np + i],
                    phi.get(d.m, d.n),
                    tol,
                )
                .with_runtime_ms(ms),
            );
        }
    }
    Ok(out)
}

pub fn bargmann_forward_check(
    a: Alpha,
    d: DegreePair,
    z: ComplexPoint,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    let reports = forward_batch(a, d.m.max(d.n), &[z], rule, FORWARD_TOL)?;
    Ok(reports
        .into_iter()
        .find(|r| r.inputs["m"] == d.m && r.inputs["n"] == d.n)
        .expect("requested degree is in the batch"))
}

/// `∫ A(w; ū, v̄) conj A(z; ū, v̄) dμ_α(u, v)` against `exp(w₁z̄₁ + w₂z̄₂)`
/// for each `(w, z)` pair.
pub fn composition_batch(
    a: Alpha,
    pairs: &[(ComplexPoint, ComplexPoint)],
    rule: &QuadratureRule,
    tol: Tolerance,
) -> Result<Vec<VerificationReport>> {
    let start = std::time::Instant::now();
    let values = integrate_mu_alpha_vec(
        |u, out| {
            let (ub1, ub2) = (u.z1.conj(), u.z2.conj());
            for (j, (w, z)) in pairs.iter().enumerate() {
                out[j] = bargmann_kernel_a(a, *w, ub1, ub2) * bargmann_kernel_a(a, *z, ub1, ub2).conj();
            }
        },
        pairs.len(),
        a,
        rule,
    )?;
    let ms = start.elapsed().as_secs_f64() * 1e3 / pairs.len() as f64;
    Ok(pairs
        .iter()
        .zip(values)
        .map(|((w, z), v)| {
            VerificationReport::compare(
                "bargmann.composition",
                "integral of A(w; u) conj A(z; u) against mu_alpha equals exp(w1 conj z1 + w2 conj z2)",
                json!({"alpha": a.value(), "w": point_json(*w), "z": point_json(*z), "nodes": rule.order()}),
                v,
                bargmann_kernel_b2(KernelArgs::new(*w, *z)),
                tol,
            )
            .with_runtime_ms(ms)
        })
        .collect())
}

pub fn kernel_a_composition_check(
    a: Alpha,
    z: ComplexPoint,
    w: ComplexPoint,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    Ok(composition_batch(a, &[(w, z)], rule, COMPOSITION_TOL)?.remove(0))
}

/// Which Gaussian weight the inverse map integrates against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseWeight {
    /// `e^{-|z₁|²-|z₂|²}`, the Bargmann-space weight.
    Full,
    /// `e^{-(|z₁|²+|z₂|²)/2}`.
    Half,
}

/// `(W Φ_{m,n})(p)` for all `m, n ≤ max_degree` and every `p`, row-major by
/// point, under the chosen weight.
///
/// The half weight is reduced to the standard Gaussian by `z = √2 v`, whose
/// real Jacobian on `ℝ⁴` is 4.
pub fn inverse_values(
    a: Alpha,
    max_degree: u32,
    ps: &[ComplexPoint],
    weight: InverseWeight,
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    let pairs: Vec<DegreePair> = DegreePair::square(max_degree).collect();
    let np = pairs.len();
    let (scale, jac) = match weight {
        InverseWeight::Full => (1.0, 1.0),
        InverseWeight::Half => (std::f64::consts::SQRT_2, 4.0),
    };
    let values = integrate_std_gaussian_c2_vec(
        |v1, v2, out| {
            let z = ComplexPoint::raw(v1 * scale, v2 * scale);
            let phi = PhiTable::new(z, max_degree);
            for (j, p) in ps.iter().enumerate() {
                let k = bargmann_kernel_a(a, z, p.z1.conj(), p.z2.conj()).conj();
                for (i, d) in pairs.iter().enumerate() {
                    out[j * np + i] = k * phi.get(d.m, d.n);
                }
            }
        },
        np * ps.len(),
        rule,
    )?;
    Ok(values.into_iter().map(|v| v * jac).collect())
}

/// Nodes per axis for the inverse map. The integrand carries
/// `exp(-λ² z̄₁z̄₂)`, a quadratic that the Gaussian rule only approximates.
pub fn inverse_nodes(a: Alpha) -> usize {
    nonpolynomial_nodes(a)
}

pub fn inverse_batch(
    a: Alpha,
    max_degree: u32,
    ps: &[ComplexPoint],
    tol: Tolerance,
) -> Result<Vec<VerificationReport>> {
    let rule = gauss_hermite_rule(inverse_nodes(a))?;
    let pairs: Vec<DegreePair> = DegreePair::square(max_degree).collect();
    let np = pairs.len();
    let start = std::time::Instant::now();
    let full = inverse_values(a, max_degree, ps, InverseWeight::Full, &rule)?;
    let half = inverse_values(a, max_degree, ps, InverseWeight::Half, &rule)?;
    let ms = start.elapsed().as_secs_f64() * 1e3 / (np * ps.len()) as f64;
    let mut out = Vec::new();
    for (j, p) in ps.iter().enumerate() {
        let h = HermiteFunctionTable::new(a, *p, max_degree);
        for (i, d) in pairs.iter().enumerate() {
            let reference = h.get(d.m, d.n);
            let k = j * np + i;
            out.push(
                VerificationReport::compare(
                    "bargmann.inverse",
                    "W Phi_{m,n} = h_{m,n}, with W integrating against the full Bargmann Gaussian",
                    json!({"alpha": a.value(), "m": d.m, "n": d.n, "p": point_json(*p), "nodes": rule.order()}),
                    full[k],
                    reference,
                    tol,
                )
                .with_runtime_ms(ms)
                .with_details(json!({
                    "half_exponent_value": cv(half[k]),
                    "half_exponent_residual": (half[k] - reference).norm(),
                })),
            );
        }
    }
    Ok(out)
}

pub fn bargmann_inverse_roundtrip(a: Alpha, d: DegreePair, p: ComplexPoint) -> Result<VerificationReport> {
    let reports = inverse_batch(a, d.m.max(d.n), &[p], INVERSE_TOL)?;
    Ok(reports
        .into_iter()
        .find(|r| r.inputs["m"] == d.m && r.inputs["n"] == d.n)
        .expect("requested degree is in the batch"))
}

pub fn bargmann_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let c = Complex64::new;
    let forward_rule = gauss_hermite_rule(FORWARD_NODES.max(cfg.nodes_per_axis))?;
    for (ai, &a) in cfg.alphas.iter().enumerate() {
        let s = ai as u64;
        let z_rand = seeded_points(cfg.seed, streams::BARGMANN_Z + s, 3, BARGMANN_RADIUS);
        let w_rand = seeded_points(cfg.seed, streams::BARGMANN_W + s, 3, BARGMANN_RADIUS);

        for (z, w) in z_rand.iter().zip(&w_rand) {
            let direct = bargmann_kernel_a(a, *z, w.z1.conj(), w.z2.conj());
            out.push(VerificationReport::compare(
                "bargmann.generating",
                "sum of Phi_{m,n}(z) conj h_{m,n}(w) equals A(z, conj w)",
                json!({"alpha": a.value(), "z": point_json(*z), "w": point_json(*w), "order": BARGMANN_ORDER}),
                bargmann_kernel_a_truncated(a, *z, *w, BARGMANN_ORDER),
                direct,
                cfg.tol(Tolerance::new(1e-9, 1e-9)),
            ));
            let k = KernelArgs::new(*z, *w);
            let b = bargmann_kernel_b2(k);
            out.push(VerificationReport::compare(
                "bargmann.kernel_series",
                "sum of Phi(z) conj Phi(w) equals exp(z1 conj w1 + z2 conj w2)",
                json!({"z": point_json(*z), "w": point_json(*w), "order": BARGMANN_ORDER}),
                bargmann_kernel_b2_truncated(k, BARGMANN_ORDER),
                b,
                cfg.tol(Tolerance::new(1e-10, 1e-10)),
            ));
            out.push(VerificationReport::compare(
                "bargmann.hermitian",
                "Bargmann kernel equals its conjugate with arguments exchanged",
                json!({"z": point_json(*z), "w": point_json(*w)}),
                b,
                bargmann_kernel_b2(k.swapped()).conj(),
                cfg.tol(Tolerance::new(0.0, 1e-12)),
            ));
        }

        let mut zs = vec![
            ComplexPoint::origin(),
            ComplexPoint::real(2.0, 0.0),
            ComplexPoint::real(1.0, 1.0),
        ];
        zs.extend(z_rand.iter().copied());
        out.extend(forward_batch(a, BARGMANN_MAX_DEGREE, &zs, &forward_rule, cfg.tol(FORWARD_TOL))?);

        let mut pairs = vec![
            (ComplexPoint::origin(), ComplexPoint::origin()),
            (ComplexPoint::real(1.0, 0.0), ComplexPoint::real(1.0, 0.0)),
            (ComplexPoint::raw(c(0.0, 1.0), c(0.0, 0.0)), ComplexPoint::real(1.0, 0.0)),
        ];
        pairs.extend(w_rand.iter().copied().zip(z_rand.iter().copied()));
        out.extend(composition_batch(a, &pairs, &forward_rule, cfg.tol(COMPOSITION_TOL))?);

        let mut ps = vec![ComplexPoint::origin(), ComplexPoint::real(1.0, 1.0)];
        ps.extend(seeded_points(cfg.seed, streams::BARGMANN_P + s, 2, super::kernel_checks::REPRODUCING_RADIUS));
        out.extend(inverse_batch(a, BARGMANN_MAX_DEGREE, &ps, cfg.tol(INVERSE_TOL))?);
    }
    Ok(out)
}
