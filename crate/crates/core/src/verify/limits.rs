//! Limits along interior approach paths: `t → 0` scaling, `α → 1⁻` for the
//! normalized polynomials and the tilde kernel, and the Gaussian
//! orthogonality relations that appear at the two ends.

use num_complex::Complex64;
use serde_json::json;

use super::config::SuiteConfig;
use super::orthogonality::{ito_orthogonality, GramMatrix, ORTHOGONALITY_TOL};
use super::{point_json, seeded_points, streams};
use crate::error::Result;
use crate::eval::{default_steps, scaling_limit_check, tilde_limit_check, Alpha, ComplexPoint};
use crate::exact::DegreePair;
use crate::kernels::{bargmann_kernel_b2, tilde_kernel_closed, KernelArgs, PhiTable};
use crate::quadrature::{gauss_hermite_rule, integrate_std_gaussian_c2_vec, QuadratureRule};
use crate::report::{Tolerance, VerificationReport};

pub const KERNEL_LIMIT_TOL: f64 = 1e-4;
pub const LIMIT_STEPS: i32 = 10;
pub const TILDE_MAX_DEGREE: u32 = 3;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// `α_k = 1 - 2^{-k}`, `k = 1..=steps`.
pub fn alpha_path(steps: i32) -> Vec<f64> {
    (1..=steps).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

/// `ξ = ((u₁-u₂)/√2, (ū₁+ū₂)/√2)`.
pub fn u_to_xi(u1: Complex64, u2: Complex64) -> ComplexPoint {
    ComplexPoint::raw((u1 - u2) / SQRT_2, (u1.conj() + u2.conj()) / SQRT_2)
}

/// Inverse of [`u_to_xi`]: `u₁ = (ξ₁ + ξ̄₂)/√2`, `u₂ = (ξ̄₂ - ξ₁)/√2`.
pub fn xi_to_u(xi: ComplexPoint) -> (Complex64, Complex64) {
    let b = xi.z2.conj();
    ((xi.z1 + b) / SQRT_2, (b - xi.z1) / SQRT_2)
}

/// Tilde kernel at the substituted arguments of `(u, s)`, written in the
/// `(ξ, ζ)` variables.
pub fn tilde_kernel_in_xi(a: Alpha, xi: ComplexPoint, zeta: ComplexPoint) -> Complex64 {
    let (u1, u2) = xi_to_u(xi);
    let (s1, s2) = xi_to_u(zeta);
    tilde_kernel_closed(a, KernelArgs::new(a.substitute(u1, u2), a.substitute(s1, s2)))
}

/// Worst relative distance to `exp(ξ₁ζ̄₁ + ξ₂ζ̄₂)` over `pairs`, per α.
pub fn kernel_limit_errors(alphas: &[f64], pairs: &[(ComplexPoint, ComplexPoint)]) -> Result<Vec<f64>> {
    alphas
        .iter()
        .map(|&al| {
            let a = Alpha::new(al)?;
            Ok(pairs
                .iter()
                .map(|(xi, zeta)| {
                    let limit = bargmann_kernel_b2(KernelArgs::new(*xi, *zeta));
                    (tilde_kernel_in_xi(a, *xi, *zeta) - limit).norm() / limit.norm()
                })
                .fold(0.0, f64::max))
        })
        .collect()
}

/// Sample pairs with `|ξᵢ|, |ζᵢ| ≤ 1`: the corners of the polydisc plus seeded points.
pub fn kernel_limit_pairs(cfg: &SuiteConfig) -> Vec<(ComplexPoint, ComplexPoint)> {
    let c = Complex64::new;
    let mut pairs = vec![
        (ComplexPoint::real(1.0, 1.0), ComplexPoint::real(1.0, 1.0)),
        (ComplexPoint::real(1.0, -1.0), ComplexPoint::real(1.0, -1.0)),
        (ComplexPoint::raw(c(0.0, 1.0), c(1.0, 0.0)), ComplexPoint::raw(c(0.0, -1.0), c(-1.0, 0.0))),
    ];
    let xs = seeded_points(cfg.seed, streams::KERNEL_LIMIT_XI, 20, 1.0);
    let zs = seeded_points(cfg.seed, streams::KERNEL_LIMIT_ZETA, 20, 1.0);
    pairs.extend(xs.into_iter().zip(zs));
    pairs
}

fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + 1e-15)
}

pub fn kernel_limit_reports(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let alphas = alpha_path(LIMIT_STEPS);
    let pairs = kernel_limit_pairs(cfg);
    let errors = kernel_limit_errors(&alphas, &pairs)?;
    let last = *errors.last().expect("non-empty path");
    let mut out = vec![VerificationReport::with_error(
        "limits.kernel",
        "tilde kernel at substituted arguments tends to exp(xi1 conj zeta1 + xi2 conj zeta2) as alpha increases to 1",
        json!({"alpha": alphas, "pairs": pairs.len(), "radius": 1.0}),
        Complex64::new(last, 0.0),
        Complex64::new(0.0, 0.0),
        last,
        Tolerance::abs(KERNEL_LIMIT_TOL),
    )
    .with_details(json!({"max_relative_errors": errors, "decreasing": non_increasing(&errors)}))];

    // Coincident points land on the diagonal exp(|ξ₁|² + |ξ₂|²).
    let xi = ComplexPoint::raw(Complex64::new(0.6, -0.3), Complex64::new(0.2, 0.5));
    let coincident = kernel_limit_errors(&alphas, &[(xi, xi)])?;
    let limit = (xi.z1.norm_sqr() + xi.z2.norm_sqr()).exp();
    let a_last = Alpha::new(*alphas.last().unwrap())?;
    out.push(
        VerificationReport::with_error(
            "limits.kernel_coincident",
            "on coincident points the limit kernel is exp(|xi1|^2 + |xi2|^2)",
            json!({"alpha": alphas, "xi": point_json(xi)}),
            tilde_kernel_in_xi(a_last, xi, xi),
            Complex64::new(limit, 0.0),
            coincident.last().copied().unwrap_or(0.0) * limit,
            Tolerance::new(0.0, KERNEL_LIMIT_TOL),
        )
        .with_details(json!({"relative_errors": coincident})),
    );

    let origin: Vec<f64> = alphas
        .iter()
        .map(|&al| {
            let a = Alpha::new(al).expect("path is interior");
            let o = ComplexPoint::origin();
            (tilde_kernel_closed(a, KernelArgs::new(o, o)) - 1.0).norm()
        })
        .collect();
    let last_origin = *origin.last().unwrap();
    out.push(
        VerificationReport::with_error(
            "limits.kernel_origin",
            "tilde kernel at the origin, (1+alpha)^2/(4 alpha), tends to 1",
            json!({"alpha": alphas}),
            Complex64::new(1.0 + last_origin, 0.0),
            Complex64::new(1.0, 0.0),
            last_origin,
            Tolerance::abs(KERNEL_LIMIT_TOL),
        )
        .with_verdict(last_origin <= KERNEL_LIMIT_TOL && non_increasing(&origin))
        .with_details(json!({"errors": origin})),
    );
    Ok(out)
}

/// Gram matrix of `((u₁-u₂)/√2)ᵐ ((ū₁+ū₂)/√2)ⁿ / √(m!n!)` under the standard
/// Gaussian on `ℂ²`, the α → 1⁻ form of the orthogonality relations.
pub fn limit_monomial_gram(max_degree: u32, rule: &QuadratureRule) -> Result<GramMatrix> {
    let pairs: Vec<DegreePair> = DegreePair::triangle(max_degree).collect();
    let len = pairs.len();
    let values = integrate_std_gaussian_c2_vec(
        |u1, u2, out| {
            let phi = PhiTable::new(u_to_xi(u1, u2), max_degree);
            let v: Vec<Complex64> = pairs.iter().map(|d| phi.get(d.m, d.n)).collect();
            for i in 0..len {
                for j in 0..len {
                    out[i * len + j] = v[i] * v[j].conj();
                }
            }
        },
        len * len,
        rule,
    )?;
    Ok(GramMatrix { pairs, values })
}

pub fn tilde_points() -> Vec<(Complex64, Complex64)> {
    let c = Complex64::new;
    vec![
        (c(0.3, 0.2), c(-0.1, 0.25)),
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(0.5, 0.2), c(0.0, -0.3)),
        (c(1.0, 1.0), c(0.5, 0.0)),
    ]
}

pub fn limits_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let mut out = Vec::new();

    // e(t) = t² exactly for (1,1) at z = (1,1).
    let steps = default_steps();
    let r = scaling_limit_check(DegreePair::new(1, 1), ComplexPoint::real(1.0, 1.0), &steps);
    let errors: Vec<f64> = serde_json::from_value(r.details["errors"].clone()).unwrap_or_default();
    for (e, t) in errors.iter().zip(&steps) {
        out.push(VerificationReport::compare(
            "limits.scaling_closed_form",
            "scaling-limit error for (1,1) at z = (1,1) equals t^2",
            json!({"t": t}),
            Complex64::new(*e, 0.0),
            Complex64::new(t * t, 0.0),
            cfg.tol(Tolerance::abs(1e-12)),
        ));
    }
    out.push(r);
    let c = Complex64::new;
    for (d, p) in [
        (DegreePair::new(0, 0), ComplexPoint::real(1.0, 1.0)),
        (DegreePair::new(3, 2), ComplexPoint::raw(c(1.0, 1.0), c(2.0, 0.0))),
        (DegreePair::new(2, 4), ComplexPoint::raw(c(-0.5, 0.7), c(0.3, -1.2))),
    ] {
        out.push(scaling_limit_check(d, p, &steps));
    }

    let alphas = alpha_path(LIMIT_STEPS);
    for (u1, u2) in tilde_points() {
        for d in DegreePair::square(TILDE_MAX_DEGREE) {
            out.push(tilde_limit_check(d, u1, u2, &alphas));
        }
    }

    out.extend(kernel_limit_reports(cfg)?);

    let degree = cfg.max_degree.min(4);
    let rule = gauss_hermite_rule(cfg.nodes_per_axis.max(degree as usize + 1))?;
    let gram = limit_monomial_gram(degree, &rule)?;
    let n = gram.pairs.len();
    for i in 0..n {
        for j in 0..n {
            let (mn, pq) = (gram.pairs[i], gram.pairs[j]);
            out.push(VerificationReport::compare(
                "limits.bargmann_orthogonality",
                "limit monomials in (u1-u2)/sqrt2, (conj u1+conj u2)/sqrt2 are orthonormal under the standard Gaussian",
                json!({"m": mn.m, "n": mn.n, "p": pq.m, "q": pq.n, "nodes": rule.order()}),
                gram.get(i, j),
                Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0),
                cfg.tol(ORTHOGONALITY_TOL),
            ));
        }
    }

    out.extend(ito_orthogonality(cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_roundtrip() {
        let xi = ComplexPoint::raw(Complex64::new(0.3, -0.8), Complex64::new(-0.2, 0.4));
        let (u1, u2) = xi_to_u(xi);
        let back = u_to_xi(u1, u2);
        assert!((back.z1 - xi.z1).norm() < 1e-15 && (back.z2 - xi.z2).norm() < 1e-15);
    }

    #[test]
    fn limit_gram_entry() {
        let g = limit_monomial_gram(3, &gauss_hermite_rule(6).unwrap()).unwrap();
        let v = g.entry(DegreePair::new(2, 1), DegreePair::new(2, 1)).unwrap();
        assert!((v - 1.0).norm() < 1e-13);
        assert!(g.max_identity_error() < 1e-12);
    }

    #[test]
    fn kernel_limit_converges() {
        let pairs = vec![(
            ComplexPoint::raw(Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.3)),
            ComplexPoint::raw(Complex64::new(0.1, -0.4), Complex64::new(0.3, 0.3)),
        )];
        let errors = kernel_limit_errors(&alpha_path(12), &pairs).unwrap();
        assert!(non_increasing(&errors));
        assert!(errors[11] < errors[0] * 1e-2);
    }
}
