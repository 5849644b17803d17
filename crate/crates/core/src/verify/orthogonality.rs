//! Orthogonality of `H̃^(α)_{m,n}` under the standard Gaussian after the
//! substitution, of the Hermite functions under `μ_α`, and of the
//! polynomials `H_{m,n}(u, ū)` under the Gaussian on `ℂ`.

use num_complex::Complex64;
use serde_json::json;

use super::config::SuiteConfig;
use crate::error::Result;
use crate::eval::{Alpha, ComplexPoint, NormalizedTable};
use crate::exact::DegreePair;
use crate::kernels::{weight_exponent, HermiteFunctionTable};
use crate::quadrature::{
    gauss_hermite_rule, integrate_mu_alpha, integrate_mu_alpha_vec, integrate_std_gaussian_c1_vec,
    integrate_std_gaussian_c2_vec, QuadratureRule,
};
use crate::report::{Tolerance, VerificationReport};

pub const ORTHOGONALITY_TOL: Tolerance = Tolerance::new(1e-9, 1e-9);

/// Index pairs with `m + n ≤ max_degree`, in graded order.
pub fn degree_pairs(max_degree: u32) -> Vec<DegreePair> {
    DegreePair::triangle(max_degree).collect()
}

/// All inner products `⟨f_i, f_j⟩` for `i, j` in `pairs`, row-major.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub pairs: Vec<DegreePair>,
    pub values: Vec<Complex64>,
}

impl GramMatrix {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.pairs.len() + j]
    }

    pub fn index(&self, d: DegreePair) -> Option<usize> {
        self.pairs.iter().position(|p| *p == d)
    }

    /// `⟨f_{m,n}, f_{p,q}⟩`.
    pub fn entry(&self, mn: DegreePair, pq: DegreePair) -> Option<Complex64> {
        Some(self.get(self.index(mn)?, self.index(pq)?))
    }

    /// `max |G - I|`.
    pub fn max_identity_error(&self) -> f64 {
        let n = self.pairs.len();
        (0..n * n)
            .map(|k| {
                let delta = if k / n == k % n { 1.0 } else { 0.0 };
                (self.values[k] - delta).norm()
            })
            .fold(0.0, f64::max)
    }
}

fn outer_products(values: &[Complex64], out: &mut [Complex64]) {
    let n = values.len();
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = values[i] * values[j].conj();
        }
    }
}

/// Gram matrix of `H̃^(α)_{m,n}(z(u))` under `e^{-|u|²} du/π²` on `ℂ²`.
pub fn normalized_gram(a: Alpha, max_degree: u32, rule: &QuadratureRule) -> Result<GramMatrix> {
    let pairs = degree_pairs(max_degree);
    let len = pairs.len();
    let values = integrate_std_gaussian_c2_vec(
        |u1, u2, out| {
            let table = NormalizedTable::for_alpha(a, a.substitute(u1, u2), max_degree, max_degree);
            let v: Vec<Complex64> = pairs.iter().map(|d| table.get(d.m, d.n)).collect();
            outer_products(&v, out);
        },
        len * len,
        rule,
    )?;
    Ok(GramMatrix { pairs, values })
}

/// Gram matrix of `h^(α)_{m,n}` under `μ_α`.
pub fn hermite_function_gram(a: Alpha, max_degree: u32, rule: &QuadratureRule) -> Result<GramMatrix> {
    let pairs = degree_pairs(max_degree);
    let len = pairs.len();
    let values = integrate_mu_alpha_vec(
        |z, out| {
            let table = HermiteFunctionTable::new(a, z, max_degree);
            let v: Vec<Complex64> = pairs.iter().map(|d| table.get(d.m, d.n)).collect();
            outer_products(&v, out);
        },
        len * len,
        a,
        rule,
    )?;
    Ok(GramMatrix { pairs, values })
}

/// Gram matrix of `H_{m,n}(u, ū)/√(m!n!)` under `e^{-|u|²} du/π` on `ℂ`.
pub fn ito_gram(max_degree: u32, rule: &QuadratureRule) -> Result<GramMatrix> {
    let pairs = degree_pairs(max_degree);
    let len = pairs.len();
    let values = integrate_std_gaussian_c1_vec(
        |u, out| {
            let table = NormalizedTable::new(1.0, ComplexPoint::diagonal(u), max_degree, max_degree);
            let v: Vec<Complex64> = pairs.iter().map(|d| table.get(d.m, d.n)).collect();
            outer_products(&v, out);
        },
        len * len,
        rule,
    )?;
    Ok(GramMatrix { pairs, values })
}

/// The weight `exp[-(1-α)/4 |z̄₂+z₁|² - (1/α-1)/4 |z̄₂-z₁|²]` of the raw
/// orthogonality relation, as a log.
pub fn raw_weight_exponent(a: Alpha, p: ComplexPoint) -> f64 {
    let al = a.value();
    let plus = (p.z2.conj() + p.z1).norm_sqr();
    let minus = (p.z2.conj() - p.z1).norm_sqr();
    -(1.0 - al) / 4.0 * plus - (1.0 / al - 1.0) / 4.0 * minus
}

/// `∫ raw weight dz/π²`, computed by integrating `raw/g_α` against `μ_α`.
pub fn raw_calibration_integral(a: Alpha, rule: &QuadratureRule) -> Result<Complex64> {
    integrate_mu_alpha(
        |z| Complex64::new((raw_weight_exponent(a, z) - weight_exponent(a, z)).exp(), 0.0),
        a,
        rule,
    )
}

fn gram_reports(
    check_id: &str,
    identity: &str,
    alpha: Option<f64>,
    nodes: usize,
    gram: &GramMatrix,
    tol: Tolerance,
    runtime_ms: f64,
) -> Vec<VerificationReport> {
    let n = gram.pairs.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (mn, pq) = (gram.pairs[i], gram.pairs[j]);
            let delta = if i == j { 1.0 } else { 0.0 };
            out.push(
                VerificationReport::compare(
                    check_id,
                    identity,
                    json!({"alpha": alpha, "m": mn.m, "n": mn.n, "p": pq.m, "q": pq.n, "nodes": nodes}),
                    gram.get(i, j),
                    Complex64::new(delta, 0.0),
                    tol,
                )
                .with_runtime_ms(runtime_ms / (n * n) as f64),
            );
        }
    }
    out
}

fn elapsed_ms(start: std::time::Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Normalized Gram matrices plus the raw calibration, for every α.
pub fn orthogonality_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let rule = gauss_hermite_rule(cfg.nodes_per_axis)?;
    let tol = cfg.tol(ORTHOGONALITY_TOL);
    let mut out = Vec::new();
    for &a in &cfg.alphas {
        let start = std::time::Instant::now();
        let gram = normalized_gram(a, cfg.max_degree, &rule)?;
        out.extend(gram_reports(
            "orthogonality.normalized",
            "normalized polynomials at the substituted arguments are orthonormal under the standard Gaussian on C^2",
            Some(a.value()),
            cfg.nodes_per_axis,
            &gram,
            tol,
            elapsed_ms(start),
        ));

        let start = std::time::Instant::now();
        let value = raw_calibration_integral(a, &rule)?;
        out.push(
            VerificationReport::compare(
                "orthogonality.raw_calibration",
                "integral of the raw orthogonality weight equals 4 alpha/(1-alpha)^2",
                json!({"alpha": a.value(), "m": 0, "n": 0, "p": 0, "q": 0, "nodes": cfg.nodes_per_axis}),
                value,
                Complex64::new(a.orthogonality_constant(), 0.0),
                cfg.tol(Tolerance::new(0.0, 1e-9)),
            )
            .with_runtime_ms(elapsed_ms(start)),
        );
    }
    Ok(out)
}

pub fn hfunction_orthonormality(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let rule = gauss_hermite_rule(cfg.nodes_per_axis)?;
    let tol = cfg.tol(ORTHOGONALITY_TOL);
    let mut out = Vec::new();
    for &a in &cfg.alphas {
        let start = std::time::Instant::now();
        let gram = hermite_function_gram(a, cfg.max_degree, &rule)?;
        out.extend(gram_reports(
            "orthogonality.hermite_functions",
            "Hermite functions are orthonormal in L^2(mu_alpha)",
            Some(a.value()),
            cfg.nodes_per_axis,
            &gram,
            tol,
            elapsed_ms(start),
        ));
    }
    Ok(out)
}

/// Degree bound used for the Gaussian-on-ℂ orthogonality checks.
pub const ITO_MAX_DEGREE: u32 = 4;

pub fn ito_orthogonality(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let degree = cfg.max_degree.min(ITO_MAX_DEGREE);
    let nodes = cfg.nodes_per_axis.max(degree as usize + 1);
    let rule = gauss_hermite_rule(nodes)?;
    let start = std::time::Instant::now();
    let gram = ito_gram(degree, &rule)?;
    Ok(gram_reports(
        "orthogonality.ito",
        "H_{m,n}(u, conj u)/sqrt(m! n!) are orthonormal under the Gaussian on C",
        None,
        nodes,
        &gram,
        cfg.tol(ORTHOGONALITY_TOL),
        elapsed_ms(start),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_spot_entries() {
        let a = Alpha::new(0.5).unwrap();
        let rule = gauss_hermite_rule(8).unwrap();
        let g = normalized_gram(a, 2, &rule).unwrap();
        let e = |m, n, p, q| g.entry(DegreePair::new(m, n), DegreePair::new(p, q)).unwrap();
        assert!((e(1, 0, 1, 0) - 1.0).norm() < 1e-12);
        assert!(e(1, 0, 0, 1).norm() < 1e-12);
        assert!(g.max_identity_error() < 1e-12);
    }

    #[test]
    fn raw_calibration_is_eight_at_half() {
        let a = Alpha::new(0.5).unwrap();
        let v = raw_calibration_integral(a, &gauss_hermite_rule(4).unwrap()).unwrap();
        assert!((v - 8.0).norm() < 1e-12);
    }

    #[test]
    fn hermite_function_spot_entries() {
        let rule = gauss_hermite_rule(8).unwrap();
        for (al, mn, pq, want) in [(0.5, (0, 0), (0, 0), 1.0), (0.25, (2, 1), (2, 1), 1.0), (0.75, (2, 1), (1, 2), 0.0)] {
            let a = Alpha::new(al).unwrap();
            let g = hermite_function_gram(a, 3, &rule).unwrap();
            let v = g.entry(DegreePair::new(mn.0, mn.1), DegreePair::new(pq.0, pq.1)).unwrap();
            assert!((v - want).norm() < 1e-11, "{al} {mn:?} {pq:?} {v}");
        }
    }

    #[test]
    fn ito_spot_entries() {
        let g = ito_gram(4, &gauss_hermite_rule(6).unwrap()).unwrap();
        assert!((g.entry(DegreePair::new(1, 1), DegreePair::new(1, 1)).unwrap() - 1.0).norm() < 1e-13);
        assert!(g.entry(DegreePair::new(2, 0), DegreePair::new(0, 2)).unwrap().norm() < 1e-13);
        assert!(g.max_identity_error() < 1e-12);
    }
}
