//! Self-tests of the quadrature rules against exact moments and Monte Carlo.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::SuiteConfig;
use super::{cv, streams};
use crate::error::Result;
use crate::eval::{eval_hermite_unit_normalized, Alpha, ComplexPoint};
use crate::exact::DegreePair;
use crate::kernels::{hermite_function, weight_exponent};
use crate::quadrature::{
    gauss_hermite_rule, integrate_mu_alpha, integrate_std_gaussian_c2, mc_integrate_gaussian, moment_exactness,
    GaussianDims, McConfig, McEstimate,
};
use crate::report::{timed, Tolerance, VerificationReport};

pub const RULE_ORDERS: [usize; 6] = [2, 4, 8, 16, 32, 64];
pub const MOMENT_TOL: f64 = 1e-12;
pub const WEIGHT_SUM_TOL: f64 = 1e-13;
pub const MC_SAMPLES: usize = 1_000_000;
pub const MC_SIGMAS: f64 = 4.0;
pub const RANDOM_INTEGRANDS: usize = 20;
pub const INTEGRAND_DEGREE: u32 = 6;

/// A polynomial in `(u₁, ū₁, u₂, ū₂)` as a list of `(coefficient, exponents)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMonomials {
    pub terms: Vec<(Complex64, [u32; 4])>,
}

impl GaussianMonomials {
    pub fn eval(&self, u1: Complex64, u2: Complex64) -> Complex64 {
        let vars = [u1, u1.conj(), u2, u2.conj()];
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut v = *c;
                for (x, &k) in vars.iter().zip(e) {
                    v *= x.powu(k);
                }
                v
            })
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Exact standard-Gaussian mean: `E[u^a ū^b] = a! δ_{ab}` per coordinate.
    pub fn exact_mean(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(_, e)| e[0] == e[1] && e[2] == e[3])
            .map(|(c, e)| c * crate::numeric::factorial_f64(e[0]) * crate::numeric::factorial_f64(e[2]))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .terms
            .iter()
            .map(|(c, e)| json!({"coefficient": cv(*c), "exponents": e}))
            .collect::<Vec<_>>())
    }
}

/// Random integrand of total degree at most `max_degree`, with a few terms
/// chosen so that some have a nonzero mean.
pub fn random_integrand(rng: &mut ChaCha8Rng, max_degree: u32) -> GaussianMonomials {
    let count = rng.gen_range(2..=5);
    let terms = (0..count)
        .map(|i| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let e = if i == 0 {
                // balanced term: contributes to the mean
                let a = rng.gen_range(0..=max_degree / 4);
                let b = rng.gen_range(0..=(max_degree - 2 * a) / 2);
                [a, a, b, b]
            } else {
                let mut e = [0u32; 4];
                let total = rng.gen_range(0..=max_degree);
                for _ in 0..total {
                    e[rng.gen_range(0..4)] += 1;
                }
                e
            };
            (c, e)
        })
        .collect();
    GaussianMonomials { terms }
}

pub fn moment_reports(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for n in RULE_ORDERS {
        let rule = gauss_hermite_rule(n)?;
        let err = moment_exactness(&rule);
        out.push(
            VerificationReport::with_error(
                "quadrature.moment_exactness",
                "sum of w_i x_i^k equals the Gaussian moment for every k <= 2N-1",
                json!({"nodes": n, "max_power": 2 * n - 1}),
                Complex64::new(err, 0.0),
                Complex64::new(0.0, 0.0),
                err,
                cfg.tol(Tolerance::abs(MOMENT_TOL)),
            ),
        );
        let sum: f64 = rule.weights().iter().sum();
        let (xs, ws) = (rule.nodes(), rule.weights());
        let symmetric = (0..n).all(|i| xs[i] == -xs[n - 1 - i] && ws[i] == ws[n - 1 - i]);
        out.push(
            VerificationReport::compare(
                "quadrature.weight_sum",
                "weights sum to sqrt(pi) and nodes come in +/- pairs with equal weights",
                json!({"nodes": n}),
                Complex64::new(sum, 0.0),
                Complex64::new(std::f64::consts::PI.sqrt(), 0.0),
                cfg.tol(Tolerance::new(0.0, WEIGHT_SUM_TOL)),
            )
            .with_details(json!({"symmetric": symmetric})),
        );
        if !symmetric {
            let last = out.len() - 1;
            out[last].passed = false;
        }
    }
    Ok(out)
}

fn mc_report(
    check_id: &str,
    identity: &str,
    inputs: serde_json::Value,
    mc: McEstimate,
    reference: Complex64,
) -> VerificationReport {
    let abs_err = (mc.value - reference).norm();
    let bound = MC_SIGMAS * mc.stderr;
    VerificationReport::with_error(check_id, identity, inputs, mc.value, reference, abs_err, Tolerance::abs(bound))
        .with_details(json!({"stderr": mc.stderr, "sigmas": MC_SIGMAS}))
}

/// Quadrature against Monte Carlo on random polynomial integrands.
pub fn mc_agreement_reports(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(streams::MC_INTEGRANDS);
    let rule = gauss_hermite_rule(INTEGRAND_DEGREE as usize / 2 + 1)?;
    let mut out = Vec::new();
    for i in 0..RANDOM_INTEGRANDS {
        let poly = random_integrand(&mut rng, INTEGRAND_DEGREE);
        let quad = integrate_std_gaussian_c2(|u1, u2| poly.eval(u1, u2), &rule)?;
        let mc_cfg = McConfig::new(MC_SAMPLES, cfg.seed.wrapping_add(i as u64 + 1))?;
        let r = timed(|| {
            let mc = mc_integrate_gaussian(|u| poly.eval(u[0], u[1]), GaussianDims::Two, mc_cfg);
            mc_report(
                "quadrature.mc_agreement",
                "Monte Carlo mean agrees with tensor Gauss-Hermite within 4 standard errors",
                json!({"integrand": i, "terms": poly.to_json(), "degree": poly.degree(), "samples": MC_SAMPLES}),
                mc,
                quad,
            )
        });
        let exact = poly.exact_mean();
        out.push(r);
        out.push(VerificationReport::compare(
            "quadrature.polynomial_exact",
            "tensor Gauss-Hermite reproduces the exact Gaussian moments of a polynomial",
            json!({"integrand": i, "nodes": rule.order()}),
            quad,
            exact,
            cfg.tol(Tolerance::new(1e-12, 1e-12)),
        ));
    }
    Ok(out)
}

pub fn mc_examples(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    let mc = mc_integrate_gaussian(|_| one, GaussianDims::Two, McConfig::new(1000, cfg.seed)?);
    out.push(
        VerificationReport::compare(
            "quadrature.mc_constant",
            "Monte Carlo mean of a constant is exact with zero standard error",
            json!({"samples": 1000}),
            mc.value,
            one,
            Tolerance::abs(1e-15),
        )
        .with_details(json!({"stderr": mc.stderr})),
    );
    let mc = mc_integrate_gaussian(
        |u| Complex64::new(u[0].norm_sqr(), 0.0),
        GaussianDims::One,
        McConfig::new(MC_SAMPLES, cfg.seed)?,
    );
    out.push(mc_report(
        "quadrature.mc_second_moment",
        "E|u|^2 = 1 under the standard complex Gaussian",
        json!({"samples": MC_SAMPLES}),
        mc,
        one,
    ));
    let d = DegreePair::new(1, 1);
    let mc = mc_integrate_gaussian(
        |u| {
            let v = eval_hermite_unit_normalized(d, ComplexPoint::raw(u[0], u[0].conj()));
            Complex64::new(v.norm_sqr(), 0.0)
        },
        GaussianDims::One,
        McConfig::new(MC_SAMPLES, cfg.seed)?,
    );
    out.push(mc_report(
        "quadrature.mc_ito_norm",
        "the (1,1) polynomial on the conjugate slice has unit Gaussian norm",
        json!({"samples": MC_SAMPLES, "m": 1, "n": 1}),
        mc,
        one,
    ));
    Ok(out)
}

/// `∫ f dμ_α` by plain Monte Carlo in the `z` variables, sampling each
/// coordinate from a complex Gaussian with `E|z|² = s`; independent of the
/// substitution used by the quadrature.
pub fn mu_alpha_direct_mc<F>(f: F, a: Alpha, s: f64, cfg: McConfig) -> McEstimate
where
    F: Fn(ComplexPoint) -> Complex64 + Sync,
{
    let root = s.sqrt();
    mc_integrate_gaussian(
        |u| {
            let z = ComplexPoint::raw(u[0] * root, u[1] * root);
            let log_w = weight_exponent(a, z) + u[0].norm_sqr() + u[1].norm_sqr();
            f(z) * (s * s * log_w.exp())
        },
        GaussianDims::Two,
        cfg,
    )
}

/// Sampling variance for the direct oracle: wide enough that the estimator
/// has finite variance for the Hermite-function products.
pub fn direct_mc_variance(a: Alpha) -> f64 {
    2.0 / (1.0 - a.value())
}

pub fn mu_alpha_cross_checks(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &a in &cfg.alphas {
        let rule = gauss_hermite_rule(super::nonpolynomial_nodes(a).max(cfg.nodes_per_axis))?;
        let cases: [(DegreePair, DegreePair); 3] = [
            (DegreePair::new(0, 0), DegreePair::new(0, 0)),
            (DegreePair::new(1, 1), DegreePair::new(1, 1)),
            (DegreePair::new(1, 0), DegreePair::new(0, 1)),
        ];
        for (k, (d, e)) in cases.into_iter().enumerate() {
            let f = |z: ComplexPoint| hermite_function(d, a, z).value() * hermite_function(e, a, z).value().conj();
            let quad = integrate_mu_alpha(f, a, &rule)?;
            let mc_cfg = McConfig::new(MC_SAMPLES, cfg.seed.wrapping_add(1000 + k as u64))?;
            let mc = mu_alpha_direct_mc(f, a, direct_mc_variance(a), mc_cfg);
            let expected = if d == e { 1.0 } else { 0.0 };
            let inputs = json!({"alpha": a.value(), "left": [d.m, d.n], "right": [e.m, e.n], "samples": MC_SAMPLES});
            out.push(mc_report(
                "quadrature.mu_alpha_mc",
                "substituted quadrature over mu_alpha agrees with direct Monte Carlo within 4 standard errors",
                inputs.clone(),
                mc,
                quad,
            ));
            out.push(VerificationReport::compare(
                "quadrature.mu_alpha_orthonormal",
                "Hermite functions are orthonormal in L^2(mu_alpha)",
                inputs,
                quad,
                Complex64::new(expected, 0.0),
                cfg.tol(Tolerance::new(1e-9, 1e-9)),
            ));
        }
    }
    Ok(out)
}

pub fn quadrature_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = moment_reports(cfg)?;
    out.extend(mc_agreement_reports(cfg)?);
    out.extend(mc_examples(cfg)?);
    out.extend(mu_alpha_cross_checks(cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_mean_of_simple_monomials() {
        let p = GaussianMonomials {
            terms: vec![
                (Complex64::new(2.0, 0.0), [2, 2, 0, 0]),
                (Complex64::new(1.0, 0.0), [1, 0, 0, 0]),
                (Complex64::new(0.0, 1.0), [1, 1, 1, 1]),
            ],
        };
        assert_eq!(p.exact_mean(), Complex64::new(4.0, 1.0));
        assert_eq!(p.degree(), 4);
    }

    #[test]
    fn random_integrands_respect_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(random_integrand(&mut rng, 6).degree() <= 6);
        }
    }
}
