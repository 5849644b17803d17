//! Gauss–Hermite rules, tensor grids over `ℂ ≅ ℝ²` and `ℂ² ≅ ℝ⁴`, and a
//! seeded Monte Carlo estimator used as an independent cross-check.

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact::rational::ratio_to_f64;
use crate::eval::{Alpha, ComplexPoint};
use crate::kernels::weight_exponent;

pub const MAX_NODES: usize = 200;

/// `N`-point Gauss–Hermite rule for the weight `e^{-x²}` on `ℝ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// `node,weight` lines with a header, shortest round-trip formatting.
    /// `node,weight` rows in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,weight\n");
        for (x, w) in self.iter() {
            out.push_str(&format!("{x:?},{w:?}\n"));
        }
        out
    }
}

/// `∫ xᵏ e^{-x²} dx`.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // Γ((k+1)/2) = (k-1)!! √π / 2^{k/2}
    (1..k).step_by(2).fold(PI.sqrt(), |acc, j| acc * f64::from(j) / 2.0)
}

/// Worst error of the rule on the moments `k = 0..2N`, relative to
/// `max(|exact|, Σ wᵢ |xᵢ|ᵏ)` so that vanishing odd moments are measured
/// against their natural scale.
pub fn moment_exactness(rule: &QuadratureRule) -> f64 {
    (0..2 * rule.order() as u32)
        .map(|k| {
            let exact = gaussian_moment(k);
            let got = rule.integrate(|x| x.powi(k as i32));
            let scale = exact.abs().max(rule.integrate(|x| x.abs().powi(k as i32)));
            (got - exact).abs() / scale
        })
        .fold(0.0, f64::max)
}

/// Orthonormal Hermite values `p_{n-1}(x)`, `p_n(x)` for the weight `e^{-x²}`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// `n`-point Gauss-Hermite rule with correctly rounded nodes and weights.
/// Each order is built once per process and cached.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_NODES).contains(&n) {
        return Err(Error::Range(format!(
            "Gauss-Hermite order must lie in 1..={MAX_NODES}, got {n}"
        )));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, QuadratureRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(rule.clone());
    }
    let rule = build_rule(n);
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(n, rule.clone());
    Ok(rule)
}

fn build_rule(n: usize) -> QuadratureRule {
    // Jacobi matrix of the monic recurrence: off-diagonal √(k/2).
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let nf = n as f64;
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pm1, p) = orthonormal_pair(n, *x);
            *x -= p / ((2.0 * nf).sqrt() * pm1);
        }
        *x = round_root(n, *x);
        weights.push(exact_weight(n, *x));
    }

    // Enforce the ± pairing exactly.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule { nodes, weights }
}

/// `√π` as an unevaluated sum of two doubles.
const SQRT_PI_HI: f64 = 1.772453850905516;
const SQRT_PI_LO: f64 = -7.666586499825799e-17;

/// `x` as `a·2^e`.
fn dyadic(x: f64) -> (BigInt, i32) {
    let bits = x.to_bits();
    let sign = if x < 0.0 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    (BigInt::from(mant) * sign, e)
}

/// Midpoint of two finite doubles, exactly, as `a·2^e`.
fn midpoint(x: f64, y: f64) -> (BigInt, i32) {
    let (a, ea) = dyadic(x);
    let (b, eb) = dyadic(y);
    let e = ea.min(eb);
    ((a << (ea - e) as usize) + (b << (eb - e) as usize), e - 1)
}

/// `(G, k)` with `H_j(a·2^e) = G_j / 2^{kj}` for the physicists' `H_j`,
/// `j = 0..=n`, via the integer recurrence for `G_j = 2^{kj} H_j`.
fn hermite_scaled(n: usize, a: &BigInt, e: i32) -> (Vec<BigInt>, usize) {
    let (a, k) = if e >= 0 { (a << e as usize, 0usize) } else { (a.clone(), (-e) as usize) };
    let four_k = BigInt::from(1) << (2 * k);
    let two_a: BigInt = &a * 2u32;
    let mut g = vec![BigInt::from(1)];
    if n > 0 {
        g.push(two_a.clone());
    }
    for j in 1..n {
        let next = &two_a * &g[j] - &four_k * &g[j - 1] * BigInt::from(2 * j);
        g.push(next);
    }
    (g, k)
}

fn hermite_sign(n: usize, a: &BigInt, e: i32) -> i32 {
    let (g, _) = hermite_scaled(n, a, e);
    if g[n].is_zero() {
        0
    } else if g[n].is_positive() {
        1
    } else {
        -1
    }
}

/// Weight `2^{n-1} n! √π / (n² H_{n-1}(r)²)` at the root `r` of `H_n` whose
/// nearest double is `x`. The rational factor is formed exactly at `x`, then
/// moved to `r` to first order using the exact residual `r - x`.
fn exact_weight(n: usize, x: f64) -> f64 {
    let (a, e) = dyadic(x);
    let (g, k) = hermite_scaled(n, &a, e);
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let num = fact << (n - 1 + 2 * k * (n - 1));
    let den = &g[n - 1] * &g[n - 1] * BigInt::from(n * n);
    let r = BigRational::new(num, den);
    let r_hi = ratio_to_f64(&r);
    let r_lo = BigRational::from_float(r_hi).map_or(0.0, |h| ratio_to_f64(&(&r - h)));
    let w_hi = r_hi * SQRT_PI_HI;
    let mut w_lo = r_hi.mul_add(SQRT_PI_HI, -w_hi) + r_hi * SQRT_PI_LO + r_lo * SQRT_PI_HI;
    if n >= 2 && !g[n].is_zero() {
        // r - x = -H_n / H_n' = -G_n / (2n G_{n-1} 2^k).
        let shift = -ratio_to_f64(&BigRational::new(g[n].clone(), (&g[n - 1] * BigInt::from(2 * n)) << k));
        // d ln w / dx = -4(n-1) H_{n-2} / H_{n-1}.
        let slope = -4.0 * (n - 1) as f64 * ratio_to_f64(&BigRational::new(&g[n - 2] << k, g[n - 1].clone()));
        w_lo += w_hi * slope * shift;
    }
    w_hi + w_lo
}

/// Moves a simple root of `H_n` found in floating point to the double nearest
/// the true root, deciding each rounding by exact sign evaluation at midpoints.
fn round_root(n: usize, mut x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    for _ in 0..16 {
        let lo = x.next_down();
        let hi = x.next_up();
        let (a, e) = midpoint(lo, x);
        let s_lo = hermite_sign(n, &a, e);
        let (b, f) = midpoint(x, hi);
        let s_hi = hermite_sign(n, &b, f);
        if s_lo != s_hi || s_lo == 0 {
            return x;
        }
        // No sign change between the midpoints: step towards the root using
        // the slope sign, which is that of H_{n-1}.
        let slope = orthonormal_pair(n, x).0.signum() as i32;
        x = if s_hi == slope { lo } else { hi };
    }
    x
}

/// Complex nodes `x_a + i x_b` with weights `w_a w_b / π` for the standard
/// complex Gaussian `e^{-|u|²} du/π`.
fn complex_grid(rule: &QuadratureRule) -> Vec<(Complex64, f64)> {
    let mut out = Vec::with_capacity(rule.order() * rule.order());
    for (x, wx) in rule.iter() {
        for (y, wy) in rule.iter() {
            out.push((Complex64::new(x, y), wx * wy / PI));
        }
    }
    out
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Integration(format!(
            "integrand component {i} is not finite on the quadrature grid"
        ))),
        None => Ok(()),
    }
}

/// `∫_{ℂ²} f(u₁,u₂) e^{-|u₁|²-|u₂|²} du₁du₂/π²` for a vector-valued `f`
/// writing `len` components into its output slice.
///
/// Partial sums are formed per outer node in parallel and then added in node
/// order, so the result does not depend on the thread schedule.
pub fn integrate_std_gaussian_c2_vec<F>(f: F, len: usize, rule: &QuadratureRule) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64, Complex64, &mut [Complex64]) + Sync,
{
    let grid = complex_grid(rule);
    let partials: Vec<Result<Vec<Complex64>>> = grid
        .par_iter()
        .map(|&(u1, w1)| {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for &(u2, w2) in &grid {
                f(u1, u2, &mut buf);
                check_finite(&buf)?;
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += b * w2;
                }
            }
            Ok(acc.into_iter().map(|a| a * w1).collect())
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part?) {
            *t += p;
        }
    }
    Ok(total)
}

pub fn integrate_std_gaussian_c2<F>(f: F, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    integrate_std_gaussian_c2_vec(|u1, u2, out| out[0] = f(u1, u2), 1, rule).map(|v| v[0])
}

/// `∫_ℂ f(u) e^{-|u|²} du/π` for a vector-valued `f`.
pub fn integrate_std_gaussian_c1_vec<F>(f: F, len: usize, rule: &QuadratureRule) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64, &mut [Complex64]) + Sync,
{
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (u, w) in complex_grid(rule) {
        f(u, &mut buf);
        check_finite(&buf)?;
        for (t, b) in total.iter_mut().zip(&buf) {
            *t += b * w;
        }
    }
    Ok(total)
}

/// Absolute determinant of the real-linear map `u ↦ z(u)` on `ℝ⁴`, from its
/// matrix in the basis `(Re u₁, Im u₁, Re u₂, Im u₂)`.
pub fn substitution_jacobian(a: Alpha) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let basis = [
        (Complex64::new(1.0, 0.0), zero),
        (Complex64::new(0.0, 1.0), zero),
        (zero, Complex64::new(1.0, 0.0)),
        (zero, Complex64::new(0.0, 1.0)),
    ];
    let columns: Vec<Vector4<f64>> = basis
        .iter()
        .map(|&(u1, u2)| {
            let z = a.substitute(u1, u2);
            Vector4::new(z.z1.re, z.z1.im, z.z2.re, z.z2.im)
        })
        .collect();
    Matrix4::from_columns(&columns).determinant().abs()
}

/// `∫ f dμ_α` for vector-valued `f`, by the substitution
/// `z₁ = (u₁ - √α u₂)/√(1-α)`, `z₂ = (ū₁ + √α ū₂)/√(1-α)` which turns
/// `μ_α` into a multiple of the standard Gaussian on `ℂ²`.
pub fn integrate_mu_alpha_vec<F>(f: F, len: usize, a: Alpha, rule: &QuadratureRule) -> Result<Vec<Complex64>>
where
    F: Fn(ComplexPoint, &mut [Complex64]) + Sync,
{
    let jac = substitution_jacobian(a);
    let expected = a.orthogonality_constant();
    assert!(
        (jac - expected).abs() <= 1e-12 * expected,
        "substitution Jacobian {jac} differs from 4a/(1-a)^2 = {expected}"
    );
    let values = integrate_std_gaussian_c2_vec(
        |u1, u2, out| {
            let z = a.substitute(u1, u2);
            // g_α(z(u)) relative to the Gaussian weight already in the rule.
            let w = (weight_exponent(a, z) + u1.norm_sqr() + u2.norm_sqr()).exp();
            f(z, out);
            for o in out.iter_mut() {
                *o *= w;
            }
        },
        len,
        rule,
    )?;
    Ok(values.into_iter().map(|v| v * jac).collect())
}

pub fn integrate_mu_alpha<F>(f: F, a: Alpha, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(ComplexPoint) -> Complex64 + Sync,
{
    integrate_mu_alpha_vec(|z, out| out[0] = f(z), 1, a, rule).map(|v| v[0])
}

/// `∫_{ℝ²} f(r,s) e^{-r²-s²} dr ds`.
pub fn integrate_gaussian_r2<F>(f: F, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    let mut total = Complex64::new(0.0, 0.0);
    for (r, wr) in rule.iter() {
        for (s, ws) in rule.iter() {
            let v = f(r, s);
            check_finite(std::slice::from_ref(&v))?;
            total += v * (wr * ws);
        }
    }
    Ok(total)
}

/// `∫_{ℝ²} f(r,s) dr ds` for Gaussian-dominated `f`, by dividing the weight
/// back out at the nodes.
pub fn integrate_planar_r2<F>(f: F, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    integrate_gaussian_r2(|r, s| f(r, s) * (r * r + s * s).exp(), rule)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Domain("Monte Carlo needs at least one sample".into()));
        }
        Ok(Self { samples, seed })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussianDims {
    One,
    Two,
}

impl GaussianDims {
    fn count(self) -> usize {
        match self {
            GaussianDims::One => 1,
            GaussianDims::Two => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: Complex64,
    pub stderr: f64,
}

const MC_BLOCK: usize = 8192;

/// Running mean and sum of squared deviations, mergeable across blocks.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: Complex64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * (other.n / n),
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.n * other.n / n,
        }
    }
}

/// Monte Carlo mean of `f` under the standard complex Gaussian on `ℂ` or `ℂ²`
/// (real and imaginary parts independent `N(0, 1/2)`).
///
/// Samples are drawn in fixed-size blocks, block `b` from stream `b` of a
/// ChaCha generator keyed by the seed, so the estimate depends only on the
/// seed and the sample count.
pub fn mc_integrate_gaussian<F>(f: F, dims: GaussianDims, cfg: McConfig) -> McEstimate
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let k = dims.count();
    let blocks = cfg.samples.div_ceil(MC_BLOCK);
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b as u64);
            let count = MC_BLOCK.min(cfg.samples - b * MC_BLOCK);
            let mut u = vec![Complex64::new(0.0, 0.0); k];
            let mut m = Moments::default();
            for _ in 0..count {
                for ui in u.iter_mut() {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    *ui = Complex64::new(re * sd, im * sd);
                }
                m.push(f(&u));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let variance = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    McEstimate {
        value: total.mean,
        stderr: (variance / total.n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_rules() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - PI.sqrt()).abs() < 1e-15);
        let r = gauss_hermite_rule(2).unwrap();
        assert!((r.nodes()[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.weights()[0] - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!(matches!(gauss_hermite_rule(0), Err(Error::Range(_))));
        assert!(matches!(gauss_hermite_rule(201), Err(Error::Range(_))));
    }

    #[test]
    fn moments_exact() {
        for n in [2usize, 4, 8, 16, 32, 64] {
            let err = moment_exactness(&gauss_hermite_rule(n).unwrap());
            assert!(err < 1e-12, "n={n} err={err}");
        }
        let r = gauss_hermite_rule(8).unwrap();
        let m14 = r.integrate(|x| x.powi(14));
        let exact = 135135.0 * PI.sqrt() / 128.0;
        assert!(((m14 - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn large_rule_is_sane() {
        let r = gauss_hermite_rule(200).unwrap();
        let total: f64 = r.weights().iter().sum();
        assert!((total - PI.sqrt()).abs() < 1e-13);
        assert!(r.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn complex_gaussian_examples() {
        let r = gauss_hermite_rule(6).unwrap();
        let one = integrate_std_gaussian_c2(|_, _| c(1.0, 0.0), &r).unwrap();
        assert!((one - c(1.0, 0.0)).norm() < 1e-14);
        let m = integrate_std_gaussian_c2(|u1, _| c(u1.norm_sqr(), 0.0), &r).unwrap();
        assert!((m - c(1.0, 0.0)).norm() < 1e-14);
        let odd = integrate_std_gaussian_c2(|u1, u2| u1 * u1 * u2.conj(), &r).unwrap();
        assert!(odd.norm() < 1e-15);
        let bad = integrate_std_gaussian_c2(|_, _| c(f64::NAN, 0.0), &r);
        assert!(matches!(bad, Err(Error::Integration(_))));
    }

    #[test]
    fn jacobian_matches_formula() {
        for al in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let a = Alpha::new(al).unwrap();
            let j = substitution_jacobian(a);
            assert!((j - 4.0 * al / (1.0 - al).powi(2)).abs() < 1e-12 * j);
        }
    }

    #[test]
    fn planar_examples() {
        let r = gauss_hermite_rule(20).unwrap();
        let v = integrate_planar_r2(|x, y| c((-x * x - y * y).exp(), 0.0), &r).unwrap();
        assert!((v - c(PI, 0.0)).norm() < 1e-13);
        let v = integrate_planar_r2(|x, y| c(x * x * (-x * x - y * y).exp(), 0.0), &r).unwrap();
        assert!((v - c(PI / 2.0, 0.0)).norm() < 1e-13);
        let v = integrate_gaussian_r2(|x, _| c(0.0, x).exp(), &r).unwrap();
        assert!((v - c(PI * (-0.25f64).exp(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn monte_carlo_basics() {
        let cfg = McConfig::new(20_000, 11).unwrap();
        let one = mc_integrate_gaussian(|_| c(1.0, 0.0), GaussianDims::One, cfg);
        assert_eq!(one.value, c(1.0, 0.0));
        assert_eq!(one.stderr, 0.0);
        let est = mc_integrate_gaussian(|u| c(u[0].norm_sqr(), 0.0), GaussianDims::Two, cfg);
        assert!((est.value - c(1.0, 0.0)).norm() < 4.0 * est.stderr);
        let again = mc_integrate_gaussian(|u| c(u[0].norm_sqr(), 0.0), GaussianDims::Two, cfg);
        assert_eq!(est, again);
        assert!(McConfig::new(0, 1).is_err());
    }
}
