//! Numerical checks built on the evaluators: generating functions, the
//! growth bound and the two scaling limits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Alpha, ComplexPoint, NormalizedTable};
use crate::exact::DegreePair;
use crate::numeric::{ln_factorial, CompensatedSum};
use crate::report::{ComplexValue, Tolerance, VerificationReport};

pub fn cv(z: Complex64) -> ComplexValue {
    z.into()
}

pub fn point_json(p: ComplexPoint) -> serde_json::Value {
    json!({"z1": cv(p.z1), "z2": cv(p.z2)})
}

/// `x^k / √(k!)` for `k = 0..=n`.
fn scaled_powers(x: Complex64, n: u32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Complex64::new(1.0, 0.0));
    for k in 1..=n {
        let prev = out[k as usize - 1];
        out.push(prev * x / f64::from(k).sqrt());
    }
    out
}

/// `e^{|z₁||z₂|} Σ_{m+n>M} aᵐ bⁿ / √(m! n!)`, summed degree by degree until
/// the shells stop contributing.
pub fn generating_tail_bound(a: f64, b: f64, p: ComplexPoint, order: u32) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    let ln_shell = |deg: u32| -> f64 {
        // log-sum-exp over m + n = deg
        let terms: Vec<f64> = (0..=deg)
            .map(|m| {
                let n = deg - m;
                let la = if m == 0 { 0.0 } else { f64::from(m) * a.ln() };
                let lb = if n == 0 { 0.0 } else { f64::from(n) * b.ln() };
                la + lb - 0.5 * (ln_factorial(m) + ln_factorial(n))
            })
            .filter(|x| x.is_finite())
            .collect();
        let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + terms.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
    };
    let mut total = 0.0;
    let mut deg = order + 1;
    let mut prev = f64::INFINITY;
    loop {
        let shell = ln_shell(deg).exp();
        total += shell;
        // Shells are eventually decreasing; stop once they are negligible.
        if (shell < prev && shell <= total * 1e-17) || deg > order + 4000 {
            break;
        }
        prev = shell;
        deg += 1;
    }
    total * (p.z1.norm() * p.z2.norm()).exp()
}

/// `Σ_{m,n≤M} sᵐtⁿ/(m!n!) H_{m,n}(z₁,z₂)` against `e^{z₁s + z₂t − st}`.
pub fn generating_function_check(
    s: Complex64,
    t: Complex64,
    p: ComplexPoint,
    order: u32,
) -> VerificationReport {
    let table = NormalizedTable::new(1.0, p, order, order);
    let sp = scaled_powers(s, order);
    let tp = scaled_powers(t, order);
    let mut acc = CompensatedSum::new();
    // Summing by total degree keeps the small high-order terms from being
    // absorbed early.
    for deg in 0..=2 * order {
        for m in deg.saturating_sub(order)..=deg.min(order) {
            let n = deg - m;
            acc.add(sp[m as usize] * tp[n as usize] * table.get(m, n));
        }
    }
    let reference = (p.z1 * s + p.z2 * t - s * t).exp();
    let tail = generating_tail_bound(s.norm(), t.norm(), p, order);
    VerificationReport::compare(
        "eval.generating_function",
        "double series of s^m t^n H_{m,n}/(m! n!) equals exp(z1 s + z2 t - s t)",
        json!({"s": cv(s), "t": cv(t), "point": point_json(p), "order": order}),
        acc.value(),
        reference,
        Tolerance::DEFAULT,
    )
    .with_details(json!({"tail_bound": tail}))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialSum {
    /// `Σ_m sᵐ/m! H_{m,n} = (z₂ − s)ⁿ e^{z₁ s}`.
    SumOverM,
    /// `Σ_n tⁿ/n! H_{m,n} = (z₁ − t)ᵐ e^{z₂ t}`.
    SumOverN,
}

pub fn partial_generating_check(
    which: PartialSum,
    s: Complex64,
    fixed: u32,
    p: ComplexPoint,
    order: u32,
) -> VerificationReport {
    // Both sums are the same statement with the roles of the variables
    // exchanged, since H_{m,n}(z₁,z₂) = H_{n,m}(z₂,z₁).
    let q = match which {
        PartialSum::SumOverM => p,
        PartialSum::SumOverN => p.swapped(),
    };
    let table = NormalizedTable::new(1.0, q, order, fixed);
    let sp = scaled_powers(s, order);
    let root = (0.5 * ln_factorial(fixed)).exp();
    let acc: CompensatedSum = (0..=order)
        .map(|m| sp[m as usize] * table.get(m, fixed) * root)
        .collect();
    let reference = (q.z2 - s).powu(fixed) * (q.z1 * s).exp();
    let identity = match which {
        PartialSum::SumOverM => "sum over m of s^m H_{m,n}/m! equals (z2 - s)^n exp(z1 s)",
        PartialSum::SumOverN => "sum over n of t^n H_{m,n}/n! equals (z1 - t)^m exp(z2 t)",
    };
    VerificationReport::compare(
        "eval.partial_generating",
        identity,
        json!({"which": which, "s": cv(s), "fixed": fixed, "point": point_json(p), "order": order}),
        acc.value(),
        reference,
        Tolerance::DEFAULT,
    )
}

/// Slack on the log-space comparison, for rounding in the table.
const BOUND_SLACK: f64 = 1e-12;

/// `|H_{m,n}(z₁,z₂)| ≤ √(m!n!) e^{|z₁||z₂|}`, compared as
/// `ln|H_{m,n}/√(m!n!)| ≤ |z₁||z₂|`.
pub fn bound_check(d: DegreePair, p: ComplexPoint) -> VerificationReport {
    let table = NormalizedTable::new(1.0, p, d.m, d.n);
    let lhs = table.get(d.m, d.n).norm().ln();
    let rhs = p.z1.norm() * p.z2.norm();
    let excess = (lhs - rhs).max(0.0);
    VerificationReport::with_error(
        "eval.bound",
        "ln|H_{m,n}/sqrt(m! n!)| <= |z1||z2|",
        json!({"m": d.m, "n": d.n, "point": point_json(p)}),
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        excess,
        Tolerance::abs(BOUND_SLACK),
    )
    .with_verdict(lhs <= rhs + BOUND_SLACK)
}

const SWEEP_BLOCK: usize = 256;

fn random_disc_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

// (worst log-margin, violation count, first violation)
type BlockResult = (f64, usize, Option<(u32, u32, ComplexPoint)>);

/// The bound for every `m, n ≤ max_degree` at `samples` seeded random points
/// with `|z₁|, |z₂| ≤ radius`. The report carries the worst log-margin.
pub fn bound_sweep(seed: u64, samples: usize, max_degree: u32, radius: f64) -> VerificationReport {
    let blocks = samples.div_ceil(SWEEP_BLOCK);
    let per_block: Vec<BlockResult> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = SWEEP_BLOCK.min(samples - b * SWEEP_BLOCK);
            let mut worst = f64::NEG_INFINITY;
            let mut violations = 0;
            let mut first: Option<(u32, u32, ComplexPoint)> = None;
            for _ in 0..count {
                let z1 = random_disc_point(&mut rng, radius);
                let z2 = random_disc_point(&mut rng, radius);
                let p = ComplexPoint::raw(z1, z2);
                let table = NormalizedTable::new(1.0, p, max_degree, max_degree);
                let rhs = z1.norm() * z2.norm();
                for d in DegreePair::square(max_degree) {
                    let margin = table.get(d.m, d.n).norm().ln() - rhs;
                    worst = worst.max(margin);
                    if margin > BOUND_SLACK {
                        violations += 1;
                        first.get_or_insert((d.m, d.n, p));
                    }
                }
            }
            (worst, violations, first)
        })
        .collect();
    let worst = per_block.iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
    let violations: usize = per_block.iter().map(|b| b.1).sum();
    let first = per_block
        .iter()
        .find_map(|b| b.2)
        .map(|(m, n, p)| json!({"m": m, "n": n, "point": point_json(p)}));
    VerificationReport::with_error(
        "eval.bound_sweep",
        "ln|H_{m,n}/sqrt(m! n!)| <= |z1||z2| at random points",
        json!({"seed": seed, "samples": samples, "max_degree": max_degree, "radius": radius}),
        Complex64::new(worst, 0.0),
        Complex64::new(0.0, 0.0),
        worst.max(0.0),
        Tolerance::abs(BOUND_SLACK),
    )
    .with_verdict(violations == 0)
    .with_details(json!({
        "violations": violations,
        "cases": samples * ((max_degree as usize + 1).pow(2)),
        "worst_log_margin": worst,
        "first_violation": first,
    }))
}

/// Default approach path `t = 2^{-k}` (or `α = 1 - 2^{-k}`), `k = 1..=12`.
pub fn default_steps() -> Vec<f64> {
    (1..=12).map(|k| 0.5f64.powi(k)).collect()
}

/// Absolute tolerance a scaling-limit sequence must reach at its last step.
pub const LIMIT_TOL: f64 = 1e-4;

/// True when `xs` is non-increasing from its largest entry onward.
pub(crate) fn eventually_decreasing(xs: &[f64]) -> bool {
    let Some(peak) = xs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
    else {
        return true;
    };
    xs[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-15)
}

pub(crate) fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + 1e-15)
}

/// `e(t) = |t^{m+n} H_{m,n}(z₁/t, z₂/t) − z₁ᵐ z₂ⁿ|` along `t_sequence`.
///
/// `t^{m+n} H_{m,n}(z/t)` is evaluated with the scaled table at `ρ = t`, so
/// tiny `t` does not overflow.
pub fn scaling_limit_check(d: DegreePair, p: ComplexPoint, t_sequence: &[f64]) -> VerificationReport {
    let root = (0.5 * (ln_factorial(d.m) + ln_factorial(d.n))).exp();
    let limit = p.z1.powu(d.m) * p.z2.powu(d.n);
    let mut last = Complex64::new(0.0, 0.0);
    let errors: Vec<f64> = t_sequence
        .iter()
        .map(|&t| {
            let table = NormalizedTable::new(t, p.scaled(1.0 / t), d.m, d.n);
            last = table.get(d.m, d.n) * root;
            (last - limit).norm()
        })
        .collect();
    let final_err = errors.last().copied().unwrap_or(0.0);
    let ok = t_sequence.iter().all(|&t| t > 0.0 && t <= 1.0)
        && eventually_decreasing(&errors)
        && final_err <= LIMIT_TOL;
    VerificationReport::with_error(
        "eval.scaling_limit",
        "t^(m+n) H_{m,n}(z1/t, z2/t) tends to z1^m z2^n as t decreases to 0",
        json!({"m": d.m, "n": d.n, "point": point_json(p), "t": t_sequence}),
        last,
        limit,
        final_err,
        Tolerance::abs(LIMIT_TOL),
    )
    .with_verdict(ok)
    .with_details(json!({"errors": errors}))
}

/// `H̃^(α)_{m,n}` at `((u₁ − √α u₂)/√(1−α), (ū₁ + √α ū₂)/√(1−α))` against
/// `((u₁−u₂)/√2)ᵐ ((ū₁+ū₂)/√2)ⁿ / √(m!n!)`.
///
/// The verdict uses the limit as written above; the residual against the same
/// limit divided by π is reported alongside.
pub fn tilde_limit_check(
    d: DegreePair,
    u1: Complex64,
    u2: Complex64,
    alpha_sequence: &[f64],
) -> VerificationReport {
    let root = (0.5 * (ln_factorial(d.m) + ln_factorial(d.n))).exp();
    let s2 = std::f64::consts::SQRT_2;
    let limit = ((u1 - u2) / s2).powu(d.m) * ((u1.conj() + u2.conj()) / s2).powu(d.n) / root;
    let limit_pi = limit / std::f64::consts::PI;
    let mut residuals = Vec::with_capacity(alpha_sequence.len());
    let mut residuals_pi = Vec::with_capacity(alpha_sequence.len());
    let mut last = Complex64::new(0.0, 0.0);
    let mut valid = true;
    for &alpha in alpha_sequence {
        let Ok(a) = Alpha::new(alpha) else {
            valid = false;
            continue;
        };
        let p = a.substitute(u1, u2);
        last = NormalizedTable::for_alpha(a, p, d.m, d.n).get(d.m, d.n);
        residuals.push((last - limit).norm());
        residuals_pi.push((last - limit_pi).norm());
    }
    let final_err = residuals.last().copied().unwrap_or(f64::INFINITY);
    let ok = valid && non_increasing(&residuals) && final_err < TILDE_LIMIT_TOL;
    VerificationReport::with_error(
        "eval.tilde_limit",
        "normalized polynomials at the substituted arguments tend to the monomial limit as alpha increases to 1",
        json!({"m": d.m, "n": d.n, "u1": cv(u1), "u2": cv(u2), "alpha": alpha_sequence}),
        last,
        limit,
        final_err,
        Tolerance::abs(TILDE_LIMIT_TOL),
    )
    .with_verdict(ok)
    .with_details(json!({
        "residuals": residuals,
        "residuals_with_inverse_pi": residuals_pi,
    }))
}

/// Residual the tilde limit must reach at the last α.
pub const TILDE_LIMIT_TOL: f64 = 1e-3;
