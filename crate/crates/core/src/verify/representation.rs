//! The planar integral representation of `e^{-z₁z₂} H_{m,n}(z₁,z₂)`.

use num_complex::Complex64;
use serde_json::json;

use super::config::SuiteConfig;
use super::{cv, point_json, seeded_points, streams};
use crate::error::{Error, Result};
use crate::eval::{eval_hermite, ComplexPoint, EvalMethod};
use crate::exact::DegreePair;
use crate::quadrature::{gauss_hermite_rule, QuadratureRule};
use crate::report::{Tolerance, VerificationReport};

pub const REPRESENTATION_NODES: usize = 64;
/// Largest `|z₁|, |z₂|` for which 64 nodes per axis are known to suffice.
pub const REPRESENTATION_ENVELOPE: f64 = 4.0;
pub const REPRESENTATION_TOL: Tolerance = Tolerance::new(1e-6, 0.0);
pub const REPRESENTATION_MAX_DEGREE: u32 = 6;
pub const REPRESENTATION_RADIUS: f64 = 2.0;

/// `(1/(π i^{m+n})) ∫_{ℝ²} w̄ᵐ wⁿ e^{-|w|² + i z₁ w + i z₂ w̄} dr ds` and the
/// same with `wᵐ w̄ⁿ`, for all `m, n ≤ max_degree`, row-major in `(m, n)`.
pub fn representation_values(
    max_degree: u32,
    p: ComplexPoint,
    rule: &QuadratureRule,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let k = max_degree as usize + 1;
    let mut corrected = vec![Complex64::new(0.0, 0.0); k * k];
    let mut printed = vec![Complex64::new(0.0, 0.0); k * k];
    let i = Complex64::new(0.0, 1.0);
    let mut pw = vec![Complex64::new(1.0, 0.0); k];
    let mut pwb = vec![Complex64::new(1.0, 0.0); k];
    for (r, wr) in rule.iter() {
        for (s, ws) in rule.iter() {
            let w = Complex64::new(r, s);
            let base = (i * p.z1 * w + i * p.z2 * w.conj()).exp() * (wr * ws);
            for j in 1..k {
                pw[j] = pw[j - 1] * w;
                pwb[j] = pwb[j - 1] * w.conj();
            }
            for m in 0..k {
                for n in 0..k {
                    corrected[m * k + n] += pwb[m] * pw[n] * base;
                    printed[m * k + n] += pw[m] * pwb[n] * base;
                }
            }
        }
    }
    for m in 0..k {
        for n in 0..k {
            let norm = i.powu((m + n) as u32) * std::f64::consts::PI;
            corrected[m * k + n] /= norm;
            printed[m * k + n] /= norm;
        }
    }
    (corrected, printed)
}

fn check_envelope(p: ComplexPoint) -> Result<()> {
    if p.z1.norm() > REPRESENTATION_ENVELOPE || p.z2.norm() > REPRESENTATION_ENVELOPE {
        return Err(Error::Accuracy(format!(
            "|z1|, |z2| must not exceed {REPRESENTATION_ENVELOPE} for the planar quadrature, got ({}, {})",
            p.z1, p.z2
        )));
    }
    Ok(())
}

fn batch(max_degree: u32, p: ComplexPoint, rule: &QuadratureRule, tol: Tolerance) -> Result<Vec<VerificationReport>> {
    check_envelope(p)?;
    let start = std::time::Instant::now();
    let (corrected, printed) = representation_values(max_degree, p, rule);
    let k = max_degree as usize + 1;
    let ms = start.elapsed().as_secs_f64() * 1e3 / (k * k) as f64;
    let damp = (-p.product()).exp();
    let mut out = Vec::new();
    for d in DegreePair::square(max_degree) {
        let idx = d.m as usize * k + d.n as usize;
        let reference = damp * eval_hermite(d, p, EvalMethod::Recurrence)?;
        out.push(
            VerificationReport::compare(
                "integral_representation",
                "planar Gaussian integral of conj(w)^m w^n exp(i z1 w + i z2 conj w) equals pi i^(m+n) exp(-z1 z2) H_{m,n}",
                json!({"m": d.m, "n": d.n, "point": point_json(p), "nodes": rule.order()}),
                corrected[idx],
                reference,
                tol,
            )
            .with_runtime_ms(ms)
            .with_details(json!({
                "printed_placement_value": cv(printed[idx]),
                "printed_placement_residual": (printed[idx] - reference).norm(),
            })),
        );
    }
    Ok(out)
}

pub fn integral_representation_check(
    d: DegreePair,
    p: ComplexPoint,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    let reports = batch(d.m.max(d.n), p, rule, REPRESENTATION_TOL)?;
    Ok(reports
        .into_iter()
        .find(|r| r.inputs["m"] == d.m && r.inputs["n"] == d.n)
        .expect("requested degree is in the batch"))
}

pub fn representation_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let rule = gauss_hermite_rule(REPRESENTATION_NODES)?;
    let mut ps = vec![
        ComplexPoint::origin(),
        ComplexPoint::raw(Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)),
    ];
    ps.extend(seeded_points(cfg.seed, streams::REPRESENTATION, 4, REPRESENTATION_RADIUS));
    let mut out = Vec::new();
    for p in ps {
        out.extend(batch(REPRESENTATION_MAX_DEGREE, p, &rule, cfg.tol(REPRESENTATION_TOL))?);
    }
    Ok(out)
}
