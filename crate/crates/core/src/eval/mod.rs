//! Floating-point evaluation of `H_{m,n}` and its normalized variants.
//!
//! Four evaluators are provided for the plain polynomial (direct sum,
//! two-term recurrence table, one-variable Hermite assembly, Laguerre form on
//! the conjugate diagonal). The normalized family
//! `H̃^(α)_{m,n} = λ^{m+n} H_{m,n} / √(m! n!)` is always computed with the
//! rescaled recurrence, which never forms a factorial.

pub mod checks;
mod exact_at;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use exact_at::hermite_exact_at;

use crate::error::{Error, Result};
use crate::exact::DegreePair;
use crate::numeric::{factorial_f64, CompensatedSum};

pub use checks::{
    bound_check, bound_sweep, default_steps, generating_function_check, partial_generating_check,
    scaling_limit_check, tilde_limit_check, PartialSum,
};

/// A point `(z₁, z₂) ∈ ℂ²` with finite components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl ComplexPoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        if !(z1.is_finite() && z2.is_finite()) {
            return Err(Error::Domain(format!("non-finite point ({z1}, {z2})")));
        }
        Ok(Self { z1, z2 })
    }

    /// Unchecked constructor for internal grids whose finiteness is known.
    pub(crate) const fn raw(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn origin() -> Self {
        Self::raw(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn real(x1: f64, x2: f64) -> Self {
        Self::raw(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    /// `z₁ = r e^{iθ}`, `z₂ = r e^{-iθ}`.
    pub fn polar(r: f64, theta: f64) -> Self {
        Self::raw(Complex64::from_polar(r, theta), Complex64::from_polar(r, -theta))
    }

    /// `(z, z̄)`.
    pub fn diagonal(z: Complex64) -> Self {
        Self::raw(z, z.conj())
    }

    pub fn conj(&self) -> Self {
        Self::raw(self.z1.conj(), self.z2.conj())
    }

    pub fn swapped(&self) -> Self {
        Self::raw(self.z2, self.z1)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::raw(self.z1 * s, self.z2 * s)
    }

    pub fn product(&self) -> Complex64 {
        self.z1 * self.z2
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (self.z2 - self.z1.conj()).norm() <= tol * self.z1.norm().max(1.0)
    }
}

/// Deformation parameter `α ∈ (0, 1)` with `λ = √((1-α)/(1+α))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha {
    alpha: f64,
    lambda: f64,
    lambda_sq: f64,
}

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie strictly inside (0, 1), got {alpha}"
            )));
        }
        let lambda_sq = (1.0 - alpha) / (1.0 + alpha);
        let lambda = lambda_sq.sqrt();
        debug_assert!(lambda > 0.0 && lambda < 1.0);
        Ok(Self {
            alpha,
            lambda,
            lambda_sq,
        })
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_sq(&self) -> f64 {
        self.lambda_sq
    }

    pub fn sqrt(&self) -> f64 {
        self.alpha.sqrt()
    }

    /// `(1-α)/(2√α)`, the normalization of the Hermite functions.
    pub fn hermite_function_prefactor(&self) -> f64 {
        (1.0 - self.alpha) / (2.0 * self.alpha.sqrt())
    }

    /// `4α/(1-α)²`.
    pub fn orthogonality_constant(&self) -> f64 {
        4.0 * self.alpha / (1.0 - self.alpha).powi(2)
    }

    /// `z₁ = (u₁ - √α u₂)/√(1-α)`, `z₂ = (ū₁ + √α ū₂)/√(1-α)`.
    pub fn substitute(&self, u1: Complex64, u2: Complex64) -> ComplexPoint {
        let s = self.alpha.sqrt();
        let t = (1.0 - self.alpha).sqrt();
        ComplexPoint::raw((u1 - u2 * s) / t, (u1.conj() + u2.conj() * s) / t)
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.alpha
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    /// Finite sum over `k`.
    Direct,
    /// Two-term recurrence table.
    Recurrence,
    /// One-variable Hermite polynomials at `(z₁+z₂)/2` and `(z₁-z₂)/(2i)`.
    Hermite1d,
    /// Laguerre form; requires `z₂ = z̄₁`.
    LaguerreDiagonal,
}

impl EvalMethod {
    pub const ALL: [EvalMethod; 4] = [
        EvalMethod::Direct,
        EvalMethod::Recurrence,
        EvalMethod::Hermite1d,
        EvalMethod::LaguerreDiagonal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EvalMethod::Direct => "direct",
            EvalMethod::Recurrence => "recurrence",
            EvalMethod::Hermite1d => "hermite1d",
            EvalMethod::LaguerreDiagonal => "laguerre_diagonal",
        }
    }
}

impl std::str::FromStr for EvalMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method {s:?}")))
    }
}

/// Relative tolerance on `|z₂ - z̄₁|` for the Laguerre evaluator.
pub const DIAGONAL_TOL: f64 = 1e-12;

pub fn eval_hermite(d: DegreePair, p: ComplexPoint, method: EvalMethod) -> Result<Complex64> {
    match method {
        EvalMethod::Direct => Ok(eval_direct(d, p)),
        EvalMethod::Recurrence => Ok(eval_recurrence(d, p)),
        EvalMethod::Hermite1d => Ok(eval_via_1d(d, p)),
        EvalMethod::LaguerreDiagonal => {
            if !p.is_diagonal(DIAGONAL_TOL) {
                return Err(Error::Domain(format!(
                    "laguerre_diagonal needs z2 = conj(z1), got ({}, {})",
                    p.z1, p.z2
                )));
            }
            Ok(eval_laguerre_diagonal(d, p))
        }
    }
}

fn eval_direct(d: DegreePair, p: ComplexPoint) -> Complex64 {
    let mut coeff = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let (r1, r2) = (p.z1.norm(), p.z2.norm());
    for k in 0..=d.m.min(d.n) {
        if k > 0 {
            coeff *= -f64::from((d.m - k + 1) * (d.n - k + 1)) / f64::from(k);
        }
        acc += p.z1.powu(d.m - k) * p.z2.powu(d.n - k) * coeff;
        scale += coeff.abs() * r1.powi((d.m - k) as i32) * r2.powi((d.n - k) as i32);
    }
    certified(d, p, acc, scale)
}

/// Row `H_{i,0..=n}` advanced in `i` by `H_{i+1,j} = z₁ H_{i,j} - j H_{i,j-1}`,
/// with the same recurrence on magnitudes for the error estimate.
fn eval_recurrence(d: DegreePair, p: ComplexPoint) -> Complex64 {
    let n = d.n as usize;
    let (r1, r2) = (p.z1.norm(), p.z2.norm());
    let mut row = Vec::with_capacity(n + 1);
    let mut mag = Vec::with_capacity(n + 1);
    row.push(Complex64::new(1.0, 0.0));
    mag.push(1.0);
    for j in 1..=n {
        row.push(row[j - 1] * p.z2);
        mag.push(mag[j - 1] * r2);
    }
    for _ in 0..d.m {
        for j in (0..=n).rev() {
            let (lower, lower_mag) = if j > 0 {
                (row[j - 1] * j as f64, mag[j - 1] * j as f64)
            } else {
                (Complex64::new(0.0, 0.0), 0.0)
            };
            row[j] = p.z1 * row[j] - lower;
            mag[j] = r1 * mag[j] + lower_mag;
        }
    }
    certified(d, p, row[n], mag[n])
}

/// Relative accuracy every evaluator guarantees (to first order). When the
/// running estimate `scale · (m+n+2) · ε` exceeds it, the value is recomputed
/// exactly at the given point and rounded once.
pub const ACCURACY_TARGET: f64 = 1e-12;

fn certified(d: DegreePair, p: ComplexPoint, value: Complex64, scale: f64) -> Complex64 {
    let bound = scale * f64::from(d.total() + 2) * f64::EPSILON;
    if bound <= ACCURACY_TARGET * value.norm() {
        return value;
    }
    hermite_exact_at(d, p).unwrap_or(value)
}

/// `Ĥ_k(x) = H_k(x)/2^k` for `k = 0..=n` via `Ĥ_{k+1} = x Ĥ_k - (k/2) Ĥ_{k-1}`.
fn scaled_hermite1d(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        let next = x * out[k] - out[k - 1] * (k as f64 / 2.0);
        out.push(next);
    }
    out
}

/// Magnitudes `M_{k+1} = |x| M_k + (k/2) M_{k-1}` dominating every partial
/// term of the recurrence above.
fn scaled_hermite1d_magnitudes(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        out.push(x * out[k] + out[k - 1] * (k as f64 / 2.0));
    }
    out
}

/// Coefficients `c_j = Σ_{k+l=j} C(m,k) C(n,l) i^{m-k} (-i)^{n-l}` as exact
/// Gaussian integers, so the only rounding left is in the final sum over `j`.
fn via_1d_coefficients(d: DegreePair) -> Vec<(i128, i128)> {
    let total = d.total() as usize;
    let mut c = vec![(0i128, 0i128); total + 1];
    let binom = |n: u32, k: u32| -> i128 { (0..k).fold(1i128, |acc, t| acc * i128::from(n - t) / i128::from(t + 1)) };
    for k in 0..=d.m {
        for l in 0..=d.n {
            let weight = binom(d.m, k) * binom(d.n, l);
            // i^{m-k} (-i)^{n-l} = i^{(m-k) + 3(n-l)}
            let (re, im) = match ((d.m - k) + 3 * (d.n - l)) % 4 {
                0 => (weight, 0),
                1 => (0, weight),
                2 => (-weight, 0),
                _ => (0, -weight),
            };
            let slot = &mut c[(k + l) as usize];
            slot.0 += re;
            slot.1 += im;
        }
    }
    c
}


/// `H_{m,n}` from one-variable Hermite polynomials of `(z₁+z₂)/2` and
/// `(z₁-z₂)/(2i)`. The final sum can cancel badly (e.g. `H_{m,0} = z₁^m` with
/// `|z₁|` small and `|z₂|` large).
fn eval_via_1d(d: DegreePair, p: ComplexPoint) -> Complex64 {
    let total = d.total() as usize;
    let a = (p.z1 + p.z2) / 2.0;
    let b = (p.z1 - p.z2) / Complex64::new(0.0, 2.0);
    let ha = scaled_hermite1d(a, total);
    let hb = scaled_hermite1d(b, total);
    let ma = scaled_hermite1d_magnitudes(a.norm(), total);
    let mb = scaled_hermite1d_magnitudes(b.norm(), total);
    let coeffs = via_1d_coefficients(d);
    let mut sum = CompensatedSum::new();
    let mut scale = 0.0;
    for (j, &(re, im)) in coeffs.iter().enumerate() {
        if (re, im) == (0, 0) {
            continue;
        }
        let c = Complex64::new(re as f64, im as f64);
        sum.add(c * ha[j] * hb[total - j]);
        scale += c.norm() * ma[j] * mb[total - j];
    }
    certified(d, p, sum.value(), scale)
}

/// Associated Laguerre `L_n^{(k)}(x)` by the three-term recurrence.
pub fn laguerre_f64(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Dominating magnitudes for [`laguerre_f64`] at `x ≥ 0`.
fn laguerre_magnitude(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k + x;
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k + x) * cur + (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_{m,n}(z, z̄) = (-1)^s s! z^{m-n} L_s^{(m-n)}(|z|²)` for `m ≥ n = s` (and
/// the conjugate form otherwise). The Laguerre recurrence cancels for `|z|²`
/// inside its oscillatory range; past the error target it is rerun exactly
/// on `|z|²` of the given point.
fn eval_laguerre_diagonal(d: DegreePair, p: ComplexPoint) -> Complex64 {
    let r2 = p.z1.norm_sqr();
    let (small, gap, phase) = if d.m >= d.n {
        (d.n, d.m - d.n, p.z1)
    } else {
        (d.m, d.n - d.m, p.z2)
    };
    let sign = if small % 2 == 0 { 1.0 } else { -1.0 };
    let lag = laguerre_f64(small, gap, r2);
    let value = phase.powu(gap) * (sign * factorial_f64(small) * lag);
    let bound = laguerre_magnitude(small, gap, r2) * f64::from(2 * small + 4) * f64::EPSILON;
    if bound <= ACCURACY_TARGET * lag.abs() {
        return value;
    }
    hermite_exact_at(d, p).unwrap_or(value)
}

/// `H̃_{i,j} = ρ^{i+j} H_{i,j} / √(i! j!)` for all `i ≤ m_max`, `j ≤ n_max`,
/// filled by the overflow-free recurrence
/// `H̃_{i+1,j} = (ρ z₁ H̃_{i,j} - ρ² √j H̃_{i,j-1}) / √(i+1)`.
///
/// `ρ = λ` gives the α-normalized family; `ρ = 1` gives `H/√(m!n!)`.
#[derive(Clone, Debug)]
pub struct NormalizedTable {
    m_max: usize,
    n_max: usize,
    data: Vec<Complex64>,
}

impl NormalizedTable {
    pub fn new(rho: f64, p: ComplexPoint, m_max: u32, n_max: u32) -> Self {
        let (mm, nn) = (m_max as usize, n_max as usize);
        let w = nn + 1;
        let mut data = vec![Complex64::new(0.0, 0.0); (mm + 1) * w];
        let rho_sq = rho * rho;
        data[0] = Complex64::new(1.0, 0.0);
        for j in 1..=nn {
            data[j] = data[j - 1] * p.z2 * (rho / (j as f64).sqrt());
        }
        for i in 0..mm {
            let inv = 1.0 / ((i + 1) as f64).sqrt();
            for j in 0..=nn {
                let mut v = data[i * w + j] * p.z1 * rho;
                if j > 0 {
                    v -= data[i * w + j - 1] * (rho_sq * (j as f64).sqrt());
                }
                data[(i + 1) * w + j] = v * inv;
            }
        }
        Self {
            m_max: mm,
            n_max: nn,
            data,
        }
    }

    pub fn for_alpha(a: Alpha, p: ComplexPoint, m_max: u32, n_max: u32) -> Self {
        Self::new(a.lambda(), p, m_max, n_max)
    }

    pub fn get(&self, m: u32, n: u32) -> Complex64 {
        let (m, n) = (m as usize, n as usize);
        assert!(m <= self.m_max && n <= self.n_max, "index outside table");
        self.data[m * (self.n_max + 1) + n]
    }

    pub fn m_max(&self) -> u32 {
        self.m_max as u32
    }

    pub fn n_max(&self) -> u32 {
        self.n_max as u32
    }
}

/// `H̃^(α)_{m,n}(z₁,z₂) = λ^{m+n} H_{m,n}(z₁,z₂) / √(m! n!)`.
pub fn eval_hermite_normalized(d: DegreePair, a: Alpha, p: ComplexPoint) -> Complex64 {
    NormalizedTable::for_alpha(a, p, d.m, d.n).get(d.m, d.n)
}

/// `H_{m,n}(z₁,z₂) / √(m! n!)`, the `λ = 1` member of the same family.
pub fn eval_hermite_unit_normalized(d: DegreePair, p: ComplexPoint) -> Complex64 {
    NormalizedTable::new(1.0, p, d.m, d.n).get(d.m, d.n)
}
