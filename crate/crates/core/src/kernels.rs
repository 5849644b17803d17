//! Hermite functions, the weight of the measure `μ_α`, and the reproducing
//! kernels built from them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eval::{Alpha, ComplexPoint, NormalizedTable};
use crate::exact::DegreePair;
use crate::numeric::CompensatedSum;

/// Default truncation for kernel series.
pub const KERNEL_ORDER: u32 = 60;
/// Default truncation for Bargmann generating series.
pub const BARGMANN_ORDER: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelArgs {
    pub z: ComplexPoint,
    pub w: ComplexPoint,
}

impl KernelArgs {
    pub fn new(z: ComplexPoint, w: ComplexPoint) -> Self {
        Self { z, w }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.w, self.z)
    }

    /// `z = w = p`.
    pub fn diagonal(p: ComplexPoint) -> Self {
        Self::new(p, p)
    }
}

/// `mantissa · e^{log_scale}` with `|mantissa| ∈ [1, e)`, or exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteFunctionValue {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl HermiteFunctionValue {
    pub const ZERO: Self = Self {
        mantissa: Complex64::new(0.0, 0.0),
        log_scale: 0.0,
    };

    /// From `ln|v|` and `arg v`.
    pub fn from_log_polar(ln_abs: f64, arg: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let log_scale = ln_abs.floor();
        Self {
            mantissa: Complex64::from_polar((ln_abs - log_scale).exp(), arg),
            log_scale,
        }
    }

    pub fn from_complex(v: Complex64) -> Self {
        if v == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self::from_log_polar(v.norm().ln(), v.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// `ln|v|`; `-∞` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().ln() + self.log_scale
        }
    }

    /// The plain value; overflows to infinity or underflows to zero when the
    /// magnitude is out of double range.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }
}

/// `h^(α)_{m,n}(z) = ((1-α)/(2√α)) λ^{m+n} e^{-z₁z₂/2} H_{m,n}(z)/√(m!n!)`.
pub fn hermite_function(d: DegreePair, a: Alpha, p: ComplexPoint) -> HermiteFunctionValue {
    let poly = NormalizedTable::for_alpha(a, p, d.m, d.n).get(d.m, d.n);
    if poly == Complex64::new(0.0, 0.0) {
        return HermiteFunctionValue::ZERO;
    }
    let half = p.product() / 2.0;
    let ln_abs = a.hermite_function_prefactor().ln() + poly.norm().ln() - half.re;
    HermiteFunctionValue::from_log_polar(ln_abs, poly.arg() - half.im)
}

/// All `h^(α)_{m,n}(p)` with `m, n ≤ order`, as plain doubles.
#[derive(Clone, Debug)]
pub struct HermiteFunctionTable {
    order: u32,
    data: Vec<Complex64>,
}

impl HermiteFunctionTable {
    pub fn new(a: Alpha, p: ComplexPoint, order: u32) -> Self {
        let table = NormalizedTable::for_alpha(a, p, order, order);
        let factor = (-p.product() / 2.0).exp() * a.hermite_function_prefactor();
        let data = DegreePair::square(order)
            .map(|d| table.get(d.m, d.n) * factor)
            .collect();
        Self { order, data }
    }

    pub fn get(&self, m: u32, n: u32) -> Complex64 {
        assert!(m <= self.order && n <= self.order, "index outside table");
        self.data[(m * (self.order + 1) + n) as usize]
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

/// `(c₊, c₋) = ((1+α²)/(4α), (1-α²)/(4α))`.
fn kernel_coefficients(a: Alpha) -> (f64, f64) {
    let al = a.value();
    ((1.0 + al * al) / (4.0 * al), (1.0 - al * al) / (4.0 * al))
}

/// Density of `μ_α` with respect to `dz/π²`.
pub fn weight_g_alpha(a: Alpha, p: ComplexPoint) -> f64 {
    weight_exponent(a, p).exp()
}

/// `ln g_α`.
pub fn weight_exponent(a: Alpha, p: ComplexPoint) -> f64 {
    let (cp, cm) = kernel_coefficients(a);
    cp * 2.0 * p.product().re - cm * (p.z1.norm_sqr() + p.z2.norm_sqr())
}

/// `(1-α²)²/(16α²)`.
pub fn kernel_prefactor(a: Alpha) -> f64 {
    let al = a.value();
    (1.0 - al * al).powi(2) / (16.0 * al * al)
}

pub fn kernel_closed(a: Alpha, k: KernelArgs) -> Complex64 {
    let (cp, cm) = kernel_coefficients(a);
    let (z, wb) = (k.z, k.w.conj());
    let exponent = -(z.product() + wb.product()) * cp + (z.z1 * wb.z1 + z.z2 * wb.z2) * cm;
    exponent.exp() * kernel_prefactor(a)
}

/// Compensated sum over `m, n ≤ order`, by ascending total degree.
fn degree_ordered_sum(order: u32, term: impl Fn(u32, u32) -> Complex64) -> Complex64 {
    let mut acc = CompensatedSum::new();
    for deg in 0..=2 * order {
        for m in deg.saturating_sub(order)..=deg.min(order) {
            acc.add(term(m, deg - m));
        }
    }
    acc.value()
}

/// `Σ_{m,n≤M} h_{m,n}(z) conj(h_{m,n}(w))`.
pub fn kernel_truncated(a: Alpha, k: KernelArgs, order: u32) -> Complex64 {
    let hz = HermiteFunctionTable::new(a, k.z, order);
    let hw = HermiteFunctionTable::new(a, k.w, order);
    degree_ordered_sum(order, |m, n| hz.get(m, n) * hw.get(m, n).conj())
}

/// `Σ_{m,n} |h_{m,n}(z)|²` in closed form.
pub fn norm_sum_closed(a: Alpha, p: ComplexPoint) -> f64 {
    let (cp, cm) = kernel_coefficients(a);
    let exponent = -cp * 2.0 * p.product().re + cm * (p.z1.norm_sqr() + p.z2.norm_sqr());
    kernel_prefactor(a) * exponent.exp()
}

/// `Σ_{m,n≤M} |h_{m,n}(z)|²`.
pub fn norm_sum_truncated(a: Alpha, p: ComplexPoint, order: u32) -> f64 {
    let h = HermiteFunctionTable::new(a, p, order);
    degree_ordered_sum(order, |m, n| Complex64::new(h.get(m, n).norm_sqr(), 0.0)).re
}

/// `Σ H̃_{m,n}(z) conj(H̃_{m,n}(w))` in closed form.
pub fn tilde_kernel_closed(a: Alpha, k: KernelArgs) -> Complex64 {
    let al = a.value();
    let pref = (1.0 + al).powi(2) / (4.0 * al);
    let c_quad = (1.0 - al).powi(2) / (4.0 * al);
    let c_mix = (1.0 + al) * (1.0 - al) / (4.0 * al);
    let (z, wb) = (k.z, k.w.conj());
    let exponent = (z.product() + wb.product()) * c_quad + (z.z1 * wb.z1 + z.z2 * wb.z2) * c_mix;
    exponent.exp() * pref
}

pub fn tilde_kernel_truncated(a: Alpha, k: KernelArgs, order: u32) -> Complex64 {
    let tz = NormalizedTable::for_alpha(a, k.z, order, order);
    let tw = NormalizedTable::for_alpha(a, k.w, order, order);
    degree_ordered_sum(order, |m, n| tz.get(m, n) * tw.get(m, n).conj())
}

/// `A(z, w̄) = ((1-α)/(2√α)) exp(-w̄₁w̄₂/2 + λ(z₁w̄₁ + z₂w̄₂) - λ² z₁z₂)`.
pub fn bargmann_kernel_a(a: Alpha, z: ComplexPoint, wbar1: Complex64, wbar2: Complex64) -> Complex64 {
    let exponent = -wbar1 * wbar2 / 2.0 + (z.z1 * wbar1 + z.z2 * wbar2) * a.lambda()
        - z.product() * a.lambda_sq();
    exponent.exp() * a.hermite_function_prefactor()
}

/// `Σ_{m,n≤M} Φ_{m,n}(z) conj(h_{m,n}(w))`, which tends to `A(z, w̄)`.
pub fn bargmann_kernel_a_truncated(a: Alpha, z: ComplexPoint, w: ComplexPoint, order: u32) -> Complex64 {
    let phi = PhiTable::new(z, order);
    let h = HermiteFunctionTable::new(a, w, order);
    degree_ordered_sum(order, |m, n| phi.get(m, n) * h.get(m, n).conj())
}

/// `Φ_{m,n}(z) = z₁ᵐ z₂ⁿ / √(m! n!)`.
pub fn phi_basis(d: DegreePair, p: ComplexPoint) -> Complex64 {
    scaled_power(p.z1, d.m) * scaled_power(p.z2, d.n)
}

/// `xᵏ/√(k!)` as a product of `x/√j`, which neither overflows early nor
/// needs a factorial.
fn scaled_power(x: Complex64, k: u32) -> Complex64 {
    (1..=k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * x / f64::from(j).sqrt())
}

#[derive(Clone, Debug)]
pub struct PhiTable {
    order: u32,
    p1: Vec<Complex64>,
    p2: Vec<Complex64>,
}

impl PhiTable {
    pub fn new(p: ComplexPoint, order: u32) -> Self {
        let powers = |x: Complex64| {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            for j in 1..=order {
                let prev = v[j as usize - 1];
                v.push(prev * x / f64::from(j).sqrt());
            }
            v
        };
        Self {
            order,
            p1: powers(p.z1),
            p2: powers(p.z2),
        }
    }

    pub fn get(&self, m: u32, n: u32) -> Complex64 {
        assert!(m <= self.order && n <= self.order, "index outside table");
        self.p1[m as usize] * self.p2[n as usize]
    }
}

/// `exp(z₁w̄₁ + z₂w̄₂)`.
pub fn bargmann_kernel_b2(k: KernelArgs) -> Complex64 {
    (k.z.z1 * k.w.z1.conj() + k.z.z2 * k.w.z2.conj()).exp()
}

pub fn bargmann_kernel_b2_truncated(k: KernelArgs, order: u32) -> Complex64 {
    let pz = PhiTable::new(k.z, order);
    let pw = PhiTable::new(k.w, order);
    degree_ordered_sum(order, |m, n| pz.get(m, n) * pw.get(m, n).conj())
}

/// `G[i][j] = K(pᵢ; pⱼ)`.
pub fn gram_matrix(a: Alpha, points: &[ComplexPoint]) -> DMatrix<Complex64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| kernel_closed(a, KernelArgs::new(points[i], points[j])))
}

/// Smallest eigenvalue and trace of the (Hermitian) Gram matrix.
pub fn gram_spectrum(a: Alpha, points: &[ComplexPoint]) -> (f64, f64) {
    let g = gram_matrix(a, points);
    // Symmetrize away rounding so the Hermitian solver sees an exact Hermitian input.
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let trace = h.diagonal().iter().map(|x| x.re).sum();
    let eig = h.symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    (min, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half() -> Alpha {
        Alpha::new(0.5).unwrap()
    }

    #[test]
    fn hermite_function_examples() {
        let a = half();
        let h = hermite_function(DegreePair::new(0, 0), a, ComplexPoint::origin());
        assert!((h.value() - c(2f64.sqrt() / 4.0, 0.0)).norm() < 1e-15);
        let m = h.mantissa.norm();
        assert!((1.0..std::f64::consts::E).contains(&m) || h.is_zero());
        assert!(hermite_function(DegreePair::new(1, 1), a, ComplexPoint::real(1.0, 1.0)).is_zero());
        for n in 0..6 {
            let h = hermite_function(DegreePair::new(n, n), a, ComplexPoint::origin()).value();
            let expect = a.hermite_function_prefactor() * a.lambda_sq().powi(n as i32) * (-1f64).powi(n as i32);
            assert!((h - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn log_scale_survives_overflow() {
        let a = Alpha::new(0.5).unwrap();
        // e^{-z₁z₂/2} with z₁z₂ = -2000 is far beyond double range.
        let p = ComplexPoint::real(40.0, -50.0);
        let h = hermite_function(DegreePair::new(0, 0), a, p);
        assert!((h.ln_abs() - (a.hermite_function_prefactor().ln() + 1000.0)).abs() < 1e-10);
        assert!(h.value().re.is_infinite());
    }

    #[test]
    fn weight_examples() {
        let a = half();
        assert_eq!(weight_g_alpha(a, ComplexPoint::origin()), 1.0);
        assert!((weight_g_alpha(a, ComplexPoint::real(1.0, 1.0)) - 0.5f64.exp()).abs() < 1e-15);
        assert!((weight_g_alpha(a, ComplexPoint::real(1.0, -1.0)) - (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn kernel_origin_values() {
        let a = half();
        let o = KernelArgs::diagonal(ComplexPoint::origin());
        assert!((kernel_closed(a, o) - c(0.140625, 0.0)).norm() < 1e-16);
        assert!((kernel_truncated(a, o, 0) - c(0.125, 0.0)).norm() < 1e-16);
        assert!((kernel_truncated(a, o, KERNEL_ORDER) - c(0.140625, 0.0)).norm() < 1e-15);
        assert!((norm_sum_closed(a, ComplexPoint::origin()) - 0.140625).abs() < 1e-16);
        assert!((tilde_kernel_closed(a, o) - c(1.125, 0.0)).norm() < 1e-15);
        assert!((tilde_kernel_truncated(a, o, 80) - c(1.125, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn kernel_against_series() {
        let a = half();
        let k = KernelArgs::new(ComplexPoint::real(1.0, 1.0), ComplexPoint::origin());
        let closed = kernel_closed(a, k);
        assert!((kernel_truncated(a, k, KERNEL_ORDER) - closed).norm() < 1e-10 * closed.norm());

        let a = Alpha::new(0.25).unwrap();
        let p = ComplexPoint::new(c(1.0, 1.0), c(0.0, 1.0)).unwrap();
        let closed = norm_sum_closed(a, p);
        assert!((norm_sum_truncated(a, p, 80) - closed).abs() < 1e-9 * closed);
        assert!((kernel_closed(a, KernelArgs::diagonal(p)).re - closed).abs() < 1e-12 * closed);
    }

    #[test]
    fn bargmann_examples() {
        let a = half();
        let o = ComplexPoint::origin();
        assert!((bargmann_kernel_a(a, o, c(0.0, 0.0), c(0.0, 0.0)) - c(2f64.sqrt() / 4.0, 0.0)).norm() < 1e-16);
        let w = ComplexPoint::new(c(0.3, -0.7), c(1.1, 0.2)).unwrap();
        let z = ComplexPoint::new(c(-0.5, 0.4), c(0.9, 0.6)).unwrap();
        let direct = bargmann_kernel_a(a, z, w.z1.conj(), w.z2.conj());
        let series = bargmann_kernel_a_truncated(a, z, w, BARGMANN_ORDER);
        assert!((direct - series).norm() < 1e-9 * direct.norm());
        let at_zero = bargmann_kernel_a(a, o, w.z1.conj(), w.z2.conj());
        let expect = (-w.z1.conj() * w.z2.conj() / 2.0).exp() * a.hermite_function_prefactor();
        assert!((at_zero - expect).norm() < 1e-15);

        assert_eq!(phi_basis(DegreePair::new(0, 0), z), c(1.0, 0.0));
        assert!((phi_basis(DegreePair::new(2, 0), ComplexPoint::real(2.0, 0.0)) - c(2.0 * 2f64.sqrt(), 0.0)).norm() < 1e-15);
        let ii = ComplexPoint::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
        assert!((phi_basis(DegreePair::new(1, 1), ii) - c(-1.0, 0.0)).norm() < 1e-15);

        assert_eq!(bargmann_kernel_b2(KernelArgs::diagonal(o)), c(1.0, 0.0));
        let e = bargmann_kernel_b2(KernelArgs::diagonal(ComplexPoint::real(1.0, 0.0)));
        assert!((e - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
        let k = KernelArgs::new(z, w);
        let b = bargmann_kernel_b2(k);
        assert!((bargmann_kernel_b2_truncated(k, BARGMANN_ORDER) - b).norm() < 1e-10 * b.norm());
    }

    #[test]
    fn gram_is_positive_semidefinite() {
        let a = Alpha::new(0.75).unwrap();
        let pts: Vec<ComplexPoint> = (0..6)
            .map(|k| {
                let t = f64::from(k);
                ComplexPoint::new(c(0.3 * t - 0.8, 0.2 * t), c(0.5 - 0.1 * t, -0.3 * t + 0.4)).unwrap()
            })
            .collect();
        let (min, trace) = gram_spectrum(a, &pts);
        assert!(min >= -1e-10 * trace);
    }
}
