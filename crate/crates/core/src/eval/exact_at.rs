//! Exact value of `H_{m,n}` at a double-precision point.
//!
//! Every finite double is an integer times a power of two, so the point is
//! `(Z₁, Z₂)/2^e` with Gaussian integers `Z₁, Z₂`, and the finite sum can be
//! formed in integer arithmetic with one rounding at the end.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, One, Zero};

use super::ComplexPoint;
use crate::exact::rational::ratio_to_f64;
use crate::exact::DegreePair;

#[derive(Clone, Debug, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn one() -> Self {
        Self { re: BigInt::one(), im: BigInt::zero() }
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, k: &BigInt) -> GaussInt {
        GaussInt { re: &self.re * k, im: &self.im * k }
    }

    fn add_assign(&mut self, o: &GaussInt) {
        self.re += &o.re;
        self.im += &o.im;
    }

    fn powers(&self, n: u32) -> Vec<GaussInt> {
        let mut out = vec![GaussInt::one()];
        for k in 0..n as usize {
            let next = out[k].mul(self);
            out.push(next);
        }
        out
    }
}

/// `x = sign · mantissa · 2^exp`, as `(signed mantissa, exp)`.
fn decode(x: f64) -> (BigInt, i32) {
    let (mantissa, exp, sign) = x.integer_decode();
    (BigInt::from(mantissa) * i32::from(sign), i32::from(exp))
}

/// Components as Gaussian integers over a shared `2^e`.
fn dyadic(p: ComplexPoint) -> (GaussInt, GaussInt, u32) {
    let parts = [p.z1.re, p.z1.im, p.z2.re, p.z2.im].map(decode);
    let e = parts.iter().map(|(_, x)| (-x).max(0)).max().unwrap_or(0);
    let lift = |(m, x): &(BigInt, i32)| m << ((x + e) as usize);
    let [a, b, c, d] = parts.each_ref().map(lift);
    (GaussInt { re: a, im: b }, GaussInt { re: c, im: d }, e as u32)
}

/// `H_{m,n}(z₁, z₂)` rounded once to double precision; `None` for
/// non-finite input.
pub fn hermite_exact_at(d: DegreePair, p: ComplexPoint) -> Option<Complex64> {
    if !(p.z1.is_finite() && p.z2.is_finite()) {
        return None;
    }
    let (z1, z2, e) = dyadic(p);
    let p1 = z1.powers(d.m);
    let p2 = z2.powers(d.n);
    // H = Σ_k c_k Z₁^{m-k} Z₂^{n-k} / 2^{e(m+n-2k)}; scale by 2^{e(m+n)}.
    let mut acc = GaussInt { re: BigInt::zero(), im: BigInt::zero() };
    let mut coeff = BigInt::one();
    for k in 0..=d.m.min(d.n) {
        if k > 0 {
            coeff = -coeff * BigInt::from((d.m - k + 1) * (d.n - k + 1)) / BigInt::from(k);
        }
        let weight = &coeff << (2 * e * k) as usize;
        let term = p1[(d.m - k) as usize].mul(&p2[(d.n - k) as usize]).scale(&weight);
        acc.add_assign(&term);
    }
    let den = BigInt::one() << (e * d.total()) as usize;
    Some(Complex64::new(
        ratio_to_f64(&BigRational::new(acc.re, den.clone())),
        ratio_to_f64(&BigRational::new(acc.im, den)),
    ))
}
