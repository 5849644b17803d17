//! Small numerical helpers shared across modules.

use num_complex::Complex64;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.carry.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.carry.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum(s: f64, x: f64, carry: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *carry += (s - t) + x;
    } else {
        *carry += (x - t) + s;
    }
    t
}

impl std::iter::FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln(n!)` by direct summation.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// `n!` as a float (exact up to 22!, overflowing past 170!).
pub fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

pub fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// `|a - b| <= max(abs, rel * max(|a|, |b|))`.
pub fn close(a: Complex64, b: Complex64, abs: f64, rel: f64) -> bool {
    (a - b).norm() <= abs.max(rel * a.norm().max(b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(Complex64::new(1e16, 0.0));
        for _ in 0..10 {
            s.add(Complex64::new(1.0, 0.0));
        }
        s.add(Complex64::new(-1e16, 0.0));
        assert_eq!(s.value().re, 10.0);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial_f64(5), 120.0);
        assert!((ln_factorial(10) - 3_628_800f64.ln()).abs() < 1e-13);
        assert_eq!(binomial_f64(6, 3), 20.0);
    }
}
