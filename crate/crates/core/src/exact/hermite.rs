//! Exact constructions of `H_{m,n}` and the classical one-variable families
//! it is built from.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{BiPoly, LinearForm, UniPoly};
use super::rational::GaussianRational;

/// Bi-degree indices `(m, n)` of `H_{m,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreePair {
    pub m: u32,
    pub n: u32,
}

impl DegreePair {
    pub const fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn total(&self) -> u32 {
        self.m + self.n
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.n, self.m)
    }

    /// All pairs with `m, n ≤ max`, row-major.
    pub fn square(max: u32) -> impl Iterator<Item = DegreePair> {
        (0..=max).flat_map(move |m| (0..=max).map(move |n| DegreePair::new(m, n)))
    }

    /// All pairs with `m + n ≤ max`, by total degree then `m`.
    pub fn triangle(max: u32) -> impl Iterator<Item = DegreePair> {
        (0..=max).flat_map(move |t| (0..=t).map(move |m| DegreePair::new(m, t - m)))
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

fn gr(n: BigInt) -> GaussianRational {
    GaussianRational::from_bigint(n)
}

/// `H_{m,n} = Σ_k C(m,k) C(n,k) (-1)^k k! X₁^{m-k} X₂^{n-k}`.
pub fn hermite_exact_direct(d: DegreePair) -> BiPoly {
    let mut p = BiPoly::zero();
    for k in 0..=d.m.min(d.n) {
        let mut c = binomial(d.m, k) * binomial(d.n, k) * factorial(k);
        if k % 2 == 1 {
            c = -c;
        }
        p = p + BiPoly::monomial(d.m - k, d.n - k, gr(c));
    }
    p
}

/// Builds `H_{m,n}` from `H_{0,0} = 1` with the two-term ladder
/// `H_{i+1,j} = X₁ H_{i,j} - j H_{i,j-1}`; the first row is `H_{0,j} = X₂^j`.
pub fn hermite_exact_recurrence(d: DegreePair) -> BiPoly {
    let n = d.n as usize;
    let mut row: Vec<BiPoly> = Vec::with_capacity(n + 1);
    row.push(BiPoly::one());
    for j in 1..=n {
        let next = &row[j - 1] * &BiPoly::x2();
        row.push(next);
    }
    for _ in 0..d.m {
        let mut next = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut h = &BiPoly::x1() * &row[j];
            if j > 0 {
                h = h - row[j - 1].scale(&GaussianRational::from_integer(j as i64));
            }
            next.push(h);
        }
        row = next;
    }
    row.swap_remove(n)
}

/// Physicists' Hermite `H_n`: `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite1d_exact(n: u32) -> UniPoly {
    hermite1d_family(n).pop().unwrap_or_else(UniPoly::one)
}

/// `[H_0, …, H_n]`.
pub fn hermite1d_family(n: u32) -> Vec<UniPoly> {
    let two_x = UniPoly::linear(GaussianRational::from_integer(0), GaussianRational::from_integer(2));
    let mut out = vec![UniPoly::one()];
    if n >= 1 {
        out.push(two_x.clone());
    }
    for k in 1..n as usize {
        let a = &two_x * &out[k];
        let b = out[k - 1].scale(&GaussianRational::from_integer(2 * k as i64));
        out.push(&a - &b);
    }
    out
}

/// Associated Laguerre `L_n^{(k)}` by
/// `(j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}`.
pub fn laguerre_exact(n: u32, k: u32) -> UniPoly {
    let k = i64::from(k);
    let mut prev = UniPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = UniPoly::linear(GaussianRational::from_integer(k + 1), GaussianRational::from_integer(-1));
    for j in 1..i64::from(n) {
        let lin = UniPoly::linear(
            GaussianRational::from_integer(2 * j + 1 + k),
            GaussianRational::from_integer(-1),
        );
        let num = &(&lin * &cur) - &prev.scale(&GaussianRational::from_integer(j + k));
        let next = num.scale(&GaussianRational::from_ratio(1, j + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_{m,n}` assembled from one-variable Hermite polynomials evaluated at
/// `(X₁+X₂)/2` and `(X₁-X₂)/(2i)`.
pub fn hermite_exact_via_1d(d: DegreePair) -> BiPoly {
    let total = d.total();
    let half = GaussianRational::from_ratio(1, 2);
    let minus_half_i = GaussianRational::new(BigRational::from_integer(0.into()), BigRational::new((-1).into(), 2.into()));
    let sum_arg = LinearForm::new(half.clone(), half).to_poly();
    let diff_arg = LinearForm::new(minus_half_i.clone(), -minus_half_i).to_poly();
    let family = hermite1d_family(total);
    let at_sum: Vec<BiPoly> = family.iter().map(|h| h.compose(&sum_arg)).collect();
    let at_diff: Vec<BiPoly> = family.iter().map(|h| h.compose(&diff_arg)).collect();

    let mut acc = BiPoly::zero();
    for k in 0..=d.m {
        for l in 0..=d.n {
            let c = gr(binomial(d.m, k) * binomial(d.n, l))
                * GaussianRational::i_pow(i64::from(d.m - k))
                * GaussianRational::i_pow(-i64::from(d.n - l));
            let j = (k + l) as usize;
            acc = acc + (&at_sum[j] * &at_diff[total as usize - j]).scale(&c);
        }
    }
    acc.scale(&GaussianRational::from_real(BigRational::new(
        1.into(),
        BigInt::from(2).pow(total),
    )))
}

/// `H^♮_{m,n}` expanded directly from its triple sum; the coefficients carry
/// powers of `i`.
pub fn natural_hermite_exact(d: DegreePair) -> BiPoly {
    let (m, n) = (d.m, d.n);
    let mn = factorial(m) * factorial(n);
    let mut acc = BiPoly::zero();
    for k in 0..=m.min(n) {
        for i in 0..=m - k {
            for j in 0..=n - k {
                let den = factorial(k) * factorial(i) * factorial(j) * factorial(m - k - i) * factorial(n - k - j);
                let c = GaussianRational::from_real(BigRational::new(mn.clone(), den))
                    * GaussianRational::i_pow(i64::from(m + k) - i64::from(i + j));
                acc = acc + BiPoly::monomial(n - k - j + i, m - k - i + j, c);
            }
        }
    }
    acc
}

/// `H_{m,n}` with the convention `H := 0` for negative indices.
pub fn hermite_or_zero(m: i64, n: i64) -> BiPoly {
    if m < 0 || n < 0 {
        BiPoly::zero()
    } else {
        hermite_exact_direct(DegreePair::new(m as u32, n as u32))
    }
}

/// Convenience: `X₁ ↦ Y₁ + iY₂`, `X₂ ↦ Y₁ - iY₂`.
pub fn conjugate_pair_forms() -> (LinearForm, LinearForm) {
    let one = GaussianRational::one();
    let i = GaussianRational::i();
    (
        LinearForm::new(one.clone(), i.clone()),
        LinearForm::new(one, -i),
    )
}

/// Convenience: `Y₁ ↦ (X₁+X₂)/2`, `Y₂ ↦ (X₁-X₂)/(2i)`.
pub fn inverse_pair_forms() -> (LinearForm, LinearForm) {
    let half = GaussianRational::from_ratio(1, 2);
    let minus_half_i = GaussianRational::new(BigRational::from_integer(0.into()), BigRational::new((-1).into(), 2.into()));
    (
        LinearForm::new(half.clone(), half),
        LinearForm::new(minus_half_i.clone(), -minus_half_i),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Var;

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn mono(e1: u32, e2: u32, c: i64) -> BiPoly {
        BiPoly::monomial(e1, e2, int(c))
    }

    #[test]
    fn direct_small_cases() {
        assert_eq!(hermite_exact_direct(DegreePair::new(0, 0)), BiPoly::one());
        assert_eq!(hermite_exact_direct(DegreePair::new(1, 1)), mono(1, 1, 1) + mono(0, 0, -1));
        assert_eq!(hermite_exact_direct(DegreePair::new(2, 1)), mono(2, 1, 1) + mono(1, 0, -2));
    }

    #[test]
    fn derivative_of_h21() {
        let d = hermite_exact_direct(DegreePair::new(2, 1)).diff(Var::Z1);
        let h11 = hermite_exact_direct(DegreePair::new(1, 1));
        assert_eq!(d, h11.scale(&int(2)));
    }

    #[test]
    fn h11_on_conjugate_pair() {
        let (l1, l2) = conjugate_pair_forms();
        let p = hermite_exact_direct(DegreePair::new(1, 1)).subst_linear(&l1, &l2);
        assert_eq!(p, mono(2, 0, 1) + mono(0, 2, 1) + mono(0, 0, -1));
    }

    #[test]
    fn recurrence_small_cases() {
        assert_eq!(hermite_exact_recurrence(DegreePair::new(1, 0)), BiPoly::x1());
        assert_eq!(hermite_exact_recurrence(DegreePair::new(1, 1)), mono(1, 1, 1) + mono(0, 0, -1));
        assert_eq!(
            hermite_exact_recurrence(DegreePair::new(3, 2)),
            hermite_exact_direct(DegreePair::new(3, 2))
        );
    }

    #[test]
    fn via_1d_small_cases() {
        assert_eq!(hermite_exact_via_1d(DegreePair::new(0, 0)), BiPoly::one());
        assert_eq!(hermite_exact_via_1d(DegreePair::new(1, 0)), BiPoly::x1());
        assert_eq!(
            hermite_exact_via_1d(DegreePair::new(2, 2)),
            hermite_exact_direct(DegreePair::new(2, 2))
        );
    }

    #[test]
    fn one_variable_hermite() {
        assert_eq!(hermite1d_exact(0), UniPoly::one());
        assert_eq!(hermite1d_exact(2), UniPoly::new(vec![int(-2), int(0), int(4)]));
        assert_eq!(hermite1d_exact(3), UniPoly::new(vec![int(0), int(-12), int(0), int(8)]));
    }

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre_exact(0, 3), UniPoly::one());
        assert_eq!(laguerre_exact(1, 0), UniPoly::linear(int(1), int(-1)));
        assert_eq!(laguerre_exact(1, 2), UniPoly::linear(int(3), int(-1)));
        // L_2 = (x^2 - 4x + 2)/2
        let half = GaussianRational::from_ratio(1, 2);
        assert_eq!(laguerre_exact(2, 0), UniPoly::new(vec![int(1), int(-2), half]));
    }

    #[test]
    fn natural_small_cases() {
        assert_eq!(natural_hermite_exact(DegreePair::new(0, 0)), BiPoly::one());
        let i = GaussianRational::i();
        assert_eq!(
            natural_hermite_exact(DegreePair::new(1, 0)),
            BiPoly::x1() + BiPoly::monomial(0, 1, i)
        );
        assert_eq!(
            natural_hermite_exact(DegreePair::new(1, 1)),
            mono(2, 0, 1) + mono(0, 2, 1) + mono(0, 0, -1)
        );
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(10), BigInt::from(3_628_800));
    }
}
