//! Exact checks of the algebraic identities satisfied by `H_{m,n}`.
//!
//! Every function here decides an identity by exact polynomial (or exact
//! scalar) equality; there are no tolerances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::hermite::{
    binomial, conjugate_pair_forms, factorial, hermite1d_family, hermite_exact_direct,
    hermite_or_zero, inverse_pair_forms, laguerre_exact, natural_hermite_exact, DegreePair,
};
use super::poly::{BiPoly, ExpWeightedPoly, LinearForm, Var, WeightSign};
use super::rational::GaussianRational;

fn sign(k: u32) -> GaussianRational {
    if k.is_multiple_of(2) {
        GaussianRational::one()
    } else {
        -GaussianRational::one()
    }
}

/// `H^♮_{m,n}(u,v) = H_{m,n}(u+iv, u-iv)` and
/// `H_{m,n}(z₁,z₂) = H^♮_{m,n}((z₁+z₂)/2, (z₁-z₂)/(2i))`.
pub fn check_natural_link(d: DegreePair) -> bool {
    let h = hermite_exact_direct(d);
    let natural = natural_hermite_exact(d);
    let (a1, a2) = conjugate_pair_forms();
    let (b1, b2) = inverse_pair_forms();
    natural == h.subst_linear(&a1, &a2) && h == natural.subst_linear(&b1, &b2)
}

/// Full Rodrigues formula, both partial Rodrigues formulae and the Leibniz
/// consequence for `∂^{n+m}(-z₁ e^{-z₁z₂})`.
pub fn rodrigues_exact(d: DegreePair) -> bool {
    let (m, n) = (d.m, d.n);
    let h = hermite_exact_direct(d);
    let gauss = ExpWeightedPoly::new(BiPoly::one(), WeightSign::Minus);

    let full = gauss.diff_n(Var::Z1, n).diff_n(Var::Z2, m);
    if full.poly.scale(&sign(m + n)) != h {
        return false;
    }

    let partial2 = ExpWeightedPoly::new(BiPoly::monomial(0, n, GaussianRational::one()), WeightSign::Minus)
        .diff_n(Var::Z2, m);
    if partial2.poly.scale(&sign(m)) != h {
        return false;
    }
    let partial1 = ExpWeightedPoly::new(BiPoly::monomial(m, 0, GaussianRational::one()), WeightSign::Minus)
        .diff_n(Var::Z1, n);
    if partial1.poly.scale(&sign(n)) != h {
        return false;
    }

    let lhs = ExpWeightedPoly::new(-BiPoly::x1(), WeightSign::Minus)
        .diff_n(Var::Z1, n)
        .diff_n(Var::Z2, m)
        .poly;
    let lower = if n > 0 {
        gauss.diff_n(Var::Z1, n - 1).diff_n(Var::Z2, m).poly
    } else {
        BiPoly::zero()
    };
    let rhs = lower.scale(&GaussianRational::from_integer(-i64::from(n)))
        - (&BiPoly::x1() * &full.poly);
    lhs == rhs
}

/// Raising `(z₁-∂_{z2})`, `(z₂-∂_{z1})` and lowering `∂_{z2}`, `∂_{z1}`.
pub fn raising_lowering_exact(d: DegreePair) -> bool {
    let (m, n) = (i64::from(d.m), i64::from(d.n));
    let h = hermite_exact_direct(d);
    let raise1 = &(&BiPoly::x1() * &h) - &h.diff(Var::Z2);
    let raise2 = &(&BiPoly::x2() * &h) - &h.diff(Var::Z1);
    raise1 == hermite_or_zero(m + 1, n)
        && raise2 == hermite_or_zero(m, n + 1)
        && h.diff(Var::Z2) == hermite_or_zero(m, n - 1).scale(&GaussianRational::from_integer(n))
        && h.diff(Var::Z1) == hermite_or_zero(m - 1, n).scale(&GaussianRational::from_integer(m))
}

/// With `x, y` indeterminates: `H_{m,n}(x+iy, x-iy)` equals the Laguerre form
/// (branching on `m ≥ n`) and the assembly from `H_j(x) H_k(y)`.
pub fn laguerre_identity_exact(d: DegreePair) -> bool {
    let (m, n) = (d.m, d.n);
    let (l1, l2) = conjugate_pair_forms();
    let h = hermite_exact_direct(d);
    let on_diagonal = h.subst_linear(&l1, &l2);

    let radius_sq = BiPoly::monomial(2, 0, GaussianRational::one()) + BiPoly::monomial(0, 2, GaussianRational::one());
    let (small, gap, phase_form) = if m >= n { (n, m - n, &l1) } else { (m, n - m, &l2) };
    let lag = laguerre_exact(small, gap).compose(&radius_sq);
    let c = sign(small) * GaussianRational::from_bigint(factorial(small));
    let laguerre_form = (&phase_form.to_poly().pow(gap) * &lag).scale(&c);
    if on_diagonal != laguerre_form {
        return false;
    }

    let family = hermite1d_family(m + n);
    let in_x: Vec<BiPoly> = family.iter().map(|p| p.embed(Var::Z1)).collect();
    let in_y: Vec<BiPoly> = family.iter().map(|p| p.embed(Var::Z2)).collect();
    let mut assembled = BiPoly::zero();
    for k in 0..=m {
        for l in 0..=n {
            let c = GaussianRational::from_bigint(binomial(m, k) * binomial(n, l))
                * GaussianRational::i_pow(i64::from(m - k))
                * GaussianRational::i_pow(-i64::from(n - l));
            let j = (k + l) as usize;
            assembled = assembled + (&in_x[j] * &in_y[(m + n) as usize - j]).scale(&c);
        }
    }
    let assembled = assembled.scale(&GaussianRational::from_real(BigRational::new(
        BigInt::one(),
        BigInt::from(2).pow(m + n),
    )));
    on_diagonal == assembled
}

/// The quadruple sum of binomials, factorials and powers of `i` that
/// collapses to `m! n! δ_{m,p} δ_{n,q}`; evaluated exactly.
pub fn coefficient_sum(m: u32, n: u32, p: u32, q: u32) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for k in 0..=m {
        for l in 0..=n {
            let left = k + l;
            let right = m + n - k - l;
            for i in 0..=p {
                // δ_{k+l, i+j} fixes j.
                let Some(j) = left.checked_sub(i) else { continue };
                if j > q || right != p + q - i - j {
                    continue;
                }
                let c = binomial(m, k)
                    * binomial(n, l)
                    * binomial(p, i)
                    * binomial(q, j)
                    * factorial(left)
                    * factorial(right);
                let phase = GaussianRational::i_pow(i64::from(m - k + q - j))
                    * GaussianRational::i_pow(-i64::from(n - l + p - i));
                acc += &(GaussianRational::from_bigint(c) * phase);
            }
        }
    }
    acc.scale(&BigRational::new(BigInt::one(), BigInt::from(2).pow(p + q)))
}

/// `coefficient_sum(m,n,p,q) == m! n! δ_{m,p} δ_{n,q}`.
pub fn coefficient_identity(m: u32, n: u32, p: u32, q: u32) -> bool {
    let expected = if m == p && n == q {
        GaussianRational::from_bigint(factorial(m) * factorial(n))
    } else {
        GaussianRational::zero()
    };
    coefficient_sum(m, n, p, q) == expected
}

/// Outcome of one exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<Vec<u32>>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sweep_pairs(name: &'static str, max: u32, check: impl Fn(DegreePair) -> bool + Sync) -> SweepOutcome {
    use rayon::prelude::*;
    let pairs: Vec<DegreePair> = DegreePair::square(max).collect();
    let failures: Vec<Vec<u32>> = pairs
        .par_iter()
        .filter(|d| !check(**d))
        .map(|d| vec![d.m, d.n])
        .collect();
    SweepOutcome {
        name,
        cases: pairs.len(),
        failures,
    }
}

/// Three independent constructions of `H_{m,n}` agree, for all `m, n ≤ max`.
pub fn sweep_constructions(max: u32) -> SweepOutcome {
    use super::hermite::{hermite_exact_recurrence, hermite_exact_via_1d};
    sweep_pairs("constructions_agree", max, |d| {
        let direct = hermite_exact_direct(d);
        direct == hermite_exact_recurrence(d) && direct == hermite_exact_via_1d(d)
    })
}

pub fn sweep_rodrigues(max: u32) -> SweepOutcome {
    sweep_pairs("rodrigues", max, rodrigues_exact)
}

pub fn sweep_raising_lowering(max: u32) -> SweepOutcome {
    sweep_pairs("raising_lowering", max, raising_lowering_exact)
}

pub fn sweep_natural_link(max: u32) -> SweepOutcome {
    sweep_pairs("natural_link", max, check_natural_link)
}

pub fn sweep_laguerre(max: u32) -> SweepOutcome {
    sweep_pairs("laguerre_identity", max, laguerre_identity_exact)
}

pub fn sweep_coefficients(max: u32) -> SweepOutcome {
    use rayon::prelude::*;
    let quads: Vec<[u32; 4]> = (0..=max)
        .flat_map(|m| (0..=max).flat_map(move |n| (0..=max).flat_map(move |p| (0..=max).map(move |q| [m, n, p, q]))))
        .collect();
    let failures = quads
        .par_iter()
        .filter(|[m, n, p, q]| !coefficient_identity(*m, *n, *p, *q))
        .map(|q| q.to_vec())
        .collect();
    SweepOutcome {
        name: "coefficient_identity",
        cases: quads.len(),
        failures,
    }
}

/// Substitutes `X₁ ↦ Y₁ + iY₂`, `X₂ ↦ Y₁ - iY₂`.
pub fn on_conjugate_pair(p: &BiPoly) -> BiPoly {
    let (l1, l2): (LinearForm, LinearForm) = conjugate_pair_forms();
    p.subst_linear(&l1, &l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_link_small() {
        assert!(check_natural_link(DegreePair::new(0, 0)));
        assert!(check_natural_link(DegreePair::new(1, 1)));
        assert!(check_natural_link(DegreePair::new(3, 1)));
    }

    #[test]
    fn rodrigues_small() {
        assert!(rodrigues_exact(DegreePair::new(0, 0)));
        assert!(rodrigues_exact(DegreePair::new(1, 1)));
        assert!(rodrigues_exact(DegreePair::new(2, 3)));
    }

    #[test]
    fn raising_lowering_small() {
        assert!(raising_lowering_exact(DegreePair::new(0, 0)));
        assert!(raising_lowering_exact(DegreePair::new(2, 1)));
    }

    #[test]
    fn laguerre_small() {
        assert!(laguerre_identity_exact(DegreePair::new(1, 1)));
        assert!(laguerre_identity_exact(DegreePair::new(2, 0)));
        assert!(laguerre_identity_exact(DegreePair::new(1, 3)));
    }

    #[test]
    fn coefficient_sum_values() {
        assert_eq!(coefficient_sum(0, 0, 0, 0), GaussianRational::one());
        assert!(coefficient_sum(1, 0, 0, 1).is_zero());
        assert_eq!(coefficient_sum(2, 1, 2, 1), GaussianRational::from_integer(2));
        assert!(coefficient_identity(1, 0, 0, 1));
    }

    #[test]
    fn broken_identity_is_detected() {
        // H_{1,1} + 1 is not H_{1,1}; the checks must notice a perturbation.
        let h = hermite_exact_direct(DegreePair::new(1, 1));
        let wrong = &h + &BiPoly::one();
        assert_ne!(on_conjugate_pair(&wrong), on_conjugate_pair(&h));
    }
}
