//! Sparse bivariate polynomials and dense univariate polynomials over the
//! Gaussian rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::GaussianRational;

/// Exponent pair `(e1, e2)` of the monomial `X₁^e1 X₂^e2`, ordered graded-lex:
/// by total degree, ties broken by the exponent of `X₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub e1: u32,
    pub e2: u32,
}

impl Monomial {
    pub fn new(e1: u32, e2: u32) -> Self {
        Self { e1, e2 }
    }

    pub fn degree(&self) -> u32 {
        self.e1 + self.e2
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.e1.cmp(&other.e1))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which of the two indeterminates an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Z1,
    Z2,
}

/// A homogeneous linear form `c1·Y₁ + c2·Y₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub c1: GaussianRational,
    pub c2: GaussianRational,
}

impl LinearForm {
    pub fn new(c1: GaussianRational, c2: GaussianRational) -> Self {
        Self { c1, c2 }
    }

    pub fn y1() -> Self {
        Self::new(GaussianRational::one(), GaussianRational::zero())
    }

    pub fn y2() -> Self {
        Self::new(GaussianRational::zero(), GaussianRational::one())
    }

    pub fn to_poly(&self) -> BiPoly {
        BiPoly::monomial(1, 0, self.c1.clone()) + BiPoly::monomial(0, 1, self.c2.clone())
    }
}

/// A polynomial in `X₁, X₂` with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(e1: u32, e2: u32, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(e1, e2), c);
        p
    }

    pub fn x1() -> Self {
        Self::monomial(1, 0, GaussianRational::one())
    }

    pub fn x2() -> Self {
        Self::monomial(0, 1, GaussianRational::one())
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Z1 => Self::x1(),
            Var::Z2 => Self::x2(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &GaussianRational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, e1: u32, e2: u32) -> GaussianRational {
        self.terms
            .get(&Monomial::new(e1, e2))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Highest monomial in graded-lex order with its coefficient.
    pub fn leading_term(&self) -> Option<(Monomial, &GaussianRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, shifted) = match v {
                Var::Z1 if m.e1 > 0 => (m.e1, Monomial::new(m.e1 - 1, m.e2)),
                Var::Z2 if m.e2 > 0 => (m.e2, Monomial::new(m.e1, m.e2 - 1)),
                _ => continue,
            };
            out.add_term(shifted, c * &GaussianRational::from_integer(i64::from(e)));
        }
        out
    }

    pub fn diff_n(&self, v: Var, n: u32) -> Self {
        (0..n).fold(self.clone(), |p, _| p.diff(v))
    }

    /// Exchanges `X₁` and `X₂`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.e2, m.e1), c.clone()))
                .collect(),
        }
    }

    /// Composition `p(l1(Y₁,Y₂), l2(Y₁,Y₂))`; the result is written in the
    /// same two slots, now standing for `Y₁, Y₂`.
    pub fn subst_linear(&self, l1: &LinearForm, l2: &LinearForm) -> Self {
        self.subst(&l1.to_poly(), &l2.to_poly())
    }

    /// Composition with arbitrary polynomials in place of `X₁` and `X₂`.
    pub fn subst(&self, p1: &BiPoly, p2: &BiPoly) -> Self {
        let max1 = self.terms.keys().map(|m| m.e1).max().unwrap_or(0);
        let max2 = self.terms.keys().map(|m| m.e2).max().unwrap_or(0);
        let pows1 = powers(p1, max1);
        let pows2 = powers(p2, max2);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let term = (&pows1[m.e1 as usize] * &pows2[m.e2 as usize]).scale(c);
            out = out + term;
        }
        out
    }

    pub fn eval(&self, z1: &GaussianRational, z2: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            acc += &(&(c * &z1.pow(m.e1)) * &z2.pow(m.e2));
        }
        acc
    }

    pub fn eval_f64(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex64() * z1.powu(m.e1) * z2.powu(m.e2))
            .sum()
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    e1: m.e1,
                    e2: m.e2,
                    re: c.re_string(),
                    im: c.im_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Option<Self> {
        let mut p = Self::zero();
        for t in &json.terms {
            p.add_term(
                Monomial::new(t.e1, t.e2),
                GaussianRational::parse_parts(&t.re, &t.im)?,
            );
        }
        Some(p)
    }
}

fn powers(p: &BiPoly, max: u32) -> Vec<BiPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BiPoly::one());
    for k in 1..=max as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(mut self, rhs: BiPoly) -> BiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.e1 + mb.e1, ma.e2 + mb.e2), ca * cb);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-GaussianRational::one())
    }
}

/// Wire format of a [`BiPoly`]: terms in ascending graded-lex order with
/// exact `"num/den"` strings for both parts of each coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e1: u32,
    pub e2: u32,
    pub re: String,
    pub im: String,
}

/// `poly · exp(sign · z₁z₂)`, closed under `∂_{z1}` and `∂_{z2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpWeightedPoly {
    pub poly: BiPoly,
    pub weight_sign: WeightSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSign {
    Plus,
    Minus,
}

impl WeightSign {
    fn factor(self) -> GaussianRational {
        match self {
            WeightSign::Plus => GaussianRational::one(),
            WeightSign::Minus => -GaussianRational::one(),
        }
    }
}

impl ExpWeightedPoly {
    pub fn new(poly: BiPoly, weight_sign: WeightSign) -> Self {
        Self { poly, weight_sign }
    }

    /// `∂_{z1}(P e^{s z₁z₂}) = (∂_{z1}P + s z₂ P) e^{s z₁z₂}`, and symmetrically for `z₂`.
    pub fn diff(&self, v: Var) -> Self {
        let other = match v {
            Var::Z1 => BiPoly::x2(),
            Var::Z2 => BiPoly::x1(),
        };
        let chain = (&other * &self.poly).scale(&self.weight_sign.factor());
        Self {
            poly: self.poly.diff(v) + chain,
            weight_sign: self.weight_sign,
        }
    }

    pub fn diff_n(&self, v: Var, n: u32) -> Self {
        (0..n).fold(self.clone(), |p, _| p.diff(v))
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<GaussianRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![GaussianRational::one()])
    }

    /// `a + b x`.
    pub fn linear(a: GaussianRational, b: GaussianRational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Horner composition `p(q)` where `q` is bivariate.
    pub fn compose(&self, q: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &BiPoly::constant(c.clone());
        }
        acc
    }

    /// Embeds `p(x)` as a bivariate polynomial in the chosen slot.
    pub fn embed(&self, v: Var) -> BiPoly {
        self.compose(&BiPoly::var(v))
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex64())
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return UniPoly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn x1() -> BiPoly {
        BiPoly::x1()
    }

    fn x2() -> BiPoly {
        BiPoly::x2()
    }

    #[test]
    fn monomial_product() {
        assert_eq!(&x1() * &x2(), BiPoly::monomial(1, 1, int(1)));
    }

    #[test]
    fn additive_cancellation() {
        let p = &x1() + &BiPoly::constant(int(1));
        let q = &p + &BiPoly::constant(int(-1));
        assert_eq!(q, x1());
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x1() - &x2()) * &(&x1() + &x2());
        // schoolbook: X1^2 + X1X2 - X2X1 - X2^2
        let expected = BiPoly::monomial(2, 0, int(1)) + BiPoly::monomial(0, 2, int(-1));
        assert_eq!(p, expected);
    }

    #[test]
    fn power_rule() {
        let p = BiPoly::monomial(2, 1, int(1));
        assert_eq!(p.diff(Var::Z1), BiPoly::monomial(1, 1, int(2)));
        assert!(x1().diff(Var::Z2).is_zero());
    }

    #[test]
    fn conjugate_pair_substitution() {
        let i = GaussianRational::i();
        let l1 = LinearForm::new(int(1), i.clone());
        let l2 = LinearForm::new(int(1), -i);
        let p = (&x1() * &x2()).subst_linear(&l1, &l2);
        assert_eq!(p, BiPoly::monomial(2, 0, int(1)) + BiPoly::monomial(0, 2, int(1)));
    }

    #[test]
    fn degree_one_substitution() {
        let half = GaussianRational::from_ratio(1, 2);
        let l1 = LinearForm::new(half.clone(), half.clone());
        let p = x1().subst_linear(&l1, &LinearForm::y2());
        assert_eq!(p, BiPoly::monomial(1, 0, half.clone()) + BiPoly::monomial(0, 1, half));
    }

    #[test]
    fn graded_lex_iteration() {
        let p = BiPoly::monomial(0, 2, int(1))
            + BiPoly::monomial(1, 0, int(1))
            + BiPoly::monomial(2, 0, int(1))
            + BiPoly::monomial(1, 1, int(1))
            + BiPoly::constant(int(3));
        let order: Vec<(u32, u32)> = p.terms().map(|(m, _)| (m.e1, m.e2)).collect();
        assert_eq!(order, vec![(0, 0), (1, 0), (0, 2), (1, 1), (2, 0)]);
        assert_eq!(p.leading_term().unwrap().0, Monomial::new(2, 0));
    }

    #[test]
    fn exp_weighted_mixed_derivative() {
        // d^2/dz1 dz2 e^{-z1 z2} = (z1 z2 - 1) e^{-z1 z2}
        let e = ExpWeightedPoly::new(BiPoly::one(), WeightSign::Minus);
        let d = e.diff(Var::Z1).diff(Var::Z2);
        assert_eq!(d.poly, BiPoly::monomial(1, 1, int(1)) - BiPoly::one());
        assert_eq!(d.weight_sign, WeightSign::Minus);
    }

    #[test]
    fn json_roundtrip_and_format() {
        let p = BiPoly::monomial(1, 1, int(1)) - BiPoly::one();
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"terms":[{"e1":0,"e2":0,"re":"-1/1","im":"0/1"},{"e1":1,"e2":1,"re":"1/1","im":"0/1"}]}"#
        );
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(BiPoly::from_json(&back).unwrap(), p);
    }

    #[test]
    fn univariate_compose() {
        // (1 + 2x) with x = X1 + X2
        let u = UniPoly::linear(int(1), int(2));
        let q = u.compose(&(&x1() + &x2()));
        assert_eq!(
            q,
            BiPoly::one() + BiPoly::monomial(1, 0, int(2)) + BiPoly::monomial(0, 1, int(2))
        );
    }
}
