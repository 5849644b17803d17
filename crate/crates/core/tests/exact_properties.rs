use holoherm::exact::{
    hermite_exact_direct, hermite_exact_recurrence, BiPoly, DegreePair, GaussianRational, PolyJson, Var,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn gq() -> impl Strategy<Value = GaussianRational> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| {
        GaussianRational::from_ratio(a, b) + GaussianRational::from_ratio(c, d) * GaussianRational::i()
    })
}

fn poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0u32..4, 0u32..4, gq()), 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .fold(BiPoly::zero(), |acc, (e1, e2, c)| acc + BiPoly::monomial(e1, e2, c))
    })
}

proptest! {
    #[test]
    fn field_axioms(a in gq(), b in gq(), c in gq()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, GaussianRational::zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, GaussianRational::one());
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn polynomial_ring_and_evaluation(p in poly(), q in poly(), x in gq(), y in gq()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!((&p + &q).eval(&x, &y), &p.eval(&x, &y) + &q.eval(&x, &y));
        prop_assert_eq!((&p * &q).eval(&x, &y), &p.eval(&x, &y) * &q.eval(&x, &y));
        prop_assert_eq!(p.swap_vars().swap_vars(), p.clone());
        prop_assert_eq!(p.swap_vars().eval(&x, &y), p.eval(&y, &x));
        // Leibniz
        let lhs = (&p * &q).diff(Var::Z1);
        let rhs = &(&p.diff(Var::Z1) * &q) + &(&p * &q.diff(Var::Z1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_roundtrip(p in poly()) {
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(BiPoly::from_json(&back), Some(p));
    }

    #[test]
    fn hermite_structure(m in 0u32..9, n in 0u32..9) {
        let h = hermite_exact_direct(DegreePair::new(m, n));
        prop_assert_eq!(&h, &hermite_exact_recurrence(DegreePair::new(m, n)));
        prop_assert_eq!(h.swap_vars(), hermite_exact_direct(DegreePair::new(n, m)));
        prop_assert_eq!(h.total_degree(), Some(m + n));
        prop_assert_eq!(h.coeff(m, n), GaussianRational::one());
        // only monomials with e1 - e2 = m - n appear
        for (mono, _) in h.terms() {
            prop_assert_eq!(mono.e1 as i64 - mono.e2 as i64, m as i64 - n as i64);
        }
        // ∂/∂z1 H_{m,n} = m H_{m-1,n}
        if m > 0 {
            let lowered = hermite_exact_direct(DegreePair::new(m - 1, n))
                .scale(&GaussianRational::from_integer(m as i64));
            prop_assert_eq!(h.diff(Var::Z1), lowered);
        }
    }
}

#[test]
fn known_polynomials() {
    let x = BiPoly::x1();
    let y = BiPoly::x2();
    let one = BiPoly::one();
    let c = |k: i64| BiPoly::constant(GaussianRational::from_integer(k));
    let xy = &x * &y;
    assert_eq!(hermite_exact_direct(DegreePair::new(0, 0)), one);
    assert_eq!(hermite_exact_direct(DegreePair::new(3, 0)), x.pow(3));
    assert_eq!(hermite_exact_direct(DegreePair::new(1, 1)), &xy - &one);
    // z1²z2² - 4 z1z2 + 2
    let h22 = &(&xy.pow(2) - &(&c(4) * &xy)) + &c(2);
    assert_eq!(hermite_exact_direct(DegreePair::new(2, 2)), h22);
    // z1 (z1 z2 - 2)
    assert_eq!(hermite_exact_direct(DegreePair::new(2, 1)), &x * &(&xy - &c(2)));
}

#[test]
fn known_values() {
    let z = |k: i64| GaussianRational::from_integer(k);
    let h33 = hermite_exact_direct(DegreePair::new(3, 3));
    assert_eq!(h33.eval(&z(2), &z(2)), z(-14));
    // w^3 - 9w^2 + 18w - 6 in w = z1 z2
    for (k, c) in [(3, 1), (2, -9), (1, 18), (0, -6)] {
        assert_eq!(h33.coeff(k, k), z(c));
    }
    let h21 = hermite_exact_direct(DegreePair::new(2, 1));
    assert_eq!(h21.eval(&GaussianRational::i(), &z(1)), z(-1) - z(2) * GaussianRational::i());
}
