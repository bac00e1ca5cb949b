use monopole_core::gklo::{GkloContext, Sign};
use monopole_core::hilbert::{
    classify_theory, hilbert_series, hilbert_series_bruteforce, two_delta_general, TheoryClass,
};
use monopole_core::km::Coweight;
use monopole_core::poly::{gcd, parse_poly, parse_ratfunc};
use monopole_core::quiver::{two_delta_minuscule, DimData, Quiver};
use monopole_core::series::TruncSeries;
use monopole_core::sym::PartialSymPoly;
use monopole_core::{Frac, Monomial, Poly, Rational, Var};
use proptest::prelude::*;

const VARS: [Var; 4] = [
    Var::W { vertex: 0, index: 1 },
    Var::W { vertex: 0, index: 2 },
    Var::W { vertex: 1, index: 1 },
    Var::Z,
];

fn poly_strategy(with_u: bool) -> impl Strategy<Value = Poly> {
    let exps = prop::collection::vec(0i32..3, VARS.len());
    let u = if with_u { -2i32..3 } else { 0i32..1 };
    prop::collection::vec((exps, u, -4i64..5), 0..5).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(e, ue, c)| {
            let mut factors: Vec<(Var, i32)> = VARS.iter().copied().zip(e).collect();
            factors.push((Var::U { vertex: 0, index: 1 }, ue));
            (Monomial::from_factors(factors), Rational::from_integer(c.into()))
        }))
    })
}

fn nonzero(p: Poly) -> Poly {
    if p.is_zero() {
        Poly::one()
    } else {
        p
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(p in poly_strategy(true)) {
        prop_assert_eq!(parse_poly::<Rational>(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn ring_axioms(a in poly_strategy(true), b in poly_strategy(true), c in poly_strategy(true)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division(a in poly_strategy(false), b in poly_strategy(false)) {
        let b = nonzero(b);
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_contains_common_factor(a in poly_strategy(false), b in poly_strategy(false), c in poly_strategy(false)) {
        let (a, b, c) = (nonzero(a), nonzero(b), nonzero(c));
        let g = gcd(&a.mul(&c), &b.mul(&c));
        prop_assert!(g.div_exact(&c).is_some());
        prop_assert!(a.mul(&c).div_exact(&g).is_some());
        prop_assert!(b.mul(&c).div_exact(&g).is_some());
    }

    #[test]
    fn fractions_cancel(a in poly_strategy(false), b in poly_strategy(false), c in poly_strategy(false), d in poly_strategy(false)) {
        let x = Frac::new_with_gcd(a, nonzero(b)).unwrap();
        let y = Frac::new_with_gcd(c, nonzero(d)).unwrap();
        prop_assert_eq!(x.add(&y).sub(&y), x.clone());
        prop_assert_eq!(parse_ratfunc::<Rational>(&x.to_string()).unwrap(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x);
        }
    }

    #[test]
    fn geometric_inverse(order in 0usize..20, k in 1usize..6) {
        let g = TruncSeries::geometric(order, k);
        let one_minus = TruncSeries::one(order).add(&TruncSeries::monomial(order, k, -1));
        prop_assert_eq!(g.mul(&one_minus), TruncSeries::one(order));
    }
}

fn quiver(idx: usize) -> Quiver {
    [Quiver::a1(), Quiver::a2(), Quiver::affine_sl2()][idx].clone()
}

fn dims_strategy() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>)> {
    (0usize..3).prop_flat_map(|q| {
        let n = quiver(q).n();
        (
            Just(q),
            prop::collection::vec(0i64..4, n),
            prop::collection::vec(0i64..3, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fundamental_degrees((q, w, v) in dims_strategy(), seed in any::<u64>()) {
        let quiver = quiver(q);
        let ctx = GkloContext::new(quiver, DimData::new(w, v.clone()).unwrap()).unwrap();
        let m: Vec<i64> = v.iter().enumerate().map(|(i, &x)| ((seed >> (4 * i)) % (x as u64 + 1)) as i64).collect();
        let dims: Vec<usize> = v.iter().map(|&x| x as usize).collect();
        let expected = two_delta_minuscule(ctx.dims(), ctx.cartan(), &m).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let gamma = Coweight::fundamental(&dims, &m, sign);
            prop_assert_eq!(two_delta_general(&ctx, &gamma).unwrap(), expected);
        }
    }

    #[test]
    fn chevalley_is_an_involution((q, w, v) in dims_strategy()) {
        let ctx = GkloContext::new(quiver(q), DimData::new(w, v.clone()).unwrap()).unwrap();
        let m: Vec<i64> = v.iter().map(|&x| x.min(1)).collect();
        let f = PartialSymPoly::one(m.clone(), v).unwrap();
        let plus = ctx.fmo_plus(&m, &f).unwrap();
        let minus = ctx.fmo_minus(&m, &f).unwrap();
        let once = ctx.chevalley(&plus).unwrap();
        prop_assert_eq!(once.value(), minus.value());
        let twice = ctx.chevalley(&once).unwrap();
        prop_assert_eq!(twice.value(), plus.value());
    }

    #[test]
    fn hilbert_matches_bruteforce((q, w, v) in dims_strategy()) {
        let ctx = GkloContext::new(quiver(q), DimData::new(w, v).unwrap()).unwrap();
        let class = classify_theory(&ctx).unwrap();
        if class.class == TheoryClass::Bad {
            prop_assert!(hilbert_series(&ctx, 6).is_err());
        } else {
            let h = hilbert_series(&ctx, 6).unwrap();
            prop_assert_eq!(h.coeff(0), 1);
            prop_assert!(h.coeffs().iter().all(|&c| c >= 0));
            prop_assert_eq!(&h, &hilbert_series_bruteforce(&ctx, 6).unwrap());
        }
    }
}
