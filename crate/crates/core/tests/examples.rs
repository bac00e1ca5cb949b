use monopole_core::defect::{restrict_fmo_slice, verify_slice_restriction};
use monopole_core::gklo::{GkloContext, Sign};
use monopole_core::hilbert::{classify_theory, fmo_degree, hilbert_series, stabilizer_poincare, TheoryClass};
use monopole_core::km::{compose_embedding, Coweight};
use monopole_core::quiver::{affine_classify, check_conicity, check_good, predict, DimData, Prediction, Quiver};
use monopole_core::sym::PartialSymPoly;

fn ctx(q: Quiver, w: &[i64], v: &[i64]) -> GkloContext {
    GkloContext::new(q, DimData::new(w.to_vec(), v.to_vec()).unwrap()).unwrap()
}

#[test]
fn affine_level_one_is_conical_not_good() {
    let q = Quiver::affine_sl2();
    let c = q.cartan();
    let d = DimData::new(vec![1, 0], vec![1, 1]).unwrap();
    let ty = affine_classify(&c);
    assert_eq!(ty.marks, Some(vec![1, 1]));
    assert_eq!(ty.level(&d, &c), Some(1));
    assert_eq!(predict(&d, &c, &ty), Some(Prediction::ConicalNotGood));
    assert!(check_conicity(&d, &c).holds);
    let good = check_good(&d, &c);
    assert!(!good.holds);
    assert_eq!(good.witness, Some(vec![1, 1]));
    let class = classify_theory(&ctx(q, &[1, 0], &[1, 1])).unwrap();
    assert_eq!(class.class, TheoryClass::Ugly);
    assert_eq!(class.min_degree, Some(1));
    assert_eq!(class.witness, Some(vec![1, 1]));
}

#[test]
fn a1_classifications() {
    let good = classify_theory(&ctx(Quiver::a1(), &[2], &[1])).unwrap();
    assert_eq!((good.class, good.min_degree), (TheoryClass::Good, Some(2)));
    let bad = classify_theory(&ctx(Quiver::a1(), &[2], &[2])).unwrap();
    assert_eq!((bad.class, bad.min_degree), (TheoryClass::Bad, Some(0)));
    let empty = classify_theory(&ctx(Quiver::a1(), &[2], &[0])).unwrap();
    assert_eq!((empty.class, empty.min_degree), (TheoryClass::Good, None));
}

#[test]
fn hilbert_values() {
    let a1 = ctx(Quiver::a1(), &[2], &[1]);
    let h = hilbert_series(&a1, 20).unwrap();
    let expected: Vec<i64> = (0..=20).map(|k| if k % 2 == 0 { k + 1 } else { 0 }).collect();
    assert_eq!(h.coeffs(), expected.as_slice());
    assert_eq!(hilbert_series(&ctx(Quiver::a2(), &[1, 1], &[0, 0]), 6).unwrap().coeffs(), &[1, 0, 0, 0, 0, 0, 0]);
    assert!(hilbert_series(&ctx(Quiver::a1(), &[2], &[2]), 6).is_err());
}

#[test]
fn stabilizer_series() {
    assert_eq!(stabilizer_poincare(&Coweight(vec![vec![1, 0]]), 6).coeffs(), &[1, 0, 2, 0, 3, 0, 4]);
    assert_eq!(stabilizer_poincare(&Coweight(vec![vec![1, 1]]), 6).coeffs(), &[1, 0, 1, 0, 2, 0, 2]);
    assert_eq!(
        stabilizer_poincare(&Coweight(vec![vec![2, 1], vec![0]]), 4).coeffs(),
        &[1, 0, 3, 0, 6]
    );
}

#[test]
fn degrees() {
    let a1 = ctx(Quiver::a1(), &[2], &[1]);
    assert_eq!(fmo_degree(&a1, &[0], 0).unwrap(), 0);
    assert_eq!(fmo_degree(&a1, &[1], 0).unwrap(), 2);
    assert_eq!(fmo_degree(&a1, &[1], 2).unwrap(), 4);
}

#[test]
fn a1_slice_restriction() {
    let c = ctx(Quiver::a1(), &[2], &[2]);
    for m in [[0], [1], [2]] {
        let f = PartialSymPoly::one(m.to_vec(), vec![2]).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            assert!(verify_slice_restriction(&c, &[1], &m, &f, sign).unwrap().holds);
            let chain = compose_embedding(&c, &[1], &m, &f, sign).unwrap();
            assert!(chain.matches && chain.signs_match && chain.parity_ok);
            assert_eq!(chain.result_value, restrict_fmo_slice(&c, &[1], &m, &f, sign).unwrap());
        }
    }
    let f = PartialSymPoly::one(vec![2], vec![2]).unwrap();
    assert!(restrict_fmo_slice(&c, &[1], &[2], &f, Sign::Plus).unwrap().is_zero());
}
