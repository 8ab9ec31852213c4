mod common;

use antinef_core::lattice::Definiteness;
use antinef_core::rational::{int, ratio};
use antinef_core::{corpus, decompose, Rational, ResolutionModel};
use common::{definite_tree, minors_negative_definite, symmetric_matrix};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn quadratic_form(m: &[Vec<i64>], v: &[num_bigint::BigInt]) -> num_bigint::BigInt {
    let n = m.len();
    let mut acc = num_bigint::BigInt::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &v[i] * m[i][j] * &v[j];
        }
    }
    acc
}

#[test]
fn corpus_dual_bases_are_exact_and_effective() {
    for (name, file) in corpus::bundled() {
        let m = &file.model;
        let duals = m.dual_basis().unwrap();
        for (i, d) in duals.iter().enumerate() {
            let products = m.products(d).unwrap();
            for (j, p) in products.iter().enumerate() {
                let want = if i == j { -Rational::one() } else { Rational::zero() };
                assert_eq!(*p, want, "{name}: Ě_{i}.E_{j}");
            }
            assert!(d.is_effective(), "{name}: Ě_{i} not effective");
        }
    }
}

#[test]
fn decomposition_reconstructs_on_corpus() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (name, file) in corpus::bundled() {
        let m = &file.model;
        let duals = m.dual_basis().unwrap();
        for _ in 0..1000 {
            let mut d = m.zero_divisor();
            for i in 0..m.num_curves() {
                d.set_exc(i, ratio(rng.random_range(-30..=30), rng.random_range(1..=7)));
            }
            for s in 0..m.num_strict() {
                d.set_strict(s, ratio(rng.random_range(-30..=30), rng.random_range(1..=7)));
            }
            let dec = decompose(m, &d).unwrap();
            // Reconstruct with the explicit dual basis rather than the solver.
            let mut sum = dec.pullback_part.clone();
            for (c, e) in dec.dual_coeffs.iter().zip(&duals) {
                sum = &sum + &e.scale(c);
            }
            assert_eq!(sum, d, "{name}");
            assert_eq!(dec.reconstruct(m).unwrap(), d);
        }
    }
}

#[test]
fn decompose_examples() {
    let a1 = ResolutionModel::from_matrix(&[0], &[vec![-2]]).unwrap();
    let zero = decompose(&a1, &a1.zero_divisor()).unwrap();
    assert!(zero.pullback_part.is_zero());
    assert_eq!(zero.dual_coeffs, vec![int(0)]);

    let dec = decompose(&a1, &a1.basis(0)).unwrap();
    assert!(dec.pullback_part.is_zero());
    assert_eq!(dec.dual_coeffs, vec![int(2)]);

    let a2 = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
    let dec = decompose(&a2, &a2.basis(0)).unwrap();
    assert_eq!(dec.dual_coeffs, vec![int(2), int(-1)]);
    assert_eq!(dec.reconstruct(&a2).unwrap(), a2.basis(0));
}

#[test]
fn meet_and_rounding_examples() {
    let a2 = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
    let d = a2.exc_divisor(&[2, 1]).unwrap();
    assert_eq!(d.meet(&d).unwrap(), d);
    let e = a2.exc_divisor(&[1, 3]).unwrap();
    assert_eq!(d.meet(&e).unwrap(), a2.exc_divisor(&[1, 1]).unwrap());

    assert_eq!(d.floor(), d);
    let r = a2.divisor(vec![ratio(3, 2), ratio(-1, 3)], vec![]).unwrap();
    assert_eq!(r.floor(), a2.exc_divisor(&[1, -1]).unwrap());
    let c = a2.divisor(vec![ratio(3, 2), int(0)], vec![]).unwrap();
    assert_eq!(c.ceil(), a2.exc_divisor(&[2, 0]).unwrap());

    let other = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
    assert!(d.meet(&other.basis(0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn definiteness_matches_leading_minors(m in symmetric_matrix(12)) {
        let model = ResolutionModel::from_matrix(&vec![0; m.len()], &m).unwrap();
        let verdict = model.check_negative_definite();
        prop_assert_eq!(verdict.is_negative_definite(), minors_negative_definite(&m));
        prop_assert_eq!(model.factorization().is_ok(), minors_negative_definite(&m));
        if let Definiteness::Indefinite { witness } = verdict {
            prop_assert!(!quadratic_form(&m, &witness).is_negative());
            prop_assert!(witness.iter().any(|w| !w.is_zero()));
        }
    }

    #[test]
    fn dual_basis_is_dual_and_effective(model in definite_tree(10)) {
        let duals = model.dual_basis().unwrap();
        for (i, d) in duals.iter().enumerate() {
            let p = model.products(d).unwrap();
            for (j, v) in p.iter().enumerate() {
                prop_assert_eq!(v.clone(), if i == j { -Rational::one() } else { Rational::zero() });
            }
            prop_assert!(d.is_effective());
        }
    }

    #[test]
    fn pullback_then_pushforward_is_identity(
        model in definite_tree(8),
        inc in prop::collection::vec(0i64..=2, 8),
        coeff in rational(),
    ) {
        let n = model.num_curves();
        let model = model.with_strict("C", inc[..n].to_vec()).unwrap();
        let c = model.strict_basis(0).scale(&coeff);
        let pulled = model.numerical_pullback(&c).unwrap();
        prop_assert_eq!(model.pushforward(&pulled).unwrap(), c);
        prop_assert!(model.products(&pulled).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn intersect_is_bilinear(
        model in definite_tree(8),
        xs in prop::collection::vec(rational(), 8),
        ys in prop::collection::vec(rational(), 8),
        a in rational(),
        b in rational(),
    ) {
        let n = model.num_curves();
        let d1 = model.divisor(xs[..n].to_vec(), vec![]).unwrap();
        let d2 = model.divisor(ys[..n].to_vec(), vec![]).unwrap();
        let combo = &d1.scale(&a) + &d2.scale(&b);
        for i in 0..n {
            let lhs = model.intersect(&combo, i).unwrap();
            let rhs = &a * model.intersect(&d1, i).unwrap() + &b * model.intersect(&d2, i).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn meet_is_a_semilattice(
        xs in prop::collection::vec(rational(), 3),
        ys in prop::collection::vec(rational(), 3),
        zs in prop::collection::vec(rational(), 3),
    ) {
        let m = ResolutionModel::from_matrix(&[0, 0, 0], &[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]).unwrap();
        let (x, y, z) = (
            m.divisor(xs, vec![]).unwrap(),
            m.divisor(ys, vec![]).unwrap(),
            m.divisor(zs, vec![]).unwrap(),
        );
        prop_assert_eq!(x.meet(&y).unwrap(), y.meet(&x).unwrap());
        prop_assert_eq!(x.meet(&x).unwrap(), x.clone());
        prop_assert_eq!(x.meet(&y).unwrap().meet(&z).unwrap(), x.meet(&y.meet(&z).unwrap()).unwrap());
    }

    #[test]
    fn meet_of_antinef_is_antinef(model in definite_tree(6), xs in prop::collection::vec(0i64..8, 6), ys in prop::collection::vec(0i64..8, 6)) {
        let n = model.num_curves();
        let x = antinef_core::antinef_closure(&model, &model.exc_divisor(&xs[..n]).unwrap()).unwrap().0;
        let y = antinef_core::antinef_closure(&model, &model.exc_divisor(&ys[..n]).unwrap()).unwrap().0;
        prop_assert!(antinef_core::is_antinef(&model, &x.meet(&y).unwrap()).unwrap());
    }

    #[test]
    fn ceil_is_negated_floor(xs in prop::collection::vec(rational(), 4)) {
        let m = ResolutionModel::from_matrix(&[0; 4], &[
            vec![-2, 1, 0, 0], vec![1, -2, 1, 0], vec![0, 1, -2, 1], vec![0, 0, 1, -2],
        ]).unwrap();
        let d = m.divisor(xs, vec![]).unwrap();
        prop_assert_eq!(d.ceil(), -&(-&d).floor());
    }
}
