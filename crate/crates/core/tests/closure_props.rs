mod common;

use antinef_core::antinef::{dominating_divisor, ClosureOptions, Selection};
use antinef_core::{antinef_closure, antinef_closure_with, is_antinef, ResolutionModel};
use common::{brute_force_closure, definite_tree};
use num_bigint::BigInt;
use proptest::prelude::*;

fn with_strict(model: ResolutionModel, inc: &[i64]) -> ResolutionModel {
    let n = model.num_curves();
    model.with_strict("C", inc[..n].to_vec()).unwrap()
}

fn lower_divisor(model: &ResolutionModel, xs: &[i64], c: i64) -> antinef_core::Divisor {
    let n = model.num_curves();
    let exc = xs[..n].iter().map(|&x| antinef_core::rational::int(x)).collect();
    model.divisor(exc, vec![antinef_core::rational::int(c)]).unwrap()
}

#[test]
fn closure_examples() {
    let a2 = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
    let (d, trace) = antinef_closure(&a2, &a2.basis(0)).unwrap();
    assert_eq!(d, a2.exc_divisor(&[1, 1]).unwrap());
    assert_eq!(trace.steps.len(), 1);
    assert_eq!(trace.initial_s, BigInt::from(1));

    let a1 = ResolutionModel::from_matrix(&[0], &[vec![-2]])
        .unwrap()
        .with_strict("C", vec![1])
        .unwrap();
    let (d, _) = antinef_closure(&a1, &a1.strict_basis(0)).unwrap();
    assert_eq!(d.exc_coeff(0), &antinef_core::rational::int(1));
    assert_eq!(d.strict_coeff(0), &antinef_core::rational::int(1));

    let already = a2.exc_divisor(&[1, 1]).unwrap();
    let (same, trace) = antinef_closure(&a2, &already).unwrap();
    assert_eq!(same, already);
    assert!(trace.steps.is_empty());

    let half = a2
        .divisor(
            vec![antinef_core::rational::ratio(1, 2), antinef_core::rational::int(0)],
            vec![],
        )
        .unwrap();
    assert!(antinef_closure(&a2, &half).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_matches_brute_force(
        model in definite_tree(3),
        xs in prop::collection::vec(-2i64..=4, 3),
        inc in prop::collection::vec(0i64..=1, 3),
    ) {
        let model = with_strict(model, &inc);
        let d = lower_divisor(&model, &xs, 1);
        let (closed, _) = antinef_closure(&model, &d).unwrap();
        let bound = 14;
        let max = closed.exc().iter().map(|c| c.to_integer()).max().unwrap();
        prop_assume!(max <= BigInt::from(bound));

        let n = model.num_curves();
        let lower: Vec<i64> = xs[..n].iter().map(|&x| x.max(0)).collect();
        let expected = closure_with_strict(&model.matrix(), &inc[..n], &lower, bound).unwrap();
        let got: Vec<i64> = closed.exc().iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn closure_is_antinef_dominating_and_idempotent(
        model in definite_tree(8),
        xs in prop::collection::vec(-3i64..=8, 8),
        inc in prop::collection::vec(0i64..=2, 8),
        c in 0i64..=3,
    ) {
        let model = with_strict(model, &inc);
        let d = lower_divisor(&model, &xs, c);
        let (closed, trace) = antinef_closure(&model, &d).unwrap();
        prop_assert!(is_antinef(&model, &closed).unwrap());
        prop_assert!(d.le(&closed).unwrap());
        prop_assert_eq!(model.pushforward(&closed).unwrap(), model.pushforward(&d).unwrap());
        prop_assert_eq!(BigInt::from(trace.steps.len()), trace.initial_s.clone());
        prop_assert_eq!(trace.total_copies(), trace.initial_s.clone());

        let (again, t2) = antinef_closure(&model, &closed).unwrap();
        prop_assert_eq!(&again, &closed);
        prop_assert!(t2.steps.is_empty());

        let dom = dominating_divisor(&model, &d).unwrap();
        prop_assert!(is_antinef(&model, &dom).unwrap());
        prop_assert!(d.le(&dom).unwrap());
        prop_assert!(closed.le(&dom).unwrap());
        prop_assert!(trace.initial_s <= (&dom - &d).degree_sum().to_integer());
    }

    #[test]
    fn closure_order_and_batching_agree(
        model in definite_tree(8),
        xs in prop::collection::vec(0i64..=12, 8),
        inc in prop::collection::vec(0i64..=3, 8),
        c in 0i64..=4,
    ) {
        let model = with_strict(model, &inc);
        let d = lower_divisor(&model, &xs, c);
        let (base, single) = antinef_closure(&model, &d).unwrap();
        for selection in [Selection::Smallest, Selection::Largest] {
            for batched in [false, true] {
                let (other, trace) = antinef_closure_with(&model, &d, ClosureOptions { selection, batched }).unwrap();
                prop_assert_eq!(&other, &base);
                prop_assert_eq!(trace.total_copies(), single.initial_s.clone());
                if batched {
                    prop_assert!(trace.steps.len() <= single.steps.len());
                }
            }
        }
    }
}

/// Least integral antinef divisor `C + sum x_i E_i` with `x >= lower`,
/// where `C` meets `E_i` with multiplicity `strict[i]`.
fn closure_with_strict(m: &[Vec<i64>], strict: &[i64], lower: &[i64], bound: i64) -> Option<Vec<i64>> {
    let n = m.len();
    let mut best: Option<Vec<i64>> = None;
    let mut cur = vec![0i64; n];
    loop {
        let dominates = cur.iter().zip(lower).all(|(x, l)| x >= l);
        let antinef = (0..n).all(|i| (0..n).map(|j| m[i][j] * cur[j]).sum::<i64>() + strict[i] <= 0);
        if dominates && antinef {
            best = Some(match best {
                None => cur.clone(),
                Some(b) => b.iter().zip(&cur).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            cur[k] += 1;
            if cur[k] <= bound {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn brute_force_oracle_agrees_without_strict() {
    let m = vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]];
    let model = ResolutionModel::from_matrix(&[0, 0, 0], &m).unwrap();
    for x in 0..4 {
        for z in 0..4 {
            let d = model.exc_divisor(&[x, 0, z]).unwrap();
            let (closed, _) = antinef_closure(&model, &d).unwrap();
            let got: Vec<i64> = closed
                .exc()
                .iter()
                .map(|c| i64::try_from(c.to_integer()).unwrap())
                .collect();
            assert_eq!(Some(got), brute_force_closure(&m, &[x, 0, z], 10));
        }
    }
}
