//! Test-only oracles, kept independent of the library's solvers.

#![allow(dead_code)]

use antinef_core::ResolutionModel;
use proptest::prelude::*;

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Negative definite iff `(-1)^k det(M_k) > 0` for every leading minor.
pub fn minors_negative_definite(m: &[Vec<i64>]) -> bool {
    (1..=m.len()).all(|k| {
        let block: Vec<Vec<i64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = bareiss_det(&block);
        if k % 2 == 1 {
            d < 0
        } else {
            d > 0
        }
    })
}

/// Symmetric matrices with negative diagonal and small non-negative
/// off-diagonal entries, sized `1..=max_n`.
pub fn symmetric_matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-6i64..=-1, n),
            prop::collection::vec(prop_oneof![4 => Just(0i64), 2 => Just(1i64), 1 => Just(2i64)], n * n),
        )
            .prop_map(move |(diag, off)| {
                let mut m = vec![vec![0; n]; n];
                for i in 0..n {
                    m[i][i] = diag[i];
                    for j in i + 1..n {
                        m[i][j] = off[i * n + j];
                        m[j][i] = off[i * n + j];
                    }
                }
                m
            })
    })
}

/// Random trees (parent of vertex `v` is some earlier vertex) with
/// self-intersections in `-4..=-2`, filtered to negative definite ones.
pub fn definite_tree(max_n: usize) -> impl Strategy<Value = ResolutionModel> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-4i64..=-2, n),
                prop::collection::vec(any::<prop::sample::Index>(), n),
            )
        })
        .prop_filter_map("not negative definite", |(selfs, parents)| {
            let n = selfs.len();
            let mut m = vec![vec![0i64; n]; n];
            for v in 0..n {
                m[v][v] = selfs[v];
                if v > 0 {
                    let p = parents[v].index(v);
                    m[v][p] = 1;
                    m[p][v] = 1;
                }
            }
            if !minors_negative_definite(&m) {
                return None;
            }
            ResolutionModel::from_matrix(&vec![0; n], &m).ok()
        })
}

/// Least integral antinef divisor `>= lower` with exceptional coefficients
/// in `0..=bound`, by enumeration of the box.
pub fn brute_force_closure(matrix: &[Vec<i64>], lower: &[i64], bound: i64) -> Option<Vec<i64>> {
    let n = matrix.len();
    let mut best: Option<Vec<i64>> = None;
    let mut cur = vec![0i64; n];
    loop {
        let dominates = cur.iter().zip(lower).all(|(c, l)| c >= l);
        let antinef = (0..n).all(|i| (0..n).map(|j| matrix[i][j] * cur[j]).sum::<i64>() <= 0);
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
