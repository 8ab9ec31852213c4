//! Exact linear solves over the rationals.
//!
//! Intersection matrices of resolution graphs are sparse and mostly
//! tree-shaped, so [`Factorization`] eliminates leaves first (no fill-in) and
//! only falls back to dense elimination on whatever cyclic core remains.

use num_traits::{Signed, Zero};
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Solves `a x = b` by Gaussian elimination, pivoting on the first nonzero
/// entry of each column. Returns `None` if `a` is singular.
pub fn dense_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

#[derive(Debug, Clone)]
struct LeafStep {
    var: usize,
    pivot: Rational,
    /// The one remaining neighbour at elimination time and the edge weight.
    neighbour: Option<(usize, i64)>,
}

/// Symmetric elimination of a sparse negative definite matrix.
///
/// Construction fails with [`Error::NotNegativeDefinite`] as soon as a pivot
/// is non-negative, so a successful factorization doubles as a definiteness
/// certificate.
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    steps: Vec<LeafStep>,
    core: Vec<usize>,
    core_matrix: Vec<Vec<Rational>>,
}

impl Factorization {
    /// `diag[v]` is the diagonal entry, `edges[v]` lists `(w, weight)` for
    /// every off-diagonal nonzero (both directions present).
    pub fn new(diag: Vec<Rational>, edges: &[Vec<(usize, i64)>]) -> Result<Self> {
        let n = diag.len();
        let mut diag = diag;
        let mut active = vec![true; n];
        let mut degree: Vec<usize> = edges.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut steps = Vec::with_capacity(n);

        while let Some(v) = queue.pop_front() {
            if !active[v] {
                continue;
            }
            if !diag[v].is_negative() {
                return Err(Error::NotNegativeDefinite);
            }
            active[v] = false;
            let neighbour = edges[v].iter().copied().find(|&(w, _)| active[w]);
            if let Some((w, m)) = neighbour {
                let m2 = Rational::from_integer((m * m).into());
                let delta = m2 / &diag[v];
                diag[w] -= delta;
                degree[w] -= 1;
                if degree[w] <= 1 {
                    queue.push_back(w);
                }
            }
            steps.push(LeafStep {
                var: v,
                pivot: diag[v].clone(),
                neighbour,
            });
        }

        let core: Vec<usize> = (0..n).filter(|&v| active[v]).collect();
        let mut core_matrix = vec![vec![Rational::zero(); core.len()]; core.len()];
        for (a, &v) in core.iter().enumerate() {
            core_matrix[a][a] = diag[v].clone();
            for &(w, m) in &edges[v] {
                if let Ok(b) = core.binary_search(&w) {
                    core_matrix[a][b] = Rational::from_integer(m.into());
                }
            }
        }
        check_ldl_signs(&core_matrix)?;

        Ok(Factorization {
            n,
            steps,
            core,
            core_matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[Rational]) -> Vec<Rational> {
        assert_eq!(rhs.len(), self.n, "right-hand side has wrong length");
        let mut b = rhs.to_vec();
        for step in &self.steps {
            if let Some((w, m)) = step.neighbour {
                let delta = Rational::from_integer(m.into()) * &b[step.var] / &step.pivot;
                b[w] -= delta;
            }
        }
        let mut x = vec![Rational::zero(); self.n];
        if !self.core.is_empty() {
            let core_rhs = self.core.iter().map(|&v| b[v].clone()).collect();
            let core_x = dense_solve(self.core_matrix.clone(), core_rhs).expect("core was verified negative definite");
            for (&v, val) in self.core.iter().zip(core_x) {
                x[v] = val;
            }
        }
        for step in self.steps.iter().rev() {
            let mut acc = b[step.var].clone();
            if let Some((w, m)) = step.neighbour {
                acc -= Rational::from_integer(m.into()) * &x[w];
            }
            x[step.var] = acc / &step.pivot;
        }
        x
    }
}

/// Symmetric elimination without pivoting; every pivot must be negative.
fn check_ldl_signs(m: &[Vec<Rational>]) -> Result<()> {
    let n = m.len();
    let mut a = m.to_vec();
    for k in 0..n {
        if !a[k][k].is_negative() {
            return Err(Error::NotNegativeDefinite);
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    Ok(())
}
