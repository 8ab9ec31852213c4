//! The antinef predicate and antinef closure.
//!
//! The closure of an integral divisor `D` is the smallest integral antinef
//! divisor `D~ >= D`. It is reached by repeatedly adding `E_i` for some
//! curve with `D.E_i > 0`; every intermediate divisor stays below `D~`, so
//! the number of steps equals the coefficient sum of `D~ - D`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::ResolutionModel;
use crate::rational::Rational;

/// `D.E_i <= 0` for every exceptional curve.
pub fn is_antinef(model: &ResolutionModel, d: &Divisor) -> Result<bool> {
    Ok(model.products(d)?.iter().all(|p| !p.is_positive()))
}

/// Which violating curve to fix when several have positive product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    Smallest,
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClosureOptions {
    pub selection: Selection,
    /// Add `ceil(p / -E_i^2)` copies of `E_i` at once instead of one. The
    /// result is the same; the trace is shorter.
    pub batched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStep {
    pub curve: usize,
    /// `D.E_curve` just before the step; always positive.
    pub product: BigInt,
    pub copies: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureTrace {
    pub steps: Vec<ClosureStep>,
    /// Coefficient sum of `D~ - D`.
    pub initial_s: BigInt,
    pub final_divisor: Divisor,
}

impl ClosureTrace {
    pub fn total_copies(&self) -> BigInt {
        self.steps.iter().map(|s| &s.copies).sum()
    }
}

pub fn antinef_closure(model: &ResolutionModel, d: &Divisor) -> Result<(Divisor, ClosureTrace)> {
    antinef_closure_with(model, d, ClosureOptions::default())
}

pub fn antinef_closure_with(
    model: &ResolutionModel,
    d: &Divisor,
    options: ClosureOptions,
) -> Result<(Divisor, ClosureTrace)> {
    if let Some(i) = d.exc().iter().position(|c| !c.is_integer()) {
        return Err(Error::NonIntegralInput {
            curve: model.curve_name(i),
            value: d.exc()[i].to_string(),
        });
    }
    if let Some(s) = d.strict().iter().position(|c| !c.is_integer()) {
        return Err(Error::NonIntegralInput {
            curve: model.strict_curves()[s].label.clone(),
            value: d.strict()[s].to_string(),
        });
    }
    // Termination relies on negative definiteness.
    model.factorization()?;

    let mut coeffs: Vec<BigInt> = d.exc().iter().map(|c| c.to_integer()).collect();
    let mut products: Vec<BigInt> = model.products(d)?.iter().map(|p| p.to_integer()).collect();
    let mut violating: BTreeSet<usize> = (0..products.len()).filter(|&i| products[i].is_positive()).collect();
    let mut steps = Vec::new();

    loop {
        let next = match options.selection {
            Selection::Smallest => violating.first(),
            Selection::Largest => violating.last(),
        };
        let Some(&i) = next else { break };
        let product = products[i].clone();
        let self_int = BigInt::from(model.curve(i).self_int);
        let copies = if options.batched {
            let neg = -&self_int;
            (&product + &neg - BigInt::one()) / &neg
        } else {
            BigInt::one()
        };
        coeffs[i] += &copies;
        products[i] += &copies * &self_int;
        if !products[i].is_positive() {
            violating.remove(&i);
        }
        for &(j, m) in model.neighbours(i) {
            products[j] += &copies * m;
            if products[j].is_positive() {
                violating.insert(j);
            }
        }
        steps.push(ClosureStep {
            curve: i,
            product,
            copies,
        });
    }

    let exc: Vec<Rational> = coeffs.into_iter().map(Rational::from_integer).collect();
    let closed = model.divisor(exc, d.strict().to_vec())?;
    let initial_s = (&closed - d).degree_sum().to_integer();
    let trace = ClosureTrace {
        steps,
        initial_s,
        final_divisor: closed.clone(),
    };
    Ok((closed, trace))
}

/// Smallest `M`, a multiple of the common denominator of `sum_i Ě_i`, for
/// which `f^{-1}_* f_* D + M (Ě_1 + ... + Ě_u)` is an integral antinef
/// divisor dominating `D`. Returns that divisor.
pub fn dominating_divisor(model: &ResolutionModel, d: &Divisor) -> Result<Divisor> {
    let u = model.num_curves();
    let ones = vec![Rational::one(); u];
    let dual_sum = model.dual_combination(&ones)?;
    let step = ResolutionModel::denominator_of(&dual_sum);
    let strict = model.pushforward(d)?;
    let strict_products = model.products(&strict)?;

    // M >= D_i / (sum Ě)_i for each i, and M >= strict.E_i to stay antinef.
    let mut need = Rational::zero();
    for i in 0..u {
        need = need.max(&d.exc()[i] / &dual_sum.exc()[i]);
        need = need.max(strict_products[i].clone());
    }
    let mut m = need.ceil().to_integer();
    if m.is_negative() {
        m = BigInt::zero();
    }
    let rem = &m % &step;
    if !rem.is_zero() {
        m += &step - rem;
    }
    let dom = &strict + &dual_sum.scale(&Rational::from_integer(m));
    Ok(dom)
}
