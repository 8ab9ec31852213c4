//! Seeded random divisors for batch runs and property tests.
//!
//! Exceptional coefficients are uniform in `0..=max_coeff`; at most two
//! strict curves (chosen uniformly) get a coefficient uniform in `{0, 1}`.
//! Antinef samples are the antinef closures of these.

use rand::seq::index::sample;
use rand::Rng;

use crate::antinef::antinef_closure;
use crate::divisor::Divisor;
use crate::error::Result;
use crate::lattice::ResolutionModel;
use crate::rational::Rational;

pub const DEFAULT_MAX_COEFF: i64 = 10;

pub fn random_effective<R: Rng + ?Sized>(model: &ResolutionModel, rng: &mut R, max_coeff: i64) -> Divisor {
    let mut d = model.zero_divisor();
    for i in 0..model.num_curves() {
        d.set_exc(i, Rational::from_integer(rng.random_range(0..=max_coeff).into()));
    }
    let s = model.num_strict();
    if s > 0 {
        for idx in sample(rng, s, s.min(2)) {
            d.set_strict(idx, Rational::from_integer(rng.random_range(0..=1i64).into()));
        }
    }
    d
}

pub fn random_antinef<R: Rng + ?Sized>(model: &ResolutionModel, rng: &mut R, max_coeff: i64) -> Result<Divisor> {
    let d = random_effective(model, rng, max_coeff);
    Ok(antinef_closure(model, &d)?.0)
}
