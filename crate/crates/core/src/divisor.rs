//! Divisors supported on the exceptional locus and the tracked strict curves.

use num_traits::{Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::lattice::ResolutionModel;
use crate::rational::Rational;

/// A `Q`-divisor on a fixed [`ResolutionModel`].
///
/// `exc[i]` is the coefficient along exceptional curve `i` and `strict[s]`
/// the coefficient along strict curve `s`, both in model order. A divisor
/// remembers the identity of its model; mixing divisors from different
/// models is an error.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub(crate) model: u64,
    pub(crate) exc: Vec<Rational>,
    pub(crate) strict: Vec<Rational>,
}

impl Divisor {
    pub(crate) fn from_parts(model: u64, exc: Vec<Rational>, strict: Vec<Rational>) -> Self {
        Divisor { model, exc, strict }
    }

    pub fn model_id(&self) -> u64 {
        self.model
    }

    pub fn exc(&self) -> &[Rational] {
        &self.exc
    }

    pub fn strict(&self) -> &[Rational] {
        &self.strict
    }

    pub fn exc_coeff(&self, i: usize) -> &Rational {
        &self.exc[i]
    }

    pub fn strict_coeff(&self, s: usize) -> &Rational {
        &self.strict[s]
    }

    pub fn set_exc(&mut self, i: usize, value: Rational) {
        self.exc[i] = value;
    }

    pub fn set_strict(&mut self, s: usize, value: Rational) {
        self.strict[s] = value;
    }

    fn coeffs(&self) -> impl Iterator<Item = &Rational> {
        self.exc.iter().chain(self.strict.iter())
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Divisor {
        Divisor {
            model: self.model,
            exc: self.exc.iter().map(&f).collect(),
            strict: self.strict.iter().map(&f).collect(),
        }
    }

    fn zip(&self, other: &Divisor, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Divisor> {
        self.same_model(other)?;
        Ok(Divisor {
            model: self.model,
            exc: self.exc.iter().zip(&other.exc).map(|(a, b)| f(a, b)).collect(),
            strict: self.strict.iter().zip(&other.strict).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn same_model(&self, other: &Divisor) -> Result<()> {
        if self.model == other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().all(Rational::is_integer)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs().all(|c| !c.is_negative())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Divisor) -> Result<bool> {
        self.same_model(other)?;
        Ok(self.coeffs().zip(other.coeffs()).all(|(a, b)| a <= b))
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &Rational) -> Divisor {
        self.map(|c| c * factor)
    }

    /// Componentwise minimum over exceptional and strict coefficients.
    pub fn meet(&self, other: &Divisor) -> Result<Divisor> {
        self.zip(other, |a, b| a.min(b).clone())
    }

    pub fn floor(&self) -> Divisor {
        self.map(Rational::floor)
    }

    pub fn ceil(&self) -> Divisor {
        self.map(Rational::ceil)
    }

    /// Same coefficients with every exceptional one dropped.
    pub fn strict_part(&self) -> Divisor {
        Divisor {
            model: self.model,
            exc: vec![Rational::zero(); self.exc.len()],
            strict: self.strict.clone(),
        }
    }

    pub fn exceptional_part(&self) -> Divisor {
        Divisor {
            model: self.model,
            exc: self.exc.clone(),
            strict: vec![Rational::zero(); self.strict.len()],
        }
    }

    /// Sum of all coefficients.
    pub fn degree_sum(&self) -> Rational {
        self.coeffs().sum()
    }

    /// Renders as `[e1 e2 ...]`, followed by `| s1 ...` when strict curves exist.
    pub fn to_vector_string(&self) -> String {
        let join = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        if self.strict.is_empty() {
            format!("[{}]", join(&self.exc))
        } else {
            format!("[{} | {}]", join(&self.exc), join(&self.strict))
        }
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        self.checked_add(rhs).expect("divisors on different models")
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        self.checked_sub(rhs).expect("divisors on different models")
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        self.map(|c| -c)
    }
}

impl Mul<&Divisor> for &Rational {
    type Output = Divisor;

    fn mul(self, rhs: &Divisor) -> Divisor {
        rhs.scale(self)
    }
}

/// Output of the relative numerical decomposition
/// `D = f^* f_* D + sum_i (-D.E_i) Ě_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub pullback_part: Divisor,
    pub dual_coeffs: Vec<Rational>,
}

impl Decomposition {
    /// Sums the two parts back into a divisor.
    pub fn reconstruct(&self, model: &ResolutionModel) -> Result<Divisor> {
        let dual = model.dual_combination(&self.dual_coeffs)?;
        self.pullback_part.checked_add(&dual)
    }
}

/// Splits `D` into the numerical pullback of its pushforward plus a
/// combination of dual basis divisors weighted by `-D.E_i`.
pub fn decompose(model: &ResolutionModel, d: &Divisor) -> Result<Decomposition> {
    let products = model.products(d)?;
    let pullback_part = model.numerical_pullback(&model.pushforward(d)?)?;
    Ok(Decomposition {
        pullback_part,
        dual_coeffs: products.into_iter().map(|p| -p).collect(),
    })
}
