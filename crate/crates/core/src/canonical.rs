//! Discrepancies, the log terminal test and multiplier-ideal divisors.

use num_traits::{One, Signed};

use crate::antinef::{antinef_closure, is_antinef};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::ResolutionModel;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// Coefficient of `E_i` in the relative canonical divisor.
    pub b: Vec<Rational>,
    pub log_terminal: bool,
    /// Curves with `b_i <= -1`.
    pub offenders: Vec<usize>,
}

/// Right-hand side of the adjunction system: `2 g_i - 2 - E_i^2`.
pub fn adjunction_rhs(model: &ResolutionModel) -> Vec<Rational> {
    model
        .curves()
        .iter()
        .map(|c| Rational::from_integer((2 * i64::from(c.genus) - 2 - c.self_int).into()))
        .collect()
}

/// Solves `sum_j b_j (E_j.E_i) = 2 g_i - 2 - E_i^2`.
pub fn discrepancies(model: &ResolutionModel) -> Result<DiscrepancyReport> {
    let b = model.factorization()?.solve(&adjunction_rhs(model));
    let minus_one = -Rational::one();
    let offenders: Vec<usize> = (0..b.len()).filter(|&i| b[i] <= minus_one).collect();
    Ok(DiscrepancyReport {
        log_terminal: offenders.is_empty(),
        b,
        offenders,
    })
}

/// `K_f = sum_i b_i E_i`.
pub fn relative_canonical(model: &ResolutionModel) -> Result<Divisor> {
    let report = discrepancies(model)?;
    model.divisor(report.b, vec![Rational::default(); model.num_strict()])
}

/// The antinef divisor `floor(lambda G - K_f)~` representing
/// `J(X, a^lambda)` for the integrally closed ideal `a` attached to `G`.
pub fn multiplier_divisor(model: &ResolutionModel, g: &Divisor, lambda: &Rational) -> Result<Divisor> {
    let k_f = relative_canonical(model)?;
    multiplier_divisor_with(model, &k_f, g, lambda)
}

/// As [`multiplier_divisor`], with the relative canonical divisor supplied.
pub fn multiplier_divisor_with(
    model: &ResolutionModel,
    k_f: &Divisor,
    g: &Divisor,
    lambda: &Rational,
) -> Result<Divisor> {
    if !lambda.is_positive() {
        return Err(Error::NonPositiveLambda(lambda.to_string()));
    }
    validate_ideal_divisor(model, g)?;
    let target = g.scale(lambda).checked_sub(k_f)?.floor();
    Ok(antinef_closure(model, &target)?.0)
}

/// Integral, effective and antinef: the divisors that stand for integrally
/// closed ideals.
pub fn validate_ideal_divisor(model: &ResolutionModel, g: &Divisor) -> Result<()> {
    let name = |i: usize| {
        if i < model.num_curves() {
            model.curve_name(i)
        } else {
            model.strict_curves()[i - model.num_curves()].label.clone()
        }
    };
    let coeffs: Vec<&Rational> = g.exc().iter().chain(g.strict()).collect();
    if let Some(i) = coeffs.iter().position(|c| !c.is_integer()) {
        return Err(Error::NonIntegralInput {
            curve: name(i),
            value: coeffs[i].to_string(),
        });
    }
    if let Some(i) = coeffs.iter().position(|c| c.is_negative()) {
        return Err(Error::NotEffective {
            curve: name(i),
            value: coeffs[i].to_string(),
        });
    }
    let products = model.products(g)?;
    if let Some(i) = products.iter().position(|p| p.is_positive()) {
        return Err(Error::NotAntinef {
            curve: name(i),
            value: products[i].to_string(),
        });
    }
    debug_assert!(is_antinef(model, g).unwrap_or(false));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn single(genus: i64, self_int: i64) -> ResolutionModel {
        ResolutionModel::from_matrix(&[genus], &[vec![self_int]]).unwrap()
    }

    #[test]
    fn discrepancy_examples() {
        let a1 = discrepancies(&single(0, -2)).unwrap();
        assert_eq!(a1.b, vec![int(0)]);
        assert!(a1.log_terminal);

        let m3 = discrepancies(&single(0, -3)).unwrap();
        assert_eq!(m3.b, vec![ratio(-1, 3)]);
        assert!(m3.log_terminal);

        let elliptic = discrepancies(&single(1, -1)).unwrap();
        assert_eq!(elliptic.b, vec![int(-1)]);
        assert!(!elliptic.log_terminal);
        assert_eq!(elliptic.offenders, vec![0]);
    }

    #[test]
    fn relative_canonical_examples() {
        assert!(relative_canonical(&single(0, -2)).unwrap().is_zero());
        assert_eq!(relative_canonical(&single(0, -3)).unwrap().exc(), &[ratio(-1, 3)]);
        assert_eq!(relative_canonical(&single(1, -1)).unwrap().exc(), &[int(-1)]);
    }

    #[test]
    fn multiplier_examples() {
        let a1 = single(0, -2);
        let g = a1.exc_divisor(&[2]).unwrap();
        assert_eq!(multiplier_divisor(&a1, &g, &ratio(1, 2)).unwrap(), a1.basis(0));
        assert!(multiplier_divisor(&a1, &g, &ratio(1, 4)).unwrap().is_zero());

        let elliptic = single(1, -1);
        let g = elliptic.exc_divisor(&[3]).unwrap();
        let j = multiplier_divisor(&elliptic, &g, &ratio(1, 10)).unwrap();
        assert!(j.exc()[0] >= int(1));
    }

    #[test]
    fn rejects_bad_inputs() {
        let a1 = single(0, -2);
        let g = a1.exc_divisor(&[2]).unwrap();
        assert!(matches!(
            multiplier_divisor(&a1, &g, &int(0)),
            Err(Error::NonPositiveLambda(_))
        ));
        let a2 = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
        let not_antinef = a2.exc_divisor(&[1, 0]).unwrap();
        assert!(matches!(
            multiplier_divisor(&a2, &not_antinef, &int(1)),
            Err(Error::NotAntinef { .. })
        ));
        let negative = a1.exc_divisor(&[-2]).unwrap();
        assert!(matches!(
            multiplier_divisor(&a1, &negative, &int(1)),
            Err(Error::NotEffective { .. })
        ));
    }
}
