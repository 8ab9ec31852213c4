//! Realizing an integrally closed ideal as a multiplier ideal.
//!
//! Given a log terminal model `f: Y -> X` and an integral antinef divisor
//! `F0` (the ideal `I = f_* O_Y(-F0)`), [`realize`] builds a blown-up model
//! `h: Z -> X`, an integral antinef divisor `G` on `Z` and a coefficient
//! `lambda` such that the multiplier-ideal divisor `floor(lambda G - K_h)~`
//! equals `F = g^* F0`. [`verify_certificate`] recomputes every step from the
//! base model and `F0` and checks each intermediate inequality separately.
//!
//! Global generation of `-G` is not computed. Integral antinef divisors are
//! identified with integrally closed ideals, which holds on rational
//! singularities; the certificate records this as an assumption.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

use crate::antinef::{antinef_closure, is_antinef};
use crate::blowup::{apply_plan, BlowupPlan, BlowupResult};
use crate::canonical::{discrepancies, validate_ideal_divisor};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::{CurveLabel, ResolutionModel};
use crate::rational::{frac, Rational};

pub const ASSUMPTION_GLOBAL_GENERATION: &str =
    "integral antinef divisors correspond to integrally closed ideals (rational singularity); -G is taken to be relatively globally generated";

#[derive(Debug, Clone)]
pub struct RealizationCertificate {
    pub base: Arc<ResolutionModel>,
    pub f0: Divisor,
    pub epsilon: Rational,
    /// `a_i`, the coefficient of `E_i` in `F0`.
    pub orders: Vec<Rational>,
    /// `b_i`, the discrepancy of `E_i`.
    pub discrepancies: Vec<Rational>,
    /// `e_i = -F0.E_i`, the number of chains over `E_i`.
    pub points: Vec<usize>,
    /// `n_i`, the length of each chain over `E_i`.
    pub chain_lengths: Vec<usize>,
    /// `g: Z -> Y` with `K_g` and the chain layout.
    pub blowup: BlowupResult,
    /// `F = g^* F0`.
    pub f: Divisor,
    /// `K_h = K_g + g^* K_f`.
    pub k_h: Divisor,
    /// `A`, integral and effective with `-A` relatively ample.
    pub ample: Divisor,
    pub mu: Rational,
    /// `N`, the least positive integer making `N (F + K_g + mu A)` integral.
    pub scale: BigInt,
    pub g: Divisor,
    pub lambda: Rational,
    pub f_prime: Divisor,
    pub closure_steps: usize,
    pub assumptions: Vec<&'static str>,
    pub verification: VerificationReport,
}

impl RealizationCertificate {
    pub fn blown_model(&self) -> &ResolutionModel {
        &self.blowup.new_model
    }

    pub fn k_g(&self) -> &Divisor {
        &self.blowup.k_sigma
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The three summands of the relative numerical decomposition of `F'` on
/// `Z`: the pullback of its pushforward, the base dual terms and the chain
/// dual terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub pullback_part: Divisor,
    pub base_terms: Divisor,
    pub chain_terms: Divisor,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub witness: Option<DecompositionWitness>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &'static str, outcome: Result<std::result::Result<(), String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(why)) => (false, why),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check { name, passed, detail });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{status} {}", c.name)?;
            } else {
                writeln!(f, "{status} {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn check_input(model: &ResolutionModel, f0: &Divisor) -> Result<Vec<Rational>> {
    let disc = discrepancies(model)?;
    if let Some(&i) = disc.offenders.first() {
        return Err(Error::NotLogTerminal {
            curve: model.curve_name(i),
            value: disc.b[i].to_string(),
        });
    }
    validate_ideal_divisor(model, f0)?;
    Ok(disc.b)
}

/// `epsilon = 1/2 min(1/2, min_i (1 + b_i)/(a_i + 1), 1/c_max)`, the last
/// term only when `F0` has a positive strict coefficient `c_max`.
pub fn choose_epsilon(model: &ResolutionModel, f0: &Divisor) -> Result<Rational> {
    let b = check_input(model, f0)?;
    Ok(epsilon_rule(f0, &b))
}

fn epsilon_rule(f0: &Divisor, b: &[Rational]) -> Rational {
    let one = Rational::one();
    let mut bound = half();
    for (a, b) in f0.exc().iter().zip(b) {
        bound = bound.min((&one + b) / (a + &one));
    }
    if let Some(c_max) = f0.strict().iter().max().filter(|c| c.is_positive()) {
        bound = bound.min(c_max.recip());
    }
    bound * half()
}

/// `A = d * sum_i Ě_i`, with `d` the least integer clearing denominators.
/// Then `A.E_j = -d` for every curve. Returns `(A, d)`.
pub fn build_ample_negative(model: &ResolutionModel) -> Result<(Divisor, BigInt)> {
    let ones = vec![Rational::one(); model.num_curves()];
    let sum = model.dual_combination(&ones)?;
    let d = ResolutionModel::denominator_of(&sum);
    Ok((sum.scale(&Rational::from_integer(d.clone())), d))
}

/// `mu = 1/2 min_E (1 - frac(c_E)) / ((1 + epsilon) alpha_E)` over curves
/// with `alpha_E > 0`, where `c = (1 + epsilon)(F + K_g) - K_h` and `alpha`
/// is the coefficient vector of `A`.
pub fn choose_mu(f: &Divisor, k_g: &Divisor, k_h: &Divisor, epsilon: &Rational, ample: &Divisor) -> Result<Rational> {
    let one_eps = Rational::one() + epsilon;
    let c = f.checked_add(k_g)?.scale(&one_eps).checked_sub(k_h)?;
    c.same_model(ample)?;
    let mut best: Option<Rational> = None;
    let pairs = c
        .exc()
        .iter()
        .zip(ample.exc())
        .chain(c.strict().iter().zip(ample.strict()));
    for (c_e, alpha) in pairs {
        if !alpha.is_positive() {
            continue;
        }
        let headroom = (Rational::one() - frac(c_e)) / (&one_eps * alpha);
        best = Some(match best {
            Some(b) => b.min(headroom),
            None => headroom,
        });
    }
    // With A = 0 (no exceptional curves) any mu works.
    Ok(best.unwrap_or_else(Rational::one) * half())
}

/// Runs the whole construction and verifies it.
pub fn realize(model: &ResolutionModel, f0: &Divisor) -> Result<RealizationCertificate> {
    let b = check_input(model, f0)?;
    let epsilon = epsilon_rule(f0, &b);
    let orders = f0.exc().to_vec();
    let plan = plan_for(model, f0, &orders, &b, &epsilon)?;
    let base = Arc::new(model.clone());
    let f0 = base_divisor(&base, f0)?;

    let blowup = apply_plan(&base, &plan)?;
    let z = blowup.new_model.clone();
    let k_g = blowup.k_sigma.clone();
    let f = blowup.pullback.apply_checked(&z, &f0)?;
    let k_f = base.divisor(b.clone(), vec![Rational::zero(); base.num_strict()])?;
    let k_h = k_g.checked_add(&blowup.pullback.apply_checked(&z, &k_f)?)?;

    let f_kg = f.checked_add(&k_g)?;
    if !is_antinef(&z, &f_kg)? {
        return Err(Error::Internal("F + K_g is not antinef on the blown-up model".into()));
    }

    let (ample, _) = build_ample_negative(&z)?;
    let mu = choose_mu(&f, &k_g, &k_h, &epsilon, &ample)?;
    let inner = f_kg.checked_add(&ample.scale(&mu))?;
    let scale = ResolutionModel::denominator_of(&inner);
    let g = inner.scale(&Rational::from_integer(scale.clone()));
    let lambda = (Rational::one() + &epsilon) / Rational::from_integer(scale.clone());

    let target = g.scale(&lambda).checked_sub(&k_h)?.floor();
    let (f_prime, trace) = antinef_closure(&z, &target)?;

    let mut cert = RealizationCertificate {
        base,
        f0,
        epsilon,
        orders,
        discrepancies: b,
        points: plan.points,
        chain_lengths: plan.lengths,
        blowup,
        f,
        k_h,
        ample,
        mu,
        scale,
        g,
        lambda,
        f_prime,
        closure_steps: trace.steps.len(),
        assumptions: vec![ASSUMPTION_GLOBAL_GENERATION],
        verification: VerificationReport::default(),
    };
    cert.verification = verify_certificate(&cert);
    Ok(cert)
}

/// Rebinds `f0` to `base` (a clone of its model with a new identity).
fn base_divisor(base: &ResolutionModel, f0: &Divisor) -> Result<Divisor> {
    base.divisor(f0.exc().to_vec(), f0.strict().to_vec())
}

fn plan_for(
    model: &ResolutionModel,
    f0: &Divisor,
    orders: &[Rational],
    b: &[Rational],
    epsilon: &Rational,
) -> Result<BlowupPlan> {
    let products = model.products(f0)?;
    let one = Rational::one();
    let mut points = Vec::with_capacity(products.len());
    let mut lengths = Vec::with_capacity(products.len());
    for i in 0..products.len() {
        points.push(to_count(&-&products[i])?);
        lengths.push(to_count(&chain_length_formula(&orders[i], &b[i], epsilon, &one))?);
    }
    Ok(BlowupPlan { points, lengths })
}

/// `floor((1 + b)/epsilon - (a + 1))`.
fn chain_length_formula(a: &Rational, b: &Rational, epsilon: &Rational, one: &Rational) -> Rational {
    ((one + b) / epsilon - (a + one)).floor()
}

fn to_count(r: &Rational) -> Result<usize> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::Internal(format!("expected a non-negative integer, got {r}")));
    }
    usize::try_from(r.to_integer()).map_err(|_| Error::PreconditionViolated(format!("count {r} is too large")))
}

type Outcome = Result<std::result::Result<(), String>>;

fn expect(cond: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Recomputes the construction from `cert.base` and `cert.f0`, trusting
/// only the stored choices (`epsilon`, `n_i`, `e_i`, `A`, `mu`, `N`, `G`,
/// `lambda`) after checking them against their defining conditions.
pub fn verify_certificate(cert: &RealizationCertificate) -> VerificationReport {
    let mut report = VerificationReport::default();
    let base = &*cert.base;
    let z = &*cert.blowup.new_model;
    let one = Rational::one();
    let u = base.num_curves();

    report.record(
        "log-terminal",
        (|| -> Outcome {
            let disc = discrepancies(base)?;
            Ok(expect(disc.b == cert.discrepancies, || {
                "stored discrepancies differ from adjunction solve".into()
            })
            .and_then(|_| {
                expect(disc.log_terminal, || {
                    format!("b <= -1 along curves {:?}", disc.offenders)
                })
            }))
        })(),
    );

    report.record(
        "input-ideal-divisor",
        (|| -> Outcome {
            if cert.f0.model_id() != base.id() {
                return Err(Error::ModelMismatch);
            }
            Ok(match validate_ideal_divisor(base, &cert.f0) {
                Ok(()) => expect(cert.orders.as_slice() == cert.f0.exc(), || {
                    "stored a_i differ from F0".into()
                }),
                Err(e) => Err(e.to_string()),
            })
        })(),
    );

    report.record(
        "epsilon-choice",
        (|| -> Outcome {
            let eps = &cert.epsilon;
            if !(eps.is_positive() && *eps < half()) {
                return Ok(Err(format!("epsilon = {eps} not in (0, 1/2)")));
            }
            for i in 0..u {
                let lhs = eps * (&cert.orders[i] + &one);
                if lhs >= &one + &cert.discrepancies[i] {
                    return Ok(Err(format!("epsilon (a + 1) >= 1 + b along {}", base.curve_name(i))));
                }
            }
            let strict_floor = cert.f0.strict_part().scale(eps).floor();
            Ok(expect(strict_floor.is_zero(), || {
                "floor(epsilon f^-1_* f_* F0) != 0".into()
            }))
        })(),
    );

    report.record(
        "point-counts",
        (|| -> Outcome {
            let products = base.products(&cert.f0)?;
            for i in 0..u {
                if Rational::from_integer(cert.points[i].into()) != -&products[i] {
                    return Ok(Err(format!(
                        "e = {} but -F0.E = {} along {}",
                        cert.points[i],
                        -&products[i],
                        base.curve_name(i)
                    )));
                }
            }
            Ok(Ok(()))
        })(),
    );

    report.record(
        "chain-length-formula",
        Ok((|| {
            for i in 0..u {
                let n = chain_length_formula(&cert.orders[i], &cert.discrepancies[i], &cert.epsilon, &one);
                expect(Rational::from_integer(cert.chain_lengths[i].into()) == n, || {
                    format!(
                        "n = {} but formula gives {n} along {}",
                        cert.chain_lengths[i],
                        base.curve_name(i)
                    )
                })?;
            }
            Ok(())
        })()),
    );

    report.record(
        "chain-length-window",
        Ok((|| {
            for i in 0..u {
                let (a, b, eps) = (&cert.orders[i], &cert.discrepancies[i], &cert.epsilon);
                let n = Rational::from_integer(cert.chain_lengths[i].into());
                let lo = b / eps - a;
                let hi = (b + &one) / eps - a;
                expect(lo <= n && n < hi, || {
                    format!("n = {n} outside [{lo}, {hi}) along {}", base.curve_name(i))
                })?;
            }
            Ok(())
        })()),
    );

    report.record("blowup-structure", Ok(check_structure(cert)));

    report.record(
        "canonical-of-blowup",
        (|| -> Outcome {
            let k_g = cert.k_g();
            let products = z.products(k_g)?;
            for i in 0..u {
                if !k_g.exc_coeff(i).is_zero() {
                    return Ok(Err(format!("K_g has coefficient along {}", z.curve_name(i))));
                }
                let chains = if cert.chain_lengths[i] > 0 { cert.points[i] } else { 0 };
                if products[i] != Rational::from_integer(chains.into()) {
                    return Ok(Err(format!("K_g.E = {} along {}", products[i], z.curve_name(i))));
                }
            }
            for chain in &cert.blowup.chains {
                let n = chain.curves.len();
                for (k, &c) in chain.curves.iter().enumerate() {
                    let want_coeff = Rational::from_integer((k + 1).into());
                    let want_prod = if k + 1 == n { -&one } else { Rational::zero() };
                    if *k_g.exc_coeff(c) != want_coeff || products[c] != want_prod {
                        return Ok(Err(format!("K_g wrong along {}", z.curve_name(c))));
                    }
                }
            }
            Ok(Ok(()))
        })(),
    );

    let recomputed = (|| -> Result<(Divisor, Divisor, Divisor)> {
        let f = cert.blowup.pullback.apply_checked(z, &cert.f0)?;
        let k_f = base.divisor(cert.discrepancies.clone(), vec![Rational::zero(); base.num_strict()])?;
        let g_k_f = cert.blowup.pullback.apply_checked(z, &k_f)?;
        let k_h = cert.k_g().checked_add(&g_k_f)?;
        Ok((f, g_k_f, k_h))
    })();
    let (f, g_k_f, k_h) = match recomputed {
        Ok(v) => v,
        Err(e) => {
            report.record("pullback", Err(e));
            return report;
        }
    };
    report.record(
        "pullback",
        Ok(expect(f == cert.f && k_h == cert.k_h, || {
            "stored F or K_h differs from the recomputed pullback".into()
        })),
    );

    let f_kg = &f + cert.k_g();
    report.record(
        "F+K_g-antinef",
        (|| -> Outcome { Ok(expect(is_antinef(z, &f_kg)?, || "some (F + K_g).E > 0".into())) })(),
    );

    report.record(
        "ample-negative",
        (|| -> Outcome {
            let a = &cert.ample;
            a.same_model(&f)?;
            let products = z.products(a)?;
            Ok(expect(
                a.is_integral() && a.is_effective() && products.iter().all(|p| p.is_negative()),
                || "A must be integral, effective, with A.E < 0 for all E".into(),
            ))
        })(),
    );

    let one_eps = &one + &cert.epsilon;
    report.record(
        "mu-perturbation-floor",
        (|| -> Outcome {
            if !cert.mu.is_positive() {
                return Ok(Err("mu must be positive".into()));
            }
            let perturbed = f_kg
                .checked_add(&cert.ample.scale(&cert.mu))?
                .scale(&one_eps)
                .checked_sub(&k_h)?;
            let plain = f_kg.scale(&one_eps).checked_sub(&k_h)?;
            Ok(expect(perturbed.floor() == plain.floor(), || {
                "floor((1+eps)(F+K_g+mu A) - K_h) != floor((1+eps)(F+K_g) - K_h)".into()
            }))
        })(),
    );

    report.record(
        "G-definition",
        (|| -> Outcome {
            if !cert.scale.is_positive() {
                return Ok(Err("N must be positive".into()));
            }
            let want = f_kg
                .checked_add(&cert.ample.scale(&cert.mu))?
                .scale(&Rational::from_integer(cert.scale.clone()));
            Ok(expect(want == cert.g, || "G != N(F + K_g + mu A)".into())
                .and_then(|_| expect(cert.g.is_integral(), || "G is not integral".into())))
        })(),
    );

    report.record(
        "lambda-definition",
        Ok(expect(
            cert.scale.is_positive() && cert.lambda == &one_eps / Rational::from_integer(cert.scale.clone()),
            || format!("lambda = {} but (1+eps)/N = {}/{}", cert.lambda, one_eps, cert.scale),
        )),
    );

    let floor_div = match cert.g.scale(&cert.lambda).checked_sub(&k_h) {
        Ok(d) => d.floor(),
        Err(e) => {
            report.record("floor-identity", Err(e));
            return report;
        }
    };
    report.record(
        "floor-identity",
        (|| -> Outcome {
            let correction = f_kg.scale(&cert.epsilon).checked_sub(&g_k_f)?.floor();
            Ok(expect(floor_div == &f + &correction, || {
                "floor(lambda G - K_h) != F + floor(eps(F+K_g) - g^*K_f)".into()
            }))
        })(),
    );

    let f_prime = match antinef_closure(z, &floor_div) {
        Ok((d, _)) => d,
        Err(e) => {
            report.record("closure-of-floor", Err(e));
            return report;
        }
    };
    report.record(
        "closure-of-floor",
        Ok(expect(f_prime == cert.f_prime, || {
            "stored F' is not the antinef closure of floor(lambda G - K_h)".into()
        })),
    );

    report.record(
        "F'<=F",
        (|| -> Outcome { Ok(expect(f_prime.le(&f)?, || first_difference(z, &f_prime, &f, "F' > F"))) })(),
    );

    report.record(
        "pushforward-preserved",
        (|| -> Outcome {
            Ok(expect(z.pushforward(&f_prime)? == z.pushforward(&f)?, || {
                "h_*F' != h_*F".into()
            }))
        })(),
    );

    report.record(
        "chain-end-orders",
        Ok((|| {
            for chain in &cert.blowup.chains {
                let Some(&tip) = chain.curves.last() else { continue };
                let (fp, ft, fr) = (f_prime.exc_coeff(tip), f.exc_coeff(tip), f.exc_coeff(chain.root));
                expect(fp == ft && ft == fr, || {
                    format!("orders along {} are F'={fp}, F={ft}, root F={fr}", z.curve_name(tip))
                })?;
            }
            Ok(())
        })()),
    );

    let mut products_fp = None;
    report.record(
        "dual-domination",
        (|| -> Outcome {
            let pfp = z.products(&f_prime)?;
            let pf = z.products(&f)?;
            for i in 0..u {
                let mut lhs_w = vec![Rational::zero(); z.num_curves()];
                lhs_w[i] = -&pfp[i];
                for chain in cert.blowup.chains.iter().filter(|c| c.root == i) {
                    for &c in &chain.curves {
                        lhs_w[c] = -&pfp[c];
                    }
                }
                let mut rhs_w = vec![Rational::zero(); z.num_curves()];
                rhs_w[i] = -&pf[i];
                let lhs = z.dual_combination(&lhs_w)?;
                let rhs = z.dual_combination(&rhs_w)?;
                if !rhs.le(&lhs)? {
                    return Ok(Err(format!("domination fails over {}", z.curve_name(i))));
                }
            }
            products_fp = Some(pfp);
            Ok(Ok(()))
        })(),
    );

    let mut witness_slot = None;
    let outcome = (|| -> Outcome {
        let pfp = match products_fp.take() {
            Some(p) => p,
            None => z.products(&f_prime)?,
        };
        let mut base_w = vec![Rational::zero(); z.num_curves()];
        let mut chain_w = vec![Rational::zero(); z.num_curves()];
        for (c, p) in pfp.iter().enumerate() {
            if c < u {
                base_w[c] = -p;
            } else {
                chain_w[c] = -p;
            }
        }
        let witness = DecompositionWitness {
            pullback_part: z.numerical_pullback(&z.pushforward(&f_prime)?)?,
            base_terms: z.dual_combination(&base_w)?,
            chain_terms: z.dual_combination(&chain_w)?,
        };
        let sum = &(&witness.pullback_part + &witness.base_terms) + &witness.chain_terms;
        witness_slot = Some(witness);
        Ok(expect(sum == f_prime, || "decomposition does not sum to F'".into()))
    })();
    report.record("decomposition-reconstructs", outcome);
    report.witness = witness_slot;

    report.record(
        "final-inequality",
        (|| -> Outcome {
            let pf = z.products(&f)?;
            let mut w = vec![Rational::zero(); z.num_curves()];
            for i in 0..u {
                w[i] = -&pf[i];
            }
            let lower = &z.numerical_pullback(&z.pushforward(&f)?)? + &z.dual_combination(&w)?;
            if lower != f {
                return Ok(Err("h^*h_*F + sum (-F.E(i)) Ě(i) != F".into()));
            }
            Ok(expect(lower.le(&f_prime)?, || {
                first_difference(z, &lower, &f_prime, "F' < F")
            }))
        })(),
    );

    report.record(
        "F'=F",
        Ok(expect(f_prime == f, || first_difference(z, &f_prime, &f, "F' != F"))),
    );

    report
}

fn first_difference(z: &ResolutionModel, x: &Divisor, y: &Divisor, what: &str) -> String {
    for i in 0..x.exc().len() {
        if x.exc()[i] != y.exc()[i] {
            return format!("{what} along {}: {} vs {}", z.curve_name(i), x.exc()[i], y.exc()[i]);
        }
    }
    for s in 0..x.strict().len() {
        if x.strict()[s] != y.strict()[s] {
            let name = &z.strict_curves()[s].label;
            return format!("{what} along {name}: {} vs {}", x.strict()[s], y.strict()[s]);
        }
    }
    what.to_string()
}

fn check_structure(cert: &RealizationCertificate) -> std::result::Result<(), String> {
    let base = &*cert.base;
    let z = &*cert.blowup.new_model;
    let u = base.num_curves();
    let expected: usize = (0..u)
        .map(|i| {
            if cert.chain_lengths[i] > 0 {
                cert.points[i] * cert.chain_lengths[i]
            } else {
                0
            }
        })
        .sum();
    expect(z.num_curves() == u + expected, || {
        format!("Z has {} curves, expected {}", z.num_curves(), u + expected)
    })?;
    let mut counts = vec![0usize; u];
    for chain in &cert.blowup.chains {
        expect(chain.root < u, || "chain rooted off the base curves".into())?;
        counts[chain.root] += 1;
        expect(chain.curves.len() == cert.chain_lengths[chain.root], || {
            format!(
                "chain over {} has length {}",
                base.curve_name(chain.root),
                chain.curves.len()
            )
        })?;
        let mut prev = chain.root;
        for (k, &c) in chain.curves.iter().enumerate() {
            let ok = z.curve(c).label
                == CurveLabel::Chain {
                    root: chain.root,
                    point: chain.point,
                    step: k + 1,
                }
                && z.intersection(c, prev) == 1
                && z.neighbours(c).len() <= 2;
            expect(ok, || format!("curve {} is not a generic chain curve", z.curve_name(c)))?;
            prev = c;
        }
    }
    for i in 0..u {
        let want = if cert.chain_lengths[i] > 0 { cert.points[i] } else { 0 };
        expect(counts[i] == want, || {
            format!("{} chains over {}, expected {want}", counts[i], base.curve_name(i))
        })?;
    }
    Ok(())
}
