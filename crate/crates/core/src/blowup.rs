//! Generic blowup chains over free points of exceptional curves.
//!
//! Blowing up a point that lies on exactly one tracked curve `E` (and on no
//! strict curve) adds a `(-1)`-curve `C` meeting `E` once and lowers `E^2`
//! by one. The pullback of a divisor keeps every old coefficient and gives
//! `C` the coefficient of `E`; the relative canonical divisor gains `C` with
//! coefficient one more than that of `E`. A generic chain repeats this at a
//! general point of the newest curve, so its `k`-th curve has canonical
//! coefficient `k`.

use num_traits::{One, Zero};
use std::sync::Arc;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::{CurveLabel, Provenance, ResolutionModel};
use crate::rational::Rational;

/// Number of points `e_i` and chain length `n_i` for every base curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupPlan {
    pub points: Vec<usize>,
    pub lengths: Vec<usize>,
}

impl BlowupPlan {
    pub fn total_new_curves(&self) -> usize {
        self.points.iter().zip(&self.lengths).map(|(e, n)| e * n).sum()
    }
}

/// Linear pullback from divisors on the source model to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    source: u64,
    target: u64,
    old_curves: usize,
    /// For each appended curve, the (target) index whose coefficient it copies.
    sources: Vec<usize>,
}

impl Pullback {
    fn identity(model: &ResolutionModel) -> Self {
        Pullback {
            source: model.id(),
            target: model.id(),
            old_curves: model.num_curves(),
            sources: Vec::new(),
        }
    }

    pub fn apply(&self, d: &Divisor) -> Result<Divisor> {
        if d.model_id() != self.source {
            return Err(Error::ModelMismatch);
        }
        let mut exc = d.exc().to_vec();
        exc.reserve(self.sources.len());
        for &s in &self.sources {
            let v = exc[s].clone();
            exc.push(v);
        }
        Ok(Divisor::from_parts(self.target, exc, d.strict().to_vec()))
    }

    /// [`Pullback::apply`], then re-derives the new coefficients by solving
    /// for zero products with every new curve on `target`.
    pub fn apply_checked(&self, target: &ResolutionModel, d: &Divisor) -> Result<Divisor> {
        if target.id() != self.target {
            return Err(Error::ModelMismatch);
        }
        let fast = self.apply(d)?;
        if self.sources.is_empty() {
            return Ok(fast);
        }
        let fixed: Vec<bool> = (0..target.num_curves()).map(|i| i < self.old_curves).collect();
        let solved = target.relative_pullback(&fast, &fixed)?;
        if solved != fast {
            return Err(Error::Internal(
                "incremental pullback disagrees with the lattice solve".into(),
            ));
        }
        Ok(fast)
    }

    pub fn old_curves(&self) -> usize {
        self.old_curves
    }
}

/// The curves of one generic chain, in blowup order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainInfo {
    pub root: usize,
    pub point: usize,
    pub curves: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BlowupResult {
    pub new_model: Arc<ResolutionModel>,
    pub pullback: Pullback,
    /// Relative canonical divisor of the composite blowup.
    pub k_sigma: Divisor,
    pub chains: Vec<ChainInfo>,
}

/// Accumulates free-point blowups on a working copy of a model.
struct Builder {
    model: ResolutionModel,
    sources: Vec<usize>,
    k: Vec<Rational>,
    chains: Vec<ChainInfo>,
    centers: Vec<usize>,
    old_curves: usize,
}

impl Builder {
    fn new(base: &ResolutionModel) -> Self {
        Builder {
            model: base.clone(),
            sources: Vec::new(),
            k: vec![Rational::zero(); base.num_curves()],
            chains: Vec::new(),
            centers: Vec::new(),
            old_curves: base.num_curves(),
        }
    }

    fn blow_up(&mut self, center: usize, label: CurveLabel) -> usize {
        let c = self.model.blow_up_in_place(center, label);
        self.sources.push(center);
        let kc = &self.k[center] + Rational::one();
        self.k.push(kc);
        c
    }

    /// A chain of `length` blowups starting at a fresh free point of `root`.
    fn chain(&mut self, root: usize, length: usize) {
        if length == 0 {
            return;
        }
        let point = self.model.chains_on(root) + 1;
        let mut curves = Vec::with_capacity(length);
        let mut center = root;
        for step in 1..=length {
            center = self.blow_up(center, CurveLabel::Chain { root, point, step });
            curves.push(center);
        }
        self.centers.push(root);
        self.chains.push(ChainInfo { root, point, curves });
    }

    fn finish(mut self, base: &ResolutionModel) -> BlowupResult {
        if self.sources.is_empty() {
            let model = Arc::new(base.clone());
            return BlowupResult {
                pullback: Pullback::identity(base),
                k_sigma: model.zero_divisor(),
                new_model: model,
                chains: Vec::new(),
            };
        }
        self.model.set_provenance(Some(Provenance {
            parent: Arc::new(base.clone()),
            centers: self.centers,
        }));
        let model = Arc::new(self.model);
        let k_sigma = Divisor::from_parts(model.id(), self.k, vec![Rational::zero(); model.num_strict()]);
        BlowupResult {
            pullback: Pullback {
                source: base.id(),
                target: model.id(),
                old_curves: self.old_curves,
                sources: self.sources,
            },
            k_sigma,
            new_model: model,
            chains: self.chains,
        }
    }
}

/// Blows up one free point of curve `i`. If `i` is the newest curve of a
/// chain, the new curve continues that chain; otherwise it starts a new
/// chain rooted on `i`.
pub fn blow_up_free_point(model: &ResolutionModel, i: usize) -> Result<BlowupResult> {
    if i >= model.num_curves() {
        return Err(Error::CurveOutOfRange(i));
    }
    let mut b = Builder::new(model);
    match model.curve(i).label {
        CurveLabel::Chain { root, point, step } if model.chain_curve(root, point, step + 1).is_none() => {
            let c = b.blow_up(
                i,
                CurveLabel::Chain {
                    root,
                    point,
                    step: step + 1,
                },
            );
            b.centers.push(i);
            b.chains.push(ChainInfo {
                root,
                point,
                curves: vec![c],
            });
        }
        _ => b.chain(i, 1),
    }
    Ok(b.finish(model))
}

/// `n` successive blowups: first at a free point of curve `i`, then each at
/// a general point of the previous exceptional curve.
pub fn generic_chain(model: &ResolutionModel, i: usize, n: usize) -> Result<BlowupResult> {
    if i >= model.num_curves() {
        return Err(Error::CurveOutOfRange(i));
    }
    let mut b = Builder::new(model);
    b.chain(i, n);
    Ok(b.finish(model))
}

/// For every curve `i`, `points[i]` chains of length `lengths[i]` over
/// distinct free points of `E_i`.
pub fn apply_plan(model: &ResolutionModel, plan: &BlowupPlan) -> Result<BlowupResult> {
    let u = model.num_curves();
    if plan.points.len() != u || plan.lengths.len() != u {
        return Err(Error::PreconditionViolated(
            "blowup plan needs one entry per curve".into(),
        ));
    }
    let mut b = Builder::new(model);
    for i in 0..u {
        for _ in 0..plan.points[i] {
            b.chain(i, plan.lengths[i]);
        }
    }
    Ok(b.finish(model))
}

/// Checks of the generic chain lemma for one chain and one divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLemmaReport {
    /// `Ě(root) <= Ě(c_1) <= ... <= Ě(c_n)` componentwise.
    pub duals_monotone: bool,
    /// `a_0 <= a_1 <= ... <= a_n` along the chain.
    pub coefficients_monotone: bool,
    /// `a_0 < a_n`.
    pub strictly_increases: bool,
    /// `sum_k (-D.c_k) Ě(c_k) >= Ě(root)`.
    pub dominates: bool,
}

impl ChainLemmaReport {
    pub fn holds(&self) -> bool {
        self.duals_monotone && self.coefficients_monotone && self.strictly_increases == self.dominates
    }
}

pub fn verify_lemma_gen(model: &ResolutionModel, chain: &ChainInfo, d: &Divisor) -> Result<ChainLemmaReport> {
    if !d.is_integral() {
        return Err(Error::PreconditionViolated("divisor must be integral".into()));
    }
    if !crate::antinef::is_antinef(model, d)? {
        return Err(Error::PreconditionViolated("divisor must be antinef".into()));
    }
    if chain
        .curves
        .iter()
        .chain([&chain.root])
        .any(|&c| c >= model.num_curves())
    {
        return Err(Error::PreconditionViolated(
            "chain does not belong to this model".into(),
        ));
    }

    let mut duals = vec![model.dual_element(chain.root)?];
    for &c in &chain.curves {
        duals.push(model.dual_element(c)?);
    }
    let mut duals_monotone = true;
    for w in duals.windows(2) {
        duals_monotone &= w[0].le(&w[1])?;
    }

    let coeffs: Vec<&Rational> = std::iter::once(chain.root)
        .chain(chain.curves.iter().copied())
        .map(|c| d.exc_coeff(c))
        .collect();
    let coefficients_monotone = coeffs.windows(2).all(|w| w[0] <= w[1]);
    let strictly_increases = coeffs.first() < coeffs.last();

    let products = model.products(d)?;
    let mut weights = vec![Rational::zero(); model.num_curves()];
    for &c in &chain.curves {
        weights[c] = -products[c].clone();
    }
    let combination = model.dual_combination(&weights)?;
    let dominates = duals[0].le(&combination)?;

    Ok(ChainLemmaReport {
        duals_monotone,
        coefficients_monotone,
        strictly_increases,
        dominates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn a1() -> ResolutionModel {
        ResolutionModel::from_matrix(&[0], &[vec![-2]]).unwrap()
    }

    #[test]
    fn free_point_on_a1() {
        let m = a1();
        let r = blow_up_free_point(&m, 0).unwrap();
        let z = &r.new_model;
        assert_eq!(z.matrix(), vec![vec![-3, 1], vec![1, -1]]);
        assert!(z.check_negative_definite().is_negative_definite());

        let pulled = r.pullback.apply(&m.basis(0)).unwrap();
        assert_eq!(z.products(&pulled).unwrap(), vec![int(-2), int(0)]);

        assert_eq!(r.k_sigma.exc(), &[int(0), int(1)]);
        assert_eq!(z.products(&r.k_sigma).unwrap(), vec![int(1), int(-1)]);
        assert_eq!(z.curve_name(1), "E(E1,1,1)");
        assert_eq!(z.provenance().unwrap().centers, vec![0]);
    }

    #[test]
    fn empty_chain_is_identity() {
        let m = a1();
        let r = generic_chain(&m, 0, 0).unwrap();
        assert_eq!(r.new_model.id(), m.id());
        assert_eq!(r.pullback.apply(&m.basis(0)).unwrap(), m.basis(0));
        assert!(r.k_sigma.is_zero());
    }

    #[test]
    fn chain_of_one_equals_single_blowup() {
        let m = a1();
        let a = generic_chain(&m, 0, 1).unwrap();
        let b = blow_up_free_point(&m, 0).unwrap();
        assert_eq!(*a.new_model, *b.new_model);
        assert_eq!(a.k_sigma.exc(), b.k_sigma.exc());
    }

    #[test]
    fn chain_continues_at_tip() {
        let m = a1();
        let one = blow_up_free_point(&m, 0).unwrap();
        let two = blow_up_free_point(&one.new_model, 1).unwrap();
        let direct = generic_chain(&m, 0, 2).unwrap();
        assert_eq!(*two.new_model, *direct.new_model);
        assert_eq!(two.new_model.curve_name(2), "E(E1,1,2)");
    }

    #[test]
    fn chain_canonical_coefficients_count_up() {
        let m = a1();
        let r = generic_chain(&m, 0, 4).unwrap();
        let expected: Vec<Rational> = (0..5).map(int).collect();
        assert_eq!(r.k_sigma.exc(), expected.as_slice());
        let products = r.new_model.products(&r.k_sigma).unwrap();
        assert_eq!(products, vec![int(1), int(0), int(0), int(0), int(-1)]);
    }

    #[test]
    fn checked_pullback_agrees() {
        let m = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -3]]).unwrap();
        let plan = BlowupPlan {
            points: vec![2, 1],
            lengths: vec![3, 2],
        };
        let r = apply_plan(&m, &plan).unwrap();
        assert_eq!(r.new_model.num_curves(), 2 + plan.total_new_curves());
        let d = m.exc_divisor(&[5, -2]).unwrap();
        let pulled = r.pullback.apply_checked(&r.new_model, &d).unwrap();
        assert_eq!(&pulled.exc()[..2], d.exc());
    }

    #[test]
    fn first_chain_dual_is_pullback_plus_curve() {
        let m = a1();
        let r = generic_chain(&m, 0, 1).unwrap();
        let z = &r.new_model;
        let pulled = r.pullback.apply(&m.dual_element(0).unwrap()).unwrap();
        let expected = &pulled + &z.basis(1);
        assert_eq!(z.dual_element(1).unwrap(), expected);
        assert_eq!(z.dual_element(0).unwrap(), pulled);
    }

    #[test]
    fn pulled_back_antinef_is_flat_along_chain() {
        let m = a1();
        let r = generic_chain(&m, 0, 3).unwrap();
        let d = r.pullback.apply(&m.exc_divisor(&[2]).unwrap()).unwrap();
        let report = verify_lemma_gen(&r.new_model, &r.chains[0], &d).unwrap();
        assert!(report.holds());
        assert!(!report.strictly_increases);
        assert!(!report.dominates);
    }

    #[test]
    fn lemma_rejects_non_antinef() {
        let m = a1();
        let r = generic_chain(&m, 0, 2).unwrap();
        let d = r.new_model.basis(1);
        assert!(matches!(
            verify_lemma_gen(&r.new_model, &r.chains[0], &d),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
