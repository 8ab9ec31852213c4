//! The exceptional intersection lattice of a resolution.
//!
//! A [`ResolutionModel`] is the weighted dual graph of the exceptional curves
//! `E_1, ..., E_u` together with incidence data for finitely many strict
//! transform curves. Strict curves only carry their intersection numbers with
//! exceptional curves; their own self-intersections never enter the pairing
//! `Div(Y) x Λ -> Z`, so they are not stored.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::linalg::{dense_solve, Factorization};
use crate::rational::{common_denominator, Rational};

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed)
}

/// How an exceptional curve came to exist.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurveLabel {
    /// A curve of the input resolution.
    Base(String),
    /// The `step`-th curve of the `point`-th generic blowup chain rooted on
    /// curve `root`. `point` and `step` start at 1.
    Chain { root: usize, point: usize, step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcCurve {
    pub label: CurveLabel,
    pub genus: u32,
    pub self_int: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictCurve {
    pub label: String,
    /// Intersection number with each exceptional curve, in model order.
    pub incidence: Vec<i64>,
}

/// Link back to the model a blowup was performed on.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub parent: Arc<ResolutionModel>,
    /// Index, in the parent, of the curve carrying each blown-up chain root.
    pub centers: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ResolutionModel {
    id: u64,
    curves: Vec<ExcCurve>,
    adjacency: Vec<Vec<(usize, i64)>>,
    strict: Vec<StrictCurve>,
    provenance: Option<Provenance>,
    factor: OnceLock<std::result::Result<Arc<Factorization>, Error>>,
}

impl PartialEq for ResolutionModel {
    fn eq(&self, other: &Self) -> bool {
        self.curves == other.curves && self.adjacency == other.adjacency && self.strict == other.strict
    }
}

impl Eq for ResolutionModel {}

/// One `curve` entry of a graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub name: String,
    pub genus: i64,
    pub self_int: i64,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetSpec {
    pub a: String,
    pub b: String,
    pub multiplicity: i64,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictSpec {
    pub name: String,
    pub meets: Vec<(String, i64)>,
    pub line: Option<usize>,
}

/// Unvalidated description of a resolution graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDescription {
    pub curves: Vec<CurveSpec>,
    pub meets: Vec<MeetSpec>,
    pub strict: Vec<StrictSpec>,
}

/// Validates a description and builds the model.
pub fn build_model(desc: &GraphDescription) -> Result<ResolutionModel> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut curves = Vec::with_capacity(desc.curves.len());
    for c in &desc.curves {
        if index.insert(c.name.as_str(), curves.len()).is_some() {
            return Err(Error::malformed(c.line, format!("duplicate curve `{}`", c.name)));
        }
        if c.genus < 0 {
            return Err(Error::malformed(
                c.line,
                format!("genus must be non-negative, got {}", c.genus),
            ));
        }
        if c.self_int >= 0 {
            return Err(Error::malformed(
                c.line,
                format!("self-intersection must be negative, got {}", c.self_int),
            ));
        }
        curves.push(ExcCurve {
            label: CurveLabel::Base(c.name.clone()),
            genus: c.genus as u32,
            self_int: c.self_int,
        });
    }

    let n = curves.len();
    let mut pairs: HashMap<(usize, usize), i64> = HashMap::new();
    for m in &desc.meets {
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::malformed(m.line, format!("unknown curve `{name}`")))
        };
        let (a, b) = (lookup(&m.a)?, lookup(&m.b)?);
        if a == b {
            return Err(Error::malformed(m.line, format!("curve `{}` cannot meet itself", m.a)));
        }
        if m.multiplicity <= 0 {
            return Err(Error::malformed(
                m.line,
                format!("meeting multiplicity must be positive, got {}", m.multiplicity),
            ));
        }
        if let Some(&prev) = pairs.get(&(a, b)) {
            if prev != m.multiplicity {
                return Err(Error::malformed(
                    m.line,
                    format!(
                        "asymmetric intersection: {}.{} = {} but {}.{} = {}",
                        m.b, m.a, prev, m.a, m.b, m.multiplicity
                    ),
                ));
            }
            continue;
        }
        pairs.insert((a, b), m.multiplicity);
        pairs.insert((b, a), m.multiplicity);
    }
    let mut adjacency = vec![Vec::new(); n];
    for (&(a, b), &w) in &pairs {
        adjacency[a].push((b, w));
    }
    for row in &mut adjacency {
        row.sort_unstable();
    }

    let mut strict = Vec::with_capacity(desc.strict.len());
    let mut strict_names: HashMap<&str, ()> = HashMap::new();
    for s in &desc.strict {
        if index.contains_key(s.name.as_str()) || strict_names.insert(s.name.as_str(), ()).is_some() {
            return Err(Error::malformed(s.line, format!("duplicate curve `{}`", s.name)));
        }
        let mut incidence = vec![0i64; n];
        for (name, mult) in &s.meets {
            let i = *index
                .get(name.as_str())
                .ok_or_else(|| Error::malformed(s.line, format!("unknown exceptional curve `{name}`")))?;
            if *mult <= 0 {
                return Err(Error::malformed(
                    s.line,
                    format!("incidence must be positive, got {mult}"),
                ));
            }
            if incidence[i] != 0 {
                return Err(Error::malformed(s.line, format!("incidence with `{name}` given twice")));
            }
            incidence[i] = *mult;
        }
        strict.push(StrictCurve {
            label: s.name.clone(),
            incidence,
        });
    }

    Ok(ResolutionModel::from_raw(curves, adjacency, strict, None))
}

/// Outcome of [`ResolutionModel::check_negative_definite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definiteness {
    NegativeDefinite,
    /// An integral vector `v` with `v.M.v >= 0`.
    Indefinite {
        witness: Vec<BigInt>,
    },
}

impl Definiteness {
    pub fn is_negative_definite(&self) -> bool {
        matches!(self, Definiteness::NegativeDefinite)
    }
}

impl ResolutionModel {
    pub(crate) fn from_raw(
        curves: Vec<ExcCurve>,
        adjacency: Vec<Vec<(usize, i64)>>,
        strict: Vec<StrictCurve>,
        provenance: Option<Provenance>,
    ) -> Self {
        ResolutionModel {
            id: fresh_id(),
            curves,
            adjacency,
            strict,
            provenance,
            factor: OnceLock::new(),
        }
    }

    /// Builds a model with curves `E1, E2, ...` from a genus list and a
    /// symmetric intersection matrix.
    pub fn from_matrix(genera: &[i64], matrix: &[Vec<i64>]) -> Result<Self> {
        let n = matrix.len();
        if genera.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::malformed(None, "matrix must be square and match the genus list"));
        }
        let name = |i: usize| format!("E{}", i + 1);
        let mut desc = GraphDescription::default();
        for i in 0..n {
            desc.curves.push(CurveSpec {
                name: name(i),
                genus: genera[i],
                self_int: matrix[i][i],
                line: None,
            });
            for j in 0..n {
                if i == j {
                    continue;
                }
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::malformed(
                        None,
                        format!(
                            "asymmetric intersection: {}.{} = {} but {}.{} = {}",
                            name(i),
                            name(j),
                            matrix[i][j],
                            name(j),
                            name(i),
                            matrix[j][i]
                        ),
                    ));
                }
                if matrix[i][j] < 0 {
                    return Err(Error::malformed(
                        None,
                        "off-diagonal intersections must be non-negative",
                    ));
                }
                if i < j && matrix[i][j] > 0 {
                    desc.meets.push(MeetSpec {
                        a: name(i),
                        b: name(j),
                        multiplicity: matrix[i][j],
                        line: None,
                    });
                }
            }
        }
        build_model(&desc)
    }

    /// Appends a strict curve; used when assembling models programmatically.
    pub fn with_strict(mut self, label: &str, incidence: Vec<i64>) -> Result<Self> {
        if incidence.len() != self.curves.len() || incidence.iter().any(|&m| m < 0) {
            return Err(Error::malformed(
                None,
                "strict incidence must be non-negative, one per curve",
            ));
        }
        self.strict.push(StrictCurve {
            label: label.to_string(),
            incidence,
        });
        self.id = fresh_id();
        self.factor = OnceLock::new();
        Ok(self)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn num_curves(&self) -> usize {
        self.curves.len()
    }

    pub fn num_strict(&self) -> usize {
        self.strict.len()
    }

    pub fn curves(&self) -> &[ExcCurve] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &ExcCurve {
        &self.curves[i]
    }

    pub fn strict_curves(&self) -> &[StrictCurve] {
        &self.strict
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub(crate) fn set_provenance(&mut self, provenance: Option<Provenance>) {
        self.provenance = provenance;
    }

    /// Off-diagonal neighbours of curve `i` with meeting multiplicities.
    pub fn neighbours(&self, i: usize) -> &[(usize, i64)] {
        &self.adjacency[i]
    }

    /// `E_i . E_j`.
    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return self.curves[i].self_int;
        }
        self.adjacency[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.adjacency[i][pos].1)
            .unwrap_or(0)
    }

    /// Row `i` of the intersection matrix.
    pub fn row(&self, i: usize) -> Vec<i64> {
        (0..self.num_curves()).map(|j| self.intersection(i, j)).collect()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.num_curves()).map(|i| self.row(i)).collect()
    }

    /// Display name: the input name for base curves, `E(root,j,k)` for
    /// chain curves.
    pub fn curve_name(&self, i: usize) -> String {
        match &self.curves[i].label {
            CurveLabel::Base(name) => name.clone(),
            CurveLabel::Chain { root, point, step } => {
                format!("E({},{},{})", self.curve_name(*root), point, step)
            }
        }
    }

    pub fn find_curve(&self, name: &str) -> Option<usize> {
        (0..self.num_curves()).find(|&i| self.curve_name(i) == name)
    }

    pub fn find_strict(&self, name: &str) -> Option<usize> {
        self.strict.iter().position(|s| s.label == name)
    }

    /// Index of chain curve `(root, point, step)` if it exists.
    pub fn chain_curve(&self, root: usize, point: usize, step: usize) -> Option<usize> {
        let want = CurveLabel::Chain { root, point, step };
        self.curves.iter().position(|c| c.label == want)
    }

    /// Number of chains rooted on curve `root`.
    pub fn chains_on(&self, root: usize) -> usize {
        self.curves
            .iter()
            .filter(|c| matches!(c.label, CurveLabel::Chain { root: r, step: 1, .. } if r == root))
            .count()
    }

    // ---- divisors -------------------------------------------------------

    pub fn zero_divisor(&self) -> Divisor {
        Divisor::from_parts(
            self.id,
            vec![Rational::zero(); self.num_curves()],
            vec![Rational::zero(); self.num_strict()],
        )
    }

    /// Divisor from explicit coefficient vectors.
    pub fn divisor(&self, exc: Vec<Rational>, strict: Vec<Rational>) -> Result<Divisor> {
        if exc.len() != self.num_curves() || strict.len() != self.num_strict() {
            return Err(Error::PreconditionViolated(format!(
                "divisor needs {} exceptional and {} strict coefficients, got {} and {}",
                self.num_curves(),
                self.num_strict(),
                exc.len(),
                strict.len()
            )));
        }
        Ok(Divisor::from_parts(self.id, exc, strict))
    }

    /// Integral divisor supported on exceptional curves only.
    pub fn exc_divisor(&self, coeffs: &[i64]) -> Result<Divisor> {
        self.divisor(
            coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
            vec![Rational::zero(); self.num_strict()],
        )
    }

    /// The prime divisor `E_i`.
    pub fn basis(&self, i: usize) -> Divisor {
        let mut d = self.zero_divisor();
        d.exc[i] = Rational::from_integer(1.into());
        d
    }

    /// The prime divisor along strict curve `s`.
    pub fn strict_basis(&self, s: usize) -> Divisor {
        let mut d = self.zero_divisor();
        d.strict[s] = Rational::from_integer(1.into());
        d
    }

    fn owns(&self, d: &Divisor) -> Result<()> {
        if d.model == self.id {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    /// `D . E_i`, including strict-curve contributions.
    pub fn intersect(&self, d: &Divisor, i: usize) -> Result<Rational> {
        self.owns(d)?;
        if i >= self.num_curves() {
            return Err(Error::CurveOutOfRange(i));
        }
        Ok(self.product_at(d, i))
    }

    fn product_at(&self, d: &Divisor, i: usize) -> Rational {
        let mut acc = &d.exc[i] * BigInt::from(self.curves[i].self_int);
        for &(j, m) in &self.adjacency[i] {
            acc += &d.exc[j] * BigInt::from(m);
        }
        for (s, curve) in self.strict.iter().enumerate() {
            let m = curve.incidence[i];
            if m != 0 {
                acc += &d.strict[s] * BigInt::from(m);
            }
        }
        acc
    }

    /// `(D . E_1, ..., D . E_u)`.
    pub fn products(&self, d: &Divisor) -> Result<Vec<Rational>> {
        self.owns(d)?;
        Ok((0..self.num_curves()).map(|i| self.product_at(d, i)).collect())
    }

    /// `f_* D`: the strict part, as a divisor on the same model.
    pub fn pushforward(&self, d: &Divisor) -> Result<Divisor> {
        self.owns(d)?;
        Ok(d.strict_part())
    }

    // ---- linear algebra -------------------------------------------------

    /// Cached sparse factorization of the full intersection matrix.
    pub fn factorization(&self) -> Result<Arc<Factorization>> {
        self.factor
            .get_or_init(|| {
                let diag = self
                    .curves
                    .iter()
                    .map(|c| Rational::from_integer(c.self_int.into()))
                    .collect();
                Factorization::new(diag, &self.adjacency).map(Arc::new)
            })
            .clone()
    }

    /// Leading-principal-minor test in input order. On failure returns an
    /// integral witness `v` with `v.M.v >= 0`.
    pub fn check_negative_definite(&self) -> Definiteness {
        let n = self.num_curves();
        let m: Vec<Vec<Rational>> = self
            .matrix()
            .into_iter()
            .map(|r| r.into_iter().map(|v| Rational::from_integer(v.into())).collect())
            .collect();
        let mut a = m.clone();
        for k in 0..n {
            if !a[k][k].is_negative() {
                return Definiteness::Indefinite {
                    witness: schur_witness(&m, k),
                };
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
        Definiteness::NegativeDefinite
    }

    /// `sum_i weights[i] * Ě_i`, computed with a single solve.
    pub fn dual_combination(&self, weights: &[Rational]) -> Result<Divisor> {
        if weights.len() != self.num_curves() {
            return Err(Error::PreconditionViolated("one weight per exceptional curve".into()));
        }
        let rhs: Vec<Rational> = weights.iter().map(|w| -w).collect();
        let exc = self.factorization()?.solve(&rhs);
        Ok(Divisor::from_parts(
            self.id,
            exc,
            vec![Rational::zero(); self.num_strict()],
        ))
    }

    /// `Ě_i`, the divisor with `Ě_i . E_j = -δ_ij`.
    pub fn dual_element(&self, i: usize) -> Result<Divisor> {
        if i >= self.num_curves() {
            return Err(Error::CurveOutOfRange(i));
        }
        let mut w = vec![Rational::zero(); self.num_curves()];
        w[i] = Rational::from_integer(1.into());
        self.dual_combination(&w)
    }

    pub fn dual_basis(&self) -> Result<Vec<Divisor>> {
        (0..self.num_curves()).map(|i| self.dual_element(i)).collect()
    }

    /// The numerical pullback `f^* C` of a divisor with no exceptional part:
    /// keeps `C` and adds the unique exceptional part making every product
    /// with an exceptional curve zero.
    pub fn numerical_pullback(&self, c: &Divisor) -> Result<Divisor> {
        self.owns(c)?;
        if c.exc.iter().any(|v| !v.is_zero()) {
            return Err(Error::PreconditionViolated(
                "numerical pullback takes a divisor without exceptional part".into(),
            ));
        }
        let products = self.products(c)?;
        let rhs: Vec<Rational> = products.into_iter().map(|p| -p).collect();
        let exc = self.factorization()?.solve(&rhs);
        Ok(Divisor::from_parts(self.id, exc, c.strict.clone()))
    }

    /// Keeps the coefficients of `d` on `fixed` curves (and all strict
    /// curves) and solves for the remaining exceptional coefficients so that
    /// the result has zero product with every non-fixed curve.
    pub fn relative_pullback(&self, d: &Divisor, fixed: &[bool]) -> Result<Divisor> {
        self.owns(d)?;
        let n = self.num_curves();
        if fixed.len() != n {
            return Err(Error::PreconditionViolated("one flag per exceptional curve".into()));
        }
        let free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        let local: HashMap<usize, usize> = free.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let diag = free
            .iter()
            .map(|&i| Rational::from_integer(self.curves[i].self_int.into()))
            .collect();
        let edges: Vec<Vec<(usize, i64)>> = free
            .iter()
            .map(|&i| {
                self.adjacency[i]
                    .iter()
                    .filter_map(|&(j, m)| local.get(&j).map(|&b| (b, m)))
                    .collect()
            })
            .collect();
        let factor = Factorization::new(diag, &edges)?;
        let mut base = d.clone();
        for &i in &free {
            base.exc[i] = Rational::zero();
        }
        let rhs: Vec<Rational> = free.iter().map(|&i| -self.product_at(&base, i)).collect();
        for (&i, v) in free.iter().zip(factor.solve(&rhs)) {
            base.exc[i] = v;
        }
        Ok(base)
    }

    /// Smallest positive integer clearing every denominator of `d`.
    pub fn denominator_of(d: &Divisor) -> BigInt {
        common_denominator(d.exc.iter().chain(d.strict.iter()))
    }

    // ---- in-place blowup ------------------------------------------------

    /// Blows up a free point of curve `center` and returns the new curve's
    /// index. Strict incidences get a zero entry; the model gets a new
    /// identity.
    pub(crate) fn blow_up_in_place(&mut self, center: usize, label: CurveLabel) -> usize {
        let c = self.curves.len();
        self.curves[center].self_int -= 1;
        self.curves.push(ExcCurve {
            label,
            genus: 0,
            self_int: -1,
        });
        self.adjacency[center].push((c, 1));
        self.adjacency.push(vec![(center, 1)]);
        for s in &mut self.strict {
            s.incidence.push(0);
        }
        self.id = fresh_id();
        self.factor = OnceLock::new();
        c
    }
}

/// `v = (-M_k^{-1} c, 1, 0, ...)` where `M_k` is the leading `k x k` block
/// and `c` the next column; then `v.M.v` is the `k`-th pivot.
fn schur_witness(m: &[Vec<Rational>], k: usize) -> Vec<BigInt> {
    let n = m.len();
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::from_integer(1.into());
    if k > 0 {
        let block: Vec<Vec<Rational>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
        let rhs: Vec<Rational> = (0..k).map(|i| -&m[i][k]).collect();
        let y = dense_solve(block, rhs).expect("leading block is negative definite");
        v[..k].clone_from_slice(&y);
    }
    let den = common_denominator(v.iter());
    v.iter().map(|r| (r * &den).to_integer()).collect()
}

impl fmt::Display for ResolutionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.curves.iter().enumerate() {
            writeln!(f, "{} genus={} self={}", self.curve_name(i), c.genus, c.self_int)?;
        }
        Ok(())
    }
}
