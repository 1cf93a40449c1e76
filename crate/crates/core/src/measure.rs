//! Expected running time over a finite, enumerated input space.
//!
//! Everything here is exact: masses, conditional averages and both sides
//! of the class-wise bound are [`BigRational`]s. Floats only appear in
//! rendered reports and in [`tractability_series`], which walks series too
//! long for exact summation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::engines;
use crate::formula::{stratify_min_layers, ConnectiveTable, Formula, FormulaError, ModelSet};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("subset has zero probability mass")]
    ZeroMassSubset,
    #[error("weighting function vanishes on the whole space")]
    ZeroMass,
    #[error("class {class} covers {covered} of {required} model classes")]
    ClassUncovered {
        class: usize,
        covered: usize,
        required: usize,
    },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid input space: {0}")]
    InvalidSpace(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: u128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `2^-k` as an exact rational.
pub fn inv_pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// A finite input space with a size map `f` and a partition `α`.
#[derive(Debug, Clone)]
pub struct InputSpace<I> {
    items: Vec<I>,
    sizes: Vec<u64>,
    classes: Vec<usize>,
    members: BTreeMap<usize, Vec<usize>>,
}

impl<I> InputSpace<I> {
    pub fn new(items: Vec<I>, sizes: Vec<u64>, classes: Vec<usize>) -> Result<Self, MeasureError> {
        if items.len() != sizes.len() || items.len() != classes.len() {
            return Err(MeasureError::InvalidSpace(format!(
                "{} items, {} sizes, {} classes",
                items.len(),
                sizes.len(),
                classes.len()
            )));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(MeasureError::InvalidSpace(format!("item {i} has size 0")));
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in classes.iter().enumerate() {
            members.entry(c).or_default().push(i);
        }
        Ok(Self {
            items,
            sizes,
            classes,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[I] {
        &self.items
    }

    pub fn item(&self, i: usize) -> &I {
        &self.items[i]
    }

    pub fn size(&self, i: usize) -> u64 {
        self.sizes[i]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.classes[i]
    }

    /// Attained class labels, ascending.
    pub fn class_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.keys().copied()
    }

    /// Members of `X_n^α`.
    pub fn class_members(&self, n: usize) -> &[usize] {
        self.members.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Members of `X_n^f`.
    pub fn size_class(&self, size: u64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sizes[i] == size).collect()
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// The same space partitioned by size instead of `α`.
    pub fn by_size(&self) -> InputSpace<I>
    where
        I: Clone,
    {
        InputSpace::new(
            self.items.clone(),
            self.sizes.clone(),
            self.sizes.iter().map(|&s| s as usize).collect(),
        )
        .expect("sizes already validated")
    }

    /// Cost vector from a per-item cost function.
    pub fn costs(&self, mut cost: impl FnMut(&I) -> u128) -> Vec<Rational> {
        self.items.iter().map(|x| int(cost(x))).collect()
    }
}

impl InputSpace<Formula> {
    /// Formulas with `f` = encoded bits and `α` = distinct variable count.
    pub fn from_formulas(table: &ConnectiveTable, formulas: Vec<Formula>) -> Result<Self, MeasureError> {
        let sizes = formulas.iter().map(|x| x.size_bits(table)).collect();
        let classes = formulas.iter().map(Formula::alpha).collect();
        Self::new(formulas, sizes, classes)
    }

    /// Joins several formula spaces; duplicates are kept once.
    pub fn union(table: &ConnectiveTable, parts: Vec<Vec<Formula>>) -> Result<Self, MeasureError> {
        let mut all: Vec<Formula> = parts.into_iter().flatten().collect();
        all.sort();
        all.dedup();
        Self::from_formulas(table, all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `μ(X) = 1`.
    Global,
    /// `μ(X_n^α) = 1` for every attained class.
    PerClass,
    /// A pointwise weighting with no normalization constraint.
    Unnormalized,
}

/// Exact non-negative weights over the items of one [`InputSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<Rational>,
    normalization: Normalization,
}

impl Distribution {
    pub fn new<I>(
        space: &InputSpace<I>,
        weights: Vec<Rational>,
        normalization: Normalization,
    ) -> Result<Self, MeasureError> {
        if weights.len() != space.len() {
            return Err(MeasureError::InvalidDistribution(format!(
                "{} weights for {} items",
                weights.len(),
                space.len()
            )));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(MeasureError::InvalidDistribution("negative weight".into()));
        }
        let dist = Self {
            weights,
            normalization,
        };
        match normalization {
            Normalization::Global => {
                let total = dist.mass(0..space.len());
                if !total.is_one() {
                    return Err(MeasureError::InvalidDistribution(format!(
                        "total mass {total}, expected 1"
                    )));
                }
            }
            Normalization::PerClass => {
                for n in space.class_ids() {
                    let m = dist.class_mass(space, n);
                    if !m.is_one() {
                        return Err(MeasureError::InvalidDistribution(format!(
                            "class {n} has mass {m}, expected 1"
                        )));
                    }
                }
            }
            Normalization::Unnormalized => {}
        }
        Ok(dist)
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn mass(&self, subset: impl IntoIterator<Item = usize>) -> Rational {
        subset
            .into_iter()
            .fold(Rational::zero(), |acc, i| acc + &self.weights[i])
    }

    pub fn total(&self) -> Rational {
        self.mass(0..self.weights.len())
    }

    pub fn class_mass<I>(&self, space: &InputSpace<I>, n: usize) -> Rational {
        self.mass(space.class_members(n).iter().copied())
    }

    /// Rescales to a probability distribution.
    pub fn normalized(&self) -> Result<Distribution, MeasureError> {
        let total = self.total();
        if total.is_zero() {
            return Err(MeasureError::ZeroMass);
        }
        Ok(Self {
            weights: self.weights.iter().map(|w| w / &total).collect(),
            normalization: Normalization::Global,
        })
    }
}

/// Conditional expectation of `T` given `x ∈ Y`.
pub fn avg_time(costs: &[Rational], mu: &Distribution, subset: &[usize]) -> Result<Rational, MeasureError> {
    let mass = mu.mass(subset.iter().copied());
    if mass.is_zero() {
        return Err(MeasureError::ZeroMassSubset);
    }
    let weighted = subset
        .iter()
        .fold(Rational::zero(), |acc, &i| acc + &costs[i] * mu.weight(i));
    Ok(weighted / mass)
}

/// Average cost over `X_size^f`, or 1 when that class carries no mass.
pub fn relative_avg<I>(space: &InputSpace<I>, costs: &[Rational], mu: &Distribution, size: u64) -> Rational {
    let members = space.size_class(size);
    avg_time(costs, mu, &members).unwrap_or_else(|_| Rational::one())
}

/// One class row of a bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub class: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

/// Per-class verdicts for `Σ_{x∈X_n} T(x)/F(f(x)) · μ(x) ≤ μ(X_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub overall: bool,
}

pub const BOUND_CSV_HEADER: &str = "n,lhs_num,lhs_den,rhs_num,rhs_den,lhs_float,rhs_float,pass";

impl BoundRow {
    /// CSV fields in [`BOUND_CSV_HEADER`] order; `pass` is rendered by the caller.
    pub fn csv_fields(&self) -> [String; 7] {
        [
            self.class.to_string(),
            self.lhs.numer().to_string(),
            self.lhs.denom().to_string(),
            self.rhs.numer().to_string(),
            self.rhs.denom().to_string(),
            format_float(&self.lhs),
            format_float(&self.rhs),
        ]
    }
}

impl BoundReport {
    fn from_rows(rows: Vec<BoundRow>) -> Self {
        let overall = rows.iter().all(|r| r.pass);
        Self { rows, overall }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUND_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_fields().join(","));
            out.push(',');
            out.push_str(if row.pass { "true" } else { "false" });
            out.push('\n');
        }
        out
    }

    pub fn row(&self, class: usize) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.class == class)
    }
}

pub fn format_float(r: &Rational) -> String {
    format!("{:e}", to_f64(r))
}

/// A bound function `F` on sizes.
pub type BoundFn<'a> = &'a dyn Fn(u64) -> Rational;

/// `k ↦ coef · k^exp`.
pub fn scaled_power(coef: Rational, exp: u32) -> impl Fn(u64) -> Rational {
    move |k| &coef * int(k as u128).pow(exp as i32)
}

/// Checks the class-wise bound: for each attained class of positive mass,
/// the `μ`-weighted sum of `T(x)/F(f(x))` must not exceed the class mass.
pub fn oclass_member<I>(space: &InputSpace<I>, costs: &[Rational], bound: BoundFn<'_>, mu: &Distribution) -> BoundReport {
    let mut rows = Vec::new();
    for n in space.class_ids() {
        let members = space.class_members(n);
        let rhs = mu.mass(members.iter().copied());
        if rhs.is_zero() {
            continue;
        }
        let mut lhs = Rational::zero();
        for &i in members {
            let w = mu.weight(i);
            if w.is_zero() {
                continue;
            }
            let fv = bound(space.size(i));
            assert!(fv >= Rational::one(), "bound function must be >= 1 on attained sizes");
            lhs += &costs[i] / fv * w;
        }
        let pass = lhs <= rhs;
        rows.push(BoundRow { class: n, lhs, rhs, pass });
    }
    BoundReport::from_rows(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Convergent,
    DivergentTrend,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "CONVERGENT",
            Verdict::DivergentTrend => "DIVERGENT-TREND",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Thresholds for classifying a truncated sequence of partial averages.
#[derive(Debug, Clone, Copy)]
pub struct TractabilityConfig {
    /// Relative increment below which a prefix counts as settled.
    pub epsilon: f64,
    /// Consecutive settled prefixes required for convergence.
    pub window: usize,
    /// Partial averages above this are divergence evidence.
    pub cap: f64,
}

impl Default for TractabilityConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-12,
            window: 10,
            cap: 1e6,
        }
    }
}

/// Partial averages over growing class prefixes and a trend verdict.
///
/// The verdict is evidence about the untruncated space, never a proof.
#[derive(Debug, Clone)]
pub struct TractabilityReport {
    pub partial: Vec<f64>,
    pub verdict: Verdict,
}

impl TractabilityReport {
    pub fn last(&self) -> f64 {
        *self.partial.last().expect("at least one prefix")
    }

    /// Partial average over the first `k` classes.
    pub fn at(&self, k: usize) -> f64 {
        self.partial[k - 1]
    }
}

/// Classifies partial averages.
///
/// Convergent: the last `window` relative increments are all below
/// `epsilon` and the values stay under `cap`. Divergent trend: the cap
/// is exceeded, or the tail is non-decreasing and the growth over the last
/// decade of prefixes is at least half the growth over the decade before
/// (so the increments are not summing to a finite limit at any geometric
/// rate). Anything else is inconclusive.
pub fn classify(partial: &[f64], cfg: &TractabilityConfig) -> Verdict {
    let len = partial.len();
    let max = partial.iter().cloned().fold(f64::MIN, f64::max);
    if len > cfg.window {
        let settled = partial[len - cfg.window - 1..].windows(2).all(|w| {
            let scale = w[1].abs().max(f64::MIN_POSITIVE);
            (w[1] - w[0]).abs() / scale < cfg.epsilon
        });
        if settled && max <= cfg.cap {
            return Verdict::Convergent;
        }
    }
    if max > cfg.cap {
        return Verdict::DivergentTrend;
    }
    if len >= 100 {
        let a = partial[len / 100 - 1];
        let b = partial[len / 10 - 1];
        let c = partial[len - 1];
        let tail = &partial[len - len / 10..];
        let monotone = tail.windows(2).all(|w| w[1] >= w[0]);
        let (early, late) = (b - a, c - b);
        if monotone && late > 0.0 && late >= early / 2.0 {
            return Verdict::DivergentTrend;
        }
    }
    Verdict::Inconclusive
}

/// Partial averages from per-class `(Σ T·μ, μ)` terms.
///
/// Terms may be unnormalized: the normalizing constant cancels in every
/// conditional average.
pub fn tractability_series(
    terms: impl IntoIterator<Item = (f64, f64)>,
    cfg: &TractabilityConfig,
) -> Result<TractabilityReport, MeasureError> {
    let mut weighted = 0.0f64;
    let mut mass = 0.0f64;
    // Neumaier compensation keeps million-term prefixes accurate
    let (mut cw, mut cm) = (0.0f64, 0.0f64);
    let mut partial = Vec::new();
    for (tw, m) in terms {
        if m <= 0.0 {
            return Err(MeasureError::ZeroMassSubset);
        }
        neumaier(&mut weighted, &mut cw, tw);
        neumaier(&mut mass, &mut cm, m);
        partial.push((weighted + cw) / (mass + cm));
    }
    if partial.is_empty() {
        return Err(MeasureError::ZeroMassSubset);
    }
    let verdict = classify(&partial, cfg);
    Ok(TractabilityReport { partial, verdict })
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Exact partial averages `T_avg(X_0 ∪ … ∪ X_k)` over the first `budget`
/// attained classes, with the float verdict.
pub fn tractability<I>(
    space: &InputSpace<I>,
    costs: &[Rational],
    mu: &Distribution,
    budget: usize,
    cfg: &TractabilityConfig,
) -> Result<(Vec<Rational>, TractabilityReport), MeasureError> {
    let mut weighted = Rational::zero();
    let mut mass = Rational::zero();
    let mut exact = Vec::new();
    for n in space.class_ids().take(budget) {
        let members = space.class_members(n);
        let m = mu.mass(members.iter().copied());
        if m.is_zero() {
            return Err(MeasureError::ZeroMassSubset);
        }
        for &i in members {
            weighted += &costs[i] * mu.weight(i);
        }
        mass += m;
        exact.push(&weighted / &mass);
    }
    if exact.is_empty() {
        return Err(MeasureError::ZeroMassSubset);
    }
    let partial: Vec<f64> = exact.iter().map(to_f64).collect();
    let verdict = classify(&partial, cfg);
    Ok((exact, TractabilityReport { partial, verdict }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuMode {
    /// `ν = c_H · H(α)/F(f) · μ` with `c_H` making `ν(X) = 1`.
    Equality,
    /// `ν = H(α)/F(f) · μ`, the pointwise upper envelope.
    Dominated,
}

/// Reweights `μ` by `H(α(x)) / F(f(x))`.
pub fn nu_from_h<I>(
    space: &InputSpace<I>,
    h: &dyn Fn(usize) -> Rational,
    bound: BoundFn<'_>,
    mu: &Distribution,
    mode: NuMode,
) -> Result<Distribution, MeasureError> {
    let raw: Vec<Rational> = (0..space.len())
        .map(|i| {
            let w = mu.weight(i);
            if w.is_zero() {
                return Rational::zero();
            }
            h(space.class_of(i)) / bound(space.size(i)) * w
        })
        .collect();
    let dominated = Distribution::new(space, raw, Normalization::Unnormalized)?;
    match mode {
        NuMode::Dominated => Ok(dominated),
        NuMode::Equality => dominated.normalized(),
    }
}

/// Characteristic function of `{m}`.
pub fn indicator(m: usize) -> impl Fn(usize) -> Rational {
    move |n| if n == m { Rational::one() } else { Rational::zero() }
}

/// One tested weighting `H` and its two expectations under `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct HCheck {
    pub label: String,
    pub t_avg: Rational,
    pub bound_avg: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Property22Report {
    pub oclass: BoundReport,
    pub checks: Vec<HCheck>,
    pub all_h_pass: bool,
    /// Both sides agree: class-wise membership holds iff every `H` passes.
    pub biconditional: bool,
    /// Labels of weightings whose check contradicts the class-wise verdict
    /// or fails outright.
    pub witnesses: Vec<String>,
}

/// A labelled class weighting.
pub type NamedH<'a> = (String, &'a dyn Fn(usize) -> Rational);

/// Tests class-wise membership against `T_avg^ν(X) ≤ (F∘f)_avg^ν(X)` for
/// every characteristic function of an attained class plus `extra`.
pub fn check_property_2_2<I>(
    space: &InputSpace<I>,
    costs: &[Rational],
    bound: BoundFn<'_>,
    mu: &Distribution,
    extra: &[NamedH<'_>],
) -> Property22Report {
    let oclass = oclass_member(space, costs, bound, mu);
    let mut family: Vec<(String, Box<dyn Fn(usize) -> Rational + '_>)> = space
        .class_ids()
        .map(|n| (format!("chi{n}"), Box::new(indicator(n)) as Box<dyn Fn(usize) -> Rational>))
        .collect();
    for (label, h) in extra {
        family.push((label.clone(), Box::new(h)));
    }
    let all = space.all();
    let bound_costs: Vec<Rational> = (0..space.len()).map(|i| bound(space.size(i))).collect();
    let mut checks = Vec::new();
    for (label, h) in &family {
        let Ok(nu) = nu_from_h(space, h.as_ref(), bound, mu, NuMode::Equality) else {
            continue;
        };
        let t_avg = avg_time(costs, &nu, &all).expect("normalized ν has unit mass");
        let bound_avg = avg_time(&bound_costs, &nu, &all).expect("normalized ν has unit mass");
        let pass = t_avg <= bound_avg;
        checks.push(HCheck {
            label: label.clone(),
            t_avg,
            bound_avg,
            pass,
        });
    }
    let all_h_pass = checks.iter().all(|c| c.pass);
    let biconditional = oclass.overall == all_h_pass;
    let witnesses = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.label.clone())
        .collect();
    Property22Report {
        oclass,
        checks,
        all_h_pass,
        biconditional,
        witnesses,
    }
}

#[derive(Debug, Clone)]
pub struct Property23Report {
    /// `Σ H(n)` over attained classes.
    pub bound: Rational,
    /// `Σ T(x) ν(x)` under the dominated weighting `ν = H/F · μ`.
    pub weighted_total: Rational,
    /// `ν(X)` of the dominated weighting.
    pub dominated_mass: Rational,
    /// `T_avg` under `ν / ν(X)`, a probability distribution.
    pub normalized_avg: Rational,
    /// The bound that `normalized_avg` is certified against: `Σ H` when
    /// `ν(X) ≥ 1`, otherwise `Σ H / ν(X)` (the same inequality for the
    /// rescaled `H / ν(X)`, whose dominated weighting is a probability).
    pub normalized_bound: Rational,
    pub pass: bool,
}

/// Certifies `Σ_x T(x) ν(x) ≤ Σ_n H(n)` for `ν = H(α)/F(f) · μ`, given a
/// per-class normalized `μ` that satisfies the class-wise bound.
pub fn check_property_2_3<I>(
    space: &InputSpace<I>,
    costs: &[Rational],
    bound: BoundFn<'_>,
    mu: &Distribution,
    h: &dyn Fn(usize) -> Rational,
) -> Result<Property23Report, MeasureError> {
    if mu.normalization() != Normalization::PerClass {
        return Err(MeasureError::PreconditionFailed(
            "μ must be normalized on every class".into(),
        ));
    }
    let oclass = oclass_member(space, costs, bound, mu);
    if let Some(bad) = oclass.rows.iter().find(|r| !r.pass) {
        return Err(MeasureError::PreconditionFailed(format!(
            "class-wise bound fails at class {}",
            bad.class
        )));
    }
    let bound_sum = space
        .class_ids()
        .fold(Rational::zero(), |acc, n| acc + h(n));
    let nu = nu_from_h(space, h, bound, mu, NuMode::Dominated)?;
    let weighted_total = (0..space.len()).fold(Rational::zero(), |acc, i| acc + &costs[i] * nu.weight(i));
    let dominated_mass = nu.total();
    if dominated_mass.is_zero() {
        return Err(MeasureError::ZeroMass);
    }
    let normalized_avg = &weighted_total / &dominated_mass;
    let normalized_bound = if dominated_mass >= Rational::one() {
        bound_sum.clone()
    } else {
        &bound_sum / &dominated_mass
    };
    let pass = weighted_total <= bound_sum && normalized_avg <= normalized_bound;
    Ok(Property23Report {
        bound: bound_sum,
        weighted_total,
        dominated_mass,
        normalized_avg,
        normalized_bound,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovTail {
    /// `T_avg(Y) / a`.
    pub bound: Rational,
    /// `μ{x ∈ Y : T(x) ≥ a} / μ(Y)`.
    pub empirical: Rational,
    pub holds: bool,
}

pub fn markov_tail(
    costs: &[Rational],
    mu: &Distribution,
    subset: &[usize],
    a: &Rational,
) -> Result<MarkovTail, MeasureError> {
    assert!(a.is_positive(), "threshold must be positive");
    let avg = avg_time(costs, mu, subset)?;
    let mass = mu.mass(subset.iter().copied());
    let tail = mu.mass(subset.iter().copied().filter(|&i| &costs[i] >= a));
    let bound = avg / a;
    let empirical = tail / mass;
    let holds = empirical <= bound;
    Ok(MarkovTail {
        bound,
        empirical,
        holds,
    })
}

/// Equal weight on `subset`, zero elsewhere.
pub fn uniform_on<I>(space: &InputSpace<I>, subset: &[usize]) -> Result<Distribution, MeasureError> {
    if subset.is_empty() {
        return Err(MeasureError::ZeroMassSubset);
    }
    let share = rational(1, subset.len() as i64);
    let mut weights = vec![Rational::zero(); space.len()];
    for &i in subset {
        weights[i] = share.clone();
    }
    Distribution::new(space, weights, Normalization::Global)
}

fn class_total<I>(space: &InputSpace<I>, normalization: Normalization) -> Rational {
    match normalization {
        Normalization::Global => rational(1, space.class_ids().count() as i64),
        _ => Rational::one(),
    }
}

/// Model set of a formula over its own compacted variables.
pub fn own_model(x: &Formula, table: &ConnectiveTable) -> ModelSet {
    engines::tabulate(x, table).payload
}

fn check_alpha_partition(space: &InputSpace<Formula>) -> Result<(), MeasureError> {
    for i in 0..space.len() {
        if space.class_of(i) != space.item(i).alpha() {
            return Err(MeasureError::InvalidSpace(
                "constructor needs the partition by variable count".into(),
            ));
        }
    }
    Ok(())
}

/// Within each `X_n^α`, equal mass to every one of the `2^(2^n)` model
/// classes, spread uniformly over each class's members.
pub fn uniform_over_model_classes(
    space: &InputSpace<Formula>,
    table: &ConnectiveTable,
    normalization: Normalization,
) -> Result<Distribution, MeasureError> {
    check_alpha_partition(space)?;
    let per_class = class_total(space, normalization);
    let mut weights = vec![Rational::zero(); space.len()];
    for n in space.class_ids() {
        let mut groups: BTreeMap<ModelSet, Vec<usize>> = BTreeMap::new();
        for &i in space.class_members(n) {
            groups.entry(own_model(space.item(i), table)).or_default().push(i);
        }
        let required = 1usize.checked_shl(1u32 << n).unwrap_or(usize::MAX);
        if groups.len() != required {
            return Err(MeasureError::ClassUncovered {
                class: n,
                covered: groups.len(),
                required,
            });
        }
        let group_mass = &per_class / int(required as u128);
        for members in groups.values() {
            let share = &group_mass / int(members.len() as u128);
            for &i in members {
                weights[i] = share.clone();
            }
        }
    }
    let norm = if normalization == Normalization::Unnormalized {
        Normalization::PerClass
    } else {
        normalization
    };
    Distribution::new(space, weights, norm)
}

/// `2^-(i+1)`, the default relative mass of layer `i`.
pub fn geometric_layer_mass(i: usize) -> Rational {
    inv_pow2(i as u32 + 1)
}

/// Within each `X_n^α`, equal weight to all members of each min layer.
/// Layer masses are `layer_mass(i)` rescaled to the class total.
pub fn uniform_within_min_layers(
    space: &InputSpace<Formula>,
    table: &ConnectiveTable,
    layer_mass: &dyn Fn(usize) -> Rational,
    normalization: Normalization,
) -> Result<Distribution, MeasureError> {
    check_alpha_partition(space)?;
    let per_class = class_total(space, normalization);
    let mut weights = vec![Rational::zero(); space.len()];
    for n in space.class_ids() {
        let members = space.class_members(n);
        let compact: Vec<Formula> = members.iter().map(|&i| space.item(i).compacted()).collect();
        let layers = stratify_min_layers(table, &compact, n as u32)?;
        let raw: Vec<Rational> = (0..layers.len()).map(layer_mass).collect();
        let raw_total = raw.iter().fold(Rational::zero(), |a, b| a + b);
        if raw_total.is_zero() {
            return Err(MeasureError::ZeroMass);
        }
        for (layer, m) in layers.iter().zip(&raw) {
            let share = m / &raw_total * &per_class / int(layer.len() as u128);
            for &local in layer {
                weights[members[local]] = share.clone();
            }
        }
    }
    let norm = if normalization == Normalization::Unnormalized {
        Normalization::PerClass
    } else {
        normalization
    };
    Distribution::new(space, weights, norm)
}

/// `μ(x) ∝ f(x)^-p`.
pub fn power_law_length<I>(space: &InputSpace<I>, p: u32) -> Result<Distribution, MeasureError> {
    let raw: Vec<Rational> = (0..space.len())
        .map(|i| int(space.size(i) as u128).pow(-(p as i32)))
        .collect();
    Distribution::new(space, raw, Normalization::Unnormalized)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(costs: &[u128]) -> (InputSpace<usize>, Vec<Rational>) {
        let n = costs.len();
        let space = InputSpace::new((0..n).collect(), vec![1; n], vec![0; n]).unwrap();
        (space, costs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn avg_time_examples() {
        let (space, costs) = toy(&[1, 3]);
        let mu = uniform_on(&space, &[0, 1]).unwrap();
        assert_eq!(avg_time(&costs, &mu, &[0, 1]).unwrap(), int(2));
        assert_eq!(avg_time(&costs, &mu, &[1]).unwrap(), int(3));
        let point = uniform_on(&space, &[0]).unwrap();
        assert_eq!(avg_time(&costs, &point, &[1]), Err(MeasureError::ZeroMassSubset));
    }

    #[test]
    fn relative_avg_empty_class_is_one() {
        let space = InputSpace::new(vec![0, 1], vec![5, 7], vec![0, 0]).unwrap();
        let costs = vec![int(10), int(20)];
        let mu = uniform_on(&space, &[0]).unwrap();
        assert_eq!(relative_avg(&space, &costs, &mu, 7), Rational::one());
        assert_eq!(relative_avg(&space, &costs, &mu, 9), Rational::one());
        assert_eq!(relative_avg(&space, &costs, &mu, 5), int(10));
    }

    #[test]
    fn distribution_validation() {
        let (space, _) = toy(&[1, 1]);
        assert!(Distribution::new(&space, vec![rational(1, 3), rational(1, 3)], Normalization::Global).is_err());
        assert!(Distribution::new(&space, vec![rational(-1, 2), rational(3, 2)], Normalization::Unnormalized).is_err());
        assert!(Distribution::new(&space, vec![int(1)], Normalization::Unnormalized).is_err());
        assert!(InputSpace::new(vec![0], vec![0], vec![0]).is_err());
    }

    #[test]
    fn rewrite_program_meets_identity_bound_exactly() {
        let space = InputSpace::new(vec![0, 1, 2], vec![3, 8, 8], vec![1, 1, 2]).unwrap();
        let costs: Vec<Rational> = (0..3).map(|i| int(space.size(i) as u128)).collect();
        let mu = Distribution::new(
            &space,
            vec![rational(1, 2), rational(1, 4), rational(1, 4)],
            Normalization::Global,
        )
        .unwrap();
        let report = oclass_member(&space, &costs, &|k| int(k as u128), &mu);
        assert!(report.overall);
        for row in &report.rows {
            assert_eq!(row.lhs, row.rhs);
        }
    }

    #[test]
    fn bound_report_csv_schema() {
        let (space, costs) = toy(&[2, 2]);
        let mu = uniform_on(&space, &[0, 1]).unwrap();
        let report = oclass_member(&space, &costs, &|_| int(4), &mu);
        assert_eq!(
            report.to_csv(),
            format!("{BOUND_CSV_HEADER}\n0,1,2,1,1,5e-1,1e0,true\n")
        );
    }

    #[test]
    fn tractability_constant_cost() {
        let space = InputSpace::new((0..5).collect(), vec![1; 5], (0..5).collect()).unwrap();
        let costs = vec![int(7); 5];
        let mu = uniform_on(&space, &space.all()).unwrap();
        let (exact, _) = tractability(&space, &costs, &mu, 5, &TractabilityConfig::default()).unwrap();
        assert!(exact.iter().all(|a| *a == int(7)));
    }

    #[test]
    fn classify_short_growth_is_inconclusive() {
        let partial: Vec<f64> = (1..20).map(|k| k as f64).collect();
        assert_eq!(classify(&partial, &TractabilityConfig::default()), Verdict::Inconclusive);
        let big = vec![1.0, 1e7];
        assert_eq!(classify(&big, &TractabilityConfig::default()), Verdict::DivergentTrend);
    }

    #[test]
    fn nu_from_h_identity_cases() {
        let space = InputSpace::new(vec![0, 1, 2], vec![1, 1, 1], vec![0, 1, 1]).unwrap();
        let mu = Distribution::new(
            &space,
            vec![rational(1, 2), rational(1, 3), rational(1, 6)],
            Normalization::Global,
        )
        .unwrap();
        let one = |_: u64| Rational::one();
        let nu = nu_from_h(&space, &|_| Rational::one(), &one, &mu, NuMode::Equality).unwrap();
        assert_eq!(nu.weights(), mu.weights());
        let chi = nu_from_h(&space, &indicator(1), &one, &mu, NuMode::Equality).unwrap();
        assert!(chi.weight(0).is_zero());
        assert_eq!(chi.total(), Rational::one());
        assert_eq!(
            nu_from_h(&space, &|_| Rational::zero(), &one, &mu, NuMode::Equality),
            Err(MeasureError::ZeroMass)
        );
    }

    #[test]
    fn markov_tail_edge_cases() {
        let (space, costs) = toy(&[5, 5, 5]);
        let mu = uniform_on(&space, &space.all()).unwrap();
        let tail = markov_tail(&costs, &mu, &space.all(), &int(5)).unwrap();
        assert_eq!(tail.empirical, Rational::one());
        assert_eq!(tail.bound, Rational::one());
        assert!(tail.holds);
        let (space, costs) = toy(&[2, 4, 9]);
        let mu = uniform_on(&space, &space.all()).unwrap();
        let low = markov_tail(&costs, &mu, &space.all(), &int(1)).unwrap();
        assert_eq!(low.empirical, Rational::one());
        assert!(low.bound >= Rational::one());
    }

    #[test]
    fn property_2_3_requires_per_class_measure() {
        let (space, costs) = toy(&[1]);
        let mu = uniform_on(&space, &[0]).unwrap();
        let res = check_property_2_3(&space, &costs, &|_| int(1), &mu, &|_| int(1));
        assert!(matches!(res, Err(MeasureError::PreconditionFailed(_))));
    }

    #[test]
    fn power_law_weights() {
        let space = InputSpace::new(vec![0, 1], vec![1, 2], vec![0, 0]).unwrap();
        let mu = power_law_length(&space, 2).unwrap();
        assert_eq!(mu.weight(0), &rational(4, 5));
        assert_eq!(mu.weight(1), &rational(1, 5));
    }
}
