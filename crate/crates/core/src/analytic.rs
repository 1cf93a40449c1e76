//! Closed forms and bound verifiers: sentence-shape counts, expected scan
//! length over random model sets, geometric moment sums, and the
//! shortest-code model of the tabulator.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::measure::{int, inv_pow2, rational, InputSpace, MeasureError, Rational};

/// Number of binary-tree shapes with `n` internal nodes, by the recursion
/// `Γ(0) = 1`, `Γ(k+1) = Σ_{i≤k} Γ(i) Γ(k-i)`.
pub fn gamma_count(n: usize) -> BigUint {
    gamma_table(n).pop().expect("table has n+1 entries")
}

/// `Γ(0..=n)`.
pub fn gamma_table(n: usize) -> Vec<BigUint> {
    let mut g: Vec<BigUint> = vec![BigUint::one()];
    for k in 0..n {
        let next = (0..=k).fold(BigUint::zero(), |acc, i| acc + &g[i] * &g[k - i]);
        g.push(next);
    }
    g
}

fn pow_u(base: u32, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// Sentences with exactly `n` connectives over the sixteen binary
/// connectives: `Γ(n) · 16^n · (2^(n+1) − 1)`.
pub fn sentence_count(n: usize) -> BigUint {
    gamma_count(n) * pow_u(16, n) * (pow_u(2, n + 1) - 1u32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountingTotals {
    pub n: usize,
    pub gamma: BigUint,
    pub sentences: BigUint,
    /// Total reading time `(2n+1) · Γ(n) · 16^n · (2^(n+1) − 1)`.
    pub read_total: BigUint,
    /// Total tabulating time `(2n+1) · Γ(n) · 16^n · (3^(n+1) − 1)`.
    pub tabulate_total: BigUint,
    /// `F(n) = (3^(n+1) − 1)/(2^(n+1) − 1) · (2n+1)^-p`.
    pub ratio: Rational,
}

pub fn totals_and_ratio(n: usize, p: u32) -> CountingTotals {
    let gamma = gamma_count(n);
    let width = BigUint::from(2 * n as u64 + 1);
    let base = &width * &gamma * pow_u(16, n);
    let two = pow_u(2, n + 1) - 1u32;
    let three = pow_u(3, n + 1) - 1u32;
    let read_total = &base * &two;
    let tabulate_total = &base * &three;
    let ratio = Rational::new(BigInt::from(three), BigInt::from(two) * BigInt::from(width.pow(p)));
    CountingTotals {
        n,
        sentences: sentence_count(n),
        gamma,
        read_total,
        tabulate_total,
        ratio,
    }
}

/// `1.5^(n+1) · (2n+1)^-p`, the large-`n` approximation of `F(n)`.
pub fn ratio_approximation(n: usize, p: u32) -> f64 {
    1.5f64.powi(n as i32 + 1) * ((2 * n + 1) as f64).powi(-(p as i32))
}

/// Exact partial sums `Σ_{k≤n} F(k)` for `n = 0..=n_max`.
pub fn ratio_partial_sums(n_max: usize, p: u32) -> Vec<Rational> {
    let mut acc = Rational::zero();
    (0..=n_max)
        .map(|n| {
            acc += totals_and_ratio(n, p).ratio;
            acc.clone()
        })
        .collect()
}

/// Expected `min_n(K) + 1` for a uniformly random `K ⊆ {0..2^n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedMin {
    pub n: u32,
    /// Exhaustive average over all `2^(2^n)` subsets (only for `n ≤ 4`).
    pub brute: Option<Rational>,
    /// `2 − 2^-(2^n)`.
    pub closed: Rational,
    /// `Σ_{i=1}^{2^n} i · 2^-i`, the sum without the empty-set term.
    pub nonempty_sum: Rational,
}

impl ExpectedMin {
    pub fn consistent(&self) -> bool {
        self.brute.as_ref().is_none_or(|b| *b == self.closed)
    }
}

pub const BRUTE_FORCE_MAX_N: u32 = 4;

pub fn expected_min_plus_one(n: u32) -> ExpectedMin {
    ExpectedMin {
        n,
        brute: (n <= BRUTE_FORCE_MAX_N).then(|| expected_min_brute(n)),
        closed: expected_min_closed(n),
        nonempty_sum: expected_min_nonempty_sum(n),
    }
}

/// Averages `min_n(K) + 1` over every subset `K`, scanning each subset.
pub fn expected_min_brute(n: u32) -> Rational {
    assert!(n <= BRUTE_FORCE_MAX_N, "brute force is limited to n <= 4");
    let universe = 1u32 << n;
    let subsets = 1u64 << universe;
    let mut total: u64 = 0;
    for mask in 0..subsets {
        let first = (0..universe).find(|&m| (mask >> m) & 1 == 1).unwrap_or(universe);
        total += first as u64 + 1;
    }
    Rational::new(BigInt::from(total), BigInt::from(subsets))
}

pub fn expected_min_closed(n: u32) -> Rational {
    int(2) - inv_pow2(1 << n)
}

pub fn expected_min_nonempty_sum(n: u32) -> Rational {
    let universe = 1u32 << n;
    (1..=universe).fold(Rational::zero(), |acc, i| acc + int(i as u128) * inv_pow2(i))
}

/// Exact `E[(min_n(K) + 1)^m]` over uniformly random `K`, from the counts
/// `#{K : min K = i-1} = 2^(2^n − i)` plus the empty set.
pub fn min_moment(n: u32, m: u32) -> Rational {
    let universe = 1u32 << n;
    let mut acc = Rational::zero();
    for i in 1..=universe {
        acc += int(i as u128).pow(m as i32) * inv_pow2(i);
    }
    acc + int(universe as u128 + 1).pow(m as i32) * inv_pow2(universe)
}

/// A truncated `Σ_{i≥1} i^m / 2^i` with a certified tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSum {
    pub m: u32,
    pub partial: Rational,
    pub terms: u64,
    pub tail_bound: Rational,
}

impl MomentSum {
    /// Upper end of the enclosing interval.
    pub fn upper(&self) -> Rational {
        &self.partial + &self.tail_bound
    }
}

/// Sums terms until the geometric tail bound drops below `tol`.
///
/// Past `i = 4m` the term ratio `((i+1)/i)^m / 2` is below `e^(1/4)/2`
/// and decreasing, so the tail after `K` terms is at most
/// `t_(K+1) / (1 − r)` with `r = ((K+2)/(K+1))^m / 2`.
pub fn geometric_moment_sum(m: u32, tol: &Rational) -> MomentSum {
    assert!(m >= 1, "moment order must be positive");
    let term = |i: u64| int(i as u128).pow(m as i32) * inv_pow2(i as u32);
    let mut partial = Rational::zero();
    let mut k: u64 = 0;
    loop {
        k += 1;
        partial += term(k);
        if k < 4 * m as u64 {
            continue;
        }
        let r = Rational::new(BigInt::from(k + 2), BigInt::from(k + 1)).pow(m as i32) / int(2);
        let tail_bound = term(k + 1) / (Rational::one() - r);
        if &tail_bound < tol {
            return MomentSum {
                m,
                partial,
                terms: k,
                tail_bound,
            };
        }
    }
}

/// `2.5 · m^(m+1)`.
pub fn moment_bound(m: u32) -> Rational {
    rational(5, 2) * int(m as u128).pow(m as i32 + 1)
}

/// The constant of the `m`-th moment class, `2.5 · m^(m+1)` for `m ≥ 2`.
pub fn moment_oclass_constant(m: u32) -> Rational {
    assert!(m >= 2, "moment class is stated for m >= 2");
    moment_bound(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilfComparison {
    /// `m^m + 2 · m^(m+1)` at `m = 3`.
    pub ours: BigUint,
    /// Expected backtrack-tree size for 3-colouring.
    pub reference: BigUint,
    pub relative_gap: Rational,
}

pub fn wilf_comparison() -> WilfComparison {
    let m = 3u32;
    let ours = BigUint::from(m).pow(m) + BigUint::from(2u32) * BigUint::from(m).pow(m + 1);
    let reference = BigUint::from(197u32);
    let diff = BigInt::from(reference.clone()) - BigInt::from(ours.clone());
    let relative_gap = BigRational::new(diff, BigInt::from(reference.clone()));
    WilfComparison {
        ours,
        reference,
        relative_gap: if relative_gap < Rational::zero() {
            -relative_gap
        } else {
            relative_gap
        },
    }
}

/// How the last code length is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotFill {
    /// Every length `1..2^n-1` fully used, then two codes of length `2^n`,
    /// for exactly `2^(2^n)` slots.
    Greedy,
    /// One code of length `2^n`, `2^(2^n) − 1` slots.
    SingleLast,
}

/// The `2^(2^n)` shortest binary codes, one per Boolean function on `n`
/// variables: the cheapest possible layer of inequivalent sentences.
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonModel {
    pub n: u32,
    pub fill: SlotFill,
    /// `(code length, number of codes)` ascending by length.
    pub levels: Vec<(u64, BigUint)>,
}

impl ShannonModel {
    pub fn new(n: u32, fill: SlotFill) -> Self {
        assert!((1..=6).contains(&n), "shortest-code model supports 1 <= n <= 6");
        let top = 1u64 << n;
        let mut levels: Vec<(u64, BigUint)> = (1..top).map(|len| (len, BigUint::one() << len)).collect();
        let last = match fill {
            SlotFill::Greedy => 2u32,
            SlotFill::SingleLast => 1,
        };
        levels.push((top, BigUint::from(last)));
        Self { n, fill, levels }
    }

    pub fn slot_count(&self) -> BigUint {
        self.levels.iter().map(|(_, c)| c).sum()
    }

    /// One item per slot, sized by code length, all in class `n`.
    pub fn to_input_space(&self) -> Result<InputSpace<u64>, MeasureError> {
        assert!(self.n <= 4, "explicit slot spaces are limited to n <= 4");
        let mut sizes = Vec::new();
        for (len, count) in &self.levels {
            let count: u64 = count.try_into().expect("n <= 4 keeps counts small");
            sizes.extend(std::iter::repeat_n(*len, count as usize));
        }
        let items = (0..sizes.len() as u64).collect();
        let classes = vec![self.n as usize; sizes.len()];
        InputSpace::new(items, sizes, classes)
    }

    /// `Σ 1/f²` over all slots.
    pub fn inverse_square_sum(&self) -> Rational {
        self.levels.iter().fold(Rational::zero(), |acc, (len, count)| {
            acc + Rational::new(BigInt::from(count.clone()), BigInt::from(*len).pow(2))
        })
    }
}

/// One inequality of the bound chain. The first two steps compare bare
/// sums, before the common factor `2^n μ(y₀)` is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub label: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatorBound {
    pub n: u32,
    /// `Σ_Y 2^n / f(x)² · μ(x)` with `μ` uniform over the greedy slots.
    pub lhs: Rational,
    /// `μ(Y) = 1`.
    pub rhs: Rational,
    pub pass: bool,
    /// The same sum over the single-last-code fill, with `μ(y₀) = 2^-(2^n)`.
    pub single_last_lhs: Rational,
    pub chain: Vec<ChainStep>,
}

/// Evaluates the tabulator's class bound for `F = k³` on the shortest-code
/// model, and each step of the chain that would establish it.
pub fn tabulator_class_bound(n: u32) -> TabulatorBound {
    let greedy = ShannonModel::new(n, SlotFill::Greedy);
    let single = ShannonModel::new(n, SlotFill::SingleLast);
    let top = 1u64 << n;
    let weight = int(1u128 << n) * inv_pow2(top as u32);

    let model_sum = greedy.inverse_square_sum();
    let full_length = (1..=top).fold(Rational::zero(), |acc, i| {
        acc + int(1u128 << i) / int(i as u128 * i as u128)
    });
    let crude = int(1u128 << top) / int(top as u128);

    let lhs = &weight * &model_sum;
    let rhs = Rational::one();
    let chain = vec![
        step("model_sum_le_full_length", model_sum.clone(), full_length.clone()),
        step("full_length_le_crude", full_length, crude.clone()),
        step("crude_scaled_eq_class_mass", &weight * &crude, rhs.clone()),
        step("class_bound", lhs.clone(), rhs.clone()),
    ];
    TabulatorBound {
        n,
        pass: lhs <= rhs,
        single_last_lhs: &weight * single.inverse_square_sum(),
        lhs,
        rhs,
        chain,
    }
}

fn step(label: &'static str, lhs: Rational, rhs: Rational) -> ChainStep {
    let holds = lhs <= rhs;
    ChainStep { label, lhs, rhs, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    #[test]
    fn gamma_examples() {
        let g: Vec<u32> = gamma_table(5).iter().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(g, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn gamma_matches_binomial_closed_form() {
        for n in 0..=15u64 {
            let closed = binomial(BigUint::from(2 * n), BigUint::from(n)) / BigUint::from(n + 1);
            assert_eq!(gamma_count(n as usize), closed, "n={n}");
        }
    }

    #[test]
    fn sentence_count_examples() {
        assert_eq!(sentence_count(0), BigUint::from(1u32));
        assert_eq!(sentence_count(1), BigUint::from(48u32));
    }

    #[test]
    fn totals_at_zero() {
        let t = totals_and_ratio(0, 3);
        assert_eq!(t.read_total, BigUint::from(1u32));
        assert_eq!(t.tabulate_total, BigUint::from(2u32));
        assert_eq!(t.ratio, int(2));
    }

    #[test]
    fn tabulate_read_ratio_exact() {
        for n in 0..=30 {
            let t = totals_and_ratio(n, 0);
            let ratio = Rational::new(BigInt::from(t.tabulate_total), BigInt::from(t.read_total));
            assert_eq!(ratio, t.ratio, "n={n}");
        }
    }

    #[test]
    fn expected_min_small_cases() {
        assert_eq!(expected_min_brute(0), rational(3, 2));
        assert_eq!(expected_min_brute(1), rational(7, 4));
        for n in 0..=4 {
            let e = expected_min_plus_one(n);
            assert!(e.consistent(), "n={n}");
            assert!(e.closed < int(2));
            assert!(e.nonempty_sum < int(2));
        }
    }

    #[test]
    fn min_moment_first_order_matches_closed_form() {
        for n in 0..=5 {
            assert_eq!(min_moment(n, 1), expected_min_closed(n));
        }
    }

    #[test]
    fn moment_sum_small_orders() {
        let tol = rational(1, 1_000_000_000_000);
        let s1 = geometric_moment_sum(1, &tol);
        assert!((&s1.partial - int(2)).abs_le(&tol));
        let s2 = geometric_moment_sum(2, &tol);
        assert!((&s2.partial - int(6)).abs_le(&tol));
        let s3 = geometric_moment_sum(3, &tol);
        assert!((&s3.partial - int(26)).abs_le(&tol));
        assert_eq!(moment_bound(3), rational(405, 2));
        assert_eq!(moment_oclass_constant(2), int(20));
    }

    #[test]
    fn wilf_constants() {
        let w = wilf_comparison();
        assert_eq!(w.ours, BigUint::from(189u32));
        assert_eq!(w.reference, BigUint::from(197u32));
        assert_eq!(w.relative_gap, rational(8, 197));
    }

    #[test]
    fn shannon_slot_counts() {
        for n in 1..=4 {
            let g = ShannonModel::new(n, SlotFill::Greedy);
            assert_eq!(g.slot_count(), BigUint::one() << (1u32 << n));
            let s = ShannonModel::new(n, SlotFill::SingleLast);
            assert_eq!(s.slot_count() + 1u32, BigUint::one() << (1u32 << n));
        }
    }

    #[test]
    fn tabulator_bound_small_n() {
        // 2/4 · (2 + 2/4) = 5/4
        assert_eq!(tabulator_class_bound(1).lhs, rational(5, 4));
        assert!(!tabulator_class_bound(1).pass);
        assert!(!tabulator_class_bound(2).pass);
        assert!(tabulator_class_bound(3).pass);
        assert!(tabulator_class_bound(4).pass);
    }

    trait AbsLe {
        fn abs_le(&self, tol: &Rational) -> bool;
    }

    impl AbsLe for Rational {
        fn abs_le(&self, tol: &Rational) -> bool {
            let a = if *self < Rational::zero() { -self.clone() } else { self.clone() };
            a <= *tol
        }
    }
}
