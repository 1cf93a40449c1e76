//! Enumerated input spaces used by the experiments.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::engines;
use crate::formula::{enumerate_formulas, ConnectiveTable, EnumLimit, Formula, Token};
use crate::measure::{
    uniform_over_model_classes, Distribution, InputSpace, MeasureError, Normalization, Rational,
};

/// Largest token budget tried when growing an enumeration to cover every
/// model class.
pub const DEFAULT_TOKEN_CAP: usize = 11;

/// All formulas with exactly `n` distinct variables over `p_0..p_{n-1}`
/// and at most `max_tokens` tokens.
pub fn formulas_with_alpha(table: &ConnectiveTable, n: u32, max_tokens: usize) -> Vec<Formula> {
    enumerate_formulas(table, n, EnumLimit::MaxTokens(max_tokens))
        .with_alpha(n as usize)
        .collect()
}

fn distinct_models(table: &ConnectiveTable, formulas: &[Formula]) -> usize {
    formulas
        .iter()
        .map(|x| engines::tabulate(x, table).payload)
        .collect::<BTreeSet<_>>()
        .len()
}

/// Grows the token budget from `start` until the `α = n` enumeration
/// realizes all `2^(2^n)` Boolean functions. Returns the formulas and the
/// budget that sufficed.
pub fn covering_formulas(
    table: &ConnectiveTable,
    n: u32,
    start: usize,
    cap: usize,
) -> Result<(Vec<Formula>, usize), MeasureError> {
    let required = 1usize << (1u32 << n);
    let mut best = 0;
    for tokens in start.max(1)..=cap {
        let formulas = formulas_with_alpha(table, n, tokens);
        let covered = distinct_models(table, &formulas);
        if covered == required {
            return Ok((formulas, tokens));
        }
        best = covered;
    }
    Err(MeasureError::ClassUncovered {
        class: n as usize,
        covered: best,
        required,
    })
}

/// A satisfiability experiment space: the union of covering enumerations
/// for each requested `n`, with scanner costs and the
/// uniform-over-model-classes distribution.
#[derive(Debug, Clone)]
pub struct SatSpace {
    pub space: InputSpace<Formula>,
    pub costs: Vec<Rational>,
    pub sizes_used: Vec<(u32, usize)>,
}

pub fn sat_space(
    table: &ConnectiveTable,
    ns: &[u32],
    start: usize,
    cap: usize,
) -> Result<SatSpace, MeasureError> {
    let mut parts = Vec::new();
    let mut sizes_used = Vec::new();
    for &n in ns {
        let (formulas, tokens) = covering_formulas(table, n, start, cap)?;
        parts.push(formulas);
        sizes_used.push((n, tokens));
    }
    let space = InputSpace::union(table, parts)?;
    let costs = space.costs(|x| engines::sat_scan(x, table).time_units);
    Ok(SatSpace {
        space,
        costs,
        sizes_used,
    })
}

impl SatSpace {
    pub fn model_uniform(
        &self,
        table: &ConnectiveTable,
        normalization: Normalization,
    ) -> Result<Distribution, MeasureError> {
        uniform_over_model_classes(&self.space, table, normalization)
    }

    /// The co-problem space: every formula negated, carrying over the
    /// weights of `mu` item by item.
    pub fn co_problem(
        &self,
        table: &ConnectiveTable,
        mu: &Distribution,
    ) -> Option<Result<(SatSpace, Distribution), MeasureError>> {
        let negated: Option<Vec<Formula>> = self
            .space
            .items()
            .iter()
            .map(|x| engines::co_problem(x, table))
            .collect();
        let negated = negated?;
        Some((|| {
            let space = InputSpace::from_formulas(table, negated)?;
            let costs = space.costs(|x| engines::sat_scan(x, table).time_units);
            let dist = Distribution::new(&space, mu.weights().to_vec(), mu.normalization())?;
            Ok((
                SatSpace {
                    space,
                    costs,
                    sizes_used: self.sizes_used.clone(),
                },
                dist,
            ))
        })())
    }

    /// Costs raised to the `m`-th power.
    pub fn cost_powers(&self, m: u32) -> Vec<Rational> {
        self.costs.iter().map(|c| c.pow(m as i32)).collect()
    }

    /// `E[f] / E[T]` under `mu`: the share of scanner time spent reading.
    pub fn read_share(&self, mu: &Distribution) -> Rational {
        let mut read = Rational::zero();
        let mut total = Rational::zero();
        for i in 0..self.space.len() {
            read += Rational::from_integer(self.space.size(i).into()) * mu.weight(i);
            total += &self.costs[i] * mu.weight(i);
        }
        if total.is_zero() {
            Rational::one()
        } else {
            read / total
        }
    }
}

/// Leaf variable indices, left to right.
pub fn leaf_variables(x: &Formula) -> Vec<u32> {
    x.tokens()
        .iter()
        .filter_map(|t| match t {
            Token::Var(v) => Some(*v),
            Token::Conn(_) => None,
        })
        .collect()
}

/// The selection convention behind `Γ(N) · 16^N · (2^(N+1) − 1)`: each
/// nonempty subset `S` of the fixed variables fills the leaves with its
/// members in increasing order, repeating the largest to pad. A formula
/// qualifies when its leaves are strictly increasing up to some point and
/// constant afterwards.
pub fn is_canonical_selection(x: &Formula) -> bool {
    let leaves = leaf_variables(x);
    let mut i = 1;
    while i < leaves.len() && leaves[i] > leaves[i - 1] {
        i += 1;
    }
    let top = leaves[i - 1];
    leaves[i..].iter().all(|&v| v == top)
}
