//! Instrumented algorithms with closed-form abstract costs.
//!
//! Costs are the declared models, not measured step counts: the rewriter
//! pays `f(x)`, the tabulator pays `2^α(x) · f(x)`, and the scanner pays
//! `f(x) · (min_n(K(x)) + 1)`.

use crate::formula::{ConnectiveTable, Formula, ModelSet};

/// An algorithm result together with its abstract running time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostedRun<P> {
    pub payload: P,
    pub time_units: u128,
}

/// Copies the input; costs one unit per bit read.
pub fn rewrite_cost(x: &Formula, table: &ConnectiveTable) -> CostedRun<Formula> {
    CostedRun {
        payload: x.clone(),
        time_units: x.size_bits(table) as u128,
    }
}

/// Truth table of `x` over its own variables (compacted by first use).
pub fn tabulate(x: &Formula, table: &ConnectiveTable) -> CostedRun<ModelSet> {
    let compact = x.compacted();
    let alpha = compact.alpha() as u32;
    let model = compact
        .model_set(table, alpha)
        .expect("compacted formula uses variables 0..alpha");
    CostedRun {
        payload: model,
        time_units: (1u128 << alpha) * x.size_bits(table) as u128,
    }
}

/// Smallest member of `k`, or `2^n` when `k` is empty.
pub fn min_n(k: &ModelSet) -> u64 {
    k.smallest().unwrap_or_else(|| k.universe())
}

/// Scans assignments `0, 1, 2, …` and stops at the first satisfying one.
pub fn sat_scan(x: &Formula, table: &ConnectiveTable) -> CostedRun<Option<u64>> {
    let compact = x.compacted();
    let alpha = compact.alpha() as u32;
    let universe = 1u64 << alpha;
    let witness = (0..universe).find(|&m| compact.eval_unchecked(table, m));
    let stop = witness.unwrap_or(universe);
    CostedRun {
        payload: witness,
        time_units: x.size_bits(table) as u128 * (stop as u128 + 1),
    }
}

/// The negation of `x` using whichever negation the table offers.
pub fn co_problem(x: &Formula, table: &ConnectiveTable) -> Option<Formula> {
    table
        .negation()
        .or_else(|| table.binary_negation())
        .map(|neg| x.wrapped(neg, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Formula {
        Formula::parse(s, &ConnectiveTable::standard()).unwrap()
    }

    #[test]
    fn rewrite_examples() {
        let t = ConnectiveTable::standard();
        assert_eq!(rewrite_cost(&parse("p0"), &t).time_units, 16);
        assert_eq!(rewrite_cost(&parse("p0 p1 ∨"), &t).time_units, 56);
        assert_eq!(rewrite_cost(&parse("p0"), &t).payload, parse("p0"));
    }

    #[test]
    fn tabulate_examples() {
        let t = ConnectiveTable::standard();
        assert_eq!(tabulate(&parse("p0"), &t).time_units, 32);
        let or = tabulate(&parse("p0 p1 ∨"), &t);
        assert_eq!(or.time_units, 224);
        assert_eq!(or.payload, ModelSet::from_members(2, [1, 2, 3]));
        // compaction: p7 becomes p0
        let run = tabulate(&parse("p7 ¬"), &t);
        assert_eq!(run.payload, ModelSet::from_members(1, [0]));
    }

    #[test]
    fn min_n_examples() {
        assert_eq!(min_n(&ModelSet::from_members(1, [1])), 1);
        assert_eq!(min_n(&ModelSet::empty(2)), 4);
        assert_eq!(min_n(&ModelSet::from_members(3, 0..8)), 0);
    }

    #[test]
    fn sat_scan_examples() {
        let t = ConnectiveTable::standard();
        let run = sat_scan(&parse("p0 p1 ∨"), &t);
        assert_eq!(run.payload, Some(1));
        assert_eq!(run.time_units, 56 * 2);
        let contra = parse("p0 p0 ¬ ∧");
        let run = sat_scan(&contra, &t);
        assert_eq!(run.payload, None);
        assert_eq!(run.time_units, contra.size_bits(&t) as u128 * 3);
    }

    #[test]
    fn co_problem_negates() {
        let t = ConnectiveTable::standard();
        let x = parse("p0 p1 ∧");
        let nx = co_problem(&x, &t).unwrap();
        assert_eq!(nx.render(&t), "p0 p1 ∧ ¬");
        assert_eq!(tabulate(&nx, &t).payload, tabulate(&x, &t).payload.complement());
        assert!(co_problem(&x, &ConnectiveTable::from_text("& 2 0001").unwrap()).is_none());
    }
}
