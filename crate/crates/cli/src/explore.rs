//! Exploratory estimate of the expected first satisfying assignment over
//! all sentences of one encoded length, drawn uniformly.

use avgtime::engines::{min_n, tabulate};
use avgtime::{ConnectiveTable, Formula, Token};
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::montecarlo::Welford;
use crate::table::{float, Table};
use crate::{CliError, Result};

/// Largest variable count whose truth table is built per sample.
pub const MAX_EXPLORE_ALPHA: usize = 24;

#[derive(Debug, Clone, Copy)]
struct Choice {
    token: Token,
    /// Characters plus the following separator.
    width: usize,
    arity: usize,
}

/// Uniform sampler over the RPN sentences of exactly `size_bits` bits
/// whose variables are drawn from `p_0..p_{vars-1}`.
///
/// `ways[b][d]` counts the token sequences that spend exactly `b` width
/// units starting from stack depth `d` and end at depth 1. Every token
/// pays its characters plus one separator, so a sentence of `c`
/// characters spends `c + 1`.
#[derive(Debug, Clone)]
pub struct SizeSampler {
    choices: Vec<Choice>,
    ways: Vec<Vec<f64>>,
    budget: usize,
}

impl SizeSampler {
    pub fn new(table: &ConnectiveTable, vars: u32, size_bits: u64) -> Result<Self> {
        if size_bits == 0 || !size_bits.is_multiple_of(8) {
            return Err(CliError::Invalid(format!("size must be a positive multiple of 8 bits, got {size_bits}")));
        }
        if vars == 0 {
            return Err(CliError::Invalid("need at least one variable".into()));
        }
        let mut choices: Vec<Choice> = (0..vars)
            .map(|v| Choice {
                token: Token::Var(v),
                width: 2 + v.to_string().len(),
                arity: 0,
            })
            .collect();
        choices.extend(table.iter().map(|c| Choice {
            token: Token::Conn(c.id),
            width: c.symbol.chars().count() + 1,
            arity: c.arity,
        }));
        let budget = (size_bits / 8) as usize + 1;
        let depth = budget + 1;
        let mut ways = vec![vec![0.0f64; depth + 1]; budget + 1];
        ways[0][1] = 1.0;
        for b in 1..=budget {
            for d in 0..=depth {
                let mut total = 0.0;
                for c in &choices {
                    if let Some(next) = step(c, b, d, depth) {
                        total += ways[b - c.width][next];
                    }
                }
                ways[b][d] = total;
            }
        }
        if !ways[budget][0].is_finite() {
            return Err(CliError::Invalid(format!("too many sentences of {size_bits} bits to sample in f64")));
        }
        Ok(Self { choices, ways, budget })
    }

    /// Number of sentences of the requested size.
    pub fn population(&self) -> f64 {
        self.ways[self.budget][0]
    }

    pub fn sample(&self, table: &ConnectiveTable, rng: &mut impl Rng) -> Formula {
        let depth = self.ways[0].len() - 1;
        let (mut b, mut d) = (self.budget, 0);
        let mut tokens = Vec::new();
        while b > 0 {
            let options: Vec<(usize, f64)> = self
                .choices
                .iter()
                .enumerate()
                .filter_map(|(i, c)| step(c, b, d, depth).map(|next| (i, self.ways[b - c.width][next])))
                .filter(|&(_, w)| w > 0.0)
                .collect();
            let pick = WeightedIndex::new(options.iter().map(|o| o.1)).expect("a live state has a continuation");
            let c = self.choices[options[pick.sample(rng)].0];
            tokens.push(c.token);
            d = step(&c, b, d, depth).expect("picked choice is valid");
            b -= c.width;
        }
        Formula::new(tokens, table).expect("counted paths are well formed")
    }
}

fn step(c: &Choice, b: usize, d: usize, depth: usize) -> Option<usize> {
    if c.width > b || d < c.arity {
        return None;
    }
    let next = d - c.arity + 1;
    (next <= depth).then_some(next)
}

#[derive(Debug, Clone)]
pub struct ExploreOptions {
    pub sizes_bits: Vec<u64>,
    pub vars: u32,
    pub samples: u64,
}

/// One row per size: the estimated mean of `min_α(K)`, its standard
/// error, and the value `2 − 2^-(2^α)` that uniform model classes would
/// give for `min + 1`, averaged over the sampled `α`.
pub fn explore_min(table: &ConnectiveTable, seed: u64, opts: &ExploreOptions) -> Result<Table> {
    if opts.samples == 0 {
        return Err(CliError::Invalid("samples must be positive".into()));
    }
    let mut t = Table::new(&[
        "size_bits",
        "max_arity",
        "vars",
        "population",
        "samples",
        "seed",
        "mean_min",
        "se_min",
        "mean_min_plus_one",
        "class_uniform_min_plus_one",
        "mean_alpha",
        "unsat_fraction",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &size in &opts.sizes_bits {
        let sampler = SizeSampler::new(table, opts.vars, size)?;
        if sampler.population() == 0.0 {
            return Err(CliError::Invalid(format!("no sentence has exactly {size} bits")));
        }
        let mut mins = Welford::default();
        let mut reference = 0.0;
        let mut alphas = 0.0;
        let mut unsat = 0u64;
        let mut rejected = 0u64;
        while mins.count() < opts.samples {
            let x = sampler.sample(table, &mut rng);
            let alpha = x.alpha();
            if alpha == 0 {
                rejected += 1;
                if rejected > 1000 * opts.samples {
                    return Err(CliError::Invalid("almost every sentence of this size is variable-free".into()));
                }
                continue;
            }
            if alpha > MAX_EXPLORE_ALPHA {
                return Err(CliError::Invalid(format!("sampled α = {alpha} exceeds {MAX_EXPLORE_ALPHA}")));
            }
            let k = tabulate(&x, table).payload;
            if k.is_empty() {
                unsat += 1;
            }
            mins.push(min_n(&k) as f64);
            reference += 2.0 - 0.5f64.powi(1 << alpha.min(30));
            alphas += alpha as f64;
        }
        let k = opts.samples as f64;
        t.push(vec![
            size.to_string(),
            table.max_arity().to_string(),
            opts.vars.to_string(),
            float(sampler.population()),
            opts.samples.to_string(),
            seed.to_string(),
            float(mins.mean()),
            float(mins.std_error()),
            float(mins.mean() + 1.0),
            float(reference / k),
            float(alphas / k),
            float(unsat as f64 / k),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use avgtime::{enumerate_formulas, EnumLimit};

    use super::*;

    #[test]
    fn population_matches_enumeration() {
        let table = ConnectiveTable::standard();
        for bits in [16u64, 32, 56, 72, 88] {
            let sampler = SizeSampler::new(&table, 2, bits).unwrap();
            let exhaustive = enumerate_formulas(&table, 2, EnumLimit::MaxTokens(8))
                .filter(|x| x.size_bits(&table) == bits)
                .count();
            assert_eq!(sampler.population(), exhaustive as f64, "bits={bits}");
        }
    }

    #[test]
    fn samples_are_uniform() {
        let table = ConnectiveTable::standard();
        let sampler = SizeSampler::new(&table, 2, 56).unwrap();
        let population = sampler.population() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 20_000;
        let mut hits: HashMap<Formula, usize> = HashMap::new();
        for _ in 0..draws {
            let x = sampler.sample(&table, &mut rng);
            assert_eq!(x.size_bits(&table), 56);
            *hits.entry(x).or_default() += 1;
        }
        assert_eq!(hits.len(), population);
        let p = 1.0 / population as f64;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for &h in hits.values() {
            assert!((h as f64 - draws as f64 * p).abs() < 5.0 * sd);
        }
    }

    #[test]
    fn odd_sizes_are_rejected() {
        let table = ConnectiveTable::standard();
        assert!(SizeSampler::new(&table, 2, 12).is_err());
        assert_eq!(SizeSampler::new(&table, 2, 8).unwrap().population(), 0.0);
    }
}
