//! Seeded Monte Carlo estimates of average running time on enumerated
//! spaces, checked against the exact value.

use avgtime::engines;
use avgtime::measure::{avg_time, power_law_length, to_f64, uniform_on, Distribution, Normalization, Rational};
use avgtime::spaces::{sat_space, SatSpace};
use num_traits::Zero;
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::Context;
use crate::table::{float, fraction, Table};
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McDist {
    ModelClasses,
    Uniform,
    PowerLaw(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McCost {
    Sat,
    Tabulate,
    Rewrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Samples {
    Count(u64),
    /// Visit every point once with its weight.
    All,
}

impl std::str::FromStr for Samples {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(Samples::All);
        }
        match s.parse::<u64>() {
            Ok(0) | Err(_) => Err(format!("expected a positive count or `all`, got `{s}`")),
            Ok(k) => Ok(Samples::Count(k)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct McOptions {
    pub ns: Vec<u32>,
    pub max_tokens: usize,
    pub dist: McDist,
    pub cost: McCost,
    pub samples: Samples,
}

/// Streaming mean and variance.
#[derive(Debug, Clone, Copy, Default)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.count - 1) as f64;
        (var / self.count as f64).sqrt()
    }
}

fn distribution(ctx: &Context, s: &SatSpace, dist: McDist) -> Result<Distribution> {
    Ok(match dist {
        McDist::ModelClasses => s.model_uniform(&ctx.table, Normalization::Global)?,
        McDist::Uniform => uniform_on(&s.space, &s.space.all())?,
        McDist::PowerLaw(p) => power_law_length(&s.space, p)?,
    })
}

fn costs(ctx: &Context, s: &SatSpace, cost: McCost) -> Vec<Rational> {
    match cost {
        McCost::Sat => s.costs.clone(),
        McCost::Tabulate => s.space.costs(|x| engines::tabulate(x, &ctx.table).time_units),
        McCost::Rewrite => s.space.costs(|x| engines::rewrite_cost(x, &ctx.table).time_units),
    }
}

pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub exact: Rational,
}

impl Estimate {
    pub fn within(&self, k: f64) -> bool {
        let exact = to_f64(&self.exact);
        let diff = (self.mean - exact).abs();
        if self.std_error == 0.0 {
            diff <= 1e-12 * exact.abs().max(1.0)
        } else {
            diff <= k * self.std_error
        }
    }
}

pub fn estimate(ctx: &Context, opts: &McOptions) -> Result<Estimate> {
    let s = sat_space(&ctx.table, &opts.ns, 1, opts.max_tokens)?;
    let mu = distribution(ctx, &s, opts.dist)?;
    let costs = costs(ctx, &s, opts.cost);
    let exact = avg_time(&costs, &mu, &s.space.all())?;
    match opts.samples {
        Samples::All => {
            let mut weighted = Rational::zero();
            let mut mass = Rational::zero();
            for (c, w) in costs.iter().zip(mu.weights()) {
                weighted += c * w;
                mass += w;
            }
            Ok(Estimate {
                mean: to_f64(&(weighted / mass)),
                std_error: 0.0,
                exact,
            })
        }
        Samples::Count(k) => {
            let weights: Vec<f64> = mu.weights().iter().map(to_f64).collect();
            let index = WeightedIndex::new(&weights).map_err(|e| CliError::Invalid(e.to_string()))?;
            let values: Vec<f64> = costs.iter().map(to_f64).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut acc = Welford::default();
            for _ in 0..k {
                acc.push(values[index.sample(&mut rng)]);
            }
            Ok(Estimate {
                mean: acc.mean(),
                std_error: acc.std_error(),
                exact,
            })
        }
    }
}

/// One CSV row: the estimate, its standard error, the exact value and
/// whether they agree within four standard errors.
pub fn montecarlo(ctx: &Context, opts: &McOptions) -> Result<Table> {
    let e = estimate(ctx, opts)?;
    let mut t = Table::new(&[
        "classes",
        "dist",
        "cost",
        "samples",
        "seed",
        "mean",
        "std_error",
        "exact_num",
        "exact_den",
        "exact_float",
        "within_4se",
    ]);
    let classes: Vec<String> = opts.ns.iter().map(|n| n.to_string()).collect();
    let dist = match opts.dist {
        McDist::ModelClasses => "model-classes".to_string(),
        McDist::Uniform => "uniform".to_string(),
        McDist::PowerLaw(p) => format!("power-law-{p}"),
    };
    let cost = match opts.cost {
        McCost::Sat => "sat",
        McCost::Tabulate => "tabulate",
        McCost::Rewrite => "rewrite",
    };
    let samples = match opts.samples {
        Samples::All => "all".to_string(),
        Samples::Count(k) => k.to_string(),
    };
    let within = e.within(4.0);
    if !within {
        t.fail();
    }
    let mut row = vec![
        classes.join(" "),
        dist,
        cost.to_string(),
        samples,
        ctx.seed.to_string(),
        float(e.mean),
        float(e.std_error),
    ];
    row.extend(fraction(&e.exact));
    row.push(float(to_f64(&e.exact)));
    row.push(within.to_string());
    t.push(row);
    Ok(t)
}
