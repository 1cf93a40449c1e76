use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use avgtime::measure::TractabilityConfig;
use avgtime::ConnectiveTable;
use avgtime_cli::commands::{self, Context, Property23Space, TabModel, TractabilityExample};
use avgtime_cli::config::load_config;
use avgtime_cli::explore::{explore_min, ExploreOptions};
use avgtime_cli::montecarlo::{montecarlo, McCost, McDist, McOptions, Samples};
use avgtime_cli::{CliError, Result, Table};
use clap::parser::ValueSource;
use clap::{ArgAction, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

/// Exact average-running-time experiments with CSV reports.
///
/// Exit status is 0 when every asserted row passes, 1 when one fails and
/// 2 on errors.
#[derive(Debug, Parser)]
#[command(name = "avgtime", version)]
struct Cli {
    /// `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report known deviations as `expected_fail` rows.
    #[arg(long, global = true)]
    audit: bool,
    /// Connective table file (`symbol arity truth-bits` per line).
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Shannon,
    Enumerated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleArg {
    Harmonic,
    Geometric,
    Constant,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistArg {
    ModelClasses,
    Uniform,
    PowerLaw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CostArg {
    Sat,
    Tabulate,
    Rewrite,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    Sat,
    Shannon,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expected first satisfying assignment plus one over uniform model sets.
    ExpectedMin {
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        n: Vec<u32>,
    },
    /// Scanner costs against F = 2k, with the co-problem.
    SatOclass {
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Tabulator costs against F = k^3.
    TabOclass {
        #[arg(long, value_enum, default_value = "shannon")]
        model: ModelArg,
        /// Defaults to 1,2,3,4 for shannon and 1,2 for enumerated.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Moment sums, moment classes and the constant comparison.
    Moments {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
        m: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        oclass_m: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<u32>,
        #[arg(long, default_value = "1e-12")]
        tol: String,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Sentence counts and the divergent read/tabulate ratio.
    Counting {
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Partial averages over growing prefixes of classes.
    Tractability {
        #[arg(long, value_enum, default_value = "harmonic")]
        example: ExampleArg,
        /// Number of classes; defaults to 1000000 (harmonic) or 61.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, default_value_t = 1e6)]
        cap: f64,
    },
    /// Seeded estimate of the average cost on an enumerated space.
    Montecarlo {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<u32>,
        #[arg(long, value_enum, default_value = "model-classes")]
        dist: DistArg,
        /// Exponent for the power-law distribution.
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, value_enum, default_value = "sat")]
        cost: CostArg,
        /// A positive count or `all`.
        #[arg(long, default_value = "100000")]
        samples: Samples,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Expected first satisfying assignment over sentences of a fixed size.
    ExploreMin {
        /// Sentence sizes in bits (multiples of 8).
        #[arg(long, value_delimiter = ',', default_value = "48,64,80,96,112,128")]
        size: Vec<u64>,
        /// Connectives of every arity up to this (ignored with --table).
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 4)]
        vars: u32,
        #[arg(long, default_value_t = 10000)]
        samples: u64,
    },
    /// Class-wise bound against every characteristic reweighting.
    #[command(name = "property-2-2")]
    Property22 {
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<u32>,
        /// Multiply the costs of this class by --factor.
        #[arg(long)]
        inflate: Option<usize>,
        #[arg(long, default_value_t = 2)]
        factor: u128,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Summable class weights bound the reweighted total cost.
    #[command(name = "property-2-3")]
    Property23 {
        #[arg(long, value_enum, default_value = "sat")]
        space: SpaceArg,
        /// Defaults to 1,2 for sat and 3,4 for shannon.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u32>>,
        /// H(n) = n^-h_power.
        #[arg(long, default_value_t = 2)]
        h_power: u32,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
    /// Tail mass above multiples of the average cost.
    MarkovTail {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,100")]
        factor: Vec<u128>,
        #[arg(long, default_value_t = 11)]
        max_tokens: usize,
    },
}

/// Parses the command line, filling flags the user did not pass from the
/// `--config` file.
fn parse_args(argv: Vec<OsString>) -> Result<Cli> {
    let matches = Cli::command().get_matches_from(argv.clone());
    let Some(path) = matches.get_one::<PathBuf>("config") else {
        return Cli::from_arg_matches(&matches).map_err(|e| e.exit());
    };
    let cfg = load_config(path)?;
    let root = Cli::command();
    let (name, sub_matches) = matches.subcommand().expect("a subcommand is required");
    let sub = root.find_subcommand(name).expect("parsed subcommand exists");
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &cfg {
        let known_elsewhere = root
            .get_subcommands()
            .flat_map(|c| c.get_arguments())
            .any(|a| a.get_long() == Some(key.as_str()));
        if key == "config" {
            return Err(CliError::Invalid("config files cannot include other configs".into()));
        }
        let by_key = |a: &&clap::Arg| a.get_long() == Some(key.as_str());
        let (arg, owner) = match sub.get_arguments().find(by_key) {
            Some(arg) => (arg, sub_matches),
            None => match root.get_arguments().find(by_key) {
                Some(arg) => (arg, &matches),
                None if known_elsewhere => continue,
                None => return Err(CliError::Invalid(format!("unknown config key `{key}`"))),
            },
        };
        let from_cli = owner.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine);
        if from_cli {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            let on: bool = value
                .parse()
                .map_err(|_| CliError::Invalid(format!("`{key}` must be true or false")))?;
            if on {
                extra.push(format!("--{key}").into());
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }
    let mut full = argv;
    full.extend(extra);
    Cli::try_parse_from(full).map_err(|e| e.exit())
}

fn run(cli: Cli) -> Result<Table> {
    let table = match &cli.table {
        Some(path) => Some(ConnectiveTable::load(path)?),
        None => None,
    };
    let ctx = Context {
        table: table.clone().unwrap_or_else(ConnectiveTable::standard),
        seed: cli.seed,
        audit: cli.audit,
    };
    match cli.command {
        Command::ExpectedMin { n } => commands::expected_min(&n),
        Command::SatOclass { n, max_tokens } => commands::sat_oclass(&ctx, &n, max_tokens),
        Command::TabOclass { model, n, max_tokens } => {
            let (model, default) = match model {
                ModelArg::Shannon => (TabModel::Shannon, vec![1, 2, 3, 4]),
                ModelArg::Enumerated => (TabModel::Enumerated, vec![1, 2]),
            };
            commands::tab_oclass(&ctx, &n.unwrap_or(default), model, max_tokens)
        }
        Command::Moments {
            m,
            oclass_m,
            n,
            tol,
            max_tokens,
        } => commands::moments(&ctx, &m, &oclass_m, &n, &commands::parse_decimal(&tol)?, max_tokens),
        Command::Counting { n_max, p } => Ok(commands::counting(n_max, p)),
        Command::Tractability {
            example,
            terms,
            epsilon,
            window,
            cap,
        } => {
            let example = match example {
                ExampleArg::Harmonic => TractabilityExample::Harmonic,
                ExampleArg::Geometric => TractabilityExample::Geometric,
                ExampleArg::Constant => TractabilityExample::Constant,
            };
            let cfg = TractabilityConfig { epsilon, window, cap };
            commands::tractability_cmd(example, terms, &cfg)
        }
        Command::Montecarlo {
            n,
            dist,
            p,
            cost,
            samples,
            max_tokens,
        } => {
            let opts = McOptions {
                ns: n,
                max_tokens,
                dist: match dist {
                    DistArg::ModelClasses => McDist::ModelClasses,
                    DistArg::Uniform => McDist::Uniform,
                    DistArg::PowerLaw => McDist::PowerLaw(p),
                },
                cost: match cost {
                    CostArg::Sat => McCost::Sat,
                    CostArg::Tabulate => McCost::Tabulate,
                    CostArg::Rewrite => McCost::Rewrite,
                },
                samples,
            };
            montecarlo(&ctx, &opts)
        }
        Command::ExploreMin {
            size,
            arity,
            vars,
            samples,
        } => {
            if !(1..=3).contains(&arity) && table.is_none() {
                return Err(CliError::Invalid(format!("arity must be 1, 2 or 3, got {arity}")));
            }
            let table = table.unwrap_or_else(|| ConnectiveTable::all_up_to(arity));
            let opts = ExploreOptions {
                sizes_bits: size,
                vars,
                samples,
            };
            explore_min(&table, cli.seed, &opts)
        }
        Command::Property22 {
            n,
            inflate,
            factor,
            max_tokens,
        } => commands::property_2_2(&ctx, &n, max_tokens, inflate.map(|c| (c, factor))),
        Command::Property23 {
            space,
            n,
            h_power,
            max_tokens,
        } => {
            let (kind, default) = match space {
                SpaceArg::Sat => (Property23Space::Sat, vec![1, 2]),
                SpaceArg::Shannon => (Property23Space::Shannon, vec![3, 4]),
            };
            commands::property_2_3(&ctx, kind, &n.unwrap_or(default), h_power, max_tokens)
        }
        Command::MarkovTail { n, factor, max_tokens } => commands::markov(&ctx, &n, &factor, max_tokens),
    }
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => table.write_csv(BufWriter::new(File::create(path)?)),
        None => table.write_csv(io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let outcome = parse_args(std::env::args_os().collect()).and_then(|cli| {
        let out = cli.out.clone();
        let table = run(cli)?;
        emit(&table, out.as_ref())?;
        Ok(table.ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("avgtime: at least one asserted row failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("avgtime: {e}");
            ExitCode::from(2)
        }
    }
}
