use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scopecomplete::bench::SyntheticSpec;
use scopecomplete::corpus::PrefixRange;

mod commands;

use commands::{CliConfig, CliError, StrategyChoice};

#[derive(Debug, Parser)]
#[command(
    name = "scopecomplete",
    version,
    about = "Package-aware identifier completion and its benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print corpus statistics.
    Stats(Common),
    /// Rank completions for one prefix typed inside a package.
    Complete {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        package: String,
        #[arg(long)]
        prefix: String,
    },
    /// Run the prefix-masking benchmark.
    Bench(Common),
    /// Write a seeded synthetic corpus to disk.
    Synth {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Compare two saved JSON reports.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        without: PathBuf,
        #[arg(long)]
        with: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
struct Common {
    /// Corpus directory or `.corpus.json` file (output directory for `synth`).
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value = "package-aware")]
    strategy: StrategyChoice,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value = "2..8")]
    prefix_range: PrefixRange,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    case_sensitive: bool,
    #[arg(long, default_value = "Test")]
    test_marker: String,
    /// Packages contributing cases: all, tests, non-tests, or a comma list.
    #[arg(long, default_value = "all")]
    filter: String,
    #[arg(long, default_value = "table")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = '-')]
    separator: char,
    /// Worker threads for `bench`; defaults to SCOPECOMPLETE_THREADS or all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long, default_value_t = 10)]
    packages: usize,
    #[arg(long, default_value_t = 20)]
    symbols: usize,
    #[arg(long, default_value_t = 0.3)]
    collision_rate: f64,
    #[arg(long, default_value_t = 0.3)]
    p_int: f64,
    #[arg(long, default_value_t = 3)]
    root_groups: usize,
    #[arg(long, default_value_t = 4)]
    units: usize,
    #[arg(long, default_value_t = 5)]
    methods: usize,
    #[arg(long, default_value_t = 3)]
    refs: usize,
}

impl From<SpecArgs> for SyntheticSpec {
    fn from(a: SpecArgs) -> Self {
        SyntheticSpec {
            packages: a.packages,
            symbols_per_package: a.symbols,
            collision_rate: a.collision_rate,
            p_int: a.p_int,
            root_groups: a.root_groups,
            units_per_package: a.units,
            methods_per_unit: a.methods,
            refs_per_method: a.refs,
        }
    }
}

impl From<Common> for CliConfig {
    fn from(c: Common) -> Self {
        CliConfig {
            corpus_path: c.corpus,
            strategy: c.strategy,
            k: c.k,
            prefix_range: c.prefix_range,
            case_sensitive: c.case_sensitive,
            test_marker: c.test_marker,
            filter: c.filter,
            output_format: match c.format {
                Format::Csv => commands::OutputFormat::Csv,
                Format::Json => commands::OutputFormat::Json,
                Format::Table => commands::OutputFormat::Table,
            },
            out: c.out,
            seed: c.seed,
            separator: c.separator,
            threads: c.threads,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats(common) => commands::cmd_stats(&CliConfig::from(common).validated()?),
        Command::Complete {
            common,
            package,
            prefix,
        } => commands::cmd_complete(&CliConfig::from(common).validated()?, &package, &prefix),
        Command::Bench(common) => commands::cmd_bench(&CliConfig::from(common).validated()?),
        Command::Synth { common, spec } => {
            commands::cmd_synth(&CliConfig::from(common).validated()?, &spec.into())
        }
        Command::Compare {
            common,
            without,
            with,
        } => commands::cmd_compare(&CliConfig::from(common).validated()?, &without, &with),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("scopecomplete: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
