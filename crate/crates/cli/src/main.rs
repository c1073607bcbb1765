mod commands;
mod output;
mod weights;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spinnet::{Config, Error, LogBase, OutputFormat, SplitSpec, SystemSpec, TwiceSpin};

/// Entanglement, multiplicities and invariant-subspace checks for spin systems.
#[derive(Debug, Parser)]
#[command(name = "spinnet", version)]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true, env = "SPINNET_CONFIG")]
    config: Option<PathBuf>,

    /// Logarithm base for entropy-like outputs: 2 or e.
    #[arg(long, global = true)]
    log_base: Option<LogBase>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for scans, oracle sweeps and sampling.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest 2j_max handled with exact integers.
    #[arg(long, global = true)]
    exact_threshold: Option<u32>,

    /// Largest Hilbert-space dimension the oracle will build.
    #[arg(long, global = true)]
    dimension_cap: Option<u64>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multiplicity table c_j and invariant dimension N.
    Dims(SystemArgs),
    /// Entanglement report for a split and mixture.
    Entangle {
        #[command(flatten)]
        split: SplitArgs,
        /// JSON weights file; the uniform mixture when absent.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Large-system series with fits.
    Scan(ScanArgs),
    /// Check closed forms against the brute-force oracle.
    Verify(VerifyArgs),
    /// Monte Carlo distillation run.
    Distill {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// Number of spin-1/2 constituents.
    #[arg(long, conflicts_with_all = ["spin", "unitary"])]
    qubits: Option<u32>,
    /// Constituent spin, e.g. 1/2, 1, 3/2 (requires --count).
    #[arg(long, requires = "count", conflicts_with = "unitary")]
    spin: Option<TwiceSpin>,
    /// Rank M of SU(M) fundamentals (requires --count).
    #[arg(long, requires = "count")]
    unitary: Option<u32>,
    #[arg(long)]
    count: Option<u32>,
}

impl SystemArgs {
    fn system(&self) -> Result<SystemSpec, Error> {
        match (self.qubits, self.spin, self.unitary, self.count) {
            (Some(n), None, None, None) => Ok(SystemSpec::qubits(n)),
            (None, Some(s), None, Some(n)) => {
                if s == TwiceSpin::ZERO {
                    return Err(Error::InvalidArgument(
                        "constituent spin must be positive".into(),
                    ));
                }
                Ok(SystemSpec::spins(n, s))
            }
            (None, None, Some(m), Some(n)) => {
                if m < 2 {
                    return Err(Error::InvalidArgument(
                        "unitary rank must be at least 2".into(),
                    ));
                }
                Ok(SystemSpec::unitary(m, n))
            }
            _ => Err(Error::InvalidArgument(
                "give --qubits N, or --spin S --count N, or --unitary M --count N".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SplitArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Constituents on side A.
    #[arg(long)]
    split: u32,
}

impl SplitArgs {
    fn split(&self) -> Result<SplitSpec, Error> {
        let system = self.system.system()?;
        if system.twice_spin().is_none() {
            return Err(Error::InvalidArgument(
                "splits are defined for SU(2) spins".into(),
            ));
        }
        SplitSpec::new(system, self.split)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Law {
    /// log N - 2n log(2s+1) against log n.
    Entropy,
    /// Mutual information over entanglement for n:n splits.
    Factor3,
    /// Entanglement of n:n splits over (1/2) log n.
    Halflog,
    /// Peak multiplicity spin against its estimate.
    Jmax,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    law: Law,
    /// Sizes as LO:HI (log-spaced) or a comma list.
    #[arg(long = "n")]
    range: String,
    /// Points for a LO:HI range.
    #[arg(long, default_value_t = 60)]
    points: usize,
    /// Constituent spin for the entropy law.
    #[arg(long, default_value = "1/2")]
    spin: TwiceSpin,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    split: Option<u32>,
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Sweep every split of every even qubit count up to --max-qubits.
    #[arg(long, conflicts_with_all = ["qubits", "spin", "unitary", "split", "weights"])]
    all: bool,
    #[arg(long, default_value_t = 12, requires = "all")]
    max_qubits: u32,
    /// Random decompositions per split in the concavity check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Write the overlap reports as JSON to this path.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::VerificationFailed(_) => CliError::Verification(msg),
            Error::InvalidArgument(_)
            | Error::DimensionCapExceeded { .. }
            | Error::ExactBudgetExceeded { .. }
            | Error::NeedsOracle => CliError::Usage(msg),
            _ => CliError::Data(msg),
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    if let Some(b) = cli.log_base {
        cfg.log_base = b;
    }
    if let Some(f) = cli.format {
        cfg.output_format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(t) = cli.exact_threshold {
        cfg.exact_threshold = t;
    }
    if let Some(c) = cli.dimension_cap {
        cfg.dimension_cap = c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    let rendered = match &cli.command {
        Command::Dims(sys) => commands::dims(&sys.system()?, &cfg)?,
        Command::Entangle { split, weights } => {
            let w = weights::load(weights.as_deref())?;
            commands::entangle(&split.split()?, &w, &cfg)?
        }
        Command::Scan(args) => {
            let ns = commands::parse_range(&args.range, args.points)?;
            commands::scan(args.law, &ns, args.spin, &cfg)?
        }
        Command::Verify(args) => commands::verify(args, &cfg)?,
        Command::Distill {
            split,
            weights,
            trials,
        } => {
            let w = weights::load(weights.as_deref())?;
            commands::distill(&split.split()?, &w, *trials, &cfg)?
        }
    };
    let stdout = std::io::stdout();
    match output::emit(&rendered, cfg.output_format, &mut stdout.lock()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            return Err(CliError::Data(format!("cannot write output: {e}")));
        }
        _ => {}
    }
    match rendered.failure {
        Some(first) => Err(CliError::Verification(first)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
