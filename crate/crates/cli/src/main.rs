use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intermittent::asymptotics::{self, EllMode};
use intermittent::harness::{self, TraceConfig};
use intermittent::{
    Error, ExperimentConfig, ForecasterKind, LogarithmicDist, ObsolescenceSetup, Result,
    ScenarioKind, SizeDistribution,
};

#[derive(Parser)]
#[command(
    name = "intermittent",
    version,
    about = "Intermittent demand forecasting under obsolescence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo sweep over smoothing-factor grids; one CSV per table.
    Experiment(ExperimentArgs),
    /// Forecasts of several methods on one demand series, for plotting.
    Trace(TraceArgs),
    /// Errors of a decaying forecast after demand stops.
    Asymptotic(AsymptoticArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// stationary, decreasing and/or sudden (comma-separated).
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    alpha_grid: Option<String>,
    #[arg(long)]
    beta_grid: Option<String>,
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    init_len: Option<String>,
    #[arg(long)]
    eval_len: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// one-step-ahead (default) or same-period.
    #[arg(long)]
    alignment: Option<String>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_config_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("scenario", &self.scenario),
            ("ell", &self.ell),
            ("p0", &self.p0),
            ("alpha_grid", &self.alpha_grid),
            ("beta_grid", &self.beta_grid),
            ("methods", &self.methods),
            ("runs", &self.runs),
            ("init_len", &self.init_len),
            ("eval_len", &self.eval_len),
            ("seed", &self.seed),
            ("alignment", &self.alignment),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                config.set(key, value)?;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, default_value = "sudden")]
    scenario: ScenarioKind,
    #[arg(long, default_value_t = 0.25)]
    p0: f64,
    /// Logarithmic sizes with this parameter instead of a fixed size.
    #[arg(long, conflicts_with = "fixed_size")]
    ell: Option<f64>,
    #[arg(long)]
    fixed_size: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "SBA,TSB,HES,LES")]
    methods: Vec<ForecasterKind>,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// TSB's probability smoothing factor.
    #[arg(long, default_value_t = 0.02)]
    tsb_beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    horizon: usize,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticArgs {
    /// tsb, hes or les.
    #[arg(long)]
    method: ForecasterKind,
    #[arg(long, default_value_t = 1.0)]
    f0: f64,
    #[arg(long, default_value_t = 1.0)]
    tau_hat0: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Number of obsolete periods to simulate.
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
}

fn experiment(args: &ExperimentArgs) -> Result<()> {
    let config = args.config()?;
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let tables = harness::run_experiment(&config)?;
    for path in harness::write_tables(&tables, &args.out)? {
        println!("wrote {}", path.display());
    }
    println!();
    println!("winners ({} alignment)", config.alignment.name());
    for (scenario, measure, best) in harness::winner_summary(&tables) {
        let names: Vec<&str> = best.iter().map(|k| k.name()).collect();
        println!(
            "  {:<10} {:<4} {}",
            scenario.name(),
            measure.name(),
            names.join(", ")
        );
    }
    Ok(())
}

fn trace(args: &TraceArgs) -> Result<()> {
    let sizes = match (args.ell, args.fixed_size) {
        (Some(ell), _) => SizeDistribution::Logarithmic(LogarithmicDist::new(ell)?),
        (None, size) => SizeDistribution::Fixed(size.unwrap_or(1)),
    };
    let config = TraceConfig {
        scenario: args.scenario,
        p0: args.p0,
        sizes,
        methods: args.methods.clone(),
        alpha: args.alpha,
        beta: args.beta,
        tsb_beta: args.tsb_beta,
        seed: args.seed,
        horizon: args.horizon,
    };
    let trace = harness::trace_forecasts(&config)?;
    match &args.out {
        Some(path) => {
            harness::write_trace(&trace, path)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", trace.to_csv()),
    }
    Ok(())
}

fn asymptotic(args: &AsymptoticArgs) -> Result<()> {
    let setup = ObsolescenceSetup::new(args.method, args.f0, args.tau_hat0, args.beta)?;
    println!("method      {}", setup.kind());
    println!("f0          {}", setup.f0());
    println!("tau_hat0    {}", setup.tau_hat0());
    println!("beta        {}", setup.beta());
    println!(
        "closed form CFE {}  CSE {}",
        asymptotics::asymptotic_cfe(&setup),
        asymptotics::asymptotic_cse(&setup)
    );
    match setup.kind() {
        ForecasterKind::Les => {
            let (cfe, cse) = asymptotics::exact_les_sums(&setup, EllMode::Round)?;
            println!(
                "exact       CFE {cfe}  CSE {cse}  (2 tau_hat0 / beta = {} rounded)",
                setup.ell()
            );
        }
        ForecasterKind::Tsb => {
            let (cfe, cse) = asymptotics::exact_tsb_sums(&setup)?;
            println!("exact       CFE {cfe}  CSE {cse}  (geometric series)");
        }
        _ => println!("exact       none (CFE grows like a harmonic sum)"),
    }
    let (cfe, cse) = asymptotics::decay_sums(&setup, args.horizon)?;
    println!(
        "truncated   CFE {cfe}  CSE {cse}  ({} periods)",
        args.horizon
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Experiment(args) => experiment(args),
        Command::Trace(args) => trace(args),
        Command::Asymptotic(args) => asymptotic(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(3),
                Error::Domain(_) | Error::Config(_) => ExitCode::from(2),
            }
        }
    }
}
