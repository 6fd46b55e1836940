use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grm_infosets::cli::{
    exit_code, render_decompositions, render_infoset, render_tables, run_decompose, run_infoset,
    run_tables, FileConfig, OutputFormat, RunConfig,
};
use grm_infosets::code::DEFAULT_VERIFY_BOUND;
use grm_infosets::field::ModulusTable;
use grm_infosets::infoset::CodeOrder;

/// Information sets for first- and second-order generalized Reed-Muller
/// codes, with exact rank verification.
#[derive(Parser)]
#[command(name = "grmis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List admissible coprime splits n = q^m - 1 = r1 * r2
    Decompose {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = parse_order, default_value = "1")]
        order: CodeOrder,
        #[arg(long, value_enum, default_value = "text")]
        output: Format,
    },
    /// Compute check positions and both information sets for R_q(order, m)
    Infoset(InfosetArgs),
    /// Regenerate the embedded decomposition tables and diff against them
    Tables {
        #[arg(long, value_enum, default_value = "text")]
        output: Format,
    },
}

#[derive(Args)]
struct InfosetArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: u64,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    order: CodeOrder,
    /// first factor of n; the first admissible split is used when absent
    #[arg(long)]
    r1: Option<u64>,
    /// second factor; must equal n / r1 when given
    #[arg(long)]
    r2: Option<u64>,
    /// first coordinate of T(1), a unit mod r1
    #[arg(long, default_value_t = 1)]
    delta1: u64,
    /// second coordinate of T(1), a unit mod r2
    #[arg(long, default_value_t = 1)]
    delta2: u64,
    /// certify both information sets by rank over GF(q)
    #[arg(long)]
    verify: bool,
    /// ceiling on q^m for verification (env GRMIS_MAX_VERIFY_N, config file)
    #[arg(long)]
    max_verify_n: Option<u64>,
    /// TOML config file (modulus overrides, verification bound)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    output: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

fn parse_order(s: &str) -> Result<CodeOrder, String> {
    match s {
        "1" => Ok(CodeOrder::First),
        "2" => Ok(CodeOrder::Second),
        _ => Err("order must be 1 or 2".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> grm_infosets::Result<String> {
    match cli.command {
        Command::Decompose { q, m, order, output } => {
            let rows = run_decompose(q, m, order)?;
            Ok(render_decompositions(&rows, order, output.into()))
        }
        Command::Tables { output } => {
            let report = run_tables()?;
            Ok(render_tables(&report, output.into()))
        }
        Command::Infoset(args) => {
            let file_cfg = match &args.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| grm_infosets::Error::Config(e.to_string()))?;
                    FileConfig::parse(&text)?
                }
                None => FileConfig::default(),
            };
            let table: ModulusTable = file_cfg.modulus_table()?;
            let env_bound = std::env::var("GRMIS_MAX_VERIFY_N")
                .ok()
                .and_then(|v| v.parse().ok());
            let max_verify_n = args
                .max_verify_n
                .or(env_bound)
                .or(file_cfg.max_verify_n)
                .unwrap_or(DEFAULT_VERIFY_BOUND);
            let cfg = RunConfig {
                q: args.q,
                m: args.m,
                order: args.order,
                r1: args.r1,
                r2: args.r2,
                delta1: args.delta1,
                delta2: args.delta2,
                verify: args.verify,
                max_verify_n,
                output: args.output.into(),
            };
            let report = run_infoset(&cfg, &table)?;
            Ok(render_infoset(&report, cfg.output))
        }
    }
}
