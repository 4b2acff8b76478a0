use std::process::ExitCode;

use clap::{Parser, Subcommand};
use trilat::SolveOptions;
use trilat_cli::commands::{cmd_contour, cmd_oracle, cmd_solve, cmd_sweep, cmd_table, cmd_thresholds};
use trilat_cli::error::EXIT_OK;
use trilat_cli::{parse_number, parse_span, read_instance, CliError, CliResult, Format, OracleSettings, Span, TableName};

#[derive(Parser, Debug)]
#[command(name = "trilat", version, about = "Exact global minimizers of three-sensor absolute-residual trilateration")]
struct Cli {
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV output.
    #[arg(long, global = true)]
    csv: bool,
    /// Overrides the generator seed of an instance file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative tie tolerance for objective and threshold equalities.
    #[arg(long, global = true, value_parser = parse_number)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Global minimizers of an instance.
    Solve {
        instance: String,
        /// Cross-check against the brute-force oracle.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Objective values at the six intersections for a stored reference set.
    Table {
        #[arg(value_enum)]
        name: TableName,
    },
    /// Multiplicity map over (d1, d3) for the canonical layout (r, s).
    Sweep {
        #[arg(long, value_parser = parse_number)]
        r: f64,
        #[arg(long, value_parser = parse_number)]
        s: f64,
        /// d1 range as lo:hi.
        #[arg(long, value_parser = parse_span)]
        d1: Span,
        /// d3 range as lo:hi.
        #[arg(long, value_parser = parse_span)]
        d3: Span,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Objective sampled over the disks' bounding box plus 20%.
    Contour {
        instance: String,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Threshold levels of an isosceles instance.
    Thresholds { instance: String },
    /// Brute-force minimizers only.
    Oracle {
        instance: String,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 4.0)]
        factor: f64,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("TRILAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| CliError::usage(format!("TRILAT_THREADS={v}: not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("TRILAT_THREADS: {e}")))
}

fn run(cli: &Cli, format: Format) -> CliResult<String> {
    configure_threads()?;
    let mut opts = SolveOptions::<f64>::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::usage("--tol must lie in (0, 1)"));
        }
        opts = opts.with_tie_tol(tol);
    }
    match &cli.command {
        Command::Solve { instance, oracle_check } => {
            let config = read_instance(instance, cli.seed)?;
            cmd_solve(&config, &opts, oracle_check.then(OracleSettings::default), format)
        }
        Command::Table { name } => cmd_table(*name, format),
        Command::Sweep { r, s, d1, d3, steps } => cmd_sweep(*r, *s, *d1, *d3, *steps, &opts, format),
        Command::Contour { instance, resolution } => cmd_contour(&read_instance(instance, cli.seed)?, *resolution, format),
        Command::Thresholds { instance } => cmd_thresholds(&read_instance(instance, cli.seed)?, &opts, format),
        Command::Oracle { instance, resolution, rounds, factor } => {
            let settings = OracleSettings { resolution: *resolution, rounds: *rounds, factor: *factor };
            cmd_oracle(&read_instance(instance, cli.seed)?, settings, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            let err = CliError::usage(e.to_string().trim().to_string());
            if std::env::args().any(|a| a == "--csv") {
                eprintln!("{}", err.to_json());
            } else {
                println!("{}", err.to_json());
            }
            return ExitCode::from(err.code as u8);
        }
    };
    let format = if cli.csv { Format::Csv } else { Format::Json };
    match run(&cli, format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(EXIT_OK as u8)
        }
        Err(err) => {
            match format {
                Format::Json => println!("{}", err.to_json()),
                Format::Csv => eprintln!("{}", err.to_json()),
            }
            ExitCode::from(err.code as u8)
        }
    }
}
