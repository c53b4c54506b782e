use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use gsde::benchmarks::{function_index, FUNCTIONS};
use gsde::error::Result;
use gsde::harness::{
    build_report, emit_tables, load_config, plot_cell, read_results_dir, run_experiment, ExperimentConfig,
    RunOptions, TableFormat,
};

#[derive(Parser)]
#[command(name = "gsde", version, about = "Benchmark DE, its accelerated variants and baseline optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
    Both,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Text => TableFormat::Text,
            Format::Both => TableFormat::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write results, histories and tables.
    Run {
        /// Experiment configuration (TOML). Defaults apply when omitted.
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Output directory; defaults to the config's `output` or a fresh timestamped directory.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Worker threads.
        #[arg(short = 'j', long)]
        threads: Option<usize>,
        /// Only run these functions (repeatable), e.g. `--function f1`.
        #[arg(long = "function")]
        functions: Vec<String>,
        /// Only run these dimensions (repeatable).
        #[arg(long = "dimension")]
        dimensions: Vec<usize>,
        /// Replace an existing non-empty output directory.
        #[arg(long)]
        overwrite: bool,
        /// Skip writing tables after the run.
        #[arg(long)]
        no_report: bool,
    },
    /// Build summary and significance tables from a results directory.
    Report {
        results: PathBuf,
        /// Table directory; defaults to `<results>/tables`.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        format: Format,
    },
    /// Plot convergence curves for one (function, dimension) cell, or all cells.
    Plot {
        results: PathBuf,
        #[arg(long)]
        function: Option<String>,
        #[arg(long)]
        dimension: Option<usize>,
        /// Plot directory; defaults to `<results>/plots`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// List the benchmark suite.
    ListFunctions,
    /// Check a configuration file and print it with defaults filled in.
    ValidateConfig { config: PathBuf },
}

fn timestamped_dir() -> PathBuf {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    PathBuf::from(format!("results/run-{secs}"))
}

fn write_tables(results: &Path, out: &Path, format: TableFormat) -> Result<()> {
    let report = build_report(&read_results_dir(results)?)?;
    for p in emit_tables(&report, out, format)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            output,
            threads,
            functions,
            dimensions,
            overwrite,
            no_report,
        } => {
            let config = match config {
                Some(path) => load_config(path)?,
                None => ExperimentConfig::default(),
            };
            let output = output
                .or_else(|| config.output.clone())
                .unwrap_or_else(timestamped_dir);
            let options = RunOptions {
                threads,
                functions: if functions.is_empty() {
                    None
                } else {
                    Some(functions.iter().map(|f| function_index(f)).collect::<Result<_>>()?)
                },
                dimensions: if dimensions.is_empty() { None } else { Some(dimensions) },
                overwrite,
            };
            let results = run_experiment(&config, &output, &options)?;
            println!(
                "{} runs written to {} ({} failed)",
                results.runs.len(),
                output.display(),
                results.failures.len()
            );
            if !no_report && !results.runs.is_empty() && config.algorithms.len() >= 2 {
                write_tables(&output, &output.join("tables"), TableFormat::Both)?;
            }
        }
        Command::Report { results, out, format } => {
            let out = out.unwrap_or_else(|| results.join("tables"));
            write_tables(&results, &out, format.into())?;
        }
        Command::Plot {
            results,
            function,
            dimension,
            out,
        } => {
            let out = out.unwrap_or_else(|| results.join("plots"));
            let rows = read_results_dir(&results)?;
            let mut cells: Vec<(String, usize)> = Vec::new();
            for r in rows {
                let wanted = function.as_ref().is_none_or(|f| *f == r.function)
                    && dimension.is_none_or(|d| d == r.dimension);
                if wanted && !cells.contains(&(r.function.clone(), r.dimension)) {
                    cells.push((r.function, r.dimension));
                }
            }
            if cells.is_empty() {
                println!("no matching cells in {}", results.display());
            }
            for (f, d) in cells {
                if let Some((svg, csv)) = plot_cell(&results, &f, d, &out)? {
                    println!("wrote {} and {}", svg.display(), csv.display());
                }
            }
        }
        Command::ListFunctions => {
            println!("{:<4}  {:<46}  {:<28}  {:>7}", "id", "name", "base", "optimum");
            for f in FUNCTIONS.iter() {
                println!("{:<4}  {:<46}  {:<28}  {:>7}", f.id, f.label, f.base.as_str(), f.bias);
            }
        }
        Command::ValidateConfig { config } => {
            let c = load_config(&config)?;
            info!("{} is valid", config.display());
            print!("{}", c.to_toml()?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
