//! `hv`: run, study, analyze and list the benchmark problems.
//!
//! Exit codes: 0 success, 2 configuration error, 3 divergence or numerical
//! failure, 4 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hv_core::harness::analysis_io::{
    char_roots_csv, export_spectra, superconvergence_csv, superconvergence_orders, superconvergence_study,
};
use hv_core::harness::output::write_text;
use hv_core::harness::{convergence_study, parse_config, run, RunConfig};
use hv_core::problems::{problem_catalog, ProblemId};
use hv_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hv",
    version,
    about = "Fourth-order hybrid-variable solvers for conservation laws"
)]
struct Cli {
    /// Log progress to stderr (-v info, -vv per-step debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Default root for output directories.
    #[arg(long, env = "HV_OUTPUT_ROOT", default_value = "out", global = true)]
    output_root: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write fields, viscosity and manifest.json.
    Run(RunArgs),
    /// Run a grid-doubling sequence and write convergence.csv.
    Study(StudyArgs),
    /// Characteristic roots, operator spectra and the superconvergence check.
    Analyze(AnalyzeArgs),
    /// List the benchmark problems.
    Catalog {
        #[arg(long)]
        json: bool,
    },
}

/// Flags mirror the config-file keys and override them.
#[derive(Args, Default)]
struct ConfigArgs {
    /// TOML config file.
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_parser = ["hv", "muscl"])]
    scheme: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    alpha_cfl: Option<f64>,
    #[arg(long)]
    z0: Option<f64>,
    #[arg(long)]
    no_viscosity: bool,
    #[arg(long, value_parser = ["van-albada", "superbee"])]
    limiter: Option<String>,
    #[arg(long, value_parser = ["rusanov", "roe"])]
    flux: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    output_every: Option<usize>,
    #[arg(long)]
    reference_cells: Option<usize>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    max_steps: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct StudyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Comma-separated cells in x, e.g. 40,80,160.
    #[arg(long, value_delimiter = ',')]
    grids: Option<Vec<usize>>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_parser = ["roots", "spectrum", "superconvergence", "all"], default_value = "all")]
    kind: String,
    /// Phase samples for the root sweep.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Operator sizes for the spectra.
    #[arg(long, value_delimiter = ',', default_value = "20,100")]
    sizes: Vec<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Shape(_) | Error::Unsupported(_) => EXIT_CONFIG,
        Error::Io { .. } => EXIT_IO,
        Error::Physics(_) | Error::PhysicsAt { .. } | Error::Divergence { .. } | Error::Numerical(_) => EXIT_DIVERGED,
    }
}

fn set(table: &mut toml::Table, key: &str, value: Option<toml::Value>) {
    if let Some(v) = value {
        table.insert(key.to_string(), v);
    }
}

fn path_value(p: &Option<PathBuf>) -> Option<toml::Value> {
    p.as_ref()
        .map(|p| toml::Value::String(p.to_string_lossy().into_owned()))
}

fn int(v: Option<usize>) -> Option<toml::Value> {
    v.map(|v| toml::Value::Integer(v as i64))
}

/// Config file merged with command-line overrides; output paths default to
/// `<output_root>/<problem>` and `<output_root>/cache`.
fn load_config(args: &ConfigArgs, output_root: &Path, grids: Option<&[usize]>) -> Result<RunConfig, Error> {
    let text = match &args.config {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::io(format!("reading {}", p.display()), e))?,
        None => String::new(),
    };
    let flag_problem = args.problem.as_deref().map(str::parse::<ProblemId>).transpose()?;
    // Parse the file alone first so errors point at its own lines.
    parse_config(&text, flag_problem)?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    set(&mut table, "problem", args.problem.clone().map(toml::Value::String));
    set(&mut table, "scheme", args.scheme.clone().map(toml::Value::String));
    if args.nx.is_some() || args.ny.is_some() {
        table.remove("n");
    }
    if args.n.is_some() {
        table.remove("nx");
        table.remove("ny");
    }
    set(&mut table, "n", int(args.n));
    set(&mut table, "nx", int(args.nx));
    set(&mut table, "ny", int(args.ny));
    set(&mut table, "alpha_cfl", args.alpha_cfl.map(toml::Value::Float));
    set(&mut table, "z0", args.z0.map(toml::Value::Float));
    if args.no_viscosity {
        table.insert("viscosity".into(), toml::Value::Boolean(false));
    }
    set(&mut table, "limiter", args.limiter.clone().map(toml::Value::String));
    set(&mut table, "flux", args.flux.clone().map(toml::Value::String));
    set(&mut table, "t_end", args.t_end.map(toml::Value::Float));
    set(&mut table, "output_dir", path_value(&args.output_dir));
    set(&mut table, "output_every", int(args.output_every));
    set(&mut table, "reference_cells", int(args.reference_cells));
    set(&mut table, "cache_dir", path_value(&args.cache_dir));
    set(&mut table, "max_steps", int(args.max_steps));
    if let Some(g) = grids {
        table.insert(
            "grids".into(),
            toml::Value::Array(g.iter().map(|n| toml::Value::Integer(*n as i64)).collect()),
        );
    }
    let has_output = table.contains_key("output_dir");
    let has_cache = table.contains_key("cache_dir");
    let merged = toml::to_string(&table).map_err(|e| Error::Config(e.to_string()))?;
    let mut cfg = parse_config(&merged, None)?;
    if !has_output {
        cfg.output_dir = output_root.join(cfg.problem.as_str());
    }
    if !has_cache {
        cfg.cache_dir = output_root.join("cache");
    }
    Ok(cfg)
}

fn cmd_run(args: &RunArgs, root: &Path) -> Result<u8, Error> {
    let cfg = load_config(&args.config, root, None)?;
    let m = run(&cfg)?;
    println!("{} {:?}: {} steps to t = {}", m.problem, m.grid, m.steps, m.t_final);
    if let Some(e) = &m.errors {
        for (k, name) in e.names.iter().enumerate() {
            match &e.nodal {
                Some(n) => println!("  L1 {name}: cell {:.6e}  node {:.6e}", e.cell[k], n[k]),
                None => println!("  L1 {name}: cell {:.6e}", e.cell[k]),
            }
        }
    }
    if !m.conservation_drift.is_empty() {
        println!("  conservation drift {:?}", m.conservation_drift);
    }
    println!("wrote {}", cfg.output_dir.join("manifest.json").display());
    Ok(0)
}

fn cmd_study(args: &StudyArgs, root: &Path) -> Result<u8, Error> {
    let cfg = load_config(&args.config, root, args.grids.as_deref())?;
    let report = convergence_study(&cfg, &cfg.grids)?;
    print!("{}", report.to_csv());
    println!("wrote {}", cfg.output_dir.join("convergence.csv").display());
    Ok(if report.failed() { EXIT_DIVERGED } else { 0 })
}

fn cmd_analyze(args: &AnalyzeArgs, root: &Path) -> Result<u8, Error> {
    let dir = args.output_dir.clone().unwrap_or_else(|| root.join("analysis"));
    let all = args.kind == "all";
    if all || args.kind == "roots" {
        let p = dir.join("char_roots.csv");
        write_text(&p, &char_roots_csv(args.samples))?;
        println!("wrote {}", p.display());
    }
    if all || args.kind == "spectrum" {
        for (p, max_re) in export_spectra(&dir, &args.sizes)? {
            println!("wrote {} (max Re = {max_re:.3e})", p.display());
        }
    }
    if all || args.kind == "superconvergence" {
        let rows = superconvergence_study(&[10, 20, 40, 80, 160], 0.1, 1.0)?;
        let (c, n) = superconvergence_orders(&rows);
        let p = dir.join("superconvergence.csv");
        write_text(&p, &superconvergence_csv(&rows))?;
        println!(
            "wrote {} (finest orders: cell {:.3}, node {:.3})",
            p.display(),
            c.last().copied().unwrap_or(f64::NAN),
            n.last().copied().unwrap_or(f64::NAN)
        );
    }
    Ok(0)
}

fn cmd_catalog(json: bool) -> Result<u8, Error> {
    let catalog = problem_catalog();
    if json {
        let text = serde_json::to_string_pretty(&catalog).map_err(|e| Error::Numerical(e.to_string()))?;
        println!("{text}");
    } else {
        for p in catalog {
            let grids: Vec<String> = p
                .default_grids
                .iter()
                .map(|g| g.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x"))
                .collect();
            println!(
                "{:<22} {}D  T={:<4} grids {}  {}",
                p.id.as_str(),
                p.id.dimension(),
                p.t_end,
                grids.join(","),
                p.description
            );
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    let root = &cli.output_root;
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, root),
        Command::Study(a) => cmd_study(a, root),
        Command::Analyze(a) => cmd_analyze(a, root),
        Command::Catalog { json } => cmd_catalog(*json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
