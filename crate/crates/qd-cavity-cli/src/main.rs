//! Command-line front end for the qd-cavity simulator.
//!
//! Subcommands: `sweep` (two-axis EoF grid), `dressed-scan` (dressed-state
//! energies/amplitudes over `Δ_B`), `point` (single parameter point with
//! optional density-matrix dumps) and `validate-config`. All take a JSON
//! config via `--config`; `--workers`, `--n-max`, `--branch` and `--out`
//! override the corresponding config entries. CSV outputs are written
//! atomically (temp file in the target directory, then rename).
//!
//! Exit codes: 0 success, 1 runtime failure (e.g. singular steady state),
//! 2 missing/invalid config, 3 output I/O failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use qd_cavity::{
    dressed_scan, evaluate_point_detailed, resolve_model, run_sweep, write_dressed_scan_csv,
    write_sweep_csv, CascadeBranch, Error as QdError, ModelParams, PointStatus, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "qd-cavity",
    version,
    about = "Quantum-dot-microcavity steady states and photon-pair entanglement sweeps"
)]
struct Cli {
    /// JSON config file (sections: model, axes, rules, output).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads for sweep evaluation (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Override the config's photon-number truncation.
    #[arg(long, global = true, value_name = "K")]
    n_max: Option<usize>,

    /// Override the config's cascade branch.
    #[arg(long, global = true, value_enum)]
    branch: Option<BranchArg>,

    /// Override the config's output path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
}

impl From<BranchArg> for CascadeBranch {
    fn from(b: BranchArg) -> CascadeBranch {
        match b {
            BranchArg::Upper => CascadeBranch::Upper,
            BranchArg::Lower => CascadeBranch::Lower,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the full two-axis grid and write the EoF CSV.
    Sweep,
    /// Scan dressed-state energies and transition amplitudes over delta_b.
    DressedScan,
    /// Evaluate a single point (config model + rules; axes are ignored).
    /// With an output path, writes the 4x4 pair density matrix as CSV.
    Point {
        /// Also write the steady-state density matrix as CSV (row,col,re,im).
        #[arg(long, value_name = "PATH")]
        dump_rho: Option<PathBuf>,
    },
    /// Parse and validate the config, printing the resolved form.
    ValidateConfig,
}

enum AppError {
    /// Missing or invalid configuration (exit 2).
    Config(String),
    /// Output I/O failure (exit 3).
    Io(String),
    /// Pipeline failure on an otherwise valid config (exit 1).
    Runtime(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Runtime(_) => 1,
            AppError::Config(_) => 2,
            AppError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Config(m) | AppError::Io(m) | AppError::Runtime(m) => m,
        }
    }
}

/// Library errors encountered while *running* split into config-shaped
/// (caller gave bad input) and runtime-shaped (solver trouble) failures.
fn lib_error(e: QdError) -> AppError {
    match e {
        QdError::InvalidParams(_) | QdError::UnknownParam(_) | QdError::BadExpression { .. } => {
            AppError::Config(e.to_string())
        }
        other => AppError::Runtime(other.to_string()),
    }
}

fn config_error(e: QdError) -> AppError {
    AppError::Config(e.to_string())
}

fn io_error(context: &str, e: std::io::Error) -> AppError {
    AppError::Io(format!("{context}: {e}"))
}

fn main() -> ExitCode {
    // Die quietly like a standard Unix tool when the read end of a pipe
    // closes (e.g. `qd-cavity validate-config ... | head`), instead of
    // panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| AppError::Config("missing --config PATH".into()))?;
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        AppError::Config(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let mut cfg = SweepConfig::from_json(&text).map_err(config_error)?;

    if let Some(n_max) = cli.n_max {
        cfg.n_max = n_max;
    }
    if let Some(branch) = cli.branch {
        cfg.branch = branch.into();
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.display().to_string());
    }
    cfg.validate().map_err(config_error)?;

    match &cli.command {
        Command::Sweep => cmd_sweep(&cli, &cfg),
        Command::DressedScan => cmd_dressed_scan(&cfg),
        // `point` writes only on an explicit --out; the config's output.path
        // belongs to the grid CSV and must not be clobbered by a side query.
        Command::Point { dump_rho } => cmd_point(&cfg, cli.out.as_deref(), dump_rho.as_deref()),
        Command::ValidateConfig => cmd_validate(&cfg),
    }
}

fn cmd_sweep(cli: &Cli, cfg: &SweepConfig) -> Result<(), AppError> {
    let path = required_output(cfg, "sweep")?;
    let result = match cli.workers {
        None => run_sweep(cfg),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| AppError::Config(format!("cannot build worker pool: {e}")))?
            .install(|| run_sweep(cfg)),
    }
    .map_err(lib_error)?;

    let mut buf = Vec::new();
    write_sweep_csv(&result, &mut buf).map_err(|e| io_error("serializing CSV", e))?;
    write_atomic(Path::new(&path), &buf)?;
    write_meta_sidecar(cfg, &path)?;

    let n1 = result.axis1.count;
    let n2 = result.axis2.count;
    let ok = count_status(&result.records, |s| *s == PointStatus::Ok);
    let zero = count_status(&result.records, |s| *s == PointStatus::ZeroFlux);
    let failed = result.records.len() - ok - zero;
    println!(
        "sweep: {n1} x {n2} grid ({} points: {ok} ok, {zero} zero-flux, {failed} failed) -> {path}",
        result.records.len()
    );
    match result.max_eof() {
        Some((e, a1, a2)) => println!(
            "max EoF = {e:.6} at {} = {a1:.6}, {} = {a2:.6}",
            result.axis1.name, result.axis2.name
        ),
        None => println!("max EoF: none (no finite EoF on the grid)"),
    }
    Ok(())
}

fn count_status(records: &[qd_cavity::PointRecord], pred: impl Fn(&PointStatus) -> bool) -> usize {
    records.iter().filter(|r| pred(&r.status)).count()
}

fn cmd_dressed_scan(cfg: &SweepConfig) -> Result<(), AppError> {
    let path = required_output(cfg, "dressed-scan")?;
    let records = dressed_scan(cfg).map_err(lib_error)?;
    let mut buf = Vec::new();
    write_dressed_scan_csv(&records, &mut buf).map_err(|e| io_error("serializing CSV", e))?;
    write_atomic(Path::new(&path), &buf)?;
    write_meta_sidecar(cfg, &path)?;
    println!(
        "dressed scan: {} records, delta_b in [{}, {}] -> {path}",
        records.len(),
        cfg.axes.axis1.start,
        cfg.axes.axis1.stop
    );
    Ok(())
}

fn cmd_point(
    cfg: &SweepConfig,
    out: Option<&Path>,
    dump_rho: Option<&Path>,
) -> Result<(), AppError> {
    let params = resolve_model(cfg).map_err(config_error)?;
    print_params(&params);
    let detail =
        evaluate_point_detailed(&params, cfg.n_max, cfg.branch).map_err(lib_error)?;
    let r = &detail.record;
    println!("status: {}", r.status.as_csv_field());
    println!("EoF = {}", r.eof);
    println!("concurrence = {}", r.concurrence);
    if let Some(pair) = &detail.pair {
        println!("pair flux = {:.6e}", pair.pair_flux);
    }
    println!(
        "pair diagonal (LR, RL, LL, RR) = {}, {}, {}, {}",
        r.diag[0], r.diag[1], r.diag[2], r.diag[3]
    );
    println!("steady-state residual = {:.3e}", r.residual);
    println!("shell population = {:.3e}", r.shell_population);
    if r.shell_warn {
        println!("warning: truncation shell is populated; consider a larger --n-max");
    }

    match (&detail.pair, out) {
        (Some(pair), Some(path)) => {
            let mut buf = Vec::new();
            pair.write_csv(&mut buf)
                .map_err(|e| io_error("serializing pair matrix", e))?;
            write_atomic(path, &buf)?;
            println!("pair density matrix -> {}", path.display());
        }
        (None, Some(_)) => println!("no pair flux; pair matrix not written"),
        _ => {}
    }
    if let Some(rho_path) = dump_rho {
        let mut buf = Vec::new();
        detail
            .rho
            .write_csv(&mut buf)
            .map_err(|e| io_error("serializing rho", e))?;
        write_atomic(rho_path, &buf)?;
        println!("steady-state density matrix -> {}", rho_path.display());
    }
    Ok(())
}

fn cmd_validate(cfg: &SweepConfig) -> Result<(), AppError> {
    // parsing + validation already succeeded in `run`
    let pretty = serde_json::to_string_pretty(cfg)
        .map_err(|e| AppError::Runtime(format!("cannot serialize config: {e}")))?;
    println!("config OK");
    println!("{pretty}");
    Ok(())
}

fn print_params(p: &ModelParams) {
    println!(
        "point: g = {}, g_b = {}, delta_b = {}, gamma_x = {}, gamma_b = {}, \
         e_r = {}, e_l = {}, omega_r_det = {}, omega_l_det = {}, eps0 = {}",
        p.g, p.g_b, p.delta_b, p.gamma_x, p.gamma_b, p.e_r, p.e_l, p.omega_r_det, p.omega_l_det,
        p.eps0
    );
}

fn required_output(cfg: &SweepConfig, what: &str) -> Result<String, AppError> {
    cfg.output.path.clone().ok_or_else(|| {
        AppError::Config(format!("{what} needs an output path (config output.path or --out)"))
    })
}

/// Write through a temp file in the destination directory, then rename.
/// Missing parent directories are created.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)
        .map_err(|e| io_error(&format!("creating output directory {}", dir.display()), e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| io_error(&format!("creating temp file in {}", dir.display()), e))?;
    tmp.write_all(bytes)
        .map_err(|e| io_error("writing output", e))?;
    tmp.persist(path)
        .map_err(|e| io_error(&format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

#[derive(serde::Serialize)]
struct MetaSidecar<'a> {
    config: &'a SweepConfig,
    created_unix_seconds: u64,
}

/// Optional `<out>.meta.json` with the fully resolved config. The data CSV
/// itself stays byte-deterministic; the timestamp lives only here.
fn write_meta_sidecar(cfg: &SweepConfig, csv_path: &str) -> Result<(), AppError> {
    if !cfg.output.meta {
        return Ok(());
    }
    let meta = MetaSidecar {
        config: cfg,
        created_unix_seconds: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let text = serde_json::to_string_pretty(&meta)
        .map_err(|e| AppError::Runtime(format!("cannot serialize metadata: {e}")))?;
    write_atomic(Path::new(&format!("{csv_path}.meta.json")), text.as_bytes())
}
