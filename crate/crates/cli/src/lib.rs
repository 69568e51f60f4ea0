//! Command-line driver for `floquet-core`.
//!
//! Three modes:
//! - `trace`: follow one state through λ and write the curve as CSV.
//! - `oracle-check`: the same trace, with raT from direct one-period
//!   propagation next to its lower bound 1 − 2π²F.
//! - `bound`: print the representability bound for the window half-width.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | usage or configuration error |
//! | 3 | resonant frequency ratio |
//! | 4 | output path not writable |
//! | 5 | the computation itself failed |
//!
//! Non-representable amplitudes are data, not errors.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use floquet_core::oracle::raT_metric;
use floquet_core::{
    representability_bound, trace, AnsatzWindow, Error, NumericsConfig, ParamError, SystemParams, TraceConfig,
    TraceRecord,
};

pub const TRACE_HEADER: &str =
    "lambda_scaled,epsilon_folded,epsilon_exact,delta_eps,F_scaled,iterations,representable,raT_lower_bound";

/// `raT` is the propagated return amplitude (`nan` when the propagation
/// leaked out of the basis); `bound_holds` is raT ≥ raT_lower_bound − 1e-6.
pub const ORACLE_HEADER: &str =
    "lambda_scaled,epsilon_folded,epsilon_exact,delta_eps,F_scaled,converged,raT,raT_lower_bound,bound_holds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Trace,
    OracleCheck,
    Bound,
}

#[derive(Debug, Parser)]
#[command(name = "floquet", version, about = "Variational Floquet states of the driven oscillator")]
struct Args {
    #[arg(long, value_enum, default_value = "trace")]
    mode: Mode,
    /// ω/ω₀.
    #[arg(long, default_value_t = 2.0 / 3.0)]
    omega_ratio: f64,
    /// Window centre, and the traced state unless --start-n is given.
    #[arg(long, default_value_t = 0)]
    n0: usize,
    /// Window half-width in both n and m.
    #[arg(long, default_value_t = 30)]
    r: usize,
    /// Oscillator level the trace starts from at λ = 0.
    #[arg(long)]
    start_n: Option<usize>,
    /// Last amplitude λ/√(ħMω³) of the sweep.
    #[arg(long, default_value_t = 8.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 0.025)]
    dlambda: f64,
    /// Convergence threshold on |ΔF|.
    #[arg(long, default_value_t = 1e-8)]
    tol_f: f64,
    #[arg(long, default_value_t = 0.9)]
    dtau_safety: f64,
    #[arg(long, default_value_t = 200_000)]
    max_iters: usize,
    /// RK4 steps per period in oracle-check mode.
    #[arg(long, default_value_t = 2000)]
    propagator_steps: usize,
    /// F at or below which a converged state counts as representable.
    #[arg(long, default_value_t = 1e-3)]
    representable_max_f: f64,
    #[arg(long, short, default_value = "floquet.csv")]
    output: PathBuf,
    /// Run r = 20 and r = 30 side by side, writing OUTPUT with `.r20` and
    /// `.r30` inserted before the extension. Ignores --r.
    #[arg(long)]
    paired: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub trace: TraceConfig,
    pub output_path: PathBuf,
    pub paired: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version`; the text goes to stdout.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resonance(String),
    #[error("cannot write {path}: {source}")]
    Unwritable { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Resonance(_) => 3,
            CliError::Unwritable { .. } => 4,
            CliError::Compute(_) => 5,
        }
    }
}

fn config_error(e: Error) -> CliError {
    match e {
        Error::Param(ParamError::Resonant) => CliError::Resonance(e.to_string()),
        Error::Param(_) | Error::InvalidWindow(_) | Error::StartOutsideWindow(_) | Error::InvalidLambdaMax(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Compute(other),
    }
}

/// Parses `argv` (program name first) into a validated [`RunSpec`].
pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let params0 = SystemParams::new(args.omega_ratio, 0.0).map_err(|e| config_error(e.into()))?;
    let window = AnsatzWindow::new(args.n0, args.r).map_err(config_error)?;
    let trace = TraceConfig {
        params0,
        window,
        lambda_max: args.lambda_max,
        numerics: NumericsConfig {
            tol_f: args.tol_f,
            dlambda: args.dlambda,
            dtau_safety: args.dtau_safety,
            max_iters: args.max_iters,
            propagator_steps: args.propagator_steps,
            representable_max_f: args.representable_max_f,
        },
        start_n: args.start_n.unwrap_or(args.n0),
    };
    let spec = RunSpec {
        mode: args.mode,
        trace,
        output_path: args.output,
        paired: args.paired,
    };
    for cfg in spec.jobs() {
        cfg.0.validate().map_err(config_error)?;
    }
    Ok(spec)
}

impl RunSpec {
    /// The traces this spec runs, each with its output path.
    pub fn jobs(&self) -> Vec<(TraceConfig, PathBuf)> {
        if !self.paired {
            return vec![(self.trace.clone(), self.output_path.clone())];
        }
        [20, 30]
            .into_iter()
            .map(|r| {
                let mut cfg = self.trace.clone();
                cfg.window = AnsatzWindow::new(cfg.window.n0(), r).expect("r ≥ 1");
                (cfg, tagged_path(&self.output_path, &format!("r{r}")))
            })
            .collect()
    }
}

/// `out.csv` → `out.<tag>.csv`.
pub fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// max(0, 1 − 2π²F).
pub fn rat_lower_bound(f: f64) -> f64 {
    (1.0 - 2.0 * PI * PI * f).max(0.0)
}

pub fn trace_row(r: &TraceRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        num(r.lambda_scaled),
        num(r.epsilon_folded),
        num(r.epsilon_exact),
        num(r.delta_eps_exact),
        num(r.f),
        r.iterations,
        r.representable,
        num(rat_lower_bound(r.f)),
    )
}

pub fn trace_csv(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(128 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&trace_row(r));
        out.push('\n');
    }
    out
}

fn oracle_csv(cfg: &TraceConfig) -> Result<String, CliError> {
    let size = 2 * (cfg.window.n_hi() + 1);
    let steps = cfg.numerics.propagator_steps;
    let mut out = String::new();
    out.push_str(ORACLE_HEADER);
    out.push('\n');
    let mut failure = None;
    floquet_core::trace_with(cfg, |p| {
        if failure.is_some() {
            return;
        }
        let r = &p.record;
        let mut psi = p.state.vec.at_time(0.0);
        psi.resize(size, Default::default());
        let rat = match raT_metric(&p.params, &psi, p.state.epsilon, steps) {
            Ok(x) => x,
            Err(Error::Leakage { .. }) => f64::NAN,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let lower = rat_lower_bound(r.f);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            num(r.lambda_scaled),
            num(r.epsilon_folded),
            num(r.epsilon_exact),
            num(r.delta_eps_exact),
            num(r.f),
            r.converged,
            if rat.is_nan() { "nan".to_string() } else { num(rat) },
            num(lower),
            rat >= lower - 1e-6,
        );
    })
    .map_err(CliError::Compute)?;
    match failure {
        Some(e) => Err(CliError::Compute(e)),
        None => Ok(out),
    }
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let unwritable = |source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| unwritable(std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name")))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(unwritable(e));
    }
    Ok(())
}

fn run_job(mode: Mode, cfg: &TraceConfig, path: &Path) -> Result<(), CliError> {
    let csv = match mode {
        Mode::Trace => trace_csv(&trace(cfg).map_err(CliError::Compute)?),
        Mode::OracleCheck => oracle_csv(cfg)?,
        Mode::Bound => unreachable!("bound mode writes no file"),
    };
    write_atomic(path, &csv)
}

/// Executes `spec`, writing any bound-mode output to `stdout`.
pub fn execute(spec: &RunSpec, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let jobs = spec.jobs();
    if spec.mode == Mode::Bound {
        for (cfg, _) in &jobs {
            let b = representability_bound(&cfg.params0, cfg.window.r());
            writeln!(stdout, "{b:.1}").map_err(|source| CliError::Unwritable {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
        return Ok(());
    }
    if jobs.len() == 1 {
        let (cfg, path) = &jobs[0];
        return run_job(spec.mode, cfg, path);
    }
    let results: Vec<Result<(), CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(cfg, path)| s.spawn(move || run_job(spec.mode, cfg, path)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("trace job panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// Runs `spec` and maps the outcome to an exit code, reporting errors on
/// stderr.
pub fn run(spec: &RunSpec) -> u8 {
    match execute(spec, &mut std::io::stdout()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("floquet: {e}");
            e.exit_code()
        }
    }
}
