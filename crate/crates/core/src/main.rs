//! Command-line front end: quench runs, parameter sweeps, hydrodynamic
//! ensembles, series analysis, and the self-validation suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mpemba::config::{Model, QuenchConfig, SweepGrid};
use mpemba::hydro::HydroConfig;
use mpemba::run::{
    analyze_files, report_text, run_hydro_to_file, run_quench_to_file, run_sweep,
    validate_suite, write_plot_files, AnalyzeOptions,
};
use mpemba::Error;

/// Environment variable that re-roots all relative output paths.
const OUTPUT_ROOT_VAR: &str = "MPEMBA_OUTPUT_ROOT";

#[derive(Parser)]
#[command(name = "mpemba", version, about = "spin-chain relaxation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one initial state and record witness time series.
    Quench(QuenchArgs),
    /// Run a grid of quenches with derived seeds and a combined summary.
    Sweep(SweepArgs),
    /// Average a Langevin ensemble of the conserved density.
    Hydro(HydroArgs),
    /// Fit exponents, locate crossings, and emit plot-ready data.
    Analyze(AnalyzeArgs),
    /// Run the built-in correctness suites.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct QuenchFlags {
    /// TOML config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    n_sites: Option<usize>,
    /// Subsystem length.
    #[arg(short, long)]
    l: Option<usize>,
    #[arg(long)]
    subsystem_start: Option<usize>,
    /// Floquet stagger amplitude.
    #[arg(short, long)]
    a: Option<f64>,
    /// MFI tilt angle.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    sample_every: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    h_x: Option<f64>,
    #[arg(long)]
    h_z: Option<f64>,
    /// MFI Trotter step.
    #[arg(long)]
    dt: Option<f64>,
}

impl QuenchFlags {
    fn build(&self) -> Result<QuenchConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                // defer validation until after flag overrides
                toml::from_str(&text)
                    .map_err(|e| Error::Config(format!("config parse: {e}")))?
            }
            None => QuenchConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m;
            // switching model resets the other family's knob
            match m {
                Model::Floquet => {
                    cfg.theta = None;
                    if cfg.a.is_none() {
                        cfg.a = Some(0.0);
                    }
                }
                Model::Mfi => cfg.a = None,
            }
        }
        if let Some(n) = self.n_sites {
            cfg.n_sites = n;
        }
        if let Some(l) = self.l {
            cfg.l = l;
        }
        if let Some(s) = self.subsystem_start {
            cfg.subsystem_start = s;
        }
        if let Some(a) = self.a {
            cfg.a = Some(a);
        }
        if let Some(theta) = self.theta {
            cfg.theta = Some(theta);
        }
        if let Some(t) = self.t_max {
            cfg.t_max = t;
        }
        if let Some(k) = self.sample_every {
            cfg.sample_every = Some(k);
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(v) = self.alpha {
            cfg.floquet.alpha = v;
        }
        if let Some(v) = self.beta {
            cfg.floquet.beta = v;
        }
        if let Some(v) = self.gamma {
            cfg.floquet.gamma = v;
        }
        if let Some(v) = self.j {
            cfg.mfi.j = v;
        }
        if let Some(v) = self.h_x {
            cfg.mfi.h_x = v;
        }
        if let Some(v) = self.h_z {
            cfg.mfi.h_z = v;
        }
        if let Some(v) = self.dt {
            cfg.mfi.dt = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct QuenchArgs {
    #[command(flatten)]
    flags: QuenchFlags,
    /// Output CSV path.
    #[arg(short, long, default_value = "quench.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    flags: QuenchFlags,
    /// Comma-separated stagger amplitudes.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["theta_grid", "n_grid"])]
    a_grid: Option<Vec<f64>>,
    /// Comma-separated tilt angles.
    #[arg(long, value_delimiter = ',', conflicts_with = "n_grid")]
    theta_grid: Option<Vec<f64>>,
    /// Comma-separated chain lengths.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Output directory.
    #[arg(short, long, default_value = "sweep")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct HydroArgs {
    /// TOML config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    l_sites: Option<usize>,
    #[arg(long)]
    diffusion: Option<f64>,
    #[arg(long)]
    chi_eq: Option<f64>,
    #[arg(long)]
    chi0: Option<f64>,
    #[arg(long)]
    grad_amp: Option<f64>,
    #[arg(long)]
    stagger_a: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_real: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    r_max: Option<usize>,
    #[arg(long)]
    n_samples: Option<usize>,
    /// Output CSV path.
    #[arg(short, long, default_value = "hydro.csv")]
    output: PathBuf,
}

impl HydroArgs {
    fn build(&self) -> Result<HydroConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str(&text)
                    .map_err(|e| Error::Config(format!("config parse: {e}")))?
            }
            None => HydroConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        set!(l_sites, diffusion, chi_eq, chi0, grad_amp, stagger_a, dt, t_max, n_real, seed, r_max, n_samples);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Series CSV files (quench or hydro output).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Columns to analyze (default: all recognized witness/moment columns).
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// Samples a sign change must persist to count as a crossing.
    #[arg(long, default_value_t = 3)]
    persistence: usize,
    /// Fraction of the series used for the plateau estimate.
    #[arg(long, default_value_t = 0.2)]
    tail_fraction: f64,
    /// Directory for plot-ready two-column files.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    /// Write the structured report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Scale {
    Quick,
    Full,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(value_enum, default_value_t = Scale::Quick)]
    scale: Scale,
}

/// Re-root relative paths under $MPEMBA_OUTPUT_ROOT when it is set.
fn rooted(path: PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_ROOT_VAR) {
        Some(root) if path.is_relative() => PathBuf::from(root).join(path),
        _ => path,
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::Schema(_)
            | Error::Analysis(_)
            | Error::BadChainLength(_)
            | Error::BadSubsystemLength { .. }
            | Error::AngleLength { .. }
            | Error::SiteOutOfRange { .. }
            | Error::StaggerOutOfRange(_)
            | Error::ThetaSingular(_)
            | Error::NoZeroEnergyPhase(_)
            | Error::UnstableScheme(_)
    )
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Quench(args) => {
            let cfg = args.flags.build()?;
            let path = rooted(cfg.output.clone().unwrap_or(args.output));
            let manifest = run_quench_to_file(&cfg, &path)?;
            for c in &manifest.checks {
                println!("check {}: {} ({})", c.name, if c.pass { "ok" } else { "FAIL" }, c.detail);
            }
            println!("wrote {}", path.display());
            if manifest.all_checks_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Sweep(args) => {
            let template = args.flags.build()?;
            let grid = match (&args.a_grid, &args.theta_grid, &args.n_grid) {
                (Some(v), None, None) => SweepGrid::A(v.clone()),
                (None, Some(v), None) => SweepGrid::Theta(v.clone()),
                (None, None, Some(v)) => SweepGrid::N(v.clone()),
                _ => {
                    return Err(Error::Config(
                        "exactly one of --a-grid, --theta-grid, --n-grid is required".into(),
                    ))
                }
            };
            // the template's own initial knob must match the grid family
            let template = {
                let mut t = template;
                match &grid {
                    SweepGrid::A(_) => {
                        t.model = Model::Floquet;
                        t.theta = None;
                        t.a = t.a.or(Some(0.0));
                    }
                    SweepGrid::Theta(_) => {
                        t.model = Model::Mfi;
                        t.a = None;
                        t.theta = t.theta.or(Some(std::f64::consts::PI / 2.0));
                    }
                    SweepGrid::N(_) => {}
                }
                t
            };
            let out_dir = rooted(args.out_dir);
            let summary = run_sweep(&template, &grid, &out_dir)?;
            for p in &summary.points {
                match &p.error {
                    None => {
                        let exp = p
                            .fit
                            .as_ref()
                            .map(|f| format!("{:.4}", f.exponent))
                            .unwrap_or_else(|| "-".into());
                        let plateau = p
                            .plateau
                            .map(|(m, _)| format!("{m:.6e}"))
                            .unwrap_or_else(|| "-".into());
                        println!("{}: exponent {exp} plateau {plateau}", p.tag);
                    }
                    Some(e) => println!("{}: FAILED ({e})", p.tag),
                }
            }
            println!("summary in {}", out_dir.join("sweep_summary.toml").display());
            if summary.n_failed == 0 {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Hydro(args) => {
            let cfg = args.build()?;
            let path = rooted(args.output);
            run_hydro_to_file(&cfg, &path)?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze(args) => {
            let opts = AnalyzeOptions {
                t_min: args.t_min,
                t_max: args.t_max,
                columns: args.columns.clone(),
                persistence: args.persistence,
                tail_fraction: args.tail_fraction,
            };
            let output = analyze_files(&args.files, &opts)?;
            print!("{}", report_text(&output.report));
            if let Some(json_path) = args.json {
                let text = serde_json::to_string_pretty(&output.report)
                    .map_err(|e| Error::Serialize(e.to_string()))?;
                let path = rooted(json_path);
                mpemba::io::atomic_write(&path, text.as_bytes())?;
                println!("report in {}", path.display());
            }
            if let Some(plot_dir) = args.plot_dir {
                let dir = rooted(plot_dir);
                let files = write_plot_files(&output, &dir)?;
                println!("{} plot files in {}", files.len(), dir.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let results = validate_suite(args.scale == Scale::Full);
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                if !r.pass {
                    failed += 1;
                }
            }
            println!("{} of {} suites passed", results.len() - failed, results.len());
            if failed == 0 {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
