//! `picard`: command-line front end for picard-core.

mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use picard_core::catalog::{self, CatalogEntry, Params};
use picard_core::oracle::OracleConfig;
use picard_core::picard::{global_extend, resolve_interval, solve_ivp, DomainTube, PicardConfig};
use picard_core::report::{convergence_table, trajectory_svg, write_trajectory_csv};
use picard_core::symmetric::{family_sweep, solve_even, solve_odd, FamilyParameter, FamilySpec, SymmetricRun};
use picard_core::symmetry::{classify_field_parity, SampleBall};
use picard_core::{ConvergenceReport, Error, Parity, Trajectory};
use serde_json::{json, Value};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "picard", version, about = "Even and odd solutions of y'' = f(y) by successive approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve y'' = f(y), y(t0) = y0, y'(t0) = eta on the existence interval
    Solve(SolveArgs),
    /// Even solution: y'(t0) = 0
    SolveEven(SolveArgs),
    /// Odd solution: y(t0) = 0, odd field
    SolveOdd(SolveArgs),
    /// Family of even or odd runs
    Sweep(SweepArgs),
    /// Print b, the bound M and the half-width L = sqrt(2b/M)
    Interval(ProblemArgs),
    /// Classify the parity of a catalog field on a ball
    CheckParity(ParityArgs),
    /// List the registered systems as JSON
    Catalog,
    /// Print increments against majorant terms
    Convergence(ProblemArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct ProblemArgs {
    /// Catalog system name (see `picard catalog`)
    #[arg(long)]
    system: Option<String>,
    /// System parameter, repeatable: NAME=V or NAME=V1,V2,...
    #[arg(long = "param", value_name = "NAME=V[,V...]")]
    params: Vec<String>,
    /// Initial position, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y0: Option<Vec<f64>>,
    /// Initial velocity, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eta: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    /// Tube radius
    #[arg(long)]
    b: Option<f64>,
    /// Grid intervals per half interval
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    stop_tol: Option<f64>,
    #[arg(long)]
    m_override: Option<f64>,
    #[arg(long)]
    k_override: Option<f64>,
    /// Growth constants |f(y)| <= M1 |y| + M2, as M1=..,M2=..
    #[arg(long, value_name = "M1=..,M2=..")]
    sublinear: Option<String>,
    /// Upper limit on the half-width L
    #[arg(long)]
    l_cap: Option<f64>,
    /// Sample points for the M and K estimates
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance of the oddness check for odd runs
    #[arg(long)]
    parity_tol: Option<f64>,
    /// Flat key = value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct OutputArgs {
    /// Output directory
    #[arg(long, env = "PICARD_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// File name stem for outputs
    #[arg(long)]
    stem: Option<String>,
    /// Also write an SVG plot
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Extend by restarts to [t0 - T, t0 + T] (solve only)
    #[arg(long, value_name = "T")]
    extend: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Vary {
    /// Members are initial positions; even runs
    Position,
    /// Members are initial velocities with y0 = 0; odd runs
    Velocity,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum)]
    vary: Vary,
    /// One family member, comma separated; repeatable
    #[arg(long = "member", allow_hyphen_values = true, required = true)]
    members: Vec<String>,
    /// Runge-Kutta step for the oracle column (0 disables it)
    #[arg(long, default_value_t = 1e-4)]
    oracle_step: f64,
}

#[derive(Args, Debug)]
struct ParityArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Ball centre (default: origin)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

enum CliError {
    Usage(String),
    Run(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownSystem(_) | Error::InvalidParams { .. } | Error::Invalid(_) => CliError::Usage(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Flags merged with the optional config file.
struct Settings {
    args: ProblemArgs,
    file: ConfigFile,
}

impl Settings {
    fn new(args: &ProblemArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path).map_err(CliError::Usage)?,
            None => ConfigFile::default(),
        };
        const KNOWN: &[&str] = &[
            "system", "y0", "eta", "t0", "b", "n", "max_iter", "stop_tol", "m_override", "k_override", "sublinear",
            "l_cap", "samples", "seed", "parity_tol", "out_dir", "stem", "svg", "center", "radius", "tol",
        ];
        if let Some(bad) = file.keys().find(|k| !k.starts_with("param.") && !KNOWN.contains(k)) {
            return Err(usage(format!("unknown config key `{bad}`")));
        }
        Ok(Self {
            args: args.clone(),
            file,
        })
    }

    fn file_value<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.file.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config key `{key}`: cannot parse `{s}`"))),
        }
    }

    fn scalar<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_value(key),
        }
    }

    fn list(&self, flag: &Option<Vec<f64>>, key: &str) -> CliResult<Option<Vec<f64>>> {
        if let Some(v) = flag {
            return Ok(Some(v.clone()));
        }
        self.file.get(key).map(|s| parse_list(s, key)).transpose()
    }

    fn string(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).map(str::to_string))
    }

    fn system(&self) -> CliResult<String> {
        self.string(&self.args.system, "system")
            .ok_or_else(|| usage("--system is required (see `picard catalog`)"))
    }

    fn params(&self) -> CliResult<Params> {
        let mut out = Params::new();
        for (name, value) in self.file.params() {
            out.insert(name.to_string(), parse_list(value, name)?);
        }
        for p in &self.args.params {
            let (name, value) = p
                .split_once('=')
                .ok_or_else(|| usage(format!("--param `{p}` is not NAME=VALUE")))?;
            out.insert(name.trim().to_string(), parse_list(value, name)?);
        }
        Ok(out)
    }

    fn entry(&self) -> CliResult<CatalogEntry> {
        Ok(catalog::lookup(&self.system()?, &self.params()?)?)
    }

    fn picard(&self) -> CliResult<PicardConfig> {
        let a = &self.args;
        let d = PicardConfig::default();
        let sublinear = match self.string(&a.sublinear, "sublinear") {
            Some(s) => Some(parse_sublinear(&s)?),
            None => None,
        };
        let cfg = PicardConfig {
            grid_points_per_half: self.scalar(a.n, "n")?.unwrap_or(d.grid_points_per_half),
            max_iterations: self.scalar(a.max_iter, "max_iter")?.unwrap_or(d.max_iterations),
            stop_tol: self.scalar(a.stop_tol, "stop_tol")?.unwrap_or(d.stop_tol),
            m_override: self.scalar(a.m_override, "m_override")?,
            k_override: self.scalar(a.k_override, "k_override")?,
            sublinear,
            l_cap: self.scalar(a.l_cap, "l_cap")?,
            samples_for_estimation: self.scalar(a.samples, "samples")?.unwrap_or(d.samples_for_estimation),
            seed: self.scalar(a.seed, "seed")?.unwrap_or(d.seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn t0(&self) -> CliResult<f64> {
        Ok(self.scalar(self.args.t0, "t0")?.unwrap_or(0.0))
    }

    fn b(&self) -> CliResult<f64> {
        Ok(self.scalar(self.args.b, "b")?.unwrap_or(1.0))
    }

    fn parity_tol(&self) -> CliResult<f64> {
        Ok(self.scalar(self.args.parity_tol, "parity_tol")?.unwrap_or(1e-10))
    }

    fn y0(&self) -> CliResult<Option<Vec<f64>>> {
        self.list(&self.args.y0, "y0")
    }

    fn eta(&self) -> CliResult<Option<Vec<f64>>> {
        self.list(&self.args.eta, "eta")
    }

    fn output(&self, out: &OutputArgs, default_stem: String) -> CliResult<Output> {
        let dir = out
            .out_dir
            .clone()
            .or_else(|| self.file.get("out_dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let stem = self.string(&out.stem, "stem").unwrap_or(default_stem);
        let svg = out.svg || self.file_value::<bool>("svg")?.unwrap_or(false);
        fs::create_dir_all(&dir)?;
        Ok(Output { dir, stem, svg })
    }
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("`{what}`: `{v}` is not a number")))
        })
        .collect()
}

fn parse_sublinear(s: &str) -> CliResult<(f64, f64)> {
    let mut m1 = None;
    let mut m2 = None;
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("--sublinear expects M1=..,M2=.., got `{s}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("--sublinear: `{v}` is not a number")))?;
        match k.trim() {
            "M1" | "m1" => m1 = Some(v),
            "M2" | "m2" => m2 = Some(v),
            other => return Err(usage(format!("--sublinear: unknown constant `{other}`"))),
        }
    }
    match (m1, m2) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(usage("--sublinear needs both M1 and M2")),
    }
}

struct Output {
    dir: PathBuf,
    stem: String,
    svg: bool,
}

impl Output {
    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.stem))
    }

    fn trajectory(&self, traj: &Trajectory, suffix: &str, title: &str, mirror: Option<f64>) -> CliResult<()> {
        let csv_path = self.path(&format!("{suffix}.csv"));
        let file = fs::File::create(&csv_path)?;
        write_trajectory_csv(traj, std::io::BufWriter::new(file))?;
        println!("wrote {}", csv_path.display());
        if self.svg {
            let svg_path = self.path(&format!("{suffix}.svg"));
            fs::write(&svg_path, trajectory_svg(traj, title, mirror))?;
            println!("wrote {}", svg_path.display());
        }
        Ok(())
    }

    fn json(&self, value: &Value, suffix: &str) -> CliResult<()> {
        let path = self.path(&format!("{suffix}.json"));
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Run(e.to_string()))?;
        fs::write(&path, text + "\n")?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn report_value(report: &ConvergenceReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn symmetric_value(run: &SymmetricRun) -> Value {
    let mut v = report_value(&run.report);
    v["kind"] = json!(run.kind);
    v["parity"] = json!(run.parity);
    v["velocity_parity"] = json!(run.velocity_parity);
    v
}

fn summary(report: &ConvergenceReport) {
    println!(
        "L = {}, M = {}, K = {}, iterations = {}, converged = {}, integral residual = {:e}",
        report.l_used,
        report.m_used,
        report.k_used,
        report.iterations_run,
        report.converged,
        report.final_integral_residual
    );
}

fn zeros_or(v: Option<Vec<f64>>, dim: usize) -> Vec<f64> {
    v.unwrap_or_else(|| vec![0.0; dim])
}

fn check_dim(v: &[f64], dim: usize, what: &str) -> CliResult<()> {
    if v.len() != dim {
        return Err(usage(format!("{what} has {} components but the system has dimension {dim}", v.len())));
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let s = Settings::new(&args.problem)?;
    let entry = s.entry()?;
    let y0 = s.y0()?.ok_or_else(|| usage("--y0 is required"))?;
    let eta = zeros_or(s.eta()?, entry.dim);
    check_dim(&y0, entry.dim, "--y0")?;
    check_dim(&eta, entry.dim, "--eta")?;
    let tube = DomainTube::new(y0, eta, s.t0()?, s.b()?)?;
    let cfg = s.picard()?;
    let out = s.output(&args.output, format!("{}-solve", entry.name))?;

    if let Some(t) = args.extend {
        let run = global_extend(&entry.field, &tube, &cfg, t)?;
        out.trajectory(&run.trajectory, "", &format!("{} (extended)", entry.name), None)?;
        out.json(
            &json!({
                "segments": run.segments,
                "stitches": run.stitches,
                "stitch_velocity_jumps": run.stitch_velocity_jumps,
                "start": run.trajectory.start(),
                "end": run.trajectory.end(),
                "halt": run.halt,
            }),
            "",
        )?;
        println!("segments = {}, covered [{}, {}]", run.segments, run.trajectory.start(), run.trajectory.end());
        return match run.halt {
            Some(h) => Err(CliError::Run(h)),
            None => Ok(()),
        };
    }

    let (traj, report) = solve_ivp(&entry.field, &tube, &cfg)?;
    let mirror = if !tube.is_moving() {
        Some(1.0)
    } else if tube.y0.iter().all(|v| *v == 0.0) && entry.declared_parity == Parity::Odd {
        Some(-1.0)
    } else {
        None
    };
    out.trajectory(&traj, "", &entry.name, mirror)?;
    out.json(&report_value(&report), "")?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    summary(&report);
    if report.converged {
        Ok(())
    } else {
        Err(CliError::Run(format!("no convergence after {} iterations", report.iterations_run)))
    }
}

fn cmd_solve_even(args: &SolveArgs) -> CliResult<()> {
    let s = Settings::new(&args.problem)?;
    if args.extend.is_some() {
        return Err(usage("--extend is only available with `solve`"));
    }
    let entry = s.entry()?;
    if s.eta()?.is_some_and(|e| e.iter().any(|v| *v != 0.0)) {
        return Err(usage("solve-even fixes eta = 0; drop --eta"));
    }
    let y0 = s.y0()?.ok_or_else(|| usage("--y0 is required"))?;
    check_dim(&y0, entry.dim, "--y0")?;
    let out = s.output(&args.output, format!("{}-even", entry.name))?;
    let run = solve_even(&entry.field, &y0, s.t0()?, s.b()?, &s.picard()?)?;
    out.trajectory(&run.trajectory, "", &format!("{} (even)", entry.name), Some(1.0))?;
    out.json(&symmetric_value(&run), "")?;
    summary(&run.report);
    println!("even defect = {:e}", run.parity.even_defect);
    Ok(())
}

fn cmd_solve_odd(args: &SolveArgs) -> CliResult<()> {
    let s = Settings::new(&args.problem)?;
    if args.extend.is_some() {
        return Err(usage("--extend is only available with `solve`"));
    }
    let entry = s.entry()?;
    if s.y0()?.is_some_and(|y| y.iter().any(|v| *v != 0.0)) {
        return Err(usage("solve-odd fixes y0 = 0; drop --y0"));
    }
    let eta = s.eta()?.ok_or_else(|| usage("--eta is required"))?;
    check_dim(&eta, entry.dim, "--eta")?;
    let out = s.output(&args.output, format!("{}-odd", entry.name))?;
    let run = solve_odd(&entry.field, &eta, s.t0()?, s.b()?, &s.picard()?, s.parity_tol()?)?;
    out.trajectory(&run.trajectory, "", &format!("{} (odd)", entry.name), Some(-1.0))?;
    out.json(&symmetric_value(&run), "")?;
    summary(&run.report);
    println!("odd defect = {:e}", run.parity.odd_defect);
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let s = Settings::new(&args.problem)?;
    let entry = s.entry()?;
    let samples = args
        .members
        .iter()
        .map(|m| parse_list(m, "--member"))
        .collect::<CliResult<Vec<_>>>()?;
    for m in &samples {
        check_dim(m, entry.dim, "--member")?;
    }
    let (parameter, tag) = match args.vary {
        Vary::Position => (FamilyParameter::InitialPosition, "even"),
        Vary::Velocity => (FamilyParameter::InitialVelocity, "odd"),
    };
    let oracle = if args.oracle_step > 0.0 {
        Some(OracleConfig::new(args.oracle_step)?)
    } else {
        None
    };
    let spec = FamilySpec {
        field: entry.field.clone(),
        parameter,
        samples,
        t0: s.t0()?,
        b: s.b()?,
        config: s.picard()?,
        parity_tol: s.parity_tol()?,
        oracle,
    };
    let out = s.output(&args.output, format!("{}-sweep", entry.name))?;
    let result = family_sweep(&spec)?;
    let summary_path = out.path("-summary.csv");
    result.write_summary(std::io::BufWriter::new(fs::File::create(&summary_path)?))?;
    println!("wrote {}", summary_path.display());
    let mirror = if parameter == FamilyParameter::InitialPosition { 1.0 } else { -1.0 };
    let mut failed = 0;
    for m in &result.members {
        match &m.outcome {
            Ok(run) => {
                let suffix = format!("-member{}", m.index);
                out.trajectory(&run.trajectory, &suffix, &format!("{} ({tag}) #{}", entry.name, m.index), Some(mirror))?;
                out.json(&symmetric_value(run), &suffix)?;
            }
            Err(e) => {
                failed += 1;
                eprintln!("member {} failed: {e}", m.index);
            }
        }
    }
    println!("{} of {} members succeeded", result.members.len() - failed, result.members.len());
    Ok(())
}

fn cmd_interval(args: &ProblemArgs) -> CliResult<()> {
    let s = Settings::new(args)?;
    let entry = s.entry()?;
    let y0 = zeros_or(s.y0()?, entry.dim);
    let eta = zeros_or(s.eta()?, entry.dim);
    check_dim(&y0, entry.dim, "--y0")?;
    check_dim(&eta, entry.dim, "--eta")?;
    let tube = DomainTube::new(y0, eta, s.t0()?, s.b()?)?;
    let (m, l, _) = resolve_interval(&entry.field, &tube, &s.picard()?)?;
    println!("b = {}", tube.b);
    println!("M = {m}");
    println!("L = {l}");
    Ok(())
}

fn cmd_convergence(args: &ProblemArgs) -> CliResult<()> {
    let s = Settings::new(args)?;
    let entry = s.entry()?;
    let y0 = s.y0()?.ok_or_else(|| usage("--y0 is required"))?;
    let eta = zeros_or(s.eta()?, entry.dim);
    check_dim(&y0, entry.dim, "--y0")?;
    check_dim(&eta, entry.dim, "--eta")?;
    let tube = DomainTube::new(y0, eta, s.t0()?, s.b()?)?;
    let (_, report) = solve_ivp(&entry.field, &tube, &s.picard()?)?;
    print!("{}", convergence_table(&report));
    let violations = report.majorant_violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Run(format!("increments exceed the majorant at iterations {violations:?}")))
    }
}

fn cmd_check_parity(args: &ParityArgs) -> CliResult<()> {
    let s = Settings::new(&args.problem)?;
    let entry = s.entry()?;
    let center = zeros_or(s.list(&args.center, "center")?, entry.dim);
    check_dim(&center, entry.dim, "--center")?;
    let radius = s.scalar(args.radius, "radius")?.unwrap_or(1.0);
    let tol = s.scalar(args.tol, "tol")?.unwrap_or(1e-10);
    let samples = s.scalar(args.problem.samples, "samples")?.unwrap_or(512);
    let seed = s.scalar(args.problem.seed, "seed")?.unwrap_or(0);
    let ball = SampleBall::new(center, radius, samples, seed);
    let report = classify_field_parity(&entry.field, &ball, tol)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn cmd_catalog() -> CliResult<()> {
    println!("{}", catalog::listing_json()?);
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::SolveEven(a) => cmd_solve_even(a),
        Command::SolveOdd(a) => cmd_solve_odd(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Interval(a) => cmd_interval(a),
        Command::CheckParity(a) => cmd_check_parity(a),
        Command::Catalog => cmd_catalog(),
        Command::Convergence(a) => cmd_convergence(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `picard --help` for usage");
            ExitCode::from(2)
        }
    }
}
