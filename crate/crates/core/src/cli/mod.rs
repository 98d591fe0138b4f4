//! Command-line front end.
//!
//! ```text
//! stabmix stability   [--problem 1|2] [--nodes 5,9,17,33] [--format csv|json|pretty] ...
//! stabmix convergence [--problem 1|2] [--gamma-tilde G] ...
//! stabmix infsup      [--problem 1|2] [--element mini|p1] ...
//! ```
//!
//! `STABMIX_THREADS` caps the number of worker threads.

pub mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::analysis::config::{
    DEFAULT_BISECT_TOL, DEFAULT_DELTA_GAMMA, DEFAULT_GAMMA_CAP, DEFAULT_LINEAR_SCAN_LIMIT, DEFAULT_M1,
    DEFAULT_M2_CLAMPED, DEFAULT_M2_NORMAL_ONLY, DEFAULT_MU, DEFAULT_SCAN_STEP,
};
use crate::analysis::{estimate_inf_sup_for, find_stability_limits, run_convergence, ProblemConfig};
use crate::error::{Error, Result};
use crate::spaces::{DisplacementElement, Problem};

pub use emit::{emit, parse_json, ConvergenceRecord, Format, InfSupRecord, Report, ReportKind, StabilityRecord};

pub const DEFAULT_MESHES: [usize; 4] = [5, 9, 17, 33];
/// Convergence-study load for the clamped problem.
pub const DEFAULT_GAMMA_TILDE_CLAMPED: f64 = 7.125;
/// Convergence-study load for the normal-only problem.
pub const DEFAULT_GAMMA_TILDE_NORMAL_ONLY: f64 = 3.23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Stability,
    Convergence,
    Infsup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ElementArg {
    Mini,
    P1,
}

impl From<ElementArg> for DisplacementElement {
    fn from(e: ElementArg) -> Self {
        match e {
            ElementArg::Mini => DisplacementElement::Mini,
            ElementArg::P1 => DisplacementElement::P1,
        }
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    /// Parameters shared by every mesh; `nodes` holds the first mesh.
    pub config: ProblemConfig,
    pub meshes: Vec<usize>,
    pub element: DisplacementElement,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Flags the user left at their defaults.
    pub defaulted: Vec<&'static str>,
}

#[derive(Debug, Parser)]
#[command(name = "stabmix", version, about = "Stability limits, convergence and inf-sup studies for the stabilized MINI element")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Critical loads (gamma_m, gamma_M) per mesh.
    Stability(StudyArgs),
    /// Manufactured-solution errors per mesh.
    Convergence(StudyArgs),
    /// Discrete inf-sup constant per mesh.
    Infsup(StudyArgs),
}

#[derive(Debug, Args)]
struct StudyArgs {
    /// 1 = clamped, 2 = normal-only boundary conditions.
    #[arg(long, default_value_t = 1)]
    problem: u32,
    /// Comma-separated nodes per side.
    #[arg(long, value_delimiter = ',')]
    nodes: Vec<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_tilde: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_gamma: Option<f64>,
    #[arg(long)]
    scan_step: Option<f64>,
    #[arg(long)]
    bisect_tol: Option<f64>,
    #[arg(long)]
    cap: Option<f64>,
    /// Drop the div-div stabilization (M = 0).
    #[arg(long)]
    classical: bool,
    #[arg(long, value_enum, default_value_t = ElementArg::Mini)]
    element: ElementArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn parse_args<I, T>(argv: I) -> Result<RunSpec>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    let (command, a) = match cli.command {
        Sub::Stability(a) => (Command::Stability, a),
        Sub::Convergence(a) => (Command::Convergence, a),
        Sub::Infsup(a) => (Command::Infsup, a),
    };
    let problem = Problem::from_id(a.problem).map_err(|e| Error::Usage(e.to_string()))?;
    let nodes_defaulted = a.nodes.is_empty();
    let meshes = if nodes_defaulted { DEFAULT_MESHES.to_vec() } else { a.nodes.clone() };
    if let Some(&n) = meshes.iter().find(|&&n| n < 2) {
        return Err(Error::Usage(Error::InvalidResolution(n).to_string()));
    }

    let mut defaulted = Vec::new();
    let mut pick = |name: &'static str, v: Option<f64>, default: f64| {
        v.unwrap_or_else(|| {
            defaulted.push(name);
            default
        })
    };
    let mut cfg = ProblemConfig::new(problem, meshes[0]);
    cfg.mu = pick("mu", a.mu, DEFAULT_MU);
    cfg.m1 = pick("m1", a.m1, DEFAULT_M1);
    cfg.m2 = pick("m2", a.m2, cfg.m2);
    let load_default = match (command, problem) {
        (Command::Convergence, Problem::Clamped) => DEFAULT_GAMMA_TILDE_CLAMPED,
        (Command::Convergence, Problem::NormalOnly) => DEFAULT_GAMMA_TILDE_NORMAL_ONLY,
        _ => 0.0,
    };
    cfg.gamma_tilde = pick("gamma-tilde", a.gamma_tilde, load_default);
    cfg.delta_gamma = pick("delta-gamma", a.delta_gamma, DEFAULT_DELTA_GAMMA);
    cfg.scan_step = pick("scan-step", a.scan_step, DEFAULT_SCAN_STEP);
    cfg.bisect_tol = pick("bisect-tol", a.bisect_tol, DEFAULT_BISECT_TOL);
    cfg.gamma_cap = pick("cap", a.cap, DEFAULT_GAMMA_CAP);
    cfg.classical = a.classical;
    cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
    if nodes_defaulted {
        defaulted.push("nodes");
    }

    Ok(RunSpec {
        command,
        config: cfg,
        meshes,
        element: a.element.into(),
        format: a.format,
        output: a.output,
        defaulted,
    })
}

/// Provenance header: every parameter with the origin of its value.
pub fn provenance(job: &RunSpec) -> String {
    let cfg = &job.config;
    let src = |name: &str, origin: &str| {
        if job.defaulted.contains(&name) {
            origin.to_string()
        } else {
            "command line".to_string()
        }
    };
    let m2_origin = match cfg.problem {
        Problem::Clamped => format!("reference experiments, clamped problem (m2 = {DEFAULT_M2_CLAMPED})"),
        Problem::NormalOnly => format!("reference experiments, normal-only problem (m2 = {DEFAULT_M2_NORMAL_ONLY})"),
    };
    let meshes: Vec<String> = job.meshes.iter().map(|n| n.to_string()).collect();
    let mut lines = vec![
        format!("# stabmix {:?} problem={}", job.command, cfg.problem.id()).to_lowercase(),
        format!("# meshes = {}  [{}]", meshes.join(","), src("nodes", "reference mesh sequence")),
        format!("# mu = {}  [{}]", cfg.mu, src("mu", "reference experiments")),
        format!("# m1 = {}  [{}]", cfg.m1, src("m1", "reference experiments")),
        format!("# m2 = {}  [{}]", cfg.m2, src("m2", &m2_origin)),
    ];
    match job.command {
        Command::Stability => {
            lines.push(format!("# scan step = {}  [{}]", cfg.scan_step, src("scan-step", "design decision: outward scan step")));
            lines.push(format!(
                "# linear scan limit = {DEFAULT_LINEAR_SCAN_LIMIT}  [design decision: doubling steps beyond this load]"
            ));
            lines.push(format!(
                "# bisection tol = {}  [{}]",
                cfg.bisect_tol,
                src("bisect-tol", "design decision: two reported decimals")
            ));
            lines.push(format!("# cap = {:e}  [{}]", cfg.gamma_cap, src("cap", "design decision: infinite-limit cap")));
        }
        Command::Convergence => {
            lines.push(format!(
                "# gamma tilde = {}  [{}]",
                cfg.gamma_tilde,
                src("gamma-tilde", "reference convergence study load")
            ));
            lines.push(format!(
                "# delta gamma = {}  [{}]",
                cfg.delta_gamma,
                src("delta-gamma", "design decision: unit load increment")
            ));
        }
        Command::Infsup => {
            lines.push(format!("# element = {:?}  [{}]", job.element, "--element"));
        }
    }
    if cfg.classical {
        lines.push("# classical: stabilization disabled (M = 0)".into());
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Runs the requested study and collects its report.
pub fn execute(job: &RunSpec) -> Result<Report> {
    let cfg = &job.config;
    match job.command {
        Command::Stability => {
            let rows = job
                .meshes
                .par_iter()
                .map(|&n| find_stability_limits(&cfg.clone().with_nodes(n)).map(|r| StabilityRecord::from(&r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Report::Stability(rows))
        }
        Command::Convergence => {
            let table = run_convergence(cfg, &job.meshes)?;
            Ok(Report::Convergence(ConvergenceRecord::rows(&table)))
        }
        Command::Infsup => {
            let rows = job
                .meshes
                .par_iter()
                .map(|&n| {
                    estimate_inf_sup_for(cfg.problem, n, job.element).map(|e| InfSupRecord {
                        problem: cfg.problem.id(),
                        nodes: n,
                        element: match job.element {
                            DisplacementElement::Mini => "mini".into(),
                            DisplacementElement::P1 => "p1".into(),
                        },
                        beta: e.beta,
                        kernel_dim: e.kernel_dim,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Report::InfSup(rows))
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("STABMIX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("STABMIX_THREADS must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Parameter(e.to_string()))
}

fn run_spec(job: &RunSpec) -> Result<()> {
    let report = thread_pool()?.install(|| execute(job))?;
    let header = provenance(job);
    let body = emit(&report, job.format)?;
    let mut bytes = Vec::new();
    if job.format == Format::Pretty {
        bytes.extend_from_slice(header.as_bytes());
    } else {
        eprint!("{header}");
    }
    bytes.extend_from_slice(&body);
    match &job.output {
        Some(path) => std::fs::write(path, &bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

/// Entry point; returns the process exit code (0 success, 1 run failure,
/// 2 usage error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&args) {
        if !e.use_stderr() {
            let _ = e.print();
            return 0;
        }
    }
    let job = match parse_args(&args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    match run_spec(&job) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<RunSpec> {
        parse_args(std::iter::once("stabmix").chain(line.split_whitespace()))
    }

    #[test]
    fn stability_defaults() {
        let job = parse("stability --problem 1 --nodes 17").unwrap();
        assert_eq!(job.command, Command::Stability);
        assert_eq!(job.meshes, vec![17]);
        assert_eq!((job.config.mu, job.config.m1, job.config.m2), (40.0, 320.0, 0.0));
        assert_eq!(job.config.scan_step, 0.25);
        assert_eq!(job.config.bisect_tol, 0.01);
        assert_eq!(job.config.gamma_cap, 1e6);
        assert_eq!(job.config.delta_gamma, 1.0);
        assert!(!job.config.classical);
        assert_eq!(job.format, Format::Csv);
    }

    #[test]
    fn convergence_problem_two() {
        let job = parse("convergence --problem 2 --gamma-tilde 3.23").unwrap();
        assert_eq!(job.command, Command::Convergence);
        assert_eq!(job.config.problem, Problem::NormalOnly);
        assert_eq!(job.config.m2, 1.36);
        assert_eq!(job.config.gamma_tilde, 3.23);
        assert_eq!(job.meshes, DEFAULT_MESHES.to_vec());
        assert!(job.defaulted.contains(&"nodes"));
        assert!(!job.defaulted.contains(&"gamma-tilde"));
    }

    #[test]
    fn overrides_and_negative_load() {
        let job = parse("stability --nodes 5,9 --mu 2 --m1 0 --m2 3 --gamma-tilde -1.5 --classical --format json").unwrap();
        assert_eq!(job.meshes, vec![5, 9]);
        assert_eq!((job.config.mu, job.config.m1, job.config.m2), (2.0, 0.0, 3.0));
        assert_eq!(job.config.gamma_tilde, -1.5);
        assert!(job.config.classical);
        assert_eq!(job.format, Format::Json);
    }

    #[test]
    fn usage_errors() {
        for line in [
            "stability --nodes 0",
            "stability --nodes 1",
            "stability --bogus",
            "stability --mu abc",
            "stability --problem 3",
            "stability --mu -1",
            "stability --format xml",
            "",
        ] {
            assert!(matches!(parse(line), Err(Error::Usage(_))), "{line:?} should be rejected");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["stabmix", "stability", "--nodes", "0"]), 2);
        assert_eq!(run(["stabmix"]), 2);
    }

    #[test]
    fn provenance_names_every_default() {
        let job = parse("stability --problem 2").unwrap();
        let header = provenance(&job);
        assert!(header.lines().all(|l| l.starts_with('#')));
        for needle in ["mu = 40", "m1 = 320", "m2 = 1.36", "scan step = 0.25", "bisection tol = 0.01", "cap = 1e6"] {
            assert!(header.contains(needle), "missing {needle}");
        }
        let job = parse("convergence --mu 10").unwrap();
        let header = provenance(&job);
        assert!(header.contains("mu = 10  [command line]"));
        assert!(header.contains("gamma tilde = 7.125"));
    }

    #[test]
    fn deterministic_output() {
        let out = std::env::temp_dir().join(format!("stabmix-cli-{}.csv", std::process::id()));
        let path = out.to_str().unwrap();
        let args = ["stabmix", "stability", "--problem", "2", "--nodes", "5", "--cap", "64", "--output", path];
        assert_eq!(run(args), 0);
        let first = std::fs::read(&out).unwrap();
        assert_eq!(run(args), 0);
        assert_eq!(std::fs::read(&out).unwrap(), first);
        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with("problem,nodes,gamma_m,gamma_M\n2,5,"));
        let _ = std::fs::remove_file(&out);
    }

    #[test]
    fn unwritable_output_fails() {
        let args = ["stabmix", "infsup", "--nodes", "3", "--output", "/nonexistent-dir/x.csv"];
        assert_eq!(run(args), 1);
    }
}
