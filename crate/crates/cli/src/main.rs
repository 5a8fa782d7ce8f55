use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use interferoq::circuit::{check_equivalence, sample, simulate, Circuit, Compare, Domain, EquivalenceQuery};
use interferoq::config::{grid, DEFAULT_GRID, TOL_EXACT};
use interferoq::protocols::{self, BuildOptions, Family, ProtocolId};
use interferoq::{dsl, report};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "interferoq",
    version,
    about = "Simulate interferometric phase-estimation circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Long table: phi,outcome,probability,reference_value,abs_error.
    Csv,
    /// One row per phi: phi,p_plus,p_minus.
    Wide,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompareArg {
    Unitary,
    Distribution,
}

/// A protocol name with its size, or a `.qc` file.
#[derive(clap::Args)]
struct Target {
    /// Protocol name (see `interferoq protocols`) or path to a `.qc` file.
    target: String,
    /// Particle number for Fock-state protocols.
    #[arg(long = "N", alias = "n")]
    n: Option<usize>,
    /// Coherent amplitude for coherent-state protocols.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Classical wire to read from a `.qc` file (default: the last declared).
    #[arg(long)]
    label: Option<String>,
    /// Extra fringe shift inserted on the probe (protocols that support it).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome distribution of a circuit file at one phase.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sampled outcome counts (seeded).
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fringe table over a phase grid.
    Sweep {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = -PI, allow_hyphen_values = true)]
        phi_min: f64,
        #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
        phi_max: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        steps: usize,
        #[arg(long, value_enum, default_value = "wide")]
        format: Format,
    },
    /// Phase uncertainty at an operating point.
    Sensitivity {
        #[command(flatten)]
        target: Target,
        /// Operating point (default: the protocol's own).
        #[arg(long, allow_hyphen_values = true)]
        phi0: Option<f64>,
    },
    /// Compare two circuit files.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        /// `declared` (each circuit's own input), `full` (every basis state),
        /// or `sector:N` (the symmetric N-excitation sector). Default:
        /// `full` for unitary comparison, `declared` otherwise.
        #[arg(long)]
        domain: Option<String>,
        /// Default: unitary when both circuits are measurement-free.
        #[arg(long, value_enum)]
        compare: Option<CompareArg>,
        #[arg(long, default_value_t = TOL_EXACT)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Compare only these labels (comma separated). Default: all labels
        /// when both circuits have the same ones, else the shared labels.
        #[arg(long, value_delimiter = ',')]
        observe: Option<Vec<String>>,
    },
    /// Power-law fit of the phase uncertainty against the resource.
    Scaling {
        family: String,
        /// `lo:hi` (integers, inclusive) or a comma-separated list.
        #[arg(long, default_value = "1:8")]
        param_range: String,
    },
    /// Write a protocol circuit as `.qc` text.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a `.qc` file and print its diagnostics.
    Check { file: PathBuf },
    /// List protocol names.
    Protocols,
}

struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            message: format!("error: {e}"),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::from(format!("{}: {e}", path.display())))?;
    dsl::parse(&text).map_err(|d| Failure {
        code: 1,
        message: d
            .0
            .iter()
            .map(|x| format!("{}:{x}", path.display()))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn is_file(target: &str) -> bool {
    target.ends_with(".qc") || Path::new(target).is_file()
}

fn protocol(t: &Target) -> Result<ProtocolId, Failure> {
    Ok(ProtocolId::from_name(&t.target, t.n, t.alpha)?)
}

fn output_label(c: &Circuit, label: &Option<String>) -> Result<String, Failure> {
    match label {
        Some(l) => Ok(l.clone()),
        None => c
            .classical
            .last()
            .map(|w| w.name.clone())
            .ok_or_else(|| Failure::from("circuit has no classical output; pass --label")),
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Simulate { file, phi, format } => {
            let c = read_circuit(&file)?;
            let d = simulate(&c, phi)?;
            Ok(match format {
                Format::Json => (report::to_json(&report::distribution_json(&d)), 0),
                _ => (report::distribution_csv(&d), 0),
            })
        }
        Command::Sample { file, phi, shots, seed } => {
            let c = read_circuit(&file)?;
            let counts = sample(&c, phi, shots, seed)?;
            let labels = c.labels();
            let rows: Vec<_> = counts
                .iter()
                .map(|(k, n)| {
                    let o: serde_json::Map<String, serde_json::Value> = labels
                        .iter()
                        .cloned()
                        .zip(k.iter().map(|v| serde_json::to_value(v).unwrap_or_default()))
                        .collect();
                    json!({ "outcome": o, "count": n })
                })
                .collect();
            let v = json!({ "phi": phi, "shots": shots, "seed": seed, "counts": rows });
            Ok((report::to_json(&v), 0))
        }
        Command::Sweep {
            target,
            phi_min,
            phi_max,
            steps,
            format,
        } => {
            let phis = grid(phi_min, phi_max, steps);
            let (json, points) = if is_file(&target.target) {
                let c = read_circuit(Path::new(&target.target))?;
                let label = output_label(&c, &target.label)?;
                let points = protocols::circuit_sweep(&c, &label, 1.0, &phis)?;
                (report::points_json(&label, &points), points)
            } else {
                let id = protocol(&target)?;
                let opts = BuildOptions {
                    fringe_shift: target.theta,
                    ..BuildOptions::default()
                };
                let r = protocols::fringe_sweep_with(id, &opts, &phis)?;
                (report::report_json(&r), r.points)
            };
            Ok(match format {
                Format::Json => (report::to_json(&json), 0),
                Format::Csv => (report::fringe_csv(&points), 0),
                Format::Wide => (report::fringe_csv_wide(&points), 0),
            })
        }
        Command::Sensitivity { target, phi0 } => {
            let v = if is_file(&target.target) {
                let c = read_circuit(Path::new(&target.target))?;
                let label = output_label(&c, &target.label)?;
                let s = protocols::sensitivity_of(&c, &label, 1.0, phi0.unwrap_or(PI / 2.0))?;
                json!({
                    "file": target.target,
                    "label": label,
                    "phi0": s.phi0,
                    "mean": s.mean,
                    "std_dev": s.std_dev,
                    "derivative": s.derivative,
                    "delta_phi": s.delta_phi,
                })
            } else {
                let id = protocol(&target)?;
                let s = protocols::sensitivity(id, phi0.unwrap_or_else(|| id.operating_point()))?;
                report::sensitivity_json(id, &s)
            };
            Ok((report::to_json(&v), 0))
        }
        Command::Equiv {
            left,
            right,
            domain,
            compare,
            tol,
            grid: n,
            observe,
        } => {
            let l = read_circuit(&left)?;
            let r = read_circuit(&right)?;
            let compare = match compare {
                Some(CompareArg::Unitary) => Compare::UnitaryUpToGlobalPhase,
                Some(CompareArg::Distribution) => Compare::JointDistribution,
                None if l.is_measurement_free() && r.is_measurement_free() => Compare::UnitaryUpToGlobalPhase,
                None => Compare::JointDistribution,
            };
            let domain = domain.unwrap_or_else(|| {
                if compare == Compare::UnitaryUpToGlobalPhase {
                    "full"
                } else {
                    "declared"
                }
                .to_string()
            });
            let (dom, declared) = parse_domain(&domain)?;
            let observe = observe.or_else(|| {
                let (a, b) = (l.labels(), r.labels());
                let mut shared: Vec<String> = a.iter().filter(|x| b.contains(x)).cloned().collect();
                shared.sort();
                (compare == Compare::JointDistribution && (a.len() != b.len() || shared.len() != a.len()))
                    .then_some(shared)
            });
            if observe.as_ref().is_some_and(|o| o.is_empty()) {
                return Err(Failure::from("the circuits share no classical labels; pass --observe"));
            }
            let mut q = EquivalenceQuery::new(l, r, dom, compare);
            q.tol = tol;
            q.phis = grid(-PI, PI, n);
            q.observe = observe.clone();
            q.declared_inputs = declared;
            let v = check_equivalence(&q)?;
            let mut out = report::verdict_json(&v);
            out["domain"] = json!(domain);
            out["observed"] = json!(observe);
            Ok((report::to_json(&out), if v.equal { 0 } else { 2 }))
        }
        Command::Scaling { family, param_range } => {
            let template = ProtocolId::from_name(&family, Some(1), Some(1.0))?;
            let params = parse_range(&param_range, template.family())?;
            let fit = protocols::scaling_fit(template, &params)?;
            Ok((report::to_json(&report::scaling_json(&family, &fit)), 0))
        }
        Command::Export { target, output } => {
            let id = protocol(&target)?;
            let opts = BuildOptions {
                fringe_shift: target.theta,
                ..BuildOptions::default()
            };
            let text = format!("# {id}\n{}", dsl::serialize(&id.build_with(&opts)?)?);
            match output {
                Some(p) => {
                    std::fs::write(&p, text).map_err(|e| Failure::from(format!("{}: {e}", p.display())))?;
                    Ok((String::new(), 0))
                }
                None => Ok((text, 0)),
            }
        }
        Command::Check { file } => {
            read_circuit(&file)?;
            Ok((format!("{}: ok\n", file.display()), 0))
        }
        Command::Protocols => Ok((ProtocolId::names().iter().map(|n| format!("{n}\n")).collect(), 0)),
    }
}

/// The domain and whether to use declared inputs instead of enumerating it.
fn parse_domain(s: &str) -> Result<(Domain, bool), Failure> {
    match s {
        "full" => return Ok((Domain::Full, false)),
        "declared" => return Ok((Domain::Full, true)),
        _ => {}
    }
    if let Some(n) = s.strip_prefix("sector:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::from(format!("bad sector size in `{s}`")))?;
        return Ok((Domain::SymmetricSector(n), false));
    }
    Err(Failure::from(format!(
        "unknown domain `{s}` (expected `declared`, `full` or `sector:N`)"
    )))
}

fn parse_range(s: &str, family: Family) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::from(format!("bad parameter range `{s}`"));
    let params: Vec<f64> = if let Some((lo, hi)) = s.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).map(|k| k as f64).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if family == Family::Fock && params.iter().any(|p| p.fract() != 0.0 || *p < 1.0) {
        return Err(Failure::from("Fock families need positive integer N"));
    }
    Ok(params)
}
