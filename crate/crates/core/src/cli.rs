//! The `evacsim` command line: build, evaluate, worstcase and optimize.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{scan_curve, worst_case};
use crate::error::EvacError;
use crate::figure::{curve_csv, protocol_svg};
use crate::geometry::{make_shape, BoundaryCoord, ShapeKind};
use crate::optimizer::{
    appendix_a_replay, run_config, with_threads, Family, Objective, OptConfig, ParamRange,
};
use crate::protocols::{build_custom, build_family, Protocol};
use crate::simulator::evacuate;
use crate::trajectory::parse_trajectories;

#[derive(Debug, Parser)]
#[command(
    name = "evacsim",
    version,
    about = "Evacuation protocols for robots in a triangle or square"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "EVACSIM_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a protocol and print its JSON document.
    Build {
        #[command(flatten)]
        proto: ProtocolArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one exit location.
    Evaluate {
        #[command(flatten)]
        proto: ProtocolArgs,
        /// Exit at a labeled vertex (A, B, C, D).
        #[arg(long, conflicts_with = "exit_arc")]
        exit_at_vertex: Option<char>,
        /// Exit at this arc coordinate, counterclockwise from the first vertex.
        #[arg(long)]
        exit_arc: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the boundary for the worst exit.
    Worstcase {
        #[command(flatten)]
        proto: ProtocolArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-7)]
        refine_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the sampled curve as `s,evac_time` rows.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Draw the protocol and its worst exits.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// SVG pixels per unit length.
        #[arg(long, default_value_t = 400.0)]
        scale: f64,
    },
    /// Grid search followed by refinement.
    Optimize {
        #[command(flatten)]
        proto: ProtocolArgs,
        /// Replay the published square grid and print its three result lines.
        #[arg(long)]
        appendix_a: bool,
        /// JSON run configuration; overrides the protocol flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid for one parameter, `NAME=LO:HI:STEP` (repeatable).
        #[arg(long = "range", value_parser = parse_range)]
        ranges: Vec<ParamRange>,
        /// `formula` (closed-form maximum) or `sim` (boundary scan).
        #[arg(long, default_value = "formula")]
        objective: String,
        /// Samples per unit for the `sim` objective.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        refine_tol: f64,
        /// Stop after the grid.
        #[arg(long)]
        no_refine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    Equal,
    Detour1,
    Detour2,
    Early,
    SquareDetour,
    Custom,
}

impl ProtocolName {
    fn family_name(self) -> &'static str {
        match self {
            ProtocolName::Equal => "equal",
            ProtocolName::Detour1 => "detour1",
            ProtocolName::Detour2 => "detour2",
            ProtocolName::Early => "early",
            ProtocolName::SquareDetour => "square-detour",
            ProtocolName::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long, default_value = "triangle")]
    pub shape: ShapeKind,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolName>,
    /// Protocol parameter `NAME=VALUE` (repeatable).
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Trajectory file for `--protocol custom`.
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
    /// A protocol JSON document written by `build`.
    #[arg(long, conflicts_with_all = ["protocol", "trajectories"])]
    pub protocol_file: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("empty parameter name in `{s}`"));
    }
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", value.trim()))?;
    if !v.is_finite() {
        return Err(format!("parameter `{name}` must be finite"));
    }
    Ok((name.to_string(), v))
}

fn parse_range(s: &str) -> Result<ParamRange, String> {
    let (name, spec) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=LO:HI:STEP, got `{s}`"))?;
    let parts: Vec<f64> = spec
        .split(':')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{x}` is not a number"))
        })
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [lo, hi, step] => Ok(ParamRange::new(name.trim(), lo, hi, step)),
        _ => Err(format!("expected NAME=LO:HI:STEP, got `{s}`")),
    }
}

/// Failure of a command. Input problems map to exit status 2.
#[derive(Debug)]
pub enum CliError {
    Input(EvacError),
    Usage(String),
    Io(PathBuf, io::Error),
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Usage(_) => 2,
            CliError::Io(..) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<EvacError> for CliError {
    fn from(e: EvacError) -> Self {
        CliError::Input(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => writeln!(stdout, "{text}").map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}

impl ProtocolArgs {
    fn named(&self) -> BTreeMap<String, f64> {
        self.params.iter().cloned().collect()
    }

    pub fn build(&self) -> Result<Protocol, CliError> {
        if let Some(path) = &self.protocol_file {
            return Ok(Protocol::from_json(&read(path)?)?);
        }
        let name = self
            .protocol
            .ok_or_else(|| CliError::Usage("--protocol or --protocol-file is required".into()))?;
        if name == ProtocolName::Custom {
            let path = self.trajectories.as_ref().ok_or_else(|| {
                CliError::Usage("--protocol custom needs --trajectories PATH".into())
            })?;
            let trajs = parse_trajectories(&read(path)?)?
                .into_iter()
                .map(|(_, t)| t)
                .collect();
            return Ok(build_custom(&make_shape(self.shape), trajs)?);
        }
        Ok(build_family(
            name.family_name(),
            self.shape,
            self.k,
            &self.named(),
        )?)
    }

    fn family(&self) -> Result<Family, CliError> {
        match self.protocol {
            Some(ProtocolName::Detour1) => Ok(Family::Detour1),
            Some(ProtocolName::Detour2) => Ok(Family::Detour2),
            Some(ProtocolName::SquareDetour) => Ok(Family::SquareDetour),
            Some(ProtocolName::Early) => Ok(Family::Early {
                shape: self.shape,
                k: self.k,
            }),
            Some(other) => Err(CliError::Usage(format!(
                "protocol `{}` has no parameters to optimize",
                other.family_name()
            ))),
            None => Err(CliError::Usage("--protocol is required".into())),
        }
    }
}

/// Search grid used when no `--range` is given.
fn default_space(family: Family) -> Vec<ParamRange> {
    match family {
        Family::Detour1 => vec![ParamRange::new("z", 0.6, 0.8, 1e-3)],
        Family::Detour2 => vec![
            ParamRange::new("b1", 0.6, 0.75, 5e-3),
            ParamRange::new("b2", 0.8, 0.99, 5e-3),
        ],
        Family::SquareDetour => vec![
            ParamRange::new("p", 0.1, 0.2, 1e-3),
            ParamRange::new("q", 0.2, 0.8, 1e-3),
        ],
        Family::Early { .. } => vec![ParamRange::new("p1", 0.01, 0.99, 0.01)],
    }
}

/// Runs a parsed command line, writing results to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let threads = cli.threads;
    match cli.command {
        Command::Build { proto, out } => {
            let p = proto.build()?;
            emit(&out, &p.to_json(), stdout)
        }
        Command::Evaluate {
            proto,
            exit_at_vertex,
            exit_arc,
            out,
        } => {
            let p = proto.build()?;
            let s = match (exit_at_vertex, exit_arc) {
                (Some(v), _) => {
                    let v = v.to_ascii_uppercase();
                    if !p.shape.vertices.iter().any(|(l, _)| *l == v) {
                        return Err(CliError::Usage(format!(
                            "the {} has no vertex {v}",
                            p.shape.kind
                        )));
                    }
                    p.shape.vertex_arc(v)
                }
                (None, Some(s)) if s.is_finite() => s,
                (None, Some(s)) => {
                    return Err(CliError::Usage(format!("exit arc {s} is not finite")))
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "give --exit-at-vertex or --exit-arc".into(),
                    ))
                }
            };
            let r = evacuate(&p, BoundaryCoord(s))?;
            emit(
                &out,
                &serde_json::to_string_pretty(&r).expect("serializes"),
                stdout,
            )
        }
        Command::Worstcase {
            proto,
            samples,
            refine_tol,
            out,
            csv,
            svg,
            scale,
        } => {
            if samples == 0
                || refine_tol.is_nan()
                || refine_tol <= 0.0
                || scale.is_nan()
                || scale <= 0.0
            {
                return Err(CliError::Usage(
                    "--samples, --refine-tol and --scale must be positive".into(),
                ));
            }
            let p = proto.build()?;
            let report = with_threads(threads, || worst_case(&p, samples, refine_tol));
            if let Some(path) = csv {
                let curve = with_threads(threads, || scan_curve(&p, samples));
                write_file(&path, &curve_csv(&curve))?;
            }
            if let Some(path) = svg {
                write_file(&path, &protocol_svg(&p, &report.worst_exits, scale))?;
            }
            emit(&out, &report.to_json(), stdout)
        }
        Command::Optimize {
            proto,
            appendix_a,
            config,
            ranges,
            objective,
            samples,
            refine_tol,
            no_refine,
            out,
        } => {
            if appendix_a {
                let r = with_threads(threads, appendix_a_replay);
                let text = r.lines().join("\n");
                return emit(&out, &text, stdout);
            }
            let cfg = match config {
                Some(path) => {
                    let mut cfg = OptConfig::from_json(&read(&path)?)?;
                    cfg.threads = threads.or(cfg.threads);
                    cfg
                }
                None => {
                    let family = proto.family()?;
                    let objective = match objective.parse::<Objective>()? {
                        Objective::WorstCaseSim { refine_tol, .. } => Objective::WorstCaseSim {
                            samples_per_unit: samples,
                            refine_tol,
                        },
                        o => o,
                    };
                    OptConfig {
                        family,
                        space: if ranges.is_empty() {
                            default_space(family)
                        } else {
                            ranges
                        },
                        objective,
                        refine: !no_refine,
                        refine_tol,
                        threads,
                    }
                }
            };
            let r = run_config(&cfg)?;
            emit(&out, &r.to_json(), stdout)
        }
    }
}

/// Entry point for the binary: parses `std::env::args`, runs, and maps
/// failures to exit status 2 (bad input) or 1 (I/O).
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("evacsim: {e}");
            ExitCode::from(e.status())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("evacsim").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let mut buf = Vec::new();
        run(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn param_parsing() {
        assert_eq!(parse_param("z=0.7").unwrap(), ("z".into(), 0.7));
        assert!(parse_param("z0.7").is_err());
        assert!(parse_param("z=abc").is_err());
        assert!(parse_param("=1").is_err());
        assert!(parse_param("z=inf").is_err());
        let r = parse_range("p=0.1:0.2:0.01").unwrap();
        assert_eq!((r.lo, r.hi, r.step), (0.1, 0.2, 0.01));
        assert!(parse_range("p=0.1:0.2").is_err());
    }

    #[test]
    fn evaluate_at_vertex() {
        let out = run_args(&[
            "evaluate",
            "--shape",
            "triangle",
            "--k",
            "2",
            "--protocol",
            "detour1",
            "--param",
            "z=0.70745",
            "--exit-at-vertex",
            "B",
        ])
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["evac_time"].as_f64().unwrap() - 2.3866).abs() < 5e-4);
    }

    #[test]
    fn invalid_parameter_is_input_error() {
        let e = run_args(&["build", "--protocol", "detour1", "--param", "z=0.3"]).unwrap_err();
        assert_eq!(e.status(), 2);
        assert!(e.to_string().contains("z"));
        let e = run_args(&["build", "--protocol", "detour1"]).unwrap_err();
        assert_eq!(e.status(), 2);
    }

    #[test]
    fn optimize_empty_grid_is_input_error() {
        let e = run_args(&[
            "optimize",
            "--shape",
            "square",
            "--protocol",
            "square-detour",
            "--range",
            "p=0.3:0.4:0.1",
            "--range",
            "q=0.3:0.4:0.1",
        ])
        .unwrap_err();
        assert_eq!(e.status(), 2);
    }
}
