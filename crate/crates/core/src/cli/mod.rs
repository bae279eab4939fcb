//! Command-line front end. Every command produces a [`VerificationReport`]
//! except `graph`, which exports the concurrence graph itself.

pub mod report;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use report::{Status, VerificationReport};
use verify::Outcome;

use crate::error::{Error, Result};
use crate::geometry::{counts, Space, SpaceDesc, MAX_SPACE_LINES};
use crate::gf::Field;
use crate::maps::{check_isomorphism, edge_count_lemma, reconstruct_point_map, LineMap, MapFile, Mode};
use crate::pluecker::{CliqueRecord, ConcurrenceGraph};

#[derive(Debug, Parser)]
#[command(name = "pluecker", version, about = "Plücker spaces of finite affine spaces AG(n, q)")]
#[command(disable_help_flag = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, action = ArgAction::Help, global = true, help = "Print help")]
    help: Option<bool>,
}

// `-h` is the field degree, so help is only available as `--help`.
#[derive(Debug, Clone, Copy, Args)]
pub struct Instance {
    /// Dimension of the affine space
    #[arg(short = 'n', default_value_t = 3)]
    pub n: u32,
    /// Characteristic of the coordinate field
    #[arg(short = 'p', default_value_t = 2)]
    pub p: u32,
    /// Degree of the coordinate field over its prime field
    #[arg(short = 'h', default_value_t = 1)]
    pub h: u32,
}

impl Instance {
    fn desc(&self) -> SpaceDesc {
        SpaceDesc { n: self.n, p: self.p, h: self.h }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SecondInstance {
    /// Dimension of the second space
    #[arg(short = 'N', default_value_t = 2)]
    pub n2: u32,
    /// Characteristic of the second space
    #[arg(short = 'P', default_value_t = 3)]
    pub p2: u32,
    /// Field degree of the second space
    #[arg(short = 'H', default_value_t = 1)]
    pub h2: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report (breaks byte-identical output)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Theorem1,
    Theorem2,
    Theorem3,
    #[value(name = "theorem4-count")]
    Theorem4Count,
    Stars,
    Cliques,
    PlaneOrder,
    PluckerGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    PlaneTransposition,
    NonstarClique,
    PlaneScramble,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point, line, star, pencil and quotient counts of AG(n, p^h)
    #[command(disable_help_flag = true)]
    SpaceInfo {
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite
    #[command(disable_help_flag = true)]
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        second: SecondInstance,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        /// Largest dimension for theorem4-count
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        /// Largest field order for theorem4-count
        #[arg(long, default_value_t = 9)]
        q_max: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Build a counterexample and certify it
    #[command(disable_help_flag = true)]
    Counterexample {
        #[arg(value_enum)]
        kind: Construction,
        #[command(flatten)]
        instance: Instance,
        #[command(flatten)]
        output: Output,
    },
    /// Check a line map given as a JSON map file
    #[command(disable_help_flag = true)]
    CheckMap {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Export the concurrence graph as an adjacency list, or its maximal
    /// cliques as JSON
    #[command(disable_help_flag = true)]
    Graph {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        cliques: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of a command: the bytes to emit, where to put them and the exit code.
pub struct Rendered {
    pub text: String,
    pub out: Option<PathBuf>,
    pub code: u8,
}

fn space_of(desc: SpaceDesc) -> Result<Space> {
    Space::from_desc(desc)
}

fn finish(
    claim: &str,
    instance: Vec<SpaceDesc>,
    seed: u64,
    outcome: Result<Outcome>,
    started: Instant,
    output: &Output,
) -> Rendered {
    let mut report = match outcome {
        Ok((status, witnesses)) => VerificationReport::new(claim, instance, seed, status, witnesses),
        Err(e) => VerificationReport::error(claim, instance, seed, &e),
    };
    if output.timing {
        report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Rendered { text, out: output.out.clone(), code: report.status.exit_code() }
}

fn space_info(desc: SpaceDesc) -> Result<Outcome> {
    if desc.n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let field = Field::new(desc.p, desc.h)?;
    let (n, q) = (desc.n, field.order() as u128);
    let lines = counts::lines(n, q);
    let mut w = json!({
        "field": field.to_string(),
        "points": counts::points(n, q),
        "lines": lines,
        "star": counts::star(n, q),
        "pencil": q + 1,
        "parallel_classes": counts::star(n, q),
        "parallel_class_size": counts::parallel_class(n, q),
        "planes": counts::planes(n, q),
        "planes_through_point": counts::planes_through_point(n, q),
        "concurrence_edges": counts::concurrence_edges(n, q),
        "enumerable": lines <= MAX_SPACE_LINES,
    });
    if n >= 2 {
        w["quotient"] = json!({
            "points": counts::star(n, q),
            "lines": counts::planes_through_point(n, q),
            "line_size": q + 1,
            "projective_dimension": n - 1,
        });
    }
    Ok((Status::Pass, w))
}

fn check_map(path: &PathBuf) -> (Vec<SpaceDesc>, Result<Outcome>) {
    let file = match std::fs::read_to_string(path) {
        Ok(t) => MapFile::from_json(&t),
        Err(e) => Err(Error::Io(format!("{}: {e}", path.display()))),
    };
    let file = match file {
        Ok(f) => f,
        Err(e) => return (Vec::new(), Err(e)),
    };
    let instance = vec![file.src, file.dst];
    let run = || -> Result<Outcome> {
        let src = space_of(file.src)?;
        let dst = space_of(file.dst)?;
        let f = LineMap::from_file(&file, &src, &dst)?;
        let iso = check_isomorphism(&f);
        let lemma = edge_count_lemma(&f);
        let kappa = reconstruct_point_map(&f, Mode::Kappa);
        let induced = kappa.is_ok();
        Ok((
            Status::from_bool(induced),
            json!({
                "isomorphism": iso,
                "edge_count_lemma": lemma,
                "reconstruction": match &kappa {
                    Ok(m) => serde_json::to_value(m.to_file()).expect("map file serializes"),
                    Err(e) => verify::error_witness(e),
                },
            }),
        ))
    };
    (instance, run())
}

fn graph_export(desc: SpaceDesc, cliques: bool) -> Result<String> {
    let space = space_of(desc)?;
    let graph = ConcurrenceGraph::build(&space)?;
    if !cliques {
        return Ok(graph.export_text());
    }
    let records: Vec<CliqueRecord> =
        graph.enumerate_maximal_cliques()?.iter().map(|c| CliqueRecord::new(&space, c)).collect();
    let mut s = serde_json::to_string_pretty(&records).expect("cliques serialize");
    s.push('\n');
    Ok(s)
}

pub fn run(cli: Cli) -> Rendered {
    let started = Instant::now();
    match cli.command {
        Command::SpaceInfo { instance, output } => {
            let d = instance.desc();
            finish("space-info", vec![d], 0, space_info(d), started, &output)
        }
        Command::Verify { claim, instance, second, seed, trials, n_max, q_max, output } => {
            let d = instance.desc();
            let trials = trials as usize;
            let (name, descs, outcome) = match claim {
                Claim::Theorem1 => ("theorem1", vec![d], space_of(d).and_then(|s| verify::theorem1(&s, seed, trials))),
                Claim::Theorem2 => ("theorem2", vec![d], space_of(d).and_then(|s| verify::theorem2(&s, seed, trials))),
                Claim::Theorem3 => ("theorem3", vec![d], space_of(d).and_then(|s| verify::theorem3(&s, seed, trials))),
                Claim::Theorem4Count => ("theorem4-count", Vec::new(), Ok(verify::theorem4_count(n_max, q_max))),
                Claim::Stars => ("stars", vec![d], space_of(d).and_then(|s| verify::stars(&s))),
                Claim::Cliques => ("cliques", vec![d], space_of(d).and_then(|s| verify::cliques(&s))),
                Claim::PlaneOrder => {
                    let d2 = SpaceDesc { n: second.n2, p: second.p2, h: second.h2 };
                    let outcome = space_of(d).and_then(|a| space_of(d2).and_then(|b| verify::plane_order(&a, &b)));
                    ("plane-order", vec![d, d2], outcome)
                }
                Claim::PluckerGroup => ("plucker-group", vec![d], space_of(d).and_then(|s| verify::plucker_group(&s))),
            };
            finish(name, descs, seed, outcome, started, &output)
        }
        Command::Counterexample { kind, instance, output } => {
            let d = instance.desc();
            let (name, outcome) = match kind {
                Construction::PlaneTransposition => {
                    ("plane-transposition", space_of(d).and_then(|s| verify::plane_transposition(&s)))
                }
                Construction::NonstarClique => ("nonstar-clique", space_of(d).and_then(|s| verify::nonstar_clique(&s))),
                Construction::PlaneScramble => ("plane-scramble", space_of(d).and_then(|s| verify::plane_scramble(&s))),
            };
            finish(name, vec![d], 0, outcome, started, &output)
        }
        Command::CheckMap { map, output } => {
            let (descs, outcome) = check_map(&map);
            finish("check-map", descs, 0, outcome, started, &output)
        }
        Command::Graph { instance, cliques, out } => match graph_export(instance.desc(), cliques) {
            Ok(text) => Rendered { text, out, code: 0 },
            Err(e) => {
                let report = VerificationReport::error("graph", vec![instance.desc()], 0, &e);
                Rendered { text: report.to_json(), out, code: Status::Error.exit_code() }
            }
        },
    }
}

/// Parses the process arguments, runs the command and writes its output.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let rendered = run(cli);
    match &rendered.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered.text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", rendered.text),
    }
    ExitCode::from(rendered.code)
}
