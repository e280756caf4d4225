//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error (invalid input, ties, limits),
//! 2 usage error (bad arguments, unreadable input), 3 when `verify`
//! finds a failing check.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::attribute_models::{
    count_1attribute, GeometricSpec, OneAttributeSpec, DEFAULT_MAX_BITS, DEFAULT_START_BITS,
};
use crate::counting::{
    count_independent_sets, count_stable_matchings, stable_matchings, BipartiteGraph,
};
use crate::error::Error;
use crate::gale_shapley::{blocking_pairs, propose_optimal, Side};
use crate::instance::{Instance, Matching};
use crate::reductions::{
    gen_2euclidean, gen_3attribute, gen_partial_lists, verify_reduction_with_bits, Model,
    Permutation,
};
use crate::rotations::{
    find_all_rotations, format_rotations, hasse_diagram, hasse_dot, rotation_poset,
};

pub const MAX_BITS_VAR: &str = "STABLECOUNT_MAX_BITS";

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "stablecount",
    version,
    about = "Stable matchings, rotation posets and exact counting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Men,
    Women,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Lists,
    Attr3,
    Euclid2,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Lists => Model::Lists,
            ModelArg::Attr3 => Model::Attr3,
            ModelArg::Euclid2 => Model::Euclid2,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Proposal-optimal stable matching
    Solve {
        #[arg(long, value_enum, default_value = "men")]
        side: SideArg,
        input: String,
    },
    /// Blocking pairs of the "pair" lines appended to an instance
    Blocking { input: String },
    /// Every rotation, in discovery order
    Rotations { input: String },
    /// Rotation poset as rotations plus Hasse edges, or DOT
    Poset {
        #[arg(long)]
        dot: bool,
        input: String,
    },
    /// Number of stable matchings
    Count { input: String },
    /// Stable matchings, man-optimal first
    Enumerate {
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        input: String,
    },
    /// Stable-matching count of a one-attribute spec
    #[command(name = "count-1d")]
    Count1d { input: String },
    /// Number of independent sets of a bipartite graph
    Isets { input: String },
    /// Matching instance (or geometric spec) built from a bipartite graph
    Gen {
        #[arg(long, value_enum, default_value = "lists")]
        model: ModelArg,
        #[arg(long)]
        tau: Option<String>,
        input: String,
    },
    /// Checks the construction for one graph file or a directory of them
    Verify {
        #[arg(long, value_enum, default_value = "lists")]
        model: ModelArg,
        input: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult = std::result::Result<(i32, String), Failure>;

/// Runs one invocation, reading standard input when the input is `-`.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_inner(argv, &mut || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    })
}

/// As [`run`], with `stdin` standing in for standard input.
pub fn run_with_stdin<I, S>(argv: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_inner(argv, &mut || Ok(stdin.to_string()))
}

fn run_inner<I, S>(argv: I, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(2, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome::fail(2, format!("error: {}\n", msg)),
        Err(Failure::Domain(e)) => Outcome::fail(1, format!("error: {}\n", e)),
    }
}

fn max_bits() -> std::result::Result<u32, Failure> {
    match std::env::var(MAX_BITS_VAR) {
        Err(_) => Ok(DEFAULT_MAX_BITS),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(b) if b >= DEFAULT_START_BITS => Ok(b),
            _ => Err(Failure::Usage(format!(
                "{} must be an integer >= {}, got {:?}",
                MAX_BITS_VAR, DEFAULT_START_BITS, v
            ))),
        },
    }
}

fn read_input(
    path: &str,
    stdin: &mut dyn FnMut() -> std::io::Result<String>,
) -> std::result::Result<String, Failure> {
    let read = if path == "-" {
        stdin()
    } else {
        std::fs::read_to_string(path)
    };
    read.map_err(|e| Failure::Usage(format!("cannot read {}: {}", path, e)))
}

fn first_token(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
}

// Instances arrive either as preference lists or as a geometric spec.
fn load_instance(text: &str) -> std::result::Result<Instance, Failure> {
    if first_token(text) == Some("model") {
        Ok(GeometricSpec::parse(text)?.to_instance(max_bits()?)?)
    } else {
        Ok(Instance::parse(text)?)
    }
}

fn execute(command: Command, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> CliResult {
    let mut out = String::new();
    match command {
        Command::Solve { side, input } => {
            let inst = load_instance(&read_input(&input, stdin)?)?;
            let side = match side {
                SideArg::Men => Side::MenPropose,
                SideArg::Women => Side::WomenPropose,
            };
            out.push_str(&propose_optimal(&inst, side).to_string());
        }
        Command::Blocking { input } => {
            let text = read_input(&input, stdin)?;
            let (pairs, rest): (Vec<&str>, Vec<&str>) =
                text.lines().partition(|l| first_token(l) == Some("pair"));
            let inst = load_instance(&rest.join("\n"))?;
            let matching = Matching::parse(&pairs.join("\n"))?;
            if matching.n() != inst.n() {
                return Err(Error::invalid(format!(
                    "matching has {} pairs, instance has n = {}",
                    matching.n(),
                    inst.n()
                ))
                .into());
            }
            let blocking = blocking_pairs(&inst, &matching);
            if blocking.is_empty() {
                out.push_str("stable\n");
            }
            for (m, w) in blocking {
                writeln!(out, "block {} {}", m, w).unwrap();
            }
        }
        Command::Rotations { input } => {
            let inst = load_instance(&read_input(&input, stdin)?)?;
            out.push_str(&format_rotations(&find_all_rotations(&inst).0));
        }
        Command::Poset { dot, input } => {
            let inst = load_instance(&read_input(&input, stdin)?)?;
            let poset = rotation_poset(&inst)?;
            if dot {
                out.push_str(&hasse_dot(&poset));
            } else {
                out.push_str(&poset.rotations_text());
                for (a, b) in hasse_diagram(&poset) {
                    writeln!(out, "cover {} {}", a + 1, b + 1).unwrap();
                }
            }
        }
        Command::Count { input } => {
            let inst = load_instance(&read_input(&input, stdin)?)?;
            writeln!(out, "{}", count_stable_matchings(&inst)?).unwrap();
        }
        Command::Enumerate { limit, input } => {
            let inst = load_instance(&read_input(&input, stdin)?)?;
            let total = count_stable_matchings(&inst)?;
            for (k, m) in stable_matchings(&inst)?.take(limit).enumerate() {
                writeln!(out, "matching {}", k + 1).unwrap();
                out.push_str(&m.to_string());
            }
            writeln!(out, "total {}", total).unwrap();
        }
        Command::Count1d { input } => {
            let spec = match GeometricSpec::parse(&read_input(&input, stdin)?)? {
                GeometricSpec::Dot(s) => OneAttributeSpec::from_attribute_spec(&s)?,
                GeometricSpec::Euclid(_) => {
                    return Err(
                        Error::invalid("count-1d expects a \"model dot 1 <n>\" spec").into(),
                    )
                }
            };
            writeln!(out, "{}", count_1attribute(&spec)?).unwrap();
        }
        Command::Isets { input } => {
            let graph = BipartiteGraph::parse(&read_input(&input, stdin)?)?;
            writeln!(out, "{}", count_independent_sets(&graph)?).unwrap();
        }
        Command::Gen { model, tau, input } => {
            let graph = BipartiteGraph::parse(&read_input(&input, stdin)?)?;
            let model = Model::from(model);
            if tau.is_some() && model != Model::Lists {
                return Err(Failure::Usage("--tau applies to --model lists only".into()));
            }
            match model {
                Model::Lists => {
                    let tau = match tau {
                        Some(t) => Permutation::parse(&t)?,
                        None => Permutation::identity(graph.edges().len()),
                    };
                    out.push_str(&gen_partial_lists(&graph, &tau)?.to_string());
                }
                Model::Attr3 => {
                    out.push_str(&GeometricSpec::Dot(gen_3attribute(&graph)?).to_string())
                }
                Model::Euclid2 => {
                    out.push_str(&GeometricSpec::Euclid(gen_2euclidean(&graph)?).to_string())
                }
            }
        }
        Command::Verify { model, input } => return verify(model.into(), &input, stdin),
    }
    Ok((0, out))
}

fn graph_files(dir: &Path) -> std::result::Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", dir.display(), e)))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "bis"))
        .collect();
    files.sort();
    Ok(files)
}

fn verify(
    model: Model,
    input: &str,
    stdin: &mut dyn FnMut() -> std::io::Result<String>,
) -> CliResult {
    let bits = max_bits()?;
    if input != "-" && Path::new(input).is_dir() {
        let files = graph_files(Path::new(input))?;
        let reports: Vec<(String, bool)> = files
            .par_iter()
            .map(|path| {
                let name = path
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned();
                let result = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read: {}", e))
                    .and_then(|t| BipartiteGraph::parse(&t).map_err(|e| e.to_string()))
                    .and_then(|g| {
                        verify_reduction_with_bits(&g, model, bits).map_err(|e| e.to_string())
                    });
                match result {
                    Ok(r) => (format!("== {}\n{}", name, r), r.all_ok()),
                    Err(e) => (format!("== {}\nerror: {}\n", name, e), false),
                }
            })
            .collect();
        let failed = reports.iter().filter(|r| !r.1).count();
        let mut out: String = reports.into_iter().map(|r| r.0).collect();
        writeln!(out, "verified {} files, {} failed", files.len(), failed).unwrap();
        return Ok((if failed == 0 { 0 } else { 3 }, out));
    }
    let graph = BipartiteGraph::parse(&read_input(input, stdin)?)?;
    let report = verify_reduction_with_bits(&graph, model, bits)?;
    Ok((if report.all_ok() { 0 } else { 3 }, report.to_string()))
}
