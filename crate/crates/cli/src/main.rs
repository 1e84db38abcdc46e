use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilpath::criteria::{is_f_solvable, ZeroSpec};
use nilpath::graph::{build_graph, profile_chain};
use nilpath::linalg::nilpotent_profile;
use nilpath::path::{connect_roots, construct_root, verify_with_cap, RootPath, VerifyMode};
use nilpath::profile::DEFAULT_SIZE_CAP;
use nilpath::{Error, Matrix, Profile, Scalar};
use serde_json::{json, Value};

const SIZE_CAP_VAR: &str = "NILPATH_SIZE_CAP";

#[derive(Parser)]
#[command(name = "nilpath", version, about = "Exact p-th roots of nilpotent matrices and certified paths between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan profile of a nilpotent matrix
    Profile {
        /// Matrix JSON file, or - for stdin
        matrix: String,
    },
    /// A p-th root of a nilpotent matrix
    Root {
        #[arg(long)]
        p: usize,
        matrix: String,
        /// Requested root profile, e.g. "3:2"
        #[arg(long)]
        profile: Option<String>,
    },
    /// Profile graph of all p-th root profiles of a target
    Graph {
        #[arg(long)]
        p: usize,
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        matrix: Option<String>,
        #[arg(long)]
        profile: Option<String>,
        /// Emit Graphviz DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Chain of p-adjacent profiles between two root profiles
    Chain {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Path between two p-th roots of A, with its certificate
    Connect {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "sampled")]
        mode: VerifyMode,
    },
    /// Evaluate a path at a rational parameter
    EvalPath {
        path: String,
        #[arg(long)]
        t: String,
    },
    /// Re-verify a path
    Verify {
        path: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "sampled")]
        mode: VerifyMode,
    },
    /// Solvability of f(X) = N from the zero multiplicities of f
    Solvable {
        #[arg(long)]
        zeros: String,
        /// f also has a zero of infinite multiplicity
        #[arg(long)]
        inf: bool,
        #[arg(long)]
        profile: String,
    },
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read_source(source: &str) -> Result<String, Failure> {
    if source == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(source).map_err(|e| Failure::Input(format!("{source}: {e}")))
    }
}

fn read_json(source: &str) -> Result<Value, Failure> {
    serde_json::from_str(&read_source(source)?).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn read_matrix(source: &str) -> Result<Matrix, Failure> {
    serde_json::from_value(read_json(source)?).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

/// A bare path, or `connect` output carrying one under `path`.
fn read_path(source: &str) -> Result<RootPath, Failure> {
    let mut value = read_json(source)?;
    if let Some(inner) = value.get_mut("path") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn parse_profile(s: &str) -> Result<Profile, Failure> {
    Ok(s.parse::<Profile>()?)
}

fn size_cap() -> Result<usize, Failure> {
    match std::env::var(SIZE_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("{SIZE_CAP_VAR}={v} is not a size"))),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Profile { matrix } => {
            let m = read_matrix(&matrix)?;
            let profile = nilpotent_profile(&m)?;
            if !m.is_nilpotent()? {
                return Err(Error::NotNilpotent.into());
            }
            Ok((pretty(&json!({ "profile": profile, "text": profile.to_string() })), true))
        }
        Command::Root { p, matrix, profile } => {
            let m = read_matrix(&matrix)?;
            let requested = profile.as_deref().map(parse_profile).transpose()?;
            match construct_root(&m, p, requested.as_ref(), size_cap()?)? {
                Some(x) => Ok((pretty(&x), true)),
                None => Ok((pretty(&json!({ "exists": false })), false)),
            }
        }
        Command::Graph { p, matrix, profile, dot } => {
            let target = match (matrix, profile) {
                (Some(src), _) => nilpotent_profile(&read_matrix(&src)?)?,
                (None, Some(s)) => parse_profile(&s)?,
                (None, None) => return Err(Failure::Input("one of --matrix or --profile is required".into())),
            };
            let graph = build_graph(&target, p, size_cap()?)?;
            if dot {
                Ok((graph.to_dot(), true))
            } else {
                Ok((pretty(&graph.report()), true))
            }
        }
        Command::Chain { p, from, to } => {
            let (from, to) = (parse_profile(&from)?, parse_profile(&to)?);
            match profile_chain(&from, &to, p) {
                Ok(chain) => Ok((pretty(&chain), true)),
                Err(Error::PowerMismatch(reason)) => {
                    Ok((pretty(&json!({ "chain": null, "reason": reason })), false))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Connect { p, a, x, y, samples, mode } => {
            let (a, x, y) = (read_matrix(&a)?, read_matrix(&x)?, read_matrix(&y)?);
            let path = connect_roots(&a, p, &x, &y, mode)?;
            let certificate = verify_with_cap(&path, samples, mode, size_cap()?)?;
            let ok = certificate.ok;
            Ok((pretty(&json!({ "path": path, "certificate": certificate })), ok))
        }
        Command::EvalPath { path, t } => {
            let path = read_path(&path)?;
            let t: Scalar = t.parse()?;
            if !t.is_real() {
                return Err(Failure::Input(format!("--t {t} is not real")));
            }
            Ok((pretty(&path.evaluate(t.re())?), true))
        }
        Command::Verify { path, samples, mode } => {
            let path = read_path(&path)?;
            let certificate = verify_with_cap(&path, samples, mode, size_cap()?)?;
            let ok = certificate.ok;
            Ok((pretty(&certificate), ok))
        }
        Command::Solvable { zeros, inf, profile } => {
            let spec = ZeroSpec::parse_list(&zeros, inf)?;
            let m = parse_profile(&profile)?;
            match is_f_solvable(&spec, &m, size_cap()?)? {
                Some(witness) => Ok((pretty(&json!({ "solvable": true, "witness": witness })), true)),
                None => Ok((pretty(&json!({ "solvable": false })), false)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, positive)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(io::stdout(), "{}", out.trim_end());
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_guard() { 3 } else { 2 })
        }
    }
}
