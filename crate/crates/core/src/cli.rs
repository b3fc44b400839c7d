//! Command-line driver: `check`, `decompose`, `verify` and `linalg` jobs
//! reading and writing single JSON documents.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{Classification, ComplexDoc, SimplicialComplex, VertexRecord};
use crate::engine::{decompose_projective, Decomposer, PairSpec, ProjectivePair, TraceNode};
use crate::error::{Error, Result};
use crate::homotopy::ProductDoc;
use crate::linalg::{self, IdempotentSplit, Matrix};
use crate::oracle::verify_against_oracle;
use crate::series::DEFAULT_CUTOFF;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_RANDOM: usize = 500;
const MAX_RANDOM_DIM: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "polyloop", version, about = "Loop-space decompositions of polyhedral products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Check,
    Decompose,
    Verify,
    Linalg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a complex and list its vertex neighbourhoods.
    Check(JobArgs),
    /// Decompose the loop space of (CA, A)^K.
    Decompose(JobArgs),
    /// Cross-check a decomposition, or run the idempotent-matrix suite.
    Verify(JobArgs),
    /// Split idempotent integer matrices.
    Linalg(JobArgs),
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Complex (`{"m", "facets"}`) or matrices (`{"matrices", "vectors"}`) file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// moment-angle | disks:N | custom:PATH | projective:N[/M] (N may be `inf`).
    #[arg(long, default_value = "moment-angle")]
    pub pairs: String,
    #[arg(long, default_value_t = DEFAULT_CUTOFF as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cutoff: u64,
    /// Include the derivation tree.
    #[arg(long)]
    pub trace: bool,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run on integer matrices instead of a complex.
    #[arg(long)]
    pub linalg: bool,
    /// Number of random matrices.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Split the top-level complex at this vertex.
    #[arg(long)]
    pub vertex: Option<usize>,
}

/// A fully parsed job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: CommandKind,
    pub args: JobArgs,
}

impl From<Cli> for JobSpec {
    fn from(cli: Cli) -> Self {
        let (command, args) = match cli.command {
            Command::Check(a) => (CommandKind::Check, a),
            Command::Decompose(a) => (CommandKind::Decompose, a),
            Command::Verify(a) => (CommandKind::Verify, a),
            Command::Linalg(a) => (CommandKind::Linalg, a),
        };
        JobSpec { command, args }
    }
}

/// Pair presets before they are sized to a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairsArg {
    MomentAngle,
    Disks(usize),
    Custom(PathBuf),
    Projective(ProjectivePair),
}

impl std::str::FromStr for PairsArg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPairs(format!("unrecognised pair preset `{s}`"));
        if s == "moment-angle" {
            return Ok(PairsArg::MomentAngle);
        }
        if let Some(n) = s.strip_prefix("disks:") {
            return n.parse().map(PairsArg::Disks).map_err(|_| bad());
        }
        if let Some(p) = s.strip_prefix("custom:") {
            return Ok(PairsArg::Custom(PathBuf::from(p)));
        }
        if let Some(spec) = s.strip_prefix("projective:") {
            let dim = |t: &str| -> Result<Option<usize>> {
                if t == "inf" {
                    Ok(None)
                } else {
                    t.parse().map(Some).map_err(|_| bad())
                }
            };
            let pair = match spec.split_once('/') {
                None => ProjectivePair::Based { n: dim(spec)? },
                Some((n, m)) => ProjectivePair::Sub { n: dim(n)?, m: m.parse().map_err(|_| bad())? },
            };
            return Ok(PairsArg::Projective(pair));
        }
        Err(bad())
    }
}

#[derive(Deserialize)]
struct CustomPairsDoc {
    suspensions: Vec<Vec<usize>>,
}

enum ResolvedPairs {
    Cells(PairSpec),
    Projective(ProjectivePair),
}

fn resolve_pairs(arg: &PairsArg, m: usize) -> Result<ResolvedPairs> {
    Ok(ResolvedPairs::Cells(match arg {
        PairsArg::MomentAngle => PairSpec::moment_angle(m),
        PairsArg::Disks(n) => PairSpec::disks(*n, m)?,
        PairsArg::Custom(path) => {
            let doc: CustomPairsDoc = read_json(path)?;
            if doc.suspensions.len() != m {
                return Err(Error::PairMismatch { given: doc.suspensions.len(), m });
            }
            PairSpec::from_suspension_dims(&doc.suspensions)?
        }
        PairsArg::Projective(p) => return Ok(ResolvedPairs::Projective(*p)),
    }))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_complex(args: &JobArgs) -> Result<SimplicialComplex> {
    let path = args.input.as_ref().ok_or_else(|| Error::Input("--input is required".into()))?;
    SimplicialComplex::try_from(read_json::<ComplexDoc>(path)?)
}

#[derive(Serialize)]
struct CheckDoc {
    complex: ComplexDoc,
    classification: Classification,
    admissible: bool,
    minimal_non_faces: Vec<Vec<usize>>,
    vertices: Vec<VertexRecord>,
}

#[derive(Serialize)]
struct DecomposeDoc {
    complex: ComplexDoc,
    pairs: String,
    #[serde(flatten)]
    product: ProductDoc,
    #[serde(with = "crate::bigjson::int_vec")]
    expansion: Vec<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Arc<TraceNode>>,
}

#[derive(Deserialize, Default)]
struct MatricesDoc {
    #[serde(default, with = "crate::linalg::vec_of_matrices")]
    matrices: Vec<Matrix>,
    #[serde(default, with = "crate::linalg::vec_of_int_vec")]
    vectors: Vec<Vec<BigInt>>,
}

#[derive(Serialize)]
struct SplitDoc {
    #[serde(with = "crate::linalg::vec_of_int_vec")]
    matrix: Matrix,
    #[serde(flatten)]
    split: IdempotentSplit,
    #[serde(with = "crate::bigjson::int")]
    determinant: BigInt,
}

#[derive(Serialize)]
struct LinalgDoc {
    splits: Vec<SplitDoc>,
    bezout: Vec<linalg::Bezout>,
}

#[derive(Serialize)]
struct MatrixSuiteDoc {
    passed: bool,
    checks: Vec<linalg::SplitCheck>,
    bezout: Vec<linalg::Bezout>,
}

/// Output document and exit status of a job.
pub struct Outcome {
    pub document: serde_json::Value,
    pub exit_code: i32,
}

fn to_value<T: Serialize>(doc: &T) -> Result<serde_json::Value> {
    serde_json::to_value(doc).map_err(|e| Error::InternalCheck(format!("serialization: {e}")))
}

pub fn execute(job: &JobSpec) -> Result<Outcome> {
    let args = &job.args;
    let cutoff = args.cutoff as usize;
    match job.command {
        CommandKind::Check => {
            let k = read_complex(args)?;
            let classification = k.classify();
            let admissible = classification.k_skeleton_of_flag.is_some();
            let doc = CheckDoc {
                complex: k.to_doc(),
                classification,
                admissible,
                minimal_non_faces: k.minimal_non_faces(),
                vertices: k.neighbors_and_domination(),
            };
            Ok(Outcome { document: to_value(&doc)?, exit_code: if admissible { 0 } else { 2 } })
        }
        CommandKind::Decompose => {
            let k = read_complex(args)?;
            let pairs_arg: PairsArg = args.pairs.parse()?;
            let (product, trace) = match resolve_pairs(&pairs_arg, k.m())? {
                ResolvedPairs::Cells(pairs) => {
                    let mut d = Decomposer::new(pairs, cutoff);
                    if let Some(v) = args.vertex {
                        d = d.with_top_vertex(v);
                    }
                    d.run(&k)?
                }
                ResolvedPairs::Projective(p) => decompose_projective(&k, &vec![p; k.m()], cutoff)?,
            };
            let doc = DecomposeDoc {
                complex: k.to_doc(),
                pairs: args.pairs.clone(),
                expansion: product.series().expand(cutoff),
                product: product.to_doc(),
                trace: args.trace.then_some(trace),
            };
            Ok(Outcome { document: to_value(&doc)?, exit_code: 0 })
        }
        CommandKind::Verify if args.linalg => match &args.input {
            Some(path) => {
                let doc: MatricesDoc = read_json(path)?;
                let checks: Vec<_> = doc.matrices.iter().map(linalg::check_idempotent).collect();
                let bezout = doc.vectors.iter().map(|v| linalg::primitive_bezout(v)).collect::<Result<Vec<_>>>()?;
                let passed = checks.iter().all(|c| c.passed);
                let out = MatrixSuiteDoc { passed, checks, bezout };
                Ok(Outcome { document: to_value(&out)?, exit_code: if passed { 0 } else { 3 } })
            }
            None => {
                let report =
                    linalg::run_idempotent_suite(args.random.unwrap_or(DEFAULT_RANDOM), MAX_RANDOM_DIM, args.seed);
                Ok(Outcome { document: to_value(&report)?, exit_code: if report.passed { 0 } else { 3 } })
            }
        },
        CommandKind::Verify => {
            let k = read_complex(args)?;
            let pairs = match resolve_pairs(&args.pairs.parse()?, k.m())? {
                ResolvedPairs::Cells(p) => p,
                ResolvedPairs::Projective(_) => {
                    return Err(Error::InvalidPairs("verify supports moment-angle, disks and custom pairs".into()))
                }
            };
            if k.classify().k_skeleton_of_flag.is_none() {
                return Err(Error::NotFlagSkeleton);
            }
            let report = verify_against_oracle(&k, &pairs, cutoff);
            Ok(Outcome { document: to_value(&report)?, exit_code: if report.passed { 0 } else { 3 } })
        }
        CommandKind::Linalg => {
            let doc: MatricesDoc = match (&args.input, args.random) {
                (Some(path), _) => read_json(path)?,
                (None, Some(n)) => {
                    use rand::{Rng, SeedableRng};
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
                    let matrices = (0..n)
                        .map(|_| {
                            let size = rng.gen_range(1..=MAX_RANDOM_DIM);
                            linalg::random_idempotent(size, &mut rng)
                        })
                        .collect();
                    MatricesDoc { matrices, vectors: Vec::new() }
                }
                (None, None) => return Err(Error::Input("--input or --random is required".into())),
            };
            let mut splits = Vec::new();
            for a in doc.matrices {
                let split = linalg::idempotent_split(&a)?;
                let determinant = split.determinant();
                splits.push(SplitDoc { matrix: a, split, determinant });
            }
            let bezout = doc.vectors.iter().map(|v| linalg::primitive_bezout(v)).collect::<Result<Vec<_>>>()?;
            Ok(Outcome { document: to_value(&LinalgDoc { splits, bezout })?, exit_code: 0 })
        }
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a str,
    message: String,
}

/// Parses `argv`, runs the job, writes the document, and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let job = JobSpec::from(cli);
    match execute(&job) {
        Ok(outcome) => {
            let mut text = serde_json::to_string_pretty(&outcome.document).expect("JSON values serialize");
            text.push('\n');
            match &job.args.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        return report_error(&Error::Input(format!("{}: {e}", path.display())));
                    }
                }
                None => print!("{text}"),
            }
            outcome.exit_code
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    let doc = ErrorDoc { error: e.code(), message: e.to_string() };
    eprintln!("{}", serde_json::to_string(&doc).expect("error document serializes"));
    e.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_presets_parse() {
        assert_eq!("moment-angle".parse::<PairsArg>().unwrap(), PairsArg::MomentAngle);
        assert_eq!("disks:3".parse::<PairsArg>().unwrap(), PairsArg::Disks(3));
        assert_eq!("custom:a.json".parse::<PairsArg>().unwrap(), PairsArg::Custom("a.json".into()));
        assert_eq!(
            "projective:inf".parse::<PairsArg>().unwrap(),
            PairsArg::Projective(ProjectivePair::Based { n: None })
        );
        assert_eq!(
            "projective:4/1".parse::<PairsArg>().unwrap(),
            PairsArg::Projective(ProjectivePair::Sub { n: Some(4), m: 1 })
        );
        assert!("disks:x".parse::<PairsArg>().is_err());
        assert!("spheres".parse::<PairsArg>().is_err());
    }

    #[test]
    fn cutoff_zero_rejected() {
        assert!(Cli::try_parse_from(["polyloop", "decompose", "--cutoff", "0"]).is_err());
    }
}
