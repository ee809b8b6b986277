//! The `caterpillar-eh` command line.
//!
//! Exit codes: 0 success or verified witness, 1 verification failed, 2 the
//! engine got stuck, 64 usage or malformed input, 66 unreadable or unwritable
//! file, 70 the engine contradicted its own guarantee (a replay bundle is
//! written to stderr).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::engine::{
    max_feasible_epsilon, paper_epsilon, paper_p, run_trichotomy, EngineError, EngineParams, RunReport, Witness,
    WitnessDocument,
};
use crate::format::{parse_graph, to_edge_list};
use crate::graph::{Graph, VertexSet};
use crate::harness::{generate, run_batch, GenSpec, Leg, Model};
use crate::mass::{parse_weights, MassKind, MassProvider};
use crate::oracles::{
    brute_best_anticomplete, brute_induced_embedding, default_node_limit, exact_chromatic_number, verify_witness,
    OracleError,
};
use crate::ratio::{format_rational, from_usize, parse_rational, Rational};
use crate::trees::CaterpillarTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_STUCK: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 66;
pub const EXIT_VIOLATION: i32 = 70;

/// Largest block count tried when `--epsilon` is given without `--p`.
pub const DEFAULT_P_CAP: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "caterpillar-eh", version, about = "Certifying sparse strong Erdős–Hajnal search for caterpillar subdivisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the trichotomy and print a witness document.
    Certify(CertifyArgs),
    /// Print the least τ that fits the tree.
    FitTau {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Print p = 2^{τ²} and the matching ε exactly.
    Epsilon {
        #[arg(long)]
        tau: usize,
    },
    /// Check a witness document against a graph.
    Verify(VerifyArgs),
    /// Brute-force reference searches for small graphs.
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Certify with chromatic mass and compare χ of each side with ε·χ(G).
    ChiSplit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a graph and print it as an edge list.
    Gen(GenArgs),
    /// Run a batch experiment described by a JSON file.
    Batch {
        #[arg(long)]
        spec: PathBuf,
        /// Print a plain-text summary table to stderr as well.
        #[arg(long)]
        summary: bool,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    /// cardinality, weighted:FILE or chromatic
    #[arg(long, default_value = "cardinality")]
    mass: String,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    trace: bool,
    /// Randomizes the first vertex of each spire.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    epsilon: String,
    /// Defaults to the mass named in the witness document.
    #[arg(long)]
    mass: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleKind {
    Embed,
    Anticomplete,
    Chi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenModel {
    Gnp,
    Regular,
    HighGirth,
    CaterpillarSubdivision,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability p/q (gnp, high-girth).
    #[arg(long)]
    edge_p: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    girth: Option<usize>,
    #[arg(long)]
    spine: Option<usize>,
    /// Legs as AT:LEN pairs, comma separated, AT counted from 1.
    #[arg(long, default_value = "")]
    legs: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// JSON replay bundle for exit code 70.
    pub bundle: Option<String>,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into(), bundle: None }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError { code: EXIT_IO, message: format!("{}: {e}", path.display()), bundle: None }
    }
}

/// Runs the command line and returns the exit status. Documents go to `out`,
/// messages and replay bundles to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            if let Some(b) = &e.bundle {
                let _ = writeln!(err, "{b}");
            }
            e.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Certify(a) => certify(a, out),
        Command::FitTau { tree } => {
            let t = load_tree(&tree)?;
            emit(out, &t.fit_tau().to_string())?;
            Ok(EXIT_OK)
        }
        Command::Epsilon { tau } => epsilon(tau, out),
        Command::Verify(a) => verify(a, out),
        Command::Oracle { which, graph, tree } => oracle(which, &graph, tree.as_deref(), out),
        Command::ChiSplit { graph, tree, epsilon, p, seed } => chi_split(&graph, &tree, &epsilon, p, seed, out),
        Command::Gen(a) => gen(a, out),
        Command::Batch { spec, summary } => batch(&spec, summary, out, err),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<CaterpillarTree, CliError> {
    let g = load_graph(path)?;
    CaterpillarTree::new(g).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn rational_arg(text: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::usage(format!("{what}: {e}")))
}

fn load_mass(spec: &str, g: &Graph) -> Result<MassProvider, CliError> {
    match spec {
        "cardinality" => Ok(MassProvider::cardinality(g.n())),
        "chromatic" => MassProvider::chromatic(Arc::new(g.clone())).map_err(|e| CliError::usage(e.to_string())),
        _ => {
            let Some(file) = spec.strip_prefix("weighted:") else {
                return Err(CliError::usage(format!("unknown mass {spec:?}; use cardinality, weighted:FILE or chromatic")));
            };
            let path = Path::new(file);
            let weights = parse_weights(&read(path)?).map_err(|e| CliError::usage(format!("{file}: {e}")))?;
            if weights.len() != g.n() {
                return Err(CliError::usage(format!("{file} has {} weights for {} vertices", weights.len(), g.n())));
            }
            MassProvider::weighted(weights).map_err(|e| CliError::usage(format!("{file}: {e}")))
        }
    }
}

/// Resolves τ, ε and p. Without `--epsilon` the guaranteed constants are
/// used; with it, p defaults to the largest feasible value up to
/// [`DEFAULT_P_CAP`].
fn resolve_params(
    t: &CaterpillarTree,
    tau: Option<usize>,
    epsilon: Option<&str>,
    p: Option<usize>,
) -> Result<EngineParams, CliError> {
    let tau = tau.unwrap_or_else(|| t.fit_tau());
    if tau < t.fit_tau() {
        return Err(CliError::usage(format!("tau {tau} does not fit the tree (least fitting tau is {})", t.fit_tau())));
    }
    let bad = |e: crate::engine::ScheduleError| CliError::usage(e.to_string());
    match (epsilon, p) {
        (None, None) => EngineParams::paper(tau).map_err(|e| {
            CliError::usage(format!("{e}; pass --epsilon (and optionally --p) to explore off the guarantee"))
        }),
        (None, Some(p)) => EngineParams::exploratory(tau, max_feasible_epsilon(p, tau), p).map_err(bad),
        (Some(eps), p) => {
            let eps = rational_arg(eps, "--epsilon")?;
            let p = p.or_else(|| EngineParams::largest_feasible_p(tau, &eps, DEFAULT_P_CAP)).unwrap_or(2);
            EngineParams::exploratory(tau, eps, p).map_err(bad)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CertifyReplay {
    error: String,
    graph: String,
    tree: String,
    mass: String,
    tau: usize,
    epsilon: String,
    p: usize,
    seed: Option<u64>,
}

fn run_engine(
    g: &Graph,
    m: &MassProvider,
    mass_spec: &str,
    t: &CaterpillarTree,
    params: &EngineParams,
) -> Result<RunReport, CliError> {
    run_trichotomy(g, m, t, params).map_err(|e| match e {
        EngineError::TheoremViolation(msg) => {
            let bundle = CertifyReplay {
                error: msg.clone(),
                graph: to_edge_list(g),
                tree: to_edge_list(t.graph()),
                mass: mass_spec.to_string(),
                tau: params.tau,
                epsilon: format_rational(&params.epsilon),
                p: params.p,
                seed: params.spire_seed,
            };
            CliError {
                code: EXIT_VIOLATION,
                message: format!("theorem violation: {msg}"),
                bundle: Some(serde_json::to_string_pretty(&bundle).unwrap()),
            }
        }
        other => CliError::usage(other.to_string()),
    })
}

fn witness_exit(w: &Witness) -> i32 {
    if w.is_stuck() {
        EXIT_STUCK
    } else {
        EXIT_OK
    }
}

fn certify(a: CertifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&a.graph)?;
    let t = load_tree(&a.tree)?;
    let m = load_mass(&a.mass, &g)?;
    let params = resolve_params(&t, a.tau, a.epsilon.as_deref(), a.p)?.with_spire_seed(a.seed);
    let report = run_engine(&g, &m, &a.mass, &t, &params)?;
    let doc = WitnessDocument::new(&report, &params, m.kind(), a.trace);
    emit(out, &doc.to_json())?;
    Ok(witness_exit(&report.witness))
}

fn epsilon(tau: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let eps = paper_epsilon(tau).map_err(|e| CliError::usage(e.to_string()))?;
    let p = paper_p(tau);
    let doc = json!({
        "tau": tau,
        "p": p.to_string(),
        "epsilon": format_rational(&eps),
        "epsilon_inverse": format!("{p}*2^{p}*{}", tau + 3),
    });
    emit(out, &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&a.graph)?;
    let t = load_tree(&a.tree)?;
    let doc = WitnessDocument::from_json(&read(&a.witness)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", a.witness.display())))?;
    let eps = rational_arg(&a.epsilon, "--epsilon")?;
    let mass_spec = a.mass.unwrap_or_else(|| doc.params.mass.clone());
    if mass_spec == MassKind::Weighted.name() {
        return Err(CliError::usage("witness used weighted mass; pass --mass weighted:FILE"));
    }
    let m = load_mass(&mass_spec, &g)?;
    let report = verify_witness(&g, &m, &t, &eps, &doc.witness);
    let masses: Vec<_> = report.masses.iter().map(|(role, mu)| json!({"role": role, "mass": format_rational(mu)})).collect();
    let body = json!({
        "variant": doc.witness.name(),
        "verified": report.verified,
        "failures": report.failures,
        "masses": masses,
    });
    emit(out, &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(if report.verified { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::TooLarge { .. } => CliError::usage(e.to_string()),
        OracleError::NodeLimit(_) => CliError { code: EXIT_STUCK, message: e.to_string(), bundle: None },
    }
}

fn oracle(which: OracleKind, graph: &Path, tree: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(graph)?;
    let body = match which {
        OracleKind::Embed => {
            let tree = tree.ok_or_else(|| CliError::usage("oracle embed needs --tree"))?;
            let t = load_graph(tree)?;
            let found = brute_induced_embedding(&g, &t, default_node_limit()).map_err(oracle_error)?;
            json!({ "embedding": found })
        }
        OracleKind::Anticomplete => {
            let (a, b) = brute_best_anticomplete(&g).map_err(oracle_error)?;
            json!({ "a": a, "b": b })
        }
        OracleKind::Chi => json!({ "chi": exact_chromatic_number(&g).map_err(oracle_error)? }),
    };
    emit(out, &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(EXIT_OK)
}

fn chi_split(
    graph: &Path,
    tree: &Path,
    epsilon: &str,
    p: Option<usize>,
    seed: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let g = load_graph(graph)?;
    let t = load_tree(tree)?;
    let m = load_mass("chromatic", &g)?;
    let params = resolve_params(&t, None, Some(epsilon), p)?.with_spire_seed(seed);
    let report = run_engine(&g, &m, "chromatic", &t, &params)?;
    let chi_g = m.total_chromatic_number().unwrap();
    let bound = &params.epsilon * from_usize(chi_g as usize);
    let mut body = json!({
        "variant": report.witness.name(),
        "witness": report.witness,
        "chi_g": chi_g,
        "epsilon": format_rational(&params.epsilon),
        "epsilon_chi_g": format_rational(&bound),
        "verified": report.verdict.verified,
    });
    if let Witness::AnticompletePair { a, b } = &report.witness {
        let chi = |s: &[u32]| m.chromatic_number_of(&VertexSet::from_iter(g.n(), s.iter().copied())).unwrap();
        let (ca, cb) = (chi(a), chi(b));
        body["chi_a"] = json!(ca);
        body["chi_b"] = json!(cb);
        body["split_holds"] =
            json!(from_usize(ca as usize) >= bound && from_usize(cb as usize) >= bound);
    }
    emit(out, &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(witness_exit(&report.witness))
}

fn parse_legs(text: &str) -> Result<Vec<Leg>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (at, len) = item.split_once(':').ok_or_else(|| CliError::usage(format!("leg {item:?} is not AT:LEN")))?;
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| CliError::usage(format!("leg {item:?} is not AT:LEN")));
            Ok(Leg { at: num(at)?, len: num(len)? })
        })
        .collect()
}

fn gen_spec(a: &GenArgs) -> Result<GenSpec, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::usage(format!("this model needs --{flag}")));
    let edge_p = || {
        a.edge_p.as_deref().ok_or_else(|| CliError::usage("this model needs --edge-p")).and_then(|s| rational_arg(s, "--edge-p"))
    };
    let model = match a.model {
        GenModel::Gnp => Model::Gnp { n: need(a.n, "n")?, p: edge_p()? },
        GenModel::Regular => Model::Regular { n: need(a.n, "n")?, d: need(a.d, "d")? },
        GenModel::HighGirth => Model::HighGirth { n: need(a.n, "n")?, p: edge_p()?, girth: need(a.girth, "girth")? },
        GenModel::CaterpillarSubdivision => {
            Model::CaterpillarSubdivision { spine: need(a.spine, "spine")?, legs: parse_legs(&a.legs)? }
        }
    };
    Ok(GenSpec::new(model, a.seed))
}

fn gen(a: GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = gen_spec(&a)?;
    let g = generate(&spec).map_err(|e| CliError::usage(e.to_string()))?;
    write!(out, "{}", to_edge_list(&g)).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(EXIT_OK)
}

/// The JSON document read by `batch --spec`. `tree` is an edge-list file,
/// resolved relative to the spec file.
#[derive(Debug, Serialize, Deserialize)]
pub struct BatchDocument {
    pub specs: Vec<GenSpec>,
    pub tree: PathBuf,
    pub trials: usize,
    pub epsilon: Option<String>,
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub tau: Option<usize>,
    #[serde(default)]
    pub mass: Option<String>,
}

fn batch(spec: &Path, summary: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let doc: BatchDocument =
        serde_json::from_str(&read(spec)?).map_err(|e| CliError::usage(format!("{}: {e}", spec.display())))?;
    let tree_path = spec.parent().unwrap_or(Path::new(".")).join(&doc.tree);
    let t = load_tree(&tree_path)?;
    let params = resolve_params(&t, doc.tau, doc.epsilon.as_deref(), doc.p)?;
    let mass = match doc.mass.as_deref().unwrap_or("cardinality") {
        "cardinality" => MassKind::Cardinality,
        "chromatic" => MassKind::Chromatic,
        other => return Err(CliError::usage(format!("batch mass must be cardinality or chromatic, got {other:?}"))),
    };
    match run_batch(&doc.specs, &t, &params, mass, doc.trials) {
        Ok(report) => {
            emit(out, &serde_json::to_string_pretty(&report).unwrap())?;
            if summary {
                let _ = write!(err, "{}", report.summary_table());
            }
            Ok(EXIT_OK)
        }
        Err(failure) => Err(CliError {
            code: EXIT_VIOLATION,
            message: failure.to_string(),
            bundle: Some(serde_json::to_string_pretty(&failure.0).unwrap()),
        }),
    }
}
