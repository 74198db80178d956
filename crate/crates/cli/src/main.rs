//! `slopebound`: exact checkers and corpus runner.
//!
//! Exit codes: 0 = all checks passed, 1 = a checked inequality or
//! postcondition failed (a witness is printed), 2 = usage or hypothesis
//! error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::json;

use slopebound_core::arb::Ctx;
use slopebound_core::arcsys::{
    key_consequence, key_inequality_subgraph, pi1_oracle, pi1_subgraph, reduce_system, ArcModel,
    ArcModelSpec, Labeling,
};
use slopebound_core::bigirth::{bigirth_exact, general_witness, trivalent_witness};
use slopebound_core::bounds::{
    choose_q_tau, f_monotone_check, kappa_bound, phi_tau, qualitative_check, tau_from_q,
    theorem_check, torus_knot_data, DecayFamily, KappaVariant, KnotData, TheoremKind,
};
use slopebound_core::corpus::{
    gen_arc_model, gen_lattice_free_parallelogram, gen_sl2_matrix, gen_trivalent_graph,
    instance_rng, run_suite,
};
use slopebound_core::error::Error;
use slopebound_core::field::{FunctionField, PAdic, Poly, RatFun};
use slopebound_core::graph::{GraphJson, Multigraph, Subgraph};
use slopebound_core::norms::{
    delta, knot_chain_verify, minkowski_check, numerical_slope, ChainInput, HomologyClass,
    ParallelogramNorm, Slope,
};
use slopebound_core::par::ExecMode;
use slopebound_core::report::CorpusConfig;
use slopebound_core::tree::{
    arc_commutator_check, base_vertex, translation_length, translation_length_oracle, vertex_normalize,
    Mat2,
};

#[derive(Parser)]
#[command(name = "slopebound", version, about = "Exact slope/genus bound machinery")]
struct Cli {
    /// Decimal digits for directed-rounding certificates.
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bigirth of a multigraph: exact oracle or constructive witnesses.
    Bigirth(BigirthArgs),
    /// Arc-system operations on a surface model.
    Arcsys(ArcsysArgs),
    /// The lattice-class tree over a discretely valued field.
    Tree(TreeArgs),
    /// Slope arithmetic and parallelogram norms.
    Norms(NormsArgs),
    /// Closed-form bound evaluators and theorem checkers.
    Bounds(BoundsArgs),
    /// Seeded random instances.
    Gen(GenArgs),
    /// Run a corpus suite.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct BigirthArgs {
    /// Graph JSON file: `{"vertices":[..],"edges":[[u],[u,v],..]}`.
    #[arg(long)]
    graph: PathBuf,
    /// Exact brute-force oracle (default).
    #[arg(long, conflicts_with_all = ["trivalent", "general"])]
    exact: bool,
    /// Constructive witness for min-valence-3 graphs.
    #[arg(long, conflicts_with = "general")]
    trivalent: bool,
    /// Constructive witness under the general hypotheses.
    #[arg(long)]
    general: bool,
    /// Write the witness subgraph as JSON.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ArcsysArgs {
    /// Model JSON file.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum)]
    op: ArcsysOp,
    /// Labeling JSON: {"labels":[..],"n_labels":k} (keyineq/keycons).
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Excluded arc set JSON: {"arcs":[..]}.
    #[arg(long)]
    excluded: Option<PathBuf>,
    /// Weight JSON: {"weights":["1/2",..]} (keyineq; keycons derives them).
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value = "2")]
    q: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArcsysOp {
    Validate,
    Dual,
    Reduce,
    Pi1,
    Keyineq,
    Keycons,
}

#[derive(Args)]
struct TreeArgs {
    /// Field: `p:<prime>` for p-adic, `t` for rational functions in t.
    #[arg(long)]
    field: String,
    #[arg(long, value_enum)]
    op: TreeOp,
    /// Matrix JSON (see README for entry formats).
    #[arg(long)]
    matrix: PathBuf,
    /// Second matrix, for distance and commutator.
    #[arg(long)]
    matrix2: Option<PathBuf>,
    /// Arc length for the commutator check.
    #[arg(long, default_value_t = 1)]
    t: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeOp {
    Distance,
    Length,
    Oracle,
    Commutator,
}

#[derive(Args)]
struct NormsArgs {
    #[arg(long, value_enum)]
    op: NormsOp,
    /// Inline JSON or @file.
    #[arg(long)]
    data: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormsOp {
    Delta,
    Slope,
    Minkowski,
    Chain,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    op: BoundsOp,
    /// Inline JSON or @file.
    #[arg(long)]
    data: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsOp {
    Phi,
    Chooseq,
    Calculus,
    Kappa,
    Theorem,
    Torus,
    Qual,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    index: u32,
    /// Size cap (vertices for graphs, arcs for models, word length for
    /// matrices).
    #[arg(long, default_value_t = 10)]
    size: u32,
    /// Prime for matrix generation.
    #[arg(long, default_value_t = 3)]
    p: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Graph,
    Arcmodel,
    Matrix,
    Parallelogram,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    count: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra suite parameters as inline JSON.
    #[arg(long)]
    params: Option<String>,
    /// Output stem: writes `<out>.json` and `<out>.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Force sequential execution.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let digits = cli
        .digits
        .or_else(|| std::env::var("SLOPEBOUND_DIGITS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(50);
    match run(cli.command, digits) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::HypothesisViolated(_)
                | Error::BadInput(_)
                | Error::DegenerateFraming
                | Error::DegenerateNorm(_)
                | Error::NotCoprime(_, _)
                | Error::NotInStabilizer(_)
                | Error::NotSl2
                | Error::SingularMatrix
                | Error::MalformedRibbon(_)
                | Error::RegionMismatch(_)
                | Error::BoundaryParallelArc(_)
                | Error::DanglingEndpoint { .. }
                | Error::DuplicateId(_)
                | Error::CapExceeded(_) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))
}

fn inline_json(data: &str) -> Result<serde_json::Value, Error> {
    let text = if let Some(path) = data.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::BadInput(format!("{path}: {e}")))?
    } else {
        data.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("bad JSON: {e}")))
}

fn rational(s: &str) -> Result<BigRational, Error> {
    BigRational::from_str(s).map_err(|e| Error::BadInput(format!("bad rational {s}: {e}")))
}

fn value_rational(v: &serde_json::Value, key: &str) -> Result<BigRational, Error> {
    match v.get(key) {
        Some(serde_json::Value::String(s)) => rational(s),
        Some(serde_json::Value::Number(n)) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Err(Error::BadInput(format!("{key} must be integer or \"a/b\"")))
            }
        }
        _ => Err(Error::BadInput(format!("missing {key}"))),
    }
}

fn value_u64(v: &serde_json::Value, key: &str) -> Result<u64, Error> {
    v.get(key)
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::BadInput(format!("missing {key}")))
}

fn class(v: &serde_json::Value, key: &str) -> Result<HomologyClass, Error> {
    let arr = v
        .get(key)
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::BadInput(format!("missing {key}")))?;
    if arr.len() != 2 {
        return Err(Error::BadInput(format!("{key} must be [a, b]")));
    }
    Ok(HomologyClass(
        arr[0].as_i64().ok_or_else(|| Error::BadInput("bad coordinate".into()))?,
        arr[1].as_i64().ok_or_else(|| Error::BadInput("bad coordinate".into()))?,
    ))
}

fn subgraph_json(sub: &Subgraph<'_>) -> serde_json::Value {
    json!({
        "vertices": sub.vertex_set().iter().collect::<Vec<_>>(),
        "edges": sub.edge_set().iter().collect::<Vec<_>>(),
    })
}

fn emit(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

fn run(cmd: Command, digits: u32) -> Result<ExitCode, Error> {
    let ctx = Ctx::with_digits(digits);
    match cmd {
        Command::Bigirth(args) => {
            let gj: GraphJson = read_json(&args.graph)?;
            let g = Multigraph::from_json(&gj)?;
            let (value, witness) = if args.trivalent {
                let w = trivalent_witness(&g)?;
                (Some(w.length), Some(w))
            } else if args.general {
                let w = general_witness(&g)?;
                (Some(w.length), Some(w))
            } else {
                bigirth_exact(&g)?
            };
            let out = json!({
                "bigirth": value,
                "witness": witness.as_ref().map(|w| json!({
                    "length": w.length,
                    "chi": w.chi,
                    "branch": w.branch,
                    "subgraph": subgraph_json(&w.subgraph),
                })),
            });
            if let (Some(path), Some(w)) = (&args.witness, &witness) {
                std::fs::write(path, serde_json::to_string_pretty(&subgraph_json(&w.subgraph)).unwrap())
                    .map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
            }
            emit(out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Arcsys(args) => run_arcsys(args, &ctx),
        Command::Tree(args) => run_tree(args),
        Command::Norms(args) => run_norms(args),
        Command::Bounds(args) => run_bounds(args, &ctx, digits),
        Command::Gen(args) => run_gen(args),
        Command::Corpus(args) => run_corpus(args, digits),
    }
}

#[derive(Deserialize)]
struct LabelsJson {
    labels: Vec<u32>,
    n_labels: usize,
}

#[derive(Deserialize)]
struct ExcludedJson {
    arcs: Vec<u32>,
}

#[derive(Deserialize)]
struct WeightsJson {
    weights: Vec<String>,
}

fn run_arcsys(args: ArcsysArgs, ctx: &Ctx) -> Result<ExitCode, Error> {
    let spec: ArcModelSpec = read_json(&args.model)?;
    let model = ArcModel::new(spec)?;
    let q = rational(&args.q)?;
    let labeling = || -> Result<Labeling, Error> {
        let path = args
            .labels
            .as_ref()
            .ok_or_else(|| Error::BadInput("--labels required".into()))?;
        let lj: LabelsJson = read_json(path)?;
        Labeling::new(lj.labels, lj.n_labels)
    };
    let excluded = || -> Result<BTreeSet<u32>, Error> {
        Ok(match &args.excluded {
            Some(path) => {
                let ej: ExcludedJson = read_json(path)?;
                ej.arcs.into_iter().collect()
            }
            None => BTreeSet::new(),
        })
    };
    match args.op {
        ArcsysOp::Validate => {
            emit(json!({
                "arcs": model.n_arcs(),
                "chi_surface": model.chi_surface(),
                "genus": model.genus(),
                "boundary_circles": model.boundary_circles(),
                "circuits": model.circuits().len(),
                "regions": model.regions().len(),
                "reduced": model.is_reduced(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        ArcsysOp::Dual => {
            let dual = model.dual_graph();
            let (_, betti) = dual.components_and_betti();
            let b1: i64 = betti.iter().sum();
            let all_planar = model.regions().iter().all(|r| r.genus == 0);
            // the Betti >= genus inequality is asserted only for all-planar
            // complements
            let holds = !all_planar || b1 >= model.genus() as i64;
            emit(json!({
                "dual": dual.to_json(),
                "betti": b1,
                "genus": model.genus(),
                "all_planar": all_planar,
                "holds": holds,
            }));
            Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        ArcsysOp::Reduce => {
            let red = reduce_system(&model)?;
            emit(json!({
                "reduced_arcs": red.model.n_arcs(),
                "widths": red.widths,
                "inner": red.inner,
                "representatives": red.arc_map,
                "model": {
                    "circles": red.model.spec().circles,
                    "arcs": red.model.spec().arcs,
                },
            }));
            Ok(ExitCode::SUCCESS)
        }
        ArcsysOp::Pi1 => {
            let full = model.graph().full();
            let sub = pi1_subgraph(&model, &full)?;
            let ok = pi1_oracle(&model, &sub);
            emit(json!({
                "subgraph": subgraph_json(&sub),
                "oracle": ok,
            }));
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        ArcsysOp::Keyineq => {
            let labeling = labeling()?;
            let weights: Vec<BigRational> = match &args.weights {
                Some(path) => {
                    let wj: WeightsJson = read_json(path)?;
                    wj.weights.iter().map(|s| rational(s)).collect::<Result<_, _>>()?
                }
                None => vec![BigRational::from_integer(BigInt::from(1)); labeling.n_labels],
            };
            let out = key_inequality_subgraph(&model, &labeling, &weights, &excluded()?, &q)?;
            emit(json!({
                "subgraph": subgraph_json(&out.subgraph),
                "chi": out.chi,
                "theta_min": out.theta_min,
                "lambda": out.lambda_value.to_string(),
                "m": out.m,
                "k": out.k,
                "ratio_strict": out.ratio_strict,
                "oracle": out.oracle_ok,
            }));
            Ok(ExitCode::SUCCESS)
        }
        ArcsysOp::Keycons => {
            let red = reduce_system(&model)?;
            let labeling = labeling()?;
            let out = key_consequence(&red, &labeling, &excluded()?, &q, ctx)?;
            emit(json!({
                "k_subgraph": subgraph_json(&out.k_subgraph),
                "k0_length": out.k0_length,
                "theta_min": out.theta_min,
                "betti": out.betti,
                "oracle": out.oracle_ok,
                "report": out.report,
            }));
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Deserialize)]
struct MatrixJson {
    entries: Vec<serde_json::Value>,
}

fn parse_padic_matrix(j: &MatrixJson) -> Result<Mat2<BigRational>, Error> {
    if j.entries.len() != 4 {
        return Err(Error::BadInput("matrix needs 4 entries".into()));
    }
    let parse = |v: &serde_json::Value| -> Result<BigRational, Error> {
        match v {
            serde_json::Value::String(s) => rational(s),
            serde_json::Value::Number(n) => Ok(BigRational::from_integer(BigInt::from(
                n.as_i64().ok_or_else(|| Error::BadInput("bad entry".into()))?,
            ))),
            _ => Err(Error::BadInput("entries must be \"a/b\" strings or integers".into())),
        }
    };
    Ok(Mat2::new(
        parse(&j.entries[0])?,
        parse(&j.entries[1])?,
        parse(&j.entries[2])?,
        parse(&j.entries[3])?,
    ))
}

fn parse_fun_matrix(j: &MatrixJson) -> Result<Mat2<RatFun>, Error> {
    if j.entries.len() != 4 {
        return Err(Error::BadInput("matrix needs 4 entries".into()));
    }
    let coeffs = |v: &serde_json::Value| -> Result<Poly, Error> {
        let arr = v.as_array().ok_or_else(|| Error::BadInput("coeff list expected".into()))?;
        let mut out = Vec::with_capacity(arr.len());
        for c in arr {
            out.push(match c {
                serde_json::Value::String(s) => rational(s)?,
                serde_json::Value::Number(n) => BigRational::from_integer(BigInt::from(
                    n.as_i64().ok_or_else(|| Error::BadInput("bad coefficient".into()))?,
                )),
                _ => return Err(Error::BadInput("bad coefficient".into())),
            });
        }
        Ok(Poly::from_coeffs(out))
    };
    let parse = |v: &serde_json::Value| -> Result<RatFun, Error> {
        let num = coeffs(v.get("num").ok_or_else(|| Error::BadInput("missing num".into()))?)?;
        let den = match v.get("den") {
            Some(d) => coeffs(d)?,
            None => Poly::from_coeffs(vec![BigRational::from_integer(BigInt::from(1))]),
        };
        RatFun::new(num, den)
    };
    Ok(Mat2::new(
        parse(&j.entries[0])?,
        parse(&j.entries[1])?,
        parse(&j.entries[2])?,
        parse(&j.entries[3])?,
    ))
}

fn run_tree(args: TreeArgs) -> Result<ExitCode, Error> {
    let mj: MatrixJson = read_json(&args.matrix)?;
    let mj2: Option<MatrixJson> = match &args.matrix2 {
        Some(p) => Some(read_json(p)?),
        None => None,
    };
    let need2 = || mj2.as_ref().ok_or_else(|| Error::BadInput("--matrix2 required".into()));
    if let Some(p) = args.field.strip_prefix("p:") {
        let p: u64 = p.parse().map_err(|_| Error::BadInput("bad prime".into()))?;
        let f = PAdic::new(p);
        let m = parse_padic_matrix(&mj)?;
        match args.op {
            TreeOp::Distance => {
                let v = vertex_normalize(&f, &m)?;
                let w = match &mj2 {
                    Some(j) => vertex_normalize(&f, &parse_padic_matrix(j)?)?,
                    None => base_vertex(&f),
                };
                let d = slopebound_core::tree::tree_distance(&f, &w, &v)?;
                emit(json!({ "distance": d }));
            }
            TreeOp::Length => {
                emit(json!({ "translation_length": translation_length(&f, &m)? }));
            }
            TreeOp::Oracle => {
                let formula = translation_length(&f, &m)?;
                let (oracle, witness) = translation_length_oracle(&f, &m)?;
                let agree = oracle == formula;
                emit(json!({
                    "oracle": oracle,
                    "formula": formula,
                    "agree": agree,
                    "witness_basis": witness.basis.e.iter().flatten()
                        .map(|x| x.to_string()).collect::<Vec<_>>(),
                }));
                return Ok(if agree { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            TreeOp::Commutator => {
                let y = parse_padic_matrix(need2()?)?;
                let (holds, v) = arc_commutator_check(&f, args.t, &m, &y)?;
                emit(json!({ "holds": holds, "valuation": v.to_string(), "t": args.t }));
                return Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
        }
        Ok(ExitCode::SUCCESS)
    } else if args.field == "t" {
        let f = FunctionField;
        let m = parse_fun_matrix(&mj)?;
        match args.op {
            TreeOp::Distance => {
                let v = vertex_normalize(&f, &m)?;
                let w = match &mj2 {
                    Some(j) => vertex_normalize(&f, &parse_fun_matrix(j)?)?,
                    None => base_vertex(&f),
                };
                let d = slopebound_core::tree::tree_distance(&f, &w, &v)?;
                emit(json!({ "distance": d }));
            }
            TreeOp::Length => {
                emit(json!({ "translation_length": translation_length(&f, &m)? }));
            }
            TreeOp::Oracle => {
                return Err(Error::BadInput(
                    "the displacement oracle needs a finite residue field; use p:<prime>".into(),
                ));
            }
            TreeOp::Commutator => {
                let y = parse_fun_matrix(need2()?)?;
                let (holds, v) = arc_commutator_check(&f, args.t, &m, &y)?;
                emit(json!({ "holds": holds, "valuation": v.to_string(), "t": args.t }));
                return Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
        }
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::BadInput("field must be p:<prime> or t".into()))
    }
}

fn run_norms(args: NormsArgs) -> Result<ExitCode, Error> {
    let data = inline_json(&args.data)?;
    match args.op {
        NormsOp::Delta => {
            let s1 = Slope::new(class(&data, "s1")?)?;
            let s2 = Slope::new(class(&data, "s2")?)?;
            emit(json!({ "delta": delta(s1, s2) }));
            Ok(ExitCode::SUCCESS)
        }
        NormsOp::Slope => {
            let alpha = class(&data, "alpha")?;
            let mu = class(&data, "mu")?;
            let lambda = class(&data, "lambda")?;
            let v = numerical_slope(alpha, mu, lambda)?;
            emit(json!({
                "numerical_slope": v.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "inf".into()),
            }));
            Ok(ExitCode::SUCCESS)
        }
        NormsOp::Minkowski => {
            let vec2 = |key: &str| -> Result<(BigRational, BigRational), Error> {
                let arr = data
                    .get(key)
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| Error::BadInput(format!("missing {key}")))?;
                let p = |v: &serde_json::Value| -> Result<BigRational, Error> {
                    match v {
                        serde_json::Value::String(s) => rational(s),
                        serde_json::Value::Number(n) => Ok(BigRational::from_integer(
                            BigInt::from(n.as_i64().unwrap_or(0)),
                        )),
                        _ => Err(Error::BadInput("bad coordinate".into())),
                    }
                };
                Ok((p(&arr[0])?, p(&arr[1])?))
            };
            let b = ParallelogramNorm::new(vec2("v1")?, vec2("v2")?)?;
            let (area, pt) = minkowski_check(&b);
            emit(json!({
                "area": area.to_string(),
                "interior_lattice_point": pt,
            }));
            Ok(ExitCode::SUCCESS)
        }
        NormsOp::Chain => {
            let input = ChainInput {
                alpha1: class(&data, "alpha1")?,
                alpha2: class(&data, "alpha2")?,
                mu: class(&data, "mu")?,
                t: value_rational(&data, "t")?,
                chain_constant: value_rational(&data, "chain_constant")
                    .unwrap_or_else(|_| BigRational::from_integer(BigInt::from(1))),
            };
            let out = knot_chain_verify(&input)?;
            let pass = out.report.holds;
            emit(json!({
                "q1": out.q1,
                "delta": out.delta,
                "ratio": out.ratio.to_string(),
                "report": out.report,
            }));
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn parse_knot_data(v: &serde_json::Value) -> Result<KnotData, Error> {
    let d = v.get("data").unwrap_or(v);
    Ok(KnotData {
        g1: value_u64(d, "g1")?,
        g2: value_u64(d, "g2")?,
        m1: value_u64(d, "m1")?,
        m2: value_u64(d, "m2")?,
        q1: value_u64(d, "q1")?,
        delta: value_u64(d, "delta")?,
    })
}

fn run_bounds(args: BoundsArgs, ctx: &Ctx, digits: u32) -> Result<ExitCode, Error> {
    let data = inline_json(&args.data)?;
    match args.op {
        BoundsOp::Phi => {
            let tau = match data.get("tau") {
                Some(_) => value_rational(&data, "tau")?,
                None => tau_from_q(&value_rational(&data, "q")?)?,
            };
            let n = value_rational(&data, "n")?;
            let phi = phi_tau(&tau, &n)?;
            emit(json!({
                "tau": phi.tau.to_string(),
                "argmin_m": phi.m,
                "value": phi.interval(ctx).to_decimal(ctx, digits.min(40)),
            }));
            Ok(ExitCode::SUCCESS)
        }
        BoundsOp::Chooseq => {
            let x = value_rational(&data, "x")?;
            let chosen = choose_q_tau(&x, ctx)?;
            let pass = chosen.cert_q_range.holds && chosen.cert_ln_phi.holds;
            emit(json!({
                "mu": chosen.mu,
                "q": chosen.q.to_string(),
                "tau": chosen.tau.to_string(),
                "cert_q_range": chosen.cert_q_range,
                "cert_ln_phi": chosen.cert_ln_phi,
            }));
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        BoundsOp::Calculus => {
            let lo = value_u64(&data, "lo").unwrap_or(333);
            let hi = value_u64(&data, "hi").unwrap_or(10_000);
            let rep = f_monotone_check(lo, hi, ctx)?;
            let pass = rep.holds;
            emit(serde_json::to_value(&rep).unwrap());
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        BoundsOp::Kappa => {
            let kd = parse_knot_data(&data)?;
            let variant = match data.get("variant") {
                Some(serde_json::Value::String(s)) if s == "easy" => KappaVariant::Easy,
                Some(serde_json::Value::String(s)) if s == "explicit" => KappaVariant::Explicit,
                Some(v) if v.get("hard").is_some() => {
                    let h = &v["hard"];
                    KappaVariant::Hard {
                        theta: value_u64(h, "theta")
                            .unwrap_or(kd.chi2().unsigned_abs()),
                        q: value_rational(h, "q")?,
                    }
                }
                _ => KappaVariant::Easy,
            };
            let bound = kappa_bound(&kd, &variant, ctx)?;
            emit(json!({
                "value": bound.interval(ctx).to_decimal(ctx, digits.min(40)),
            }));
            Ok(ExitCode::SUCCESS)
        }
        BoundsOp::Theorem => {
            let kd = parse_knot_data(&data)?;
            let which = match data.get("which") {
                Some(serde_json::Value::String(s)) if s == "easy" => TheoremKind::Easy,
                Some(serde_json::Value::String(s)) if s == "hard" => TheoremKind::Hard,
                Some(serde_json::Value::String(s)) if s == "chibound" => TheoremKind::ChiBound,
                Some(v) if v.get("spanning").is_some() => TheoremKind::SpanningCorollary {
                    g: value_u64(&v["spanning"], "g")?,
                    r: value_u64(&v["spanning"], "r")?,
                },
                _ => TheoremKind::Easy,
            };
            let chain = value_rational(&data, "chain_constant")
                .unwrap_or_else(|_| BigRational::from_integer(BigInt::from(1)));
            let rep = theorem_check(&kd, &which, ctx, &chain)?;
            let pass = rep.holds;
            emit(serde_json::to_value(&rep).unwrap());
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        BoundsOp::Torus => {
            let p = value_u64(&data, "p")?;
            let q = value_u64(&data, "q")?;
            let (slope, genus) = torus_knot_data(p, q)?;
            emit(json!({ "slope": slope, "genus": genus }));
            Ok(ExitCode::SUCCESS)
        }
        BoundsOp::Qual => {
            let fam = match data.get("family").and_then(|v| v.as_str()) {
                Some("f1") => DecayFamily::F1,
                _ => DecayFamily::F0,
            };
            let eps = value_rational(&data, "eps")
                .unwrap_or_else(|_| BigRational::new(BigInt::from(1), BigInt::from(2)));
            let limit = value_u64(&data, "limit").unwrap_or(1_000_000_000_000);
            let rep = qualitative_check(fam, &eps, 8, limit, None, ctx)?;
            let pass = rep.tail_decreasing;
            emit(json!({
                "family": rep.family,
                "eps": rep.eps.to_string(),
                "samples": rep.samples,
                "tail_decreasing": rep.tail_decreasing,
            }));
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn run_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let mut rng = instance_rng(args.seed, args.index);
    match args.kind {
        GenKind::Graph => {
            let g = gen_trivalent_graph(&mut rng, args.size.max(2));
            emit(serde_json::to_value(g.to_json()).unwrap());
        }
        GenKind::Arcmodel => {
            let m = gen_arc_model(&mut rng, args.size.max(2), false);
            emit(serde_json::to_value(m.spec()).unwrap());
        }
        GenKind::Matrix => {
            let f = PAdic::new(args.p);
            let m = gen_sl2_matrix(&mut rng, &f, args.size.clamp(1, 10));
            let entries: Vec<String> = m.e.iter().flatten().map(|x| x.to_string()).collect();
            emit(json!({ "entries": entries, "det": m.det(&f).to_string() }));
        }
        GenKind::Parallelogram => {
            let b = gen_lattice_free_parallelogram(&mut rng);
            emit(json!({
                "v1": [b.v1.0.to_string(), b.v1.1.to_string()],
                "v2": [b.v2.0.to_string(), b.v2.1.to_string()],
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_corpus(args: CorpusArgs, digits: u32) -> Result<ExitCode, Error> {
    let params = match &args.params {
        Some(p) => inline_json(p)?
            .as_object()
            .cloned()
            .ok_or_else(|| Error::BadInput("params must be a JSON object".into()))?,
        None => Default::default(),
    };
    let config = CorpusConfig {
        suite: args.suite.clone(),
        count: args.count,
        seed: args.seed,
        digits,
        params,
    };
    let mode = if args.sequential { ExecMode::Sequential } else { ExecMode::default_mode() };
    let started = std::time::Instant::now();
    let report = run_suite(&config, mode)?;
    eprintln!(
        "suite {} finished in {:.2?}: {}/{} passed",
        config.suite,
        started.elapsed(),
        report.passed,
        report.passed + report.failed
    );
    let json_text = serde_json::to_string_pretty(&report).expect("serializable");
    match &args.out {
        Some(stem) => {
            let json_path = stem.with_extension("json");
            let csv_path = stem.with_extension("csv");
            std::fs::write(&json_path, &json_text)
                .map_err(|e| Error::BadInput(format!("{}: {e}", json_path.display())))?;
            std::fs::write(&csv_path, report.to_csv())
                .map_err(|e| Error::BadInput(format!("{}: {e}", csv_path.display())))?;
        }
        None => println!("{json_text}"),
    }
    if report.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in report.results.iter().filter(|r| !r.pass).take(5) {
            eprintln!("failed instance {}: {}", r.index, r.detail);
        }
        Ok(ExitCode::from(1))
    }
}
