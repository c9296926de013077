use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fomc_core::bits::parse_elem_set;
use fomc_core::classifier::{classify_fragment, Evidence, Verdict};
use fomc_core::cores::{classical_core, eqfree_core, ux_core};
use fomc_core::evaluator::{check_relativisation, evaluate};
use fomc_core::formulas::{
    canonical_sentence, parse_formula, relativise, to_nnf, CanonicalKind, Formula, FragmentKey,
    RelativisationMode, DEFAULT_FORMULA_BUDGET,
};
use fomc_core::gadgets::{
    make_gadget, meta_reduction, reduce_nae_to_k2, reduce_qcsp_nae_to_gadget, sg, GadgetSpec,
    NaeTarget,
};
use fomc_core::lattice::{enumerate_dsms_bounded, render_cover_edges, render_node_table, DEFAULT_NODE_BUDGET};
use fomc_core::shops::{enumerate_she, exists_shop, ShopProfile};
use fomc_core::structures::{parse_structure, render_structure};
use fomc_core::{ElemSet, Error, Structure};

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(args: std::fmt::Arguments) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => {{
        emit(format_args!($($t)*));
        emit(format_args!("\n"));
    }};
}

#[derive(Parser)]
#[command(name = "fomc", version, about = "Model checking and complexity for fragments of first-order logic")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sentence on a structure.
    Eval(EvalArgs),
    /// Complexity of model checking a fragment on a structure.
    Classify(ClassifyArgs),
    /// Core of a structure.
    Core(CoreArgs),
    /// Surjective hyper-endomorphisms of a structure.
    Shops(ShopsArgs),
    /// Count the down-shop-monoids on n elements.
    DsmCensus(CensusArgs),
    /// Emit a gadget structure.
    Gadget(GadgetArgs),
    /// Apply one of the hardness reductions.
    Reduce(ReduceArgs),
    /// Canonical sentence of a structure.
    Canonical(CanonicalArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    structure: String,
    #[arg(long)]
    sentence: Option<String>,
    /// `U=<set> X=<set>`: restrict every universal to U and existential to X.
    #[arg(long, num_args = 2, value_names = ["U", "X"])]
    relativize: Option<Vec<String>>,
    /// Compare random sentences with their relativisations to U and X.
    #[arg(long, num_args = 2, value_names = ["U", "X"], requires = "seed", conflicts_with = "sentence")]
    check_relativisation: Option<Vec<String>>,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    structure: String,
    #[arg(long, default_value = "pos-eqfree")]
    fragment: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoreKind {
    Ux,
    Classical,
    Eqfree,
}

#[derive(Args)]
struct CoreArgs {
    #[arg(long)]
    structure: String,
    #[arg(long, value_enum, default_value = "ux")]
    kind: CoreKind,
}

#[derive(Args)]
struct ShopsArgs {
    #[arg(long)]
    structure: String,
    /// One of `a:<e>`, `e:<e>`, `singleton-ux:<u>,<x>`, `u-surjective:<set>`,
    /// `x-total:<set>`, `ux:<set>:<set>`.
    #[arg(long)]
    profile: Option<String>,
    /// Lift the default domain bound of the enumeration.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    force: bool,
    /// Also print the node table and the cover edges.
    #[arg(long)]
    export: bool,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(long)]
    name: String,
    /// Comma-separated integer parameters.
    #[arg(long)]
    params: Option<String>,
    /// The input graph for `SG`.
    #[arg(long)]
    structure: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    /// NAE sentence to a sentence over K2.
    NaeToK2,
    /// Clause-form NAE instance to G(2,2,0,2).
    QcspG22,
    /// Clause-form NAE instance to Dhat(j,k); `--params j,k`.
    QcspDhat,
    /// Graph to the meta-problem structure.
    Meta,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    reduction: Reduction,
    #[arg(long)]
    sentence: Option<String>,
    #[arg(long)]
    structure: Option<String>,
    #[arg(long)]
    params: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalFragment {
    Pp,
    PpNeq,
    EqfreeNeg,
    PosEqfree,
}

#[derive(Args)]
struct CanonicalArgs {
    #[arg(long)]
    structure: String,
    #[arg(long, value_enum)]
    fragment: CanonicalFragment,
    /// Width of the universal block for `pos-eqfree`; defaults to the domain size.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::DomainTooLarge { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))
    }
}

fn load_structure(path: &str) -> Result<Structure, Failure> {
    let text = read_input(path)?;
    parse_structure(&text).map_err(|e| usage(format!("{path}: {e}")))
}

fn load_sentence(path: &str, s: &Structure) -> Result<Formula, Failure> {
    let text = read_input(path)?;
    parse_formula(&text, Some(s.signature())).map_err(|e| usage(format!("{path}: {e}")))
}

fn set_arg(text: &str, prefix: &str) -> Result<ElemSet, Failure> {
    let body = text.strip_prefix(prefix).unwrap_or(text);
    parse_elem_set(body).ok_or_else(|| usage(format!("`{text}` is not an element set")))
}

fn params(text: Option<&str>, want: usize, what: &str) -> Result<Vec<usize>, Failure> {
    let text = text.ok_or_else(|| usage(format!("{what} needs --params with {want} values")))?;
    let vals: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--params `{text}` is not a list of integers")))?;
    if vals.len() != want {
        return Err(usage(format!("{what} takes {want} parameters, found {}", vals.len())));
    }
    Ok(vals)
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn run_eval(a: &EvalArgs, json_out: bool) -> Outcome {
    let s = load_structure(&a.structure)?;
    if let Some(sets) = &a.check_relativisation {
        let u = set_arg(&sets[0], "U=")?;
        let x = set_arg(&sets[1], "X=")?;
        let seed = a.seed.ok_or_else(|| usage("--check-relativisation requires --seed"))?;
        let report = check_relativisation(&s, u, x, a.samples, seed)?;
        if json_out {
            print_json(&json!({
                "samples": report.samples,
                "agrees": report.agrees(),
                "counterexamples": report.counterexamples.iter().map(|(f, v)| json!({"sentence": f, "values": v})).collect::<Vec<_>>(),
            }));
        } else {
            outln!("{} of {} samples disagree", report.counterexamples.len(), report.samples);
            for (f, v) in &report.counterexamples {
                outln!("{f}\t{v:?}");
            }
        }
        return Ok(report.agrees());
    }
    let path = a.sentence.as_deref().ok_or_else(|| usage("eval needs --sentence"))?;
    let mut f = load_sentence(path, &s)?;
    if let Some(sets) = &a.relativize {
        let u = set_arg(&sets[0], "U=")?;
        let x = set_arg(&sets[1], "X=")?;
        f = relativise(
            &to_nnf(&f),
            &u.iter().collect(),
            &x.iter().collect(),
            RelativisationMode::Both,
        )?;
    }
    let value = evaluate(&s, &f)?;
    if json_out {
        let mut v = json!({ "value": value });
        if a.relativize.is_some() {
            v["sentence"] = json!(f.to_string());
        }
        print_json(&v);
    } else {
        outln!("{value}");
    }
    Ok(value)
}

fn evidence_lines(e: &Evidence, out: &mut Vec<String>) {
    match e {
        Evidence::Shops {
            a_shop,
            e_shop,
            singleton_ux,
        } => {
            match singleton_ux {
                Some((u, x, f)) => out.push(format!("singleton U-X shop with u = {u}, x = {x}: {f}")),
                None => {
                    match a_shop {
                        Some((u, f)) => out.push(format!("A-shop at {u}: {f}")),
                        None => out.push("no A-shop".into()),
                    }
                    match e_shop {
                        Some((x, f)) => out.push(format!("E-shop at {x}: {f}")),
                        None => out.push("no E-shop".into()),
                    }
                }
            }
        }
        Evidence::Trivial { reason } => out.push(format!("trivial: {reason}")),
        Evidence::DomainSize { size } => out.push(format!("domain size {size}")),
        Evidence::ConstantEndomorphism { constant } => match constant {
            Some(c) => out.push(format!("constant endomorphism to {c}")),
            None => out.push("no constant endomorphism".into()),
        },
        Evidence::RelationTriviality { nontrivial } => out.push(if *nontrivial {
            "some relation is neither empty nor full".into()
        } else {
            "every relation is empty or full".into()
        }),
        Evidence::Schaefer { classes, quantified } => {
            let names: Vec<String> = classes.iter().map(|c| format!("{c:?}")).collect();
            let what = if *quantified { "quantified Schaefer" } else { "Schaefer" };
            out.push(format!("{what} classes: [{}]", names.join(", ")));
        }
        Evidence::Open { problem } => out.push(format!("open: {problem:?}")),
        Evidence::Dual { key, inner } => {
            out.push(format!("via the complement under {key}: {}", inner.class));
            evidence_lines(&inner.evidence, out);
        }
    }
}

fn run_classify(a: &ClassifyArgs, json_out: bool) -> Outcome {
    let s = load_structure(&a.structure)?;
    let key: FragmentKey = a
        .fragment
        .parse()
        .map_err(|e: Error| usage(format!("--fragment: {e}")))?;
    let v: Verdict = classify_fragment(&s, key)?;
    if json_out {
        print_json(&serde_json::to_value(&v).expect("serialisable"));
    } else {
        outln!("{}", v.class);
        let mut lines = Vec::new();
        evidence_lines(&v.evidence, &mut lines);
        for l in lines {
            outln!("{l}");
        }
    }
    Ok(true)
}

fn run_core(a: &CoreArgs, json_out: bool) -> Outcome {
    let s = load_structure(&a.structure)?;
    match a.kind {
        CoreKind::Ux => {
            let c = ux_core(&s)?;
            if json_out {
                print_json(&json!({
                    "core": render_structure(&c.core),
                    "u": c.u,
                    "x": c.x,
                    "elements": c.elements,
                    "canonical": c.canonical.to_string(),
                }));
            } else {
                outln!("# U = {}, X = {}, elements {:?}", c.u, c.x, c.elements);
                outln!("# canonical shop {}", c.canonical);
                out!("{}", render_structure(&c.core));
            }
        }
        CoreKind::Classical | CoreKind::Eqfree => {
            let (core, map) = match a.kind {
                CoreKind::Classical => classical_core(&s)?,
                _ => eqfree_core(&s),
            };
            if json_out {
                print_json(&json!({ "core": render_structure(&core), "map": map }));
            } else {
                outln!("# map {map:?}");
                out!("{}", render_structure(&core));
            }
        }
    }
    Ok(true)
}

fn parse_profile(text: &str) -> Result<ShopProfile, Failure> {
    let bad = || usage(format!("unknown shop profile `{text}`"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let elem = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let set = |t: &str| parse_elem_set(t).ok_or_else(bad);
    Ok(match kind {
        "a" => ShopProfile::AShop(elem(rest)?),
        "e" => ShopProfile::EShop(elem(rest)?),
        "singleton-ux" => {
            let (u, x) = rest.split_once(',').ok_or_else(bad)?;
            ShopProfile::SingletonUx { u: elem(u)?, x: elem(x)? }
        }
        "u-surjective" => ShopProfile::USurjective(set(rest)?),
        "x-total" => ShopProfile::XTotal(set(rest)?),
        "ux" => {
            let (u, x) = rest.split_once(':').ok_or_else(bad)?;
            ShopProfile::Ux { u: set(u)?, x: set(x)? }
        }
        _ => return Err(bad()),
    })
}

fn run_shops(a: &ShopsArgs, json_out: bool) -> Outcome {
    let s = load_structure(&a.structure)?;
    if let Some(p) = &a.profile {
        let witness = exists_shop(&s, parse_profile(p)?)?;
        if json_out {
            print_json(&json!({ "profile": p, "witness": witness.as_ref().map(|f| f.to_string()) }));
        } else {
            match &witness {
                Some(f) => outln!("{f}"),
                None => outln!("none"),
            }
        }
        return Ok(witness.is_some());
    }
    let dsm = enumerate_she(&s, a.force)?;
    if json_out {
        let shops: Vec<String> = dsm.shops().iter().map(|f| f.to_string()).collect();
        print_json(&json!({ "count": dsm.len(), "shops": shops }));
    } else {
        for f in dsm.shops() {
            outln!("{f}");
        }
    }
    Ok(true)
}

fn run_census(a: &CensusArgs, json_out: bool) -> Outcome {
    let nodes = enumerate_dsms_bounded(a.n, a.force, a.budget.unwrap_or(DEFAULT_NODE_BUDGET))?;
    if json_out {
        let table: Vec<Value> = nodes
            .iter()
            .map(|n| {
                json!({
                    "id": n.id,
                    "size": n.dsm.len(),
                    "tag": n.tag,
                    "generators": n.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "covers": n.covers,
                })
            })
            .collect();
        print_json(&json!({ "n": a.n, "count": nodes.len(), "nodes": table }));
    } else {
        outln!("{}", nodes.len());
        if a.export {
            out!("{}", render_node_table(&nodes));
            out!("{}", render_cover_edges(&nodes));
        }
    }
    Ok(true)
}

fn gadget_spec(name: &str, p: Option<&str>) -> Result<GadgetSpec, Failure> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "kn" => GadgetSpec::Kn { n: params(p, 1, name)?[0] },
        "knreflexive" => GadgetSpec::KnReflexive { n: params(p, 1, name)?[0] },
        "completebipartite" | "kompletebipartite" => {
            let v = params(p, 2, name)?;
            GadgetSpec::CompleteBipartite { a: v[0], b: v[1] }
        }
        "bnae" => GadgetSpec::BNae,
        "oneelement" => GadgetSpec::OneElement,
        "g" => {
            let v = params(p, 4, name)?;
            GadgetSpec::G { j: v[0], k: v[1], u: v[2], x: v[3] }
        }
        "dhat" => {
            let v = params(p, 2, name)?;
            GadgetSpec::Dhat { j: v[0], k: v[1] }
        }
        "gv" => GadgetSpec::Gv { s: params(p, 1, name)?[0] },
        _ => return Err(usage(format!("unknown gadget `{name}`"))),
    })
}

fn emit_structure(s: &Structure, json_out: bool) {
    if json_out {
        print_json(&json!({ "structure": render_structure(s) }));
    } else {
        out!("{}", render_structure(s));
    }
}

fn run_gadget(a: &GadgetArgs, json_out: bool) -> Outcome {
    let s = if a.name.eq_ignore_ascii_case("sg") {
        let path = a.structure.as_deref().ok_or_else(|| usage("SG needs --structure <graph>"))?;
        sg(&load_structure(path)?)?
    } else {
        make_gadget(&gadget_spec(&a.name, a.params.as_deref())?)?
    };
    emit_structure(&s, json_out);
    Ok(true)
}

fn run_reduce(a: &ReduceArgs, json_out: bool) -> Outcome {
    if let Reduction::Meta = a.reduction {
        let path = a.structure.as_deref().ok_or_else(|| usage("meta needs --structure <graph>"))?;
        emit_structure(&meta_reduction(&load_structure(path)?)?, json_out);
        return Ok(true);
    }
    let path = a.sentence.as_deref().ok_or_else(|| usage("this reduction needs --sentence"))?;
    let nae = make_gadget(&GadgetSpec::BNae)?;
    let phi = load_sentence(path, &nae)?;
    let out = match a.reduction {
        Reduction::NaeToK2 => reduce_nae_to_k2(&phi)?,
        Reduction::QcspG22 => reduce_qcsp_nae_to_gadget(&phi, NaeTarget::G22)?,
        Reduction::QcspDhat => {
            let v = match a.params.as_deref() {
                Some(p) => params(Some(p), 2, "qcsp-dhat")?,
                None => vec![2, 2],
            };
            reduce_qcsp_nae_to_gadget(&phi, NaeTarget::Dhat { j: v[0], k: v[1] })?
        }
        Reduction::Meta => unreachable!(),
    };
    if json_out {
        print_json(&json!({ "sentence": out.to_string() }));
    } else {
        outln!("{out}");
    }
    Ok(true)
}

fn run_canonical(a: &CanonicalArgs, json_out: bool) -> Outcome {
    let s = load_structure(&a.structure)?;
    let kind = match a.fragment {
        CanonicalFragment::Pp => CanonicalKind::Pp,
        CanonicalFragment::PpNeq => CanonicalKind::PpNeq,
        CanonicalFragment::EqfreeNeg => CanonicalKind::EqfreeNeg,
        CanonicalFragment::PosEqfree => CanonicalKind::PosEqfree {
            width: a.n.unwrap_or(s.size()),
        },
    };
    let f = canonical_sentence(&s, kind, a.budget.unwrap_or(DEFAULT_FORMULA_BUDGET))?;
    if json_out {
        print_json(&json!({ "sentence": f.to_string(), "nodes": f.node_count() }));
    } else {
        outln!("{f}");
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let j = cli.json;
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a, j),
        Command::Classify(a) => run_classify(a, j),
        Command::Core(a) => run_core(a, j),
        Command::Shops(a) => run_shops(a, j),
        Command::DsmCensus(a) => run_census(a, j),
        Command::Gadget(a) => run_gadget(a, j),
        Command::Reduce(a) => run_reduce(a, j),
        Command::Canonical(a) => run_canonical(a, j),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("fomc: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("fomc: {msg}");
            ExitCode::from(3)
        }
    }
}
