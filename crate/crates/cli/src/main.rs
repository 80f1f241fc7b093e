//! `augspec`: command-line front end.
//!
//! Exit codes: 0 success or no obstruction, 1 internal failure, 2 schema
//! error, 3 `d∘d ≠ 0`, 10 not realizable.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use augspec::fgcomplex::FreeComplex;
use augspec::io::{self, CycleSpec, Document};
use augspec::koszul::{build_koszul, KoszulCycle};
use augspec::obstruct::{annihilator_ideal, leibniz_obstruction, Obstruction};
use augspec::pgroup::{GroupAlgebra, GroupSpec};
use augspec::realize::{realize_cone, RealizationResult};
use augspec::specseq::{d1_solver, filter, graded_ring};
use augspec::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_INTERNAL: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_NOT_A_COMPLEX: u8 = 3;
const EXIT_NOT_REALIZABLE: u8 = 10;

#[derive(Parser)]
#[command(name = "augspec", version, about = "Augmentation-ideal spectral sequences over modular p-group algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Csv,
}

#[derive(clap::Args)]
struct CycleArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    a: usize,
    /// Inline JSON such as '{"r":2,"mu":{"1,2":1}}' or a path to a JSON file.
    #[arg(long)]
    cycle: String,
}

#[derive(Subcommand)]
enum Command {
    /// Group order, ideal powers, Jennings data, gr∪ Poincaré series, d₁.
    Group {
        /// Document or group spec: a path or inline JSON.
        input: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    /// Spectral sequence pages of the complex in a document.
    Ss {
        input: String,
        #[arg(long)]
        page: Option<usize>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
    /// The Koszul complex K over F_p[(Z/p)^a].
    Koszul {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        emit_model: bool,
    },
    /// Cone(w) or its dual for a Koszul cycle in normal form.
    Cone {
        #[command(flatten)]
        cycle: CycleArgs,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        emit_model: bool,
    },
    /// Leibniz-rule obstruction for Cone(w).
    Obstruct {
        #[command(flatten)]
        cycle: CycleArgs,
    },
    /// Realizability verdict for Cone(w).
    Realize {
        #[command(flatten)]
        cycle: CycleArgs,
        #[arg(long)]
        emit_model: bool,
    },
    /// Gaussian cancellation to a minimal complex.
    Minimize { input: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotAComplex { .. } => EXIT_NOT_A_COMPLEX,
            Error::Invalid(_) | Error::Shape(_) | Error::Group(_) | Error::Linalg(_) | Error::Unsupported(_) | Error::NotACycle => EXIT_SCHEMA,
            Error::NotAChainMap(_) | Error::Verification(_) => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn schema(msg: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_SCHEMA, message: msg.to_string() }
}

type Outcome = Result<(String, u8), Failure>;

fn read_input(input: &str) -> Result<String, Failure> {
    if input.trim_start().starts_with('{') {
        return Ok(input.to_string());
    }
    std::fs::read_to_string(Path::new(input)).map_err(|e| schema(format!("{input}: {e}")))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_document(input: &str) -> Result<Document, Failure> {
    Ok(io::parse_document(&read_input(input)?)?)
}

fn load_cycle(args: &CycleArgs) -> Result<KoszulCycle, Failure> {
    let spec: CycleSpec = serde_json::from_str(&read_input(&args.cycle)?).map_err(schema)?;
    Ok(io::cycle_from_spec(args.p, args.a, &spec)?)
}

fn ea(p: u32, a: usize) -> GroupSpec {
    GroupSpec::ElementaryAbelian { p, rank: a }
}

fn ranks_line(c: &FreeComplex) -> String {
    let (lo, ranks) = c.native_ranks();
    format!("ranks from degree {lo}: {ranks:?}")
}

fn homology_line(c: &FreeComplex) -> String {
    let h = c.homology();
    let mut dims: Vec<(i64, usize)> = h.by_degree().into_iter().map(|(q, d)| (c.native(q), d)).collect();
    dims.sort_unstable();
    let parts: Vec<String> = dims.iter().map(|(n, d)| format!("{n}:{d}")).collect();
    format!("homology: {} (total {})", parts.join(" "), h.total())
}

fn cmd_group(input: &str, format: Format) -> Outcome {
    let text = read_input(input)?;
    let spec = match io::parse_document(&text) {
        Ok(doc) => {
            doc.algebra()?;
            doc.group
        }
        Err(_) => serde_json::from_str::<GroupSpec>(&text).map_err(schema)?,
    };
    let alg = GroupAlgebra::from_spec(&spec).map_err(Error::from)?;
    let dims = alg.ideals().dims();
    let alpha = alg.jennings().alpha().to_vec();
    let poincare = graded_ring(&alg)?.poincare();
    let d1 = d1_solver(&alg)?;
    let d1_lines: Vec<String> = (0..alpha.len()).map(|j| d1.render(j)).collect();
    if format == Format::Json {
        let v = json!({
            "order": alg.order(),
            "p": alg.p(),
            "L": alg.l(),
            "ideal_dims": dims,
            "alpha": alpha,
            "poincare": poincare,
            "d1": d1_lines,
        });
        return Ok((pretty(&v), 0));
    }
    let mut s = String::new();
    writeln!(s, "group: {}", alg.group().name()).unwrap();
    writeln!(s, "|G| = {}, p = {}, L = {}", alg.order(), alg.p(), alg.l()).unwrap();
    writeln!(s, "dim I^k, k = 0..L+1: {dims:?}").unwrap();
    writeln!(s, "Jennings alpha: {alpha:?}").unwrap();
    writeln!(s, "gr Poincare series: {poincare:?}").unwrap();
    for line in d1_lines {
        writeln!(s, "{line}").unwrap();
    }
    Ok((s, 0))
}

fn cmd_ss(input: &str, page: Option<usize>, format: Format) -> Outcome {
    let doc = load_document(input)?;
    let alg = doc.algebra()?;
    let c = doc.complex(&alg)?;
    let fc = filter(&c)?;
    let pages = match page {
        Some(r) => vec![fc.page(r)?],
        None => fc.pages()?,
    };
    let conv = fc.einfty_check()?;
    let s = match format {
        Format::Json => pretty(&json!({
            "pages": pages.iter().map(|p| p.summary()).collect::<Vec<_>>(),
            "convergence": conv,
        })),
        Format::Csv => {
            let mut s = String::from("r,k,q,dim,d_rank\n");
            for p in &pages {
                s.extend(p.csv().lines().skip(1).map(|l| format!("{l}\n")));
            }
            s
        }
        Format::Ascii => {
            let mut s = String::new();
            for p in &pages {
                s.push_str(&p.ascii());
                s.push('\n');
            }
            let parts: Vec<String> = conv.rows.iter().map(|(q, e, h)| format!("{q}:{e}/{h}")).collect();
            writeln!(s, "E_inf vs H (q:sum/dim): {} {}", parts.join(" "), if conv.ok { "ok" } else { "MISMATCH" }).unwrap();
            s
        }
    };
    Ok((s, 0))
}

fn cmd_koszul(p: u32, a: usize, emit: bool) -> Outcome {
    let k = build_koszul(p, a)?;
    if emit {
        return Ok((pretty(&io::document_for(&ea(p, a), k.complex())), 0));
    }
    let s = format!("Koszul complex, p = {p}, a = {a}\n{}\n{}\n", ranks_line(k.complex()), homology_line(k.complex()));
    Ok((s, 0))
}

fn cmd_cone(args: &CycleArgs, dual: bool, emit: bool) -> Outcome {
    let w = load_cycle(args)?;
    let k = build_koszul(args.p, args.a)?;
    let c = if dual { k.dual_cone(&w)? } else { k.build_cone(&w)? };
    if emit {
        return Ok((pretty(&io::document_for(&ea(args.p, args.a), &c)), 0));
    }
    let (m, _) = c.minimize()?;
    let s = format!(
        "{} of w = {}\n{}\n{}\nminimal {}\n",
        if dual { "dual cone" } else { "cone" },
        serde_json::to_string(&io::cycle_to_spec(&w)).expect("serializable"),
        ranks_line(&c),
        homology_line(&c),
        ranks_line(&m)
    );
    Ok((s, 0))
}

fn cmd_obstruct(args: &CycleArgs) -> Outcome {
    let w = load_cycle(args)?;
    let ob = leibniz_obstruction(&w)?;
    let mut v = serde_json::to_value(&ob).expect("serializable");
    if args.p == 2 {
        let dual = build_koszul(args.p, args.a)?.dual_cone(&w)?;
        let ideal = annihilator_ideal(&dual)?;
        v["annihilator_ideal"] = json!(ideal.to_string());
    }
    let code = match ob {
        Obstruction::Witness(_) => EXIT_NOT_REALIZABLE,
        Obstruction::NoObstruction { .. } => 0,
    };
    Ok((pretty(&v), code))
}

fn cmd_realize(args: &CycleArgs, emit: bool) -> Outcome {
    let w = load_cycle(args)?;
    let res = realize_cone(&w)?;
    let (v, code) = match &res {
        RealizationResult::Realized { model_name, model, certificate, .. } => {
            let mut v = json!({ "verdict": res.verdict(), "model": model_name, "certificate": certificate });
            if emit {
                v["model_complex"] = serde_json::to_value(io::document_for(&ea(args.p, args.a), model)).expect("serializable");
            }
            (v, 0)
        }
        RealizationResult::NotRealizable(wit) => (json!({ "verdict": res.verdict(), "witness": wit }), EXIT_NOT_REALIZABLE),
        RealizationResult::EmptySpace { cone_homology_total } => (json!({ "verdict": res.verdict(), "cone_homology_total": cone_homology_total }), 0),
    };
    Ok((pretty(&v), code))
}

fn cmd_minimize(input: &str) -> Outcome {
    let doc = load_document(input)?;
    let alg = doc.algebra()?;
    let c = doc.complex(&alg)?;
    let (m, _) = c.minimize()?;
    let mut out = doc.clone();
    out.complex = Some(io::complex_to_spec(&m));
    Ok((pretty(&out), 0))
}

fn configure_threads() {
    if let Some(n) = std::env::var("AUGSPEC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Group { input, format } => cmd_group(input, *format),
        Command::Ss { input, page, format } => cmd_ss(input, *page, *format),
        Command::Koszul { p, a, emit_model } => cmd_koszul(*p, *a, *emit_model),
        Command::Cone { cycle, dual, emit_model } => cmd_cone(cycle, *dual, *emit_model),
        Command::Obstruct { cycle } => cmd_obstruct(cycle),
        Command::Realize { cycle, emit_model } => cmd_realize(cycle, *emit_model),
        Command::Minimize { input } => cmd_minimize(input),
    };
    match outcome {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
