mod suites;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use equikt::bott_tower::{restrict_basis_class, structure_consts_by_restriction, tower_structure_const};
use equikt::flag_kt::{psi_restrict, q_const, q_table, t_const, WordSpec};
use equikt::kk_oracle::psi_table;
use equikt::root_weyl::{parse_word, DEFAULT_CAP};
use equikt::{BitWord, CartanMatrix, CharPoly, TowerSpec, WeylElt};

#[derive(Parser)]
#[command(name = "equikt", version, about = "Exact structure constants in torus-equivariant K-theory")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,

    /// Shorthand for `--output json`.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// q_{u,v}^w for a reduced word of w.
    Qconst(Triple),
    /// All nonzero q_{u,v}^w.
    Qtable(Pair),
    /// The ordinary constant t_{u,v}^w, computed two ways.
    Tconst(Triple),
    /// r_{e1,e2}^{e3} for a Bott tower.
    Rconst(TowerTriple),
    /// χ(Γ_{e3}, μ_{e1} μ_{e2}) for a Bott-Samelson word.
    Bsconst(BsTriple),
    /// Fixed-point restrictions: of a tower basis class, or ψ^u(w).
    Restrict(RestrictArgs),
    /// The table ψ^u(x) on the interval below a top element.
    Psitable(PsiArgs),
    /// Runs a verification suite and prints a report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CartanArg {
    /// Preset (A1, A2, A3, B2, G2) or @file.json with {"rank", "matrix"}.
    #[arg(long)]
    cartan: String,
}

#[derive(Args)]
struct Triple {
    #[command(flatten)]
    cartan: CartanArg,
    /// Word for u; the empty string is the identity.
    #[arg(long, default_value = "")]
    u: String,
    #[arg(long, default_value = "")]
    v: String,
    /// Reduced word for w.
    #[arg(long, default_value = "")]
    w: String,
}

#[derive(Args)]
struct Pair {
    #[command(flatten)]
    cartan: CartanArg,
    #[arg(long, default_value = "")]
    u: String,
    #[arg(long, default_value = "")]
    v: String,
    /// Enumeration cap; required for infinite groups.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct TowerTriple {
    /// Tower as JSON, e.g. '{"n":2,"c":{"1,2":-1}}', or @file.json.
    #[arg(long)]
    tower: String,
    #[arg(long)]
    e1: String,
    #[arg(long)]
    e2: String,
    #[arg(long)]
    e3: String,
    /// Also solve by fixed-point restriction and fail on disagreement.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct BsTriple {
    #[command(flatten)]
    cartan: CartanArg,
    /// The word defining the Bott-Samelson variety.
    #[arg(long)]
    word: String,
    #[arg(long)]
    e1: String,
    #[arg(long)]
    e2: String,
    #[arg(long)]
    e3: String,
}

#[derive(Args)]
struct RestrictArgs {
    /// Restrict a tower basis class (with --eps) instead of ψ^u.
    #[arg(long, conflicts_with_all = ["cartan", "u", "w"])]
    tower: Option<String>,
    #[arg(long, requires = "tower")]
    eps: Option<String>,
    #[arg(long)]
    cartan: Option<String>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    w: Option<String>,
}

#[derive(Args)]
struct PsiArgs {
    #[command(flatten)]
    cartan: CartanArg,
    /// Word of the top element.
    #[arg(long)]
    top: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: suites::Suite,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

/// What a command prints: a text form and a JSON form of the same result.
pub struct Rendered {
    pub text: String,
    pub json: Value,
    /// Nonzero statuses for results that were computed but are not clean,
    /// such as a verification report with failures.
    pub status: u8,
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(text.to_string()),
    }
}

fn cartan(text: &str) -> Result<CartanMatrix> {
    if text.starts_with('@') {
        let value: Value = serde_json::from_str(&read_arg(text)?).map_err(input_err)?;
        return Ok(CartanMatrix::from_json(&value)?);
    }
    Ok(CartanMatrix::preset(text)?)
}

fn tower(text: &str) -> Result<TowerSpec> {
    let value: Value = serde_json::from_str(&read_arg(text)?).map_err(input_err)?;
    Ok(TowerSpec::from_json(&value)?)
}

fn input_err(e: impl std::fmt::Display) -> equikt::Error {
    equikt::Error::InvalidInput(e.to_string())
}

fn element(c: &CartanMatrix, text: &str) -> Result<WeylElt> {
    Ok(c.element(&parse_word(text)?)?)
}

fn reduced_word(c: &CartanMatrix, text: &str) -> Result<Vec<usize>> {
    let word = parse_word(text)?;
    c.reduced_element(&word)?;
    Ok(word)
}

fn bitword(text: &str) -> Result<BitWord> {
    Ok(BitWord::parse(text)?)
}

fn poly_json(p: &CharPoly) -> Value {
    json!({ "value": p.to_string(), "terms": p.to_json() })
}

fn value(command: &str, inputs: Value, p: &CharPoly) -> Rendered {
    let mut json = json!({ "command": command, "inputs": inputs });
    json.as_object_mut().unwrap().extend(poly_json(p).as_object().unwrap().clone());
    Rendered { text: p.to_string(), json, status: 0 }
}

fn run(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Qconst(a) => {
            let c = cartan(&a.cartan.cartan)?;
            let (u, v) = (element(&c, &a.u)?, element(&c, &a.v)?);
            let w = reduced_word(&c, &a.w)?;
            let q = q_const(&c, &u, &v, &w)?;
            let inputs = json!({ "cartan": c.entries(), "u": u.to_string(), "v": v.to_string(), "w": c.element(&w)?.to_string() });
            Ok(value("qconst", inputs, &q))
        }
        Command::Tconst(a) => {
            let c = cartan(&a.cartan.cartan)?;
            let (u, v) = (element(&c, &a.u)?, element(&c, &a.v)?);
            let w = reduced_word(&c, &a.w)?;
            let t = t_const(&c, &u, &v, &w)?;
            let json = json!({
                "command": "tconst",
                "inputs": { "cartan": c.entries(), "u": u.to_string(), "v": v.to_string(), "w": c.element(&w)?.to_string() },
                "value": t.to_string(),
            });
            Ok(Rendered { text: t.to_string(), json, status: 0 })
        }
        Command::Qtable(a) => {
            let c = cartan(&a.cartan.cartan)?;
            let (u, v) = (element(&c, &a.u)?, element(&c, &a.v)?);
            let table = q_table(&c, &u, &v, a.cap)?;
            let mut text = String::new();
            for (w, q) in &table.entries {
                text.push_str(&format!("{w}\t{q}\n"));
            }
            if !table.complete {
                text.push_str(&format!("# truncated: complete through length {}\n", table.max_length));
            }
            let entries: Vec<Value> = table
                .entries
                .iter()
                .map(|(w, q)| json!({ "w": w.to_string(), "word": w.word(), "value": q.to_string(), "terms": q.to_json() }))
                .collect();
            let json = json!({
                "command": "qtable",
                "inputs": { "cartan": c.entries(), "u": u.to_string(), "v": v.to_string() },
                "complete": table.complete,
                "max_length": table.max_length,
                "entries": entries,
            });
            Ok(Rendered { text: text.trim_end().to_string(), json, status: 0 })
        }
        Command::Rconst(a) => {
            let spec = tower(&a.tower)?;
            let (e1, e2, e3) = (bitword(&a.e1)?, bitword(&a.e2)?, bitword(&a.e3)?);
            let r = tower_structure_const(&spec, &e1, &e2, &e3)?;
            if a.check {
                let solved = structure_consts_by_restriction(&spec, &e1, &e2)?;
                if solved.get(&e3) != Some(&r) {
                    return Err(equikt::Error::Consistency(format!(
                        "rule engine gives {r}, fixed-point solve gives {}",
                        solved.get(&e3).map(|p| p.to_string()).unwrap_or_default()
                    ))
                    .into());
                }
            }
            let inputs = json!({ "tower": spec.to_json(), "e1": e1.to_string(), "e2": e2.to_string(), "e3": e3.to_string() });
            Ok(value("rconst", inputs, &r))
        }
        Command::Bsconst(a) => {
            let c = cartan(&a.cartan.cartan)?;
            let ws = WordSpec::new(&c, &parse_word(&a.word)?)?;
            let (e1, e2, e3) = (bitword(&a.e1)?, bitword(&a.e2)?, bitword(&a.e3)?);
            let x = ws.bs_structure_const(&e1, &e2, &e3)?;
            let inputs = json!({ "cartan": c.entries(), "word": ws.word(), "e1": e1.to_string(), "e2": e2.to_string(), "e3": e3.to_string() });
            Ok(value("bsconst", inputs, &x))
        }
        Command::Restrict(a) => restrict(a),
        Command::Psitable(a) => {
            let c = cartan(&a.cartan.cartan)?;
            let top = element(&c, &a.top)?;
            let table = psi_table(&c, &top, a.cap)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for u in table.elements() {
                for x in table.elements() {
                    let p = table.get(u, x);
                    if !p.is_zero() {
                        text.push_str(&format!("{u}\t{x}\t{p}\n"));
                        rows.push(json!({ "u": u.to_string(), "x": x.to_string(), "value": p.to_string(), "terms": p.to_json() }));
                    }
                }
            }
            let json = json!({ "command": "psitable", "inputs": { "cartan": c.entries(), "top": top.to_string() }, "entries": rows });
            Ok(Rendered { text: text.trim_end().to_string(), json, status: 0 })
        }
        Command::Verify(a) => suites::run(a.suite, a.seed),
    }
}

fn restrict(a: &RestrictArgs) -> Result<Rendered> {
    if let Some(t) = &a.tower {
        let spec = tower(t)?;
        let eps = bitword(a.eps.as_deref().ok_or_else(|| input_err("--tower needs --eps"))?)?;
        let cls = restrict_basis_class(&spec, &eps)?;
        let text = cls.iter().map(|(at, p)| format!("{at}\t{p}")).collect::<Vec<_>>().join("\n");
        let values: serde_json::Map<String, Value> = cls.iter().map(|(at, p)| (at.to_string(), poly_json(p))).collect();
        let json = json!({ "command": "restrict", "inputs": { "tower": spec.to_json(), "eps": eps.to_string() }, "values": values });
        return Ok(Rendered { text, json, status: 0 });
    }
    let c = cartan(a.cartan.as_deref().ok_or_else(|| input_err("restrict needs --tower or --cartan"))?)?;
    let u = element(&c, a.u.as_deref().unwrap_or(""))?;
    let w = element(&c, a.w.as_deref().unwrap_or(""))?;
    let p = psi_restrict(&c, &u, &w)?;
    let inputs = json!({ "cartan": c.entries(), "u": u.to_string(), "w": w.to_string() });
    Ok(value("restrict", inputs, &p))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<equikt::Error>() {
        Some(equikt::Error::CapExceeded { .. }) => 2,
        Some(e) if e.is_input_error() => 1,
        Some(_) => 3,
        // file and JSON problems
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    let json = cli.json || cli.output == Output::Json;
    match run(&cli) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(r.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
