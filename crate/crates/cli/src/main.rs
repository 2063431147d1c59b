use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use itypes::inhabitants::{classify_itype, enumerate_inhabitants, sweep_small_types, Order, Verdict};
use itypes::polarity::{erase_quantifiers, is_proper, polarity};
use itypes::reduction::{beta_eta_normalize, beta_normalize, eta_normalize, head_reduce, uv_normalize};
use itypes::selftest::{run_golden, run_selftest, SelftestConfig, GOLDENS};
use itypes::typing::{classify_forall_elims, search_f_derivation, Context, Derivation, SearchBudget, SearchOutcome};
use itypes::witness::k_witness;
use itypes::{parse_term, parse_type, print_term, print_type, Term, TypeExpr};

#[derive(Parser)]
#[command(name = "itypes", version, about = "λI-terms, System F derivations and I-type classification")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Reduction step limit.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
    /// Largest size of an enumerated inhabitant.
    #[arg(long, global = true, default_value_t = 24)]
    size_bound: usize,
    /// Largest connective count of a type instantiating a quantifier.
    #[arg(long, global = true, default_value_t = 8)]
    inst_size: usize,
    /// One JSON document per result.
    #[arg(long, global = true)]
    json: bool,
    /// Goldens file (JSON lines) for `selftest` and `sweep`.
    #[arg(long, global = true)]
    golden: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and pretty-print a term or a type.
    Parse(Input),
    /// Normalize a term.
    Normalize {
        #[arg(long)]
        term: String,
        #[arg(long, value_enum, default_value_t = Strategy::BetaEta)]
        strategy: Strategy,
    },
    /// Search for a System F derivation of a closed β-normal term.
    Typecheck {
        #[arg(long)]
        term: String,
        #[arg(long = "type")]
        ty: String,
    },
    /// ∀⁺ / ∀⁻ membership and properness.
    Polarity {
        #[arg(long = "type")]
        ty: String,
    },
    /// Drop every quantifier after renaming bound variables apart.
    Erase {
        #[arg(long = "type")]
        ty: String,
    },
    /// Closed βη-normal inhabitants up to the size bound.
    Inhabit {
        #[arg(long = "type")]
        ty: String,
    },
    /// I-type verdict and order.
    Classify {
        #[arg(long = "type")]
        ty: String,
        /// Exit with status 1 unless the verdict is an I-type.
        #[arg(long)]
        expect_itype: bool,
    },
    /// Turn a λI inhabitant of a type outside ∀⁺ into a λK inhabitant.
    Witness {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        term: String,
    },
    /// Classify every small closed proper type.
    Sweep {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        quantifiers: u8,
        /// Largest number of arrows and quantifiers.
        #[arg(long, default_value_t = 9)]
        type_bound: usize,
    },
    /// Run the goldens and the property checks.
    Selftest {
        /// Only checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Random cases per property check.
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    #[arg(long)]
    term: Option<String>,
    #[arg(long = "type")]
    ty: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Beta,
    Eta,
    BetaEta,
    Head,
    Uv,
}

enum Failure {
    Usage(String),
    Domain(String),
}

type Outcome = Result<(), Failure>;

fn term(s: &str) -> Result<Term, Failure> {
    parse_term(s).map_err(|e| Failure::Usage(format!("cannot parse term: {e}")))
}

fn ty(s: &str) -> Result<TypeExpr, Failure> {
    parse_type(s).map_err(|e| Failure::Usage(format!("cannot parse type: {e}")))
}

fn say(line: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, doc: Value, text: impl FnOnce() -> String) {
        if self.json {
            say(doc);
        } else {
            say(text());
        }
    }
}

fn derivation_text(d: &Derivation) -> String {
    let mut lines = Vec::new();
    d.visit(&mut |path, n| {
        lines.push(format!(
            "{}{} : {}   [{}]",
            "  ".repeat(path.len()),
            print_term(n.subject()),
            print_type(n.ty()),
            n.to_json()["rule"].as_str().unwrap_or_default()
        ))
    });
    lines.join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    let out = Out { json: g.json };
    let budget = SearchBudget::with_inst_size(g.inst_size);
    let goldens = match &g.golden {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        None => GOLDENS.to_string(),
    };
    match cli.command {
        Command::Parse(Input { term: Some(t), .. }) => {
            let t = term(&t)?;
            out.emit(json!({ "term": print_term(&t), "size": t.size(), "lambda_i": t.is_lambda_i().ok() }), || print_term(&t));
        }
        Command::Parse(Input { ty: Some(a), .. }) => {
            let a = ty(&a)?;
            out.emit(json!({ "type": print_type(&a), "size": a.size() }), || print_type(&a));
        }
        Command::Parse(_) => return Err(Failure::Usage("give --term or --type".into())),
        Command::Normalize { term: t, strategy } => {
            let t = term(&t)?;
            let r = match strategy {
                Strategy::Beta => beta_normalize(&t, g.fuel),
                Strategy::Eta => eta_normalize(&t),
                Strategy::BetaEta => beta_eta_normalize(&t, g.fuel),
                Strategy::Head => head_reduce(&t, g.fuel),
                Strategy::Uv => uv_normalize(&t, g.fuel),
            };
            out.emit(
                json!({ "result": print_term(&r.result), "steps": r.steps, "exhausted": r.exhausted }),
                || print_term(&r.result),
            );
            if r.exhausted {
                return Err(Failure::Domain(format!("fuel exhausted after {} steps", r.steps)));
            }
        }
        Command::Typecheck { term: t, ty: a } => {
            let (t, a) = (term(&t)?, ty(&a)?);
            match search_f_derivation(&Context::new(), &t, &a, &budget) {
                SearchOutcome::Found(d) => {
                    let elims = classify_forall_elims(&d);
                    out.emit(
                        json!({ "outcome": "found", "derivation": d.to_json(), "forall_elims": elims }),
                        || derivation_text(&d),
                    );
                }
                other => {
                    let label = if other == SearchOutcome::Unknown { "unknown" } else { "not-found" };
                    out.emit(json!({ "outcome": label }), || label.to_string());
                    return Err(Failure::Domain(String::new()));
                }
            }
        }
        Command::Polarity { ty: a } => {
            let a = ty(&a)?;
            let p = polarity(&a);
            let proper = is_proper(&a);
            let mut doc = serde_json::to_value(&p).unwrap_or_default();
            doc["proper"] = json!(proper);
            out.emit(doc, || {
                format!(
                    "in ∀⁺: {}\nin ∀⁻: {}\nproper: {}\nnegative quantifiers: {:?}",
                    p.in_pos, p.in_neg, proper, p.negative_quantifier_paths
                )
            });
        }
        Command::Erase { ty: a } => {
            let e = erase_quantifiers(&ty(&a)?);
            out.emit(json!({ "erased": print_type(&e) }), || print_type(&e));
        }
        Command::Inhabit { ty: a } => {
            let a = ty(&a)?;
            let found = enumerate_inhabitants(&a, g.size_bound, &budget);
            out.emit(
                json!({
                    "type": print_type(&a),
                    "bound": g.size_bound,
                    "inhabitants": found.iter().map(|(t, d)| json!({
                        "term": print_term(t),
                        "is_lambda_i": t.vacuous_binder().is_none(),
                        "derivation": d.to_json(),
                    })).collect::<Vec<_>>(),
                }),
                || found.iter().map(|(t, _)| print_term(t)).collect::<Vec<_>>().join("\n"),
            );
        }
        Command::Classify { ty: a, expect_itype } => {
            let r = classify_itype(&ty(&a)?, g.size_bound, &budget);
            out.emit(r.to_json(), || {
                let order = match r.order {
                    Order::Exact(n) => n.to_string(),
                    Order::AtLeast(n) => format!(">= {n}"),
                };
                let mut s = format!("verdict: {}\norder: {order}", r.verdict.name());
                match &r.verdict {
                    Verdict::NotIType { witness } => s += &format!("\nλK witness: {}", print_term(witness)),
                    Verdict::NotITypeByPolarity { obstruction } => s += &format!("\nobstruction: {obstruction:?}"),
                    _ => {}
                }
                s
            });
            if expect_itype && !r.is_itype() {
                return Err(Failure::Domain(String::new()));
            }
        }
        Command::Witness { ty: a, term: t } => {
            let (a, t) = (ty(&a)?, term(&t)?);
            match k_witness(&a, &t, &budget) {
                Some(trace) => out.emit(trace.to_json(), || {
                    format!(
                        "original: {}\nrewritten: {}\nλK witness: {}\n{}",
                        print_term(&trace.original),
                        print_term(&trace.rewritten),
                        print_term(&trace.final_term),
                        derivation_text(&trace.final_derivation)
                    )
                }),
                None => {
                    out.emit(json!({ "witness": null }), || "no λK witness found".into());
                    return Err(Failure::Domain(String::new()));
                }
            }
        }
        Command::Sweep { quantifiers, type_bound } => {
            let q = quantifiers as usize;
            if g.golden.is_some() {
                let mut matched = false;
                for line in goldens.lines().filter(|l| !l.trim().is_empty()) {
                    let v: Value = serde_json::from_str(line).map_err(|e| Failure::Usage(format!("malformed golden: {e}")))?;
                    if v["kind"] == "sweep" && v["quantifiers"].as_u64() == Some(q as u64) {
                        matched = true;
                        let name = v["name"].as_str().unwrap_or("sweep").to_string();
                        if let Err(e) = run_golden(&v, &budget) {
                            return Err(Failure::Domain(format!("{name}: {e}")));
                        }
                        out.emit(json!({ "golden": name, "passed": true }), || format!("{name}: ok"));
                    }
                }
                if !matched {
                    return Err(Failure::Domain(format!("no sweep golden for {q} quantifiers")));
                }
                return Ok(());
            }
            let entries = sweep_small_types(q, type_bound, g.size_bound, &budget);
            let mut consistent = true;
            for e in &entries {
                consistent &= e.consistent;
                if g.json {
                    say(e.to_json());
                } else if e.report.is_itype() || !e.consistent {
                    say(format!("{}  {}", print_type(&e.report.ty), e.shape.as_deref().unwrap_or("")));
                }
            }
            if !g.json {
                say(format!("{} types", entries.len()));
            }
            if !consistent {
                return Err(Failure::Domain("an I-type outside the expected shapes was found".into()));
            }
        }
        Command::Selftest { filter, cases } => {
            let config = SelftestConfig { cases, filter, budget, ..SelftestConfig::default() };
            let results = run_selftest(&goldens, &config);
            let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
            for r in &results {
                out.emit(r.to_json(), || {
                    let mark = if r.passed { "ok  " } else { "FAIL" };
                    if r.detail.is_empty() {
                        format!("{mark} {}", r.name)
                    } else {
                        format!("{mark} {}: {}", r.name, r.detail)
                    }
                });
            }
            if !failed.is_empty() {
                return Err(Failure::Domain(format!("failed: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}
