use std::collections::HashMap;
use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use presburger::arch::{self, IsoOptions};
use presburger::bfgames::Game;
use presburger::logic::axioms::axiom_sample;
use presburger::logic::{self, Env, Formula};
use presburger::models::{complete_diagram, Fact, ModelConfig};
use presburger::orders::Index;
use presburger::residues::ResidueJson;
use presburger::{Element, Model, Order, ResidueSequence};

#[derive(Parser)]
#[command(name = "presb", version, about = "Exact computation in models of Presburger arithmetic")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled elements.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a Presburger sentence over Z.
    Decide { formula: String },
    /// Quantifier-free equivalent of a formula.
    Qe { formula: String },
    /// Evaluate a formula in a model under an assignment.
    Eval {
        formula: String,
        #[arg(long)]
        model: String,
        /// `name=literal`, repeatable.
        #[arg(long = "env")]
        env: Vec<String>,
    },
    /// Starred translation of an order sentence; with --order, evaluate both sides.
    TranslateStar {
        formula: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Residue table of the CRT encoding of a finite set.
    EncodeSet {
        members: Vec<u64>,
        /// Members as one comma-separated list.
        #[arg(long, value_delimiter = ',')]
        set: Vec<u64>,
        #[arg(long, default_value_t = 12)]
        bound: u64,
    },
    /// Read a finite set back from a residue sequence.
    DecodeSet {
        /// Sequence as JSON, e.g. {"kind":"set","members":[0,3]}.
        sequence: Option<String>,
        /// Table file of `n: r_n` lines instead (`-` for stdin).
        #[arg(long)]
        table: Option<String>,
        #[arg(long, default_value_t = 40)]
        bound: u64,
    },
    /// Back-and-forth relation (left, ā) ≤_α (right, b̄).
    Game {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        /// Comma-separated indices of ā.
        #[arg(long, default_value = "")]
        left_tuple: String,
        #[arg(long, default_value = "")]
        right_tuple: String,
        /// Both tuples at once: `ā;b̄`.
        #[arg(long, conflicts_with_all = ["left_tuple", "right_tuple"])]
        tuples: Option<String>,
    },
    /// Recover the order of Archimedean classes from a sample.
    ArchRank {
        #[arg(long)]
        model: String,
        /// Sample size.
        #[arg(long, default_value_t = 32)]
        bound: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Isomorphism determined by basis images, evaluated on probes (JSON list of {probe, image}).
    Iso {
        #[arg(long)]
        model: String,
        #[arg(long)]
        target: String,
        #[arg(long = "basis")]
        basis: Vec<String>,
        #[arg(long = "image")]
        image: Vec<String>,
        #[arg(long = "probe")]
        probe: Vec<String>,
        /// Residues of basis elements are compared up to this modulus.
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Bounded checks of the Pr, Plain and Ψ axioms on a sample.
    AxiomsCheck {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 30)]
        bound: u64,
        #[arg(long, default_value_t = 20)]
        sample: usize,
    },
    /// Answer an atomic query from an enumerated diagram.
    DiagramComplete {
        /// File with one fact per line (`-` for stdin).
        #[arg(long)]
        facts: String,
        #[arg(long)]
        query: String,
        #[arg(long)]
        budget: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PRESB_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn model(text: &str) -> Result<Model> {
    let cfg = ModelConfig::parse(text)?;
    Ok(cfg.build()?)
}

fn formula(text: &str) -> Result<Formula> {
    logic::parse(text).with_context(|| format!("in formula {text:?}"))
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn indices(text: &str) -> Result<Vec<Index>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("bad index {s:?}")))
        .collect()
}

fn elements(m: &Model, lits: &[String]) -> Result<Vec<Element>> {
    lits.iter()
        .map(|l| m.parse_element(l).with_context(|| format!("in literal {l:?}")))
        .collect()
}

fn verdict(json: bool, value: bool, extra: Value) -> String {
    if json {
        let mut obj = extra;
        obj["value"] = json!(value);
        obj.to_string()
    } else {
        value.to_string()
    }
}

fn run(cli: &Cli) -> Result<String> {
    let json = cli.json;
    Ok(match &cli.cmd {
        Cmd::Decide { formula: text } => {
            let f = formula(text)?;
            let v = logic::decide_sentence(&f)?;
            verdict(json, v, json!({ "formula": f.to_string() }))
        }
        Cmd::Qe { formula: text } => {
            let f = formula(text)?;
            let g = logic::eliminate_quantifiers(&f)?;
            if json {
                json!({ "input": f.to_string(), "output": g.to_string() }).to_string()
            } else {
                g.to_string()
            }
        }
        Cmd::Eval {
            formula: text,
            model: cfg,
            env,
        } => {
            let m = model(cfg)?;
            let f = formula(text)?;
            let mut e = Env::new();
            for binding in env {
                let (name, lit) = binding
                    .split_once('=')
                    .with_context(|| format!("expected name=literal, got {binding:?}"))?;
                e.insert(name.trim().to_string(), m.parse_element(lit)?);
            }
            let v = logic::eval_formula(&m, &f, &e)?;
            verdict(json, v, json!({ "formula": f.to_string() }))
        }
        Cmd::TranslateStar { formula: text, order } => {
            let f = formula(text)?;
            let star = logic::translate_star(&f)?;
            match order {
                None if json => json!({ "input": f.to_string(), "star": star.to_string() }).to_string(),
                None => star.to_string(),
                Some(spec) => {
                    let order: Order = spec.parse()?;
                    let in_order = logic::eval_in_order(&order, &f, &HashMap::new())?;
                    let in_pl = logic::eval_star(&Model::pl(order), &star, &Env::new())?;
                    if json {
                        json!({
                            "input": f.to_string(),
                            "star": star.to_string(),
                            "order_value": in_order,
                            "star_value": in_pl,
                        })
                        .to_string()
                    } else {
                        format!("{star}\norder: {in_order}\nstar: {in_pl}")
                    }
                }
            }
        }
        Cmd::EncodeSet { members, set, bound } => {
            let r = ResidueSequence::encode_set(members.iter().chain(set).copied());
            let table = r.table(*bound);
            if json {
                json!({ "sequence": r.to_json(), "table": table }).to_string()
            } else {
                let rows: Vec<String> = table.iter().map(|(n, v)| format!("{n}: {v}")).collect();
                rows.join("\n")
            }
        }
        Cmd::DecodeSet { sequence, table, bound } => {
            let r = match (sequence, table) {
                (Some(text), None) => {
                    let j: ResidueJson = serde_json::from_str(text).context("parsing sequence JSON")?;
                    ResidueSequence::from_json(&j)?
                }
                (None, Some(path)) => table_sequence(&read_input(path)?, *bound)?,
                _ => bail!("give exactly one of SEQUENCE or --table"),
            };
            let set = r.decode_set(*bound)?;
            if json {
                json!({ "members": set }).to_string()
            } else {
                let items: Vec<String> = set.iter().map(u64::to_string).collect();
                format!("{{{}}}", items.join(","))
            }
        }
        Cmd::Game {
            left,
            right,
            alpha,
            left_tuple,
            right_tuple,
            tuples,
        } => {
            let (a, b) = match tuples {
                Some(t) => {
                    let (a, b) = t.split_once(';').context("--tuples expects `a;b`")?;
                    (indices(a)?, indices(b)?)
                }
                None => (indices(left_tuple)?, indices(right_tuple)?),
            };
            let game = Game::new(left.parse()?, right.parse()?);
            let v = game.verdict(*alpha, &a, &b)?;
            if json {
                serde_json::to_string(&v)?
            } else {
                let mut lines = vec![v.holds.to_string()];
                if let Some((beta, d)) = &v.refuted_by {
                    lines.push(format!("no answer at level {beta} to extension {d:?}"));
                }
                for r in &v.strategy {
                    lines.push(format!("{:?} -> {:?}", r.d, r.c));
                }
                lines.join("\n")
            }
        }
        Cmd::ArchRank { model: cfg, bound, budget } => {
            let m = model(cfg)?;
            let sample = arch::default_sample(&m, *bound, cli.seed);
            let rec = arch::recover_order(&m, sample, *budget)?;
            let reps: Vec<String> = rec.representatives.iter().map(Element::to_string).collect();
            if json {
                json!({ "order": rec.order.to_string(), "representatives": reps, "steps": rec.steps }).to_string()
            } else {
                rec.order.to_string()
            }
        }
        Cmd::Iso {
            model: src,
            target,
            basis,
            image,
            probe,
            bound,
        } => {
            let src = model(src)?;
            let dst = model(target)?;
            let graph = arch::build_isomorphism(
                &src,
                &dst,
                &elements(&src, basis)?,
                &elements(&dst, image)?,
                &elements(&src, probe)?,
                IsoOptions { residue_bound: *bound },
            )?;
            let map: Vec<Value> = graph
                .iter()
                .map(|(p, q)| json!({ "probe": p.to_string(), "image": q.to_string() }))
                .collect();
            Value::Array(map).to_string()
        }
        Cmd::AxiomsCheck {
            model: cfg,
            bound,
            sample,
        } => {
            let m = model(cfg)?;
            let s = axiom_sample(&m, *sample, cli.seed);
            let report = logic::check_pr_plain_psi(&m, &s, *bound);
            if json {
                serde_json::to_string(&report)?
            } else {
                let mark = |b: bool| if b { "pass" } else { "fail" };
                let mut lines = vec![
                    format!("Pr: {}", mark(report.pr.passed)),
                    format!("Plain: {} ({})", mark(report.plain.passed), report.plain.caveat),
                    format!("Psi: {}", mark(report.psi.passed)),
                ];
                if let Some((x, y)) = &report.psi.failure {
                    lines.push(format!("  failing pair: {x} , {y}"));
                }
                lines.push(format!("Z: {}", mark(report.z_scott.passed)));
                lines.join("\n")
            }
        }
        Cmd::DiagramComplete { facts, query, budget } => {
            let text = read_input(facts)?;
            let stream: Vec<Fact> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.parse().with_context(|| format!("in fact {l:?}")))
                .collect::<Result<_>>()?;
            let q: Fact = query.parse()?;
            let budget = budget.unwrap_or(stream.len());
            let c = complete_diagram(stream, &q, budget)?;
            verdict(json, c.value, json!({ "query": q.to_string(), "steps": c.steps }))
        }
    })
}

/// A sequence given by an explicit table; the primes needed for decoding
/// must all be present.
fn table_sequence(text: &str, k_max: u64) -> Result<ResidueSequence> {
    let mut rows = HashMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (n, r) = line.split_once(':').with_context(|| format!("expected `n: r`, got {line:?}"))?;
        let n: u64 = n.trim().parse().with_context(|| format!("bad modulus in {line:?}"))?;
        let r: u64 = r.trim().parse().with_context(|| format!("bad residue in {line:?}"))?;
        if n == 0 || r >= n {
            bail!("row {line:?} is out of range");
        }
        rows.insert(n, r);
    }
    for k in 0..=k_max {
        let p = presburger::arith::nth_prime(k as usize);
        if !rows.contains_key(&p) {
            bail!("table has no row for modulus {p}");
        }
    }
    let rows = Arc::new(rows);
    Ok(ResidueSequence::custom(
        "table",
        Arc::new(move |n| rows.get(&n).copied().unwrap_or(0)),
    ))
}
