use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use aqft_core::aqft::{check_aqft, time_slice_verdict, what_generators, AqftModel};
use aqft_core::bundle::{self, Bundle, REFLECTION_KEYS};
use aqft_core::corpus;
use aqft_core::linalg::Matrix;
use aqft_core::localize::{certify_reflective, derive_w, MorphismSet};
use aqft_core::operad::{canonical, op_compose, op_equal, OperadOp};
use aqft_core::ortho::OrthoCat;
use aqft_core::rational::format_q;
use aqft_core::report::{Report, SampleConfig};
use aqft_core::strictify::{bar_truncated, check_idempotent, rce_action, strictify_reflective, tot_normalized, RceMode};
use aqft_core::Error;

#[derive(Parser)]
#[command(name = "aqft-kit", version, about = "Checks orthogonal categories, operads and algebraic quantum field theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 256)]
    samples: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the orthogonality relation of a bundle.
    CheckOrtho { bundle: Option<PathBuf> },
    /// Decide whether two operations are equal in the operad.
    OperadEqual {
        bundle: Option<PathBuf>,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Compare in the plain associative operad, ignoring orthogonality.
        #[arg(long)]
        ignore_orthogonality: bool,
    },
    /// Compose an operation with a list of inner operations.
    OperadCompose {
        bundle: Option<PathBuf>,
        #[arg(long)]
        outer: String,
        #[arg(long = "inner")]
        inners: Vec<String>,
    },
    /// Certify the reflective localization data of a bundle.
    CheckReflective { bundle: Option<PathBuf> },
    /// List the morphisms sent to isomorphisms by the localization functor.
    DeriveW { bundle: Option<PathBuf> },
    /// Check functoriality, algebra maps and causality of each model.
    CheckAqft {
        bundle: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
    },
    /// Classify each model's time-slice behaviour.
    TimeSlice {
        bundle: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        /// `all`, `iso-preimage` or a comma separated list of morphisms.
        #[arg(long)]
        w: Option<String>,
    },
    /// Strictify each model along the bundle's reflective localization.
    Strictify {
        bundle: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        /// Take the localization from this bundle instead.
        #[arg(long)]
        reflective: Option<PathBuf>,
    },
    /// Compute the action of the relative Cauchy loop.
    Rce {
        bundle: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        /// Check the group law for |n| up to this bound.
        #[arg(long, default_value_t = 5)]
        range: i64,
    },
    /// Build the truncated bar resolution and test its augmentation.
    Bar {
        bundle: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        weight: usize,
        /// Degree window `a:b`.
        #[arg(long, default_value = "0:2", allow_hyphen_values = true)]
        window: String,
    },
    /// Enumerate the derivation generators of the free theory.
    WhatGenerators {
        bundle: Option<PathBuf>,
        /// Shift range `a:b`.
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        shifts: String,
        #[arg(long, default_value_t = 2)]
        max_weight: usize,
    },
    /// Work with the built-in examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Emit { name: String },
    Verify { name: Option<String> },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strict,
    Homology,
}

/// What a command produces: a JSON document, its text rendering, and
/// whether every verdict in it passed.
struct Outcome {
    json: Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn report(r: &Report) -> Outcome {
        Outcome { json: json!(r), text: r.to_string(), passed: r.passed() }
    }

    fn reports(rs: &[Report]) -> Outcome {
        Outcome {
            json: json!(rs),
            text: rs.iter().map(|r| r.to_string()).collect(),
            passed: rs.iter().all(Report::passed),
        }
    }
}

fn read_text(path: Option<&Path>) -> Result<String, Error> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn parse_doc(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::schema(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

fn load(path: Option<&Path>) -> Result<Bundle, Error> {
    bundle::from_json(&parse_doc(&read_text(path)?)?)
}

fn select<'a>(b: &'a Bundle, name: &Option<String>) -> Result<Vec<&'a AqftModel>, Error> {
    match name {
        Some(n) => Ok(vec![b.model(n)?]),
        None if b.models.is_empty() => Err(Error::schema("$.models", "the bundle has no models")),
        None => Ok(b.models.iter().collect()),
    }
}

fn range(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::Parse(format!("expected `a:b`, found `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn matrix_json(m: &Matrix) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn graded_json(g: &BTreeMap<i64, Matrix>) -> Value {
    Value::Object(g.iter().map(|(d, m)| (d.to_string(), matrix_json(m))).collect())
}

fn graded_text(g: &BTreeMap<i64, Matrix>) -> String {
    let parts: Vec<String> = g
        .iter()
        .map(|(d, m)| {
            let rows: Vec<String> = m.to_rows().iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>().join(" ")).collect();
            format!("deg {d}: [{}]", rows.join("; "))
        })
        .collect();
    parts.join(", ")
}

fn parse_w(b: &Bundle, s: &str) -> Result<MorphismSet, Error> {
    match s {
        "all" => Ok(MorphismSet::All),
        "iso-preimage" => derive_w(b.localization.as_ref().ok_or_else(|| Error::schema("$.left", "`iso-preimage` needs a localization"))?),
        list => {
            let labels: Vec<String> = list.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
            MorphismSet::parse(&b.base.cat, &labels)
        }
    }
}

fn run(cmd: Command, cfg: &SampleConfig) -> Result<Outcome, Error> {
    match cmd {
        Command::CheckOrtho { bundle } => {
            let b = load(bundle.as_deref())?;
            Ok(Outcome::report(&b.base.rel.validate(&b.base.cat, cfg)?))
        }
        Command::OperadEqual { bundle, lhs, rhs, ignore_orthogonality } => {
            let b = load(bundle.as_deref())?;
            let cat = &b.base.cat;
            let oc = if ignore_orthogonality { OrthoCat::empty(cat.clone()) } else { b.base.clone() };
            let (x, y) = (OperadOp::parse(cat, &lhs)?, OperadOp::parse(cat, &rhs)?);
            let equal = op_equal(&x, &y, &oc)?;
            let (cx, cy) = (canonical(&x, &oc)?.render(cat), canonical(&y, &oc)?.render(cat));
            Ok(Outcome {
                json: json!({ "lhs": x.render(cat), "rhs": y.render(cat), "equal": equal, "canonical": [cx, cy] }),
                text: format!("{} {} {}\n", x.render(cat), if equal { "==" } else { "!=" }, y.render(cat)),
                passed: equal,
            })
        }
        Command::OperadCompose { bundle, outer, inners } => {
            let b = load(bundle.as_deref())?;
            let cat = &b.base.cat;
            let o = OperadOp::parse(cat, &outer)?;
            let ins = inners.iter().map(|s| OperadOp::parse(cat, s)).collect::<Result<Vec<_>, _>>()?;
            let c = op_compose(cat, &o, &ins)?;
            let canon = canonical(&c, &b.base)?.render(cat);
            Ok(Outcome { json: json!({ "result": c.render(cat), "canonical": canon }), text: format!("{}\n", c.render(cat)), passed: true })
        }
        Command::CheckReflective { bundle } => {
            let b = load(bundle.as_deref())?;
            let data = b.reflective.as_ref().ok_or_else(|| Error::schema("$.right", "the bundle has no reflective data"))?;
            let cert = certify_reflective(data, cfg)?;
            let text = format!("{}\n{}{}", cert.summary(), cert.report, cert.adjunction);
            Ok(Outcome { json: json!({ "summary": cert.summary(), "certificate": cert }), text, passed: cert.verified() })
        }
        Command::DeriveW { bundle } => {
            let b = load(bundle.as_deref())?;
            let l = b.localization.as_ref().ok_or_else(|| Error::schema("$.left", "the bundle has no localization functor"))?;
            let w = derive_w(l)?;
            let members = match w.members(&b.base.cat) {
                Ok(ms) => json!(ms.iter().map(|f| b.base.cat.mor_label(f)).collect::<Vec<_>>()),
                Err(_) => json!("iso-preimage"),
            };
            let text = match &members {
                Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect::<Vec<_>>().join("\n") + "\n",
                _ => "every morphism sent to an isomorphism (not enumerable)\n".into(),
            };
            Ok(Outcome { json: json!({ "w": members }), text, passed: true })
        }
        Command::CheckAqft { bundle, model } => {
            let b = load(bundle.as_deref())?;
            let rs = select(&b, &model)?.into_iter().map(|m| check_aqft(m, cfg)).collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::reports(&rs))
        }
        Command::TimeSlice { bundle, model, w } => {
            let b = load(bundle.as_deref())?;
            let w = match &w {
                Some(s) => parse_w(&b, s)?,
                None => b.w.clone(),
            };
            let mut out = Vec::new();
            let mut text = String::new();
            for m in select(&b, &model)? {
                let ts = time_slice_verdict(m, &w, cfg)?;
                let _ = write!(text, "{}: {} ({})", m.name, ts.kind, ts.coverage);
                if let Some(x) = &ts.witness {
                    let _ = write!(text, " witness: {x}");
                }
                text.push('\n');
                out.push(json!({ "model": m.name, "time_slice": ts }));
            }
            // Classification never fails; the exit code reports success.
            Ok(Outcome { json: Value::Array(out), text, passed: true })
        }
        Command::Strictify { bundle, model, reflective } => {
            let b = match reflective {
                None => load(bundle.as_deref())?,
                Some(path) => {
                    let mut doc = parse_doc(&read_text(bundle.as_deref())?)?;
                    let refl = parse_doc(&read_text(Some(&path))?)?;
                    for k in REFLECTION_KEYS {
                        match refl.get(k) {
                            Some(v) => doc[k] = v.clone(),
                            None => {
                                if let Some(o) = doc.as_object_mut() {
                                    o.remove(k);
                                }
                            }
                        }
                    }
                    bundle::from_json(&doc)?
                }
            };
            let data = b.reflective.as_ref().ok_or_else(|| Error::schema("$.right", "the bundle has no reflective data"))?;
            let mut out = Vec::new();
            let mut text = String::new();
            let mut passed = true;
            for m in select(&b, &model)? {
                let res = strictify_reflective(m, data, cfg)?;
                let mut cert = res.certificate();
                cert.push(check_idempotent(&res, cfg)?);
                passed &= cert.passed();
                let units: Vec<Value> = res
                    .units
                    .iter()
                    .map(|u| json!({ "object": u.label, "quasi_iso": u.is_quasi_iso(), "failing_degree": u.failing_degree, "map": graded_json(u.map.chain().components()) }))
                    .collect();
                out.push(json!({
                    "model": m.name,
                    "certificate": cert,
                    "input_time_slice": res.input_slice,
                    "output_time_slice": res.output_slice,
                    "units": units,
                    "output": bundle::model_json(&res.output)?,
                }));
                text.push_str(&cert.to_string());
            }
            Ok(Outcome { json: Value::Array(out), text, passed })
        }
        Command::Rce { bundle, model, mode, range: n } => {
            let b = load(bundle.as_deref())?;
            let mode = match mode {
                Mode::Strict => RceMode::Strict,
                Mode::Homology => RceMode::Homology,
            };
            let mut out = Vec::new();
            let mut text = String::new();
            let mut passed = true;
            for m in select(&b, &model)? {
                let act = rce_action(m, mode, cfg)?;
                let law = act.check_group_law(-n..=n)?;
                passed &= law.passed;
                let _ = writeln!(text, "{}: generator {}{}", m.name, graded_text(&act.generator), if act.is_trivial() { " (trivial)" } else { "" });
                let mut r = Report::new(format!("{} RCE action", m.name));
                r.push(law);
                text.push_str(&r.to_string());
                out.push(json!({ "model": m.name, "mode": mode, "generator": graded_json(&act.generator), "trivial": act.is_trivial(), "report": r }));
            }
            Ok(Outcome { json: Value::Array(out), text, passed })
        }
        Command::Bar { bundle, model, depth, weight, window } => {
            let b = load(bundle.as_deref())?;
            let (lo, hi) = range(&window)?;
            let mut out = Vec::new();
            let mut text = String::new();
            let mut passed = true;
            for m in select(&b, &model)? {
                let res = bar_truncated(m, depth, weight)?;
                let mut r = res.check();
                let tot = tot_normalized(&res, lo..=hi)?;
                r.push(tot.verdict());
                passed &= r.passed();
                let objects: Vec<Value> = res
                    .objects
                    .iter()
                    .zip(&tot.objects)
                    .map(|(o, t)| json!({ "object": o.label, "level_dims": o.level_dims(), "trusted": t.trusted, "failing_degree": t.failing }))
                    .collect();
                text.push_str(&r.to_string());
                for o in &objects {
                    let _ = writeln!(text, "  {}: levels {} trusted {}", o["object"].as_str().unwrap_or(""), o["level_dims"], o["trusted"]);
                }
                out.push(json!({ "model": m.name, "depth": depth, "weight": weight, "window": [lo, hi], "report": r, "objects": objects }));
            }
            Ok(Outcome { json: Value::Array(out), text, passed })
        }
        Command::WhatGenerators { bundle, shifts, max_weight } => {
            let b = load(bundle.as_deref())?;
            let (lo, hi) = range(&shifts)?;
            let gens = what_generators(&b.base, &b.w, lo..=hi, max_weight)?;
            let mut text = String::new();
            let list: Vec<Value> = gens
                .iter()
                .map(|g| {
                    let _ = writeln!(text, "{} shift {}", g.morphism, g.shift);
                    let comps: serde_json::Map<String, Value> = g.components.iter().map(|(x, m)| (x.clone(), graded_json(m.chain().components()))).collect();
                    json!({ "morphism": g.morphism, "shift": g.shift, "components": comps })
                })
                .collect();
            Ok(Outcome { json: json!({ "generators": list }), text, passed: true })
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                let rows: Vec<Value> = corpus::all().iter().map(|e| json!({ "name": e.name, "description": e.description })).collect();
                let text = corpus::all().iter().map(|e| format!("{:<16} {}\n", e.name, e.description)).collect();
                Ok(Outcome { json: Value::Array(rows), text, passed: true })
            }
            CorpusAction::Emit { name } => {
                let doc = bundle::to_json(&corpus::by_name(&name)?)?;
                let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
                Ok(Outcome { json: doc, text, passed: true })
            }
            CorpusAction::Verify { name } => {
                let entries = match name {
                    Some(n) => vec![corpus::by_name(&n)?],
                    None => corpus::all(),
                };
                let rs = entries.iter().map(|e| e.verify(cfg)).collect::<Result<Vec<_>, _>>()?;
                Ok(Outcome::reports(&rs))
            }
        },
    }
}

/// Errors that are really negative verdicts rather than bad input.
fn is_verdict(e: &Error) -> bool {
    matches!(e, Error::UncertifiedReflectiveData(_) | Error::TimeSliceViolated(_))
}

fn emit(common: &Common, body: &str) -> std::io::Result<()> {
    match &common.out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = SampleConfig::new(cli.common.seed, cli.common.samples);
    let (body, code) = match run(cli.command, &cfg) {
        Ok(o) => {
            let body = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("json") + "\n",
                Format::Text => o.text,
            };
            (body, if o.passed { 0 } else { 1 })
        }
        Err(e) => {
            let code = if is_verdict(&e) { 1 } else { 2 };
            let body = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("json") + "\n",
                Format::Text => String::new(),
            };
            eprintln!("error: {e}");
            (body, code)
        }
    };
    if let Err(e) = emit(&cli.common, &body) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
