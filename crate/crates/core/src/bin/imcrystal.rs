use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use imcrystal::crystal::CrystalWindow;
use imcrystal::report::{self, envelope_json, SCHEMA};
use imcrystal::{
    build_cartan, parse_generator, parse_word, resolve_family, CartanData, Diagnostics, Element, Engine, EngineOptions,
    Error, OmegaVariant, WordWindow,
};

#[derive(Parser)]
#[command(name = "imcrystal", version, about = "Exact star products, Ω̃ operators, pairings and crystal checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Algebra {
    /// Family: A, B, C, D, E, F, G (or E6, E7, E8, F4, G2).
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Clone)]
struct Window {
    #[arg(long)]
    max_len: usize,
    #[arg(long, allow_hyphen_values = true)]
    k_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    k_max: i64,
    /// Comma-separated node subset.
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<usize>>,
}

impl Window {
    fn word_window(&self) -> WordWindow {
        WordWindow { max_len: self.max_len, kmin: self.k_min, kmax: self.k_max, nodes: self.nodes.clone() }
    }
}

#[derive(Args, Clone)]
struct Tuning {
    /// Rewrite budget per input word (default 16 × length × degree width).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Extra terms for every Ω̃ cutoff and p-exponent search.
    #[arg(long, default_value_t = 0)]
    cutoff_slack: i64,
    /// Turn NoCase pairs and surviving residual words into errors.
    #[arg(long)]
    strict_engine: bool,
}

impl Tuning {
    fn options(&self) -> EngineOptions {
        EngineOptions {
            max_steps: self.max_steps,
            cutoff_slack: self.cutoff_slack,
            strict: self.strict_engine,
            ..EngineOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Twisted,
    Classic,
}

impl From<VariantArg> for OmegaVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Twisted => OmegaVariant::Twisted,
            VariantArg::Classic => OmegaVariant::Classic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    StarOrder,
    OmegaOrder,
    Gram,
    Lattice,
    Basis,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, symmetrizers, pairing matrix and diagram.
    Describe {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long)]
        json: bool,
    },
    /// Twisted product of two generators, before and after straightening.
    Star {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        json: bool,
    },
    /// Ω̃ or classic Ω applied to an ordered word.
    Omega {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, value_enum, default_value = "twisted")]
        variant: VariantArg,
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        word: String,
        /// Emit the full recursion tree as JSON.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        json: bool,
    },
    /// Bilinear form of two ordered words.
    Pair {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        json: bool,
    },
    /// Gram matrix over a window with per-entry verdicts.
    Gram {
        #[command(flatten)]
        alg: Algebra,
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long)]
        json: bool,
    },
    /// Ordered words of a window.
    Enumerate {
        #[command(flatten)]
        alg: Algebra,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        alg: Algebra,
        #[command(flatten)]
        window: Window,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        m_min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        m_max: i64,
        #[arg(long, value_enum, default_value = "twisted")]
        variant: VariantArg,
        #[command(flatten)]
        tuning: Tuning,
        /// Exit nonzero unless every verdict passes.
        #[arg(long)]
        strict: bool,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Lib(Error),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn error_object(f: &Failure) -> serde_json::Value {
    match f {
        Failure::Lib(e) => {
            let mut obj = json!({ "kind": e.kind(), "message": e.to_string() });
            if let Error::Parse { offset, expected } = e {
                obj["offset"] = json!(offset);
                obj["expected"] = json!(expected);
            }
            json!({ "schema": SCHEMA, "error": obj })
        }
        Failure::Config(msg) => json!({ "schema": SCHEMA, "error": { "kind": "Config", "message": msg } }),
    }
}

fn cartan(alg: &Algebra) -> Result<CartanData, Failure> {
    Ok(build_cartan(resolve_family(&alg.algebra, alg.rank)?, alg.rank)?)
}

fn print_json(engine: &Engine, command: &str, value: &impl serde::Serialize) {
    print!("{}", envelope_json(engine, command, value));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::Config(e.render().to_string().trim().to_string());
            eprintln!("{}", error_object(&f));
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = report::configure_threads() {
        eprintln!("{}", error_object(&Failure::Config(msg)));
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", error_object(&f));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Describe { alg, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::new(&c);
            if json {
                let v = json!({
                    "cartan_matrix": c.matrix(),
                    "symmetrizers": c.symmetrizers(),
                    "pairing_matrix": c.pairing_matrix(),
                    "diagram": c.diagram(),
                });
                print_json(&engine, "describe", &v);
            } else {
                println!("algebra {} rank {}", c.family().map_or("custom".into(), |f| f.to_string()), c.rank());
                println!("d = ({})", join(c.symmetrizers()));
                println!("cartan matrix:");
                for row in c.matrix() {
                    println!("  {}", join(row));
                }
                println!("pairing matrix:");
                for row in c.pairing_matrix() {
                    println!("  {}", join(&row));
                }
                println!("diagram:\n{}", c.diagram());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Star { alg, left, right, tuning, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::with_options(&c, tuning.options());
            let (l, r) = (parse_generator(&left)?, parse_generator(&right)?);
            let (rep, diag) = engine.star_pair_report(l, r)?;
            if json {
                print_json(&engine, "star", &json!({ "pair": rep, "diagnostics": diag }));
            } else {
                println!("case      {}", rep.case);
                println!("raw       {}", rep.raw);
                println!("result    {}", rep.result);
                println!("ordered   {}", rep.ordered);
                println!("integral  {}", rep.integral);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Omega { alg, variant, i, m, word, trace, tuning, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::with_options(&c, tuning.options());
            let w = parse_word(&word)?;
            let mut diag = Diagnostics::default();
            let input = Element::from_word(w.clone());
            let out = engine.omega(variant.into(), i, m, &input, &mut diag)?;
            if trace {
                let t = engine.omega_trace(variant.into(), i, m, &w, &mut Diagnostics::default())?;
                print_json(&engine, "omega", &json!({ "result": out, "trace": t, "diagnostics": diag }));
            } else if json {
                print_json(&engine, "omega", &json!({ "result": out, "diagnostics": diag }));
            } else {
                println!("{out}");
            }
            engine.enforce(&diag)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pair { alg, left, right, tuning, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::with_options(&c, tuning.options());
            let u = Element::from_word(parse_word(&left)?);
            let v = Element::from_word(parse_word(&right)?);
            let mut diag = Diagnostics::default();
            let value = engine.pair(&u, &v, &mut diag)?;
            if json {
                print_json(&engine, "pair", &json!({ "value": value, "display": value.to_string() }));
            } else {
                println!("{value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gram { alg, window, tuning, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::with_options(&c, tuning.options());
            let rep = engine.check_gram_window(&window.word_window())?;
            if json {
                print_json(&engine, "gram", &rep);
            } else {
                for row in &rep.rows {
                    let v = row.value.as_ref().map_or_else(|| "error".to_string(), |v| v.to_string());
                    println!("<{} , {}> = {}", row.left, row.right, v);
                }
                println!("{}", serde_json::to_string(&rep.summary).expect("summary"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { alg, window, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::new(&c);
            let words = imcrystal::enumerate_window(&c, &window.word_window(), imcrystal::words::DEFAULT_ENUM_CAP)?;
            if json {
                print_json(&engine, "enumerate", &json!({ "count": words.len(), "words": words }));
            } else {
                for w in &words {
                    println!("{w}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, alg, window, m_min, m_max, variant, tuning, strict, json } => {
            let c = cartan(&alg)?;
            let engine = Engine::with_options(&c, tuning.options());
            let ww = window.word_window();
            let cw = CrystalWindow { words: ww.clone(), mmin: m_min, mmax: m_max };
            let run_all = suite == Suite::All;
            let mut body = serde_json::Map::new();
            let mut failures = 0usize;
            if run_all || suite == Suite::StarOrder {
                let r = report::verify_star_order(&engine, &ww)?;
                println!("star-order   {}", serde_json::to_string(&r.summary).expect("summary"));
                failures += r.summary.failures;
                body.insert("star_order".into(), serde_json::to_value(&r).expect("report"));
            }
            if run_all || suite == Suite::OmegaOrder {
                let r = report::verify_omega_order(&engine, variant.into(), &ww, m_min, m_max)?;
                println!("omega-order  {}", serde_json::to_string(&r.summary).expect("summary"));
                failures += r.summary.failures;
                body.insert("omega_order".into(), serde_json::to_value(&r).expect("report"));
            }
            if run_all || suite == Suite::Gram {
                let r = engine.check_gram_window(&ww)?;
                println!("gram         {}", serde_json::to_string(&r.summary).expect("summary"));
                failures += r.summary.failures;
                body.insert("gram".into(), serde_json::to_value(&r).expect("report"));
            }
            if run_all || suite == Suite::Lattice {
                let r = engine.check_lattice(&cw)?;
                println!("lattice      {}", serde_json::to_string(&r.summary).expect("summary"));
                failures += r.summary.failures;
                body.insert("lattice".into(), serde_json::to_value(&r).expect("report"));
            }
            if run_all || suite == Suite::Basis {
                let r = engine.check_basis(&cw)?;
                println!("basis        {}", serde_json::to_string(&r.summary).expect("summary"));
                failures += r.summary.failures;
                body.insert("basis".into(), serde_json::to_value(&r).expect("report"));
            }
            println!("failures     {failures}");
            if let Some(path) = json {
                let text = envelope_json(&engine, "verify", &serde_json::Value::Object(body));
                std::fs::write(&path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            }
            Ok(if strict && failures > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
    }
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}
