use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use irrslope::parity::factor_into_proper_transpositions;
use irrslope::presentation::{compile_word, to_normal_word};
use irrslope::random::{random_even_word, random_word, seeded};
use irrslope::relators::{verify_relators, RelatorReport};
use irrslope::tree::CaretKind;
use irrslope::vbeta::{compile_beta_word, index4_class, verify_beta_relators};
use irrslope::word::{GenKind, Word};
use irrslope::{Diagram, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "irrslope", version, about = "Tree-pair diagrams for the golden-ratio Thompson groups and their ternary cousin")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Number ring: golden ratio (binary carets) or silver ratio (ternary carets).
    #[arg(long, global = true, value_enum, default_value_t = Ring::Tau)]
    ring: Ring,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ring {
    Tau,
    Beta,
}

#[derive(Subcommand)]
enum Cmd {
    /// Image of a point of (0,1] under the element, in exact "a+b*t" form.
    Eval {
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Reduced diagram of the element.
    Reduce { word: String },
    /// Whether two words represent the same element; exits 1 when they differ.
    Eq { first: String, second: String },
    /// F, T or V.
    Classify { word: String },
    /// The parity homomorphism (y-carets, or b-carets for the ternary ring).
    Parity { word: String },
    /// Word of the form p m q^-1 representing the element.
    NormalForm { word: String },
    /// Product of proper transpositions equal to a parity-0 element.
    Factor { word: String },
    /// Verifies every relator family up to the given index.
    Relcheck {
        #[arg(long, default_value_t = 6)]
        max_index: u32,
    },
    /// Writes a Graphviz rendering of the element's diagram.
    Render {
        word: String,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Seeded random word.
    Random {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        parity: Option<u8>,
        #[arg(long, default_value_t = 4)]
        max_index: u32,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Parse(_) | Error::InvalidGenerator(_) => Failure::Parse(m),
            Error::Invariant(_) | Error::Malformed(_) => Failure::Internal(m),
            _ => Failure::Domain(m),
        }
    }
}

/// What a command prints, and its exit code on success.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn new(text: impl Display, json: Value) -> Self {
        Output { text: text.to_string(), json, code: 0 }
    }
}

type Outcome = Result<Output, Failure>;

fn parse_word(s: &str) -> Result<Word, Failure> {
    Ok(s.parse::<Word>()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.ring {
        Ring::Tau => run_tau(&cli.cmd),
        Ring::Beta => run_beta(&cli.cmd),
    };
    match result {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(stdout, "{}", out.json)
            } else if !out.text.is_empty() {
                writeln!(stdout, "{}", out.text)
            } else {
                Ok(())
            };
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message(), "exit": f.code() }));
            }
            eprintln!("irrslope: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run_tau(cmd: &Cmd) -> Outcome {
    let compile = |s: &str| Ok(compile_word(&parse_word(s)?)?);
    match cmd {
        Cmd::Parity { word } => {
            let v = compile(word)?;
            Ok(Output::new(v.y_parity(), json!({ "parity": v.y_parity() })))
        }
        Cmd::NormalForm { word } => {
            let v = compile(word)?;
            let nf = to_normal_word(&v)?;
            Ok(Output::new(&nf, json!({ "word": nf.to_string(), "class": v.classify().to_string() })))
        }
        Cmd::Factor { word } => {
            let v = compile(word)?;
            let factors = factor_into_proper_transpositions(&v)?;
            let mut text = Vec::new();
            let mut items = Vec::new();
            for t in &factors {
                let (a, b) = t.involved();
                text.push(format!("swap leaves {} and {} of {}", a + 1, b + 1, t.tree().to_json()));
                items.push(json!({ "leaves": [a + 1, b + 1], "diagram": t.diagram().to_json() }));
            }
            Ok(Output::new(text.join("\n"), json!({ "factors": items })))
        }
        Cmd::Relcheck { max_index } => Ok(relcheck(verify_relators(*max_index))),
        Cmd::Random { length, seed, parity, max_index } => {
            random(*length, *seed, *parity, *max_index, &[GenKind::X, GenKind::Y, GenKind::C, GenKind::P], |w| {
                w.y_parity()
            })
        }
        _ => run_common(cmd, compile),
    }
}

fn run_beta(cmd: &Cmd) -> Outcome {
    let compile = |s: &str| Ok(compile_beta_word(&parse_word(s)?)?);
    match cmd {
        Cmd::Parity { word } => {
            let c = index4_class(&compile(word)?);
            Ok(Output::new(c.phi, json!({ "parity": c.phi, "sign": c.rho })))
        }
        Cmd::NormalForm { .. } | Cmd::Factor { .. } => {
            Err(Failure::Domain("this command is only available for --ring tau".into()))
        }
        Cmd::Relcheck { max_index } => Ok(relcheck(verify_beta_relators(*max_index))),
        Cmd::Random { length, seed, parity, max_index } => {
            random(*length, *seed, *parity, *max_index, &[GenKind::X, GenKind::Y, GenKind::P], |w| w.y_parity())
        }
        _ => run_common(cmd, compile),
    }
}

/// Commands that only need diagram operations.
fn run_common<C: CaretKind>(cmd: &Cmd, compile: impl Fn(&str) -> Result<Diagram<C>, Failure>) -> Outcome {
    match cmd {
        Cmd::Eval { word, at } => {
            let v = compile(word)?;
            let point: C::Scalar = at.parse()?;
            let image = v.evaluate(point)?;
            Ok(Output::new(image, json!({ "at": point.to_string(), "image": image.to_string() })))
        }
        Cmd::Reduce { word } => {
            let r = compile(word)?.reduce();
            Ok(Output::new(&r, r.to_json()))
        }
        Cmd::Eq { first, second } => {
            let equal = compile(first)?.equals(&compile(second)?);
            let mut out = Output::new(if equal { "equal" } else { "not equal" }, json!({ "equal": equal }));
            out.code = if equal { 0 } else { 1 };
            Ok(out)
        }
        Cmd::Classify { word } => {
            let class = compile(word)?.classify();
            Ok(Output::new(class, json!({ "class": class.to_string() })))
        }
        Cmd::Render { word, dot } => {
            let v = compile(word)?;
            std::fs::write(dot, v.to_dot()).map_err(|e| Failure::Domain(format!("{}: {e}", dot.display())))?;
            Ok(Output::new(format!("wrote {}", dot.display()), json!({ "dot": dot.display().to_string() })))
        }
        _ => Err(Failure::Internal("command not dispatched".into())),
    }
}

fn relcheck(report: RelatorReport) -> Output {
    let families: serde_json::Map<String, Value> = report
        .tally
        .iter()
        .map(|(f, (p, n))| (f.clone(), json!({ "passed": p, "failed": n })))
        .collect();
    let failures: Vec<String> = report.failures.iter().map(|f| f.instance.to_string()).collect();
    let mut text = report.summary_table();
    if report.all_passed() {
        text.push_str(&format!("all {} instances pass", report.total()));
    } else {
        text.push_str(&format!("{} of {} instances fail", failures.len(), report.total()));
        for f in &failures {
            text.push_str(&format!("\n  {f}"));
        }
    }
    let mut out = Output::new(text, json!({ "families": families, "failures": failures, "total": report.total() }));
    if !report.all_passed() {
        out.code = 4;
    }
    out
}

fn random(
    length: usize,
    seed: u64,
    parity: Option<u8>,
    max_index: u32,
    kinds: &[GenKind],
    parity_of: impl Fn(&Word) -> u8,
) -> Outcome {
    let mut rng = seeded(seed);
    let word = match parity {
        None => random_word(&mut rng, length, kinds, max_index),
        Some(0) if length == 0 => Word::empty(),
        Some(0) => random_even_word(&mut rng, length, kinds, max_index),
        Some(_) if length == 0 => return Err(Failure::Domain("the empty word has parity 0".into())),
        Some(p) => loop {
            let w = random_word(&mut rng, length, kinds, max_index);
            if parity_of(&w) == p {
                break w;
            }
        },
    };
    Ok(Output::new(&word, json!({ "word": word.to_string(), "seed": seed })))
}
