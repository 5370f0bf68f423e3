use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use respoly::builder::{build_residual_transducer, validate_residual_transducer, BuildConfig, BuildError, WorklistPolicy};
use respoly::resorder::{derivative, member, Flavor, Level, OrderCtx, ProbeMode};
use respoly::zseries::spec::{series_from_json, series_to_json};
use respoly::{gallery, Error, HTransducer, Series, Word};

/// Residual transducers for polyregular functions.
#[derive(Parser)]
#[command(name = "respoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function on a word.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// The derivative f↾u − f↾v as a function spec.
    Derive {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Build the k-residual transducer.
    Build {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// Also write the machine as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the construction trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a transducer file against the k-residual conditions for the input function.
    Validate {
        /// Transducer JSON.
        transducer: PathBuf,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Class membership of the input function at level --k.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value = "npoly")]
        class: Flavor,
    },
    /// Whether a transducer (or the k-residual transducer of a function) is counter-free.
    CounterFree {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: OptionalBuildArgs,
    },
    /// Search for a bad sequence in the residual order.
    ProbeWqo {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "prefix-chain")]
        mode: ProbeMode,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Look for the threshold after which u·wⁿ is non-decreasing in the nsf order.
    ProbeAperiodic {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "")]
        u: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Count satisfying valuations of a counting function on a word.
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Write a transducer (or the k-residual transducer of a function) as DOT.
    ExportDot {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: OptionalBuildArgs,
        /// Output file; stdout if absent.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List gallery entries, or print one.
    Gallery { name: Option<String> },
}

#[derive(Args)]
struct Input {
    /// JSON file, or `gallery:NAME`.
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, default_value_t = 1_024)]
    max_states: usize,
    #[arg(long, default_value = "shortlex")]
    policy: WorklistPolicy,
}

#[derive(Args)]
struct OptionalBuildArgs {
    /// Required when the input is a function rather than a transducer.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, default_value_t = 1_024)]
    max_states: usize,
    #[arg(long, default_value = "shortlex")]
    policy: WorklistPolicy,
}

impl BuildArgs {
    fn config(&self) -> BuildConfig {
        BuildConfig::new(self.k)
            .with_fuel(self.fuel)
            .with_max_states(self.max_states)
            .with_policy(self.policy)
    }
}

/// Failures: `Negative` exits 1, `Usage` exits 2.
enum Failure {
    Negative(Value),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn read_text(input: &str) -> Result<String, Failure> {
    match input.strip_prefix("gallery:") {
        Some(name) => Ok(gallery::source(name)?.to_string()),
        None => fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}"))),
    }
}

fn read_series(input: &Input) -> Result<Series, Failure> {
    if let Some(name) = input.input.strip_prefix("gallery:") {
        return Ok(gallery::load(name)?.series);
    }
    Ok(series_from_json(&read_text(&input.input)?)?)
}

fn read_transducer(path: &Path) -> Result<HTransducer, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(HTransducer::from_json(&text)?)
}

fn parse_word(series: &Series, w: &str) -> Result<Word, Failure> {
    let word = Word::from(w);
    series.alphabet().check(&word)?;
    Ok(word)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A transducer given directly, or built from a function when `--k` is set.
fn machine(input: &Input, build: &OptionalBuildArgs) -> Result<HTransducer, Failure> {
    let text = read_text(&input.input)?;
    let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
    if value.get("states").is_some() {
        return Ok(HTransducer::from_json(&text)?);
    }
    let Some(k) = build.k else {
        return Err(Failure::Usage("--k is required when the input is a function".into()));
    };
    let series = read_series(input)?;
    let args = BuildArgs { k, fuel: build.fuel, max_states: build.max_states, policy: build.policy };
    run_build(&series, &args.config(), None).map(|(t, _)| t)
}

fn run_build(
    series: &Series,
    cfg: &BuildConfig,
    trace_path: Option<&Path>,
) -> Result<(HTransducer, Value), Failure> {
    match build_residual_transducer(series, cfg) {
        Ok(built) => {
            let trace = built.trace.to_json();
            if let Some(p) = trace_path {
                write_file(p, &serde_json::to_string_pretty(&trace).expect("serializable"))?;
            }
            Ok((built.transducer, trace))
        }
        Err(BuildError::FuelExhausted { reason, trace }) => {
            let trace = trace.to_json();
            if let Some(p) = trace_path {
                write_file(p, &serde_json::to_string_pretty(&trace).expect("serializable"))?;
            }
            Err(Failure::Negative(json!({
                "verdict": "fuel-exhausted",
                "reason": reason,
                "oracle_calls": trace["oracle_calls"],
                "steps": trace["steps"].as_array().map_or(0, Vec::len),
            })))
        }
        Err(BuildError::Core(e)) => Err(e.into()),
    }
}

/// Integers that fit in an i64 as JSON numbers, larger ones as strings.
fn integer_json(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn verdict(value: Value, positive: bool) -> Outcome {
    if positive {
        Ok(value)
    } else {
        Err(Failure::Negative(value))
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Eval { input, word } => {
            let f = read_series(&input)?;
            let w = parse_word(&f, &word)?;
            Ok(integer_json(&f.eval(&w)?))
        }
        Command::Derive { input, u, v } => {
            let f = read_series(&input)?;
            let (u, v) = (parse_word(&f, &u)?, parse_word(&f, &v)?);
            Ok(series_to_json(&derivative(&f, &u, &v)?))
        }
        Command::Build { input, build, dot, trace } => {
            let f = read_series(&input)?;
            let (t, _) = run_build(&f, &build.config(), trace.as_deref())?;
            if let Some(p) = dot {
                write_file(&p, &t.to_dot())?;
            }
            Ok(t.to_json())
        }
        Command::Validate { transducer, input, k } => {
            let f = read_series(&input)?;
            let t = read_transducer(&transducer)?;
            let report = validate_residual_transducer(&f, k, &t)?;
            verdict(report.to_json(), report.is_valid())
        }
        Command::Check { input, k, class } => {
            let f = read_series(&input)?;
            let holds = member(class, &f, Level::new(k)?)?;
            verdict(json!({"class": class.to_string(), "level": k, "member": holds}), holds)
        }
        Command::CounterFree { input, build } => {
            let t = machine(&input, &build)?;
            let counter = t.find_counter();
            let value = json!({
                "states": t.num_states(),
                "counter_free": counter.is_none(),
                "counter": counter.as_ref().map(|c| json!({
                    "state": t.name(c.state),
                    "word": c.word.as_string(),
                    "n": c.n,
                })),
            });
            verdict(value, counter.is_none())
        }
        Command::ProbeWqo { input, k, mode, max_len } => {
            let f = read_series(&input)?;
            let report = OrderCtx::new(f, k, Flavor::NPoly)?.wqo_probe(mode, max_len)?;
            let found = report.found_bad_chain();
            verdict(serde_json::to_value(report).expect("serializable"), !found)
        }
        Command::ProbeAperiodic { input, k, u, word, n_max } => {
            let f = read_series(&input)?;
            let (u, w) = (parse_word(&f, &u)?, parse_word(&f, &word)?);
            let report = OrderCtx::new(f, k, Flavor::Nsf)?.aperiodicity_probe(&u, &w, n_max)?;
            let found = report.n0.is_some();
            verdict(serde_json::to_value(report).expect("serializable"), found)
        }
        Command::Count { input, word } => {
            let f = read_series(&input)?;
            let Series::Counting(c) = &f else {
                return Err(Failure::Usage(format!("count needs a counting function, got {}", f.kind())));
            };
            let w = parse_word(&f, &word)?;
            let full = c.offset().concat(&w);
            let terms: Vec<Value> = c
                .terms()
                .iter()
                .map(|t| {
                    json!({
                        "formula": t.formula.to_string(),
                        "coeff": t.coeff.to_string(),
                        "count": t.formula.count(c.vars(), &full),
                    })
                })
                .collect();
            Ok(json!({"word": w.as_string(), "value": integer_json(&f.eval(&w)?), "terms": terms}))
        }
        Command::ExportDot { input, build, dot } => {
            let t = machine(&input, &build)?;
            let text = t.to_dot();
            match dot {
                Some(p) => {
                    write_file(&p, &text)?;
                    Ok(json!({"written": p.display().to_string()}))
                }
                None => {
                    print!("{text}");
                    Ok(Value::Null)
                }
            }
        }
        Command::Gallery { name: None } => Ok(json!(gallery::names())),
        Command::Gallery { name: Some(name) } => Ok(serde_json::from_str(gallery::source(&name)?).map_err(Error::from)?),
    }
}

fn print(value: &Value, pretty: bool) {
    if value.is_null() {
        return;
    }
    let text = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    println!("{}", text.expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            print(&value, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(value)) => {
            print(&value, cli.pretty);
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
