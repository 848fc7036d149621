use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rtva::diffcheck::{self, CheckError, TestReport, Words};
use rtva::machine::{SimError, Verdict};
use rtva::transforms::{self, TransformError};
use rtva::zoo::{self, ZooEntry};
use rtva::{Machine, MachineDoc, Rational, RunOptions};

/// Exhaustive checks beyond this many words need `--random`.
const EXHAUSTIVE_LIMIT: u128 = 7_174_453;

#[derive(Parser)]
#[command(
    name = "rtva",
    version,
    about = "Run, convert and check real-time vector automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on one input word.
    Run {
        /// Machine file, or `zoo:<id>`.
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        /// Print the full run trace as JSON.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        limits: Limits,
        /// Use the uncorrected construction for `zoo:` machines.
        #[arg(long)]
        fidelity: bool,
    },
    /// Convert a machine into another model.
    Convert {
        machine: String,
        #[arg(long, value_enum)]
        to: Target,
        /// Cutpoint for `--to dbva`; defaults to the automaton's own.
        #[arg(long)]
        lambda: Option<Rational>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        fidelity: bool,
    },
    /// Print the exact acceptance value of a generalized finite automaton.
    Eval {
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
    },
    /// Compare a machine against its oracle or another machine on bounded words.
    Check {
        machine: String,
        /// `oracle`, or a second machine.
        #[arg(long)]
        against: String,
        /// Zoo id whose oracle to use when the machine is a file.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        max_len: Option<usize>,
        /// Sample this many words instead of enumerating.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw structured instances instead of uniform words.
        #[arg(long, value_enum)]
        generator: Option<Generator>,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        fidelity: bool,
    },
    /// Reference machines.
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
}

#[derive(clap::Args)]
struct Limits {
    #[arg(long, default_value_t = 1_000_000)]
    frontier_cap: usize,
    /// Steps for one-way machines; default `10·(|w|+2)`.
    #[arg(long)]
    step_budget: Option<u64>,
}

impl Limits {
    fn options(&self) -> RunOptions {
        RunOptions {
            frontier_cap: self.frontier_cap,
            step_budget: self.step_budget,
            ..RunOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum ZooCommand {
    List,
    Export {
        id: String,
        #[arg(long)]
        fidelity: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// One-dimensional vector machine to counter machine.
    Counters,
    /// Counter machine to one-dimensional vector machine.
    Dva1,
    /// Generalized finite automaton to blind vector machine.
    Dbva,
    /// Blind deterministic vector machine to generalized finite automaton.
    Tufa,
    /// Register machine without equality tests to real-time blind machine.
    Rtdbva1,
    /// Move every check to entry 1.
    Entry1,
    /// Compare against 1 by adding a coordinate.
    Value1,
    /// Compare against 1 by rescaling entry 1.
    Value1Mul,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Subsetsum,
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::FrontierCap { .. } | SimError::StepBudget { .. } | SimError::CounterOverflow { .. } => {
                Failure::Resource(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Sim { word, source } => match Failure::from(source) {
                Failure::Resource(m) => Failure::Resource(format!("on word {word:?}: {m}")),
                Failure::Usage(m) => Failure::Usage(format!("on word {word:?}: {m}")),
            },
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Loaded {
    doc: MachineDoc,
    entry: Option<ZooEntry>,
}

/// Reads a machine file or builds `zoo:<id>`; a `(fidelity)` suffix on the
/// id has the same effect as the flag.
fn load(spec: &str, fidelity: bool) -> Result<Loaded, Failure> {
    if let Some(id) = spec.strip_prefix("zoo:") {
        let (id, fidelity) = match id.strip_suffix("(fidelity)") {
            Some(base) => (base, true),
            None => (id, fidelity),
        };
        let entry = zoo::build(id, fidelity).map_err(usage)?;
        let mut doc = MachineDoc::new(entry.machine.clone()).with_id(id);
        doc.notes = entry.fidelity_notes.clone();
        doc.provenance = Some(json!({ "zoo": id, "fidelity": fidelity }));
        return Ok(Loaded {
            doc,
            entry: Some(entry),
        });
    }
    let text = fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    let doc = MachineDoc::parse(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    Ok(Loaded { doc, entry: None })
}

fn write_out(text: &str, path: Option<&PathBuf>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(machine: &str, input: &str, trace: bool, opts: RunOptions, fidelity: bool) -> Result<u8, Failure> {
    let m = load(machine, fidelity)?.doc.machine;
    let word = m.alphabet().tokenize(input).map_err(usage)?;
    let t = m.run(&word, &opts)?;
    if t.verdict == Verdict::BudgetExhausted {
        return Err(Failure::Resource(format!(
            "step budget of {} exhausted at step {} before the right endmarker",
            opts.budget_for(word.len()),
            t.steps.len()
        )));
    }
    println!("{}", if t.accepted() { "ACCEPT" } else { "REJECT" });
    println!("steps: {}", t.steps.len());
    match t.final_config() {
        Some(c) => println!("final: {}", c.to_json(m.control())),
        None => println!("frontier: max {}", t.max_frontier()),
    }
    if trace {
        let doc = t.to_json(m.control(), m.alphabet());
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("trace serializes")
        );
    }
    Ok(if t.accepted() { 0 } else { 1 })
}

fn convert(
    machine: &str,
    to: Target,
    lambda: Option<Rational>,
    output: Option<&PathBuf>,
    fidelity: bool,
) -> Result<u8, Failure> {
    let src = load(machine, fidelity)?.doc;
    let wrong = |want: &str| {
        Failure::Usage(format!(
            "--to needs a {want}, got a `{}` machine",
            src.machine.kind()
        ))
    };
    let mut extra = json!({});
    let (name, out): (&str, Machine) = match to {
        Target::Counters => {
            let v = src
                .machine
                .as_vector()
                .ok_or_else(|| wrong("one-dimensional vector machine"))?;
            let (c, primes) = transforms::dva1_to_counter_machine(v)?;
            extra = json!({ "primes": primes });
            ("dva1_to_counter_machine", c.into())
        }
        Target::Dva1 => {
            let c = src.machine.as_counter().ok_or_else(|| wrong("counter machine"))?;
            let primes = transforms::first_primes(c.counters);
            extra = json!({ "primes": primes });
            (
                "counter_machine_to_dva1",
                transforms::counter_machine_to_dva1(c)?.into(),
            )
        }
        Target::Dbva => {
            let (g, cut) = src
                .machine
                .as_tufa()
                .ok_or_else(|| wrong("generalized finite automaton"))?;
            let lambda = lambda.unwrap_or_else(|| cut.clone());
            extra = json!({ "lambda": lambda });
            ("tufa_to_dbva", transforms::tufa_to_dbva(g, &lambda)?.into())
        }
        Target::Tufa => {
            let v = src
                .machine
                .as_vector()
                .ok_or_else(|| wrong("blind deterministic vector machine"))?;
            let (automaton, cutpoint) = transforms::dbva_to_tufa(v)?;
            ("dbva_to_tufa", Machine::Tufa { automaton, cutpoint })
        }
        Target::Rtdbva1 => {
            let f = src
                .machine
                .as_multiply()
                .ok_or_else(|| wrong("register machine"))?;
            ("famw_to_rtdbva1", transforms::famw_to_rtdbva1(f)?.into())
        }
        Target::Entry1 => {
            let v = src.machine.as_vector().ok_or_else(|| wrong("vector machine"))?;
            (
                "normalize_check_entry",
                transforms::normalize_check_entry(v)?.into(),
            )
        }
        Target::Value1 => {
            let v = src.machine.as_vector().ok_or_else(|| wrong("vector machine"))?;
            (
                "normalize_check_value",
                transforms::normalize_check_value(v)?.into(),
            )
        }
        Target::Value1Mul => {
            let v = src.machine.as_vector().ok_or_else(|| wrong("vector machine"))?;
            (
                "normalize_check_value_multiplicative",
                transforms::normalize_check_value_multiplicative(v)?.into(),
            )
        }
    };
    let mut provenance = json!({ "transform": name, "source_digest": src.digest() });
    if let Some(id) = &src.id {
        provenance["source_id"] = json!(id);
    }
    if let Some(obj) = extra.as_object() {
        for (k, v) in obj {
            provenance[k] = v.clone();
        }
    }
    let mut doc = MachineDoc::new(out);
    doc.id = src.id.as_ref().map(|id| format!("{id}-{}", Target::name(to)));
    doc.provenance = Some(provenance);
    write_out(&doc.to_json_string(), output)?;
    Ok(0)
}

impl Target {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

fn eval(machine: &str, input: &str) -> Result<u8, Failure> {
    let m = load(machine, false)?.doc.machine;
    let (g, _) = m.as_tufa().ok_or_else(|| {
        Failure::Usage(format!(
            "eval needs a generalized finite automaton, got `{}`",
            m.kind()
        ))
    })?;
    let word = g.alphabet.tokenize(input).map_err(usage)?;
    println!("{}", g.eval(&word)?);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn check(
    machine: &str,
    against: &str,
    oracle: Option<&str>,
    max_len: Option<usize>,
    random: Option<usize>,
    seed: u64,
    generator: Option<Generator>,
    report_path: Option<&PathBuf>,
    opts: RunOptions,
    fidelity: bool,
) -> Result<u8, Failure> {
    let left = load(machine, fidelity)?;
    let m = &left.doc.machine;
    let alphabet = m.alphabet().clone();
    let words = match (generator, random) {
        (Some(Generator::Subsetsum), _) => {
            let count = random.unwrap_or(2000);
            let words = diffcheck::subset_sum_instances(count, 8, 6, seed)
                .iter()
                .map(|w| alphabet.tokenize(w))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            Words::Listed {
                label: format!("subset-sum instances, seed {seed}"),
                words,
            }
        }
        (None, Some(count)) => Words::Sampled {
            max_len: max_len.unwrap_or(12),
            count,
            seed,
        },
        (None, None) => {
            let n = max_len.unwrap_or(8);
            if diffcheck::word_count(alphabet.len(), n) > EXHAUSTIVE_LIMIT {
                return Err(Failure::Usage(format!(
                    "exhaustive enumeration of length {n} over {} symbols is too large; use --random",
                    alphabet.len()
                )));
            }
            Words::Exhaustive(n)
        }
    };
    let left_id = left.doc.id.clone().unwrap_or_else(|| machine.to_string());
    let report: TestReport = if against == "oracle" {
        let entry = match (oracle, &left.entry) {
            (Some(id), _) => zoo::build(id, false).map_err(usage)?,
            (None, Some(e)) => e.clone(),
            (None, None) => return Err(Failure::Usage("a machine file needs --oracle <zoo id>".into())),
        };
        diffcheck::differential_test(m, &*entry.oracle, &alphabet, &words, &opts)?
            .with_ids([left_id, format!("oracle:{}", entry.id)])
    } else {
        let right = load(against, false)?;
        let right_id = right.doc.id.clone().unwrap_or_else(|| against.to_string());
        diffcheck::equivalence_test(m, &right.doc.machine, &alphabet, &words, &opts)?
            .with_ids([left_id, right_id])
    };
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
    );
    if let Some(p) = report_path {
        fs::write(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    print!("{text}");
    match &report.counterexample {
        None => {
            eprintln!("clean: {} words", report.words_tested);
            Ok(0)
        }
        Some(cx) => {
            eprintln!(
                "counterexample: {:?} (machine {}, reference {})",
                cx.word, cx.left, cx.right
            );
            Ok(1)
        }
    }
}

fn zoo_cmd(command: ZooCommand) -> Result<u8, Failure> {
    match command {
        ZooCommand::List => {
            for id in zoo::ids() {
                let e = zoo::build(id, false).map_err(usage)?;
                println!("{id}\t{}\t{}", e.machine.kind(), e.alphabet().names().join(","));
            }
            Ok(0)
        }
        ZooCommand::Export { id, fidelity, output } => {
            let doc = load(&format!("zoo:{id}"), fidelity)?.doc;
            write_out(&doc.to_json_string(), output.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            machine,
            input,
            trace,
            limits,
            fidelity,
        } => run(&machine, &input, trace, limits.options(), fidelity),
        Command::Convert {
            machine,
            to,
            lambda,
            output,
            fidelity,
        } => convert(&machine, to, lambda, output.as_ref(), fidelity),
        Command::Eval { machine, input } => eval(&machine, &input),
        Command::Check {
            machine,
            against,
            oracle,
            max_len,
            random,
            seed,
            generator,
            report,
            limits,
            fidelity,
        } => check(
            &machine,
            &against,
            oracle.as_deref(),
            max_len,
            random,
            seed,
            generator,
            report.as_ref(),
            limits.options(),
            fidelity,
        ),
        Command::Zoo { command } => zoo_cmd(command),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Resource(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
