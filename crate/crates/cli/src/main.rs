use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqrel::bench::{bench, parse_degree_range, write_csv, BenchOptions, Family, FamilySpec};
use seqrel::compare::{
    compare, differing_outputs, gorenstein_test, relation_set_from_json, report_to_json, run_algorithm, run_to_json, run_to_text, verify_relation_set, Algorithm, Bound,
    CompareError,
};
use seqrel::field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
use seqrel::monomial::MonomialSet;
use seqrel::order::{MonomialOrder, OrderError};
use seqrel::poly::{is_zero_dimensional, Poly, PolyError};
use seqrel::sequence::{parse_sequence_spec, Generator, SequenceError, SequenceOracle};

#[derive(Parser)]
#[command(name = "seqrel", version, about = "Find linear recurrence relations of multidimensional sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and print its relations with shift certificates.
    Run(RunArgs),
    /// Run several algorithms on the same sequence and compare their ideals.
    Compare(CompareArgs),
    /// Benchmark the Rectangle, L-shape and Simplex families; writes CSV.
    Bench(BenchArgs),
    /// Probabilistic Gorenstein test of a zero-dimensional ideal.
    Gorenstein(GorensteinArgs),
    /// Re-check the certificates of a saved result against a sequence.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Input {
    /// Built-in sequence: binomial, pow23, sq, step, fib4, kron.
    #[arg(long, group = "input")]
    generator: Option<String>,
    /// Finite table as JSON.
    #[arg(long, group = "input")]
    table: Option<PathBuf>,
    /// Sequence spec as JSON (generator, ideal or table).
    #[arg(long, group = "input")]
    spec: Option<PathBuf>,
    /// Field: `Q` or `Fp:<prime>`.
    #[arg(long)]
    field: Option<String>,
    /// Monomial order, e.g. `drl(y<x)` or `lex(z<y<x)`.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args, Clone)]
struct BoundArgs {
    /// Stopping monomial (BMS variants and rank solver).
    #[arg(long)]
    bound: Option<String>,
    /// Shift set: all monomials of degree at most this (Scalar-FGLM).
    #[arg(long)]
    degree: Option<u32>,
    /// Shift set as a comma-separated monomial list (Scalar-FGLM).
    #[arg(long)]
    terms: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    bound: BoundArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Include the BMS per-monomial event log.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated algorithms.
    #[arg(long, default_value = "bms,sfglm")]
    algos: String,
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    bound: BoundArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'n', default_value_t = 2)]
    n: usize,
    /// Degree range: `a..b`, `a..=b` or a single degree.
    #[arg(short = 'd', long = "degrees")]
    degrees: String,
    #[arg(long, default_value = "bms,sfglm")]
    algos: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    field: Option<String>,
    /// Output CSV path; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GorensteinArgs {
    /// Comma-separated generators, or a file containing them.
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Result JSON written by `run`.
    #[arg(long)]
    result: PathBuf,
    #[command(flatten)]
    input: Input,
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Bound(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

fn classify_sequence(e: &SequenceError) -> CliError {
    match e {
        SequenceError::BoundExceeded { .. } => CliError::Bound(e.to_string()),
        SequenceError::PositiveDimensional | SequenceError::InitialMismatch(_) | SequenceError::Dimension { .. } => CliError::Failed(e.to_string()),
        _ => CliError::Parse(e.to_string()),
    }
}

impl From<CompareError> for CliError {
    fn from(e: CompareError) -> Self {
        match (&e, e.sequence_error()) {
            (_, Some(s)) => classify_sequence(s),
            (CompareError::Invalid(m), _) => CliError::Parse(m.clone()),
            (CompareError::Poly(PolyError::Syntax(_)), _) => CliError::Parse(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SequenceError> for CliError {
    fn from(e: SequenceError) -> Self {
        classify_sequence(&e)
    }
}

macro_rules! parse_err {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Parse(e.to_string())
            }
        }
    )*};
}
parse_err!(FieldError, OrderError, PolyError, serde_json::Error);

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

/// The resolved sequence description plus the field and order to use.
struct Resolved {
    field: FieldSpec,
    order: Option<MonomialOrder>,
    source: Source,
}

enum Source {
    Generator(Generator),
    Json(Value),
}

fn resolve(input: &Input) -> Result<Resolved, CliError> {
    let explicit_field = input.field.as_deref().map(str::parse::<FieldSpec>).transpose()?;
    let explicit_order = input.order.as_deref().map(str::parse::<MonomialOrder>).transpose()?;
    let (source, field, order) = if let Some(name) = &input.generator {
        let g = Generator::from_name(name)?;
        let field = if g.wants_rationals() { FieldSpec::Rationals } else { FieldSpec::Prime(65537) };
        (Source::Generator(g), field, Some(g.default_order()))
    } else {
        let path = input
            .table
            .as_ref()
            .or(input.spec.as_ref())
            .ok_or_else(|| CliError::Parse("one of --generator, --table or --spec is required".into()))?;
        let v: Value = serde_json::from_str(&read(path)?)?;
        let field = match v.get("field").and_then(Value::as_str) {
            Some(s) => s.parse()?,
            None => FieldSpec::Prime(65537),
        };
        let order = match v.get("ideal").and_then(|i| i.get("order")).and_then(Value::as_str) {
            Some(s) => Some(s.parse()?),
            None => v.get("generator").and_then(Value::as_str).and_then(|n| Generator::from_name(n).ok()).map(Generator::default_order),
        };
        (Source::Json(v), field, order)
    };
    Ok(Resolved {
        field: explicit_field.unwrap_or(field),
        order: explicit_order.or(order),
        source,
    })
}

fn build_oracle<F: Field>(k: &F, r: &Resolved) -> Result<(SequenceOracle<F>, MonomialOrder), CliError> {
    let oracle = match &r.source {
        Source::Generator(g) => SequenceOracle::generator(k, *g),
        Source::Json(v) => parse_sequence_spec(k, v)?.into_oracle(k)?,
    };
    let ord = r.order.clone().unwrap_or_else(|| MonomialOrder::drl_n(oracle.dim()));
    if ord.nvars() != oracle.dim() {
        return Err(CliError::Parse(format!("order has {} variables, sequence has dimension {}", ord.nvars(), oracle.dim())));
    }
    Ok((oracle, ord))
}

fn bound_for(algo: Algorithm, b: &BoundArgs, ord: &MonomialOrder) -> Result<Bound, CliError> {
    if algo.takes_term_set() {
        if let Some(d) = b.degree {
            return Ok(Bound::Terms(ord.monomials_of_degree_at_most(d)));
        }
        if let Some(t) = &b.terms {
            let ms = t.split(',').map(|s| ord.parse_monomial(s.trim())).collect::<Result<Vec<_>, _>>()?;
            return Ok(Bound::Terms(MonomialSet::sorted(ms, ord)));
        }
        Err(CliError::Parse(format!("{algo} needs --degree or --terms")))
    } else {
        let m = b.bound.as_deref().ok_or_else(|| CliError::Parse(format!("{algo} needs --bound")))?;
        Ok(Bound::Monomial(ord.parse_monomial(m)?))
    }
}

fn parse_algos(s: &str) -> Result<Vec<Algorithm>, CliError> {
    s.split(',').filter(|a| !a.trim().is_empty()).map(|a| a.parse().map_err(CliError::from)).collect()
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Failed(e.to_string()))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn with_field<T>(spec: FieldSpec, run: impl FnOnce(&dyn FieldRunner) -> Result<T, CliError>) -> Result<T, CliError> {
    match spec {
        FieldSpec::Rationals => run(&Rationals::new()),
        FieldSpec::Prime(p) => run(&PrimeField::new(p)?),
    }
}

/// Object-safe entry points, implemented once for every field.
trait FieldRunner {
    fn run(&self, a: &RunArgs, r: &Resolved, out: &mut dyn Write) -> Result<(), CliError>;
    fn compare(&self, a: &CompareArgs, r: &Resolved, out: &mut dyn Write) -> Result<(), CliError>;
    fn verify(&self, a: &VerifyArgs, r: &Resolved, out: &mut dyn Write) -> Result<bool, CliError>;
    fn gorenstein(&self, a: &GorensteinArgs, ord: &MonomialOrder, out: &mut dyn Write) -> Result<(), CliError>;
    fn bench(&self, specs: &[FamilySpec], algos: &[Algorithm], opts: BenchOptions, out: &mut dyn Write) -> Result<(), CliError>;
}

impl<F: Field> FieldRunner for F {
    fn run(&self, a: &RunArgs, r: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
        let algo: Algorithm = a.algo.parse()?;
        let (oracle, ord) = build_oracle(self, r)?;
        let bound = bound_for(algo, &a.bound, &ord)?;
        let run = run_algorithm(&oracle, &ord, algo, &bound, a.trace)?;
        match a.format {
            Format::Json => {
                let mut v = run_to_json(self, &run);
                if let Some(t) = &run.trace {
                    v["trace"] = t.lines().map(|l| Value::String(l.to_string())).collect();
                }
                emit(out, &pretty(&v))
            }
            Format::Text => {
                if let Some(t) = &run.trace {
                    emit(out, t)?;
                }
                emit(out, &run_to_text(self, &run))
            }
        }
    }

    fn compare(&self, a: &CompareArgs, r: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
        let (oracle, ord) = build_oracle(self, r)?;
        let runs = parse_algos(&a.algos)?
            .into_iter()
            .map(|algo| Ok((algo, bound_for(algo, &a.bound, &ord)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let report = compare(&oracle, &ord, &runs)?;
        match a.format {
            Format::Json => {
                let mut v = report_to_json(self, &report);
                v["differing"] = differing_outputs(&report)
                    .into_iter()
                    .map(|(i, j)| json!([report.runs[i].algorithm.name(), report.runs[j].algorithm.name()]))
                    .collect();
                emit(out, &pretty(&v))
            }
            Format::Text => {
                for run in &report.runs {
                    emit(out, &run_to_text(self, run))?;
                }
                for (i, j, holds) in &report.containment {
                    emit(
                        out,
                        &format!("ideal({}) in ideal({}) up to degree {}: {holds}\n", report.runs[*i].algorithm, report.runs[*j].algorithm, report.window),
                    )?;
                }
                for (i, j) in differing_outputs(&report) {
                    emit(out, &format!("outputs differ: {} vs {}\n", report.runs[i].algorithm, report.runs[j].algorithm))?;
                }
                Ok(())
            }
        }
    }

    fn verify(&self, a: &VerifyArgs, r: &Resolved, out: &mut dyn Write) -> Result<bool, CliError> {
        let (oracle, _) = build_oracle(self, r)?;
        let doc: Value = serde_json::from_str(&read(&a.result)?)?;
        let set_json = doc.get("result").unwrap_or(&doc);
        let set = relation_set_from_json(self, set_json)?;
        let certified = verify_relation_set(&oracle, &set)?;
        let zero_dim = is_zero_dimensional(&set.polys(), &set.order);
        emit(out, &pretty(&json!({"certified": certified, "zero_dimensional": zero_dim})))?;
        Ok(certified)
    }

    fn gorenstein(&self, a: &GorensteinArgs, ord: &MonomialOrder, out: &mut dyn Write) -> Result<(), CliError> {
        let text = match fs::metadata(&a.ideal) {
            Ok(m) if m.is_file() => read(&PathBuf::from(&a.ideal))?,
            _ => a.ideal.clone(),
        };
        let gb = text
            .split([',', '\n'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Poly::parse(self, ord, s))
            .collect::<Result<Vec<_>, _>>()?;
        let r = gorenstein_test(self, &gb, ord, a.trials, a.seed)?;
        emit(
            out,
            &pretty(&json!({
                "verdict": r.verdict.to_string(),
                "staircase_size": r.staircase_size,
                "trial_sizes": r.trial_sizes,
            })),
        )
    }

    fn bench(&self, specs: &[FamilySpec], algos: &[Algorithm], opts: BenchOptions, out: &mut dyn Write) -> Result<(), CliError> {
        let rows = bench(self, specs, algos, opts)?;
        write_csv(out, &rows).map_err(|e| CliError::Failed(e.to_string()))
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| CliError::Failed(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Run(a) => {
            let r = resolve(&a.input)?;
            with_field(r.field, |k| k.run(&a, &r, &mut stdout))
        }
        Command::Compare(a) => {
            let r = resolve(&a.input)?;
            with_field(r.field, |k| k.compare(&a, &r, &mut stdout))
        }
        Command::Verify(a) => {
            let r = resolve(&a.input)?;
            if with_field(r.field, |k| k.verify(&a, &r, &mut stdout))? {
                Ok(())
            } else {
                Err(CliError::Failed("a certificate does not hold".into()))
            }
        }
        Command::Gorenstein(a) => {
            let ord: MonomialOrder = a.order.as_deref().unwrap_or("drl(y<x)").parse()?;
            let field: FieldSpec = a.field.as_deref().unwrap_or("Fp:65537").parse()?;
            with_field(field, |k| k.gorenstein(&a, &ord, &mut stdout))
        }
        Command::Bench(a) => {
            let family: Family = a.family.parse()?;
            let algos = parse_algos(&a.algos)?;
            let range = parse_degree_range(&a.degrees)?;
            let specs: Vec<FamilySpec> = range.map(|d| FamilySpec { family, n: a.n, d, seed: a.seed }).collect();
            let field: FieldSpec = a.field.as_deref().unwrap_or("Fp:65537").parse()?;
            let mut out = output(&a.out)?;
            drop(stdout);
            with_field(field, |k| k.bench(&specs, &algos, BenchOptions { timing: a.timing }, &mut out))?;
            out.flush().map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Parse(m) | CliError::Bound(m) | CliError::Failed(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}
