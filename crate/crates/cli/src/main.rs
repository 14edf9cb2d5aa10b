use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use petdyn_core::corpus;
use petdyn_core::dynsys::{self, SubstitutionSystem};
use petdyn_core::pet::{self, PetOptions};
use petdyn_core::{
    parse_gpoly, parse_integral_polynomial, Error, ErrorClass, GroupModel, IntegralPolynomial, PolySystem, Result,
    Rule, WindowSet,
};
use serde::Serialize;

#[derive(Parser, Serialize)]
#[command(
    name = "petdyn",
    version,
    about = "Polynomial sequences in nilpotent groups and windowed recurrence experiments"
)]
struct Cli {
    /// Group model: a JSON file or one of heisenberg, ut4, z, abelian:<s>.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Weight and leading coefficient of a Γ-polynomial.
    Weight { expr: String },
    /// Weight vector of a system given inline or as a JSON file.
    Wvec(SystemArgs),
    /// Whether two Γ-polynomials are equivalent.
    Equiv { a: String, b: String },
    /// Checks a group model against the group axioms and its matrix representation.
    GroupCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Runs PET-induction on a system file and emits the trace.
    PetReduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleArg::ProofStep)]
        rule: RuleArg,
        /// Number of shifts minus one for the proof-step rule.
        #[arg(long, default_value_t = 2)]
        ell: usize,
    },
    /// Classifies a membership CSV.
    Classify {
        file: PathBuf,
        #[arg(long)]
        gap: Option<u64>,
        #[arg(long)]
        run: Option<u64>,
    },
    /// Return-time set of U under polynomial shifts into V_1..V_k.
    Returns {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        u: String,
        /// Polynomial in n; repeat once per V.
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
        #[arg(long = "v", required = true)]
        vs: Vec<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0:10000")]
        window: Window,
    },
    /// Coverage of word tuples along polynomial orbits from sampled base points.
    Density {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
        #[arg(long, default_value_t = 2)]
        word_length: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-10000:10000")]
        window: Window,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Greedy nested return construction.
    Nested {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
        #[arg(long = "v", required = true)]
        vs: Vec<String>,
        /// Gap growth r, a polynomial in n.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
}

#[derive(Args, Serialize)]
struct SystemArgs {
    /// JSON array of Γ-polynomial strings.
    #[arg(long, conflicts_with = "exprs")]
    file: Option<PathBuf>,
    exprs: Vec<String>,
}

#[derive(Args, Serialize)]
struct WordArgs {
    /// Substitution definition file; defaults to Chacon.
    #[arg(long)]
    substitution: Option<PathBuf>,
    /// Length of the generated Chacon word.
    #[arg(long, default_value_t = dynsys::CHACON_LENGTH)]
    length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RuleArg {
    Quotient,
    ProofStep,
}

#[derive(Clone, Copy, Debug, Serialize)]
struct Window(i64, i64);

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
        let lo: i64 = lo.trim().parse().map_err(|e| format!("lower bound: {e}"))?;
        let hi: i64 = hi.trim().parse().map_err(|e| format!("upper bound: {e}"))?;
        if lo > hi {
            return Err(format!("empty window {lo}:{hi}"));
        }
        Ok(Window(lo, hi))
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a Cli,
    result: T,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Input => 2,
        ErrorClass::Validation => 3,
        ErrorClass::Window => 4,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Weight { .. } => "weight",
        Command::Wvec(_) => "wvec",
        Command::Equiv { .. } => "equiv",
        Command::GroupCheck { .. } => "group-check",
        Command::PetReduce { .. } => "pet-reduce",
        Command::Classify { .. } => "classify",
        Command::Returns { .. } => "returns",
        Command::Density { .. } => "density",
        Command::Nested { .. } => "nested",
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, result: T) -> Result<()> {
    let report = Report {
        tool: "petdyn",
        version: env!("CARGO_PKG_VERSION"),
        command: command_name(&cli.command),
        seed: cli.seed,
        config: cli,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(cli, &text)
}

fn is_json(cli: &Cli) -> bool {
    cli.format == Some(Format::Json)
}

/// The named or file model; otherwise `Z^s` with `s` the largest index used.
fn resolve_model(cli: &Cli, texts: &[String]) -> Result<Arc<GroupModel>> {
    if let Some(spec) = &cli.model {
        if let Some(m) = GroupModel::builtin(spec) {
            return Ok(m.shared());
        }
        if !Path::new(spec).exists() {
            return Err(Error::InvalidModel(format!("`{spec}` is neither a builtin model nor a file")));
        }
        return Ok(GroupModel::from_json_file(spec)?.shared());
    }
    let mut s = 1usize;
    for t in texts {
        let b = t.as_bytes();
        for (i, _) in t.match_indices('S') {
            let digits: String = b[i + 1..].iter().take_while(|c| c.is_ascii_digit()).map(|&c| c as char).collect();
            if let Ok(j) = digits.parse::<usize>() {
                s = s.max(j);
            }
        }
    }
    Ok(GroupModel::abelian(s).shared())
}

fn read_system_texts(file: &Path) -> Result<Vec<String>> {
    Ok(serde_json::from_str(&fs::read_to_string(file)?)?)
}

fn parse_polys(texts: &[String]) -> Result<Vec<IntegralPolynomial>> {
    texts.iter().map(|t| parse_integral_polynomial(t)).collect()
}

fn word(args: &WordArgs) -> Result<SubstitutionSystem> {
    match &args.substitution {
        Some(path) => SubstitutionSystem::from_file(path),
        None => Ok(SubstitutionSystem::chacon_with_length(args.length.max(1))),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Weight { expr } => {
            let model = resolve_model(cli, std::slice::from_ref(expr))?;
            let g = parse_gpoly(&model, expr)?;
            let lc = g.leading_coefficient().map(|c| c.to_string());
            if is_json(cli) {
                emit_json(cli, serde_json::json!({ "weight": g.weight().to_string(), "leading_coefficient": lc }))?;
            } else {
                emit(cli, &format!("{} {}\n", g.weight(), lc.as_deref().unwrap_or("-")))?;
            }
        }
        Command::Wvec(args) => {
            let texts = match &args.file {
                Some(f) => read_system_texts(f)?,
                None => args.exprs.clone(),
            };
            let model = resolve_model(cli, &texts)?;
            let system = PolySystem::parse(&model, &texts)?;
            let wv = system.weight_vector();
            if is_json(cli) {
                emit_json(cli, serde_json::json!({ "weight_vector": wv.to_string(), "entries": wv }))?;
            } else {
                emit(cli, &format!("{wv}\n"))?;
            }
        }
        Command::Equiv { a, b } => {
            let model = resolve_model(cli, &[a.clone(), b.clone()])?;
            let (ga, gb) = (parse_gpoly(&model, a)?, parse_gpoly(&model, b)?);
            let eq = ga.equivalent(&gb)?;
            if is_json(cli) {
                emit_json(cli, serde_json::json!({ "equivalent": eq }))?;
            } else {
                emit(cli, &format!("{eq}\n"))?;
            }
        }
        Command::GroupCheck { samples } => {
            let model = resolve_model(cli, &[])?;
            if cli.model.is_none() {
                return Err(Error::InvalidModel("group-check needs --model".into()));
            }
            let report = group_check(&model, *samples, cli.seed)?;
            let ok = report.failures.is_empty();
            emit_json(cli, &report)?;
            if !ok {
                eprintln!("error: {} failed checks", report.failures.len());
                return Ok(ExitCode::from(exit_code(ErrorClass::Validation)));
            }
        }
        Command::PetReduce { file, rule, ell } => {
            let texts = read_system_texts(file)?;
            let model = resolve_model(cli, &texts)?;
            let system = PolySystem::parse(&model, &texts)?;
            let rule = match rule {
                RuleArg::Quotient => Rule::Quotient,
                RuleArg::ProofStep => Rule::ProofStep,
            };
            let trace = pet::pet_reduce_with(&system, rule, PetOptions { ell: *ell, ..PetOptions::default() })?;
            let ok = trace.is_strictly_decreasing();
            emit_json(cli, &trace)?;
            if !ok {
                eprintln!("error: weight vectors did not decrease strictly");
                return Ok(ExitCode::from(exit_code(ErrorClass::Validation)));
            }
        }
        Command::Classify { file, gap, run } => {
            let set = WindowSet::read_csv(fs::File::open(file)?)?;
            emit_json(cli, set.classify(*gap, *run)?)?;
        }
        Command::Returns { word: w, u, polys, vs, window } => {
            if polys.len() != vs.len() {
                return Err(Error::DimensionMismatch { expected: polys.len(), found: vs.len() });
            }
            let sys = word(w)?;
            let u = sys.cylinder(u)?;
            let pairs = parse_polys(polys)?
                .into_iter()
                .zip(vs)
                .map(|(p, v)| Ok((p, sys.cylinder(v)?)))
                .collect::<Result<Vec<_>>>()?;
            let rs = dynsys::return_set(&sys, &u, &pairs, (window.0, window.1))?;
            if is_json(cli) {
                emit_json(
                    cli,
                    serde_json::json!({
                        "decided_window": rs.decided_window(),
                        "members": rs.members.members().collect::<Vec<_>>(),
                        "undecided": rs.undecided.members().collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                let mut buf = Vec::new();
                rs.decided()?.write_csv(&mut buf)?;
                emit(cli, &String::from_utf8_lossy(&buf))?;
            }
        }
        Command::Density { word: w, polys, word_length, window, samples } => {
            let sys = word(w)?;
            let polys = parse_polys(polys)?;
            let report =
                dynsys::density_experiment(&sys, &polys, *word_length, (window.0, window.1), *samples, cli.seed)?;
            emit_json(cli, report)?;
        }
        Command::Nested { word: w, polys, vs, r, ell } => {
            let sys = word(w)?;
            let polys = parse_polys(polys)?;
            let cyls = vs.iter().map(|v| sys.cylinder(v)).collect::<Result<Vec<_>>>()?;
            let r = parse_integral_polynomial(r)?;
            emit_json(cli, dynsys::nested_return_construction(&sys, &polys, &cyls, &r, *ell)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GroupCheckReport {
    model: String,
    dim: usize,
    samples: usize,
    matrix_checked: bool,
    failures: Vec<String>,
}

fn group_check(model: &GroupModel, samples: usize, seed: u64) -> Result<GroupCheckReport> {
    let mut rng = corpus::rng(seed);
    let mut failures = Vec::new();
    let matrix = model.matrix_rep().is_some();
    let e = model.identity();
    for i in 0..samples {
        let [a, b, c] = [0, 1, 2].map(|_| corpus::group_element(&mut rng, model.dim(), 20));
        let ab = model.multiply(&a, &b)?;
        if model.multiply(&ab, &c)? != model.multiply(&a, &model.multiply(&b, &c)?)? {
            failures.push(format!("sample {i}: associativity fails for {a}, {b}, {c}"));
        }
        if model.multiply(&a, &e)? != a || model.multiply(&e, &a)? != a {
            failures.push(format!("sample {i}: identity fails for {a}"));
        }
        if !model.multiply(&a, &model.inverse(&a)?)?.is_identity() {
            failures.push(format!("sample {i}: inverse fails for {a}"));
        }
        let k = (i % 21) as i64 - 10;
        let mut acc = e.clone();
        let step = if k < 0 { model.inverse(&a)? } else { a.clone() };
        for _ in 0..k.unsigned_abs() {
            acc = model.multiply(&acc, &step)?;
        }
        if model.power(&a, &BigInt::from(k))? != acc {
            failures.push(format!("sample {i}: power {k} of {a} disagrees with repeated products"));
        }
        if matrix && model.to_matrix(&ab)? != model.to_matrix(&a)?.mul(&model.to_matrix(&b)?) {
            failures.push(format!("sample {i}: matrix image of {a}·{b} disagrees"));
        }
    }
    Ok(GroupCheckReport {
        model: model.name().to_string(),
        dim: model.dim(),
        samples,
        matrix_checked: matrix,
        failures,
    })
}
