use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use returnset::json::{bigint_from_json, bigint_to_json, parse_rational, rational_from_json, rational_to_json};
use returnset::orbit::{default_bounds, solve, verify_solution_set, Certificate, OrbitProblem, SolutionSet};
use returnset::padic::{pexp, plog, torus_linear_reduction, PadicNum, DEFAULT_PRECISION};
use returnset::semigroup::hilbert::try_hilbert_basis;
use returnset::semigroup::{ClassCSet, IntegerLattice};
use returnset::torus::{
    condition_polynomial_61, condition_polynomial_62, gap_witness, line_example, noninvertible_example,
    return_set_enumerate, CharacterTarget, MonomialMap, TorusPoint,
};
use returnset::Error;

#[derive(Parser)]
#[command(name = "returnset", version, about = "Return sets of commuting linear and monomial maps")]
struct Cli {
    /// Per-coordinate box bounds, e.g. `--box 30,30`. One value is used for every coordinate.
    #[arg(long = "box", global = true, value_delimiter = ',')]
    bounds: Option<Vec<u64>>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Accepted for reproducible scripting; every subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an orbit problem and print its SolutionSet.
    Solve { input: PathBuf },
    /// List the tuples of the box in the return set (orbit or torus problem).
    Enumerate { input: PathBuf },
    /// Compare a claimed answer with brute force on the box.
    Verify {
        /// A problem file, or a file with "problem" and "answer" keys.
        input: PathBuf,
        /// Answer file (ClassCSet or SolutionSet JSON) when not inside the input.
        #[arg(long)]
        answer: Option<PathBuf>,
    },
    /// Reproduce one of the monomial counterexamples.
    Counterexample {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Decide a multiplicative relation exactly and through p-adic logarithms.
    PadicDemo {
        /// Optional file with "xs", "y", and "n".
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Hilbert basis of H ∩ ℕ^r for a lattice given by generators.
    Hilbert { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(alias = "6.1")]
    Line,
    #[value(alias = "6.2")]
    Noninvertible,
}

enum Failure {
    Malformed(String),
    Unsupported(String),
    Verification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Malformed(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Malformed(m) | Failure::Unsupported(m) | Failure::Verification(m) | Failure::Io(m) => m,
        }
    }
}

fn classify(ctx: &str, e: Error) -> Failure {
    match e {
        Error::UnsupportedField(_) => Failure::Unsupported(format!("{ctx}: {e}")),
        _ => Failure::Malformed(format!("{ctx}: {e}")),
    }
}

struct Report {
    json: Value,
    text: String,
    /// Set when the report was written but the run should still fail.
    failure: Option<Failure>,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Malformed(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

fn bounds_for(cli: &Option<Vec<u64>>, r: usize, default: Vec<u64>) -> Result<Vec<u64>, Failure> {
    let Some(b) = cli else { return Ok(default) };
    if b.contains(&0) {
        return Err(Failure::Malformed("--box: bounds must be positive".into()));
    }
    match b.len() {
        1 => Ok(vec![b[0]; r]),
        n if n == r => Ok(b.clone()),
        n => Err(Failure::Malformed(format!("--box: {n} bounds given for rank {r}"))),
    }
}

fn tuples_json(s: &BTreeSet<Vec<u64>>) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Exact => "exact".into(),
        Certificate::VerifiedConjecture { bounds, verified_cells } => {
            format!("verified conjecture on box {bounds:?}, cells checked {verified_cells:?}")
        }
        Certificate::Partial(why) => format!("partial: {why}"),
    }
}

fn set_text(s: &ClassCSet) -> String {
    let mut out = String::new();
    if s.is_empty() {
        out.push_str("  (empty)\n");
    }
    for c in s.cells() {
        let basis: Vec<String> = c.lattice().basis().iter().map(|b| format!("{b:?}")).collect();
        let _ = writeln!(out, "  {:?} + <{}>", c.offset(), basis.join(", "));
    }
    out
}

fn cmd_solve(input: &Path) -> Result<Report, Failure> {
    let p = OrbitProblem::from_json(&read_json(input)?).map_err(|e| classify(&input.display().to_string(), e))?;
    let s = solve(&p).map_err(|e| classify("solve", e))?;
    let text = format!("E =\n{}certificate: {}\n", set_text(&s.answer), certificate_text(&s.certificate));
    let failure = match &s.certificate {
        Certificate::Partial(why) => Some(Failure::Unsupported(format!("partial answer: {why}"))),
        _ => None,
    };
    Ok(Report { json: s.to_json(), text, failure })
}

struct TorusInput {
    maps: Vec<MonomialMap>,
    alpha: TorusPoint,
    target: CharacterTarget,
}

fn torus_from_json(v: &Value) -> returnset::Result<TorusInput> {
    let maps = v["maps"]
        .as_array()
        .ok_or_else(|| Error::Invalid("'maps' must be an array".into()))?
        .iter()
        .enumerate()
        .map(|(i, m)| MonomialMap::from_json(m).map_err(|e| Error::Invalid(format!("maps[{i}]: {e}"))))
        .collect::<returnset::Result<Vec<_>>>()?;
    let alpha = TorusPoint::from_json(v.get("alpha").ok_or_else(|| Error::Invalid("missing field 'alpha'".into()))?)
        .map_err(|e| Error::Invalid(format!("alpha: {e}")))?;
    let target = CharacterTarget::from_json(v.get("target").ok_or_else(|| Error::Invalid("missing field 'target'".into()))?)
        .map_err(|e| Error::Invalid(format!("target: {e}")))?;
    Ok(TorusInput { maps, alpha, target })
}

fn cmd_enumerate(cli: &Cli, input: &Path) -> Result<Report, Failure> {
    let v = read_json(input)?;
    let ctx = input.display().to_string();
    let (bounds, hits) = if v.get("maps").is_some() {
        let t = torus_from_json(&v).map_err(|e| classify(&ctx, e))?;
        let bounds = bounds_for(&cli.bounds, t.maps.len(), vec![20; t.maps.len()])?;
        let hits = return_set_enumerate(&t.maps, &t.alpha, &t.target, &bounds).map_err(|e| classify("enumerate", e))?;
        (bounds, hits)
    } else {
        let p = OrbitProblem::from_json(&v).map_err(|e| classify(&ctx, e))?;
        let bounds = bounds_for(&cli.bounds, p.r(), default_bounds(p.r()))?;
        let hits = returnset::orbit::Evaluator::new(&p).map_err(|e| classify("enumerate", e))?.hits(&bounds);
        (bounds, hits)
    };
    let mut text = format!("{} tuples in box {bounds:?}\n", hits.len());
    for h in &hits {
        let _ = writeln!(text, "  {h:?}");
    }
    Ok(Report { json: json!({"box": bounds, "tuples": tuples_json(&hits)}), text, failure: None })
}

fn answer_from_json(v: &Value) -> returnset::Result<ClassCSet> {
    if v.get("certificate").is_some() {
        return Ok(SolutionSet::from_json(v)?.answer);
    }
    ClassCSet::from_json(v)
}

fn cmd_verify(cli: &Cli, input: &Path, answer: Option<&Path>) -> Result<Report, Failure> {
    let v = read_json(input)?;
    let ctx = input.display().to_string();
    let (pv, av) = match answer {
        Some(a) => (v, read_json(a)?),
        None => {
            let p = v.get("problem").cloned().ok_or_else(|| Failure::Malformed(format!("{ctx}: missing field 'problem' (or pass --answer)")))?;
            let a = v.get("answer").cloned().ok_or_else(|| Failure::Malformed(format!("{ctx}: missing field 'answer'")))?;
            (p, a)
        }
    };
    let p = OrbitProblem::from_json(&pv).map_err(|e| classify(&format!("{ctx}: problem"), e))?;
    let ans = answer_from_json(&av).map_err(|e| classify("answer", e))?;
    let bounds = bounds_for(&cli.bounds, p.r(), default_bounds(p.r()))?;
    let rep = verify_solution_set(&p, &ans, &bounds).map_err(|e| classify("verify", e))?;
    let text = format!("{}\n", rep.describe());
    let failure = (!rep.ok()).then(|| Failure::Verification(format!("verification failed: {}", rep.describe())));
    Ok(Report { json: rep.to_json(), text, failure })
}

fn cmd_counterexample(cli: &Cli, which: Which) -> Result<Report, Failure> {
    let (name, (maps, alpha, target), coord, cond): (_, _, usize, fn(i64, i64) -> i128) = match which {
        Which::Line => ("line", line_example(), 0, condition_polynomial_61),
        Which::Noninvertible => ("noninvertible", noninvertible_example(), 1, condition_polynomial_62),
    };
    let bounds = bounds_for(&cli.bounds, 2, vec![200, 200])?;
    let hits = return_set_enumerate(&maps, &alpha, &target, &bounds).map_err(|e| classify("enumerate", e))?;
    let mut zeros = BTreeSet::new();
    for m in 0..=bounds[0] {
        for n in 0..=bounds[1] {
            if cond(m as i64, n as i64) == 0 {
                zeros.insert(vec![m, n]);
            }
        }
    }
    let agrees = zeros == hits;
    let gaps = (!hits.is_empty()).then(|| gap_witness(&hits, coord).expect("coordinate in range"));
    let mut text = format!("{name} counterexample, box {bounds:?}\n     m      n\n");
    for h in &hits {
        let _ = writeln!(text, "{:>6} {:>6}", h[0], h[1]);
    }
    let _ = writeln!(text, "condition polynomial vanishes exactly on these: {agrees}");
    if let Some(g) = &gaps {
        let _ = writeln!(text, "coordinate {coord} values {:?}\ngaps {:?}", g.values, g.gaps);
    }
    let json = json!({
        "instance": name,
        "box": bounds,
        "maps": maps.iter().map(MonomialMap::to_json).collect::<Vec<_>>(),
        "alpha": alpha.to_json(),
        "target": target.to_json(),
        "solutions": tuples_json(&hits),
        "condition_polynomial_agrees": agrees,
        "gap_coordinate": coord,
        "gaps": gaps.as_ref().map(|g| g.to_json()),
    });
    let failure = (!agrees).then(|| Failure::Verification("enumeration and condition polynomial disagree".into()));
    Ok(Report { json, text, failure })
}

fn rationals(v: &Value, key: &str) -> returnset::Result<Vec<BigRational>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid(format!("'{key}' must be an array")))?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x).map_err(|e| Error::Invalid(format!("{key}[{i}]: {e}"))))
        .collect()
}

fn cmd_padic(input: Option<&Path>, p: u64, prec: u32) -> Result<Report, Failure> {
    let (xs, y, n) = match input {
        Some(path) => {
            let v = read_json(path)?;
            let ctx = path.display().to_string();
            let xs = rationals(&v, "xs").map_err(|e| classify(&ctx, e))?;
            let y = rational_from_json(v.get("y").unwrap_or(&Value::Null)).map_err(|e| classify(&format!("{ctx}: y"), e))?;
            let n = v
                .get("n")
                .and_then(Value::as_array)
                .ok_or_else(|| Failure::Malformed(format!("{ctx}: 'n' must be an array")))?
                .iter()
                .enumerate()
                .map(|(i, x)| x.as_i64().ok_or_else(|| Failure::Malformed(format!("{ctx}: n[{i}] must be an integer"))))
                .collect::<Result<Vec<_>, _>>()?;
            (xs, y, n)
        }
        None => {
            let base = parse_rational(&(p + 1).to_string()).expect("integer literal");
            let y = &base * &base;
            (vec![base], y, vec![2])
        }
    };
    let rep = torus_linear_reduction(&xs, &y, &n, p, prec).map_err(|e| classify("padic-demo", e))?;
    let mut steps = Vec::new();
    let mut text = format!("p = {p}, precision N = {prec}\n");
    for (x, e) in xs.iter().zip(&n) {
        let px = PadicNum::from_rational(p, prec, x).map_err(|e| classify("padic-demo", e))?;
        let l = plog(&px).map_err(|e| classify("padic-demo", e))?;
        let back = pexp(&l).map_err(|e| classify("padic-demo", e))?;
        let _ = writeln!(text, "log({x}) = {l}\nexp(log({x})) = {back}\nexponent {e}");
        steps.push(json!({
            "x": rational_to_json(x),
            "n": e,
            "log": l.to_json(),
            "exp_log": back.to_json(),
            "roundtrip": back.eq_at_precision(&px),
        }));
    }
    let _ = writeln!(text, "sum n_i log x_i = {}", rep.lhs);
    match &rep.rhs {
        Some(r) => {
            let _ = writeln!(text, "log({y}) = {r}");
        }
        None => {
            let _ = writeln!(text, "{y} is not in 1 + {p}Z_{p}, so no power product equals it");
        }
    }
    let _ = writeln!(text, "exact: {}\nlog side: {:?} at precision {prec}\nconsistent: {}", rep.exact, rep.log_side, rep.consistent());
    let json = json!({
        "p": p,
        "precision": prec,
        "xs": xs.iter().map(rational_to_json).collect::<Vec<_>>(),
        "y": rational_to_json(&y),
        "n": n,
        "logs": steps,
        "report": rep.to_json(),
    });
    Ok(Report { json, text, failure: None })
}

fn cmd_hilbert(input: &Path) -> Result<Report, Failure> {
    let v = read_json(input)?;
    let ctx = input.display().to_string();
    let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| Failure::Malformed(format!("{ctx}: missing integer field 'r'")))? as usize;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::Malformed(format!("{ctx}: 'generators' must be an array")))?
        .iter()
        .enumerate()
        .map(|(i, g)| {
            g.as_array()
                .ok_or_else(|| Failure::Malformed(format!("{ctx}: generators[{i}] must be an array")))?
                .iter()
                .map(|x| bigint_from_json(x).map_err(|e| Failure::Malformed(format!("{ctx}: generators[{i}]: {e}"))))
                .collect::<Result<Vec<BigInt>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h = IntegerLattice::from_generators(r, &gens).map_err(|e| classify(&ctx, e))?;
    let basis = try_hilbert_basis(&h).map_err(|e| Failure::Unsupported(format!("hilbert: {e}")))?;
    let mut text = format!("{} basis vectors\n", basis.len());
    for b in &basis {
        let _ = writeln!(text, "  {b:?}");
    }
    let json = json!({
        "r": r,
        "lattice": h.basis().iter().map(|row| row.iter().map(bigint_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "hilbert_basis": basis.iter().map(|row| row.iter().map(bigint_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Report { json, text, failure: None })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Solve { input } => cmd_solve(input),
        Command::Enumerate { input } => cmd_enumerate(cli, input),
        Command::Verify { input, answer } => cmd_verify(cli, input, answer.as_deref()),
        Command::Counterexample { which } => cmd_counterexample(cli, *which),
        Command::PadicDemo { input, prime, precision } => cmd_padic(input.as_deref(), *prime, *precision),
        Command::Hilbert { input } => cmd_hilbert(input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    let mut body = if cli.pretty {
        report.text.clone()
    } else {
        serde_json::to_string(&report.json).expect("serializable") + "\n"
    };
    if cli.pretty && !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    match report.failure {
        Some(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
        None => ExitCode::SUCCESS,
    }
}
