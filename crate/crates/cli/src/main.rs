use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use opkit_core::diagrams::{self, FiniteFunction, Variant};
use opkit_core::distlaw::{distlaw_suite, Explicit, SuiteSize};
use opkit_core::laws::{LawCheck, Report};
use opkit_core::operads::json::{load_arity, load_candidate};
use opkit_core::operads::{self, end_clone, monoid_check, subst, ArityPresheaf};
use opkit_core::prof::{kleisli_laws_check, load_profunctor, prof_compose};
use opkit_core::properads::{connected_perms, connected_perms_bruteforce, parse_profile, profiles};
use opkit_core::samples::{arity_samples, kleisli_samples};
use opkit_core::{limits, Error, ErrorKind};

const SCHEMA: &str = "opkit-report/1";

#[derive(Parser)]
#[command(name = "opkit", version, about = "Free monoidal monads, coends, operads and properads on finite data")]
struct Cli {
    /// Also print a machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings in the JSON report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// String diagrams.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Arity presheaves and operads.
    #[command(subcommand)]
    Operad(OperadCmd),
    /// Profunctors.
    #[command(subcommand)]
    Prof(ProfCmd),
    /// Law checks on seeded samples.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Connected permutations.
    #[command(subcommand)]
    Properad(ProperadCmd),
    /// The bundled checks.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Args)]
struct DiagramArgs {
    file: PathBuf,
    #[arg(long, default_value = "full")]
    variant: Variant,
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// Prints the normal form.
    Normalize(DiagramArgs),
    /// Prints the finite function the diagram denotes.
    Eval(DiagramArgs),
}

#[derive(Subcommand)]
enum OperadCmd {
    /// The substitution product Y • X up to an arity.
    Subst {
        #[arg(long)]
        variant: Variant,
        y: PathBuf,
        x: PathBuf,
        #[arg(long)]
        arity: usize,
        /// Print a representative of every class.
        #[arg(long)]
        list: bool,
    },
    /// Checks the monoid laws of a candidate.
    Check {
        candidate: PathBuf,
        #[arg(long)]
        arity: usize,
    },
}

#[derive(Subcommand)]
enum ProfCmd {
    /// The composite Ψ∘Φ.
    Compose { psi: PathBuf, phi: PathBuf },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// The four distributive-law equations.
    Distlaw {
        /// Defaults to every variant carrying a monad.
        #[arg(long)]
        variant: Option<Variant>,
    },
    /// The Kleisli-structure equations.
    Kleisli {
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum ProperadCmd {
    /// Counts the connected permutations of two profiles such as `2,1`.
    Lambda {
        ms: String,
        ns: String,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    Run,
}

#[derive(Serialize)]
struct Input {
    path: String,
    sha256: String,
}

#[derive(Serialize, PartialEq, Eq, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Serialize)]
struct RunReport {
    schema: &'static str,
    command: String,
    seed: u64,
    inputs: Vec<Input>,
    outcome: Outcome,
    witnesses: Vec<String>,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<f64>,
}

/// What a command produced: text for people, a value for the report.
struct Done {
    text: String,
    result: Value,
    report: Option<Report>,
}

impl Done {
    fn plain(text: String, result: Value) -> Self {
        Done { text, result, report: None }
    }

    fn checks(report: Report) -> Self {
        let result = serde_json::to_value(&report).unwrap_or(Value::Null);
        Done { text: report.to_string(), result, report: Some(report) }
    }
}

fn hash(path: &Path) -> Input {
    let sha256 = match std::fs::read(path) {
        Ok(bytes) => Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect(),
        Err(_) => String::new(),
    };
    Input { path: path.display().to_string(), sha256 }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Diagram(DiagramCmd::Normalize(_)) => "diagram normalize",
        Command::Diagram(DiagramCmd::Eval(_)) => "diagram eval",
        Command::Operad(OperadCmd::Subst { .. }) => "operad subst",
        Command::Operad(OperadCmd::Check { .. }) => "operad check",
        Command::Prof(ProfCmd::Compose { .. }) => "prof compose",
        Command::Check(CheckCmd::Distlaw { .. }) => "check distlaw",
        Command::Check(CheckCmd::Kleisli { .. }) => "check kleisli",
        Command::Properad(ProperadCmd::Lambda { .. }) => "properad lambda",
        Command::Suite(SuiteCmd::Run) => "suite run",
    }
}

fn inputs(c: &Command) -> Vec<&Path> {
    match c {
        Command::Diagram(DiagramCmd::Normalize(a) | DiagramCmd::Eval(a)) => vec![&a.file],
        Command::Operad(OperadCmd::Subst { y, x, .. }) => vec![y, x],
        Command::Operad(OperadCmd::Check { candidate, .. }) => vec![candidate],
        Command::Prof(ProfCmd::Compose { psi, phi }) => vec![psi, phi],
        _ => Vec::new(),
    }
}

fn diagram(a: &DiagramArgs, normal: bool) -> Result<Done, Error> {
    let d = diagrams::parse(&read(&a.file)?)?;
    let iface = diagrams::typecheck(&d, a.variant)?;
    if normal {
        let nf = diagrams::normalize(&d, a.variant)?;
        let term = nf.to_diagram(None)?;
        let text = format!("{term}\n");
        Ok(Done::plain(
            text,
            json!({"inputs": iface.inputs, "outputs": iface.outputs, "shape": nf.shape.table, "normal_form": term.to_string()}),
        ))
    } else {
        let f = diagrams::to_function(&d)?;
        Ok(Done::plain(format!("{f}\n"), json!({"dom": f.dom, "cod": f.cod, "table": f.table})))
    }
}

fn operad_subst(variant: Variant, y: &Path, x: &Path, k: usize, list: bool) -> Result<Done, Error> {
    let (y, x) = (load_arity(y)?, load_arity(x)?);
    for p in [&y, &x] {
        if p.variant() != variant {
            return Err(Error::Mismatch(format!(
                "a file declares variant {} but {variant} was requested",
                p.variant()
            )));
        }
    }
    let q = subst(&y, &x, k)?;
    let mut text = String::new();
    for (n, fiber) in q.fibers.iter().enumerate() {
        text.push_str(&format!("arity {n}: {}\n", fiber.len()));
        if list {
            for r in fiber.representatives() {
                text.push_str(&format!("    {r}\n"));
            }
        }
    }
    let sizes: Vec<usize> = q.fibers.iter().map(|f| f.len()).collect();
    Ok(Done::plain(text, json!({"variant": variant.to_string(), "sizes": sizes})))
}

fn prof(psi: &Path, phi: &Path) -> Result<Done, Error> {
    let (psi, psi_labels) = load_profunctor(psi)?;
    let (phi, phi_labels) = load_profunctor(phi)?;
    let q = prof_compose(&psi, &phi)?;
    let (c, e) = (&phi.src, &psi.tgt);
    let mut text = String::new();
    let mut slots = Vec::new();
    for a in c.objects() {
        for b in e.objects() {
            let fiber = &q.fibers[q.prof.slot(a, b)];
            let reps: Vec<String> = fiber
                .representatives()
                .map(|&(m, s, t)| {
                    let l = |labels: &[Vec<String>], slot: usize, x: usize| {
                        labels[slot].get(x).cloned().unwrap_or_else(|| x.to_string())
                    };
                    format!("{} ⊗ {}", l(&psi_labels, psi.slot(m, b), s), l(&phi_labels, phi.slot(a, m), t))
                })
                .collect();
            text.push_str(&format!(
                "({}, {}): {}  {}\n",
                c.object_name(a),
                e.object_name(b),
                fiber.len(),
                reps.join(", ")
            ));
            slots.push(json!({"src": c.object_name(a), "tgt": e.object_name(b), "size": fiber.len(), "classes": reps}));
        }
    }
    Ok(Done::plain(text, json!({"slots": slots})))
}

fn distlaw(variant: Option<Variant>, seed: u64) -> Result<Done, Error> {
    let variants: Vec<Variant> = match variant {
        Some(v) => vec![v],
        None => Variant::MONAD.to_vec(),
    };
    let mut report = Report::new();
    for v in variants {
        let r = distlaw_suite(&Explicit, v, seed, SuiteSize::default())?;
        for mut c in r.checks {
            c.law = format!("{v} {}", c.law);
            report.push(c);
        }
    }
    Ok(Done::checks(report))
}

fn kleisli(seed: u64, count: usize) -> Done {
    let mut report = Report::new();
    for (i, s) in kleisli_samples(seed, count).iter().enumerate() {
        for mut c in kleisli_laws_check(s).checks {
            c.law = format!("sample {i} {}", c.law);
            report.push(c);
        }
    }
    Done::checks(report)
}

fn lambda(ms: &str, ns: &str, list: bool) -> Result<Done, Error> {
    let (ms, ns) = (parse_profile(ms)?, parse_profile(ns)?);
    let perms = connected_perms(&ms, &ns);
    let mut text = format!("{}\n", perms.len());
    if list {
        for p in &perms {
            text.push_str(&format!("{p}\n"));
        }
    }
    let lines: Vec<String> = perms.iter().map(|p| p.to_string()).collect();
    Ok(Done::plain(text, json!({"count": perms.len(), "permutations": lines})))
}

fn suite(seed: u64) -> Result<Done, Error> {
    let mut report = Report::new();

    let mut figure = LawCheck::new("figure semantics");
    let f = diagrams::to_function(&diagrams::parse("(sigma * id[1]) ; (delta * id[1] * eps)")?)?;
    let want = FiniteFunction::new(3, 3, vec![1, 1, 0])?;
    figure.record("", if f == want { vec![] } else { vec![format!("got {f}")] });
    report.push(figure);

    let mut table = LawCheck::new("classification round trip");
    for v in Variant::TABLE {
        for m in 0..=3 {
            for n in 0..=3 {
                for f in v.function_class().functions(m, n) {
                    let back = diagrams::synthesize(&f, v).and_then(|d| diagrams::to_function(&d));
                    table.record(
                        &format!("{v} {f}"),
                        if back.as_ref() == Ok(&f) { vec![] } else { vec![format!("{back:?}")] },
                    );
                }
            }
        }
    }
    report.push(table);

    let mut clone = LawCheck::new("end clone on two elements");
    clone.record_result("", end_clone(2, 2).and_then(|c| monoid_check(&c, 2)).map(|r| r.witnesses()));
    report.push(clone);

    let mut units = LawCheck::new("operad unit laws on samples");
    for v in Variant::MONAD {
        let accept = |x: &ArityPresheaf| operads::subst_cost(x, x, x.truncation()) <= 20_000;
        for x in arity_samples(seed, v, 4, 3, 2, accept) {
            units.record_result(&v.to_string(), operads::unit_laws_check(&x, x.truncation()).map(|r| r.witnesses()));
        }
    }
    report.push(units);

    let mut perms = LawCheck::new("connected permutations against the oracle");
    let ps = profiles(4, 4);
    for ms in &ps {
        for ns in &ps {
            let ok = connected_perms(ms, ns) == connected_perms_bruteforce(ms, ns);
            perms.record(&format!("{ms:?} {ns:?}"), if ok { vec![] } else { vec!["differs".into()] });
        }
    }
    report.push(perms);

    report.extend(kleisli(seed, 4).report.unwrap_or_default());
    report.extend(distlaw(Some(Variant::SIGMA), seed)?.report.unwrap_or_default());
    Ok(Done::checks(report))
}

fn dispatch(cli: &Cli) -> Result<Done, Error> {
    match &cli.command {
        Command::Diagram(DiagramCmd::Normalize(a)) => diagram(a, true),
        Command::Diagram(DiagramCmd::Eval(a)) => diagram(a, false),
        Command::Operad(OperadCmd::Subst { variant, y, x, arity, list }) => operad_subst(*variant, y, x, *arity, *list),
        Command::Operad(OperadCmd::Check { candidate, arity }) => {
            let c = load_candidate(candidate)?;
            Ok(Done::checks(monoid_check(&c, *arity)?))
        }
        Command::Prof(ProfCmd::Compose { psi, phi }) => prof(psi, phi),
        Command::Check(CheckCmd::Distlaw { variant }) => distlaw(*variant, cli.seed),
        Command::Check(CheckCmd::Kleisli { count }) => Ok(kleisli(cli.seed, *count)),
        Command::Properad(ProperadCmd::Lambda { ms, ns, list }) => lambda(ms, ns, *list),
        Command::Suite(SuiteCmd::Run) => suite(cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(cap) = std::env::var("OPKIT_CAP") {
        match cap.trim().parse::<usize>() {
            Ok(n) => limits::set_element_cap(n),
            Err(_) => {
                eprintln!("error: OPKIT_CAP must be a positive integer, not {cap:?}");
                return ExitCode::from(2);
            }
        }
    }
    let start = Instant::now();
    let done = dispatch(&cli);
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let (outcome, code, witnesses, result, error) = match &done {
        Ok(d) => {
            let witnesses = d.report.as_ref().map(Report::witnesses).unwrap_or_default();
            print!("{}", d.text);
            let (outcome, code) = if witnesses.is_empty() { (Outcome::Pass, 0) } else { (Outcome::Fail, 1) };
            (outcome, code, witnesses, d.result.clone(), None)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.kind() {
                ErrorKind::NonStabilizing => 3,
                ErrorKind::Malformed => 2,
            };
            (Outcome::Error, code, Vec::new(), Value::Null, Some(e.to_string()))
        }
    };
    if cli.json {
        let report = RunReport {
            schema: SCHEMA,
            command: name(&cli.command).to_string(),
            seed: cli.seed,
            inputs: inputs(&cli.command).into_iter().map(hash).collect(),
            outcome,
            witnesses,
            result,
            error,
            timings_ms: cli.timings.then_some(elapsed),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    ExitCode::from(code)
}
