use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use semilinear::groups::GroupSpec;
use semilinear::report::{self, Job, RationalSource, RepFile, DEFAULT_BUDGET};
use semilinear::tower::TowerSpec;
use semilinear::Error;

#[derive(Parser)]
#[command(name = "semilinear", version, about = "Semilinear representations of finite groups over Galois extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the JSON report to PATH ('-' for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible semilinear representations with Schur indices and endomorphism dimensions.
    Classify(JobArgs),
    /// Check a rep file and match it against the classification.
    Verify {
        /// Rep file: {"group": ..., "tower": ..., "matrices": {"gen0": [[...]], ...}}.
        rep: PathBuf,
        #[arg(long, value_name = "FILE|builtin:S3|builtin:C4")]
        rational_table: Option<String>,
    },
    /// Rational solvability of x^2 - d y^2 = -1.
    Pell {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Schur-index reports with evidence and transgression cocycles.
    Schur(JobArgs),
    /// Number of irreducibles from the class action.
    Count(JobArgs),
    /// Character table over a cyclotomic splitting field.
    Table {
        #[arg(long, value_name = "FILE")]
        group: String,
    },
}

#[derive(Args)]
struct JobArgs {
    /// Tower spec file, or inline JSON.
    #[arg(long, value_name = "FILE")]
    tower: String,
    /// Group spec file, or inline JSON.
    #[arg(long, value_name = "FILE")]
    group: String,
    #[arg(long, value_name = "N")]
    conductor: Option<u64>,
    #[arg(long, value_name = "FILE|builtin:S3|builtin:C4")]
    rational_table: Option<String>,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

/// Inline JSON is accepted wherever a file is expected.
fn read_source(arg: &str) -> Result<String, Error> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))
}

fn rational(arg: Option<&str>) -> Result<RationalSource, Error> {
    match arg {
        None => Ok(RationalSource::Auto),
        Some(a) if a.starts_with("builtin:") => RationalSource::parse(a, None),
        Some(a) => RationalSource::parse(a, Some(&read_source(a)?)),
    }
}

fn job(a: &JobArgs) -> Result<Job, Error> {
    if a.budget == 0 {
        return Err(Error::InvalidInput("--budget must be positive".into()));
    }
    let tower = TowerSpec::from_json(&read_source(&a.tower)?)?;
    let group = GroupSpec::from_json(&read_source(&a.group)?)?;
    let mut j = Job::new(group, tower);
    j.conductor = a.conductor;
    j.budget = a.budget;
    j.rational = rational(a.rational_table.as_deref())?;
    Ok(j)
}

fn values(v: &Value) -> String {
    match v {
        Value::Array(xs) => xs.iter().map(values).collect::<Vec<_>>().join(", "),
        Value::String(s) => s.clone(),
        Value::Null => "?".into(),
        other => other.to_string(),
    }
}

fn print_classification(r: &Value) {
    println!(
        "|G| = {}, |H| = {}, [L:K] = {}",
        r["group_order"], r["kernel_order"], r["gamma_order"]
    );
    if r["classical_schur_assumed"] == Value::Bool(true) {
        println!("note: L may not split H; classical Schur indices over L are taken to be 1");
    }
    let descs = r["descriptors"].as_array().cloned().unwrap_or_default();
    println!("{} irreducible semilinear representation(s)", descs.len());
    for (i, d) in descs.iter().enumerate() {
        let m = match &d["schur"]["value"] {
            Value::Null => format!("in {{{}}}", values(&d["schur"]["candidates"])),
            v => v.to_string(),
        };
        println!(
            "  V{i}: orbit [{}], m = {m}, dim_L = {}, dim_K End = {}, psi = ({})",
            values(&d["orbit"]),
            values(&d["dimension"]),
            values(&d["endo_dimension"]),
            values(&d["psi"])
        );
    }
    if let Some(p) = r["wedderburn"].as_array() {
        let parts: Vec<String> = p.iter().map(|f| format!("M{}(D{})", f["n"], f["d"])).collect();
        println!("L⋊G = {}  (sum n^2 d = {}, dim_K = {})", parts.join(" x "), r["wedderburn_total"], r["algebra_dimension"]);
    }
}

fn print_human(cmd: &Command, r: &Value) {
    match cmd {
        Command::Classify(_) => print_classification(r),
        Command::Verify { .. } => {
            if r["valid"] == Value::Bool(true) {
                println!("valid semilinear representation of dimension {}", r["dimension"]);
                println!("restricted character: ({})", values(&r["restricted_character"]));
                println!("dim_K End = {}", r["endomorphism_dimension"]);
                match &r["matched_descriptor"] {
                    Value::Null => println!("matches no irreducible descriptor"),
                    i => println!("matches descriptor V{i}"),
                }
            } else {
                println!("cocycle relation fails at (g1, g2) = ({})", values(&r["witness"]));
            }
        }
        Command::Pell { .. } => {
            let verdict = if r["solvable"] == Value::Bool(true) { "solvable" } else { "not solvable" };
            println!("{}: {verdict} over Q", values(&r["equation"]));
            if let Some(c) = r["certificate"].as_object() {
                println!("  certificate x = {}, y = {}", values(&c["x"]), values(&c["y"]));
            }
            if !r["obstruction"].is_null() {
                println!("  obstructed at {}", values(&r["obstruction"]));
            }
            println!("  m(chi_-1) for C4 over Q(sqrt d) = {}", r["schur_index"]);
        }
        Command::Schur(_) => {
            for (i, o) in r["orbits"].as_array().into_iter().flatten().enumerate() {
                let s = &o["schur"];
                println!("orbit {i} [{}]: {} {}", values(&o["orbit"]), values(&s["status"]), values(&s["candidates"]));
                for e in s["evidence"].as_array().into_iter().flatten() {
                    println!("    {}: {}", values(&e["criterion"]), values(&e["detail"]));
                }
                if let Some(c) = o["transgression"]["class"].as_object() {
                    println!("    transgression class {} ({}): {}", values(&c["representative"]), values(&c["decision"]), values(&c["reason"]));
                }
            }
        }
        Command::Count(_) => println!("{} irreducibles (conductor {})", r["count"], r["conductor"]),
        Command::Table { .. } => {
            let t = &r["table"];
            println!("character table over {}", values(&r["field"]));
            let sizes: Vec<String> = t["classes"].as_array().into_iter().flatten().map(|c| format!("{}", c["size"])).collect();
            println!("  class sizes: {}", sizes.join(" "));
            for row in t["rows"].as_array().into_iter().flatten() {
                println!("  {}", values(row));
            }
        }
    }
}

fn run(cli: &Cli) -> Result<Value, Error> {
    match &cli.command {
        Command::Classify(a) => report::classify_report(&job(a)?),
        Command::Schur(a) => report::schur_report(&job(a)?),
        Command::Count(a) => report::count_report(&job(a)?),
        Command::Verify { rep, rational_table } => {
            let text = fs::read_to_string(rep).map_err(|e| Error::InvalidInput(format!("{}: {e}", rep.display())))?;
            report::verify_report(&RepFile::from_json(&text)?, &rational(rational_table.as_deref())?)
        }
        Command::Pell { d } => report::pell_report(*d),
        Command::Table { group } => report::table_report(&GroupSpec::from_json(&read_source(group)?)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let text = serde_json::to_string_pretty(&r).expect("report serialises");
            match cli.json.as_deref() {
                Some("-") => println!("{text}"),
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("error: {path}: {e}");
                        return ExitCode::from(2);
                    }
                    print_human(&cli.command, &r);
                }
                None => print_human(&cli.command, &r),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
