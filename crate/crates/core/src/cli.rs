//! The `cphi` command line.
//!
//! Exit codes: 0 success (or the congruence holds), 3 counterexample found,
//! 2 usage error, 1 internal failure. Every JSON record carries
//! `schema_version`, the command, its full parameter set, the computation
//! path and the elapsed time. Exact values are written as decimal strings.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::congruence::{
    crt_combine, lift_family, search, verify_composite, verify_dissection_ingredients,
    verify_family, verify_single, CongruenceFamily, Verdict, VerifyMethod,
};
use crate::cphi::{cphi_direct, cphi_mod_descent, cphi_theta, CphiTable};
use crate::error::Error;
use crate::ring::{is_prime, CoeffRing};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cphi", version, about = "Generalized Frobenius partitions cφ_k(n) and their congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate cφ_K(n) for n = 0..=T.
    Compute(ComputeArgs),
    /// Check cφ_k(pn+r) ≡ 0 (mod p), a lifted family, or a CRT composite.
    Verify(VerifyArgs),
    /// Scan color counts for residues r with cφ_k(pn+r) ≡ 0 (mod p).
    Search(SearchArgs),
    /// Report which rows z^{pj} of the product vanish on pn+r modulo p.
    Dissect(DissectArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ComputeMethod {
    Direct,
    Descent,
    Theta,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct ComputeArgs {
    #[arg(long)]
    colors: u64,
    #[arg(long)]
    upto: usize,
    /// Reduce modulo M (descent requires M prime).
    #[arg(long = "mod")]
    modulus: Option<u64>,
    #[arg(long, value_enum, default_value = "direct")]
    method: ComputeMethod,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckMethod {
    Direct,
    Descent,
}

impl From<CheckMethod> for VerifyMethod {
    fn from(m: CheckMethod) -> Self {
        match m {
            CheckMethod::Direct => VerifyMethod::Direct,
            CheckMethod::Descent => VerifyMethod::Descent,
        }
    }
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    residue: Option<u64>,
    #[arg(long)]
    colors: Option<u64>,
    /// Color stride of the family (p for lifted families).
    #[arg(long)]
    step: Option<u64>,
    /// Largest family index N to check.
    #[arg(long = "family-upto", allow_negative_numbers = true)]
    family_upto: Option<i64>,
    /// Largest n to check.
    #[arg(long = "n-upto", allow_negative_numbers = true)]
    n_upto: i64,
    /// Lifted families to combine, as `k0:p:r,k0:p:r,...`.
    #[arg(long)]
    composite: Option<String>,
    #[arg(long, value_enum, default_value = "descent")]
    method: CheckMethod,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long = "colors-from")]
    colors_from: u64,
    #[arg(long = "colors-to")]
    colors_to: u64,
    #[arg(long = "n-scan")]
    n_scan: u64,
}

#[derive(clap::Args, Debug)]
struct DissectArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    residue: u64,
    #[arg(long)]
    colors: u64,
    #[arg(long = "j-upto")]
    j_upto: u64,
    #[arg(long = "n-upto")]
    n_upto: u64,
}

/// One JSON output record.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub method: String,
    pub elapsed_ms: u64,
}

/// What a run produced; `main` forwards it to the process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(err: &Error) -> Self {
        let code = if err.is_usage() { EXIT_USAGE } else { EXIT_INTERNAL };
        Outcome { exit_code: code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

enum Rendered {
    Json(OutputRecord, i32),
    Csv(String),
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { exit_code: code, stdout, stderr };
        }
    };
    let started = Instant::now();
    let mut out_path = None;
    let rendered = match cli.command {
        Command::Compute(a) => {
            out_path = a.out.clone();
            compute(&a)
        }
        Command::Verify(a) => verify(&a),
        Command::Search(a) => run_search(&a),
        Command::Dissect(a) => dissect(&a),
    };
    let (text, code) = match rendered {
        Err(e) => return Outcome::error(&e),
        Ok(Rendered::Csv(text)) => (text, EXIT_OK),
        Ok(Rendered::Json(mut record, code)) => {
            record.elapsed_ms = started.elapsed().as_millis() as u64;
            let mut text = serde_json::to_string_pretty(&record).expect("records serialize");
            text.push('\n');
            (text, code)
        }
    };
    match out_path {
        Some(path) => match std::fs::write(&path, text) {
            Ok(()) => Outcome { exit_code: code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                exit_code: EXIT_INTERNAL,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { exit_code: code, stdout: text, stderr: String::new() },
    }
}

fn record(command: &str, parameters: Value, results: Value, method: &str) -> OutputRecord {
    let parameters = match parameters {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    OutputRecord {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        parameters,
        results,
        method: method.to_string(),
        elapsed_ms: 0,
    }
}

fn compute(a: &ComputeArgs) -> Result<Rendered, Error> {
    let table: CphiTable = match (a.method, a.modulus) {
        (ComputeMethod::Descent, None) => {
            return Err(Error::Invalid("--method descent requires a prime --mod".into()))
        }
        (ComputeMethod::Descent, Some(p)) => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            cphi_mod_descent(a.colors, a.upto, p)?
        }
        (m, modulus) => {
            let ring = match modulus {
                Some(m) => CoeffRing::modulo(m)?,
                None => CoeffRing::Exact,
            };
            if m == ComputeMethod::Theta {
                cphi_theta(a.colors, a.upto, ring)?
            } else {
                cphi_direct(a.colors, a.upto, ring)?
            }
        }
    };
    let values = table.values();
    let method = table.method().to_string();
    match a.format {
        Format::Csv => {
            let modulus = a.modulus.map(|m| m.to_string()).unwrap_or_default();
            let mut text = String::from("schema_version,command,colors,modulus,method,n,value\n");
            for (n, v) in values.iter().enumerate() {
                text.push_str(&format!(
                    "{SCHEMA_VERSION},compute,{},{modulus},{method},{n},{v}\n",
                    a.colors
                ));
            }
            Ok(Rendered::Csv(text))
        }
        Format::Json => {
            let rows: Vec<Value> = values
                .iter()
                .enumerate()
                .map(|(n, v)| json!({ "n": n, "value": v.to_string() }))
                .collect();
            let params = json!({
                "colors": a.colors,
                "upto": a.upto,
                "mod": a.modulus,
                "method": format!("{:?}", a.method).to_lowercase(),
                "format": "json",
            });
            Ok(Rendered::Json(record("compute", params, json!({ "values": rows }), &method), EXIT_OK))
        }
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.holds {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn parse_composite(spec: &str) -> Result<Vec<CongruenceFamily>, Error> {
    spec.split(',')
        .map(|part| {
            let nums: Vec<u64> = part
                .trim()
                .split(':')
                .map(|x| x.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Invalid(format!("bad family `{part}`, expected k0:p:r")))?;
            match nums[..] {
                [k0, p, r] => lift_family(k0, p, r),
                _ => Err(Error::Invalid(format!("bad family `{part}`, expected k0:p:r"))),
            }
        })
        .collect()
}

fn verify(a: &VerifyArgs) -> Result<Rendered, Error> {
    let method = VerifyMethod::from(a.method);
    let big_n_max = a.family_upto.unwrap_or(0);
    if let Some(spec) = &a.composite {
        let families = parse_composite(spec)?;
        let composite = crt_combine(&families)?;
        let verdict = verify_composite(&composite, big_n_max, a.n_upto)?;
        let params = json!({
            "composite": spec,
            "family_upto": big_n_max,
            "n_upto": a.n_upto,
        });
        let results = json!({
            "congruence": composite.to_string(),
            "composite": composite,
            "verdict": verdict,
        });
        let code = verdict_code(&verdict);
        return Ok(Rendered::Json(record("verify", params, results, "descent"), code));
    }
    let missing = |name: &str| Error::Invalid(format!("--{name} is required without --composite"));
    let p = a.prime.ok_or_else(|| missing("prime"))?;
    let r = a.residue.ok_or_else(|| missing("residue"))?;
    let k = a.colors.ok_or_else(|| missing("colors"))?;
    let (family, verdict) = match a.step {
        Some(step) => {
            let family = CongruenceFamily::new(k, p, r, step, "command line")?;
            let v = verify_family(&family, big_n_max, a.n_upto, method)?;
            (family, v)
        }
        None => {
            let family = CongruenceFamily::single(k, p, r)?;
            (family, verify_single(k, p, r, a.n_upto, method)?)
        }
    };
    let params = json!({
        "prime": p,
        "residue": r,
        "colors": k,
        "step": a.step,
        "family_upto": a.step.map(|_| big_n_max),
        "n_upto": a.n_upto,
        "method": method.to_string(),
    });
    let results = json!({
        "congruence": family.to_string(),
        "verdict": verdict,
    });
    let code = verdict_code(&verdict);
    Ok(Rendered::Json(record("verify", params, results, &method.to_string()), code))
}

fn run_search(a: &SearchArgs) -> Result<Rendered, Error> {
    let found = search(a.prime, a.colors_from..=a.colors_to, a.n_scan)?;
    let params = json!({
        "prime": a.prime,
        "colors_from": a.colors_from,
        "colors_to": a.colors_to,
        "n_scan": a.n_scan,
    });
    let results = json!({
        "candidates": found,
        "note": "scan survivors are empirical, not proved",
    });
    Ok(Rendered::Json(record("search", params, results, "descent"), EXIT_OK))
}

fn dissect(a: &DissectArgs) -> Result<Rendered, Error> {
    let report = verify_dissection_ingredients(a.colors, a.prime, a.residue, a.j_upto, a.n_upto)?;
    let rows: Vec<Value> = report
        .iter()
        .map(|row| {
            json!({
                "j": row.j,
                "z_exponent": row.z_exponent,
                "status": row.status(),
                "witness": row.witness.map(|(n, residue)| json!({ "n": n, "residue": residue })),
            })
        })
        .collect();
    let params = json!({
        "prime": a.prime,
        "residue": a.residue,
        "colors": a.colors,
        "j_upto": a.j_upto,
        "n_upto": a.n_upto,
    });
    Ok(Rendered::Json(record("dissect", params, json!({ "rows": rows }), "direct"), EXIT_OK))
}
