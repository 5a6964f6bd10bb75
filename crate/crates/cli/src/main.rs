//! Batch front end: scenario files in, exact-rational reports out.
//!
//! Exit codes: 0 on success, 2 on parse/validation errors, 3 when the
//! dual intersection engines disagree or a property suite fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use naplt::checks;
use naplt::flag::{gauss_extend, phi_of_flag, FlagIdeal, PLFunction};
use naplt::functionals::{coercivity_scan, energy_report, ma_measure, KahlerSetup};
use naplt::intersect::Engine;
use naplt::rat::{q_str, Q};
use naplt::testconfig::{build_testconfig, dual_complex};
use naplt::valuation::{MonomialIdeal, Weight};

#[derive(Parser)]
#[command(name = "naplt", version, about = "Exact non-archimedean pluripotential theory on P^n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and write its report
    Run {
        scenario: PathBuf,
        /// Report destination; defaults to the scenario path with a
        /// `.report.json` extension
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compute every intersection number with both engines and fail
        /// loudly on any disagreement
        #[arg(long)]
        cross_check: bool,
        /// Overrides the scenario's seed for property-suite requests
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the randomized property suites
    Check {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Print a golden scenario to standard output
    Demo { which: DemoName },
}

#[derive(Clone, clap::ValueEnum)]
enum DemoName {
    P1,
    P2,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    base: Base,
    alpha: String,
    flag_ideals: Vec<NamedFlag>,
    requests: Vec<Request>,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Base {
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedFlag {
    name: String,
    terms: Vec<Term>,
    lambda_max: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    lambda: i64,
    gens: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Request {
    Eval { flag: String, weight: Vec<String> },
    DualComplex { flag: String },
    Ma { flag: String },
    Energy { flag: String },
    Mabuchi { flag: String },
    Kstab { family: Vec<String> },
    Check {},
}

enum Failure {
    Validation(String),
    CrossCheck(String),
}

impl From<naplt::Error> for Failure {
    fn from(e: naplt::Error) -> Self {
        match e {
            naplt::Error::CrossCheck(msg) => Failure::CrossCheck(msg),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Run { scenario, out, cross_check, seed } => cmd_run(&scenario, out, cross_check, seed),
        Cmd::Check { seed } => cmd_check(seed),
        Cmd::Demo { which } => {
            println!("{}", demo_scenario(&which));
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::CrossCheck(msg)) => {
            eprintln!("cross-check mismatch: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_run(
    path: &PathBuf,
    out: Option<PathBuf>,
    cross_check: bool,
    seed_flag: Option<u64>,
) -> Result<(), Failure> {
    let started = Instant::now();
    let raw = std::fs::read(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let scenario: Scenario = serde_json::from_slice(&raw)
        .map_err(|e| Failure::Validation(format!("scenario: {e}")))?;
    let engine = if cross_check { Engine::CrossCheck } else { Engine::Tropical };
    let seed = seed_flag.unwrap_or(scenario.seed);
    let results = run_requests(&scenario, engine, seed)?;
    let mut failed_checks = false;
    for r in &results {
        if r.get("pass").map_or(false, |p| p == &Value::Bool(false)) {
            failed_checks = true;
        }
    }
    let report = json!({
        "manifest": {
            "tool": "naplt",
            "version": env!("CARGO_PKG_VERSION"),
            "scenario_sha256": hex(&Sha256::digest(&raw)),
            "wall_time_ms": started.elapsed().as_millis() as u64,
        },
        "results": results,
    });
    let out = out.unwrap_or_else(|| path.with_extension("report.json"));
    std::fs::write(&out, serde_json::to_string_pretty(&report).unwrap() + "\n")
        .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", out.display())))?;
    for (i, r) in report["results"].as_array().unwrap().iter().enumerate() {
        println!("request {i} ({}): ok", r["kind"].as_str().unwrap_or("?"));
    }
    println!("report written to {}", out.display());
    if failed_checks {
        return Err(Failure::CrossCheck("a property suite failed".into()));
    }
    Ok(())
}

fn cmd_check(seed: u64) -> Result<(), Failure> {
    let mut all_pass = true;
    for r in checks::run_all(seed) {
        println!("{}: {} ({})", r.name, if r.pass { "pass" } else { "FAIL" }, r.detail);
        all_pass &= r.pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::CrossCheck("a property suite failed".into()))
    }
}

fn run_requests(scenario: &Scenario, engine: Engine, seed: u64) -> Result<Vec<Value>, Failure> {
    let n = scenario.base.n;
    if n == 0 || n > 3 {
        return Err(Failure::Validation("base.n out of supported range".into()));
    }
    let alpha = parse_q(&scenario.alpha, "alpha")?;
    if scenario.requests.is_empty() {
        return Err(Failure::Validation("requests: at least one request is required".into()));
    }
    let setup = KahlerSetup::new(n, alpha)?.with_engine(engine);
    let mut flags: BTreeMap<&str, FlagIdeal> = BTreeMap::new();
    for nf in &scenario.flag_ideals {
        let pairs = nf
            .terms
            .iter()
            .map(|t| Ok((t.lambda, MonomialIdeal::new(n, t.gens.clone())?)))
            .collect::<Result<Vec<_>, naplt::Error>>()?;
        let flag = FlagIdeal::from_pairs(n, pairs, nf.lambda_max)
            .map_err(|e| Failure::Validation(format!("flag_ideals.{}: {e}", nf.name)))?;
        flags.insert(&nf.name, flag);
    }
    scenario
        .requests
        .iter()
        .map(|req| run_request(&setup, req, &flags, seed))
        .collect()
}

fn run_request(
    setup: &KahlerSetup,
    req: &Request,
    flags: &BTreeMap<&str, FlagIdeal>,
    seed: u64,
) -> Result<Value, Failure> {
    let lookup = |name: &str| -> Result<&FlagIdeal, Failure> {
        flags
            .get(name)
            .ok_or_else(|| Failure::Validation(format!("requests: unknown flag ideal `{name}`")))
    };
    Ok(match req {
        Request::Eval { flag, weight } => {
            let a = lookup(flag)?;
            let entries = weight
                .iter()
                .map(|s| parse_q(s, "weight"))
                .collect::<Result<Vec<_>, _>>()?;
            let w = Weight::finite(setup.n, entries)?;
            let v = gauss_extend(&w)?;
            let phi = phi_of_flag(a)?;
            json!({
                "kind": "eval",
                "flag": flag,
                "weight": weight,
                "gauss_value": v.eval_flag(a)?.to_string(),
                "potential": q_str(&phi.eval(&v)?),
                "log_discrepancy": q_str(&naplt::functionals::log_discrepancy(&v)?),
            })
        }
        Request::DualComplex { flag } => {
            let a = lookup(flag)?;
            let tc = build_testconfig(a)?;
            json!({
                "kind": "dualcomplex",
                "flag": flag,
                "complex": dual_complex(&tc),
            })
        }
        Request::Ma { flag } => {
            let a = lookup(flag)?;
            let ma = ma_measure(setup, &phi_of_flag(a)?)?;
            let atoms: Vec<Value> = ma
                .atoms
                .iter()
                .map(|(v, m)| {
                    json!({
                        "weight": v.base.finite_entries().unwrap().iter().map(q_str).collect::<Vec<_>>(),
                        "mass": q_str(m),
                    })
                })
                .collect();
            json!({
                "kind": "ma",
                "flag": flag,
                "atoms": atoms,
                "total_mass": q_str(&ma.total_mass()),
            })
        }
        Request::Energy { flag } => {
            let a = lookup(flag)?;
            let r = energy_report(setup, &phi_of_flag(a)?)?;
            json!({
                "kind": "energy",
                "flag": flag,
                "energy": q_str(&r.energy),
                "twisted_energy": q_str(&r.twisted_energy),
                "i": q_str(&r.i),
                "j": q_str(&r.j),
            })
        }
        Request::Mabuchi { flag } => {
            let a = lookup(flag)?;
            let r = energy_report(setup, &phi_of_flag(a)?)?;
            json!({
                "kind": "mabuchi",
                "flag": flag,
                "energy": q_str(&r.energy),
                "twisted_energy": q_str(&r.twisted_energy),
                "i": q_str(&r.i),
                "j": q_str(&r.j),
                "entropy": q_str(&r.entropy),
                "entropy_relative": q_str(&r.entropy_relative),
                "mabuchi": q_str(&r.mabuchi),
                "mj_ratio": r.mj_ratio.as_ref().map(|x| q_str(x)),
                "sbar": q_str(&setup.sbar()),
                "volume": q_str(&setup.volume()),
            })
        }
        Request::Kstab { family } => {
            let funcs = family
                .iter()
                .map(|name| Ok(phi_of_flag(lookup(name)?)?))
                .collect::<Result<Vec<PLFunction>, Failure>>()?;
            let scan = coercivity_scan(setup, &funcs)?;
            let entries: Vec<Value> = scan
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "index": e.index,
                        "flag": family[e.index],
                        "mabuchi": q_str(&e.mabuchi),
                        "j": q_str(&e.j),
                        "ratio": e.ratio.as_ref().map(|x| q_str(x)),
                    })
                })
                .collect();
            json!({
                "kind": "kstab",
                "entries": entries,
                "delta": q_str(&scan.delta),
                "witness": scan.witness,
                "skipped": scan.skipped,
                "verdict": scan.verdict,
            })
        }
        Request::Check {} => {
            let results = checks::run_all(seed);
            let pass = results.iter().all(|r| r.pass);
            let suites: Vec<Value> = results
                .iter()
                .map(|r| json!({ "name": r.name, "pass": r.pass, "detail": r.detail }))
                .collect();
            json!({ "kind": "check", "seed": seed, "pass": pass, "suites": suites })
        }
    })
}

fn parse_q(s: &str, field: &str) -> Result<Q, Failure> {
    Q::from_str(s).map_err(|e| Failure::Validation(format!("{field}: `{s}` is not a rational: {e}")))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn demo_scenario(which: &DemoName) -> String {
    let doc = match which {
        DemoName::P1 => json!({
            "base": { "n": 1 },
            "alpha": "1",
            "flag_ideals": [
                { "name": "a", "terms": [ { "lambda": 0, "gens": [[1]] } ], "lambda_max": 1 }
            ],
            "requests": [
                { "kind": "mabuchi", "flag": "a" },
                { "kind": "ma", "flag": "a" },
                { "kind": "dualcomplex", "flag": "a" }
            ],
            "seed": 7
        }),
        DemoName::P2 => json!({
            "base": { "n": 2 },
            "alpha": "1",
            "flag_ideals": [
                { "name": "a", "terms": [ { "lambda": 0, "gens": [[1, 0], [0, 1]] } ], "lambda_max": 1 }
            ],
            "requests": [
                { "kind": "mabuchi", "flag": "a" },
                { "kind": "ma", "flag": "a" },
                { "kind": "kstab", "family": ["a"] }
            ],
            "seed": 7
        }),
    };
    serde_json::to_string_pretty(&doc).unwrap()
}
