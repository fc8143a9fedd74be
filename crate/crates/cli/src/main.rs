use std::path::{Path, PathBuf};
use std::process::ExitCode;

use char2::algebra::text::{format_system, parse_system, parse_upper_triangle};
use char2::algebra::{Gf2k, Jet, PolyRing};
use char2::chern::{deg_r, divisibility_check, IntegralTable};
use char2::discriminant::{run_trial, DataFile, TrialOptions, TrialRecord};
use char2::gamma::gamma_ideal;
use char2::groebner::{buchberger, MonomialOrder, OrderKind};
use char2::pfaffian::{alt_rank, pfaffian, AlternatingMatrix};
use char2::singularity::{classify, ClassificationReport, SingularJet};
use char2::suite::{run_all, trial_rng, Fault, TrialCounts};
use char2::Error;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

const SECTION_STREAM: u32 = 100;

#[derive(Parser)]
#[command(name = "char2", version, about = "Exact characteristic-2 algebra for discriminants of linear systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a singular jet as type (A), (C), (R).
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Expected number of variables.
        #[arg(long)]
        n: usize,
        /// Truncation order of the jet.
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long)]
        json: bool,
    },
    /// Pfaffian of an alternating matrix given by its upper triangle.
    Pfaffian {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Reduced Groebner basis of an ideal.
    Groebner {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
        /// Variable priority, highest first.
        #[arg(long, value_delimiter = ',')]
        priority: Option<Vec<String>>,
    },
    /// Generators of the Gamma ideal.
    Gamma {
        #[arg(long, default_value_t = 0)]
        extra_vars: usize,
        #[arg(long)]
        json: bool,
    },
    /// Randomized plane-section trials at one point of R.
    Section {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Degree of the discriminant from a table of Chern integrals.
    Chern {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        integrals: PathBuf,
        #[arg(long)]
        lambda: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run every acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Use this many trials in every randomized suite.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Grlex,
    Grevlex,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Gamma,
}

enum Failure {
    Input(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: char2::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn seed_from_env(seed: u64) -> Result<u64, Failure> {
    match std::env::var("CHAR2_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("CHAR2_SEED is not an unsigned integer: `{s}`"))),
        Err(_) => Ok(seed),
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    schema: u32,
    command: &'static str,
    #[serde(flatten)]
    report: &'a ClassificationReport,
}

fn cmd_classify(input: &Path, n: usize, order: u32, as_json: bool) -> CmdResult {
    let f = Gf2k::default();
    let (vars, polys) = in_file(input, parse_system(&read(input)?, &f))?;
    if vars.len() != n {
        return Err(Failure::Input(format!("{}: {} variables but --n {n}", input.display(), vars.len())));
    }
    let Some((phi, aux)) = polys.split_first() else {
        return Err(Failure::Input(format!("{}: no polynomial after the header", input.display())));
    };
    let j = in_file(input, SingularJet::from_poly(phi.clone(), order))?;
    let aux: Vec<Jet<Gf2k>> = aux.iter().map(|p| Jet::new(p.clone(), order)).collect();
    let rep = classify(&j, &aux)?;
    if as_json {
        print_json(&ClassifyOutput { schema: 1, command: "classify", report: &rep });
    } else {
        println!("hessian rank: {}", rep.hessian_rank);
        println!("typeA: {}", rep.type_a);
        println!("typeC: {}", rep.type_c);
        println!("typeR: {}", rep.type_r);
        println!("oracle colength C: {}", rep.oracle_dim_c);
        println!("oracle colength R: {}", rep.oracle_dim_r);
    }
    Ok(())
}

fn cmd_pfaffian(input: &Path, as_json: bool) -> CmdResult {
    let f = Gf2k::default();
    let (vars, rows) = in_file(input, parse_upper_triangle(&read(input)?, &f))?;
    let ring = PolyRing::new(f.clone(), vars);
    let a = AlternatingMatrix::from_upper_rows(&ring, rows)?;
    let pf = pfaffian(&a)?;
    let scalar = (0..a.size()).all(|i| (0..a.size()).all(|j| a.get(i, j).is_constant()));
    let rank = scalar.then(|| alt_rank(&AlternatingMatrix::from_fn(&f, a.size(), |i, j| a.get(i, j).constant_term())));
    if as_json {
        print_json(&json!({
            "schema": 1,
            "command": "pfaffian",
            "size": a.size(),
            "pfaffian": pf.to_string(),
            "rank": rank,
        }));
    } else {
        println!("{pf}");
        if let Some(r) = rank {
            println!("rank: {r}");
        }
    }
    Ok(())
}

fn cmd_groebner(input: &Path, order: OrderArg, priority: Option<Vec<String>>) -> CmdResult {
    let f = Gf2k::default();
    let (vars, polys) = in_file(input, parse_system(&read(input)?, &f))?;
    let kind = match order {
        OrderArg::Lex => OrderKind::Lex,
        OrderArg::Grlex => OrderKind::Grlex,
        OrderArg::Grevlex => OrderKind::Grevlex,
    };
    let ord = match priority {
        Some(names) => {
            let names: Vec<&str> = names.iter().map(|s| s.trim()).collect();
            MonomialOrder::with_names(kind, &vars, &names)?
        }
        None => MonomialOrder::natural(kind, vars.len()),
    };
    let basis = buchberger(&polys, &ord)?;
    print!("{}", format_system(&vars, &basis));
    Ok(())
}

fn cmd_gamma(extra: usize, as_json: bool) -> CmdResult {
    let (vars, gens) = gamma_ideal(extra)?;
    if as_json {
        print_json(&json!({
            "schema": 1,
            "command": "gamma",
            "extra_vars": extra,
            "vars": vars.to_string(),
            "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        }));
    } else {
        print!("{}", format_system(&vars, &gens));
    }
    Ok(())
}

#[derive(Serialize)]
struct SectionReport {
    schema: u32,
    command: &'static str,
    seed: u64,
    n: usize,
    m: usize,
    trials: Vec<TrialRecord>,
    violations: Vec<String>,
    passed: bool,
}

fn cmd_section(input: &Path, trials: usize, seed: u64, as_json: bool) -> CmdResult {
    let seed = seed_from_env(seed)?;
    let src = read(input)?;
    let file: DataFile = serde_json::from_str(&src).map_err(|e| {
        Failure::Input(format!("{}: parse error at line {}, column {}: {e}", input.display(), e.line(), e.column()))
    })?;
    let f = Gf2k::default();
    let data = in_file(input, file.to_data(&f))?;
    let opts = TrialOptions::default();
    let records = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(i, &data, &mut trial_rng(seed, SECTION_STREAM, i), &opts))
        .collect::<char2::Result<Vec<_>>>()?;
    let violations: Vec<String> = records
        .iter()
        .flat_map(|r| r.violations.iter().map(move |v| format!("trial {}: {v}", r.index)))
        .collect();
    let report = SectionReport {
        schema: 1,
        command: "section",
        seed,
        n: data.n(),
        m: data.m(),
        passed: violations.is_empty(),
        trials: records,
        violations,
    };
    if as_json {
        print_json(&report);
    } else {
        for r in &report.trials {
            let opt = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
            println!(
                "trial {}: typeA={} typeC={} typeR={} rsm={} degenerate={} cusp={} subringT={} gammaFactor={} resamples={}",
                r.index,
                r.type_a,
                r.type_c,
                r.type_r,
                r.rsm,
                opt(r.degenerate),
                opt(r.cusp),
                opt(r.subring_t),
                opt(r.gamma_factor),
                r.resamples
            );
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn cmd_chern(n: usize, integrals: &Path, lambda: Option<i64>, as_json: bool) -> CmdResult {
    let table = in_file(integrals, IntegralTable::from_json(n, &read(integrals)?))?;
    let rep = deg_r(n, &table, lambda)?;
    let div = match divisibility_check(n, &table) {
        Ok(d) => Some(d),
        Err(Error::MissingIntegral(_)) => None,
        Err(e) => return Err(e.into()),
    };
    if as_json {
        print_json(&json!({
            "schema": 1,
            "command": "chern",
            "degree": rep,
            "divisibility": div,
        }));
    } else {
        println!("class: {}", rep.class);
        println!("degree: {}", rep.degree);
        println!("divisible: {}", rep.divisible_by_4);
        if let Some(d) = div {
            println!("n/2 c_n + c_1 c_(n-1): {} (divisible: {})", d.value, d.divisible_by_4);
        }
    }
    Ok(())
}

fn cmd_selftest(seed: u64, trials: Option<usize>, as_json: bool, fault: Option<FaultArg>) -> CmdResult {
    let seed = seed_from_env(seed)?;
    let counts = trials.map_or_else(TrialCounts::default, TrialCounts::uniform);
    let fault = fault.map(|FaultArg::Gamma| Fault::Gamma);
    let report = run_all(seed, &counts, fault)?;
    if as_json {
        print_json(&report);
    } else {
        for s in &report.suites {
            let status = if s.passed { "pass" } else { "FAIL" };
            println!("{:>2} {:<13} {status} ({} checks)", s.id, s.name, s.checked);
            for v in &s.violations {
                println!("     {v}");
            }
        }
    }
    if report.passed {
        Ok(())
    } else {
        for s in report.suites.iter().filter(|s| !s.passed) {
            eprintln!("suite {} ({}) failed", s.id, s.name);
        }
        Err(Failure::Violation)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Classify { input, n, order, json } => cmd_classify(&input, n, order, json),
        Cmd::Pfaffian { input, json } => cmd_pfaffian(&input, json),
        Cmd::Groebner { input, order, priority } => cmd_groebner(&input, order, priority),
        Cmd::Gamma { extra_vars, json } => cmd_gamma(extra_vars, json),
        Cmd::Section { input, trials, seed, json } => cmd_section(&input, trials, seed, json),
        Cmd::Chern { n, integrals, lambda, json } => cmd_chern(n, &integrals, lambda, json),
        Cmd::Selftest { seed, trials, json, inject_fault } => cmd_selftest(seed, trials, json, inject_fault),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
