use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use wsat_core::oracle::OracleResult;
use wsat_core::solver::mini_target;
use wsat_core::{
    generate, mini_wsat_solve, oracle_solve, parse_dimacs, serialize_dimacs, size_gate, verify_assignment,
    wsat_solve_dprime, Assignment, Instance, OracleStatus, ParseOptions, RandomModelParams, SolveOutcome, SolverConfig,
    Status,
};

use crate::assignment::parse_assignment;
use crate::{GenArgs, OracleArgs, SolveArgs, VerifyArgs, EXIT_FAILURE, EXIT_SAT, EXIT_UNSAT};

/// Writes the fully resolved configuration of a command to standard error.
pub fn print_resolved(command: &str, config: Value) {
    eprintln!("resolved config: {}", json!({ "command": command, "config": config }));
}

/// Model parameters with both `p` and `c` spelled out.
pub fn params_json(params: &RandomModelParams) -> Value {
    json!({
        "n": params.n,
        "d": params.d,
        "dprime": params.dprime,
        "k": params.k,
        "p": params.p(),
        "c": params.c(),
        "authoritative": match params.rate {
            wsat_core::EdgeRate::P(_) => "p",
            wsat_core::EdgeRate::C(_) => "c",
        },
        "seed": params.seed,
    })
}

fn read_instance(path: &Path, k: Option<usize>, strict: bool) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text, &ParseOptions { weight_target: k, strict })
        .with_context(|| format!("parsing {}", path.display()))
}

fn true_indices(assignment: &Assignment) -> Vec<u32> {
    assignment.true_vars().into_iter().map(|v| v.index()).collect()
}

fn witness_line(true_vars: &[u32]) -> String {
    let mut line = String::from("v");
    for v in true_vars {
        line.push_str(&format!(" {v}"));
    }
    line.push_str(" 0");
    line
}

pub fn gen(args: &GenArgs) -> Result<u8> {
    let params = match (args.p, args.c) {
        (Some(p), None) => RandomModelParams::with_p(args.n, args.d, args.dprime, args.k, p, args.seed),
        (None, Some(c)) => RandomModelParams::with_c(args.n, args.d, args.dprime, args.k, c, args.seed),
        _ => bail!("exactly one of --p and --c is required"),
    };
    print_resolved(
        "gen",
        json!({ "params": params_json(&params), "out": args.out.as_ref().map(|p| p.display().to_string()) }),
    );
    let instance = generate(&params)?;
    let text = serialize_dimacs(&instance);
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(EXIT_SAT)
}

#[derive(Serialize)]
struct FallbackReport {
    status: Option<OracleStatus>,
    witness: Option<Vec<u32>>,
    enumerated: Option<u64>,
    error: Option<String>,
}

fn fallback_report(fallback: &Result<OracleResult, wsat_core::OracleError>) -> FallbackReport {
    match fallback {
        Ok(r) => FallbackReport {
            status: Some(r.status),
            witness: r.witness.as_ref().map(true_indices),
            enumerated: Some(r.enumerated),
            error: None,
        },
        Err(e) => FallbackReport { status: None, witness: None, enumerated: None, error: Some(e.to_string()) },
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::Failure => EXIT_FAILURE,
    }
}

pub fn solve(args: &SolveArgs) -> Result<u8> {
    let instance = read_instance(&args.input, args.k, args.strict)?;
    let n = instance.formula.num_vars();
    let config = SolverConfig {
        gate_multiplier: args.gate_mult,
        fallback_oracle: args.fallback_oracle,
        oracle_budget: args.budget,
    };
    let variant = if args.mini {
        "mini"
    } else if args.dprime > 1 {
        "dprime"
    } else {
        "wsat"
    };
    let target = if args.mini { mini_target(instance.weight_target, n) } else { instance.weight_target };
    print_resolved(
        "solve",
        json!({
            "input": args.input.display().to_string(),
            "n": n,
            "clauses": instance.formula.len(),
            "k": instance.weight_target,
            "target": target,
            "variant": variant,
            "dprime": args.dprime,
            "gate_multiplier": args.gate_mult,
            "gate": size_gate(n, args.gate_mult),
            "fallback_oracle": args.fallback_oracle,
            "oracle_budget": args.budget,
            "strict": args.strict,
            "params": instance.params.as_ref().map(params_json),
        }),
    );

    let outcome: SolveOutcome = if args.mini {
        mini_wsat_solve(&instance, &config)?
    } else {
        wsat_solve_dprime(&instance, args.dprime, &config)?
    };
    let witness = outcome.witness.as_ref().map(true_indices);
    let fallback = outcome.fallback.as_ref().map(fallback_report);
    if args.json {
        let report = json!({
            "status": outcome.status,
            "target": outcome.target,
            "witness": witness,
            "diagnostics": outcome.diagnostics,
            "fallback": fallback,
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("s {}", serde_json::to_value(outcome.status)?.as_str().unwrap_or_default());
        if let Some(w) = &witness {
            println!("{}", witness_line(w));
        }
        if let Some(f) = &fallback {
            match (&f.status, &f.error) {
                (Some(status), _) => println!("c fallback oracle: {}", serde_json::to_value(status)?),
                (None, Some(err)) => println!("c fallback oracle refused: {err}"),
                _ => {}
            }
        }
    }
    Ok(status_code(outcome.status))
}

pub fn oracle(args: &OracleArgs) -> Result<u8> {
    let instance = read_instance(&args.input, args.k, false)?;
    print_resolved(
        "oracle",
        json!({
            "input": args.input.display().to_string(),
            "n": instance.formula.num_vars(),
            "k": instance.weight_target,
            "budget": args.budget,
            "params": instance.params.as_ref().map(params_json),
        }),
    );
    let result = oracle_solve(&instance.formula, instance.weight_target, args.budget)?;
    let witness = result.witness.as_ref().map(true_indices);
    if args.json {
        let report = json!({ "status": result.status, "witness": witness, "enumerated": result.enumerated });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("s {}", serde_json::to_value(result.status)?.as_str().unwrap_or_default());
        if let Some(w) = &witness {
            println!("{}", witness_line(w));
        }
        println!("c enumerated {}", result.enumerated);
    }
    Ok(match result.status {
        OracleStatus::Sat => EXIT_SAT,
        OracleStatus::Unsat => EXIT_UNSAT,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let instance = read_instance(&args.input, args.k, false)?;
    let n = instance.formula.num_vars();
    let text =
        fs::read_to_string(&args.assignment).with_context(|| format!("reading {}", args.assignment.display()))?;
    let assignment = parse_assignment(&text, n).with_context(|| format!("parsing {}", args.assignment.display()))?;
    print_resolved(
        "verify",
        json!({
            "input": args.input.display().to_string(),
            "assignment": args.assignment.display().to_string(),
            "n": n,
            "k": instance.weight_target,
        }),
    );
    match verify_assignment(&instance.formula, &assignment, instance.weight_target) {
        Ok(true) => {
            println!("VALID weight {}", assignment.weight());
            Ok(EXIT_SAT)
        }
        Ok(false) => {
            let falsified = instance
                .formula
                .clauses()
                .iter()
                .filter(|c| !c.lits().iter().any(|l| assignment.get(l.var).is_some_and(|v| l.satisfied_by(v))))
                .count();
            println!(
                "INVALID weight {} (target {}), {falsified} falsified clauses",
                assignment.weight(),
                instance.weight_target
            );
            Ok(EXIT_UNSAT)
        }
        Err(err) => bail!("{err}"),
    }
}
