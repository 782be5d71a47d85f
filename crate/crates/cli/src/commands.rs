//! Subcommand implementations. Each returns the JSON record, a one-line
//! human summary and the exit code.

use std::path::{Path, PathBuf};

use cstar_core::certify::{search_violation, search_violation_traced, Certificate, Property, Verdict};
use cstar_core::extremal::u_norm_lower_bound;
use cstar_core::lmi::{membership_feasibility, ConcaveFn};
use cstar_core::norms::dual_norm_eval;
use cstar_core::NormSpec;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliResult, EXIT_OK, EXIT_SUITE_FAILED, EXIT_VIOLATION};
use crate::io::{format_significant, read_matrix, write_file};
use crate::suite::{render, run_suite};

pub struct Outcome {
    pub json: Value,
    pub summary: String,
    pub exit_code: i32,
    /// Where the record should be written when `--out` is not given.
    pub output_path: Option<PathBuf>,
}

fn value_of<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn cmd_norm(norm: &str, matrix: &Path) -> CliResult<Outcome> {
    let spec: NormSpec = norm.parse()?;
    let a = read_matrix(matrix)?;
    let value = spec.evaluate(&a)?;
    let formatted = format_significant(value, 12);
    Ok(Outcome {
        json: json!({
            "norm": spec.name(),
            "kind": spec.kind(),
            "claimed_class": spec.claimed_class(),
            "value": value,
            "formatted": formatted,
        }),
        summary: format!("{} = {formatted}", spec.name()),
        exit_code: EXIT_OK,
        output_path: None,
    })
}

pub fn cmd_dual(norm: &str, matrix: &Path, budget: usize, seed: u64) -> CliResult<Outcome> {
    let spec: NormSpec = norm.parse()?;
    let y = read_matrix(matrix)?;
    let res = dual_norm_eval(&spec, &y, budget, seed)?;
    let mut json = value_of(&res);
    json["base_norm"] = json!(spec.name());
    json["formatted"] = json!(format_significant(res.lower_bound, 12));
    Ok(Outcome {
        summary: format!(
            "dual of {} >= {} after {} moves",
            spec.name(),
            format_significant(res.lower_bound, 12),
            res.iterations
        ),
        json,
        exit_code: EXIT_OK,
        output_path: None,
    })
}

fn certificate_outcome(c: &Certificate) -> Outcome {
    let exit_code = match c.verdict {
        Verdict::Violation => EXIT_VIOLATION,
        Verdict::NoViolationFound => EXIT_OK,
    };
    let verdict = match c.verdict {
        Verdict::Violation => "violation",
        Verdict::NoViolationFound => "no violation found",
    };
    Outcome {
        json: value_of(c),
        summary: format!(
            "{} {}-defect {:.6e} after {} evaluations: {verdict}",
            c.norm, c.property, c.defect, c.budget_used
        ),
        exit_code,
        output_path: None,
    }
}

pub struct SearchArgs<'a> {
    pub norm: &'a str,
    pub property: &'a str,
    pub n: usize,
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
}

pub fn cmd_certify(args: &SearchArgs) -> CliResult<Outcome> {
    let spec: NormSpec = args.norm.parse()?;
    let property: Property = args.property.parse()?;
    let c = search_violation(&spec, property, args.n, args.k, args.budget, args.seed)?;
    Ok(certificate_outcome(&c))
}

/// Like [`cmd_certify`], optionally writing the defect trace as CSV.
pub fn cmd_search(args: &SearchArgs, trace_csv: Option<&Path>) -> CliResult<Outcome> {
    let spec: NormSpec = args.norm.parse()?;
    let property: Property = args.property.parse()?;
    let (c, trace) = search_violation_traced(&spec, property, args.n, args.k, args.budget, args.seed)?;
    if let Some(path) = trace_csv {
        let mut csv = String::from("evaluation,restart,defect,best\n");
        for p in &trace {
            csv.push_str(&format!("{},{},{:e},{:e}\n", p.evaluation, p.restart, p.defect, p.best));
        }
        write_file(path, &csv)?;
    }
    Ok(certificate_outcome(&c))
}

pub fn cmd_umin(norm: &str, matrix: &Path, budget: usize, seed: u64) -> CliResult<Outcome> {
    let spec: NormSpec = norm.parse()?;
    let a = read_matrix(matrix)?;
    let res = u_norm_lower_bound(&spec, &a, budget, seed)?;
    Ok(Outcome {
        summary: format!(
            "(u)-norm over {} >= {} (constructive {})",
            spec.name(),
            format_significant(res.lower_bound, 12),
            format_significant(res.constructive_value, 12)
        ),
        json: value_of(&res),
        exit_code: EXIT_OK,
        output_path: None,
    })
}

pub fn cmd_lmi(phi: &str, psi: &str, matrix: &Path, budget: usize, seed: u64) -> CliResult<Outcome> {
    let (phi, psi) = (ConcaveFn::lookup(phi)?, ConcaveFn::lookup(psi)?);
    let x = read_matrix(matrix)?;
    let res = membership_feasibility(phi, psi, &x, budget, seed)?;
    Ok(Outcome {
        summary: format!(
            "U_({}, {}): {} (min eigenvalue {:.6e})",
            phi.name(),
            psi.name(),
            if res.feasible { "feasible" } else { "not found" },
            res.achieved_min_eig
        ),
        json: value_of(&res),
        exit_code: EXIT_OK,
        output_path: None,
    })
}

pub fn cmd_suite(config: &RunConfig) -> CliResult<Outcome> {
    config.validate()?;
    let report = run_suite(config);
    Ok(Outcome {
        summary: render(&report).trim_end().to_string(),
        exit_code: if report.passed() { EXIT_OK } else { EXIT_SUITE_FAILED },
        json: value_of(&report),
        output_path: config.output_path.clone(),
    })
}
