use std::collections::BTreeMap;

use clap::ValueEnum;
use rainbow_core::genlab::{
    exhaustive_check, run_trial, sweep_spec, ExhaustiveReport, Limits, Outcome, Statement, Theorem, TrialReport,
};
use rayon::prelude::*;
use serde_json::json;

use crate::io::{emit, to_json_line};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "T1")]
    T1,
    #[value(name = "T2")]
    T2,
    #[value(name = "T3")]
    T3,
    Lemmas,
    Adapters,
    All,
}

impl Suite {
    fn theorems(self) -> Vec<Theorem> {
        match self {
            Suite::T1 => vec![Theorem::T1],
            Suite::T2 => vec![Theorem::T2],
            Suite::T3 => vec![Theorem::T3],
            Suite::Lemmas => vec![Theorem::LGeneral, Theorem::PBipartite],
            Suite::Adapters => vec![],
            Suite::All => vec![Theorem::T1, Theorem::T2, Theorem::T3, Theorem::LGeneral, Theorem::PBipartite],
        }
    }

    fn statements(self) -> Vec<(Statement, Limits)> {
        let general = Limits { max_n: 4, k: 2, max_colours: 4, ..Limits::default() };
        let bipartite = Limits::default();
        match self {
            Suite::Adapters => vec![(Statement::AdapterProps, Limits::default())],
            Suite::Lemmas => vec![(Statement::LGeneralSmall, general), (Statement::PBipartiteSmall, bipartite)],
            Suite::All => vec![
                (Statement::AdapterProps, Limits::default()),
                (Statement::LGeneralSmall, general),
                (Statement::PBipartiteSmall, bipartite),
            ],
            _ => vec![],
        }
    }
}

/// Seeded trials and exhaustive checks. Reports go to stdout in seed
/// order; the summary goes to stderr.
pub fn check(suite: Suite, trials: u64, seed: u64, jobs: usize) -> Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::io(format!("thread pool: {e}")))?;

    let mut counts: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut out = String::new();
    for theorem in suite.theorems() {
        let reports: Vec<TrialReport> = pool.install(|| {
            (0..trials).into_par_iter().map(|i| run_trial(theorem, &sweep_spec(theorem, seed, i))).collect()
        });
        for r in reports {
            *counts.entry(label(r.outcome)).or_default() += 1;
            if r.outcome == Outcome::Failed {
                failures.push(format!("{:?}: {}", r.theorem, serde_json::to_string(&r.spec).expect("spec")));
            }
            out.push_str(&to_json_line(&r));
        }
    }
    for (statement, limits) in suite.statements() {
        let report: ExhaustiveReport =
            exhaustive_check(statement, &limits).map_err(|e| Failure::precondition(e.to_string()))?;
        *counts.entry(label(report.outcome)).or_default() += 1;
        if report.outcome == Outcome::Failed {
            failures.push(format!("{statement:?}: {}", report.counterexample.clone().unwrap_or_default()));
        }
        out.push_str(&to_json_line(&report));
    }
    emit(None, &out)?;

    let summary: Vec<String> = ["verified", "failed", "precondition_unmet"]
        .iter()
        .map(|k| format!("{k}={}", counts.get(k).copied().unwrap_or(0)))
        .collect();
    eprintln!("summary: {}", summary.join(" "));
    if failures.is_empty() {
        Ok(())
    } else {
        for f in &failures {
            eprintln!("failed: {f}");
        }
        Err(Failure::verification(format!("{} failed", failures.len())))
    }
}

fn label(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Verified => "verified",
        Outcome::Failed => "failed",
        Outcome::PreconditionUnmet => "precondition_unmet",
    }
}

pub fn bench(theorem: Theorem, trials: u64, seed: u64) -> Result<(), Failure> {
    let reports: Vec<TrialReport> = (0..trials).map(|i| run_trial(theorem, &sweep_spec(theorem, seed, i))).collect();
    let times: Vec<f64> = reports.iter().map(|r| r.elapsed_ms).collect();
    let total: f64 = times.iter().sum();
    let count = |o: Outcome| reports.iter().filter(|r| r.outcome == o).count();
    let summary = json!({
        "theorem": theorem,
        "trials": trials,
        "verified": count(Outcome::Verified),
        "failed": count(Outcome::Failed),
        "precondition_unmet": count(Outcome::PreconditionUnmet),
        "total_ms": total,
        "mean_ms": if trials == 0 { 0.0 } else { total / trials as f64 },
        "max_ms": times.iter().copied().fold(0.0, f64::max),
    });
    emit(None, &to_json_line(&summary))
}
