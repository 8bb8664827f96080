//! Experiment orchestration: run records, type-occurrence statistics,
//! multi-run experiments with reports, and solution re-verification.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compiler::{compile, typecheck, Ast, TypeEnv};
use crate::evolve::{derive_seed, run_evolution, EvolutionConfig};
use crate::genome::Genome;
use crate::interp::eval;
use crate::problems::{problem_by_name, score, ProblemSpec};
use crate::stdlib::registry;
use crate::typesys::{canonicalize, unify_with_rigids, Type};

/// Per-generation statistics embedded in a [`RunResult`]. Wall-clock time
/// is observational: it is written to the JSON-lines log but excluded
/// from the serialized run record so records stay byte-reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_total_error: f64,
    pub median_total_error: f64,
    pub mean_genome_length: f64,
    pub unique_types_so_far: usize,
    #[serde(skip)]
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub problem: String,
    pub seed: u64,
    pub success: bool,
    pub solution_generation: Option<usize>,
    pub solution_text: Option<String>,
    /// Solution genome in the line-oriented genome format.
    pub solution_genome: Option<String>,
    pub generations: Vec<GenerationRecord>,
    /// Canonical type rendering -> occurrence count.
    pub type_tally: BTreeMap<String, u64>,
    /// Effective configuration, embedded for provenance.
    pub config: EvolutionConfig,
}

impl RunResult {
    /// Number of canonical types occurring at least `threshold` times.
    pub fn types_at_least(&self, threshold: u64) -> usize {
        self.type_tally.values().filter(|c| **c >= threshold).count()
    }
}

/// Counts one occurrence per type annotation on every node of an AST.
/// Types are canonicalized before counting so alpha-variants collapse;
/// the cache memoizes canonical renderings across calls.
pub fn tally_ast_types(
    ast: &Ast,
    tally: &mut BTreeMap<String, u64>,
    cache: &mut HashMap<Type, String>,
) {
    ast.visit(&mut |node| {
        let ty = node.ty();
        let rendered = match cache.get(ty) {
            Some(r) => r.clone(),
            None => {
                let r = canonicalize(ty).to_string();
                cache.insert(ty.clone(), r.clone());
                r
            }
        };
        *tally.entry(rendered).or_insert(0) += 1;
    });
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemReport {
    pub problem: String,
    pub runs: usize,
    pub succ: usize,
    pub types_median: f64,
    pub types_ge_1000_median: f64,
    /// Runs that failed at the host level (panics), excluded from medians.
    pub faulted_runs: usize,
}

/// Aggregated experiment outcome, shaped like the per-problem results
/// table: success count plus medians of the type statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct ExperimentReport {
    pub rows: Vec<ProblemReport>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem,succ,types_median,types_ge_1000_median\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.problem, r.succ, r.types_median, r.types_ge_1000_median
            ));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Problem | Succ | Types | Types >= 1000 |\n");
        out.push_str("|---------|------|-------|---------------|\n");
        for r in &self.rows {
            out.push_str(&format!(
                "| {} | {}/{} | {} | {} |\n",
                r.problem, r.succ, r.runs, r.types_median, r.types_ge_1000_median
            ));
        }
        out
    }
}

fn median_usize(values: &mut Vec<usize>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] + values[mid]) as f64 / 2.0
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("every run failed at the host level")]
    AllRunsFailed,
}

/// Executes `runs_per_problem` runs per problem on a bounded worker pool,
/// writes one RunResult JSON file and one JSON-lines generation log per
/// run under `out_dir` (when given), and aggregates the report. Runs that
/// panic are recorded and excluded from the medians.
pub fn run_experiment(
    problems: &[ProblemSpec],
    runs_per_problem: usize,
    base_config: &EvolutionConfig,
    parallelism: usize,
    out_dir: Option<&Path>,
) -> Result<ExperimentReport, ExperimentError> {
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }
    let jobs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..runs_per_problem).map(move |r| (p, r)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("worker pool");
    let results: Vec<(usize, usize, Option<RunResult>)> = pool.install(|| {
        jobs.par_iter()
            .map(|(p_idx, r_idx)| {
                let problem = &problems[*p_idx];
                let config = EvolutionConfig {
                    seed: derive_seed(base_config.seed, &[*p_idx as u64, *r_idx as u64]),
                    ..base_config.clone()
                };
                let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                    run_evolution(&config, problem)
                }))
                .ok();
                (*p_idx, *r_idx, outcome)
            })
            .collect()
    });

    let mut by_problem: Vec<Vec<&RunResult>> = vec![Vec::new(); problems.len()];
    let mut faulted: Vec<usize> = vec![0; problems.len()];
    for (p_idx, r_idx, outcome) in &results {
        match outcome {
            Some(run) => {
                by_problem[*p_idx].push(run);
                if let Some(dir) = out_dir {
                    write_run_files(dir, &problems[*p_idx], *r_idx, run)?;
                }
            }
            None => {
                faulted[*p_idx] += 1;
                eprintln!(
                    "warning: run {r_idx} of {} failed at the host level",
                    problems[*p_idx].name
                );
            }
        }
    }
    if runs_per_problem > 0 && !problems.is_empty() && results.iter().all(|(_, _, o)| o.is_none())
    {
        return Err(ExperimentError::AllRunsFailed);
    }

    let mut rows = Vec::with_capacity(problems.len());
    for (p_idx, problem) in problems.iter().enumerate() {
        let runs = &by_problem[p_idx];
        let succ = runs.iter().filter(|r| r.success).count();
        let mut unique_counts: Vec<usize> = runs.iter().map(|r| r.type_tally.len()).collect();
        let mut frequent_counts: Vec<usize> =
            runs.iter().map(|r| r.types_at_least(1000)).collect();
        rows.push(ProblemReport {
            problem: problem.name.to_string(),
            runs: runs.len(),
            succ,
            types_median: median_usize(&mut unique_counts),
            types_ge_1000_median: median_usize(&mut frequent_counts),
            faulted_runs: faulted[p_idx],
        });
    }
    rows.sort_by(|a, b| a.problem.cmp(&b.problem));
    let report = ExperimentReport { rows };

    if let Some(dir) = out_dir {
        fs::write(dir.join("report.csv"), report.to_csv())?;
        fs::write(dir.join("report.md"), report.to_markdown())?;
    }
    Ok(report)
}

fn write_run_files(
    dir: &Path,
    problem: &ProblemSpec,
    run_idx: usize,
    run: &RunResult,
) -> std::io::Result<()> {
    let stem = format!("{}-run{:03}", problem.name, run_idx);
    fs::write(
        dir.join(format!("{stem}.json")),
        serde_json::to_string_pretty(run).expect("run result serializes"),
    )?;
    let mut log = fs::File::create(dir.join(format!("{stem}.log.jsonl")))?;
    for g in &run.generations {
        let line = serde_json::json!({
            "generation": g.generation,
            "best_total_error": g.best_total_error,
            "median_total_error": g.median_total_error,
            "mean_genome_length": g.mean_genome_length,
            "unique_types_so_far": g.unique_types_so_far,
            "wall_ms": g.wall_ms,
        });
        writeln!(log, "{line}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum VerifyOutcome {
    Pass,
    CompileFailure,
    TypecheckFailure(String),
    /// Failing case count over train+test, with one example rendering.
    CaseFailures { count: usize, example: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub problem: String,
    pub outcomes: Vec<(u64, VerifyOutcome)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| *o == VerifyOutcome::Pass)
    }
}

/// Recompiles a genome, re-checks its type against the problem signature,
/// and re-evaluates it on fresh train and test cases for each seed.
pub fn verify_solution(
    problem: &ProblemSpec,
    genome: &Genome,
    seeds: &[u64],
    config: &EvolutionConfig,
) -> VerifyReport {
    let reg = registry();
    let mut outcomes = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let outcome = (|| {
            let ast = match compile(genome, &problem.input_types, &problem.output_type, reg) {
                Some(ast) => ast,
                None => return VerifyOutcome::CompileFailure,
            };
            let env = TypeEnv::new(reg, &problem.input_types, &problem.output_type);
            match typecheck(&ast, &env) {
                Ok(ty) => {
                    if unify_with_rigids(&ty, &problem.output_type, env.rigid_vars()).is_err() {
                        return VerifyOutcome::TypecheckFailure(format!(
                            "program type {ty} does not match output {}",
                            problem.output_type
                        ));
                    }
                }
                Err(e) => return VerifyOutcome::TypecheckFailure(e.to_string()),
            }
            let mut train_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[2]));
            let mut test_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[4]));
            let mut cases = problem.generate_cases(config.train_cases, &mut train_rng);
            cases.extend(problem.generate_cases(config.test_cases, &mut test_rng));
            let mut failures = 0usize;
            let mut example = String::new();
            for case in &cases {
                let verdict = match eval(&ast, &case.inputs, reg, config.limits()) {
                    Ok(v) => {
                        let err = score(problem.metric, &v, &case.expected);
                        if err == 0.0 {
                            continue;
                        }
                        format!("error {err}: got {v}, expected {}", case.expected)
                    }
                    Err(f) => format!("fault: {f}"),
                };
                if failures == 0 {
                    example = verdict;
                }
                failures += 1;
            }
            if failures == 0 {
                VerifyOutcome::Pass
            } else {
                VerifyOutcome::CaseFailures {
                    count: failures,
                    example,
                }
            }
        })();
        outcomes.push((seed, outcome));
    }
    VerifyReport {
        problem: problem.name.to_string(),
        outcomes,
    }
}

/// TOML experiment file: problem list plus the run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub runs_per_problem: usize,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub config: EvolutionConfig,
}

fn default_parallelism() -> usize {
    8
}

impl ExperimentConfig {
    pub fn resolve_problems(&self) -> Result<Vec<ProblemSpec>, ExperimentError> {
        self.problems
            .iter()
            .map(|name| {
                problem_by_name(name).ok_or_else(|| ExperimentError::UnknownProblem(name.clone()))
            })
            .collect()
    }
}
