use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cbgp::evolve::{run_evolution, EvolutionConfig};
use cbgp::genome::parse_genome;
use cbgp::problems::{all_problems, case_to_json, problem_by_name, ProblemSpec};
use cbgp::runner::{run_experiment, verify_solution, ExperimentConfig, VerifyOutcome};
use cbgp::stdlib::registry;

#[derive(Parser)]
#[command(name = "cbgp", about = "Typed code-building genetic programming", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigOverrides {
    /// TOML config file (run settings under [config]).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    umad_rate: Option<f64>,
    #[arg(long)]
    train_cases: Option<usize>,
    #[arg(long)]
    test_cases: Option<usize>,
    /// Run profile when no config file is given: "desk" or "paper".
    #[arg(long, default_value = "desk")]
    profile: String,
}

impl ConfigOverrides {
    fn apply(&self, mut config: EvolutionConfig) -> EvolutionConfig {
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.population {
            config.population_size = v;
        }
        if let Some(v) = self.generations {
            config.max_generations = v;
        }
        if let Some(v) = self.umad_rate {
            config.umad_rate = v;
        }
        if let Some(v) = self.train_cases {
            config.train_cases = v;
        }
        if let Some(v) = self.test_cases {
            config.test_cases = v;
        }
        config
    }

    fn base(&self) -> Result<EvolutionConfig, String> {
        match self.profile.as_str() {
            "desk" => Ok(EvolutionConfig::desk_scale()),
            "paper" => Ok(EvolutionConfig::paper_scale()),
            other => Err(format!("unknown profile '{other}' (expected desk or paper)")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// One evolutionary run on one problem.
    Run {
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        overrides: ConfigOverrides,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Many runs across problems, with a CSV/Markdown report.
    Experiment {
        #[command(flatten)]
        overrides: ConfigOverrides,
        /// Comma-separated problem list; defaults to the config file's
        /// list or all problems.
        #[arg(long, value_delimiter = ',')]
        problems: Vec<String>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        parallelism: Option<usize>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Re-verify a serialized genome against fresh cases.
    Verify {
        #[arg(long)]
        problem: String,
        /// Genome file in the line format (LIT/IN/FN/APPLY/FN-ABS/LET/VAR).
        #[arg(long)]
        genome: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Write the generated function catalog.
    Catalog {
        /// Output path; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump generated cases as JSON lines.
    GenCases {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Output path; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn lookup_problem(name: &str) -> Result<ProblemSpec, String> {
    problem_by_name(name).ok_or_else(|| {
        let names: Vec<&str> = all_problems().iter().map(|p| p.name).collect();
        format!("unknown problem '{name}'; available: {}", names.join(", "))
    })
}

fn load_experiment_config(path: &PathBuf) -> Result<ExperimentConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run {
            problem,
            overrides,
            out_dir,
        } => {
            let spec = lookup_problem(&problem)?;
            let base = match &overrides.config {
                Some(path) => load_experiment_config(path)?.config,
                None => overrides.base()?,
            };
            let config = overrides.apply(base);
            let result = run_evolution(&config, &spec);
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                let path = dir.join(format!("{}-seed{}.json", spec.name, config.seed));
                fs::write(&path, serde_json::to_string_pretty(&result).unwrap())
                    .map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            println!(
                "{}: {} after {} generation(s); unique types {}",
                spec.name,
                if result.success { "SUCCESS" } else { "failure" },
                result.generations.len(),
                result.type_tally.len()
            );
            if let Some(text) = &result.solution_text {
                println!("solution: {text}");
            }
            Ok(())
        }
        Command::Experiment {
            overrides,
            problems,
            runs,
            parallelism,
            out_dir,
        } => {
            let (mut exp, base) = match &overrides.config {
                Some(path) => {
                    let exp = load_experiment_config(path)?;
                    let base = exp.config.clone();
                    (exp, base)
                }
                None => {
                    let base = overrides.base()?;
                    (
                        ExperimentConfig {
                            problems: all_problems().iter().map(|p| p.name.to_string()).collect(),
                            runs_per_problem: 20,
                            parallelism: 8,
                            config: base.clone(),
                        },
                        base,
                    )
                }
            };
            if !problems.is_empty() {
                exp.problems = problems;
            }
            if let Some(r) = runs {
                exp.runs_per_problem = r;
            }
            if let Some(p) = parallelism {
                exp.parallelism = p;
            }
            exp.config = overrides.apply(base);
            let specs = exp.resolve_problems().map_err(|e| e.to_string())?;
            let report = run_experiment(
                &specs,
                exp.runs_per_problem,
                &exp.config,
                exp.parallelism,
                Some(&out_dir),
            )
            .map_err(|e| e.to_string())?;
            print!("{}", report.to_markdown());
            println!("report written under {}", out_dir.display());
            Ok(())
        }
        Command::Verify {
            problem,
            genome,
            seeds,
            overrides,
        } => {
            let spec = lookup_problem(&problem)?;
            let text = fs::read_to_string(&genome).map_err(|e| format!("{}: {e}", genome.display()))?;
            let parsed = parse_genome(&text).map_err(|e| e.to_string())?;
            let base = match &overrides.config {
                Some(path) => load_experiment_config(path)?.config,
                None => overrides.base()?,
            };
            let config = overrides.apply(base);
            let report = verify_solution(&spec, &parsed, &seeds, &config);
            for (seed, outcome) in &report.outcomes {
                match outcome {
                    VerifyOutcome::Pass => println!("seed {seed}: PASS"),
                    VerifyOutcome::CompileFailure => {
                        println!("seed {seed}: FAIL (genome compiles to nothing)")
                    }
                    VerifyOutcome::TypecheckFailure(msg) => {
                        println!("seed {seed}: FAIL (typecheck: {msg})")
                    }
                    VerifyOutcome::CaseFailures { count, example } => {
                        println!("seed {seed}: FAIL ({count} case(s), e.g. {example})")
                    }
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err("verification failed".into())
            }
        }
        Command::Catalog { out } => {
            let doc = registry().catalog_markdown();
            match out {
                Some(path) => {
                    fs::write(&path, doc).map_err(|e| e.to_string())?;
                    println!("wrote {}", path.display());
                }
                None => print!("{doc}"),
            }
            Ok(())
        }
        Command::GenCases {
            problem,
            seed,
            count,
            out,
        } => {
            let spec = lookup_problem(&problem)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut lines = String::new();
            for case in spec.generate_cases(count, &mut rng) {
                lines.push_str(&case_to_json(&case).to_string());
                lines.push('\n');
            }
            match out {
                Some(path) => {
                    fs::write(&path, lines).map_err(|e| e.to_string())?;
                    println!("wrote {}", path.display());
                }
                None => print!("{lines}"),
            }
            Ok(())
        }
    }
}
