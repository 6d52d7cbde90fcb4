//! Command-line front-end for factorized valuation problems.
//!
//! Subcommands: `marginal`, `solve`, `solve-all`, `check-axioms`,
//! `check-extensibility` and `demo-counterexample`. Exit code 0 means
//! success, 1 a negative verdict (no solution, unsatisfiable optimum or a
//! failed property suite), 2 an input error.

mod problem;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use problem::{Problem, SolverOptions};
use valuation::{
    check_axioms, check_fully_piecewise_extensible, check_piecewise_extensible, oracle,
    query_marginal, sample, solve, solve_all, Domain, Error, Extensible, Ground, Semiring, Var,
    VariableSystem,
};

#[derive(Parser)]
#[command(name = "valsolve", version, about = "Join-tree solver for factorized valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the marginal of the combined factors on a set of variables
    Marginal {
        file: PathBuf,
        /// Comma-separated variable names; empty for the global optimum
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        scope: Vec<String>,
    },
    /// Find one optimal assignment
    Solve { file: PathBuf },
    /// Enumerate all optimal assignments
    SolveAll {
        file: PathBuf,
        /// Maximum number of merged configurations to enumerate
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Probe the algebra axioms on random valuations over the file's system
    CheckAxioms {
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Probe piecewise extensibility of the file's extension family
    CheckExtensibility {
        file: PathBuf,
        /// Also require the reverse direction (full piecewise extensibility)
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate both sides of the solution-set projection identity of
    /// Pouly & Kohlas (2011) on the fixture that refutes it
    DemoCounterexample,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Marginal { file, scope } => {
            let problem = problem::load(&file)?;
            let scope = parse_scope(&scope, problem.system())?;
            match &problem {
                Problem::Dense { factors, options, .. } => {
                    let marginal = query_marginal(factors, &scope, &options.order)
                        .map_err(|e| e.to_string())?;
                    println!("scope: {}", scope_names(&scope));
                    let rendered: Vec<String> =
                        marginal.values().iter().map(f64::to_string).collect();
                    println!("values: {}", rendered.join(", "));
                }
                Problem::Sparse { factors, options, system } => {
                    let marginal = query_marginal(factors, &scope, &options.order)
                        .map_err(|e| e.to_string())?;
                    println!("scope: {}", scope_names(&scope));
                    println!("support: {}", marginal.support_size());
                    for (cfg, value) in marginal.entries() {
                        println!("entry: {} -> {value}", system.format_config(cfg));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file } => {
            let problem = problem::load(&file)?;
            match &problem {
                Problem::Dense { factors, options, system, .. } => {
                    run_solve(factors, options, system)
                }
                Problem::Sparse { factors, options, system } => {
                    run_solve(factors, options, system)
                }
            }
        }
        Command::SolveAll { file, cap } => {
            let problem = problem::load(&file)?;
            let cap = cap.unwrap_or(problem.options().cap);
            match &problem {
                Problem::Dense { factors, options, system, .. } => {
                    run_solve_all(factors, options, system, cap)
                }
                Problem::Sparse { factors, options, system } => {
                    run_solve_all(factors, options, system, cap)
                }
            }
        }
        Command::CheckAxioms { file, trials, seed } => {
            let problem = problem::load(&file)?;
            let mut rng = StdRng::seed_from_u64(seed);
            let report = match &problem {
                Problem::Dense { system, semiring, .. } => {
                    let sampler = table_sampler(*semiring, system);
                    check_axioms(&mut rng, trials, 1e-9, |rng| sampler.sample(rng))
                }
                Problem::Sparse { system, .. } => {
                    let sampler = sample::SparseSampler::with_system(system.clone(), 3, 0.6);
                    check_axioms(&mut rng, trials, 1e-9, |rng| sampler.sample(rng))
                }
            };
            print!("{report}");
            verdict(report.all_passed())
        }
        Command::CheckExtensibility { file, full, trials, seed } => {
            let problem = problem::load(&file)?;
            let mut rng = StdRng::seed_from_u64(seed);
            let mut all_passed = true;
            match &problem {
                Problem::Dense { system, semiring, .. } => {
                    let sampler = table_sampler(*semiring, system);
                    let pair = |rng: &mut StdRng| (sampler.sample(rng), sampler.sample(rng));
                    let report = check_piecewise_extensible(&mut rng, trials, pair)
                        .map_err(|e| e.to_string())?;
                    println!("{report}");
                    all_passed &= report.passed();
                    if full {
                        let report = check_fully_piecewise_extensible(&mut rng, trials, pair)
                            .map_err(|e| e.to_string())?;
                        println!("{report}");
                        all_passed &= report.passed();
                    }
                }
                Problem::Sparse { system, .. } => {
                    let sampler = sample::SparseSampler::with_system(system.clone(), 2, 0.6);
                    let pair = |rng: &mut StdRng| (sampler.sample(rng), sampler.sample(rng));
                    let report = check_piecewise_extensible(&mut rng, trials, pair)
                        .map_err(|e| e.to_string())?;
                    println!("{report}");
                    all_passed &= report.passed();
                    if full {
                        let report = check_fully_piecewise_extensible(&mut rng, trials, pair)
                            .map_err(|e| e.to_string())?;
                        println!("{report}");
                        all_passed &= report.passed();
                    }
                }
            }
            verdict(all_passed)
        }
        Command::DemoCounterexample => {
            let report = oracle::reproduce_counterexample();
            println!("{report}");
            if report.identity_holds {
                println!("Theorem 8.1 (Pouly & Kohlas 2011, Generic Inference): holds on the fixture");
                Ok(ExitCode::from(1))
            } else {
                println!("Theorem 8.1 (Pouly & Kohlas 2011, Generic Inference): REFUTED");
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn parse_scope(names: &[String], system: &Arc<VariableSystem>) -> Result<Domain, String> {
    let mut scope = Domain::empty();
    for name in names.iter().filter(|n| !n.is_empty()) {
        let var = Var::new(name.clone());
        if !system.contains(&var) {
            return Err(format!("unknown variable '{name}' in query scope"));
        }
        scope.insert(var);
    }
    Ok(scope)
}

fn scope_names(scope: &Domain) -> String {
    let names: Vec<&str> = scope.iter().map(Var::name).collect();
    if names.is_empty() {
        "()".to_string()
    } else {
        names.join(", ")
    }
}

fn table_sampler(semiring: Semiring, system: &Arc<VariableSystem>) -> sample::TableSampler<f64> {
    let pool: Vec<f64> = match semiring {
        Semiring::BooleanAndOr => vec![0.0, 1.0],
        Semiring::MaxPlus | Semiring::MinPlus => (-4..=9).map(f64::from).collect(),
        Semiring::MaxTimes => (0..=6).map(f64::from).collect(),
    };
    sample::TableSampler::with_choices(system.clone(), semiring, 3, pool)
}

fn run_solve<G>(
    factors: &[G],
    options: &SolverOptions,
    system: &Arc<VariableSystem>,
) -> Result<ExitCode, String>
where
    G: Ground<Num = f64> + Extensible,
{
    match solve(factors, &options.order, options.picker) {
        Ok(solution) => {
            println!("objective: {}", solution.objective);
            println!("satisfiable: {}", solution.satisfiable);
            println!("assignment: {}", system.format_config(&solution.assignment));
            Ok(exit_for(solution.satisfiable))
        }
        Err(Error::NoSolution { node }) => {
            println!("no solution: the extension set at node {node} is empty");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn run_solve_all<G>(
    factors: &[G],
    options: &SolverOptions,
    system: &Arc<VariableSystem>,
    cap: usize,
) -> Result<ExitCode, String>
where
    G: Ground<Num = f64> + Extensible,
{
    match solve_all(factors, &options.order, cap) {
        Ok(set) => {
            println!("objective: {}", set.objective);
            println!("satisfiable: {}", set.satisfiable);
            println!("complete: {}", !set.truncated);
            println!("count: {}", set.solutions.len());
            for solution in &set.solutions {
                println!("solution: {}", system.format_config(solution));
            }
            Ok(exit_for(set.satisfiable))
        }
        Err(Error::NoSolution { node }) => {
            println!("no solution: the extension set at node {node} is empty");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verdict(ok: bool) -> Result<ExitCode, String> {
    println!("result: {}", if ok { "pass" } else { "fail" });
    Ok(exit_for(ok))
}
