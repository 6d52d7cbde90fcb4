//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass/fail line (run with `--nocapture` to see them).
//!
//! Everything randomized is seeded, sized at most six variables with
//! frames of at most three values, and compared against the enumeration
//! oracle with tolerance 0 for integer-valued algebras and 1e-9 relative
//! for real-valued ones. Real-valued corpora feeding exact set comparisons
//! draw from small integer grids, so products are exact in `f64` and
//! argmax sets are well defined.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use valuation::{
    build_covering_join_tree, check_axioms, check_family, check_fully_piecewise_extensible,
    check_piecewise_extensible, collect, oracle, sample, solve, solve_all, Configuration,
    DenseTable, Domain, EliminationOrder, Extensible, Ground, Picker, Scalar, Semiring,
    Valuation, Var, VariableSystem, SOLUTION_CAP,
};

fn pass(line: &str) {
    println!("{line}: pass");
}

// -------------------------------------------------------------------------
// 1. Counterexample reproduction
// -------------------------------------------------------------------------

#[test]
fn criterion_1_counterexample_reproduction() {
    let started = Instant::now();
    let report = oracle::reproduce_counterexample();

    let cfg = |pairs: &[(&str, usize)]| {
        Configuration::new(pairs.iter().map(|(v, i)| (Var::new(*v), *i)))
    };
    let expected_lhs: BTreeSet<Configuration> =
        [cfg(&[("x", 0), ("y", 0)]), cfg(&[("x", 1), ("y", 1)])].into();
    let expected_rhs: BTreeSet<Configuration> = [
        cfg(&[("x", 0), ("y", 0)]),
        cfg(&[("x", 0), ("y", 1)]),
        cfg(&[("x", 1), ("y", 0)]),
        cfg(&[("x", 1), ("y", 1)]),
    ]
    .into();

    assert_eq!(report.lhs, expected_lhs);
    assert_eq!(report.rhs, expected_rhs);
    assert_ne!(report.lhs, report.rhs);
    assert!(!report.identity_holds);

    // the CLI demonstration agrees
    let out = Command::new(env!("CARGO_BIN_EXE_valsolve"))
        .arg("demo-counterexample")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("REFUTED"));

    assert!(started.elapsed().as_secs_f64() < 1.0, "took {:?}", started.elapsed());
    pass("criterion 1 (counterexample reproduction)");
}

// -------------------------------------------------------------------------
// 2. Axiom suite
// -------------------------------------------------------------------------

#[test]
fn criterion_2_axiom_suite() {
    let started = Instant::now();
    let trials = 500;

    let check = |name: &str, report: valuation::AxiomReport| {
        assert!(report.all_passed(), "{name} axioms failed:\n{report}");
    };

    let mut rng = StdRng::seed_from_u64(201);
    let boolean = sample::boolean_tables(5, 3);
    check("boolean", check_axioms(&mut rng, trials, 0.0, |rng| boolean.sample(rng)));

    let max_plus = sample::integer_weights(Semiring::MaxPlus, 5, 3);
    check("max-plus", check_axioms(&mut rng, trials, 0.0, |rng| max_plus.sample(rng)));

    let min_plus = sample::integer_weights(Semiring::MinPlus, 5, 3);
    check("min-plus", check_axioms(&mut rng, trials, 0.0, |rng| min_plus.sample(rng)));

    let max_times = sample::max_times_real(5, 3);
    check("max-times", check_axioms(&mut rng, trials, 1e-9, |rng| max_times.sample(rng)));

    let sparse = sample::SparseSampler::new(5, 3, 0.6);
    check("sparse", check_axioms(&mut rng, trials, 1e-9, |rng| sparse.sample(rng)));

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "axiom suite took {elapsed:?}");
    pass("criterion 2 (axiom suite, 500 trials x 5 instances)");
}

// -------------------------------------------------------------------------
// 3. Collect correctness at every node
// -------------------------------------------------------------------------

fn subtree_factors<G: Clone>(
    tree: &valuation::CoveringJoinTree,
    assignment: &[usize],
    factors: &[G],
    node: usize,
) -> Vec<G> {
    let mut in_subtree = vec![false; tree.len()];
    let mut stack = vec![node];
    while let Some(n) = stack.pop() {
        in_subtree[n] = true;
        stack.extend_from_slice(tree.children(n));
    }
    factors
        .iter()
        .zip(assignment)
        .filter(|(_, n)| in_subtree[**n])
        .map(|(phi, _)| phi.clone())
        .collect()
}

fn collect_matches_oracle_everywhere<G, F>(name: &str, seed: u64, problems: usize, tol: f64, mut sample_problem: F)
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> Vec<G>,
{
    let mut rng = StdRng::seed_from_u64(seed);
    for problem in 0..problems {
        let factors = sample_problem(&mut rng);
        let tree = build_covering_join_tree(&factors, &EliminationOrder::MinDegree).unwrap();
        let result = collect(&tree, &factors).unwrap();
        for i in 0..tree.len() {
            let subtree = subtree_factors(&tree, tree.assignment(), &factors, i);
            let expected = if subtree.is_empty() {
                oracle::brute_marginal(
                    &[factors[0].unit_on(tree.label(i)).unwrap()],
                    tree.label(i),
                )
                .unwrap()
            } else {
                oracle::brute_marginal(&subtree, tree.label(i)).unwrap()
            };
            assert!(
                oracle::eval_eq(&result.collected[i], &expected, tol).unwrap(),
                "{name} problem {problem} node {i}: {:?} != {:?}",
                result.collected[i],
                expected
            );
        }
    }
}

#[test]
fn criterion_3_collect_correctness() {
    collect_matches_oracle_everywhere("boolean", 301, 200, 0.0, |rng| {
        sample::boolean_tables(6, 3).sample_factors(6, rng)
    });
    collect_matches_oracle_everywhere("max-plus", 302, 200, 0.0, |rng| {
        sample::integer_weights(Semiring::MaxPlus, 6, 3).sample_factors(6, rng)
    });
    collect_matches_oracle_everywhere("min-plus", 303, 200, 0.0, |rng| {
        sample::integer_weights(Semiring::MinPlus, 6, 3).sample_factors(6, rng)
    });
    collect_matches_oracle_everywhere("max-times", 304, 200, 1e-9, |rng| {
        sample::max_times_grid(6, 3, true).sample_factors(6, rng)
    });
    collect_matches_oracle_everywhere("sparse", 305, 200, 1e-9, |rng| {
        sample::SparseSampler::new(6, 3, 0.6).sample_factors(6, rng)
    });
    pass("criterion 3 (collect equals the oracle at every node, 200 problems x 5 instances)");
}

// -------------------------------------------------------------------------
// 4. Collect+Extend correctness
// -------------------------------------------------------------------------

fn solve_matches_oracle<G, F>(name: &str, seed: u64, problems: usize, tol: f64, mut sample_problem: F)
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> Vec<G>,
{
    let mut rng = StdRng::seed_from_u64(seed);
    for problem in 0..problems {
        let factors = sample_problem(&mut rng);
        let solution =
            solve(&factors, &EliminationOrder::MinDegree, Picker::Lexicographic).unwrap();
        let optimum = oracle::global_optimum(&factors).unwrap();
        assert!(
            solution.objective.close_to(optimum, tol),
            "{name} problem {problem}: objective {} vs optimum {optimum}",
            solution.objective
        );
        let solutions = oracle::brute_solutions(&factors).unwrap();
        assert!(
            solutions.contains(&solution.assignment),
            "{name} problem {problem}: {:?} is not among the {} brute-force solutions",
            solution.assignment,
            solutions.len()
        );
    }
}

#[test]
fn criterion_4_collect_extend_correctness() {
    solve_matches_oracle("boolean", 401, 200, 0.0, |rng| {
        sample::boolean_tables(6, 3).sample_factors(6, rng)
    });
    solve_matches_oracle("max-plus", 402, 200, 0.0, |rng| {
        sample::integer_weights(Semiring::MaxPlus, 6, 3).sample_factors(6, rng)
    });
    solve_matches_oracle("min-plus", 403, 200, 0.0, |rng| {
        sample::integer_weights(Semiring::MinPlus, 6, 3).sample_factors(6, rng)
    });
    solve_matches_oracle("max-times", 404, 200, 1e-9, |rng| {
        sample::max_times_grid(6, 3, true).sample_factors(6, rng)
    });
    solve_matches_oracle("sparse", 405, 200, 1e-9, |rng| {
        sample::SparseSampler::new(6, 3, 0.6).sample_factors(6, rng)
    });
    pass("criterion 4 (solve attains the brute-force optimum, 200 problems x 5 instances)");
}

// -------------------------------------------------------------------------
// 5. ExtendAll exactness
// -------------------------------------------------------------------------

fn solve_all_matches_oracle<G, F>(name: &str, seed: u64, problems: usize, mut sample_problem: F)
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> Vec<G>,
{
    let mut rng = StdRng::seed_from_u64(seed);
    for problem in 0..problems {
        let factors = sample_problem(&mut rng);
        let set = solve_all(&factors, &EliminationOrder::MinFill, SOLUTION_CAP).unwrap();
        assert!(!set.truncated, "{name} problem {problem} hit the cap");
        let expected = oracle::brute_solutions(&factors).unwrap();
        assert_eq!(
            set.solutions, expected,
            "{name} problem {problem}: solution sets differ"
        );
    }
}

#[test]
fn criterion_5_extend_all_exactness() {
    solve_all_matches_oracle("max-plus", 501, 100, |rng| {
        sample::integer_weights(Semiring::MaxPlus, 5, 3).sample_factors(5, rng)
    });
    solve_all_matches_oracle("strictly positive max-times", 502, 100, |rng| {
        sample::max_times_grid(5, 3, false).sample_factors(5, rng)
    });
    pass("criterion 5 (solve-all equals the brute-force solution set, 100 problems x 2 instances)");
}

// -------------------------------------------------------------------------
// 6. Structural invariants of constructed trees
// -------------------------------------------------------------------------

#[test]
fn criterion_6_tree_invariants() {
    let sampler = sample::integer_weights(Semiring::MaxPlus, 6, 3);
    let heuristics: [(&str, fn(&mut StdRng, &[DenseTable<i64>]) -> EliminationOrder); 3] = [
        ("min-degree", |_, _| EliminationOrder::MinDegree),
        ("min-fill", |_, _| EliminationOrder::MinFill),
        ("given", |rng, factors| {
            let mut vars: Vec<Var> = factors
                .iter()
                .fold(Domain::empty(), |acc, f| acc.union(f.label()))
                .iter()
                .cloned()
                .collect();
            vars.shuffle(rng);
            EliminationOrder::Given(vars)
        }),
    ];

    for (name, order_of) in heuristics {
        let mut rng = StdRng::seed_from_u64(600);
        for trial in 0..200 {
            let factors = sampler.sample_factors(6, &mut rng);
            let order = order_of(&mut rng, &factors);
            let tree = build_covering_join_tree(&factors, &order).unwrap();
            tree.validate_structure().unwrap();
            assert_eq!(
                tree.verify_running_intersection().unwrap(),
                None,
                "{name} trial {trial}"
            );
            tree.covers(&factors).unwrap();
            for i in 0..tree.len() {
                let s = tree.separator(i);
                assert!(s.is_subset(tree.label(i)));
                if let Some(p) = tree.parent(i) {
                    assert!(s.is_subset(tree.label(p)));
                }
            }
        }
    }
    pass("criterion 6 (running intersection + covering, 200 factorizations x 3 heuristics)");
}

// -------------------------------------------------------------------------
// 7. Extensibility properties
// -------------------------------------------------------------------------

#[test]
fn criterion_7_extensibility_properties() {
    let trials = 500;

    let piecewise = |name: &str, seed: u64, sampler: sample::TableSampler<i64>| {
        let mut rng = StdRng::seed_from_u64(seed);
        let report = check_piecewise_extensible(&mut rng, trials, |rng| {
            (sampler.sample(rng), sampler.sample(rng))
        })
        .unwrap();
        assert!(report.passed(), "{name}: {report}");
    };
    piecewise("boolean", 701, sample::boolean_tables(4, 2));
    piecewise("max-plus", 702, sample::integer_weights(Semiring::MaxPlus, 4, 2));

    let max_times = sample::max_times_grid(4, 2, true);
    let mut rng = StdRng::seed_from_u64(703);
    let report = check_piecewise_extensible(&mut rng, trials, |rng| {
        (max_times.sample(rng), max_times.sample(rng))
    })
    .unwrap();
    assert!(report.passed(), "max-times: {report}");

    // max-plus is fully piecewise extensible
    let max_plus = sample::integer_weights(Semiring::MaxPlus, 4, 2);
    let mut rng = StdRng::seed_from_u64(704);
    let report = check_fully_piecewise_extensible(&mut rng, trials, |rng| {
        (max_plus.sample(rng), max_plus.sample(rng))
    })
    .unwrap();
    assert!(report.passed(), "max-plus full: {report}");

    // the constructed zero-factor max-times pair is a reported witness
    let system = Arc::new(
        VariableSystem::with_sizes([(Var::new("u"), 2), (Var::new("v"), 2)]).unwrap(),
    );
    let zero = DenseTable::new(
        system.clone(),
        Semiring::MaxTimes,
        Domain::singleton(Var::new("u")),
        vec![0.0, 0.0],
    )
    .unwrap();
    let ramp = DenseTable::new(
        system,
        Semiring::MaxTimes,
        Domain::singleton(Var::new("v")),
        vec![1.0, 2.0],
    )
    .unwrap();
    let mut rng = StdRng::seed_from_u64(705);
    let report = check_fully_piecewise_extensible(&mut rng, 20, |_| (zero.clone(), ramp.clone()))
        .unwrap();
    assert!(!report.passed(), "the zero-factor violation must be found");
    assert!(report.first_violation.is_some());

    pass("criterion 7 (piecewise extensibility suites, 500 trials each)");
}

// -------------------------------------------------------------------------
// 8. Extension family conditions
// -------------------------------------------------------------------------

#[test]
fn criterion_8_family_conditions() {
    let trials = 200;
    let mut rng = StdRng::seed_from_u64(801);

    let boolean = sample::boolean_tables(4, 3);
    assert!(check_family(&mut rng, trials, |rng| boolean.sample(rng)).unwrap().passed());

    let max_plus = sample::integer_weights(Semiring::MaxPlus, 4, 3);
    assert!(check_family(&mut rng, trials, |rng| max_plus.sample(rng)).unwrap().passed());

    let min_plus = sample::integer_weights(Semiring::MinPlus, 4, 3);
    assert!(check_family(&mut rng, trials, |rng| min_plus.sample(rng)).unwrap().passed());

    let max_times = sample::max_times_grid(4, 3, true);
    assert!(check_family(&mut rng, trials, |rng| max_times.sample(rng)).unwrap().passed());

    let sparse = sample::SparseSampler::new(4, 3, 0.6);
    assert!(check_family(&mut rng, trials, |rng| sparse.sample(rng)).unwrap().passed());

    pass("criterion 8 (extension family conditions, 200 trials x 5 instances)");
}

// -------------------------------------------------------------------------
// 9. Determinism
// -------------------------------------------------------------------------

#[test]
fn criterion_9_determinism() {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/maxplus.toml");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_valsolve"))
            .args(args)
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let solve_args = ["solve", fixture.to_str().unwrap()];
    assert_eq!(run(&solve_args), run(&solve_args));

    let tie = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/maxplus_tie.toml");
    let all_args = ["solve-all", tie.to_str().unwrap()];
    assert_eq!(run(&all_args), run(&all_args));

    let axiom_args = ["check-axioms", fixture.to_str().unwrap(), "--trials", "50", "--seed", "9"];
    assert_eq!(run(&axiom_args), run(&axiom_args));

    pass("criterion 9 (byte-identical outputs under fixed seed and options)");
}
