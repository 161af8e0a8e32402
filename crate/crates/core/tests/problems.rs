mod common;

use polynewton::matrix::{norm_inf, relative_diff_inf};
use polynewton::newton::{finite_difference_jacobian_scaled, max_relative_entry_error};
use polynewton::problems::{
    burgers_1d, cubic_reaction_problem, mixed_quadratic_cubic_problem, random_polynomial_problem, scalar_power_problem,
    ProblemSpec,
};
use polynewton::{solve, Scheme, SolveStatus, SolverConfig};

fn all_generated() -> Vec<ProblemSpec> {
    let mut specs: Vec<ProblemSpec> = (2..=8).map(|p| scalar_power_problem(p, 5.0).unwrap()).collect();
    specs.push(burgers_1d(16, 0.1, 1.0, 0.0).unwrap());
    specs.push(burgers_1d(40, 0.05, -0.5, 2.0).unwrap());
    specs.push(cubic_reaction_problem(16, 4.0).unwrap());
    specs.push(cubic_reaction_problem(33, -1.5).unwrap());
    specs.push(mixed_quadratic_cubic_problem(1, 1.0, 0).unwrap());
    specs.push(mixed_quadratic_cubic_problem(30, 0.3, 9).unwrap());
    specs.extend(common::corpus().into_iter().step_by(7));
    specs
}

fn both(spec: &ProblemSpec, config: SolverConfig) -> [(Vec<f64>, polynewton::IterationTrace); 2] {
    [Scheme::Standard, Scheme::FunctionFree]
        .map(|scheme| solve(&spec.system, &spec.suggested_u0, &SolverConfig { scheme, ..config }).unwrap())
}

#[test]
fn every_generated_problem_satisfies_euler_identity() {
    for (i, spec) in all_generated().iter().enumerate() {
        for u in common::random_points(spec.system.dim(), 10, 77 + i as u64) {
            let d = spec.system.euler_identity_defect(&u).unwrap();
            assert!(d <= 1e-13, "{} #{i}: {d:e}", spec.name);
        }
    }
}

#[test]
fn generators_are_deterministic() {
    assert_eq!(all_generated(), all_generated());
}

#[test]
fn known_roots_are_roots() {
    for spec in all_generated() {
        if let Some(r) = spec.root_residual() {
            assert!(r <= 1e-10, "{}: {r:e}", spec.name);
        }
    }
}

#[test]
fn random_twenty_converges_to_known_root() {
    let spec = random_polynomial_problem(20, &[2, 3], 0.1, 42).unwrap();
    let root = spec.known_root.clone().unwrap();
    for (u, trace) in both(&spec, SolverConfig::default()) {
        assert!(trace.status.is_converged(), "{}: {:?}", trace.scheme, trace.status);
        assert!(trace.steps <= 15, "{}: {} steps", trace.scheme, trace.steps);
        let err = u.iter().zip(&root).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8, "{}: error {err:e}", trace.scheme);
    }
}

/// Seeds of the acceptance corpus whose suggested start does not reach the
/// known root under plain Newton. Checked below, so a change in behaviour
/// shows up as a test failure rather than a silent skip.
///
/// 1032: n = 1, degrees {2, 4}. The scalar polynomial has a second real root
/// 0.019 away from the prescribed one, and both schemes converge to it
/// (residual 0) from the perturbed start.
const NON_CONVERGENT_CORPUS_SEEDS: &[u64] = &[1032];

#[test]
fn known_root_problems_converge_under_both_schemes() {
    let mut failures = Vec::new();
    for spec in common::corpus() {
        let seed = match spec.params["seed"] {
            polynewton::problems::ParamValue::Int(s) => s as u64,
            _ => unreachable!(),
        };
        let root = spec.known_root.clone().unwrap();
        let [(us, ts), (uf, tf)] = both(&spec, SolverConfig::default());
        let converged = [(&us, &ts), (&uf, &tf)]
            .iter()
            .all(|(u, t)| t.status.is_converged() && u.iter().zip(&root).all(|(a, b)| (a - b).abs() <= 1e-8));
        if !converged {
            failures.push(seed);
        }
    }
    assert_eq!(failures, NON_CONVERGENT_CORPUS_SEEDS);
}

#[test]
fn burgers_jacobian_matches_fd_at_start() {
    let spec = burgers_1d(16, 0.1, 1.0, 0.0).unwrap();
    let jac = spec.system.jacobian(&spec.suggested_u0).unwrap();
    let fd = finite_difference_jacobian_scaled(&spec.system, &spec.suggested_u0).unwrap();
    assert!(max_relative_entry_error(&jac, &fd) <= 1e-6);
}

#[test]
fn burgers_schemes_agree_and_skip_quadratic() {
    let spec = burgers_1d(16, 0.1, 1.0, 0.0).unwrap();
    let [(_, a), (_, b)] = both(&spec, SolverConfig::default());
    assert_eq!(a.iterations(), b.iterations());
    for (x, y) in a.iterates().zip(b.iterates()) {
        assert!(relative_diff_inf(x, y) <= 1e-9);
    }
    assert_eq!(b.counters.homogeneous(2), 0);
    assert_eq!(a.counters.homogeneous(2) as usize, a.iterations());
}

#[test]
fn burgers_solution_is_monotone_between_boundaries() {
    let spec = burgers_1d(32, 0.1, 1.0, 0.0).unwrap();
    let (u, trace) = solve(
        &spec.system,
        &spec.suggested_u0,
        &SolverConfig::with_scheme(Scheme::FunctionFree),
    )
    .unwrap();
    assert!(trace.status.is_converged());
    assert!(u.windows(2).all(|w| w[1] < w[0]));
    assert!(u.iter().all(|&v| v > 0.0 && v < 1.0));
}

#[test]
fn allen_cahn_solution_is_odd_about_midpoint() {
    // u(0) = -1, u(1) = 1 and the equation is odd in u, so u(x) = -u(1 - x)
    let spec = cubic_reaction_problem(21, 4.0).unwrap();
    let (u, trace) = solve(
        &spec.system,
        &spec.suggested_u0,
        &SolverConfig::with_scheme(Scheme::FunctionFree),
    )
    .unwrap();
    assert_eq!(trace.status, SolveStatus::ConvergedResidual);
    assert_eq!(trace.counters.homogeneous(3), 0);
    for i in 0..u.len() {
        assert!((u[i] + u[u.len() - 1 - i]).abs() < 1e-10);
    }
}

#[test]
fn mixed_counters_follow_iterations() {
    for seed in 0..4 {
        let spec = mixed_quadratic_cubic_problem(15, 0.7, seed).unwrap();
        let (_, trace) = solve(
            &spec.system,
            &spec.suggested_u0,
            &SolverConfig::with_scheme(Scheme::FunctionFree),
        )
        .unwrap();
        assert_eq!(trace.counters.homogeneous(3), 0);
        assert_eq!(trace.counters.homogeneous(2) as usize, trace.iterations());
    }
    let cubic_only = mixed_quadratic_cubic_problem(15, 0.0, 1).unwrap();
    let (_, trace) = solve(
        &cubic_only.system,
        &cubic_only.suggested_u0,
        &SolverConfig::with_scheme(Scheme::FunctionFree),
    )
    .unwrap();
    assert_eq!(trace.counters.homogeneous(2), 0);
    assert_eq!(trace.counters.homogeneous(3), 0);
}

#[test]
fn mixed_scalar_reproduces_worked_step() {
    let spec = mixed_quadratic_cubic_problem(1, 1.0, 0).unwrap();
    for (_, trace) in both(&spec, SolverConfig::default()) {
        assert!((trace.records[1].iterate[0] - 1.375).abs() < 1e-14, "{}", trace.scheme);
    }
}

#[test]
fn frozen_jacobian_runs_agree_step_for_step() {
    for (i, spec) in [
        burgers_1d(16, 0.1, 1.0, 0.0).unwrap(),
        cubic_reaction_problem(16, 4.0).unwrap(),
        random_polynomial_problem(20, &[2, 3, 4], 0.1, 3).unwrap(),
    ]
    .iter()
    .enumerate()
    {
        let config = SolverConfig {
            jacobian_refresh: 3,
            max_iters: 200,
            ..SolverConfig::default()
        };
        let [(_, a), (_, b)] = both(spec, config);
        assert!(a.status.is_converged(), "#{i}: {:?}", a.status);
        assert_eq!(a.iterations(), b.iterations(), "#{i}");
        for (x, y) in a.iterates().zip(b.iterates()).take(10) {
            assert!(relative_diff_inf(x, y) <= 1e-9, "#{i}");
        }
        let top = spec.system.top_degree();
        assert_eq!(b.counters.homogeneous(top), 0);
        assert!(b.counters.factorizations < b.iterations() as u64);
        assert!(norm_inf(&b.records.last().unwrap().iterate).is_finite());
    }
}
