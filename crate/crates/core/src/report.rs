//! Run and verification reports, and their table / JSON / CSV renderings.
//!
//! All three renderings of a run are produced from one [`RunReport`].
//! The CSV schema is fixed: `scheme,k,residual_inf,step_inf`, one row per
//! iteration per scheme; `step_inf` is empty for `k = 0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counters::EvalCounters;
use crate::error::Result;
use crate::matrix::{relative_diff_inf, scaled_diff_inf};
use crate::newton::{
    finite_difference_jacobian_scaled, max_relative_entry_error, solve, IterationTrace, PhaseTimings, Scheme,
    SolveStatus, SolverConfig,
};
use crate::problems::{ParamValue, ProblemSpec};

pub const EULER_THRESHOLD: f64 = 1e-13;
pub const FD_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub name: String,
    pub params: BTreeMap<String, ParamValue>,
    pub n: usize,
    pub degrees: Vec<usize>,
    pub top_degree: usize,
}

impl ProblemSummary {
    pub fn of(spec: &ProblemSpec) -> Self {
        Self {
            name: spec.name.clone(),
            params: spec.params.clone(),
            n: spec.system.dim(),
            degrees: spec.system.degrees().collect(),
            top_degree: spec.system.top_degree(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeReport {
    pub scheme: Scheme,
    pub status: SolveStatus,
    pub converged: bool,
    pub iterations: usize,
    pub steps: usize,
    pub final_residual: Option<f64>,
    pub final_iterate: Vec<f64>,
    /// `‖u − u*‖∞` when the problem carries a known root.
    pub root_error: Option<f64>,
    pub residual_history: Vec<f64>,
    pub step_history: Vec<Option<f64>>,
    pub counters: EvalCounters,
    pub timings: PhaseTimings,
}

impl SchemeReport {
    fn new(spec: &ProblemSpec, final_iterate: Vec<f64>, trace: IterationTrace) -> Self {
        let root_error = spec.known_root.as_ref().map(|root| {
            root.iter()
                .zip(&final_iterate)
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
        });
        Self {
            scheme: trace.scheme,
            status: trace.status,
            converged: trace.status.is_converged(),
            iterations: trace.iterations(),
            steps: trace.steps,
            final_residual: trace.final_residual(),
            root_error,
            residual_history: trace.records.iter().map(|r| r.residual_inf).collect(),
            step_history: trace.records.iter().map(|r| r.step_inf).collect(),
            final_iterate,
            counters: trace.counters,
            timings: trace.timings,
        }
    }
}

/// The solver settings shared by every scheme in a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub residual_tol: f64,
    pub step_tol: f64,
    pub max_iters: usize,
    pub jacobian_refresh: usize,
}

impl From<&SolverConfig> for RunSettings {
    fn from(c: &SolverConfig) -> Self {
        Self {
            residual_tol: c.residual_tol,
            step_tol: c.step_tol,
            max_iters: c.max_iters,
            jacobian_refresh: c.jacobian_refresh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: ProblemSummary,
    pub config: RunSettings,
    pub schemes: Vec<SchemeReport>,
    /// Max relative ∞-norm difference of iterates over the common prefix;
    /// present when both schemes ran.
    pub agreement: Option<f64>,
}

impl RunReport {
    pub fn all_converged(&self) -> bool {
        self.schemes.iter().all(|s| s.converged)
    }

    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeReport> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,k,residual_inf,step_inf\n");
        for s in &self.schemes {
            for (k, (r, step)) in s.residual_history.iter().zip(&s.step_history).enumerate() {
                let step = step.map(|v| format!("{v:e}")).unwrap_or_default();
                let _ = writeln!(out, "{},{k},{r:e},{step}", s.scheme);
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let p = &self.problem;
        let params: Vec<String> = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "problem   {} {}", p.name, params.join(" "));
        let _ = writeln!(
            out,
            "size      n={} degrees={:?} top_degree={}",
            p.n, p.degrees, p.top_degree
        );
        let c = &self.config;
        let _ = writeln!(
            out,
            "config    residual_tol={:e} step_tol={:e} max_iters={} refresh={}",
            c.residual_tol, c.step_tol, c.max_iters, c.jacobian_refresh
        );
        for s in &self.schemes {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "[{}] status={:?} iterations={} steps={} final_residual={}",
                s.scheme,
                s.status,
                s.iterations,
                s.steps,
                s.final_residual.map_or("-".into(), |r| format!("{r:e}")),
            );
            if let Some(e) = s.root_error {
                let _ = writeln!(out, "  root_error={e:e}");
            }
            let _ = writeln!(out, "  {:>4}  {:>22}  {:>22}", "k", "residual_inf", "step_inf");
            for (k, (r, step)) in s.residual_history.iter().zip(&s.step_history).enumerate() {
                let step = step.map_or("-".into(), |v| format!("{v:e}"));
                let _ = writeln!(out, "  {k:>4}  {:>22}  {step:>22}", format!("{r:e}"));
            }
            let ct = &s.counters;
            let evals: Vec<String> = ct
                .homogeneous_evals
                .iter()
                .map(|(d, n)| format!("deg{d}={n}"))
                .collect();
            let _ = writeln!(out, "  homogeneous_evals      {}", evals.join(" "));
            let _ = writeln!(out, "  residual_evaluations   {}", ct.residual_evaluations);
            let _ = writeln!(out, "  residual_reconstructs  {}", ct.residual_reconstructions);
            let _ = writeln!(out, "  jacobian_assemblies    {}", ct.jacobian_assemblies);
            let _ = writeln!(out, "  jacobian_vec_products  {}", ct.jacobian_vector_products);
            let _ = writeln!(out, "  factorizations         {}", ct.factorizations);
            let _ = writeln!(out, "  linear_solves          {}", ct.linear_solves);
            let t = &s.timings;
            let _ = writeln!(
                out,
                "  time[s] assembly={:.3e} factorization={:.3e} solve={:.3e} total={:.3e}",
                t.assembly, t.factorization, t.solve, t.total
            );
        }
        if let Some(a) = self.agreement {
            let _ = writeln!(out);
            let _ = writeln!(out, "agreement (max relative iterate difference) = {a:e}");
        }
        out
    }
}

/// Max relative iterate difference over the common prefix of two traces.
pub fn agreement(a: &IterationTrace, b: &IterationTrace) -> f64 {
    a.iterates()
        .zip(b.iterates())
        .map(|(x, y)| relative_diff_inf(x, y))
        .fold(0.0, f64::max)
}

/// Solves `spec` from its suggested start under each scheme with the same config.
pub fn run_schemes(spec: &ProblemSpec, schemes: &[Scheme], config: &SolverConfig) -> Result<RunReport> {
    let mut traces = Vec::with_capacity(schemes.len());
    let mut reports = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let cfg = SolverConfig { scheme, ..*config };
        let (u, trace) = solve(&spec.system, &spec.suggested_u0, &cfg)?;
        traces.push(trace.clone());
        reports.push(SchemeReport::new(spec, u, trace));
    }
    let agreement = match traces.as_slice() {
        [a, b] => Some(agreement(a, b)),
        _ => None,
    };
    Ok(RunReport {
        problem: ProblemSummary::of(spec),
        config: RunSettings::from(config),
        schemes: reports,
        agreement,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub problem: ProblemSummary,
    pub samples: usize,
    pub seed: u64,
    pub euler_defect_max: f64,
    pub fd_error_max: f64,
    pub residual_identity_max: Option<f64>,
    pub euler_threshold: f64,
    pub fd_threshold: f64,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "problem   {} (n={}, degrees={:?})",
            self.problem.name, self.problem.n, self.problem.degrees
        );
        let _ = writeln!(out, "samples   {} (seed {})", self.samples, self.seed);
        let _ = writeln!(
            out,
            "euler identity defect   {:e}  (threshold {:e})  {}",
            self.euler_defect_max,
            self.euler_threshold,
            verdict(self.euler_defect_max <= self.euler_threshold)
        );
        let _ = writeln!(
            out,
            "fd jacobian rel. error  {:e}  (threshold {:e})  {}",
            self.fd_error_max,
            self.fd_threshold,
            verdict(self.fd_error_max <= self.fd_threshold)
        );
        if let Some(r) = self.residual_identity_max {
            let _ = writeln!(out, "residual-via-jacobian   {r:e}  (informational)");
        }
        let _ = writeln!(out, "result    {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

/// Checks the Euler identity and the analytic Jacobian against central
/// differences at `samples` points `u0 + U[−1, 1]ⁿ`.
pub fn verify_problem(spec: &ProblemSpec, samples: usize, seed: u64) -> Result<VerifyReport> {
    let sys = &spec.system;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut euler = 0.0_f64;
    let mut fd = 0.0_f64;
    let mut identity: Option<f64> = None;
    for _ in 0..samples {
        let u: Vec<f64> = spec
            .suggested_u0
            .iter()
            .map(|c| c + rng.gen_range(-1.0..=1.0))
            .collect();
        euler = euler.max(sys.euler_identity_defect(&u)?);
        let jac = sys.jacobian(&u)?;
        fd = fd.max(max_relative_entry_error(
            &jac,
            &finite_difference_jacobian_scaled(sys, &u)?,
        ));
        if sys.top_degree() >= 2 {
            let direct = sys.residual(&u)?;
            let rebuilt = sys.residual_via_jacobian(&u, &jac)?;
            let d = scaled_diff_inf(&direct, &rebuilt);
            identity = Some(identity.unwrap_or(0.0).max(d));
        }
    }
    Ok(VerifyReport {
        problem: ProblemSummary::of(spec),
        samples,
        seed,
        euler_defect_max: euler,
        fd_error_max: fd,
        residual_identity_max: identity,
        euler_threshold: EULER_THRESHOLD,
        fd_threshold: FD_THRESHOLD,
        passed: samples > 0 && euler <= EULER_THRESHOLD && fd <= FD_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{burgers_1d, scalar_power_problem};

    #[test]
    fn scalar_run_both_schemes() {
        let spec = scalar_power_problem(2, 4.0).unwrap();
        let report = run_schemes(
            &spec,
            &[Scheme::Standard, Scheme::FunctionFree],
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(report.all_converged());
        assert!(report.agreement.unwrap() <= 1e-11);
        let ff = report.scheme(Scheme::FunctionFree).unwrap();
        assert_eq!(ff.counters.homogeneous_evals.get(&2), Some(&0));
        assert!((ff.final_iterate[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_scheme_has_no_agreement() {
        let spec = scalar_power_problem(3, 8.0).unwrap();
        let report = run_schemes(&spec, &[Scheme::FunctionFree], &SolverConfig::default()).unwrap();
        assert!(report.agreement.is_none());
        assert_eq!(report.schemes.len(), 1);
    }

    #[test]
    fn csv_shape() {
        let spec = burgers_1d(16, 0.1, 1.0, 0.0).unwrap();
        let report = run_schemes(
            &spec,
            &[Scheme::Standard, Scheme::FunctionFree],
            &SolverConfig::default(),
        )
        .unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "scheme,k,residual_inf,step_inf");
        let rows: usize = report.schemes.iter().map(|s| s.iterations).sum();
        assert_eq!(lines.len(), rows + 1);
        assert!(lines[1].starts_with("standard,0,") && lines[1].ends_with(','));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 4));
        let first_ff = lines.iter().position(|l| l.starts_with("function-free,0,")).unwrap();
        assert_eq!(first_ff, report.schemes[0].iterations + 1);
    }

    #[test]
    fn table_and_json_carry_the_same_numbers() {
        let spec = scalar_power_problem(2, 4.0).unwrap();
        let report = run_schemes(
            &spec,
            &[Scheme::Standard, Scheme::FunctionFree],
            &SolverConfig::default(),
        )
        .unwrap();
        let table = report.to_table();
        let json: RunReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json, report);
        for s in &report.schemes {
            for r in &s.residual_history {
                assert!(table.contains(&format!("{r:e}")));
            }
        }
    }

    #[test]
    fn verify_scalar_cubic() {
        let spec = scalar_power_problem(3, 8.0).unwrap();
        let report = verify_problem(&spec, 10, 0).unwrap();
        assert!(report.passed, "{}", report.to_text());
        assert!(verify_problem(&spec, 1, 0).unwrap().passed);
        assert!(!verify_problem(&spec, 0, 0).unwrap().passed);
    }
}
