//! Built-in polynomial test systems.
//!
//! The PDE problems use central differences on a uniform grid with `n`
//! interior unknowns. Known Dirichlet values are folded out of the unknowns:
//! a product of a boundary value with one unknown becomes an entry of `L`,
//! and a pure boundary product becomes part of `b`, so every nonlinear term
//! stays homogeneous in the unknowns.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::norm_inf;
use crate::poly_system::{PolynomialSystem, RawTerm, TermEntry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    List(Vec<i64>),
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::List(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub params: BTreeMap<String, ParamValue>,
    pub system: PolynomialSystem,
    pub known_root: Option<Vec<f64>>,
    pub suggested_u0: Vec<f64>,
}

impl ProblemSpec {
    /// `‖f(root)‖∞ / (1 + ‖b‖∞)`, if a root is known.
    pub fn root_residual(&self) -> Option<f64> {
        let root = self.known_root.as_ref()?;
        let r = self.system.residual(root).ok()?;
        Some(norm_inf(&r) / (1.0 + norm_inf(self.system.constant())))
    }
}

/// `u^p − target = 0`.
pub fn scalar_power_problem(p: usize, target: f64) -> Result<ProblemSpec> {
    if !(2..=8).contains(&p) {
        return Err(Error::UnsupportedDegree(p));
    }
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::InvalidParameter(format!("target {target} must be positive")));
    }
    let system = PolynomialSystem::build(
        1,
        &[],
        vec![RawTerm::new(p, vec![TermEntry::new(0, vec![0; p], 1.0)])],
        vec![-target],
    )?;
    let root = target.powf(1.0 / p as f64);
    Ok(ProblemSpec {
        name: "scalar-power".into(),
        params: BTreeMap::from([
            ("p".to_string(), ParamValue::Int(p as i64)),
            ("target".to_string(), ParamValue::Real(target)),
        ]),
        system,
        known_root: Some(vec![root]),
        suggested_u0: vec![root + 1.0],
    })
}

/// Sparse random system with a prescribed root.
///
/// `L` gets `≈ density·n²` uniform `[−1, 1]` entries plus `n·density` on the
/// diagonal; each requested degree gets the same number of random monomials
/// with uniform `[−1, 1]` coefficients. A root `u*` is drawn from `[−1, 1]ⁿ`
/// and `b = −(L·u* + Σ N⁽ᵐ⁾(u*))`.
pub fn random_polynomial_problem(n: usize, degrees: &[usize], density: f64, seed: u64) -> Result<ProblemSpec> {
    random_with_scales(n, degrees, density, seed, &BTreeMap::new())
}

fn random_with_scales(
    n: usize,
    degrees: &[usize],
    density: f64,
    seed: u64,
    scales: &BTreeMap<usize, f64>,
) -> Result<ProblemSpec> {
    if !(1..=200).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} must lie in [1, 200]")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidDensity(density));
    }
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    if let Some(&d) = degrees.iter().find(|&&d| !(2..=8).contains(&d)) {
        return Err(if d < 2 {
            Error::DegreeTooLow(d)
        } else {
            Error::UnsupportedDegree(d)
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = ((density * (n * n) as f64).round() as usize).max(1);

    let mut linear = Vec::with_capacity(count + n);
    for _ in 0..count {
        linear.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(-1.0..=1.0)));
    }
    for i in 0..n {
        linear.push((i, i, n as f64 * density));
    }

    let mut terms = Vec::with_capacity(degrees.len());
    for &d in &degrees {
        let scale = scales.get(&d).copied().unwrap_or(1.0);
        let entries = (0..count)
            .map(|_| {
                let row = rng.gen_range(0..n);
                let vars: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                TermEntry::new(row, vars, scale * rng.gen_range(-1.0..=1.0))
            })
            .collect();
        terms.push(RawTerm::new(d, entries));
    }

    let root: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let u0: Vec<f64> = root.iter().map(|r| r + 0.1 * rng.gen_range(-1.0..=1.0)).collect();

    let homogeneous = PolynomialSystem::build(n, &linear, terms, vec![0.0; n])?;
    let b: Vec<f64> = homogeneous.residual(&root)?.into_iter().map(|v| -v).collect();
    let system = homogeneous.with_constant(b)?;

    Ok(ProblemSpec {
        name: "random".into(),
        params: BTreeMap::from([
            ("n".to_string(), ParamValue::Int(n as i64)),
            (
                "degrees".to_string(),
                ParamValue::List(degrees.iter().map(|&d| d as i64).collect()),
            ),
            ("density".to_string(), ParamValue::Real(density)),
            ("seed".to_string(), ParamValue::Int(seed as i64)),
        ]),
        system,
        known_root: Some(root),
        suggested_u0: u0,
    })
}

fn linear_interpolation(n: usize, ua: f64, ub: f64) -> Vec<f64> {
    let h = 1.0 / (n + 1) as f64;
    (1..=n).map(|i| ua + (ub - ua) * i as f64 * h).collect()
}

/// Steady viscous Burgers `ν·u″ = u·u′` on (0, 1) with `u(0) = ua`, `u(1) = ub`.
///
/// Row `i`: `ν(u_{i−1} − 2u_i + u_{i+1})/h² − u_i(u_{i+1} − u_{i−1})/(2h) = 0`.
pub fn burgers_1d(n: usize, nu: f64, ua: f64, ub: f64) -> Result<ProblemSpec> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 3")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidViscosity(nu));
    }
    if !ua.is_finite() || !ub.is_finite() {
        return Err(Error::InvalidParameter("boundary values must be finite".into()));
    }
    let h = 1.0 / (n + 1) as f64;
    let diff = nu / (h * h);
    let conv = 1.0 / (2.0 * h);

    let mut linear = Vec::with_capacity(3 * n + 2);
    let mut quad = Vec::with_capacity(2 * n);
    let mut b = vec![0.0; n];
    for i in 0..n {
        linear.push((i, i, -2.0 * diff));
        if i > 0 {
            linear.push((i, i - 1, diff));
            quad.push(TermEntry::new(i, [i, i - 1], conv));
        } else {
            b[0] += diff * ua;
            linear.push((i, i, conv * ua));
        }
        if i + 1 < n {
            linear.push((i, i + 1, diff));
            quad.push(TermEntry::new(i, [i, i + 1], -conv));
        } else {
            b[n - 1] += diff * ub;
            linear.push((i, i, -conv * ub));
        }
    }
    let system = PolynomialSystem::build(n, &linear, vec![RawTerm::new(2, quad)], b)?;
    Ok(ProblemSpec {
        name: "burgers-1d".into(),
        params: BTreeMap::from([
            ("n".to_string(), ParamValue::Int(n as i64)),
            ("nu".to_string(), ParamValue::Real(nu)),
            ("ua".to_string(), ParamValue::Real(ua)),
            ("ub".to_string(), ParamValue::Real(ub)),
        ]),
        system,
        known_root: None,
        suggested_u0: linear_interpolation(n, ua, ub),
    })
}

/// Steady Allen–Cahn `u″ + λ(u − u³) = 0` on (0, 1) with `u(0) = −1`, `u(1) = 1`.
pub fn cubic_reaction_problem(n: usize, lam: f64) -> Result<ProblemSpec> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 3")));
    }
    if !lam.is_finite() {
        return Err(Error::InvalidParameter(format!("lam = {lam} must be finite")));
    }
    let (ua, ub) = (-1.0, 1.0);
    let h = 1.0 / (n + 1) as f64;
    let diff = 1.0 / (h * h);

    let mut linear = Vec::with_capacity(3 * n);
    let mut cubic = Vec::with_capacity(n);
    let mut b = vec![0.0; n];
    for i in 0..n {
        linear.push((i, i, -2.0 * diff + lam));
        if i > 0 {
            linear.push((i, i - 1, diff));
        } else {
            b[0] += diff * ua;
        }
        if i + 1 < n {
            linear.push((i, i + 1, diff));
        } else {
            b[n - 1] += diff * ub;
        }
        cubic.push(TermEntry::new(i, [i, i, i], -lam));
    }
    let system = PolynomialSystem::build(n, &linear, vec![RawTerm::new(3, cubic)], b)?;
    Ok(ProblemSpec {
        name: "cubic-reaction".into(),
        params: BTreeMap::from([
            ("n".to_string(), ParamValue::Int(n as i64)),
            ("lam".to_string(), ParamValue::Real(lam)),
        ]),
        system,
        known_root: None,
        suggested_u0: linear_interpolation(n, ua, ub),
    })
}

/// Random degree-{2, 3} system with the quadratic coefficients scaled by `alpha`.
///
/// For `n = 1` the instance is fixed instead: `alpha·u² + u³ − (alpha + 1) = 0`
/// with root `1` and start `2`, which for `alpha = 1` is `u² + u³ − 2 = 0`.
pub fn mixed_quadratic_cubic_problem(n: usize, alpha: f64, seed: u64) -> Result<ProblemSpec> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be finite")));
    }
    let params = BTreeMap::from([
        ("n".to_string(), ParamValue::Int(n as i64)),
        ("alpha".to_string(), ParamValue::Real(alpha)),
        ("seed".to_string(), ParamValue::Int(seed as i64)),
    ]);
    if n == 1 {
        let system = PolynomialSystem::build(
            1,
            &[],
            vec![
                RawTerm::new(2, vec![TermEntry::new(0, [0, 0], alpha)]),
                RawTerm::new(3, vec![TermEntry::new(0, [0, 0, 0], 1.0)]),
            ],
            vec![-(alpha + 1.0)],
        )?;
        return Ok(ProblemSpec {
            name: "mixed".into(),
            params,
            system,
            known_root: Some(vec![1.0]),
            suggested_u0: vec![2.0],
        });
    }
    let density = (3.0 / n as f64).min(1.0);
    let spec = random_with_scales(n, &[2, 3], density, seed, &BTreeMap::from([(2, alpha)]))?;
    Ok(ProblemSpec {
        name: "mixed".into(),
        params,
        ..spec
    })
}
