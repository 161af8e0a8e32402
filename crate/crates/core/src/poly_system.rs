//! Polynomial-only systems `f(u) = L·u + Σ_m N⁽ᵐ⁾(u) + b = 0`.
//!
//! Each nonlinear part `N⁽ᵐ⁾` is stored as a sparse list of monomials
//! `coeff · u_{j1}···u_{jm}` with a sorted multi-index, which makes the
//! analytic Jacobian a direct application of the product rule. Because every
//! `N⁽ᵐ⁾` is homogeneous of degree `m`, its Jacobian satisfies
//! `J⁽ᵐ⁾(u)·u = m·N⁽ᵐ⁾(u)`; [`PolynomialSystem::residual_via_jacobian`] uses
//! that identity to rebuild `f(u)` from an assembled Jacobian without touching
//! the top-degree term.

use std::collections::BTreeMap;

use crate::counters::EvalCounters;
use crate::error::{Error, Result};
use crate::matrix::{norm_inf, DenseMatrix, LuFactorization};

/// One monomial `coeff · Π_k u[vars[k]]` contributing to component `row`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    pub row: usize,
    pub vars: Vec<usize>,
    pub coeff: f64,
}

impl TermEntry {
    pub fn new(row: usize, vars: impl Into<Vec<usize>>, coeff: f64) -> Self {
        Self {
            row,
            vars: vars.into(),
            coeff,
        }
    }

    fn monomial(&self, u: &[f64]) -> f64 {
        self.vars.iter().fold(self.coeff, |acc, &j| acc * u[j])
    }

    /// Product of all factors except the one at `skip`.
    fn partial(&self, u: &[f64], skip: usize) -> f64 {
        self.vars
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .fold(self.coeff, |acc, (_, &j)| acc * u[j])
    }
}

/// Uncanonicalized input for one homogeneous term.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub degree: usize,
    pub entries: Vec<TermEntry>,
}

impl RawTerm {
    pub fn new(degree: usize, entries: Vec<TermEntry>) -> Self {
        Self { degree, entries }
    }
}

/// A degree-`m` homogeneous vector function in canonical form: entries sorted
/// by `(row, vars)`, multi-indices ascending, duplicates merged, zeros dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousTerm {
    n: usize,
    degree: usize,
    entries: Vec<TermEntry>,
}

impl HomogeneousTerm {
    pub fn new(n: usize, degree: usize, entries: Vec<TermEntry>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::DegreeTooLow(degree));
        }
        let mut merged: BTreeMap<(usize, Vec<usize>), f64> = BTreeMap::new();
        for mut entry in entries {
            if entry.vars.len() != degree {
                return Err(Error::ArityMismatch {
                    degree,
                    found: entry.vars.len(),
                });
            }
            if !entry.coeff.is_finite() {
                return Err(Error::NonfiniteCoefficient(entry.coeff));
            }
            check_index(entry.row, n)?;
            for &j in &entry.vars {
                check_index(j, n)?;
            }
            entry.vars.sort_unstable();
            *merged.entry((entry.row, entry.vars)).or_insert(0.0) += entry.coeff;
        }
        let mut canonical = Vec::with_capacity(merged.len());
        for ((row, vars), coeff) in merged {
            if !coeff.is_finite() {
                return Err(Error::NonfiniteCoefficient(coeff));
            }
            if coeff != 0.0 {
                canonical.push(TermEntry { row, vars, coeff });
            }
        }
        Ok(Self {
            n,
            degree,
            entries: canonical,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[TermEntry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `N⁽ᵐ⁾(u)`.
    pub fn eval(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(u, self.n)?;
        let mut out = vec![0.0; self.n];
        for e in &self.entries {
            out[e.row] += e.monomial(u);
        }
        Ok(out)
    }

    /// Analytic `J⁽ᵐ⁾(u) = ∂N⁽ᵐ⁾/∂u`.
    pub fn jacobian(&self, u: &[f64]) -> Result<DenseMatrix> {
        let mut jac = DenseMatrix::zeros(self.n, self.n);
        self.add_jacobian_into(u, &mut jac)?;
        Ok(jac)
    }

    pub(crate) fn add_jacobian_into(&self, u: &[f64], jac: &mut DenseMatrix) -> Result<()> {
        check_len(u, self.n)?;
        for e in &self.entries {
            for (k, &j) in e.vars.iter().enumerate() {
                jac[(e.row, j)] += e.partial(u, k);
            }
        }
        Ok(())
    }

    /// `J⁽ᵐ⁾(u)·v` without assembling the matrix.
    pub fn jacobian_vector_product(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        check_len(u, self.n)?;
        check_len(v, self.n)?;
        let mut out = vec![0.0; self.n];
        for e in &self.entries {
            for (k, &j) in e.vars.iter().enumerate() {
                out[e.row] += e.partial(u, k) * v[j];
            }
        }
        Ok(out)
    }
}

/// `f(u) = L·u + Σ_m N⁽ᵐ⁾(u) + b`, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    n: usize,
    linear: Vec<(usize, usize, f64)>,
    terms: Vec<HomogeneousTerm>,
    constant: Vec<f64>,
}

impl PolynomialSystem {
    /// Validates and canonicalizes raw system data.
    ///
    /// Linear triples and tensor entries that share an index are summed,
    /// multi-indices are sorted, terms of equal degree are merged, and entries
    /// or terms that end up empty are dropped.
    pub fn build(n: usize, linear: &[(usize, usize, f64)], terms: Vec<RawTerm>, constant: Vec<f64>) -> Result<Self> {
        check_len(&constant, n)?;
        if let Some(&c) = constant.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonfiniteCoefficient(c));
        }

        let mut lin: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(i, j, v) in linear {
            check_index(i, n)?;
            check_index(j, n)?;
            if !v.is_finite() {
                return Err(Error::NonfiniteCoefficient(v));
            }
            *lin.entry((i, j)).or_insert(0.0) += v;
        }
        let mut linear = Vec::with_capacity(lin.len());
        for ((i, j), v) in lin {
            if !v.is_finite() {
                return Err(Error::NonfiniteCoefficient(v));
            }
            if v != 0.0 {
                linear.push((i, j, v));
            }
        }

        let mut by_degree: BTreeMap<usize, Vec<TermEntry>> = BTreeMap::new();
        for raw in terms {
            if raw.degree < 2 {
                return Err(Error::DegreeTooLow(raw.degree));
            }
            by_degree.entry(raw.degree).or_default().extend(raw.entries);
        }
        let mut merged = Vec::with_capacity(by_degree.len());
        for (degree, entries) in by_degree {
            let term = HomogeneousTerm::new(n, degree, entries)?;
            if term.nnz() > 0 {
                merged.push(term);
            }
        }

        Ok(Self {
            n,
            linear,
            terms: merged,
            constant,
        })
    }

    /// Same structure with a different constant vector.
    pub fn with_constant(&self, constant: Vec<f64>) -> Result<Self> {
        check_len(&constant, self.n)?;
        if let Some(&c) = constant.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonfiniteCoefficient(c));
        }
        Ok(Self {
            constant,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> &[(usize, usize, f64)] {
        &self.linear
    }

    pub fn terms(&self) -> &[HomogeneousTerm] {
        &self.terms
    }

    pub fn term(&self, degree: usize) -> Option<&HomogeneousTerm> {
        self.terms.iter().find(|t| t.degree == degree)
    }

    pub fn constant(&self) -> &[f64] {
        &self.constant
    }

    /// Highest degree present, or 1 for a purely linear system.
    pub fn top_degree(&self) -> usize {
        self.terms.last().map_or(1, |t| t.degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|t| t.degree)
    }

    pub fn linear_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.linear {
            m[(i, j)] += v;
        }
        m
    }

    pub fn linear_apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(u, self.n)?;
        let mut out = vec![0.0; self.n];
        for &(i, j, v) in &self.linear {
            out[i] += v * u[j];
        }
        Ok(out)
    }

    /// `f(u)`, evaluating every homogeneous term.
    pub fn residual(&self, u: &[f64]) -> Result<Vec<f64>> {
        Evaluator::new(self).residual(u)
    }

    /// `J(u) = L + Σ_m J⁽ᵐ⁾(u)`.
    pub fn jacobian(&self, u: &[f64]) -> Result<DenseMatrix> {
        Evaluator::new(self).jacobian(u)
    }

    /// Rebuilds `f(u)` from `jac = J(u)` without evaluating the top-degree term.
    pub fn residual_via_jacobian(&self, u: &[f64], jac: &DenseMatrix) -> Result<Vec<f64>> {
        Evaluator::new(self).residual_via_jacobian(u, jac)
    }

    /// Largest relative defect of `J⁽ᵐ⁾(u)·u = m·N⁽ᵐ⁾(u)` over all terms:
    /// `max_m ‖J⁽ᵐ⁾u − m N⁽ᵐ⁾‖∞ / (1 + ‖m N⁽ᵐ⁾‖∞)`. Zero without terms.
    pub fn euler_identity_defect(&self, u: &[f64]) -> Result<f64> {
        check_len(u, self.n)?;
        let mut worst = 0.0_f64;
        for term in &self.terms {
            let ju = term.jacobian(u)?.mul_vec(u)?;
            let scaled: Vec<f64> = term.eval(u)?.iter().map(|v| v * term.degree as f64).collect();
            let diff = ju
                .iter()
                .zip(&scaled)
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
            worst = worst.max(diff / (1.0 + norm_inf(&scaled)));
        }
        Ok(worst)
    }
}

/// The pieces of `f(u)` the function-free step needs once the top degree
/// `p` is peeled off: `L·u` and `Σ_{m<p} (p−m)·N⁽ᵐ⁾(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionFreeParts {
    pub top_degree: usize,
    pub linear: Vec<f64>,
    pub weighted_lower: Vec<f64>,
}

impl FunctionFreeParts {
    /// `(1/p)·J·u + ((p−1)/p)·L·u + (1/p)·Σ_{m<p}(p−m)N⁽ᵐ⁾ + b`, given `ju = J(u)·u`.
    pub fn residual(&self, ju: &[f64], constant: &[f64]) -> Vec<f64> {
        let p = self.top_degree as f64;
        (0..ju.len())
            .map(|i| (ju[i] + (p - 1.0) * self.linear[i] + self.weighted_lower[i]) / p + constant[i])
            .collect()
    }

    /// `(p−1)·L·u + Σ_{m<p}(p−m)N⁽ᵐ⁾ + p·b`.
    pub fn step_rhs(&self, constant: &[f64]) -> Vec<f64> {
        let p = self.top_degree as f64;
        (0..constant.len())
            .map(|i| (p - 1.0) * self.linear[i] + self.weighted_lower[i] + p * constant[i])
            .collect()
    }
}

/// A counting view of a system, owned by one solver run.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    sys: &'a PolynomialSystem,
    counters: EvalCounters,
}

impl<'a> Evaluator<'a> {
    pub fn new(sys: &'a PolynomialSystem) -> Self {
        Self {
            sys,
            counters: EvalCounters::for_degrees(sys.degrees()),
        }
    }

    pub fn system(&self) -> &'a PolynomialSystem {
        self.sys
    }

    pub fn counters(&self) -> &EvalCounters {
        &self.counters
    }

    pub fn into_counters(self) -> EvalCounters {
        self.counters
    }

    pub fn homogeneous(&mut self, term: &HomogeneousTerm, u: &[f64]) -> Result<Vec<f64>> {
        let out = term.eval(u)?;
        self.counters.bump_homogeneous(term.degree);
        Ok(out)
    }

    pub fn residual(&mut self, u: &[f64]) -> Result<Vec<f64>> {
        let mut f = self.sys.linear_apply(u)?;
        for term in self.sys.terms() {
            let nm = self.homogeneous(term, u)?;
            add_assign(&mut f, &nm);
        }
        add_assign(&mut f, self.sys.constant());
        self.counters.residual_evaluations += 1;
        Ok(f)
    }

    pub fn jacobian(&mut self, u: &[f64]) -> Result<DenseMatrix> {
        check_len(u, self.sys.n)?;
        let mut jac = self.sys.linear_dense();
        for term in self.sys.terms() {
            term.add_jacobian_into(u, &mut jac)?;
        }
        self.counters.jacobian_assemblies += 1;
        Ok(jac)
    }

    /// Matrix-free `J(u)·v`.
    pub fn jacobian_vector_product(&mut self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.sys.linear_apply(v)?;
        for term in self.sys.terms() {
            add_assign(&mut out, &term.jacobian_vector_product(u, v)?);
        }
        self.counters.jacobian_vector_products += 1;
        Ok(out)
    }

    /// Evaluates only the terms of degree below the top degree.
    pub fn function_free_parts(&mut self, u: &[f64]) -> Result<FunctionFreeParts> {
        let p = self.sys.top_degree();
        if p < 2 {
            return Err(Error::NoNonlinearTerm);
        }
        let linear = self.sys.linear_apply(u)?;
        let mut weighted_lower = vec![0.0; self.sys.n];
        for term in self.sys.terms().iter().filter(|t| t.degree < p) {
            let nm = self.homogeneous(term, u)?;
            let w = (p - term.degree) as f64;
            for (acc, v) in weighted_lower.iter_mut().zip(nm) {
                *acc += w * v;
            }
        }
        Ok(FunctionFreeParts {
            top_degree: p,
            linear,
            weighted_lower,
        })
    }

    /// `f(u)` reconstructed from `ju = J(u)·u` and precomputed parts.
    pub fn reconstruct_residual(&mut self, parts: &FunctionFreeParts, ju: &[f64]) -> Result<Vec<f64>> {
        check_len(ju, self.sys.n)?;
        self.counters.residual_reconstructions += 1;
        Ok(parts.residual(ju, self.sys.constant()))
    }

    pub fn residual_via_jacobian(&mut self, u: &[f64], jac: &DenseMatrix) -> Result<Vec<f64>> {
        check_square(jac, self.sys.n)?;
        let parts = self.function_free_parts(u)?;
        let ju = jac.mul_vec(u)?;
        self.reconstruct_residual(&parts, &ju)
    }

    pub fn factor(&mut self, jac: &DenseMatrix) -> Result<LuFactorization> {
        check_square(jac, self.sys.n)?;
        self.counters.factorizations += 1;
        LuFactorization::new(jac)
    }

    pub fn solve(&mut self, lu: &LuFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
        self.counters.linear_solves += 1;
        lu.solve(rhs)
    }
}

fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, n })
    }
}

pub(crate) fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        })
    }
}

fn check_square(m: &DenseMatrix, n: usize) -> Result<()> {
    if m.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    if m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    Ok(())
}
