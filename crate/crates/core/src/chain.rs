//! One-dimensional chain special case: the one-magnon band and the O(n⁻²)
//! closing of the gap at β = √2/2.
//!
//! Two dispersion routes coexist on purpose. `reference_dispersion` hard-codes
//! the two published limiting formulas verbatim; `dispersion` evaluates the
//! band actually generated by the chain Hamiltonian, E(k) = Δ(1 + 2αβ cos k)
//! (exact for the translation-invariant ring, where every bond is oriented
//! i → i+1 mod n). The two agree at β = √2/2 and disagree as β → 0 — the
//! published small-β form does not describe this Hamiltonian; `one_magnon_gap`
//! always reports the computed spectrum.
//!
//! Instances built by [`chain_instance`] keep the a < b edge ordering, which
//! reverses the clause orientation on the wrap bond; at β = √2/2 the clause is
//! symmetric and the orientation is irrelevant, while for small β the reversed
//! bond hosts a near-zero boundary mode (covered by tests).

use crate::instance::{ClauseParams, Q2SATInstance};
use crate::{C64, Error, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub n: usize,
    /// Real clause amplitude in [0, 1] (the chain analysis assumes real β).
    pub beta: f64,
    pub delta: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(n: usize, beta: f64, delta: f64, boundary: Boundary) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("chain length {n} must be at least 2")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::invalid(format!("beta = {beta} outside [0, 1]")));
        }
        if !(delta > 0.0) {
            return Err(Error::invalid(format!("delta = {delta} must be positive")));
        }
        Ok(ChainSpec { n, beta, delta, boundary })
    }

    pub fn alpha(&self) -> f64 {
        (1.0 - self.beta * self.beta).max(0.0).sqrt()
    }
}

/// The chain as a Q2SAT instance (edges (i, i+1), wrap bond stored (0, n−1)).
pub fn chain_instance(spec: &ChainSpec) -> Result<Q2SATInstance> {
    let clause = ClauseParams::new(C64::new(spec.beta, 0.0), spec.delta)?;
    let mut edges: Vec<(usize, usize)> = (0..spec.n - 1).map(|i| (i, i + 1)).collect();
    if spec.boundary == Boundary::Periodic {
        if spec.n == 2 {
            return Err(Error::invalid("periodic chain needs n >= 3"));
        }
        edges.push((0, spec.n - 1));
    }
    Q2SATInstance::new(spec.n, edges, clause, 0, 0.0)
}

/// Published limiting forms of the one-magnon band (kept verbatim as
/// reference formulas; see the module docs for their status).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionLimit {
    /// β → 0: E_k = Δ(1/2 − 2β cos k).
    SmallBeta,
    /// β = √2/2: E_k = Δ(1 + cos k).
    SymmetricPoint,
}

pub fn reference_dispersion(limit: DispersionLimit, beta: f64, k: f64, delta: f64) -> f64 {
    match limit {
        DispersionLimit::SmallBeta => delta * (0.5 - 2.0 * beta * k.cos()),
        DispersionLimit::SymmetricPoint => delta * (1.0 + k.cos()),
    }
}

/// Computed one-magnon band of the translation-invariant ring:
/// E(k) = Δ(1 + 2αβ cos k). Reduces to the published formula at β = √2/2.
pub fn dispersion(beta: f64, k: f64, delta: f64) -> f64 {
    let alpha = (1.0 - beta * beta).max(0.0).sqrt();
    delta * (1.0 + 2.0 * alpha * beta * k.cos())
}

/// n×n block of the chain Hamiltonian on single-flip states |1ᵢ⟩ relative to
/// the all-|0⟩ reference.
pub fn one_magnon_block(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    let inst = chain_instance(spec)?;
    let (alpha, beta, delta) = (spec.alpha(), spec.beta, spec.delta);
    let mut m = DMatrix::zeros(spec.n, spec.n);
    for &(a, b) in &inst.edges {
        // |1_a>: bond (a,b) sees the (1,0) pattern -> alpha^2 diagonal;
        // |1_b>: the (0,1) pattern -> beta^2; they mix with amplitude alpha*beta.
        m[(a, a)] += delta * alpha * alpha;
        m[(b, b)] += delta * beta * beta;
        m[(a, b)] += delta * alpha * beta;
        m[(b, a)] += delta * alpha * beta;
    }
    Ok(m)
}

/// Lowest one-magnon eigenvalue above the ground manifold (threshold
/// 1e−9·Δ, matching the spectrum module's degeneracy rule).
pub fn one_magnon_gap(spec: &ChainSpec) -> Result<f64> {
    let m = one_magnon_block(spec)?;
    let tol = 1e-9 * spec.delta;
    let mut w: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    w.sort_by(f64::total_cmp);
    w.into_iter()
        .find(|&x| x >= tol)
        .ok_or_else(|| Error::ZeroGap(0.0))
}

/// (n, beta, boundary, gap) rows over a length grid, CSV-ready.
pub fn gap_law_rows(ns: &[usize], beta: f64, delta: f64, boundary: Boundary) -> Result<Vec<(usize, f64)>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let spec = ChainSpec::new(n, beta, delta, boundary)?;
        rows.push((n, one_magnon_gap(&spec)?));
    }
    Ok(rows)
}
