//! Q2SAT instances with identical clauses: generation, component structure,
//! the classical product-state baseline, and file round-tripping.
//!
//! Every clause projects onto |Φ⟩ = α|1ₐ0ᵦ⟩ + β|0ₐ1ᵦ⟩ acting on an ordered
//! qubit pair (a, b) with a < b; α = √(1 − |β|²) is taken real non-negative
//! (the phase of α is ignored). The all-|0⟩ and all-|1⟩ product states satisfy
//! every such clause, so instances of this family are always satisfiable.

use crate::{fmt_f64, C64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::io::Write;
use std::path::Path;

/// Residual tolerance for the product-state baseline solver.
pub const PRODUCT_RESIDUAL_TOL: f64 = 1e-12;

/// Clause parameters shared by every projector of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseParams {
    /// Amplitude of |0ₐ1ᵦ⟩; |β| ≤ 1. May be complex.
    pub beta: C64,
    /// Overall coupling Δ > 0 multiplying every projector.
    pub delta: f64,
}

impl ClauseParams {
    pub fn new(beta: C64, delta: f64) -> Result<Self> {
        if !(beta.norm() <= 1.0 + 1e-15) || !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(Error::invalid(format!("|beta| = {} out of range [0, 1]", beta.norm())));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::invalid(format!("delta = {delta} must be positive")));
        }
        Ok(ClauseParams { beta, delta })
    }

    /// The paper's worst case β = α = 1/√2 at Δ = 1, the default everywhere.
    pub fn symmetric() -> Self {
        ClauseParams {
            beta: C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            delta: 1.0,
        }
    }

    /// α = √(1 − |β|²), real and non-negative by convention.
    pub fn alpha(&self) -> f64 {
        (1.0 - self.beta.norm_sqr()).max(0.0).sqrt()
    }
}

/// A Q2SAT problem graph: n qubits, m identical clauses on ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Q2SATInstance {
    /// Qubit count, n ≥ 2.
    pub n: usize,
    /// Ordered, duplicate-free edge list; every (a, b) satisfies a < b < n.
    /// Kept sorted lexicographically.
    pub edges: Vec<(usize, usize)>,
    pub clause: ClauseParams,
    /// Generation seed (provenance; 0 for hand-built instances).
    pub seed: u64,
    /// Generation edge probability d (metadata).
    pub density: f64,
}

impl Q2SATInstance {
    /// Validates and canonicalizes (sorts edges) a hand-built instance.
    pub fn new(
        n: usize,
        mut edges: Vec<(usize, usize)>,
        clause: ClauseParams,
        seed: u64,
        density: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("n = {n} must be at least 2")));
        }
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop ({a}, {b})")));
            }
            if a > b || b >= n {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) must satisfy a < b < n = {n}"
                )));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge".to_string()));
        }
        Ok(Q2SATInstance { n, edges, clause, seed, density })
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Index of the all-|1⟩ trivial solution.
    pub fn all_ones_index(&self) -> usize {
        self.dim() - 1
    }

    /// Adjacency lists with sorted neighbor order (deterministic traversals).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Draws each of the n(n−1)/2 unordered pairs independently with probability
/// `d`, in lexicographic pair order, from a ChaCha8 stream seeded by `seed`.
/// Identical inputs give identical instances on every platform.
pub fn generate_instance(n: usize, d: f64, clause: ClauseParams, seed: u64) -> Result<Q2SATInstance> {
    if n < 2 {
        return Err(Error::invalid(format!("n = {n} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::invalid(format!("d = {d} must lie in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            // One draw per pair even when d = 0 or 1, keeping the stream
            // position independent of d.
            let u: f64 = rng.gen();
            if u < d {
                edges.push((a, b));
            }
        }
    }
    Ok(Q2SATInstance { n, edges, clause, seed, density: d })
}

/// Connected components as sorted vertex sets, ordered by smallest member.
/// Isolated qubits form singleton components.
pub fn connected_components(inst: &Q2SATInstance) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..inst.n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for &(a, b) in &inst.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); inst.n];
    for v in 0..inst.n {
        let r = find(&mut parent, v);
        groups[r].push(v);
    }
    groups.retain(|g| !g.is_empty());
    groups.sort_by_key(|g| g[0]);
    groups
}

/// One normalized single-qubit state (u, v) per qubit: |ψ⟩ = u|0⟩ + v|1⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAssignment {
    pub states: Vec<(C64, C64)>,
}

impl ProductAssignment {
    /// ⟨Φⱼ|ψₐ⊗ψᵦ⟩ = α* vₐ uᵦ + β* uₐ vᵦ for each clause, in edge order.
    pub fn residuals(&self, inst: &Q2SATInstance) -> Vec<f64> {
        let alpha = C64::new(inst.clause.alpha(), 0.0);
        let beta = inst.clause.beta;
        inst.edges
            .iter()
            .map(|&(a, b)| {
                let (ua, va) = self.states[a];
                let (ub, vb) = self.states[b];
                (alpha.conj() * va * ub + beta.conj() * ua * vb).norm()
            })
            .collect()
    }

    pub fn max_residual(&self, inst: &Q2SATInstance) -> f64 {
        self.residuals(inst).into_iter().fold(0.0, f64::max)
    }
}

/// Reserved for a future general-clause extension; unreachable for the
/// identical-clause family, which always admits the all-zero assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub component_root: usize,
}

fn normalize_with_sign(u: C64, v: C64) -> (C64, C64) {
    let norm = (u.norm_sqr() + v.norm_sqr()).sqrt();
    let (mut u, mut v) = (u / norm, v / norm);
    // Fix the global phase: first component of significant magnitude is made
    // real positive, so propagated states compare literally across runs.
    let lead = if u.norm() > 1e-14 { u } else { v };
    let phase = lead / lead.norm();
    u /= phase;
    v /= phase;
    (u, v)
}

/// Classical baseline: seeds one qubit per component with `seed_state` and
/// propagates the orthogonality constraint α*·vₐ·uᵦ + β*·uₐ·vᵦ = 0 breadth
/// first. An inconsistent revisit restarts the component from all-|0⟩, which
/// satisfies every clause of this family, so the solver cannot fail.
pub fn product_solve_with_seed(
    inst: &Q2SATInstance,
    seed_state: (C64, C64),
) -> std::result::Result<ProductAssignment, Conflict> {
    let adj = inst.adjacency();
    let alpha = C64::new(inst.clause.alpha(), 0.0);
    let beta = inst.clause.beta;
    let zero_state = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let mut states: Vec<Option<(C64, C64)>> = vec![None; inst.n];

    for comp in connected_components(inst) {
        let root = comp[0];
        'attempt: for &start in &[seed_state, zero_state] {
            for &v in &comp {
                states[v] = None;
            }
            states[root] = Some(normalize_with_sign(start.0, start.1));
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                let (ua, va) = states[a].unwrap();
                for &b in &adj[a] {
                    match states[b] {
                        None => {
                            // The clause lives on the ordered pair (lo, hi):
                            // α*·v_lo·u_hi + β*·u_lo·v_hi = 0. Solving for the
                            // unassigned endpoint depends on which side we
                            // propagate from.
                            let (lo, _hi) = (a.min(b), a.max(b));
                            let proposed = if lo == a {
                                // a = lo known, solve for b = hi.
                                (-beta.conj() * ua, alpha.conj() * va)
                            } else {
                                // a = hi known, solve for b = lo.
                                (alpha.conj() * ua, -beta.conj() * va)
                            };
                            let (pu, pv) = proposed;
                            let state = if pu.norm() + pv.norm() < 1e-14 {
                                // Constraint auto-satisfied (degenerate clause
                                // and state); any state works.
                                zero_state
                            } else {
                                normalize_with_sign(pu, pv)
                            };
                            states[b] = Some(state);
                            queue.push_back(b);
                        }
                        Some((ub, vb)) => {
                            let (lo, hi) = (a.min(b), a.max(b));
                            let (ul, vl) = states[lo].unwrap();
                            let (uh, vh) = states[hi].unwrap();
                            let _ = (ub, vb, hi);
                            let res = (alpha.conj() * vl * uh + beta.conj() * ul * vh).norm();
                            if res > PRODUCT_RESIDUAL_TOL {
                                if start == zero_state {
                                    // Cannot happen for Eq.-type identical
                                    // clauses; kept for the general extension.
                                    return Err(Conflict { component_root: root });
                                }
                                continue 'attempt;
                            }
                        }
                    }
                }
            }
            break 'attempt;
        }
    }

    Ok(ProductAssignment {
        states: states.into_iter().map(|s| s.unwrap()).collect(),
    })
}

/// [`product_solve_with_seed`] with the default seed state (|0⟩+|1⟩)/√2,
/// which exercises genuine propagation instead of the trivial assignment.
pub fn product_solve(inst: &Q2SATInstance) -> std::result::Result<ProductAssignment, Conflict> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    product_solve_with_seed(inst, (C64::new(s, 0.0), C64::new(s, 0.0)))
}

/// Serializes an instance. Floats carry 17 significant digits; edges are
/// written sorted, so identical instances produce identical bytes.
pub fn instance_to_string(inst: &Q2SATInstance) -> String {
    let mut edges = String::new();
    for (i, &(a, b)) in inst.edges.iter().enumerate() {
        if i > 0 {
            edges.push_str(", ");
        }
        edges.push_str(&format!("[{a}, {b}]"));
    }
    format!(
        "{{\n  \"n\": {},\n  \"edges\": [{}],\n  \"beta\": {{\"re\": {}, \"im\": {}}},\n  \"delta\": {},\n  \"seed\": {},\n  \"density\": {}\n}}\n",
        inst.n,
        edges,
        fmt_f64(inst.clause.beta.re),
        fmt_f64(inst.clause.beta.im),
        fmt_f64(inst.clause.delta),
        inst.seed,
        fmt_f64(inst.density),
    )
}

pub fn write_instance(inst: &Q2SATInstance, path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(instance_to_string(inst).as_bytes())?;
    Ok(())
}

#[derive(Deserialize)]
struct RawComplex {
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct RawInstance {
    n: i64,
    edges: Vec<Vec<i64>>,
    beta: RawComplex,
    delta: f64,
    seed: u64,
    density: f64,
}

/// Parses and validates an instance file, naming the offending field on
/// schema violations (self-loops, out-of-range β, …).
pub fn read_instance_str(text: &str) -> Result<Q2SATInstance> {
    let raw: RawInstance = serde_json::from_str(text)?;
    if raw.n < 2 {
        return Err(Error::parse("n", format!("{} is below the minimum 2", raw.n)));
    }
    let n = raw.n as usize;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (j, e) in raw.edges.iter().enumerate() {
        let field = format!("edges[{j}]");
        if e.len() != 2 {
            return Err(Error::parse(field, format!("expected a pair, got {} entries", e.len())));
        }
        let (a, b) = (e[0], e[1]);
        if a == b {
            return Err(Error::parse(field, format!("self-loop ({a}, {a})")));
        }
        if a < 0 || b < 0 || a as usize >= n || b as usize >= n {
            return Err(Error::parse(field, format!("endpoint out of range [0, {n})")));
        }
        let (a, b) = (a as usize, b as usize);
        edges.push((a.min(b), a.max(b)));
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::parse("edges", format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
    }
    let beta = C64::new(raw.beta.re, raw.beta.im);
    if beta.norm() > 1.0 + 1e-12 {
        return Err(Error::parse("beta", format!("beta out of range: |beta| = {}", beta.norm())));
    }
    if !(raw.delta > 0.0) {
        return Err(Error::parse("delta", format!("{} is not positive", raw.delta)));
    }
    if !(0.0..=1.0).contains(&raw.density) {
        return Err(Error::parse("density", format!("{} outside [0, 1]", raw.density)));
    }
    Ok(Q2SATInstance {
        n,
        edges,
        clause: ClauseParams { beta, delta: raw.delta },
        seed: raw.seed,
        density: raw.density,
    })
}

pub fn read_instance(path: &Path) -> Result<Q2SATInstance> {
    read_instance_str(&std::fs::read_to_string(path)?)
}
