//! Ground space, degeneracy, and spectral gap of H₀, sector by sector.
//!
//! Two routes are kept deliberately independent:
//!
//! * [`dense_spectrum`] — full dense Hermitian eigendecomposition, the oracle,
//!   guarded to small dimensions.
//! * [`ground_and_gap`] — the production path. Each Sz sector is solved either
//!   by a dense eigensolve of its block (small sectors) or, above the size
//!   cap, by kernel-deflated Lanczos with full reorthogonalization: the ground
//!   space of H₀ = Δ·ΣΠⱼ is its null space, which factorizes exactly over
//!   graph components (ker ⊗ ker), so the per-sector ground count and basis
//!   come from small per-component solves and the first excited level from a
//!   Lanczos run on the deflated complement.
//!
//! Ground energy is exactly 0 in projector form; eigenvalues below
//! `degeneracy_tol` count as ground, and anything in the ambiguity band
//! [tol, 100·tol) flags the result instead of silently picking a side.

use crate::instance::{connected_components, Q2SATInstance};
use crate::sector::{binomial, dense_sector_block, dense_sector_block_real, sector_states, SectorBlock};
use crate::sparse::SparseHamiltonian;
use crate::state::StateVector;
use crate::{C64, Error, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which per-sector solver `ground_and_gap` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense below `dense_sector_cap`, deflated Lanczos above.
    Auto,
    /// Dense sector eigendecomposition everywhere (oracle-grade).
    DenseSector,
    /// Kernel-deflated Lanczos everywhere (the iterative path).
    Deflated,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Auto => write!(f, "auto"),
            Method::DenseSector => write!(f, "dense"),
            Method::Deflated => write!(f, "iterative"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub method: Method,
    /// Eigenvalues below `degeneracy_tol_factor`·Δ count as ground states.
    pub degeneracy_tol_factor: f64,
    /// Gaps below `exclusion_tol_factor`·Δ are reported as excluded (None).
    pub exclusion_tol_factor: f64,
    /// Dimension guard for `dense_spectrum`.
    pub dense_guard_dim: usize,
    /// Sector size above which Auto switches to the deflated solver.
    pub dense_sector_cap: usize,
    /// Largest component Hilbert-space dimension solved densely when
    /// building structural kernels.
    pub component_dim_cap: usize,
    /// Lanczos iteration cap per restart.
    pub max_iterations: usize,
    /// Lanczos restarts before giving up.
    pub max_restarts: usize,
    /// Assemble the ground basis (skippable for gap-only ensemble runs).
    pub want_basis: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            method: Method::Auto,
            degeneracy_tol_factor: 1e-9,
            exclusion_tol_factor: 1e-7,
            dense_guard_dim: 1 << 12,
            dense_sector_cap: 1024,
            component_dim_cap: 1 << 13,
            max_iterations: 400,
            max_restarts: 3,
            want_basis: true,
        }
    }
}

impl SpectrumOptions {
    pub fn gap_only(mut self) -> Self {
        self.want_basis = false;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

/// Tolerances actually used by a run, echoed into the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub degeneracy: f64,
    pub exclusion: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Smallest eigenvalue found (0 up to numerical noise in projector form).
    pub ground_energy: f64,
    /// First excited level minus ground energy; None when the instance has no
    /// excited level at all (m = 0: every state is a solution).
    pub gap_delta: Option<f64>,
    /// Dimension g of the ground manifold.
    pub degeneracy: usize,
    /// Orthonormal ground basis, sector-ordered; empty when not requested.
    pub ground_basis: Vec<StateVector>,
    /// Ground count per sector (index = magnetization sector).
    pub sector_degeneracy: Vec<usize>,
    pub method: Method,
    pub tolerances: Tolerances,
    /// True when some eigenvalue fell into the ambiguity band [tol, 100·tol):
    /// degeneracy and gap need a tighter rerun to be trusted.
    pub ambiguous: bool,
}

impl SpectrumResult {
    /// 1/δ². Zero, excluded, or absent gaps are errors (logged and skipped by
    /// ensemble drivers).
    pub fn inverse_square_gap(&self) -> Result<f64> {
        match self.gap_delta {
            Some(d) if d > self.tolerances.exclusion => Ok(1.0 / (d * d)),
            Some(d) => Err(Error::ZeroGap(d)),
            None => Err(Error::ZeroGap(0.0)),
        }
    }
}

/// Full dense eigendecomposition: all 2ⁿ eigenvalues ascending with matching
/// orthonormal eigenvectors. The oracle for the iterative path.
#[derive(Debug)]
pub struct DenseSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

pub fn dense_spectrum(h: &SparseHamiltonian, opts: &SpectrumOptions) -> Result<DenseSpectrum> {
    if h.dim > opts.dense_guard_dim {
        return Err(Error::Guard {
            what: "dense_spectrum dimension",
            got: h.dim,
            limit: opts.dense_guard_dim,
            advice: "use ground_and_gap (sector-iterative) for larger systems",
        });
    }
    let se = h.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.dim).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(h.dim, h.dim);
    for (k, &i) in order.iter().enumerate() {
        eigenvectors.set_column(k, &se.eigenvectors.column(i));
    }
    Ok(DenseSpectrum { eigenvalues, eigenvectors })
}

/// Per-sector outcome before merging.
struct SectorSolve {
    ground_count: usize,
    min_eigenvalue: f64,
    /// Lowest eigenvalue at or above the degeneracy threshold, if any.
    first_excited: Option<f64>,
    ambiguous: bool,
    /// Ground vectors in sector coordinates (dense within the sector).
    ground_vectors: Vec<Vec<C64>>,
}

fn solve_sector_dense(
    inst: &Q2SATInstance,
    states: &[usize],
    tol: f64,
    want_basis: bool,
) -> SectorSolve {
    let real = inst.clause.beta.im == 0.0;
    let (eigenvalues, vectors): (Vec<f64>, Option<DMatrix<C64>>) = if real {
        if want_basis {
            let se = dense_sector_block_real(inst, states).symmetric_eigen();
            let vals: Vec<f64> = se.eigenvalues.iter().copied().collect();
            let vecs = se.eigenvectors.map(|x| C64::new(x, 0.0));
            (vals, Some(vecs))
        } else {
            let vals = dense_sector_block_real(inst, states).symmetric_eigenvalues();
            (vals.iter().copied().collect(), None)
        }
    } else {
        let se = dense_sector_block(inst, states).symmetric_eigen();
        (se.eigenvalues.iter().copied().collect(), Some(se.eigenvectors))
    };

    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();

    let ground_count = sorted.iter().take_while(|&&w| w < tol).count();
    let ambiguous = sorted.iter().any(|&w| (tol..tol * 100.0).contains(&w));
    let first_excited = sorted.get(ground_count).copied();
    let min_eigenvalue = sorted.first().copied().unwrap_or(0.0);

    let ground_vectors = if want_basis {
        let vecs = vectors.expect("vectors requested");
        order[..ground_count]
            .iter()
            .map(|&i| vecs.column(i).iter().copied().collect())
            .collect()
    } else {
        Vec::new()
    };

    SectorSolve { ground_count, min_eigenvalue, first_excited, ambiguous, ground_vectors }
}

/// Per-component null-space bases, organized by component magnetization.
/// `vectors[k]` holds orthonormal kernel vectors of the component block in
/// the local sector with k bits set, as dense vectors over that sector's
/// local states (ascending local bitmask order).
struct ComponentKernel {
    vertices: Vec<usize>,
    vectors: Vec<Vec<Vec<C64>>>,
}

fn component_kernels(inst: &Q2SATInstance, opts: &SpectrumOptions) -> Result<Vec<ComponentKernel>> {
    let comps = connected_components(inst);
    let mut out = Vec::with_capacity(comps.len());
    for vertices in comps {
        let nc = vertices.len();
        if nc == 1 {
            // Isolated qubit: both |0> and |1> are solutions.
            out.push(ComponentKernel {
                vertices,
                vectors: vec![vec![vec![C64::new(1.0, 0.0)]], vec![vec![C64::new(1.0, 0.0)]]],
            });
            continue;
        }
        if (1usize << nc) > opts.component_dim_cap {
            return Err(Error::Guard {
                what: "component Hilbert-space dimension",
                got: 1usize << nc,
                limit: opts.component_dim_cap,
                advice: "raise component_dim_cap or use the dense-sector method",
            });
        }
        let mut local_index = vec![usize::MAX; inst.n];
        for (i, &v) in vertices.iter().enumerate() {
            local_index[v] = i;
        }
        let local_edges: Vec<(usize, usize)> = inst
            .edges
            .iter()
            .filter(|&&(a, b)| local_index[a] != usize::MAX && local_index[b] != usize::MAX)
            .map(|&(a, b)| {
                let (la, lb) = (local_index[a], local_index[b]);
                (la.min(lb), la.max(lb))
            })
            .collect();
        // Local clause orientation must follow the ORIGINAL (a < b) pair
        // order, not the relabeled one, or the projector flips α and β.
        // Relabeling by component vertex list is order-preserving (vertices
        // ascending), so min/max above is safe.
        let local = Q2SATInstance::new(nc, local_edges, inst.clause, 0, 0.0)?;
        let tol = opts.degeneracy_tol_factor * inst.clause.delta;
        let mut vectors = Vec::with_capacity(nc + 1);
        for k in 0..=nc {
            let states = sector_states(nc, k);
            let solve = solve_sector_dense(&local, &states, tol, true);
            vectors.push(solve.ground_vectors);
        }
        out.push(ComponentKernel { vertices, vectors });
    }
    Ok(out)
}

/// Tensor the per-component kernels into the global-sector kernel basis.
/// Exact: ker(Σ_c H_c) = ⊗_c ker(H_c) for disjoint positive-semidefinite
/// summands, and fixed per-component magnetizations keep orthonormality.
fn sector_kernel_from_components(
    kernels: &[ComponentKernel],
    n: usize,
    sector: usize,
    states: &[usize],
) -> Vec<Vec<C64>> {
    let mut pos = std::collections::HashMap::with_capacity(states.len() * 2);
    for (i, &s) in states.iter().enumerate() {
        pos.insert(s, i);
    }
    // Local sector state lists, cached per (component, k).
    let local_states: Vec<Vec<Vec<usize>>> = kernels
        .iter()
        .map(|ck| (0..=ck.vertices.len()).map(|k| sector_states(ck.vertices.len(), k)).collect())
        .collect();

    let mut result = Vec::new();
    // Depth-first over compositions k_c with sum = sector, then over kernel
    // vector choices, accumulating the scattered tensor product.
    fn recurse(
        kernels: &[ComponentKernel],
        local_states: &[Vec<Vec<usize>>],
        c: usize,
        remaining: usize,
        chosen: &mut Vec<(usize, usize)>, // (k_c, vector index)
        pos: &std::collections::HashMap<usize, usize>,
        dim: usize,
        out: &mut Vec<Vec<C64>>,
    ) {
        if c == kernels.len() {
            if remaining != 0 {
                return;
            }
            // Scatter the product of chosen kernel vectors into sector coords.
            let mut acc: Vec<(usize, C64)> = vec![(0usize, C64::new(1.0, 0.0))];
            for (ci, &(k, vi)) in chosen.iter().enumerate() {
                let vec_local = &kernels[ci].vectors[k][vi];
                let states_local = &local_states[ci][k];
                let mut next = Vec::with_capacity(acc.len() * vec_local.len());
                for &(bits, amp) in &acc {
                    for (si, &ls) in states_local.iter().enumerate() {
                        let a = vec_local[si];
                        if a.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut gbits = bits;
                        for (bit_i, &v) in kernels[ci].vertices.iter().enumerate() {
                            if (ls >> bit_i) & 1 == 1 {
                                gbits |= 1usize << v;
                            }
                        }
                        next.push((gbits, amp * a));
                    }
                }
                acc = next;
            }
            let mut dense = vec![C64::new(0.0, 0.0); dim];
            for (bits, amp) in acc {
                dense[pos[&bits]] += amp;
            }
            out.push(dense);
            return;
        }
        let max_k = kernels[c].vertices.len().min(remaining);
        for k in 0..=max_k {
            let count = kernels[c].vectors[k].len();
            for vi in 0..count {
                chosen.push((k, vi));
                recurse(kernels, local_states, c + 1, remaining - k, chosen, pos, dim, out);
                chosen.pop();
            }
        }
    }
    let mut chosen = Vec::new();
    recurse(kernels, &local_states, 0, sector, &mut chosen, &pos, states.len(), &mut result);
    let _ = n;
    result
}

fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let overlap: C64 = b.iter().zip(v.iter()).map(|(bi, vi)| bi.conj() * vi).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= overlap * bi;
        }
    }
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Smallest eigenvalue of the sector block restricted to the orthogonal
/// complement of `kernel`: Lanczos with full reorthogonalization and explicit
/// kernel deflation at every step.
fn lanczos_min_deflated(
    block: &SectorBlock,
    kernel: &[Vec<C64>],
    seed: u64,
    sector: usize,
    opts: &SpectrumOptions,
    delta: f64,
) -> Result<(f64, f64)> {
    let dim = block.dim();
    let free_dim = dim - kernel.len();
    debug_assert!(free_dim > 0);
    let residual_tol = 1e-11 * delta.max(1.0);

    for attempt in 0..opts.max_restarts {
        let cap = opts
            .max_iterations
            .saturating_mul(attempt + 1)
            .min(free_dim);
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (sector as u64).wrapping_mul(0x9e3779b97f4a7c15)
                ^ (attempt as u64).wrapping_mul(0xd1b54a32d192ed03),
        );
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        project_out(&mut v, kernel);
        let norm = vec_norm(&v);
        if norm < 1e-12 {
            continue; // pathological draw; reseed
        }
        for x in &mut v {
            *x /= norm;
        }

        let mut basis: Vec<Vec<C64>> = vec![v];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![C64::new(0.0, 0.0); dim];
        let mut last: Option<(f64, f64)> = None;

        for j in 0..cap {
            block.apply(&basis[j], &mut w);
            project_out(&mut w, kernel);
            let alpha: f64 = basis[j]
                .iter()
                .zip(&w)
                .map(|(b, wi)| (b.conj() * wi).re)
                .sum();
            alphas.push(alpha);
            // w -= alpha v_j + beta_{j-1} v_{j-1}, then full reorthogonalization.
            for (wi, bj) in w.iter_mut().zip(&basis[j]) {
                *wi -= alpha * bj;
            }
            if j > 0 {
                let b = betas[j - 1];
                for (wi, bp) in w.iter_mut().zip(&basis[j - 1]) {
                    *wi -= b * bp;
                }
            }
            project_out(&mut w, &basis);
            let beta = vec_norm(&w);

            // Ritz check on the tridiagonal.
            let m = alphas.len();
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alphas[i];
                if i > 0 {
                    t[(i, i - 1)] = betas[i - 1];
                    t[(i - 1, i)] = betas[i - 1];
                }
            }
            let se = t.symmetric_eigen();
            let mut min_idx = 0;
            for k in 1..m {
                if se.eigenvalues[k] < se.eigenvalues[min_idx] {
                    min_idx = k;
                }
            }
            let theta = se.eigenvalues[min_idx];
            let s_last = se.eigenvectors[(m - 1, min_idx)].abs();
            let residual = beta * s_last;
            last = Some((theta, residual));

            if residual <= residual_tol || beta < 1e-13 {
                return Ok((theta, residual));
            }
            if j + 1 == cap {
                break;
            }
            let mut next = w.clone();
            for x in &mut next {
                *x /= beta;
            }
            betas.push(beta);
            basis.push(next);
        }
        if attempt + 1 == opts.max_restarts {
            let (theta, residual) = last.unwrap_or((f64::NAN, f64::INFINITY));
            // Residual meaningful but above tolerance after all restarts.
            if residual <= 1e-8 * delta.max(1.0) {
                return Ok((theta, residual));
            }
            return Err(Error::NonConvergence {
                sector,
                residual,
                iterations: cap,
            });
        }
    }
    unreachable!("restart loop returns or errors");
}

fn solve_sector_deflated(
    inst: &Q2SATInstance,
    states: &[usize],
    kernels: &[ComponentKernel],
    sector: usize,
    opts: &SpectrumOptions,
) -> Result<SectorSolve> {
    let kernel = sector_kernel_from_components(kernels, inst.n, sector, states);
    let ground_count = kernel.len();
    let dim = states.len();
    if ground_count == dim {
        return Ok(SectorSolve {
            ground_count,
            min_eigenvalue: 0.0,
            first_excited: None,
            ambiguous: false,
            ground_vectors: kernel,
        });
    }
    let block = SectorBlock::new(inst, states.to_vec());
    let (theta, _residual) =
        lanczos_min_deflated(&block, &kernel, inst.seed, sector, opts, inst.clause.delta)?;
    let tol = opts.degeneracy_tol_factor * inst.clause.delta;
    let ambiguous = (tol..tol * 100.0).contains(&theta);
    Ok(SectorSolve {
        ground_count,
        min_eigenvalue: if ground_count > 0 { 0.0 } else { theta },
        first_excited: Some(theta),
        ambiguous,
        ground_vectors: kernel,
    })
}

/// Computes ground energy, degeneracy, gap, and (optionally) the orthonormal
/// ground basis by solving each Sz sector independently and merging in sector
/// order.
pub fn ground_and_gap(inst: &Q2SATInstance, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    let delta = inst.clause.delta;
    let tol = opts.degeneracy_tol_factor * delta;
    let needs_kernels = match opts.method {
        Method::Deflated => true,
        Method::DenseSector => false,
        Method::Auto => (0..=inst.n).any(|k| binomial(inst.n, k) > opts.dense_sector_cap),
    };
    let kernels = if needs_kernels { Some(component_kernels(inst, opts)?) } else { None };

    let mut ground_energy = f64::INFINITY;
    let mut gap_candidate = f64::INFINITY;
    let mut degeneracy = 0usize;
    let mut sector_degeneracy = vec![0usize; inst.n + 1];
    let mut ambiguous = false;
    let mut ground_basis = Vec::new();

    for sector in 0..=inst.n {
        let states = sector_states(inst.n, sector);
        let use_deflated = match opts.method {
            Method::Deflated => true,
            Method::DenseSector => false,
            Method::Auto => states.len() > opts.dense_sector_cap,
        };
        let solve = if use_deflated {
            solve_sector_deflated(inst, &states, kernels.as_ref().unwrap(), sector, opts)?
        } else {
            solve_sector_dense(inst, &states, tol, opts.want_basis)
        };
        ground_energy = ground_energy.min(solve.min_eigenvalue);
        if let Some(e) = solve.first_excited {
            gap_candidate = gap_candidate.min(e);
        }
        degeneracy += solve.ground_count;
        sector_degeneracy[sector] = solve.ground_count;
        ambiguous |= solve.ambiguous;
        if opts.want_basis {
            for v in solve.ground_vectors {
                let mut amps = vec![C64::new(0.0, 0.0); inst.dim()];
                for (i, &s) in states.iter().enumerate() {
                    amps[s] = v[i];
                }
                ground_basis.push(StateVector::from_amps(amps));
            }
        }
    }

    let gap_delta = if gap_candidate.is_finite() {
        Some(gap_candidate - ground_energy)
    } else {
        None
    };

    Ok(SpectrumResult {
        ground_energy: if ground_energy.is_finite() { ground_energy } else { 0.0 },
        gap_delta,
        degeneracy,
        ground_basis,
        sector_degeneracy,
        method: opts.method,
        tolerances: Tolerances {
            degeneracy: tol,
            exclusion: opts.exclusion_tol_factor * delta,
        },
        ambiguous,
    })
}

/// Per-instance result record for CSV/JSON emission.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub seed: u64,
    pub m: usize,
    pub ground_energy: f64,
    pub degeneracy: usize,
    pub gap_delta: Option<f64>,
    pub inv_sq_gap: Option<f64>,
    pub method: String,
    pub wall_time_ms: f64,
}

impl InstanceRecord {
    pub fn from_result(inst: &Q2SATInstance, res: &SpectrumResult, wall_time_ms: f64) -> Self {
        InstanceRecord {
            n: inst.n,
            seed: inst.seed,
            m: inst.m(),
            ground_energy: res.ground_energy,
            degeneracy: res.degeneracy,
            gap_delta: res.gap_delta,
            inv_sq_gap: res.inverse_square_gap().ok(),
            method: res.method.to_string(),
            wall_time_ms,
        }
    }
}
