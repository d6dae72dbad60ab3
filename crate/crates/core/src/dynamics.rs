//! Time-dependent Schrödinger integration along the adiabatic rotation and
//! measurement of the final state against the ground manifold.
//!
//! Two independent integrators cross-check each other:
//!
//! * [`evolve_lab`] — classical fourth-order Runge–Kutta on
//!   i·dψ/dt = H(t)ψ in the lab frame, fixed step T/steps, no mid-run
//!   renormalization (norm drift is the error meter).
//! * [`evolve_rotating`] — the frame φ = R†(t)ψ evolves under the constant
//!   generator H₀ + (2π/T)·Σₐ s^n̂ₐ; propagated by dense eigendecomposition
//!   (small systems) or Lanczos exponential stepping, then mapped back with
//!   R(T) = (−1)ⁿ.
//!
//! The closed path guarantees H(T) = H₀, so measuring against the t = 0
//! ground basis is exact.

use crate::hamiltonian::{total_spin_along, RotatingHamiltonian, RotationSchedule};
use crate::sparse::SparseHamiltonian;
use crate::spectrum::SpectrumResult;
use crate::state::StateVector;
use crate::{C64, Error, Result};

pub use crate::state::orthonormality_defect;

/// Norm drift beyond this aborts an evolution with advice to raise `steps`.
pub const NORM_DRIFT_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    Rotating,
}

impl std::fmt::Display for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Frame::Lab => write!(f, "lab"),
            Frame::Rotating => write!(f, "rotating"),
        }
    }
}

/// T = multiplier·π/(50δ²), axis y, the §V schedule at multiplier 1.
pub fn schedule_from_gap(delta: f64, multiplier: f64) -> Result<RotationSchedule> {
    if !(delta > 0.0) {
        return Err(Error::invalid(format!("gap delta = {delta} must be positive")));
    }
    if !(multiplier > 0.0) {
        return Err(Error::invalid(format!("multiplier = {multiplier} must be positive")));
    }
    RotationSchedule::y_axis(multiplier * std::f64::consts::PI / (50.0 * delta * delta))
}

/// Step-size rule: steps = ceil(max(2000, 20·T·‖H₀‖_bound + 20·2π·n)) with
/// ‖H₀‖_bound = m·Δ. Resolves both the energy scale and the rotation rate.
pub fn default_step_count(total_time: f64, m: usize, delta: f64, n: usize) -> usize {
    let h_bound = m as f64 * delta;
    let needed = 20.0 * total_time * h_bound + 20.0 * 2.0 * std::f64::consts::PI * n as f64;
    needed.max(2000.0).ceil() as usize
}

/// Mid-evolution diagnostic sample.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Checkpoint {
    pub t: f64,
    pub norm: f64,
    /// ⟨ψ|H(t)|ψ⟩/‖ψ‖².
    pub energy: f64,
    /// 1 − (projection onto the instantaneous ground space R(t)·basis).
    pub leakage: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub final_state: StateVector,
    /// Σₖ |⟨ψₖ|ψ(T)⟩|² over the ground basis (ψ(T) not renormalized).
    pub ground_fidelity: f64,
    /// |⟨ψₖ|ψ(T)⟩|² per ground-basis member, basis order.
    pub probabilities: Vec<f64>,
    /// |⟨00…0|ψ(T)⟩|² + |⟨11…1|ψ(T)⟩|², measured against the computational
    /// basis directly (gauge-independent).
    pub trivial_probability: f64,
    pub schedule: RotationSchedule,
    pub step_count: usize,
    pub frame: Frame,
    /// |‖ψ(T)‖ − 1|.
    pub norm_drift: f64,
    pub checkpoints: Vec<Checkpoint>,
}

/// probabilities_k = |⟨ψₖ|ψ⟩|² plus the trivial-state weight. The basis must
/// be orthonormal; trivial probability always refers to |00…0⟩ and |11…1⟩,
/// never to whatever basis the eigensolver picked inside the degenerate space.
pub fn measure_against_basis(
    psi: &StateVector,
    basis: &[StateVector],
) -> Result<(Vec<f64>, f64)> {
    let mut probabilities = Vec::with_capacity(basis.len());
    for b in basis {
        probabilities.push(b.inner(psi)?.norm_sqr());
    }
    let dim = psi.dim();
    let trivial = psi.amps[0].norm_sqr() + psi.amps[dim - 1].norm_sqr();
    Ok((probabilities, trivial))
}

fn build_result(
    final_state: StateVector,
    ground: &SpectrumResult,
    schedule: RotationSchedule,
    step_count: usize,
    frame: Frame,
    checkpoints: Vec<Checkpoint>,
) -> Result<EvolutionResult> {
    let norm_drift = (final_state.norm() - 1.0).abs();
    let (probabilities, trivial_probability) =
        measure_against_basis(&final_state, &ground.ground_basis)?;
    let ground_fidelity = probabilities.iter().sum();
    Ok(EvolutionResult {
        final_state,
        ground_fidelity,
        probabilities,
        trivial_probability,
        schedule,
        step_count,
        frame,
        norm_drift,
        checkpoints,
    })
}

/// Lab-frame RK4 integration of i·dψ/dt = H(t)ψ.
///
/// `steps` overrides the default step rule; `checkpoint_count` requests that
/// many evenly spaced diagnostics rows. Errors if the final norm drift
/// exceeds [`NORM_DRIFT_LIMIT`].
pub fn evolve_lab(
    rot: &RotatingHamiltonian,
    psi0: &StateVector,
    ground: &SpectrumResult,
    steps: Option<usize>,
    checkpoint_count: usize,
) -> Result<EvolutionResult> {
    let dim = rot.h0.dim;
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch(format!("{} vs {}", psi0.dim(), dim)));
    }
    let t_total = rot.schedule.total_time;
    let steps = steps.unwrap_or_else(|| {
        default_step_count(t_total, rot.edge_count(), 1.0, rot.n())
    });
    if steps == 0 {
        return Err(Error::invalid("steps must be positive"));
    }
    let h = t_total / steps as f64;

    let mut psi = psi0.amps.clone();
    let mut scratch = vec![C64::new(0.0, 0.0); dim];
    let mut hpsi = vec![C64::new(0.0, 0.0); dim];
    let mut k1 = vec![C64::new(0.0, 0.0); dim];
    let mut k2 = vec![C64::new(0.0, 0.0); dim];
    let mut k3 = vec![C64::new(0.0, 0.0); dim];
    let mut k4 = vec![C64::new(0.0, 0.0); dim];
    let mut tmp = vec![C64::new(0.0, 0.0); dim];
    let mi = C64::new(0.0, -1.0);

    let mut checkpoints = Vec::new();
    let checkpoint_every = if checkpoint_count > 0 {
        (steps / checkpoint_count).max(1)
    } else {
        usize::MAX
    };

    for step in 0..steps {
        let t = step as f64 * h;

        if checkpoint_count > 0 && step % checkpoint_every == 0 {
            checkpoints.push(make_checkpoint(rot, ground, &psi, &mut scratch, &mut hpsi, t)?);
        }

        // k1 = -i H(t) psi
        rot.apply_at(t, &psi, &mut scratch, &mut hpsi);
        for i in 0..dim {
            k1[i] = mi * hpsi[i];
            tmp[i] = psi[i] + 0.5 * h * k1[i];
        }
        // k2 = -i H(t+h/2) (psi + h/2 k1)
        rot.apply_at(t + 0.5 * h, &tmp, &mut scratch, &mut hpsi);
        for i in 0..dim {
            k2[i] = mi * hpsi[i];
            tmp[i] = psi[i] + 0.5 * h * k2[i];
        }
        // k3 = -i H(t+h/2) (psi + h/2 k2)
        rot.apply_at(t + 0.5 * h, &tmp, &mut scratch, &mut hpsi);
        for i in 0..dim {
            k3[i] = mi * hpsi[i];
            tmp[i] = psi[i] + h * k3[i];
        }
        // k4 = -i H(t+h) (psi + h k3)
        let t_next = if step + 1 == steps { t_total } else { t + h };
        rot.apply_at(t_next, &tmp, &mut scratch, &mut hpsi);
        for i in 0..dim {
            k4[i] = mi * hpsi[i];
            psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    if checkpoint_count > 0 {
        checkpoints.push(make_checkpoint(rot, ground, &psi, &mut scratch, &mut hpsi, t_total)?);
    }

    let final_state = StateVector::from_amps(psi);
    let norm_drift = (final_state.norm() - 1.0).abs();
    if norm_drift > NORM_DRIFT_LIMIT {
        return Err(Error::NormDrift { drift: norm_drift, steps });
    }
    build_result(final_state, ground, rot.schedule, steps, Frame::Lab, checkpoints)
}

fn make_checkpoint(
    rot: &RotatingHamiltonian,
    ground: &SpectrumResult,
    psi: &[C64],
    scratch: &mut [C64],
    hpsi: &mut [C64],
    t: f64,
) -> Result<Checkpoint> {
    rot.apply_at(t, psi, scratch, hpsi);
    let norm_sqr: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
    let energy: f64 = psi
        .iter()
        .zip(hpsi.iter())
        .map(|(p, hp)| (p.conj() * hp).re)
        .sum::<f64>()
        / norm_sqr;
    // Instantaneous ground space is R(t)·(t=0 basis): rotate psi back instead.
    scratch.copy_from_slice(psi);
    let mut back = StateVector::from_amps(scratch.to_vec());
    let mut rev = rot.schedule;
    rev.reverse = !rev.reverse;
    crate::hamiltonian::apply_rotation(&mut back.amps, rot.n(), &rev, t);
    let w = back.projection_weight(&ground.ground_basis)?;
    Ok(Checkpoint {
        t,
        norm: norm_sqr.sqrt(),
        energy,
        leakage: (1.0 - w / norm_sqr).max(0.0),
    })
}

/// Frame transform cross-check: evolves φ = R†ψ under the constant effective
/// generator H_eff = H₀ + (2π/T)·S^n̂ and maps back, ψ(T) = (−1)ⁿ·φ(T).
///
/// `dense_cap` selects the propagation scheme: dimensions up to the cap use a
/// dense Hermitian eigendecomposition (machine-precision), larger systems use
/// Lanczos exponential time stepping.
pub fn evolve_rotating(
    rot: &RotatingHamiltonian,
    psi0: &StateVector,
    ground: &SpectrumResult,
    dense_cap: usize,
) -> Result<EvolutionResult> {
    let dim = rot.h0.dim;
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch(format!("{} vs {}", psi0.dim(), dim)));
    }
    let n = rot.n();
    let spin = total_spin_along(n, rot.schedule.axis);
    let omega = rot.schedule.omega();
    let h_eff = rot.h0.add_scaled(&spin, C64::new(omega, 0.0))?;
    let t_total = rot.schedule.total_time;

    let mut phi = if dim <= dense_cap {
        propagate_dense(&h_eff, &psi0.amps, t_total)
    } else {
        propagate_lanczos(&h_eff, &psi0.amps, t_total)?
    };

    // R(T) = prod_a exp(2*pi*i s) = (-1)^n identity.
    if n % 2 == 1 {
        for x in &mut phi {
            *x = -*x;
        }
    }
    let final_state = StateVector::from_amps(phi);
    build_result(final_state, ground, rot.schedule, 1, Frame::Rotating, Vec::new())
}

fn propagate_dense(h: &SparseHamiltonian, psi: &[C64], t: f64) -> Vec<C64> {
    let se = h.to_dense().symmetric_eigen();
    let dim = psi.len();
    let mut coeffs = vec![C64::new(0.0, 0.0); dim];
    for k in 0..dim {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..dim {
            acc += se.eigenvectors[(r, k)].conj() * psi[r];
        }
        coeffs[k] = acc * C64::from_polar(1.0, -se.eigenvalues[k] * t);
    }
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for k in 0..dim {
        let c = coeffs[k];
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for r in 0..dim {
            out[r] += se.eigenvectors[(r, k)] * c;
        }
    }
    out
}

/// exp(−iHt)ψ by Lanczos (Hermitian Krylov) stepping: builds an m-dimensional
/// Krylov basis per substep and exponentiates the tridiagonal projection.
fn propagate_lanczos(h: &SparseHamiltonian, psi: &[C64], t_total: f64) -> Result<Vec<C64>> {
    let dim = h.dim;
    let krylov_dim = 30.min(dim);
    // Substep so that ‖H‖·dt stays moderate; spectral bound from row sums.
    let mut row_bound = 0.0f64;
    for r in 0..dim {
        let s: f64 = h.row(r).map(|(_, v)| v.norm()).sum();
        row_bound = row_bound.max(s);
    }
    let substeps = ((t_total * row_bound / 10.0).ceil() as usize).max(1);
    let dt = t_total / substeps as f64;

    let mut psi = psi.to_vec();
    let mut w = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..substeps {
        let norm0: f64 = psi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm0 < 1e-300 {
            return Err(Error::invalid("state vanished during Krylov propagation"));
        }
        let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|x| x / norm0).collect()];
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for j in 0..krylov_dim {
            h.apply_into(&basis[j], &mut w);
            let alpha: f64 = basis[j]
                .iter()
                .zip(&w)
                .map(|(b, wi)| (b.conj() * wi).re)
                .sum();
            alphas.push(alpha);
            for (wi, bj) in w.iter_mut().zip(&basis[j]) {
                *wi -= alpha * bj;
            }
            if j > 0 {
                let b: f64 = betas[j - 1];
                for (wi, bp) in w.iter_mut().zip(&basis[j - 1]) {
                    *wi -= b * bp;
                }
            }
            // Full reorthogonalization keeps the small basis clean.
            for bv in &basis {
                let ov: C64 = bv.iter().zip(w.iter()).map(|(b, wi)| b.conj() * wi).sum();
                for (wi, b) in w.iter_mut().zip(bv) {
                    *wi -= ov * b;
                }
            }
            let beta = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if beta < 1e-12 || j + 1 == krylov_dim {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
        let m = alphas.len();
        let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i > 0 {
                t[(i, i - 1)] = betas[i - 1];
                t[(i - 1, i)] = betas[i - 1];
            }
        }
        let se = t.symmetric_eigen();
        // exp(-i T dt) e1 scaled by the incoming norm.
        let mut small = vec![C64::new(0.0, 0.0); m];
        for k in 0..m {
            let phase = C64::from_polar(1.0, -se.eigenvalues[k] * dt);
            let weight = se.eigenvectors[(0, k)];
            for r in 0..m {
                small[r] += se.eigenvectors[(r, k)] * phase * weight;
            }
        }
        for x in psi.iter_mut() {
            *x = C64::new(0.0, 0.0);
        }
        for (r, base) in basis.iter().enumerate() {
            let c = small[r] * norm0;
            for (p, b) in psi.iter_mut().zip(base) {
                *p += c * b;
            }
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::RotatingHamiltonian;
    use crate::instance::{generate_instance, ClauseParams, Q2SATInstance};
    use crate::spectrum::{ground_and_gap, SpectrumOptions};
    use std::f64::consts::PI;

    fn sym() -> ClauseParams {
        ClauseParams::symmetric()
    }

    #[test]
    fn schedule_values_match_the_protocol() {
        let s = schedule_from_gap(0.2, 1.0).unwrap();
        assert!((s.total_time - PI / 2.0).abs() < 1e-12);
        let s = schedule_from_gap(1.0, 1.0).unwrap();
        assert!((s.total_time - PI / 50.0).abs() < 1e-12);
        let s = schedule_from_gap(0.2, 10.0).unwrap();
        assert!((s.total_time - 5.0 * PI).abs() < 1e-12);
        assert!(schedule_from_gap(0.0, 1.0).is_err());
        assert!(schedule_from_gap(0.3, 0.0).is_err());
    }

    #[test]
    fn step_rule_floors_at_2000() {
        assert_eq!(default_step_count(0.01, 2, 1.0, 8), 2000);
        let big = default_step_count(100.0, 5, 1.0, 8);
        assert_eq!(big, (20.0f64 * 100.0 * 5.0 + 20.0 * 2.0 * PI * 8.0).ceil() as usize);
    }

    #[test]
    fn measurement_examples() {
        let n = 3;
        let basis = vec![StateVector::all_zeros(n), StateVector::all_ones(n)];
        let psi = StateVector::all_zeros(n);
        let (probs, triv) = measure_against_basis(&psi, &basis).unwrap();
        assert_eq!(triv, 1.0);
        assert_eq!(probs, vec![1.0, 0.0]);

        // Orthogonal to the span: all zeros.
        let mut orth = StateVector::basis_state(n, 2);
        let (probs, triv) = measure_against_basis(&orth, &basis).unwrap();
        assert_eq!(probs, vec![0.0, 0.0]);
        assert_eq!(triv, 0.0);
        orth.normalize();

        // GHZ-like combination: trivial weight 1, split evenly.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut ghz = StateVector::all_zeros(n);
        ghz.amps[0] = C64::new(s, 0.0);
        ghz.amps[(1 << n) - 1] = C64::new(s, 0.0);
        let (probs, triv) = measure_against_basis(&ghz, &basis).unwrap();
        assert!((triv - 1.0).abs() < 1e-15);
        assert!((probs[0] - 0.5).abs() < 1e-15 && (probs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_keeps_the_state() {
        let inst = Q2SATInstance::new(3, vec![], sym(), 0, 0.0).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        let sched = RotationSchedule::y_axis(1.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let psi0 = StateVector::all_zeros(3);
        let lab = evolve_lab(&rot, &psi0, &ground, Some(2000), 0).unwrap();
        assert!((lab.ground_fidelity - 1.0).abs() < 1e-9);
        assert!((lab.trivial_probability + 1e-12) >= lab.final_state.amps[0].norm_sqr());
        // H = 0 in every frame: the lab state never moves.
        assert!(lab.final_state.fidelity(&psi0).unwrap() > 1.0 - 1e-10);

        let rotf = evolve_rotating(&rot, &psi0, &ground, 1 << 10).unwrap();
        // Commuting generator: frames agree to machine precision.
        assert!(rotf.final_state.fidelity(&lab.final_state).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn frames_agree_on_random_small_instances() {
        for seed in 0..8 {
            let inst = generate_instance(5, 0.3, sym(), 100 + seed).unwrap();
            let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
            let delta = match ground.gap_delta {
                Some(d) => d,
                None => continue,
            };
            let sched = schedule_from_gap(delta, 1.0).unwrap();
            let rot = RotatingHamiltonian::new(&inst, sched);
            let psi0 = StateVector::all_zeros(5);
            let lab = evolve_lab(&rot, &psi0, &ground, None, 0).unwrap();
            let rotf = evolve_rotating(&rot, &psi0, &ground, 1 << 10).unwrap();
            let fid = lab.final_state.fidelity(&rotf.final_state).unwrap();
            assert!(fid >= 1.0 - 1e-6, "seed {seed}: frame fidelity {fid}");
        }
    }

    #[test]
    fn lanczos_propagator_matches_dense() {
        let inst = generate_instance(6, 0.3, sym(), 77).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        if ground.gap_delta.is_none() {
            panic!("seed 77 should have edges");
        }
        let sched = RotationSchedule::y_axis(3.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let psi0 = StateVector::all_zeros(6);
        let dense = evolve_rotating(&rot, &psi0, &ground, 1 << 10).unwrap();
        let krylov = evolve_rotating(&rot, &psi0, &ground, 1).unwrap();
        let fid = dense.final_state.fidelity(&krylov.final_state).unwrap();
        assert!(fid > 1.0 - 1e-9, "fidelity {fid}");
    }

    #[test]
    fn adiabatic_limit_fidelity_is_nondecreasing() {
        // Base T deep enough in the adiabatic regime that the Landau-Zener
        // oscillations sit below the 1e-3 noise allowance (at small T the
        // fidelity-vs-T curve genuinely oscillates).
        let inst = Q2SATInstance::new(2, vec![(0, 1)], sym(), 0, 0.0).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        let psi0 = StateVector::all_zeros(2);
        let base_t = 125.0;
        let mut fids = Vec::new();
        for k in 0..4 {
            let sched = RotationSchedule::y_axis(base_t * (1 << k) as f64).unwrap();
            let rot = RotatingHamiltonian::new(&inst, sched);
            let r = evolve_rotating(&rot, &psi0, &ground, 1 << 10).unwrap();
            fids.push(r.ground_fidelity);
        }
        for w in fids.windows(2) {
            assert!(w[1] >= w[0] - 1e-3, "fidelity sequence {fids:?}");
        }
        assert!(fids[3] > 0.999, "T -> infinity limit: {fids:?}");
    }

    #[test]
    fn single_edge_large_t_returns_to_ground_space() {
        let inst = Q2SATInstance::new(2, vec![(0, 1)], sym(), 0, 0.0).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        let sched = RotationSchedule::y_axis(1000.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let psi0 = StateVector::all_zeros(2);
        let r = evolve_rotating(&rot, &psi0, &ground, 1 << 10).unwrap();
        assert!(r.ground_fidelity >= 0.999);
    }

    #[test]
    fn norm_drift_guard_trips_on_reckless_steps() {
        let inst = generate_instance(6, 0.5, sym(), 5).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        let sched = RotationSchedule::y_axis(60.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let psi0 = StateVector::all_zeros(6);
        match evolve_lab(&rot, &psi0, &ground, Some(40), 0) {
            Err(Error::NormDrift { .. }) => {}
            other => panic!("expected norm-drift error, got {:?}", other.map(|r| r.norm_drift)),
        }
    }

    #[test]
    fn checkpoints_record_energy_within_leakage_envelope() {
        let inst = generate_instance(6, 0.3, sym(), 42).unwrap();
        let ground = ground_and_gap(&inst, &SpectrumOptions::default()).unwrap();
        let delta = ground.gap_delta.unwrap();
        let sched = schedule_from_gap(delta, 20.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let psi0 = StateVector::all_zeros(6);
        let r = evolve_lab(&rot, &psi0, &ground, None, 10).unwrap();
        assert!(r.checkpoints.len() >= 10);
        let lambda_max = inst.m() as f64; // spectral bound for a projector sum
        for cp in &r.checkpoints {
            assert!(
                cp.energy + 1e-9 >= delta * cp.leakage - 1e-9,
                "checkpoint energy {} below delta*leakage {}",
                cp.energy,
                delta * cp.leakage
            );
            assert!(
                cp.energy <= lambda_max * cp.leakage + 1e-9,
                "checkpoint energy {} above lambda_max*leakage {}",
                cp.energy,
                lambda_max * cp.leakage
            );
        }
    }
}
