//! Projector Hamiltonian H₀ = Δ Σⱼ Πⱼ, its spin-1/2 operator form, and the
//! rotated family H(t) = R(t) H₀ R(t)†.
//!
//! The canonical representation is the projector form, whose solutions sit at
//! energy exactly 0; the spin form (which drops Δ/4 per clause) is derived
//! from it and kept for cross-checks. Rotation conjugates each clause block by
//! the single-qubit rotation R(t) = ⊗ₐ exp(+iθ(t) s^n̂ₐ), θ(t) = 2πt/T, acting
//! only on the two qubits of the clause (identity factors cancel), so one code
//! path covers every axis.

use crate::instance::{ClauseParams, Q2SATInstance};
use crate::sparse::{CsrBuilder, SparseHamiltonian};
use crate::{C64, Error, Result};

/// 4×4 complex block on the ordered two-qubit basis {|00⟩, |01⟩, |10⟩, |11⟩},
/// where the first bit is qubit a and the second is qubit b.
pub type TwoQubitBlock = [[C64; 4]; 4];

/// 2×2 single-qubit operator on {|0⟩, |1⟩}.
pub type OneQubitOp = [[C64; 2]; 2];

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Πⱼ = |Φ⟩⟨Φ| with |Φ⟩ = α|10⟩ + β|01⟩ as a two-qubit block (Δ excluded).
pub fn projector_block(clause: &ClauseParams) -> TwoQubitBlock {
    let alpha = C64::new(clause.alpha(), 0.0);
    let beta = clause.beta;
    let mut p = [[czero(); 4]; 4];
    // |Phi> components: index 0b01 = |0_a 1_b> -> beta, index 0b10 = |1_a 0_b> -> alpha.
    let phi = [czero(), beta, alpha, czero()];
    for (r, pr) in phi.iter().enumerate() {
        for (c, pc) in phi.iter().enumerate() {
            p[r][c] = pr * pc.conj();
        }
    }
    p
}

/// Embeds a two-qubit block acting on qubits (a, b) into the 2ⁿ space,
/// appending its entries to `builder` scaled by `scale`.
fn add_embedded_block(
    builder: &mut CsrBuilder,
    n: usize,
    a: usize,
    b: usize,
    block: &TwoQubitBlock,
    scale: f64,
) {
    let dim = 1usize << n;
    let (ba, bb) = (1usize << a, 1usize << b);
    for r in 0..dim {
        let local_r = (((r & ba) != 0) as usize) << 1 | (((r & bb) != 0) as usize);
        let base = r & !(ba | bb);
        for local_c in 0..4 {
            let v = block[local_r][local_c];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let c = base | if local_c & 2 != 0 { ba } else { 0 } | if local_c & 1 != 0 { bb } else { 0 };
            builder.add(r, c, v * scale);
        }
    }
}

/// The projector Πⱼ for qubits (a, b) embedded in the 2ⁿ space (identity on
/// the remaining qubits): rank 2ⁿ⁻², idempotent. Not scaled by Δ.
pub fn build_projector(clause: &ClauseParams, a: usize, b: usize, n: usize) -> Result<SparseHamiltonian> {
    if a == b {
        return Err(Error::invalid(format!("projector qubits must differ, got ({a}, {b})")));
    }
    if a >= n || b >= n {
        return Err(Error::invalid(format!("projector qubits ({a}, {b}) out of range for n = {n}")));
    }
    let mut builder = CsrBuilder::new(n);
    add_embedded_block(&mut builder, n, a, b, &projector_block(clause), 1.0);
    Ok(builder.finish())
}

/// H₀ = Δ Σⱼ Πⱼ in projector form: positive semidefinite, block-diagonal over
/// magnetization sectors, with every solution at energy exactly 0.
pub fn build_h0(inst: &Q2SATInstance) -> SparseHamiltonian {
    let mut builder = CsrBuilder::new(inst.n);
    let block = projector_block(&inst.clause);
    for &(a, b) in &inst.edges {
        add_embedded_block(&mut builder, inst.n, a, b, &block, inst.clause.delta);
    }
    builder.finish()
}

/// Coefficients of the spin-operator expansion of one clause term
/// Δ·Π = zz·sᶻₐsᶻᵦ + z_diff·(sᶻₐ − sᶻᵦ) + xxyy·(sˣₐsˣᵦ + sʸₐsʸᵦ)
///     + xy_anti·(sˣₐsʸᵦ − sʸₐsˣᵦ) + constant·𝟙.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinFormCoefficients {
    pub zz: f64,
    pub z_diff: f64,
    pub xxyy: f64,
    pub xy_anti: f64,
    /// The constant dropped in the paper's spin form, Δ/4 per clause.
    pub constant: f64,
}

pub fn spin_form_coefficients(clause: &ClauseParams) -> SpinFormCoefficients {
    let d = clause.delta;
    let b2 = clause.beta.norm_sqr();
    let alpha = clause.alpha();
    SpinFormCoefficients {
        zz: -d,
        z_diff: -0.5 * d * (1.0 - 2.0 * b2),
        xxyy: 2.0 * d * clause.beta.re * alpha,
        xy_anti: 2.0 * d * clause.beta.im * alpha,
        constant: 0.25 * d,
    }
}

/// sˣ, sʸ, sᶻ on {|0⟩, |1⟩} with |0⟩ the sᶻ = +1/2 state.
pub fn spin_ops() -> [OneQubitOp; 3] {
    let h = 0.5;
    let sx = [[czero(), C64::new(h, 0.0)], [C64::new(h, 0.0), czero()]];
    let sy = [[czero(), C64::new(0.0, -h)], [C64::new(0.0, h), czero()]];
    let sz = [[C64::new(h, 0.0), czero()], [czero(), C64::new(-h, 0.0)]];
    [sx, sy, sz]
}

/// Σₐ n̂·s⃗ₐ as a sparse operator (the rotation generator).
pub fn total_spin_along(n: usize, axis: [f64; 3]) -> SparseHamiltonian {
    let [sx, sy, sz] = spin_ops();
    let mut op = [[czero(); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            op[r][c] = axis[0] * sx[r][c] + axis[1] * sy[r][c] + axis[2] * sz[r][c];
        }
    }
    let dim = 1usize << n;
    let mut builder = CsrBuilder::new(n);
    for a in 0..n {
        let bit = 1usize << a;
        for r in 0..dim {
            let lr = ((r & bit) != 0) as usize;
            for (lc, col) in [(0usize, r & !bit), (1usize, r | bit)] {
                let v = op[lr][lc];
                if v.norm_sqr() != 0.0 {
                    builder.add(r, col, v);
                }
            }
        }
    }
    builder.finish()
}

/// Σₐ (s⁺ₐ − s⁻ₐ) = 2i Σₐ sʸₐ, the operator in the paper's special-case gauge
/// matrix formula; kept for the holonomy cross-check.
pub fn total_ladder_difference(n: usize) -> SparseHamiltonian {
    let sy = total_spin_along(n, [0.0, 1.0, 0.0]);
    let mut builder = CsrBuilder::new(n);
    for r in 0..sy.dim {
        for (c, v) in sy.row(r) {
            builder.add(r, c, C64::new(0.0, 2.0) * v);
        }
    }
    builder.finish()
}

/// Closed rotation path: all qubits turn through 2π about `axis` during
/// `total_time`, traversed forward or in reverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSchedule {
    /// Unit vector n̂ (‖n̂‖ = 1 within 1e−12).
    pub axis: [f64; 3],
    /// Total time T > 0 (units of 1/Δ, ħ = 1).
    pub total_time: f64,
    /// Reverse traversal flips the rotation sense.
    pub reverse: bool,
}

impl RotationSchedule {
    pub fn new(axis: [f64; 3], total_time: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("rotation axis norm {norm} differs from 1")));
        }
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::invalid(format!("total_time = {total_time} must be positive")));
        }
        Ok(RotationSchedule { axis, total_time, reverse: false })
    }

    /// y-axis schedule, the paper's §V choice.
    pub fn y_axis(total_time: f64) -> Result<Self> {
        RotationSchedule::new([0.0, 1.0, 0.0], total_time)
    }

    /// Rotation angle θ(t) = ±2πt/T.
    pub fn angle(&self, t: f64) -> f64 {
        let sign = if self.reverse { -1.0 } else { 1.0 };
        sign * 2.0 * std::f64::consts::PI * t / self.total_time
    }

    /// Angular velocity ±2π/T.
    pub fn omega(&self) -> f64 {
        let sign = if self.reverse { -1.0 } else { 1.0 };
        sign * 2.0 * std::f64::consts::PI / self.total_time
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.total_time + 1e-12 * self.total_time).contains(&t) {
            return Err(Error::invalid(format!(
                "t = {t} outside the schedule interval [0, {}]",
                self.total_time
            )));
        }
        Ok(())
    }
}

/// r(θ) = exp(+iθ n̂·s⃗) = cos(θ/2)·𝟙 + i sin(θ/2)·(n̂·σ⃗).
pub fn rotation_2x2(axis: [f64; 3], theta: f64) -> OneQubitOp {
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let i = C64::new(0.0, 1.0);
    let [nx, ny, nz] = axis;
    // n̂·σ⃗ on {|0⟩,|1⟩}: [[nz, nx−i·ny], [nx+i·ny, −nz]].
    [
        [
            C64::new(ch, 0.0) + i * sh * nz,
            i * sh * C64::new(nx, -ny),
        ],
        [
            i * sh * C64::new(nx, ny),
            C64::new(ch, 0.0) - i * sh * nz,
        ],
    ]
}

fn conjugate_block(block: &TwoQubitBlock, r: &OneQubitOp) -> TwoQubitBlock {
    // (r ⊗ r) · block · (r ⊗ r)†
    let mut rr = [[czero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            rr[i][j] = r[i >> 1][j >> 1] * r[i & 1][j & 1];
        }
    }
    let mut tmp = [[czero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = czero();
            for k in 0..4 {
                acc += rr[i][k] * block[k][j];
            }
            tmp[i][j] = acc;
        }
    }
    let mut out = [[czero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = czero();
            for k in 0..4 {
                acc += tmp[i][k] * rr[j][k].conj();
            }
            out[i][j] = acc;
        }
    }
    out
}

/// The rotated family H(t) of one instance, with both an assembled sparse
/// form (tests, dumps) and a fast R(t)·H₀·R(t)†·ψ application (integration).
#[derive(Debug, Clone)]
pub struct RotatingHamiltonian {
    pub h0: SparseHamiltonian,
    pub schedule: RotationSchedule,
    clause: ClauseParams,
    edges: Vec<(usize, usize)>,
    n: usize,
}

impl RotatingHamiltonian {
    pub fn new(inst: &Q2SATInstance, schedule: RotationSchedule) -> Self {
        RotatingHamiltonian {
            h0: build_h0(inst),
            schedule,
            clause: inst.clause,
            edges: inst.edges.clone(),
            n: inst.n,
        }
    }

    /// Assembles H(t) = R(t) H₀ R(t)† as a sparse matrix by conjugating every
    /// clause block with the single-qubit rotation.
    pub fn at(&self, t: f64) -> Result<SparseHamiltonian> {
        self.schedule.check_time(t)?;
        let r = rotation_2x2(self.schedule.axis, self.schedule.angle(t));
        let rotated = conjugate_block(&projector_block(&self.clause), &r);
        let mut builder = CsrBuilder::new(self.n);
        for &(a, b) in &self.edges {
            add_embedded_block(&mut builder, self.n, a, b, &rotated, self.clause.delta);
        }
        Ok(builder.finish())
    }

    /// H(t)·ψ via R(t)·H₀·R(t)†·ψ without assembling H(t); exact because the
    /// single-qubit factors on spectator qubits cancel inside H₀.
    /// `scratch` must have length 2ⁿ.
    pub fn apply_at(&self, t: f64, psi: &[C64], scratch: &mut [C64], out: &mut [C64]) {
        let theta = self.schedule.angle(t);
        let r = rotation_2x2(self.schedule.axis, theta);
        let rdag = [
            [r[0][0].conj(), r[1][0].conj()],
            [r[0][1].conj(), r[1][1].conj()],
        ];
        scratch.copy_from_slice(psi);
        for a in 0..self.n {
            apply_single_qubit(scratch, a, &rdag);
        }
        self.h0.apply_into(scratch, out);
        for a in 0..self.n {
            apply_single_qubit(out, a, &r);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// In-place action of a 2×2 operator on one qubit of a state vector.
pub fn apply_single_qubit(psi: &mut [C64], qubit: usize, op: &OneQubitOp) {
    let bit = 1usize << qubit;
    let dim = psi.len();
    let mut base = 0usize;
    while base < dim {
        if base & bit == 0 {
            let hi = base | bit;
            let a0 = psi[base];
            let a1 = psi[hi];
            psi[base] = op[0][0] * a0 + op[0][1] * a1;
            psi[hi] = op[1][0] * a0 + op[1][1] * a1;
        }
        base += 1;
    }
}

/// R(t)·ψ applied qubit by qubit.
pub fn apply_rotation(psi: &mut [C64], n: usize, schedule: &RotationSchedule, t: f64) {
    let r = rotation_2x2(schedule.axis, schedule.angle(t));
    for a in 0..n {
        apply_single_qubit(psi, a, &r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, ClauseParams, Q2SATInstance};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single_edge(beta: C64) -> Q2SATInstance {
        Q2SATInstance::new(2, vec![(0, 1)], ClauseParams::new(beta, 1.0).unwrap(), 0, 0.0).unwrap()
    }

    #[test]
    fn symmetric_projector_block_is_half_on_middle_states() {
        let h = build_h0(&single_edge(c(FRAC_1_SQRT_2, 0.0)));
        // Nonzero block on {|01>, |10>} = indices {2, 1}: bit0 = qubit a.
        // |0_a 1_b> has bit a=0, bit b=1 -> index 2.
        for (r, cidx) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert_abs_diff_eq!(h.entry(r, cidx).re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(h.entry(r, cidx).im, 0.0, epsilon = 1e-15);
        }
        assert_eq!(h.entry(0, 0), c(0.0, 0.0));
        assert_eq!(h.entry(3, 3), c(0.0, 0.0));
    }

    #[test]
    fn beta_one_projector_is_pure_01_population() {
        let h = build_h0(&single_edge(c(1.0, 0.0)));
        // beta = 1: Pi = |01><01|, index of |0_a 1_b> is 2.
        assert_abs_diff_eq!(h.entry(2, 2).re, 1.0, epsilon = 1e-15);
        assert_eq!(h.nnz(), 1);
    }

    #[test]
    fn projector_is_idempotent_and_rank_quarter_dim() {
        for beta in [c(FRAC_1_SQRT_2, 0.0), c(0.3, 0.4), c(0.0, 0.9)] {
            let clause = ClauseParams::new(beta, 1.0).unwrap();
            let p = build_projector(&clause, 0, 2, 4).unwrap();
            let dense = p.to_dense();
            let diff = (&dense * &dense - &dense).norm();
            assert!(diff < 1e-14, "idempotence defect {diff}");
            let trace: C64 = (0..16).map(|k| dense[(k, k)]).sum();
            assert_abs_diff_eq!(trace.re, 4.0, epsilon = 1e-12); // rank 2^(n-2)
        }
        assert!(build_projector(&ClauseParams::symmetric(), 1, 1, 3).is_err());
    }

    #[test]
    fn h0_annihilates_trivial_states_exactly() {
        for seed in 0..20 {
            let inst = generate_instance(8, 0.3, ClauseParams::symmetric(), seed).unwrap();
            let h = build_h0(&inst);
            let mut zero_state = vec![c(0.0, 0.0); h.dim];
            zero_state[0] = c(1.0, 0.0);
            let hz = h.apply(&zero_state).unwrap();
            assert!(hz.iter().all(|v| v.norm() == 0.0));
            let mut ones = vec![c(0.0, 0.0); h.dim];
            ones[h.dim - 1] = c(1.0, 0.0);
            let ho = h.apply(&ones).unwrap();
            assert!(ho.iter().all(|v| v.norm() == 0.0));
        }
    }

    #[test]
    fn h0_is_hermitian_and_sector_block_diagonal() {
        let inst = generate_instance(7, 0.35, ClauseParams::new(c(0.3, 0.5), 1.3).unwrap(), 5).unwrap();
        let h = build_h0(&inst);
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert_eq!(h.sz_commutator_defect(), 0.0);
    }

    #[test]
    fn spin_form_coefficient_table() {
        let sym = spin_form_coefficients(&ClauseParams::symmetric());
        assert_abs_diff_eq!(sym.zz, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym.z_diff, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym.xxyy, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym.xy_anti, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sym.constant, 0.25, epsilon = 1e-15);

        let zero = spin_form_coefficients(&ClauseParams::new(c(0.0, 0.0), 1.0).unwrap());
        assert_abs_diff_eq!(zero.zz, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero.z_diff, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(zero.xxyy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero.xy_anti, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero.constant, 0.25, epsilon = 1e-15);

        let imag = spin_form_coefficients(&ClauseParams::new(c(0.0, FRAC_1_SQRT_2), 1.0).unwrap());
        assert_abs_diff_eq!(imag.zz, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(imag.z_diff, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(imag.xxyy, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(imag.xy_anti, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(imag.constant, 0.25, epsilon = 1e-15);
    }

    /// Reassembles H₀ from the spin-operator expansion and compares entrywise:
    /// projector form = spin form + m·Δ/4·𝟙.
    #[test]
    fn spin_form_reconstructs_projector_form() {
        for beta in [c(FRAC_1_SQRT_2, 0.0), c(0.2, -0.6), c(0.0, 0.0)] {
            let clause = ClauseParams::new(beta, 1.7).unwrap();
            let inst = generate_instance(5, 0.5, clause, 11).unwrap();
            let h = build_h0(&inst);
            let k = spin_form_coefficients(&clause);
            let [sx, sy, sz] = spin_ops();
            let dim = inst.dim();
            let mut dense = nalgebra::DMatrix::<C64>::zeros(dim, dim);
            let embed1 = |op: &OneQubitOp, q: usize| {
                let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
                let bit = 1usize << q;
                for r in 0..dim {
                    let lr = ((r & bit) != 0) as usize;
                    for lc in 0..2 {
                        let col = if lc == 1 { r | bit } else { r & !bit };
                        m[(r, col)] += op[lr][lc];
                    }
                }
                m
            };
            for &(a, b) in &inst.edges {
                let (sxa, sxb) = (embed1(&sx, a), embed1(&sx, b));
                let (sya, syb) = (embed1(&sy, a), embed1(&sy, b));
                let (sza, szb) = (embed1(&sz, a), embed1(&sz, b));
                dense += (&sza * &szb) * c(k.zz, 0.0);
                dense += (&sza - &szb) * c(k.z_diff, 0.0);
                dense += (&sxa * &sxb + &sya * &syb) * c(k.xxyy, 0.0);
                dense += (&sxa * &syb - &sya * &sxb) * c(k.xy_anti, 0.0);
                for r in 0..dim {
                    dense[(r, r)] += c(k.constant, 0.0);
                }
            }
            let diff = (dense - h.to_dense()).norm();
            assert!(diff < 1e-13, "beta {beta}: diff {diff}");
        }
    }

    #[test]
    fn rotation_closes_at_endpoints() {
        let inst = generate_instance(5, 0.4, ClauseParams::symmetric(), 2).unwrap();
        let sched = RotationSchedule::y_axis(3.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let t0 = rot.at(0.0).unwrap();
        assert!(t0.max_entry_diff(&rot.h0) < 1e-15);
        let tt = rot.at(3.0).unwrap();
        assert!(tt.max_entry_diff(&rot.h0) < 1e-12);
        assert!(rot.at(3.5).is_err());
        assert!(rot.at(-0.1).is_err());
    }

    /// §V oracle: at angle π about y, sᶻ(t) = −sᶻ and sˣ(t) = −sˣ, so the
    /// half-turn Hamiltonian equals the term-by-term rebuild with flipped
    /// sᶻ/sˣ (β real makes the sˣsʸ term vanish).
    #[test]
    fn y_axis_half_turn_matches_rotation_formulas() {
        let clause = ClauseParams::new(c(0.6, 0.0), 1.0).unwrap();
        let inst = generate_instance(4, 0.6, clause, 9).unwrap();
        let sched = RotationSchedule::y_axis(2.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let half = rot.at(1.0).unwrap();

        // Term-by-term: zz invariant (both flip), z_diff flips, xxyy has
        // sx sx (invariant) + sy sy (invariant): net change is only z_diff.
        let k = spin_form_coefficients(&clause);
        let [sx, sy, sz] = spin_ops();
        let dim = inst.dim();
        let embed1 = |op: &OneQubitOp, q: usize| {
            let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
            let bit = 1usize << q;
            for r in 0..dim {
                let lr = ((r & bit) != 0) as usize;
                for lc in 0..2 {
                    let col = if lc == 1 { r | bit } else { r & !bit };
                    m[(r, col)] += op[lr][lc];
                }
            }
            m
        };
        let neg = |m: nalgebra::DMatrix<C64>| m * c(-1.0, 0.0);
        let mut dense = nalgebra::DMatrix::<C64>::zeros(dim, dim);
        for &(a, b) in &inst.edges {
            let (sxa, sxb) = (neg(embed1(&sx, a)), neg(embed1(&sx, b)));
            let (sya, syb) = (embed1(&sy, a), embed1(&sy, b));
            let (sza, szb) = (neg(embed1(&sz, a)), neg(embed1(&sz, b)));
            dense += (&sza * &szb) * c(k.zz, 0.0);
            dense += (&sza - &szb) * c(k.z_diff, 0.0);
            dense += (&sxa * &sxb + &sya * &syb) * c(k.xxyy, 0.0);
            for r in 0..dim {
                dense[(r, r)] += c(k.constant, 0.0);
            }
        }
        let diff = (dense - half.to_dense()).norm();
        assert!(diff < 1e-12, "half-turn mismatch {diff}");
    }

    #[test]
    fn eigenvalues_invariant_under_rotation() {
        let inst = generate_instance(5, 0.4, ClauseParams::new(c(0.4, 0.3), 1.0).unwrap(), 13).unwrap();
        let sched = RotationSchedule::new([0.6, 0.48, 0.64], 1.0).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let base = rot.h0.to_dense().symmetric_eigen().eigenvalues;
        let mut base: Vec<f64> = base.iter().copied().collect();
        base.sort_by(f64::total_cmp);
        for &t in &[0.2, 0.5, 0.77] {
            let ht = rot.at(t).unwrap();
            assert!(ht.hermiticity_defect() < 1e-14);
            let mut w: Vec<f64> = ht.to_dense().symmetric_eigen().eigenvalues.iter().copied().collect();
            w.sort_by(f64::total_cmp);
            for (a, b) in base.iter().zip(&w) {
                assert!((a - b).abs() < 1e-10, "eigenvalue drift {} vs {}", a, b);
            }
        }
    }

    #[test]
    fn fast_apply_matches_assembled_matrix() {
        let inst = generate_instance(6, 0.3, ClauseParams::new(c(0.5, 0.2), 1.0).unwrap(), 21).unwrap();
        let sched = RotationSchedule::y_axis(1.5).unwrap();
        let rot = RotatingHamiltonian::new(&inst, sched);
        let dim = inst.dim();
        let psi: Vec<C64> = (0..dim)
            .map(|k| c((k as f64 * 0.37).sin(), (k as f64 * 0.23).cos()))
            .collect();
        let mut scratch = vec![c(0.0, 0.0); dim];
        let mut fast = vec![c(0.0, 0.0); dim];
        for &t in &[0.0, 0.4, 1.1, 1.5] {
            rot.apply_at(t, &psi, &mut scratch, &mut fast);
            let slow = rot.at(t).unwrap().apply(&psi).unwrap();
            for k in 0..dim {
                assert!((fast[k] - slow[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_is_real_for_hermitian_operator() {
        let inst = generate_instance(6, 0.4, ClauseParams::new(c(0.1, 0.7), 1.0).unwrap(), 8).unwrap();
        let h = build_h0(&inst);
        let psi: Vec<C64> = (0..h.dim)
            .map(|k| c((k as f64).sin(), (k as f64 * 1.7).cos()))
            .collect();
        let e = h.expectation(&psi, &psi).unwrap();
        assert!(e.im.abs() < 1e-12 * e.re.abs().max(1.0));
    }

    #[test]
    fn total_spin_operator_is_hermitian() {
        for axis in [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.6, 0.48, 0.64]] {
            let s = total_spin_along(5, axis);
            assert!(s.hermiticity_defect() < 1e-15);
        }
    }
}
