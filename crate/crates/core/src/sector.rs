//! Magnetization (Sz) sector machinery: H₀ conserves the number of 1-bits, so
//! every spectral computation decomposes over sectors of fixed popcount.

use crate::instance::Q2SATInstance;
use crate::C64;
use nalgebra::DMatrix;

/// Basis-state indices with exactly `k` bits set, ascending. The ascending
/// order makes sector-restricted bases deterministic.
pub fn sector_states(n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(binomial(n, k));
    for r in 0..(1usize << n) {
        if (r as u64).count_ones() as usize == k {
            out.push(r);
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Clause contributions to the sector block, enumerated per row.
///
/// For a basis state r and clause (a, b): bits (1, 0) cost Δ|α|² and hop to
/// the swapped state with amplitude Δβᾱ; bits (0, 1) cost Δ|β|². The hop
/// stays inside the sector.
fn for_each_entry(
    inst: &Q2SATInstance,
    states: &[usize],
    pos_of: &dyn Fn(usize) -> usize,
    mut emit: impl FnMut(usize, usize, C64),
) {
    let alpha = inst.clause.alpha();
    let beta = inst.clause.beta;
    let delta = inst.clause.delta;
    let aa = delta * alpha * alpha;
    let bb = delta * beta.norm_sqr();
    let hop_up = C64::new(delta * alpha, 0.0) * beta; // <01|Pi|10> = beta * conj(alpha)
    for (i, &r) in states.iter().enumerate() {
        for &(a, b) in &inst.edges {
            let (ba, bbit) = ((r >> a) & 1, (r >> b) & 1);
            if ba == 1 && bbit == 0 {
                let c = r ^ (1 << a) ^ (1 << b);
                let j = pos_of(c);
                emit(i, i, C64::new(aa, 0.0));
                emit(j, i, hop_up);
            } else if ba == 0 && bbit == 1 {
                emit(i, i, C64::new(bb, 0.0));
            }
        }
    }
}

/// Dense Hermitian sector block of H₀ on `states` (any sector-closed subset).
pub fn dense_sector_block(inst: &Q2SATInstance, states: &[usize]) -> DMatrix<C64> {
    let d = states.len();
    let mut pos = std::collections::HashMap::with_capacity(d * 2);
    for (i, &r) in states.iter().enumerate() {
        pos.insert(r, i);
    }
    let mut m = DMatrix::zeros(d, d);
    for_each_entry(inst, states, &|r| pos[&r], |i, j, v| {
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v.conj();
        }
    });
    m
}

/// Real part of the sector block; valid whenever β is real.
pub fn dense_sector_block_real(inst: &Q2SATInstance, states: &[usize]) -> DMatrix<f64> {
    debug_assert_eq!(inst.clause.beta.im, 0.0);
    let d = states.len();
    let mut pos = std::collections::HashMap::with_capacity(d * 2);
    for (i, &r) in states.iter().enumerate() {
        pos.insert(r, i);
    }
    let mut m = DMatrix::zeros(d, d);
    for_each_entry(inst, states, &|r| pos[&r], |i, j, v| {
        m[(i, j)] += v.re;
        if i != j {
            m[(j, i)] += v.re;
        }
    });
    m
}

/// Sector-restricted sparse block in CSR form, for the iterative path.
pub struct SectorBlock {
    pub states: Vec<usize>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<C64>,
}

impl SectorBlock {
    pub fn new(inst: &Q2SATInstance, states: Vec<usize>) -> Self {
        let d = states.len();
        let mut pos = std::collections::HashMap::with_capacity(d * 2);
        for (i, &r) in states.iter().enumerate() {
            pos.insert(r, i);
        }
        let mut rows: Vec<Vec<(u32, C64)>> = vec![Vec::new(); d];
        for_each_entry(inst, &states, &|r| pos[&r], |i, j, v| {
            rows[i].push((j as u32, v));
            if i != j {
                rows[j].push((i as u32, v.conj()));
            }
        });
        let mut row_ptr = Vec::with_capacity(d + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut entries in rows {
            entries.sort_unstable_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < entries.len() {
                let col = entries[i].0;
                let mut v = entries[i].1;
                let mut j = i + 1;
                while j < entries.len() && entries[j].0 == col {
                    v += entries[j].1;
                    j += 1;
                }
                if v.norm_sqr() != 0.0 {
                    cols.push(col);
                    vals.push(v);
                }
                i = j;
            }
            row_ptr.push(cols.len());
        }
        SectorBlock { states, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        for r in 0..self.dim() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            out[r] = acc;
        }
    }
}
