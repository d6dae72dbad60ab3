//! Row-compressed sparse Hermitian operators on the n-qubit Hilbert space.
//!
//! Columns are sorted within each row and Hermiticity is stored explicitly
//! (both triangles), so iteration order, matrix–vector products, and the
//! coordinate-format debug dump are all deterministic.

use crate::{C64, Error, Result};

/// Sparse Hermitian operator of dimension 2ⁿ with the Sz-sector map attached.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    /// Number of qubits.
    pub n: usize,
    /// Matrix dimension, 2ⁿ.
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<C64>,
    /// sector_map[r] = popcount(r): magnetization sector of basis state r.
    pub sector_map: Vec<u8>,
}

/// Accumulates (row, col, value) triplets and compresses to CSR.
pub struct CsrBuilder {
    n: usize,
    dim: usize,
    rows: Vec<Vec<(u32, C64)>>,
}

impl CsrBuilder {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << n;
        CsrBuilder { n, dim, rows: vec![Vec::new(); dim] }
    }

    pub fn add(&mut self, row: usize, col: usize, val: C64) {
        if val.norm_sqr() != 0.0 {
            self.rows[row].push((col as u32, val));
        }
    }

    pub fn finish(self) -> SparseHamiltonian {
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut entries in self.rows {
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
                // Exact zeros from cancellation are kept out of the structure
                // so that entrywise comparisons see identical sparsity.
                if v.norm_sqr() != 0.0 {
                    cols.push(col);
                    vals.push(v);
                }
                i = j;
            }
            row_ptr.push(cols.len());
        }
        let sector_map = (0..self.dim).map(|r| (r as u64).count_ones() as u8).collect();
        SparseHamiltonian { n: self.n, dim: self.dim, row_ptr, cols, vals, sector_map }
    }
}

impl SparseHamiltonian {
    /// The zero operator on n qubits.
    pub fn zero(n: usize) -> Self {
        CsrBuilder::new(n).finish()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.cols[lo..hi]
            .iter()
            .zip(&self.vals[lo..hi])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.cols[lo..hi].binary_search(&(c as u32)) {
            Ok(k) => self.vals[lo + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// H·ψ. Linear, does not normalize. Row-parallel under the `parallel`
    /// feature; per-row accumulation order is fixed by the CSR layout, so the
    /// result is independent of the worker count.
    pub fn apply(&self, psi: &[C64]) -> Result<Vec<C64>> {
        if psi.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs state dim {}",
                self.dim,
                psi.len()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(psi, &mut out);
        Ok(out)
    }

    /// `apply` into a caller-provided buffer (hot path for the integrator).
    pub fn apply_into(&self, psi: &[C64], out: &mut [C64]) {
        debug_assert_eq!(psi.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            // Row-parallel only when the matrix is large enough to amortize
            // the fork; small systems stay sequential for determinism-free
            // speed (result is identical either way).
            if self.dim >= 1 << 12 {
                out.par_iter_mut().enumerate().for_each(|(r, o)| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, v) in self.row(r) {
                        acc += v * psi[c];
                    }
                    *o = acc;
                });
                return;
            }
        }
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, v) in self.row(r) {
                acc += v * psi[c];
            }
            *o = acc;
        }
    }

    /// ⟨φ|H|ψ⟩.
    pub fn expectation(&self, bra: &[C64], ket: &[C64]) -> Result<C64> {
        let h_ket = self.apply(ket)?;
        Ok(bra.iter().zip(&h_ket).map(|(b, k)| b.conj() * k).sum())
    }

    /// self + scale·other, requiring matching dimension.
    pub fn add_scaled(&self, other: &SparseHamiltonian, scale: C64) -> Result<SparseHamiltonian> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let mut b = CsrBuilder::new(self.n);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                b.add(r, c, v);
            }
            for (c, v) in other.row(r) {
                b.add(r, c, scale * v);
            }
        }
        Ok(b.finish())
    }

    /// Largest |entry(r,c) − conj(entry(c,r))| over the stored structure.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                worst = worst.max((v - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise difference |self − other| over the union structure.
    pub fn max_entry_diff(&self, other: &SparseHamiltonian) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                worst = worst.max((v - other.entry(r, c)).norm());
            }
            for (c, v) in other.row(r) {
                worst = worst.max((v - self.entry(r, c)).norm());
            }
        }
        worst
    }

    /// True when every stored entry is real (β real ⇒ real symmetric H).
    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    /// ‖[H, Σₐ sᶻₐ]‖_max over the sparse structure. Zero exactly when every
    /// entry connects states of equal magnetization.
    pub fn sz_commutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                if self.sector_map[r] != self.sector_map[c] {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Coordinate-format debug dump: `row col re im`, one entry per line,
    /// sorted by (row, col).
    pub fn to_coo_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                out.push_str(&format!(
                    "{} {} {} {}\n",
                    r,
                    c,
                    crate::fmt_f64(v.re),
                    crate::fmt_f64(v.im)
                ));
            }
        }
        out
    }

    /// Dense copy for small-n oracles.
    pub fn to_dense(&self) -> nalgebra::DMatrix<C64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> SparseHamiltonian {
        let mut b = CsrBuilder::new(2);
        b.add(0, 0, c(1.0, 0.0));
        b.add(1, 2, c(0.5, 0.25));
        b.add(2, 1, c(0.5, -0.25));
        b.add(3, 3, c(-2.0, 0.0));
        b.finish()
    }

    #[test]
    fn builder_sorts_and_merges() {
        let mut b = CsrBuilder::new(1);
        b.add(0, 1, c(1.0, 0.0));
        b.add(0, 0, c(2.0, 0.0));
        b.add(0, 1, c(0.5, 0.0));
        let h = b.finish();
        assert_eq!(h.row(0).collect::<Vec<_>>(), vec![(0, c(2.0, 0.0)), (1, c(1.5, 0.0))]);
    }

    #[test]
    fn apply_matches_dense() {
        let h = sample();
        let psi: Vec<C64> = (0..4).map(|k| c(k as f64 + 0.5, -(k as f64))).collect();
        let fast = h.apply(&psi).unwrap();
        let dense = h.to_dense();
        let slow = dense * nalgebra::DVector::from_column_slice(&psi);
        for k in 0..4 {
            assert!((fast[k] - slow[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let h = sample();
        assert!(matches!(h.apply(&[c(1.0, 0.0)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hermiticity_and_sector_defects() {
        let h = sample();
        assert_eq!(h.hermiticity_defect(), 0.0);
        // (1,2) couples sectors 1 and 1 (popcounts of 0b01 and 0b10): exact.
        assert_eq!(h.sz_commutator_defect(), 0.0);

        let mut b = CsrBuilder::new(1);
        b.add(0, 1, c(1.0, 0.0));
        b.add(1, 0, c(1.0, 0.0));
        let flip = b.finish();
        assert_eq!(flip.hermiticity_defect(), 0.0);
        assert_eq!(flip.sz_commutator_defect(), 1.0);
    }

    #[test]
    fn coo_dump_is_sorted() {
        let text = sample().to_coo_text();
        let rows: Vec<(usize, usize)> = text
            .lines()
            .map(|l| {
                let mut it = l.split_whitespace();
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        let mut sorted = rows.clone();
        sorted.sort_unstable();
        assert_eq!(rows, sorted);
    }
}
