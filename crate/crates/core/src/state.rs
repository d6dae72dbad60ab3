//! State vectors on the n-qubit Hilbert space.

use crate::{C64, Error, Result};

/// 2ⁿ complex amplitudes indexed by basis state (bit a of the index = qubit a).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn from_amps(amps: Vec<C64>) -> Self {
        StateVector { amps }
    }

    /// Computational basis state |index⟩ on n qubits.
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        StateVector { amps }
    }

    /// |00…0⟩, the trivial solution used as the initial state.
    pub fn all_zeros(n: usize) -> Self {
        Self::basis_state(n, 0)
    }

    /// |11…1⟩, the other trivial solution.
    pub fn all_ones(n: usize) -> Self {
        Self::basis_state(n, (1 << n) - 1)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩| — phase-insensitive overlap.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Squared norm of the projection onto the span of `basis`
    /// (assumed orthonormal).
    pub fn projection_weight(&self, basis: &[StateVector]) -> Result<f64> {
        let mut w = 0.0;
        for b in basis {
            w += b.inner(self)?.norm_sqr();
        }
        Ok(w)
    }
}

/// Largest |⟨vᵢ|vⱼ⟩ − δᵢⱼ| over a vector set; 0 for an orthonormal basis.
pub fn orthonormality_defect(vecs: &[StateVector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, vi) in vecs.iter().enumerate() {
        for (j, vj) in vecs.iter().enumerate() {
            let g = vi.inner(vj).expect("uniform dimensions");
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - C64::new(target, 0.0)).norm());
        }
    }
    worst
}
