//! Truncated product basis `|Y, n_R, n_L>` and elementary operators.
//!
//! The matter part is a four-level quantum dot: ground state `G`, the two
//! circularly polarized excitons `X_R`, `X_L`, and the biexciton `B`. The
//! field part is a pair of cavity modes of opposite circular polarization,
//! each truncated at `n_max` photons.
//!
//! Basis ordering is QD-level-major:
//!
//! ```text
//! index = level * (n_max+1)^2 + n_R * (n_max+1) + n_L,
//! level in (G, X_R, X_L, B) = (0, 1, 2, 3)
//! ```
//!
//! so the total dimension is `4 (n_max+1)^2` (36 for the default `n_max = 2`).
//! All operators in this crate are dense complex matrices tagged with the
//! basis dimension; mixing operators from different truncations panics.

use std::fmt;
use std::io::{self, Write};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantum-dot level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QdLevel {
    /// Ground state.
    G,
    /// Right-polarized exciton.
    Xr,
    /// Left-polarized exciton.
    Xl,
    /// Biexciton.
    B,
}

impl QdLevel {
    pub const ALL: [QdLevel; 4] = [QdLevel::G, QdLevel::Xr, QdLevel::Xl, QdLevel::B];

    fn ordinal(self) -> usize {
        match self {
            QdLevel::G => 0,
            QdLevel::Xr => 1,
            QdLevel::Xl => 2,
            QdLevel::B => 3,
        }
    }

    fn from_ordinal(k: usize) -> QdLevel {
        Self::ALL[k]
    }
}

/// Circular photon/exciton polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Polarization {
    R,
    L,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::R, Polarization::L];

    /// The opposite polarization (mirror R <-> L).
    pub fn mirror(self) -> Polarization {
        match self {
            Polarization::R => Polarization::L,
            Polarization::L => Polarization::R,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::R => write!(f, "R"),
            Polarization::L => write!(f, "L"),
        }
    }
}

/// A single product-basis state `|Y, n_R, n_L>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub level: QdLevel,
    pub n_r: usize,
    pub n_l: usize,
}

impl BasisState {
    /// Total excitation number `N_R + N_L` carried by this product state
    /// (each exciton counts once, the biexciton twice).
    pub fn excitations(&self) -> usize {
        let matter = match self.level {
            QdLevel::G => 0,
            QdLevel::Xr | QdLevel::Xl => 1,
            QdLevel::B => 2,
        };
        matter + self.n_r + self.n_l
    }
}

/// The truncated product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductBasis {
    n_max: usize,
    dim: usize,
}

/// Build the product basis with photon-number truncation `n_max` per mode.
///
/// `n_max = 0` is rejected: without at least one photon per mode the
/// exciton-photon coupling has no matrix elements and every quantity
/// downstream is trivially zero.
pub fn build_basis(n_max: usize) -> Result<ProductBasis> {
    if n_max == 0 {
        return Err(Error::InvalidParams(
            "n_max must be >= 1 (n_max = 0 leaves no photon states)".into(),
        ));
    }
    let nph = n_max + 1;
    Ok(ProductBasis {
        n_max,
        dim: 4 * nph * nph,
    })
}

impl ProductBasis {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Flat index of a product state (QD-level-major ordering).
    pub fn index_of(&self, state: BasisState) -> usize {
        debug_assert!(state.n_r <= self.n_max && state.n_l <= self.n_max);
        let nph = self.n_max + 1;
        state.level.ordinal() * nph * nph + state.n_r * nph + state.n_l
    }

    /// Product state at a flat index.
    pub fn state_of(&self, index: usize) -> BasisState {
        debug_assert!(index < self.dim);
        let nph = self.n_max + 1;
        BasisState {
            level: QdLevel::from_ordinal(index / (nph * nph)),
            n_r: (index / nph) % nph,
            n_l: index % nph,
        }
    }

    /// Iterate over all product states in index order.
    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.dim).map(move |i| self.state_of(i))
    }

    /// Photon annihilation operator `a_R` or `a_L`.
    pub fn annihilation(&self, pol: Polarization) -> Operator {
        let mut op = Operator::zeros(self.dim);
        for state in self.states() {
            let n = match pol {
                Polarization::R => state.n_r,
                Polarization::L => state.n_l,
            };
            if n == 0 {
                continue;
            }
            let mut lower = state;
            match pol {
                Polarization::R => lower.n_r -= 1,
                Polarization::L => lower.n_l -= 1,
            }
            op.mat[(self.index_of(lower), self.index_of(state))] =
                Complex64::new((n as f64).sqrt(), 0.0);
        }
        op
    }

    /// QD transition operator `|a><b| (x) 1_photons`.
    pub fn qd_transition(&self, a: QdLevel, b: QdLevel) -> Operator {
        let mut op = Operator::zeros(self.dim);
        let nph = self.n_max + 1;
        for n_r in 0..nph {
            for n_l in 0..nph {
                let row = self.index_of(BasisState { level: a, n_r, n_l });
                let col = self.index_of(BasisState { level: b, n_r, n_l });
                op.mat[(row, col)] = Complex64::ONE;
            }
        }
        op
    }

    /// Polarized excitation-number operator
    /// `N_k = a_k^+ a_k + |X_k><X_k| + |B><B|`.
    ///
    /// The biexciton counts toward both polarizations, so `N_R + N_L`
    /// assigns it two excitations.
    pub fn excitation_number(&self, pol: Polarization) -> Operator {
        let mut op = Operator::zeros(self.dim);
        for state in self.states() {
            let photons = match pol {
                Polarization::R => state.n_r,
                Polarization::L => state.n_l,
            };
            let matter = match (state.level, pol) {
                (QdLevel::Xr, Polarization::R) | (QdLevel::Xl, Polarization::L) => 1,
                (QdLevel::B, _) => 1,
                _ => 0,
            };
            let i = self.index_of(state);
            op.mat[(i, i)] = Complex64::new((photons + matter) as f64, 0.0);
        }
        op
    }
}

/// Dense complex operator on the product basis.
///
/// Thin wrapper around a `faer` matrix carrying the basis dimension so that
/// operators from different truncations cannot be mixed silently.
#[derive(Clone, Debug)]
pub struct Operator {
    pub mat: Mat<Complex64>,
    dim: usize,
}

impl Operator {
    pub fn zeros(dim: usize) -> Operator {
        Operator {
            mat: Mat::zeros(dim, dim),
            dim,
        }
    }

    pub fn identity(dim: usize) -> Operator {
        let mut op = Operator::zeros(dim);
        for i in 0..dim {
            op.mat[(i, i)] = Complex64::ONE;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Hermitian adjoint.
    pub fn dagger(&self) -> Operator {
        let mut out = Operator::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.mat[(i, j)] = self.mat[(j, i)].conj();
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operators from different bases");
        crate::ensure_sequential_linalg();
        Operator {
            mat: &self.mat * &rhs.mat,
            dim: self.dim,
        }
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operators from different bases");
        Operator {
            mat: &self.mat + &rhs.mat,
            dim: self.dim,
        }
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operators from different bases");
        Operator {
            mat: &self.mat - &rhs.mat,
            dim: self.dim,
        }
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.mat[(i, j)] *= c;
            }
        }
        out
    }

    /// Commutator `[self, rhs]`.
    pub fn commutator(&self, rhs: &Operator) -> Operator {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.mat[(i, i)]).sum()
    }

    /// Largest entry magnitude (max norm).
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    /// Max-norm distance from Hermiticity, `max |M - M^+|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                m = m.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Apply to a state vector: `out = M v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::ZERO; self.dim];
        for j in 0..self.dim {
            let vj = v[j];
            if vj == Complex64::ZERO {
                continue;
            }
            for i in 0..self.dim {
                out[i] += self.mat[(i, j)] * vj;
            }
        }
        out
    }

    /// Exact nonzero entries as `(row, col, value)` triplets.
    pub fn nonzero_triplets(&self) -> Vec<(usize, usize, Complex64)> {
        let mut t = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self.mat[(i, j)];
                if z != Complex64::ZERO {
                    t.push((i, j, z));
                }
            }
        }
        t
    }

    /// Export all nonzero entries as CSV rows `row,col,re,im` (with header).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for (i, j, z) in self.nonzero_triplets() {
            writeln!(w, "{},{},{},{}", i, j, z.re, z.im)?;
        }
        Ok(())
    }
}
