//! Lindblad master equation: superoperator assembly and steady state.
//!
//! The density matrix evolves as
//!
//! ```text
//! dρ/dt = L[ρ] = -i[H̃, ρ] + Σ_k r_k ( c_k ρ c_k^+ - ½{c_k^+ c_k, ρ} )
//! ```
//!
//! with six collapse channels: exciton decay `|G><X_R|`, `|G><X_L|` at rate
//! `γ_X`, biexciton decay `|X_R><B|`, `|X_L><B|` at rate `γ_B`, and cavity
//! leakage `a_R`, `a_L` at rate `Γ = 1`.
//!
//! The superoperator is stored dense over column-stacked density matrices
//! (`vec(ρ)[i + d·j] = ρ[i,j]`, so `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`), `d² × d²`
//! overall. The steady state solves `L vec(ρ) = 0` with the zero row replaced
//! by the trace constraint `Σ_i ρ[i,i] = 1`, via dense partial-pivoting LU.
//! The solution is Hermitized and its spectrum clipped: eigenvalues in
//! `[-1e-8, 0)` are set to zero (renormalizing), anything below `-1e-8`
//! is an error.

use faer::prelude::Solve;
use faer::Mat;
use num_complex::Complex64;

use crate::basis::{Operator, Polarization, ProductBasis, QdLevel};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Eigenvalues of `ρ_ss` below this are a genuine positivity failure.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// One collapse channel `√rate · op`.
pub struct CollapseChannel {
    pub rate: f64,
    pub op: Operator,
    /// Human-readable channel name for diagnostics.
    pub name: &'static str,
}

/// The six collapse channels of the model (zero-rate channels included so
/// the channel list has a fixed shape).
pub fn collapse_channels(basis: &ProductBasis, params: &ModelParams) -> Vec<CollapseChannel> {
    vec![
        CollapseChannel {
            rate: params.gamma_x,
            op: basis.qd_transition(QdLevel::G, QdLevel::Xr),
            name: "exciton decay X_R -> G",
        },
        CollapseChannel {
            rate: params.gamma_x,
            op: basis.qd_transition(QdLevel::G, QdLevel::Xl),
            name: "exciton decay X_L -> G",
        },
        CollapseChannel {
            rate: params.gamma_b,
            op: basis.qd_transition(QdLevel::Xr, QdLevel::B),
            name: "biexciton decay B -> X_R",
        },
        CollapseChannel {
            rate: params.gamma_b,
            op: basis.qd_transition(QdLevel::Xl, QdLevel::B),
            name: "biexciton decay B -> X_L",
        },
        CollapseChannel {
            rate: 1.0,
            op: basis.annihilation(Polarization::R),
            name: "cavity leak a_R",
        },
        CollapseChannel {
            rate: 1.0,
            op: basis.annihilation(Polarization::L),
            name: "cavity leak a_L",
        },
    ]
}

/// Dense Lindblad superoperator over column-stacked density matrices.
pub struct Liouvillian {
    /// `d² × d²` matrix acting on `vec(ρ)`.
    pub mat: Mat<Complex64>,
    dim: usize,
}

impl Liouvillian {
    /// Hilbert-space dimension `d` (the matrix is `d² × d²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Apply to a density matrix: `out = L[ρ]`, both as flat `vec(ρ)`.
    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim * self.dim;
        assert_eq!(v.len(), n);
        let mut out = vec![Complex64::ZERO; n];
        for c in 0..n {
            let vc = v[c];
            if vc == Complex64::ZERO {
                continue;
            }
            for r in 0..n {
                out[r] += self.mat[(r, c)] * vc;
            }
        }
        out
    }
}

/// Superoperator term `ρ -> A ρ B`, added as `scale · (Bᵀ ⊗ A)` from sparse
/// triplets of `A` and `B`.
fn add_sandwich(
    l: &mut Mat<Complex64>,
    d: usize,
    a: &[(usize, usize, Complex64)],
    b: &[(usize, usize, Complex64)],
    scale: Complex64,
) {
    for &(i, k, av) in a {
        let sa = scale * av;
        for &(lb, j, bv) in b {
            l[(i + d * j, k + d * lb)] += sa * bv;
        }
    }
}

fn identity_triplets(d: usize) -> Vec<(usize, usize, Complex64)> {
    (0..d).map(|i| (i, i, Complex64::ONE)).collect()
}

/// Assemble the dense Liouvillian for a Hamiltonian and collapse channels.
pub fn build_liouvillian(h: &Operator, channels: &[CollapseChannel]) -> Liouvillian {
    let d = h.dim();
    let mut mat = Mat::<Complex64>::zeros(d * d, d * d);
    let id = identity_triplets(d);
    let ht = h.nonzero_triplets();
    let minus_i = Complex64::new(0.0, -1.0);
    // -i(HρI - IρH)
    add_sandwich(&mut mat, d, &ht, &id, minus_i);
    add_sandwich(&mut mat, d, &id, &ht, -minus_i);
    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let r = Complex64::new(ch.rate, 0.0);
        let c = ch.op.nonzero_triplets();
        let cdc = ch.op.dagger().mul(&ch.op).nonzero_triplets();
        let cd: Vec<_> = c.iter().map(|&(i, j, v)| (j, i, v.conj())).collect();
        // r (c ρ c^+) - r/2 (c^+c ρ) - r/2 (ρ c^+c)
        add_sandwich(&mut mat, d, &c, &cd, r);
        add_sandwich(&mut mat, d, &cdc, &id, -r * 0.5);
        add_sandwich(&mut mat, d, &id, &cdc, -r * 0.5);
    }
    Liouvillian { mat, dim: d }
}

/// Steady state of the Liouvillian with solver diagnostics.
pub struct SteadyState {
    /// Hermitized, positivity-clipped, unit-trace steady-state density matrix.
    pub rho: Operator,
    /// Max-norm of `L vec(ρ)` for the returned ρ (before hygiene).
    pub residual: f64,
    /// `|tr ρ - 1|` of the raw linear-system solution.
    pub trace_error: f64,
    /// Max-norm Hermiticity defect of the raw solution.
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the Hermitized ρ (before clipping).
    pub min_eigenvalue: f64,
    /// Whether any negative eigenvalue was clipped to zero.
    pub clipped: bool,
}

/// Solve `L vec(ρ) = 0, tr ρ = 1` by trace-row replacement and dense LU.
pub fn steady_state(liou: &Liouvillian) -> Result<SteadyState> {
    let d = liou.dim();
    let n = d * d;

    crate::ensure_sequential_linalg();
    let mut a = liou.mat.clone();
    for c in 0..n {
        a[(0, c)] = Complex64::ZERO;
    }
    for k in 0..d {
        a[(0, k + d * k)] = Complex64::ONE;
    }
    let mut b = Mat::<Complex64>::zeros(n, 1);
    b[(0, 0)] = Complex64::ONE;

    let lu = a.partial_piv_lu();
    let x = lu.solve(&b);

    let mut rho = Operator::zeros(d);
    for j in 0..d {
        for i in 0..d {
            let v = x[(i + d * j, 0)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::SingularSteadyState(
                    "non-finite solution; the null space is likely degenerate".into(),
                ));
            }
            rho.mat[(i, j)] = v;
        }
    }

    // residual against the *original* Liouvillian (including its row 0)
    let flat: Vec<Complex64> = (0..n).map(|r| x[(r, 0)]).collect();
    let residual = liou
        .apply_vec(&flat)
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if residual > 1e-6 {
        return Err(Error::SingularSteadyState(format!(
            "Liouvillian residual {residual:.3e}; steady state is not unique or the \
             system is too ill-conditioned"
        )));
    }

    let hermiticity_defect = rho.hermiticity_defect();
    let trace_error = (rho.trace() - Complex64::ONE).norm();

    // hygiene: Hermitize, check/clip the spectrum, renormalize
    let mut herm = Operator::zeros(d);
    for i in 0..d {
        for j in 0..d {
            herm.mat[(i, j)] = 0.5 * (rho.mat[(i, j)] + rho.mat[(j, i)].conj());
        }
    }
    let eig = herm
        .mat
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::InternalInconsistency(format!("rho eigensolve failed: {e:?}")))?;
    let min_eigenvalue = (0..d).fold(f64::INFINITY, |m, k| m.min(eig.S()[k].re));
    if min_eigenvalue < -PSD_TOLERANCE {
        return Err(Error::InternalInconsistency(format!(
            "steady state has eigenvalue {min_eigenvalue:.3e} < -{PSD_TOLERANCE:.0e}"
        )));
    }
    let clipped = min_eigenvalue < 0.0;
    if clipped {
        let u = eig.U();
        let mut rebuilt = Operator::zeros(d);
        for k in 0..d {
            let lam = eig.S()[k].re.max(0.0);
            if lam == 0.0 {
                continue;
            }
            for i in 0..d {
                let uik = u[(i, k)] * lam;
                for j in 0..d {
                    rebuilt.mat[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        herm = rebuilt;
    }
    let tr = herm.trace().re;
    if !(tr.is_finite() && tr > 0.0) {
        return Err(Error::SingularSteadyState(format!("trace {tr} after hygiene")));
    }
    let herm = herm.scale(Complex64::new(1.0 / tr, 0.0));

    Ok(SteadyState {
        rho: herm,
        residual,
        trace_error,
        hermiticity_defect,
        min_eigenvalue,
        clipped,
    })
}

/// Total steady-state population sitting on the truncation shell
/// (`n_R = n_max` or `n_L = n_max`). Large values mean the photon-number
/// cutoff is biting and `n_max` should be raised.
pub fn shell_population(basis: &ProductBasis, rho: &Operator) -> f64 {
    basis
        .states()
        .filter(|s| s.n_r == basis.n_max() || s.n_l == basis.n_max())
        .map(|s| {
            let i = basis.index_of(s);
            rho.mat[(i, i)].re
        })
        .sum()
}

/// Population threshold above which the truncation warning fires.
pub const SHELL_WARN_THRESHOLD: f64 = 1e-4;
