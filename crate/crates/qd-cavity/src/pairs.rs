//! Cascade transition operators, the two-photon polarization density matrix,
//! and the entanglement measures (Wootters concurrence, EoF).
//!
//! The cascade emits photon 1 from a one-excitation polariton (the
//! `intermediate`) down to the ground state and photon 2 from a two-excitation
//! dressed state down to that polariton. The transition operator that creates
//! the `|nm>` pair through the branch polariton `|n_br>` is
//!
//! ```text
//! T(nm) = γ⁽ⁿ⁾_{G0; n_br} Σ_j γ⁽ᵐ⁾_{n_br; j} |G0><j|
//! ```
//!
//! with `j` running over all eight two-excitation dressed states (polarization
//! selection rules zero most terms). The pair state is the normalized Gram
//! matrix `ρ4[a][b] ∝ Tr[ρ_ss T_a† T_b]` over the ordered pair basis
//! `(|LR>, |RL>, |LL>, |RR>)`, first letter = photon 1.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Operator, Polarization};
use crate::dressed::{find, DressedLabel, DressedState, TransitionTable};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Which one-excitation polariton the cascade is filtered through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CascadeBranch {
    /// `|R+>`, `|L+>` intermediates; photon 1 at `ε₀ + g`.
    #[default]
    Upper,
    /// `|R->`, `|L->` intermediates; photon 1 at `ε₀ - g`.
    Lower,
}

impl CascadeBranch {
    /// The intermediate polariton of polarization `pol` on this branch.
    pub fn intermediate(self, pol: Polarization) -> DressedLabel {
        match (self, pol) {
            (CascadeBranch::Upper, Polarization::R) => DressedLabel::RPlus,
            (CascadeBranch::Upper, Polarization::L) => DressedLabel::LPlus,
            (CascadeBranch::Lower, Polarization::R) => DressedLabel::RMinus,
            (CascadeBranch::Lower, Polarization::L) => DressedLabel::LMinus,
        }
    }

    /// Photon-1 frequency as a detuning from `ε₀` (units `Γ`).
    pub fn omega1_detuning(self, g: f64) -> f64 {
        match self {
            CascadeBranch::Upper => g,
            CascadeBranch::Lower => -g,
        }
    }
}

impl std::fmt::Display for CascadeBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CascadeBranch::Upper => "upper",
            CascadeBranch::Lower => "lower",
        })
    }
}

impl std::str::FromStr for CascadeBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(CascadeBranch::Upper),
            "lower" => Ok(CascadeBranch::Lower),
            other => Err(Error::InvalidParams(format!(
                "unknown branch `{other}`; expected `upper` or `lower`"
            ))),
        }
    }
}

/// Ordered two-photon basis `(photon1, photon2)` polarizations.
pub const PAIR_BASIS: [(Polarization, Polarization); 4] = [
    (Polarization::L, Polarization::R), // |LR>
    (Polarization::R, Polarization::L), // |RL>
    (Polarization::L, Polarization::L), // |LL>
    (Polarization::R, Polarization::R), // |RR>
];

/// Column labels matching [`PAIR_BASIS`].
pub const PAIR_BASIS_LABELS: [&str; 4] = ["LR", "RL", "LL", "RR"];

/// Optional Lorentzian filter on the photon-2 (two-excitation → intermediate)
/// frequency. No filter is applied by default anywhere in the pipeline; the
/// bare Eq.-style amplitude sum is the documented behavior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyWindow {
    /// Filter center as a detuning from `ε₀` (units `Γ`).
    pub center: f64,
    /// Full width at half maximum (units `Γ`).
    pub fwhm: f64,
}

impl FrequencyWindow {
    /// Lorentzian weight, 1 at the center and 1/2 at `center ± fwhm/2`.
    pub fn weight(&self, detuning: f64) -> f64 {
        let hw = 0.5 * self.fwhm;
        hw * hw / ((detuning - self.center).powi(2) + hw * hw)
    }
}

fn transition_operator_impl(
    n: Polarization,
    m: Polarization,
    table: &TransitionTable,
    dressed: &[DressedState],
    branch: CascadeBranch,
    window: Option<&FrequencyWindow>,
) -> Operator {
    let g0 = find(dressed, DressedLabel::G0);
    let inter = find(dressed, branch.intermediate(n));
    let g1 = table.amplitude(DressedLabel::G0, inter.label, n);
    let mut t = Operator::zeros(g0.vector.len());
    for j in dressed.iter().filter(|s| s.manifold == 2) {
        let mut coeff = g1 * table.amplitude(inter.label, j.label, m);
        if let Some(w) = window {
            coeff *= w.weight(j.energy_shift - inter.energy_shift);
        }
        if coeff == Complex64::ZERO {
            continue;
        }
        for (r, &gr) in g0.vector.iter().enumerate() {
            if gr == Complex64::ZERO {
                continue;
            }
            for (c, &vc) in j.vector.iter().enumerate() {
                if vc != Complex64::ZERO {
                    t.mat[(r, c)] += coeff * gr * vc.conj();
                }
            }
        }
    }
    t
}

/// Transition operator `T(nm)` creating the `|nm>` photon pair via the
/// branch's `n`-polarized intermediate. Rank ≤ 1 with row structure
/// `|G0><·|`; zero wherever polarization selection forbids the path.
pub fn build_transition_operator(
    n: Polarization,
    m: Polarization,
    table: &TransitionTable,
    dressed: &[DressedState],
    branch: CascadeBranch,
) -> Operator {
    transition_operator_impl(n, m, table, dressed, branch, None)
}

/// [`build_transition_operator`] with a Lorentzian photon-2 frequency filter.
pub fn build_transition_operator_windowed(
    n: Polarization,
    m: Polarization,
    table: &TransitionTable,
    dressed: &[DressedState],
    branch: CascadeBranch,
    window: &FrequencyWindow,
) -> Operator {
    transition_operator_impl(n, m, table, dressed, branch, Some(window))
}

/// All four transition operators in [`PAIR_BASIS`] order.
pub fn build_transition_operators(
    table: &TransitionTable,
    dressed: &[DressedState],
    branch: CascadeBranch,
) -> [Operator; 4] {
    PAIR_BASIS.map(|(n, m)| build_transition_operator(n, m, table, dressed, branch))
}

/// Photon frequencies `(ω₁, ω₂)` of the branch-filtered cascade, as detunings
/// from `ε₀` (units `Γ`): `ω₁ = ±g`, `ω₂ = ω'_R + ω'_L - ω₁` (two-photon
/// energy conservation at the drive frequencies).
pub fn photon_frequencies(params: &ModelParams, branch: CascadeBranch) -> (f64, f64) {
    let omega1 = branch.omega1_detuning(params.g);
    (omega1, params.omega_r_det + params.omega_l_det - omega1)
}

/// 4×4 two-photon polarization density matrix in the ordered basis
/// `(|LR>, |RL>, |LL>, |RR>)`.
#[derive(Debug, Clone)]
pub struct PairDensityMatrix {
    /// Hermitian, unit-trace, PSD 4×4 matrix.
    pub rho4: [[Complex64; 4]; 4],
    /// Photon-1 frequency (detuning from `ε₀`, units `Γ`); 0 for synthetic
    /// matrices with no associated cascade.
    pub omega1: f64,
    /// Photon-2 frequency (detuning from `ε₀`, units `Γ`).
    pub omega2: f64,
    /// Unnormalized pair emission weight (trace before normalization).
    pub pair_flux: f64,
}

impl PairDensityMatrix {
    /// Hermitize and normalize a raw 4×4 matrix. Fails with
    /// [`Error::ZeroPairFlux`] when no diagonal weight exceeds `1e-300`.
    pub fn from_unnormalized(raw: [[Complex64; 4]; 4]) -> Result<Self> {
        let mut m = [[Complex64::ZERO; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                m[a][b] = 0.5 * (raw[a][b] + raw[b][a].conj());
            }
        }
        let flux: f64 = (0..4).map(|a| m[a][a].re).sum();
        let max_diag = (0..4).fold(0.0f64, |acc, a| acc.max(m[a][a].re));
        if !(flux.is_finite() && max_diag > 1e-300) {
            return Err(Error::ZeroPairFlux);
        }
        let inv = Complex64::new(1.0 / flux, 0.0);
        for row in &mut m {
            for z in row {
                *z *= inv;
            }
        }
        Ok(PairDensityMatrix {
            rho4: m,
            omega1: 0.0,
            omega2: 0.0,
            pair_flux: flux,
        })
    }

    /// Real diagonal `(p_LR, p_RL, p_LL, p_RR)`.
    pub fn diagonal(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|a| self.rho4[a][a].re)
    }

    /// Total weight on the cross-polarized `{|LR>, |RL>}` block.
    pub fn cross_polarized_weight(&self) -> f64 {
        self.rho4[0][0].re + self.rho4[1][1].re
    }

    /// Write as CSV rows `row,col,re,im` in the documented basis order.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for (a, row) in self.rho4.iter().enumerate() {
            for (b, z) in row.iter().enumerate() {
                writeln!(w, "{},{},{},{}", a, b, z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// Pair density matrix `ρ4[a][b] ∝ Tr[ρ T_a† T_b]`, Hermitized and normalized
/// to unit trace. `omega1`/`omega2` label the branch's filtered frequencies.
pub fn pair_density_matrix(
    rho: &Operator,
    t_ops: &[Operator; 4],
    omega1: f64,
    omega2: f64,
) -> Result<PairDensityMatrix> {
    let mut raw = [[Complex64::ZERO; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let v = rho.mul(&t_ops[a].dagger().mul(&t_ops[b])).trace();
            raw[a][b] = v;
            raw[b][a] = v.conj();
        }
    }
    let mut pair = PairDensityMatrix::from_unnormalized(raw)?;
    pair.omega1 = omega1;
    pair.omega2 = omega2;
    Ok(pair)
}

/// Spin-flip `σ_y ⊗ σ_y` in the `(LR, RL, LL, RR)` basis order.
const SPIN_FLIP: [[f64; 4]; 4] = [
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, -1.0, 0.0],
];

/// Wootters concurrence `C = max(0, λ₁ - λ₂ - λ₃ - λ₄)` from the decreasing
/// square roots of the eigenvalues of `ρ ρ̃`, `ρ̃ = (σy⊗σy) ρ̄ (σy⊗σy)`.
/// Eigenvalues are clipped into `[0, 1]` (they can dip below zero by rounding;
/// anything under `-1e-12` is logged). The result is clamped to `[0, 1]`.
pub fn concurrence(pair: &PairDensityMatrix) -> f64 {
    crate::ensure_sequential_linalg();
    let rho = &pair.rho4;
    // ρ̃ = F ρ̄ F with F real symmetric
    let mut flipped = [[Complex64::ZERO; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut s = Complex64::ZERO;
            for c in 0..4 {
                if SPIN_FLIP[a][c] == 0.0 {
                    continue;
                }
                for d in 0..4 {
                    if SPIN_FLIP[d][b] != 0.0 {
                        s += SPIN_FLIP[a][c] * rho[c][d].conj() * SPIN_FLIP[d][b];
                    }
                }
            }
            flipped[a][b] = s;
        }
    }
    let prod = Mat::<Complex64>::from_fn(4, 4, |i, j| {
        (0..4).map(|k| rho[i][k] * flipped[k][j]).sum()
    });
    let ev = prod
        .eigenvalues()
        .expect("4x4 eigenvalue computation cannot fail on finite input");
    let mut lam = [0.0f64; 4];
    for (l, z) in lam.iter_mut().zip(&ev) {
        if z.re < -1e-12 || z.im.abs() > 1e-8 {
            log::warn!("rho*rho_tilde eigenvalue {z} outside the PSD envelope; clipping");
        }
        // rho*rho_tilde is typically rank-deficient; its exact-zero
        // eigenvalues come back as O(eps) noise which sqrt would amplify
        // to O(sqrt(eps)) ~ 1e-8 errors in C. Zero them below a roundoff
        // floor (the matrix is trace-normalized, so the scale is 1).
        let re = if z.re < 64.0 * f64::EPSILON { 0.0 } else { z.re.min(1.0) };
        *l = re.sqrt();
    }
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = lam[0] - lam[1] - lam[2] - lam[3];
    // The eigensolve carries a few ulps of error, so a maximally entangled
    // state can land just inside 1. Snap roundoff-scale deviations onto the
    // boundary; anything physically sub-maximal sits far outside this window.
    if (c - 1.0).abs() <= 32.0 * f64::EPSILON {
        return 1.0;
    }
    c.clamp(0.0, 1.0)
}

/// Entanglement of formation of a concurrence value:
/// `h((1 + √(1-C²))/2)` with `h` the binary entropy (base 2).
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    if c == 1.0 {
        return 1.0;
    }
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    binary_entropy(x).clamp(0.0, 1.0)
}

/// Entanglement of formation of the pair state.
pub fn eof(pair: &PairDensityMatrix) -> f64 {
    eof_from_concurrence(concurrence(pair))
}

fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.log2()) - (1.0 - x) * (1.0 - x).log2()
}
