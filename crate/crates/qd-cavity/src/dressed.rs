//! Dressed-state ladder of the undriven QD-cavity system.
//!
//! `H₀` conserves both polarized excitation numbers, so it block-diagonalizes
//! over `(N_R, N_L)` sectors. The first three excitation manifolds hold:
//!
//! * manifold 0: the ground state `|G0>`;
//! * manifold 1: two polariton doublets `|R±>`, `|L±>` split by `±g`
//!   (vacuum Rabi splitting `2g`);
//! * manifold 2: two co-polarized doublets `|RR±>`, `|LL±>` split by `±√2 g`,
//!   and the cross-polarized quartet — the singlet
//!   `|S> = (|X_R,0,1> - |X_L,1,0>)/√2` pinned at shift 0 plus three
//!   "triplet" states `|T_j>` with shifts `-a_j`.
//!
//! The `a_j` are `Δ_B` times the three real roots of
//!
//! ```text
//! f(x) = x³ - x² - (p+q)x + p,    p = 2(g/Δ_B)², q = 2(g_B/Δ_B)²
//! ```
//!
//! sorted ascending. For `g, g_B, Δ_B > 0` they obey
//! `a₁ < 0 < a₂ < Δ_B < a₃` and `a₁ < -√2 g`, `a₃ > √2 g`.
//!
//! Emitting a `k`-polarized photon connects adjacent manifolds with amplitude
//! `γ_{n;m} = <n| a_k |m>`; [`transition_table`] collects all of them. The
//! amplitude between the lower `L` polariton and `|T1>` vanishes at the
//! coupling [`g_minus`], which closes the `T1` excitation path and opens a
//! gap in the entanglement map.

use faer::{Mat, Side};
use log::warn;
use num_complex::Complex64;

use crate::basis::{BasisState, Operator, Polarization, ProductBasis, QdLevel};
use crate::error::{Error, Result};
use crate::model::{build_h0, ModelParams};

/// Labels of the thirteen dressed states in manifolds 0-2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DressedLabel {
    G0,
    RMinus,
    RPlus,
    LMinus,
    LPlus,
    RrMinus,
    RrPlus,
    LlMinus,
    LlPlus,
    S,
    T1,
    T2,
    T3,
}

impl DressedLabel {
    pub const ALL: [DressedLabel; 13] = [
        DressedLabel::G0,
        DressedLabel::RMinus,
        DressedLabel::RPlus,
        DressedLabel::LMinus,
        DressedLabel::LPlus,
        DressedLabel::RrMinus,
        DressedLabel::RrPlus,
        DressedLabel::LlMinus,
        DressedLabel::LlPlus,
        DressedLabel::S,
        DressedLabel::T1,
        DressedLabel::T2,
        DressedLabel::T3,
    ];

    pub(crate) fn slot(self) -> usize {
        Self::ALL.iter().position(|&l| l == self).unwrap()
    }

    /// Mirror image under the R <-> L polarization swap (S and the triplets
    /// map onto themselves).
    pub fn mirror(self) -> DressedLabel {
        match self {
            DressedLabel::RMinus => DressedLabel::LMinus,
            DressedLabel::RPlus => DressedLabel::LPlus,
            DressedLabel::LMinus => DressedLabel::RMinus,
            DressedLabel::LPlus => DressedLabel::RPlus,
            DressedLabel::RrMinus => DressedLabel::LlMinus,
            DressedLabel::RrPlus => DressedLabel::LlPlus,
            DressedLabel::LlMinus => DressedLabel::RrMinus,
            DressedLabel::LlPlus => DressedLabel::RrPlus,
            other => other,
        }
    }
}

impl std::fmt::Display for DressedLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DressedLabel::G0 => "G0",
            DressedLabel::RMinus => "R-",
            DressedLabel::RPlus => "R+",
            DressedLabel::LMinus => "L-",
            DressedLabel::LPlus => "L+",
            DressedLabel::RrMinus => "RR-",
            DressedLabel::RrPlus => "RR+",
            DressedLabel::LlMinus => "LL-",
            DressedLabel::LlPlus => "LL+",
            DressedLabel::S => "S",
            DressedLabel::T1 => "T1",
            DressedLabel::T2 => "T2",
            DressedLabel::T3 => "T3",
        };
        write!(f, "{s}")
    }
}

/// One dressed eigenstate of `H₀`.
#[derive(Clone, Debug)]
pub struct DressedState {
    pub label: DressedLabel,
    /// Total excitation number `N_R + N_L` of the sector.
    pub manifold: usize,
    /// Eigenvalue minus `manifold · ε₀` (units `Γ`).
    pub energy_shift: f64,
    /// Amplitudes in product-basis order, normalized, phase-fixed so the
    /// largest-magnitude component is real positive.
    pub vector: Vec<Complex64>,
}

/// `a_j` shifts from the analytic cubic, sorted ascending (units `Γ`).
///
/// Uses the trigonometric three-real-root branch (the cubic always has three
/// real roots for positive couplings) followed by one Newton polish per root.
/// At the boundaries `g = 0` / `g_B = 0` the cubic factors exactly
/// (`x(x² - x - q)` and `(x - 1)(x² - p)` respectively) and those
/// factorizations are used instead, so degenerate roots come out exact.
pub fn cubic_shifts(g: f64, g_b: f64, delta_b: f64) -> [f64; 3] {
    let p = 2.0 * (g / delta_b).powi(2);
    let q = 2.0 * (g_b / delta_b).powi(2);
    let mut roots = if p == 0.0 {
        let r = 0.5 * (1.0 + (1.0 + 4.0 * q).sqrt());
        [0.0, r, -q / r]
    } else if q == 0.0 {
        [1.0, p.sqrt(), -p.sqrt()]
    } else {
        // depressed form: x = t + 1/3,  t^3 + pt*t + qt = 0
        let pt = -(p + q) - 1.0 / 3.0;
        let qt = -2.0 / 27.0 - (p + q) / 3.0 + p;
        // pt < -1/3 always, so the trig branch is well-defined
        let m = 2.0 * (-pt / 3.0).sqrt();
        let arg = (3.0 * qt / (pt * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut xs = [0.0f64; 3];
        for (k, x) in xs.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *x = t + 1.0 / 3.0;
            // Newton polish
            for _ in 0..2 {
                let f = *x * *x * *x - *x * *x - (p + q) * *x + p;
                let df = 3.0 * *x * *x - 2.0 * *x - (p + q);
                if df != 0.0 {
                    *x -= f / df;
                }
            }
        }
        xs
    };
    for r in roots.iter_mut() {
        *r *= delta_b;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// The coupling at which the `L- <-> T1` transition amplitude vanishes:
/// `g₋ = ¼ (√(Δ_B² + 16 g_B²) - Δ_B)`.
pub fn g_minus(delta_b: f64, g_b: f64) -> f64 {
    0.25 * ((delta_b * delta_b + 16.0 * g_b * g_b).sqrt() - delta_b)
}

fn polarized_excitations(state: &BasisState) -> (usize, usize) {
    let n_r = state.n_r
        + usize::from(state.level == QdLevel::Xr)
        + usize::from(state.level == QdLevel::B);
    let n_l = state.n_l
        + usize::from(state.level == QdLevel::Xl)
        + usize::from(state.level == QdLevel::B);
    (n_r, n_l)
}

/// Indices of all product states in the `(N_R, N_L)` sector.
fn sector_indices(basis: &ProductBasis, n_r: usize, n_l: usize) -> Vec<usize> {
    basis
        .states()
        .filter(|s| polarized_excitations(s) == (n_r, n_l))
        .map(|s| basis.index_of(s))
        .collect()
}

/// Fix the global phase so the largest-magnitude component (lowest index on
/// ties) is real positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-15 {
            best_mag = m;
            best = i;
        }
    }
    if best_mag == 0.0 {
        return;
    }
    let phase = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Diagonalize one sector of `H₀`, returning `(shift, vector)` pairs in
/// ascending eigenvalue order, with vectors embedded in the full basis.
fn eig_sector(
    h0: &Operator,
    basis: &ProductBasis,
    ids: &[usize],
    manifold: usize,
    eps0: f64,
) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let n = ids.len();
    crate::ensure_sequential_linalg();
    let block = Mat::<Complex64>::from_fn(n, n, |i, j| h0.mat[(ids[i], ids[j])]);
    let eig = block
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::InternalInconsistency(format!("sector eigensolve failed: {e:?}")))?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = vec![Complex64::ZERO; basis.dim()];
        for (i, &ii) in ids.iter().enumerate() {
            v[ii] = eig.U()[(i, k)];
        }
        fix_phase(&mut v);
        out.push((eig.S()[k].re - manifold as f64 * eps0, v));
    }
    Ok(out)
}

/// Diagonalize manifolds 0-2 of `H₀` and label the thirteen dressed states.
///
/// Requires `n_max >= 2` so the two-excitation sectors are complete and the
/// manifolds are truncation-independent. The singlet is identified by overlap
/// (`>= 1 - 1e-8`) with `(|X_R,0,1> - |X_L,1,0>)/√2`; triplets are ordered by
/// descending shift (`T1` highest, i.e. ascending `a_j`). Degenerate triplet
/// pairs (shift gap `< 1e-9`) are reported via `log::warn` and ordered
/// deterministically by descending biexciton weight.
pub fn diagonalize_manifolds(
    basis: &ProductBasis,
    params: &ModelParams,
) -> Result<Vec<DressedState>> {
    if basis.n_max() < 2 {
        return Err(Error::InvalidParams(
            "dressed-state analysis needs n_max >= 2 (two-excitation manifold)".into(),
        ));
    }
    let h0 = build_h0(basis, params);
    let eps0 = params.eps0;
    let mut states = Vec::with_capacity(13);

    let mut push = |label, manifold, (shift, vector): (f64, Vec<Complex64>)| {
        states.push(DressedState {
            label,
            manifold,
            energy_shift: shift,
            vector,
        });
    };

    // manifold 0
    let g0 = eig_sector(&h0, basis, &sector_indices(basis, 0, 0), 0, eps0)?;
    push(DressedLabel::G0, 0, g0.into_iter().next().unwrap());

    // manifold 1 doublets, ascending shift = (-, +)
    for (sector, labels) in [
        ((1, 0), [DressedLabel::RMinus, DressedLabel::RPlus]),
        ((0, 1), [DressedLabel::LMinus, DressedLabel::LPlus]),
    ] {
        let pairs = eig_sector(&h0, basis, &sector_indices(basis, sector.0, sector.1), 1, eps0)?;
        for (label, pair) in labels.into_iter().zip(pairs) {
            push(label, 1, pair);
        }
    }

    // manifold 2 co-polarized doublets
    for (sector, labels) in [
        ((2, 0), [DressedLabel::RrMinus, DressedLabel::RrPlus]),
        ((0, 2), [DressedLabel::LlMinus, DressedLabel::LlPlus]),
    ] {
        let pairs = eig_sector(&h0, basis, &sector_indices(basis, sector.0, sector.1), 2, eps0)?;
        for (label, pair) in labels.into_iter().zip(pairs) {
            push(label, 2, pair);
        }
    }

    // cross-polarized quartet: singlet + triplets
    let quartet = eig_sector(&h0, basis, &sector_indices(basis, 1, 1), 2, eps0)?;
    let i_xr = basis.index_of(BasisState { level: QdLevel::Xr, n_r: 0, n_l: 1 });
    let i_xl = basis.index_of(BasisState { level: QdLevel::Xl, n_r: 1, n_l: 0 });
    let i_b = basis.index_of(BasisState { level: QdLevel::B, n_r: 0, n_l: 0 });
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;

    let mut singlet = None;
    let mut triplets = Vec::new();
    for pair in quartet {
        let overlap = (pair.1[i_xr] * inv_sqrt2 - pair.1[i_xl] * inv_sqrt2).norm();
        if overlap >= 1.0 - 1e-8 {
            if singlet.is_some() {
                return Err(Error::InternalInconsistency(
                    "two cross-polarized states match the singlet".into(),
                ));
            }
            singlet = Some(pair);
        } else {
            triplets.push(pair);
        }
    }
    let singlet = singlet.ok_or_else(|| {
        Error::InternalInconsistency("no cross-polarized state matches the singlet".into())
    })?;
    if triplets.len() != 3 {
        return Err(Error::InternalInconsistency(format!(
            "expected 3 triplet states, found {}",
            triplets.len()
        )));
    }
    // T1..T3 by descending shift (ascending a_j = -shift)
    triplets.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for w in triplets.windows(2) {
        if (w[0].0 - w[1].0).abs() < 1e-9 {
            warn!(
                "degenerate triplet shifts ({:.3e} vs {:.3e}); ordering by biexciton weight",
                w[0].0, w[1].0
            );
        }
    }
    // deterministic tie-break inside (numerically) degenerate groups
    triplets.sort_by(|a, b| {
        if (a.0 - b.0).abs() < 1e-9 {
            b.1[i_b].norm().partial_cmp(&a.1[i_b].norm()).unwrap()
        } else {
            b.0.partial_cmp(&a.0).unwrap()
        }
    });

    push(DressedLabel::S, 2, singlet);
    for (label, pair) in [DressedLabel::T1, DressedLabel::T2, DressedLabel::T3]
        .into_iter()
        .zip(triplets)
    {
        push(label, 2, pair);
    }

    Ok(states)
}

/// Find a dressed state by label.
pub fn find<'a>(states: &'a [DressedState], label: DressedLabel) -> &'a DressedState {
    states
        .iter()
        .find(|s| s.label == label)
        .expect("all 13 dressed labels are always present")
}

/// Table of one-photon transition amplitudes `γ_{n;m}^(k) = <n| a_k |m>`
/// between dressed states of adjacent manifolds (`m` one excitation above
/// `n`). Non-adjacent entries are zero.
pub struct TransitionTable {
    gamma: Vec<[Complex64; 2]>, // [lower slot * 13 + upper slot][pol]
}

impl TransitionTable {
    /// Amplitude for emitting a `pol` photon in the `upper -> lower` step.
    pub fn amplitude(
        &self,
        lower: DressedLabel,
        upper: DressedLabel,
        pol: Polarization,
    ) -> Complex64 {
        self.gamma[lower.slot() * 13 + upper.slot()][pol as usize]
    }
}

/// Build the transition table from the dressed states.
pub fn transition_table(basis: &ProductBasis, states: &[DressedState]) -> TransitionTable {
    let a_ops = [
        basis.annihilation(Polarization::R),
        basis.annihilation(Polarization::L),
    ];
    let mut gamma = vec![[Complex64::ZERO; 2]; 13 * 13];
    for upper in states {
        for (pol_idx, a) in a_ops.iter().enumerate() {
            let lowered = a.apply(&upper.vector);
            for lower in states {
                if lower.manifold + 1 != upper.manifold {
                    continue;
                }
                let amp: Complex64 = lower
                    .vector
                    .iter()
                    .zip(&lowered)
                    .map(|(l, w)| l.conj() * w)
                    .sum();
                gamma[lower.label.slot() * 13 + upper.label.slot()][pol_idx] = amp;
            }
        }
    }
    TransitionTable { gamma }
}
