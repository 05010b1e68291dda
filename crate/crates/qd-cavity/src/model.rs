//! System Hamiltonian, CW drive, and the rotating-frame generator.
//!
//! Energies are measured in units of the cavity leak rate `Γ = 1`; only
//! detunings from the exciton energy `ε₀` matter for the physics, so the
//! default `eps0 = 0` works entirely in detunings. A nonzero `eps0` may be
//! supplied to make the bare spectrum explicit; it cancels exactly in the
//! rotating frame.
//!
//! # Coupling convention
//!
//! The exciton-photon coupling is co-polarized, the biexciton-photon coupling
//! is **cross-polarized**:
//!
//! ```text
//! H_c = i g  ( |G><X_R| a_R^+ + |G><X_L| a_L^+ )
//!     + i g_B( |X_R><B| a_L^+ + |X_L><B| a_R^+ ) + h.c.
//! ```
//!
//! i.e. recombining the biexciton through the `X_R` branch emits an
//! L-polarized photon and vice versa. This is the convention under which the
//! polarized excitation numbers `N_R`, `N_L` (biexciton counting toward both)
//! are conserved separately, the two-drive rotating frame is exact, and the
//! cross-polarized two-excitation block contains the singlet
//! `(|X_R,0,1> - |X_L,1,0>)/√2` as an eigenstate.
//!
//! The CW drive enters as `H_drive = √Γ Σ_k E_k (i a_k^+ - i a_k)` with real
//! amplitudes `E_k` in units of `√Γ`, and the rotating frame at the two drive
//! frequencies is `H̃ = H₀ - Ω_R N_R - Ω_L N_L + H_drive`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{Operator, Polarization, ProductBasis, QdLevel};
use crate::error::{Error, Result};

/// Model parameters, all in units of the cavity leak rate `Γ = 1`
/// (drive amplitudes in units of `√Γ`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Exciton-photon coupling `g`.
    pub g: f64,
    /// Biexciton-photon coupling `g_B`.
    pub g_b: f64,
    /// Biexciton binding energy `Δ_B`.
    pub delta_b: f64,
    /// Exciton radiative decay `γ_X` (each exciton channel).
    pub gamma_x: f64,
    /// Biexciton radiative decay `γ_B` (each biexciton channel).
    pub gamma_b: f64,
    /// Right-polarized drive amplitude `E_R`.
    pub e_r: f64,
    /// Left-polarized drive amplitude `E_L`.
    pub e_l: f64,
    /// Right drive detuning `Ω'_R = Ω_R - ε₀`.
    pub omega_r_det: f64,
    /// Left drive detuning `Ω'_L = Ω_L - ε₀`.
    pub omega_l_det: f64,
    /// Bare exciton energy `ε₀`; `0` means "work in detunings" (default).
    pub eps0: f64,
}

impl Default for ModelParams {
    /// Defaults follow the wide-scan working point: `Δ_B = g_B = 15`,
    /// `γ_X = γ_B = 0.1`, `E_R = E_L = 0.02`, drives locked to the lower
    /// polariton two-photon resonance (`Ω'_R = g`, `Ω'_L = -g`) at `g = 15`.
    fn default() -> Self {
        ModelParams {
            g: 15.0,
            g_b: 15.0,
            delta_b: 15.0,
            gamma_x: 0.1,
            gamma_b: 0.1,
            e_r: 0.02,
            e_l: 0.02,
            omega_r_det: 15.0,
            omega_l_det: -15.0,
            eps0: 0.0,
        }
    }
}

impl ModelParams {
    /// Validate physical ranges. Couplings must be positive (the dressed-state
    /// labeling degenerates at `g = 0` or `g_B = 0`), rates and amplitudes
    /// nonnegative, everything finite. When an explicit `eps0 > 0` is given,
    /// the weak-coupling regime `g, g_B <= eps0 / 10` is enforced, since the
    /// master equation is only valid there.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g", self.g),
            ("g_b", self.g_b),
            ("delta_b", self.delta_b),
            ("gamma_x", self.gamma_x),
            ("gamma_b", self.gamma_b),
            ("e_r", self.e_r),
            ("e_l", self.e_l),
            ("omega_r_det", self.omega_r_det),
            ("omega_l_det", self.omega_l_det),
            ("eps0", self.eps0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if self.g <= 0.0 || self.g_b <= 0.0 || self.delta_b <= 0.0 {
            return Err(Error::InvalidParams(
                "g, g_b and delta_b must be positive".into(),
            ));
        }
        if self.gamma_x < 0.0 || self.gamma_b < 0.0 {
            return Err(Error::InvalidParams("decay rates must be >= 0".into()));
        }
        if self.e_r < 0.0 || self.e_l < 0.0 {
            return Err(Error::InvalidParams("drive amplitudes must be >= 0".into()));
        }
        if self.eps0 < 0.0 {
            return Err(Error::InvalidParams("eps0 must be >= 0".into()));
        }
        if self.eps0 > 0.0 && (self.g > self.eps0 / 10.0 || self.g_b > self.eps0 / 10.0) {
            return Err(Error::InvalidParams(format!(
                "weak-coupling regime violated: g = {}, g_B = {} vs eps0/10 = {}",
                self.g,
                self.g_b,
                self.eps0 / 10.0
            )));
        }
        Ok(())
    }

    /// Look up a parameter by its config/sweep name.
    pub fn get(&self, name: &str) -> Result<f64> {
        Ok(match name {
            "g" => self.g,
            "g_b" => self.g_b,
            "delta_b" => self.delta_b,
            "gamma_x" => self.gamma_x,
            "gamma_b" => self.gamma_b,
            "e_r" => self.e_r,
            "e_l" => self.e_l,
            "omega_r_det" => self.omega_r_det,
            "omega_l_det" => self.omega_l_det,
            "eps0" => self.eps0,
            _ => return Err(Error::UnknownParam(name.into())),
        })
    }

    /// Set a parameter by its config/sweep name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "g" => self.g = value,
            "g_b" => self.g_b = value,
            "delta_b" => self.delta_b = value,
            "gamma_x" => self.gamma_x = value,
            "gamma_b" => self.gamma_b = value,
            "e_r" => self.e_r = value,
            "e_l" => self.e_l = value,
            "omega_r_det" => self.omega_r_det = value,
            "omega_l_det" => self.omega_l_det = value,
            "eps0" => self.eps0 = value,
            _ => return Err(Error::UnknownParam(name.into())),
        }
        Ok(())
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Undriven system Hamiltonian `H₀` (lab frame).
///
/// Diagonal: `ε₀ (n_R + n_L)` plus `ε₀` for each exciton and `2ε₀ - Δ_B` for
/// the biexciton. Off-diagonal: the co-polarized exciton and cross-polarized
/// biexciton couplings (see module docs).
pub fn build_h0(basis: &ProductBasis, params: &ModelParams) -> Operator {
    let mut h = Operator::zeros(basis.dim());
    for state in basis.states() {
        let mut e = params.eps0 * (state.n_r + state.n_l) as f64;
        e += match state.level {
            QdLevel::G => 0.0,
            QdLevel::Xr | QdLevel::Xl => params.eps0,
            QdLevel::B => 2.0 * params.eps0 - params.delta_b,
        };
        let i = basis.index_of(state);
        h.mat[(i, i)] = Complex64::new(e, 0.0);
    }

    let g = Complex64::new(params.g, 0.0);
    let g_b = Complex64::new(params.g_b, 0.0);
    let couplings = [
        // i g |G><X_R| a_R^+ , i g |G><X_L| a_L^+
        (QdLevel::G, QdLevel::Xr, Polarization::R, g),
        (QdLevel::G, QdLevel::Xl, Polarization::L, g),
        // cross-polarized: i g_B |X_R><B| a_L^+ , i g_B |X_L><B| a_R^+
        (QdLevel::Xr, QdLevel::B, Polarization::L, g_b),
        (QdLevel::Xl, QdLevel::B, Polarization::R, g_b),
    ];
    for (to, from, pol, strength) in couplings {
        let term = basis
            .qd_transition(to, from)
            .mul(&basis.annihilation(pol).dagger())
            .scale(I * strength);
        h = h.add(&term).add(&term.dagger());
    }
    h
}

/// CW drive in the rotating frame,
/// `H_drive = √Γ Σ_k E_k (i a_k^+ - i a_k)` with `Γ = 1`.
pub fn build_drive(basis: &ProductBasis, params: &ModelParams) -> Operator {
    let mut h = Operator::zeros(basis.dim());
    for (pol, amp) in [(Polarization::R, params.e_r), (Polarization::L, params.e_l)] {
        if amp == 0.0 {
            continue;
        }
        let term = basis
            .annihilation(pol)
            .dagger()
            .scale(I * Complex64::new(amp, 0.0));
        h = h.add(&term).add(&term.dagger());
    }
    h
}

/// Rotating-frame Hamiltonian
/// `H̃ = H₀ - Ω_R N_R - Ω_L N_L + H_drive`, `Ω_k = ε₀ + Ω'_k`.
///
/// The frame is generated by the polarized excitation numbers, so it is exact
/// only if `H₀` conserves both; this is checked (commutator max-norm
/// `<= 1e-10`) and violations surface as [`Error::InternalInconsistency`].
pub fn rotating_frame_hamiltonian(
    basis: &ProductBasis,
    params: &ModelParams,
) -> Result<Operator> {
    let h0 = build_h0(basis, params);
    let n_r = basis.excitation_number(Polarization::R);
    let n_l = basis.excitation_number(Polarization::L);
    for (n_op, name) in [(&n_r, "N_R"), (&n_l, "N_L")] {
        let defect = h0.commutator(n_op).max_abs();
        if defect > 1e-10 {
            return Err(Error::InternalInconsistency(format!(
                "[H0, {name}] max-norm {defect:.3e} > 1e-10; drive frame is not exact"
            )));
        }
    }
    let omega_r = Complex64::new(params.eps0 + params.omega_r_det, 0.0);
    let omega_l = Complex64::new(params.eps0 + params.omega_l_det, 0.0);
    Ok(h0
        .sub(&n_r.scale(omega_r))
        .sub(&n_l.scale(omega_l))
        .add(&build_drive(basis, params)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, BasisState};

    fn state(level: QdLevel, n_r: usize, n_l: usize) -> BasisState {
        BasisState { level, n_r, n_l }
    }

    #[test]
    fn h0_matrix_elements_match_convention() {
        let basis = build_basis(2).unwrap();
        let p = ModelParams {
            g: 3.0,
            g_b: 5.0,
            delta_b: 11.0,
            eps0: 0.0,
            ..ModelParams::default()
        };
        let h = build_h0(&basis, &p);
        assert!(h.hermiticity_defect() < 1e-14);

        // <G,1,0| H |X_R,0,0> = i g
        let row = basis.index_of(state(QdLevel::G, 1, 0));
        let col = basis.index_of(state(QdLevel::Xr, 0, 0));
        assert_eq!(h.mat[(row, col)], Complex64::new(0.0, 3.0));

        // cross-polarized biexciton branch: <X_R,0,1| H |B,0,0> = i g_B
        let row = basis.index_of(state(QdLevel::Xr, 0, 1));
        let col = basis.index_of(state(QdLevel::B, 0, 0));
        assert_eq!(h.mat[(row, col)], Complex64::new(0.0, 5.0));
        // and the co-polarized element is absent
        let row = basis.index_of(state(QdLevel::Xr, 1, 0));
        assert_eq!(h.mat[(row, col)], Complex64::ZERO);

        // photon-number scaling: <G,2,0| H |X_R,1,0> = i g sqrt(2)
        let row = basis.index_of(state(QdLevel::G, 2, 0));
        let col = basis.index_of(state(QdLevel::Xr, 1, 0));
        assert!((h.mat[(row, col)] - Complex64::new(0.0, 3.0 * 2f64.sqrt())).norm() < 1e-14);

        // biexciton diagonal at eps0 = 0 is -delta_b
        let ib = basis.index_of(state(QdLevel::B, 0, 0));
        assert_eq!(h.mat[(ib, ib)], Complex64::new(-11.0, 0.0));
    }

    #[test]
    fn h0_conserves_polarized_excitations() {
        let basis = build_basis(2).unwrap();
        let p = ModelParams::default();
        let h = build_h0(&basis, &p);
        for pol in Polarization::BOTH {
            let n = basis.excitation_number(pol);
            assert!(h.commutator(&n).max_abs() < 1e-12);
        }
    }

    #[test]
    fn drive_matrix_element_and_hermiticity() {
        let basis = build_basis(2).unwrap();
        let p = ModelParams {
            e_r: 0.02,
            e_l: 0.05,
            ..ModelParams::default()
        };
        let hd = build_drive(&basis, &p);
        assert!(hd.hermiticity_defect() < 1e-15);
        // <G,1,0| H_drive |G,0,0> = i E_R sqrt(1)
        let row = basis.index_of(state(QdLevel::G, 1, 0));
        assert_eq!(hd.mat[(row, 0)], Complex64::new(0.0, 0.02));
        let row = basis.index_of(state(QdLevel::G, 0, 1));
        assert_eq!(hd.mat[(row, 0)], Complex64::new(0.0, 0.05));
    }

    #[test]
    fn rotating_frame_diagonal_in_detunings() {
        let basis = build_basis(2).unwrap();
        let p = ModelParams {
            omega_r_det: 4.0,
            omega_l_det: -6.0,
            delta_b: 11.0,
            e_r: 0.0,
            e_l: 0.0,
            ..ModelParams::default()
        };
        let ht = rotating_frame_hamiltonian(&basis, &p).unwrap();
        // |X_R,0,0>: -omega_r_det. |B,0,0>: -delta_b - w_r - w_l.
        let i = basis.index_of(state(QdLevel::Xr, 0, 0));
        assert!((ht.mat[(i, i)] - Complex64::new(-4.0, 0.0)).norm() < 1e-12);
        let i = basis.index_of(state(QdLevel::B, 0, 0));
        assert!((ht.mat[(i, i)] - Complex64::new(-11.0 - 4.0 + 6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotating_frame_invariant_under_eps0_shift() {
        let basis = build_basis(2).unwrap();
        let mut p = ModelParams::default();
        let h_det = rotating_frame_hamiltonian(&basis, &p).unwrap();
        p.eps0 = 1000.0;
        p.g = 15.0; // 15 <= 1000/10, still weak coupling
        let h_eps = rotating_frame_hamiltonian(&basis, &p).unwrap();
        assert!(h_det.sub(&h_eps).max_abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let mut p = ModelParams::default();
        p.g = 0.0;
        assert!(p.validate().is_err());
        let mut p = ModelParams::default();
        p.gamma_x = -0.1;
        assert!(p.validate().is_err());
        let mut p = ModelParams::default();
        p.e_l = f64::NAN;
        assert!(p.validate().is_err());
        // weak-coupling guard only bites for explicit eps0
        let mut p = ModelParams::default();
        p.eps0 = 100.0;
        assert!(p.validate().is_err());
        p.eps0 = 1e4;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn param_name_round_trip() {
        let mut p = ModelParams::default();
        p.set("omega_r_det", 2.5).unwrap();
        assert_eq!(p.get("omega_r_det").unwrap(), 2.5);
        assert!(p.set("bogus", 1.0).is_err());
        assert!(p.get("bogus").is_err());
    }
}
