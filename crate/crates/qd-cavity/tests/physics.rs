//! Cross-validation of the steady-state pipeline against independent routes:
//! direct time propagation, truncation refinement, drive-power scaling, and
//! the R/L mirror at the density-matrix level.

mod support;

use num_complex::Complex64;
use qd_cavity::{
    build_basis, build_liouvillian, build_transition_operators, collapse_channels,
    pair_density_matrix, rotating_frame_hamiltonian, steady_state, transition_table, BasisState,
    CascadeBranch, ModelParams, QdLevel,
};
use support::{max_abs_diff, LindbladRhs};

fn fig3_point() -> ModelParams {
    ModelParams::default() // the wide-scan working point is the default
}

fn solve(params: &ModelParams, n_max: usize) -> (qd_cavity::SteadyState, usize) {
    let basis = build_basis(n_max).unwrap();
    let h = rotating_frame_hamiltonian(&basis, params).unwrap();
    let liou = build_liouvillian(&h, &collapse_channels(&basis, params));
    (steady_state(&liou).unwrap(), basis.dim())
}

/// The LU steady state must be a fixed point of an independently built
/// (sparse, operator-algebra) RK4 integrator: propagating it for 20 cavity
/// lifetimes should not move it. Validates Liouvillian assembly + solve at
/// once; any sign error or mis-stacked index would drift at O(1) rates.
#[test]
fn steady_state_is_stationary_under_independent_rk4() {
    let cases = [
        fig3_point(),
        ModelParams {
            g: 12.0,
            omega_r_det: 9.0,
            omega_l_det: -12.0,
            e_r: 0.03,
            e_l: 0.015,
            ..fig3_point()
        },
    ];
    for params in cases {
        let basis = build_basis(2).unwrap();
        let (ss, dim) = solve(&params, 2);
        let rhs = LindbladRhs::new(&basis, &params);
        let propagated = rhs.propagate(&ss.rho, 20.0, 4000);
        let drift = max_abs_diff(&propagated, &ss.rho, dim);
        assert!(
            drift <= 1e-6,
            "steady state drifted {drift:.3e} under RK4 at g={}",
            params.g
        );
    }
}

/// Refining the photon-number truncation must not move the observables:
/// n_max = 2 -> 3 changes EoF by ~1e-8 at the default working point, and the
/// outermost-shell population shrinks by orders of magnitude.
#[test]
fn observables_are_truncation_converged() {
    let params = fig3_point();
    let eval = |n_max: usize| {
        let basis = build_basis(n_max).unwrap();
        let (ss, _) = solve(&params, n_max);
        let dressed = qd_cavity::diagonalize_manifolds(&basis, &params).unwrap();
        let table = transition_table(&basis, &dressed);
        let t_ops = build_transition_operators(&table, &dressed, CascadeBranch::Upper);
        let pair = pair_density_matrix(&ss.rho, &t_ops, 0.0, 0.0).unwrap();
        (
            qd_cavity::eof(&pair),
            qd_cavity::shell_population(&basis, &ss.rho),
        )
    };
    let (eof2, shell2) = eval(2);
    let (eof3, shell3) = eval(3);
    assert!(
        (eof2 - eof3).abs() < 1e-6,
        "EoF moved {:.3e} under refinement",
        (eof2 - eof3).abs()
    );
    assert!(shell2 < 1e-4, "shell population {shell2:.3e} too large");
    assert!(shell3 < shell2 * 1e-2, "refined shell {shell3:.3e} did not shrink");
}

/// Two-photon flux through the cascade is bilinear in the drive *powers*:
/// scaling one drive amplitude by s scales the pair flux by s² (each photon
/// of the pair is fed by one polarized drive at this working point).
#[test]
fn pair_flux_scales_with_single_drive_power() {
    let base = fig3_point();
    let flux = |e_r_scale: f64| {
        let params = ModelParams {
            e_r: base.e_r * e_r_scale,
            ..base.clone()
        };
        let basis = build_basis(2).unwrap();
        let (ss, _) = solve(&params, 2);
        let dressed = qd_cavity::diagonalize_manifolds(&basis, &params).unwrap();
        let table = transition_table(&basis, &dressed);
        let t_ops = build_transition_operators(&table, &dressed, CascadeBranch::Upper);
        pair_density_matrix(&ss.rho, &t_ops, 0.0, 0.0)
            .unwrap()
            .pair_flux
    };
    let full = flux(1.0);
    let half = flux(0.5);
    let ratio = half / full;
    assert!(
        (ratio - 0.25).abs() < 0.25 * 0.05,
        "flux ratio {ratio} not within 5% of s² = 0.25"
    );
}

/// Swapping R <-> L everywhere (drive amplitudes and detunings) must map the
/// steady state onto itself under the basis relabeling (X_R <-> X_L,
/// n_R <-> n_L) — elementwise, not just in derived scalars.
#[test]
fn steady_state_mirrors_under_polarization_swap() {
    let params = ModelParams {
        e_r: 0.01,
        e_l: 0.02,
        omega_r_det: 17.0,
        omega_l_det: -12.0,
        ..fig3_point()
    };
    let mirrored = ModelParams {
        e_r: params.e_l,
        e_l: params.e_r,
        omega_r_det: params.omega_l_det,
        omega_l_det: params.omega_r_det,
        ..params.clone()
    };

    let basis = build_basis(2).unwrap();
    let (ss_a, dim) = solve(&params, 2);
    let (ss_b, _) = solve(&mirrored, 2);

    let swap_level = |level| match level {
        QdLevel::Xr => QdLevel::Xl,
        QdLevel::Xl => QdLevel::Xr,
        other => other,
    };
    let perm: Vec<usize> = basis
        .states()
        .map(|s| {
            basis.index_of(BasisState {
                level: swap_level(s.level),
                n_r: s.n_l,
                n_l: s.n_r,
            })
        })
        .collect();

    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let a: Complex64 = ss_a.rho.mat[(i, j)];
            let b = ss_b.rho.mat[(perm[i], perm[j])];
            worst = worst.max((a - b).norm());
        }
    }
    assert!(worst <= 1e-12, "mirror defect {worst:.3e}");
}
