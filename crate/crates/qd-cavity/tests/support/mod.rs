//! Shared helpers for the integration suites: an independent Lindblad
//! time propagator built on sparse operator triplets. It never touches the
//! vectorized superoperator or the LU solve, so agreement with `steady_state`
//! cross-validates both the Liouvillian assembly and the linear solve.

use num_complex::Complex64;
use qd_cavity::{collapse_channels, rotating_frame_hamiltonian, ModelParams, Operator, ProductBasis};

type Triplets = Vec<(usize, usize, Complex64)>;

/// Right-hand side of the master equation in sparse-triplet form.
pub struct LindbladRhs {
    dim: usize,
    h: Triplets,
    /// per channel: (rate, c, c†c)
    channels: Vec<(f64, Triplets, Triplets)>,
}

impl LindbladRhs {
    pub fn new(basis: &ProductBasis, params: &ModelParams) -> LindbladRhs {
        let h = rotating_frame_hamiltonian(basis, params).expect("valid params");
        let channels = collapse_channels(basis, params)
            .into_iter()
            .filter(|c| c.rate > 0.0)
            .map(|c| {
                let cd_c = c.op.dagger().mul(&c.op);
                (c.rate, c.op.nonzero_triplets(), cd_c.nonzero_triplets())
            })
            .collect();
        LindbladRhs {
            dim: basis.dim(),
            h: h.nonzero_triplets(),
            channels,
        }
    }

    // Each integration-test binary compiles this module independently, so a
    // helper used by only one of them still counts as live code overall.
    #[allow(dead_code)]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dρ/dt = -i[H,ρ] + Σ r (c ρ c† − ½{c†c, ρ})`, ρ row-major `d×d`.
    fn apply(&self, rho: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::ZERO; d * d];

        // -i (Hρ - ρH)
        for &(i, k, v) in &self.h {
            for j in 0..d {
                // (Hρ)[i][j] += v ρ[k][j]
                out[i * d + j] -= Complex64::I * v * rho[k * d + j];
                // (ρH)[j][k] += ρ[j][i] v  => subtracting adds +i ρ[j][i] v
                out[j * d + k] += Complex64::I * rho[j * d + i] * v;
            }
        }

        for (rate, c, cdc) in &self.channels {
            // r · c ρ c†: (cρc†)[i][l] = Σ_{k,j} c[i,k] ρ[k,j] conj(c[l,j])
            for &(i, k, v) in c {
                for &(l, j, w) in c {
                    out[i * d + l] += rate * v * rho[k * d + j] * w.conj();
                }
            }
            // −r/2 {c†c, ρ}
            for &(i, k, v) in cdc {
                for j in 0..d {
                    out[i * d + j] -= 0.5 * rate * v * rho[k * d + j];
                    out[j * d + k] -= 0.5 * rate * rho[j * d + i] * v;
                }
            }
        }
        out
    }

    /// Classic fixed-step RK4 from `rho0` over total time `t`, `n_steps` steps.
    pub fn propagate(&self, rho0: &Operator, t: f64, n_steps: usize) -> Vec<Complex64> {
        let d = self.dim;
        let dt = t / n_steps as f64;
        let mut rho: Vec<Complex64> = (0..d * d)
            .map(|idx| rho0.mat[(idx / d, idx % d)])
            .collect();
        let mut scratch = vec![Complex64::ZERO; d * d];
        for _ in 0..n_steps {
            let k1 = self.apply(&rho);
            axpy(&mut scratch, &rho, &k1, 0.5 * dt);
            let k2 = self.apply(&scratch);
            axpy(&mut scratch, &rho, &k2, 0.5 * dt);
            let k3 = self.apply(&scratch);
            axpy(&mut scratch, &rho, &k3, dt);
            let k4 = self.apply(&scratch);
            for idx in 0..d * d {
                rho[idx] += dt / 6.0 * (k1[idx] + 2.0 * (k2[idx] + k3[idx]) + k4[idx]);
            }
        }
        rho
    }
}

/// `out = base + scale * delta`, elementwise.
fn axpy(out: &mut [Complex64], base: &[Complex64], delta: &[Complex64], scale: f64) {
    for ((o, b), d) in out.iter_mut().zip(base).zip(delta) {
        *o = b + scale * d;
    }
}

/// Largest elementwise distance between a propagated flat matrix and an
/// `Operator`.
pub fn max_abs_diff(flat: &[Complex64], op: &Operator, dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            worst = worst.max((flat[i * dim + j] - op.mat[(i, j)]).norm());
        }
    }
    worst
}
