//! Exact benchmark: unitary Gaussian evolution of the two system modes plus
//! two finite discretized baths in the rotating frame.
//!
//! The full Hamiltonian is number conserving, H = Σ h_mn a†_m a_n with a
//! real symmetric one-body matrix `h` over the mode layout
//! `[bath_h modes | system h | system c | bath_c modes]`. In unit-scaled
//! quadratures the generator of d r/dt is A = [[0, h], [−h, 0]], so the
//! propagator is the orthogonal symplectic
//!
//!   S(t) = [[cos(ht), sin(ht)], [−sin(ht), cos(ht)]]
//!
//! evaluated through one eigendecomposition h = Q Λ Qᵀ. Heat currents are
//! bath-energy rates, J_α = −d/dt Σ_k ω_k ⟨b†_k b_k⟩ with lab-frame ω_k,
//! computed analytically from dC/dt = AC + CAᵀ (no finite differencing).
//!
//! Covariance matrices cross the module boundary in the crate-wide
//! convention: bath modes carry quadrature scaling 1, the two system modes
//! carry Ω_h and Ω_c, matching the states produced by the master-equation
//! descriptions.

use ndarray::{Array1, Array2};

use crate::engine::{bose_einstein, Bath, EngineParams};
use crate::gaussian::{cross_coherence, mode_occupation, CovarianceMatrix};
use crate::linalg::{eigh_real, matmul};
use crate::report::{ExactMeta, Method, SteadyReport};
use crate::{Error, Result};

/// Hard cap on the total mode count accepted by [`assemble_dynamics`].
pub const DEFAULT_MODE_CAP: usize = 4096;

/// One finite bath: n+1 oscillators with ω_k = (k/n)·ω_cut and Ohmic
/// couplings γ_k = √(η k)·(ω_cut/n), η = κ_ref/(2π Ω_ref), so that
/// γ_k² = ρ(ω_k)·Δω reproduces the continuum spectral density.
#[derive(Debug, Clone)]
pub struct BathDiscretization {
    pub n: usize,
    pub omega_cut: f64,
    pub kappa_ref: f64,
    pub omega_ref: f64,
    frequencies: Vec<f64>,
    couplings: Vec<f64>,
}

impl BathDiscretization {
    /// Number of oscillators, n + 1.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lab-frame mode frequencies ω_k.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Couplings γ_k to the system mode.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn eta(&self) -> f64 {
        self.kappa_ref / (2.0 * std::f64::consts::PI * self.omega_ref)
    }
}

/// Uniform discretization of an Ohmic bath up to `omega_cut`.
/// `kappa_ref = 0` is allowed and produces a fully decoupled bath.
pub fn discretize_bath(
    kappa_ref: f64,
    omega_ref: f64,
    n: usize,
    omega_cut: f64,
) -> Result<BathDiscretization> {
    if n < 1 {
        return Err(Error::BadBathSize(n));
    }
    if !(omega_cut > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega_cut",
            value: omega_cut,
        });
    }
    if !(omega_ref > 0.0) {
        return Err(Error::InvalidParameter {
            name: "omega_ref",
            value: omega_ref,
        });
    }
    if !(kappa_ref >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "kappa_ref",
            value: kappa_ref,
        });
    }
    let eta = kappa_ref / (2.0 * std::f64::consts::PI * omega_ref);
    let step = omega_cut / n as f64;
    let frequencies: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64 * omega_cut).collect();
    let couplings: Vec<f64> = (0..=n).map(|k| (eta * k as f64).sqrt() * step).collect();
    Ok(BathDiscretization {
        n,
        omega_cut,
        kappa_ref,
        omega_ref,
        frequencies,
        couplings,
    })
}

/// The compound system: parameters, both baths and the one-body matrix of
/// the rotating-frame Hamiltonian.
#[derive(Debug, Clone)]
pub struct CompoundModel {
    params: EngineParams,
    bath_h: BathDiscretization,
    bath_c: BathDiscretization,
    h: Array2<f64>,
}

impl CompoundModel {
    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    pub fn bath(&self, bath: Bath) -> &BathDiscretization {
        match bath {
            Bath::Hot => &self.bath_h,
            Bath::Cold => &self.bath_c,
        }
    }

    /// Total number of modes N = (n_h + 1) + 2 + (n_c + 1).
    pub fn total_modes(&self) -> usize {
        self.bath_h.len() + 2 + self.bath_c.len()
    }

    /// Index of the hot system mode in the layout.
    pub fn sys_h(&self) -> usize {
        self.bath_h.len()
    }

    /// Index of the cold system mode.
    pub fn sys_c(&self) -> usize {
        self.bath_h.len() + 1
    }

    /// Mode indices of one bath.
    pub fn bath_range(&self, bath: Bath) -> std::ops::Range<usize> {
        match bath {
            Bath::Hot => 0..self.bath_h.len(),
            Bath::Cold => self.bath_h.len() + 2..self.total_modes(),
        }
    }

    /// Real symmetric one-body matrix of the rotating-frame Hamiltonian.
    pub fn one_body_matrix(&self) -> &Array2<f64> {
        &self.h
    }

    /// Dense 2N×2N generator A = [[0, h], [−h, 0]] of the quadrature flow.
    pub fn generator(&self) -> Array2<f64> {
        let n = self.total_modes();
        let mut a = Array2::zeros((2 * n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                a[[i, n + j]] = self.h[[i, j]];
                a[[n + i, j]] = -self.h[[i, j]];
            }
        }
        a
    }

    /// Quadrature scalings carried by compound covariance matrices: 1 for
    /// every bath mode, Ω_α for the system modes.
    pub fn mode_scalings(&self) -> Vec<f64> {
        let n = self.total_modes();
        let mut f = vec![1.0; n];
        f[self.sys_h()] = self.params.omega_h;
        f[self.sys_c()] = self.params.omega_c;
        f
    }

    /// Lab-frame frequency of every mode (bath ω_k; system Ω_α).
    pub fn lab_frequencies(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.total_modes());
        w.extend_from_slice(self.bath_h.frequencies());
        w.push(self.params.omega_h);
        w.push(self.params.omega_c);
        w.extend_from_slice(self.bath_c.frequencies());
        w
    }

    /// Eigendecomposition of the one-body matrix, reusable across times.
    pub fn spectral(&self) -> Result<SpectralPropagator> {
        let (evals, evecs) = eigh_real(&self.h)?;
        Ok(SpectralPropagator { evals, evecs })
    }

    /// Product thermal initial state: every bath mode at its lab-frame
    /// occupation n_B(ω_k, T_α) (the decoupled k = 0 mode at zero), the
    /// system modes at n_B(Ω_α, T_α).
    pub fn initial_state(&self) -> Result<CovarianceMatrix> {
        let mut occupations = Vec::with_capacity(self.total_modes());
        for &w in self.bath_h.frequencies() {
            occupations.push(if w > 0.0 {
                bose_einstein(w, self.params.kt_h)
            } else {
                0.0
            });
        }
        occupations.push(bose_einstein(self.params.omega_h, self.params.kt_h));
        occupations.push(bose_einstein(self.params.omega_c, self.params.kt_c));
        for &w in self.bath_c.frequencies() {
            occupations.push(if w > 0.0 {
                bose_einstein(w, self.params.kt_c)
            } else {
                0.0
            });
        }
        crate::gaussian::thermal_covariance(&self.mode_scalings(), &occupations)
    }
}

/// Product thermal initial state of a compound model; see
/// [`CompoundModel::initial_state`].
pub fn initial_compound_state(model: &CompoundModel) -> Result<CovarianceMatrix> {
    model.initial_state()
}

/// Builds the compound model with the default mode cap.
pub fn assemble_dynamics(
    p: &EngineParams,
    bath_h: &BathDiscretization,
    bath_c: &BathDiscretization,
) -> Result<CompoundModel> {
    assemble_dynamics_with_cap(p, bath_h, bath_c, DEFAULT_MODE_CAP)
}

/// Builds the compound model, rejecting mode counts above `cap`.
pub fn assemble_dynamics_with_cap(
    p: &EngineParams,
    bath_h: &BathDiscretization,
    bath_c: &BathDiscretization,
    cap: usize,
) -> Result<CompoundModel> {
    p.validate()?;
    let total = bath_h.len() + 2 + bath_c.len();
    if total > cap {
        return Err(Error::DimensionCap {
            requested: total,
            cap,
        });
    }
    let mut h = Array2::zeros((total, total));
    let sys_h = bath_h.len();
    let sys_c = sys_h + 1;
    // Bath h: free terms ω_k − Ω_h and couplings to the hot system mode.
    for (k, (&w, &gamma)) in bath_h
        .frequencies()
        .iter()
        .zip(bath_h.couplings())
        .enumerate()
    {
        h[[k, k]] = w - p.omega_h;
        h[[k, sys_h]] = gamma;
        h[[sys_h, k]] = gamma;
    }
    // System: in the rotating frame only the exchange coupling remains.
    h[[sys_h, sys_c]] = p.g;
    h[[sys_c, sys_h]] = p.g;
    // Bath c.
    for (k, (&w, &gamma)) in bath_c
        .frequencies()
        .iter()
        .zip(bath_c.couplings())
        .enumerate()
    {
        let idx = sys_c + 1 + k;
        h[[idx, idx]] = w - p.omega_c;
        h[[idx, sys_c]] = gamma;
        h[[sys_c, idx]] = gamma;
    }
    Ok(CompoundModel {
        params: *p,
        bath_h: bath_h.clone(),
        bath_c: bath_c.clone(),
        h,
    })
}

/// Eigendecomposition h = Q Λ Qᵀ from which propagators at any time follow.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    evals: Array1<f64>,
    evecs: Array2<f64>,
}

impl SpectralPropagator {
    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.evals
    }

    /// Dense 2N×2N propagator S(t) = exp(A t).
    pub fn matrix(&self, t: f64) -> Array2<f64> {
        let n = self.evals.len();
        let q = &self.evecs;
        let cos_l = Array2::from_diag(&self.evals.mapv(|l| (l * t).cos()));
        let sin_l = Array2::from_diag(&self.evals.mapv(|l| (l * t).sin()));
        let cos_h = matmul(&matmul(q, &cos_l), &q.t().to_owned());
        let sin_h = matmul(&matmul(q, &sin_l), &q.t().to_owned());
        let mut s = Array2::zeros((2 * n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                s[[i, j]] = cos_h[[i, j]];
                s[[i, n + j]] = sin_h[[i, j]];
                s[[n + i, j]] = -sin_h[[i, j]];
                s[[n + i, n + j]] = cos_h[[i, j]];
            }
        }
        s
    }
}

/// Splits a 2N×2N covariance into its (xx, xp, px, pp) blocks.
fn split_blocks(c: &Array2<f64>) -> [Array2<f64>; 4] {
    let n = c.nrows() / 2;
    let xx = c.slice(ndarray::s![..n, ..n]).to_owned();
    let xp = c.slice(ndarray::s![..n, n..]).to_owned();
    let px = c.slice(ndarray::s![n.., ..n]).to_owned();
    let pp = c.slice(ndarray::s![n.., n..]).to_owned();
    [xx, xp, px, pp]
}

/// Rescales a compound covariance between the crate convention (system
/// modes scaled by Ω_α) and unit scaling. `to_unit` selects the direction.
fn rescale_system_modes(model: &CompoundModel, c: &mut Array2<f64>, to_unit: bool) {
    let n = model.total_modes();
    let scale = |omega: f64| -> (f64, f64) {
        let root = omega.sqrt();
        if to_unit {
            (root, 1.0 / root) // x_u = √Ω x_s, p_u = p_s/√Ω
        } else {
            (1.0 / root, root)
        }
    };
    for (idx, omega) in [
        (model.sys_h(), model.params.omega_h),
        (model.sys_c(), model.params.omega_c),
    ] {
        let (fx, fp) = scale(omega);
        for j in 0..2 * n {
            c[[idx, j]] *= fx;
            c[[n + idx, j]] *= fp;
        }
        for i in 0..2 * n {
            c[[i, idx]] *= fx;
            c[[i, n + idx]] *= fp;
        }
    }
}

fn check_compound_dims(model: &CompoundModel, c0: &CovarianceMatrix) -> Result<()> {
    if c0.modes() != model.total_modes() {
        return Err(Error::BadDimension(c0.dim()));
    }
    Ok(())
}

/// Evolves a compound covariance for time `t ≥ 0`: C(t) = S C₀ Sᵀ.
pub fn evolve(model: &CompoundModel, c0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
    check_compound_dims(model, c0)?;
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
        });
    }
    let spectral = model.spectral()?;
    let mut work = c0.matrix().to_owned();
    rescale_system_modes(model, &mut work, true);
    let s = spectral.matrix(t);
    let mut evolved = matmul(&matmul(&s, &work), &s.t().to_owned());
    rescale_system_modes(model, &mut evolved, false);
    // Re-symmetrize rounding noise before constructing the result.
    let dim = evolved.nrows();
    for i in 0..dim {
        for j in 0..i {
            let v = 0.5 * (evolved[[i, j]] + evolved[[j, i]]);
            evolved[[i, j]] = v;
            evolved[[j, i]] = v;
        }
    }
    CovarianceMatrix::from_parts(c0.frequencies().to_vec(), evolved)
}

/// Lab-frame bath energy E_α = Σ_k ω_k ⟨b†_k b_k⟩ and the heat current
/// J_α = −dE_α/dt evaluated from dC/dt = AC + CAᵀ.
pub fn bath_energy_and_current(
    model: &CompoundModel,
    c: &CovarianceMatrix,
    bath: Bath,
) -> Result<(f64, f64)> {
    check_compound_dims(model, c)?;
    let n = model.total_modes();
    let mut work = c.matrix().to_owned();
    rescale_system_modes(model, &mut work, true);
    let range = model.bath_range(bath);
    let (sys, disc) = match bath {
        Bath::Hot => (model.sys_h(), &model.bath_h),
        Bath::Cold => (model.sys_c(), &model.bath_c),
    };
    let mut energy = 0.0;
    let mut current = 0.0;
    for (k, idx) in range.enumerate() {
        let w = disc.frequencies()[k];
        let gamma = disc.couplings()[k];
        let occupation = 0.5 * (work[[idx, idx]] + work[[n + idx, n + idx]] - 1.0);
        energy += w * occupation;
        // d⟨b†b⟩/dt = γ (C_xp[k, s] − C_xp[s, k]); only the coupling to the
        // system mode survives in the commutator.
        let rate = gamma * (work[[idx, n + sys]] - work[[sys, n + idx]]);
        current -= w * rate;
    }
    Ok((energy, current))
}

/// Rotating-frame energy ⟨H⟩ = Σ_ij h_ij Re⟨a†_i a_j⟩; conserved by the
/// exact evolution.
pub fn rotating_energy(model: &CompoundModel, c: &CovarianceMatrix) -> Result<f64> {
    check_compound_dims(model, c)?;
    let n = model.total_modes();
    let mut work = c.matrix().to_owned();
    rescale_system_modes(model, &mut work, true);
    let h = &model.h;
    let mut e = 0.0;
    for i in 0..n {
        for j in 0..n {
            if h[[i, j]] != 0.0 {
                let re_k = 0.5 * (work[[i, j]] + work[[n + i, n + j]]);
                e += h[[i, j]] * re_k;
            }
        }
        e -= 0.5 * h[[i, i]];
    }
    Ok(e)
}

/// Output power from a reduced two-mode system state,
/// P = −2g(Ω_h − Ω_c) Im⟨a†_h a_c⟩.
pub fn exact_power(p: &EngineParams, c_reduced: &CovarianceMatrix) -> Result<f64> {
    if c_reduced.dim() != 4 {
        return Err(Error::NotTwoMode(c_reduced.dim()));
    }
    let s = cross_coherence(c_reduced, 0, 1)?;
    Ok(-2.0 * p.g * p.drive() * s.im)
}

/// Discretization, horizon and windowing controls of a benchmark run.
#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Bath discretization index (n + 1 oscillators per bath).
    pub n: usize,
    /// Bath cutoff ω_cut.
    pub omega_cut: f64,
    /// Horizon t = horizon_factor / max(κ_h, κ_c).
    pub horizon_factor: f64,
    /// Fraction of the horizon over which currents are averaged.
    pub window_fraction: f64,
    /// Number of samples across the window.
    pub window_samples: usize,
    /// Cap on the total mode count.
    pub mode_cap: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            n: 400,
            omega_cut: 3.0,
            horizon_factor: 20.0,
            window_fraction: 0.2,
            window_samples: 64,
            mode_cap: DEFAULT_MODE_CAP,
        }
    }
}

/// Elementwise rotation of eigenbasis covariance blocks by S̃(t) whose
/// blocks are diagonal: X(t) etc. from cᵢcⱼ, cᵢsⱼ, ... combinations.
struct EigenbasisState {
    x: Array2<f64>,
    y: Array2<f64>,
    z: Array2<f64>,
    w: Array2<f64>,
}

impl EigenbasisState {
    fn rotate(&self, cos_l: &[f64], sin_l: &[f64]) -> EigenbasisState {
        let n = cos_l.len();
        let mut x = Array2::zeros((n, n));
        let mut y = Array2::zeros((n, n));
        let mut z = Array2::zeros((n, n));
        let mut w = Array2::zeros((n, n));
        for i in 0..n {
            let (ci, si) = (cos_l[i], sin_l[i]);
            for j in 0..n {
                let (cj, sj) = (cos_l[j], sin_l[j]);
                let (x0, y0, z0, w0) = (
                    self.x[[i, j]],
                    self.y[[i, j]],
                    self.z[[i, j]],
                    self.w[[i, j]],
                );
                x[[i, j]] = ci * cj * x0 + ci * sj * y0 + si * cj * z0 + si * sj * w0;
                y[[i, j]] = -ci * sj * x0 + ci * cj * y0 - si * sj * z0 + si * cj * w0;
                z[[i, j]] = -si * cj * x0 - si * sj * y0 + ci * cj * z0 + ci * sj * w0;
                w[[i, j]] = si * sj * x0 - si * cj * y0 - ci * sj * z0 + ci * cj * w0;
            }
        }
        EigenbasisState { x, y, z, w }
    }
}

/// Full benchmark run: evolve to the horizon, average currents and the
/// reduced system state over the trailing window.
pub fn exact_steady_report(p: &EngineParams, opts: &ExactOptions) -> Result<SteadyReport> {
    p.validate()?;
    if !(opts.window_fraction > 0.0 && opts.window_fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "window_fraction",
            value: opts.window_fraction,
        });
    }
    if opts.window_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "window_samples",
            value: opts.window_samples as f64,
        });
    }
    let bath_h = discretize_bath(p.kappa_h, p.omega_h, opts.n, opts.omega_cut)?;
    let bath_c = discretize_bath(p.kappa_c, p.omega_c, opts.n, opts.omega_cut)?;
    let model = assemble_dynamics_with_cap(p, &bath_h, &bath_c, opts.mode_cap)?;
    let horizon = opts.horizon_factor / p.kappa_h.max(p.kappa_c);
    // The discrete bath rephases after ~2πn/ω_cut; past that the run is
    // meaningless.
    let recurrence_estimate = 2.0 * std::f64::consts::PI * opts.n as f64 / opts.omega_cut;
    let recurrence_warning = horizon > recurrence_estimate;

    let spectral = model.spectral()?;
    let q = &spectral.evecs;
    let qt = q.t().to_owned();
    let nm = model.total_modes();

    let c0 = model.initial_state()?;
    let mut work = c0.matrix().to_owned();
    rescale_system_modes(&model, &mut work, true);
    let [xx, xp, px, pp] = split_blocks(&work);
    let tilde = EigenbasisState {
        x: matmul(&qt, &matmul(&xx, q)),
        y: matmul(&qt, &matmul(&xp, q)),
        z: matmul(&qt, &matmul(&px, q)),
        w: matmul(&qt, &matmul(&pp, q)),
    };

    // W̃_α = Qᵀ diag(w_α) Q with lab frequencies on bath α's modes.
    let weights = |bath: Bath| -> Array2<f64> {
        let mut scaled = q.to_owned();
        let range = model.bath_range(bath);
        let freqs = model.bath(bath).frequencies();
        for m in 0..nm {
            let w = if range.contains(&m) {
                freqs[m - range.start]
            } else {
                0.0
            };
            for col in 0..nm {
                scaled[[m, col]] *= w;
            }
        }
        matmul(&qt, &scaled)
    };
    let w_h = weights(Bath::Hot);
    let w_c = weights(Bath::Cold);

    let lambda = spectral.evals.as_slice().expect("contiguous eigenvalues");
    // J_α = −½ Tr(W̃_α (dC̃_xx + dC̃_pp)) with
    // (dC̃_xx + dC̃_pp)[i,j] = (λ_i − λ_j)(C̃_px − C̃_xp)[i,j].
    let current = |state: &EigenbasisState, w: &Array2<f64>| -> f64 {
        let mut j = 0.0;
        for i in 0..nm {
            for k in 0..nm {
                let d = (lambda[k] - lambda[i]) * (state.z[[k, i]] - state.y[[k, i]]);
                j += w[[i, k]] * d;
            }
        }
        -0.5 * j
    };

    let (sh, sc) = (model.sys_h(), model.sys_c());
    let rh = q.row(sh).to_owned();
    let rc = q.row(sc).to_owned();
    let bilinear = |m: &Array2<f64>, a: &Array1<f64>, b: &Array1<f64>| -> f64 {
        let mb = m.dot(b);
        a.dot(&mb)
    };

    let t_start = horizon * (1.0 - opts.window_fraction);
    let samples = opts.window_samples;
    let mut j_h_sum = 0.0;
    let mut j_c_sum = 0.0;
    let mut reduced_sum = Array2::<f64>::zeros((4, 4));
    for s_idx in 0..samples {
        let t = t_start + (horizon - t_start) * s_idx as f64 / (samples - 1) as f64;
        let cos_l: Vec<f64> = lambda.iter().map(|&l| (l * t).cos()).collect();
        let sin_l: Vec<f64> = lambda.iter().map(|&l| (l * t).sin()).collect();
        let state = tilde.rotate(&cos_l, &sin_l);
        j_h_sum += current(&state, &w_h);
        j_c_sum += current(&state, &w_c);

        // Reduced system covariance (unit scaling), ordering (x_h, x_c, p_h, p_c).
        let mut red = Array2::<f64>::zeros((4, 4));
        red[[0, 0]] = bilinear(&state.x, &rh, &rh);
        red[[0, 1]] = bilinear(&state.x, &rh, &rc);
        red[[1, 1]] = bilinear(&state.x, &rc, &rc);
        red[[2, 2]] = bilinear(&state.w, &rh, &rh);
        red[[2, 3]] = bilinear(&state.w, &rh, &rc);
        red[[3, 3]] = bilinear(&state.w, &rc, &rc);
        red[[0, 2]] = bilinear(&state.y, &rh, &rh);
        red[[0, 3]] = bilinear(&state.y, &rh, &rc);
        red[[1, 2]] = bilinear(&state.y, &rc, &rh);
        red[[1, 3]] = bilinear(&state.y, &rc, &rc);
        for i in 0..4 {
            for jdx in 0..i {
                red[[i, jdx]] = red[[jdx, i]];
            }
        }
        reduced_sum += &red;
    }
    let inv = 1.0 / samples as f64;
    let j_h = j_h_sum * inv;
    let j_c = j_c_sum * inv;
    let mut reduced = reduced_sum * inv;

    // Unit scaling -> crate convention for the two system modes.
    let (root_h, root_c) = (p.omega_h.sqrt(), p.omega_c.sqrt());
    let factors = [1.0 / root_h, 1.0 / root_c, root_h, root_c];
    for i in 0..4 {
        for jdx in 0..4 {
            reduced[[i, jdx]] *= factors[i] * factors[jdx];
        }
    }
    let covariance = CovarianceMatrix::from_parts(vec![p.omega_h, p.omega_c], reduced)?;
    let power = exact_power(p, &covariance)?;
    let n_h = mode_occupation(&covariance, 0)?;
    let n_c = mode_occupation(&covariance, 1)?;
    let coherence = cross_coherence(&covariance, 0, 1)?;
    let efficiency = if j_h == 0.0 { None } else { Some(power / j_h) };

    Ok(SteadyReport {
        method: Method::Exact,
        params: *p,
        n_h,
        n_c,
        coherence,
        j_h,
        j_c,
        power,
        efficiency,
        covariance,
        channels: None,
        exact_meta: Some(ExactMeta {
            n: opts.n,
            omega_cut: opts.omega_cut,
            horizon,
            recurrence_warning,
        }),
    })
}

/// Which discretization knob a convergence row varied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceVariable {
    BathModes,
    Cutoff,
}

/// One row of the discretization robustness study.
#[derive(Debug, Clone, Copy)]
pub struct ConvergencePoint {
    pub variable: ConvergenceVariable,
    pub n: usize,
    pub omega_cut: f64,
    pub j_h: f64,
    /// Local closed-form reference at the same machine parameters.
    pub j_h_local: f64,
}

/// Sweeps the bath size and the cutoff independently around the base
/// options, reporting the exact J_h next to the local reference.
pub fn convergence_study(
    p: &EngineParams,
    n_list: &[usize],
    omega_cut_list: &[f64],
    base: &ExactOptions,
) -> Result<Vec<ConvergencePoint>> {
    let st = crate::local::local_steady_closed(p);
    let j_h_local = crate::local::local_heat_current(p, &st, Bath::Hot);
    let mut rows = Vec::new();
    for &n in n_list {
        let opts = ExactOptions { n, ..*base };
        let report = exact_steady_report(p, &opts)?;
        rows.push(ConvergencePoint {
            variable: ConvergenceVariable::BathModes,
            n,
            omega_cut: base.omega_cut,
            j_h: report.j_h,
            j_h_local,
        });
    }
    for &omega_cut in omega_cut_list {
        let opts = ExactOptions { omega_cut, ..*base };
        let report = exact_steady_report(p, &opts)?;
        rows.push(ConvergencePoint {
            variable: ConvergenceVariable::Cutoff,
            n: base.n,
            omega_cut,
            j_h: report.j_h,
            j_h_local,
        });
    }
    Ok(rows)
}
