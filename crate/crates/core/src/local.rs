//! Local Lindblad description: each bath damps its own oscillator at the
//! bare frequency. Covariance equations close on three moments, admit a
//! closed-form steady state, and carry all thermodynamic observables.

use num_complex::Complex64;

use crate::engine::{bose_einstein, Bath, EngineParams};
use crate::gaussian::{pair_covariance, CovarianceMatrix};
use crate::ode::{self, OdeOptions};
use crate::report::{Method, SteadyReport};
use crate::Result;

/// Second moments tracked by the local description: occupations
/// n_h = ⟨a†_h a_h⟩, n_c = ⟨a†_c a_c⟩ and the coherence s = ⟨a†_h a_c⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalState {
    pub n_h: f64,
    pub n_c: f64,
    pub s: Complex64,
}

impl LocalState {
    pub fn new(n_h: f64, n_c: f64, s: Complex64) -> Self {
        Self { n_h, n_c, s }
    }

    /// Cauchy–Schwarz-type physicality: |s|² ≤ n_h n_c + min(n_h, n_c).
    pub fn is_physical(&self, tol: f64) -> bool {
        self.n_h >= -tol
            && self.n_c >= -tol
            && self.s.norm_sqr() <= self.n_h * self.n_c + self.n_h.min(self.n_c) + tol
    }

    /// Two-mode covariance matrix of this state in the h/c mode basis.
    pub fn covariance(&self, p: &EngineParams) -> Result<CovarianceMatrix> {
        pair_covariance(p.omega_h, p.omega_c, self.n_h, self.n_c, self.s)
    }

    fn to_vec(self) -> [f64; 4] {
        [self.n_h, self.n_c, self.s.re, self.s.im]
    }

    fn from_slice(y: &[f64]) -> Self {
        Self {
            n_h: y[0],
            n_c: y[1],
            s: Complex64::new(y[2], y[3]),
        }
    }
}

/// Time derivative of the tracked moments:
///
///   dn_h/dt = 2g Im(s) + κ_h(n_B^h − n_h)
///   dn_c/dt = −2g Im(s) + κ_c(n_B^c − n_c)
///   ds/dt   = −(κ_c+κ_h)/2 · s − ig(n_h − n_c)
pub fn local_rhs(p: &EngineParams, st: &LocalState) -> LocalState {
    let (nb_h, nb_c) = p.bath_occupations();
    let pump = 2.0 * p.g * st.s.im;
    let decay = 0.5 * (p.kappa_c + p.kappa_h);
    LocalState {
        n_h: pump + p.kappa_h * (nb_h - st.n_h),
        n_c: -pump + p.kappa_c * (nb_c - st.n_c),
        s: -decay * st.s - Complex64::new(0.0, p.g * (st.n_h - st.n_c)),
    }
}

/// Closed-form steady state of [`local_rhs`].
pub fn local_steady_closed(p: &EngineParams) -> LocalState {
    let (nb_h, nb_c) = p.bath_occupations();
    let diff = nb_h - nb_c;
    let g2 = 4.0 * p.g * p.g;
    let denom = (p.kappa_h + p.kappa_c) * (p.kappa_c * p.kappa_h + g2);
    LocalState {
        n_h: nb_h - g2 * p.kappa_c * diff / denom,
        n_c: nb_c + g2 * p.kappa_h * diff / denom,
        s: Complex64::new(0.0, -2.0 * p.g * p.kappa_c * p.kappa_h * diff / denom),
    }
}

/// Adaptive integration of the local moment equations; returns every
/// accepted step as `(t, state)`.
pub fn local_integrate(
    p: &EngineParams,
    st0: &LocalState,
    t_final: f64,
    opts: &OdeOptions,
) -> Result<Vec<(f64, LocalState)>> {
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let d = local_rhs(p, &LocalState::from_slice(y));
        let v = d.to_vec();
        dy.copy_from_slice(&v);
    };
    let samples = ode::integrate(rhs, &st0.to_vec(), 0.0, t_final, opts)?;
    Ok(samples
        .into_iter()
        .map(|s| (s.t, LocalState::from_slice(&s.y)))
        .collect())
}

/// Steady state by integration: marches until the derivative norm drops
/// below `derivative_floor` (which bounds the distance to the fixed point
/// by floor/min-rate), with a hard cap at 40/min(κ) — the slowest
/// relaxation channel sets the equilibration scale.
pub fn local_steady_ode(p: &EngineParams, derivative_floor: f64) -> Result<LocalState> {
    let horizon = 40.0 / p.kappa_c.min(p.kappa_h);
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let d = local_rhs(p, &LocalState::from_slice(y));
        let v = d.to_vec();
        dy.copy_from_slice(&v);
    };
    let (nb_h, nb_c) = p.bath_occupations();
    let start = LocalState::new(nb_h, nb_c, Complex64::new(0.0, 0.0));
    let sample = ode::integrate_to_steady(
        rhs,
        &start.to_vec(),
        horizon,
        derivative_floor,
        &OdeOptions::default(),
    )?;
    Ok(LocalState::from_slice(&sample.y))
}

/// Heat current from bath α into the system:
/// J_α = κ_α[Ω_α(n_B^α − n_α) − (g/2)⟨a†_h a_c + a†_c a_h⟩].
pub fn local_heat_current(p: &EngineParams, st: &LocalState, bath: Bath) -> f64 {
    let coh = p.g * st.s.re; // (g/2)·2Re(s)
    match bath {
        Bath::Hot => {
            let nb_h = bose_einstein(p.omega_h, p.kt_h);
            p.kappa_h * (p.omega_h * (nb_h - st.n_h) - coh)
        }
        Bath::Cold => {
            let nb_c = bose_einstein(p.omega_c, p.kt_c);
            p.kappa_c * (p.omega_c * (nb_c - st.n_c) - coh)
        }
    }
}

/// Output power P = −2g(Ω_h − Ω_c) Im⟨a†_h a_c⟩; positive when the machine
/// feeds the drive.
pub fn local_power(p: &EngineParams, st: &LocalState) -> f64 {
    -2.0 * p.g * p.drive() * st.s.im
}

/// Steady-state report from the closed-form solution.
pub fn local_report(p: &EngineParams) -> Result<SteadyReport> {
    p.validate()?;
    let st = local_steady_closed(p);
    let j_h = local_heat_current(p, &st, Bath::Hot);
    let j_c = local_heat_current(p, &st, Bath::Cold);
    let power = local_power(p, &st);
    let efficiency = if j_h == 0.0 { None } else { Some(power / j_h) };
    Ok(SteadyReport {
        method: Method::Local,
        params: *p,
        n_h: st.n_h,
        n_c: st.n_c,
        coherence: st.s,
        j_h,
        j_c,
        power,
        efficiency,
        covariance: st.covariance(p)?,
        channels: None,
        exact_meta: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig3() -> EngineParams {
        EngineParams {
            omega_c: 1.0,
            omega_h: 1.0,
            g: 0.1,
            kappa_c: 0.05,
            kappa_h: 0.05,
            kt_c: 0.5,
            kt_h: 5.0,
        }
    }

    fn fig4() -> EngineParams {
        EngineParams {
            omega_h: 2.0,
            ..fig3()
        }
    }

    fn deriv_norm(d: &LocalState) -> f64 {
        (d.n_h * d.n_h + d.n_c * d.n_c + d.s.norm_sqr()).sqrt()
    }

    #[test]
    fn closed_form_is_fixed_point() {
        for p in [fig3(), fig4()] {
            let st = local_steady_closed(&p);
            let d = local_rhs(&p, &st);
            assert!(deriv_norm(&d) < 1e-12, "residual {}", deriv_norm(&d));
        }
    }

    #[test]
    fn decoupled_oscillators_thermalize() {
        let mut p = fig3();
        p.g = 0.0;
        let st = local_steady_closed(&p);
        let (nb_h, nb_c) = p.bath_occupations();
        assert_eq!(st.n_h, nb_h);
        assert_eq!(st.n_c, nb_c);
        assert_eq!(st.s, Complex64::new(0.0, 0.0));

        // Any state with s = 0 and thermal occupations is stationary at g = 0.
        let d = local_rhs(&p, &st);
        assert_eq!(deriv_norm(&d), 0.0);
    }

    #[test]
    fn equal_temperatures_carry_no_current() {
        let mut p = fig3();
        p.kt_h = 0.5;
        let st = local_steady_closed(&p);
        let (nb, _) = p.bath_occupations();
        assert_eq!(st.n_h, nb);
        assert_eq!(st.n_c, nb);
        assert_eq!(local_heat_current(&p, &st, Bath::Hot), 0.0);
        assert_eq!(local_heat_current(&p, &st, Bath::Cold), 0.0);
        assert_eq!(local_power(&p, &st), 0.0);
    }

    #[test]
    fn rhs_at_thermal_start_matches_reference() {
        let p = fig3();
        let (nb_h, nb_c) = p.bath_occupations();
        let st = LocalState::new(nb_h, nb_c, Complex64::new(0.0, 0.0));
        let d = local_rhs(&p, &st);
        assert_eq!(d.n_h, 0.0);
        assert_eq!(d.n_c, 0.0);
        assert_abs_diff_eq!(d.s.im, -0.436013, epsilon = 1e-5);
        assert_eq!(d.s.re, 0.0);
    }

    #[test]
    fn fig3_steady_heat_current() {
        let p = fig3();
        let st = local_steady_closed(&p);
        let j_h = local_heat_current(&p, &st, Bath::Hot);
        assert_abs_diff_eq!(j_h, 0.102591, epsilon = 1e-5);
        // Coherence is purely imaginary at the steady state.
        assert_eq!(st.s.re, 0.0);
        assert_abs_diff_eq!(st.s.im, -0.5129574, epsilon = 1e-6);
        assert!(st.is_physical(1e-12));
    }

    #[test]
    fn strong_coupling_limit_reaches_flat_response() {
        let mut p = fig3();
        p.g = 1e6;
        let st = local_steady_closed(&p);
        let j_h = local_heat_current(&p, &st, Bath::Hot);
        assert_abs_diff_eq!(j_h, 0.109003, epsilon = 1e-5);
    }

    #[test]
    fn fig4_power_and_report() {
        let p = fig4();
        let st = local_steady_closed(&p);
        assert_abs_diff_eq!(local_power(&p, &st), 0.044158, epsilon = 1e-5);

        let report = local_report(&p).unwrap();
        assert_abs_diff_eq!(report.j_h, 0.088317, epsilon = 1e-5);
        assert_abs_diff_eq!(report.j_c, -0.044158, epsilon = 1e-5);
        assert_abs_diff_eq!(report.power, 0.044158, epsilon = 1e-5);
        assert_eq!(report.efficiency, Some(0.5));
        assert!(
            (report.power - report.j_c - report.j_h).abs() < 1e-12,
            "first law violated"
        );
        assert!(report.covariance.min_physicality_eig().unwrap() > -1e-10);
    }

    #[test]
    fn degenerate_frequencies_produce_no_power() {
        let p = fig3();
        let st = local_steady_closed(&p);
        assert_eq!(local_power(&p, &st), 0.0);
    }

    #[test]
    fn reversed_gradient_flips_power_sign() {
        let mut p = fig4();
        p.kt_h = 0.2; // colder "hot" bath with Ω_h > Ω_c: refrigerator regime
        let st = local_steady_closed(&p);
        assert!(local_power(&p, &st) < 0.0);
    }

    #[test]
    fn trajectory_from_steady_state_stays_there() {
        let p = fig3();
        let st = local_steady_closed(&p);
        let traj = local_integrate(&p, &st, 50.0, &OdeOptions::default()).unwrap();
        for (_, state) in traj {
            assert_abs_diff_eq!(state.n_h, st.n_h, epsilon = 1e-9);
            assert_abs_diff_eq!(state.n_c, st.n_c, epsilon = 1e-9);
            assert_abs_diff_eq!(state.s.im, st.s.im, epsilon = 1e-9);
        }
    }

    #[test]
    fn decoupled_relaxation_matches_scalar_closed_form() {
        let mut p = fig3();
        p.g = 0.0;
        let st0 = LocalState::new(0.0, 0.0, Complex64::new(0.0, 0.0));
        let traj = local_integrate(&p, &st0, 60.0, &OdeOptions::default()).unwrap();
        let (nb_h, nb_c) = p.bath_occupations();
        for (t, state) in traj {
            let expect_h = nb_h * (1.0 - (-p.kappa_h * t).exp());
            let expect_c = nb_c * (1.0 - (-p.kappa_c * t).exp());
            assert_abs_diff_eq!(state.n_h, expect_h, epsilon = 1e-8);
            assert_abs_diff_eq!(state.n_c, expect_c, epsilon = 1e-8);
        }
    }

    #[test]
    fn long_integration_reaches_closed_form() {
        let p = fig4();
        let st0 = LocalState::new(3.0, 0.2, Complex64::new(0.3, 0.1));
        let horizon = 20.0 / p.kappa_c.max(p.kappa_h);
        let traj = local_integrate(&p, &st0, horizon, &OdeOptions::default()).unwrap();
        let (_, last) = traj.last().unwrap();
        let st = local_steady_closed(&p);
        assert_abs_diff_eq!(last.n_h, st.n_h, epsilon = 1e-6);
        assert_abs_diff_eq!(last.n_c, st.n_c, epsilon = 1e-6);
        assert_abs_diff_eq!(last.s.re, st.s.re, epsilon = 1e-6);
        assert_abs_diff_eq!(last.s.im, st.s.im, epsilon = 1e-6);
    }

    #[test]
    fn coherence_real_part_decays_at_half_total_damping() {
        let mut p = fig3();
        p.kappa_c = 0.08;
        let st0 = LocalState::new(1.0, 1.0, Complex64::new(1.0, 0.0));
        let rate = 0.5 * (p.kappa_c + p.kappa_h);
        let traj = local_integrate(&p, &st0, 30.0, &OdeOptions::default()).unwrap();
        // Re(s) obeys a pure scalar decay: the drive term −ig(n_h−n_c) is
        // imaginary.
        for (t, state) in traj {
            assert_abs_diff_eq!(state.s.re, (-rate * t).exp(), epsilon = 1e-8);
        }
    }
}
