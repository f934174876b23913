//! Global (secular) Lindblad description: the baths damp the eigenmodes
//! a_± = (a_h ± a_c)/√2 of the coupled system, each at its shifted
//! frequency Ω_α ± g. Heat currents are defined per dissipation channel
//! through the entropy-flow bookkeeping; bookkeeping through system
//! observables alone would miss the drive and give P = 0.

use num_complex::Complex64;

use crate::engine::{bose_einstein, ohmic_kappa, Bath, EngineParams, SpectralDensity};
use crate::gaussian::{pair_covariance, CovarianceMatrix};
use crate::report::{ExactMeta, GlobalChannels, Method, SteadyReport};
use crate::{Error, Result};

/// Rates seen by one eigenmode channel σ: frequencies Ω_{α,σ} = Ω_α ± g,
/// damping κ_{α,σ} = κ_α(Ω_{α,σ}) and occupations n_B^{α,σ}.
#[derive(Debug, Clone, Copy)]
pub struct ChannelRates {
    pub omega_h: f64,
    pub omega_c: f64,
    pub kappa_h: f64,
    pub kappa_c: f64,
    pub nb_h: f64,
    pub nb_c: f64,
}

impl ChannelRates {
    /// Excitation rate Γ_σ = Σ_α κ_{α,σ} n_B^{α,σ}.
    pub fn gamma_up(&self) -> f64 {
        self.kappa_h * self.nb_h + self.kappa_c * self.nb_c
    }

    /// Decay rate Γ̄_σ = Σ_α κ_{α,σ}(n_B^{α,σ} + 1).
    pub fn gamma_down(&self) -> f64 {
        self.kappa_h * (self.nb_h + 1.0) + self.kappa_c * (self.nb_c + 1.0)
    }

    /// Total damping κ_{h,σ} + κ_{c,σ} (= Γ̄_σ − Γ_σ).
    pub fn kappa_total(&self) -> f64 {
        self.kappa_h + self.kappa_c
    }

    /// Steady occupation of this eigenmode,
    /// n_σ = (κ_{h,σ} n_B^{h,σ} + κ_{c,σ} n_B^{c,σ})/(κ_{h,σ} + κ_{c,σ}).
    pub fn steady_occupation(&self) -> f64 {
        self.gamma_up() / self.kappa_total()
    }

    /// Channel heat current from bath α,
    /// J_{α,σ} = ½ Ω_{α,σ} κ_{h,σ}κ_{c,σ}/(κ_{h,σ}+κ_{c,σ}) (n_B^{α,σ} − n_B^{ᾱ,σ}).
    pub fn heat_current(&self, bath: Bath) -> f64 {
        let shared = 0.5 * self.kappa_h * self.kappa_c / self.kappa_total();
        match bath {
            Bath::Hot => self.omega_h * shared * (self.nb_h - self.nb_c),
            Bath::Cold => self.omega_c * shared * (self.nb_c - self.nb_h),
        }
    }

    /// Channel efficiency η_σ = 1 − Ω_{c,σ}/Ω_{h,σ}.
    pub fn efficiency(&self) -> f64 {
        1.0 - self.omega_c / self.omega_h
    }
}

/// Rates for both eigenmode channels.
#[derive(Debug, Clone, Copy)]
pub struct EigenmodeRates {
    pub plus: ChannelRates,
    pub minus: ChannelRates,
    pub g: f64,
}

/// Second moments of the eigenmodes: occupations n_± = ⟨a†_± a_±⟩ and the
/// inter-eigenmode coherence c = ⟨a†_+ a_−⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalState {
    pub n_plus: f64,
    pub n_minus: f64,
    pub c: Complex64,
}

/// Evaluates the channel rates at Ω_α ± g. Requires Ω_α − g > 0 for both
/// oscillators: a nonpositive eigenfrequency is outside the validity of the
/// secular construction and is a hard error.
pub fn eigenmode_rates(
    p: &EngineParams,
    sd_c: &SpectralDensity,
    sd_h: &SpectralDensity,
) -> Result<EigenmodeRates> {
    p.validate()?;
    for omega in [p.omega_h, p.omega_c] {
        if omega - p.g <= 0.0 {
            return Err(Error::EigenfrequencyNotPositive {
                omega,
                value: omega - p.g,
            });
        }
    }
    let channel = |sign: f64| -> Result<ChannelRates> {
        let omega_h = p.omega_h + sign * p.g;
        let omega_c = p.omega_c + sign * p.g;
        Ok(ChannelRates {
            omega_h,
            omega_c,
            kappa_h: ohmic_kappa(sd_h, omega_h)?,
            kappa_c: ohmic_kappa(sd_c, omega_c)?,
            nb_h: bose_einstein(omega_h, p.kt_h),
            nb_c: bose_einstein(omega_c, p.kt_c),
        })
    };
    Ok(EigenmodeRates {
        plus: channel(1.0)?,
        minus: channel(-1.0)?,
        g: p.g,
    })
}

/// Steady state: each eigenmode thermalizes to the weighted occupation of
/// its two baths; the inter-eigenmode coherence dies out.
pub fn global_steady(rates: &EigenmodeRates) -> GlobalState {
    GlobalState {
        n_plus: rates.plus.steady_occupation(),
        n_minus: rates.minus.steady_occupation(),
        c: Complex64::new(0.0, 0.0),
    }
}

/// Time derivative of the eigenmode moments:
///
///   dn_σ/dt = ½ Σ_α κ_{α,σ}(n_B^{α,σ} − n_σ)
///   dc/dt   = [2ig − ¼ Σ_{α,σ} κ_{α,σ}] c
pub fn global_rhs(rates: &EigenmodeRates, st: &GlobalState) -> GlobalState {
    let relax =
        |ch: &ChannelRates, n: f64| 0.5 * (ch.kappa_h * (ch.nb_h - n) + ch.kappa_c * (ch.nb_c - n));
    let decay = 0.25 * (rates.plus.kappa_total() + rates.minus.kappa_total());
    GlobalState {
        n_plus: relax(&rates.plus, st.n_plus),
        n_minus: relax(&rates.minus, st.n_minus),
        c: (Complex64::new(-decay, 2.0 * rates.g)) * st.c,
    }
}

/// Heat current from bath α: total plus the per-channel split (J_{α,+}, J_{α,−}).
pub fn global_heat_current(rates: &EigenmodeRates, bath: Bath) -> (f64, (f64, f64)) {
    let j_plus = rates.plus.heat_current(bath);
    let j_minus = rates.minus.heat_current(bath);
    (j_plus + j_minus, (j_plus, j_minus))
}

/// Power, total and per-channel efficiencies, and the channel weight
/// c = J_{h,+}/(J_{h,+} + J_{h,−}).
#[derive(Debug, Clone, Copy)]
pub struct GlobalPerformance {
    pub power: f64,
    pub efficiency: Option<f64>,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub weight: f64,
}

/// Evaluates power through the first law P = J_c + J_h (enforced for the
/// secular description) and the channel efficiencies η_σ = 1 − Ω_{c,σ}/Ω_{h,σ}.
pub fn global_power_and_efficiency(rates: &EigenmodeRates) -> GlobalPerformance {
    let (j_h, (j_h_plus, j_h_minus)) = global_heat_current(rates, Bath::Hot);
    let (j_c, _) = global_heat_current(rates, Bath::Cold);
    let power = j_c + j_h;
    GlobalPerformance {
        power,
        efficiency: if j_h == 0.0 { None } else { Some(power / j_h) },
        eta_plus: rates.plus.efficiency(),
        eta_minus: rates.minus.efficiency(),
        weight: if j_h == 0.0 {
            f64::NAN
        } else {
            j_h_plus / (j_h_plus + j_h_minus)
        },
    }
}

/// Transforms eigenmode moments back to the h/c mode basis and assembles a
/// covariance matrix. Inverting a_± = (a_h ± a_c)/√2:
///
///   ⟨a†_h a_h⟩ = (n_+ + n_−)/2 + Re c,  ⟨a†_c a_c⟩ = (n_+ + n_−)/2 − Re c,
///   ⟨a†_h a_c⟩ = (n_+ − n_−)/2 − i Im c.
pub fn global_state_in_local_modes(st: &GlobalState, p: &EngineParams) -> Result<CovarianceMatrix> {
    let mean = 0.5 * (st.n_plus + st.n_minus);
    let n_h = mean + st.c.re;
    let n_c = mean - st.c.re;
    let s = Complex64::new(0.5 * (st.n_plus - st.n_minus), -st.c.im);
    pair_covariance(p.omega_h, p.omega_c, n_h, n_c, s)
}

/// Flat-response limit of the heat current,
/// J_h = Ω_h κ_h κ_c (n_B^h − n_B^c)/(κ_h + κ_c): the value both
/// descriptions give when the bath response is constant across Ω_α ± g.
pub fn flat_response_heat_current(p: &EngineParams) -> f64 {
    let (nb_h, nb_c) = p.bath_occupations();
    p.omega_h * p.kappa_h * p.kappa_c * (nb_h - nb_c) / (p.kappa_h + p.kappa_c)
}

/// Steady-state report from the secular description.
pub fn global_report(
    p: &EngineParams,
    sd_c: &SpectralDensity,
    sd_h: &SpectralDensity,
) -> Result<SteadyReport> {
    let rates = eigenmode_rates(p, sd_c, sd_h)?;
    let st = global_steady(&rates);
    let (j_h, (j_h_plus, j_h_minus)) = global_heat_current(&rates, Bath::Hot);
    let (j_c, _) = global_heat_current(&rates, Bath::Cold);
    let perf = global_power_and_efficiency(&rates);
    let covariance = global_state_in_local_modes(&st, p)?;
    let n_h = crate::gaussian::mode_occupation(&covariance, 0)?;
    let n_c = crate::gaussian::mode_occupation(&covariance, 1)?;
    let coherence = crate::gaussian::cross_coherence(&covariance, 0, 1)?;
    Ok(SteadyReport {
        method: Method::Global,
        params: *p,
        n_h,
        n_c,
        coherence,
        j_h,
        j_c,
        power: perf.power,
        efficiency: perf.efficiency,
        covariance,
        channels: Some(GlobalChannels {
            j_h_plus,
            j_h_minus,
            eta_plus: perf.eta_plus,
            eta_minus: perf.eta_minus,
            weight: perf.weight,
        }),
        exact_meta: None::<ExactMeta>,
    })
}
