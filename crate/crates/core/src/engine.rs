//! Machine parameters, thermal and spectral functions, and validity
//! diagnostics shared by every description of the engine.
//!
//! All energies are measured in units of Ω_c and all currents in Ω_c²,
//! with ħ = k_B = 1.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of the two-oscillator machine.
///
/// `omega_c`, `omega_h` are the oscillator frequencies, `g` the
/// field-mediated coupling, `kappa_*` the energy damping rates at the
/// respective oscillator frequency and `kt_*` the bath temperatures
/// (as k_B T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineParams {
    pub omega_c: f64,
    pub omega_h: f64,
    pub g: f64,
    pub kappa_c: f64,
    pub kappa_h: f64,
    #[serde(rename = "kT_c")]
    pub kt_c: f64,
    #[serde(rename = "kT_h")]
    pub kt_h: f64,
}

impl EngineParams {
    /// Validates positivity constraints and the drive convention
    /// Ω_h ≥ Ω_c.
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("omega_c", self.omega_c),
            ("omega_h", self.omega_h),
            ("kappa_c", self.kappa_c),
            ("kappa_h", self.kappa_h),
            ("kT_c", self.kt_c),
            ("kT_h", self.kt_h),
        ];
        for (name, value) in positives {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g",
                value: self.g,
            });
        }
        if self.omega_h < self.omega_c {
            return Err(Error::InvalidParameter {
                name: "omega_h (must be >= omega_c)",
                value: self.omega_h,
            });
        }
        Ok(())
    }

    /// Drive frequency E = Ω_h − Ω_c ≥ 0.
    pub fn drive(&self) -> f64 {
        self.omega_h - self.omega_c
    }

    /// Bath occupations (n_B^h, n_B^c) at the oscillator frequencies.
    pub fn bath_occupations(&self) -> (f64, f64) {
        (
            bose_einstein(self.omega_h, self.kt_h),
            bose_einstein(self.omega_c, self.kt_c),
        )
    }

    /// Carnot efficiency 1 − T_c/T_h.
    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.kt_c / self.kt_h
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let p: EngineParams = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: EngineParams = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// Ohmic spectral response: κ(ω) = κ_ref · ω / Ω_ref for ω ≤ ω_cut, zero
/// above the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub kappa_ref: f64,
    pub omega_ref: f64,
    pub omega_cut: f64,
}

impl SpectralDensity {
    pub fn new(kappa_ref: f64, omega_ref: f64, omega_cut: f64) -> Result<Self> {
        if !(kappa_ref > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa_ref",
                value: kappa_ref,
            });
        }
        if !(omega_ref > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_ref",
                value: omega_ref,
            });
        }
        if !(omega_cut > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_cut",
                value: omega_cut,
            });
        }
        Ok(Self {
            kappa_ref,
            omega_ref,
            omega_cut,
        })
    }

    /// Ohmic slope η = κ_ref / (2π Ω_ref), so that κ(ω) = 2π η ω below the
    /// cutoff.
    pub fn eta(&self) -> f64 {
        self.kappa_ref / (2.0 * std::f64::consts::PI * self.omega_ref)
    }

    /// Spectral density ρ(ω) = κ(ω)/(2π).
    pub fn density(&self, omega: f64) -> Result<f64> {
        Ok(ohmic_kappa(self, omega)? / (2.0 * std::f64::consts::PI))
    }

    /// Spectral density for the bath damping oscillator α of `p`, referenced
    /// at that oscillator's frequency.
    pub fn for_bath(p: &EngineParams, bath: Bath, omega_cut: f64) -> Result<Self> {
        match bath {
            Bath::Hot => Self::new(p.kappa_h, p.omega_h, omega_cut),
            Bath::Cold => Self::new(p.kappa_c, p.omega_c, omega_cut),
        }
    }
}

/// Bath label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bath {
    Cold,
    Hot,
}

/// Bose–Einstein occupation n_B(ω) = 1/(e^{ω/k_BT} − 1).
pub fn bose_einstein(omega: f64, kt: f64) -> f64 {
    debug_assert!(omega > 0.0 && kt > 0.0);
    1.0 / (omega / kt).exp_m1()
}

/// Checked variant of [`bose_einstein`], erroring where the distribution is
/// undefined (ω ≤ 0).
pub fn bose_einstein_checked(omega: f64, kt: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    if !(kt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "kT",
            value: kt,
        });
    }
    Ok(bose_einstein(omega, kt))
}

/// Ohmic damping rate κ(ω) with hard cutoff.
pub fn ohmic_kappa(sd: &SpectralDensity, omega: f64) -> Result<f64> {
    if omega < 0.0 {
        return Err(Error::NegativeOmega(omega));
    }
    if omega > sd.omega_cut {
        return Ok(0.0);
    }
    Ok(sd.kappa_ref * omega / sd.omega_ref)
}

/// Validity diagnostics for the local (and Markov/secular) approximations,
/// one record per bath.
#[derive(Debug, Clone, Copy)]
pub struct BathValidity {
    /// |n_B(Ω+g) − n_B(Ω)| and its minus-sign partner.
    pub delta_n_plus: f64,
    pub delta_n_minus: f64,
    /// Reference scale max(1, n_B(Ω)).
    pub n_scale: f64,
    /// |κ(Ω±g) − κ(Ω)| / κ(Ω).
    pub delta_kappa_plus_rel: f64,
    pub delta_kappa_minus_rel: f64,
    /// Markov ratio κ(Ω)/Ω.
    pub markov_ratio: f64,
    /// Secular ratio κ(Ω)/g; infinite when g = 0.
    pub secular_ratio: f64,
}

impl BathValidity {
    /// The largest of the local-approximation ratios
    /// (Δn/scale and Δκ/κ for both signs).
    pub fn max_local_ratio(&self) -> f64 {
        (self.delta_n_plus / self.n_scale)
            .max(self.delta_n_minus / self.n_scale)
            .max(self.delta_kappa_plus_rel)
            .max(self.delta_kappa_minus_rel)
    }
}

/// Diagnostics for both baths.
#[derive(Debug, Clone, Copy)]
pub struct ValidityRatios {
    pub cold: BathValidity,
    pub hot: BathValidity,
}

/// Evaluates the flatness conditions on which the local approximation rests
/// (bath response approximately constant over the energy scale of g), plus
/// the Markov ratios κ/Ω and the secular ratios κ/g.
pub fn validity_ratios(
    p: &EngineParams,
    sd_c: &SpectralDensity,
    sd_h: &SpectralDensity,
) -> Result<ValidityRatios> {
    p.validate()?;
    let one_bath = |omega: f64, kt: f64, sd: &SpectralDensity| -> Result<BathValidity> {
        let n0 = bose_einstein_checked(omega, kt)?;
        let kappa0 = ohmic_kappa(sd, omega)?;
        // n_B(Ω−g) needs Ω−g > 0; the comparison is meaningless beyond that
        // point anyway.
        let omega_minus = omega - p.g;
        if !(omega_minus > 0.0) {
            return Err(Error::EigenfrequencyNotPositive {
                omega,
                value: omega_minus,
            });
        }
        let n_plus = bose_einstein(omega + p.g, kt);
        let n_minus = bose_einstein(omega_minus, kt);
        let k_plus = ohmic_kappa(sd, omega + p.g)?;
        let k_minus = ohmic_kappa(sd, omega_minus)?;
        Ok(BathValidity {
            delta_n_plus: (n_plus - n0).abs(),
            delta_n_minus: (n_minus - n0).abs(),
            n_scale: n0.max(1.0),
            delta_kappa_plus_rel: (k_plus - kappa0).abs() / kappa0,
            delta_kappa_minus_rel: (k_minus - kappa0).abs() / kappa0,
            markov_ratio: kappa0 / omega,
            secular_ratio: if p.g > 0.0 {
                kappa0 / p.g
            } else {
                f64::INFINITY
            },
        })
    };
    Ok(ValidityRatios {
        cold: one_bath(p.omega_c, p.kt_c, sd_c)?,
        hot: one_bath(p.omega_h, p.kt_h, sd_h)?,
    })
}

/// Bath-induced frequency renormalization
/// Σ = P ∫₀^{ω_cut} ρ(ω)/(ω₀ − ω) dω for the Ohmic density (closed form).
///
/// Diagnostic only; the dynamics in this crate never include it.
pub fn lamb_shift(sd: &SpectralDensity, omega0: f64) -> Result<f64> {
    if !(omega0 > 0.0) {
        return Err(Error::NonPositiveFrequency(omega0));
    }
    if omega0 == sd.omega_cut {
        return Err(Error::OmegaAtCutoff(omega0));
    }
    let w = sd.omega_cut;
    Ok(sd.eta() * (-w + omega0 * (omega0 / (omega0 - w)).abs().ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig3_params() -> EngineParams {
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

    #[test]
    fn bose_einstein_reference_values() {
        assert_abs_diff_eq!(bose_einstein(1.0, 0.5), 0.1565177, epsilon = 1e-6);
        assert_abs_diff_eq!(bose_einstein(1.0, 5.0), 4.5166556, epsilon = 1e-6);
    }

    #[test]
    fn bose_einstein_vanishes_at_zero_temperature() {
        assert!(bose_einstein(1.0, 1e-3) < 1e-300);
    }

    #[test]
    fn bose_einstein_rejects_nonpositive_frequency() {
        assert!(matches!(
            bose_einstein_checked(0.0, 1.0),
            Err(Error::NonPositiveFrequency(_))
        ));
        assert!(matches!(
            bose_einstein_checked(-1.0, 1.0),
            Err(Error::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn bose_einstein_monotone_on_grids() {
        // Strictly decreasing in ω, strictly increasing in kT.
        let omegas = [0.1, 0.3, 0.7, 1.0, 1.5, 2.5, 4.0];
        for pair in omegas.windows(2) {
            assert!(bose_einstein(pair[1], 0.8) < bose_einstein(pair[0], 0.8));
        }
        let kts = [0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
        for pair in kts.windows(2) {
            assert!(bose_einstein(1.3, pair[1]) > bose_einstein(1.3, pair[0]));
        }
    }

    #[test]
    fn ohmic_kappa_linearity_and_cutoff() {
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        assert_abs_diff_eq!(ohmic_kappa(&sd, 1.1).unwrap(), 0.055, epsilon = 1e-15);
        assert_abs_diff_eq!(ohmic_kappa(&sd, 0.9).unwrap(), 0.045, epsilon = 1e-15);
        assert_eq!(ohmic_kappa(&sd, 0.0).unwrap(), 0.0);
        assert_eq!(ohmic_kappa(&sd, 3.5).unwrap(), 0.0);
        assert!(matches!(
            ohmic_kappa(&sd, -0.1),
            Err(Error::NegativeOmega(_))
        ));
        // κ(ω)·Ω_ref/ω = κ_ref for 0 < ω ≤ ω_cut (up to rounding).
        for k in 1..=30 {
            let omega = 0.1 * k as f64;
            let kappa = ohmic_kappa(&sd, omega).unwrap();
            assert_abs_diff_eq!(kappa * sd.omega_ref / omega, sd.kappa_ref, epsilon = 1e-15);
        }
    }

    #[test]
    fn validity_ratios_small_at_fig3_coupling() {
        let p = fig3_params();
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        let v = validity_ratios(&p, &sd, &sd).unwrap();
        assert!(v.cold.max_local_ratio() < 0.25, "{:?}", v.cold);
        assert!(v.hot.max_local_ratio() < 0.25, "{:?}", v.hot);
        assert_abs_diff_eq!(v.hot.markov_ratio, 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(v.hot.secular_ratio, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn validity_ratios_vanish_and_grow_with_g() {
        let mut p = fig3_params();
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        p.g = 0.0;
        let v0 = validity_ratios(&p, &sd, &sd).unwrap();
        assert_eq!(v0.hot.delta_n_plus, 0.0);
        assert_eq!(v0.hot.delta_kappa_minus_rel, 0.0);
        assert!(v0.hot.secular_ratio.is_infinite());

        // Monotone nondecreasing in g.
        let mut last = 0.0;
        for g in [0.05, 0.1, 0.2, 0.4] {
            p.g = g;
            let v = validity_ratios(&p, &sd, &sd).unwrap();
            let m = v.hot.max_local_ratio().max(v.cold.max_local_ratio());
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn secular_ratio_is_plain_arithmetic() {
        let mut p = fig3_params();
        p.g = 0.5;
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        let v = validity_ratios(&p, &sd, &sd).unwrap();
        assert_abs_diff_eq!(v.cold.secular_ratio, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn lamb_shift_closed_form_value() {
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        let sigma = lamb_shift(&sd, 1.0).unwrap();
        // (0.05/2π)(−3 + ln(1/2))
        assert_abs_diff_eq!(sigma, -0.029392, epsilon = 1e-5);
        assert!(sigma < 0.0);
    }

    #[test]
    fn lamb_shift_vanishes_with_cutoff() {
        let sd = SpectralDensity::new(0.05, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(lamb_shift(&sd, 1.0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lamb_shift_rejects_singular_point() {
        let sd = SpectralDensity::new(0.05, 1.0, 3.0).unwrap();
        assert!(matches!(lamb_shift(&sd, 3.0), Err(Error::OmegaAtCutoff(_))));
    }

    #[test]
    fn engine_params_parse_toml_and_json() {
        let toml_src = r#"
            omega_c = 1.0
            omega_h = 2.0
            g = 0.1
            kappa_c = 0.05
            kappa_h = 0.05
            kT_c = 0.5
            kT_h = 5.0
        "#;
        let p = EngineParams::from_toml_str(toml_src).unwrap();
        assert_eq!(p.drive(), 1.0);
        let json_src = r#"{"omega_c":1.0,"omega_h":2.0,"g":0.1,"kappa_c":0.05,
                           "kappa_h":0.05,"kT_c":0.5,"kT_h":5.0}"#;
        let q = EngineParams::from_json_str(json_src).unwrap();
        assert_eq!(p, q);
        // All keys required.
        assert!(EngineParams::from_toml_str("omega_c = 1.0").is_err());
    }

    #[test]
    fn engine_params_validation_catches_bad_values() {
        let mut p = fig3_params();
        p.kappa_c = 0.0;
        assert!(p.validate().is_err());
        let mut p = fig3_params();
        p.omega_h = 0.5; // below omega_c
        assert!(p.validate().is_err());
        let mut p = fig3_params();
        p.g = -0.1;
        assert!(p.validate().is_err());
    }
}
