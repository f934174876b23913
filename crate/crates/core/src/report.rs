//! Steady-state summary shared by the three descriptions of the machine,
//! with a flat CSV row representation.

use num_complex::Complex64;

use crate::engine::EngineParams;
use crate::gaussian::CovarianceMatrix;

/// Which description produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Global,
    Local,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Global => "global",
            Method::Local => "local",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-channel breakdown of the secular description.
#[derive(Debug, Clone, Copy)]
pub struct GlobalChannels {
    pub j_h_plus: f64,
    pub j_h_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// Weight c = J_{h,+}/(J_{h,+} + J_{h,−}) of the + channel.
    pub weight: f64,
}

/// Discretization and horizon of an exact-benchmark run.
#[derive(Debug, Clone, Copy)]
pub struct ExactMeta {
    pub n: usize,
    pub omega_cut: f64,
    pub horizon: f64,
    /// Set when the horizon is not comfortably below the bath recurrence
    /// estimate.
    pub recurrence_warning: bool,
}

/// Steady-state observables from any one method.
#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub method: Method,
    pub params: EngineParams,
    /// Occupations ⟨a†_h a_h⟩ and ⟨a†_c a_c⟩.
    pub n_h: f64,
    pub n_c: f64,
    /// Cross-coherence ⟨a†_h a_c⟩.
    pub coherence: Complex64,
    /// Heat currents (positive into the system) and output power, in Ω_c².
    pub j_h: f64,
    pub j_c: f64,
    pub power: f64,
    /// P/J_h; `None` marks the reversible point J_h = 0.
    pub efficiency: Option<f64>,
    /// Reduced two-mode state in the h/c basis.
    pub covariance: CovarianceMatrix,
    pub channels: Option<GlobalChannels>,
    pub exact_meta: Option<ExactMeta>,
}

impl SteadyReport {
    /// Column names of [`Self::csv_row`].
    pub const CSV_HEADER: &'static str = "method,omega_c,omega_h,g,kappa_c,kappa_h,kT_c,kT_h,\
         n_h,n_c,Re_s,Im_s,J_h,J_c,P,eta,\
         J_h_plus,J_h_minus,eta_plus,eta_minus,n,omega_cut,horizon";

    /// One flat CSV row; method columns that do not apply stay empty.
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        let mut cells: Vec<String> = vec![
            self.method.as_str().to_string(),
            fmt(p.omega_c),
            fmt(p.omega_h),
            fmt(p.g),
            fmt(p.kappa_c),
            fmt(p.kappa_h),
            fmt(p.kt_c),
            fmt(p.kt_h),
            fmt(self.n_h),
            fmt(self.n_c),
            fmt(self.coherence.re),
            fmt(self.coherence.im),
            fmt(self.j_h),
            fmt(self.j_c),
            fmt(self.power),
            self.efficiency.map(fmt).unwrap_or_default(),
        ];
        match &self.channels {
            Some(ch) => cells.extend([
                fmt(ch.j_h_plus),
                fmt(ch.j_h_minus),
                fmt(ch.eta_plus),
                fmt(ch.eta_minus),
            ]),
            None => cells.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        match &self.exact_meta {
            Some(m) => cells.extend([m.n.to_string(), fmt(m.omega_cut), fmt(m.horizon)]),
            None => cells.extend([String::new(), String::new(), String::new()]),
        }
        cells.join(",")
    }
}

/// Shortest round-trip decimal representation.
fn fmt(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::thermal_covariance;

    #[test]
    fn csv_row_has_header_arity_and_empty_optionals() {
        let params = EngineParams {
            omega_c: 1.0,
            omega_h: 2.0,
            g: 0.1,
            kappa_c: 0.05,
            kappa_h: 0.05,
            kt_c: 0.5,
            kt_h: 5.0,
        };
        let report = SteadyReport {
            method: Method::Local,
            params,
            n_h: 1.0,
            n_c: 2.0,
            coherence: Complex64::new(0.0, -0.5),
            j_h: 0.1,
            j_c: -0.05,
            power: 0.05,
            efficiency: Some(0.5),
            covariance: thermal_covariance(&[2.0, 1.0], &[1.0, 2.0]).unwrap(),
            channels: None,
            exact_meta: None,
        };
        let row = report.csv_row();
        let header_cols = SteadyReport::CSV_HEADER.split(',').count();
        assert_eq!(row.split(',').count(), header_cols);
        assert!(row.starts_with("local,1,2,0.1,"));
        assert!(row.ends_with(",,,,,,")); // channel + exact columns empty
    }
}
