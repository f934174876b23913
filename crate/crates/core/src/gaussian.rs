//! Gaussian-state primitives: covariance matrices over a fixed quadrature
//! ordering, thermal-state construction, mode reduction, moment extraction
//! and the two-mode fidelity used to compare steady states.
//!
//! Quadratures are ordered as r = (x_1, …, x_M, p_1, …, p_M). Each mode
//! carries a frequency Ω that fixes its quadrature scaling,
//! x = (a† + a)/√(2Ω) and p = i√(Ω/2)(a† − a); the list of Ω's travels with
//! the matrix so that occupations and coherences can be reconstructed
//! unambiguously. First moments are zero throughout: nothing in this crate
//! displaces a state.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::linalg;
use crate::{Error, Result};

/// Tolerance below which min eig(C + iJ/2) must not drop for a state to
/// count as physical.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// The symplectic form J = [[0, I], [−I, 0]] for `modes` modes, defined by
/// J_kl = −i⟨[r_k, r_l]⟩ in the (x…,p…) ordering.
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    matrix: Array2<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let m = modes;
        let mut j = Array2::zeros((2 * m, 2 * m));
        for k in 0..m {
            j[[k, m + k]] = 1.0;
            j[[m + k, k]] = -1.0;
        }
        Self { matrix: j }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
}

/// Real symmetric matrix of second moments C_ij = ⟨{r_i, r_j}⟩/2 with the
/// mode frequencies attached.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    frequencies: Vec<f64>,
    data: Array2<f64>,
}

impl CovarianceMatrix {
    /// Builds a covariance matrix from raw entries. The input must be
    /// 2M×2M for M = `frequencies.len()` and symmetric to within 1e-12
    /// (relative to its largest entry); it is then symmetrized exactly.
    pub fn from_parts(frequencies: Vec<f64>, data: Array2<f64>) -> Result<Self> {
        let m = frequencies.len();
        let dim = 2 * m;
        if dim == 0 || data.nrows() != dim || data.ncols() != dim {
            return Err(Error::BadDimension(data.nrows()));
        }
        for &f in &frequencies {
            if !(f > 0.0) {
                return Err(Error::NonPositiveFrequency(f));
            }
        }
        let scale = data.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
        let mut sym = data;
        for i in 0..dim {
            for j in 0..i {
                let asym = (sym[[i, j]] - sym[[j, i]]).abs();
                if asym > 1e-12 * scale {
                    return Err(Error::NotSymmetric { i, j, asym });
                }
                let v = 0.5 * (sym[[i, j]] + sym[[j, i]]);
                sym[[i, j]] = v;
                sym[[j, i]] = v;
            }
        }
        Ok(Self {
            frequencies,
            data: sym,
        })
    }

    /// Number of modes M.
    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    /// Matrix dimension 2M.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.data.view()
    }

    /// Smallest eigenvalue of the Hermitian matrix C + iJ/2; nonnegative
    /// (up to tolerance) exactly for physical states.
    pub fn min_physicality_eig(&self) -> Result<f64> {
        let dim = self.dim();
        let j = SymplecticForm::new(self.modes());
        let mut h = Array2::<Complex64>::zeros((dim, dim));
        for r in 0..dim {
            for c in 0..dim {
                h[[r, c]] = Complex64::new(self.data[[r, c]], 0.5 * j.matrix()[[r, c]]);
            }
        }
        let vals = linalg::eigvalsh_complex(&h)?;
        Ok(vals[0])
    }

    /// Errors unless C + iJ/2 ⪰ −tol.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let min_eig = self.min_physicality_eig()?;
        if min_eig < -tol {
            Err(Error::NonPhysicalState { min_eig, tol })
        } else {
            Ok(())
        }
    }

    /// Serializes as `{dim, frequencies[], rows[][]}` with every real
    /// printed to 17 significant digits.
    pub fn to_json_string(&self) -> String {
        let fmt = |v: f64| format!("{v:.16e}");
        let mut s = String::new();
        s.push_str(&format!("{{\"dim\":{},\"frequencies\":[", self.dim()));
        s.push_str(
            &self
                .frequencies
                .iter()
                .map(|&f| fmt(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        s.push_str("],\"rows\":[");
        let rows: Vec<String> = self
            .data
            .rows()
            .into_iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        s.push_str(&rows.join(","));
        s.push_str("]}");
        s
    }

    /// Parses the format produced by [`Self::to_json_string`].
    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Repr {
            dim: usize,
            frequencies: Vec<f64>,
            rows: Vec<Vec<f64>>,
        }
        let repr: Repr = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if repr.rows.len() != repr.dim || repr.frequencies.len() * 2 != repr.dim {
            return Err(Error::BadDimension(repr.dim));
        }
        let mut data = Array2::zeros((repr.dim, repr.dim));
        for (i, row) in repr.rows.iter().enumerate() {
            if row.len() != repr.dim {
                return Err(Error::BadDimension(row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                data[[i, j]] = v;
            }
        }
        Self::from_parts(repr.frequencies, data)
    }
}

/// Product thermal state: block-diagonal with ⟨x_m²⟩ = (n_m + ½)/Ω_m and
/// ⟨p_m²⟩ = (n_m + ½)Ω_m.
pub fn thermal_covariance(frequencies: &[f64], occupations: &[f64]) -> Result<CovarianceMatrix> {
    if frequencies.len() != occupations.len() {
        return Err(Error::LengthMismatch {
            left: frequencies.len(),
            right: occupations.len(),
        });
    }
    for &f in frequencies {
        if !(f > 0.0) {
            return Err(Error::NonPositiveFrequency(f));
        }
    }
    for &n in occupations {
        if !(n >= 0.0) {
            return Err(Error::NegativeOccupation(n));
        }
    }
    let m = frequencies.len();
    let mut data = Array2::zeros((2 * m, 2 * m));
    for k in 0..m {
        let half = occupations[k] + 0.5;
        data[[k, k]] = half / frequencies[k];
        data[[m + k, m + k]] = half * frequencies[k];
    }
    CovarianceMatrix::from_parts(frequencies.to_vec(), data)
}

/// Occupation ⟨a†a⟩ of one mode, reconstructed through the stored Ω:
/// (Ω⟨x²⟩ + ⟨p²⟩/Ω − 1)/2.
pub fn mode_occupation(c: &CovarianceMatrix, mode: usize) -> Result<f64> {
    let m = c.modes();
    if mode >= m {
        return Err(Error::IndexOutOfRange {
            index: mode,
            modes: m,
        });
    }
    let omega = c.frequencies[mode];
    let xx = c.data[[mode, mode]];
    let pp = c.data[[m + mode, m + mode]];
    Ok(0.5 * (omega * xx + pp / omega - 1.0))
}

/// Coherence ⟨a†_i a_j⟩ between two distinct modes, reconstructed from the
/// x-x, p-p and x-p entries of the pair.
pub fn cross_coherence(c: &CovarianceMatrix, i: usize, j: usize) -> Result<Complex64> {
    let m = c.modes();
    if i >= m {
        return Err(Error::IndexOutOfRange { index: i, modes: m });
    }
    if j >= m {
        return Err(Error::IndexOutOfRange { index: j, modes: m });
    }
    if i == j {
        return Err(Error::IdenticalIndices(i));
    }
    let (oi, oj) = (c.frequencies[i], c.frequencies[j]);
    let xx = c.data[[i, j]];
    let pp = c.data[[m + i, m + j]];
    let xipj = c.data[[i, m + j]];
    let pixj = c.data[[m + i, j]];
    let re = 0.5 * ((oi * oj).sqrt() * xx + pp / (oi * oj).sqrt());
    let im = 0.5 * ((oi / oj).sqrt() * xipj - (oj / oi).sqrt() * pixj);
    Ok(Complex64::new(re, im))
}

/// Covariance matrix of a two-mode state with occupations `n_0`, `n_1` and
/// coherence s = ⟨a†_0 a_1⟩ (anomalous moments zero). Inverse of
/// [`mode_occupation`] / [`cross_coherence`] for the pair.
pub fn pair_covariance(
    omega_0: f64,
    omega_1: f64,
    n_0: f64,
    n_1: f64,
    s: Complex64,
) -> Result<CovarianceMatrix> {
    if !(omega_0 > 0.0) {
        return Err(Error::NonPositiveFrequency(omega_0));
    }
    if !(omega_1 > 0.0) {
        return Err(Error::NonPositiveFrequency(omega_1));
    }
    let mut data = Array2::zeros((4, 4));
    let root = (omega_0 * omega_1).sqrt();
    data[[0, 0]] = (n_0 + 0.5) / omega_0;
    data[[1, 1]] = (n_1 + 0.5) / omega_1;
    data[[2, 2]] = (n_0 + 0.5) * omega_0;
    data[[3, 3]] = (n_1 + 0.5) * omega_1;
    data[[0, 1]] = s.re / root;
    data[[1, 0]] = data[[0, 1]];
    data[[2, 3]] = s.re * root;
    data[[3, 2]] = data[[2, 3]];
    // ⟨x_0 p_1⟩ = √(Ω_1/Ω_0) Im s, ⟨p_0 x_1⟩ = −√(Ω_0/Ω_1) Im s
    data[[0, 3]] = (omega_1 / omega_0).sqrt() * s.im;
    data[[3, 0]] = data[[0, 3]];
    data[[1, 2]] = -(omega_0 / omega_1).sqrt() * s.im;
    data[[2, 1]] = data[[1, 2]];
    CovarianceMatrix::from_parts(vec![omega_0, omega_1], data)
}

/// Submatrix over the chosen modes (x's and p's of each), preserving the
/// (x…,p…) ordering and carrying the corresponding frequencies along.
pub fn reduce_to_modes(c: &CovarianceMatrix, indices: &[usize]) -> Result<CovarianceMatrix> {
    let m = c.modes();
    for (pos, &idx) in indices.iter().enumerate() {
        if idx >= m {
            return Err(Error::IndexOutOfRange {
                index: idx,
                modes: m,
            });
        }
        if indices[..pos].contains(&idx) {
            return Err(Error::DuplicateIndex(idx));
        }
    }
    let k = indices.len();
    let rows: Vec<usize> = indices
        .iter()
        .copied()
        .chain(indices.iter().map(|&i| m + i))
        .collect();
    let mut data = Array2::zeros((2 * k, 2 * k));
    for (r, &ri) in rows.iter().enumerate() {
        for (cidx, &cj) in rows.iter().enumerate() {
            data[[r, cidx]] = c.data[[ri, cj]];
        }
    }
    let freqs = indices.iter().map(|&i| c.frequencies[i]).collect();
    CovarianceMatrix::from_parts(freqs, data)
}

/// Uhlmann fidelity F = Tr√(√ρσ√ρ) of two two-mode Gaussian states with
/// vanishing first moments, from their covariance matrices. The closed
/// form
///
///   [√b + √c − √((√b+√c)² − a)]⁻¹,  a = det(C₁+C₂),
///   b = 2⁴ det(JC₁JC₂ − I/4),  c = 2⁴ det(C₁+iJ/2) det(C₂+iJ/2)
///
/// evaluates the squared (Jozsa-convention) fidelity — verified against a
/// truncated-Fock-basis Tr√(√ρσ√ρ) oracle — so its square root is
/// returned here.
pub fn two_mode_fidelity(c1: &CovarianceMatrix, c2: &CovarianceMatrix) -> Result<f64> {
    if c1.dim() != 4 {
        return Err(Error::NotTwoMode(c1.dim()));
    }
    if c2.dim() != 4 {
        return Err(Error::NotTwoMode(c2.dim()));
    }
    // Both states must be expressed with the same quadrature scalings for
    // the comparison to be meaningful.
    if c1
        .frequencies
        .iter()
        .zip(&c2.frequencies)
        .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::FrequencyConventionMismatch);
    }
    c1.check_physical(PHYSICALITY_TOL)?;
    c2.check_physical(PHYSICALITY_TOL)?;

    let j = SymplecticForm::new(2);
    let jm = j.matrix();
    let m1 = &c1.data;
    let m2 = &c2.data;

    let a = linalg::det_real(&(m1 + m2));

    let jc1jc2 = jm.dot(m1).dot(jm).dot(m2);
    let mut arg_b = jc1jc2;
    for k in 0..4 {
        arg_b[[k, k]] -= 0.25;
    }
    let b = 16.0 * linalg::det_real(&arg_b);

    let herm = |m: &Array2<f64>| {
        let mut h = Array2::<Complex64>::zeros((4, 4));
        for r in 0..4 {
            for cidx in 0..4 {
                h[[r, cidx]] = Complex64::new(m[[r, cidx]], 0.5 * jm[[r, cidx]]);
            }
        }
        h
    };
    let d1 = linalg::det_complex(&herm(m1));
    let d2 = linalg::det_complex(&herm(m2));
    let c = 16.0 * (d1 * d2).re;

    // b and c are nonnegative for physical states; clip roundoff.
    let clip = |v: f64, label: &str| -> Result<f64> {
        if v < -1e-9 {
            return Err(Error::Linalg(format!(
                "fidelity invariant {label} = {v:e} is negative; inputs are not physical"
            )));
        }
        Ok(v.max(0.0))
    };
    let sqrt_b = clip(b, "b")?.sqrt();
    let sqrt_c = clip(c, "c")?.sqrt();
    let w = sqrt_b + sqrt_c;
    let disc = (w * w - a).max(0.0);
    let denom = w - disc.sqrt();
    if denom <= 0.0 {
        return Err(Error::Linalg(format!(
            "fidelity denominator {denom:e} is not positive"
        )));
    }
    Ok((1.0 / denom).sqrt().min(1.0))
}
