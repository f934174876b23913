//! Two-qubit thermal machine in the degenerate case Ω_c = Ω_h = Ω: local
//! and global GKSL generators, steady states through the Liouvillian null
//! space, heat currents and state fidelity.
//!
//! Product basis {|00⟩, |01⟩, |10⟩, |11⟩} with the cold qubit first, so the
//! bath coupling operators are A_c = σ_−⊗I and A_h = I⊗σ_−. The system
//! Hamiltonian H = Ω(n_c + n_h) + g(|01⟩⟨10| + |10⟩⟨01|) has eigenvalues
//! {0, Ω ± g, 2Ω} with |φ_{Ω±g}⟩ = (|01⟩ ± |10⟩)/√2.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{bose_einstein, Bath};
use crate::linalg;
use crate::ode::{self, OdeOptions};
use crate::{Error, Result};

const DIM: usize = 4;
const SUPER_DIM: usize = 16;

/// Parameters of the qubit machine: degenerate gap Ω, exchange coupling g,
/// Ohmic slopes ν_α (so κ_α(ε) = ν_α ε) and bath temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitMachineParams {
    pub omega: f64,
    pub g: f64,
    pub nu_c: f64,
    pub nu_h: f64,
    #[serde(rename = "kT_c")]
    pub kt_c: f64,
    #[serde(rename = "kT_h")]
    pub kt_h: f64,
}

impl QubitMachineParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("omega", self.omega),
            ("nu_c", self.nu_c),
            ("nu_h", self.nu_h),
            ("kT_c", self.kt_c),
            ("kT_h", self.kt_h),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(self.g >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "g",
                value: self.g,
            });
        }
        if self.omega - self.g <= 0.0 {
            return Err(Error::EigenfrequencyNotPositive {
                omega: self.omega,
                value: self.omega - self.g,
            });
        }
        Ok(())
    }

    /// Ohmic coupling κ_α(ε) = ν_α ε.
    pub fn kappa(&self, bath: Bath, energy: f64) -> f64 {
        match bath {
            Bath::Cold => self.nu_c * energy,
            Bath::Hot => self.nu_h * energy,
        }
    }

    pub fn bath_kt(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Cold => self.kt_c,
            Bath::Hot => self.kt_h,
        }
    }
}

/// 4×4 Hermitian, unit-trace, positive-semidefinite density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitDensityMatrix {
    matrix: Array2<Complex64>,
}

impl QubitDensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-9) and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != DIM || matrix.ncols() != DIM {
            return Err(Error::NonPhysicalDensityMatrix(format!(
                "expected 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                herm_dev = herm_dev.max((matrix[[i, j]] - matrix[[j, i]].conj()).norm());
            }
        }
        if herm_dev > 1e-10 {
            return Err(Error::NonPhysicalDensityMatrix(format!(
                "not Hermitian: deviation {herm_dev:e}"
            )));
        }
        let trace: Complex64 = (0..DIM).map(|i| matrix[[i, i]]).sum();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-12 {
            return Err(Error::NonPhysicalDensityMatrix(format!(
                "trace {trace} is not 1"
            )));
        }
        let vals = linalg::eigvalsh_complex(&matrix)?;
        if vals[0] < -1e-10 {
            return Err(Error::NonPhysicalDensityMatrix(format!(
                "negative eigenvalue {:e}",
                vals[0]
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// The ten independent real components: real parts of the upper
    /// triangle (row-major), diagonal included.
    pub fn upper_triangle_reals(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        let mut k = 0;
        for i in 0..DIM {
            for j in i..DIM {
                out[k] = self.matrix[[i, j]].re;
                k += 1;
            }
        }
        out
    }
}

/// One GKSL jump operator with its excitation/decay rates. `gamma_up` = Γ
/// multiplies D[L†] (absorption from the bath), `gamma_down` = Γ̄
/// multiplies D[L] (decay into the bath); Γ̄/Γ = e^{ε/k_BT_α}.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub matrix: Array2<Complex64>,
    pub energy: f64,
    pub bath: Bath,
    pub gamma_up: f64,
    pub gamma_down: f64,
}

impl JumpOperator {
    fn for_transition(
        p: &QubitMachineParams,
        bath: Bath,
        energy: f64,
        matrix: Array2<Complex64>,
    ) -> Self {
        let kappa = p.kappa(bath, energy);
        let nb = bose_einstein(energy, p.bath_kt(bath));
        JumpOperator {
            matrix,
            energy,
            bath,
            gamma_up: kappa * nb,
            gamma_down: kappa * (nb + 1.0),
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|z| z.conj())
}

/// σ_−⊗I (cold) or I⊗σ_− (hot) in the product basis.
pub fn coupling_operator(bath: Bath) -> Array2<Complex64> {
    let mut a = Array2::zeros((DIM, DIM));
    match bath {
        // |10⟩→|00⟩, |11⟩→|01⟩
        Bath::Cold => {
            a[[0, 2]] = c(1.0);
            a[[1, 3]] = c(1.0);
        }
        // |01⟩→|00⟩, |11⟩→|10⟩
        Bath::Hot => {
            a[[0, 1]] = c(1.0);
            a[[2, 3]] = c(1.0);
        }
    }
    a
}

/// System Hamiltonian H = Ω(|1⟩⟨1|⊗I + I⊗|1⟩⟨1|) + g(|01⟩⟨10| + h.c.).
pub fn qubit_hamiltonian(p: &QubitMachineParams) -> Array2<Complex64> {
    let mut h = Array2::zeros((DIM, DIM));
    h[[1, 1]] = c(p.omega);
    h[[2, 2]] = c(p.omega);
    h[[3, 3]] = c(2.0 * p.omega);
    h[[1, 2]] = c(p.g);
    h[[2, 1]] = c(p.g);
    h
}

/// Eigenvectors of the degenerate Hamiltonian as columns, ordered by
/// eigenvalue {0, Ω−g, Ω+g, 2Ω}.
fn eigenbasis() -> [Array1<Complex64>; 4] {
    let r = c(1.0 / 2.0f64.sqrt());
    let mut phi0 = Array1::zeros(DIM);
    phi0[0] = c(1.0);
    let mut phi_minus = Array1::zeros(DIM);
    phi_minus[1] = r;
    phi_minus[2] = -r;
    let mut phi_plus = Array1::zeros(DIM);
    phi_plus[1] = r;
    phi_plus[2] = r;
    let mut phi3 = Array1::zeros(DIM);
    phi3[3] = c(1.0);
    [phi0, phi_minus, phi_plus, phi3]
}

/// Local jump operators: the bare lowering operators, both at energy Ω.
pub fn local_jump_set(p: &QubitMachineParams) -> Result<Vec<JumpOperator>> {
    p.validate()?;
    Ok(vec![
        JumpOperator::for_transition(p, Bath::Cold, p.omega, coupling_operator(Bath::Cold)),
        JumpOperator::for_transition(p, Bath::Hot, p.omega, coupling_operator(Bath::Hot)),
    ])
}

/// Global jump operators from the eigenbasis of the full Hamiltonian:
/// transitions sharing the same energy gap combine into one operator per
/// bath, L_{α,ε} = Σ_{λ−λ'=ε} |φ_λ'⟩⟨φ_λ'| A_α |φ_λ⟩⟨φ_λ|. For g > 0 this
/// yields the four operators at ε = Ω ± g; at g = 0 the gaps merge and the
/// set reduces to the local one.
pub fn global_jump_set(p: &QubitMachineParams) -> Result<Vec<JumpOperator>> {
    p.validate()?;
    let energies = [0.0, p.omega - p.g, p.omega + p.g, 2.0 * p.omega];
    let basis = eigenbasis();
    let gap_tol = 1e-12 * p.omega.max(1.0);
    let mut ops = Vec::new();
    for bath in [Bath::Cold, Bath::Hot] {
        let a = coupling_operator(bath);
        // Collect distinct positive gaps.
        let mut gaps: Vec<f64> = Vec::new();
        for from in 0..DIM {
            for to in 0..DIM {
                let eps = energies[from] - energies[to];
                if eps > gap_tol && !gaps.iter().any(|&g0| (g0 - eps).abs() <= gap_tol) {
                    gaps.push(eps);
                }
            }
        }
        gaps.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for eps in gaps {
            let mut l = Array2::<Complex64>::zeros((DIM, DIM));
            for from in 0..DIM {
                for to in 0..DIM {
                    if (energies[from] - energies[to] - eps).abs() <= gap_tol {
                        // |φ_to⟩⟨φ_to| A |φ_from⟩⟨φ_from|
                        let amp = basis[to]
                            .iter()
                            .zip(a.dot(&basis[from]).iter())
                            .map(|(b, av)| b.conj() * av)
                            .sum::<Complex64>();
                        for r in 0..DIM {
                            for s in 0..DIM {
                                l[[r, s]] += amp * basis[to][r] * basis[from][s].conj();
                            }
                        }
                    }
                }
            }
            let norm: f64 = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-14 {
                ops.push(JumpOperator::for_transition(p, bath, eps, l));
            }
        }
    }
    Ok(ops)
}

/// Kronecker product of two 4×4 matrices.
fn kron(p: &Array2<Complex64>, q: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::zeros((SUPER_DIM, SUPER_DIM));
    for pr in 0..DIM {
        for pc in 0..DIM {
            for qr in 0..DIM {
                for qc in 0..DIM {
                    out[[pr * DIM + qr, pc * DIM + qc]] = p[[pr, pc]] * q[[qr, qc]];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization: vec(ρ)[j·4 + i] = ρ[i,j].
pub fn vectorize(rho: &Array2<Complex64>) -> Array1<Complex64> {
    let mut v = Array1::zeros(SUPER_DIM);
    for j in 0..DIM {
        for i in 0..DIM {
            v[j * DIM + i] = rho[[i, j]];
        }
    }
    v
}

pub fn unvectorize(v: &Array1<Complex64>) -> Array2<Complex64> {
    let mut rho = Array2::zeros((DIM, DIM));
    for j in 0..DIM {
        for i in 0..DIM {
            rho[[i, j]] = v[j * DIM + i];
        }
    }
    rho
}

/// Superoperator of rate·D[op] under column-stacking vectorization,
/// vec(AρB) = (Bᵀ⊗A)vec(ρ).
fn dissipator_superop(op: &Array2<Complex64>, rate: f64) -> Array2<Complex64> {
    let eye = Array2::<Complex64>::eye(DIM);
    let op_dag = dagger(op);
    let op_dag_op = op_dag.dot(op);
    let sandwich = kron(&op.mapv(|z| z.conj()), op);
    let left = kron(&eye, &op_dag_op);
    let right = kron(&op_dag_op.t().to_owned(), &eye);
    (sandwich - (left + right).mapv(|z| z * c(0.5))).mapv(|z| z * c(rate))
}

/// 16×16 matrix representation of ρ ↦ −i[H,ρ] + Σ(Γ D[L†] + Γ̄ D[L])ρ under
/// column-stacking vectorization.
pub fn liouvillian(h: &Array2<Complex64>, jumps: &[JumpOperator]) -> Array2<Complex64> {
    let eye = Array2::<Complex64>::eye(DIM);
    let minus_i = Complex64::new(0.0, -1.0);
    // −i(I⊗H − Hᵀ⊗I)
    let mut l = kron(&eye, h).mapv(|z| z * minus_i)
        + kron(&h.t().to_owned(), &eye).mapv(|z| z * (-minus_i));
    for j in jumps {
        if j.gamma_down != 0.0 {
            l = l + dissipator_superop(&j.matrix, j.gamma_down);
        }
        if j.gamma_up != 0.0 {
            l = l + dissipator_superop(&dagger(&j.matrix), j.gamma_up);
        }
    }
    l
}

/// rate·D[op]ρ applied directly.
fn dissipate(op: &Array2<Complex64>, rate: f64, rho: &Array2<Complex64>) -> Array2<Complex64> {
    let op_dag = dagger(op);
    let op_dag_op = op_dag.dot(op);
    let term =
        op.dot(rho).dot(&op_dag) - (op_dag_op.dot(rho) + rho.dot(&op_dag_op)).mapv(|z| z * c(0.5));
    term.mapv(|z| z * c(rate))
}

/// Applies the dissipative part of one bath's jump operators to ρ.
pub fn apply_dissipator(jumps: &[JumpOperator], rho: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::<Complex64>::zeros((DIM, DIM));
    for j in jumps {
        if j.gamma_down != 0.0 {
            out = out + dissipate(&j.matrix, j.gamma_down, rho);
        }
        if j.gamma_up != 0.0 {
            out = out + dissipate(&dagger(&j.matrix), j.gamma_up, rho);
        }
    }
    out
}

/// Steady state as the null vector of the Liouvillian, Hermitized and
/// trace-normalized. Errors if the kernel is not one-dimensional.
pub fn steady_state(l: &Array2<Complex64>) -> Result<QubitDensityMatrix> {
    let (s, v) = linalg::svd_right_complex(l)?;
    let scale = s[0].max(1e-300);
    let kernel_dim = s.iter().filter(|&&sv| sv < 1e-10 * scale).count();
    if kernel_dim != 1 {
        return Err(Error::DegenerateKernel { dim: kernel_dim });
    }
    let null = v.column(SUPER_DIM - 1).to_owned();
    let raw = unvectorize(&null);
    // Hermitize and normalize.
    let mut rho = Array2::<Complex64>::zeros((DIM, DIM));
    for i in 0..DIM {
        for j in 0..DIM {
            rho[[i, j]] = 0.5 * (raw[[i, j]] + raw[[j, i]].conj());
        }
    }
    let trace: Complex64 = (0..DIM).map(|i| rho[[i, i]]).sum();
    if trace.norm() < 1e-12 {
        return Err(Error::Linalg("null vector has vanishing trace".into()));
    }
    let rho = rho.mapv(|z| z / trace);
    // Residual check against the generator.
    let residual = l.dot(&vectorize(&rho));
    let res_norm: f64 = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if res_norm > 1e-12 {
        return Err(Error::Linalg(format!(
            "steady-state residual {res_norm:e} exceeds 1e-12"
        )));
    }
    QubitDensityMatrix::new(rho)
}

/// Heat current from bath α in the steady state, J_α = Tr{H · L_α ρ}.
/// In the degenerate (undriven) machine the laboratory and rotating frames
/// coincide, so the observable-based definition applies to both generators.
pub fn qubit_heat_current(
    h: &Array2<Complex64>,
    bath_jumps: &[JumpOperator],
    rho: &QubitDensityMatrix,
) -> f64 {
    let drho = apply_dissipator(bath_jumps, rho.matrix());
    let prod = h.dot(&drho);
    (0..DIM).map(|i| prod[[i, i]].re).sum()
}

/// Uhlmann fidelity F = Tr√(√ρ σ √ρ) via eigendecompositions.
pub fn density_fidelity(rho: &QubitDensityMatrix, sigma: &QubitDensityMatrix) -> Result<f64> {
    let (vals, vecs) = linalg::eigh_complex(rho.matrix())?;
    let mut sqrt_rho = Array2::<Complex64>::zeros((DIM, DIM));
    for k in 0..DIM {
        let root = c(vals[k].max(0.0).sqrt());
        for i in 0..DIM {
            for j in 0..DIM {
                sqrt_rho[[i, j]] += vecs[[i, k]] * root * vecs[[j, k]].conj();
            }
        }
    }
    let m = sqrt_rho.dot(sigma.matrix()).dot(&sqrt_rho);
    let mvals = linalg::eigvalsh_complex(&m)?;
    let f: f64 = mvals.iter().map(|&v| v.max(0.0).sqrt()).sum();
    Ok(f.min(1.0))
}

/// Gibbs state e^{−H/kT}/Z of a Hermitian Hamiltonian.
pub fn gibbs_state(h: &Array2<Complex64>, kt: f64) -> Result<QubitDensityMatrix> {
    let (vals, vecs) = linalg::eigh_complex(h)?;
    let weights: Vec<f64> = vals.iter().map(|&e| (-e / kt).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut rho = Array2::<Complex64>::zeros((DIM, DIM));
    for k in 0..DIM {
        let w = c(weights[k] / z);
        for i in 0..DIM {
            for j in 0..DIM {
                rho[[i, j]] += vecs[[i, k]] * w * vecs[[j, k]].conj();
            }
        }
    }
    QubitDensityMatrix::new(rho)
}

/// Side-by-side steady states of the two generators at one parameter set.
#[derive(Debug, Clone)]
pub struct QubitComparison {
    pub rho_local: QubitDensityMatrix,
    pub rho_global: QubitDensityMatrix,
    pub j_h_local: f64,
    pub j_h_global: f64,
    pub j_c_local: f64,
    pub j_c_global: f64,
    pub fidelity_local_global: f64,
}

/// Solves both generators for their steady states and bundles currents and
/// the mutual fidelity.
pub fn qubit_steady_comparison(p: &QubitMachineParams) -> Result<QubitComparison> {
    p.validate()?;
    let h = qubit_hamiltonian(p);
    let local = local_jump_set(p)?;
    let global = global_jump_set(p)?;
    let rho_local = steady_state(&liouvillian(&h, &local))?;
    let rho_global = steady_state(&liouvillian(&h, &global))?;
    let split = |jumps: &[JumpOperator], bath: Bath| -> Vec<JumpOperator> {
        jumps.iter().filter(|j| j.bath == bath).cloned().collect()
    };
    let j_h_local = qubit_heat_current(&h, &split(&local, Bath::Hot), &rho_local);
    let j_c_local = qubit_heat_current(&h, &split(&local, Bath::Cold), &rho_local);
    let j_h_global = qubit_heat_current(&h, &split(&global, Bath::Hot), &rho_global);
    let j_c_global = qubit_heat_current(&h, &split(&global, Bath::Cold), &rho_global);
    let fidelity_local_global = density_fidelity(&rho_local, &rho_global)?;
    Ok(QubitComparison {
        rho_local,
        rho_global,
        j_h_local,
        j_h_global,
        j_c_local,
        j_c_global,
        fidelity_local_global,
    })
}

/// Integrates dρ/dt = L(ρ) from ρ₀ for time `t` (cross-check path for the
/// null-space solver).
pub fn integrate_master_equation(
    l: &Array2<Complex64>,
    rho0: &Array2<Complex64>,
    t: f64,
    opts: &OdeOptions,
) -> Result<Array2<Complex64>> {
    let v0 = vectorize(rho0);
    let y0: Vec<f64> = v0.iter().flat_map(|z| [z.re, z.im]).collect();
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let v = Array1::from_iter(y.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])));
        let dv = l.dot(&v);
        for (k, z) in dv.iter().enumerate() {
            dy[2 * k] = z.re;
            dy[2 * k + 1] = z.im;
        }
    };
    let samples = ode::integrate(rhs, &y0, 0.0, t, opts)?;
    let last = &samples.last().expect("samples nonempty").y;
    let v = Array1::from_iter(last.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])));
    Ok(unvectorize(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig8(g: f64) -> QubitMachineParams {
        QubitMachineParams {
            omega: 1.0,
            g,
            nu_c: 0.005,
            nu_h: 0.005,
            kt_c: 0.5,
            kt_h: 5.0,
        }
    }

    #[test]
    fn hamiltonian_spectrum_and_eigenvectors() {
        let p = fig8(0.1);
        let h = qubit_hamiltonian(&p);
        let vals = linalg::eigvalsh_complex(&h).unwrap();
        let expect = [0.0, 0.9, 1.1, 2.0];
        for (v, e) in vals.iter().zip(expect) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        // H(|01⟩+|10⟩)/√2 = (Ω+g)(|01⟩+|10⟩)/√2
        let r = 1.0 / 2.0f64.sqrt();
        let mut plus = Array1::<Complex64>::zeros(4);
        plus[1] = c(r);
        plus[2] = c(r);
        let hp = h.dot(&plus);
        for i in 0..4 {
            assert_abs_diff_eq!((hp[i] - c(1.1) * plus[i]).norm(), 0.0, epsilon = 1e-12);
        }

        let p0 = fig8(0.0);
        let h0 = qubit_hamiltonian(&p0);
        for (i, e) in [0.0, 1.0, 1.0, 2.0].iter().enumerate() {
            assert_eq!(h0[[i, i]], c(*e));
        }
        assert_eq!(h0[[1, 2]], c(0.0));
    }

    #[test]
    fn local_jump_rates_and_action() {
        let p = fig8(0.1);
        let jumps = local_jump_set(&p).unwrap();
        let cold = &jumps[0];
        assert_eq!(cold.bath, Bath::Cold);
        assert_abs_diff_eq!(cold.gamma_down, 0.00578259, epsilon = 1e-8);
        // Detailed balance Γ̄/Γ = e^{ε/kT}
        for j in &jumps {
            let ratio = j.gamma_down / j.gamma_up;
            let expect = (j.energy / p.bath_kt(j.bath)).exp();
            assert_abs_diff_eq!(ratio / expect, 1.0, epsilon = 1e-12);
        }
        // L_c|10⟩ = |00⟩, L_c|01⟩ = 0
        let mut e10 = Array1::<Complex64>::zeros(4);
        e10[2] = c(1.0);
        let out = cold.matrix.dot(&e10);
        assert_eq!(out[0], c(1.0));
        let mut e01 = Array1::<Complex64>::zeros(4);
        e01[1] = c(1.0);
        let out = cold.matrix.dot(&e01);
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn global_jump_set_matches_quoted_operators() {
        let p = fig8(0.1);
        let jumps = global_jump_set(&p).unwrap();
        assert_eq!(jumps.len(), 4);
        let r = 1.0 / 2.0f64.sqrt();
        let basis = eigenbasis();
        let [phi0, phi_minus, phi_plus, phi3] = basis;
        // L_{c,Ω−g} = (1/√2)(|φ+⟩⟨φ3| − |φ0⟩⟨φ−|)
        let outer = |a: &Array1<Complex64>, b: &Array1<Complex64>| {
            let mut m = Array2::<Complex64>::zeros((4, 4));
            for i in 0..4 {
                for j in 0..4 {
                    m[[i, j]] = a[i] * b[j].conj();
                }
            }
            m
        };
        let expect_c_minus = outer(&phi_plus, &phi3).mapv(|z| z * c(r))
            - outer(&phi0, &phi_minus).mapv(|z| z * c(r));
        let found = jumps
            .iter()
            .find(|j| j.bath == Bath::Cold && (j.energy - 0.9).abs() < 1e-12)
            .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    (found.matrix[[i, j]] - expect_c_minus[[i, j]]).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
        // L_{c,Ω+g}|φ_{Ω+g}⟩ = (1/√2)|φ_0⟩: a genuinely global transition.
        let c_plus = jumps
            .iter()
            .find(|j| j.bath == Bath::Cold && (j.energy - 1.1).abs() < 1e-12)
            .unwrap();
        let out = c_plus.matrix.dot(&phi_plus);
        for i in 0..4 {
            assert_abs_diff_eq!((out[i] - c(r) * phi0[i]).norm(), 0.0, epsilon = 1e-12);
        }
        // Rate ratio across hot channels follows the Ohmic × Bose factors.
        let h_plus = jumps
            .iter()
            .find(|j| j.bath == Bath::Hot && (j.energy - 1.1).abs() < 1e-12)
            .unwrap();
        let h_minus = jumps
            .iter()
            .find(|j| j.bath == Bath::Hot && (j.energy - 0.9).abs() < 1e-12)
            .unwrap();
        let expect =
            (1.1 * (bose_einstein(1.1, 5.0) + 1.0)) / (0.9 * (bose_einstein(0.9, 5.0) + 1.0));
        assert_abs_diff_eq!(
            h_plus.gamma_down / h_minus.gamma_down,
            expect,
            epsilon = 1e-12
        );
    }

    #[test]
    fn global_set_merges_to_local_at_zero_coupling() {
        let p = fig8(0.0);
        let global = global_jump_set(&p).unwrap();
        assert_eq!(global.len(), 2);
        let local = local_jump_set(&p).unwrap();
        let lg = liouvillian(&qubit_hamiltonian(&p), &global);
        let ll = liouvillian(&qubit_hamiltonian(&p), &local);
        for i in 0..SUPER_DIM {
            for j in 0..SUPER_DIM {
                assert_abs_diff_eq!((lg[[i, j]] - ll[[i, j]]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn liouvillian_structure() {
        let p = fig8(0.1);
        let h = qubit_hamiltonian(&p);
        // No jumps: pure commutator, spectrum purely imaginary.
        let l0 = liouvillian(&h, &[]);
        let vals = linalg::eigvals_complex(&l0).unwrap();
        for v in vals.iter() {
            assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-12);
        }
        // With dissipation: trace preservation (vec(I) is a left null
        // vector) and eigenvalues in the closed left half-plane.
        let jumps = local_jump_set(&p).unwrap();
        let l = liouvillian(&h, &jumps);
        for col in 0..SUPER_DIM {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..DIM {
                acc += l[[i * DIM + i, col]];
            }
            assert_abs_diff_eq!(acc.norm(), 0.0, epsilon = 1e-12);
        }
        let vals = linalg::eigvals_complex(&l).unwrap();
        for v in vals.iter() {
            assert!(v.re <= 1e-12, "eigenvalue {v} in right half-plane");
        }
        // The maximally mixed state has zero-trace image.
        let mixed = Array2::<Complex64>::eye(DIM).mapv(|z| z * c(0.25));
        let img = apply_dissipator(&jumps, &mixed);
        let tr: Complex64 = (0..DIM).map(|i| img[[i, i]]).sum();
        assert_abs_diff_eq!(tr.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn decoupled_local_steady_state_is_product_thermal() {
        let p = fig8(0.0);
        let h = qubit_hamiltonian(&p);
        let rho = steady_state(&liouvillian(&h, &local_jump_set(&p).unwrap())).unwrap();
        // τ_α populations: p_e/p_g = n_B/(n_B+1).
        let tau = |kt: f64| {
            let nb = bose_einstein(p.omega, kt);
            let pe = nb / (2.0 * nb + 1.0);
            (1.0 - pe, pe)
        };
        let (g_c, e_c) = tau(p.kt_c);
        let (g_h, e_h) = tau(p.kt_h);
        let expect = [g_c * g_h, g_c * e_h, e_c * g_h, e_c * e_h];
        for (i, e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(rho.matrix()[[i, i]].re, *e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(rho.matrix()[[1, 2]].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn equal_temperature_global_steady_state_is_gibbs() {
        let mut p = fig8(0.2);
        p.kt_h = 0.5;
        let h = qubit_hamiltonian(&p);
        let rho = steady_state(&liouvillian(&h, &global_jump_set(&p).unwrap())).unwrap();
        let gibbs = gibbs_state(&h, 0.5).unwrap();
        for i in 0..DIM {
            for j in 0..DIM {
                assert_abs_diff_eq!(
                    (rho.matrix()[[i, j]] - gibbs.matrix()[[i, j]]).norm(),
                    0.0,
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn steady_state_agrees_with_long_time_integration() {
        let p = fig8(0.05);
        let h = qubit_hamiltonian(&p);
        let l = liouvillian(&h, &local_jump_set(&p).unwrap());
        let rho_kernel = steady_state(&l).unwrap();
        // Start well away from the fixed point.
        let mut rho0 = Array2::<Complex64>::zeros((DIM, DIM));
        rho0[[3, 3]] = c(1.0);
        let t = 20.0 / 0.005;
        let rho_t = integrate_master_equation(&l, &rho0, t, &OdeOptions::default()).unwrap();
        for i in 0..DIM {
            for j in 0..DIM {
                assert_abs_diff_eq!(
                    (rho_t[[i, j]] - rho_kernel.matrix()[[i, j]]).norm(),
                    0.0,
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn integration_preserves_trace_and_positivity() {
        let p = fig8(0.1);
        let h = qubit_hamiltonian(&p);
        let l = liouvillian(&h, &global_jump_set(&p).unwrap());
        let mut rho0 = Array2::<Complex64>::zeros((DIM, DIM));
        rho0[[0, 0]] = c(0.5);
        rho0[[3, 3]] = c(0.5);
        rho0[[0, 3]] = c(0.4);
        rho0[[3, 0]] = c(0.4);
        for t in [10.0, 100.0, 400.0] {
            let rho_t = integrate_master_equation(&l, &rho0, t, &OdeOptions::default()).unwrap();
            let trace: Complex64 = (0..DIM).map(|i| rho_t[[i, i]]).sum();
            assert_abs_diff_eq!(trace.re, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(trace.im, 0.0, epsilon = 1e-12);
            let vals = linalg::eigvalsh_complex(&rho_t).unwrap();
            assert!(vals[0] > -1e-9, "eigenvalue {} at t = {t}", vals[0]);
        }
    }

    #[test]
    fn heat_currents_balance_and_vanish_where_required() {
        // g = 0, local: decoupled qubits carry nothing.
        let p0 = fig8(0.0);
        let h0 = qubit_hamiltonian(&p0);
        let local0 = local_jump_set(&p0).unwrap();
        let rho0 = steady_state(&liouvillian(&h0, &local0)).unwrap();
        let hot: Vec<JumpOperator> = local0
            .iter()
            .filter(|j| j.bath == Bath::Hot)
            .cloned()
            .collect();
        assert_abs_diff_eq!(qubit_heat_current(&h0, &hot, &rho0), 0.0, epsilon = 1e-12);

        // Equal temperatures: both generators carry nothing.
        let mut peq = fig8(0.15);
        peq.kt_h = 0.5;
        let cmp = qubit_steady_comparison(&peq).unwrap();
        assert_abs_diff_eq!(cmp.j_h_local, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cmp.j_h_global, 0.0, epsilon = 1e-12);

        // Steady-state balance J_c + J_h = 0 (no drive in the degenerate
        // machine).
        let p = fig8(0.05);
        let cmp = qubit_steady_comparison(&p).unwrap();
        assert_abs_diff_eq!(cmp.j_h_local + cmp.j_c_local, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(cmp.j_h_global + cmp.j_c_global, 0.0, epsilon = 1e-10);
        assert!(cmp.j_h_local > 0.0);
    }

    #[test]
    fn local_current_sign_follows_gradient() {
        for (kt_c, kt_h) in [(0.5, 5.0), (5.0, 0.5), (0.3, 1.7), (2.0, 0.7)] {
            let p = QubitMachineParams {
                omega: 1.0,
                g: 0.07,
                nu_c: 0.004,
                nu_h: 0.006,
                kt_c,
                kt_h,
            };
            let cmp = qubit_steady_comparison(&p).unwrap();
            assert_eq!(
                cmp.j_h_local.signum(),
                (kt_h - kt_c).signum(),
                "params {p:?}"
            );
        }
    }

    #[test]
    fn fidelity_basics() {
        let p = fig8(0.1);
        let h = qubit_hamiltonian(&p);
        let rho = steady_state(&liouvillian(&h, &local_jump_set(&p).unwrap())).unwrap();
        assert_abs_diff_eq!(density_fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-10);

        let mut a = Array2::<Complex64>::zeros((DIM, DIM));
        a[[0, 0]] = c(1.0);
        let mut b = Array2::<Complex64>::zeros((DIM, DIM));
        b[[3, 3]] = c(1.0);
        let pa = QubitDensityMatrix::new(a).unwrap();
        let pb = QubitDensityMatrix::new(b).unwrap();
        assert_abs_diff_eq!(density_fidelity(&pa, &pb).unwrap(), 0.0, epsilon = 1e-12);
        let f_ab = density_fidelity(&pa, &rho).unwrap();
        let f_ba = density_fidelity(&rho, &pa).unwrap();
        assert_abs_diff_eq!(f_ab, f_ba, epsilon = 1e-10);
    }

    #[test]
    fn density_matrix_validation_rejects_garbage() {
        let mut m = Array2::<Complex64>::zeros((DIM, DIM));
        m[[0, 0]] = c(2.0); // trace 2
        assert!(QubitDensityMatrix::new(m).is_err());

        let mut m = Array2::<Complex64>::zeros((DIM, DIM));
        m[[0, 0]] = c(1.5);
        m[[1, 1]] = c(-0.5); // negative eigenvalue
        assert!(QubitDensityMatrix::new(m).is_err());
    }

    #[test]
    fn params_validation() {
        let mut p = fig8(0.1);
        p.g = 1.0; // = omega
        assert!(p.validate().is_err());
        let mut p = fig8(0.1);
        p.nu_c = 0.0;
        assert!(p.validate().is_err());
    }
}
