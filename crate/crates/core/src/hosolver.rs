//! Exact spectrum of the many-body harmonic oscillator
//!
//! ```text
//! H_ho = Σ p_i²/(2μ_i) − P²/(2M) + Σ ν_i s_i² + Σ_{i<j} ρ_ij r_ij²
//! ```
//!
//! for particles grouped in sets of identical particles. The Hamiltonian
//! splits into one internal block per set, whose `N_α − 1` coordinates all
//! share the frequency
//!
//! ```text
//! ω_α = √( (2/μ_α) (ν_α + Σ_β N_β ρ_αβ) )
//! ```
//!
//! and a block for the relative motion of the set centres, which behaves as
//! `S` particles of masses `M_α = N_α μ_α` tied by one-body springs `N_α ν_α`
//! and pair springs `N_α N_β ρ_αβ`. That block is diagonalised numerically in
//! mass-weighted Jacobi coordinates.
//!
//! Gradients with respect to the parameters are exact: closed form for the
//! internal blocks, first-order eigenvalue perturbation for the centre of
//! mass block.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etsolver::quanta::{global_q, resolve_phi, GlobalQ};
use crate::model::{QuantumSpec, SystemSpec};

/// Masses and springs of the auxiliary oscillator, one value per set (or set
/// pair). Also used to hold gradients with respect to those values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxParams {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    /// Symmetric; `rho[a][a]` only matters when set `a` has two particles or more.
    pub rho: Vec<Vec<f64>>,
}

pub type AuxGradient = AuxParams;

impl AuxParams {
    pub fn zeros(sets: usize) -> Self {
        AuxParams {
            mu: vec![0.0; sets],
            nu: vec![0.0; sets],
            rho: vec![vec![0.0; sets]; sets],
        }
    }

    pub fn set_count(&self) -> usize {
        self.mu.len()
    }

    pub fn set_rho(&mut self, a: usize, b: usize, value: f64) {
        self.rho[a][b] = value;
        self.rho[b][a] = value;
    }

    pub fn get(&self, index: ParamIndex) -> f64 {
        match index {
            ParamIndex::Mu(a) => self.mu[a],
            ParamIndex::Nu(a) => self.nu[a],
            ParamIndex::Rho(a, b) => self.rho[a][b],
        }
    }

    pub fn set(&mut self, index: ParamIndex, value: f64) {
        match index {
            ParamIndex::Mu(a) => self.mu[a] = value,
            ParamIndex::Nu(a) => self.nu[a] = value,
            ParamIndex::Rho(a, b) => self.set_rho(a, b, value),
        }
    }
}

/// Address of one reduced auxiliary parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamIndex {
    Mu(usize),
    Nu(usize),
    /// Unordered set pair, stored with `a ≤ b`.
    Rho(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeBlock {
    /// Internal motion of set `α`.
    Internal(usize),
    /// `k`-th mode of the relative motion of the set centres.
    CenterOfMass(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalMode {
    pub block: ModeBlock,
    pub omega: f64,
    pub multiplicity: usize,
}

/// Frequencies flattened to the `N − 1` internal coordinates.
pub fn flatten(modes: &[NormalMode]) -> Vec<f64> {
    modes
        .iter()
        .flat_map(|m| std::iter::repeat_n(m.omega, m.multiplicity))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoSolution {
    pub modes: Vec<NormalMode>,
    pub energy: f64,
    pub grad: AuxGradient,
}

/// Effective spring `ν_α + Σ_β N_β ρ_αβ` of the internal block of set `a`.
pub fn internal_spring(spec: &SystemSpec, params: &AuxParams, a: usize) -> f64 {
    params.nu[a]
        + spec
            .sets
            .iter()
            .enumerate()
            .map(|(b, set)| set.count as f64 * params.rho[a][b])
            .sum::<f64>()
}

struct CmModes {
    omega_sq: Vec<f64>,
    /// Eigenvectors in set-centre coordinates, normalised to `vᵀ M v = 1`.
    vectors: Vec<DVector<f64>>,
    masses: Vec<f64>,
}

/// Unit vectors of the mass-weighted Jacobi coordinates of `S` bodies; all
/// orthogonal to `√M`, the direction of the global translation.
fn jacobi_basis(masses: &[f64]) -> DMatrix<f64> {
    let s = masses.len();
    let mut basis = DMatrix::zeros(s, s - 1);
    let mut partial = 0.0;
    for k in 0..s - 1 {
        partial += masses[k];
        let next = masses[k + 1];
        let reduced = partial * next / (partial + next);
        let scale = reduced.sqrt();
        for a in 0..=k {
            basis[(a, k)] = scale * masses[a].sqrt() / partial;
        }
        basis[(k + 1, k)] = -scale / next.sqrt();
    }
    basis
}

fn cm_modes(spec: &SystemSpec, params: &AuxParams) -> Result<CmModes> {
    let s = spec.set_count();
    let masses: Vec<f64> = spec
        .sets
        .iter()
        .zip(&params.mu)
        .map(|(set, mu)| set.count as f64 * mu)
        .collect();
    if s < 2 {
        return Ok(CmModes {
            omega_sq: Vec::new(),
            vectors: Vec::new(),
            masses,
        });
    }
    if masses.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::Domain("auxiliary masses must be positive".into()));
    }
    let total: f64 = masses.iter().sum();
    let w: Vec<f64> = masses.iter().map(|m| m / total).collect();

    // Potential V = Rᵀ W R in set-centre coordinates.
    let mut pot = DMatrix::<f64>::zeros(s, s);
    for a in 0..s {
        for b in a + 1..s {
            let c = (spec.sets[a].count * spec.sets[b].count) as f64 * params.rho[a][b];
            pot[(a, a)] += c;
            pot[(b, b)] += c;
            pot[(a, b)] -= c;
            pot[(b, a)] -= c;
        }
    }
    for g in 0..s {
        let k = spec.sets[g].count as f64 * params.nu[g];
        if k == 0.0 {
            continue;
        }
        for a in 0..s {
            for b in 0..s {
                let ea = f64::from(u8::from(a == g)) - w[a];
                let eb = f64::from(u8::from(b == g)) - w[b];
                pot[(a, b)] += k * ea * eb;
            }
        }
    }

    let inv_sqrt = DVector::from_iterator(s, masses.iter().map(|m| 1.0 / m.sqrt()));
    let mut dyn_mat = pot * 2.0;
    for a in 0..s {
        for b in 0..s {
            dyn_mat[(a, b)] *= inv_sqrt[a] * inv_sqrt[b];
        }
    }
    let basis = jacobi_basis(&masses);
    let reduced = basis.transpose() * &dyn_mat * &basis;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = SymmetricEigen::new(reduced);

    let mut order: Vec<usize> = (0..s - 1).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut omega_sq = Vec::with_capacity(s - 1);
    let mut vectors = Vec::with_capacity(s - 1);
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveMode { omega_sq: lambda });
        }
        let x = &basis * eig.eigenvectors.column(i);
        let v = x.component_mul(&inv_sqrt);
        omega_sq.push(lambda);
        vectors.push(v);
    }
    Ok(CmModes {
        omega_sq,
        vectors,
        masses,
    })
}

/// Normal-mode frequencies: one (possibly degenerate) entry per set with at
/// least two particles, followed by the `S − 1` centre-of-mass modes sorted
/// by increasing frequency.
pub fn normal_modes(spec: &SystemSpec, params: &AuxParams) -> Result<Vec<NormalMode>> {
    let mut modes = Vec::new();
    for (a, set) in spec.sets.iter().enumerate() {
        if set.count < 2 {
            continue;
        }
        let mu = params.mu[a];
        if !(mu > 0.0) {
            return Err(Error::Domain("auxiliary masses must be positive".into()));
        }
        let omega_sq = 2.0 * internal_spring(spec, params, a) / mu;
        if !(omega_sq > 0.0) {
            return Err(Error::NonPositiveMode { omega_sq });
        }
        modes.push(NormalMode {
            block: ModeBlock::Internal(a),
            omega: omega_sq.sqrt(),
            multiplicity: set.count - 1,
        });
    }
    let cm = cm_modes(spec, params)?;
    modes.extend(cm.omega_sq.iter().enumerate().map(|(k, l)| NormalMode {
        block: ModeBlock::CenterOfMass(k),
        omega: l.sqrt(),
        multiplicity: 1,
    }));
    Ok(modes)
}

/// Oscillator energy and its gradient for explicitly given global quantum
/// numbers.
pub fn ho_energy_q(spec: &SystemSpec, params: &AuxParams, q: &GlobalQ) -> Result<HoSolution> {
    let s = spec.set_count();
    if q.internal.len() != s || q.cm.len() != s.saturating_sub(1) {
        return Err(Error::QuantumMismatch {
            expected: s,
            got: q.internal.len(),
        });
    }
    let mut grad = AuxParams::zeros(s);
    let mut energy = 0.0;
    let mut modes = Vec::new();

    for (a, set) in spec.sets.iter().enumerate() {
        if set.count < 2 {
            continue;
        }
        let qa = q.internal[a].map_or(0.0, |b| b.value);
        let mu = params.mu[a];
        if !(mu > 0.0) {
            return Err(Error::Domain("auxiliary masses must be positive".into()));
        }
        let k = internal_spring(spec, params, a);
        let omega_sq = 2.0 * k / mu;
        if !(omega_sq > 0.0) {
            return Err(Error::NonPositiveMode { omega_sq });
        }
        let omega = omega_sq.sqrt();
        let e = omega * qa;
        energy += e;
        modes.push(NormalMode {
            block: ModeBlock::Internal(a),
            omega,
            multiplicity: set.count - 1,
        });
        // E = Q √(2K/μ): ∂E/∂μ = −E/(2μ), ∂E/∂K = E/(2K)
        grad.mu[a] -= e / (2.0 * mu);
        let de_dk = e / (2.0 * k);
        grad.nu[a] += de_dk;
        for (b, other) in spec.sets.iter().enumerate() {
            let d = de_dk * other.count as f64;
            grad.rho[a][b] += d;
            if a != b {
                grad.rho[b][a] += d;
            }
        }
    }

    let cm = cm_modes(spec, params)?;
    if !cm.omega_sq.is_empty() {
        let total: f64 = cm.masses.iter().sum();
        let kvec: Vec<f64> = spec
            .sets
            .iter()
            .zip(&params.nu)
            .map(|(set, nu)| set.count as f64 * nu)
            .collect();
        for (k, (&lambda, v)) in cm.omega_sq.iter().zip(&cm.vectors).enumerate() {
            let omega = lambda.sqrt();
            let qk = q.cm[k];
            energy += omega * qk;
            modes.push(NormalMode {
                block: ModeBlock::CenterOfMass(k),
                omega,
                multiplicity: 1,
            });
            // dλ = vᵀ (2 dW − λ dM) v,   dE = q dλ / (2ω)
            let factor = qk / (2.0 * omega);
            let wv: f64 = cm.masses.iter().zip(v.iter()).map(|(m, x)| m * x).sum::<f64>() / total;
            let kdev: f64 = kvec.iter().zip(v.iter()).map(|(kg, x)| kg * (x - wv)).sum();
            for a in 0..s {
                let na = spec.sets[a].count as f64;
                let dev = v[a] - wv;
                grad.nu[a] += factor * 2.0 * na * dev * dev;
                let dw = -2.0 * (na * dev / total) * kdev;
                grad.mu[a] += factor * (2.0 * dw - lambda * na * v[a] * v[a]);
                for b in a + 1..s {
                    let nb = spec.sets[b].count as f64;
                    let diff = v[a] - v[b];
                    let d = factor * 2.0 * na * nb * diff * diff;
                    grad.rho[a][b] += d;
                    grad.rho[b][a] += d;
                }
            }
        }
    }
    Ok(HoSolution {
        modes,
        energy,
        grad,
    })
}

/// Oscillator energy of the state `state`, with the centre of mass removed.
pub fn ho_energy(spec: &SystemSpec, params: &AuxParams, state: &QuantumSpec) -> Result<HoSolution> {
    let phi = resolve_phi(spec, state.phi)?;
    let q = global_q(spec, state, phi)?;
    ho_energy_q(spec, params, &q)
}

/// Exact partial derivatives of the oscillator energy. Through
/// Hellmann–Feynman, `∂E/∂ν_α = N_α⟨s²⟩`, `∂E/∂ρ_αβ = (pairs)·⟨r²⟩` and
/// `∂E/∂μ_α = −N_α⟨p²⟩/(2μ_α²)`.
pub fn ho_gradient(spec: &SystemSpec, params: &AuxParams, state: &QuantumSpec) -> Result<AuxGradient> {
    ho_energy(spec, params, state).map(|s| s.grad)
}
