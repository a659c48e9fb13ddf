//! Global quantum numbers of the oscillator blocks.
//!
//! The oscillator energy of a block of identical particles only depends on
//! its quantum numbers through `Q = Σ (2n + l) + (N_α − 1)·D/2`. For the
//! ground state of bosons every quantum number vanishes; for fermions the
//! internal oscillators are filled level by level, each level `q` holding
//! `d·C(q + D − 1, D − 1)` particles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    KineticForm, OscillatorQuanta, ParticleSet, Phi, PotentialForm, QuantumMode, QuantumSpec,
    Statistics, SystemSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QProvenance {
    Explicit,
    BosonGroundState,
    /// Levels `0..q` are full and `r` particles sit on level `q`.
    FermionGroundState { q: u64, r: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockQ {
    pub value: f64,
    pub provenance: QProvenance,
}

/// Quantum numbers of every oscillator block of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalQ {
    /// One entry per set; `None` for sets holding a single particle.
    pub internal: Vec<Option<BlockQ>>,
    /// One entry per centre-of-mass mode, by increasing frequency.
    pub cm: Vec<f64>,
    pub phi: f64,
}

impl GlobalQ {
    pub fn is_genuine(&self) -> bool {
        self.phi == 2.0
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Contribution of one oscillator coordinate, `φn + l + (D + φ − 2)/2`.
/// With `φ = 2` this is the usual `2n + l + D/2`; for `D = 1` it is `n + 1/2`
/// whatever `φ`.
pub fn coordinate_q(quanta: OscillatorQuanta, dimension: u32, phi: f64) -> f64 {
    if dimension == 1 {
        return f64::from(quanta.n) + 0.5;
    }
    let d = f64::from(dimension);
    phi * f64::from(quanta.n) + f64::from(quanta.l) + (d + phi - 2.0) / 2.0
}

/// Fermionic ground state of `count` particles with degeneracy `d` in `D`
/// dimensions. Returns `(q, r, Q)`.
pub fn fermion_filling(count: u64, degeneracy: u64, dimension: u32) -> (u64, u64, f64) {
    let dd = u64::from(dimension);
    // q is the greatest natural number with d·C(q + D − 1, D) ≤ N.
    let mut q = 0;
    while degeneracy * binomial(q + 1 + dd - 1, dd) <= count {
        q += 1;
    }
    let below = degeneracy * binomial(q + dd - 1, dd);
    let r = count - below;
    let quanta = degeneracy * dd * binomial(q + dd - 1, dd + 1) + q * r;
    let value = quanta as f64 + (count as f64 - 1.0) * f64::from(dimension) / 2.0;
    (q, r, value)
}

/// Large-`N` estimate `D/(D+1)·(D!/d)^{1/D}·N^{(D+1)/D}` of the fermionic
/// ground-state `Q`.
pub fn fermion_q_asymptotic(count: u64, degeneracy: u64, dimension: u32) -> f64 {
    let d = f64::from(dimension);
    let factorial: f64 = (1..=dimension).map(f64::from).product();
    d / (d + 1.0) * (factorial / degeneracy as f64).powf(1.0 / d) * (count as f64).powf((d + 1.0) / d)
}

/// Ground-state `Q` of the internal motion of one set, plain envelope theory.
pub fn ground_state_q(set: &ParticleSet, dimension: u32) -> BlockQ {
    let n = set.count as u64;
    match set.statistics {
        Statistics::Boson => BlockQ {
            value: (set.count as f64 - 1.0) * f64::from(dimension) / 2.0,
            provenance: QProvenance::BosonGroundState,
        },
        Statistics::Fermion { degeneracy } => {
            let (q, r, value) = fermion_filling(n, u64::from(degeneracy), dimension);
            BlockQ {
                value,
                provenance: QProvenance::FermionGroundState { q, r },
            }
        }
    }
}

/// Ground-state `Q` with a modified `φ`. Only states where every quantum
/// number vanishes (bosons, or fermions all fitting in the lowest level)
/// have a defined modification.
pub fn ground_state_q_phi(set: &ParticleSet, dimension: u32, phi: f64) -> Result<BlockQ> {
    if phi == 2.0 || dimension == 1 {
        return Ok(ground_state_q(set, dimension));
    }
    let all_lowest = match set.statistics {
        Statistics::Boson => true,
        Statistics::Fermion { degeneracy } => set.count as u64 <= u64::from(degeneracy),
    };
    if !all_lowest {
        return Err(Error::IetUnsupported(format!(
            "{} fermions with degeneracy {}",
            set.count,
            match set.statistics {
                Statistics::Fermion { degeneracy } => degeneracy,
                Statistics::Boson => 0,
            }
        )));
    }
    let provenance = match set.statistics {
        Statistics::Boson => QProvenance::BosonGroundState,
        Statistics::Fermion { .. } => QProvenance::FermionGroundState {
            q: 0,
            r: set.count as u64,
        },
    };
    Ok(BlockQ {
        value: (set.count as f64 - 1.0) * coordinate_q(OscillatorQuanta::default(), dimension, phi),
        provenance,
    })
}

/// `φ` for a power-law potential of exponent `β`: `√(β+2)` when `T ∝ p²`,
/// `√(β+1)` when `T ∝ p`.
pub fn phi_for(kinetic: &KineticForm, potential: &PotentialForm) -> Result<f64> {
    let beta = potential
        .exponent()
        .ok_or_else(|| Error::Unsupported("φ needs a power-law potential".into()))?;
    let shift = match kinetic {
        KineticForm::NonRelativistic { .. } => 2.0,
        k if k.is_linear_in_p() => 1.0,
        _ => {
            return Err(Error::Unsupported(
                "φ is only known for T ∝ p² or T ∝ p; give φ explicitly".into(),
            ))
        }
    };
    let arg = beta + shift;
    if arg <= 0.0 {
        return Err(Error::Unsupported(format!("φ undefined for β = {beta}")));
    }
    Ok(arg.sqrt())
}

/// Resolves the `φ` choice of a state for a given system. `Auto` requires a
/// single kinematic family and a single exponent among all present
/// potentials.
pub fn resolve_phi(spec: &SystemSpec, phi: Phi) -> Result<f64> {
    match phi {
        Phi::Genuine => Ok(2.0),
        Phi::Value(v) if v > 0.0 && v.is_finite() => Ok(v),
        Phi::Value(v) => Err(Error::OutOfRange {
            name: "phi",
            reason: format!("{v} must be positive"),
        }),
        Phi::Auto => {
            let mut potentials = spec
                .sets
                .iter()
                .map(|s| s.one_body)
                .filter(|p| !p.is_absent())
                .collect::<Vec<_>>();
            potentials.extend(spec.set_pairs().map(|(a, b)| spec.pairs[a][b]).filter(|p| !p.is_absent()));
            let Some(first) = potentials.first() else {
                return Err(Error::Unsupported("φ needs at least one potential".into()));
            };
            if potentials.iter().any(|p| p.exponent() != first.exponent()) {
                return Err(Error::Unsupported(
                    "automatic φ needs a single power-law exponent; give φ explicitly".into(),
                ));
            }
            let mut value = None;
            for set in &spec.sets {
                let v = phi_for(&set.kinetic, first)?;
                if value.is_some_and(|w| w != v) {
                    return Err(Error::Unsupported(
                        "automatic φ needs a single kinematic family; give φ explicitly".into(),
                    ));
                }
                value = Some(v);
            }
            value.ok_or_else(|| Error::Unsupported("empty system".into()))
        }
    }
}

/// Builds the global quantum numbers for `state` with an already resolved `φ`.
pub fn global_q(spec: &SystemSpec, state: &QuantumSpec, phi: f64) -> Result<GlobalQ> {
    let dim = spec.dimension.get();
    let s = spec.set_count();
    let cm_modes = s.saturating_sub(1);
    match &state.mode {
        QuantumMode::GroundState => {
            let internal = spec
                .sets
                .iter()
                .map(|set| {
                    if set.count >= 2 {
                        ground_state_q_phi(set, dim, phi).map(Some)
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let cm = vec![coordinate_q(OscillatorQuanta::default(), dim, phi); cm_modes];
            Ok(GlobalQ { internal, cm, phi })
        }
        QuantumMode::Explicit(list) => {
            let expected = spec.internal_coordinates();
            if list.len() != expected {
                return Err(Error::QuantumMismatch {
                    expected,
                    got: list.len(),
                });
            }
            let mut it = list.iter();
            let mut internal = Vec::with_capacity(s);
            for set in &spec.sets {
                if set.count < 2 {
                    internal.push(None);
                    continue;
                }
                let value = it
                    .by_ref()
                    .take(set.count - 1)
                    .map(|&q| coordinate_q(q, dim, phi))
                    .sum();
                internal.push(Some(BlockQ {
                    value,
                    provenance: QProvenance::Explicit,
                }));
            }
            let cm = it.map(|&q| coordinate_q(q, dim, phi)).collect();
            Ok(GlobalQ { internal, cm, phi })
        }
    }
}
