//! Mean values at the stationary point.
//!
//! `p₀`, `s₀`, `r₀` are the square roots of `⟨p²⟩`, `⟨s²⟩`, `⟨r²⟩` in the
//! auxiliary eigenstate. For free parameters they are `G(μ₀)`, `I(ν₀)`,
//! `J(ρ₀)`; for frozen ones they are read from the oscillator gradient. The
//! approximate energy splits as `Σ T(p₀) + Σ U(s₀) + Σ V(r₀)`.

use serde::{Deserialize, Serialize};

use crate::auxiliary::{solve_g, solve_i, solve_j, Solved};
use crate::error::{Error, Result};
use crate::etsolver::EtSolution;
use crate::hosolver::{ho_energy_q, AuxParams, HoSolution};
use crate::model::SystemSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Mean momentum per set; `None` for quadratic kinematics, where the
    /// tangency condition does not define it.
    pub p0: Vec<Option<f64>>,
    /// Mean distance to the centre of mass per set.
    pub s0: Vec<f64>,
    /// Mean interparticle distance per set pair, `None` without pairs.
    pub r0: Vec<Vec<Option<f64>>>,
    pub kinetic_parts: Vec<f64>,
    pub one_body_parts: Vec<f64>,
    /// Upper triangle only (`a ≤ b`).
    pub pair_parts: Vec<Vec<f64>>,
    pub virial_residual: f64,
    pub effective_mass: Vec<f64>,
    /// Mean speed `T′(p₀)`.
    pub speed: Vec<f64>,
    /// Weight `N_α μ_α / Σ N_β μ_β` of each set in the centre of mass.
    pub cm_weights: Vec<f64>,
}

impl Observables {
    pub fn total(&self) -> f64 {
        self.kinetic_parts.iter().sum::<f64>()
            + self.one_body_parts.iter().sum::<f64>()
            + self.pair_parts.iter().flatten().sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveMasses {
    pub mu0: Vec<f64>,
    pub speed: Vec<f64>,
    pub cm_weights: Vec<f64>,
}

fn mean_or_gradient(solved: Solved, grad: f64, count: f64) -> f64 {
    match solved {
        Solved::Value(v) => v,
        Solved::Exact => (grad / count).max(0.0).sqrt(),
    }
}

pub(crate) fn from_parts(spec: &SystemSpec, params: &AuxParams, ho: &HoSolution) -> Result<Observables> {
    let s = spec.set_count();
    let mut p0 = Vec::with_capacity(s);
    let mut s0 = Vec::with_capacity(s);
    let mut kinetic_parts = Vec::with_capacity(s);
    let mut one_body_parts = Vec::with_capacity(s);
    let mut speed = Vec::with_capacity(s);
    for (a, set) in spec.sets.iter().enumerate() {
        let n = set.count as f64;
        let mu = params.mu[a];
        match solve_g(&set.kinetic, mu)? {
            Solved::Value(g) => {
                p0.push(Some(g));
                kinetic_parts.push(n * set.kinetic.energy(g));
                speed.push(set.kinetic.derivative(g));
            }
            Solved::Exact => {
                let p2 = -2.0 * mu * mu * ho.grad.mu[a] / n;
                p0.push(None);
                kinetic_parts.push(n * p2 / (2.0 * mu));
                speed.push(p2.max(0.0).sqrt() / mu);
            }
        }
        let sa = mean_or_gradient(solve_i(&set.one_body, params.nu[a])?, ho.grad.nu[a], n);
        s0.push(sa);
        one_body_parts.push(n * set.one_body.value(sa));
    }
    let mut r0 = vec![vec![None; s]; s];
    let mut pair_parts = vec![vec![0.0; s]; s];
    for (a, b) in spec.set_pairs() {
        let pairs = spec.pair_count(a, b) as f64;
        let pot = spec.pairs[a][b];
        let r = mean_or_gradient(solve_j(&pot, params.rho[a][b])?, ho.grad.rho[a][b], pairs);
        r0[a][b] = Some(r);
        r0[b][a] = Some(r);
        pair_parts[a][b] = pairs * pot.value(r);
    }
    let masses: Vec<f64> = spec.sets.iter().zip(&params.mu).map(|(s, m)| s.count as f64 * m).collect();
    let total: f64 = masses.iter().sum();
    let mut obs = Observables {
        p0,
        s0,
        r0,
        kinetic_parts,
        one_body_parts,
        pair_parts,
        virial_residual: 0.0,
        effective_mass: params.mu.clone(),
        speed,
        cm_weights: masses.iter().map(|m| m / total).collect(),
    };
    obs.virial_residual = virial_residual(spec, &obs);
    Ok(obs)
}

/// Mean values of a converged solution.
pub fn extract(spec: &SystemSpec, solution: &EtSolution) -> Result<Observables> {
    if !(solution.residuals.gradient_norm < 1e-6) {
        return Err(Error::NoConvergence {
            iterations: solution.iterations,
            best_residual: solution.residuals.gradient_norm,
        });
    }
    let ho = ho_energy_q(spec, &solution.params, &solution.quanta)?;
    from_parts(spec, &solution.params, &ho)
}

/// `|Σ p₀T′(p₀) − Σ s₀U′(s₀) − Σ r₀V′(r₀)|` with multiplicities. For
/// quadratic kinematics `p T′(p) = 2T`, so the kinetic mean energy stands in
/// for the missing `p₀`.
pub fn virial_residual(spec: &SystemSpec, obs: &Observables) -> f64 {
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for (a, set) in spec.sets.iter().enumerate() {
        let n = set.count as f64;
        kinetic += match obs.p0[a] {
            Some(p) => n * p * set.kinetic.derivative(p),
            None => 2.0 * obs.kinetic_parts[a],
        };
        let sa = obs.s0[a];
        potential += n * sa * set.one_body.derivative(sa);
    }
    for (a, b) in spec.set_pairs() {
        if let Some(r) = obs.r0[a][b] {
            potential += spec.pair_count(a, b) as f64 * r * spec.pairs[a][b].derivative(r);
        }
    }
    (kinetic - potential).abs()
}

pub fn effective_masses(obs: &Observables) -> EffectiveMasses {
    EffectiveMasses {
        mu0: obs.effective_mass.clone(),
        speed: obs.speed.clone(),
        cm_weights: obs.cm_weights.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etsolver::{stationarize, SolverConfig};
    use crate::hosolver::AuxParams;
    use crate::model::{
        builtin_system, Builtin, Dimension, KineticForm, ParticleSet, PotentialForm, QuantumSpec,
    };

    fn solve(spec: &SystemSpec) -> EtSolution {
        stationarize(spec, &QuantumSpec::ground_state(), &SolverConfig::default()).unwrap()
    }

    #[test]
    fn decomposition_of_ultrarelativistic_oscillators() {
        let spec = builtin_system(&Builtin::UltraRelOsc { lambda: 1.0, n: 3 }).unwrap();
        let sol = solve(&spec);
        let obs = extract(&spec, &sol).unwrap();
        assert!((obs.total() - 8.1770).abs() < 1e-3);
        assert!((obs.total() - sol.energy).abs() < 1e-10 * sol.energy);
        assert!(obs.virial_residual < 1e-8 * sol.energy);
    }

    #[test]
    fn identical_particles_center_relation() {
        let spec = SystemSpec::new(
            Dimension::THREE,
            vec![ParticleSet::bosons(5, KineticForm::Relativistic { mass: 0.5 })],
        )
        .with_pair(0, 0, PotentialForm::power_law(0.3, 1.0));
        let sol = solve(&spec);
        let obs = &sol.observables;
        let n = 5.0;
        let r = obs.r0[0][0].unwrap();
        assert!((2.0 * n * obs.s0[0].powi(2) - (n - 1.0) * r * r).abs() < 1e-8 * r * r);
    }

    #[test]
    fn exact_oscillator_observables() {
        let spec = SystemSpec::new(
            Dimension::THREE,
            vec![ParticleSet::bosons(4, KineticForm::NonRelativistic { mass: 1.0 })],
        )
        .with_pair(0, 0, PotentialForm::harmonic(0.5));
        let sol = solve(&spec);
        let obs = &sol.observables;
        let mut p = AuxParams::zeros(1);
        p.mu = vec![1.0];
        p.set_rho(0, 0, 0.5);
        let ho = ho_energy_q(&spec, &p, &sol.quanta).unwrap();
        let r2 = ho.grad.rho[0][0] / 6.0;
        assert!((obs.r0[0][0].unwrap().powi(2) - r2).abs() < 1e-14);
        assert!(obs.virial_residual < 1e-13);
        assert!(obs.p0[0].is_none());
    }

    #[test]
    fn perturbed_parameters_break_the_virial() {
        let spec = builtin_system(&Builtin::PowerLawThreeBody {
            mass: 5.0,
            exponent: 1.0,
        })
        .unwrap();
        let sol = solve(&spec);
        let mut p = sol.params.clone();
        p.set_rho(0, 1, p.rho[0][1] * 1.1);
        let ho = ho_energy_q(&spec, &p, &sol.quanta).unwrap();
        let obs = from_parts(&spec, &p, &ho).unwrap();
        assert!(obs.virial_residual > 1e-3 * sol.energy.abs());
    }

    #[test]
    fn effective_masses_and_weights() {
        let nr = builtin_system(&Builtin::PowerLawThreeBody {
            mass: 5.0,
            exponent: 1.0,
        })
        .unwrap();
        let sol = solve(&nr);
        let em = effective_masses(&sol.observables);
        assert_eq!(em.mu0, vec![1.0, 5.0]);
        assert!((em.cm_weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);

        let kin = KineticForm::Relativistic { mass: 0.7 };
        let two = SystemSpec::new(
            Dimension::THREE,
            vec![ParticleSet::bosons(1, kin), ParticleSet::bosons(1, kin)],
        )
        .with_pair(0, 1, PotentialForm::power_law(1.0, 1.0));
        let sol = solve(&two);
        let em = effective_masses(&sol.observables);
        assert!((em.cm_weights[0] - 0.5).abs() < 1e-10);
        let p0 = sol.observables.p0[0].unwrap();
        assert!((em.mu0[0] - kin.energy(p0)).abs() < 1e-12);
    }
}
