//! Tangency functions G, I, J, the B-function, and the convexity of the
//! `b`-transforms that decides the variational character of a result.
//!
//! For an auxiliary mass `μ` the function `G` solves `T′(G(μ)) = G(μ)/μ`;
//! for auxiliary springs `ν`, `ρ` the functions `I`, `J` solve
//! `U′(I(ν)) = 2ν I(ν)` and `V′(J(ρ)) = 2ρ J(ρ)`. When the kinetic energy is
//! quadratic or a potential is already harmonic the corresponding parameter
//! is fixed and the function is left undefined; this is reported as
//! [`Solved::Exact`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hosolver::{AuxGradient, AuxParams};
use crate::model::{KineticForm, PotentialForm, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Solved {
    Value(f64),
    /// The auxiliary term coincides with the genuine one; the parameter is
    /// frozen and contributes nothing to B.
    Exact,
}

impl Solved {
    pub fn value(self) -> Option<f64> {
        match self {
            Solved::Value(v) => Some(v),
            Solved::Exact => None,
        }
    }
}

pub fn solve_g(kinetic: &KineticForm, mu: f64) -> Result<Solved> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("auxiliary mass {mu} must be positive")));
    }
    match *kinetic {
        KineticForm::NonRelativistic { .. } => Ok(Solved::Exact),
        KineticForm::Ultrarelativistic => Ok(Solved::Value(mu)),
        KineticForm::Relativistic { mass } => {
            if mu <= mass {
                return Err(Error::Domain(format!(
                    "auxiliary mass {mu} must exceed the rest mass {mass}"
                )));
            }
            Ok(Solved::Value(((mu - mass) * (mu + mass)).sqrt()))
        }
    }
}

/// Solves `V′(J) = 2xJ` for a pair potential. The same relation defines `I`
/// for one-body potentials, see [`solve_i`].
pub fn solve_j(potential: &PotentialForm, x: f64) -> Result<Solved> {
    match *potential {
        PotentialForm::Absent => Ok(Solved::Exact),
        PotentialForm::PowerLaw { exponent, .. } if exponent == 2.0 => Ok(Solved::Exact),
        PotentialForm::PowerLaw {
            amplitude,
            exponent,
        } => {
            let ratio = 2.0 * x / (amplitude * exponent);
            if !(ratio > 0.0) || !ratio.is_finite() {
                return Err(Error::Sign {
                    value: x,
                    required: if amplitude * exponent > 0.0 {
                        "positive"
                    } else {
                        "negative"
                    },
                });
            }
            Ok(Solved::Value(ratio.powf(1.0 / (exponent - 2.0))))
        }
    }
}

pub fn solve_i(potential: &PotentialForm, x: f64) -> Result<Solved> {
    solve_j(potential, x)
}

/// Sign an auxiliary spring must carry for `potential`, `sgn(Aβ)`.
pub fn required_sign(potential: &PotentialForm) -> f64 {
    match *potential {
        PotentialForm::Absent => 1.0,
        PotentialForm::PowerLaw {
            amplitude,
            exponent,
        } => (amplitude * exponent).signum(),
    }
}

/// Spring that makes `k·x²` tangent to `potential` at distance `x`:
/// `V′(x)/(2x)`. Inverse of [`solve_j`].
pub fn tangent_spring(potential: &PotentialForm, x: f64) -> f64 {
    potential.derivative(x) / (2.0 * x)
}

/// Auxiliary mass that makes `p²/(2μ)` tangent to `kinetic` at momentum `p`:
/// `p/T′(p)`. Inverse of [`solve_g`].
pub fn tangent_mass(kinetic: &KineticForm, p: f64) -> f64 {
    match *kinetic {
        KineticForm::NonRelativistic { mass } => mass,
        KineticForm::Ultrarelativistic => p,
        KineticForm::Relativistic { mass } => p.hypot(mass),
    }
}

/// Kinetic part of the auxiliary Hamiltonian,
/// `T̃(p) = p²/(2μ) + T(G(μ)) − G(μ)²/(2μ)`.
pub fn tangent_kinetic(kinetic: &KineticForm, mu: f64) -> Result<impl Fn(f64) -> f64 + use<>> {
    let shift = match solve_g(kinetic, mu)? {
        Solved::Value(g) => kinetic.energy(g) - g * g / (2.0 * mu),
        Solved::Exact => 0.0,
    };
    Ok(move |p: f64| p * p / (2.0 * mu) + shift)
}

fn kinetic_term(kinetic: &KineticForm, mu: f64) -> Result<f64> {
    Ok(match solve_g(kinetic, mu)? {
        Solved::Value(g) => kinetic.energy(g) - g * g / (2.0 * mu),
        Solved::Exact => 0.0,
    })
}

fn potential_term(potential: &PotentialForm, x: f64) -> Result<f64> {
    Ok(match solve_j(potential, x)? {
        Solved::Value(j) => potential.value(j) - x * j * j,
        Solved::Exact => 0.0,
    })
}

/// `B(μ, ν, ρ)`: the constant shift turning the oscillator into the
/// auxiliary Hamiltonian, summed with the set multiplicities.
pub fn b_function_value(spec: &SystemSpec, params: &AuxParams) -> Result<f64> {
    let mut b = 0.0;
    for (a, set) in spec.sets.iter().enumerate() {
        let n = set.count as f64;
        b += n * kinetic_term(&set.kinetic, params.mu[a])?;
        b += n * potential_term(&set.one_body, params.nu[a])?;
    }
    for (a, c) in spec.set_pairs() {
        b += spec.pair_count(a, c) as f64 * potential_term(&spec.pairs[a][c], params.rho[a][c])?;
    }
    Ok(b)
}

/// Gradient of B. The tangency conditions reduce it to `∂B/∂μ = N G²/(2μ²)`,
/// `∂B/∂ν = −N I²` and `∂B/∂ρ = −(pairs) J²`.
pub fn b_gradient(spec: &SystemSpec, params: &AuxParams) -> Result<AuxGradient> {
    let mut g = AuxParams::zeros(spec.set_count());
    for (a, set) in spec.sets.iter().enumerate() {
        let n = set.count as f64;
        let mu = params.mu[a];
        if let Solved::Value(gv) = solve_g(&set.kinetic, mu)? {
            g.mu[a] = n * gv * gv / (2.0 * mu * mu);
        }
        if let Solved::Value(iv) = solve_i(&set.one_body, params.nu[a])? {
            g.nu[a] = -n * iv * iv;
        }
    }
    for (a, c) in spec.set_pairs() {
        if let Solved::Value(jv) = solve_j(&spec.pairs[a][c], params.rho[a][c])? {
            g.set_rho(a, c, -(spec.pair_count(a, c) as f64) * jv * jv);
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convexity {
    Concave,
    Convex,
    Linear,
}

/// Convexity of `b(x)` where `b(x²)` is the kinetic energy or potential.
pub trait BTransform {
    /// `None` when the term is absent from the Hamiltonian.
    fn convexity(&self) -> Option<Convexity>;
}

impl BTransform for KineticForm {
    fn convexity(&self) -> Option<Convexity> {
        Some(match self {
            KineticForm::NonRelativistic { .. } => Convexity::Linear,
            // √x and √(x + m²)
            KineticForm::Ultrarelativistic | KineticForm::Relativistic { .. } => Convexity::Concave,
        })
    }
}

impl BTransform for PotentialForm {
    fn convexity(&self) -> Option<Convexity> {
        match *self {
            PotentialForm::Absent => None,
            PotentialForm::PowerLaw {
                amplitude,
                exponent,
            } => {
                // b(x) = A x^{β/2}, b'' ∝ A β (β − 2)
                let curvature = amplitude * exponent * (exponent - 2.0);
                Some(if curvature == 0.0 {
                    Convexity::Linear
                } else if curvature > 0.0 {
                    Convexity::Convex
                } else {
                    Convexity::Concave
                })
            }
        }
    }
}

pub fn convexity_class<F: BTransform + ?Sized>(form: &F) -> Option<Convexity> {
    form.convexity()
}
