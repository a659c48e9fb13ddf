//! Physical description of an N-body system: kinematics, potentials, particle
//! sets and the quantum state to approximate.
//!
//! The Hamiltonian handled everywhere in this crate is
//!
//! ```text
//! H = Σ_i T_i(p_i) + Σ_i U_i(s_i) + Σ_{i<j} V_ij(r_ij)
//! ```
//!
//! with `s_i` the distance of particle `i` to the centre of mass and `r_ij`
//! the distance between two particles. Particles are grouped in sets of
//! identical particles sharing kinematics and potentials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension `D ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub const THREE: Dimension = Dimension(3);

    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::OutOfRange {
                name: "dimension",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Dimension(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

/// Kinetic energy as a function of the momentum modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KineticForm {
    /// `T(p) = p²/(2m)`
    NonRelativistic { mass: f64 },
    /// `T(p) = p`
    Ultrarelativistic,
    /// `T(p) = √(p² + m²)`
    Relativistic { mass: f64 },
}

impl KineticForm {
    pub fn energy(&self, p: f64) -> f64 {
        match *self {
            KineticForm::NonRelativistic { mass } => p * p / (2.0 * mass),
            KineticForm::Ultrarelativistic => p,
            KineticForm::Relativistic { mass } => p.hypot(mass),
        }
    }

    /// `dT/dp`, the mean speed interpretation of the envelope.
    pub fn derivative(&self, p: f64) -> f64 {
        match *self {
            KineticForm::NonRelativistic { mass } => p / mass,
            KineticForm::Ultrarelativistic => 1.0,
            KineticForm::Relativistic { mass } => {
                let e = p.hypot(mass);
                if e == 0.0 {
                    1.0
                } else {
                    p / e
                }
            }
        }
    }

    /// Rest mass, zero for massless kinematics.
    pub fn mass(&self) -> f64 {
        match *self {
            KineticForm::NonRelativistic { mass } | KineticForm::Relativistic { mass } => mass,
            KineticForm::Ultrarelativistic => 0.0,
        }
    }

    /// Whether `T(p) ∝ p` (massless particles).
    pub fn is_linear_in_p(&self) -> bool {
        match *self {
            KineticForm::Ultrarelativistic => true,
            KineticForm::Relativistic { mass } => mass == 0.0,
            KineticForm::NonRelativistic { .. } => false,
        }
    }
}

/// A one-body or two-body potential `V(x) = A·x^β`, or no potential at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialForm {
    Absent,
    PowerLaw { amplitude: f64, exponent: f64 },
}

impl PotentialForm {
    pub fn power_law(amplitude: f64, exponent: f64) -> Self {
        PotentialForm::PowerLaw {
            amplitude,
            exponent,
        }
    }

    /// `k·x²`
    pub fn harmonic(k: f64) -> Self {
        Self::power_law(k, 2.0)
    }

    /// `sgn(β)·c·x^β`, the usual way of writing an attractive power law.
    pub fn signed_power_law(coefficient: f64, exponent: f64) -> Self {
        Self::power_law(exponent.signum() * coefficient, exponent)
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            PotentialForm::Absent => 0.0,
            PotentialForm::PowerLaw {
                amplitude,
                exponent,
            } => amplitude * x.powf(exponent),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            PotentialForm::Absent => 0.0,
            PotentialForm::PowerLaw {
                amplitude,
                exponent,
            } => amplitude * exponent * x.powf(exponent - 1.0),
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, PotentialForm::Absent)
    }

    /// `β = 2`: the potential is already an oscillator.
    pub fn is_harmonic(&self) -> bool {
        matches!(self, PotentialForm::PowerLaw { exponent, .. } if *exponent == 2.0)
    }

    pub fn exponent(&self) -> Option<f64> {
        match *self {
            PotentialForm::Absent => None,
            PotentialForm::PowerLaw { exponent, .. } => Some(exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    Boson,
    /// Fermions with `degeneracy` internal states (2 for spin-1/2).
    Fermion { degeneracy: u32 },
}

/// `count` identical particles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSet {
    pub count: usize,
    pub statistics: Statistics,
    pub kinetic: KineticForm,
    pub one_body: PotentialForm,
}

impl ParticleSet {
    pub fn bosons(count: usize, kinetic: KineticForm) -> Self {
        ParticleSet {
            count,
            statistics: Statistics::Boson,
            kinetic,
            one_body: PotentialForm::Absent,
        }
    }

    pub fn fermions(count: usize, degeneracy: u32, kinetic: KineticForm) -> Self {
        ParticleSet {
            count,
            statistics: Statistics::Fermion { degeneracy },
            kinetic,
            one_body: PotentialForm::Absent,
        }
    }

    pub fn with_one_body(mut self, potential: PotentialForm) -> Self {
        self.one_body = potential;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub dimension: Dimension,
    pub sets: Vec<ParticleSet>,
    /// `pairs[a][b]` is the interaction between a member of set `a` and a
    /// member of set `b`. Must be symmetric.
    pub pairs: Vec<Vec<PotentialForm>>,
}

impl SystemSpec {
    /// Builds a spec with every pair interaction absent.
    pub fn new(dimension: Dimension, sets: Vec<ParticleSet>) -> Self {
        let s = sets.len();
        SystemSpec {
            dimension,
            sets,
            pairs: vec![vec![PotentialForm::Absent; s]; s],
        }
    }

    /// Sets the interaction between sets `a` and `b` (both orderings).
    pub fn with_pair(mut self, a: usize, b: usize, potential: PotentialForm) -> Self {
        self.pairs[a][b] = potential;
        self.pairs[b][a] = potential;
        self
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn total_particles(&self) -> usize {
        self.sets.iter().map(|s| s.count).sum()
    }

    /// Number of internal (relative) oscillator coordinates, `N − 1`.
    pub fn internal_coordinates(&self) -> usize {
        self.total_particles().saturating_sub(1)
    }

    pub fn pair(&self, a: usize, b: usize) -> &PotentialForm {
        &self.pairs[a][b]
    }

    /// Number of particle pairs `(i, j)` with `i` in set `a` and `j` in set `b`.
    pub fn pair_count(&self, a: usize, b: usize) -> usize {
        let na = self.sets[a].count;
        if a == b {
            na * na.saturating_sub(1) / 2
        } else {
            na * self.sets[b].count
        }
    }

    /// Iterates over unordered set pairs `(a, b)` with `a ≤ b` that have at
    /// least one particle pair.
    pub fn set_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = self.sets.len();
        (0..s)
            .flat_map(move |a| (a..s).map(move |b| (a, b)))
            .filter(move |&(a, b)| self.pair_count(a, b) > 0)
    }
}

/// Quantum numbers of one internal oscillator coordinate. For `D = 1` only
/// `n` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct OscillatorQuanta {
    pub n: u32,
    pub l: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QuantumMode {
    GroundState,
    /// One entry per internal coordinate: each set's `N_α − 1` internal
    /// coordinates in set order, then the `S − 1` centre-of-mass modes by
    /// increasing frequency.
    Explicit(Vec<OscillatorQuanta>),
}

/// Choice of the `φ` parameter in the modified global quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Phi {
    /// `φ = 2`, plain envelope theory.
    Genuine,
    /// Derived from the kinematics and the power of the interaction.
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumSpec {
    pub mode: QuantumMode,
    pub phi: Phi,
}

impl QuantumSpec {
    pub fn ground_state() -> Self {
        QuantumSpec {
            mode: QuantumMode::GroundState,
            phi: Phi::Genuine,
        }
    }

    pub fn improved_ground_state() -> Self {
        QuantumSpec {
            mode: QuantumMode::GroundState,
            phi: Phi::Auto,
        }
    }

    pub fn explicit(quanta: Vec<OscillatorQuanta>) -> Self {
        QuantumSpec {
            mode: QuantumMode::Explicit(quanta),
            phi: Phi::Genuine,
        }
    }

    pub fn with_phi(mut self, phi: Phi) -> Self {
        self.phi = phi;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationCode {
    TooFewParticles,
    PairAsymmetry,
    PairShape,
    NoSets,
    EmptySet,
    Degeneracy,
    Mass,
    Exponent,
    Amplitude,
    SelfPairSingle,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::TooFewParticles => "N<2",
            ViolationCode::PairAsymmetry => "pair-asymmetry",
            ViolationCode::PairShape => "pair-shape",
            ViolationCode::NoSets => "no-sets",
            ViolationCode::EmptySet => "empty-set",
            ViolationCode::Degeneracy => "degeneracy",
            ViolationCode::Mass => "mass",
            ViolationCode::Exponent => "exponent",
            ViolationCode::Amplitude => "amplitude",
            ViolationCode::SelfPairSingle => "self-pair-single",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

fn check_potential(p: &PotentialForm, what: &str, out: &mut Vec<Violation>) {
    if let PotentialForm::PowerLaw {
        amplitude,
        exponent,
    } = *p
    {
        if !amplitude.is_finite() || amplitude == 0.0 {
            out.push(Violation {
                code: ViolationCode::Amplitude,
                message: format!("{what}: amplitude must be finite and non-zero"),
            });
        }
        if !exponent.is_finite() || exponent == 0.0 || exponent <= -2.0 {
            out.push(Violation {
                code: ViolationCode::Exponent,
                message: format!("{what}: exponent {exponent} outside β > −2, β ≠ 0"),
            });
        }
    }
}

/// Returns every invariant violation of `spec`; empty means valid.
pub fn validate(spec: &SystemSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let s = spec.sets.len();
    if s == 0 {
        out.push(Violation {
            code: ViolationCode::NoSets,
            message: "at least one particle set is required".into(),
        });
    }
    if spec.total_particles() < 2 {
        out.push(Violation {
            code: ViolationCode::TooFewParticles,
            message: format!("total particle count {} < 2", spec.total_particles()),
        });
    }
    for (a, set) in spec.sets.iter().enumerate() {
        if set.count == 0 {
            out.push(Violation {
                code: ViolationCode::EmptySet,
                message: format!("set {a} has no particles"),
            });
        }
        if let Statistics::Fermion { degeneracy: 0 } = set.statistics {
            out.push(Violation {
                code: ViolationCode::Degeneracy,
                message: format!("set {a}: fermion degeneracy must be ≥ 1"),
            });
        }
        let mass_ok = match set.kinetic {
            KineticForm::NonRelativistic { mass } => mass.is_finite() && mass > 0.0,
            KineticForm::Relativistic { mass } => mass.is_finite() && mass >= 0.0,
            KineticForm::Ultrarelativistic => true,
        };
        if !mass_ok {
            out.push(Violation {
                code: ViolationCode::Mass,
                message: format!("set {a}: invalid kinetic mass"),
            });
        }
        check_potential(&set.one_body, &format!("one-body potential of set {a}"), &mut out);
    }
    if spec.pairs.len() != s || spec.pairs.iter().any(|row| row.len() != s) {
        out.push(Violation {
            code: ViolationCode::PairShape,
            message: format!("pair table must be {s}×{s}"),
        });
        return out;
    }
    for a in 0..s {
        for b in a..s {
            if spec.pairs[a][b] != spec.pairs[b][a] {
                out.push(Violation {
                    code: ViolationCode::PairAsymmetry,
                    message: format!("pair ({a},{b}) differs from ({b},{a})"),
                });
            }
            check_potential(&spec.pairs[a][b], &format!("pair ({a},{b})"), &mut out);
        }
        if spec.sets[a].count == 1 && !spec.pairs[a][a].is_absent() {
            out.push(Violation {
                code: ViolationCode::SelfPairSingle,
                message: format!("set {a} has a single particle but a self interaction"),
            });
        }
    }
    out
}

/// Standard nuclear masses in electron-mass units (CODATA 2018 / AME 2020,
/// electron binding included). Used as defaults for the atom benchmarks.
pub mod nuclear_mass {
    pub const PROTON: f64 = 1836.152_673_43;
    pub const HELIUM_4: f64 = 7294.299_541_42;
    pub const LITHIUM_6: f64 = 10961.899;
    pub const CARBON_12: f64 = 21868.664;
    pub const OXYGEN_16: f64 = 29148.950;
}

/// Benchmark Hamiltonians with a name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Builtin {
    /// `Σ|p_i| + Σ_{i<j<N} r_ij² + λ Σ_{i<N} r_iN²`, massless particles.
    UltraRelOsc { lambda: f64, n: usize },
    /// Two unit-mass particles plus one of mass `m`, all pairs interacting
    /// through `½ sgn(β) r^β`.
    PowerLawThreeBody { mass: f64, exponent: f64 },
    /// `N_e` electrons around a nucleus of charge `Z`, atomic units.
    Atom {
        charge: f64,
        electrons: usize,
        nuclear_mass: f64,
    },
}

pub fn builtin_system(which: &Builtin) -> Result<SystemSpec> {
    let d3 = Dimension::THREE;
    let spec = match *which {
        Builtin::UltraRelOsc { lambda, n } => {
            if !(lambda > 0.0) {
                return Err(Error::OutOfRange {
                    name: "lambda",
                    reason: format!("{lambda} must be positive"),
                });
            }
            if n < 2 {
                return Err(Error::OutOfRange {
                    name: "n",
                    reason: format!("{n} particles, need at least 2"),
                });
            }
            let kin = KineticForm::Ultrarelativistic;
            let na = n - 1;
            let mut spec = SystemSpec::new(
                d3,
                vec![ParticleSet::bosons(na, kin), ParticleSet::bosons(1, kin)],
            )
            .with_pair(0, 1, PotentialForm::harmonic(lambda));
            if na >= 2 {
                spec = spec.with_pair(0, 0, PotentialForm::harmonic(1.0));
            }
            spec
        }
        Builtin::PowerLawThreeBody { mass, exponent } => {
            if !(mass > 0.0) {
                return Err(Error::OutOfRange {
                    name: "mass",
                    reason: format!("{mass} must be positive"),
                });
            }
            if !(exponent > -2.0) || exponent == 0.0 {
                return Err(Error::OutOfRange {
                    name: "exponent",
                    reason: format!("{exponent} outside β > −2, β ≠ 0"),
                });
            }
            let v = PotentialForm::signed_power_law(0.5, exponent);
            SystemSpec::new(
                d3,
                vec![
                    ParticleSet::bosons(2, KineticForm::NonRelativistic { mass: 1.0 }),
                    ParticleSet::bosons(1, KineticForm::NonRelativistic { mass }),
                ],
            )
            .with_pair(0, 0, v)
            .with_pair(0, 1, v)
        }
        Builtin::Atom {
            charge,
            electrons,
            nuclear_mass,
        } => {
            if !(charge > 0.0) {
                return Err(Error::OutOfRange {
                    name: "charge",
                    reason: format!("{charge} must be positive"),
                });
            }
            if electrons == 0 {
                return Err(Error::OutOfRange {
                    name: "electrons",
                    reason: "at least one electron".into(),
                });
            }
            if !(nuclear_mass >= 1836.15) {
                return Err(Error::OutOfRange {
                    name: "nuclear_mass",
                    reason: format!("{nuclear_mass} below the proton mass"),
                });
            }
            let mut spec = SystemSpec::new(
                d3,
                vec![
                    ParticleSet::fermions(electrons, 2, KineticForm::NonRelativistic { mass: 1.0 }),
                    ParticleSet::bosons(
                        1,
                        KineticForm::NonRelativistic { mass: nuclear_mass },
                    ),
                ],
            )
            .with_pair(0, 1, PotentialForm::power_law(-charge, -1.0));
            if electrons >= 2 {
                spec = spec.with_pair(0, 0, PotentialForm::power_law(1.0, -1.0));
            }
            spec
        }
    };
    Ok(spec)
}
