//! Approximate spectra of N-body quantum systems with several species of
//! particles, by the envelope theory (also known as the auxiliary field
//! method).
//!
//! The Hamiltonian under study is replaced by a many-body harmonic
//! oscillator plus a constant `B`, both depending on auxiliary masses and
//! springs. The stationary value of the resulting eigenvalue over those
//! parameters approximates the genuine eigenvalue, and is a bound in many
//! cases.
//!
//! ```
//! use envelope::prelude::*;
//!
//! let spec = builtin_system(&Builtin::UltraRelOsc { lambda: 1.0, n: 3 })?;
//! let sol = stationarize(&spec, &QuantumSpec::ground_state(), &SolverConfig::default())?;
//! assert!((sol.energy - 8.1770).abs() < 1e-3);
//! assert_eq!(sol.bound, Bound::Upper);
//! # Ok::<(), envelope::Error>(())
//! ```

pub mod auxiliary;
pub mod config;
pub mod error;
pub mod etsolver;
pub mod hosolver;
pub mod model;
pub mod observables;
pub mod reproduce;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::auxiliary::{convexity_class, Convexity};
    pub use crate::etsolver::{
        compact_identical, stationarize, Bound, EtSolution, SolverConfig, Stationarity, Strategy,
    };
    pub use crate::hosolver::{ho_energy, normal_modes, AuxParams};
    pub use crate::model::{
        builtin_system, validate, Builtin, Dimension, KineticForm, OscillatorQuanta, ParticleSet,
        Phi, PotentialForm, QuantumSpec, Statistics, SystemSpec,
    };
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/systems.md")]
    mod systems {}
    #[doc = include_str!("../../../book/src/oscillator.md")]
    mod oscillator {}
    #[doc = include_str!("../../../book/src/auxiliary.md")]
    mod auxiliary {}
    #[doc = include_str!("../../../book/src/stationarity.md")]
    mod stationarity {}
    #[doc = include_str!("../../../book/src/quantum-numbers.md")]
    mod quantum_numbers {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
