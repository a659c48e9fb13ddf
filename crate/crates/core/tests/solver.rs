mod common;

use envelope::etsolver::{compact_identical, stationarize, Bound, SolverConfig, Stationarity, Strategy};
use envelope::model::{
    builtin_system, nuclear_mass, Builtin, Dimension, KineticForm, OscillatorQuanta, ParticleSet, Phi,
    PotentialForm, QuantumSpec, SystemSpec,
};
use envelope::Error;

fn solve(spec: &SystemSpec, state: &QuantumSpec) -> envelope::etsolver::EtSolution {
    stationarize(spec, state, &SolverConfig::default()).unwrap()
}

#[test]
fn harmonic_limit_is_approached_continuously() {
    let at = |beta: f64| {
        let spec = builtin_system(&Builtin::PowerLawThreeBody { mass: 0.2, exponent: beta }).unwrap();
        solve(&spec, &QuantumSpec::ground_state()).energy
    };
    let exact = at(2.0);
    let mut last = f64::INFINITY;
    for k in 1..=8 {
        let gap = (at(2.0 - 10f64.powi(-k)) - exact).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 1e-7 * exact);
}

#[test]
fn compact_equations_agree_with_the_general_solver() {
    let mut r = common::rng(21);
    for _ in 0..10 {
        let spec = common::random_identical(&mut r);
        let state = QuantumSpec::ground_state();
        let a = solve(&spec, &state).energy;
        let b = compact_identical(&spec, &state).unwrap().energy;
        assert!((a - b).abs() < 1e-8 * a.abs(), "{spec:?}: {a} vs {b}");
    }
}

#[test]
fn excitations_raise_the_energy() {
    let spec = SystemSpec::new(
        Dimension::THREE,
        vec![ParticleSet::bosons(3, KineticForm::Relativistic { mass: 0.3 })],
    )
    .with_pair(0, 0, PotentialForm::power_law(0.2, 1.0));
    let q = |n, l| OscillatorQuanta { n, l };
    let ground = solve(&spec, &QuantumSpec::explicit(vec![q(0, 0), q(0, 0)])).energy;
    let orbital = solve(&spec, &QuantumSpec::explicit(vec![q(0, 1), q(0, 0)])).energy;
    let radial = solve(&spec, &QuantumSpec::explicit(vec![q(1, 0), q(0, 0)])).energy;
    assert!((ground - solve(&spec, &QuantumSpec::ground_state()).energy).abs() < 1e-10 * ground);
    assert!(ground < orbital && orbital < radial);
    let wrong = stationarize(&spec, &QuantumSpec::explicit(vec![q(0, 0)]), &SolverConfig::default());
    assert!(matches!(wrong, Err(Error::QuantumMismatch { expected: 2, got: 1 })));
}

#[test]
fn improved_method_is_refused_for_crowded_fermions() {
    let spec = builtin_system(&Builtin::Atom {
        charge: 3.0,
        electrons: 3,
        nuclear_mass: nuclear_mass::LITHIUM_6,
    })
    .unwrap();
    let r = stationarize(&spec, &QuantumSpec::improved_ground_state(), &SolverConfig::default());
    assert!(matches!(r, Err(Error::IetUnsupported(_))));
    assert!(solve(&spec, &QuantumSpec::ground_state()).energy < 0.0);
}

#[test]
fn coulomb_atoms_are_saddle_points_with_a_lower_bound() {
    let spec = builtin_system(&Builtin::Atom {
        charge: 2.0,
        electrons: 2,
        nuclear_mass: nuclear_mass::HELIUM_4,
    })
    .unwrap();
    let sol = solve(&spec, &QuantumSpec::ground_state());
    assert_eq!(sol.stationarity, Stationarity::SaddlePoint);
    // attraction and repulsion have opposite convexity
    assert_eq!(sol.bound, Bound::Undetermined);
    let iet = solve(&spec, &QuantumSpec::improved_ground_state());
    assert_eq!(iet.bound, Bound::Undetermined);
    assert!(iet.energy < sol.energy);
}

#[test]
fn strategies_agree_in_other_dimensions() {
    for d in [1, 2] {
        let spec = SystemSpec::new(
            Dimension::new(d).unwrap(),
            vec![
                ParticleSet::bosons(2, KineticForm::Ultrarelativistic),
                ParticleSet::bosons(2, KineticForm::NonRelativistic { mass: 2.0 }),
            ],
        )
        .with_pair(0, 0, PotentialForm::power_law(1.0, 1.0))
        .with_pair(0, 1, PotentialForm::power_law(0.5, 1.0))
        .with_pair(1, 1, PotentialForm::power_law(0.25, 1.0));
        let energies: Vec<f64> = [Strategy::FixedPoint, Strategy::Newton, Strategy::Auto]
            .into_iter()
            .map(|strategy| {
                let cfg = SolverConfig { strategy, ..SolverConfig::default() };
                stationarize(&spec, &QuantumSpec::ground_state(), &cfg).unwrap().energy
            })
            .collect();
        for e in &energies {
            assert!((e - energies[0]).abs() < 1e-9 * energies[0], "{energies:?}");
        }
    }
}

#[test]
fn explicit_phi_overrides_the_automatic_one() {
    let spec = builtin_system(&Builtin::UltraRelOsc { lambda: 1.0, n: 3 }).unwrap();
    let auto = solve(&spec, &QuantumSpec::improved_ground_state());
    let explicit = solve(&spec, &QuantumSpec::ground_state().with_phi(Phi::Value(3f64.sqrt())));
    assert!((auto.energy - explicit.energy).abs() < 1e-12 * auto.energy);
    assert_eq!(auto.bound, Bound::Undetermined);
}

#[test]
fn bad_starting_values_are_repaired_or_rejected() {
    let spec = builtin_system(&Builtin::PowerLawThreeBody { mass: 5.0, exponent: 1.0 }).unwrap();
    let mut cfg = SolverConfig::default();
    cfg.init.rho = Some(vec![vec![7.0, 0.01], vec![0.01, 3.0]]);
    let a = stationarize(&spec, &QuantumSpec::ground_state(), &cfg).unwrap().energy;
    let b = solve(&spec, &QuantumSpec::ground_state()).energy;
    assert!((a - b).abs() < 1e-9 * b);
}
