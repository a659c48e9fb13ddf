use proptest::prelude::*;

use envelope::auxiliary::{b_function_value, b_gradient, solve_g, solve_j, tangent_mass, tangent_spring, Solved};
use envelope::config::{self, Config, Method};
use envelope::etsolver::{fermion_filling, SolverConfig};
use envelope::hosolver::AuxParams;
use envelope::model::{
    builtin_system, validate, Builtin, Dimension, KineticForm, ParticleSet, Phi, PotentialForm, QuantumSpec,
    SystemSpec,
};

fn kinetic() -> impl Strategy<Value = KineticForm> {
    prop_oneof![
        Just(KineticForm::Ultrarelativistic),
        (0.0..5.0f64).prop_map(|mass| KineticForm::Relativistic { mass }),
    ]
}

fn exponent() -> impl Strategy<Value = f64> {
    (-1.9..5.0f64).prop_filter("not 0 or 2", |b| b.abs() > 1e-3 && (b - 2.0).abs() > 1e-3)
}

fn potential() -> impl Strategy<Value = PotentialForm> {
    (0.05..5.0f64, exponent()).prop_map(|(c, b)| PotentialForm::signed_power_law(c, b))
}

proptest! {
    #[test]
    fn mass_tangency(kin in kinetic(), p in 0.01..100.0f64) {
        let mu = tangent_mass(&kin, p);
        let Solved::Value(g) = solve_g(&kin, mu).unwrap() else { panic!() };
        prop_assert!((g - p).abs() < 1e-10 * p);
        prop_assert!((kin.derivative(g) - g / mu).abs() < 1e-10 * (g / mu));
    }

    #[test]
    fn spring_tangency(pot in potential(), r in 0.01..100.0f64) {
        let rho = tangent_spring(&pot, r);
        let Solved::Value(j) = solve_j(&pot, rho).unwrap() else { panic!() };
        prop_assert!((j - r).abs() < 1e-10 * r);
        prop_assert!((pot.derivative(j) - 2.0 * rho * j).abs() < 1e-10 * (2.0 * rho * j).abs());
    }

    #[test]
    fn b_gradient_in_rho(pot in potential(), r in 0.1..10.0f64, n in 2usize..6) {
        let spec = SystemSpec::new(
            Dimension::THREE,
            vec![ParticleSet::bosons(n, KineticForm::NonRelativistic { mass: 1.0 })],
        )
        .with_pair(0, 0, pot);
        let mut p = AuxParams::zeros(1);
        p.mu[0] = 1.0;
        let rho = tangent_spring(&pot, r);
        p.set_rho(0, 0, rho);
        let g = b_gradient(&spec, &p).unwrap().rho[0][0];
        let pairs = (n * (n - 1) / 2) as f64;
        prop_assert!((g + pairs * r * r).abs() < 1e-10 * pairs * r * r);
        let h = 1e-6 * rho.abs();
        let at = |x: f64| {
            let mut q = p.clone();
            q.set_rho(0, 0, x);
            b_function_value(&spec, &q).unwrap()
        };
        let fd = (at(rho + h) - at(rho - h)) / (2.0 * h);
        prop_assert!((fd - g).abs() < 1e-5 * g.abs(), "{} vs {}", fd, g);
    }

    #[test]
    fn config_round_trip(
        counts in prop::collection::vec(1usize..5, 1..4),
        kin in kinetic(),
        pot in potential(),
        fermions in any::<bool>(),
        phi in prop_oneof![Just(Phi::Genuine), Just(Phi::Auto), (0.5..3.0f64).prop_map(Phi::Value)],
        method in prop_oneof![Just(Method::Et), Just(Method::Iet)],
        tol in 1e-14..1e-6f64,
    ) {
        let sets = counts
            .iter()
            .map(|&n| if fermions { ParticleSet::fermions(n, 2, kin) } else { ParticleSet::bosons(n, kin) })
            .collect();
        let mut spec = SystemSpec::new(Dimension::THREE, sets);
        for a in 0..counts.len() {
            for b in a..counts.len() {
                if spec.pair_count(a, b) > 0 {
                    spec = spec.with_pair(a, b, pot);
                }
            }
        }
        let state = QuantumSpec::ground_state().with_phi(phi);
        let solver = SolverConfig { tol, ..SolverConfig::default() };
        let cfg = Config::from_system(&spec, &state, method, solver.clone());
        let once = config::to_toml(&cfg).unwrap();
        let parsed = config::parse(&once).unwrap();
        prop_assert_eq!(&config::to_toml(&parsed).unwrap(), &once);
        prop_assert_eq!(&parsed, &cfg);
        if spec.total_particles() >= 2 {
            let r = parsed.resolve().unwrap();
            prop_assert_eq!(r.spec, spec);
            prop_assert_eq!(r.state, state);
            prop_assert_eq!(r.solver, solver);
        }
    }

    #[test]
    fn builtins_are_valid(
        lambda in 0.01..100.0f64,
        n in 2usize..8,
        mass in 0.01..100.0f64,
        beta in exponent(),
        z in 0.5..20.0f64,
        ne in 1usize..12,
        nuclear in 1836.16..1e5f64,
    ) {
        for b in [
            Builtin::UltraRelOsc { lambda, n },
            Builtin::PowerLawThreeBody { mass, exponent: beta },
            Builtin::Atom { charge: z, electrons: ne, nuclear_mass: nuclear },
        ] {
            prop_assert!(validate(&builtin_system(&b).unwrap()).is_empty());
        }
    }
}

#[test]
fn fermion_q_grows_with_particle_number() {
    for d in [1u64, 2, 4] {
        for dim in 1..=3u32 {
            let mut last = f64::NEG_INFINITY;
            for n in 1..=60u64 {
                let (_, _, q) = fermion_filling(n, d, dim);
                assert!(q > last, "d={d} D={dim} N={n}");
                let bosons = (n as f64 - 1.0) * f64::from(dim) / 2.0;
                assert!(q >= bosons);
                last = q;
            }
        }
    }
}

#[test]
fn massless_relativistic_is_ultrarelativistic() {
    let rel = KineticForm::Relativistic { mass: 0.0 };
    for p in [0.1, 1.0, 10.0] {
        assert_eq!(rel.energy(p), KineticForm::Ultrarelativistic.energy(p));
    }
}
