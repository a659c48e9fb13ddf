mod common;

use envelope::hosolver::{flatten, ho_energy, normal_modes, AuxParams, ModeBlock, ParamIndex};
use envelope::model::{Dimension, KineticForm, ParticleSet, PotentialForm, QuantumSpec, SystemSpec};

use common::{full_space_frequencies, random_oscillator, rng, two_set_cm_frequency};

#[test]
fn modes_match_full_space_diagonalisation() {
    let mut r = rng(11);
    for _ in 0..100 {
        let (spec, params) = random_oscillator(&mut r);
        let d = spec.dimension.get() as usize;
        let mut ours: Vec<f64> = flatten(&normal_modes(&spec, &params).unwrap())
            .into_iter()
            .flat_map(|w| std::iter::repeat_n(w, d))
            .collect();
        ours.sort_by(f64::total_cmp);
        let oracle = full_space_frequencies(&spec, &params);
        assert_eq!(ours.len(), oracle.len());
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{ours:?} vs {oracle:?}");
        }
    }
}

#[test]
fn two_set_cm_mode_matches_closed_form() {
    let mut r = rng(12);
    let mut seen = 0;
    while seen < 100 {
        let (spec, params) = random_oscillator(&mut r);
        if spec.set_count() != 2 {
            continue;
        }
        seen += 1;
        let modes = normal_modes(&spec, &params).unwrap();
        let cm = modes.iter().find(|m| m.block == ModeBlock::CenterOfMass(0)).unwrap();
        let want = two_set_cm_frequency(&spec, &params);
        assert!((cm.omega - want).abs() < 1e-12 * want, "{} vs {want}", cm.omega);
    }
}

#[test]
fn single_set_closed_form() {
    for n in 2..=7 {
        let spec = SystemSpec::new(
            Dimension::THREE,
            vec![ParticleSet::bosons(n, KineticForm::NonRelativistic { mass: 1.0 })],
        )
        .with_pair(0, 0, PotentialForm::harmonic(1.0));
        let mut p = AuxParams::zeros(1);
        p.mu[0] = 1.7;
        p.nu[0] = 0.3;
        p.set_rho(0, 0, 0.8);
        let omega = (2.0 / 1.7 * (0.3 + n as f64 * 0.8)).sqrt();
        let modes = normal_modes(&spec, &p).unwrap();
        assert_eq!(modes.len(), 1);
        assert_eq!(modes[0].multiplicity, n - 1);
        assert!((modes[0].omega - omega).abs() < 1e-14);
        let e = ho_energy(&spec, &p, &QuantumSpec::ground_state()).unwrap().energy;
        assert!((e - omega * 1.5 * (n as f64 - 1.0)).abs() < 1e-12);
    }
}

fn indices(spec: &SystemSpec) -> Vec<ParamIndex> {
    let mut out = Vec::new();
    for a in 0..spec.set_count() {
        out.push(ParamIndex::Mu(a));
        out.push(ParamIndex::Nu(a));
    }
    out.extend(spec.set_pairs().map(|(a, b)| ParamIndex::Rho(a, b)));
    out
}

#[test]
fn gradient_matches_finite_differences() {
    let mut r = rng(13);
    let state = QuantumSpec::ground_state();
    for _ in 0..20 {
        let (spec, params) = random_oscillator(&mut r);
        let grad = ho_energy(&spec, &params, &state).unwrap().grad;
        for idx in indices(&spec) {
            let x = params.get(idx);
            let h = 1e-6 * x.abs().max(1e-2);
            let at = |v: f64| {
                let mut p = params.clone();
                p.set(idx, v);
                ho_energy(&spec, &p, &state).unwrap().energy
            };
            let fd = (at(x + h) - at(x - h)) / (2.0 * h);
            let g = grad.get(idx);
            assert!((g - fd).abs() < 1e-6 * g.abs().max(1.0), "{idx:?}: {g} vs {fd}");
        }
    }
}

#[test]
fn set_order_does_not_matter() {
    let kin = [
        KineticForm::Ultrarelativistic,
        KineticForm::Relativistic { mass: 0.5 },
        KineticForm::NonRelativistic { mass: 2.0 },
    ];
    let counts = [2, 1, 3];
    let v = |a: usize, b: usize| PotentialForm::power_law(0.3 + 0.1 * (a + b) as f64, 1.0);
    let build = |order: [usize; 3]| {
        let sets = order.iter().map(|&a| ParticleSet::bosons(counts[a], kin[a])).collect();
        let mut spec = SystemSpec::new(Dimension::THREE, sets);
        for i in 0..3 {
            for j in i..3 {
                if spec.pair_count(i, j) > 0 {
                    spec = spec.with_pair(i, j, v(order[i], order[j]));
                }
            }
        }
        spec
    };
    let solve = |spec: &SystemSpec| {
        envelope::etsolver::stationarize(spec, &QuantumSpec::ground_state(), &Default::default())
            .unwrap()
            .energy
    };
    let base = solve(&build([0, 1, 2]));
    for order in [[2, 1, 0], [1, 0, 2], [1, 2, 0]] {
        let e = solve(&build(order));
        assert!((e - base).abs() < 1e-9 * base.abs(), "{order:?}: {e} vs {base}");
    }
}
