#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use envelope::hosolver::AuxParams;
use envelope::model::{Dimension, KineticForm, ParticleSet, PotentialForm, SystemSpec};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random set sizes with `S ≤ 3`, `2 ≤ N ≤ 6`, harmonic interactions
/// everywhere, and random positive oscillator parameters.
pub fn random_oscillator(rng: &mut StdRng) -> (SystemSpec, AuxParams) {
    let s = rng.random_range(1..=3usize);
    let mut counts: Vec<usize> = (0..s).map(|_| 1).collect();
    let total = rng.random_range(2.max(s)..=6);
    for _ in s..total {
        let a = rng.random_range(0..s);
        counts[a] += 1;
    }
    let dim = Dimension::new(rng.random_range(1..=3)).unwrap();
    let sets = counts
        .iter()
        .map(|&n| {
            ParticleSet::bosons(n, KineticForm::NonRelativistic { mass: 1.0 })
                .with_one_body(PotentialForm::harmonic(1.0))
        })
        .collect();
    let mut spec = SystemSpec::new(dim, sets);
    let mut params = AuxParams::zeros(s);
    for a in 0..s {
        params.mu[a] = rng.random_range(0.3..3.0);
        params.nu[a] = rng.random_range(0.0..2.0);
        for b in a..s {
            if spec.pair_count(a, b) > 0 {
                spec = spec.with_pair(a, b, PotentialForm::harmonic(1.0));
                params.set_rho(a, b, rng.random_range(0.1..2.0));
            }
        }
    }
    (spec, params)
}

/// Frequencies of the full `N·D`-dimensional oscillator
/// `Σ p²/(2μ) + Σ ν (x − R)² + Σ ρ (x_i − x_j)²`, with the `D` translation
/// modes dropped. Sorted ascending.
pub fn full_space_frequencies(spec: &SystemSpec, params: &AuxParams) -> Vec<f64> {
    let set_of: Vec<usize> = spec
        .sets
        .iter()
        .enumerate()
        .flat_map(|(a, s)| std::iter::repeat_n(a, s.count))
        .collect();
    let n = set_of.len();
    let d = spec.dimension.get() as usize;
    let mass: Vec<f64> = set_of.iter().map(|&a| params.mu[a]).collect();
    let total: f64 = mass.iter().sum();

    // s = P x with P = I − 1 wᵀ
    let p = DMatrix::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) - mass[j] / total);
    let nu = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, set_of.iter().map(|&a| params.nu[a])));
    let mut w = p.transpose() * nu * &p;
    for i in 0..n {
        for j in i + 1..n {
            let k = params.rho[set_of[i]][set_of[j]];
            w[(i, i)] += k;
            w[(j, j)] += k;
            w[(i, j)] -= k;
            w[(j, i)] -= k;
        }
    }
    let big = n * d;
    let a = DMatrix::from_fn(big, big, |r, c| {
        let (i, di) = (r / d, r % d);
        let (j, dj) = (c / d, c % d);
        if di == dj {
            2.0 * w[(i, j)] / (mass[i] * mass[j]).sqrt()
        } else {
            0.0
        }
    });
    let mut eig: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig[d..].iter().map(|l| l.sqrt()).collect()
}

/// Centre-of-mass frequency of two sets in closed form.
pub fn two_set_cm_frequency(spec: &SystemSpec, params: &AuxParams) -> f64 {
    let n1 = spec.sets[0].count as f64;
    let n2 = spec.sets[1].count as f64;
    let m1 = n1 * params.mu[0];
    let m2 = n2 * params.mu[1];
    let m = m1 + m2;
    (2.0 / (m1 * m2 * m) * (n1 * m2 * m2 * params.nu[0] + n2 * m1 * m1 * params.nu[1] + n1 * n2 * m * m * params.rho[0][1]))
        .sqrt()
}

/// Total oscillator quanta of `count` fermions filled level by level in a
/// `D`-dimensional isotropic oscillator, plus the zero-point term of the
/// `N − 1` internal coordinates.
pub fn brute_force_fermion_q(count: u64, degeneracy: u64, dimension: u32) -> f64 {
    // number of ways to write k as a sum of D naturals
    fn level_states(k: u64, dimension: u32) -> u64 {
        if dimension == 1 {
            return 1;
        }
        (0..=k).map(|j| level_states(k - j, dimension - 1)).sum()
    }
    let mut left = count;
    let mut quanta = 0;
    let mut k = 0;
    while left > 0 {
        let here = (degeneracy * level_states(k, dimension)).min(left);
        quanta += k * here;
        left -= here;
        k += 1;
    }
    quanta as f64 + (count as f64 - 1.0) * f64::from(dimension) / 2.0
}

/// Airy function `Ai` from its Maclaurin series; accurate to about 1e-8 for
/// `x ≥ −10`.
pub fn airy_ai(x: f64) -> f64 {
    const C1: f64 = 0.355_028_053_887_817_2;
    const C2: f64 = 0.258_819_403_792_806_8;
    let x3 = x * x * x;
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (x, x);
    for k in 0..200 {
        let k = f64::from(k);
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    C1 * f - C2 * g
}

/// First `count` zeros of `Ai`, all negative, by scanning and bisection.
pub fn airy_zeros(count: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let step = 0.01;
    let mut x = 0.0;
    let mut fx = airy_ai(x);
    while zeros.len() < count {
        let y = x - step;
        let fy = airy_ai(y);
        if fx * fy <= 0.0 {
            let (mut hi, mut lo) = (x, y);
            for _ in 0..80 {
                let mid = 0.5 * (hi + lo);
                if (airy_ai(mid) > 0.0) == (airy_ai(hi) > 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            zeros.push(0.5 * (hi + lo));
        }
        x = y;
        fx = fy;
    }
    zeros
}

/// Random single-set system with a power-law pair potential and sometimes
/// a one-body term of the same exponent.
pub fn random_identical(rng: &mut StdRng) -> SystemSpec {
    let n = rng.random_range(2..=6usize);
    let kinetic = match rng.random_range(0..3) {
        0 => KineticForm::NonRelativistic {
            mass: rng.random_range(0.2..3.0),
        },
        1 => KineticForm::Ultrarelativistic,
        _ => KineticForm::Relativistic {
            mass: rng.random_range(0.0..2.0),
        },
    };
    let exponents: [f64; 6] = [-1.0, -0.5, 0.5, 1.0, 1.5, 3.0];
    let beta = exponents[rng.random_range(0..exponents.len())];
    let beta = if beta < 0.0 && !matches!(kinetic, KineticForm::NonRelativistic { .. }) {
        -beta
    } else {
        beta
    };
    let mut set = ParticleSet::bosons(n, kinetic);
    if rng.random_bool(0.4) {
        set = set.with_one_body(PotentialForm::signed_power_law(rng.random_range(0.2..2.0), beta.abs()));
    }
    SystemSpec::new(Dimension::THREE, vec![set]).with_pair(
        0,
        0,
        PotentialForm::signed_power_law(rng.random_range(0.2..2.0), beta),
    )
}
