//! The envelope-theory engine.
//!
//! An approximate eigenvalue is the stationary value of
//! `Ẽ(μ, ν, ρ) = E_ho(μ, ν, ρ) + B(μ, ν, ρ)` over the reduced auxiliary
//! parameters. Parameters that the Hamiltonian already fixes (quadratic
//! kinetic energy, absent or harmonic potentials) are removed from the
//! unknowns. Each free one is written through its tangency point,
//! `μ = p/T′(p)`, `ν = U′(s)/(2s)`, `ρ = V′(r)/(2r)`, and the unknown is
//! `t = ln p` (or `ln s`, `ln r`). Every `t` then gives an admissible
//! parameter, and the problem stays well conditioned when a potential is
//! close to harmonic.
//!
//! Two strategies are available: the self-consistent iteration, where the
//! oscillator mean values `⟨p²⟩`, `⟨s²⟩`, `⟨r²⟩` given by the gradient of
//! `E_ho` are fed back through the tangency conditions, and a damped Newton
//! iteration on `∇Ẽ`, which also reaches saddle points.

pub mod quanta;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::auxiliary::{
    required_sign, solve_g, solve_j, tangent_mass, tangent_spring, BTransform, Convexity, Solved,
};
use crate::error::{Error, Result};
use crate::hosolver::{ho_energy_q, AuxParams, HoSolution, NormalMode, ParamIndex};
use crate::model::{validate, KineticForm, PotentialForm, QuantumSpec, SystemSpec};
use crate::observables::{self, Observables};

pub use quanta::{
    coordinate_q, fermion_filling, fermion_q_asymptotic, global_q, ground_state_q,
    ground_state_q_phi, phi_for, resolve_phi, BlockQ, GlobalQ, QProvenance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    FixedPoint,
    Newton,
    /// Self-consistent iteration to a loose tolerance, then Newton.
    #[default]
    Auto,
}

/// Starting values overriding the defaults, per set or set pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct InitGuess {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Convergence threshold on `max |θ ∂Ẽ/∂θ|` relative to `|E_ho| + |B|`.
    pub tol: f64,
    pub max_iter: usize,
    pub relaxation: f64,
    pub strategy: Strategy,
    #[serde(skip_serializing_if = "is_default_init")]
    pub init: InitGuess,
}

fn is_default_init(init: &InitGuess) -> bool {
    *init == InitGuess::default()
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iter: 500,
            relaxation: 0.5,
            strategy: Strategy::Auto,
            init: InitGuess::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bound {
    Upper,
    Lower,
    Exact,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stationarity {
    Minimum,
    Maximum,
    SaddlePoint,
    /// No free parameter: the system is an exact oscillator.
    Fixed,
}

impl Stationarity {
    pub fn is_extremum(self) -> bool {
        matches!(self, Stationarity::Minimum | Stationarity::Maximum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Relative gradient norm in logarithmic coordinates.
    pub gradient_norm: f64,
    /// Virial residual relative to `|Ẽ₀|`.
    pub virial: f64,
    /// Largest relative violation of `T′(p₀) = p₀/μ₀`, `U′(s₀) = 2ν₀s₀`,
    /// `V′(r₀) = 2ρ₀r₀` over the free parameters.
    pub fixed_point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtSolution {
    pub params: AuxParams,
    pub energy: f64,
    pub ho_energy: f64,
    pub b_value: f64,
    pub modes: Vec<NormalMode>,
    pub quanta: GlobalQ,
    pub bound: Bound,
    pub stationarity: Stationarity,
    pub residuals: Residuals,
    pub iterations: usize,
    pub observables: Observables,
}

#[derive(Debug, Clone, Copy)]
enum Term {
    Kinetic(KineticForm),
    Potential(PotentialForm),
}

#[derive(Debug, Clone, Copy)]
struct FreeParam {
    index: ParamIndex,
    term: Term,
    /// Boundary value the parameter never crosses: the rest mass for `μ`,
    /// zero for springs.
    offset: f64,
    sign: f64,
}

impl FreeParam {
    /// Parameter tangent at the scale `eᵗ`.
    fn value(&self, t: f64) -> f64 {
        let x = t.exp();
        match self.term {
            Term::Kinetic(k) => tangent_mass(&k, x),
            Term::Potential(p) => tangent_spring(&p, x),
        }
    }

    /// Inverse of [`FreeParam::value`].
    fn log(&self, value: f64) -> Option<f64> {
        let solved = match self.term {
            Term::Kinetic(k) => solve_g(&k, value),
            Term::Potential(p) => solve_j(&p, value),
        };
        match solved {
            Ok(Solved::Value(x)) if x > 0.0 && x.is_finite() => Some(x.ln()),
            _ => None,
        }
    }

    /// `x dθ/dx` at parameter value `θ`.
    fn slope(&self, value: f64) -> f64 {
        match self.term {
            Term::Kinetic(_) => {
                let x = self.log(value).map_or(0.0, f64::exp);
                x * x / value
            }
            Term::Potential(p) => (p.exponent().unwrap_or(2.0) - 2.0) * value,
        }
    }
}

/// Which parameters are frozen and at what value, which are free.
struct Layout {
    base: AuxParams,
    free: Vec<FreeParam>,
}

fn frozen_spring(potential: &PotentialForm) -> Option<f64> {
    match *potential {
        PotentialForm::Absent => Some(0.0),
        PotentialForm::PowerLaw {
            amplitude,
            exponent,
        } if exponent == 2.0 => Some(amplitude),
        PotentialForm::PowerLaw { .. } => None,
    }
}

fn layout(spec: &SystemSpec) -> Layout {
    let s = spec.set_count();
    let mut base = AuxParams::zeros(s);
    let mut free = Vec::new();
    for (a, set) in spec.sets.iter().enumerate() {
        match set.kinetic {
            KineticForm::NonRelativistic { mass } => base.mu[a] = mass,
            kin => {
                base.mu[a] = tangent_mass(&kin, 1.0);
                free.push(FreeParam {
                    index: ParamIndex::Mu(a),
                    term: Term::Kinetic(kin),
                    offset: kin.mass(),
                    sign: 1.0,
                });
            }
        }
        match frozen_spring(&set.one_body) {
            Some(v) => base.nu[a] = v,
            None => {
                base.nu[a] = tangent_spring(&set.one_body, 1.0);
                free.push(FreeParam {
                    index: ParamIndex::Nu(a),
                    term: Term::Potential(set.one_body),
                    offset: 0.0,
                    sign: required_sign(&set.one_body),
                });
            }
        }
    }
    for (a, b) in spec.set_pairs() {
        let pot = spec.pairs[a][b];
        match frozen_spring(&pot) {
            Some(v) => base.set_rho(a, b, v),
            None => {
                base.set_rho(a, b, tangent_spring(&pot, 1.0));
                free.push(FreeParam {
                    index: ParamIndex::Rho(a, b),
                    term: Term::Potential(pot),
                    offset: 0.0,
                    sign: required_sign(&pot),
                });
            }
        }
    }
    Layout { base, free }
}

/// Aggregates the convexity of every term present in the Hamiltonian.
pub fn classify_bound(spec: &SystemSpec, phi: f64) -> Bound {
    let mut classes: Vec<Convexity> = Vec::new();
    for set in spec.sets.iter().filter(|s| s.count > 0) {
        classes.extend(set.kinetic.convexity());
        classes.extend(set.one_body.convexity());
    }
    for (a, b) in spec.set_pairs() {
        classes.extend(spec.pairs[a][b].convexity());
    }
    if phi != 2.0 {
        // a modified global quantum number gives up the comparison theorem
        return Bound::Undetermined;
    }
    let has = |c| classes.contains(&c);
    match (has(Convexity::Concave), has(Convexity::Convex)) {
        (false, false) => Bound::Exact,
        (true, false) => Bound::Upper,
        (false, true) => Bound::Lower,
        (true, true) => Bound::Undetermined,
    }
}

struct Eval {
    ho: HoSolution,
    b: f64,
    energy: f64,
    /// `∂Ẽ/∂t` for each free parameter.
    grad_t: Vec<f64>,
    /// `(θ − offset) ∂Ẽ/∂θ`, the convergence measure.
    grad_natural: Vec<f64>,
    scale: f64,
}

impl Eval {
    fn rel_norm(&self) -> f64 {
        self.grad_natural.iter().fold(0.0f64, |m, g| m.max(g.abs())) / self.scale
    }
}

struct Problem<'a> {
    spec: &'a SystemSpec,
    q: GlobalQ,
    layout: Layout,
}

impl Problem<'_> {
    fn params(&self, t: &[f64]) -> AuxParams {
        let mut p = self.layout.base.clone();
        for (f, &ti) in self.layout.free.iter().zip(t) {
            p.set(f.index, f.value(ti));
        }
        p
    }

    fn logs(&self, params: &AuxParams) -> Option<Vec<f64>> {
        self.layout
            .free
            .iter()
            .map(|f| f.log(params.get(f.index)))
            .collect()
    }

    fn eval_params(&self, params: &AuxParams) -> Result<Eval> {
        let t = self
            .logs(params)
            .ok_or_else(|| Error::Domain("parameter outside its tangency range".into()))?;
        self.eval_at(params, &t)
    }

    /// `B` and its gradient are taken at the tangency points `x = eᵗ`, where
    /// `G`, `I`, `J` reduce to `x` exactly.
    fn eval_at(&self, params: &AuxParams, t: &[f64]) -> Result<Eval> {
        let spec = self.spec;
        let ho = ho_energy_q(spec, params, &self.q)?;
        let mut b = 0.0;
        let mut grad_t = Vec::with_capacity(t.len());
        let mut grad_natural = Vec::with_capacity(t.len());
        for (f, &ti) in self.layout.free.iter().zip(t) {
            let x = ti.exp();
            let theta = params.get(f.index);
            let (term, db) = match (f.index, f.term) {
                (ParamIndex::Mu(a), Term::Kinetic(k)) => {
                    let n = spec.sets[a].count as f64;
                    (n * (k.energy(x) - x * x / (2.0 * theta)), n * x * x / (2.0 * theta * theta))
                }
                (ParamIndex::Nu(a), Term::Potential(u)) => {
                    let n = spec.sets[a].count as f64;
                    (n * (u.value(x) - theta * x * x), -n * x * x)
                }
                (ParamIndex::Rho(a, c), Term::Potential(v)) => {
                    let n = spec.pair_count(a, c) as f64;
                    (n * (v.value(x) - theta * x * x), -n * x * x)
                }
                _ => unreachable!("layout pairs masses with kinetic terms"),
            };
            b += term;
            let d = ho.grad.get(f.index) + db;
            grad_t.push(f.slope(theta) * d);
            grad_natural.push((theta - f.offset) * d);
        }
        let scale = (ho.energy.abs() + b.abs()).max(f64::MIN_POSITIVE);
        Ok(Eval {
            energy: ho.energy + b,
            ho,
            b,
            grad_t,
            grad_natural,
            scale,
        })
    }

    fn eval(&self, t: &[f64]) -> Result<Eval> {
        self.eval_at(&self.params(t), t)
    }

    fn hessian(&self, t: &[f64]) -> Result<DMatrix<f64>> {
        let n = t.len();
        let mut h = DMatrix::zeros(n, n);
        let step = 1e-5;
        for j in 0..n {
            let mut up = t.to_vec();
            up[j] += step;
            let mut dn = t.to_vec();
            dn[j] -= step;
            let gu = self.eval(&up)?.grad_t;
            let gd = self.eval(&dn)?.grad_t;
            for i in 0..n {
                h[(i, j)] = (gu[i] - gd[i]) / (2.0 * step);
            }
        }
        Ok((&h + h.transpose()) * 0.5)
    }

    /// Starting point. Springs of repulsive terms are weakened until every
    /// normal mode is real.
    fn start(&self, init: &InitGuess) -> Result<Vec<f64>> {
        let mut p = self.layout.base.clone();
        for f in &self.layout.free {
            let guess = match f.index {
                ParamIndex::Mu(a) => init.mu.as_ref().and_then(|v| v.get(a)),
                ParamIndex::Nu(a) => init.nu.as_ref().and_then(|v| v.get(a)),
                ParamIndex::Rho(a, b) => init.rho.as_ref().and_then(|r| r.get(a)).and_then(|r| r.get(b)),
            };
            if let Some(&g) = guess {
                if f.log(g).is_none() {
                    return Err(Error::Sign {
                        value: g,
                        required: if f.sign > 0.0 { "positive" } else { "negative" },
                    });
                }
                p.set(f.index, g);
            }
        }
        for _ in 0..60 {
            match self.eval_params(&p) {
                Ok(_) => return self.logs(&p).ok_or(Error::InadmissibleEverywhere),
                Err(Error::NonPositiveMode { .. }) => {
                    let mut changed = false;
                    for f in &self.layout.free {
                        if f.sign < 0.0 && !matches!(f.index, ParamIndex::Mu(_)) {
                            p.set(f.index, p.get(f.index) * 0.5);
                            changed = true;
                        }
                    }
                    if !changed {
                        return Err(Error::InadmissibleEverywhere);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::InadmissibleEverywhere)
    }

    /// Targets `ln √⟨x²⟩` of the self-consistent update, with the mean
    /// squares read from the oscillator gradient.
    fn self_consistent_targets(&self, params: &AuxParams, ho: &HoSolution) -> Option<Vec<f64>> {
        let spec = self.spec;
        self.layout
            .free
            .iter()
            .map(|f| {
                let x2 = match f.index {
                    ParamIndex::Mu(a) => {
                        let mu = params.mu[a];
                        -2.0 * mu * mu * ho.grad.mu[a] / spec.sets[a].count as f64
                    }
                    ParamIndex::Nu(a) => ho.grad.nu[a] / spec.sets[a].count as f64,
                    ParamIndex::Rho(a, b) => ho.grad.rho[a][b] / spec.pair_count(a, b) as f64,
                };
                (x2 > 0.0 && x2.is_finite()).then(|| 0.5 * x2.ln())
            })
            .collect()
    }

    fn fixed_point(&self, mut t: Vec<f64>, cfg: &SolverConfig, tol: f64) -> (Vec<f64>, usize, bool) {
        let mut relax = cfg.relaxation.clamp(1e-3, 1.0);
        for it in 0..cfg.max_iter {
            let Ok(ev) = self.eval(&t) else {
                return (t, it, false);
            };
            if ev.rel_norm() < tol {
                return (t, it, true);
            }
            let params = self.params(&t);
            let Some(target) = self.self_consistent_targets(&params, &ev.ho) else {
                return (t, it, false);
            };
            let mut step = relax;
            loop {
                let next: Vec<f64> = t
                    .iter()
                    .zip(&target)
                    .map(|(ti, gi)| ti + step * (gi - ti))
                    .collect();
                if self.eval(&next).is_ok() {
                    t = next;
                    break;
                }
                step *= 0.5;
                if step < 1e-8 {
                    return (t, it, false);
                }
            }
            if step < relax {
                relax = step;
            }
        }
        (t, cfg.max_iter, false)
    }

    fn newton(&self, mut t: Vec<f64>, cfg: &SolverConfig) -> Result<(Vec<f64>, usize)> {
        let mut ev = self.eval(&t)?;
        let mut best = ev.rel_norm();
        for it in 0..cfg.max_iter {
            if ev.rel_norm() < cfg.tol {
                return Ok((t, it));
            }
            let h = self.hessian(&t)?;
            let g = DVector::from_column_slice(&ev.grad_t);
            let dir = match h.clone().lu().solve(&(-&g)) {
                Some(d) if d.iter().all(|x| x.is_finite()) => d,
                _ => -&g / ev.scale,
            };
            let merit = g.norm();
            let mut lambda = 1.0;
            let mut accepted = None;
            while lambda > 1e-12 {
                let trial: Vec<f64> = t.iter().zip(dir.iter()).map(|(a, d)| a + lambda * d).collect();
                if let Ok(tev) = self.eval(&trial) {
                    let tn = DVector::from_column_slice(&tev.grad_t).norm();
                    if tn < merit * (1.0 - 1e-4 * lambda) {
                        accepted = Some((trial, tev));
                        break;
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((nt, nev)) => {
                    t = nt;
                    ev = nev;
                    best = best.min(ev.rel_norm());
                }
                None => {
                    return Err(Error::NoConvergence {
                        iterations: it,
                        best_residual: best,
                    })
                }
            }
        }
        if ev.rel_norm() < cfg.tol {
            Ok((t, cfg.max_iter))
        } else {
            Err(Error::NoConvergence {
                iterations: cfg.max_iter,
                best_residual: best,
            })
        }
    }

    fn classify_stationarity(&self, t: &[f64]) -> Result<Stationarity> {
        if t.is_empty() {
            return Ok(Stationarity::Fixed);
        }
        let h = self.hessian(t)?;
        let eig = SymmetricEigen::new(h);
        let pos = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let neg = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
        Ok(if neg == 0 {
            Stationarity::Minimum
        } else if pos == 0 {
            Stationarity::Maximum
        } else {
            Stationarity::SaddlePoint
        })
    }

    fn fixed_point_residual(&self, params: &AuxParams, ho: &HoSolution) -> f64 {
        let spec = self.spec;
        let mut worst = 0.0f64;
        for f in &self.layout.free {
            let r = match f.index {
                ParamIndex::Mu(a) => {
                    let n = spec.sets[a].count as f64;
                    let mu = params.mu[a];
                    let p = (-2.0 * mu * mu * ho.grad.mu[a] / n).max(0.0).sqrt();
                    let kin = spec.sets[a].kinetic;
                    let lhs = kin.derivative(p);
                    (lhs - p / mu).abs() / lhs.abs()
                }
                ParamIndex::Nu(a) => {
                    let s = (ho.grad.nu[a] / spec.sets[a].count as f64).max(0.0).sqrt();
                    let lhs = spec.sets[a].one_body.derivative(s);
                    (lhs - 2.0 * params.nu[a] * s).abs() / lhs.abs()
                }
                ParamIndex::Rho(a, b) => {
                    let r = (ho.grad.rho[a][b] / spec.pair_count(a, b) as f64).max(0.0).sqrt();
                    let lhs = spec.pairs[a][b].derivative(r);
                    (lhs - 2.0 * params.rho[a][b] * r).abs() / lhs.abs()
                }
            };
            worst = worst.max(if r.is_finite() { r } else { f64::INFINITY });
        }
        worst
    }

    fn finish(
        &self,
        t: &[f64],
        iterations: usize,
        energy_override: Option<f64>,
    ) -> Result<EtSolution> {
        let params = self.params(t);
        let ev = self.eval_at(&params, t)?;
        let energy = energy_override.unwrap_or(ev.energy);
        let obs = observables::from_parts(self.spec, &params, &ev.ho)?;
        let stationarity = self.classify_stationarity(t)?;
        let residuals = Residuals {
            gradient_norm: ev.rel_norm_or_zero(),
            virial: obs.virial_residual / energy.abs().max(f64::MIN_POSITIVE),
            fixed_point: self.fixed_point_residual(&params, &ev.ho),
        };
        Ok(EtSolution {
            params,
            energy,
            ho_energy: ev.ho.energy,
            b_value: ev.b,
            modes: ev.ho.modes,
            bound: classify_bound(self.spec, self.q.phi),
            quanta: self.q.clone(),
            stationarity,
            residuals,
            iterations,
            observables: obs,
        })
    }
}

impl Eval {
    fn rel_norm_or_zero(&self) -> f64 {
        if self.grad_t.is_empty() {
            0.0
        } else {
            self.rel_norm()
        }
    }
}

fn prepare<'a>(spec: &'a SystemSpec, state: &QuantumSpec) -> Result<Problem<'a>> {
    let violations = validate(spec);
    if !violations.is_empty() {
        return Err(Error::InvalidSpec(violations));
    }
    let phi = resolve_phi(spec, state.phi)?;
    let q = global_q(spec, state, phi)?;
    Ok(Problem {
        spec,
        q,
        layout: layout(spec),
    })
}

/// Finds the stationary point of `Ẽ` for the state `state`.
pub fn stationarize(spec: &SystemSpec, state: &QuantumSpec, cfg: &SolverConfig) -> Result<EtSolution> {
    let problem = prepare(spec, state)?;
    let t0 = problem.start(&cfg.init)?;
    if t0.is_empty() {
        return problem.finish(&t0, 0, None);
    }
    let (t, iterations) = match cfg.strategy {
        Strategy::FixedPoint => {
            let (t, it, ok) = problem.fixed_point(t0, cfg, cfg.tol);
            if !ok {
                let best = problem.eval(&t).map(|e| e.rel_norm()).unwrap_or(f64::INFINITY);
                return Err(Error::NoConvergence {
                    iterations: it,
                    best_residual: best,
                });
            }
            (t, it)
        }
        Strategy::Newton => problem.newton(t0, cfg)?,
        Strategy::Auto => {
            let loose = cfg.tol.max(1e-6);
            let (t, it, _) = problem.fixed_point(t0, cfg, loose);
            let (t, more) = problem.newton(t, cfg)?;
            (t, it + more)
        }
    };
    problem.finish(&t, iterations, None)
}

/// Identical particles only: solves the three-equation system
///
/// ```text
/// Ẽ₀ = N T(p₀) + N U(d₀/N) + C V(d₀/√C)
/// d₀ p₀ = Q
/// N p₀ T′(p₀) = d₀ U′(d₀/N) + √C d₀ V′(d₀/√C)
/// ```
///
/// with `C = N(N−1)/2`, by a bracketed one-dimensional root search in `p₀`.
pub fn compact_identical(spec: &SystemSpec, state: &QuantumSpec) -> Result<EtSolution> {
    if spec.set_count() != 1 {
        return Err(Error::Unsupported(
            "the compact equations need a single set of identical particles".into(),
        ));
    }
    let problem = prepare(spec, state)?;
    let set = &spec.sets[0];
    let n = set.count as f64;
    let c = n * (n - 1.0) / 2.0;
    let sc = c.sqrt();
    let q = problem.q.internal[0].map_or(0.0, |b| b.value);
    let kin = set.kinetic;
    let u = set.one_body;
    let v = spec.pairs[0][0];

    let virial = |p: f64| {
        let d = q / p;
        n * p * kin.derivative(p) - d * u.derivative(d / n) - sc * d * v.derivative(d / sc)
    };
    // scan in log p for the first sign change from − to +
    let (mut lo, mut hi) = (f64::NAN, f64::NAN);
    let mut prev = (-18.0f64, virial((-18.0f64).exp()));
    for k in 1..=720 {
        let x = -18.0 + 36.0 * f64::from(k) / 720.0;
        let f = virial(x.exp());
        if prev.1 < 0.0 && f >= 0.0 {
            lo = prev.0;
            hi = x;
            break;
        }
        prev = (x, f);
    }
    if lo.is_nan() {
        return Err(Error::NoConvergence {
            iterations: 720,
            best_residual: f64::INFINITY,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if virial(mid.exp()) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let p0 = (0.5 * (lo + hi)).exp();
    let d0 = q / p0;
    let s0 = d0 / n;
    let r0 = d0 / sc;
    let energy = n * kin.energy(p0) + n * u.value(s0) + c * v.value(r0);

    let mut params = problem.layout.base.clone();
    for f in &problem.layout.free {
        let value = match f.index {
            ParamIndex::Mu(_) => tangent_mass(&kin, p0),
            ParamIndex::Nu(_) => tangent_spring(&u, s0),
            ParamIndex::Rho(..) => tangent_spring(&v, r0),
        };
        params.set(f.index, value);
    }
    let t = problem.logs(&params).ok_or(Error::InadmissibleEverywhere)?;
    problem.finish(&t, 0, Some(energy))
}
