//! Simulated cycle benchmarking.
//!
//! For every basis in a schedule, each weight-1 and edge-supported weight-2
//! Pauli that agrees with the basis on its support is measured after `d`
//! repetitions of the noise channel. Its expectation decays as `a_b f_b^d`;
//! a log-linear fit recovers `f_b`, and rates are recovered from
//! `−½ log f_b = Σ_k M[b][k] λ_k` by nonnegative least squares.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nnls::{nnls, NnlsOptions};
use crate::pauli::PauliString;
use crate::scalar::Real;
use crate::scheduler::{general_schedule, MeasurementSchedule};
use crate::spl_model::{design_matrix, FidelityTable, SplModel};
use crate::topology::TopologyGraph;

/// Depths used when none are given.
pub const DEFAULT_DEPTHS: [u32; 4] = [2, 4, 16, 64];

/// Estimates at or below this are dropped from decay fits.
pub const USABLE_FLOOR: f64 = 1e-6;

/// Multiplicative state-preparation-and-measurement amplitude per observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SpamModel<T> {
    pub default: T,
    pub per_observable: BTreeMap<PauliString, T>,
}

impl<T: Real> SpamModel<T> {
    pub fn ideal() -> Self {
        Self::uniform(T::one())
    }

    pub fn uniform(a: T) -> Self {
        SpamModel { default: a, per_observable: BTreeMap::new() }
    }

    pub fn amplitude(&self, b: &PauliString) -> T {
        self.per_observable.get(b).copied().unwrap_or(self.default)
    }

    fn validate(&self) -> Result<()> {
        for a in std::iter::once(self.default).chain(self.per_observable.values().copied()) {
            if !(a > T::zero() && a <= T::one()) {
                return Err(Error::InvalidConfig(format!("SPAM amplitude {a} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbConfig<T> {
    /// Strictly ascending positive depths, at least two.
    pub depths: Vec<u32>,
    /// Shots per (basis, depth).
    pub shots: u64,
    /// Use exact expectations instead of binomial sampling.
    pub infinite_shots: bool,
    pub spam: SpamModel<T>,
    pub seed: u64,
}

impl<T: Real> Default for CbConfig<T> {
    fn default() -> Self {
        CbConfig {
            depths: DEFAULT_DEPTHS.to_vec(),
            shots: 10_000,
            infinite_shots: false,
            spam: SpamModel::ideal(),
            seed: 0,
        }
    }
}

impl<T: Real> CbConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.depths.len() < 2 {
            return Err(Error::InvalidConfig("need at least two depths".into()));
        }
        if self.depths[0] == 0 || self.depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("depths must be positive and strictly ascending".into()));
        }
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be >= 1".into()));
        }
        self.spam.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint<T> {
    pub depth: u32,
    /// Estimated expectation, in `[−1, 1]`.
    pub estimate: T,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve<T> {
    pub observable: PauliString,
    pub points: Vec<DecayPoint<T>>,
}

/// Weight-1 and edge-supported weight-2 Paulis readable from one basis.
///
/// Weight-1 strings come first by vertex, then weight-2 strings by edge.
pub fn measurable_paulis(basis: &PauliString, g: &TopologyGraph) -> Result<Vec<PauliString>> {
    let n = g.vertex_count();
    if basis.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: basis.len() });
    }
    if basis.weight() != n {
        return Err(Error::InvalidSchedule(format!("basis {basis} is not full weight")));
    }
    let mut out: Vec<PauliString> = (0..n).map(|v| PauliString::single(n, v, basis.axis(v))).collect();
    out.extend(g.edges().iter().map(|&(u, v)| PauliString::pair(n, (u, basis.axis(u)), (v, basis.axis(v)))));
    Ok(out)
}

/// Generate one decay curve per distinct measurable observable.
///
/// An observable readable under several bases pools their shots. Curve `i`
/// (in first-seen order) draws from ChaCha stream `i` of `cfg.seed`, so
/// curves do not depend on each other's sampling.
pub fn simulate_cb<T: Real>(
    m: &SplModel<T>,
    s: &MeasurementSchedule,
    g: &TopologyGraph,
    cfg: &CbConfig<T>,
) -> Result<Vec<DecayCurve<T>>> {
    cfg.validate()?;
    let n = g.vertex_count();
    for found in [m.qubit_count(), s.qubit_count()] {
        if found != n {
            return Err(Error::LengthMismatch { expected: n, found });
        }
    }
    let mut order: Vec<PauliString> = Vec::new();
    let mut multiplicity: HashMap<PauliString, u64> = HashMap::new();
    for basis in s.bases() {
        for b in measurable_paulis(basis, g)? {
            let count = multiplicity.entry(b.clone()).or_insert(0);
            if *count == 0 {
                order.push(b);
            }
            *count += 1;
        }
    }

    let mut curves = Vec::with_capacity(order.len());
    for (idx, b) in order.into_iter().enumerate() {
        let f = m.pauli_fidelity(&b)?;
        let amp = cfg.spam.amplitude(&b);
        let shots = cfg.shots * multiplicity[&b];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(idx as u64);
        let mut points = Vec::with_capacity(cfg.depths.len());
        for &d in &cfg.depths {
            let expected = amp * f.powi(d as i32);
            let estimate = if cfg.infinite_shots {
                expected
            } else {
                let p = ((1.0 + expected.as_f64()) / 2.0).clamp(0.0, 1.0);
                let ones = Binomial::new(shots, p).expect("valid binomial").sample(&mut rng);
                T::lit((2.0 * ones as f64 / shots as f64 - 1.0).clamp(-1.0, 1.0))
            };
            points.push(DecayPoint { depth: d, estimate, shots });
        }
        curves.push(DecayCurve { observable: b, points });
    }
    Ok(curves)
}

/// Reweighting passes after the initial fit.
const REWEIGHT_PASSES: usize = 3;

/// Fidelity from a decay curve by weighted least squares of `log estimate`
/// on depth, with delta-method weights `shots · E²`.
///
/// The first pass takes `E` from the observed estimates; later passes use the
/// fitted expectation `â f̂^d`, so deep points that are mostly shot noise stop
/// pulling on the slope. The intercept absorbs the SPAM amplitude. Points at
/// or below [`USABLE_FLOOR`] are dropped.
pub fn fit_decay<T: Real>(curve: &DecayCurve<T>) -> Result<T> {
    let floor = T::lit(USABLE_FLOOR);
    let usable: Vec<(T, T, T, T)> = curve
        .points
        .iter()
        .filter(|p| p.estimate > floor)
        .map(|p| (T::from_u32(p.depth).unwrap(), p.estimate.ln(), p.estimate, T::from_u64(p.shots).unwrap()))
        .collect();
    let mut depths: Vec<T> = usable.iter().map(|u| u.0).collect();
    depths.dedup();
    if depths.len() < 2 {
        return Err(Error::CurveUnusable(curve.observable.to_string()));
    }
    let mut weights: Vec<T> = usable.iter().map(|u| u.3 * u.2 * u.2).collect();
    let (mut intercept, mut slope) = weighted_line(&usable, &weights);
    for _ in 0..REWEIGHT_PASSES {
        for (w, u) in weights.iter_mut().zip(&usable) {
            let fitted = (intercept + slope * u.0).exp().min(T::one());
            *w = u.3 * fitted * fitted;
        }
        (intercept, slope) = weighted_line(&usable, &weights);
    }
    let f = slope.exp();
    Ok(f.min(T::one()).max(T::min_positive_value()))
}

/// Weighted least-squares line through `(depth, log estimate)`.
fn weighted_line<T: Real>(pts: &[(T, T, T, T)], weights: &[T]) -> (T, T) {
    let sw: T = weights.iter().copied().sum();
    let xbar = pts.iter().zip(weights).map(|(u, &w)| w * u.0).sum::<T>() / sw;
    let ybar = pts.iter().zip(weights).map(|(u, &w)| w * u.1).sum::<T>() / sw;
    let sxy: T = pts.iter().zip(weights).map(|(u, &w)| w * (u.0 - xbar) * (u.1 - ybar)).sum();
    let sxx: T = pts.iter().zip(weights).map(|(u, &w)| w * (u.0 - xbar) * (u.0 - xbar)).sum();
    let slope = sxy / sxx;
    (ybar - slope * xbar, slope)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub fidelity_estimates: FidelityTable<T>,
    /// Recovered rates, in the order of the term list passed to [`fit_lambda`].
    pub lambda_hat: Vec<(PauliString, T)>,
    /// `‖M λ̂ + ½ log f̂‖₂`.
    pub residual_norm: T,
    /// Numerical rank of the design matrix.
    pub matrix_rank: usize,
    pub kkt_residual: T,
}

impl<T: Real> FitResult<T> {
    pub fn rates(&self) -> Vec<T> {
        self.lambda_hat.iter().map(|(_, l)| *l).collect()
    }

    pub fn term_count(&self) -> usize {
        self.lambda_hat.len()
    }

    /// `max_k |λ̂_k − λ_k|` against a model with the same term order.
    pub fn max_abs_error(&self, truth: &SplModel<T>) -> Result<T> {
        if truth.terms().len() != self.lambda_hat.len() {
            return Err(Error::LengthMismatch { expected: self.lambda_hat.len(), found: truth.terms().len() });
        }
        let mut worst = T::zero();
        for ((p, l), t) in self.lambda_hat.iter().zip(truth.terms()) {
            if *p != t.pauli {
                return Err(Error::InvalidConfig(format!("term order differs at {p} vs {}", t.pauli)));
            }
            worst = worst.max((*l - t.rate).abs());
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> FitJson {
        FitJson {
            lambda: self.lambda_hat.iter().map(|(p, l)| (p.to_string(), l.as_f64())).collect(),
            residual: self.residual_norm.as_f64(),
            rank: self.matrix_rank,
            fidelities: self.fidelity_estimates.iter().map(|(p, f)| (p.to_string(), f.as_f64())).collect(),
        }
    }
}

/// `{"lambda": {...}, "residual": r, "rank": k, "fidelities": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitJson {
    pub lambda: BTreeMap<String, f64>,
    pub residual: f64,
    pub rank: usize,
    pub fidelities: BTreeMap<String, f64>,
}

/// Rates minimizing `‖M λ + ½ log f̂‖₂` over `λ ≥ 0`.
pub fn fit_lambda<T: Real>(f_hat: &FidelityTable<T>, terms: &[PauliString]) -> Result<FitResult<T>> {
    if f_hat.is_empty() {
        return Err(Error::EmptyFidelities);
    }
    if terms.is_empty() {
        return Err(Error::EmptyTerms);
    }
    let measured = f_hat.observables();
    let half = T::lit(0.5);
    let mut rhs = Vec::with_capacity(measured.len());
    for (b, f) in f_hat.iter() {
        if !(f > T::zero() && f <= T::one()) {
            return Err(Error::FidelityOutOfRange { pauli: b.to_string(), value: f.as_f64() });
        }
        rhs.push(-half * f.ln());
    }
    let m = design_matrix::<T>(terms, &measured)?;
    let sol = nnls(&m, &rhs, &NnlsOptions::default());
    Ok(FitResult {
        fidelity_estimates: f_hat.clone(),
        lambda_hat: terms.iter().cloned().zip(sol.x).collect(),
        residual_norm: sol.residual_norm,
        matrix_rank: m.rank(),
        kkt_residual: sol.kkt_residual,
    })
}

/// Everything produced by one pass of the learning loop.
#[derive(Debug, Clone)]
pub struct LearnRun<T> {
    pub schedule: MeasurementSchedule,
    pub curves: Vec<DecayCurve<T>>,
    pub fit: FitResult<T>,
}

/// Schedule, simulate, fit every curve, then fit rates over the truth's terms.
pub fn learn_pipeline<T: Real>(g: &TopologyGraph, truth: &SplModel<T>, cfg: &CbConfig<T>) -> Result<LearnRun<T>> {
    let schedule = general_schedule(g)?;
    let curves = simulate_cb(truth, &schedule, g, cfg)?;
    let mut table = FidelityTable::new();
    for c in &curves {
        table.insert(c.observable.clone(), fit_decay(c)?)?;
    }
    let fit = fit_lambda(&table, &truth.paulis())?;
    Ok(LearnRun { schedule, curves, fit })
}

pub fn end_to_end_learn<T: Real>(g: &TopologyGraph, truth: &SplModel<T>, cfg: &CbConfig<T>) -> Result<FitResult<T>> {
    learn_pipeline(g, truth, cfg).map(|run| run.fit)
}

/// CSV with header `observable,depth,estimate,shots`.
pub fn curves_to_csv<T: Real>(curves: &[DecayCurve<T>]) -> String {
    let mut s = String::from("observable,depth,estimate,shots\n");
    for c in curves {
        for p in &c.points {
            s.push_str(&format!("{},{},{:e},{}\n", c.observable, p.depth, p.estimate, p.shots));
        }
    }
    s
}

/// Whether `b` (weight 1 or 2) can be read from some basis of `s`.
pub fn is_measurable(b: &PauliString, s: &MeasurementSchedule) -> bool {
    let support = b.support();
    s.bases().iter().any(|basis| support.iter().all(|&i| basis.axis(i) == b.axis(i)))
}

/// Two-local observables of `g` not readable from any basis of `s`.
pub fn unmeasurable_observables(g: &TopologyGraph, s: &MeasurementSchedule) -> Vec<PauliString> {
    crate::spl_model::generate_two_local_terms(g)
        .into_iter()
        .filter(|b| !is_measurable(b, s))
        .collect()
}
