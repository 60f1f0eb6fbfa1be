//! Sparse Pauli-Lindblad noise models.
//!
//! A model is a list of Pauli generators `P_k` with rates `λ_k ≥ 0`. The
//! channel is the product over terms of `ρ ↦ w_k ρ + (1 − w_k) P_k ρ P_k`
//! with `w_k = (1 + e^{−2λ_k}) / 2`. It is diagonal in the Pauli basis: a
//! Pauli observable `b` is scaled by `f_b = exp(−2 Σ λ_k)` over the terms
//! that anticommute with `b`.

use std::collections::{BTreeMap, HashSet};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pauli::{PauliAxis, PauliString};
use crate::scalar::Real;
use crate::topology::TopologyGraph;

/// `(1 + e^{−2λ}) / 2`, the weight on the identity branch of one factor.
pub fn w_of_lambda<T: Real>(lambda: T) -> Result<T> {
    if !(lambda >= T::zero()) {
        return Err(Error::NegativeRate(lambda.as_f64()));
    }
    Ok((T::one() + (-T::lit(2.0) * lambda).exp()) / T::lit(2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplTerm<T> {
    pub pauli: PauliString,
    pub rate: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplModel<T> {
    qubit_count: usize,
    terms: Vec<SplTerm<T>>,
}

impl<T: Real> SplModel<T> {
    pub fn new(qubit_count: usize, terms: Vec<SplTerm<T>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(terms.len());
        for t in &terms {
            if t.pauli.len() != qubit_count {
                return Err(Error::LengthMismatch { expected: qubit_count, found: t.pauli.len() });
            }
            if t.pauli.weight() == 0 {
                return Err(Error::IdentityTerm(t.pauli.to_string()));
            }
            if !(t.rate >= T::zero()) || !t.rate.is_finite() {
                return Err(Error::NegativeRate(t.rate.as_f64()));
            }
            if !seen.insert(&t.pauli) {
                return Err(Error::DuplicateTerm(t.pauli.to_string()));
            }
        }
        Ok(SplModel { qubit_count, terms })
    }

    /// Same generators with new rates, in term order.
    pub fn with_rates(&self, rates: &[T]) -> Result<Self> {
        if rates.len() != self.terms.len() {
            return Err(Error::LengthMismatch { expected: self.terms.len(), found: rates.len() });
        }
        let terms = self
            .terms
            .iter()
            .zip(rates)
            .map(|(t, &rate)| SplTerm { pauli: t.pauli.clone(), rate })
            .collect();
        Self::new(self.qubit_count, terms)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn terms(&self) -> &[SplTerm<T>] {
        &self.terms
    }

    pub fn paulis(&self) -> Vec<PauliString> {
        self.terms.iter().map(|t| t.pauli.clone()).collect()
    }

    pub fn rates(&self) -> Vec<T> {
        self.terms.iter().map(|t| t.rate).collect()
    }

    /// Eigenvalue of the channel on the Pauli observable `b`.
    pub fn pauli_fidelity(&self, b: &PauliString) -> Result<T> {
        if b.len() != self.qubit_count {
            return Err(Error::LengthMismatch { expected: self.qubit_count, found: b.len() });
        }
        let exponent: T = self
            .terms
            .iter()
            .filter(|t| t.pauli.anticommutes_unchecked(b))
            .map(|t| t.rate)
            .sum();
        Ok((-T::lit(2.0) * exponent).exp())
    }

    pub fn fidelity_table(&self, observables: &[PauliString]) -> Result<FidelityTable<T>> {
        let mut table = FidelityTable::new();
        for b in observables {
            table.insert(b.clone(), self.pauli_fidelity(b)?)?;
        }
        Ok(table)
    }

    /// Binary matrix `M[b][k] = 1` iff `measured[b]` anticommutes with term `k`.
    pub fn fidelity_design_matrix(&self, measured: &[PauliString]) -> Result<Matrix<T>> {
        design_matrix(&self.paulis(), measured)
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            n: self.qubit_count,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { pauli: t.pauli.to_string(), lambda: t.rate.as_f64() })
                .collect(),
        }
    }

    pub fn from_json(json: &ModelJson) -> Result<Self> {
        let terms = json
            .terms
            .iter()
            .map(|t| {
                Ok(SplTerm {
                    pauli: t.pauli.parse()?,
                    rate: T::from_f64(t.lambda).ok_or(Error::NegativeRate(t.lambda))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.n, terms)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// Design matrix for a list of generators against measured observables.
pub fn design_matrix<T: Real>(terms: &[PauliString], measured: &[PauliString]) -> Result<Matrix<T>> {
    let mut m = Matrix::zeros(measured.len(), terms.len());
    for (r, b) in measured.iter().enumerate() {
        for (c, p) in terms.iter().enumerate() {
            if p.anticommutes(b)? {
                m.set(r, c, T::one());
            }
        }
    }
    Ok(m)
}

/// Model JSON: `{"n": N, "terms": [{"pauli": "IXZ", "lambda": 0.01}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub pauli: String,
    pub lambda: f64,
}

/// Per-observable fidelities, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FidelityTable<T> {
    entries: BTreeMap<PauliString, T>,
}

impl<T: Real> FidelityTable<T> {
    pub fn new() -> Self {
        FidelityTable { entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, b: PauliString, f: T) -> Result<()> {
        if !(f > T::zero() && f <= T::one()) {
            return Err(Error::FidelityOutOfRange { pauli: b.to_string(), value: f.as_f64() });
        }
        if b.weight() == 0 && f != T::one() {
            return Err(Error::FidelityOutOfRange { pauli: b.to_string(), value: f.as_f64() });
        }
        self.entries.insert(b, f);
        Ok(())
    }

    /// Stored value; the identity is always 1.
    pub fn get(&self, b: &PauliString) -> Option<T> {
        if b.weight() == 0 {
            return Some(T::one());
        }
        self.entries.get(b).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, T)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn observables(&self) -> Vec<PauliString> {
        self.entries.keys().cloned().collect()
    }
}

/// Weight-1 then weight-2 generators: X, Y, Z on each vertex ascending, then
/// the nine products on each edge in lexicographic edge order.
pub fn generate_two_local_terms(g: &TopologyGraph) -> Vec<PauliString> {
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(3 * n + 9 * g.edge_count());
    for v in 0..n {
        for a in PauliAxis::NON_IDENTITY {
            out.push(PauliString::single(n, v, a));
        }
    }
    for &(u, v) in g.edges() {
        for a in PauliAxis::NON_IDENTITY {
            for b in PauliAxis::NON_IDENTITY {
                out.push(PauliString::pair(n, (u, a), (v, b)));
            }
        }
    }
    out
}

/// Two-local model with rates uniform in `[lo, hi]`.
pub fn sample_model<T: Real>(g: &TopologyGraph, seed: u64, (lo, hi): (f64, f64)) -> Result<SplModel<T>> {
    if !(lo >= 0.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(Error::InvalidRateRange { lo, hi });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = generate_two_local_terms(g)
        .into_iter()
        .map(|pauli| {
            let r = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
            SplTerm { pauli, rate: T::lit(r) }
        })
        .collect();
    SplModel::new(g.vertex_count(), terms)
}

/// Largest qubit count accepted by [`dense_channel_oracle`].
pub const ORACLE_MAX_QUBITS: usize = 4;

type CMat<T> = Vec<Vec<Complex<T>>>;

fn site_matrix<T: Real>(a: PauliAxis) -> CMat<T> {
    let o = Complex::new(T::zero(), T::zero());
    let l = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    match a {
        PauliAxis::I => vec![vec![l, o], vec![o, l]],
        PauliAxis::X => vec![vec![o, l], vec![l, o]],
        PauliAxis::Y => vec![vec![o, -i], vec![i, o]],
        PauliAxis::Z => vec![vec![l, o], vec![o, -l]],
    }
}

fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![Complex::new(T::zero(), T::zero()); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn matmul<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let n = a.len();
    let mut out = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

fn dagger<T: Real>(a: &CMat<T>) -> CMat<T> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

fn dense_pauli<T: Real>(p: &PauliString) -> CMat<T> {
    p.axes().skip(1).fold(site_matrix(p.axis(0)), |acc, a| kron(&acc, &site_matrix(a)))
}

/// Apply every channel factor to the dense matrix of `b` by explicit
/// conjugation and return `tr(b† Λ(b)) / 2^N`.
pub fn dense_channel_oracle<T: Real>(m: &SplModel<T>, b: &PauliString) -> Result<T> {
    let n = m.qubit_count();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::OracleTooLarge(n));
    }
    if b.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: b.len() });
    }
    let b_mat = dense_pauli::<T>(b);
    let mut rho = b_mat.clone();
    for term in m.terms() {
        let w = w_of_lambda(term.rate)?;
        let p = dense_pauli::<T>(&term.pauli);
        let conj = matmul(&matmul(&p, &rho), &dagger(&p));
        let (wc, vc) = (Complex::new(w, T::zero()), Complex::new(T::one() - w, T::zero()));
        for (row, crow) in rho.iter_mut().zip(&conj) {
            for (x, &c) in row.iter_mut().zip(crow) {
                *x = wc * *x + vc * c;
            }
        }
    }
    let overlap = matmul(&dagger(&b_mat), &rho);
    let trace = (0..overlap.len()).fold(Complex::new(T::zero(), T::zero()), |s, i| s + overlap[i][i]);
    Ok(trace.re / T::from_usize(1 << n).unwrap())
}
