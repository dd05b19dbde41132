//! First-order Markov chains: validated transition matrices, stationary
//! distributions, entropy rates and seeded simulation.
//!
//! Entropies are reported in bits (base-2 logarithms) throughout.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph;
use crate::rng;
use crate::state::StateSpace;

/// Largest allowed deviation of a row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;
/// Largest allowed `‖πP − π‖₁` for an accepted stationary distribution.
pub const STATIONARY_RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Above this many states the automatic solver switches from the direct
/// elimination to power iteration.
pub const DIRECT_SOLVE_MAX_STATES: usize = 2000;
pub const POWER_ITERATION_TOLERANCE: f64 = 1e-12;
pub const POWER_ITERATION_MAX_ITERATIONS: usize = 1_000_000;

/// Row-stochastic matrix over a labelled state space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    states: StateSpace,
    probs: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates `rows` as a stochastic matrix over `states`.
    ///
    /// Rows whose sums are within [`ROW_SUM_TOLERANCE`] of 1 are
    /// renormalized; anything further off is rejected.
    pub fn new(states: StateSpace, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = states.len();
        if rows.len() != n {
            return Err(Error::NonSquare {
                row: rows.len(),
                expected: n,
                found: rows.len(),
            });
        }
        let mut probs = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            probs.extend_from_slice(row);
        }
        Self::from_flat(states, probs)
    }

    /// Like [`TransitionMatrix::new`] with labels given as strings.
    pub fn from_labels<S: AsRef<str>>(labels: &[S], rows: Vec<Vec<f64>>) -> Result<Self> {
        let states = StateSpace::new(labels.iter().map(|s| s.as_ref()))?;
        Self::new(states, rows)
    }

    /// Validates a row-major `n*n` buffer.
    pub fn from_flat(states: StateSpace, mut probs: Vec<f64>) -> Result<Self> {
        let n = states.len();
        if probs.len() != n * n {
            return Err(Error::NonSquare {
                row: 0,
                expected: n * n,
                found: probs.len(),
            });
        }
        for i in 0..n {
            let row = &mut probs[i * n..(i + 1) * n];
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if !((sum - 1.0).abs() < ROW_SUM_TOLERANCE) {
                return Err(Error::RowSumViolation { row: i, sum });
            }
            if sum != 1.0 {
                row.iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(Self { states, probs })
    }

    /// Caller guarantees every row is a probability vector.
    pub(crate) fn from_flat_unchecked(states: StateSpace, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), states.len() * states.len());
        Self { states, probs }
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.probs[from * self.n() + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        let n = self.n();
        &self.probs[from * n..(from + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks_exact(self.n())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.probs
    }

    /// Reorders states so that new state `i` is old state `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.len(),
            });
        }
        let states = self.states.subset(order)?;
        let mut probs = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                probs.push(self.get(i, j));
            }
        }
        Ok(Self::from_flat_unchecked(states, probs))
    }

    /// `v P` for a row vector `v`.
    pub fn left_multiply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for (i, row) in self.rows().enumerate() {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(row) {
                *o += vi * p;
            }
        }
        out
    }
}

/// Probability vector `π` with `πP = π` for the matrix it was solved from.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    states: StateSpace,
    probs: Vec<f64>,
}

impl StationaryDistribution {
    pub fn new(states: StateSpace, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: probs.len(),
            });
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::NotADistribution("negative entry"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() >= ROW_SUM_TOLERANCE {
            return Err(Error::NotADistribution("entries do not sum to 1"));
        }
        Ok(Self { states, probs })
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// `‖πP − π‖₁`.
    pub fn residual(&self, p: &TransitionMatrix) -> f64 {
        l1_residual(&self.probs, p)
    }
}

fn l1_residual(pi: &[f64], p: &TransitionMatrix) -> f64 {
    p.left_multiply(pi)
        .iter()
        .zip(pi)
        .map(|(a, b)| (a - b).abs())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StationarySolver {
    /// Direct elimination up to [`DIRECT_SOLVE_MAX_STATES`] states, power
    /// iteration above.
    Auto,
    /// Grassmann–Taksar–Heyman elimination. Subtraction-free, so it stays
    /// accurate on nearly decomposable chains.
    Direct,
    /// Power iteration on the lazy chain `(P + I) / 2`, stopping once
    /// successive iterates differ by less than `tolerance` in L1.
    PowerIteration {
        tolerance: f64,
        max_iterations: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    pub solver: StationarySolver,
    /// Reject reducible matrices up front with [`Error::NotIrreducible`].
    pub check_irreducible: bool,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self {
            solver: StationarySolver::Auto,
            check_irreducible: true,
        }
    }
}

/// Stationary distribution of an irreducible chain.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<StationaryDistribution> {
    stationary_distribution_with(p, &StationaryOptions::default())
}

pub fn stationary_distribution_with(
    p: &TransitionMatrix,
    options: &StationaryOptions,
) -> Result<StationaryDistribution> {
    if options.check_irreducible {
        let scc = graph::strongly_connected_components(p, 0.0);
        if scc.len() > 1 {
            return Err(Error::NotIrreducible {
                components: scc.len(),
            });
        }
    }
    let solver = match options.solver {
        StationarySolver::Auto if p.n() <= DIRECT_SOLVE_MAX_STATES => StationarySolver::Direct,
        StationarySolver::Auto => StationarySolver::PowerIteration {
            tolerance: POWER_ITERATION_TOLERANCE,
            max_iterations: POWER_ITERATION_MAX_ITERATIONS,
        },
        s => s,
    };
    let (probs, iterations) = match solver {
        StationarySolver::Direct => (gth(p)?, 0),
        StationarySolver::PowerIteration {
            tolerance,
            max_iterations,
        } => power_iteration(p, tolerance, max_iterations)?,
        StationarySolver::Auto => unreachable!(),
    };
    let residual = l1_residual(&probs, p);
    if !(residual < STATIONARY_RESIDUAL_TOLERANCE) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(StationaryDistribution {
        states: p.states().clone(),
        probs,
    })
}

/// GTH state reduction. Fails with `NotIrreducible` when a censored state
/// has no remaining exit, which only happens for reducible chains.
fn gth(p: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = p.n();
    let mut a = p.as_flat().to_vec();
    for k in (1..n).rev() {
        let s: f64 = a[k * n..k * n + k].iter().sum();
        if !(s > 0.0) {
            return Err(Error::NotIrreducible { components: 2 });
        }
        for i in 0..k {
            a[i * n + k] /= s;
        }
        for i in 0..k {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..k {
                a[i * n + j] += aik * a[k * n + j];
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| pi[i] * a[i * n + k]).sum();
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= total);
    Ok(pi)
}

fn power_iteration(
    p: &TransitionMatrix,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = p.n();
    let mut pi = vec![1.0 / n as f64; n];
    for it in 1..=max_iterations {
        let moved = p.left_multiply(&pi);
        // lazy chain: (P + I) / 2 shares π and cannot oscillate
        let mut next: Vec<f64> = moved.iter().zip(&pi).map(|(a, b)| 0.5 * (a + b)).collect();
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < tolerance {
            return Ok((pi, it));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual: l1_residual(&pi, p),
    })
}

/// `−Σ πᵢ P_ij log₂ P_ij` in bits per symbol, with `0 log 0 = 0`.
pub fn entropy_rate(p: &TransitionMatrix, pi: &StationaryDistribution) -> Result<f64> {
    if pi.states() != p.states() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: pi.states().len(),
        });
    }
    let h: f64 = p
        .rows()
        .zip(pi.probs())
        .map(|(row, &w)| w * row_entropy(row))
        .sum();
    Ok(h.max(0.0))
}

/// Shannon entropy in bits of a probability row, skipping zero entries.
pub(crate) fn row_entropy(row: &[f64]) -> f64 {
    -row
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * libm::log2(v))
        .sum::<f64>()
}

/// Where a simulated sequence starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    State(usize),
    /// Draw the first symbol from the stationary distribution.
    Stationary,
}

pub(crate) fn initial_symbol(
    p: &TransitionMatrix,
    init: InitialState,
    rng: &mut rng::SimRng,
) -> Result<usize> {
    match init {
        InitialState::State(i) if i < p.n() => Ok(i),
        InitialState::State(i) => Err(Error::InvalidInitState { index: i, n: p.n() }),
        InitialState::Stationary => {
            let pi = stationary_distribution(p)?;
            let cum = rng::cumulative(pi.probs());
            Ok(rng::sample_index(&cum, rng::uniform(rng)))
        }
    }
}

pub(crate) fn row_cdfs(p: &TransitionMatrix) -> Vec<Vec<f64>> {
    p.rows().map(rng::cumulative).collect()
}

/// Simulates `len` symbols (including the initial one) of the chain.
/// One uniform draw is consumed per transition.
pub fn simulate_markov(
    p: &TransitionMatrix,
    init: InitialState,
    len: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    if len == 0 {
        return Err(Error::InvalidParameter("sequence length must be at least 1"));
    }
    let mut rng = rng::rng_from_seed(seed);
    let first = initial_symbol(p, init, &mut rng)?;
    let cdfs = row_cdfs(p);
    let mut out = Vec::with_capacity(len);
    out.push(first);
    let mut cur = first;
    for _ in 1..len {
        cur = rng::sample_index(&cdfs[cur], rng::uniform(&mut rng));
        out.push(cur);
    }
    Ok(out)
}
