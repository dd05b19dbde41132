//! The LAMP transition law.
//!
//! With history `x_0 .. x_{t-1}` the next symbol has distribution
//! `Σ_q w_q · P[x_{max(0, t−q)}, ·]`: lags reaching before the start of the
//! history are clamped to the first symbol.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::markov::{self, InitialState, TransitionMatrix, ROW_SUM_TOLERANCE};
use crate::rng;

/// Burn-in used by callers of [`LampModel::log_loss`] that have no reason
/// to pick another value.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Distribution `w_1 .. w_k` over backward lags.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    weights: Vec<f64>,
}

impl Kernel {
    /// Validates and renormalizes (within `1e-9`) a lag distribution.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidKernel("order must be at least 1"));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidKernel("weights must be finite and non-negative"));
        }
        let sum: f64 = weights.iter().sum();
        if !((sum - 1.0).abs() < ROW_SUM_TOLERANCE) {
            return Err(Error::InvalidKernel("weights must sum to 1"));
        }
        if sum != 1.0 {
            weights.iter_mut().for_each(|w| *w /= sum);
        }
        Ok(Self { weights })
    }

    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        debug_assert!(!weights.is_empty());
        Self { weights }
    }

    /// All mass on `lag` (1-based), padded with zeros up to `order`.
    pub fn point_mass(lag: usize, order: usize) -> Result<Self> {
        if lag == 0 || lag > order {
            return Err(Error::InvalidKernel("lag must lie in 1..=order"));
        }
        let mut weights = vec![0.0; order];
        weights[lag - 1] = 1.0;
        Ok(Self { weights })
    }

    pub fn uniform(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidKernel("order must be at least 1"));
        }
        Ok(Self {
            weights: vec![1.0 / order as f64; order],
        })
    }

    /// Order `k`, the largest representable lag.
    pub fn order(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w_q` for a 1-based lag; zero outside `1..=k`.
    pub fn weight(&self, lag: usize) -> f64 {
        if lag == 0 {
            return 0.0;
        }
        self.weights.get(lag - 1).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LampModel {
    matrix: TransitionMatrix,
    kernel: Kernel,
}

impl LampModel {
    pub fn new(matrix: TransitionMatrix, kernel: Kernel) -> Self {
        Self { matrix, kernel }
    }

    /// The first-order chain `P` seen as a LAMP with `w = δ₁`.
    pub fn first_order(matrix: TransitionMatrix) -> Self {
        Self {
            matrix,
            kernel: Kernel { weights: vec![1.0] },
        }
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn order(&self) -> usize {
        self.kernel.order()
    }

    fn check_history(&self, history: &[usize]) -> Result<()> {
        if history.is_empty() {
            return Err(Error::EmptyHistory);
        }
        history
            .iter()
            .try_for_each(|&s| self.matrix.states().check_index(s))
    }

    /// Next-symbol distribution after `history`.
    pub fn transition_distribution(&self, history: &[usize]) -> Result<Vec<f64>> {
        self.check_history(history)?;
        let t = history.len();
        let mut out = vec![0.0; self.n()];
        for (q, &w) in (1..).zip(self.kernel.weights()) {
            if w == 0.0 {
                continue;
            }
            let row = self.matrix.row(history[t.saturating_sub(q)]);
            for (o, &p) in out.iter_mut().zip(row) {
                *o += w * p;
            }
        }
        Ok(out)
    }

    /// Probability that `next` follows `history`.
    pub fn transition_probability(&self, history: &[usize], next: usize) -> Result<f64> {
        self.check_history(history)?;
        self.matrix.states().check_index(next)?;
        Ok(self.predictive(history, history.len(), next))
    }

    /// Probability of `seq[t]` given `seq[..t]`, without bounds checks.
    #[inline]
    pub(crate) fn predictive(&self, seq: &[usize], t: usize, next: usize) -> f64 {
        let mut p = 0.0;
        for (q, &w) in (1..).zip(self.kernel.weights()) {
            p += w * self.matrix.get(seq[t.saturating_sub(q)], next);
        }
        p
    }

    /// Two-stage simulation: draw a lag `q ~ w`, then the next symbol from
    /// the row of the state `q` steps back (clamped to the first symbol).
    /// Each step consumes exactly two uniform draws.
    pub fn simulate(&self, init: InitialState, len: usize, seed: u64) -> Result<Vec<usize>> {
        if len == 0 {
            return Err(Error::InvalidParameter("sequence length must be at least 1"));
        }
        let mut rng = rng::rng_from_seed(seed);
        let first = markov::initial_symbol(&self.matrix, init, &mut rng)?;
        let lag_cdf = rng::cumulative(self.kernel.weights());
        let row_cdfs = markov::row_cdfs(&self.matrix);
        let mut out = Vec::with_capacity(len);
        out.push(first);
        for t in 1..len {
            let q = rng::sample_index(&lag_cdf, rng::uniform(&mut rng)) + 1;
            let source = out[t.saturating_sub(q)];
            let next = rng::sample_index(&row_cdfs[source], rng::uniform(&mut rng));
            out.push(next);
        }
        Ok(out)
    }

    /// `−Σ πᵢ P_ij log₂ P_ij` of the underlying chain. The kernel does not
    /// enter the value.
    pub fn entropy_rate(&self) -> Result<f64> {
        let pi = markov::stationary_distribution(&self.matrix)?;
        markov::entropy_rate(&self.matrix, &pi)
    }

    /// Mean negative log₂ predictive probability over positions
    /// `burn_in + 1 .. len`.
    pub fn log_loss(&self, seq: &[usize], burn_in: usize) -> Result<f64> {
        if seq.len() <= burn_in + 1 {
            return Err(Error::TooShort {
                len: seq.len(),
                needed: burn_in + 2,
            });
        }
        seq.iter()
            .try_for_each(|&s| self.matrix.states().check_index(s))?;
        let mut total = 0.0;
        for t in burn_in + 1..seq.len() {
            let p = self.predictive(seq, t, seq[t]);
            if !(p > 0.0) {
                return Err(Error::ZeroProbabilityEvent { position: t });
            }
            total -= libm::log2(p);
        }
        Ok(total / (seq.len() - burn_in - 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: Vec<Vec<f64>>) -> TransitionMatrix {
        let labels: Vec<String> = (0..rows.len())
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        TransitionMatrix::from_labels(&labels, rows).unwrap()
    }

    #[test]
    fn kernel_validation() {
        assert!(Kernel::new(vec![]).is_err());
        assert!(Kernel::new(vec![0.5, 0.6]).is_err());
        assert!(Kernel::new(vec![1.5, -0.5]).is_err());
        assert_eq!(Kernel::point_mass(2, 3).unwrap().weights(), &[0.0, 1.0, 0.0]);
        assert!(Kernel::point_mass(4, 3).is_err());
        let k = Kernel::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(k.order(), 3);
        assert_eq!(k.weight(3), 0.5);
        assert_eq!(k.weight(4), 0.0);
    }

    #[test]
    fn first_order_reduction_is_exact() {
        let p = m(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let model = LampModel::first_order(p.clone());
        assert_eq!(model.transition_distribution(&[0, 0, 1]).unwrap(), p.row(1));
        assert_eq!(model.transition_distribution(&[1, 0]).unwrap(), p.row(0));
    }

    #[test]
    fn mixture_by_hand() {
        let p = m(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let model = LampModel::new(p, Kernel::new(vec![0.5, 0.5]).unwrap());
        let d = model.transition_distribution(&[0, 1]).unwrap();
        assert_abs_diff_eq!(d[0], 0.55, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1], 0.45, epsilon = 1e-15);
    }

    #[test]
    fn short_history_clamps_to_first_symbol() {
        let p = m(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let model = LampModel::new(p.clone(), Kernel::new(vec![0.2, 0.3, 0.5]).unwrap());
        let d = model.transition_distribution(&[0]).unwrap();
        for (a, b) in d.iter().zip(p.row(0)) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn transition_errors() {
        let model = LampModel::first_order(m(vec![vec![1.0]]));
        assert_eq!(model.transition_distribution(&[]), Err(Error::EmptyHistory));
        assert!(matches!(
            model.transition_distribution(&[3]),
            Err(Error::StateOutOfRange { index: 3, n: 1 })
        ));
    }

    #[test]
    fn simulate_lag_two_flip() {
        let p = m(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let model = LampModel::new(p, Kernel::new(vec![0.0, 1.0]).unwrap());
        let s = model.simulate(InitialState::State(0), 6, 3).unwrap();
        assert_eq!(s, vec![0, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn entropy_rate_ignores_kernel() {
        let p = m(vec![vec![0.9, 0.1], vec![0.1, 0.9]]);
        let a = LampModel::new(p.clone(), Kernel::new(vec![0.5, 0.5]).unwrap());
        let b = LampModel::new(p.clone(), Kernel::uniform(10).unwrap());
        let c = LampModel::first_order(p);
        let h = a.entropy_rate().unwrap();
        assert_eq!(h.to_bits(), b.entropy_rate().unwrap().to_bits());
        assert_eq!(h.to_bits(), c.entropy_rate().unwrap().to_bits());
        assert_abs_diff_eq!(h, 0.468996, epsilon = 1e-6);
    }

    #[test]
    fn log_loss_trivial_cases() {
        let perm = m(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ]);
        let model = LampModel::first_order(perm);
        let s = model.simulate(InitialState::State(0), 500, 1).unwrap();
        assert_eq!(model.log_loss(&s, 10).unwrap(), 0.0);

        let uniform = m(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        let model = LampModel::new(uniform, Kernel::new(vec![0.3, 0.3, 0.4]).unwrap());
        let s = [0, 1, 1, 0, 1, 0, 0, 0, 1];
        assert_eq!(model.log_loss(&s, 0).unwrap(), 1.0);
    }

    #[test]
    fn log_loss_errors() {
        let model = LampModel::first_order(m(vec![vec![0.0, 1.0], vec![1.0, 0.0]]));
        assert!(matches!(model.log_loss(&[0, 1], 1), Err(Error::TooShort { .. })));
        assert_eq!(
            model.log_loss(&[0, 1, 1], 0),
            Err(Error::ZeroProbabilityEvent { position: 2 })
        );
    }

    /// Exact conditional entropy of the LAMP given a history of length ≥ k,
    /// by enumeration of all histories of length k weighted by their
    /// long-run frequency, is what log-loss converges to. It is bounded
    /// below by the first-order entropy rate and equals it only when the
    /// mixed rows coincide.
    #[test]
    fn log_loss_with_mixing_kernel_exceeds_first_order_rate() {
        let p = m(vec![vec![0.9, 0.1], vec![0.1, 0.9]]);
        let model = LampModel::new(p, Kernel::new(vec![0.5, 0.5]).unwrap());
        let s = model.simulate(InitialState::Stationary, 200_000, 11).unwrap();
        let loss = model.log_loss(&s, DEFAULT_BURN_IN).unwrap();
        let rate = model.entropy_rate().unwrap();
        assert!(loss > rate + 0.05, "loss {loss} rate {rate}");
    }
}
