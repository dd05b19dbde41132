//! Entropy estimators for sequence corpora.
//!
//! Three empirical Shannon estimators (pooled symbol frequencies,
//! per-sequence frequencies, stationary distribution) and four plug-in
//! entropy-rate estimators (first-order or LAMP transition matrix, each
//! made irreducible by largest-component restriction or by an artificial
//! state). Also the sweep over `p_artificial = 2⁻ⁱ` used to pick a stable
//! artificial-edge weight.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::SequenceCorpus;
use crate::error::{Error, Result};
use crate::fitting::{self, EmOptions};
use crate::graph::{self, Conditioning, ConditioningMethod, ConditioningReport};
use crate::markov::{self, TransitionMatrix, ROW_SUM_TOLERANCE};

/// `2⁻¹⁵`.
pub const DEFAULT_P_ARTIFICIAL: f64 = 1.0 / 32768.0;
pub const DEFAULT_PLATEAU_REL_TOL: f64 = 1e-3;
pub const DEFAULT_PLATEAU_WINDOW: usize = 3;
pub const DEFAULT_MARKOV_MAX_EXPONENT: u32 = 25;
pub const DEFAULT_LAMP_MAX_EXPONENT: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntropyMethod {
    SequenceLevel,
    PathLevel,
    StationaryDist,
    MarkovLargestCc,
    MarkovInduced,
    LampLargestCc,
    LampInduced,
}

impl EntropyMethod {
    pub const ALL: [EntropyMethod; 7] = [
        EntropyMethod::SequenceLevel,
        EntropyMethod::PathLevel,
        EntropyMethod::StationaryDist,
        EntropyMethod::MarkovLargestCc,
        EntropyMethod::MarkovInduced,
        EntropyMethod::LampLargestCc,
        EntropyMethod::LampInduced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntropyMethod::SequenceLevel => "sequence_level",
            EntropyMethod::PathLevel => "path_level",
            EntropyMethod::StationaryDist => "stationary_distribution",
            EntropyMethod::MarkovLargestCc => "markov_largest_cc",
            EntropyMethod::MarkovInduced => "markov_induced",
            EntropyMethod::LampLargestCc => "lamp_largest_cc",
            EntropyMethod::LampInduced => "lamp_induced",
        }
    }

    fn markov(conditioning: Conditioning) -> Self {
        match conditioning {
            Conditioning::LargestCc => EntropyMethod::MarkovLargestCc,
            Conditioning::Induced(_) => EntropyMethod::MarkovInduced,
        }
    }

    fn lamp(conditioning: Conditioning) -> Self {
        match conditioning {
            Conditioning::LargestCc => EntropyMethod::LampLargestCc,
            Conditioning::Induced(_) => EntropyMethod::LampInduced,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub method: EntropyMethod,
    pub bits_per_symbol: f64,
    pub conditioning: Option<ConditioningReport>,
    /// Fitted kernel of the LAMP estimators. It does not enter the value.
    pub kernel: Option<Vec<f64>>,
    /// Size of the state space the estimate ranges over; the value is at
    /// most `log₂` of it.
    pub state_count: usize,
}

impl EntropyReport {
    fn plain(method: EntropyMethod, bits_per_symbol: f64, state_count: usize) -> Self {
        Self {
            method,
            bits_per_symbol,
            conditioning: None,
            kernel: None,
            state_count,
        }
    }
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::NotADistribution("empty"));
    }
    if dist.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::NotADistribution("entries must be finite and non-negative"));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() >= ROW_SUM_TOLERANCE {
        return Err(Error::NotADistribution("entries do not sum to 1"));
    }
    Ok(markov::row_entropy(dist).max(0.0))
}

fn frequency_entropy(counts: &[usize], total: usize) -> f64 {
    let total = total as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * libm::log2(p)
        })
        .sum::<f64>()
}

/// Shannon entropy of the symbol frequencies pooled over all sequences.
pub fn sequence_level_estimate(c: &SequenceCorpus) -> Result<EntropyReport> {
    let total = c.total_len();
    if total == 0 {
        return Err(Error::EmptyCorpus);
    }
    let h = frequency_entropy(&c.token_counts(), total).max(0.0);
    Ok(EntropyReport::plain(
        EntropyMethod::SequenceLevel,
        h,
        c.vocabulary().len(),
    ))
}

/// Mean over sequences of the entropy of each sequence's own symbol
/// frequencies, every sequence weighted equally.
pub fn path_level_estimate(c: &SequenceCorpus) -> Result<EntropyReport> {
    if c.n_sequences() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let mut counts = vec![0usize; c.vocabulary().len()];
    let mut sum = 0.0;
    for (i, s) in c.sequences().iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptySequence(i));
        }
        for &t in s {
            counts[t] += 1;
        }
        sum += frequency_entropy(&counts, s.len());
        for &t in s {
            counts[t] = 0;
        }
    }
    Ok(EntropyReport::plain(
        EntropyMethod::PathLevel,
        (sum / c.n_sequences() as f64).max(0.0),
        c.vocabulary().len(),
    ))
}

/// Shannon entropy of `π(P)` for an irreducible `P`.
pub fn stationary_distribution_estimate(p: &TransitionMatrix) -> Result<EntropyReport> {
    let pi = markov::stationary_distribution(p)?;
    Ok(EntropyReport::plain(
        EntropyMethod::StationaryDist,
        shannon_entropy(pi.probs())?,
        p.n(),
    ))
}

/// Stationary-distribution estimate from the first-order fit of a corpus.
/// Under induced irreducibility the artificial state is dropped and the
/// remaining mass renormalized.
pub fn stationary_corpus_estimate(
    c: &SequenceCorpus,
    conditioning: Conditioning,
) -> Result<EntropyReport> {
    let fit = fitting::fit_first_order(c, 0.0)?;
    let (conditioned, report) = graph::condition(&fit.matrix, conditioning)?;
    let pi = markov::stationary_distribution(&conditioned)?;
    let mut probs = pi.probs().to_vec();
    if report.method == ConditioningMethod::Induced {
        probs.pop();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|v| *v /= total);
    }
    let state_count = probs.len();
    Ok(EntropyReport {
        method: EntropyMethod::StationaryDist,
        bits_per_symbol: shannon_entropy(&probs)?,
        conditioning: Some(report),
        kernel: None,
        state_count,
    })
}

/// Conditions `p` and evaluates the entropy rate of the result.
pub fn plugin_entropy_rate(
    p: &TransitionMatrix,
    conditioning: Conditioning,
) -> Result<(f64, ConditioningReport)> {
    let (conditioned, report) = graph::condition(p, conditioning)?;
    let pi = markov::stationary_distribution(&conditioned)?;
    Ok((markov::entropy_rate(&conditioned, &pi)?, report))
}

/// Entropy rate of the first-order (α = 0) fit after conditioning.
pub fn markov_plugin_estimate(
    c: &SequenceCorpus,
    conditioning: Conditioning,
) -> Result<EntropyReport> {
    let fit = fitting::fit_first_order(c, 0.0)?;
    let (h, report) = plugin_entropy_rate(&fit.matrix, conditioning)?;
    Ok(EntropyReport {
        method: EntropyMethod::markov(conditioning),
        bits_per_symbol: h,
        state_count: report.n_after,
        conditioning: Some(report),
        kernel: None,
    })
}

/// Entropy rate of the EM-fitted LAMP's matrix after conditioning, with
/// default EM settings.
pub fn lamp_plugin_estimate(
    c: &SequenceCorpus,
    order: usize,
    conditioning: Conditioning,
) -> Result<EntropyReport> {
    lamp_plugin_estimate_with(c, &EmOptions::new(order), conditioning)
}

pub fn lamp_plugin_estimate_with(
    c: &SequenceCorpus,
    options: &EmOptions,
    conditioning: Conditioning,
) -> Result<EntropyReport> {
    let fit = fit_lamp_on_corpus(c, options)?;
    let (h, report) = plugin_entropy_rate(fit.model.matrix(), conditioning)?;
    Ok(EntropyReport {
        method: EntropyMethod::lamp(conditioning),
        bits_per_symbol: h,
        state_count: report.n_after,
        conditioning: Some(report),
        kernel: Some(fit.model.kernel().weights().to_vec()),
    })
}

/// EM fit on the sequences that contain at least one transition.
pub fn fit_lamp_on_corpus(c: &SequenceCorpus, options: &EmOptions) -> Result<fitting::FitReport> {
    let usable = c.filter_min_len(2).map_err(|_| Error::TooShort { len: 1, needed: 2 })?;
    if usable.n_sequences() < c.n_sequences() {
        log::info!(
            "fitting on {} of {} sequences (the rest have no transitions)",
            usable.n_sequences(),
            c.n_sequences()
        );
    }
    fitting::fit_lamp_em(&usable, options)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Markov,
    Lamp(EmOptions),
}

impl ModelKind {
    /// `1..=25` for first-order models, `1..=50` for LAMPs.
    pub fn default_exponents(&self) -> Vec<u32> {
        match self {
            ModelKind::Markov => (1..=DEFAULT_MARKOV_MAX_EXPONENT).collect(),
            ModelKind::Lamp(_) => (1..=DEFAULT_LAMP_MAX_EXPONENT).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plateau {
    At(u32),
    NoPlateau,
}

impl Plateau {
    pub fn exponent(self) -> Option<u32> {
        match self {
            Plateau::At(i) => Some(i),
            Plateau::NoPlateau => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub exponents: Vec<u32>,
    /// Entropy rate in bits at `p_artificial = 2⁻ⁱ`.
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    /// Plateau under the default window and tolerance.
    pub recommended: Plateau,
}

impl SweepResult {
    pub fn p_values(&self) -> Vec<f64> {
        self.exponents.iter().map(|&i| p_for_exponent(i)).collect()
    }
}

pub fn p_for_exponent(i: u32) -> f64 {
    libm::exp2(-(i as f64))
}

/// Induced-irreducibility entropy rate at each `p = 2⁻ⁱ`. The model is
/// fitted once; only the conditioning varies across the sweep.
pub fn sweep_p_artificial(
    c: &SequenceCorpus,
    kind: &ModelKind,
    exponents: &[u32],
) -> Result<SweepResult> {
    if exponents.is_empty() {
        return Err(Error::InvalidParameter("exponent range is empty"));
    }
    let matrix = match kind {
        ModelKind::Markov => fitting::fit_first_order(c, 0.0)?.matrix,
        ModelKind::Lamp(options) => fit_lamp_on_corpus(c, options)?.model.matrix().clone(),
    };
    sweep_matrix(&matrix, exponents)
}

/// Sweep over an already fitted matrix.
pub fn sweep_matrix(matrix: &TransitionMatrix, exponents: &[u32]) -> Result<SweepResult> {
    if exponents.is_empty() {
        return Err(Error::InvalidParameter("exponent range is empty"));
    }
    let raw = exponents
        .iter()
        .map(|&i| {
            plugin_entropy_rate(matrix, Conditioning::Induced(p_for_exponent(i))).map(|(h, _)| h)
        })
        .collect::<Result<Vec<_>>>()?;
    let normalized = min_max_normalize(&raw);
    let recommended = plateau_in(
        exponents,
        &raw,
        DEFAULT_PLATEAU_REL_TOL,
        DEFAULT_PLATEAU_WINDOW,
    );
    Ok(SweepResult {
        exponents: exponents.to_vec(),
        raw,
        normalized,
        recommended,
    })
}

/// Rescales to `[0, 1]`. A constant curve maps to all zeros.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if !(span > 0.0) {
        return vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|&v| {
            if v == max {
                1.0
            } else {
                (v - min) / span
            }
        })
        .collect()
}

/// The largest swept exponent whose trailing window of `window` raw values
/// is flat: the spread of the window is below `rel_tol` times the smallest
/// magnitude in it. Windows shorter than 2 are treated as 2.
pub fn detect_plateau(s: &SweepResult, rel_tol: f64, window: usize) -> Plateau {
    plateau_in(&s.exponents, &s.raw, rel_tol, window)
}

/// The first exponent at which the trailing window becomes flat.
pub fn plateau_onset(s: &SweepResult, rel_tol: f64, window: usize) -> Plateau {
    let window = window.max(2);
    (window - 1..s.raw.len())
        .find(|&end| window_is_flat(&s.raw[end + 1 - window..=end], rel_tol))
        .map_or(Plateau::NoPlateau, |end| Plateau::At(s.exponents[end]))
}

fn plateau_in(exponents: &[u32], raw: &[f64], rel_tol: f64, window: usize) -> Plateau {
    let window = window.max(2);
    (window - 1..raw.len())
        .rev()
        .find(|&end| window_is_flat(&raw[end + 1 - window..=end], rel_tol))
        .map_or(Plateau::NoPlateau, |end| Plateau::At(exponents[end]))
}

fn window_is_flat(values: &[f64], rel_tol: f64) -> bool {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let spread = max - min;
    spread == 0.0 || spread < rel_tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{simulate_markov, InitialState};
    use crate::state::StateSpace;
    use approx::assert_abs_diff_eq;

    fn corpus(seqs: &[&[&str]]) -> SequenceCorpus {
        SequenceCorpus::from_tokens(seqs.iter().map(|s| s.iter())).unwrap()
    }

    fn m(rows: Vec<Vec<f64>>) -> TransitionMatrix {
        let states = StateSpace::numbered(rows.len()).unwrap();
        TransitionMatrix::new(states, rows).unwrap()
    }

    /// `−Σ p log₂ p` written out for the oracle values below.
    fn h(ps: &[f64]) -> f64 {
        -ps.iter().filter(|&&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        let v = shannon_entropy(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_abs_diff_eq!(v, h(&[2.0 / 3.0, 1.0 / 3.0]), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.918296, epsilon = 1e-6);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn sequence_level_examples() {
        let r = sequence_level_estimate(&corpus(&[&["a", "b"], &["a"]])).unwrap();
        assert_abs_diff_eq!(r.bits_per_symbol, h(&[2.0 / 3.0, 1.0 / 3.0]), epsilon = 1e-15);
        let r = sequence_level_estimate(&corpus(&[&["a", "a"], &["a"]])).unwrap();
        assert_eq!(r.bits_per_symbol, 0.0);
        let r = sequence_level_estimate(&corpus(&[&["a", "b", "c", "d"]])).unwrap();
        assert_abs_diff_eq!(r.bits_per_symbol, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn path_level_examples() {
        let r = path_level_estimate(&corpus(&[&["a", "b"], &["a"]])).unwrap();
        assert_abs_diff_eq!(r.bits_per_symbol, 0.5, epsilon = 1e-15);
        let r = path_level_estimate(&corpus(&[&["a", "a"], &["b"]])).unwrap();
        assert_eq!(r.bits_per_symbol, 0.0);
        let one = corpus(&[&["a", "b", "b", "c", "a", "b"]]);
        assert_abs_diff_eq!(
            path_level_estimate(&one).unwrap().bits_per_symbol,
            sequence_level_estimate(&one).unwrap().bits_per_symbol,
            epsilon = 1e-15
        );
        let v = StateSpace::new(["a"]).unwrap();
        let c = SequenceCorpus::new(v, vec![vec![0], vec![]]).unwrap();
        assert_eq!(path_level_estimate(&c), Err(Error::EmptySequence(1)));
    }

    #[test]
    fn stationary_examples() {
        let r = stationary_distribution_estimate(&m(vec![vec![0.9, 0.1], vec![0.1, 0.9]])).unwrap();
        assert_abs_diff_eq!(r.bits_per_symbol, 1.0, epsilon = 1e-12);
        let r = stationary_distribution_estimate(&m(vec![vec![0.5, 0.5], vec![1.0, 0.0]])).unwrap();
        assert_abs_diff_eq!(r.bits_per_symbol, 0.918296, epsilon = 1e-6);
        let r = stationary_distribution_estimate(&m(vec![vec![1.0]])).unwrap();
        assert_eq!(r.bits_per_symbol, 0.0);
        assert!(matches!(
            stationary_distribution_estimate(&m(vec![vec![1.0, 0.0], vec![0.0, 1.0]])),
            Err(Error::NotIrreducible { .. })
        ));
    }

    #[test]
    fn markov_plugin_deterministic_cycle() {
        let tokens: Vec<&str> = (0..100).map(|i| if i % 2 == 0 { "a" } else { "b" }).collect();
        let c = SequenceCorpus::from_tokens([tokens]).unwrap();
        let r = markov_plugin_estimate(&c, Conditioning::LargestCc).unwrap();
        assert_eq!(r.bits_per_symbol, 0.0);
        assert_eq!(r.method, EntropyMethod::MarkovLargestCc);
        assert_eq!(r.conditioning.unwrap().excluded, 0);
    }

    #[test]
    fn markov_plugin_recovers_simulated_rate() {
        let p = m(vec![
            vec![0.1, 0.6, 0.3],
            vec![0.4, 0.2, 0.4],
            vec![0.5, 0.3, 0.2],
        ]);
        let truth = markov::entropy_rate(&p, &markov::stationary_distribution(&p).unwrap()).unwrap();
        let seq = simulate_markov(&p, InitialState::Stationary, 1_000_000, 3).unwrap();
        let c = SequenceCorpus::new(p.states().clone(), vec![seq]).unwrap();
        let cc = markov_plugin_estimate(&c, Conditioning::LargestCc).unwrap();
        let ind = markov_plugin_estimate(&c, Conditioning::Induced(DEFAULT_P_ARTIFICIAL)).unwrap();
        assert!((cc.bits_per_symbol - truth).abs() < 0.01);
        assert!((ind.bits_per_symbol - truth).abs() < 0.01);
        assert!((cc.bits_per_symbol - ind.bits_per_symbol).abs() < 1e-3);
    }

    #[test]
    fn lamp_plugin_order_one_equals_markov() {
        let c = corpus(&[
            &["a", "b", "c", "a", "c", "a", "b", "b", "c", "a"],
            &["c", "a", "b"],
            &["b"],
        ]);
        for cond in [Conditioning::LargestCc, Conditioning::Induced(DEFAULT_P_ARTIFICIAL)] {
            let markov = markov_plugin_estimate(&c, cond).unwrap();
            let lamp = lamp_plugin_estimate(&c, 1, cond).unwrap();
            assert_eq!(markov.bits_per_symbol.to_bits(), lamp.bits_per_symbol.to_bits());
            assert_eq!(lamp.kernel.as_deref(), Some(&[1.0][..]));
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(min_max_normalize(&[3.0, 1.0, 2.0]), vec![1.0, 0.0, 0.5]);
        assert_eq!(min_max_normalize(&[2.0, 2.0]), vec![0.0, 0.0]);
    }

    fn sweep_of(raw: Vec<f64>) -> SweepResult {
        let exponents: Vec<u32> = (1..=raw.len() as u32).collect();
        SweepResult {
            recommended: plateau_in(&exponents, &raw, DEFAULT_PLATEAU_REL_TOL, 3),
            normalized: min_max_normalize(&raw),
            exponents,
            raw,
        }
    }

    #[test]
    fn plateau_examples() {
        let flat_tail: Vec<f64> = (1..=25).map(|i| if i < 12 { 5.0 - i as f64 * 0.1 } else { 3.7 }).collect();
        let s = sweep_of(flat_tail);
        assert_eq!(detect_plateau(&s, 1e-3, 3), Plateau::At(25));
        assert_eq!(plateau_onset(&s, 1e-3, 3), Plateau::At(14));

        let decreasing: Vec<f64> = (1..=25).map(|i| 10.0 - i as f64 * 0.1).collect();
        assert_eq!(detect_plateau(&sweep_of(decreasing), 1e-3, 3), Plateau::NoPlateau);

        let zeros = sweep_of(vec![0.0; 5]);
        assert_eq!(detect_plateau(&zeros, 1e-3, 3), Plateau::At(5));
    }

    #[test]
    fn plateau_of_geometric_approach() {
        let raw: Vec<f64> = (1..=25).map(|i| 2f64.powi(-i) + 3.0).collect();
        let s = sweep_of(raw.clone());
        assert_eq!(detect_plateau(&s, 1e-3, 3), Plateau::At(25));
        // brute-force the window inequality: spread 3·2⁻ⁱ against 1e-3·(3 + 2⁻ⁱ)
        let onset = (3..=25)
            .find(|&i| 3.0 * 2f64.powi(-i) < 1e-3 * (3.0 + 2f64.powi(-i)))
            .unwrap();
        assert_eq!(onset, 10);
        assert_eq!(plateau_onset(&s, 1e-3, 3), Plateau::At(onset as u32));
    }

    #[test]
    fn sweep_on_irreducible_corpus_is_flat() {
        let p = m(vec![
            vec![0.1, 0.6, 0.3],
            vec![0.4, 0.2, 0.4],
            vec![0.5, 0.3, 0.2],
        ]);
        let seq = simulate_markov(&p, InitialState::Stationary, 50_000, 8).unwrap();
        let c = SequenceCorpus::new(p.states().clone(), vec![seq]).unwrap();
        let exps: Vec<u32> = ModelKind::Markov.default_exponents();
        let s = sweep_p_artificial(&c, &ModelKind::Markov, &exps).unwrap();
        assert_eq!(s.recommended, Plateau::At(25));
        // the perturbation is p·log₂(1/p) + O(p)
        let limit = s.raw[24];
        for (&i, &v) in s.exponents.iter().zip(&s.raw).skip(9) {
            let bound = (i as f64 + 3.0) * 2f64.powi(-(i as i32));
            assert!((v - limit).abs() < bound, "i = {i}: {v} vs {limit}");
        }
        let tail = &s.raw[14..];
        let spread = tail.iter().cloned().fold(f64::MIN, f64::max)
            - tail.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3, "spread {spread}");
        assert_eq!(s.normalized.iter().cloned().fold(f64::MAX, f64::min), 0.0);
        assert_eq!(s.normalized.iter().cloned().fold(f64::MIN, f64::max), 1.0);
    }

    #[test]
    fn sweep_rejects_empty_range() {
        let c = corpus(&[&["a", "b", "a"]]);
        assert!(sweep_p_artificial(&c, &ModelKind::Markov, &[]).is_err());
    }
}
