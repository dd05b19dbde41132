//! Estimating transition matrices and LAMPs from a corpus.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::SequenceCorpus;
use crate::error::{Error, Result};
use crate::lamp::{Kernel, LampModel};
use crate::markov::TransitionMatrix;
use crate::rng;
use crate::state::StateSpace;

pub const DEFAULT_MAX_ITERATIONS: usize = 500;
/// Stop once an EM step improves the total log₂-likelihood by less than this.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Pseudo-count of the first-order fit used to initialise EM.
pub const DEFAULT_INIT_SMOOTHING: f64 = 0.1;

/// Observed `i -> j` transition counts. Pairs never straddle sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    states: StateSpace,
    counts: Vec<u64>,
}

impl TransitionCounts {
    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.counts[from * self.states.len() + to]
    }

    pub fn row(&self, from: usize) -> &[u64] {
        let n = self.states.len();
        &self.counts[from * n..(from + 1) * n]
    }

    pub fn row_total(&self, from: usize) -> u64 {
        self.row(from).iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn count_transitions(c: &SequenceCorpus) -> TransitionCounts {
    let n = c.vocabulary().len();
    let mut counts = vec![0u64; n * n];
    for s in c.sequences() {
        for w in s.windows(2) {
            counts[w[0] * n + w[1]] += 1;
        }
    }
    TransitionCounts {
        states: c.vocabulary().clone(),
        counts,
    }
}

/// Add-α estimate of a first-order chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderFit {
    pub matrix: TransitionMatrix,
    /// States with no observed outgoing transition (only possible with
    /// `α = 0`); their rows were set to uniform.
    pub unobserved_rows: Vec<usize>,
}

/// `P_ij = (count_ij + α) / (rowsum_i + α·n)`.
pub fn fit_first_order(c: &SequenceCorpus, smoothing: f64) -> Result<FirstOrderFit> {
    if !(smoothing >= 0.0) || !smoothing.is_finite() {
        return Err(Error::InvalidParameter("smoothing must be finite and non-negative"));
    }
    if c.n_sequences() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let counts = count_transitions(c);
    let n = counts.states.len();
    let mut probs = Vec::with_capacity(n * n);
    let mut unobserved_rows = Vec::new();
    for i in 0..n {
        let row = counts.row(i);
        let denom = row.iter().sum::<u64>() as f64 + smoothing * n as f64;
        if denom > 0.0 {
            probs.extend(row.iter().map(|&k| (k as f64 + smoothing) / denom));
        } else {
            unobserved_rows.push(i);
            probs.extend(core::iter::repeat_n(1.0 / n as f64, n));
        }
    }
    if !unobserved_rows.is_empty() {
        log::warn!(
            "{} states have no outgoing transitions; using uniform rows",
            unobserved_rows.len()
        );
    }
    Ok(FirstOrderFit {
        matrix: TransitionMatrix::from_flat_unchecked(counts.states, probs),
        unobserved_rows,
    })
}

/// Starting point of the EM iterations.
#[derive(Debug, Clone, PartialEq)]
pub enum EmInit {
    /// Uniform kernel and the first-order fit with α = 0.1.
    Default,
    Given { kernel: Kernel, matrix: TransitionMatrix },
}

impl EmInit {
    /// Strictly positive random rows and kernel drawn from `seed`; every
    /// entry starts in `[0.5, 1.5)` before normalization.
    pub fn random(states: &StateSpace, order: usize, seed: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidKernel("order must be at least 1"));
        }
        let mut rng = rng::rng_from_seed(seed);
        let mut draw = |len: usize| {
            let v: Vec<f64> = (0..len).map(|_| 0.5 + rng::uniform(&mut rng)).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect::<Vec<f64>>()
        };
        let kernel = Kernel::from_normalized(draw(order));
        let n = states.len();
        let probs = (0..n).flat_map(|_| draw(n)).collect();
        Ok(EmInit::Given {
            kernel,
            matrix: TransitionMatrix::from_flat_unchecked(states.clone(), probs),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmOptions {
    pub order: usize,
    pub init: EmInit,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl EmOptions {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            init: EmInit::Default,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: LampModel,
    /// Total log₂-likelihood before each M-step, plus that of the final
    /// model as the last entry.
    pub log_likelihood_trace: Vec<f64>,
    /// Number of M-steps performed.
    pub iterations: usize,
    pub converged: bool,
}

/// Maximum-likelihood LAMP fit by expectation-maximization over the
/// latent lag of every transition.
///
/// E-step: `γ_{t,q} ∝ w_q P[x_{max(0,t−q)}, x_t]`. M-step: `w_q ∝ Σ_t γ_{t,q}`
/// and `P_ij ∝ Σ_{t,q} γ_{t,q} 1[x_{max(0,t−q)} = i, x_t = j]`. Rows with no
/// expected mass become uniform.
pub fn fit_lamp_em(c: &SequenceCorpus, options: &EmOptions) -> Result<FitReport> {
    let k = options.order;
    if k == 0 {
        return Err(Error::InvalidKernel("order must be at least 1"));
    }
    if !(options.tolerance >= 0.0) {
        return Err(Error::InvalidParameter("tolerance must be non-negative"));
    }
    if let Some(s) = c.sequences().iter().find(|s| s.len() < 2) {
        return Err(Error::TooShort {
            len: s.len(),
            needed: 2,
        });
    }
    let mut model = match &options.init {
        EmInit::Default => LampModel::new(
            fit_first_order(c, DEFAULT_INIT_SMOOTHING)?.matrix,
            Kernel::uniform(k)?,
        ),
        EmInit::Given { kernel, matrix } => {
            if kernel.order() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: kernel.order(),
                });
            }
            if matrix.states() != c.vocabulary() {
                return Err(Error::DimensionMismatch {
                    expected: c.vocabulary().len(),
                    found: matrix.n(),
                });
            }
            LampModel::new(matrix.clone(), kernel.clone())
        }
    };

    let n = model.n();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut terms = vec![0.0; k];
    let mut w_acc = vec![0.0; k];
    let mut p_acc = vec![0.0; n * n];
    loop {
        w_acc.iter_mut().for_each(|v| *v = 0.0);
        p_acc.iter_mut().for_each(|v| *v = 0.0);
        let mut ll = 0.0;
        for (si, seq) in c.sequences().iter().enumerate() {
            for t in 1..seq.len() {
                let target = seq[t];
                let mut total = 0.0;
                for q in 0..k {
                    let source = seq[t.saturating_sub(q + 1)];
                    terms[q] = model.kernel().weights()[q] * model.matrix().get(source, target);
                    total += terms[q];
                }
                if !(total > 0.0) {
                    return Err(Error::DegenerateInit {
                        sequence: si,
                        position: t,
                    });
                }
                ll += libm::log2(total);
                for q in 0..k {
                    if terms[q] == 0.0 {
                        continue;
                    }
                    let g = terms[q] / total;
                    w_acc[q] += g;
                    p_acc[seq[t.saturating_sub(q + 1)] * n + target] += g;
                }
            }
        }
        let delta = trace.last().map(|prev| ll - prev);
        log::debug!(
            "em iter {iterations}: log-likelihood {ll:.9} delta {}",
            delta.unwrap_or(f64::NAN)
        );
        trace.push(ll);
        if let Some(d) = delta {
            if d < options.tolerance {
                converged = true;
                break;
            }
        }
        if iterations == options.max_iterations {
            break;
        }

        let w_sum: f64 = w_acc.iter().sum();
        let weights = w_acc.iter().map(|v| v / w_sum).collect();
        let mut probs = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = &p_acc[i * n..(i + 1) * n];
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                probs.extend(row.iter().map(|v| v / sum));
            } else {
                probs.extend(core::iter::repeat_n(1.0 / n as f64, n));
            }
        }
        model = LampModel::new(
            TransitionMatrix::from_flat_unchecked(c.vocabulary().clone(), probs),
            Kernel::from_normalized(weights),
        );
        iterations += 1;
    }
    Ok(FitReport {
        model,
        log_likelihood_trace: trace,
        iterations,
        converged,
    })
}

/// Total log₂-likelihood of the corpus; the first symbol of each sequence
/// is not scored.
pub fn lamp_log_likelihood(model: &LampModel, c: &SequenceCorpus) -> Result<f64> {
    if c.vocabulary() != model.matrix().states() {
        // vocabularies may differ in order or extent; score by label
        let remap: Vec<usize> = c
            .vocabulary()
            .labels()
            .iter()
            .map(|l| {
                model
                    .matrix()
                    .states()
                    .index_of(l)
                    .ok_or_else(|| Error::UnknownToken(l.clone()))
            })
            .collect::<Result<_>>()?;
        let sequences = c
            .sequences()
            .iter()
            .map(|s| s.iter().map(|&t| remap[t]).collect())
            .collect();
        let c = SequenceCorpus::new(model.matrix().states().clone(), sequences)?;
        return lamp_log_likelihood(model, &c);
    }
    let mut total = 0.0;
    for seq in c.sequences() {
        for t in 1..seq.len() {
            let p = model.predictive(seq, t, seq[t]);
            if !(p > 0.0) {
                return Err(Error::ZeroProbabilityEvent { position: t });
            }
            total += libm::log2(p);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn corpus(seqs: &[&[&str]]) -> SequenceCorpus {
        SequenceCorpus::from_tokens(seqs.iter().map(|s| s.iter())).unwrap()
    }

    #[test]
    fn count_examples() {
        let c = count_transitions(&corpus(&[&["a", "b", "a"]]));
        assert_eq!((c.get(0, 1), c.get(1, 0), c.total()), (1, 1, 2));

        let c = count_transitions(&corpus(&[&["a", "b"], &["b", "a"]]));
        assert_eq!((c.get(0, 1), c.get(1, 0), c.get(1, 1)), (1, 1, 0));

        let c = count_transitions(&corpus(&[&["a"]]));
        assert_eq!(c.total(), 0);
    }

    #[test]
    fn first_order_examples() {
        let f = fit_first_order(&corpus(&[&["a", "b", "a"]]), 0.0).unwrap();
        assert_eq!(f.matrix.to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);

        let c = corpus(&[&["a", "b", "a", "b", "a", "c"], &["a", "b"]]);
        let f = fit_first_order(&c, 0.0).unwrap();
        assert_eq!(f.matrix.row(0), &[0.0, 0.75, 0.25]);
        // c is never followed by anything
        assert_eq!(f.unobserved_rows, vec![2]);
        assert_eq!(f.matrix.row(2), &[1.0 / 3.0; 3]);

        let f = fit_first_order(&c, 1e12).unwrap();
        for row in f.matrix.rows() {
            for &v in row {
                assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-9);
            }
        }
        assert!(fit_first_order(&c, -1.0).is_err());
    }

    #[test]
    fn em_order_one_matches_counts_exactly() {
        let c = corpus(&[&["a", "b", "c", "a", "c", "a", "b", "b"], &["c", "a", "b"]]);
        let report = fit_lamp_em(&c, &EmOptions::new(1)).unwrap();
        let counts = fit_first_order(&c, 0.0).unwrap().matrix;
        assert_eq!(report.model.matrix(), &counts);
        assert_eq!(report.model.kernel().weights(), &[1.0]);
        assert!(report.converged);
    }

    #[test]
    fn em_trace_is_monotone() {
        let c = corpus(&[
            &["a", "b", "c", "a", "c", "a", "b", "b", "c", "c", "a"],
            &["c", "a", "b", "a", "c", "b", "a"],
        ]);
        let report = fit_lamp_em(&c, &EmOptions::new(3)).unwrap();
        for w in report.log_likelihood_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "{} -> {}", w[0], w[1]);
        }
        let ll = lamp_log_likelihood(&report.model, &c).unwrap();
        assert_abs_diff_eq!(ll, *report.log_likelihood_trace.last().unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn em_errors() {
        let c = corpus(&[&["a", "b"], &["a"]]);
        assert!(matches!(fit_lamp_em(&c, &EmOptions::new(2)), Err(Error::TooShort { .. })));

        let c = corpus(&[&["a", "b", "a"]]);
        let init = EmInit::Given {
            kernel: Kernel::uniform(1).unwrap(),
            matrix: TransitionMatrix::from_labels(&["a", "b"], vec![vec![1.0, 0.0], vec![1.0, 0.0]])
                .unwrap(),
        };
        let opts = EmOptions {
            init,
            ..EmOptions::new(1)
        };
        assert_eq!(
            fit_lamp_em(&c, &opts),
            Err(Error::DegenerateInit {
                sequence: 0,
                position: 1
            })
        );
    }

    #[test]
    fn random_init_is_seeded_and_positive() {
        let states = StateSpace::numbered(4).unwrap();
        let a = EmInit::random(&states, 3, 11).unwrap();
        assert_eq!(a, EmInit::random(&states, 3, 11).unwrap());
        assert_ne!(a, EmInit::random(&states, 3, 12).unwrap());
        let EmInit::Given { kernel, matrix } = a else { unreachable!() };
        assert_eq!(kernel.order(), 3);
        assert!(matrix.as_flat().iter().all(|&v| v > 0.0));
        for row in matrix.rows() {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
        assert!(EmInit::random(&states, 0, 1).is_err());

        let c = corpus(&[&["a", "b", "c", "a", "c", "a", "b", "b", "c"]]);
        let opts = EmOptions {
            init: EmInit::random(c.vocabulary(), 2, 5).unwrap(),
            ..EmOptions::new(2)
        };
        let report = fit_lamp_em(&c, &opts).unwrap();
        for w in report.log_likelihood_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
    }

    #[test]
    fn log_likelihood_examples() {
        let p = TransitionMatrix::from_labels(&["a", "b"], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = corpus(&[&["a", "b", "a", "b"]]);
        assert_eq!(lamp_log_likelihood(&LampModel::first_order(p), &c).unwrap(), 0.0);

        let u = TransitionMatrix::from_labels(&["a", "b", "c"], vec![vec![1.0 / 3.0; 3]; 3]).unwrap();
        let c = corpus(&[&["a", "b", "a", "c"], &["c", "c"]]);
        let model = LampModel::new(u, Kernel::uniform(2).unwrap());
        let expected = -((6 - 2) as f64) * 3f64.log2();
        assert_abs_diff_eq!(lamp_log_likelihood(&model, &c).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn log_likelihood_matches_log_loss() {
        let p = TransitionMatrix::from_labels(
            &["a", "b", "c"],
            vec![vec![0.2, 0.5, 0.3], vec![0.6, 0.1, 0.3], vec![0.3, 0.3, 0.4]],
        )
        .unwrap();
        let model = LampModel::new(p, Kernel::new(vec![0.5, 0.2, 0.3]).unwrap());
        let seq = model.simulate(crate::markov::InitialState::State(1), 2000, 5).unwrap();
        let c = SequenceCorpus::new(model.matrix().states().clone(), vec![seq.clone()]).unwrap();
        let ll = lamp_log_likelihood(&model, &c).unwrap();
        let loss = model.log_loss(&seq, 0).unwrap();
        assert_abs_diff_eq!(ll, -(seq.len() as f64 - 1.0) * loss, epsilon = 1e-8);
    }

    #[test]
    fn log_likelihood_unknown_token() {
        let p = TransitionMatrix::from_labels(&["a"], vec![vec![1.0]]).unwrap();
        let c = corpus(&[&["a", "z"]]);
        assert_eq!(
            lamp_log_likelihood(&LampModel::first_order(p), &c),
            Err(Error::UnknownToken("z".into()))
        );
    }
}
