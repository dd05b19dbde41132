//! Sequence corpora and the preprocessing pipeline: consecutive-duplicate
//! removal and collapsing of rare tokens into a single placeholder.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::StateSpace;

pub const DEFAULT_MIN_COUNT: usize = 10;
/// Rarity threshold used for the Last.fm listening data.
pub const LASTFM_MIN_COUNT: usize = 50;
pub const DEFAULT_RARE_TOKEN: &str = "UNK";

/// A collection of token sequences over a shared vocabulary. Tokens are
/// stored as indices into the vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceCorpus {
    vocabulary: StateSpace,
    sequences: Vec<Vec<usize>>,
}

impl SequenceCorpus {
    pub fn new(vocabulary: StateSpace, sequences: Vec<Vec<usize>>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        for s in &sequences {
            s.iter().try_for_each(|&i| vocabulary.check_index(i))?;
        }
        Ok(Self {
            vocabulary,
            sequences,
        })
    }

    /// Builds the vocabulary in order of first appearance.
    pub fn from_tokens<I, S, T>(sequences: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut encoded = Vec::new();
        for seq in sequences {
            let mut out = Vec::new();
            for tok in seq {
                let tok = tok.as_ref();
                let id = match index.get(tok) {
                    Some(&id) => id,
                    None => {
                        let id = labels.len();
                        labels.push(tok.to_string());
                        index.insert(tok.to_string(), id);
                        id
                    }
                };
                out.push(id);
            }
            encoded.push(out);
        }
        if encoded.is_empty() || labels.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self {
            vocabulary: StateSpace::new(labels)?,
            sequences: encoded,
        })
    }

    pub fn vocabulary(&self) -> &StateSpace {
        &self.vocabulary
    }

    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.sequences
    }

    pub fn n_sequences(&self) -> usize {
        self.sequences.len()
    }

    /// Total number of tokens `N = Σ mᵢ`.
    pub fn total_len(&self) -> usize {
        self.sequences.iter().map(Vec::len).sum()
    }

    /// Tokens of sequence `i` as labels.
    pub fn tokens(&self, i: usize) -> Vec<&str> {
        self.sequences[i]
            .iter()
            .map(|&s| self.vocabulary.label(s).unwrap_or_default())
            .collect()
    }

    /// Corpus-wide occurrence count per vocabulary entry.
    pub fn token_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.vocabulary.len()];
        for s in &self.sequences {
            for &t in s {
                counts[t] += 1;
            }
        }
        counts
    }

    /// Keeps only sequences with at least `min_len` symbols.
    pub fn filter_min_len(&self, min_len: usize) -> Result<Self> {
        let sequences: Vec<Vec<usize>> = self
            .sequences
            .iter()
            .filter(|s| s.len() >= min_len)
            .cloned()
            .collect();
        Self::new(self.vocabulary.clone(), sequences)
    }
}

/// Collapses runs of identical adjacent tokens within each sequence.
pub fn dedupe_consecutive(c: &SequenceCorpus) -> SequenceCorpus {
    let sequences = c
        .sequences
        .iter()
        .map(|s| {
            let mut out = s.clone();
            out.dedup();
            out
        })
        .collect();
    SequenceCorpus {
        vocabulary: c.vocabulary.clone(),
        sequences,
    }
}

/// Replaces every token seen fewer than `min_count` times in the whole
/// corpus by `rare_token`. Returns the new corpus and the replaced tokens.
pub fn replace_rare(
    c: &SequenceCorpus,
    min_count: usize,
    rare_token: &str,
) -> Result<(SequenceCorpus, BTreeSet<String>)> {
    if min_count == 0 {
        return Err(Error::InvalidParameter("min_count must be at least 1"));
    }
    if c.vocabulary.contains(rare_token) {
        return Err(Error::RareTokenCollision(rare_token.to_string()));
    }
    let counts = c.token_counts();
    let replaced: BTreeSet<String> = counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n < min_count)
        .filter_map(|(i, _)| c.vocabulary.label(i).map(ToString::to_string))
        .collect();
    if replaced.is_empty() {
        return Ok((c.clone(), replaced));
    }
    let rebuilt = SequenceCorpus::from_tokens(c.sequences.iter().map(|s| {
        s.iter().map(|&t| {
            if counts[t] < min_count {
                rare_token
            } else {
                c.vocabulary.label(t).unwrap_or_default()
            }
        })
    }))?;
    Ok((rebuilt, replaced))
}

/// Parameters of the fixed pipeline
/// `dedupe -> replace_rare -> dedupe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessing {
    pub min_count: usize,
    pub rare_token: String,
}

impl Default for Preprocessing {
    fn default() -> Self {
        Self {
            min_count: DEFAULT_MIN_COUNT,
            rare_token: DEFAULT_RARE_TOKEN.to_string(),
        }
    }
}

/// Corpus size after one pipeline stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub stage: &'static str,
    pub n_sequences: usize,
    pub total: usize,
    pub vocab: usize,
}

impl StageReport {
    fn of(stage: &'static str, c: &SequenceCorpus) -> Self {
        let vocab = c.token_counts().iter().filter(|&&n| n > 0).count();
        Self {
            stage,
            n_sequences: c.n_sequences(),
            total: c.total_len(),
            vocab,
        }
    }
}

/// Runs the pipeline, returning the cleaned corpus and one report per
/// stage (starting with the input as `"load"`).
pub fn preprocess(
    c: &SequenceCorpus,
    params: &Preprocessing,
) -> Result<(SequenceCorpus, Vec<StageReport>)> {
    let mut reports = vec![StageReport::of("load", c)];
    let deduped = dedupe_consecutive(c);
    reports.push(StageReport::of("dedupe", &deduped));
    let (replaced, dropped) = replace_rare(&deduped, params.min_count, &params.rare_token)?;
    log::debug!("replaced {} rare tokens", dropped.len());
    reports.push(StageReport::of("replace_rare", &replaced));
    let cleaned = dedupe_consecutive(&replaced);
    reports.push(StageReport::of("dedupe_after_replace", &cleaned));
    for r in &reports {
        log::info!(
            "stage {}: {} sequences, N = {}, vocab = {}",
            r.stage,
            r.n_sequences,
            r.total,
            r.vocab
        );
    }
    Ok((cleaned, reports))
}
