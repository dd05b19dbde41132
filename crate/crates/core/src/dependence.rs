//! Lagged self-association of a symbol sequence via Cramér's V.
//!
//! For lag `l` the pairs `(x_i, x_{i+l})` form a contingency table whose
//! Pearson χ² against independence gives
//! `V = sqrt(χ² / (N · min(r − 1, c − 1)))`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::SequenceCorpus;
use crate::error::{Error, Result};

/// Dense counting is used while `alphabet²` stays below this many cells.
const DENSE_CELL_LIMIT: usize = 1 << 22;

/// Sparse contingency table. Only rows and columns with at least one
/// observation are kept, so every marginal is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    row_labels: Vec<usize>,
    col_labels: Vec<usize>,
    /// `(row position, column position, count)`, sorted, counts > 0.
    cells: Vec<(usize, usize, u64)>,
    row_totals: Vec<u64>,
    col_totals: Vec<u64>,
    total: u64,
}

impl ContingencyTable {
    /// Builds a table from `(row label, column label) -> count`.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), u64)>,
    {
        let mut map: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (key, n) in pairs {
            if n > 0 {
                *map.entry(key).or_insert(0) += n;
            }
        }
        let mut row_labels: Vec<usize> = map.keys().map(|&(r, _)| r).collect();
        row_labels.sort_unstable();
        row_labels.dedup();
        let mut col_labels: Vec<usize> = map.keys().map(|&(_, c)| c).collect();
        col_labels.sort_unstable();
        col_labels.dedup();
        let mut row_totals = vec![0; row_labels.len()];
        let mut col_totals = vec![0; col_labels.len()];
        let mut total = 0;
        let cells = map
            .into_iter()
            .map(|((r, c), n)| {
                let ri = row_labels.binary_search(&r).unwrap_or_default();
                let ci = col_labels.binary_search(&c).unwrap_or_default();
                row_totals[ri] += n;
                col_totals[ci] += n;
                total += n;
                (ri, ci, n)
            })
            .collect();
        Self {
            row_labels,
            col_labels,
            cells,
            row_totals,
            col_totals,
            total,
        }
    }

    /// Dense counts with rows and columns labelled by position. Empty rows
    /// and columns are dropped.
    pub fn from_dense(counts: &[Vec<u64>]) -> Self {
        Self::from_pairs(counts.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().map(move |(c, &n)| ((r, c), n))
        }))
    }

    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[usize] {
        &self.col_labels
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Count of the `(row label, column label)` cell.
    pub fn count(&self, row: usize, col: usize) -> u64 {
        let (Ok(r), Ok(c)) = (
            self.row_labels.binary_search(&row),
            self.col_labels.binary_search(&col),
        ) else {
            return 0;
        };
        self.cells
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(r, c)))
            .map_or(0, |i| self.cells[i].2)
    }

    /// Pearson χ² against the independence model.
    pub fn chi_squared(&self) -> f64 {
        // Σ (O − E)²/E over all cells = Σ_{O>0} O²/E − N
        let n = self.total as f64;
        let s: f64 = self
            .cells
            .iter()
            .map(|&(r, c, o)| {
                let o = o as f64;
                let e = self.row_totals[r] as f64 * self.col_totals[c] as f64 / n;
                o * o / e
            })
            .sum();
        (s - n).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CramersV {
    pub value: f64,
    /// One of the variables is constant, so association is undefined and
    /// `value` is 0.
    pub degenerate: bool,
}

pub fn cramers_v(t: &ContingencyTable) -> Result<CramersV> {
    if t.total == 0 {
        return Err(Error::EmptyTable);
    }
    let dof = t.row_labels.len().min(t.col_labels.len()).saturating_sub(1);
    if dof == 0 {
        return Ok(CramersV {
            value: 0.0,
            degenerate: true,
        });
    }
    let v2 = t.chi_squared() / (t.total as f64 * dof as f64);
    Ok(CramersV {
        value: libm::sqrt(v2).clamp(0.0, 1.0),
        degenerate: false,
    })
}

/// Table of pairs `(seq[i], seq[i + lag])`; rows index the earlier symbol.
pub fn contingency_table(seq: &[usize], lag: usize) -> Result<ContingencyTable> {
    if seq.len() <= lag {
        return Err(Error::LagTooLarge {
            lag,
            len: seq.len(),
        });
    }
    pooled_table(core::iter::once(seq), lag)
}

/// Pairs from every sequence long enough for `lag`, summed into one table.
/// Pairs never straddle two sequences.
pub fn pooled_contingency_table(seqs: &[Vec<usize>], lag: usize) -> Result<ContingencyTable> {
    let t = pooled_table(seqs.iter().map(Vec::as_slice), lag)?;
    if t.total == 0 {
        let len = seqs.iter().map(Vec::len).max().unwrap_or(0);
        return Err(Error::LagTooLarge { lag, len });
    }
    Ok(t)
}

fn pooled_table<'a, I>(seqs: I, lag: usize) -> Result<ContingencyTable>
where
    I: Iterator<Item = &'a [usize]> + Clone,
{
    let alphabet = seqs
        .clone()
        .flat_map(|s| s.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    if alphabet.saturating_mul(alphabet) <= DENSE_CELL_LIMIT {
        let mut counts = vec![0u64; alphabet * alphabet];
        for s in seqs {
            if s.len() > lag {
                for (a, b) in s.iter().zip(&s[lag..]) {
                    counts[a * alphabet + b] += 1;
                }
            }
        }
        Ok(ContingencyTable::from_pairs(
            counts
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(i, &n)| ((i / alphabet, i % alphabet), n)),
        ))
    } else {
        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for s in seqs {
            if s.len() > lag {
                for (&a, &b) in s.iter().zip(&s[lag..]) {
                    *counts.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        Ok(ContingencyTable::from_pairs(counts))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub lag: usize,
    pub cramers_v: f64,
    pub degenerate: bool,
}

/// Cramér's V at lags `1..=max_lag`, and at lag 0 when asked.
pub fn dependency_profile(
    seq: &[usize],
    max_lag: usize,
    include_lag0: bool,
) -> Result<Vec<ProfilePoint>> {
    if seq.len() <= max_lag {
        return Err(Error::LagTooLarge {
            lag: max_lag,
            len: seq.len(),
        });
    }
    profile_with(max_lag, include_lag0, |lag| contingency_table(seq, lag))
}

/// Profile of a corpus, pooling the per-sequence tables at every lag.
pub fn corpus_dependency_profile(
    c: &SequenceCorpus,
    max_lag: usize,
    include_lag0: bool,
) -> Result<Vec<ProfilePoint>> {
    profile_with(max_lag, include_lag0, |lag| {
        pooled_contingency_table(c.sequences(), lag)
    })
}

fn profile_with<F>(max_lag: usize, include_lag0: bool, table: F) -> Result<Vec<ProfilePoint>>
where
    F: Fn(usize) -> Result<ContingencyTable>,
{
    let first = if include_lag0 { 0 } else { 1 };
    (first..=max_lag)
        .map(|lag| {
            let v = cramers_v(&table(lag)?)?;
            Ok(ProfilePoint {
                lag,
                cramers_v: v.value,
                degenerate: v.degenerate,
            })
        })
        .collect()
}
