//! Corpus, matrix and model file formats.

use std::fs;
use std::path::Path;

use lamp_core::corpus::SequenceCorpus;
use lamp_core::{Kernel, LampModel, TransitionMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One sequence per line, tokens separated by spaces.
    Lines,
    /// Tab-separated rows grouped on `group_col`; the `item_col` values of
    /// each group, in file order, form one sequence.
    ColumnTsv {
        group_col: usize,
        item_col: usize,
        header: bool,
    },
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<SequenceCorpus> {
    let text = read_to_string(path)?;
    match format {
        CorpusFormat::Lines => parse_lines(&text),
        CorpusFormat::ColumnTsv {
            group_col,
            item_col,
            header,
        } => parse_tsv(&text, group_col, item_col, header),
    }
}

/// Blank lines are skipped.
pub fn parse_lines(text: &str) -> Result<SequenceCorpus> {
    let sequences: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split(' ').filter(|t| !t.is_empty()).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    corpus_from(sequences)
}

pub fn parse_tsv(text: &str, group_col: usize, item_col: usize, header: bool) -> Result<SequenceCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(header)
        .flexible(true)
        .quoting(false)
        .from_reader(text.as_bytes());
    let needed = group_col.max(item_col) + 1;
    let mut width = None;
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let expected = *width.get_or_insert(record.len().max(needed));
        if record.len() != expected {
            return Err(Error::MalformedRow {
                line,
                expected,
                found: record.len(),
            });
        }
        let group = &record[group_col];
        let slot = *index.entry(group.to_string()).or_insert_with(|| {
            groups.push((group.to_string(), Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(record[item_col].to_string());
    }
    corpus_from(groups.into_iter().map(|(_, s)| s).collect())
}

fn corpus_from<S: AsRef<str>>(sequences: Vec<Vec<S>>) -> Result<SequenceCorpus> {
    if sequences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(SequenceCorpus::from_tokens(sequences)?)
}

pub fn format_lines(c: &SequenceCorpus) -> String {
    let mut out = String::new();
    for i in 0..c.n_sequences() {
        out.push_str(&c.tokens(i).join(" "));
        out.push('\n');
    }
    out
}

/// `{"labels": [...], "rows": [[...], ...]}`, with an optional `"kernel"`
/// for LAMPs. Unknown fields are ignored on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<f64>>,
}

impl ModelDoc {
    pub fn from_matrix(p: &TransitionMatrix) -> Self {
        Self {
            labels: p.states().labels().to_vec(),
            rows: p.to_rows(),
            kernel: None,
        }
    }

    pub fn from_model(m: &LampModel) -> Self {
        Self {
            kernel: Some(m.kernel().weights().to_vec()),
            ..Self::from_matrix(m.matrix())
        }
    }

    pub fn matrix(&self) -> Result<TransitionMatrix> {
        Ok(TransitionMatrix::from_labels(&self.labels, self.rows.clone())?)
    }

    /// The LAMP described by the document; a missing kernel means
    /// first order.
    pub fn model(&self) -> Result<LampModel> {
        let matrix = self.matrix()?;
        Ok(match &self.kernel {
            Some(w) => LampModel::new(matrix, Kernel::new(w.clone())?),
            None => LampModel::first_order(matrix),
        })
    }
}

/// Dense CSV: a header row of labels, then one row of probabilities per
/// state in header order.
pub fn parse_matrix_csv(text: &str) -> Result<ModelDoc> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Format(format!("not a number: {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(ModelDoc {
        labels,
        rows,
        kernel: None,
    })
}

pub fn format_matrix_csv(p: &TransitionMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(p.states().labels())?;
    for row in p.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    into_string(w)
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Reads a model or matrix; `.csv` files are dense matrices, anything
/// else is JSON.
pub fn read_model(path: &Path) -> Result<ModelDoc> {
    let text = read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_matrix_csv(&text)
    } else {
        Ok(serde_json::from_str(&text)?)
    }
}
