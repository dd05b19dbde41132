use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Ordered set of distinct state labels with a label -> index lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let mut index = BTreeMap::new();
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// States labelled `"0"`, `"1"`, ... `"n-1"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<usize>> {
        tokens
            .iter()
            .map(|t| {
                let t = t.as_ref();
                self.index_of(t)
                    .ok_or_else(|| Error::UnknownToken(t.to_string()))
            })
            .collect()
    }

    pub fn decode(&self, indices: &[usize]) -> Result<Vec<&str>> {
        indices
            .iter()
            .map(|&i| {
                self.label(i).ok_or(Error::StateOutOfRange {
                    index: i,
                    n: self.len(),
                })
            })
            .collect()
    }

    /// The sub-space made of `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let labels = self.decode(indices)?;
        Self::new(labels)
    }

    /// Appends a label that does not collide with any existing one. The
    /// returned space has the new state at index `len()`.
    pub fn with_fresh_label(&self, base: &str) -> Self {
        let mut label = String::from(base);
        while self.contains(&label) {
            label.push('\'');
        }
        let mut labels = self.labels.clone();
        labels.push(label);
        // fresh label by construction
        Self::new(labels).expect("fresh label collides")
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                index,
                n: self.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            StateSpace::new(["a", "b", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert_eq!(
            StateSpace::new(Vec::<String>::new()),
            Err(Error::EmptyStateSpace)
        );
    }

    #[test]
    fn index_label_bijection() {
        let s = StateSpace::new(["x", "y", "z"]).unwrap();
        for (i, l) in s.labels().iter().enumerate() {
            assert_eq!(s.index_of(l), Some(i));
            assert_eq!(s.label(i), Some(l.as_str()));
        }
        assert_eq!(s.encode(&["z", "x"]).unwrap(), vec![2, 0]);
        assert_eq!(s.encode(&["q"]), Err(Error::UnknownToken("q".into())));
    }

    #[test]
    fn fresh_label_avoids_collisions() {
        let s = StateSpace::new(["<artificial>"]).unwrap();
        let t = s.with_fresh_label("<artificial>");
        assert_eq!(t.len(), 2);
        assert_eq!(t.label(1), Some("<artificial>'"));
    }
}
