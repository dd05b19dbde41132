//! Communicating classes of a transition matrix, and the two ways of
//! turning a reducible chain into an irreducible one.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;

/// Label given to the state added by [`induce_irreducibility`]. A `'` is
/// appended until it does not collide with an existing label.
pub const ARTIFICIAL_LABEL: &str = "<artificial>";

/// Partition of the states into strongly connected components.
///
/// Components are ordered by their smallest member and each component
/// lists its members in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    largest: usize,
}

impl SccPartition {
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, state: usize) -> usize {
        self.component_of[state]
    }

    /// Id of a maximum-cardinality component. Ties go to the component
    /// holding the lowest state index.
    pub fn largest_id(&self) -> usize {
        self.largest
    }

    pub fn largest(&self) -> &[usize] {
        &self.components[self.largest]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// SCCs of the digraph with an edge `i -> j` iff `P_ij > edge_threshold`.
pub fn strongly_connected_components(p: &TransitionMatrix, edge_threshold: f64) -> SccPartition {
    let adjacency: Vec<Vec<usize>> = p
        .rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v > edge_threshold)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    scc_of_adjacency(&adjacency)
}

pub fn is_irreducible(p: &TransitionMatrix) -> bool {
    strongly_connected_components(p, 0.0).len() == 1
}

/// Tarjan's algorithm over adjacency lists, with an explicit stack so deep
/// graphs do not overflow the call stack.
pub fn scc_of_adjacency(adjacency: &[Vec<usize>]) -> SccPartition {
    const UNVISITED: usize = usize::MAX;
    let n = adjacency.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut raw: Vec<Vec<usize>> = Vec::new();
    // (node, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adjacency[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                raw.push(component);
            }
        }
    }

    raw.sort_unstable_by_key(|c| c[0]);
    let mut component_of = vec![0; n];
    for (id, c) in raw.iter().enumerate() {
        for &s in c {
            component_of[s] = id;
        }
    }
    let mut largest = 0;
    for (id, c) in raw.iter().enumerate() {
        if c.len() > raw[largest].len() {
            largest = id;
        }
    }
    SccPartition {
        components: raw,
        component_of,
        largest,
    }
}

/// Result of [`restrict_to_largest_scc`].
#[derive(Debug, Clone, PartialEq)]
pub struct Restriction {
    pub matrix: TransitionMatrix,
    /// Original indices of the kept states, in increasing order.
    pub kept: Vec<usize>,
    pub excluded: usize,
}

/// Submatrix over the largest SCC, each row renormalized to sum to 1.
pub fn restrict_to_largest_scc(p: &TransitionMatrix) -> Result<Restriction> {
    let scc = strongly_connected_components(p, 0.0);
    let kept = scc.largest().to_vec();
    if kept.len() == 1 && p.get(kept[0], kept[0]) <= 0.0 {
        return Err(Error::DegenerateComponent { state: kept[0] });
    }
    let states = p.states().subset(&kept)?;
    let mut probs = Vec::with_capacity(kept.len() * kept.len());
    for &i in &kept {
        let start = probs.len();
        probs.extend(kept.iter().map(|&j| p.get(i, j)));
        let sum: f64 = probs[start..].iter().sum();
        probs[start..].iter_mut().for_each(|v| *v /= sum);
    }
    Ok(Restriction {
        matrix: TransitionMatrix::from_flat_unchecked(states, probs),
        excluded: p.n() - kept.len(),
        kept,
    })
}

/// Appends an artificial state joined to every original state.
///
/// Each original row becomes `(1 − p)·P_i` plus `p` towards the artificial
/// state, whose own row is uniform over the original states. The result is
/// irreducible and aperiodic whatever `P` is.
pub fn induce_irreducibility(p: &TransitionMatrix, p_artificial: f64) -> Result<TransitionMatrix> {
    if !(p_artificial > 0.0 && p_artificial < 1.0) {
        return Err(Error::InvalidProbability(p_artificial));
    }
    let n = p.n();
    let states = p.states().with_fresh_label(ARTIFICIAL_LABEL);
    let keep = 1.0 - p_artificial;
    let mut probs = Vec::with_capacity((n + 1) * (n + 1));
    for row in p.rows() {
        probs.extend(row.iter().map(|&v| keep * v));
        probs.push(p_artificial);
    }
    let uniform = 1.0 / n as f64;
    probs.extend(core::iter::repeat_n(uniform, n));
    probs.push(0.0);
    Ok(TransitionMatrix::from_flat_unchecked(states, probs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditioning {
    LargestCc,
    Induced(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditioningMethod {
    LargestScc,
    Induced,
}

/// What a conditioning step did to a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningReport {
    pub method: ConditioningMethod,
    pub excluded: usize,
    pub p_artificial: Option<f64>,
    pub n_before: usize,
    pub n_after: usize,
}

/// Applies either repair and reports what changed.
pub fn condition(
    p: &TransitionMatrix,
    conditioning: Conditioning,
) -> Result<(TransitionMatrix, ConditioningReport)> {
    match conditioning {
        Conditioning::LargestCc => {
            let r = restrict_to_largest_scc(p)?;
            let report = ConditioningReport {
                method: ConditioningMethod::LargestScc,
                excluded: r.excluded,
                p_artificial: None,
                n_before: p.n(),
                n_after: r.matrix.n(),
            };
            Ok((r.matrix, report))
        }
        Conditioning::Induced(prob) => {
            let m = induce_irreducibility(p, prob)?;
            let report = ConditioningReport {
                method: ConditioningMethod::Induced,
                excluded: 0,
                p_artificial: Some(prob),
                n_before: p.n(),
                n_after: m.n(),
            };
            Ok((m, report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{entropy_rate, stationary_distribution};
    use approx::assert_abs_diff_eq;

    fn m(rows: Vec<Vec<f64>>) -> TransitionMatrix {
        let labels: Vec<String> = (0..rows.len())
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        TransitionMatrix::from_labels(&labels, rows).unwrap()
    }

    #[test]
    fn scc_examples() {
        let s = strongly_connected_components(&m(vec![vec![0.0, 1.0], vec![1.0, 0.0]]), 0.0);
        assert_eq!(s.components(), &[vec![0, 1]]);

        let s = strongly_connected_components(&m(vec![vec![1.0, 0.0], vec![0.0, 1.0]]), 0.0);
        assert_eq!(s.components(), &[vec![0], vec![1]]);
        assert_eq!(s.largest_id(), 0);

        // a <-> b, c -> a
        let p = m(vec![
            vec![0.5, 0.5, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ]);
        let s = strongly_connected_components(&p, 0.0);
        assert_eq!(s.components(), &[vec![0, 1], vec![2]]);
        assert_eq!(s.largest(), &[0, 1]);
        assert_eq!(s.component_of(2), 1);
    }

    #[test]
    fn edge_threshold_drops_weak_edges() {
        let p = m(vec![vec![0.99, 0.01], vec![0.5, 0.5]]);
        assert_eq!(strongly_connected_components(&p, 0.0).len(), 1);
        assert_eq!(strongly_connected_components(&p, 0.05).len(), 2);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let adjacency: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(scc_of_adjacency(&adjacency).len(), 1);
    }

    #[test]
    fn restrict_examples() {
        let p = m(vec![vec![0.2, 0.8], vec![0.6, 0.4]]);
        let r = restrict_to_largest_scc(&p).unwrap();
        assert_eq!(r.matrix, p);
        assert_eq!(r.excluded, 0);

        // {a, b} strongly connected, c -> a only
        let p = m(vec![
            vec![0.5, 0.5, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ]);
        let r = restrict_to_largest_scc(&p).unwrap();
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.excluded, 1);
        assert_eq!(r.matrix.to_rows(), vec![vec![0.5, 0.5], vec![1.0, 0.0]]);

        let r = restrict_to_largest_scc(&m(vec![vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
        assert_eq!(r.matrix.to_rows(), vec![vec![1.0]]);
        assert_eq!(r.matrix.states().labels(), &["a".to_string()]);
        assert_eq!(r.excluded, 1);
    }

    #[test]
    fn restrict_renormalizes_leaking_rows() {
        let p = m(vec![
            vec![0.25, 0.25, 0.5],
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let r = restrict_to_largest_scc(&p).unwrap();
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.matrix.to_rows(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
    }

    #[test]
    fn degenerate_component() {
        // {a} feeds the cycle {b, c}
        let p = m(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ]);
        // {b, c} is the largest component here
        assert_eq!(restrict_to_largest_scc(&p).unwrap().kept, vec![1, 2]);
        let p = m(vec![vec![0.0, 1.0], vec![0.0, 1.0]]);
        // {a}, {b}: tie goes to a, which has no self-loop
        assert_eq!(
            restrict_to_largest_scc(&p),
            Err(Error::DegenerateComponent { state: 0 })
        );
    }

    #[test]
    fn induce_examples() {
        let p = m(vec![vec![1.0]]);
        let q = induce_irreducibility(&p, 0.5).unwrap();
        assert_eq!(q.to_rows(), vec![vec![0.5, 0.5], vec![1.0, 0.0]]);
        let pi = stationary_distribution(&q).unwrap();
        assert_abs_diff_eq!(entropy_rate(&q, &pi).unwrap(), 2.0 / 3.0, epsilon = 1e-12);

        let p = m(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let prob = 2f64.powi(-15);
        let q = induce_irreducibility(&p, prob).unwrap();
        assert_eq!(q.n(), 3);
        assert!(is_irreducible(&q));
        let pi = stationary_distribution(&q).unwrap();
        // flow balance into the artificial state: π_art = p (1 − π_art)
        assert_abs_diff_eq!(pi.get(2), prob / (1.0 + prob), epsilon = 1e-15);
        assert_abs_diff_eq!(pi.get(0), pi.get(1), epsilon = 1e-12);
    }

    #[test]
    fn induce_rejects_bad_probability() {
        let p = m(vec![vec![1.0]]);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                induce_irreducibility(&p, bad),
                Err(Error::InvalidProbability(_))
            ));
        }
    }

    #[test]
    fn induce_vanishes_on_irreducible_input() {
        let p = m(vec![
            vec![0.1, 0.6, 0.3],
            vec![0.4, 0.2, 0.4],
            vec![0.5, 0.3, 0.2],
        ]);
        let base = entropy_rate(&p, &stationary_distribution(&p).unwrap()).unwrap();
        let q = induce_irreducibility(&p, 2f64.powi(-15)).unwrap();
        let h = entropy_rate(&q, &stationary_distribution(&q).unwrap()).unwrap();
        assert!((h - base).abs() < 1e-3, "{h} vs {base}");
    }

    #[test]
    fn condition_reports() {
        let p = m(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let (q, r) = condition(&p, Conditioning::LargestCc).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!((r.n_before, r.n_after, r.excluded), (2, 1, 1));
        let (q, r) = condition(&p, Conditioning::Induced(0.25)).unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(r.p_artificial, Some(0.25));
        assert_eq!(r.method, ConditioningMethod::Induced);
    }
}
