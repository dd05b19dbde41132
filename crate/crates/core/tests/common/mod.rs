#![allow(dead_code, clippy::needless_range_loop)]

use lamp_core::{StateSpace, TransitionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Row drawn from a symmetric Dirichlet(alpha) via normalized gamma
/// variates; alpha = 1 uses exponentials, other values use the
/// Marsaglia–Tsang sampler.
pub fn dirichlet_row<R: Rng>(rng: &mut R, n: usize, alpha: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| gamma(rng, alpha)).collect();
    let s: f64 = g.iter().sum();
    g.iter().map(|v| v / s).collect()
}

fn gamma<R: Rng>(rng: &mut R, alpha: f64) -> f64 {
    if alpha < 1.0 {
        let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        return gamma(rng, alpha + 1.0) * u.powf(1.0 / alpha);
    }
    let d = alpha - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, v) = loop {
            let x = normal(rng);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u: f64 = rng.random();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v;
        }
    }
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Random matrix with every entry positive, hence ergodic.
pub fn random_ergodic<R: Rng>(rng: &mut R, n: usize, alpha: f64) -> TransitionMatrix {
    let rows = (0..n).map(|_| dirichlet_row(rng, n, alpha)).collect();
    TransitionMatrix::new(StateSpace::numbered(n).unwrap(), rows).unwrap()
}

pub fn matrix(rows: Vec<Vec<f64>>) -> TransitionMatrix {
    TransitionMatrix::new(StateSpace::numbered(rows.len()).unwrap(), rows).unwrap()
}

/// Reachability closure by Floyd–Warshall; `reach[i][i]` is always true.
pub fn transitive_closure(adjacency: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adjacency.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, out) in adjacency.iter().enumerate() {
        reach[i][i] = true;
        for &j in out {
            reach[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Components as mutual-reachability classes, each sorted, ordered by
/// smallest member.
pub fn closure_components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let reach = transitive_closure(adjacency);
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        out.push(class);
    }
    out
}

pub fn state_frequencies(seq: &[usize], n: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n];
    for &s in seq {
        counts[s] += 1;
    }
    counts.iter().map(|&c| c as f64 / seq.len() as f64).collect()
}
