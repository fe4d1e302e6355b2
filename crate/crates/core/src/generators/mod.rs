//! Seeded random and deterministic graph constructions.

pub mod fixtures;
mod lazy;
mod margulis;
mod matching;

use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::{Rng, Seed};

pub use lazy::LazyErdosRenyi;
pub use margulis::{gen_margulis_expander, margulis_multigraph};
pub use matching::{enumerate_matchings, gen_matching_model, ContractionDefects, MatchingGraph};

/// Attempts allowed to the configuration-model rejection loop.
pub const REJECTION_CAP: usize = 1000;

/// Largest degree for which [`gen_random_regular`] uses exact rejection
/// sampling. The configuration model accepts with probability about
/// `exp(-(d^2 - 1) / 4)`: roughly 1/42 at `d = 4` but 1/6300 at `d = 6`.
pub const REJECTION_MAX_DEGREE: usize = 4;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no simple graph after {attempts} attempts")]
    RejectionCapExceeded { attempts: usize },
}

/// How [`gen_random_regular_with`] produces a simple `d`-regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularSampler {
    /// Configuration model with whole-graph rejection; exactly uniform.
    Rejection { max_attempts: usize },
    /// Pairing with local re-draws (Steger-Wormald style); asymptotically
    /// uniform for fixed `d`, practical for any `d <= 64`.
    Pairing { max_restarts: usize },
}

/// `G(n, p)` by geometric skipping over the `C(n, 2)` pairs.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: Seed) -> Result<Graph, GenError> {
    if n < 2 {
        return Err(GenError::InvalidParameter(format!("n = {n}, need n >= 2")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(GenError::InvalidParameter(format!("p = {p}, need 0 < p < 1")));
    }
    let mut rng = seed.rng();
    let log_q = (-p).ln_1p();
    let mut pairs = Vec::new();
    // Pairs (w, v) with w < v, enumerated by v then w.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // Anything past the remaining pairs ends the scan.
        if skip >= (n * n) as f64 {
            break;
        }
        w += 1 + skip as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            pairs.push((w as u32, v as u32));
        }
    }
    Ok(Graph::from_unique_pairs(n, &pairs))
}

/// Uniform-ish random simple `d`-regular graph.
///
/// Uses exact configuration-model rejection for `d <= REJECTION_MAX_DEGREE`
/// and the pairing sampler above that.
pub fn gen_random_regular(n: usize, d: usize, seed: Seed) -> Result<Graph, GenError> {
    let sampler = if d <= REJECTION_MAX_DEGREE {
        RegularSampler::Rejection { max_attempts: REJECTION_CAP }
    } else {
        RegularSampler::Pairing { max_restarts: REJECTION_CAP }
    };
    gen_random_regular_with(n, d, seed, sampler)
}

pub fn gen_random_regular_with(n: usize, d: usize, seed: Seed, sampler: RegularSampler) -> Result<Graph, GenError> {
    check_regular_params(n, d)?;
    let mut rng = seed.rng();
    match sampler {
        RegularSampler::Rejection { max_attempts } => {
            for _ in 0..max_attempts {
                if let Ok(g) = configuration_attempt(n, d, &mut rng) {
                    return Ok(g);
                }
            }
            Err(GenError::RejectionCapExceeded { attempts: max_attempts })
        }
        RegularSampler::Pairing { max_restarts } => {
            for _ in 0..max_restarts {
                if let Some(g) = pairing_attempt(n, d, &mut rng) {
                    return Ok(g);
                }
            }
            Err(GenError::RejectionCapExceeded { attempts: max_restarts })
        }
    }
}

fn check_regular_params(n: usize, d: usize) -> Result<(), GenError> {
    if d == 0 || d > 64 {
        return Err(GenError::InvalidParameter(format!("d = {d}, need 1 <= d <= 64")));
    }
    if n <= d {
        return Err(GenError::InvalidParameter(format!("n = {n} must exceed d = {d}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::InvalidParameter(format!("n * d = {} is odd", n * d)));
    }
    if n > crate::graph::MAX_NODES {
        return Err(GenError::InvalidParameter(format!("n = {n} exceeds the supported maximum")));
    }
    Ok(())
}

/// One draw of the configuration model: a uniform perfect matching on the
/// `n * d` half-edges, contracted. Fails when the contraction is not simple.
pub fn configuration_attempt(n: usize, d: usize, rng: &mut Rng) -> Result<Graph, ContractionDefects> {
    MatchingGraph::random(n, d, rng).contract()
}

fn pairing_attempt(n: usize, d: usize, rng: &mut Rng) -> Option<Graph> {
    let mut adj = vec![0u32; n * d];
    let mut deg = vec![0usize; n];
    let adjacent = |adj: &[u32], deg: &[usize], u: u32, v: u32| {
        let u = u as usize;
        adj[u * d..u * d + deg[u]].contains(&v)
    };
    let mut stubs: Vec<u32> = (0..n * d).map(|i| (i / d) as u32).collect();
    let mut pairs = Vec::with_capacity(n * d / 2);
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for c in stubs.chunks_exact(2) {
            let (u, v) = (c[0], c[1]);
            if u != v && !adjacent(&adj, &deg, u, v) {
                adj[u as usize * d + deg[u as usize]] = v;
                deg[u as usize] += 1;
                adj[v as usize * d + deg[v as usize]] = u;
                deg[v as usize] += 1;
                pairs.push((u.min(v), u.max(v)));
            } else {
                leftover.extend_from_slice(c);
            }
        }
        if !leftover.is_empty() {
            let mut nodes = leftover.clone();
            nodes.sort_unstable();
            nodes.dedup();
            let suitable = nodes
                .iter()
                .enumerate()
                .any(|(i, &a)| nodes[i + 1..].iter().any(|&b| !adjacent(&adj, &deg, a, b)));
            if !suitable {
                return None;
            }
        }
        stubs = leftover;
    }
    Some(Graph::from_unique_pairs(n, &pairs))
}
