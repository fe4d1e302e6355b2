//! Second-largest absolute adjacency eigenvalue.
//!
//! For a d-regular graph the top eigenvalue is `d` with eigenvector `1`, and
//! `lambda = max(lambda_2, |lambda_n|)`. Multigraphs use the convention that
//! a loop contributes 2 to its diagonal entry, so rows still sum to `d`.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, NodeId};
use crate::rng::Seed;

/// Largest graph handed to the dense eigensolver.
pub const EXACT_MAX_NODES: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const RAMANUJAN_TOL: f64 = 1e-9;

const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    Exact,
    PowerIteration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    pub degree: Option<usize>,
    pub lambda_est: f64,
    pub method: SpectralMethod,
    pub iterations: usize,
    pub residual: f64,
    pub is_ramanujan: bool,
    /// `lambda_est / d`; `None` for non-regular graphs.
    pub ratio: Option<f64>,
}

impl SpectralReport {
    fn new(n: usize, degree: Option<usize>, lambda: f64, method: SpectralMethod, iterations: usize, residual: f64) -> Self {
        let is_ramanujan = degree.is_some_and(|d| d >= 1 && lambda <= ramanujan_threshold(d) + RAMANUJAN_TOL);
        SpectralReport {
            n,
            degree,
            lambda_est: lambda,
            method,
            iterations,
            residual,
            is_ramanujan,
            ratio: degree.filter(|&d| d > 0).map(|d| lambda / d as f64),
        }
    }
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("graph has {n} nodes, dense eigensolve is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("power iteration needs a regular graph")]
    NotRegular,
    #[error("graph is empty")]
    Empty,
    #[error("no convergence after {} iterations (best estimate {}, residual {})", best.iterations, best.lambda_est, best.residual)]
    NotConverged { best: Box<SpectralReport> },
}

impl SpectralError {
    /// Estimate from an unconverged run, if that is what failed.
    pub fn best_estimate(&self) -> Option<&SpectralReport> {
        match self {
            SpectralError::NotConverged { best } => Some(best),
            _ => None,
        }
    }
}

/// `2 sqrt(d - 1)`.
pub fn ramanujan_threshold(d: usize) -> f64 {
    2.0 * (d.saturating_sub(1) as f64).sqrt()
}

/// Full spectrum of the adjacency matrix, ascending.
pub fn adjacency_spectrum<G: Adjacency + ?Sized>(g: &G) -> Result<Vec<f64>, SpectralError> {
    let n = g.node_count();
    if n > EXACT_MAX_NODES {
        return Err(SpectralError::TooLarge { n, max: EXACT_MAX_NODES });
    }
    let mut a = faer::Mat::<f64>::zeros(n, n);
    for v in 0..n {
        for u in g.neighbors(NodeId::new(v)) {
            a[(v, u.index())] += 1.0;
        }
    }
    let mut ev = a.selfadjoint_eigenvalues(faer::Side::Lower);
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Dense symmetric eigensolve. For non-regular graphs `lambda_est` is still
/// `max(lambda_2, |lambda_n|)` but carries no expansion guarantee.
pub fn lambda_exact<G: Adjacency + ?Sized>(g: &G) -> Result<SpectralReport, SpectralError> {
    let n = g.node_count();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let ev = adjacency_spectrum(g)?;
    let lambda = if n == 1 { 0.0 } else { ev[n - 2].max(ev[0].abs()) };
    Ok(SpectralReport::new(n, g.regular_degree(), lambda, SpectralMethod::Exact, 0, 0.0))
}

/// `ceil(10 sqrt(n) ln n)`, at least 100.
pub fn default_max_iter(n: usize) -> usize {
    let nf = n.max(2) as f64;
    ((10.0 * nf.sqrt() * nf.ln()).ceil() as usize).max(100)
}

/// Which end of the spectrum a [`power_iteration`] run targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumEnd {
    /// `lambda_2`, via `A + dI`.
    Top,
    /// `lambda_n`, via `dI - A`.
    Bottom,
}

#[derive(Clone, Debug)]
pub struct PowerRun {
    /// Eigenvalue of `A` (shift undone).
    pub value: f64,
    /// Unit vector, orthogonal to `1`.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// `||A v - value v||`.
    pub residual: f64,
    pub converged: bool,
}

/// Power iteration for one end of the spectrum restricted to the
/// complement of `1`. Both shifted operators have spectrum in `[0, 2d]`, so
/// the dominant eigenvalue on `1`-perp is the targeted one. Stops when the
/// residual drops to `tol * d`.
pub fn power_iteration<G: Adjacency + Sync + ?Sized>(
    g: &G,
    end: SpectrumEnd,
    tol: f64,
    max_iter: usize,
) -> Result<PowerRun, SpectralError> {
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let n = g.node_count();
    if n < 2 {
        return Err(SpectralError::Empty);
    }
    let df = d as f64;
    let sign = match end {
        SpectrumEnd::Top => 1.0,
        SpectrumEnd::Bottom => -1.0,
    };
    let mut rng = Seed(0x5eed_5eed).rng();
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut v);
    normalize(&mut v);

    let mut av = vec![0.0; n];
    let mut best = PowerRun { value: f64::NAN, vector: v.clone(), iterations: 0, residual: f64::INFINITY, converged: false };
    for it in 1..=max_iter {
        matvec(g, &v, &mut av);
        let rq: f64 = dot(&v, &av);
        let residual = av.iter().zip(&v).map(|(a, x)| (a - rq * x).powi(2)).sum::<f64>().sqrt();
        best = PowerRun { value: rq, vector: v.clone(), iterations: it, residual, converged: residual <= tol * df };
        if best.converged {
            break;
        }
        // v <- (sign A + dI) v
        for (x, a) in v.iter_mut().zip(&av) {
            *x = sign * a + df * *x;
        }
        deflate(&mut v);
        if normalize(&mut v) == 0.0 {
            // v was an exact null vector of the shifted operator.
            best.converged = true;
            break;
        }
    }
    best.vector = {
        let mut x = best.vector;
        deflate(&mut x);
        normalize(&mut x);
        x
    };
    Ok(best)
}

/// `lambda = max(lambda_2, |lambda_n|)` from two [`power_iteration`] runs.
/// Non-convergence of either run yields [`SpectralError::NotConverged`]
/// carrying the estimate from the final iterates.
pub fn lambda_power<G: Adjacency + Sync + ?Sized>(g: &G, tol: f64, max_iter: usize) -> Result<SpectralReport, SpectralError> {
    let top = power_iteration(g, SpectrumEnd::Top, tol, max_iter)?;
    let bottom = power_iteration(g, SpectrumEnd::Bottom, tol, max_iter)?;
    let report = SpectralReport::new(
        g.node_count(),
        g.regular_degree(),
        top.value.max(bottom.value.abs()),
        SpectralMethod::PowerIteration,
        top.iterations + bottom.iterations,
        top.residual.max(bottom.residual),
    );
    if top.converged && bottom.converged {
        Ok(report)
    } else {
        Err(SpectralError::NotConverged { best: Box::new(report) })
    }
}

fn matvec<G: Adjacency + Sync + ?Sized>(g: &G, x: &[f64], out: &mut [f64]) {
    let row = |v: usize| g.neighbors(NodeId::new(v)).iter().map(|u| x[u.index()]).sum::<f64>();
    if x.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(|(v, o)| *o = row(v));
    } else {
        out.iter_mut().enumerate().for_each(|(v, o)| *o = row(v));
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}
