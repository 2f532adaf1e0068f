//! Sweep driver: eigenvalue trajectories along a decreasing `eps` list,
//! distances to a limit spectrum, and fitted log-log rates.

use super::build::{build_adhering_case, build_fading_case, AdheringConfig, FadingConfig};
use super::eigen::{eigenpairs, EigenOptions};
use super::graph::DiscreteManifold;
use super::resolvent::{jmap_onto_model, resolvent_distance};
use super::SpectraError;
use crate::handles::fit_loglog_slope;
use serde::Serialize;

/// One point of a sweep: the perturbed model and its limit on a matching
/// grid.
pub struct SweepCase {
    pub eps: f64,
    pub perturbed: DiscreteManifold,
    pub limit: DiscreteManifold,
}

/// Fitted convergence rate of one tracked eigenvalue.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FittedRate {
    pub eigenvalue_index: usize,
    pub slope: f64,
    pub residual_rms: f64,
}

/// Eigenvalue trajectories of an `eps`-sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub eps_values: Vec<f64>,
    /// Lowest-`k` eigenvalues per `eps`, ascending.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Lowest-`k` eigenvalues of the limit model.
    pub limit_eigenvalues: Vec<f64>,
    /// Per-`eps` distance `(sum_{j>=1} |lambda_j(eps) - lambda_j(limit)|^2)^{1/2}`
    /// (index 0, the kernel, is skipped).
    pub distances: Vec<f64>,
    /// Per-`eps` resolvent distances, when probed.
    pub resolvent_distances: Option<Vec<f64>>,
    /// Log-log slope per tracked eigenvalue over the final decade.
    pub fitted_rates: Vec<FittedRate>,
}

/// Distance between two ascending spectra: the Euclidean norm of the
/// index-wise differences, skipping the kernel (index 0).  The aggregate is
/// robust against branch crossings that make single-index differences
/// non-monotone along a sweep.
pub fn spectral_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .skip(1)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn fit_rates(eps: &[f64], eigs: &[Vec<f64>], limit: &[f64], k: usize) -> Vec<FittedRate> {
    let eps_min = eps.last().copied().unwrap_or(1.0);
    let window: Vec<usize> =
        (0..eps.len()).filter(|&i| eps[i] <= 10.0 * eps_min * (1.0 + 1e-12)).collect();
    let mut rates = Vec::new();
    for j in 1..k {
        let xs: Vec<f64> = window.iter().map(|&i| eps[i]).collect();
        let ys: Vec<f64> = window
            .iter()
            .map(|&i| (eigs[i][j] - limit[j]).abs().max(1e-14))
            .collect();
        if xs.len() >= 2 {
            let (slope, residual_rms) = fit_loglog_slope(&xs, &ys);
            rates.push(FittedRate { eigenvalue_index: j, slope, residual_rms });
        }
    }
    rates
}

/// Runs a sweep from a case builder.  The `eps` list must be strictly
/// decreasing; every case supplies the limit model on its own grid so that
/// discretization error cancels in the distances.
pub fn sweep<F>(mut builder: F, eps_list: &[f64], k: usize) -> Result<ConvergenceStudy, SpectraError>
where
    F: FnMut(f64) -> Result<SweepCase, SpectraError>,
{
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SpectraError::BadEpsList);
    }
    let opts = EigenOptions::default();
    let mut eigenvalues = Vec::new();
    let mut limit_eigenvalues = Vec::new();
    let mut distances = Vec::new();
    for &eps in eps_list {
        let case = builder(eps)?;
        let (vals, _) = eigenpairs(&case.perturbed, k, &opts)?;
        let (lim, _) = eigenpairs(&case.limit, k, &opts)?;
        distances.push(spectral_distance(&vals, &lim));
        eigenvalues.push(vals);
        limit_eigenvalues = lim;
    }
    let fitted_rates = fit_rates(eps_list, &eigenvalues, &limit_eigenvalues, k);
    Ok(ConvergenceStudy {
        eps_values: eps_list.to_vec(),
        eigenvalues,
        limit_eigenvalues,
        distances,
        resolvent_distances: None,
        fitted_rates,
    })
}

/// Outcome of the adhering two-tori sweep: trajectories against the
/// identified limit plus the diverging comparison against the disjoint
/// base pair.
#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub study: ConvergenceStudy,
    /// Distances of the same eigenvalue vectors to the base-pair spectrum.
    pub base_pair_distances: Vec<f64>,
    /// Handle count per side (per `eps`).
    pub per_side: Vec<u32>,
    /// Vertex count of the largest assembled model.
    pub max_vertices: usize,
}

/// Adhering two-tori sweep; optionally probes the resolvent distance to the
/// identified limit at every `eps`.
pub fn adhering_sweep(
    cfg: &AdheringConfig,
    eps_list: &[f64],
    with_resolvent: bool,
) -> Result<SweepOutcome, SpectraError> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SpectraError::BadEpsList);
    }
    let opts = EigenOptions::default();
    let k = cfg.k;
    let mut eigenvalues = Vec::new();
    let mut distances = Vec::new();
    let mut base_pair_distances = Vec::new();
    let mut resolvent = Vec::new();
    let mut per_side = Vec::new();
    let mut max_vertices = 0;
    let mut limit_eigenvalues = Vec::new();
    for &eps in eps_list {
        let case = build_adhering_case(cfg, eps)?;
        debug_assert_eq!(case.eps, eps);
        max_vertices = max_vertices.max(case.model.manifold.len());
        per_side.push(case.per_side);
        let (vals, _) = eigenpairs(&case.model.manifold, k, &opts)?;
        let (lim, _) = eigenpairs(&case.identified.manifold, k, &opts)?;
        let (pair, _) = eigenpairs(&case.base_pair.manifold, k, &opts)?;
        distances.push(spectral_distance(&vals, &lim));
        base_pair_distances.push(spectral_distance(&vals, &pair));
        if with_resolvent {
            let j = jmap_onto_model(&case.model.manifold, &case.identified, cfg.n)?;
            resolvent.push(resolvent_distance(
                &case.model.manifold,
                &case.identified.manifold,
                &j,
                1.0,
            )?);
        }
        eigenvalues.push(vals);
        limit_eigenvalues = lim;
    }
    let fitted_rates = fit_rates(eps_list, &eigenvalues, &limit_eigenvalues, k);
    Ok(SweepOutcome {
        study: ConvergenceStudy {
            eps_values: eps_list.to_vec(),
            eigenvalues,
            limit_eigenvalues,
            distances,
            resolvent_distances: with_resolvent.then_some(resolvent),
            fitted_rates,
        },
        base_pair_distances,
        per_side,
        max_vertices,
    })
}

/// Fading two-tori sweep against the disjoint base pair; optionally probes
/// the resolvent distance.
pub fn fading_sweep(
    cfg: &FadingConfig,
    eps_list: &[f64],
    with_resolvent: bool,
) -> Result<SweepOutcome, SpectraError> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SpectraError::BadEpsList);
    }
    let opts = EigenOptions::default();
    let k = cfg.k;
    let mut eigenvalues = Vec::new();
    let mut distances = Vec::new();
    let mut resolvent = Vec::new();
    let mut max_vertices = 0;
    let mut limit_eigenvalues = Vec::new();
    for &eps in eps_list {
        let case = build_fading_case(cfg, eps)?;
        debug_assert_eq!(case.eps, eps);
        max_vertices = max_vertices.max(case.model.manifold.len());
        let (vals, _) = eigenpairs(&case.model.manifold, k, &opts)?;
        let (lim, _) = eigenpairs(&case.base_pair.manifold, k, &opts)?;
        distances.push(spectral_distance(&vals, &lim));
        if with_resolvent {
            let j = jmap_onto_model(&case.model.manifold, &case.base_pair, cfg.n)?;
            resolvent.push(resolvent_distance(
                &case.model.manifold,
                &case.base_pair.manifold,
                &j,
                1.0,
            )?);
        }
        eigenvalues.push(vals);
        limit_eigenvalues = lim;
    }
    let fitted_rates = fit_rates(eps_list, &eigenvalues, &limit_eigenvalues, k);
    Ok(SweepOutcome {
        study: ConvergenceStudy {
            eps_values: eps_list.to_vec(),
            eigenvalues,
            limit_eigenvalues,
            distances,
            resolvent_distances: with_resolvent.then_some(resolvent),
            fitted_rates,
        },
        base_pair_distances: Vec::new(),
        per_side: Vec::new(),
        max_vertices,
    })
}
