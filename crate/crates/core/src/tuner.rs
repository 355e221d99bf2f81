//! Residual-norm minimization over the kernel width and node clustering.
//!
//! The accuracy of the collocation depends on the user-chosen `r_omega` and
//! `rho` (and the domain length). `||R||^2` is non-smooth in `r_omega`
//! because the support-overlap topology changes with it, so the tuner uses a
//! derivative-free coarse grid search followed by local grid refinement with
//! halved steps, rather than a gradient or simplex method.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::collocation::{newton_solve, CollocationConfig, CollocationError};
use crate::model::ModelParams;
use crate::quadrature::{default_rule_order, QuadratureRule};
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum TunerError {
    #[error("tuning grid is empty on the {axis} axis")]
    EmptyGrid { axis: &'static str },
    #[error("no candidate converged over {attempted} grid points (r_omega in {r_omega:?}, rho in {rho:?}, L in {t_max:?})")]
    AllCandidatesFailed {
        attempted: usize,
        r_omega: Vec<f64>,
        rho: Vec<f64>,
        t_max: Vec<f64>,
    },
    #[error(transparent)]
    Collocation(#[from] CollocationError),
}

/// Candidate axes and solver settings for one tuning run.
#[derive(Debug, Clone)]
pub struct TuneGrid<F> {
    pub r_omega: Vec<F>,
    pub rho: Vec<F>,
    pub t_max: Vec<F>,
    pub kernel: (u32, u32),
    pub newton_tol: F,
    pub newton_max_iters: usize,
    /// Quadrature order for the norm; `max(50, 2N)` when `None`.
    pub quad_order: Option<usize>,
}

impl<F: Real> TuneGrid<F> {
    /// The default coarse grid: `r_omega in {0.5, 1, 1.5, 2, 3}`,
    /// `rho in 1.0..=2.0` step 0.05, and the domain-length sweep set.
    pub fn default_grid() -> Self {
        Self {
            r_omega: [0.5, 1.0, 1.5, 2.0, 3.0].iter().map(|&v| F::cast(v)).collect(),
            rho: (0..=20).map(|i| F::cast(1.0 + 0.05 * i as f64)).collect(),
            t_max: crate::benchmarks::T_MAX_SWEEP.iter().map(|&v| F::cast(v)).collect(),
            kernel: (3, 5),
            newton_tol: F::cast(1e-12),
            newton_max_iters: 100,
            quad_order: None,
        }
    }
}

/// One evaluated candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneRecord<F> {
    pub r_omega: F,
    pub rho: F,
    pub t_max: F,
    /// `None` when the solve or the norm evaluation failed outright.
    pub norm_sq: Option<F>,
    pub converged: bool,
}

/// Best configuration found, with the full evaluation trace.
#[derive(Debug, Clone)]
pub struct TuneResult<F> {
    pub best_config: CollocationConfig<F>,
    pub best_norm_sq: F,
    pub evaluations: Vec<TuneRecord<F>>,
    /// Wall-clock seconds spent tuning.
    pub wall_time: f64,
}

/// Minimizes `||R||^2` over the grid, then runs `refine_rounds` of local
/// refinement around the incumbent with the step halved each round (the
/// domain length stays at the incumbent's value during refinement).
///
/// Candidates are evaluated independently (in parallel) and merged in
/// canonical axis order; ties break lexicographically by
/// `(norm_sq, r_omega, rho, t_max)`, so the result is deterministic.
/// Non-converged solves are recorded but never become the incumbent.
pub fn tune<F: Real>(
    params: &ModelParams<F>,
    n: usize,
    grid: &TuneGrid<F>,
    refine_rounds: usize,
) -> Result<TuneResult<F>, TunerError> {
    let started = Instant::now();
    for (axis, len) in [
        ("r_omega", grid.r_omega.len()),
        ("rho", grid.rho.len()),
        ("t_max", grid.t_max.len()),
    ] {
        if len == 0 {
            return Err(TunerError::EmptyGrid { axis });
        }
    }

    let mut candidates: Vec<(F, F, F)> = Vec::new();
    for &r_omega in &grid.r_omega {
        for &rho in &grid.rho {
            for &t_max in &grid.t_max {
                candidates.push((r_omega, rho, t_max));
            }
        }
    }

    let mut evaluations = evaluate_candidates(params, n, grid, &candidates);
    let mut incumbent = best_of(&evaluations, None);

    let mut step_r = min_positive_gap(&grid.r_omega).unwrap_or_else(|| F::cast(0.5));
    let mut step_rho = min_positive_gap(&grid.rho).unwrap_or_else(|| F::cast(0.05));
    for _ in 0..refine_rounds {
        let Some(center) = incumbent else { break };
        step_r = step_r / F::cast(2.0);
        step_rho = step_rho / F::cast(2.0);
        let offsets = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let mut local: Vec<(F, F, F)> = Vec::new();
        for &i in &offsets {
            for &j in &offsets {
                let r_omega = center.0 + F::cast(i) * step_r;
                let rho = center.1 + F::cast(j) * step_rho;
                if r_omega > F::zero() && rho > F::zero() && !local.contains(&(r_omega, rho, center.2)) {
                    local.push((r_omega, rho, center.2));
                }
            }
        }
        let round = evaluate_candidates(params, n, grid, &local);
        incumbent = best_of(&round, incumbent);
        evaluations.extend(round);
    }

    match incumbent {
        Some((r_omega, rho, t_max, norm_sq)) => {
            let mut best_config = CollocationConfig::new(n, t_max, rho, r_omega)
                .map_err(TunerError::Collocation)?;
            best_config.kernel = grid.kernel;
            best_config.newton_tol = grid.newton_tol;
            best_config.newton_max_iters = grid.newton_max_iters;
            Ok(TuneResult {
                best_config,
                best_norm_sq: norm_sq,
                evaluations,
                wall_time: started.elapsed().as_secs_f64(),
            })
        }
        None => Err(TunerError::AllCandidatesFailed {
            attempted: evaluations.len(),
            r_omega: grid.r_omega.iter().map(|v| v.as_f64()).collect(),
            rho: grid.rho.iter().map(|v| v.as_f64()).collect(),
            t_max: grid.t_max.iter().map(|v| v.as_f64()).collect(),
        }),
    }
}

type Incumbent<F> = Option<(F, F, F, F)>;

fn evaluate_candidates<F: Real>(
    params: &ModelParams<F>,
    n: usize,
    grid: &TuneGrid<F>,
    candidates: &[(F, F, F)],
) -> Vec<TuneRecord<F>> {
    candidates
        .par_iter()
        .map(|&(r_omega, rho, t_max)| {
            let config = match CollocationConfig::new(n, t_max, rho, r_omega) {
                Ok(mut config) => {
                    config.kernel = grid.kernel;
                    config.newton_tol = grid.newton_tol;
                    config.newton_max_iters = grid.newton_max_iters;
                    config
                }
                Err(_) => {
                    return TuneRecord {
                        r_omega,
                        rho,
                        t_max,
                        norm_sq: None,
                        converged: false,
                    }
                }
            };
            let (norm_sq, converged) = match newton_solve(&config, params) {
                Ok(solution) => {
                    let order = grid.quad_order.unwrap_or_else(|| default_rule_order(n));
                    let norm = QuadratureRule::gauss_legendre(order, t_max)
                        .ok()
                        .and_then(|rule| solution.residual_norm_sq(&rule).ok());
                    (norm, solution.converged())
                }
                Err(_) => (None, false),
            };
            TuneRecord {
                r_omega,
                rho,
                t_max,
                norm_sq,
                converged,
            }
        })
        .collect()
}

/// Minimum over converged records, lexicographic tie-break on
/// `(norm_sq, r_omega, rho, t_max)`.
fn best_of<F: Real>(records: &[TuneRecord<F>], current: Incumbent<F>) -> Incumbent<F> {
    let mut best = current.map(|(r, rho, l, norm)| (norm, r, rho, l));
    for record in records {
        let Some(norm) = record.norm_sq else { continue };
        if !record.converged || !norm.is_finite() {
            continue;
        }
        let key = (norm, record.r_omega, record.rho, record.t_max);
        if best.is_none() || lex_less(&key, best.as_ref().unwrap()) {
            best = Some(key);
        }
    }
    best.map(|(norm, r, rho, l)| (r, rho, l, norm))
}

fn lex_less<F: Real>(a: &(F, F, F, F), b: &(F, F, F, F)) -> bool {
    for (x, y) in [(a.0, b.0), (a.1, b.1), (a.2, b.2), (a.3, b.3)] {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn min_positive_gap<F: Real>(values: &[F]) -> Option<F> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted
        .windows(2)
        .map(|p| p[1] - p[0])
        .filter(|&g| g > F::zero())
        .fold(None, |acc: Option<F>, g| match acc {
            Some(best) if best <= g => Some(best),
            _ => Some(g),
        })
}
