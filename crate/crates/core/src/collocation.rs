//! Indirect collocation for the scaled population model.
//!
//! The highest derivative is expanded in scaled Wendland kernels,
//! `u'(t) ~ sum_i xi_i phi_i(t)`, and `u` and `int_0^t u` are recovered by
//! analytic integration of the basis, so the initial condition holds by
//! construction:
//!
//! `u(t) = sum_i xi_i (I phi_i)(t) + u0`,
//! `int_0^t u = sum_i xi_i (I^2 phi_i)(t) + u0 t`.
//!
//! Collocating the equation residual at the nodes `t_j = L (j/N)^rho` gives a
//! quadratic algebraic system in `xi`, solved by damped Newton from zero.
//!
//! The problem domain `[0, L]` is mapped onto the kernels' local domain: the
//! basis kernels get an effective support radius `r_omega * L`, so `r_omega`
//! is a domain-relative width. The general interpolation machinery
//! ([`Interpolator`]) keeps the absolute convention.

use thiserror::Error;

use crate::kernel::{KernelError, RadialProfile, ScaledKernel};
use crate::linalg::{condition_one_norm, dot, DenseMatrix, LinalgError};
use crate::model::ModelParams;
use crate::quadrature::{self, QuadratureError, QuadratureRule};
use crate::scalar::Real;

/// Condition-number limit beyond which an interpolation system is rejected.
pub const CONDITION_LIMIT: f64 = 1e14;

/// Grid size used by peak location when none is given.
pub const DEFAULT_PEAK_GRID: usize = 2000;

#[derive(Debug, Error)]
pub enum CollocationError {
    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("basis size must be at least 2, got {n}")]
    BasisTooSmall { n: usize },
    #[error("coefficient vector has length {got}, basis has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("interpolation nodes must be distinct (nodes {i} and {j} coincide)")]
    DuplicateNodes { i: usize, j: usize },
    #[error("interpolation matrix is ill-conditioned (1-norm condition {cond:e} > {CONDITION_LIMIT:e})")]
    IllConditioned { cond: f64 },
    #[error("Jacobian is singular at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("evaluation time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },
    #[error("maximum lies on the domain boundary at t={t}; enlarge the domain length to capture the peak")]
    PeakAtBoundary { t: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Discretization controls for one collocation solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationConfig<F> {
    /// Basis size / collocation node count `N`.
    pub n: usize,
    /// Last node `L`; the domain is `[0, L]`.
    pub t_max: F,
    /// Node clustering exponent `rho` in `t_j = L (j/N)^rho`.
    pub rho: F,
    /// Domain-relative support radius; kernels use `r_omega * t_max`.
    pub r_omega: F,
    /// Wendland selection `(s, k)`.
    pub kernel: (u32, u32),
    /// Newton stop: `max_j |R(t_j)| <= newton_tol`.
    pub newton_tol: F,
    pub newton_max_iters: usize,
}

impl<F: Real> CollocationConfig<F> {
    /// Config with the default kernel `(3, 5)` and Newton settings
    /// (tolerance `1e-12`, 100 iterations).
    pub fn new(n: usize, t_max: F, rho: F, r_omega: F) -> Result<Self, CollocationError> {
        let config = Self {
            n,
            t_max,
            rho,
            r_omega,
            kernel: (3, 5),
            newton_tol: F::cast(1e-12),
            newton_max_iters: 100,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CollocationError> {
        if self.n < 2 {
            return Err(CollocationError::BasisTooSmall { n: self.n });
        }
        for (name, value) in [
            ("t_max", self.t_max),
            ("rho", self.rho),
            ("r_omega", self.r_omega),
            ("newton_tol", self.newton_tol),
        ] {
            if !(value > F::zero()) || !value.is_finite() {
                return Err(CollocationError::NonPositiveParameter {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Absolute support radius of the basis kernels.
    pub fn effective_support(&self) -> F {
        self.r_omega * self.t_max
    }

    /// Default domain length for a given `kappa`: 5 for `kappa >= 0.1`,
    /// else 2.
    pub fn default_t_max(kappa: F) -> F {
        if kappa >= F::cast(0.1) {
            F::cast(5.0)
        } else {
            F::cast(2.0)
        }
    }
}

/// Collocation nodes `t_j = L (j/N)^rho` for `j = 1..=N`; strictly
/// increasing with `t_N = L` exactly.
pub fn generate_nodes<F: Real>(n: usize, t_max: F, rho: F) -> Result<Vec<F>, CollocationError> {
    if n < 2 {
        return Err(CollocationError::BasisTooSmall { n });
    }
    for (name, value) in [("t_max", t_max), ("rho", rho)] {
        if !(value > F::zero()) || !value.is_finite() {
            return Err(CollocationError::NonPositiveParameter {
                name,
                value: value.as_f64(),
            });
        }
    }
    let nf = F::cast_usize(n);
    Ok((1..=n)
        .map(|j| t_max * (F::cast_usize(j) / nf).powf(rho))
        .collect())
}

/// Nodes plus the three N x N matrices `Phi`, `IPhi`, `I2Phi` at the nodes.
#[derive(Debug, Clone)]
pub struct BasisSystem<F> {
    nodes: Vec<F>,
    kernels: Vec<ScaledKernel<F>>,
    phi: DenseMatrix<F>,
    iphi: DenseMatrix<F>,
    i2phi: DenseMatrix<F>,
}

impl<F: Real> BasisSystem<F> {
    /// Builds the node set and evaluates `phi_i`, `int_0^t phi_i` and the
    /// double integral at every (node, center) pair; centers coincide with
    /// the collocation nodes.
    pub fn assemble(config: &CollocationConfig<F>) -> Result<Self, CollocationError> {
        config.validate()?;
        let (s, k) = config.kernel;
        let profile = RadialProfile::wendland(s, k)?;
        let nodes = generate_nodes(config.n, config.t_max, config.rho)?;
        let support = config.effective_support();
        let kernels: Vec<ScaledKernel<F>> = nodes
            .iter()
            .map(|&c| ScaledKernel::new(profile.clone(), c, support))
            .collect::<Result<_, _>>()?;
        let n = config.n;
        let mut phi = DenseMatrix::zeros(n, n);
        let mut iphi = DenseMatrix::zeros(n, n);
        let mut i2phi = DenseMatrix::zeros(n, n);
        for (j, &t) in nodes.iter().enumerate() {
            for (i, kernel) in kernels.iter().enumerate() {
                phi[(j, i)] = kernel.evaluate(t)?;
                iphi[(j, i)] = kernel.integrate(t)?;
                i2phi[(j, i)] = kernel.double_integrate(t)?;
            }
        }
        Ok(Self {
            nodes,
            kernels,
            phi,
            iphi,
            i2phi,
        })
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn kernels(&self) -> &[ScaledKernel<F>] {
        &self.kernels
    }

    pub fn phi(&self) -> &DenseMatrix<F> {
        &self.phi
    }

    pub fn iphi(&self) -> &DenseMatrix<F> {
        &self.iphi
    }

    pub fn i2phi(&self) -> &DenseMatrix<F> {
        &self.i2phi
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Equation residual at every collocation node:
/// `R_j = kappa (Phi_j . xi) - (u_j)(1 - u_j - c_j)` where
/// `u_j = IPhi_j . xi + u0` and `c_j = I2Phi_j . xi + u0 t_j`.
pub fn residual_vector<F: Real>(
    xi: &[F],
    basis: &BasisSystem<F>,
    params: &ModelParams<F>,
) -> Result<Vec<F>, CollocationError> {
    let n = basis.len();
    if xi.len() != n {
        return Err(CollocationError::LengthMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    let kappa = params.kappa();
    let u0 = params.u0();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let t = basis.nodes[j];
        let u = dot(basis.iphi.row(j), xi) + u0;
        let cumulative = dot(basis.i2phi.row(j), xi) + u0 * t;
        let u_prime = dot(basis.phi.row(j), xi);
        out.push(kappa * u_prime - u * (F::one() - u - cumulative));
    }
    Ok(out)
}

/// Exact Jacobian of [`residual_vector`] (the residual is quadratic in `xi`):
/// `dR_j/dxi_i = kappa Phi_ji - IPhi_ji g_j + u_j (IPhi_ji + I2Phi_ji)` with
/// `g_j = 1 - u_j - c_j`.
pub fn jacobian<F: Real>(
    xi: &[F],
    basis: &BasisSystem<F>,
    params: &ModelParams<F>,
) -> Result<DenseMatrix<F>, CollocationError> {
    let n = basis.len();
    if xi.len() != n {
        return Err(CollocationError::LengthMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    let kappa = params.kappa();
    let u0 = params.u0();
    let mut out = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let t = basis.nodes[j];
        let u = dot(basis.iphi.row(j), xi) + u0;
        let cumulative = dot(basis.i2phi.row(j), xi) + u0 * t;
        let g = F::one() - u - cumulative;
        for i in 0..n {
            out[(j, i)] = kappa * basis.phi[(j, i)] - basis.iphi[(j, i)] * g
                + u * (basis.iphi[(j, i)] + basis.i2phi[(j, i)]);
        }
    }
    Ok(out)
}

/// Values of the reconstructed solution at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEvaluation<F> {
    pub u: F,
    pub u_prime: F,
    /// `int_0^t u`, the accumulated toxicity.
    pub cumulative: F,
}

/// A solved coefficient vector with everything needed to evaluate the
/// solution anywhere.
#[derive(Debug, Clone)]
pub struct SolutionExpansion<F> {
    xi: Vec<F>,
    config: CollocationConfig<F>,
    basis: BasisSystem<F>,
    params: ModelParams<F>,
    converged: bool,
    newton_iterations: usize,
    final_residual_inf_norm: F,
}

impl<F: Real> SolutionExpansion<F> {
    pub fn xi(&self) -> &[F] {
        &self.xi
    }

    pub fn config(&self) -> &CollocationConfig<F> {
        &self.config
    }

    pub fn basis(&self) -> &BasisSystem<F> {
        &self.basis
    }

    pub fn params(&self) -> &ModelParams<F> {
        &self.params
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn newton_iterations(&self) -> usize {
        self.newton_iterations
    }

    pub fn final_residual_inf_norm(&self) -> F {
        self.final_residual_inf_norm
    }

    /// Fresh kernel evaluations (not the node matrices) of
    /// `u'`, `u`, and `int_0^t u` at `t`.
    ///
    /// `u(0) = u0` exactly: every basis integral vanishes at zero.
    pub fn evaluate(&self, t: F) -> Result<PointEvaluation<F>, CollocationError> {
        if !t.is_finite() {
            return Err(CollocationError::Kernel(KernelError::NonFiniteArgument {
                value: t.as_f64(),
            }));
        }
        if t < F::zero() {
            return Err(CollocationError::NegativeTime { t: t.as_f64() });
        }
        let mut u_prime = F::zero();
        let mut u = F::zero();
        let mut cumulative = F::zero();
        for (&xi, kernel) in self.xi.iter().zip(&self.basis.kernels) {
            u_prime += xi * kernel.evaluate(t)?;
            u += xi * kernel.integrate(t)?;
            cumulative += xi * kernel.double_integrate(t)?;
        }
        let u0 = self.params.u0();
        Ok(PointEvaluation {
            u: u + u0,
            u_prime,
            cumulative: cumulative + u0 * t,
        })
    }

    /// Equation residual `kappa u' - u (1 - u - int_0^t u)` at any `t`.
    pub fn residual_at(&self, t: F) -> Result<F, CollocationError> {
        let point = self.evaluate(t)?;
        Ok(self.params.kappa() * point.u_prime
            - point.u * (F::one() - point.u - point.cumulative))
    }

    /// Squared residual norm over the domain under the given rule.
    pub fn residual_norm_sq(&self, rule: &QuadratureRule<F>) -> Result<F, QuadratureError> {
        quadrature::residual_norm_sq(rule, |t| {
            self.residual_at(t).unwrap_or_else(|_| F::nan())
        })
    }

    /// Locates the maximum of `u` on `[0, L]`: scans a uniform grid of
    /// `grid_size` points, brackets the largest sample, then refines by
    /// golden-section search until the bracket is shorter than `1e-10`.
    ///
    /// A maximum attained at either end of the domain is an error: the peak
    /// was not captured and the domain should be enlarged.
    pub fn locate_max(&self, grid_size: usize) -> Result<(F, F), CollocationError> {
        let grid_size = grid_size.max(3);
        let t_max = self.config.t_max;
        let step = t_max / F::cast_usize(grid_size - 1);
        let mut best_idx = 0;
        let mut best = F::neg_infinity();
        for i in 0..grid_size {
            let t = if i == grid_size - 1 {
                t_max
            } else {
                F::cast_usize(i) * step
            };
            let u = self.evaluate(t)?.u;
            if u > best {
                best = u;
                best_idx = i;
            }
        }
        if best_idx == 0 {
            return Err(CollocationError::PeakAtBoundary { t: 0.0 });
        }
        if best_idx == grid_size - 1 {
            return Err(CollocationError::PeakAtBoundary {
                t: t_max.as_f64(),
            });
        }

        let mut lo = F::cast_usize(best_idx - 1) * step;
        let mut hi = (F::cast_usize(best_idx + 1) * step).min(t_max);
        let inv_phi = (F::cast(5.0).sqrt() - F::one()) / F::cast(2.0);
        let tol = F::cast(1e-10);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut fc = self.evaluate(c)?.u;
        let mut fd = self.evaluate(d)?.u;
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            if fc < fd {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = self.evaluate(d)?.u;
            } else {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = self.evaluate(c)?.u;
            }
        }
        let t_star = (lo + hi) / F::cast(2.0);
        Ok((t_star, self.evaluate(t_star)?.u))
    }
}

/// Damped Newton solve of the collocation system from `xi = 0`.
///
/// Each step solves `J delta = -R` with a partial-pivoting LU and backtracks
/// by halving (up to 30 times) until the residual 2-norm decreases. Stops
/// when `max_j |R_j| <= newton_tol` or the iteration cap is reached; the
/// returned expansion records convergence truthfully. A singular Jacobian is
/// an error, non-convergence is not.
pub fn newton_solve<F: Real>(
    config: &CollocationConfig<F>,
    params: &ModelParams<F>,
) -> Result<SolutionExpansion<F>, CollocationError> {
    let basis = BasisSystem::assemble(config)?;
    let n = config.n;
    let mut xi = vec![F::zero(); n];
    let mut iterations = 0;
    let mut converged = false;
    let mut residual = residual_vector(&xi, &basis, params)?;
    loop {
        let inf_norm = residual
            .iter()
            .fold(F::zero(), |acc, &r| acc.max(r.abs()));
        if inf_norm <= config.newton_tol {
            converged = true;
            break;
        }
        if iterations >= config.newton_max_iters {
            break;
        }
        let jac = jacobian(&xi, &basis, params)?;
        let lu = jac.lu().map_err(|err| match err {
            LinalgError::Singular { .. } => CollocationError::SingularJacobian {
                iteration: iterations,
            },
            other => CollocationError::Linalg(other),
        })?;
        let neg_residual: Vec<F> = residual.iter().map(|&r| -r).collect();
        let delta = lu.solve(&neg_residual)?;

        let norm_sq_old = dot(&residual, &residual);
        let mut lambda = F::one();
        let mut accepted = None;
        for _ in 0..=30 {
            let trial: Vec<F> = xi
                .iter()
                .zip(&delta)
                .map(|(&x, &d)| x + lambda * d)
                .collect();
            let trial_residual = residual_vector(&trial, &basis, params)?;
            let norm_sq_new = dot(&trial_residual, &trial_residual);
            if norm_sq_new.is_finite() && norm_sq_new < norm_sq_old {
                accepted = Some((trial, trial_residual));
                break;
            }
            lambda = lambda / F::cast(2.0);
        }
        match accepted {
            Some((trial, trial_residual)) => {
                xi = trial;
                residual = trial_residual;
                iterations += 1;
            }
            // No damping factor decreases the residual: stalled.
            None => break,
        }
    }
    let final_residual_inf_norm = residual
        .iter()
        .fold(F::zero(), |acc, &r| acc.max(r.abs()));
    Ok(SolutionExpansion {
        xi,
        config: *config,
        basis,
        params: *params,
        converged,
        newton_iterations: iterations,
        final_residual_inf_norm,
    })
}

/// Symmetric CSRBF interpolation system `A xi = y` with
/// `A[j][i] = phi(|x_j - x_i| / r_omega)` (absolute support radius).
///
/// Construction factors `A` by Cholesky — Wendland kernels are strictly
/// positive definite, so distinct nodes give an SPD matrix — and rejects
/// systems whose 1-norm condition exceeds [`CONDITION_LIMIT`].
#[derive(Debug, Clone)]
pub struct Interpolator<F> {
    nodes: Vec<F>,
    kernels: Vec<ScaledKernel<F>>,
    matrix: DenseMatrix<F>,
    factor: crate::linalg::CholeskyFactor<F>,
}

/// The interpolation matrix `A[j][i] = phi(|x_j - x_i| / r_omega)`.
pub fn build_interpolation_matrix<F: Real>(
    nodes: &[F],
    profile: &RadialProfile<F>,
    r_omega: F,
) -> Result<DenseMatrix<F>, CollocationError> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(CollocationError::DuplicateNodes { i, j });
            }
        }
    }
    let kernels: Vec<ScaledKernel<F>> = nodes
        .iter()
        .map(|&c| ScaledKernel::new(profile.clone(), c, r_omega))
        .collect::<Result<_, _>>()?;
    let n = nodes.len();
    let mut a = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            a[(j, i)] = kernels[i].evaluate(nodes[j])?;
        }
    }
    Ok(a)
}

impl<F: Real> Interpolator<F> {
    pub fn new(nodes: &[F], profile: &RadialProfile<F>, r_omega: F) -> Result<Self, CollocationError> {
        let matrix = build_interpolation_matrix(nodes, profile, r_omega)?;
        let factor = matrix.cholesky()?;
        let cond = condition_one_norm(&matrix, |b| factor.solve(b))?;
        if !(cond.as_f64() <= CONDITION_LIMIT) {
            return Err(CollocationError::IllConditioned { cond: cond.as_f64() });
        }
        let kernels = nodes
            .iter()
            .map(|&c| ScaledKernel::new(profile.clone(), c, r_omega))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            nodes: nodes.to_vec(),
            kernels,
            matrix,
            factor,
        })
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }

    /// Solves `A xi = values`.
    pub fn interpolate(&self, values: &[F]) -> Result<Vec<F>, CollocationError> {
        if values.len() != self.nodes.len() {
            return Err(CollocationError::LengthMismatch {
                expected: self.nodes.len(),
                got: values.len(),
            });
        }
        Ok(self.factor.solve(values)?)
    }

    /// Evaluates the interpolant `sum_i xi_i phi_i(x)`.
    pub fn evaluate(&self, xi: &[F], x: F) -> Result<F, CollocationError> {
        if xi.len() != self.nodes.len() {
            return Err(CollocationError::LengthMismatch {
                expected: self.nodes.len(),
                got: xi.len(),
            });
        }
        let mut acc = F::zero();
        for (&c, kernel) in xi.iter().zip(&self.kernels) {
            acc += c * kernel.evaluate(x)?;
        }
        Ok(acc)
    }
}
