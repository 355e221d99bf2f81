//! Meshfree solver for Volterra's population growth model.
//!
//! The model is the nonlinear integro-differential equation
//! `kappa u' = u - u^2 - u int_0^t u(x) dx`, `u(0) = u0`, where the memory
//! integral is the accumulated toxicity. This crate solves it by indirect
//! collocation with compactly supported Wendland radial basis functions:
//! the derivative `u'` is expanded in scaled kernels, `u` and its integral
//! are recovered by exact antidifferentiation of the basis, and the
//! resulting algebraic system is solved by damped Newton iteration.
//!
//! Modules:
//! - [`kernel`]: Wendland profiles, the dimension-walking integral operator,
//!   scaled kernels with analytic single and double integrals.
//! - [`quadrature`]: Gauss–Legendre rules and the squared residual norm.
//! - [`model`]: scaling of the dimensional model plus two independent
//!   reference oracles (closed-form peak, RK4 trajectory).
//! - [`collocation`]: node generation, basis assembly, the nonlinear
//!   residual and its exact Jacobian, the Newton solve, interpolation.
//! - [`tuner`]: grid search with local refinement minimizing `||R||^2`
//!   over `r_omega` and `rho`.
//! - [`benchmarks`]: published reference values used for validation.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the type
//! aliases below pin the double-precision instantiations the benchmarks
//! assume.

pub mod benchmarks;
pub mod collocation;
pub mod kernel;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod scalar;
pub mod tuner;

pub use collocation::{
    build_interpolation_matrix, generate_nodes, jacobian, newton_solve, residual_vector,
    BasisSystem, CollocationConfig, CollocationError, Interpolator, PointEvaluation,
    SolutionExpansion,
};
pub use kernel::{KernelError, RadialProfile, ScaledKernel};
pub use model::{
    oracle_trajectory, umax_closed_form, DimensionalOrigin, ModelError, ModelParams,
    OracleTrajectory,
};
pub use quadrature::{
    default_rule_order, gauss_legendre_rule, legendre_eval, residual_norm_sq, QuadratureError,
    QuadratureRule,
};
pub use scalar::Real;
pub use tuner::{tune, TuneGrid, TuneRecord, TuneResult, TunerError};

/// Double-precision instantiations.
pub type Profile64 = RadialProfile<f64>;
pub type Kernel64 = ScaledKernel<f64>;
pub type Rule64 = QuadratureRule<f64>;
pub type Params64 = ModelParams<f64>;
pub type Trajectory64 = OracleTrajectory<f64>;
pub type Config64 = CollocationConfig<f64>;
pub type Basis64 = BasisSystem<f64>;
pub type Solution64 = SolutionExpansion<f64>;
pub type TuneResult64 = TuneResult<f64>;
