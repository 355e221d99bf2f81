//! The scaled population growth model and its reference oracles.
//!
//! Dimensional model: `dp/dt = a p - b p^2 - c p int_0^t p(x) dx` with birth
//! rate `a`, crowding `b`, toxicity `c`. Scaling `t -> tc/b`, `u -> pb/a`
//! gives the nondimensional form
//!
//! `kappa u' = u - u^2 - u int_0^t u(x) dx`, `u(0) = u0`, `kappa = c/(ab)`.
//!
//! Two independent references validate the collocation solver: a closed-form
//! peak value from the phase-plane reduction, and a fixed-step RK4 trajectory
//! of the equivalent ODE system `{kappa u' = u(1 - u - w), w' = u}` that
//! eliminates the memory integral through the auxiliary state `w`.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("initial value u0 must be nonnegative and finite, got {value}")]
    InvalidInitial { value: f64 },
    #[error("closed-form peak needs 0 < u0 < 1 + kappa, got kappa={kappa}, u0={u0}")]
    PeakOutOfDomain { kappa: f64, u0: f64 },
    #[error("trajectory state became non-finite at step {step}")]
    NonFiniteState { step: usize },
    #[error("horizon and step must be positive and finite, got T={horizon}, h={step}")]
    InvalidGrid { horizon: f64, step: f64 },
}

/// Dimensional coefficients the nondimensional parameters came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalOrigin<F> {
    /// Birth rate coefficient `a` (1/time).
    pub birth_rate: F,
    /// Crowding coefficient `b`.
    pub crowding: F,
    /// Toxicity coefficient `c`.
    pub toxicity: F,
    /// Initial population `p0`.
    pub initial_population: F,
}

/// Nondimensional problem parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<F> {
    kappa: F,
    u0: F,
    origin: Option<DimensionalOrigin<F>>,
}

impl<F: Real> ModelParams<F> {
    /// Directly specified nondimensional parameters.
    pub fn new(kappa: F, u0: F) -> Result<Self, ModelError> {
        if !(kappa > F::zero()) || !kappa.is_finite() {
            return Err(ModelError::NonPositiveParameter {
                name: "kappa",
                value: kappa.as_f64(),
            });
        }
        if !(u0 >= F::zero()) || !u0.is_finite() {
            return Err(ModelError::InvalidInitial { value: u0.as_f64() });
        }
        Ok(Self {
            kappa,
            u0,
            origin: None,
        })
    }

    /// Scales the dimensional model: `kappa = c/(ab)`, `u0 = p0 b / a`.
    pub fn from_dimensional(a: F, b: F, c: F, p0: F) -> Result<Self, ModelError> {
        for (name, value) in [("a", a), ("b", b), ("c", c)] {
            if !(value > F::zero()) || !value.is_finite() {
                return Err(ModelError::NonPositiveParameter {
                    name: match name {
                        "a" => "birth rate a",
                        "b" => "crowding b",
                        _ => "toxicity c",
                    },
                    value: value.as_f64(),
                });
            }
        }
        if !(p0 >= F::zero()) || !p0.is_finite() {
            return Err(ModelError::InvalidInitial { value: p0.as_f64() });
        }
        let mut params = Self::new(c / (a * b), p0 * b / a)?;
        params.origin = Some(DimensionalOrigin {
            birth_rate: a,
            crowding: b,
            toxicity: c,
            initial_population: p0,
        });
        Ok(params)
    }

    pub fn kappa(&self) -> F {
        self.kappa
    }

    pub fn u0(&self) -> F {
        self.u0
    }

    pub fn origin(&self) -> Option<&DimensionalOrigin<F>> {
        self.origin.as_ref()
    }
}

/// Closed-form peak of the scaled population.
///
/// With `w = int_0^t u`, the model reduces to the linear phase-plane
/// equation `kappa du/dw = 1 - u - w`, whose solution
/// `u(w) = 1 + kappa - w - (1 + kappa - u0) exp(-w/kappa)` peaks at
/// `u_max = 1 + kappa ln(kappa / (1 + kappa - u0))`.
///
/// Requires `0 < u0 < 1 + kappa` so the logarithm argument lies in `(0, 1]`.
pub fn umax_closed_form<F: Real>(params: &ModelParams<F>) -> Result<F, ModelError> {
    let kappa = params.kappa();
    let u0 = params.u0();
    if !(u0 > F::zero()) || !(u0 < F::one() + kappa) {
        return Err(ModelError::PeakOutOfDomain {
            kappa: kappa.as_f64(),
            u0: u0.as_f64(),
        });
    }
    Ok(F::one() + kappa * (kappa / (F::one() + kappa - u0)).ln())
}

/// Fixed-step RK4 trajectory of the scaled model.
#[derive(Debug, Clone)]
pub struct OracleTrajectory<F> {
    times: Vec<F>,
    u_values: Vec<F>,
    w_values: Vec<F>,
    peak_time: F,
    peak_value: F,
}

impl<F: Real> OracleTrajectory<F> {
    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn u_values(&self) -> &[F] {
        &self.u_values
    }

    /// Accumulated toxicity integral `w(t) = int_0^t u`.
    pub fn w_values(&self) -> &[F] {
        &self.w_values
    }

    pub fn peak_time(&self) -> F {
        self.peak_time
    }

    pub fn peak_value(&self) -> F {
        self.peak_value
    }

    /// Linear interpolation of `u` at `t`, clamped to the sampled range.
    pub fn interpolate_u(&self, t: F) -> F {
        let times = &self.times;
        if t <= times[0] {
            return self.u_values[0];
        }
        if t >= *times.last().unwrap() {
            return *self.u_values.last().unwrap();
        }
        // Uniform grid: index directly.
        let h = times[1] - times[0];
        let idx = ((t - times[0]) / h).to_usize().unwrap_or(0).min(times.len() - 2);
        let frac = (t - times[idx]) / h;
        self.u_values[idx] + frac * (self.u_values[idx + 1] - self.u_values[idx])
    }
}

/// Integrates `{kappa u' = u(1 - u - w), w' = u}` from `(u0, 0)` with
/// classical fourth-order Runge–Kutta at fixed step `step` up to `horizon`.
///
/// The peak is refined by fitting a quadratic through the three samples
/// bracketing the sampled maximum and taking its vertex.
pub fn oracle_trajectory<F: Real>(
    params: &ModelParams<F>,
    horizon: F,
    step: F,
) -> Result<OracleTrajectory<F>, ModelError> {
    if !(horizon > F::zero()) || !(step > F::zero()) || !horizon.is_finite() || !step.is_finite() {
        return Err(ModelError::InvalidGrid {
            horizon: horizon.as_f64(),
            step: step.as_f64(),
        });
    }
    let kappa = params.kappa();
    let steps = (horizon / step).round().to_usize().unwrap_or(0).max(1);
    let h = horizon / F::cast_usize(steps);
    let half = F::cast(0.5);
    let sixth = F::one() / F::cast(6.0);
    let two = F::cast(2.0);

    let rhs = |u: F, w: F| -> (F, F) { (u * (F::one() - u - w) / kappa, u) };

    let mut times = Vec::with_capacity(steps + 1);
    let mut u_values = Vec::with_capacity(steps + 1);
    let mut w_values = Vec::with_capacity(steps + 1);
    let mut u = params.u0();
    let mut w = F::zero();
    times.push(F::zero());
    u_values.push(u);
    w_values.push(w);
    for i in 0..steps {
        let (k1u, k1w) = rhs(u, w);
        let (k2u, k2w) = rhs(u + half * h * k1u, w + half * h * k1w);
        let (k3u, k3w) = rhs(u + half * h * k2u, w + half * h * k2w);
        let (k4u, k4w) = rhs(u + h * k3u, w + h * k3w);
        u = u + h * sixth * (k1u + two * k2u + two * k3u + k4u);
        w = w + h * sixth * (k1w + two * k2w + two * k3w + k4w);
        if !u.is_finite() || !w.is_finite() {
            return Err(ModelError::NonFiniteState { step: i + 1 });
        }
        times.push(F::cast_usize(i + 1) * h);
        u_values.push(u);
        w_values.push(w);
    }

    let mut peak_idx = 0;
    for (i, &v) in u_values.iter().enumerate() {
        if v > u_values[peak_idx] {
            peak_idx = i;
        }
    }
    let (peak_time, peak_value) = if peak_idx == 0 || peak_idx == u_values.len() - 1 {
        (times[peak_idx], u_values[peak_idx])
    } else {
        // Quadratic vertex through the three bracketing samples.
        let a = u_values[peak_idx - 1];
        let b = u_values[peak_idx];
        let c = u_values[peak_idx + 1];
        let denom = a - two * b + c;
        if denom == F::zero() {
            (times[peak_idx], b)
        } else {
            let offset = h * (a - c) / (two * denom);
            let value = b - (a - c) * (a - c) / (F::cast(8.0) * denom);
            (times[peak_idx] + offset, value)
        }
    };

    Ok(OracleTrajectory {
        times,
        u_values,
        w_values,
        peak_time,
        peak_value,
    })
}
