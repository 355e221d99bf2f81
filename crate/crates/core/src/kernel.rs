//! Wendland compactly supported radial basis functions.
//!
//! A [`RadialProfile`] is the univariate polynomial piece of a Wendland
//! function: positive on `[0, 1)`, identically zero for `r >= 1`. Profiles
//! are built from integer coefficient tables expanded exactly in `i64`
//! arithmetic, so construction round-off never exceeds one conversion ulp
//! per coefficient.
//!
//! A [`ScaledKernel`] places a profile at a center with a support radius,
//! `phi_i(t) = phi(|t - t_i| / r_omega)`, and carries closed-form
//! antiderivatives so that single and double integrals from zero are exact
//! piecewise-polynomial evaluations rather than numerical quadrature.

use thiserror::Error;

use crate::scalar::Real;

/// Errors from kernel construction and evaluation.
#[derive(Debug, Error)]
pub enum KernelError {
    /// No profile is defined for this `(s, k)` pair.
    #[error("unsupported kernel: no Wendland profile for s={s}, k={k}")]
    UnsupportedKernel { s: u32, k: u32 },
    /// Evaluation point or parameter was NaN/infinite.
    #[error("non-finite kernel argument {value}")]
    NonFiniteArgument { value: f64 },
    /// Integration upper bound below zero.
    #[error("integration bound must be nonnegative, got {t}")]
    NegativeBound { t: f64 },
    /// Support radius must be strictly positive and finite.
    #[error("support radius must be positive and finite, got {radius}")]
    InvalidRadius { radius: f64 },
}

/// Compactly supported univariate polynomial profile on `[0, 1]`.
///
/// Stores ascending monomial coefficients of the polynomial piece; the
/// profile evaluates to exactly zero for `r >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<F> {
    coefficients: Vec<F>,
}

impl<F: Real> RadialProfile<F> {
    /// Profile from ascending monomial coefficients.
    pub fn new(mut coefficients: Vec<F>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&F::zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(F::zero());
        }
        Self { coefficients }
    }

    /// Wendland profile `phi_{s,k}` for space dimension `s` and smoothness
    /// index `k` (the function is `C^{2k}`).
    ///
    /// For `s = 3` the published integer-coefficient polynomials are used
    /// for `k = 0..=5`; for other `s >= 1` the closed forms with
    /// `l = floor(s/2) + k + 1` cover `k <= 3`. The normalization constant
    /// is fixed to one, so e.g. `phi_{3,5}(0) = 9`.
    pub fn wendland(s: u32, k: u32) -> Result<Self, KernelError> {
        let l = (s / 2) as i64 + k as i64 + 1;
        let (exponent, factor): (u32, Vec<i64>) = match (s, k) {
            (0, _) => return Err(KernelError::UnsupportedKernel { s, k }),
            (3, 0) => (2, vec![1]),
            (3, 1) => (4, vec![1, 4]),
            (3, 2) => (6, vec![3, 18, 35]),
            (3, 3) => (8, vec![1, 8, 25, 32]),
            (3, 4) => (10, vec![5, 50, 210, 450, 429]),
            (3, 5) => (12, vec![9, 108, 566, 1644, 2697, 2048]),
            (_, 0) => (l as u32, vec![1]),
            (_, 1) => (l as u32 + 1, vec![1, l + 1]),
            (_, 2) => (l as u32 + 2, vec![3, 3 * l + 6, l * l + 4 * l + 3]),
            (_, 3) => (
                l as u32 + 3,
                vec![
                    15,
                    15 * l + 45,
                    6 * l * l + 36 * l + 45,
                    l * l * l + 9 * l * l + 23 * l + 15,
                ],
            ),
            _ => return Err(KernelError::UnsupportedKernel { s, k }),
        };
        let expanded = expand_truncated_power(exponent, &factor);
        Ok(Self::new(
            expanded
                .into_iter()
                .map(|c| F::from_i64(c).expect("integer coefficient fits scalar"))
                .collect(),
        ))
    }

    /// Ascending monomial coefficients of the polynomial piece.
    pub fn coefficients(&self) -> &[F] {
        &self.coefficients
    }

    /// Degree of the polynomial piece.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Evaluates the profile at radius `r >= 0`; zero for `r >= 1`.
    ///
    /// Uses a compensated Horner scheme: the expanded monomial coefficients
    /// are large and cancel near the high-multiplicity root at `r = 1`, and
    /// plain evaluation there would drown the tiny true values (and their
    /// sign) in rounding noise.
    pub fn evaluate(&self, r: F) -> F {
        if r >= F::one() {
            return F::zero();
        }
        horner_compensated(&self.coefficients, r)
    }

    /// Derivative of the polynomial piece (valid on `[0, 1)`).
    pub fn derivative(&self) -> RadialProfile<F> {
        if self.coefficients.len() == 1 {
            return RadialProfile::new(vec![F::zero()]);
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(power, &c)| c * F::cast_usize(power))
            .collect();
        RadialProfile::new(coeffs)
    }

    /// The dimension-walking operator `(I f)(r) = integral_r^1 t f(t) dt`.
    ///
    /// Computed by exact polynomial antidifferentiation: with
    /// `f(t) = sum_j a_j t^j`, the result is
    /// `sum_j a_j/(j+2) - sum_j a_j/(j+2) r^{j+2}`. Applying `I` to the
    /// truncated power `(1-r)^{l}` with `l = floor(s/2)+k+1` reproduces the
    /// Wendland profiles up to a positive constant.
    pub fn integral_operator(&self) -> RadialProfile<F> {
        let mut coeffs = vec![F::zero(); self.coefficients.len() + 2];
        let mut constant = F::zero();
        for (j, &a) in self.coefficients.iter().enumerate() {
            let scaled = a / F::cast_usize(j + 2);
            constant += scaled;
            coeffs[j + 2] = -scaled;
        }
        coeffs[0] = constant;
        RadialProfile::new(coeffs)
    }
}

/// Expands `(1 - r)^exponent * q(r)` into ascending integer coefficients.
fn expand_truncated_power(exponent: u32, factor: &[i64]) -> Vec<i64> {
    let e = exponent as usize;
    // Pascal row for (1 + x)^e, then alternate signs for (1 - r)^e.
    let mut binomial = vec![0i64; e + 1];
    binomial[0] = 1;
    for i in 1..=e {
        for j in (1..=i).rev() {
            binomial[j] += binomial[j - 1];
        }
    }
    let mut out = vec![0i64; e + factor.len()];
    for (j, &b) in binomial.iter().enumerate() {
        let signed = if j % 2 == 0 { b } else { -b };
        for (i, &q) in factor.iter().enumerate() {
            out[i + j] += signed * q;
        }
    }
    out
}

/// Horner evaluation with error-free transformations: the result is as
/// accurate as if computed in twice the working precision and then rounded.
fn horner_compensated<F: Real>(coefficients: &[F], x: F) -> F {
    let (&last, rest) = coefficients.split_last().expect("profile is never empty");
    let mut acc = last;
    let mut compensation = F::zero();
    for &c in rest.iter().rev() {
        let (product, product_err) = two_prod(acc, x);
        let (sum, sum_err) = two_sum(product, c);
        acc = sum;
        compensation = compensation * x + (product_err + sum_err);
    }
    acc + compensation
}

/// Error-free sum: `a + b = s + e` exactly.
fn two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

/// Error-free product via Veltkamp splitting: `a * b = p + e` exactly.
fn two_prod<F: Real>(a: F, b: F) -> (F, F) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = al * bl - (((p - ah * bh) - al * bh) - ah * bl);
    (p, e)
}

fn split<F: Real>(a: F) -> (F, F) {
    let c = F::veltkamp_splitter() * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// A radial profile placed at a center with a support radius:
/// `K(t) = phi(|t - center| / support_radius)`.
///
/// Caches the profile's zeroth- and first-moment antiderivatives so that
/// `integrate` and `double_integrate` are closed-form.
#[derive(Debug, Clone)]
pub struct ScaledKernel<F> {
    profile: RadialProfile<F>,
    center: F,
    support_radius: F,
    /// Ascending coefficients of `P(u) = int_0^u phi`, without the constant term.
    zeroth_moment: Vec<F>,
    /// Ascending coefficients of `Q(u) = int_0^u v phi(v) dv`, without constant term.
    first_moment: Vec<F>,
    /// `P(1)`: half the unit-scale mass of the kernel.
    mass: F,
    /// `Q(1)`.
    moment: F,
}

impl<F: Real> ScaledKernel<F> {
    /// Places `profile` at `center` with support `[center - r, center + r]`.
    pub fn new(profile: RadialProfile<F>, center: F, support_radius: F) -> Result<Self, KernelError> {
        if !(support_radius > F::zero()) || !support_radius.is_finite() {
            return Err(KernelError::InvalidRadius {
                radius: support_radius.as_f64(),
            });
        }
        if !center.is_finite() {
            return Err(KernelError::NonFiniteArgument {
                value: center.as_f64(),
            });
        }
        // P(u) = sum_j a_j u^{j+1} / (j+1); Q(u) = sum_j a_j u^{j+2} / (j+2).
        let zeroth_moment: Vec<F> = profile
            .coefficients()
            .iter()
            .enumerate()
            .map(|(j, &a)| a / F::cast_usize(j + 1))
            .collect();
        let first_moment: Vec<F> = profile
            .coefficients()
            .iter()
            .enumerate()
            .map(|(j, &a)| a / F::cast_usize(j + 2))
            .collect();
        let mass = zeroth_moment.iter().copied().sum();
        let moment = first_moment.iter().copied().sum();
        Ok(Self {
            profile,
            center,
            support_radius,
            zeroth_moment,
            first_moment,
            mass,
            moment,
        })
    }

    pub fn profile(&self) -> &RadialProfile<F> {
        &self.profile
    }

    pub fn center(&self) -> F {
        self.center
    }

    pub fn support_radius(&self) -> F {
        self.support_radius
    }

    /// `phi(|t - center| / r_omega)`; exactly zero outside the support.
    pub fn evaluate(&self, t: F) -> Result<F, KernelError> {
        if !t.is_finite() {
            return Err(KernelError::NonFiniteArgument { value: t.as_f64() });
        }
        let distance = (t - self.center).abs();
        if distance >= self.support_radius {
            return Ok(F::zero());
        }
        Ok(self.profile.evaluate(distance / self.support_radius))
    }

    /// `integral_0^t K(x) dx`, evaluated analytically.
    ///
    /// Monotone nondecreasing in `t` and constant once `t` passes the right
    /// edge of the support.
    pub fn integrate(&self, t: F) -> Result<F, KernelError> {
        if !t.is_finite() {
            return Err(KernelError::NonFiniteArgument { value: t.as_f64() });
        }
        if t < F::zero() {
            return Err(KernelError::NegativeBound { t: t.as_f64() });
        }
        Ok(self.cumulative(t) - self.cumulative(F::zero()))
    }

    /// `integral_0^t integral_0^tau K(x) dx dtau`, evaluated analytically via
    /// the order reduction `integral_0^t (t - x) K(x) dx`.
    pub fn double_integrate(&self, t: F) -> Result<F, KernelError> {
        if !t.is_finite() {
            return Err(KernelError::NonFiniteArgument { value: t.as_f64() });
        }
        if t < F::zero() {
            return Err(KernelError::NegativeBound { t: t.as_f64() });
        }
        let single = self.cumulative(t) - self.cumulative(F::zero());
        let first = self.moment_cumulative(t) - self.moment_cumulative(F::zero());
        Ok(t * single - first)
    }

    /// `P(u)` on the cached coefficients; compensated for the same
    /// cancellation reason as [`RadialProfile::evaluate`].
    fn zeroth(&self, u: F) -> F {
        horner_compensated(&self.zeroth_moment, u) * u
    }

    /// `Q(u)`.
    fn first(&self, u: F) -> F {
        horner_compensated(&self.first_moment, u) * u * u
    }

    /// `C(x) = integral_{-inf}^x K(s) ds`.
    ///
    /// The partial-mass differences are clamped to their mathematical range
    /// so rounding at the support edges cannot produce a negative or
    /// super-saturated cumulative.
    fn cumulative(&self, x: F) -> F {
        let c = self.center;
        let w = self.support_radius;
        if x <= c - w {
            F::zero()
        } else if x <= c {
            w * (self.mass - self.zeroth((c - x) / w)).max(F::zero())
        } else if x < c + w {
            w * self.mass + w * self.zeroth((x - c) / w).min(self.mass)
        } else {
            (w + w) * self.mass
        }
    }

    /// `M(x) = integral_{-inf}^x s K(s) ds`.
    fn moment_cumulative(&self, x: F) -> F {
        let c = self.center;
        let w = self.support_radius;
        if x <= c - w {
            F::zero()
        } else if x <= c {
            let u = (c - x) / w;
            w * c * (self.mass - self.zeroth(u)).max(F::zero())
                - w * w * (self.moment - self.first(u)).max(F::zero())
        } else if x < c + w {
            let u = (x - c) / w;
            w * c * self.mass - w * w * self.moment
                + w * c * self.zeroth(u).min(self.mass)
                + w * w * self.first(u).min(self.moment)
        } else {
            (w + w) * c * self.mass
        }
    }
}
