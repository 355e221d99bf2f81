//! Gauss–Legendre quadrature on `[0, L]` and the squared residual norm.
//!
//! Nodes are the roots of the Legendre polynomial `P_{m+1}` found by Newton
//! iteration from Chebyshev-angle seeds, mapped to `(L/2) s_j + L/2`;
//! weights follow `w_j = L / ((1 - s_j^2) P'_{m+1}(s_j)^2)`.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("argument {x} outside [-1, 1]")]
    OutOfDomain { x: f64 },
    #[error("interval length must be positive and finite, got {value}")]
    InvalidLength { value: f64 },
    #[error("Newton iteration for root {root} of P_{degree} did not converge")]
    RootNonConvergence { degree: usize, root: usize },
    #[error("residual is not finite at quadrature node {node}")]
    NonFiniteResidual { node: f64 },
}

/// Gauss–Legendre rule with `m + 1` points on `(0, L)`.
#[derive(Debug, Clone)]
pub struct QuadratureRule<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
    order: usize,
    interval_length: F,
}

impl<F: Real> QuadratureRule<F> {
    /// Builds the `(m + 1)`-point rule on `(0, L)`, exact for polynomials of
    /// degree up to `2m + 1`.
    pub fn gauss_legendre(order: usize, interval_length: F) -> Result<Self, QuadratureError> {
        if !(interval_length > F::zero()) || !interval_length.is_finite() {
            return Err(QuadratureError::InvalidLength {
                value: interval_length.as_f64(),
            });
        }
        let n = order + 1;
        let half = F::cast(0.5);
        let mut roots = Vec::with_capacity(n);
        for j in 0..n {
            // Chebyshev-angle seed for the j-th root (descending order).
            let angle = F::PI() * (F::cast_usize(j) + F::cast(0.75))
                / (F::cast_usize(n) + half);
            let mut x = angle.cos();
            let residual_stop = F::cast(1e-14);
            let mut converged = false;
            for _ in 0..100 {
                let (p, dp) = legendre_recurrence(n, x);
                let step = p / dp;
                x = x - step;
                // The 1e-14 residual target is unreachable in floating point
                // for large n (recurrence rounding scales with n*eps), so a
                // machine-resolution step also counts as converged.
                if p.abs() <= residual_stop
                    || step.abs() <= F::cast(2.0) * F::epsilon() * (F::one() + x.abs())
                {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(QuadratureError::RootNonConvergence { degree: n, root: j });
            }
            roots.push(x);
        }
        roots.reverse();
        let len_half = interval_length * half;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &s in &roots {
            let (_, dp) = legendre_recurrence(n, s);
            nodes.push(len_half * s + len_half);
            weights.push(interval_length / ((F::one() - s * s) * dp * dp));
        }
        Ok(Self {
            nodes,
            weights,
            order,
            interval_length,
        })
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// The rule order `m`; the rule has `m + 1` points.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn interval_length(&self) -> F {
        self.interval_length
    }

    /// Applies the rule to `f` over `(0, L)`.
    pub fn integrate(&self, f: impl Fn(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(P_degree(x), P'_degree(x))` by the three-term recurrence.
///
/// Errors when `|x| > 1`; on `[-1, 1]` every Legendre polynomial satisfies
/// `|P_degree| <= 1`.
pub fn legendre_eval<F: Real>(degree: usize, x: F) -> Result<(F, F), QuadratureError> {
    if x.abs() > F::one() {
        return Err(QuadratureError::OutOfDomain { x: x.as_f64() });
    }
    Ok(legendre_recurrence(degree, x))
}

fn legendre_recurrence<F: Real>(degree: usize, x: F) -> (F, F) {
    if degree == 0 {
        return (F::one(), F::zero());
    }
    // P'_{n+1} = P'_{n-1} + (2n+1) P_n keeps the derivative stable at x = +-1.
    let mut p_prev = F::one();
    let mut p = x;
    let mut dp_prev = F::zero();
    let mut dp = F::one();
    for n in 1..degree {
        let nf = F::cast_usize(n);
        let two_n_plus_1 = nf + nf + F::one();
        let p_next = (two_n_plus_1 * x * p - nf * p_prev) / (nf + F::one());
        let dp_next = dp_prev + two_n_plus_1 * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Free-function form of [`QuadratureRule::gauss_legendre`].
pub fn gauss_legendre_rule<F: Real>(
    order: usize,
    interval_length: F,
) -> Result<QuadratureRule<F>, QuadratureError> {
    QuadratureRule::gauss_legendre(order, interval_length)
}

/// Gauss–Legendre approximation of `||R||^2 = integral_0^L R(t)^2 dt`.
///
/// Errors with the offending node if the residual is not finite there.
pub fn residual_norm_sq<F: Real>(
    rule: &QuadratureRule<F>,
    residual: impl Fn(F) -> F,
) -> Result<F, QuadratureError> {
    let mut acc = F::zero();
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let r = residual(x);
        if !r.is_finite() {
            return Err(QuadratureError::NonFiniteResidual { node: x.as_f64() });
        }
        acc += w * r * r;
    }
    Ok(acc)
}

/// Default rule order for solver diagnostics: `max(50, 2N)` over-resolves the
/// residual oscillation scale set by `N` basis functions.
pub fn default_rule_order(basis_size: usize) -> usize {
    50.max(2 * basis_size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_degree_zero() {
        let (p, dp) = legendre_eval(0, 0.3f64).unwrap();
        assert_eq!((p, dp), (1.0, 0.0));
    }

    #[test]
    fn legendre_degree_two_at_origin() {
        // P_2(x) = (3x^2 - 1)/2.
        let (p, dp) = legendre_eval(2, 0.0f64).unwrap();
        assert_eq!(p, -0.5);
        assert_eq!(dp, 0.0);
    }

    #[test]
    fn legendre_degree_three_root() {
        let x = (3.0f64 / 5.0).sqrt();
        let (p, dp) = legendre_eval(3, x).unwrap();
        assert!(p.abs() <= 1e-14);
        assert!(dp.abs() > 0.1);
    }

    #[test]
    fn legendre_bounded_on_interval() {
        for degree in [1usize, 5, 17, 40] {
            for i in 0..=100 {
                let x = -1.0 + 2.0 * i as f64 / 100.0;
                let (p, _) = legendre_eval(degree, x).unwrap();
                assert!(p.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn legendre_domain_guard() {
        assert!(matches!(
            legendre_eval(3, 1.5f64),
            Err(QuadratureError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn two_point_rule_on_zero_two() {
        let rule = QuadratureRule::<f64>::gauss_legendre(1, 2.0).unwrap();
        let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
        assert!((rule.nodes()[0] - (1.0 - inv_sqrt3)).abs() <= 1e-14);
        assert!((rule.nodes()[1] - (1.0 + inv_sqrt3)).abs() <= 1e-14);
        assert!((rule.weights()[0] - 1.0).abs() <= 1e-14);
        assert!((rule.weights()[1] - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn midpoint_rule_from_single_root() {
        let rule = QuadratureRule::<f64>::gauss_legendre(0, 1.0).unwrap();
        assert!((rule.nodes()[0] - 0.5).abs() <= 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let rule = QuadratureRule::<f64>::gauss_legendre(7, 3.0).unwrap();
        let sum: f64 = rule.weights().iter().sum();
        assert!((sum - 3.0).abs() / 3.0 <= 1e-12);
    }

    #[test]
    fn nodes_strictly_increasing_inside_interval() {
        for m in [0usize, 3, 16, 64, 200] {
            let rule = QuadratureRule::<f64>::gauss_legendre(m, 4.0).unwrap();
            let mut prev = 0.0;
            for &x in rule.nodes() {
                assert!(x > prev && x < 4.0);
                prev = x;
            }
            assert!(rule.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn weights_symmetric() {
        for m in [4usize, 9, 32] {
            let rule = QuadratureRule::<f64>::gauss_legendre(m, 1.0).unwrap();
            let w = rule.weights();
            for i in 0..w.len() {
                assert!((w[i] - w[w.len() - 1 - i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn large_order_still_builds() {
        let rule = QuadratureRule::<f64>::gauss_legendre(512, 1.0).unwrap();
        assert_eq!(rule.nodes().len(), 513);
        let sum: f64 = rule.weights().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-11);
    }

    #[test]
    fn invalid_length_rejected() {
        assert!(matches!(
            QuadratureRule::<f64>::gauss_legendre(3, 0.0),
            Err(QuadratureError::InvalidLength { .. })
        ));
        assert!(matches!(
            QuadratureRule::<f64>::gauss_legendre(3, -2.0),
            Err(QuadratureError::InvalidLength { .. })
        ));
    }

    #[test]
    fn residual_norm_examples() {
        let rule = QuadratureRule::<f64>::gauss_legendre(4, 5.0).unwrap();
        let one = residual_norm_sq(&rule, |_| 1.0).unwrap();
        assert!((one - 5.0).abs() <= 1e-12);
        assert_eq!(residual_norm_sq(&rule, |_| 0.0).unwrap(), 0.0);

        let rule = QuadratureRule::<f64>::gauss_legendre(3, 1.0).unwrap();
        let t_sq = residual_norm_sq(&rule, |t| t).unwrap();
        assert!((t_sq - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn residual_norm_rejects_non_finite() {
        let rule = QuadratureRule::<f64>::gauss_legendre(2, 1.0).unwrap();
        let err = residual_norm_sq(&rule, |t| if t > 0.4 { f64::NAN } else { 0.0 });
        match err {
            Err(QuadratureError::NonFiniteResidual { node }) => assert!(node > 0.4),
            other => panic!("expected NonFiniteResidual, got {other:?}"),
        }
    }

    #[test]
    fn default_order_floor_and_scaling() {
        assert_eq!(default_rule_order(10), 50);
        assert_eq!(default_rule_order(27), 54);
    }
}
