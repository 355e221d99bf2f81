//! Oracle checks for the kernel module: analytic integrals against adaptive
//! numerical quadrature, and the operator pipeline against the published
//! closed forms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use volterra_csrbf::kernel::{RadialProfile, ScaledKernel};

/// Adaptive Gauss–Kronrod quadrature, test-oracle only.
mod quad_oracle {
    const XGK: [f64; 15] = [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ];
    const WGK: [f64; 15] = [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ];
    const WG: [f64; 7] = [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ];

    fn g7k15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut kronrod = 0.0;
        let mut gauss = 0.0;
        for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
            let v = f(mid + half * x);
            kronrod += wk * v;
            if i % 2 == 1 {
                gauss += WG[i / 2] * v;
            }
        }
        (half * kronrod, half * (kronrod - gauss).abs())
    }

    fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (value, err) = g7k15(f, a, b);
        // Tolerance is not tightened on recursion: the error estimate of an
        // already-exact panel sits at the rounding floor and would otherwise
        // force runaway subdivision.
        if err <= tol.max(1e-15 * value.abs()) || depth == 0 {
            return value;
        }
        let mid = 0.5 * (a + b);
        adaptive(f, a, mid, tol, depth - 1) + adaptive(f, mid, b, tol, depth - 1)
    }

    /// Integrates `f` over `[a, b]`, subdividing first at the supplied
    /// breakpoints (kernel support edges and center).
    pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
        let mut cuts = vec![a];
        for &p in breaks {
            if p > a && p < b {
                cuts.push(p);
            }
        }
        cuts.push(b);
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.windows(2)
            .map(|pair| adaptive(&f, pair[0], pair[1], 1e-13, 40))
            .sum()
    }
}

fn random_kernel(rng: &mut ChaCha8Rng, k: u32) -> (ScaledKernel<f64>, f64, f64) {
    let center = rng.random_range(0.0..3.0);
    let radius = rng.random_range(0.3..3.0);
    let kernel = ScaledKernel::new(RadialProfile::wendland(3, k).unwrap(), center, radius).unwrap();
    (kernel, center, radius)
}

/// Comparison with a relative tolerance of 1e-10 and an absolute floor at
/// 1e-12 of the kernel's saturated mass: below that floor neither the
/// analytic path nor the quadrature oracle resolves the sliver integrals at
/// the support edge.
fn close(analytic: f64, oracle: f64, saturation: f64) -> bool {
    let diff = (analytic - oracle).abs();
    diff <= 1e-10 * analytic.abs().max(oracle.abs()) || diff <= 1e-12 * saturation
}

#[test]
fn single_integrals_match_adaptive_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..=5 {
        for _ in 0..200 {
            let (kernel, center, radius) = random_kernel(&mut rng, k);
            let t = rng.random_range(0.0..(center + 2.0 * radius));
            let analytic = kernel.integrate(t).unwrap();
            let oracle = quad_oracle::integrate(
                |x| kernel.evaluate(x).unwrap(),
                0.0,
                t,
                &[center - radius, center, center + radius],
            );
            let saturation = kernel.integrate(center + radius).unwrap();
            assert!(
                close(analytic, oracle, saturation),
                "k={k} center={center} radius={radius} t={t}: {analytic} vs {oracle}"
            );
        }
    }
}

#[test]
fn double_integrals_match_adaptive_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..=5 {
        for _ in 0..200 {
            let (kernel, center, radius) = random_kernel(&mut rng, k);
            let t = rng.random_range(0.0..(center + 2.0 * radius));
            let analytic = kernel.double_integrate(t).unwrap();
            let oracle = quad_oracle::integrate(
                |x| (t - x) * kernel.evaluate(x).unwrap(),
                0.0,
                t,
                &[center - radius, center, center + radius],
            );
            let saturation = kernel.double_integrate(t.max(center + radius) + 1.0).unwrap();
            assert!(
                close(analytic, oracle, saturation.max(1.0)),
                "k={k} center={center} radius={radius} t={t}: {analytic} vs {oracle}"
            );
        }
    }
}

/// Componentwise ratio of two coefficient vectors must be a single positive
/// constant (relative spread below 1e-12).
fn proportionality_constant(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "coefficient counts differ");
    let mut ratio = None;
    for (&x, &y) in a.iter().zip(b) {
        if x == 0.0 && y == 0.0 {
            continue;
        }
        let r = x / y;
        assert!(r.is_finite() && r > 0.0, "ratio {x}/{y} not positive");
        match ratio {
            None => ratio = Some(r),
            Some(prev) => {
                assert!(
                    (r - prev).abs() <= 1e-12 * prev.abs(),
                    "ratio drifts: {prev} vs {r}"
                );
            }
        }
    }
    ratio.expect("at least one nonzero coefficient pair")
}

fn truncated_power(l: u32) -> RadialProfile<f64> {
    // (1 - r)^l as exact binomial coefficients.
    let mut coeffs = vec![0.0; l as usize + 1];
    let mut binom = 1.0f64;
    for j in 0..=l {
        coeffs[j as usize] = if j % 2 == 0 { binom } else { -binom };
        binom = binom * (l - j) as f64 / (j + 1) as f64;
    }
    RadialProfile::new(coeffs)
}

#[test]
fn operator_pipeline_reproduces_wendland_profiles() {
    // I^k applied to (1-r)^(floor(3/2)+k+1) is proportional to phi_{3,k}.
    for k in 1..=3u32 {
        let l = 3 / 2 + k + 1;
        let mut profile = truncated_power(l);
        for _ in 0..k {
            profile = profile.integral_operator();
        }
        let published = RadialProfile::<f64>::wendland(3, k).unwrap();
        let c = proportionality_constant(profile.coefficients(), published.coefficients());
        assert!(c > 0.0);
    }
}

#[test]
fn operator_applied_twice_matches_published_k2_profile() {
    let double = truncated_power(4).integral_operator().integral_operator();
    let published = RadialProfile::<f64>::wendland(3, 2).unwrap();
    proportionality_constant(double.coefficients(), published.coefficients());
}

#[test]
fn operator_preserves_compact_support() {
    let g = truncated_power(3).integral_operator();
    assert_eq!(g.evaluate(1.0), 0.0);
    let sum: f64 = g.coefficients().iter().sum();
    assert!(sum.abs() <= 1e-16, "polynomial piece must vanish at r = 1");
}
