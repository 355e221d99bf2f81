//! Cross-validation of the two model oracles: the closed-form peak against
//! the RK4 trajectory, for every benchmark configuration.

use volterra_csrbf::benchmarks::CASES;
use volterra_csrbf::model::{oracle_trajectory, umax_closed_form, ModelParams};

#[test]
fn closed_form_and_trajectory_peaks_agree() {
    for case in &CASES {
        let params = ModelParams::new(case.kappa, case.u0).unwrap();
        let closed = umax_closed_form(&params).unwrap();
        let traj = oracle_trajectory(&params, 10.0, 1e-4).unwrap();
        let diff = (closed - traj.peak_value()).abs();
        assert!(
            diff <= 1e-7,
            "kappa={}: closed {closed} vs RK4 {} (diff {diff:e})",
            case.kappa,
            traj.peak_value()
        );
    }
}

#[test]
fn peaks_match_published_exact_column() {
    for case in &CASES {
        let params = ModelParams::new(case.kappa, case.u0).unwrap();
        let closed = umax_closed_form(&params).unwrap();
        assert!(
            (closed - case.umax_exact).abs() <= 1e-6,
            "kappa={}: {closed} vs {}",
            case.kappa,
            case.umax_exact
        );
    }
}

#[test]
fn halving_the_step_barely_moves_the_peak() {
    for case in &CASES {
        let params = ModelParams::new(case.kappa, case.u0).unwrap();
        let coarse = oracle_trajectory(&params, 10.0, 1e-4).unwrap();
        let fine = oracle_trajectory(&params, 10.0, 5e-5).unwrap();
        let delta = (coarse.peak_value() - fine.peak_value()).abs();
        assert!(delta < 1e-9, "kappa={}: delta {delta:e}", case.kappa);
    }
}

#[test]
fn trajectories_stay_positive_with_monotone_toxicity() {
    for case in &CASES {
        let params = ModelParams::new(case.kappa, case.u0).unwrap();
        let traj = oracle_trajectory(&params, 10.0, 1e-3).unwrap();
        assert!(traj.u_values().iter().all(|&u| u > 0.0));
        assert!(traj.w_values().windows(2).all(|p| p[1] >= p[0]));
        assert_eq!(traj.w_values()[0], 0.0);
    }
}

#[test]
fn trajectories_rise_to_a_single_peak_then_decay() {
    for case in &CASES {
        let params = ModelParams::new(case.kappa, case.u0).unwrap();
        let traj = oracle_trajectory(&params, 10.0, 1e-3).unwrap();
        let u = traj.u_values();
        let mut sign_changes = 0;
        let mut last = 0i8;
        for pair in u.windows(2) {
            let d = pair[1] - pair[0];
            let s = if d > 0.0 {
                1
            } else if d < 0.0 {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                sign_changes += 1;
            }
            last = s;
        }
        assert_eq!(sign_changes, 1, "kappa={}", case.kappa);
        assert!(traj.peak_time() > 0.0 && traj.peak_time() < 10.0);
    }
}
