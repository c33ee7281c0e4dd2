use dkp_cusp::bound_states::{
    energy_equation, find_bound_states, find_bound_states_in, trace_spectrum,
};
use dkp_cusp::model::CuspPotential;
use dkp_cusp::oracle::{oracle_bound_energies, Parity, DEFAULT_TOL};
use dkp_cusp::Error;

fn well(a: f64, v0: f64) -> CuspPotential {
    CuspPotential::well(a, v0).unwrap()
}

#[test]
fn equation_nearly_vanishes_at_the_reported_turning_point() {
    let v = energy_equation(-0.98347, &well(0.5, 3.60534)).unwrap();
    assert!(v.relative() <= 1e-3, "{}", v.relative());
    assert!(v.scale > 0.0);
}

#[test]
fn reported_depth_lies_just_past_the_fold() {
    // both methods see two roots at 3.6053 and none at 3.60534
    let before = well(0.5, 3.6053);
    let past = well(0.5, 3.60534);
    assert_eq!(find_bound_states_in(&before, -0.99, -0.97, 4000).unwrap().len(), 2);
    assert!(find_bound_states_in(&past, -0.99, -0.97, 4000).unwrap().is_empty());
    let even = |w: &CuspPotential| {
        oracle_bound_energies(w, DEFAULT_TOL)
            .unwrap()
            .into_iter()
            .filter(|s| s.parity == Parity::Even)
            .count()
    };
    assert_eq!(even(&before), 2);
    assert_eq!(even(&past), 0);

    // the closest approach to a root is still within 1e-3 of the reported energy
    let (mut best, mut at) = (f64::MAX, 0.0);
    for i in 0..=400 {
        let e = -0.99 + 0.02 * i as f64 / 400.0;
        let r = energy_equation(e, &past).unwrap().relative();
        if r < best {
            best = r;
            at = e;
        }
    }
    assert!(best < 1e-4 && (at + 0.98347).abs() < 1e-3, "{best} at {at}");
}

#[test]
fn equation_guards() {
    assert!(matches!(energy_equation(0.9999995, &well(0.5, 1.0)), Err(Error::MuDegenerate(_))));
    let b = CuspPotential::barrier(0.5, 1.0).unwrap();
    assert!(matches!(energy_equation(0.0, &b), Err(Error::WrongKind { .. })));
}

#[test]
fn shallow_well_has_no_resolvable_root_inside_the_window() {
    let w = well(0.5, 0.01);
    let mut worst: f64 = f64::MAX;
    let mut prev = energy_equation(-0.9, &w).unwrap().value;
    for i in 1..=180 {
        let e = -0.9 + i as f64 * 0.01;
        let v = energy_equation(e, &w).unwrap();
        worst = worst.min(v.relative());
        // continuity on the grid
        assert!((v.value - prev).norm() <= 0.1 * v.scale);
        prev = v.value;
    }
    assert!(worst > 1e-3, "{worst}");
    assert!(find_bound_states(&w, 2000).unwrap().is_empty());
}

#[test]
fn very_shallow_well_has_at_most_one_state_near_threshold() {
    let w = well(0.5, 1e-3);
    let states = find_bound_states(&w, 2000).unwrap();
    assert!(states.len() <= 1);
    assert!(states.iter().all(|s| s.e > 0.999));
    let oracle = oracle_bound_energies(&w, DEFAULT_TOL).unwrap();
    assert_eq!(oracle.len(), states.len());
}

#[test]
fn roots_survive_grid_doubling() {
    for v0 in [0.5, 2.0, 3.6] {
        let w = well(0.5, v0);
        let coarse = find_bound_states(&w, 1000).unwrap();
        let fine = find_bound_states(&w, 2000).unwrap();
        for s in &coarse {
            assert!(fine.iter().any(|f| (f.e - s.e).abs() < 1e-8), "{v0}: {}", s.e);
            assert!(s.residual <= 1e-8);
        }
    }
}

#[test]
fn grid_precondition() {
    assert!(find_bound_states(&well(0.5, 1.0), 99).is_err());
    assert!(matches!(trace_spectrum(0.5, 0.1, 3.7, 9), Err(Error::EmptyGrid { .. })));
    assert!(trace_spectrum(0.5, 3.0, 2.0, 20).is_err());
}

#[test]
fn traced_curve_and_turning_point() {
    let trace = trace_spectrum(0.5, 0.1, 3.7, 200).unwrap();
    let tp = trace.turning_point.expect("turning point");
    assert!((tp.v0 - 3.60534).abs() <= 1e-3, "{tp:?}");
    assert!((tp.e + 0.98347).abs() <= 1e-3, "{tp:?}");
    assert_eq!(tp.root_count_change, 2);
    assert!(tp.confident);

    // ordered by energy, starting near +1 at small depth
    assert!(trace.points.windows(2).all(|w| w[0].e >= w[1].e));
    let first = trace.points[0];
    assert!(first.e > 0.99 && first.v0 < 0.2);

    // depth rises along the particle branch and falls past the fold
    let peak = trace
        .points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.v0.total_cmp(&b.1.v0))
        .unwrap()
        .0;
    assert!(trace.points[..=peak].windows(2).all(|w| w[1].v0 >= w[0].v0));
    assert!(trace.points[peak..].windows(2).all(|w| w[1].v0 <= w[0].v0));
    assert!(trace.points.iter().all(|p| p.residual <= 1e-8 && p.e.abs() < 1.0));
}

#[test]
fn coarse_trace_is_flagged() {
    let trace = trace_spectrum(0.5, 0.1, 3.7, 10).unwrap();
    let tp = trace.turning_point.expect("turning point");
    assert!(!tp.confident);
}

#[test]
fn no_real_roots_beyond_the_fold() {
    let trace = trace_spectrum(0.5, 3.65, 3.7, 10).unwrap();
    assert!(trace.points.is_empty());
    assert!(trace.turning_point.is_none());
}
