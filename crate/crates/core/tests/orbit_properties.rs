use cubic_rds::orbit::{basin_grid, escape_experiment, estimate_basin, g1_grid, iterate, EscapeParams};
use cubic_rds::simplex::{apply_operator, classify_region, to_g1, Sector};
use cubic_rds::stability::classify_attractors;
use cubic_rds::{FixedPointLabel, OrbitParams, SeedSpec, SimplexPoint, Theta, ThetaDistribution};
use proptest::prelude::*;

use FixedPointLabel::{Center, C12, E1};

fn d(s: &str) -> ThetaDistribution {
    s.parse().unwrap()
}

fn pt(a: f64, b: f64, c: f64) -> SimplexPoint {
    SimplexPoint::new(a, b, c).unwrap()
}

fn quick() -> OrbitParams {
    OrbitParams { max_steps: 20_000, ..Default::default() }
}

#[test]
fn deterministic_laws_reach_their_attractor() {
    let x = pt(0.5, 0.3, 0.2);
    let p = OrbitParams { max_steps: 10_000, ..Default::default() };
    assert_eq!(iterate(&d("dirac:0.9"), &x, SeedSpec::new(1, 0), &p).unwrap().verdict, E1);
    assert_eq!(iterate(&d("dirac:0.4"), &x, SeedSpec::new(1, 0), &p).unwrap().verdict, Center);
}

#[test]
fn uniform_unit_interval_goes_to_center() {
    let b = estimate_basin(&d("uniform:0,1"), &pt(0.5, 0.3, 0.2), 1000, 5, &OrbitParams::default()).unwrap();
    assert!(b.probability(Center) >= 0.99, "{b:?}");
}

#[test]
fn wide_uniform_reaches_all_three_vertices() {
    let b = estimate_basin(&d("uniform:1/3,1"), &pt(0.5, 0.3, 0.2), 1000, 5, &OrbitParams::default()).unwrap();
    for l in [E1, C12, Center] {
        assert!(b.probability(l) >= 0.01, "{l}: {b:?}");
    }
}

#[test]
fn basin_counts_do_not_depend_on_thread_count() {
    let dist = d("uniform:0.4,0.9");
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| basin_grid(&dist, 5, 20, 77, &quick()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, basin_grid(&dist, 5, 20, 77, &quick()).unwrap());
}

#[test]
fn grid_points_are_interior_to_g1() {
    let g = g1_grid(7).unwrap();
    assert_eq!(g.len(), 15);
    for p in g {
        assert!(classify_region(&p).is_interior_of(Sector::G1), "{p}");
    }
}

#[test]
fn observed_labels_are_predicted() {
    for s in ["dirac:0.4", "dirac:0.9", "uniform:0,1", "uniform:1/3,1", "mix:0.5*dirac:0.57+0.5*dirac:0.77"] {
        let dist = d(s);
        let predicted = classify_attractors(&dist).unwrap().region_sets.int_g1;
        for b in basin_grid(&dist, 5, 40, 9, &quick()).unwrap() {
            for l in b.observed(5) {
                assert!(predicted.contains(&l), "{s}: {l} at {}", b.initial);
            }
        }
    }
}

#[test]
fn edges_confine_orbits() {
    let dist = d("uniform:0,1");
    for (start, on_edge) in [
        (pt(0.4, 0.4, 0.2), (|x: &SimplexPoint| (x.x1() - x.x2()).abs() <= 1e-9) as fn(&SimplexPoint) -> bool),
        (pt(0.6, 0.2, 0.2), |x: &SimplexPoint| (x.x2() - x.x3()).abs() <= 1e-9),
        (pt(0.7, 0.3, 0.0), |x: &SimplexPoint| x.x3() <= 1e-9),
    ] {
        let mut x = start;
        for t in dist.sampler(SeedSpec::new(3, 0)).take(10_000) {
            x = apply_operator(Theta::new(t).unwrap(), &x);
            assert!(on_edge(&x), "{start} left its edge at {x}");
        }
    }
}

#[test]
fn escape_from_repelling_points() {
    let params = EscapeParams { start_distance: 1e-3, eps: 1e-2, trials: 100, max_steps: 10_000, master_seed: 4 };
    assert_eq!(escape_experiment(&d("dirac:0.4"), E1, &params).unwrap().fraction(), 1.0);
    assert_eq!(escape_experiment(&d("dirac:0.9"), Center, &params).unwrap().fraction(), 1.0);
    // c repels along the edge direction when θ is large
    assert_eq!(escape_experiment(&d("dirac:0.9"), C12, &params).unwrap().fraction(), 1.0);
}

#[test]
fn escape_rejects_bad_radii() {
    let params = EscapeParams { start_distance: 1e-2, eps: 1e-3, trials: 1, max_steps: 1, master_seed: 0 };
    assert!(escape_experiment(&d("dirac:0.4"), E1, &params).is_err());
    let params = EscapeParams { start_distance: 1e-3, eps: 0.1, ..params };
    assert!(escape_experiment(&d("dirac:0.4"), E1, &params).is_err());
}

fn g1_point() -> impl Strategy<Value = SimplexPoint> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        to_g1(&SimplexPoint::new(lo, hi - lo, 1.0 - hi).unwrap()).0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_respect_the_ball(x in g1_point(), lo in 0.0..0.6f64, w in 0.01..0.4f64, master in any::<u64>()) {
        let dist = ThetaDistribution::uniform(lo, lo + w).unwrap();
        let p = OrbitParams { max_steps: 3000, eps_conv: 1e-4, dwell: 5, keep_history: true };
        let r = iterate(&dist, &x, SeedSpec::new(master, 0), &p).unwrap();
        prop_assert!(r.steps_taken <= p.max_steps);
        prop_assert!(r.history.as_ref().unwrap().len() <= cubic_rds::orbit::HISTORY_CAPACITY);
        if let Some(dist_to) = r.final_state.distance_to(r.verdict) {
            prop_assert!(dist_to < p.eps_conv);
        } else {
            prop_assert_eq!(r.steps_taken, p.max_steps);
        }
    }

    #[test]
    fn same_seed_same_record(x in g1_point(), master in any::<u64>(), stream in any::<u64>()) {
        let dist = d("mix:0.5*uniform:0,1+0.5*dirac:0.8");
        let s = SeedSpec::new(master, stream);
        let a = iterate(&dist, &x, s, &quick()).unwrap();
        let b = iterate(&dist, &x, s, &quick()).unwrap();
        prop_assert_eq!(a, b);
    }
}
