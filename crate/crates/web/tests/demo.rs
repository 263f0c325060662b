use cubic_rds_web::{basin_values, orbit_values, scan_values, summary_text, BASIN_STRIDE, SCAN_STRIDE};

#[test]
fn orbit_ends_at_verdict() {
    let (pts, verdict) = orbit_values("dirac:0.9", [0.5, 0.3, 0.2], 1000, 1).unwrap();
    assert_eq!(verdict, "E1");
    assert_eq!(pts.len() % 3, 0);
    assert_eq!(&pts[..3], &[0.5, 0.3, 0.2]);
    assert!((pts[pts.len() - 3] - 1.0).abs() < 1e-6);
}

#[test]
fn orbit_rejects_bad_input() {
    assert!(orbit_values("dirac:1.5", [0.5, 0.3, 0.2], 10, 1).is_err());
    assert!(orbit_values("dirac:0.5", [0.5, 0.5, 0.5], 10, 1).is_err());
}

#[test]
fn basin_rows_are_probability_vectors() {
    let v = basin_values("uniform:1/3,1", 5, 20, 3, 100_000).unwrap();
    assert_eq!(v.len() % BASIN_STRIDE, 0);
    assert!(!v.is_empty());
    for row in v.chunks(BASIN_STRIDE) {
        let p = &row[3..];
        assert!(p.iter().all(|x| *x >= -1e-12));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    assert_eq!(v, basin_values("uniform:1/3,1", 5, 20, 3, 100_000).unwrap());
}

#[test]
fn scan_has_expected_shape() {
    let v = scan_values(0.567, 0.767, 1e-3, 0.1).unwrap();
    assert_eq!(v.len(), 201 * SCAN_STRIDE);
    assert!(scan_values(0.05, 0.5, 0.01, 0.1).is_err());
}

#[test]
fn summary_names_attractors() {
    let s = summary_text("uniform:0,1").unwrap();
    assert!(s.contains("int G1: {Center}"));
    assert!(summary_text("dirac:2/3").is_err());
}
