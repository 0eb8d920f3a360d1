use num_complex::Complex64;
use tropsolve::pipeline::io::{parse_problem, RunReport};
use tropsolve::pipeline::{count, report_solutions, solve, RunConfig};
use tropsolve::tracker::PathStatus;
use tropsolve::tropgeom::ingest_complex_file;

fn docs(name: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn seeded(seed: u64) -> RunConfig {
    let mut config = RunConfig::default();
    config.lift.seed = seed;
    config
}

#[test]
fn dense_cubic_and_quadric_meet_in_six_points() {
    let problem = parse_problem(
        r#"{"variables":["x","y"],"supports":[
            ["x^3","x^2*y","x*y^2","y^3","x^2","x*y","y^2","x","y","1"],
            ["x^2","x*y","y^2","x","y","1"]]}"#,
    )
    .unwrap();
    let report = solve(&problem, None, &seeded(1)).unwrap();
    assert_eq!(report.total_count, 6);
    assert_eq!(report.solutions.len(), 6);
    assert_eq!(report.paths.len(), 6);
    assert!(report.paths.iter().all(|p| p.status == PathStatus::Success && p.residual <= 1e-8));
    assert_eq!(count(&problem, None, &seeded(1)).unwrap().total, 6);
}

#[test]
fn univariate_cubic_has_three_roots() {
    let problem = parse_problem(r#"{"variables":["x"],"supports":[["1","x","x^2","x^3"]]}"#).unwrap();
    assert_eq!(count(&problem, None, &RunConfig::default()).unwrap().total, 3);
    let report = solve(&problem, None, &RunConfig::default()).unwrap();
    assert_eq!(report.solutions.len(), 3);
    // the roots of Σ aₖ xᵏ from the report's coefficients
    let a: Vec<Complex64> = report.lift.coefficients[0].iter().map(|z| Complex64::new(z[0], z[1])).collect();
    let e: Vec<u32> = report.lift.supports[0].iter().map(|v| v[0]).collect();
    for x in report_solutions(&report) {
        let value: Complex64 = a.iter().zip(&e).map(|(c, &k)| c * x[0].powu(k)).sum();
        assert!(value.norm() < 1e-8, "{value}");
    }
}

#[test]
fn monomials_give_nothing() {
    let problem = parse_problem(r#"{"variables":["x","y"],"supports":[["x^2*y"],["y"]]}"#).unwrap();
    let report = solve(&problem, None, &RunConfig::default()).unwrap();
    assert_eq!(report.total_count, 0);
    assert!(report.paths.is_empty() && report.solutions.is_empty());
}

#[test]
fn twisted_cubic_meets_a_plane_three_times() {
    let problem = tropsolve::pipeline::io::read_problem(&docs("twisted_cubic.json")).unwrap();
    let complex = ingest_complex_file(&docs("twisted_cubic_complex.json")).unwrap();
    for seed in 0..4 {
        let report = solve(&problem, Some(&complex), &seeded(seed)).unwrap();
        assert_eq!(report.total_count, 3, "seed {seed}");
        assert_eq!(report.solutions.len(), 3, "seed {seed}");
        assert!(report.diagnostics.squaring.is_some());
        for x in report_solutions(&report) {
            // on the curve (t, t², t³)
            assert!((x[1] - x[0] * x[0]).norm() < 1e-8 * x[1].norm().max(1.0));
            assert!((x[2] - x[0] * x[1]).norm() < 1e-8 * x[2].norm().max(1.0));
        }
    }
}

#[test]
fn count_agrees_with_solve() {
    let problems = [
        r#"{"variables":["x","y"],"supports":[["x^2*y","x","y^3","1"],["x*y","x^2","y","1"]]}"#,
        r#"{"variables":["x","y","z"],"supports":[["x*y","z","1"],["x^2","y*z","x"],["y","z^2","x*z","1"]]}"#,
        r#"{"variables":["x","y"],"G":[],"supports":[["x^2 + y^2","x","y","1"],["x*y","x","1"]]}"#,
    ];
    for (k, text) in problems.iter().enumerate() {
        let problem = parse_problem(text).unwrap();
        for seed in [0, 5] {
            let solved = solve(&problem, None, &seeded(seed)).unwrap();
            let counted = count(&problem, None, &seeded(seed)).unwrap();
            assert_eq!(solved.total_count, counted.total, "problem {k} seed {seed}");
            assert_eq!(solved.solutions.len() as u64, solved.total_count, "problem {k} seed {seed}");
        }
    }
}

#[test]
fn report_round_trips_bit_exactly() {
    let problem = tropsolve::pipeline::io::read_problem(&docs("two_circles.json")).unwrap();
    let report = solve(&problem, None, &seeded(7)).unwrap();
    let text = report.to_json();
    let back = RunReport::from_json(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), text);
}

#[test]
fn two_slacks_need_a_supplied_complex() {
    let problem = parse_problem(r#"{"variables":["x","y"],"supports":[["x^2 + y^2","x","1"],["x*y - 1","x","1"]]}"#).unwrap();
    assert!(matches!(solve(&problem, None, &RunConfig::default()), Err(tropsolve::Error::MissingComplex(2))));
}
