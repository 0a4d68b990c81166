use tracedist_core::harness::{
    emit_csv, emit_gnuplot, read_csv, run, write_csv, ExperimentConfig, ExperimentKind, FGrid,
    PredictModel, CSV_HEADER,
};

fn small_sample() -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ExperimentKind::SampleCharge);
    c.sizes = vec![6];
    c.samples = Some(30);
    c.charges = vec![0.0, 1.0];
    c.seed = 11;
    c
}

#[test]
fn csv_round_trip_preserves_rows() {
    let rows = run(&small_sample()).unwrap();
    assert_eq!(rows.len(), 2 * 5);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    emit_csv(&rows, &path).unwrap();
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!(a.experiment, b.experiment);
        assert_eq!((a.n, a.n_b, a.samples), (b.n, b.n_b, b.samples));
        assert_eq!(a.q, b.q);
        assert!((a.mean_d1 - b.mean_d1).abs() <= 1e-11 * a.mean_d1.abs());
        assert_eq!(a.wall_time, None);
        assert_eq!(b.wall_time, None);
    }
}

#[test]
fn empty_run_still_writes_header() {
    let mut out = Vec::new();
    write_csv(&[], &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().trim_end(), CSV_HEADER.join(","));
}

#[test]
fn rows_are_sorted_and_cover_the_grid() {
    let mut c = ExperimentConfig::new(ExperimentKind::Predict);
    c.model = PredictModel::Page;
    c.sizes = vec![8, 4];
    let rows = run(&c).unwrap();
    let keys: Vec<(u32, u32)> = rows.iter().map(|r| (r.n, r.n_b)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(rows.len(), 5 + 9);
    assert!(rows.iter().all(|r| r.p_discrimination.is_some()));
}

#[test]
fn timing_fills_wall_time() {
    let mut c = small_sample();
    c.timing = true;
    c.f_grid = FGrid::Points(vec![0.5]);
    let rows = run(&c).unwrap();
    assert!(rows.iter().all(|r| r.wall_time.is_some_and(|t| t >= 0.0)));
}

#[test]
fn gnuplot_blocks_per_series() {
    let rows = run(&small_sample()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.dat");
    emit_gnuplot(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches("\n\n\n").count(), 1);
    assert_eq!(text.lines().filter(|l| l.starts_with("# sample-charge")).count(), 2);
}

#[test]
fn config_json_round_trip() {
    let c = small_sample();
    let back = ExperimentConfig::from_json(&c.to_json()).unwrap();
    assert_eq!(back.to_json(), c.to_json());
    assert!(ExperimentConfig::from_json(r#"{"kind": "syk", "bogus": 1}"#).is_err());
}
