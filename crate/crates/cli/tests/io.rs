use gemqm::grid::{Lattice, Waveform};
use gemqm::{c64, Complex64 as C};
use gemqm_cli::io::{emit_grid_csv, emit_waveform_csv, read_waveform_csv};
use proptest::prelude::*;

#[test]
fn empty_waveform_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    emit_waveform_csv(&path, &Waveform::empty(-1.0, 0.01), "time in units of T").unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].starts_with("# time in units of T"));
    assert_eq!(lines[1], "t,re,im,abs");
}

#[test]
fn grid_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let mut g = Lattice::zeros(vec![0.0, 0.5, 1.0], vec![-1.0, 0.0]);
    g.set(1, 1, c64(3.0, -4.0));
    emit_grid_csv(&path, &g, "z from the entrance").unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1], "z,t,re,im,abs");
    assert_eq!(lines.len(), 2 + 6);
    let f: Vec<f64> = lines[2 + 3].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(f, vec![0.5, 0.0, 3.0, -4.0, 5.0]);
}

#[test]
fn non_uniform_samples_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    std::fs::write(&path, "# x; t0=0 dt=1\nt,re,im,abs\n0,1,0,1\n1,1,0,1\n3,1,0,1\n").unwrap();
    assert!(read_waveform_csv(&path).is_err());
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, (-300i32..300).prop_map(|e| 10f64.powi(e)), Just(0.0), Just(-0.0), Just(f64::MIN_POSITIVE)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn waveform_round_trip_is_bit_exact(
        t0 in -10.0f64..10.0,
        dt in 1e-4f64..1.0,
        v in prop::collection::vec((finite(), finite()), 2..40),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        let w = Waveform::new(t0, dt, v.iter().map(|&(a, b)| C::new(a, b)).collect()).unwrap();
        emit_waveform_csv(&path, &w, "units").unwrap();
        let r = read_waveform_csv(&path).unwrap();
        prop_assert_eq!(r.t0.to_bits(), w.t0.to_bits());
        prop_assert_eq!(r.dt.to_bits(), w.dt.to_bits());
        prop_assert_eq!(r.samples.len(), w.samples.len());
        for (a, b) in r.samples.iter().zip(&w.samples) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
