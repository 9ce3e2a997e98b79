use std::f64::consts::PI;

use gemqm::gfc::*;
use gemqm::grid::{rel_l2, Waveform};
use gemqm::metrics::echo_partition;
use gemqm::simulator::{simulate_gfc, SimGrid, SimOptions};
use gemqm::{c64, Complex64 as C};
use proptest::prelude::*;

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Discontinuous), Just(Variant::Stepwise)]
}

#[test]
fn transfer_is_one_far_from_the_comb() {
    for v in [Variant::Discontinuous, Variant::Stepwise] {
        let p = GfcParams::normalized(v, 11, 100.0, 5.0, 2.0);
        let far = 1e7 * p.delta_omega;
        let h = transfer_function(far, &p);
        assert!((h - 1.0).norm() < 1e-5, "{v:?}: {h}");
    }
}

#[test]
fn single_stepwise_tooth_on_resonance() {
    let p = GfcParams::normalized(Variant::Stepwise, 1, 20.0, 5.0, 3.0);
    let h = transfer_function(0.0, &p);
    let want = (-p.g_n2 * p.thickness / p.gamma).exp();
    assert!((h - want).norm() < 1e-14 * want.max(1e-300) + 1e-300, "{h} vs {want}");
    assert!(h.im.abs() < 1e-300);
}

#[test]
fn weak_comb_is_transparent() {
    let p = GfcParams::normalized(Variant::Discontinuous, 11, 100.0, 5.0, 1e-12);
    for w in [-30.0, -2.0, 0.0, 0.7, 12.0] {
        assert!((transfer_function(w, &p) - 1.0).norm() < 1e-10);
    }
}

#[test]
fn stepwise_first_five_is_the_series() {
    for (x, f) in [(0.5, 50.0), (2.0, 600.0), (10.0, 600.0), (7.0, f64::INFINITY)] {
        let p = GfcParams::normalized(Variant::Stepwise, 11, f, 5.0, x);
        let a = first_five_echoes(&p).unwrap();
        let b = echo_series(&p, 5).unwrap();
        assert!((a.leakage - b.leakage).norm() < 1e-14);
        for (u, v) in a.echoes.iter().zip(&b.echoes) {
            assert!((u - v).norm() < 1e-12 * (1.0 + v.norm()), "X {x}: {u} vs {v}");
        }
    }
}

#[test]
fn lossless_discontinuous_first_five_is_the_series() {
    for (mu, fp) in [(0.5, 3.0), (2.06, 2.06 * PI), (4.0, 7.0)] {
        let p = GfcParams::from_mu(Variant::Discontinuous, 11, f64::INFINITY, fp, mu);
        let a = first_five_echoes(&p).unwrap();
        let b = echo_series(&p, 5).unwrap();
        assert!((a.leakage - b.leakage).norm() < 1e-14);
        for (u, v) in a.echoes.iter().zip(&b.echoes) {
            assert!((u - v).norm() < 1e-12 * (1.0 + v.norm()), "μ {mu}: {u} vs {v}");
        }
    }
}

#[test]
fn first_echo_efficiency_formulas() {
    for (mu, fp) in [(0.3, 2.0), (1.0, PI), (2.5, 4.0), (6.0, 30.0)] {
        let s = GfcParams::from_mu(Variant::Stepwise, 11, f64::INFINITY, fp, mu);
        let c1 = first_five_echoes(&s).unwrap().echoes[0];
        assert!((c1.norm_sqr() - eta_first_stepwise(mu, fp)).abs() < 1e-14);
        assert!((eta_first_stepwise_zeta(s.zeta_eff()) - eta_first_stepwise(mu, fp)).abs() < 1e-14);
        let d = GfcParams::from_mu(Variant::Discontinuous, 11, f64::INFINITY, fp, mu);
        let c1 = first_five_echoes(&d).unwrap().echoes[0];
        assert!((c1.norm_sqr() - eta_first_discontinuous(mu, fp)).abs() < 1e-14);
    }
}

#[test]
fn stepwise_optimum() {
    let best = eta_first_stepwise_zeta(4.0 / PI);
    assert!((best - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
    assert!((eta_first_stepwise(1.7, 1.7 * PI) - best).abs() < 1e-15);
    for z in [1.0, 1.2, 1.35, 1.4] {
        assert!(eta_first_stepwise_zeta(z) < best);
    }
}

#[test]
fn discontinuous_ridge() {
    let mu = discontinuous_crossing(0.5).unwrap();
    assert!((mu - 2.06).abs() < 0.02, "{mu}");
    assert!((eta_first_discontinuous(mu, PI * mu) - 0.5).abs() < 1e-12);
    let on_ridge = |mu: f64| eta_first_discontinuous(mu, PI * mu);
    let mut prev = 0.0;
    for mu in [0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1e4] {
        let v = on_ridge(mu);
        assert!(v > prev, "not increasing at μ {mu}");
        prev = v;
    }
    assert!((on_ridge(1e4) - 4.0 * (-2.0f64).exp()).abs() < 1e-6);
    assert!(discontinuous_crossing(0.6).is_err());
}

// Coefficients pass through zero as the thickness varies, so differences
// are measured against the largest coefficient of the set.
#[test]
fn variants_concord_for_fine_combs() {
    for (fp, f) in [(50.0, 1e3), (50.0, 1e4), (100.0, 1e3)] {
        for x in [0.1, 0.5, 1.0, 2.0, 4.0, 6.0] {
            let s = first_five_echoes(&GfcParams::normalized(Variant::Stepwise, 11, f, fp, x)).unwrap();
            let d = first_five_echoes(&GfcParams::normalized(Variant::Discontinuous, 11, f, fp, x)).unwrap();
            let scale = s.echoes.iter().map(|c| c.norm()).fold(s.leakage.norm(), f64::max);
            assert!((s.leakage - d.leakage).norm() < 0.01 * scale);
            for (u, v) in s.echoes.iter().zip(&d.echoes) {
                assert!((u - v).norm() < 0.01 * scale, "𝓕' {fp} 𝓕 {f} X {x}: {u} vs {v}");
            }
        }
    }
}

// Relative error of the single-pass first echo against the exact series.
#[test]
fn thin_medium_validity_boundary() {
    for v in [Variant::Stepwise, Variant::Discontinuous] {
        let err = |x: f64| {
            let p = GfcParams::normalized(v, 11, f64::INFINITY, 40.0, x);
            let thin = thin_echo_amplitudes(&p, 1).unwrap();
            let exact = echo_series(&p, 1).unwrap();
            assert_eq!(thin.out_of_domain, x > 1.0);
            (thin.echoes[0] - exact.echoes[0]).norm() / exact.echoes[0].norm()
        };
        for x in [0.05, 0.1, 0.3, 0.6, 1.0] {
            assert!(err(x) < 0.1, "{v:?} X {x}: {}", err(x));
        }
        let mut prev = err(1.0);
        for k in 1..=12 {
            let x = 10f64.powf(k as f64 / 12.0);
            let e = err(x);
            assert!(e > prev, "{v:?}: error {e} at X {x} not above {prev}");
            prev = e;
        }
    }
}

#[test]
fn optimization_flags() {
    let p = GfcParams::from_mu(Variant::Discontinuous, 11, 600.0, 2.06 * PI, 2.06);
    let r = optimization_report(&p, 0.2).unwrap();
    assert!(r.on_ridge && r.large_mu && r.high_finesse && r.resolvable);
    assert!((r.eta_first - 0.5).abs() < 0.01);
    let p = GfcParams::from_mu(Variant::Discontinuous, 3, 5.0, 6.0, 0.5);
    let r = optimization_report(&p, 0.2).unwrap();
    assert!(!r.on_ridge && !r.large_mu && !r.high_finesse && !r.resolvable);
}

fn comb_input(dt: f64) -> Waveform {
    let n = (1.5 / dt).round() as usize + 1;
    Waveform::gaussian(0.0, 50.0 / 255.0, -0.75, 0.75, n).unwrap()
}

// A comb much wider than the pulse spectrum; narrower combs advance the
// echoes slightly through the dispersion of the comb edges.
#[test]
fn echo_train_recurs_with_the_period() {
    for v in [Variant::Discontinuous, Variant::Stepwise] {
        let p = GfcParams::normalized(v, 81, 600.0, 5.0, 1.5);
        let dt = 0.002;
        let out = propagate_via_transfer(&comb_input(dt), &p, 6.75).unwrap();
        let part = echo_partition(&out, 0.0, p.period(), 5).unwrap();
        for w in &part.windows[1..] {
            let n = w.index as f64;
            assert!((w.peak_time - n * p.period()).abs() <= dt + 1e-12, "{v:?} echo {n} at {}", w.peak_time);
        }
    }
}

#[test]
fn transfer_propagation_matches_simulation() {
    let p = GfcParams::normalized(Variant::Discontinuous, 11, 600.0, 5.0, 2.0);
    let dt = 0.001;
    let a_in = comb_input(dt);
    let (t0, t1) = (-0.75, 6.75);
    let nt = ((t1 - t0) / dt).round() as usize + 1;
    let run = simulate_gfc(&p, &a_in, &SimGrid::new(81, nt, t0, t1).unwrap(), &SimOptions::unrecorded()).unwrap();
    let tf = propagate_via_transfer(&a_in, &p, t1).unwrap();
    let n = run.output.len().min(tf.len());
    let err = rel_l2(&run.output.samples[..n], &tf.samples[..n]);
    assert!(err < 0.02, "{err}");
}

#[test]
fn coarse_sampling_is_rejected() {
    let p = GfcParams::normalized(Variant::Stepwise, 41, 600.0, 5.0, 2.0);
    let a_in = comb_input(0.05);
    assert!(matches!(propagate_via_transfer(&a_in, &p, 5.0), Err(gemqm::Error::Aliasing(_))));
    let a_in = comb_input(0.002);
    assert!(propagate_via_transfer(&a_in, &p, -0.75).is_err());
}

#[test]
fn parameters_are_validated() {
    assert!(GfcParams::normalized(Variant::Stepwise, 4, 10.0, 5.0, 1.0).check().is_err());
    assert!(GfcParams::normalized(Variant::Stepwise, 5, 10.0, 0.5, 1.0).check().is_err());
    assert!(GfcParams::normalized(Variant::Stepwise, 5, 10.0, 5.0, -1.0).check().is_err());
    let p = GfcParams::from_mu(Variant::Discontinuous, 11, 600.0, 5.0, 1.3);
    assert!((p.mu() - 1.3).abs() < 1e-14);
    assert!((p.finesse() - 600.0).abs() < 1e-9);
    assert!((p.finesse_geom() - 5.0).abs() < 1e-15);
    assert!((p.period() - 1.0).abs() < 1e-15);
    assert!((p.length() - 51.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfer_is_passive(v in variant(), m in 0usize..6, f in 1.0f64..1e3, fp in 1.0f64..20.0, x in 0.01f64..20.0, w in -80.0f64..80.0) {
        let p = GfcParams::normalized(v, 2 * m + 1, f, fp, x);
        let h = transfer_function(w, &p);
        prop_assert!(h.norm() <= 1.0 + 1e-14, "{h}");
    }

    #[test]
    fn first_five_is_passive(v in variant(), f in 1.0f64..1e4, fp in 1.0f64..50.0, x in 0.01f64..30.0) {
        let p = GfcParams::normalized(v, 11, f, fp, x);
        for s in [first_five_echoes(&p).unwrap(), echo_series(&p, 30).unwrap()] {
            let total = s.leakage.norm_sqr() + s.efficiencies().iter().sum::<f64>();
            prop_assert!(total <= 1.0 + 1e-9, "{total}");
        }
    }

    #[test]
    fn series_matches_transfer_spectrum(x in 0.1f64..8.0, fp in 2.0f64..10.0, w in -0.45f64..0.45) {
        // on the centre of the comb the finite comb is close to the
        // periodic one; compare the response reconstructed from the series
        let p = GfcParams::normalized(Variant::Stepwise, 101, 50.0, fp, x);
        let s = echo_series(&p, 400).unwrap();
        let om = w * p.delta_omega;
        let mut h = s.leakage;
        for (n, c) in s.echoes.iter().enumerate() {
            h += c * C::from_polar(1.0, -om * (n + 1) as f64 * p.period());
        }
        let exact = transfer_function(om, &p);
        prop_assert!((h - exact).norm() < 2e-2, "{h} vs {exact}");
    }
}

#[test]
fn echo_amplitudes_are_real_for_the_periodic_comb() {
    let p = GfcParams::normalized(Variant::Discontinuous, 11, 600.0, 5.0, 10.0);
    let s = echo_series(&p, 8).unwrap();
    assert!(s.echoes.iter().all(|c| c.im == 0.0));
    assert_eq!(s.leakage, c64(s.leakage.re, 0.0));
}
