use greencut::survival::{
    cut_integral, fgr_series, fgr_time, fgr_valid_until, resonance_expansion, survival_amplitude, tail_exponent,
    uniform_times, CutSpectrum,
};
use greencut::{BandModel, Error, QuadratureConfig, SurvivalSeries};
use num_complex::Complex64;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn cut_and_resonance_routes_agree_with_bound_states() {
    let times: Vec<f64> = (1..=60).map(|i| i as f64 * 2.5).collect();
    for (m, eps) in [
        (BandModel::flat_band(0.1).unwrap(), -0.4),
        (BandModel::semicircle(0.8).unwrap(), 0.3),
        (BandModel::power_edge(0.2, -1.0, 1.0, 1.5, 0.5).unwrap(), -0.2),
    ] {
        let a = survival_amplitude(&m, eps, &times, &cfg()).unwrap();
        let b = resonance_expansion(&m, eps, &times, &cfg()).unwrap();
        let tol = (10.0 * cfg().abs_tol).max(1e-6);
        for (i, t) in times.iter().enumerate() {
            assert!((a.g[i] - b.g[i]).norm() <= tol, "{:?} t={t}: {} vs {}", m.kind(), a.g[i], b.g[i]);
        }
    }
}

#[test]
fn sum_rule_for_every_family() {
    let table: Vec<(f64, f64)> = (0..=40).map(|i| -1.0 + i as f64 / 20.0).map(|e| (e, 0.05 * (1.0 - e * e))).collect();
    for (m, eps) in [
        (BandModel::power_edge(0.3, -0.5, 2.0, 0.25, 1.5).unwrap(), 0.4),
        (BandModel::power_edge(1.5, -1.0, 1.0, 2.0, 2.0).unwrap(), 0.0),
        (BandModel::tabulated(table).unwrap(), -0.3),
        (BandModel::semicircle(3.0).unwrap(), 0.9),
    ] {
        let s = survival_amplitude(&m, eps, &[0.0], &cfg()).unwrap();
        assert!((s.g[0] - 1.0).norm() <= 1e-6, "{:?}: {}", m.kind(), s.g[0]);
    }
}

#[test]
fn halving_the_tolerance_moves_p_by_less_than_the_old_tolerance() {
    let times = uniform_times(120.0, 121);
    for (m, eps) in [(BandModel::flat_band(0.05).unwrap(), -0.4), (BandModel::semicircle(0.3).unwrap(), 0.1)] {
        for abs_tol in [1e-6, 1e-8, 1e-10] {
            let coarse = QuadratureConfig { abs_tol, ..cfg() };
            let fine = QuadratureConfig { abs_tol: abs_tol / 2.0, ..cfg() };
            let a = survival_amplitude(&m, eps, &times, &coarse).unwrap();
            let b = survival_amplitude(&m, eps, &times, &fine).unwrap();
            for (pa, pb) in a.p.iter().zip(&b.p) {
                assert!((pa - pb).abs() <= abs_tol, "{:?} tol {abs_tol}", m.kind());
            }
        }
    }
}

#[test]
fn spectrum_integrates_to_the_continuum_weight() {
    let m = BandModel::flat_band(0.2).unwrap();
    let s = CutSpectrum::new(&m, 0.0, &cfg()).unwrap();
    let direct = cut_integral(&m, 0.0, 0.0, &cfg()).unwrap();
    assert!((s.mass() - direct.re).abs() < 1e-12);
    assert!(s.converged());
    assert!(s.error_estimate() < 1e-9);
}

#[test]
fn subdivision_cap_is_an_accuracy_error() {
    let m = BandModel::flat_band(0.02).unwrap();
    let tight = QuadratureConfig { max_subdivisions: 10, ..cfg() };
    assert!(matches!(survival_amplitude(&m, -0.4, &[1.0], &tight), Err(Error::Accuracy { .. })));
}

#[test]
fn golden_rule_breaks_down_early_at_strong_coupling() {
    let m = BandModel::flat_band(0.2).unwrap();
    let tau = fgr_time(&m, -0.4).unwrap();
    let s = survival_amplitude(&m, -0.4, &uniform_times(20.0 * tau, 600), &cfg()).unwrap();
    assert!(fgr_valid_until(&s, tau).unwrap() < tau);
    let f = fgr_series(&m, -0.4, &s.times).unwrap();
    assert!(s.times.iter().zip(s.p.iter().zip(&f.p)).any(|(t, (p, q))| *t < tau && (p - q).abs() / q > 0.1));
}

#[test]
fn golden_rule_window_widens_at_weak_coupling() {
    let window = |d: f64| {
        let m = BandModel::flat_band(d).unwrap();
        let tau = fgr_time(&m, -0.4).unwrap();
        let s = survival_amplitude(&m, -0.4, &uniform_times(20.0 * tau, 600), &cfg()).unwrap();
        fgr_valid_until(&s, tau).map_or(20.0, |t| t / tau)
    };
    let (strong, mid, weak) = (window(0.2), window(0.1), window(0.02));
    assert!(strong < 1.0 && mid > 2.0 && mid < 5.0 && weak > mid, "{strong} {mid} {weak}");
}

#[test]
fn tail_fit_needs_five_maxima() {
    let times: Vec<f64> = (0..200).map(|i| 10.0 + i as f64 * 0.05).collect();
    let g: Vec<Complex64> = times.iter().map(|t| Complex64::new((t * 2.0).cos() / t, 0.0)).collect();
    let s = SurvivalSeries::new(times, g, greencut::Method::CutOnly);
    assert!(matches!(tail_exponent(&s, (10.0, 14.0)), Err(Error::InsufficientData { .. })));
    let alpha = tail_exponent(&s, (10.0, 19.9)).unwrap();
    assert!((alpha - 1.0).abs() < 0.05, "{alpha}");
}

#[test]
fn bad_times_are_rejected() {
    let m = BandModel::semicircle(0.1).unwrap();
    assert!(survival_amplitude(&m, 0.0, &[1.0, 0.5], &cfg()).is_err());
    assert!(survival_amplitude(&m, 0.0, &[-1.0], &cfg()).is_err());
    assert!(resonance_expansion(&m, 0.0, &[0.0], &cfg()).is_err());
}
