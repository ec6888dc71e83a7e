mod common;

use common::*;
use measlescast::arima::{css_residuals, fit, log_likelihood, simulate, ArimaOrder, ArimaParams};
use measlescast::diagnostics::{grid_search, GridOptions};
use measlescast::series::{sample_pacf, TimeSeries};
use measlescast::special::{chi_square_sf, normal_cdf, z_quantile};

#[test]
fn z_quantile_inverts_integrated_cdf() {
    for i in 1..200 {
        let p = i as f64 / 200.0;
        let z = z_quantile(p).unwrap();
        assert!((normal_cdf_oracle(z) - p).abs() < 1e-12, "p = {p}");
        assert!((normal_cdf(z) - p).abs() < 1e-12, "p = {p}");
    }
    assert!((z_quantile(0.975).unwrap() - 1.959963984540054).abs() < 1e-12);
}

#[test]
fn chi_square_tail_matches_integration_far_out() {
    for k in [1, 2, 5, 10, 30] {
        for x in [1e-3, 0.5, 3.0, 12.0, 25.0, 60.0] {
            let want = 1.0 - chi_square_cdf_oracle(x, k);
            assert!((chi_square_sf(x, k).unwrap() - want).abs() < 1e-10, "k={k} x={x}");
        }
    }
}

#[test]
fn white_noise_pacf_stays_inside_band() {
    let n = 1000;
    let ts = TimeSeries::new(normal_series(314, n), 1);
    let pacf = sample_pacf(&ts, 20).unwrap();
    let bound = 3.0 / (n as f64).sqrt();
    assert!(pacf.coefficients.iter().all(|r| r.abs() < bound), "{:?}", pacf.coefficients);
}

#[test]
fn fitted_likelihood_beats_start_point() {
    let order = ArimaOrder::new(1, 0, 1).unwrap();
    let truth = ArimaParams::new(vec![0.6], vec![-0.4], 2.0, 1.0);
    for seed in 0..5 {
        let ts = simulate(&truth, order, 200, seed).unwrap();
        let f = fit(&ts, order).unwrap();
        let start = ArimaParams::new(vec![0.0], vec![0.0], ts.mean(), 1.0);
        assert!(f.log_likelihood >= log_likelihood(&start, &ts).unwrap());
        assert!(f.log_likelihood >= log_likelihood(&truth, &ts).unwrap() - 1e-6);
    }
}

#[test]
fn css_residuals_follow_hand_recursion() {
    let w = [3.0, 5.0, 4.0, 6.0, 2.0, 7.0];
    let (c, phi, th1, th2) = (1.5, 0.4, 0.3, -0.2);
    let params = ArimaParams::new(vec![phi], vec![th1, th2], c, 1.0);
    let res = css_residuals(&params, &TimeSeries::new(w.to_vec(), 1)).unwrap();
    assert_eq!(res.conditioning_dropped, 1);

    let mut a = vec![0.0; w.len()];
    for t in 1..w.len() {
        let a1 = a[t - 1];
        let a2 = if t >= 2 { a[t - 2] } else { 0.0 };
        a[t] = w[t] - c - phi * w[t - 1] + th1 * a1 + th2 * a2;
    }
    for (got, want) in res.values.iter().zip(&a[1..]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn grid_search_prefers_white_noise_on_white_noise() {
    let max = ArimaOrder::new(2, 0, 2).unwrap();
    let mut hits = 0;
    for seed in 0..20 {
        let values: Vec<f64> = normal_series(7_000 + seed, 300).iter().map(|v| 50.0 + v).collect();
        let ranking = grid_search(&TimeSeries::new(values, 1), max, &GridOptions::default()).unwrap();
        assert_eq!(ranking.candidates.len(), 9);
        if ranking.winner == ArimaOrder::new(0, 0, 0).unwrap() {
            hits += 1;
        }
    }
    assert!(hits > 10, "white noise selected {hits} of 20 times");
}

#[test]
fn grid_search_finds_ar1() {
    let order = ArimaOrder::new(1, 0, 0).unwrap();
    let truth = ArimaParams::new(vec![0.8], vec![], 1.0, 1.0);
    let max = ArimaOrder::new(2, 0, 2).unwrap();
    let mut hits = 0;
    for seed in 0..20 {
        let ts = simulate(&truth, order, 300, 8_000 + seed).unwrap();
        let ranking = grid_search(&ts, max, &GridOptions::default()).unwrap();
        if ranking.winner.p >= 1 && ranking.winner.q == 0 {
            hits += 1;
        }
    }
    assert!(hits >= 16, "AR structure selected {hits} of 20 times");
}

#[test]
fn parallel_and_serial_grids_agree() {
    let ts = TimeSeries::new(normal_series(11, 80), 1);
    let max = ArimaOrder::new(1, 1, 1).unwrap();
    let par = grid_search(&ts, max, &GridOptions::default()).unwrap();
    let ser = grid_search(
        &ts,
        max,
        &GridOptions {
            parallel: false,
            ..GridOptions::default()
        },
    )
    .unwrap();
    assert_eq!(par, ser);
}
