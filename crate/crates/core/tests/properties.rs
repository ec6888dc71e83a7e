mod common;

use proptest::prelude::*;

use common::{acf_oracle, pacf_oracle};
use measlescast::arima::{css_residuals, fit_with, ArimaOrder, ArimaParams, FitOptions};
use measlescast::forecast::forecast;
use measlescast::ingest::{aggregate_annual, parse_csv, to_csv, Dataset, SurveillanceRecord};
use measlescast::series::{
    difference, difference_anchors, integrate, sample_acf, sample_pacf, trend_summary, TimeSeries, Trend,
};

fn reals(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e4..1e4f64, min..max)
}

fn non_constant(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    reals(min, max).prop_filter("constant series", |v| {
        v.iter().any(|x| (x - v[0]).abs() > 1e-3)
    })
}

fn dataset() -> impl Strategy<Value = Dataset> {
    let record = ("[A-Za-z][A-Za-z ]{0,12}[a-z]", 1990..2030i32, 0..1_000_000u64)
        .prop_flat_map(|(region, year, cases)| {
            (Just(region), Just(year), Just(cases), 0..=cases)
        })
        .prop_map(|(region, year, cases, deaths)| SurveillanceRecord {
            region,
            year,
            cases,
            deaths,
        });
    prop::collection::vec(record, 0..30).prop_map(|mut records| {
        let mut seen = std::collections::HashSet::new();
        records.retain(|r| seen.insert((r.region.clone(), r.year)));
        Dataset {
            records,
            source_note: String::new(),
        }
    })
}

proptest! {
    #[test]
    fn integrate_inverts_difference(values in prop::collection::vec(-50_000i64..50_000, 3..40), d in 0usize..=2) {
        let values: Vec<f64> = values.into_iter().map(|v| v as f64).collect();
        let ts = TimeSeries::new(values.clone(), 2001);
        let diffs = difference(&ts, d).unwrap();
        prop_assert_eq!(diffs.len(), values.len() - d);
        prop_assert_eq!(diffs.start_label(), 2001 + d as i32);
        let back = integrate(&diffs, &difference_anchors(&ts, d).unwrap()).unwrap();
        prop_assert_eq!(back.values(), &values[..]);
        prop_assert_eq!(back.start_label(), 2001);
    }

    #[test]
    fn acf_is_bounded_and_affine_invariant(
        values in non_constant(5, 80),
        scale in 0.1..100f64,
        shift in -1e4..1e4f64,
    ) {
        let n = values.len();
        let max_lag = (n - 1).min(10);
        let acf = sample_acf(&TimeSeries::new(values.clone(), 1), max_lag).unwrap();
        prop_assert_eq!(acf.at(0), Some(1.0));
        prop_assert!(acf.coefficients.iter().all(|r| r.abs() <= 1.0 + 1e-12));

        let moved: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
        let moved = sample_acf(&TimeSeries::new(moved, 1), max_lag).unwrap();
        for (a, b) in acf.coefficients.iter().zip(&moved.coefficients) {
            prop_assert!((a - b).abs() < 1e-8);
        }
        let oracle = acf_oracle(&values, max_lag);
        for (a, b) in acf.coefficients.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn pacf_matches_least_squares(values in non_constant(30, 120)) {
        let pacf = sample_pacf(&TimeSeries::new(values.clone(), 1), 5).unwrap();
        for k in 1..=5 {
            let want = pacf_oracle(&values, k);
            prop_assert!((pacf.at(k).unwrap() - want).abs() < 1e-8, "lag {}", k);
        }
    }

    #[test]
    fn trend_signs_ignore_positive_scale(values in reals(2, 30), scale in 0.01..1e3f64) {
        let a = trend_summary(&TimeSeries::new(values.clone(), 1)).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
        let b = trend_summary(&TimeSeries::new(scaled, 1)).unwrap();
        prop_assert_eq!(a.len(), values.len() - 1);
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.trend, y.trend);
            prop_assert_eq!(x.label, y.label);
            let expected = if x.delta > 0.0 {
                Trend::Increase
            } else if x.delta < 0.0 {
                Trend::Decrease
            } else {
                Trend::Flat
            };
            prop_assert_eq!(x.trend, expected);
        }
    }

    #[test]
    fn aggregation_conserves_and_ignores_order(ds in dataset(), seed in any::<u64>()) {
        prop_assume!(!ds.records.is_empty());
        let years: std::collections::BTreeSet<i32> = ds.records.iter().map(|r| r.year).collect();
        let span = (years.last().unwrap() - years.first().unwrap() + 1) as usize;
        let result = aggregate_annual(&ds);
        if span != years.len() {
            prop_assert!(result.is_err());
            return Ok(());
        }
        let series = result.unwrap();
        let total: u64 = ds.records.iter().map(|r| r.cases).sum();
        prop_assert_eq!(series.values().iter().sum::<f64>(), total as f64);

        let mut shuffled = ds.clone();
        let len = shuffled.records.len();
        let mut state = seed;
        for i in (1..len).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.records.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(aggregate_annual(&shuffled).unwrap(), series);
    }

    #[test]
    fn parse_export_parse_is_identity(ds in dataset()) {
        let text = to_csv(&ds);
        let parsed = parse_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &ds);
        prop_assert_eq!(to_csv(&parsed), text);
    }

    #[test]
    fn pure_ar_residuals_shift_with_constant(
        values in reals(5, 40),
        phi in -0.9..0.9f64,
        constant in -100.0..100f64,
        delta in -100.0..100f64,
    ) {
        let ts = TimeSeries::new(values, 1);
        let base = css_residuals(&ArimaParams::new(vec![phi], vec![], constant, 1.0), &ts).unwrap();
        let moved = css_residuals(&ArimaParams::new(vec![phi], vec![], constant + delta, 1.0), &ts).unwrap();
        for (a, b) in base.values.iter().zip(&moved.values) {
            prop_assert!((b - (a - delta)).abs() < 1e-8);
        }
    }
}

fn forecast_setup(values: &[f64], order: ArimaOrder) -> Option<measlescast::ForecastResult> {
    let ts = TimeSeries::new(values.to_vec(), 1);
    let f = fit_with(&ts, order, &FitOptions::default()).ok()?;
    forecast(&f, &ts, 8, 0.9).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intervals_are_symmetric_and_widen(
        noise in prop::collection::vec(-1.0..1.0f64, 30..50),
        p in 0usize..=2,
        d in 0usize..=1,
        q in 0usize..=2,
    ) {
        let values: Vec<f64> = noise.iter().scan(1e5, |s, e| {
            *s += 100.0 * e;
            Some(*s)
        }).collect();
        let order = ArimaOrder::new(p, d, q).unwrap();
        if let Some(fc) = forecast_setup(&values, order) {
            for j in 0..fc.horizon() {
                let up = fc.upper_unclamped[j] - fc.point_unclamped[j];
                let down = fc.point_unclamped[j] - fc.lower_unclamped[j];
                prop_assert!((up - down).abs() <= 1e-9 * up.abs().max(1.0));
                if j > 0 {
                    prop_assert!(fc.std_errors[j] >= fc.std_errors[j - 1] - 1e-9);
                }
            }
        }
    }

    #[test]
    fn first_difference_forecasts_shift_with_level(
        noise in prop::collection::vec(-1.0..1.0f64, 25..40),
        shift in -1e4..1e4f64,
    ) {
        let values: Vec<f64> = noise.iter().scan(5e4, |s, e| {
            *s += 300.0 * e;
            Some(*s)
        }).collect();
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let order = ArimaOrder::new(1, 1, 0).unwrap();
        let (Some(a), Some(b)) = (forecast_setup(&values, order), forecast_setup(&shifted, order)) else {
            return Ok(());
        };
        for (x, y) in a.point_unclamped.iter().zip(&b.point_unclamped) {
            prop_assert!((y - x - shift).abs() <= 1e-6 * x.abs().max(1.0));
        }
    }
}
