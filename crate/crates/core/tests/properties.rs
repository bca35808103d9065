use arfima::abc::{accepted_positions, thresholds};
use arfima::acvf::{acvf_arfima0d0, acvf_arfima_exact, acvf_arma11, acvf_convolution};
use arfima::filter::{arma_filter, arma_unfilter, frac_diff};
use arfima::forecast::conditional_predictive;
use arfima::spectral::PeriodogramPlan;
use arfima::{ArfimaParams, Series};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn d_strategy() -> impl Strategy<Value = f64> {
    -0.45..0.45f64
}

fn coef() -> impl Strategy<Value = f64> {
    -0.85..0.85f64
}

fn params() -> impl Strategy<Value = ArfimaParams> {
    (d_strategy(), proptest::option::of(coef()), proptest::option::of(coef()), 0.2..5.0f64)
        .prop_map(|(d, phi, theta, s)| ArfimaParams::new(d, phi, theta, s).unwrap())
}

fn series(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, n)
}

fn toeplitz_is_pd(gamma: &[f64]) -> bool {
    let n = gamma.len();
    DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)]).cholesky().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(y in series(2..300)) {
        let n = y.len();
        let full = PeriodogramPlan::new(n).full(&y);
        let energy: f64 = y.iter().map(|v| v * v).sum();
        let spectral: f64 = full.iter().sum();
        prop_assert!((energy - spectral).abs() <= 1e-9 * energy.max(1.0));
    }

    #[test]
    fn convolution_acvf_is_positive_definite(p in params(), len in 2usize..256) {
        let g = acvf_convolution(&p, len).unwrap().gamma;
        prop_assert!(g[0] > 0.0);
        prop_assert!(g.iter().all(|v| v.abs() <= g[0] * (1.0 + 1e-12)));
        prop_assert!(toeplitz_is_pd(&g));
    }

    #[test]
    fn component_acvfs_are_positive_definite(d in d_strategy(), phi in coef(), theta in coef(), len in 2usize..200) {
        prop_assert!(toeplitz_is_pd(&acvf_arfima0d0(d, 1.0, len).unwrap().gamma));
        prop_assert!(toeplitz_is_pd(&acvf_arma11(phi, theta, 1.0, len).unwrap().gamma));
    }

    #[test]
    fn exact_acvf_is_positive_definite(d in d_strategy(), phi in coef(), theta in coef(), len in 2usize..128) {
        prop_assume!(phi.abs() > 0.05);
        let p = ArfimaParams::new(d, Some(phi), Some(theta), 1.0).unwrap();
        prop_assert!(toeplitz_is_pd(&acvf_arfima_exact(&p, len).unwrap().gamma));
    }

    #[test]
    fn acvfs_are_linear_in_sigma2(p in params(), c in 0.1..10.0f64) {
        let a = acvf_convolution(&p, 40).unwrap().gamma;
        let b = acvf_convolution(&p.with_sigma2(p.sigma2 * c), 40).unwrap().gamma;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((c * x - y).abs() <= 1e-12 * y.abs().max(1e-300) + 1e-15);
        }
        let a0 = acvf_arfima0d0(p.d, 1.0, 20).unwrap().gamma;
        let b0 = acvf_arfima0d0(p.d, c, 20).unwrap().gamma;
        for (x, y) in a0.iter().zip(&b0) {
            prop_assert!((c * x - y).abs() <= 1e-13 * y.abs() + 1e-300);
        }
    }

    #[test]
    fn convolution_without_arma_is_arfima0d0(d in d_strategy()) {
        let p = ArfimaParams::new(d, None, None, 1.3).unwrap();
        let a = acvf_convolution(&p, 60).unwrap().gamma;
        let b = acvf_arfima0d0(d, 1.3, 60).unwrap().gamma;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-12));
        }
    }

    #[test]
    fn frac_diff_round_trip(y in series(10..400), d in d_strategy()) {
        let s = Series::demeaned(y).unwrap();
        let back = frac_diff(&frac_diff(&s, d), -d);
        for (a, b) in back.values().iter().zip(s.values()) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn arma_filter_round_trip(y in series(2..400), phi in coef(), theta in coef()) {
        let s = Series::demeaned(y).unwrap();
        let back = arma_unfilter(&arma_filter(&s, phi, theta), phi, theta);
        for (a, b) in back.values().iter().zip(s.values()) {
            prop_assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn forecast_mean_is_linear_and_covariance_shrinks(p in params(), y1 in series(20..60), b in 1usize..6) {
        let y2: Vec<f64> = y1.iter().rev().map(|v| 0.5 * v - 1.0).collect();
        let sum: Vec<f64> = y1.iter().zip(&y2).map(|(a, c)| a + c).collect();
        let s = |v: &[f64]| Series::new(v.to_vec()).unwrap();
        let (m1, cov) = conditional_predictive(&s(&y1), &p, b).unwrap();
        let (m2, _) = conditional_predictive(&s(&y2), &p, b).unwrap();
        let (m12, _) = conditional_predictive(&s(&sum), &p, b).unwrap();
        for k in 0..b {
            prop_assert!((m1[k] + m2[k] - m12[k]).abs() < 1e-8 * (1.0 + m12[k].abs()));
        }
        let g0 = acvf_convolution(&p, 1).unwrap().gamma[0];
        prop_assert!(cov.clone().cholesky().is_some());
        prop_assert!((cov.clone() - cov.transpose()).abs().max() < 1e-12);
        for k in 0..b {
            prop_assert!(cov[(k, k)] <= g0 * (1.0 + 1e-10));
        }
    }

    #[test]
    fn acceptance_is_strict_and_order_free(dist in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64), 1..300), q in 0.01..1.0f64) {
        let d: Vec<[f64; 3]> = dist.iter().map(|(a, b, c)| [*a, *b, *c]).collect();
        let t = thresholds(&d, q, 0.5, true);
        let acc = accepted_positions(&d, &t);
        for &i in &acc {
            prop_assert!(d[i][0] < t.h && d[i][1] < t.arma && d[i][2] < t.sigma2);
        }
        let mut rev = d.clone();
        rev.reverse();
        let t2 = thresholds(&rev, q, 0.5, true);
        prop_assert_eq!((t.h, t.arma, t.sigma2), (t2.h, t2.arma, t2.sigma2));
        prop_assert_eq!(accepted_positions(&rev, &t2).len(), acc.len());
    }
}

#[test]
fn gnp_fixture_round_trips_through_csv() {
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/gnp_synthetic.csv");
    let y = arfima::io::gnp_transform(&arfima::io::read_column(&fixture, "gnp_level").unwrap()).unwrap();
    assert_eq!(y.len(), 308);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.csv");
    arfima::io::write_series_csv(std::fs::File::create(&path).unwrap(), y.values()).unwrap();
    let back = arfima::io::read_column(&path, "value").unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&back), bits(y.values()));
}
