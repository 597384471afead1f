use mww_core::harness::wavelet_cov_mc;
use mww_core::lrd::*;
use mww_core::wavelet::WaveletSpec;
use nalgebra::DMatrix;

fn spec4() -> WaveletSpec {
    WaveletSpec::daubechies(4).unwrap()
}

fn arfima(d: &[f64], rho: f64, n: usize, seed: u64) -> ArfimaSpec {
    ArfimaSpec::new(
        MemoryParams::new(d.to_vec()).unwrap(),
        LongRunCov::equicorrelated(d.len(), rho).unwrap(),
        n,
        seed,
    )
}

// Independent quadrature of the exact wavelet covariance of ARFIMA(0,d,0)
// at DB4: Omega_lm / (2 pi) times the integral of |2 sin(lambda/2)|^{-(dl+dm)}
// cos((pi sgn(lambda) - lambda)(dl - dm)/2) |H_j(lambda)|^2, scaled to unit Omega_lm
// where noted.
const CROSS_02_04_OMEGA_04: [f64; 5] = [
    0.2850638818,
    0.3744301578,
    0.5431178727,
    0.8105884898,
    1.2209931945,
];
const VAR_02_UNIT: [f64; 5] = [
    0.7998727332,
    0.9670368829,
    1.2489976793,
    1.6395477630,
    2.1606275216,
];
const CROSS_02_12_OMEGA_04: [f64; 5] = [
    0.1599745466,
    0.1934073766,
    0.2497995359,
    0.3279095526,
    0.4321255043,
];

#[test]
fn same_seed_same_panel() {
    let s = arfima(&[0.2, 0.4, 1.1], 0.3, 300, 77);
    let a = simulate_arfima(&s).unwrap();
    let b = simulate_arfima(&s).unwrap();
    assert_eq!(a, b);
    let c = simulate_arfima(&s.clone().with_seed(78)).unwrap();
    assert_ne!(a, c);
    assert_eq!(a.len(), 300);
    assert_eq!(a.channels(), 3);
}

#[test]
fn white_noise_covariance() {
    let n = 8192;
    let rho = 0.5;
    let x = simulate_arfima(&arfima(&[0.0, 0.0], rho, n, 1)).unwrap();
    let cov = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() / n as f64;
    let (x0, x1) = (x.channel(0), x.channel(1));
    let tol = 3.0 * (2.0 / n as f64).sqrt();
    assert!((cov(x0, x0) - 1.0).abs() < tol);
    assert!((cov(x1, x1) - 1.0).abs() < tol);
    assert!((cov(x0, x1) - rho).abs() < tol);
}

#[test]
fn identity_covariance_gives_uncorrelated_channels() {
    let n = 8192;
    let x = simulate_arfima(&arfima(&[0.0, 0.0, 0.0], 0.0, n, 3)).unwrap();
    for a in 0..3 {
        for b in (a + 1)..3 {
            let c: f64 = x
                .channel(a)
                .iter()
                .zip(x.channel(b))
                .map(|(u, v)| u * v)
                .sum::<f64>()
                / n as f64;
            assert!(c.abs() < 3.0 / (n as f64).sqrt(), "{a},{b}: {c}");
        }
    }
}

#[test]
fn truncated_ma_variance_approaches_gamma_ratio() {
    // Var = Gamma(1 - 2d) / Gamma(1 - d)^2 at d = 0.2.
    let exact = 1.0986855396043997;
    let s: f64 = frac_diff_coeffs(0.2, 1_000_000).iter().map(|w| w * w).sum();
    assert!((s - exact).abs() < 1e-3, "{s}");
    assert!(s < exact);
}

#[test]
fn stationary_variance_by_monte_carlo() {
    let exact = 1.0986855396043997;
    let reps = 200;
    let mut acc = 0.0;
    for i in 0..reps {
        let x = simulate_arfima(&arfima(&[0.2], 0.0, 512, derive_seed(5, i))).unwrap();
        acc += x.channel(0).iter().map(|v| v * v).sum::<f64>() / 512.0;
    }
    let v = acc / reps as f64;
    assert!((v - exact).abs() < 0.04, "{v}");
}

#[test]
fn derived_seeds_are_distinct() {
    let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| derive_seed(42, i)).collect();
    assert_eq!(seeds.len(), 10_000);
}

#[test]
fn exact_covariance_oracle_vs_first_order_model() {
    // The local approximation converges to the exact covariance as j grows.
    let d = MemoryParams::new(vec![0.2, 0.4]).unwrap();
    let om = LongRunCov::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 1.0])).unwrap();
    let mut prev = f64::INFINITY;
    for j in 1..=5 {
        let model = model_wavelet_cov(j, 0, 1, &d, &om, &spec4(), ApproxOrder::First).unwrap();
        let rel = (model / CROSS_02_04_OMEGA_04[j - 1] - 1.0).abs();
        assert!(rel < prev, "j={j}: {rel}");
        prev = rel;
    }
    assert!(prev < 0.02);
    let unit = MemoryParams::new(vec![0.2, 0.2]).unwrap();
    let v = model_wavelet_cov(
        5,
        0,
        0,
        &unit,
        &LongRunCov::identity(2),
        &spec4(),
        ApproxOrder::First,
    )
    .unwrap();
    assert!((v / VAR_02_UNIT[4] - 1.0).abs() < 0.02);
}

fn check_against_oracle(d: &[f64], l: usize, m: usize, oracle: &[f64; 5], reps: usize) {
    let template = arfima(d, 0.4, 2048, 0).with_moment_bound(4);
    let moments = wavelet_cov_mc(&template, &spec4(), 5, reps, 31).unwrap();
    for row in &moments {
        let mc = row.mean[(l, m)];
        let se = row.std_err[(l, m)];
        let want = oracle[row.j - 1];
        assert!(
            (mc - want).abs() < 4.0 * se,
            "d={d:?} j={}: {mc} vs {want} (se {se})",
            row.j
        );
    }
}

#[test]
fn scalogram_means_match_exact_covariance() {
    check_against_oracle(&[0.2, 0.4], 0, 1, &CROSS_02_04_OMEGA_04, 300);
    check_against_oracle(&[0.2, 0.2], 0, 0, &VAR_02_UNIT, 300);
}

#[test]
fn unit_memory_gap_cross_covariance_is_not_zero() {
    // The first-order model returns zero here; the simulated process does not.
    check_against_oracle(&[0.2, 1.2], 0, 1, &CROSS_02_12_OMEGA_04, 300);
    let d = MemoryParams::new(vec![0.2, 1.2]).unwrap();
    let om = LongRunCov::bivariate(0.4).unwrap();
    let v = model_wavelet_cov(1, 0, 1, &d, &om, &spec4(), ApproxOrder::First).unwrap();
    assert!(v.abs() < 1e-12);
}
