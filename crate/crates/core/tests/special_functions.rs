use dkp_cusp::special::{
    gamma, kummer_m, recip_gamma, whittaker_m, whittaker_m_derivative, whittaker_w,
    whittaker_w_derivative, ComplexScalar, WhittakerParams, TOL_SERIES,
};
use dkp_cusp::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / b.norm()
}

fn params(kappa: ComplexScalar, mu: ComplexScalar, z: ComplexScalar) -> WhittakerParams {
    WhittakerParams::new(kappa, mu, z).unwrap()
}

// a = 0.6, E = 2
const MU_SCATTER: f64 = 1.0392304845413263;

#[test]
fn kummer_at_zero_is_one() {
    let r = kummer_m(c(0.3, -2.0), c(1.5, 0.7), c(0.0, 0.0)).unwrap();
    assert_eq!(r.value, c(1.0, 0.0));
    assert!(r.terms_used >= 1);
}

#[test]
fn kummer_with_equal_parameters_is_exponential() {
    let r = kummer_m(c(1.0, 1.0), c(1.0, 1.0), c(0.0, 1.0)).unwrap();
    assert!(rel(r.value, c(1f64.cos(), 1f64.sin())) < 1e-15);
}

#[test]
fn kummer_matches_high_precision_reference() {
    let a = c(0.5, MU_SCATTER - 1.2);
    let b = c(1.0, 2.0 * MU_SCATTER);
    let r = kummer_m(a, b, c(0.0, 4.8)).unwrap();
    let expect = c(1.4167039078760155363, 1.9747063981162383334);
    assert!(rel(r.value, expect) < 1e-13, "{:?}", r.value);
    assert!(r.est_error <= TOL_SERIES);
}

#[test]
fn kummer_rejects_poles_and_large_arguments() {
    assert!(matches!(
        kummer_m(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)),
        Err(Error::PoleParameter(_))
    ));
    assert!(matches!(
        kummer_m(c(1.0, 0.0), c(2.0, 0.0), c(0.0, 31.0)),
        Err(Error::DomainTooLarge { .. })
    ));
}

#[test]
fn whittaker_m_matches_high_precision_reference() {
    let m = whittaker_m(&params(c(0.0, 1.2), c(0.0, MU_SCATTER), c(0.0, 4.8))).unwrap();
    let expect = c(0.59344150355685385789, 0.85494646576506716709);
    assert!(rel(m.value, expect) < 1e-13, "{:?}", m.value);
}

#[test]
fn whittaker_m_elementary_case() {
    let m = whittaker_m(&params(c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0))).unwrap();
    let expect = 0.5f64.exp() - (-0.5f64).exp();
    assert!((m.value.re - expect).abs() < 1e-15);
}

#[test]
fn whittaker_w_matches_high_precision_reference() {
    let w = whittaker_w(&params(c(0.25, 0.0), c(0.25, 0.0), c(1.0, 0.0))).unwrap();
    assert!(rel(w.value, c(0.6065306597126334236, 0.0)) < 1e-13, "{:?}", w.value);
}

#[test]
fn whittaker_w_is_even_in_mu() {
    for &(kappa, mu, z) in &[
        (c(0.0, 1.2), c(0.3, 0.0), c(0.0, 2.0)),
        (c(0.2, -0.4), c(0.1, 0.7), c(1.5, 3.0)),
        (c(-1.0, 0.0), c(0.0, 1.1), c(0.0, 6.0)),
    ] {
        let plus = whittaker_w(&params(kappa, mu, z)).unwrap().value;
        let minus = whittaker_w(&params(kappa, -mu, z)).unwrap().value;
        assert!(rel(minus, plus) < 1e-12, "{kappa} {mu} {z}");
    }
}

#[test]
fn wronskian_of_m_and_w() {
    let (kappa, mu, z) = (c(0.0, 1.2), c(0.3, 0.0), c(0.0, 2.0));
    let p = params(kappa, mu, z);
    let m = whittaker_m(&p).unwrap().value;
    let dm = whittaker_m_derivative(&p).unwrap().value;
    let w = whittaker_w(&p).unwrap().value;
    let dw = whittaker_w_derivative(&p).unwrap().value;
    let wronskian = m * dw - dm * w;
    let expect = -gamma(1.0 + 2.0 * mu) / gamma(0.5 + mu - kappa);
    assert!(rel(wronskian, expect) < 1e-12, "{wronskian} vs {expect}");
}

#[test]
fn w_rejects_logarithmic_case() {
    let p = params(c(0.1, 0.0), c(0.5, 0.0), c(1.0, 0.0));
    assert!(matches!(whittaker_w(&p), Err(Error::LogarithmicCase(_))));
}

#[test]
fn negative_real_axis_is_ambiguous() {
    let p = params(c(0.0, 1.0), c(0.0, 0.5), c(-2.0, 0.0));
    assert_eq!(whittaker_m(&p), Err(Error::BranchAmbiguity));
}

#[test]
fn gamma_reflection_and_poles() {
    let z = c(0.3, 0.8);
    let lhs = gamma(z) * gamma(1.0 - z);
    let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
    assert!(rel(lhs, rhs) < 1e-13);
    assert_eq!(recip_gamma(c(-3.0, 0.0)), c(0.0, 0.0));
}

#[test]
fn derivative_matches_finite_difference_at_reference_point() {
    let (kappa, mu, z) = (c(0.0, 1.2), c(0.0, MU_SCATTER), c(0.0, 4.8));
    let h = 1e-6;
    let f = |z: ComplexScalar| whittaker_m(&params(kappa, mu, z)).unwrap().value;
    let fd = (f(z + h) - f(z - h)) / (2.0 * h);
    let d = whittaker_m_derivative(&params(kappa, mu, z)).unwrap().value;
    assert!(rel(d, fd) < 1e-8, "{d} {fd}");
}

#[test]
fn derivative_consistent_with_small_argument_law() {
    // d/dz [z^{1/2+mu} e^{-z/2}] at small z
    let (kappa, mu) = (c(0.0, 0.9), c(0.0, 0.6));
    let z = c(0.0, 1e-6);
    let d = whittaker_m_derivative(&params(kappa, mu, z)).unwrap().value;
    let order = 0.5 + mu;
    let lead = (order / z - 0.5) * (order * z.ln() - 0.5 * z).exp();
    assert!(rel(d, lead) < 1e-5);
}

#[test]
fn kummer_transformation_on_seeded_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for _ in 0..100 {
        let a = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let b = c(rng.gen_range(0.5..4.0), rng.gen_range(-3.0..3.0));
        let r = rng.gen_range(0.0..10.0);
        let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let z = ComplexScalar::from_polar(r, t);
        let lhs = kummer_m(a, b, z).unwrap().value;
        let rhs = z.exp() * kummer_m(b - a, b, -z).unwrap().value;
        assert!(rel(lhs, rhs) <= 10.0 * TOL_SERIES, "a={a} b={b} z={z}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_finite_differences_on_scattering_domain(
        ka in -6.0f64..6.0, mu in 0.05f64..6.0, zi in 0.5f64..20.0
    ) {
        let (kappa, mu) = (c(0.0, ka), c(0.0, mu));
        let z = c(0.0, zi);
        let h = 1e-5 * zi;
        let f = |z: ComplexScalar| whittaker_m(&params(kappa, mu, z)).unwrap().value;
        let fd = (f(z + h) - f(z - h)) / (2.0 * h);
        let fd4 = (8.0 * (f(z + h) - f(z - h)) - (f(z + 2.0 * h) - f(z - 2.0 * h))) / (12.0 * h);
        let d = whittaker_m_derivative(&params(kappa, mu, z)).unwrap().value;
        let scale = d.norm().max(f(z).norm() / zi);
        prop_assert!((d - fd4).norm() / scale <= 1e-7, "d={} fd={} fd4={}", d, fd, fd4);
    }

    #[test]
    fn small_argument_law(ka in -3.0f64..3.0, mu in 0.05f64..3.0, r in 1e-9f64..1e-3, t in 0.0f64..3.0) {
        let (kappa, mu) = (c(0.0, ka), c(0.0, mu));
        let z = ComplexScalar::from_polar(r, t);
        let m = whittaker_m(&params(kappa, mu, z)).unwrap().value;
        let ratio = m / ((0.5 + mu) * z.ln() - 0.5 * z).exp();
        // first-order coefficient of the series
        let c1 = 0.5 - kappa / (1.0 + 2.0 * mu);
        let second = 10.0 * (1.0 + kappa.norm()).powi(2) * r * r;
        prop_assert!((ratio - 1.0).norm() <= c1.norm() * r + second);
        prop_assert!((ratio - 1.0 - c1 * z).norm() <= second);
    }

    #[test]
    fn error_reports_are_bounded(ka in -6.0f64..6.0, mu in 0.05f64..6.0, zi in 0.01f64..25.0) {
        let m = whittaker_m(&params(c(0.0, ka), c(0.0, mu), c(0.0, zi))).unwrap();
        prop_assert!(m.est_error >= 0.0 && m.terms_used >= 1);
        prop_assert!(m.accepted().is_ok());
    }
}
