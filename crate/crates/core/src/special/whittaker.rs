use super::gamma::recip_gamma;
use super::{gamma, kummer_m, ComplexScalar, EvalReport, WhittakerParams};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
// Relative accuracy of the Lanczos Gamma on the arguments W needs.
const GAMMA_REL_ERROR: f64 = 1e-14;

/// Whittaker `M_{kappa,mu}(z) = e^{-z/2} z^{1/2+mu} M(1/2+mu-kappa, 1+2mu, z)`.
pub fn whittaker_m(p: &WhittakerParams) -> Result<EvalReport> {
    let z = p.argument();
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchAmbiguity);
    }
    let order = 0.5 + p.mu();
    if z.re == 0.0 && z.im == 0.0 {
        if order.re > 0.0 {
            return Ok(EvalReport {
                value: ComplexScalar::new(0.0, 0.0),
                est_error: 0.0,
                terms_used: 1,
            });
        }
        return Err(Error::InvalidParameter(
            "M_{kappa,mu}(0) diverges for Re(1/2 + mu) <= 0".into(),
        ));
    }
    let series = kummer_m(order - p.kappa(), 1.0 + 2.0 * p.mu(), z)?;
    let exponent = -0.5 * z + order * z.ln();
    let value = exponent.exp() * series.value;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("whittaker_m"));
    }
    Ok(EvalReport {
        value,
        est_error: series.est_error + EPS * (2.0 + exponent.norm()),
        terms_used: series.terms_used,
    })
}

/// `dM_{kappa,mu}(z)/dz` from the contiguous relation
/// `z M' = (z/2 - kappa) M_{kappa,mu} + (1/2 + mu + kappa) M_{kappa+1,mu}`.
pub fn whittaker_m_derivative(p: &WhittakerParams) -> Result<EvalReport> {
    whittaker_m_with_derivative(p).map(|(_, d)| d)
}

/// `M_{kappa,mu}(z)` together with its derivative, sharing the series for
/// `M_{kappa,mu}`.
pub fn whittaker_m_with_derivative(p: &WhittakerParams) -> Result<(EvalReport, EvalReport)> {
    let z = p.argument();
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::InvalidParameter(
            "derivative at z = 0 is not evaluated".into(),
        ));
    }
    let m0 = whittaker_m(p)?;
    let m1 = whittaker_m(&p.with_kappa_plus_one()?)?;
    let t0 = (0.5 * z - p.kappa()) * m0.value;
    let t1 = (0.5 + p.mu() + p.kappa()) * m1.value;
    let value = (t0 + t1) / z;
    let derivative = EvalReport {
        value,
        est_error: combine_errors(&[(t0, m0.est_error), (t1, m1.est_error)], t0 + t1),
        terms_used: m0.terms_used + m1.terms_used,
    };
    Ok((m0, derivative))
}

/// Whittaker `W_{kappa,mu}(z)` as the Gamma-weighted combination of
/// `M_{kappa,mu}` and `M_{kappa,-mu}`. The logarithmic case (2mu integer) is
/// rejected.
pub fn whittaker_w(p: &WhittakerParams) -> Result<EvalReport> {
    let (c_plus, c_minus) = w_coefficients(p)?;
    let m_plus = whittaker_m(p)?;
    let m_minus = whittaker_m(&p.with_mu_negated()?)?;
    let t0 = c_plus * m_plus.value;
    let t1 = c_minus * m_minus.value;
    let value = t0 + t1;
    Ok(EvalReport {
        value,
        est_error: combine_errors(
            &[
                (t0, m_plus.est_error + GAMMA_REL_ERROR),
                (t1, m_minus.est_error + GAMMA_REL_ERROR),
            ],
            value,
        ),
        terms_used: m_plus.terms_used + m_minus.terms_used,
    })
}

/// `dW_{kappa,mu}(z)/dz`, same combination applied to the M derivatives.
pub fn whittaker_w_derivative(p: &WhittakerParams) -> Result<EvalReport> {
    let (c_plus, c_minus) = w_coefficients(p)?;
    let d_plus = whittaker_m_derivative(p)?;
    let d_minus = whittaker_m_derivative(&p.with_mu_negated()?)?;
    let t0 = c_plus * d_plus.value;
    let t1 = c_minus * d_minus.value;
    let value = t0 + t1;
    Ok(EvalReport {
        value,
        est_error: combine_errors(
            &[
                (t0, d_plus.est_error + GAMMA_REL_ERROR),
                (t1, d_minus.est_error + GAMMA_REL_ERROR),
            ],
            value,
        ),
        terms_used: d_plus.terms_used + d_minus.terms_used,
    })
}

fn w_coefficients(p: &WhittakerParams) -> Result<(ComplexScalar, ComplexScalar)> {
    let two_mu = 2.0 * p.mu();
    if two_mu.im == 0.0 && two_mu.re.fract() == 0.0 {
        return Err(Error::LogarithmicCase(format!("{two_mu}")));
    }
    let c_plus = gamma(-two_mu) * recip_gamma(0.5 - p.mu() - p.kappa());
    let c_minus = gamma(two_mu) * recip_gamma(0.5 + p.mu() - p.kappa());
    Ok((c_plus, c_minus))
}

fn combine_errors(parts: &[(ComplexScalar, f64)], total: ComplexScalar) -> f64 {
    let modulus = total.norm();
    if modulus == 0.0 {
        return f64::INFINITY;
    }
    let abs_err: f64 = parts.iter().map(|(t, e)| t.norm() * (e + EPS)).sum();
    abs_err / modulus + EPS
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn m_closed_form_for_kappa_zero_mu_half() {
        // M_{0,1/2}(z) = 2 sinh(z/2)
        let p = WhittakerParams::new(c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let m = whittaker_m(&p).unwrap();
        let expect = 0.5f64.exp() - (-0.5f64).exp();
        assert!((m.value.re - expect).abs() < 1e-15);
        assert!(m.value.im.abs() < 1e-16);
        let d = whittaker_m_derivative(&p).unwrap();
        let expect = 0.5 * (0.5f64.exp() + (-0.5f64).exp());
        assert!((d.value.re - expect).abs() < 1e-14);
    }

    #[test]
    fn negative_real_argument_is_ambiguous() {
        let p = WhittakerParams::new(c(0.1, 0.0), c(0.3, 0.0), c(-1.0, 0.0)).unwrap();
        assert_eq!(whittaker_m(&p), Err(Error::BranchAmbiguity));
    }

    #[test]
    fn w_rejects_integer_two_mu() {
        let p = WhittakerParams::new(c(0.2, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(whittaker_w(&p), Err(Error::LogarithmicCase(_))));
    }

    #[test]
    fn params_reject_degenerate_mu_and_poles() {
        assert!(matches!(
            WhittakerParams::new(c(0.0, 0.0), c(1e-8, 0.0), c(1.0, 0.0)),
            Err(Error::MuDegenerate(_))
        ));
        assert!(matches!(
            WhittakerParams::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)),
            Err(Error::PoleParameter(_))
        ));
    }
}
