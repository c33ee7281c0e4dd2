use super::double_double::{CDd, DD_EPSILON};
use super::{check_modulus, is_finite, is_nonpositive_integer, ComplexScalar, EvalReport, N_MAX};
use crate::error::{Error, Result};

// Summation stops once the current term is below this fraction of the sum
// and the term ratio has dropped under 1/2.
const TRUNCATION: f64 = 1.0 / (1u64 << 56) as f64;

/// Kummer's confluent hypergeometric function `M(a, b, z) = 1F1(a; b; z)`.
///
/// The returned `est_error` is a relative bound combining the truncated tail,
/// the double-double rounding accumulated over all terms (scaled by the sum
/// of term moduli, which captures cancellation), and the final rounding to
/// f64.
pub fn kummer_m(a: ComplexScalar, b: ComplexScalar, z: ComplexScalar) -> Result<EvalReport> {
    if !(is_finite(a) && is_finite(b) && is_finite(z)) {
        return Err(Error::NonFinite("kummer parameters"));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::PoleParameter(format!("b = {b}")));
    }
    check_modulus(z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(EvalReport {
            value: ComplexScalar::new(1.0, 0.0),
            est_error: 0.0,
            terms_used: 1,
        });
    }

    let zz = CDd::from_c64(z);
    let az = a.norm();
    let zmod = z.norm();
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut abs_sum = 1.0;
    let mut last = 1.0;
    let mut terms = 1;
    let mut converged = false;

    for n in 0..N_MAX {
        let nf = n as f64;
        let a_n = CDd::from_c64(a).add_real(nf);
        if a_n.is_zero() {
            // a is a non-positive integer: the series is a polynomial
            converged = true;
            last = 0.0;
            break;
        }
        let b_n = CDd::from_c64(b).add_real(nf);
        let den = b_n * CDd::from_c64(ComplexScalar::new(nf + 1.0, 0.0));
        term = (term * a_n * zz).div(den);
        sum = sum + term;
        terms += 1;
        last = term.norm_f64();
        abs_sum += last;

        let ratio = (az + nf + 1.0) * zmod / ((b + nf + 1.0).norm() * (nf + 2.0));
        if ratio < 0.5 && last <= TRUNCATION * sum.norm_f64() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { terms });
    }

    let value = sum.to_c64();
    if !is_finite(value) {
        return Err(Error::NonFinite("kummer_m"));
    }
    let modulus = value.norm();
    let rounding = abs_sum * DD_EPSILON * 8.0 * terms as f64;
    let est_error = if modulus > 0.0 {
        (last + rounding) / modulus + 0.5 * f64::EPSILON
    } else {
        f64::INFINITY
    };
    Ok(EvalReport {
        value,
        est_error,
        terms_used: terms,
    })
}
