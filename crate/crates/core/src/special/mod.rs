//! Confluent hypergeometric and Whittaker functions for complex parameters
//! and argument.
//!
//! Kummer's function is summed directly from its Taylor series. Terms are
//! formed and accumulated in double-double arithmetic, so the cancellation
//! that occurs for purely imaginary arguments of modulus up to [`Z_MAX`]
//! (term magnitudes up to ~e^|z| against an O(1) sum) does not reach the
//! f64 result. The Whittaker functions are built on top of it with the
//! principal branch for every power and logarithm.

mod double_double;
mod gamma;
mod kummer;
mod whittaker;

pub use double_double::{CDd, Dd, DD_EPSILON};
pub use gamma::{gamma, recip_gamma};
pub use kummer::kummer_m;
pub use whittaker::{
    whittaker_m, whittaker_m_derivative, whittaker_m_with_derivative, whittaker_w,
    whittaker_w_derivative,
};

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type ComplexScalar = Complex64;

/// Largest supported argument modulus.
pub const Z_MAX: f64 = 30.0;
/// Relative accuracy target of the series evaluation.
pub const TOL_SERIES: f64 = 1e-14;
/// Hard cap on the number of series terms.
pub const N_MAX: usize = 500;
/// Reports with a larger error estimate must not be consumed downstream.
pub const TOL_ACCEPT: f64 = 1e-9;
/// `|2 mu|` below this is rejected (the two regular solutions coincide).
pub const MU_DEGENERACY: f64 = 1e-6;

/// A function value with its estimated relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: ComplexScalar,
    /// Estimated relative error of `value`.
    pub est_error: f64,
    pub terms_used: usize,
}

impl EvalReport {
    /// Returns the value if its error estimate is within [`TOL_ACCEPT`].
    pub fn accepted(&self) -> Result<ComplexScalar> {
        if !(self.est_error <= TOL_ACCEPT) {
            return Err(Error::Inaccurate {
                est: self.est_error,
                tol: TOL_ACCEPT,
            });
        }
        Ok(self.value)
    }
}

/// Parameters `(kappa, mu, z)` of a Whittaker function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerParams {
    kappa: ComplexScalar,
    mu: ComplexScalar,
    argument: ComplexScalar,
}

impl WhittakerParams {
    pub fn new(kappa: ComplexScalar, mu: ComplexScalar, argument: ComplexScalar) -> Result<Self> {
        if !(is_finite(kappa) && is_finite(mu) && is_finite(argument)) {
            return Err(Error::NonFinite("whittaker parameters"));
        }
        let b = 1.0 + 2.0 * mu;
        if is_nonpositive_integer(b) {
            return Err(Error::PoleParameter(format!("1 + 2mu = {b}")));
        }
        if (2.0 * mu).norm() < MU_DEGENERACY {
            return Err(Error::MuDegenerate((2.0 * mu).norm()));
        }
        check_modulus(argument)?;
        Ok(WhittakerParams {
            kappa,
            mu,
            argument,
        })
    }

    pub fn kappa(&self) -> ComplexScalar {
        self.kappa
    }

    pub fn mu(&self) -> ComplexScalar {
        self.mu
    }

    pub fn argument(&self) -> ComplexScalar {
        self.argument
    }

    /// Same `mu` and argument with `kappa` shifted by one.
    pub fn with_kappa_plus_one(&self) -> Result<Self> {
        WhittakerParams::new(self.kappa + 1.0, self.mu, self.argument)
    }

    /// Same `kappa` and argument with `mu` negated.
    pub fn with_mu_negated(&self) -> Result<Self> {
        WhittakerParams::new(self.kappa, -self.mu, self.argument)
    }
}

pub(crate) fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub(crate) fn is_nonpositive_integer(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

pub(crate) fn check_modulus(z: ComplexScalar) -> Result<()> {
    let modulus = z.norm();
    if modulus > Z_MAX {
        return Err(Error::DomainTooLarge {
            modulus,
            limit: Z_MAX,
        });
    }
    Ok(())
}
