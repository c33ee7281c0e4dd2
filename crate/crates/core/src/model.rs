//! Cusp potential, energy-to-Whittaker parameter maps, and the three-component
//! DKP spinors on either side of the cusp.
//!
//! All quantities are in natural units (hbar = c = m = 1). The stationary
//! states carry the time factor `e^{+iEt}`, so the spinor components are
//!
//! ```text
//! Psi'' + [(E - V)^2 - 1] Psi = 0,   Phi = -dPsi/dx,   Theta = -i (E - V) Psi.
//! ```
//!
//! On each half-line `Psi = s^{-1/2} M_{kappa,mu}(s)` with
//! `s = 2 i a V0 e^{-|x|/a}`; Phi is obtained from the contiguous relation
//! for `dM/ds` and Theta from the algebraic relation above.

use crate::error::{Error, Result};
use crate::special::{whittaker_m_with_derivative, ComplexScalar, WhittakerParams};
use serde::{Deserialize, Serialize};

/// Guard band around `E^2 = 1` for scattering energies.
pub const KLEIN_BORDER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Barrier,
    Well,
}

/// `V(x) = +/- V0 exp(-|x|/a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPotential {
    a: f64,
    v0: f64,
    kind: PotentialKind,
}

impl CuspPotential {
    pub fn new(a: f64, v0: f64, kind: PotentialKind) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!("shape parameter a = {a} must be > 0")));
        }
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(Error::InvalidParameter(format!("strength V0 = {v0} must be > 0")));
        }
        Ok(CuspPotential { a, v0, kind })
    }

    pub fn barrier(a: f64, v0: f64) -> Result<Self> {
        Self::new(a, v0, PotentialKind::Barrier)
    }

    pub fn well(a: f64, v0: f64) -> Result<Self> {
        Self::new(a, v0, PotentialKind::Well)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    fn sign(&self) -> f64 {
        match self.kind {
            PotentialKind::Barrier => 1.0,
            PotentialKind::Well => -1.0,
        }
    }

    /// Potential value at `x`.
    pub fn potential_at(&self, x: f64) -> f64 {
        self.sign() * self.v0 * (-x.abs() / self.a).exp()
    }

    /// `s(x) = 2 i a V0 e^{-|x|/a}`, the Whittaker argument on either side.
    pub fn whittaker_argument(&self, x: f64) -> ComplexScalar {
        ComplexScalar::new(0.0, 2.0 * self.a * self.v0 * (-x.abs() / self.a).exp())
    }

    /// Value of the integral of V over the real line for a well, `-2 a V0`.
    pub fn bound_support_integral(&self) -> Result<f64> {
        match self.kind {
            PotentialKind::Well => Ok(-2.0 * self.a * self.v0),
            PotentialKind::Barrier => Err(Error::WrongKind { expected: "well" }),
        }
    }

    pub(crate) fn require(&self, kind: PotentialKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongKind {
                expected: match kind {
                    PotentialKind::Barrier => "barrier",
                    PotentialKind::Well => "well",
                },
            });
        }
        Ok(())
    }
}

/// Whittaker parameters of the scattering solutions, `kappa = i a E`,
/// `mu = i a sqrt(E^2 - 1)` with the positive root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams {
    pub kappa: ComplexScalar,
    pub mu: ComplexScalar,
}

impl ScatterParams {
    pub fn new(e: f64, potential: &CuspPotential) -> Result<Self> {
        if !e.is_finite() {
            return Err(Error::NonFinite("energy"));
        }
        let gap = e * e - 1.0;
        if gap.abs() < KLEIN_BORDER {
            return Err(Error::KleinBorder(e));
        }
        if gap < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scattering needs |E| > 1, got E = {e}"
            )));
        }
        let a = potential.a();
        Ok(ScatterParams {
            kappa: ComplexScalar::new(0.0, a * e),
            mu: ComplexScalar::new(0.0, a * gap.sqrt()),
        })
    }

    /// Asymptotic wave number `k = sqrt(E^2 - 1)`.
    pub fn wave_number(&self, a: f64) -> f64 {
        self.mu.im / a
    }
}

/// Whittaker parameters of the bound-state solutions, `kappa = -i a E`,
/// `mu = a sqrt(1 - E^2) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub kappa: ComplexScalar,
    pub mu: f64,
}

impl BoundParams {
    pub fn new(e: f64, potential: &CuspPotential) -> Result<Self> {
        if !e.is_finite() {
            return Err(Error::NonFinite("energy"));
        }
        if e.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "bound states need |E| < 1, got E = {e}"
            )));
        }
        let a = potential.a();
        let mu = a * (1.0 - e * e).sqrt();
        if 2.0 * mu < crate::special::MU_DEGENERACY {
            return Err(Error::MuDegenerate(2.0 * mu));
        }
        Ok(BoundParams {
            kappa: ComplexScalar::new(0.0, -a * e),
            mu,
        })
    }
}

pub fn scatter_params(e: f64, potential: &CuspPotential) -> Result<ScatterParams> {
    ScatterParams::new(e, potential)
}

/// Components `(Psi, Phi, Theta)` of the DKP spinor at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkpSpinor {
    pub psi: ComplexScalar,
    pub phi: ComplexScalar,
    pub theta: ComplexScalar,
}

impl DkpSpinor {
    pub fn scaled(self, c: ComplexScalar) -> DkpSpinor {
        DkpSpinor {
            psi: c * self.psi,
            phi: c * self.phi,
            theta: c * self.theta,
        }
    }

    pub fn components(&self) -> [ComplexScalar; 3] {
        [self.psi, self.phi, self.theta]
    }
}

impl std::ops::Add for DkpSpinor {
    type Output = DkpSpinor;
    fn add(self, rhs: DkpSpinor) -> DkpSpinor {
        DkpSpinor {
            psi: self.psi + rhs.psi,
            phi: self.phi + rhs.phi,
            theta: self.theta + rhs.theta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Spinor built from `Psi = s^{-1/2} M_{kappa,mu}(s)` at position `x`.
fn regular_spinor(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    kappa: ComplexScalar,
    mu: ComplexScalar,
    side: Side,
) -> Result<DkpSpinor> {
    let s = potential.whittaker_argument(x);
    let params = WhittakerParams::new(kappa, mu, s)?;
    let (m, dm) = whittaker_m_with_derivative(&params)?;
    let (m, dm) = (m.accepted()?, dm.accepted()?);
    let root = s.sqrt();
    let psi = m / root;
    // s d/ds (s^{-1/2} M) = s^{-1/2} (s M' - M/2); ds/dx = -/+ s/a on the left/right
    let log_slope = (s * dm - 0.5 * m) / root;
    let a = potential.a();
    let phi = match side {
        Side::Left => -log_slope / a,
        Side::Right => log_slope / a,
    };
    let theta = ComplexScalar::new(0.0, -1.0) * (e - potential.potential_at(x)) * psi;
    Ok(DkpSpinor { psi, phi, theta })
}

fn require_half_line(x: f64, side: Side) -> Result<()> {
    let ok = match side {
        Side::Left => x <= 0.0,
        Side::Right => x >= 0.0,
    };
    if !ok || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "x = {x} is outside the {} half-line",
            if side == Side::Left { "left" } else { "right" }
        )));
    }
    Ok(())
}

/// Incident wave `c1 s^{-1/2} M_{kappa,mu}(s)` on `x <= 0`.
pub fn spinor_incident(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    c1: ComplexScalar,
) -> Result<DkpSpinor> {
    potential.require(PotentialKind::Barrier)?;
    require_half_line(x, Side::Left)?;
    let p = ScatterParams::new(e, potential)?;
    Ok(regular_spinor(x, e, potential, p.kappa, p.mu, Side::Left)?.scaled(c1))
}

/// Reflected wave `c2 s^{-1/2} M_{kappa,-mu}(s)` on `x <= 0`.
pub fn spinor_reflected(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    c2: ComplexScalar,
) -> Result<DkpSpinor> {
    potential.require(PotentialKind::Barrier)?;
    require_half_line(x, Side::Left)?;
    let p = ScatterParams::new(e, potential)?;
    Ok(regular_spinor(x, e, potential, p.kappa, -p.mu, Side::Left)?.scaled(c2))
}

/// Transmitted wave `c3 s^{-1/2} M_{kappa,-mu}(s)` on `x >= 0`.
pub fn spinor_transmitted(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    c3: ComplexScalar,
) -> Result<DkpSpinor> {
    potential.require(PotentialKind::Barrier)?;
    require_half_line(x, Side::Right)?;
    let p = ScatterParams::new(e, potential)?;
    Ok(regular_spinor(x, e, potential, p.kappa, -p.mu, Side::Right)?.scaled(c3))
}

/// Regular (square-integrable) well solution on `x <= 0`.
pub fn spinor_bound_left(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    c: ComplexScalar,
) -> Result<DkpSpinor> {
    potential.require(PotentialKind::Well)?;
    require_half_line(x, Side::Left)?;
    let p = BoundParams::new(e, potential)?;
    let mu = ComplexScalar::new(p.mu, 0.0);
    Ok(regular_spinor(x, e, potential, p.kappa, mu, Side::Left)?.scaled(c))
}

/// Regular (square-integrable) well solution on `x >= 0`.
pub fn spinor_bound_right(
    x: f64,
    e: f64,
    potential: &CuspPotential,
    c: ComplexScalar,
) -> Result<DkpSpinor> {
    potential.require(PotentialKind::Well)?;
    require_half_line(x, Side::Right)?;
    let p = BoundParams::new(e, potential)?;
    let mu = ComplexScalar::new(p.mu, 0.0);
    Ok(regular_spinor(x, e, potential, p.kappa, mu, Side::Right)?.scaled(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values() {
        let b = CuspPotential::barrier(0.6, 4.0).unwrap();
        assert_eq!(b.potential_at(0.0), 4.0);
        let b = CuspPotential::barrier(1.0, 4.0).unwrap();
        assert!((b.potential_at(-1.0) - 4.0 / std::f64::consts::E).abs() < 1e-15);
        assert_eq!(b.potential_at(1.0), b.potential_at(-1.0));
        let w = CuspPotential::well(0.5, 3.60534).unwrap();
        assert_eq!(w.potential_at(0.0), -3.60534);
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(CuspPotential::barrier(0.0, 1.0).is_err());
        assert!(CuspPotential::well(1.0, -2.0).is_err());
        assert!(CuspPotential::well(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn support_integral() {
        let w = CuspPotential::well(0.5, 4.0).unwrap();
        assert_eq!(w.bound_support_integral().unwrap(), -4.0);
        let w = CuspPotential::well(1.0, 1.0).unwrap();
        assert_eq!(w.bound_support_integral().unwrap(), -2.0);
        let tiny = CuspPotential::well(1e-12, 1.0).unwrap().bound_support_integral().unwrap();
        assert!(tiny < 0.0 && tiny > -1e-11);
        let b = CuspPotential::barrier(0.5, 4.0).unwrap();
        assert!(matches!(b.bound_support_integral(), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn scatter_params_values() {
        let pot = CuspPotential::barrier(0.6, 4.0).unwrap();
        let p = scatter_params(2.0, &pot).unwrap();
        assert!((p.kappa - ComplexScalar::new(0.0, 1.2)).norm() < 1e-15);
        assert!((p.mu.im - 1.039_230_484_541_326).abs() < 1e-14);
        assert_eq!(p.mu.re, 0.0);
        let q = scatter_params(-2.0, &pot).unwrap();
        assert!((q.kappa - ComplexScalar::new(0.0, -1.2)).norm() < 1e-15);
        assert_eq!(q.mu, p.mu);
        assert!(matches!(scatter_params(1.000_000_1, &pot), Err(Error::KleinBorder(_))));
    }

    #[test]
    fn bound_params_values() {
        let pot = CuspPotential::well(0.5, 1.0).unwrap();
        let p = BoundParams::new(0.6, &pot).unwrap();
        assert!((p.kappa - ComplexScalar::new(0.0, -0.3)).norm() < 1e-15);
        assert!((p.mu - 0.4).abs() < 1e-15);
        assert!(BoundParams::new(1.0, &pot).is_err());
    }

    #[test]
    fn spinor_half_line_and_kind_checks() {
        let barrier = CuspPotential::barrier(0.6, 4.0).unwrap();
        let well = CuspPotential::well(0.6, 4.0).unwrap();
        let one = ComplexScalar::new(1.0, 0.0);
        assert!(spinor_incident(0.5, 2.0, &barrier, one).is_err());
        assert!(spinor_transmitted(-0.5, 2.0, &barrier, one).is_err());
        assert!(matches!(
            spinor_incident(-1.0, 2.0, &well, one),
            Err(Error::WrongKind { .. })
        ));
        assert!(matches!(
            spinor_bound_left(-1.0, 0.5, &barrier, one),
            Err(Error::WrongKind { .. })
        ));
    }
}
