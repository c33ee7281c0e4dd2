//! Direct integration of `psi'' + [(E - V)^2 - 1] psi = 0` for the cusp
//! potential, independent of the special-function code. Used to cross-check
//! reflection/transmission coefficients and bound-state energies.

mod dopri;

use crate::error::{Error, Result};
use crate::model::{CuspPotential, PotentialKind};
use crate::scattering::uniform_grid;
use crate::special::ComplexScalar;
use dopri::State;
use rayon::prelude::*;

/// Default half-width of the integration box in units of `a`.
pub const DEFAULT_BOX: f64 = 30.0;
/// Smallest admissible half-width of the box in units of `a`.
pub const MIN_BOX: f64 = 12.0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-6;
// Per-step errors accumulate to roughly 150x the step tolerance over a box,
// so steps are controlled at tol/100 to keep R + T - 1 within a few tol.
const STEP_TOL_FACTOR: f64 = 0.01;
/// Bisection width for shooting eigenvalues.
pub const SHOOT_E_TOL: f64 = 1e-9;
/// Energy grid for the shooting sign-change scan.
pub const SHOOT_GRID: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeProblem {
    pub potential: CuspPotential,
    pub e: f64,
    pub x_left: f64,
    pub x_right: f64,
    /// Accuracy target for the integrated solution.
    pub tol: f64,
}

impl OdeProblem {
    /// Box `[-30a, 30a]`, tolerance `1e-10`.
    pub fn new(potential: CuspPotential, e: f64) -> Result<Self> {
        let half = DEFAULT_BOX * potential.a();
        OdeProblem {
            potential,
            e,
            x_left: -half,
            x_right: half,
            tol: DEFAULT_TOL,
        }
        .validated()
    }

    pub fn with_box(self, x_left: f64, x_right: f64) -> Result<Self> {
        OdeProblem { x_left, x_right, ..self }.validated()
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        OdeProblem { tol, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        let min = MIN_BOX * self.potential.a();
        if !self.e.is_finite() {
            return Err(Error::InvalidParameter(format!("energy {}", self.e)));
        }
        if !(self.x_left <= -min && self.x_right >= min) {
            return Err(Error::InvalidParameter(format!(
                "box [{}, {}] must contain [-{min}, {min}]",
                self.x_left, self.x_right
            )));
        }
        if !(self.tol >= MIN_TOL && self.tol <= MAX_TOL) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {:e} outside [{MIN_TOL:e}, {MAX_TOL:e}]",
                self.tol
            )));
        }
        Ok(self)
    }

    fn rhs(&self) -> impl Fn(f64, &State) -> State + '_ {
        move |x, y| {
            let w = self.e - self.potential.potential_at(x);
            let q = w * w - 1.0;
            [y[2], y[3], -q * y[0], -q * y[1]]
        }
    }

    fn initial_step(&self) -> f64 {
        let w = self.e.abs() + self.potential.v0() + 1.0;
        0.05 * self.potential.a().min(1.0 / w)
    }

    fn integrate(&self, from: f64, to: f64, y: State, samples: &[f64]) -> Result<dopri::Run> {
        dopri::integrate(self.rhs(), from, y, to, self.tol * STEP_TOL_FACTOR, self.initial_step(), samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// `psi` and `dpsi/dx` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgState {
    pub x: f64,
    pub psi: ComplexScalar,
    pub dpsi: ComplexScalar,
}

impl KgState {
    fn from_raw(x: f64, y: &State) -> Self {
        KgState {
            x,
            psi: ComplexScalar::new(y[0], y[1]),
            dpsi: ComplexScalar::new(y[2], y[3]),
        }
    }

    fn raw(&self) -> State {
        [self.psi.re, self.psi.im, self.dpsi.re, self.dpsi.im]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KgSolution {
    /// Solution at the requested sample points, in request order.
    pub samples: Vec<KgState>,
    /// State at the far edge of the box.
    pub end: KgState,
    /// Accumulated local error estimate, relative to `1 + |y|`.
    pub global_error: f64,
    pub steps: usize,
}

/// Integrates across the whole box starting from the edge selected by
/// `direction`. The cusp at `x = 0` is a mandatory step boundary.
pub fn integrate_kg(
    prob: &OdeProblem,
    init_psi: ComplexScalar,
    init_dpsi: ComplexScalar,
    direction: Direction,
    samples: &[f64],
) -> Result<KgSolution> {
    let (start, end) = match direction {
        Direction::LeftToRight => (prob.x_left, prob.x_right),
        Direction::RightToLeft => (prob.x_right, prob.x_left),
    };
    if let Some(&s) = samples.iter().find(|s| !(**s >= prob.x_left && **s <= prob.x_right)) {
        return Err(Error::InvalidParameter(format!("sample point {s} outside the box")));
    }
    let (first, second): (Vec<usize>, Vec<usize>) =
        (0..samples.len()).partition(|&i| (samples[i] - start) * (0.0 - samples[i]) >= 0.0);
    let pick = |idx: &[usize]| idx.iter().map(|&i| samples[i]).collect::<Vec<_>>();

    let init = KgState { x: start, psi: init_psi, dpsi: init_dpsi };
    let a = prob.integrate(start, 0.0, init.raw(), &pick(&first))?;
    let b = prob.integrate(0.0, end, a.end, &pick(&second))?;

    let mut out = vec![KgState::from_raw(0.0, &[0.0; 4]); samples.len()];
    for (k, &i) in first.iter().enumerate() {
        out[i] = KgState::from_raw(samples[i], &a.samples[k]);
    }
    for (k, &i) in second.iter().enumerate() {
        out[i] = KgState::from_raw(samples[i], &b.samples[k]);
    }
    Ok(KgSolution {
        samples: out,
        end: KgState::from_raw(end, &b.end),
        global_error: a.error_sum + b.error_sum,
        steps: a.steps + b.steps,
    })
}

/// Plane-wave content `psi = A e^{ikx} + B e^{-ikx}` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxDecomposition {
    pub amp_right_moving: ComplexScalar,
    pub amp_left_moving: ComplexScalar,
}

impl FluxDecomposition {
    /// Exact 2x2 inversion of `psi` and `psi'` at `state.x` for momentum `k`.
    pub fn at(state: &KgState, k: f64) -> Self {
        let ik = ComplexScalar::new(0.0, k);
        let phase = ComplexScalar::new(0.0, k * state.x).exp();
        let d = state.dpsi / ik;
        FluxDecomposition {
            amp_right_moving: 0.5 * (state.psi + d) / phase,
            amp_left_moving: 0.5 * (state.psi - d) * phase,
        }
    }

    pub fn reconstruct(&self, x: f64, k: f64) -> (ComplexScalar, ComplexScalar) {
        let ik = ComplexScalar::new(0.0, k);
        let p = (ik * x).exp();
        let m = (-ik * x).exp();
        let psi = self.amp_right_moving * p + self.amp_left_moving * m;
        let dpsi = ik * (self.amp_right_moving * p - self.amp_left_moving * m);
        (psi, dpsi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRt {
    pub r: f64,
    pub t: f64,
    pub global_error: f64,
}

impl OracleRt {
    pub fn flux_defect(&self) -> f64 {
        (self.r + self.t - 1.0).abs()
    }
}

/// Reflection and transmission from a pure `e^{ikx}` wave on the right edge,
/// integrated to the left edge and split into incident and reflected parts.
pub fn oracle_rt(prob: &OdeProblem) -> Result<OracleRt> {
    if !(prob.e * prob.e > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scattering needs |E| > 1, got {}",
            prob.e
        )));
    }
    let k = (prob.e * prob.e - 1.0).sqrt();
    let ik = ComplexScalar::new(0.0, k);
    let psi = (ik * prob.x_right).exp();
    let sol = integrate_kg(prob, psi, ik * psi, Direction::RightToLeft, &[])?;
    let amps = FluxDecomposition::at(&sol.end, k);
    let a2 = amps.amp_right_moving.norm_sqr();
    if !(a2 > 0.0 && a2.is_finite()) {
        return Err(Error::NonFinite("incident amplitude"));
    }
    Ok(OracleRt {
        r: amps.amp_left_moving.norm_sqr() / a2,
        t: 1.0 / a2,
        global_error: sol.global_error,
    })
}

/// Decaying data `e^{-q|x|}` on both edges, integrated to `x = 0`.
fn shoot(prob: &OdeProblem) -> Result<(KgState, KgState)> {
    let q = (1.0 - prob.e * prob.e).sqrt();
    let left_psi = (q * prob.x_left).exp();
    let right_psi = (-q * prob.x_right).exp();
    let left = prob.integrate(prob.x_left, 0.0, [left_psi, 0.0, q * left_psi, 0.0], &[])?;
    let right = prob.integrate(prob.x_right, 0.0, [right_psi, 0.0, -q * right_psi, 0.0], &[])?;
    Ok((KgState::from_raw(0.0, &left.end), KgState::from_raw(0.0, &right.end)))
}

/// Wronskian of the two decaying solutions at the origin, normalized by
/// their magnitudes so that it lies in `[-1, 1]`.
pub fn shooting_wronskian(prob: &OdeProblem) -> Result<f64> {
    prob.potential.require(PotentialKind::Well)?;
    if !(prob.e.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bound states need |E| < 1, got {}",
            prob.e
        )));
    }
    let (l, r) = shoot(prob)?;
    let w = l.psi.re * r.dpsi.re - l.dpsi.re * r.psi.re;
    let nl = l.psi.re.hypot(l.dpsi.re);
    let nr = r.psi.re.hypot(r.dpsi.re);
    Ok(w / (nl * nr))
}

/// `|psi_L'/psi_L - psi_R'/psi_R|` at the origin.
pub fn log_derivative_mismatch(prob: &OdeProblem) -> Result<f64> {
    prob.potential.require(PotentialKind::Well)?;
    let (l, r) = shoot(prob)?;
    if l.psi.re == 0.0 || r.psi.re == 0.0 {
        return Err(Error::InvalidParameter("psi(0) = 0; use the Wronskian".into()));
    }
    Ok((l.dpsi.re / l.psi.re - r.dpsi.re / r.psi.re).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBoundState {
    pub e: f64,
    pub parity: Parity,
}

/// Shooting eigenvalues of the well in `(-1 + 1e-4, 1 - 1e-4)`: sign changes
/// of the origin Wronskian on a grid, bisected to `1e-9`.
pub fn oracle_bound_energies(potential: &CuspPotential, tol: f64) -> Result<Vec<OracleBoundState>> {
    potential.require(PotentialKind::Well)?;
    let base = OdeProblem::new(*potential, 0.0)?.with_tol(tol)?;
    let at = |e: f64| OdeProblem { e, ..base };
    let edge = crate::bound_states::SEARCH_EDGE;
    let grid = uniform_grid(-1.0 + edge, 1.0 - edge, SHOOT_GRID)?;
    let values = grid
        .par_iter()
        .map(|&e| shooting_wronskian(&at(e)))
        .collect::<Result<Vec<f64>>>()?;

    let brackets: Vec<(f64, f64, f64)> = (1..grid.len())
        .filter(|&i| values[i - 1].signum() != values[i].signum() || values[i] == 0.0)
        .map(|i| (grid[i - 1], grid[i], values[i - 1]))
        .collect();

    brackets
        .par_iter()
        .map(|&(mut lo, mut hi, f_lo)| {
            while hi - lo > SHOOT_E_TOL {
                let mid = 0.5 * (lo + hi);
                let f = shooting_wronskian(&at(mid))?;
                if f == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if f.signum() == f_lo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let e = 0.5 * (lo + hi);
            let (l, _) = shoot(&at(e))?;
            let parity = if l.dpsi.re.abs() < l.psi.re.abs() {
                Parity::Even
            } else {
                Parity::Odd
            };
            Ok(OracleBoundState { e, parity })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_validation() {
        let p = CuspPotential::barrier(0.6, 4.0).unwrap();
        assert!(OdeProblem::new(p, 2.0).is_ok());
        assert!(OdeProblem::new(p, 2.0).unwrap().with_box(-5.0, 30.0).is_err());
        assert!(OdeProblem::new(p, 2.0).unwrap().with_tol(1e-15).is_err());
        assert!(OdeProblem::new(p, 2.0).unwrap().with_tol(1e-5).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let amps = FluxDecomposition {
            amp_right_moving: ComplexScalar::new(0.3, -1.2),
            amp_left_moving: ComplexScalar::new(-0.7, 0.4),
        };
        let (psi, dpsi) = amps.reconstruct(-4.2, 1.7);
        let back = FluxDecomposition::at(&KgState { x: -4.2, psi, dpsi }, 1.7);
        assert!((back.amp_right_moving - amps.amp_right_moving).norm() < 1e-14);
        assert!((back.amp_left_moving - amps.amp_left_moving).norm() < 1e-14);
    }
}
