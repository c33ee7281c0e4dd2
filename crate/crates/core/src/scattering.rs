//! Reflection and transmission through the cusp barrier.
//!
//! Continuity of the spinor at `x = 0` is solved as a generic 2x2 complex
//! linear system in `(c2/c1, c3/c1)` from the Psi and Phi components. Theta
//! then matches automatically because `Theta = -i (E - V) Psi` and `V` is
//! continuous; it is still included in the reported residual.

use crate::error::{Error, Result};
use crate::model::{
    spinor_incident, spinor_reflected, spinor_transmitted, CuspPotential, DkpSpinor,
    PotentialKind, ScatterParams,
};
use crate::special::ComplexScalar;
use rayon::prelude::*;
use serde::Serialize;

/// Matching systems with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Maximum tolerated `|R + T - 1|`.
pub const UNITARITY_TOL: f64 = 1e-8;
/// A refined maximum qualifies as a transmission resonance when `T >= 1 - PEAK_T_TOL`.
pub const PEAK_T_TOL: f64 = 1e-3;
/// Width of the final golden-section bracket around a resonance.
pub const PEAK_REFINE_TOL: f64 = 1e-4;

const ONE: ComplexScalar = ComplexScalar::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingSolution {
    pub c2_over_c1: ComplexScalar,
    pub c3_over_c1: ComplexScalar,
    /// Largest relative defect over (Psi, Phi, Theta) of
    /// `G_inc(0) + G_ref(0) = G_trans(0)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub e: f64,
    pub r: f64,
    pub t: f64,
    pub matching: MatchingSolution,
}

impl ScatteringResult {
    pub fn unitarity_defect(&self) -> f64 {
        (self.r + self.t - 1.0).abs()
    }
}

/// The three unit-amplitude spinors evaluated at the cusp.
pub(crate) fn spinors_at_origin(
    e: f64,
    potential: &CuspPotential,
) -> Result<(DkpSpinor, DkpSpinor, DkpSpinor)> {
    Ok((
        spinor_incident(0.0, e, potential, ONE)?,
        spinor_reflected(0.0, e, potential, ONE)?,
        spinor_transmitted(0.0, e, potential, ONE)?,
    ))
}

fn condition_number_2x2(m: [[ComplexScalar; 2]; 2]) -> f64 {
    let frob2: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // sigma_max^2 + sigma_min^2 = ||m||_F^2, sigma_max sigma_min = |det|
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let smax2 = 0.5 * (frob2 + disc);
    smax2 / det
}

/// Solve the continuity conditions at `x = 0` for the amplitude ratios.
pub fn solve_matching(e: f64, potential: &CuspPotential) -> Result<MatchingSolution> {
    potential.require(PotentialKind::Barrier)?;
    let (inc, refl, trans) = spinors_at_origin(e, potential)?;

    // c2 * refl - c3 * trans = -inc   (Psi and Phi rows)
    let m = [[refl.psi, -trans.psi], [refl.phi, -trans.phi]];
    let cond = condition_number_2x2(m);
    if !(cond <= MAX_CONDITION) {
        return Err(Error::SingularMatching(cond));
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let (b0, b1) = (-inc.psi, -inc.phi);
    let c2 = (b0 * m[1][1] - m[0][1] * b1) / det;
    let c3 = (m[0][0] * b1 - m[1][0] * b0) / det;

    let residual = matching_residual(&inc, &refl.scaled(c2), &trans.scaled(c3));
    if !residual.is_finite() {
        return Err(Error::NonFinite("matching residual"));
    }
    Ok(MatchingSolution {
        c2_over_c1: c2,
        c3_over_c1: c3,
        residual,
    })
}

fn matching_residual(inc: &DkpSpinor, refl: &DkpSpinor, trans: &DkpSpinor) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, r), t) in inc
        .components()
        .iter()
        .zip(refl.components().iter())
        .zip(trans.components().iter())
    {
        let scale = i.norm().max(r.norm()).max(t.norm());
        if scale > 0.0 {
            worst = worst.max((i + r - t).norm() / scale);
        }
    }
    worst
}

/// `(2 i a V0)^{+mu}` and `(2 i a V0)^{-mu}`, principal branch.
pub fn plane_wave_normalizations(e: f64, potential: &CuspPotential) -> Result<(ComplexScalar, ComplexScalar)> {
    let p = ScatterParams::new(e, potential)?;
    let log_s0 = potential.whittaker_argument(0.0).ln();
    Ok(((p.mu * log_s0).exp(), (-p.mu * log_s0).exp()))
}

/// `R` and `T` from the amplitude ratios and the asymptotic normalizations of
/// the incident (`n_plus`) and outgoing (`n_minus`) waves.
pub fn rt_from_amplitudes(
    c2_over_c1: ComplexScalar,
    c3_over_c1: ComplexScalar,
    n_plus: ComplexScalar,
    n_minus: ComplexScalar,
) -> (f64, f64) {
    let ratio = n_minus / n_plus;
    ((c2_over_c1 * ratio).norm_sqr(), (c3_over_c1 * ratio).norm_sqr())
}

/// Reflection and transmission coefficients at energy `e`.
pub fn reflection_transmission(e: f64, potential: &CuspPotential) -> Result<ScatteringResult> {
    let matching = solve_matching(e, potential)?;
    let (n_plus, n_minus) = plane_wave_normalizations(e, potential)?;
    let (r, t) = rt_from_amplitudes(matching.c2_over_c1, matching.c3_over_c1, n_plus, n_minus);
    if !(r.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite("reflection/transmission"));
    }
    let defect = (r + t - 1.0).abs();
    if defect > UNITARITY_TOL {
        return Err(Error::UnitarityViolation(defect));
    }
    Ok(ScatteringResult { e, r, t, matching })
}

/// One grid point of a sweep; failures are kept per point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub e: f64,
    pub outcome: Result<ScatteringResult>,
}

pub(crate) fn uniform_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::EmptyGrid { min: 2 });
    }
    let step = (max - min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { max } else { min + step * i as f64 })
        .collect())
}

/// `R`, `T` at each listed energy, in input order.
pub fn scan_energies(potential: &CuspPotential, energies: &[f64]) -> Vec<SweepPoint> {
    energies
        .par_iter()
        .map(|&e| SweepPoint {
            e,
            outcome: reflection_transmission(e, potential),
        })
        .collect()
}

/// Uniform energy sweep over `[e_min, e_max]`, all outside `[-1, 1]`.
pub fn sweep_energy(
    potential: &CuspPotential,
    e_min: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<SweepPoint>> {
    potential.require(PotentialKind::Barrier)?;
    let grid = uniform_grid(e_min, e_max, n)?;
    if !(e_min > 1.0 || e_max < -1.0) {
        return Err(Error::InvalidParameter(format!(
            "energy grid [{e_min}, {e_max}] must lie entirely in |E| > 1"
        )));
    }
    Ok(scan_energies(potential, &grid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    Energy,
    Strength,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSample {
    pub param: f64,
    pub t: Result<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub param: f64,
    pub t: f64,
}

/// Transmission sampled along one parameter, with refined resonance peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceScan {
    pub axis: ScanAxis,
    pub samples: Vec<ScanSample>,
    /// Refined peak positions, strictly increasing.
    pub peaks: Vec<Peak>,
    /// Differences between consecutive peaks.
    pub spacings: Vec<f64>,
}

impl ResonanceScan {
    /// Spacing between the two largest-parameter peaks of the scan.
    pub fn asymptotic_spacing(&self) -> Option<f64> {
        self.spacings.last().copied()
    }

    /// Peak list, or `NoPeaks` when the scan found none.
    pub fn ensure_peaks(&self) -> Result<&[Peak]> {
        if self.peaks.is_empty() {
            Err(Error::NoPeaks)
        } else {
            Ok(&self.peaks)
        }
    }

    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| s.t.is_err()).count()
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of `f` on `[lo, hi]` down to a bracket of `tol`.
pub(crate) fn golden_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

fn scan_with<F>(axis: ScanAxis, grid: Vec<f64>, transmission: F) -> ResonanceScan
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let samples: Vec<ScanSample> = grid
        .par_iter()
        .map(|&param| ScanSample {
            param,
            t: transmission(param),
        })
        .collect();

    let candidates: Vec<(f64, f64)> = samples
        .windows(3)
        .filter_map(|w| match (&w[0].t, &w[1].t, &w[2].t) {
            (Ok(t0), Ok(t1), Ok(t2)) if t1 > t0 && t1 >= t2 => Some((w[0].param, w[2].param)),
            _ => None,
        })
        .collect();

    let refined: Vec<Peak> = candidates
        .par_iter()
        .filter_map(|&(lo, hi)| golden_max(&transmission, lo, hi, PEAK_REFINE_TOL).ok())
        .filter(|&(_, t)| t >= 1.0 - PEAK_T_TOL)
        .map(|(param, t)| Peak { param, t })
        .collect();

    let mut peaks: Vec<Peak> = Vec::with_capacity(refined.len());
    for p in refined {
        match peaks.last() {
            Some(prev) if p.param - prev.param <= PEAK_REFINE_TOL => {
                if p.t > prev.t {
                    *peaks.last_mut().unwrap() = p;
                }
            }
            _ => peaks.push(p),
        }
    }
    let spacings = peaks.windows(2).map(|w| w[1].param - w[0].param).collect();
    ResonanceScan {
        axis,
        samples,
        peaks,
        spacings,
    }
}

/// Transmission resonances of a barrier of width `a` at fixed energy as the
/// strength V0 varies over `[v_min, v_max]`.
pub fn scan_resonances_vs_strength(
    a: f64,
    e: f64,
    v_min: f64,
    v_max: f64,
    n: usize,
) -> Result<ResonanceScan> {
    if !(v_min > 0.0) {
        return Err(Error::InvalidParameter(format!("v_min = {v_min} must be > 0")));
    }
    ScatterParams::new(e, &CuspPotential::barrier(a, v_max)?)?;
    let grid = uniform_grid(v_min, v_max, n)?;
    Ok(scan_with(ScanAxis::Strength, grid, |v0| {
        let pot = CuspPotential::barrier(a, v0)?;
        reflection_transmission(e, &pot).map(|r| r.t)
    }))
}

/// Transmission resonances of a fixed barrier as the energy varies.
pub fn scan_resonances_vs_energy(
    potential: &CuspPotential,
    e_min: f64,
    e_max: f64,
    n: usize,
) -> Result<ResonanceScan> {
    potential.require(PotentialKind::Barrier)?;
    let grid = uniform_grid(e_min, e_max, n)?;
    if !(e_min > 1.0 || e_max < -1.0) {
        return Err(Error::InvalidParameter(format!(
            "energy grid [{e_min}, {e_max}] must lie entirely in |E| > 1"
        )));
    }
    let pot = *potential;
    Ok(scan_with(ScanAxis::Energy, grid, move |e| {
        reflection_transmission(e, &pot).map(|r| r.t)
    }))
}
