//! Bound states of the cusp well.
//!
//! With the regular solutions on both sides, `Psi` is continuous at the cusp
//! for equal amplitudes, and continuity of `Phi = -dPsi/dx` requires the
//! logarithmic derivative of `s^{-1/2} M_{kappa,mu}(s)` to vanish at
//! `s0 = 2 i a V0`, i.e.
//!
//! ```text
//! (1 + 2 kappa - s0) M_{kappa,mu}(s0) - (1 + 2 kappa + 2 mu) M_{kappa+1,mu}(s0) = 0
//! ```
//!
//! with `kappa = -i a E`, `mu = a sqrt(1 - E^2)`. The left-hand side is
//! complex for real E; roots are located by minimizing its modulus and are
//! accepted only when both real and imaginary parts vanish.

use crate::error::{Error, Result};
use crate::model::{BoundParams, CuspPotential, PotentialKind};
use crate::scattering::uniform_grid;
use crate::special::{whittaker_m, ComplexScalar, WhittakerParams};
use rayon::prelude::*;

/// Energies closer than this to `|E| = 1` are never evaluated.
pub const MU_GUARD: f64 = 1e-6;
/// Edge of the root search interval, `(-1 + EDGE, 1 - EDGE)`.
pub const SEARCH_EDGE: f64 = 1e-4;
/// Golden-section refinement width in E.
pub const ROOT_REFINE_TOL: f64 = 1e-10;
/// Accepted roots satisfy `|value| / scale <= ROOT_RESIDUAL_TOL`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;
/// Each of Re and Im of the value must be below this fraction of `scale`.
pub const ROOT_COMPONENT_TOL: f64 = 1e-7;
/// Energy grid used per well depth by the spectrum tracer.
pub const TRACE_ENERGY_GRID: usize = 2000;
/// Turning-point bisection stops at this bracket width in V0.
pub const FOLD_V0_TOL: f64 = 1e-5;
/// Coarser tracer grids mark the turning point as low confidence.
pub const MIN_CONFIDENT_GRID: usize = 50;

const FOLD_WINDOW_GRID: usize = 2000;
const FOLD_WINDOW_ABOVE: f64 = 0.05;
const FOLD_FIT_OFFSET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEquationValue {
    pub value: ComplexScalar,
    /// Modulus of the larger of the two terms.
    pub scale: f64,
}

impl EnergyEquationValue {
    pub fn relative(&self) -> f64 {
        self.value.norm() / self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub v0: f64,
    pub e: f64,
    /// `|value| / scale` at the accepted root.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    pub v0: f64,
    pub e: f64,
    /// Roots in the merging window just below the fold minus just above it.
    pub root_count_change: usize,
    pub confident: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub a: f64,
    /// Points along the curve ordered by decreasing energy: the particle branch
    /// coming down from `E = 1`, then the antiparticle branch past the fold.
    pub points: Vec<BoundState>,
    pub turning_point: Option<TurningPoint>,
}

/// Left-hand side of the even-state energy equation.
pub fn energy_equation(e: f64, potential: &CuspPotential) -> Result<EnergyEquationValue> {
    potential.require(PotentialKind::Well)?;
    if !(e.abs() < 1.0 - MU_GUARD) {
        return Err(Error::MuDegenerate(2.0 * potential.a() * (1.0 - e * e).max(0.0).sqrt()));
    }
    let p = BoundParams::new(e, potential)?;
    let s0 = potential.whittaker_argument(0.0);
    let mu = ComplexScalar::new(p.mu, 0.0);
    let params = WhittakerParams::new(p.kappa, mu, s0)?;
    let m0 = whittaker_m(&params)?.accepted()?;
    let m1 = whittaker_m(&params.with_kappa_plus_one()?)?.accepted()?;
    let term1 = (1.0 + 2.0 * p.kappa - s0) * m0;
    let term2 = (1.0 + 2.0 * p.kappa + 2.0 * mu) * m1;
    let scale = term1.norm().max(term2.norm());
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::NonFinite("energy equation scale"));
    }
    Ok(EnergyEquationValue {
        value: term1 - term2,
        scale,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_min<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while hi - lo > tol {
        if fc < fd {
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
    Ok(0.5 * (lo + hi))
}

/// Roots of the energy equation in `[e_lo, e_hi]`, located from local minima
/// of `|value|/scale` on an `n_grid`-point grid.
pub fn find_bound_states_in(
    potential: &CuspPotential,
    e_lo: f64,
    e_hi: f64,
    n_grid: usize,
) -> Result<Vec<BoundState>> {
    potential.require(PotentialKind::Well)?;
    let lo = e_lo.max(-1.0 + SEARCH_EDGE);
    let hi = e_hi.min(1.0 - SEARCH_EDGE);
    if n_grid < 3 || !(lo < hi) {
        return Err(Error::EmptyGrid { min: 3 });
    }
    let grid = uniform_grid(lo, hi, n_grid)?;
    let relative = |e: f64| energy_equation(e, potential).map(|v| v.relative());
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&e| relative(e).unwrap_or(f64::NAN))
        .collect();

    let brackets: Vec<(f64, f64)> = (1..n_grid - 1)
        .filter(|&i| values[i] <= values[i - 1] && values[i] < values[i + 1])
        .map(|i| (grid[i - 1], grid[i + 1]))
        .collect();

    let mut roots: Vec<BoundState> = brackets
        .par_iter()
        .filter_map(|&(a, b)| {
            let e = golden_min(relative, a, b, ROOT_REFINE_TOL).ok()?;
            let v = energy_equation(e, potential).ok()?;
            let accepted = v.relative() <= ROOT_RESIDUAL_TOL
                && v.value.re.abs() <= ROOT_COMPONENT_TOL * v.scale
                && v.value.im.abs() <= ROOT_COMPONENT_TOL * v.scale;
            accepted.then_some(BoundState {
                v0: potential.v0(),
                e,
                residual: v.relative(),
            })
        })
        .collect();
    roots.sort_by(|a, b| a.e.total_cmp(&b.e));
    roots.dedup_by(|b, a| (b.e - a.e).abs() < 1e-8);
    Ok(roots)
}

/// All accepted bound-state energies of the well in `(-1 + 1e-4, 1 - 1e-4)`,
/// in increasing order.
pub fn find_bound_states(potential: &CuspPotential, n_grid: usize) -> Result<Vec<BoundState>> {
    if n_grid < 100 {
        return Err(Error::InvalidParameter(format!(
            "n_grid = {n_grid}; at least 100 points are required"
        )));
    }
    find_bound_states_in(potential, -1.0, 1.0, n_grid)
}

fn nearest(roots: &[BoundState], e: f64) -> Option<BoundState> {
    roots
        .iter()
        .min_by(|a, b| (a.e - e).abs().total_cmp(&(b.e - e).abs()))
        .copied()
}

/// Least-squares parabola `v0 = c0 + c1 e + c2 e^2`; returns its vertex.
fn parabola_vertex(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 3 {
        return None;
    }
    // centre the abscissa for conditioning
    let mean = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(e, v) in points {
        let x = e - mean;
        let row = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * v;
        }
    }
    let c = solve3(ata, atb)?;
    if c[2] == 0.0 {
        return None;
    }
    let x = -c[1] / (2.0 * c[2]);
    Some((x + mean, c[0] + c[1] * x + c[2] * x * x))
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    Some(x)
}

fn fold_window_roots(a: f64, v0: f64, e_hint: f64) -> Result<Vec<BoundState>> {
    let well = CuspPotential::well(a, v0)?;
    find_bound_states_in(&well, -1.0, e_hint + FOLD_WINDOW_ABOVE, FOLD_WINDOW_GRID)
}

fn refine_turning_point(
    a: f64,
    mut v_lo: f64,
    mut v_hi: f64,
    e_hint: f64,
    grid_n: usize,
) -> Result<TurningPoint> {
    let mut lo_roots = fold_window_roots(a, v_lo, e_hint)?;
    while v_hi - v_lo > FOLD_V0_TOL {
        let mid = 0.5 * (v_lo + v_hi);
        let roots = fold_window_roots(a, mid, e_hint)?;
        if roots.is_empty() {
            v_hi = mid;
        } else {
            v_lo = mid;
            lo_roots = roots;
        }
    }
    let hi_count = fold_window_roots(a, v_hi, e_hint)?.len();
    let v_star = 0.5 * (v_lo + v_hi);

    let mut fit: Vec<(f64, f64)> = lo_roots.iter().map(|r| (r.e, v_lo)).collect();
    let offset_v = v_lo - FOLD_FIT_OFFSET;
    if offset_v > 0.0 {
        fit.extend(
            fold_window_roots(a, offset_v, e_hint)?
                .iter()
                .map(|r| (r.e, offset_v)),
        );
    }
    let (e_star, fit_consistent) = match parabola_vertex(&fit) {
        Some((e, v)) => (e, (v - v_star).abs() <= 1e-3),
        None => (
            lo_roots.iter().map(|r| r.e).sum::<f64>() / lo_roots.len().max(1) as f64,
            false,
        ),
    };
    let root_count_change = lo_roots.len().saturating_sub(hi_count);
    Ok(TurningPoint {
        v0: v_star,
        e: e_star,
        root_count_change,
        confident: grid_n >= MIN_CONFIDENT_GRID && fit_consistent && root_count_change == 2,
    })
}

/// Traces the lowest bound-state curve of wells of width `a` over
/// `V0 in [v_min, v_max]` and locates the particle/antiparticle turning point.
pub fn trace_spectrum(a: f64, v_min: f64, v_max: f64, n: usize) -> Result<SpectrumTrace> {
    if n < 10 || !(v_min > 0.0) || !(v_min < v_max) {
        return Err(Error::EmptyGrid { min: 10 });
    }
    CuspPotential::well(a, v_max)?;
    let grid = uniform_grid(v_min, v_max, n)?;
    let per_depth: Vec<Vec<BoundState>> = grid
        .par_iter()
        .map(|&v0| {
            CuspPotential::well(a, v0)
                .and_then(|w| find_bound_states(&w, TRACE_ENERGY_GRID))
                .unwrap_or_default()
        })
        .collect();

    // particle branch: start from the highest root, continue by nearest neighbour
    let mut particle: Vec<(usize, BoundState)> = Vec::new();
    let mut antiparticle: Vec<BoundState> = Vec::new();
    let mut fold_bracket: Option<(usize, f64)> = None;
    for (i, roots) in per_depth.iter().enumerate() {
        let prev = particle.last().map(|(_, s)| s.e);
        let pick = match prev {
            None => roots.last().copied(),
            Some(e_prev) => nearest(roots, e_prev).filter(|s| s.e <= e_prev + 1e-9),
        };
        match (pick, prev) {
            (Some(s), _) => {
                particle.push((i, s));
                if let Some(anti) = roots.iter().rev().find(|r| r.e < s.e - 1e-9) {
                    antiparticle.push(*anti);
                }
            }
            (None, Some(e_prev)) => {
                fold_bracket = Some((i, e_prev));
                break;
            }
            (None, None) => {}
        }
    }

    let turning_point = match fold_bracket {
        Some((i, e_hint)) if i > 0 => Some(refine_turning_point(a, grid[i - 1], grid[i], e_hint, n)?),
        _ => None,
    };

    let mut points: Vec<BoundState> = particle.into_iter().map(|(_, s)| s).collect();
    points.extend(antiparticle);
    points.sort_by(|x, y| y.e.total_cmp(&x.e));
    Ok(SpectrumTrace {
        a,
        points,
        turning_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_of_exact_parabola() {
        let pts: Vec<(f64, f64)> = [-0.99, -0.985, -0.98, -0.975]
            .iter()
            .map(|&e| (e, 3.6 - 40.0 * (e + 0.983f64).powi(2)))
            .collect();
        let (e, v) = parabola_vertex(&pts).unwrap();
        assert!((e + 0.983).abs() < 1e-9);
        assert!((v - 3.6).abs() < 1e-9);
    }

    #[test]
    fn energy_equation_guards() {
        let w = CuspPotential::well(0.5, 1.0).unwrap();
        assert!(matches!(energy_equation(0.9999999, &w), Err(Error::MuDegenerate(_))));
        let b = CuspPotential::barrier(0.5, 1.0).unwrap();
        assert!(matches!(energy_equation(0.2, &b), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn grid_size_precondition() {
        let w = CuspPotential::well(0.5, 1.0).unwrap();
        assert!(find_bound_states(&w, 50).is_err());
        assert!(trace_spectrum(0.5, 0.1, 3.7, 5).is_err());
    }
}
