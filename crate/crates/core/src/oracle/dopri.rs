//! Dormand–Prince 5(4) with the standard fourth-order continuous extension.

use crate::error::{Error, Result};

pub(crate) const DIM: usize = 4;
pub(crate) type State = [f64; DIM];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;
const MAX_STEPS: usize = 1_000_000;

pub(crate) struct Run {
    pub end: State,
    /// States at the requested points, in the order they were requested.
    pub samples: Vec<State>,
    /// Sum of accepted local error estimates in units of `1 + |y|`.
    pub error_sum: f64,
    pub steps: usize,
}

fn lin(y: &State, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..DIM {
            out[i] += c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction) with mixed
/// absolute/relative tolerance `tol`. `samples` must lie between the ends.
pub(crate) fn integrate<F>(f: F, x0: f64, y0: State, x1: f64, tol: f64, h0: f64, samples: &[f64]) -> Result<Run>
where
    F: Fn(f64, &State) -> State,
{
    let span = x1 - x0;
    let dir = span.signum();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| (dir * samples[i]).total_cmp(&(dir * samples[j])));
    let mut next_sample = 0;
    let mut out = vec![[0.0; DIM]; samples.len()];

    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = dir * h0.abs().min(span.abs());
    let mut error_sum = 0.0;
    let mut steps = 0;
    if span == 0.0 {
        for &i in &order {
            out[i] = y;
        }
        return Ok(Run { end: y, samples: out, error_sum, steps });
    }

    loop {
        let last = dir * (x + h - x1) >= 0.0;
        if steps >= MAX_STEPS || (!last && h.abs() <= 1e-13 * x.abs().max(1.0)) {
            return Err(Error::StepUnderflow(x));
        }
        if last {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &lin(&y, &[(h * A21, &k1)]));
        let k3 = f(x + C3 * h, &lin(&y, &[(h * A31, &k1), (h * A32, &k2)]));
        let k4 = f(x + C4 * h, &lin(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &lin(&y, &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &lin(
                &y,
                &[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)],
            ),
        );
        let y_new = lin(
            &y,
            &[(h * A71, &k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)],
        );
        let k7 = f(x + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..DIM {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            err += (e / sc).powi(2);
        }
        let err = (err / DIM as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::NonFinite("ode step"));
        }
        steps += 1;

        if err <= 1.0 {
            let x_new = if last { x1 } else { x + h };
            while next_sample < order.len() {
                let s = samples[order[next_sample]];
                if dir * (s - x_new) > 0.0 {
                    break;
                }
                let theta = ((s - x) / h).clamp(0.0, 1.0);
                let theta1 = 1.0 - theta;
                let mut v = [0.0; DIM];
                for i in 0..DIM {
                    let ydiff = y_new[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    let r4 = ydiff - h * k7[i] - bspl;
                    let r5 = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                    v[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
                }
                out[order[next_sample]] = v;
                next_sample += 1;
            }
            error_sum += err * tol;
            x = x_new;
            y = y_new;
            k1 = k7;
            if last {
                break;
            }
        }
        let factor = if err == 0.0 {
            MAX_GROWTH
        } else {
            (SAFETY * err.powf(-0.2)).clamp(MIN_SHRINK, MAX_GROWTH)
        };
        h *= if err <= 1.0 { factor } else { factor.min(1.0) };
    }
    for &i in &order[next_sample..] {
        out[i] = y;
    }
    Ok(Run { end: y, samples: out, error_sum, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_with_dense_output() {
        let f = |_x: f64, y: &State| [y[2], y[3], -y[0], -y[1]];
        let samples = [0.37, 2.5, 1.0];
        let run = integrate(f, 0.0, [0.0, 1.0, 1.0, 0.0], 3.0, 1e-11, 0.1, &samples).unwrap();
        assert!((run.end[0] - 3f64.sin()).abs() < 1e-9);
        assert!((run.end[1] - 3f64.cos()).abs() < 1e-9);
        for (s, v) in samples.iter().zip(&run.samples) {
            assert!((v[0] - s.sin()).abs() < 1e-9, "{s}");
            assert!((v[2] - s.cos()).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn backward_direction() {
        let f = |_x: f64, y: &State| [y[0], 0.0, 0.0, 0.0];
        let run = integrate(f, 1.0, [1.0, 0.0, 0.0, 0.0], -1.0, 1e-12, 0.1, &[0.0]).unwrap();
        assert!((run.end[0] - (-2f64).exp()).abs() < 1e-11);
        assert!((run.samples[0][0] - (-1f64).exp()).abs() < 1e-9);
    }
}
