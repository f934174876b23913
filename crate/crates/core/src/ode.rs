//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)) for the
//! small dense systems solved in this crate.

use crate::{Error, Result};

/// Step-size and tolerance controls.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance on the local error per step.
    pub rtol: f64,
    /// Absolute tolerance floor.
    pub atol: f64,
    /// Initial step; chosen from the span when zero.
    pub initial_step: f64,
    /// Upper bound on the step size; unlimited when zero.
    pub max_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 0.0,
            max_step: 0.0,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights coincide with the last row of A (FSAL); the embedded
// 4th-order weights are used for the error estimate.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One accepted sample of the solution.
#[derive(Debug, Clone)]
pub struct OdeSample {
    pub t: f64,
    pub y: Vec<f64>,
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1`, returning every accepted
/// step (endpoints included).
pub fn integrate<F>(f: F, y0: &[f64], t0: f64, t1: f64, opts: &OdeOptions) -> Result<Vec<OdeSample>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    assert!(t1 > t0, "integration span must be forward");
    let dim = y0.len();
    let span = t1 - t0;
    let mut h = if opts.initial_step > 0.0 {
        opts.initial_step
    } else {
        span * 1e-4
    };
    let h_max = if opts.max_step > 0.0 {
        opts.max_step
    } else {
        span
    };
    h = h.min(h_max);

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; dim]).collect();
    let mut y_stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let mut out = vec![OdeSample { t, y: y.clone() }];

    f(t, &y, &mut k[0]);
    let mut fsal_valid = true;

    while t < t1 {
        if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if !fsal_valid {
            f(t, &y, &mut k[0]);
            fsal_valid = true;
        }
        for s in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s + 1) {
                    acc += A[s][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let ts = t + C[s] * h;
            let dest = s + 1;
            let (head, tail) = k.split_at_mut(dest);
            let _ = head;
            f(ts, &y_stage, &mut tail[0]);
        }
        // 5th-order solution is the last stage input (FSAL property).
        y5.copy_from_slice(&y_stage);

        // Error estimate: y5 - y4.
        let mut err_norm_sq = 0.0;
        for i in 0..dim {
            let mut y4i = y[i];
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += B4[j] * kj[i];
            }
            y4i += h * acc;
            let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4i) / scale;
            err_norm_sq += e * e;
        }
        let err = (err_norm_sq / dim as f64).sqrt();

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            k.swap(0, 6); // FSAL: k7 at the accepted point becomes k1
            out.push(OdeSample { t, y: y.clone() });
        } else {
            fsal_valid = true; // k[0] still holds f at the (unchanged) point
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(h_max);
    }
    Ok(out)
}

/// Integrates until either `t_final` is reached or the derivative norm drops
/// below `derivative_floor`; returns the final sample.
pub fn integrate_to_steady<F>(
    f: F,
    y0: &[f64],
    t_final: f64,
    derivative_floor: f64,
    opts: &OdeOptions,
) -> Result<OdeSample>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let mut deriv = vec![0.0; dim];
    let mut current = OdeSample {
        t: 0.0,
        y: y0.to_vec(),
    };
    // March in segments so the derivative-norm exit can trigger early.
    let segments = 40usize;
    let dt = t_final / segments as f64;
    for _ in 0..segments {
        f(current.t, &current.y, &mut deriv);
        let norm = deriv.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm < derivative_floor {
            return Ok(current);
        }
        let seg = integrate(&f, &current.y, current.t, current.t + dt, opts)?;
        current = seg.into_iter().last().expect("segment has samples");
    }
    Ok(current)
}
