//! Adaptive Dormand-Prince 5(4) integration.
//!
//! Works on any vector type implementing [`OdeVector`]; real and complex
//! state vectors are provided. Coefficients of the embedded pair are real,
//! so complex states integrate componentwise.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted after {0} steps")]
    TooManySteps(usize),
    #[error("sample times must be ascending and start at or after t0")]
    BadSampleTimes,
}

pub trait OdeVector: Clone {
    fn fill_zero(&mut self);
    fn assign(&mut self, other: &Self);
    /// self += a * other
    fn axpy(&mut self, a: f64, other: &Self);
    /// RMS of |err_i| / (atol + rtol * max(|y_i|, |y_new_i|)).
    fn scaled_error(err: &Self, y: &Self, y_new: &Self, atol: f64, rtol: f64) -> f64;
}

impl OdeVector for Vec<f64> {
    fn fill_zero(&mut self) {
        self.iter_mut().for_each(|v| *v = 0.0);
    }
    fn assign(&mut self, other: &Self) {
        self.copy_from_slice(other);
    }
    fn axpy(&mut self, a: f64, other: &Self) {
        for (s, o) in self.iter_mut().zip(other) {
            *s += a * o;
        }
    }
    fn scaled_error(err: &Self, y: &Self, y_new: &Self, atol: f64, rtol: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..err.len() {
            let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
            let e = err[i] / sc;
            acc += e * e;
        }
        (acc / err.len().max(1) as f64).sqrt()
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_initial: Option<f64>,
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, h_initial: None, h_max: None, max_steps: 50_000_000 }
    }
}

/// Integrate dy/dt = rhs(t, y) from `t0`, returning the state at each of the
/// ascending `t_samples`.
pub fn integrate<V, F>(
    mut rhs: F,
    t0: f64,
    y0: &V,
    t_samples: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<V>, OdeError>
where
    V: OdeVector,
    F: FnMut(f64, &V, &mut V),
{
    if t_samples.windows(2).any(|w| w[1] <= w[0]) || t_samples.first().is_some_and(|&t| t < t0) {
        return Err(OdeError::BadSampleTimes);
    }
    let mut out = Vec::with_capacity(t_samples.len());
    let Some(&t_end) = t_samples.last() else {
        return Ok(out);
    };

    let mut y = y0.clone();
    let mut t = t0;
    let mut k: Vec<V> = (0..7)
        .map(|_| {
            let mut v = y0.clone();
            v.fill_zero();
            v
        })
        .collect();
    let mut y_stage = y0.clone();
    let mut y_new = y0.clone();
    let mut err = y0.clone();

    rhs(t, &y, &mut k[0]);
    let span = t_end - t0;
    let mut h = opts.h_initial.unwrap_or(span / 1000.0).min(opts.h_max.unwrap_or(f64::INFINITY));
    let mut sample_idx = 0;
    let mut first_same_as_last = true;

    // emit any samples equal to t0
    while sample_idx < t_samples.len() && t_samples[sample_idx] == t0 {
        out.push(y.clone());
        sample_idx += 1;
    }

    for step in 0.. {
        if sample_idx >= t_samples.len() {
            return Ok(out);
        }
        if step >= opts.max_steps {
            return Err(OdeError::TooManySteps(step));
        }
        let target = t_samples[sample_idx];
        h = h.min(target - t);
        if h <= f64::EPSILON * t.abs().max(1.0) * 16.0 {
            return Err(OdeError::StepSizeUnderflow { t, h });
        }

        if !first_same_as_last {
            rhs(t, &y, &mut k[0]);
        }
        for s in 1..7 {
            y_stage.assign(&y);
            for (j, a) in A[s - 1].iter().enumerate().take(s) {
                if *a != 0.0 {
                    y_stage.axpy(h * a, &k[j]);
                }
            }
            let (pre, rest) = k.split_at_mut(s);
            let _ = pre;
            rhs(t + C[s] * h, &y_stage, &mut rest[0]);
        }
        y_new.assign(&y);
        err.fill_zero();
        for s in 0..7 {
            if B5[s] != 0.0 {
                y_new.axpy(h * B5[s], &k[s]);
            }
            let d = B5[s] - B4[s];
            if d != 0.0 {
                err.axpy(h * d, &k[s]);
            }
        }
        let e = V::scaled_error(&err, &y, &y_new, opts.atol, opts.rtol);

        if e <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y_new);
            // FSAL: stage 7 was evaluated at (t, y)
            let last = k.pop().unwrap();
            k.insert(0, last);
            first_same_as_last = true;
            while sample_idx < t_samples.len()
                && (t_samples[sample_idx] - t).abs() <= 1e-12 * t.abs().max(1e-30)
            {
                out.push(y.clone());
                sample_idx += 1;
            }
        } else {
            first_same_as_last = false;
        }
        let factor = if e > 0.0 { 0.9 * e.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if let Some(h_max) = opts.h_max {
            h = h.min(h_max);
        }
    }
    unreachable!()
}

/// Integrate to a single end time.
pub fn integrate_to<V, F>(rhs: F, t0: f64, y0: &V, t_end: f64, opts: &OdeOptions) -> Result<V, OdeError>
where
    V: OdeVector,
    F: FnMut(f64, &V, &mut V),
{
    if t_end == t0 {
        return Ok(y0.clone());
    }
    let states = integrate(rhs, t0, y0, &[t_end], opts)?;
    Ok(states.into_iter().next().unwrap())
}


impl OdeVector for Vec<num_complex::Complex64> {
    fn fill_zero(&mut self) {
        self.iter_mut().for_each(|v| *v = num_complex::Complex64::new(0.0, 0.0));
    }
    fn assign(&mut self, other: &Self) {
        self.copy_from_slice(other);
    }
    fn axpy(&mut self, a: f64, other: &Self) {
        for (s, o) in self.iter_mut().zip(other) {
            *s += a * o;
        }
    }
    fn scaled_error(err: &Self, y: &Self, y_new: &Self, atol: f64, rtol: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..err.len() {
            let sc = atol + rtol * y[i].norm().max(y_new[i].norm());
            let e = err[i].norm() / sc;
            acc += e * e;
        }
        (acc / err.len().max(1) as f64).sqrt()
    }
}
