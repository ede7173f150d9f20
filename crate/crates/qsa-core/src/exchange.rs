//! Classical phonon-exchange dynamics of two coupled wells with
//! time-dependent frequencies.
//!
//! The model integrates
//!
//! d²y/dt² = [ −(2πf₁(t))² + k̃   k̃              ] y
//!           [ k̃                 −(2πf₂(t))² + k̃ ]
//!
//! from y = (1, 0), ẏ = (0, 0), with the well frequencies approaching their
//! final values through exponential switching ramps. The occupation of each
//! oscillator is the squared envelope amplitude.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::{fit_harmonic, levenberg_marquardt, FitError, LmOptions};
use crate::ode::{integrate, OdeError, OdeOptions};
use crate::par::par_map;

#[derive(Debug, Error)]
pub enum ExchangeError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("need at least {needed} samples spanning one exchange period, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}

/// Switching and coupling parameters of an exchange run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExchangeConfig {
    /// Initial/final frequencies of oscillator 1 (Hz).
    pub f1_initial: f64,
    pub f1_final: f64,
    /// Initial/final frequencies of oscillator 2 (Hz).
    pub f2_initial: f64,
    pub f2_final: f64,
    /// Mass-normalized interaction k̃ = k_int/m (1/s²).
    pub k_tilde: f64,
    /// Characteristic switching times (s); the exchange runs here use the
    /// on-resonance ramp `tau_on`.
    pub tau_on: f64,
    pub tau_off: f64,
}

impl ExchangeConfig {
    /// The Appendix-style reference run: 520/560 kHz detuned wells pulled to
    /// a final detuning `delta_f` (Hz, f₂ − f₁) symmetric about their mean.
    pub fn reference_with_final_detuning(delta_f: f64) -> Self {
        let center = 540e3;
        Self {
            f1_initial: 520e3,
            f1_final: center - delta_f / 2.0,
            f2_initial: 560e3,
            f2_final: center + delta_f / 2.0,
            k_tilde: 1.41e11,
            tau_on: 37e-6,
            tau_off: 49e-6,
        }
    }
}

/// Exponential switching ramp f(t) = f_fin − (f_fin − f_init)·e^{−t/τ}.
pub fn frequency_ramp(t: f64, f_init: f64, f_final: f64, tau: f64) -> f64 {
    assert!(tau > 0.0, "ramp time constant must be positive");
    f_final - (f_final - f_init) * (-t / tau).exp()
}

/// Free resonant exchange of a classical displacement λ prepared in well 1:
/// r₁ = λ cos(Ω_c t/2) sin(ω_m t), r₂ = −λ sin(Ω_c t/2) cos(ω_m t).
pub fn analytic_exchange(lambda: f64, omega_c: f64, omega_m: f64, t: f64) -> (f64, f64) {
    (
        lambda * (omega_c * t / 2.0).cos() * (omega_m * t).sin(),
        -lambda * (omega_c * t / 2.0).sin() * (omega_m * t).cos(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExchangeTrajectory {
    pub t: Vec<f64>,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    /// Squared envelope amplitudes y² + (ẏ/2πf(t))².
    pub occ1: Vec<f64>,
    pub occ2: Vec<f64>,
}

/// Integrate an exchange run, sampling every `sample_dt`.
pub fn integrate_exchange(
    config: &ExchangeConfig,
    t_end: f64,
    sample_dt: f64,
) -> Result<ExchangeTrajectory, ExchangeError> {
    assert!(t_end > 0.0 && sample_dt > 0.0);
    let cfg = config.clone();
    let rhs = move |t: f64, y: &Vec<f64>, dy: &mut Vec<f64>| {
        let w1 = std::f64::consts::TAU * frequency_ramp(t, cfg.f1_initial, cfg.f1_final, cfg.tau_on);
        let w2 = std::f64::consts::TAU * frequency_ramp(t, cfg.f2_initial, cfg.f2_final, cfg.tau_on);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = (-w1 * w1 + cfg.k_tilde) * y[0] + cfg.k_tilde * y[1];
        dy[3] = cfg.k_tilde * y[0] + (-w2 * w2 + cfg.k_tilde) * y[1];
    };
    let n = (t_end / sample_dt).round() as usize;
    let times: Vec<f64> = (1..=n).map(|i| i as f64 * sample_dt).collect();
    let y0 = vec![1.0, 0.0, 0.0, 0.0];
    let opts = OdeOptions { rtol: 1e-9, atol: 1e-12, ..Default::default() };
    let states = integrate(rhs, 0.0, &y0, &times, &opts)?;

    let mut traj = ExchangeTrajectory {
        t: vec![0.0],
        y1: vec![1.0],
        y2: vec![0.0],
        occ1: vec![1.0],
        occ2: vec![0.0],
    };
    for (i, s) in states.iter().enumerate() {
        let t = times[i];
        let w1 = std::f64::consts::TAU
            * frequency_ramp(t, config.f1_initial, config.f1_final, config.tau_on);
        let w2 = std::f64::consts::TAU
            * frequency_ramp(t, config.f2_initial, config.f2_final, config.tau_on);
        traj.t.push(t);
        traj.y1.push(s[0]);
        traj.y2.push(s[1]);
        traj.occ1.push(s[0] * s[0] + (s[2] / w1) * (s[2] / w1));
        traj.occ2.push(s[1] * s[1] + (s[3] / w2) * (s[3] / w2));
    }
    Ok(traj)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetuningScanRow {
    pub delta_f_khz: f64,
    /// max − min of the settled occupation of well 2.
    pub contrast: f64,
    pub max_occ2: f64,
    pub status: String,
}

/// Sweep the final detuning of the reference exchange run.
pub fn detuning_scan(
    delta_f_values: &[f64],
    t_end: f64,
    settle: f64,
) -> Vec<DetuningScanRow> {
    let points = delta_f_values.to_vec();
    par_map(points, move |delta_f| {
        let config = ExchangeConfig::reference_with_final_detuning(delta_f);
        match integrate_exchange(&config, t_end, 1e-6) {
            Ok(traj) => {
                let mut max = f64::MIN;
                let mut min = f64::MAX;
                for (t, occ) in traj.t.iter().zip(&traj.occ2) {
                    if *t >= settle {
                        max = max.max(*occ);
                        min = min.min(*occ);
                    }
                }
                DetuningScanRow {
                    delta_f_khz: delta_f / 1e3,
                    contrast: max - min,
                    max_occ2: max,
                    status: "ok".into(),
                }
            }
            Err(e) => DetuningScanRow {
                delta_f_khz: delta_f / 1e3,
                contrast: f64::NAN,
                max_occ2: f64::NAN,
                status: format!("error: {e}"),
            },
        }
    })
}

/// Fit of the exchange model n₂(t) = ½[(n₁₀−n₂₀)cos(Ωt+φ)e^{−t/τ} + n₁₀+n₂₀].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExchangeFitResult {
    pub n1_0: f64,
    pub n2_0: f64,
    /// Exchange rate (rad/s).
    pub omega_c: f64,
    pub phi: f64,
    /// Contrast decay time (s); very large when the data shows no decay.
    pub tau_d: f64,
    /// 95% half-widths for (n1_0, n2_0, omega_c, phi, 1/tau_d).
    pub ci95: [f64; 5],
    pub chi2: f64,
}

/// Least-squares fit of an occupation curve, optionally excluding samples
/// before `exclude_before` (the unsettled early-ramp region).
pub fn fit_exchange_curve(
    t: &[f64],
    occupation: &[f64],
    exclude_before: Option<f64>,
) -> Result<ExchangeFitResult, ExchangeError> {
    let cut = exclude_before.unwrap_or(f64::NEG_INFINITY);
    let data: Vec<(f64, f64)> = t
        .iter()
        .zip(occupation)
        .filter(|(tt, _)| **tt >= cut)
        .map(|(tt, oo)| (*tt, *oo))
        .collect();
    if data.len() < 10 {
        return Err(ExchangeError::TooFewSamples { needed: 10, got: data.len() });
    }

    // coarse period estimate: scan Ω against a pure-harmonic linear fit
    let span = data.last().unwrap().0 - data[0].0;
    let ts: Vec<f64> = data.iter().map(|d| d.0).collect();
    let ys: Vec<f64> = data.iter().map(|d| d.1).collect();
    let mut best = (f64::MAX, std::f64::consts::TAU / span);
    for i in 1..=400 {
        let omega = std::f64::consts::TAU * i as f64 / (2.0 * span);
        if let Ok((amp, phase, off)) = fit_harmonic(&ts, &ys, omega) {
            let chi2: f64 = ts
                .iter()
                .zip(&ys)
                .map(|(&tt, &yy)| {
                    let m = amp * (omega * tt - phase).cos() + off;
                    (yy - m) * (yy - m)
                })
                .sum();
            if chi2 < best.0 {
                best = (chi2, omega);
            }
        }
    }
    let omega0 = best.1;
    let (amp0, phase0, off0) = fit_harmonic(&ts, &ys, omega0)?;

    // parameters: [n1_0, n2_0, omega, phi, decay_rate]
    let p0 = [
        off0 + amp0,
        (off0 - amp0).max(0.0),
        omega0,
        -phase0,
        0.01 / span,
    ];
    let (tsf, ysf) = (ts.clone(), ys.clone());
    let res = levenberg_marquardt(
        move |p, out| {
            for (i, (&tt, &yy)) in tsf.iter().zip(&ysf).enumerate() {
                let model = 0.5
                    * ((p[0] - p[1]) * (p[2] * tt + p[3]).cos() * (-p[4].abs() * tt).exp()
                        + p[0]
                        + p[1]);
                out[i] = model - yy;
            }
        },
        None,
        &p0,
        data.len(),
        &LmOptions::default(),
    )?;
    let rate = res.params[4].abs();
    Ok(ExchangeFitResult {
        n1_0: res.params[0],
        n2_0: res.params[1],
        omega_c: res.params[2].abs(),
        phi: res.params[3],
        tau_d: if rate > 1e-12 { 1.0 / rate } else { 1e12 },
        ci95: [res.ci95(0), res.ci95(1), res.ci95(2), res.ci95(3), res.ci95(4)],
        chi2: res.chi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn ramp_limits() {
        assert_eq!(frequency_ramp(0.0, 520e3, 543e3, 37e-6), 520e3);
        let far = frequency_ramp(1.0, 520e3, 543e3, 37e-6);
        assert!((far - 543e3).abs() < 1e-9);
        // at t = τ the remaining offset is 1/e of the initial one
        let at_tau = frequency_ramp(37e-6, 520e3, 543e3, 37e-6);
        assert!(((at_tau - 543e3) - (520e3 - 543e3) / std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn analytic_exchange_envelope() {
        let (oc, om) = (TAU * 5e3, TAU * 460e3);
        let (r1, r2) = analytic_exchange(1.0, oc, om, 0.0);
        assert_eq!((r1, r2), (0.0, 0.0));
        // at t_exc = π/Ω the well-1 envelope cos(Ωt/2) vanishes
        let t_exc = std::f64::consts::PI / oc;
        let (r1, _) = analytic_exchange(1.0, oc, om, t_exc);
        assert!(r1.abs() < 1e-10, "well-1 displacement {r1:.2e} at t_exc");
        for k in 0..8 {
            let t = t_exc + (k as f64 - 4.0) * 1e-7;
            let env1 = (oc * t / 2.0).cos().abs();
            assert!(env1 < 8e-3, "well-1 envelope {env1:.2e} near t_exc");
        }
        // and returns at 2 t_exc
        let env1_at = |t: f64| (oc * t / 2.0).cos().abs();
        assert!((env1_at(2.0 * t_exc) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_resonant_exchange_matches_analytic_envelope() {
        // constant equal frequencies; k̃ for a 5 kHz splitting
        let f = 460e3;
        let om = TAU * f;
        let k = TAU * 5e3 * om; // first-order splitting k̃/ω
        let config = ExchangeConfig {
            f1_initial: f,
            f1_final: f,
            f2_initial: f,
            f2_final: f,
            k_tilde: k,
            tau_on: 37e-6,
            tau_off: 49e-6,
        };
        // exact splitting of the constant matrix
        let omega_c = om - (om * om - 2.0 * k).sqrt();
        let traj = integrate_exchange(&config, 600e-6, 1e-6).unwrap();
        for (i, &t) in traj.t.iter().enumerate() {
            let expect = (omega_c * t / 2.0).sin().powi(2);
            // quadrature envelope uses the bare frequency, so it carries an
            // O(Ω_c/ω) ripple on top of the exchange oscillation
            assert!(
                (traj.occ2[i] - expect).abs() < 0.03,
                "occ2({t:.2e}) = {} vs {expect}",
                traj.occ2[i]
            );
            // envelope energy conserved
            assert!((traj.occ1[i] + traj.occ2[i] - 1.0).abs() < 0.03);
        }
        // exchange period matches the analytic envelope within 1%
        let fit = fit_exchange_curve(&traj.t, &traj.occ2, None).unwrap();
        assert!(
            (fit.omega_c - omega_c).abs() / omega_c < 0.01,
            "period mismatch: {:.2} vs {:.2} Hz",
            fit.omega_c / TAU,
            omega_c / TAU
        );
        // back near zero at 2π/Ω
        let t_ret = TAU / omega_c;
        let idx = traj.t.iter().position(|&t| t >= t_ret).unwrap();
        assert!(traj.occ2[idx] < 5e-3, "occ2 at return = {}", traj.occ2[idx]);
    }

    #[test]
    fn uncoupled_stays_put() {
        let config = ExchangeConfig {
            k_tilde: 0.0,
            ..ExchangeConfig::reference_with_final_detuning(0.0)
        };
        let traj = integrate_exchange(&config, 300e-6, 1e-6).unwrap();
        for &o in &traj.occ2 {
            assert!(o.abs() < 1e-12);
        }
    }

    #[test]
    fn reference_run_transfers_at_about_10khz() {
        let config = ExchangeConfig::reference_with_final_detuning(-7.5e3);
        let traj = integrate_exchange(&config, 1.0e-3, 1e-6).unwrap();
        let fit = fit_exchange_curve(&traj.t, &traj.occ2, Some(130e-6)).unwrap();
        let f_khz = fit.omega_c / TAU / 1e3;
        assert!((f_khz - 10.0).abs() < 1.0, "apparent rate {f_khz:.2} kHz");
    }

    #[test]
    fn exclusion_window_changes_fit_on_ramped_data() {
        let config = ExchangeConfig::reference_with_final_detuning(-7.5e3);
        let traj = integrate_exchange(&config, 1.0e-3, 1e-6).unwrap();
        let with = fit_exchange_curve(&traj.t, &traj.occ2, Some(130e-6)).unwrap();
        let without = fit_exchange_curve(&traj.t, &traj.occ2, None).unwrap();
        let rel = (with.omega_c - without.omega_c).abs() / with.omega_c;
        assert!(rel > 1e-3, "settle window made no difference ({rel:.2e})");
    }

    #[test]
    fn fit_recovers_synthetic_parameters() {
        let truth = ExchangeFitResult {
            n1_0: 1.9,
            n2_0: 0.25,
            omega_c: TAU * 4.7e3,
            phi: 0.6,
            tau_d: 800e-6,
            ci95: [0.0; 5],
            chi2: 0.0,
        };
        let t: Vec<f64> = (0..240).map(|i| i as f64 * 5e-6).collect();
        let clean: Vec<f64> = t
            .iter()
            .map(|&tt| {
                0.5 * ((truth.n1_0 - truth.n2_0)
                    * (truth.omega_c * tt + truth.phi).cos()
                    * (-tt / truth.tau_d).exp()
                    + truth.n1_0
                    + truth.n2_0)
            })
            .collect();
        let fit = fit_exchange_curve(&t, &clean, None).unwrap();
        assert!((fit.omega_c - truth.omega_c).abs() / truth.omega_c < 1e-7);
        assert!((fit.n1_0 - truth.n1_0).abs() < 1e-6);
        assert!((fit.tau_d - truth.tau_d).abs() / truth.tau_d < 1e-4);
        // noisy version recovered within 2%
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let noisy: Vec<f64> = clean.iter().map(|&y| y + rng.gen_range(-0.05..0.05)).collect();
        let fit = fit_exchange_curve(&t, &noisy, None).unwrap();
        assert!(
            (fit.omega_c - truth.omega_c).abs() / truth.omega_c < 0.02,
            "noisy recovery {:.1} Hz vs {:.1} Hz",
            fit.omega_c / TAU,
            truth.omega_c / TAU
        );
        assert!(fit.ci95[2] > 0.0);
    }

    #[test]
    fn instant_switching_moves_optimum_to_resonance() {
        // τ_on → 0: the contrast optimum returns to Δf = 0
        let deltas: Vec<f64> = (-8..=8).map(|i| i as f64 * 1e3).collect();
        let rows: Vec<DetuningScanRow> = deltas
            .iter()
            .map(|&df| {
                let mut config = ExchangeConfig::reference_with_final_detuning(df);
                config.tau_on = 0.1e-6;
                let traj = integrate_exchange(&config, 0.8e-3, 1e-6).unwrap();
                let (mut max, mut min) = (f64::MIN, f64::MAX);
                for (t, occ) in traj.t.iter().zip(&traj.occ2) {
                    if *t >= 20e-6 {
                        max = max.max(*occ);
                        min = min.min(*occ);
                    }
                }
                DetuningScanRow {
                    delta_f_khz: df / 1e3,
                    contrast: max - min,
                    max_occ2: max,
                    status: "ok".into(),
                }
            })
            .collect();
        let best = rows
            .iter()
            .max_by(|a, b| a.contrast.partial_cmp(&b.contrast).unwrap())
            .unwrap();
        assert!(best.delta_f_khz.abs() <= 1.0, "optimum at {} kHz", best.delta_f_khz);
    }
}
