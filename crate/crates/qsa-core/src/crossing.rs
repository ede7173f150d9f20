//! Avoided-crossing model of two detuned coupled wells, synthetic sideband
//! spectra, and the fit that extracts the coupling rate the way the
//! spectroscopy analysis does.
//!
//! With the wells detuned by Δω around mean ω_m, the pair frequencies are
//! ω_± = √(Δω²/4 + ω_m² ± √(k²/(n²m²) + Δω²ω_m²)) and the mode vectors
//! interpolate between well-localized and (1,±1)/√2 with the mixing
//! parameter χ = n m ω_m Δω / k.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::IonSpecies;
use crate::fit::{levenberg_marquardt, FitError, LmOptions};

#[derive(Debug, Error)]
pub enum CrossingError {
    #[error("radicand went negative in the pair-frequency formula")]
    NegativeRadicand,
    #[error("need at least {needed} field settings with resolvable peaks, got {got}")]
    TooFewColumns { needed: usize, got: usize },
    #[error("no resolvable peaks near the crossing center")]
    NoPeaks,
    #[error("fit failed: {0}")]
    Fit(#[from] FitError),
    #[error("fitted parameters violate b >= |c| (b = {b:.3e}, c = {c:.3e})")]
    UnphysicalFit { b: f64, c: f64 },
}

/// Two coupled oscillators with detuned bare frequencies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetunedPair {
    /// ω_{z,2} − ω_{z,1} (rad/s).
    pub delta_omega: f64,
    /// Mean bare frequency (rad/s).
    pub omega_m: f64,
    /// Interaction constant (N/m).
    pub k_int: f64,
    pub n: usize,
    pub species: IonSpecies,
}

impl DetunedPair {
    /// Mixing parameter χ = n m ω_m Δω / k_int.
    pub fn chi(&self) -> f64 {
        self.n as f64 * self.species.mass * self.omega_m * self.delta_omega / self.k_int
    }
}

/// Pair frequencies (ω₊, ω₋) of the detuned coupled system.
pub fn detuned_pair_frequencies(pair: &DetunedPair) -> Result<(f64, f64), CrossingError> {
    let nm = pair.n as f64 * pair.species.mass;
    let inner = (pair.k_int / nm).powi(2)
        + pair.delta_omega * pair.delta_omega * pair.omega_m * pair.omega_m;
    let base = pair.delta_omega * pair.delta_omega / 4.0 + pair.omega_m * pair.omega_m;
    let root = inner.sqrt();
    let minus = base - root;
    if minus <= 0.0 {
        return Err(CrossingError::NegativeRadicand);
    }
    Ok(((base + root).sqrt(), minus.sqrt()))
}

/// Unit-norm mode vectors (ν₊, ν₋) in the (well 1, well 2) displacement
/// basis.
pub fn detuned_pair_modevectors(pair: &DetunedPair) -> ([f64; 2], [f64; 2]) {
    let chi = pair.chi();
    let root = (1.0 + chi * chi).sqrt();
    let make = |sign: f64| -> [f64; 2] {
        let first = -chi + sign * root;
        let norm = (1.0 + (root - sign * chi).powi(2)).sqrt();
        [first / norm, 1.0 / norm]
    };
    (make(1.0), make(-1.0))
}

/// One sample of a synthetic crossing spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumRow {
    /// Applied field (V/m).
    pub field_v_per_m: f64,
    /// Probe detuning from the carrier (Hz).
    pub detuning_hz: f64,
    /// Mean excitation of the observed well (arbitrary units).
    pub excitation: f64,
}

/// Configuration for [`synth_crossing_spectrum`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SynthCrossingConfig {
    pub omega_m: f64,
    pub k_int: f64,
    pub n: usize,
    /// Linear field → detuning mapping: Δω = slope · (field − field_center).
    pub slope: f64,
    /// Crossing center in field units (the stray-field offset).
    pub field_center: f64,
    pub fields: Vec<f64>,
    /// Probe detunings (rad/s) of the spectroscopy axis.
    pub probes: Vec<f64>,
    /// Gaussian line sigma (rad/s).
    pub line_width: f64,
    /// Shot-to-shot jitter of the mode frequencies (rad/s).
    pub freq_noise_sd: f64,
    /// Additive noise on the excitation values.
    pub excitation_noise_sd: f64,
    pub seed: u64,
}

impl SynthCrossingConfig {
    /// Probe grid of `count` points covering `span` (rad/s) around ω.
    pub fn probe_grid(omega: f64, span: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| omega - span / 2.0 + span * i as f64 / (count - 1) as f64)
            .collect()
    }
}

/// Render the sideband-excitation map of the observed well (well 1):
/// Gaussian peaks at ω_± weighted by the squared well-1 participation.
pub fn synth_crossing_spectrum(
    config: &SynthCrossingConfig,
    species: &IonSpecies,
) -> Result<Vec<SpectrumRow>, CrossingError> {
    assert!(config.line_width > 0.0, "line width must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let freq_noise = Normal::new(0.0, config.freq_noise_sd.max(f64::MIN_POSITIVE)).unwrap();
    let exc_noise = Normal::new(0.0, config.excitation_noise_sd.max(f64::MIN_POSITIVE)).unwrap();
    let mut rows = Vec::with_capacity(config.fields.len() * config.probes.len());
    for &field in &config.fields {
        let pair = DetunedPair {
            delta_omega: config.slope * (field - config.field_center),
            omega_m: config.omega_m,
            k_int: config.k_int,
            n: config.n,
            species: species.clone(),
        };
        let (wp, wm) = detuned_pair_frequencies(&pair)?;
        let (vp, vm) = detuned_pair_modevectors(&pair);
        let peaks = [
            (wp + if config.freq_noise_sd > 0.0 { freq_noise.sample(&mut rng) } else { 0.0 }, vp[0] * vp[0]),
            (wm + if config.freq_noise_sd > 0.0 { freq_noise.sample(&mut rng) } else { 0.0 }, vm[0] * vm[0]),
        ];
        for &probe in &config.probes {
            let mut exc = 0.0;
            for &(w, a) in &peaks {
                let dx = probe - w;
                exc += a * (-dx * dx / (2.0 * config.line_width * config.line_width)).exp();
            }
            if config.excitation_noise_sd > 0.0 {
                exc += exc_noise.sample(&mut rng);
            }
            rows.push(SpectrumRow {
                field_v_per_m: field,
                detuning_hz: probe / std::f64::consts::TAU,
                excitation: exc,
            });
        }
    }
    Ok(rows)
}

/// Result of the crossing fit ω_± = a√((γ−d)²/4 + b ± √(c² + b(γ−d)²)).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d_center: f64,
    /// Coupling rate a(√(b+c) − √(b−c)) (rad/s).
    pub omega_c: f64,
    /// 95% interval half-width on `omega_c` (rad/s), linearized covariance.
    pub ci95: f64,
    pub chi2: f64,
}

/// Fitted peak centers per field column.
#[derive(Clone, Debug)]
pub struct PeakTable {
    /// (field, peak frequency rad/s) samples.
    pub peaks: Vec<(f64, f64)>,
}

fn model_branches(p: &[f64], field: f64) -> (f64, f64) {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    let g = field - d;
    let inner = (c * c + b * g * g).max(0.0).sqrt();
    let hi = a * (g * g / 4.0 + b + inner).max(0.0).sqrt();
    let lo = a * (g * g / 4.0 + b - inner).max(0.0).sqrt();
    (hi, lo)
}

/// Extract peak centers column-by-column with Gaussian fits.
pub fn extract_peaks(
    rows: &[SpectrumRow],
    line_width: f64,
) -> Result<PeakTable, CrossingError> {
    let mut by_field: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let probe = r.detuning_hz * std::f64::consts::TAU;
        match by_field.iter_mut().find(|(f, _)| *f == r.field_v_per_m) {
            Some((_, col)) => col.push((probe, r.excitation)),
            None => by_field.push((r.field_v_per_m, vec![(probe, r.excitation)])),
        }
    }
    let mut peaks = Vec::new();
    for (field, mut col) in by_field {
        col.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let xs: Vec<f64> = col.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = col.iter().map(|p| p.1).collect();
        let y_max = ys.iter().cloned().fold(f64::MIN, f64::max);
        if y_max <= 0.0 {
            continue;
        }
        // first peak
        let i0 = ys.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
        let Some(g1) = fit_peak_window(&xs, &ys, i0, line_width) else {
            continue;
        };
        // residual search for a second peak
        let resid: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let dx = x - g1[1];
                y - g1[0] * (-dx * dx / (2.0 * g1[2] * g1[2])).exp() - g1[3]
            })
            .collect();
        let i1 = resid.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
        let mut second = None;
        if resid[i1] > 0.15 * y_max && (xs[i1] - g1[1]).abs() > line_width {
            if let Some(g2) = fit_peak_window(&xs, &resid, i1, line_width) {
                if g2[0] > 0.1 * y_max {
                    second = Some(g2);
                }
            }
        }
        match second {
            // joint refinement removes the overlap bias of the sequential
            // two-pass estimate
            Some(g2) => match fit_double_gaussian(&xs, &ys, &g1, &g2) {
                Some((m1, m2)) => {
                    peaks.push((field, m1));
                    peaks.push((field, m2));
                }
                None => {
                    peaks.push((field, g1[1]));
                    peaks.push((field, g2[1]));
                }
            },
            None => peaks.push((field, g1[1])),
        }
    }
    if peaks.is_empty() {
        return Err(CrossingError::NoPeaks);
    }
    Ok(PeakTable { peaks })
}

/// Joint two-Gaussian fit seeded from sequential single-peak estimates;
/// returns the two refined centers.
fn fit_double_gaussian(xs: &[f64], ys: &[f64], g1: &[f64; 4], g2: &[f64; 4]) -> Option<(f64, f64)> {
    let (xs, ys) = (xs.to_vec(), ys.to_vec());
    let m = xs.len();
    let p0 = [g1[0], g1[1], g1[2], g2[0], g2[1], g2[2], g1[3]];
    let res = levenberg_marquardt(
        move |p, out| {
            for i in 0..m {
                let d1 = xs[i] - p[1];
                let d2 = xs[i] - p[4];
                out[i] = p[0] * (-d1 * d1 / (2.0 * p[2] * p[2])).exp()
                    + p[3] * (-d2 * d2 / (2.0 * p[5] * p[5])).exp()
                    + p[6]
                    - ys[i];
            }
        },
        None,
        &p0,
        m,
        &LmOptions::default(),
    )
    .ok()?;
    Some((res.params[1], res.params[4]))
}

fn fit_peak_window(xs: &[f64], ys: &[f64], center_idx: usize, width: f64) -> Option<[f64; 4]> {
    let x0 = xs[center_idx];
    let mut wx = Vec::new();
    let mut wy = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        if (x - x0).abs() <= 4.0 * width {
            wx.push(*x);
            wy.push(*y);
        }
    }
    if wx.len() < 5 {
        return None;
    }
    crate::fit::fit_gaussian(&wx, &wy, (ys[center_idx], x0, width, 0.0)).ok()
}

/// Fit the crossing model to a spectrum table and extract Ω_c.
pub fn fit_avoided_crossing(
    rows: &[SpectrumRow],
    line_width: f64,
) -> Result<CrossingFit, CrossingError> {
    let table = extract_peaks(rows, line_width)?;
    fit_peak_table(&table)
}

/// Fit the crossing model to already-extracted (field, frequency) peaks.
pub fn fit_peak_table(table: &PeakTable) -> Result<CrossingFit, CrossingError> {
    let peaks = &table.peaks;
    let mut fields: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    fields.sort_by(|a, b| a.partial_cmp(b).unwrap());
    fields.dedup();
    if fields.len() < 8 {
        return Err(CrossingError::TooFewColumns { needed: 8, got: fields.len() });
    }

    // initial guesses: center where the per-field gap is smallest, scale a
    // from the asymptotic branch slope, b from the center frequency, c from
    // the minimum gap
    let gap_at = |f: f64| -> Option<f64> {
        let col: Vec<f64> = peaks.iter().filter(|p| p.0 == f).map(|p| p.1).collect();
        if col.len() >= 2 {
            let hi = col.iter().cloned().fold(f64::MIN, f64::max);
            let lo = col.iter().cloned().fold(f64::MAX, f64::min);
            Some(hi - lo)
        } else {
            None
        }
    };
    let mut d0 = fields[fields.len() / 2];
    let mut min_gap = f64::MAX;
    let mut have_gap = false;
    for &f in &fields {
        if let Some(g) = gap_at(f) {
            have_gap = true;
            if g < min_gap {
                min_gap = g;
                d0 = f;
            }
        }
    }
    if !have_gap {
        return Err(CrossingError::NoPeaks);
    }
    let center_freq = {
        let col: Vec<f64> = peaks.iter().filter(|p| p.0 == d0).map(|p| p.1).collect();
        col.iter().sum::<f64>() / col.len() as f64
    };
    let span_field = fields.last().unwrap() - fields.first().unwrap();
    // upper branch rises with |γ−d| at slope a/2 far out
    let far = fields.last().unwrap();
    let far_hi =
        peaks.iter().filter(|p| p.0 == *far).map(|p| p.1).fold(f64::MIN, f64::max);
    let a0 = (2.0 * (far_hi - center_freq) / (far - d0).abs()).abs().max(
        // fallback when the scan barely leaves the crossing region
        2.0 * min_gap / span_field,
    );
    let b0 = (center_freq / a0).powi(2);
    let c0 = (min_gap * b0.sqrt() / a0).max(1e-12 * b0);

    let residual = |p: &[f64], out: &mut nalgebra::DVector<f64>| {
        for (i, &(field, w)) in peaks.iter().enumerate() {
            let (hi, lo) = model_branches(p, field);
            let (rh, rl) = (w - hi, w - lo);
            out[i] = if rh.abs() < rl.abs() { rh } else { rl };
        }
    };

    let mut best: Option<crate::fit::LmResult> = None;
    // coarse grid around the data-driven starting point; the model is
    // nonconvex enough that a single start occasionally lands wrong
    for fb in [1.0, 0.5, 2.0] {
        for fc in [1.0, 0.3, 3.0] {
            let p0 = [a0, b0 * fb, c0 * fc, d0];
            if let Ok(res) =
                levenberg_marquardt(residual, None, &p0, peaks.len(), &LmOptions::default())
            {
                if best.as_ref().is_none_or(|b| res.chi2 < b.chi2) {
                    best = Some(res);
                }
            }
        }
    }
    let res = best.ok_or(FitError::NonConvergence(200))?;
    let (a, b, c, d) = (res.params[0], res.params[1], res.params[2].abs(), res.params[3]);
    if b < c {
        return Err(CrossingError::UnphysicalFit { b, c });
    }
    let omega_c = a * ((b + c).sqrt() - (b - c).sqrt());

    // delta method on Ω_c(a, b, c)
    let sp = (b + c).sqrt();
    let sm = (b - c).sqrt();
    let grad = [
        sp - sm,
        a * (0.5 / sp - 0.5 / sm),
        a * (0.5 / sp + 0.5 / sm) * res.params[2].signum(),
        0.0,
    ];
    let mut var = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            var += grad[i] * res.covariance[(i, j)] * grad[j];
        }
    }
    Ok(CrossingFit {
        a,
        b,
        c,
        d_center: d,
        omega_c,
        ci95: 1.96 * var.max(0.0).sqrt(),
        chi2: res.chi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcharge::{exact_pair_frequencies, interaction_constant_from_splitting};
    use rand::Rng;
    use std::f64::consts::TAU;

    fn pair(delta: f64, omega_m: f64, rate: f64) -> DetunedPair {
        let species = IonSpecies::ca40();
        let k = interaction_constant_from_splitting(rate, 1, &species, omega_m).unwrap();
        DetunedPair { delta_omega: delta, omega_m, k_int: k, n: 1, species }
    }

    #[test]
    fn resonant_limit_reduces_to_pair_formula() {
        let omega_m = TAU * 400e3;
        let p = pair(0.0, omega_m, TAU * 19e3);
        let (hi, lo) = detuned_pair_frequencies(&p).unwrap();
        let (com, str_) = exact_pair_frequencies(p.k_int, 1, &p.species, omega_m).unwrap();
        assert!((hi - com).abs() / com < 1e-12);
        assert!((lo - str_).abs() / str_ < 1e-12);
    }

    #[test]
    fn decoupled_limit_recovers_bare_frequencies() {
        let omega_m = TAU * 400e3;
        let delta = TAU * 60e3; // >> k/(n m ω_m) = 2π·19 kHz coupling
        let p = pair(delta, omega_m, TAU * 1e3);
        let (hi, lo) = detuned_pair_frequencies(&p).unwrap();
        let w2 = omega_m + delta / 2.0;
        let w1 = omega_m - delta / 2.0;
        assert!((hi - w2).abs() / w2 < 1e-3, "hi {hi} vs {w2}");
        assert!((lo - w1).abs() / w1 < 1e-3);
    }

    #[test]
    fn minimum_gap_sits_at_resonance_with_value_omega_c() {
        let omega_m = TAU * 400e3;
        let rate = TAU * 19e3;
        let mut best = (f64::MAX, f64::NAN);
        for i in -400..=400 {
            let delta = TAU * 100.0 * i as f64; // ±40 kHz in 100 Hz steps
            let p = pair(delta, omega_m, rate);
            let (hi, lo) = detuned_pair_frequencies(&p).unwrap();
            if hi - lo < best.0 {
                best = (hi - lo, delta);
            }
        }
        assert_eq!(best.1, 0.0, "minimum gap not at resonance");
        assert!((best.0 - rate).abs() / rate < 1e-9);
    }

    #[test]
    fn modevector_limits_and_orthogonality() {
        let omega_m = TAU * 400e3;
        // χ = 0
        let p0 = pair(0.0, omega_m, TAU * 19e3);
        let (vp, vm) = detuned_pair_modevectors(&p0);
        let s = 0.5f64.sqrt();
        assert!((vp[0] - s).abs() < 1e-12 && (vp[1] - s).abs() < 1e-12);
        assert!((vm[0] + s).abs() < 1e-12 && (vm[1] - s).abs() < 1e-12);
        // strong detuning localizes the modes
        let p_inf = {
            let mut p = pair(0.0, omega_m, TAU * 19e3);
            p.delta_omega = 1e6 * p.k_int / (p.species.mass * omega_m);
            p
        };
        let (vp, vm) = detuned_pair_modevectors(&p_inf);
        assert!(vp[1].abs() > 0.999999 && vp[0].abs() < 1e-5);
        assert!(vm[0].abs() > 0.999999 && vm[1].abs() < 1e-5);
        // orthogonality over random χ
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut p = pair(0.0, omega_m, TAU * 19e3);
            p.delta_omega = TAU * rng.gen_range(-50e3..50e3);
            let (vp, vm) = detuned_pair_modevectors(&p);
            let dot = vp[0] * vm[0] + vp[1] * vm[1];
            assert!(dot.abs() < 1e-12, "dot = {dot:.2e} at chi = {:.3}", p.chi());
        }
    }

    #[test]
    fn modevectors_continuous_across_resonance() {
        let omega_m = TAU * 400e3;
        let eps = TAU * 1.0;
        let (vp_m, vm_m) = detuned_pair_modevectors(&pair(-eps, omega_m, TAU * 19e3));
        let (vp_p, vm_p) = detuned_pair_modevectors(&pair(eps, omega_m, TAU * 19e3));
        for k in 0..2 {
            assert!((vp_m[k] - vp_p[k]).abs() < 1e-3);
            assert!((vm_m[k] - vm_p[k]).abs() < 1e-3);
        }
    }

    fn synth_config(rate: f64, freq_noise: f64, seed: u64) -> (SynthCrossingConfig, IonSpecies) {
        let species = IonSpecies::ca40();
        let omega_m = TAU * 400e3;
        let k = interaction_constant_from_splitting(rate, 1, &species, omega_m).unwrap();
        let slope = rate; // rad/s detuning per V/m
        let fields: Vec<f64> = (0..25).map(|i| -4.0 + 8.0 * i as f64 / 24.0).collect();
        let span = 12.0 * rate;
        let config = SynthCrossingConfig {
            omega_m,
            k_int: k,
            n: 1,
            slope,
            field_center: 1.11,
            fields,
            probes: SynthCrossingConfig::probe_grid(omega_m, span, 361),
            line_width: rate / 6.0,
            freq_noise_sd: freq_noise,
            excitation_noise_sd: 0.0,
            seed,
        };
        (config, species)
    }

    #[test]
    fn noiseless_peaks_sit_on_model() {
        let rate = TAU * 19e3;
        let (config, species) = synth_config(rate, 0.0, 1);
        let rows = synth_crossing_spectrum(&config, &species).unwrap();
        let peaks = extract_peaks(&rows, config.line_width).unwrap();
        for &(field, w) in &peaks.peaks {
            let p = DetunedPair {
                delta_omega: config.slope * (field - config.field_center),
                omega_m: config.omega_m,
                k_int: config.k_int,
                n: 1,
                species: species.clone(),
            };
            let (hi, lo) = detuned_pair_frequencies(&p).unwrap();
            let err = (w - hi).abs().min((w - lo).abs());
            assert!(err < 1e-4 * rate, "peak off by {:.1} Hz", err / TAU);
        }
    }

    #[test]
    fn far_detuned_column_has_single_dominant_peak() {
        let rate = TAU * 19e3;
        let (mut config, species) = synth_config(rate, 0.0, 1);
        config.fields = vec![config.field_center + 8.0];
        config.probes = SynthCrossingConfig::probe_grid(config.omega_m, 24.0 * rate, 721);
        let rows = synth_crossing_spectrum(&config, &species).unwrap();
        // amplitudes: dominant branch participation > 0.99
        let max = rows.iter().map(|r| r.excitation).fold(f64::MIN, f64::max);
        let p = DetunedPair {
            delta_omega: config.slope * 8.0,
            omega_m: config.omega_m,
            k_int: config.k_int,
            n: 1,
            species,
        };
        let (vp, vm) = detuned_pair_modevectors(&p);
        let strong = vp[0].powi(2).max(vm[0].powi(2));
        assert!(strong > 0.98);
        assert!((max - strong).abs() < 0.02);
    }

    #[test]
    fn seeded_spectrum_reproducible() {
        let rate = TAU * 19e3;
        let (mut config, species) = synth_config(rate, rate * 0.01, 42);
        config.excitation_noise_sd = 0.01;
        let a = synth_crossing_spectrum(&config, &species).unwrap();
        let b = synth_crossing_spectrum(&config, &species).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.excitation, y.excitation);
        }
    }

    #[test]
    fn noiseless_fit_recovers_exactly() {
        let rate = TAU * 19e3;
        let (config, species) = synth_config(rate, 0.0, 1);
        let rows = synth_crossing_spectrum(&config, &species).unwrap();
        let fit = fit_avoided_crossing(&rows, config.line_width).unwrap();
        assert!(
            (fit.omega_c - rate).abs() / rate < 1e-6,
            "got {:.3} kHz",
            fit.omega_c / TAU / 1e3
        );
        assert!((fit.d_center - 1.11).abs() < 1e-4);
    }

    #[test]
    fn noisy_fit_recovers_within_two_percent() {
        for &khz in &[5.0, 19.0, 39.0] {
            let rate = TAU * khz * 1e3;
            let (config, species) = synth_config(rate, 0.01 * rate, 7);
            let rows = synth_crossing_spectrum(&config, &species).unwrap();
            let fit = fit_avoided_crossing(&rows, config.line_width).unwrap();
            assert!(
                (fit.omega_c - rate).abs() / rate < 0.02,
                "Ω_c = {khz} kHz recovered as {:.3} kHz",
                fit.omega_c / TAU / 1e3
            );
            assert!(fit.ci95 > 0.0);
        }
    }

    #[test]
    fn fit_error_shrinks_with_noise() {
        let rate = TAU * 19e3;
        let mut errs = Vec::new();
        for noise_rel in [0.03, 0.01, 0.003] {
            // average recovery error over a few seeds at each level
            let mut acc: f64 = 0.0;
            for seed in 0..4 {
                let (config, species) = synth_config(rate, noise_rel * rate, 100 + seed);
                let rows = synth_crossing_spectrum(&config, &species).unwrap();
                let fit = fit_avoided_crossing(&rows, config.line_width).unwrap();
                acc += ((fit.omega_c - rate) / rate).abs();
            }
            errs.push(acc / 4.0);
        }
        assert!(errs[2] < errs[0], "errors {errs:?} do not shrink");
    }
}
