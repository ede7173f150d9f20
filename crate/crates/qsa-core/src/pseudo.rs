//! Gapless-plane surface-trap model: analytic strip and rectangle fields,
//! RF pseudopotential landscapes, and DC field-per-volt evaluation.
//!
//! The trap plane sits at y = 0 with everything outside the listed
//! electrodes grounded. RF strips are infinite along z (the 2D problem used
//! for null finding); DC electrodes are finite rectangles (the 3D closed
//! form used for heating-field projections). All fields are per volt.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::IonSpecies;
use crate::par::par_map;

#[derive(Debug, Error)]
pub enum PseudoError {
    #[error("field evaluation requires y > 0 (got y = {0:.3e})")]
    AtOrBelowPlane(f64),
    #[error("no pseudopotential minimum found in the search window")]
    NoMinimumInWindow,
    #[error("geometry has no {0} strip")]
    MissingRole(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RfRole {
    Rf1,
    Rf2,
}

/// RF strip electrode, infinite along z.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RfStrip {
    pub x_min: f64,
    pub x_max: f64,
    pub role: RfRole,
}

/// DC electrode as a finite rectangle in the plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DcElectrode {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub id: String,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RfDrive {
    /// RF drive frequency (rad/s).
    pub omega_rf: f64,
    /// Amplitude on RF1 strips (V).
    pub v_rf1: f64,
    /// Amplitude on RF2 strips (V).
    pub v_rf2: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceTrapGeometry {
    pub rf_strips: Vec<RfStrip>,
    pub dc_electrodes: Vec<DcElectrode>,
    pub drive: RfDrive,
}

impl SurfaceTrapGeometry {
    /// RF amplitude ratio ζ = V_RF1 / V_RF2.
    pub fn zeta(&self) -> f64 {
        self.drive.v_rf1 / self.drive.v_rf2
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.drive.v_rf1 = zeta * self.drive.v_rf2;
        self
    }

    /// Scale all lateral dimensions by `s` (electrode extents only; the
    /// drive is unchanged).
    pub fn scaled(mut self, s: f64) -> Self {
        for strip in &mut self.rf_strips {
            strip.x_min *= s;
            strip.x_max *= s;
        }
        for dc in &mut self.dc_electrodes {
            dc.x_min *= s;
            dc.x_max *= s;
            dc.z_min *= s;
            dc.z_max *= s;
        }
        self
    }

    /// Double-well transport trap: 75 µm inner RF strip, 255 µm outer RF
    /// strips, 115 µm gaps, with segmented DC rails beyond the RF section.
    pub fn rf_transport_trap() -> Self {
        let um = 1e-6;
        let rf_strips = vec![
            RfStrip { x_min: -37.5 * um, x_max: 37.5 * um, role: RfRole::Rf1 },
            RfStrip { x_min: 152.5 * um, x_max: 407.5 * um, role: RfRole::Rf2 },
            RfStrip { x_min: -407.5 * um, x_max: -152.5 * um, role: RfRole::Rf2 },
        ];
        let mut dc_electrodes = Vec::new();
        for side in [-1.0f64, 1.0] {
            for seg in 0..6 {
                let z0 = (-300.0 + 100.0 * seg as f64) * um;
                dc_electrodes.push(DcElectrode {
                    x_min: side.min(side * 2.0) * 407.5 * um + if side > 0.0 { 115.0 * um } else { 0.0 },
                    x_max: 0.0, // filled below
                    z_min: z0,
                    z_max: z0 + 100.0 * um,
                    id: format!("dc{}{}", if side > 0.0 { "R" } else { "L" }, seg),
                });
            }
        }
        // DC rails run outside the outer RF strips: [522.5, 722.5] µm
        for dc in &mut dc_electrodes {
            if dc.id.starts_with("dcR") {
                dc.x_min = 522.5 * um;
                dc.x_max = 722.5 * um;
            } else {
                dc.x_min = -722.5 * um;
                dc.x_max = -522.5 * um;
            }
        }
        Self {
            rf_strips,
            dc_electrodes,
            drive: RfDrive { omega_rf: std::f64::consts::TAU * 18.95e6, v_rf1: 70.0, v_rf2: 70.0 },
        }
    }
}

/// Per-volt field (E_x, E_y) of one infinite strip at (x, y), y > 0.
pub fn strip_field(strip: &RfStrip, x: f64, y: f64) -> Result<[f64; 2], PseudoError> {
    if y <= 0.0 {
        return Err(PseudoError::AtOrBelowPlane(y));
    }
    let u2 = strip.x_max - x;
    let u1 = strip.x_min - x;
    let (d2, d1) = (y * y + u2 * u2, y * y + u1 * u1);
    Ok([
        (y / d2 - y / d1) / std::f64::consts::PI,
        (u2 / d2 - u1 / d1) / std::f64::consts::PI,
    ])
}

/// Per-volt field and its Jacobian [[∂E_x/∂x, ∂E_x/∂y], [∂E_y/∂x, ∂E_y/∂y]].
fn strip_field_jacobian(strip: &RfStrip, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let pi = std::f64::consts::PI;
    let u2 = strip.x_max - x;
    let u1 = strip.x_min - x;
    let (d2, d1) = (y * y + u2 * u2, y * y + u1 * u1);
    let e = [(y / d2 - y / d1) / pi, (u2 / d2 - u1 / d1) / pi];
    let exx = (2.0 * u2 * y / (d2 * d2) - 2.0 * u1 * y / (d1 * d1)) / pi;
    let exy = ((u2 * u2 - y * y) / (d2 * d2) - (u1 * u1 - y * y) / (d1 * d1)) / pi;
    // curl- and divergence-free: ∂E_y/∂x = ∂E_x/∂y, ∂E_y/∂y = −∂E_x/∂x
    (e, [[exx, exy], [exy, -exx]])
}

/// Summed RF field per unit V_RF2 (RF1 strips weighted by ζ).
fn rf_field(geometry: &SurfaceTrapGeometry, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let zeta = geometry.zeta();
    let mut e = [0.0; 2];
    let mut j = [[0.0; 2]; 2];
    for strip in &geometry.rf_strips {
        let w = match strip.role {
            RfRole::Rf1 => zeta,
            RfRole::Rf2 => 1.0,
        };
        let (es, js) = strip_field_jacobian(strip, x, y);
        for a in 0..2 {
            e[a] += w * es[a];
            for b in 0..2 {
                j[a][b] += w * js[a][b];
            }
        }
    }
    (e, j)
}

/// Ponderomotive pseudopotential energy (J) at (x, y).
pub fn pseudopotential_at(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    x: f64,
    y: f64,
) -> Result<f64, PseudoError> {
    if y <= 0.0 {
        return Err(PseudoError::AtOrBelowPlane(y));
    }
    let (e, _) = rf_field(geometry, x, y);
    let v2 = geometry.drive.v_rf2;
    let e2 = (e[0] * e[0] + e[1] * e[1]) * v2 * v2;
    let q = species.charge;
    Ok(q * q * e2 / (4.0 * species.mass * geometry.drive.omega_rf * geometry.drive.omega_rf))
}

/// One pseudopotential minimum.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PseudoMinimum {
    pub x: f64,
    /// Height above the plane (m).
    pub y: f64,
    /// In-plane pseudo-frequency (rad/s).
    pub omega_x: f64,
    /// Vertical pseudo-frequency (rad/s).
    pub omega_y: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoLandscape {
    /// Minima sorted by x.
    pub minima: Vec<PseudoMinimum>,
    /// Distance between the two minima, when exactly two exist.
    pub separation: Option<f64>,
    pub merged: bool,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Find all RF nulls (pseudopotential minima) in the window via seeded
/// Gauss-Newton on the 2D field.
pub fn find_rf_nulls(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    window: &SearchWindow,
) -> Result<PseudoLandscape, PseudoError> {
    assert!(window.y_min > 0.0, "window must sit above the plane");
    let mut seeds = Vec::new();
    let (nx, ny) = (48, 36);
    for i in 0..nx {
        for k in 0..ny {
            seeds.push((
                window.x_min + (window.x_max - window.x_min) * (i as f64 + 0.5) / nx as f64,
                window.y_min + (window.y_max - window.y_min) * (k as f64 + 0.5) / ny as f64,
            ));
        }
    }
    let mut zeros: Vec<[f64; 2]> = Vec::new();
    let field_scale = {
        let (e, _) = rf_field(geometry, (window.x_min + window.x_max) / 2.0, window.y_max);
        (e[0] * e[0] + e[1] * e[1]).sqrt().max(1e-12)
    };
    for (x0, y0) in seeds {
        if let Some(z) = newton_null(geometry, x0, y0, window, field_scale) {
            if !zeros.iter().any(|p| (p[0] - z[0]).hypot(p[1] - z[1]) < 1e-9) {
                zeros.push(z);
            }
        }
    }
    if zeros.is_empty() {
        return Err(PseudoError::NoMinimumInWindow);
    }
    zeros.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    let minima: Vec<PseudoMinimum> =
        zeros.iter().map(|z| characterize_minimum(geometry, species, z[0], z[1])).collect();
    let separation =
        if minima.len() == 2 { Some(minima[1].x - minima[0].x) } else { None };
    Ok(PseudoLandscape { merged: minima.len() == 1, minima, separation })
}

fn newton_null(
    geometry: &SurfaceTrapGeometry,
    mut x: f64,
    mut y: f64,
    window: &SearchWindow,
    field_scale: f64,
) -> Option<[f64; 2]> {
    for _ in 0..80 {
        let (e, j) = rf_field(geometry, x, y);
        let norm = (e[0] * e[0] + e[1] * e[1]).sqrt();
        if norm < 1e-12 * field_scale {
            let inside = x >= window.x_min
                && x <= window.x_max
                && y >= window.y_min
                && y <= window.y_max;
            return inside.then_some([x, y]);
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = -(j[1][1] * e[0] - j[0][1] * e[1]) / det;
        let dy = -(-j[1][0] * e[0] + j[0][0] * e[1]) / det;
        // keep steps bounded so seeds do not shoot below the plane
        let max_step = 0.25 * (window.y_max - window.y_min).max(window.x_max - window.x_min);
        let scale = (dx.hypot(dy) / max_step).max(1.0);
        x += dx / scale;
        y += dy / scale;
        if y < 0.2 * window.y_min {
            return None;
        }
    }
    None
}

fn characterize_minimum(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    x: f64,
    y: f64,
) -> PseudoMinimum {
    // at an exact null the pseudopotential Hessian is 2c JᵀJ with J the
    // field Jacobian
    let (_, j) = rf_field(geometry, x, y);
    let v2 = geometry.drive.v_rf2;
    let q = species.charge;
    let c = q * q * v2 * v2 / (4.0 * species.mass * geometry.drive.omega_rf * geometry.drive.omega_rf);
    let mut h = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            h[a][b] = 2.0 * c * (j[0][a] * j[0][b] + j[1][a] * j[1][b]);
        }
    }
    // 2x2 symmetric eigenvalues
    let tr = h[0][0] + h[1][1];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let (l1, l2) = (tr / 2.0 - disc, tr / 2.0 + disc);
    // label by dominant axis of the eigenvectors
    let (omega_a, omega_b) = ((l1 / species.mass).max(0.0).sqrt(), (l2 / species.mass).sqrt());
    // eigenvector of l2: (h01, l2 − h00)
    let v2x = h[0][1];
    let v2y = l2 - h[0][0];
    let l2_is_x = v2x.abs() > v2y.abs();
    let (omega_x, omega_y) = if l2_is_x { (omega_b, omega_a) } else { (omega_a, omega_b) };
    PseudoMinimum { x, y, omega_x, omega_y }
}

/// Row of a ζ sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZetaScanRow {
    pub zeta: f64,
    pub separation_um: f64,
    pub height_um: f64,
    pub omega_x_hz: f64,
    pub merged: bool,
    pub status: String,
}

/// Sweep ζ and track the minima (fresh window search per point; points are
/// independent so the sweep parallelizes).
pub fn separation_vs_ratio(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    window: &SearchWindow,
    zetas: &[f64],
) -> Vec<ZetaScanRow> {
    let points: Vec<f64> = zetas.to_vec();
    par_map(points, move |zeta| {
        let g = geometry.clone().with_zeta(zeta);
        match find_rf_nulls(&g, species, window) {
            Ok(landscape) => {
                let (sep, height, wx) = match landscape.separation {
                    Some(s) => (
                        s * 1e6,
                        (landscape.minima[0].y + landscape.minima[1].y) / 2.0 * 1e6,
                        landscape.minima[0].omega_x / std::f64::consts::TAU,
                    ),
                    None => (
                        0.0,
                        landscape.minima[0].y * 1e6,
                        landscape.minima[0].omega_x / std::f64::consts::TAU,
                    ),
                };
                ZetaScanRow {
                    zeta,
                    separation_um: sep,
                    height_um: height,
                    omega_x_hz: wx,
                    merged: landscape.merged,
                    status: "ok".into(),
                }
            }
            Err(e) => ZetaScanRow {
                zeta,
                separation_um: f64::NAN,
                height_um: f64::NAN,
                omega_x_hz: f64::NAN,
                merged: false,
                status: format!("error: {e}"),
            },
        }
    })
}

/// Fit a global scale factor on the ζ axis of measured separations against
/// the model: minimizes Σ (model(s·ζ) − measured)² over s by golden section.
pub fn fit_zeta_scale_factor(
    geometry: &SurfaceTrapGeometry,
    species: &IonSpecies,
    window: &SearchWindow,
    measured: &[(f64, f64)],
) -> f64 {
    let objective = |s: f64| -> f64 {
        measured
            .iter()
            .map(|&(zeta, sep)| {
                let g = geometry.clone().with_zeta(s * zeta);
                match find_rf_nulls(&g, species, window) {
                    Ok(l) => match l.separation {
                        Some(model) => (model - sep) * (model - sep),
                        None => sep * sep,
                    },
                    Err(_) => sep * sep,
                }
            })
            .sum()
    };
    let (mut a, mut b) = (0.9f64, 1.15f64);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    for _ in 0..40 {
        if (b - a).abs() < 1e-5 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d);
        }
    }
    (a + b) / 2.0
}

/// Surrogate for the radial-entanglement double-well trap: the transport
/// trap scaled so the minima sit at `height`, with ζ tuned until the wells
/// are `separation` apart, driven at `v_amp` volts and `omega_rf`.
///
/// The published facts about that trap are its 29 µm separation, 80 µm ion
/// height and 140 Vpp / 19 MHz drive; the electrode widths are not, so the
/// transport-trap cross-section stands in for them.
pub fn radial_entanglement_surrogate(
    species: &IonSpecies,
    separation: f64,
    height: f64,
    v_amp: f64,
    omega_rf: f64,
) -> Result<(SurfaceTrapGeometry, SearchWindow), PseudoError> {
    let base = SurfaceTrapGeometry::rf_transport_trap();
    let w0 = SearchWindow { x_min: -250e-6, x_max: 250e-6, y_min: 30e-6, y_max: 400e-6 };
    let l0 = find_rf_nulls(&base, species, &w0)?;
    let scale = height / l0.minima[0].y;
    let mut g = base.scaled(scale);
    g.drive = RfDrive { omega_rf, v_rf1: v_amp, v_rf2: v_amp };
    // twelve segmented DC electrodes flanking the RF section, close enough
    // that their axial fields differ measurably between the two wells
    let um = 1e-6;
    g.dc_electrodes.clear();
    for side in [-1.0f64, 1.0] {
        for seg in 0..6 {
            let z0 = (-300.0 + 100.0 * seg as f64) * um;
            g.dc_electrodes.push(DcElectrode {
                x_min: (side * 60.0 * um).min(side * 160.0 * um),
                x_max: (side * 60.0 * um).max(side * 160.0 * um),
                z_min: z0,
                z_max: z0 + 100.0 * um,
                id: format!("dc{}{}", if side > 0.0 { "R" } else { "L" }, seg),
            });
        }
    }
    let window = SearchWindow {
        x_min: -200e-6 * scale / 0.6,
        x_max: 200e-6 * scale / 0.6,
        y_min: 0.2 * height,
        y_max: 2.5 * height,
    };
    // bisect ζ for the requested separation (separation grows with ζ)
    let sep_at = |zeta: f64| -> Option<f64> {
        find_rf_nulls(&g.clone().with_zeta(zeta), species, &window).ok().and_then(|l| l.separation)
    };
    let (mut lo, mut hi) = (0.795, 1.0);
    for _ in 0..50 {
        let mid = (lo + hi) / 2.0;
        match sep_at(mid) {
            Some(s) if s > separation => hi = mid,
            Some(_) => lo = mid,
            None => lo = mid, // merged: need more inner drive
        }
    }
    let zeta = (lo + hi) / 2.0;
    Ok((g.with_zeta(zeta), window))
}

/// Per-volt field of a finite rectangular electrode at a 3D point, y > 0.
pub fn rectangle_field(dc: &DcElectrode, r: [f64; 3]) -> Result<[f64; 3], PseudoError> {
    let (x, y, z) = (r[0], r[1], r[2]);
    if y <= 0.0 {
        return Err(PseudoError::AtOrBelowPlane(y));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut e = [0.0; 3];
    for (xc, sx) in [(dc.x_max, 1.0), (dc.x_min, -1.0)] {
        for (zc, sz) in [(dc.z_max, 1.0), (dc.z_min, -1.0)] {
            let sign = sx * sz;
            let u = xc - x;
            let v = zc - z;
            let rr = (u * u + v * v + y * y).sqrt();
            e[0] += sign * v * y / (rr * (u * u + y * y));
            e[2] += sign * u * y / (rr * (v * v + y * y));
            e[1] += sign * u * v * (rr * rr + y * y) / (rr * (u * u + y * y) * (v * v + y * y));
        }
    }
    Ok([e[0] / two_pi, e[1] / two_pi, e[2] / two_pi])
}

/// Per-volt potential of a finite rectangular electrode (for testing the
/// closed-form field against numerical gradients).
pub fn rectangle_potential(dc: &DcElectrode, r: [f64; 3]) -> Result<f64, PseudoError> {
    let (x, y, z) = (r[0], r[1], r[2]);
    if y <= 0.0 {
        return Err(PseudoError::AtOrBelowPlane(y));
    }
    let mut phi = 0.0;
    for (xc, sx) in [(dc.x_max, 1.0), (dc.x_min, -1.0)] {
        for (zc, sz) in [(dc.z_max, 1.0), (dc.z_min, -1.0)] {
            let u = xc - x;
            let v = zc - z;
            let rr = (u * u + v * v + y * y).sqrt();
            phi += sx * sz * (u * v / (y * rr)).atan();
        }
    }
    Ok(phi / (2.0 * std::f64::consts::PI))
}

/// Per-electrode field vectors (V/m per V) at each given position.
pub fn dc_field_per_volt(
    geometry: &SurfaceTrapGeometry,
    positions: &[[f64; 3]],
) -> Result<Vec<Vec<[f64; 3]>>, PseudoError> {
    geometry
        .dc_electrodes
        .iter()
        .map(|dc| positions.iter().map(|&r| rectangle_field(dc, r)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn ca() -> IonSpecies {
        IonSpecies::ca40()
    }

    fn window() -> SearchWindow {
        SearchWindow { x_min: -250e-6, x_max: 250e-6, y_min: 30e-6, y_max: 400e-6 }
    }

    #[test]
    fn strip_jacobian_matches_finite_difference() {
        let strip = RfStrip { x_min: -40e-6, x_max: 35e-6, role: RfRole::Rf1 };
        let (x, y) = (22e-6, 90e-6);
        let (_, j) = strip_field_jacobian(&strip, x, y);
        let h = 1e-10;
        let ex = |x: f64, y: f64| strip_field(&strip, x, y).unwrap()[0];
        let ey = |x: f64, y: f64| strip_field(&strip, x, y).unwrap()[1];
        let fd = [
            [(ex(x + h, y) - ex(x - h, y)) / (2.0 * h), (ex(x, y + h) - ex(x, y - h)) / (2.0 * h)],
            [(ey(x + h, y) - ey(x - h, y)) / (2.0 * h), (ey(x, y + h) - ey(x, y - h)) / (2.0 * h)],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!(
                    (j[a][b] - fd[a][b]).abs() < 1e-4 * fd[a][b].abs().max(1.0),
                    "({a},{b}): {} vs {}",
                    j[a][b],
                    fd[a][b]
                );
            }
        }
    }

    #[test]
    fn strip_far_field_decays_inverse_square() {
        let strip = RfStrip { x_min: -30e-6, x_max: 30e-6, role: RfRole::Rf1 };
        let mut pts = Vec::new();
        for i in 0..6 {
            let y = 2e-3 * 2.0f64.powi(i);
            let e = strip_field(&strip, 0.0, y).unwrap();
            pts.push((y.ln(), (e[0].hypot(e[1])).ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope + 2.0).abs() < 0.01, "far-field slope {slope:.3}");
    }

    #[test]
    fn symmetric_pair_cancels_ex_on_axis() {
        let left = RfStrip { x_min: -80e-6, x_max: -30e-6, role: RfRole::Rf1 };
        let right = RfStrip { x_min: 30e-6, x_max: 80e-6, role: RfRole::Rf1 };
        for y in [40e-6, 120e-6, 300e-6] {
            let e = strip_field(&left, 0.0, y).unwrap()[0] + strip_field(&right, 0.0, y).unwrap()[0];
            assert!(e.abs() < 1e-18, "E_x on axis = {e:.3e}");
        }
        // single strip, point above its center
        let strip = RfStrip { x_min: -25e-6, x_max: 25e-6, role: RfRole::Rf1 };
        assert!(strip_field(&strip, 0.0, 77e-6).unwrap()[0].abs() < 1e-18);
    }

    #[test]
    fn plane_evaluation_is_domain_error() {
        let strip = RfStrip { x_min: 0.0, x_max: 1e-4, role: RfRole::Rf1 };
        assert!(strip_field(&strip, 0.0, 0.0).is_err());
        assert!(pseudopotential_at(&SurfaceTrapGeometry::rf_transport_trap(), &ca(), 0.0, -1e-6)
            .is_err());
    }

    #[test]
    fn pseudopotential_zero_on_null_and_quadratic_in_voltage() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let species = ca();
        let landscape = find_rf_nulls(&g, &species, &window()).unwrap();
        let m = &landscape.minima[0];
        let val = pseudopotential_at(&g, &species, m.x, m.y).unwrap();
        let scale = pseudopotential_at(&g, &species, m.x, m.y + 10e-6).unwrap();
        assert!(val < 1e-12 * scale, "pseudopotential at null: {val:.3e} vs nearby {scale:.3e}");
        // doubling both voltages quadruples the pseudopotential
        let mut g4 = g.clone();
        g4.drive.v_rf1 *= 2.0;
        g4.drive.v_rf2 *= 2.0;
        let (x, y) = (40e-6, 100e-6);
        let a = pseudopotential_at(&g, &species, x, y).unwrap();
        let b = pseudopotential_at(&g4, &species, x, y).unwrap();
        assert!((b - 4.0 * a).abs() < 1e-12 * b.abs());
    }

    #[test]
    fn transport_trap_has_110um_separation_at_unity_ratio() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let species = ca();
        let landscape = find_rf_nulls(&g, &species, &window()).unwrap();
        assert!(!landscape.merged);
        let sep = landscape.separation.expect("two minima") * 1e6;
        assert!((sep - 110.0).abs() / 110.0 < 0.15, "separation {sep:.1} um");
        let height = landscape.minima[0].y * 1e6;
        assert!((height - 130.0).abs() / 130.0 < 0.25, "height {height:.1} um");
        // mirror symmetry
        assert!(
            (landscape.minima[0].x + landscape.minima[1].x).abs()
                < 1e-9 * landscape.minima[1].x.abs(),
            "minima not mirrored: {:.3e}, {:.3e}",
            landscape.minima[0].x,
            landscape.minima[1].x
        );
    }

    #[test]
    fn nulls_depend_on_ratio_not_amplitude() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let species = ca();
        let l1 = find_rf_nulls(&g, &species, &window()).unwrap();
        let mut g2 = g.clone();
        g2.drive.v_rf1 *= 3.0;
        g2.drive.v_rf2 *= 3.0;
        let l2 = find_rf_nulls(&g2, &species, &window()).unwrap();
        assert!((l1.minima[0].x - l2.minima[0].x).abs() < 1e-9);
        assert!((l1.minima[0].y - l2.minima[0].y).abs() < 1e-9);
        // pseudo-frequency scales linearly with overall amplitude
        assert!(
            (l2.minima[0].omega_x - 3.0 * l1.minima[0].omega_x).abs()
                < 1e-6 * l2.minima[0].omega_x
        );
    }

    #[test]
    fn zeta_sweep_monotonic_and_merging() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let species = ca();
        let zetas: Vec<f64> = (0..14).map(|i| 0.85 + 0.025 * i as f64).collect();
        let rows = separation_vs_ratio(&g, &species, &window(), &zetas);
        for w in rows.windows(2) {
            if w[0].status == "ok" && w[1].status == "ok" && !w[0].merged && !w[1].merged {
                assert!(
                    w[1].separation_um > w[0].separation_um,
                    "separation not monotone at zeta {}",
                    w[1].zeta
                );
                // transporting inward (decreasing ζ toward merge) softens the
                // radial confinement: ω_x falls together with the separation
                assert!(
                    w[1].omega_x_hz > w[0].omega_x_hz,
                    "omega_x not co-monotone at zeta {}",
                    w[1].zeta
                );
            }
        }
        // inner electrode off: single merged well
        let merged = find_rf_nulls(&g.clone().with_zeta(0.0), &species, &window()).unwrap();
        assert!(merged.merged);
        assert_eq!(merged.minima.len(), 1);
        // on-axis, at the height √(x_in · x_out) for a two-rail trap
        let expect = (152.5e-6f64 * 407.5e-6).sqrt();
        assert!(merged.minima[0].x.abs() < 1e-9);
        assert!((merged.minima[0].y - expect).abs() < 1e-8, "height {:.2e}", merged.minima[0].y);
    }

    #[test]
    fn zeta_scale_factor_recovered() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let species = ca();
        // synthetic "measured" data generated with a 1.039 ζ-axis distortion
        let zetas = [0.93, 0.97, 1.0, 1.04];
        let mut measured = Vec::new();
        for &z in &zetas {
            let l = find_rf_nulls(&g.clone().with_zeta(1.039 * z), &species, &window()).unwrap();
            measured.push((z, l.separation.unwrap()));
        }
        let s = fit_zeta_scale_factor(&g, &species, &window(), &measured);
        assert!((s - 1.039).abs() < 0.004, "scale factor {s:.4}");
    }

    #[test]
    fn scaled_trap_radial_frequency_near_2p4mhz() {
        // surrogate for the radial-entanglement trap: 29 µm wells at 80 µm
        // height, driven at 140 Vpp / 19 MHz
        let species = ca();
        let (g, w) =
            radial_entanglement_surrogate(&species, 29e-6, 80e-6, 70.0, TAU * 19e6).unwrap();
        let l = find_rf_nulls(&g, &species, &w).unwrap();
        assert_eq!(l.minima.len(), 2);
        let sep = l.separation.unwrap();
        assert!((sep - 29e-6).abs() < 0.5e-6, "separation {:.2} um", sep * 1e6);
        assert!((l.minima[0].y - 80e-6).abs() < 8e-6, "height {:.2} um", l.minima[0].y * 1e6);
        let f = l.minima[0].omega_x / TAU;
        assert!((f - 2.4e6).abs() / 2.4e6 < 0.25, "omega_x = {:.3} MHz", f / 1e6);
    }

    #[test]
    fn rectangle_field_matches_potential_gradient() {
        let dc = DcElectrode {
            x_min: 60e-6,
            x_max: 200e-6,
            z_min: 20e-6,
            z_max: 120e-6,
            id: "t".into(),
        };
        let r = [10e-6, 80e-6, -30e-6];
        let e = rectangle_field(&dc, r).unwrap();
        let h = 1e-10;
        for a in 0..3 {
            let mut rp = r;
            let mut rm = r;
            rp[a] += h;
            rm[a] -= h;
            let fd = -(rectangle_potential(&dc, rp).unwrap() - rectangle_potential(&dc, rm).unwrap())
                / (2.0 * h);
            assert!(
                (e[a] - fd).abs() < 1e-4 * fd.abs().max(1e-3),
                "axis {a}: {} vs {}",
                e[a],
                fd
            );
        }
    }

    #[test]
    fn dc_fields_superpose_and_smooth() {
        let g = SurfaceTrapGeometry::rf_transport_trap();
        let r1 = [-14.5e-6, 80e-6, 0.0];
        let r2 = [14.5e-6, 80e-6, 0.0];
        let fields = dc_field_per_volt(&g, &[r1, r2]).unwrap();
        // superposition: two electrodes at 1 V equal the sum of individual
        let sum01: [f64; 3] = [
            fields[0][0][0] + fields[1][0][0],
            fields[0][0][1] + fields[1][0][1],
            fields[0][0][2] + fields[1][0][2],
        ];
        let combined = {
            let e0 = rectangle_field(&g.dc_electrodes[0], r1).unwrap();
            let e1 = rectangle_field(&g.dc_electrodes[1], r1).unwrap();
            [e0[0] + e1[0], e0[1] + e1[1], e0[2] + e1[2]]
        };
        for a in 0..3 {
            assert!((sum01[a] - combined[a]).abs() < 1e-18);
        }
        // nearby ions see nearly the same field from a distant electrode
        for k in 0..fields.len() {
            let (ea, eb) = (fields[k][0], fields[k][1]);
            let na = (ea[0] * ea[0] + ea[1] * ea[1] + ea[2] * ea[2]).sqrt();
            let diff = ((ea[0] - eb[0]).powi(2) + (ea[1] - eb[1]).powi(2) + (ea[2] - eb[2]).powi(2))
                .sqrt();
            // separation 29 µm at electrode distance > 500 µm: well under
            // (Δx/h)·|E| here
            assert!(diff < 0.3 * na, "electrode {k}: diff {diff:.3e} vs norm {na:.3e}");
        }
    }

    #[test]
    fn electrode_under_one_well_pulls_harder_there() {
        let um = 1e-6;
        let dc = DcElectrode {
            x_min: 40.0 * um,
            x_max: 90.0 * um,
            z_min: -50.0 * um,
            z_max: 50.0 * um,
            id: "under-right".into(),
        };
        let left = rectangle_field(&dc, [-55e-6, 130e-6, 0.0]).unwrap();
        let right = rectangle_field(&dc, [55e-6, 130e-6, 0.0]).unwrap();
        let mag = |e: [f64; 3]| (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        assert!(mag(right) > mag(left));
    }
}
