//! Cascaded-channel geometry: physical angles, direction coordinates,
//! steering phases, and aliasing partners.
//!
//! A reflecting surface sees two rays, the incident one and the reflected
//! one. Each contributes `sin(polar) * cos(azimuth)` horizontally and
//! `sin(polar) * sin(azimuth)` vertically, and only the *sums* of those
//! contributions enter the array response. Each sum lies in `[-2, 2]`, and
//! everything downstream works with the summed coordinates directly.
//!
//! Element indices are 0-based throughout, with element 0 as the phase
//! reference.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::BETA_LIMIT;

/// Default element spacing as a fraction of the wavelength.
pub const DEFAULT_SPACING_RATIO: f64 = 0.25;

/// One of the two array axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Reflecting-array layout: element counts per axis and element spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    n_hor: usize,
    n_ver: usize,
    spacing_ratio: f64,
}

impl ArrayConfig {
    /// General rectangular layout. Both counts must be at least 1 and the
    /// spacing ratio must satisfy `0 < ratio <= 1/4`; above a quarter
    /// wavelength the direction range no longer maps one-to-one onto the
    /// array response (see [`aliasing_partners_at`]).
    pub fn new(n_hor: usize, n_ver: usize, spacing_ratio: f64) -> Result<Self, GeometryError> {
        if n_hor == 0 || n_ver == 0 {
            return Err(GeometryError::ZeroElements);
        }
        if !(spacing_ratio > 0.0 && spacing_ratio <= 0.25) {
            return Err(GeometryError::InvalidSpacing(spacing_ratio));
        }
        Ok(Self {
            n_hor,
            n_ver,
            spacing_ratio,
        })
    }

    /// Uniform linear array: `n` elements horizontally, one vertically.
    pub fn ula(n: usize, spacing_ratio: f64) -> Result<Self, GeometryError> {
        Self::new(n, 1, spacing_ratio)
    }

    /// Square planar array with `n` elements along each axis.
    pub fn square(n: usize, spacing_ratio: f64) -> Result<Self, GeometryError> {
        Self::new(n, n, spacing_ratio)
    }

    pub fn n_hor(&self) -> usize {
        self.n_hor
    }

    pub fn n_ver(&self) -> usize {
        self.n_ver
    }

    /// Elements along one axis.
    pub fn elements(&self, axis: Axis) -> usize {
        match axis {
            Axis::Horizontal => self.n_hor,
            Axis::Vertical => self.n_ver,
        }
    }

    pub fn is_square(&self) -> bool {
        self.n_hor == self.n_ver
    }

    /// Total element count across both axes.
    pub fn total_elements(&self) -> usize {
        self.n_hor * self.n_ver
    }

    /// Element spacing as a fraction of the wavelength.
    pub fn spacing_ratio(&self) -> f64 {
        self.spacing_ratio
    }

    /// Phase advance per unit direction per element: `2*pi * spacing_ratio`.
    pub fn kd(&self) -> f64 {
        std::f64::consts::TAU * self.spacing_ratio
    }
}

/// The two validated rays meeting at the surface: polar angles in
/// `[0, pi/2]` (measured from the normal), azimuths in `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalAngles {
    theta_r: f64,
    phi_r: f64,
    theta_i: f64,
    phi_i: f64,
}

impl PhysicalAngles {
    pub fn new(theta_r: f64, phi_r: f64, theta_i: f64, phi_i: f64) -> Result<Self, GeometryError> {
        for theta in [theta_r, theta_i] {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
                return Err(GeometryError::InvalidPolar(theta));
            }
        }
        for phi in [phi_r, phi_i] {
            if !(0.0..std::f64::consts::TAU).contains(&phi) {
                return Err(GeometryError::InvalidAzimuth(phi));
            }
        }
        Ok(Self {
            theta_r,
            phi_r,
            theta_i,
            phi_i,
        })
    }

    pub fn theta_r(&self) -> f64 {
        self.theta_r
    }

    pub fn phi_r(&self) -> f64 {
        self.phi_r
    }

    pub fn theta_i(&self) -> f64 {
        self.theta_i
    }

    pub fn phi_i(&self) -> f64 {
        self.phi_i
    }
}

/// Cascaded direction coordinates: the per-axis sums of the incidence and
/// reflection contributions. Each coordinate lies in `[-2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadedDirection {
    beta_hor: f64,
    beta_ver: f64,
}

impl CascadedDirection {
    /// Direct construction from already-cascaded coordinates.
    pub fn new(beta_hor: f64, beta_ver: f64) -> Result<Self, GeometryError> {
        for beta in [beta_hor, beta_ver] {
            if !beta.is_finite() || beta.abs() > BETA_LIMIT {
                return Err(GeometryError::InvalidDirection(beta));
            }
        }
        Ok(Self { beta_hor, beta_ver })
    }

    pub fn beta_hor(&self) -> f64 {
        self.beta_hor
    }

    pub fn beta_ver(&self) -> f64 {
        self.beta_ver
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Horizontal => self.beta_hor,
            Axis::Vertical => self.beta_ver,
        }
    }
}

/// Collapse a pair of physical rays into cascaded direction coordinates:
/// `beta_hor = sin(th_r)cos(ph_r) + sin(th_i)cos(ph_i)` and the sine analog
/// vertically.
pub fn cascaded_angles(angles: &PhysicalAngles) -> CascadedDirection {
    let (sr, si) = (angles.theta_r().sin(), angles.theta_i().sin());
    // Each term has magnitude <= 1, so the sums stay in [-2, 2].
    CascadedDirection {
        beta_hor: sr * angles.phi_r().cos() + si * angles.phi_i().cos(),
        beta_ver: sr * angles.phi_r().sin() + si * angles.phi_i().sin(),
    }
}

/// A cascaded channel: direction coordinates plus a nonnegative amplitude
/// gain (the product of the two per-hop path gains).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    direction: CascadedDirection,
    gain: f64,
}

impl ChannelRealization {
    pub fn new(direction: CascadedDirection, gain: f64) -> Result<Self, GeometryError> {
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(GeometryError::InvalidGain(gain));
        }
        Ok(Self { direction, gain })
    }

    /// Unit-gain channel.
    pub fn unit(direction: CascadedDirection) -> Self {
        Self {
            direction,
            gain: 1.0,
        }
    }

    pub fn direction(&self) -> &CascadedDirection {
        &self.direction
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}

/// Phase seen at element `index` along `axis` for direction component
/// `beta`: `kd * beta * index`. The index must address an element of the
/// configured axis.
pub fn steering_phase(
    config: &ArrayConfig,
    beta: f64,
    axis: Axis,
    index: usize,
) -> Result<f64, GeometryError> {
    let count = config.elements(axis);
    if index >= count {
        return Err(GeometryError::IndexOutOfRange { index, count });
    }
    Ok(config.kd() * beta * index as f64)
}

/// Unit-modulus cascaded channel vector along one axis: entry `m` is
/// `exp(j * kd * beta * m)`, `m = 0..n-1`, so entry 0 is 1.
pub fn virtual_channel_1d(
    config: &ArrayConfig,
    beta: f64,
    axis: Axis,
) -> Result<Vec<Complex64>, GeometryError> {
    if !beta.is_finite() || beta.abs() > BETA_LIMIT {
        return Err(GeometryError::InvalidDirection(beta));
    }
    let kd = config.kd();
    Ok((0..config.elements(axis))
        .map(|m| Complex64::from_polar(1.0, kd * beta * m as f64))
        .collect())
}

/// Directions indistinguishable from `beta` at phase advance `kd`:
/// `beta - (2*pi/kd) * m` for nonzero integers `m`, kept if inside `[-2, 2]`.
///
/// For `kd <= pi/2` the period is at least 4, so only the interval endpoints
/// have partners; denser arrays (larger `kd`) fold distinct directions onto
/// each other.
pub fn aliasing_partners_at(kd: f64, beta: f64) -> Vec<f64> {
    let period = std::f64::consts::TAU / kd;
    let mut partners = Vec::new();
    // Walk both directions until the shifted value leaves [-2, 2].
    let mut shift = 1i64;
    loop {
        let candidate = beta - period * shift as f64;
        if candidate < -BETA_LIMIT {
            break;
        }
        partners.push(candidate);
        shift += 1;
    }
    let mut shift = -1i64;
    loop {
        let candidate = beta - period * shift as f64;
        if candidate > BETA_LIMIT {
            break;
        }
        partners.push(candidate);
        shift -= 1;
    }
    partners.sort_by(|a, b| a.partial_cmp(b).expect("finite partners"));
    partners
}

/// Aliasing partners for a configured array.
pub fn aliasing_partners(config: &ArrayConfig, beta: f64) -> Vec<f64> {
    aliasing_partners_at(config.kd(), beta)
}
