//! Array factor magnitude (AFM) of phase profiles.
//!
//! A phase profile assigns each element `m` a value `g(m)` in direction
//! units; the element applies the physical phase `kd * g(m)`. The AFM at
//! direction `beta` is the magnitude of the summed element responses,
//!
//! ```text
//! AFM(beta) = | sum_m exp(j * kd * (beta * m + g(m))) |
//! ```
//!
//! which peaks at the element count and never exceeds it. A planar profile
//! pair factors per axis: the double sum over the grid equals the product
//! of the two per-axis sums, so [`afm_2d`] evaluates the product form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SynthesisError;
use crate::geometry::CascadedDirection;
use crate::BETA_LIMIT;

/// Per-element phase values in direction units.
///
/// Profiles are physically equivalent up to a constant shift, so the
/// constructor canonicalizes by pinning the first value to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseProfile {
    values: Vec<f64>,
}

impl PhaseProfile {
    /// Canonicalize per-element values; fails on an empty slice or
    /// non-finite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self, SynthesisError> {
        let first = *values.first().ok_or(SynthesisError::EmptyProfile)?;
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(SynthesisError::NonFiniteProfileValue(bad));
        }
        for v in &mut values {
            if first != 0.0 {
                *v -= first;
            }
            // Adding +0.0 turns -0.0 into +0.0 and changes nothing else,
            // keeping serialized profiles free of signed-zero noise.
            *v += 0.0;
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl TryFrom<Vec<f64>> for PhaseProfile {
    type Error = SynthesisError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

impl From<PhaseProfile> for Vec<f64> {
    fn from(profile: PhaseProfile) -> Self {
        profile.values
    }
}

/// One point of an evaluated pattern: direction and normalized AFM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfmSample {
    pub beta: f64,
    pub value: f64,
}

/// Summed element response along one axis.
fn response_1d(profile: &PhaseProfile, kd: f64, beta: f64) -> Complex64 {
    profile
        .values()
        .iter()
        .enumerate()
        .map(|(m, g)| Complex64::from_polar(1.0, kd * (beta * m as f64 + g)))
        .sum()
}

/// One-dimensional AFM at direction `beta`; ranges over `[0, n]`.
pub fn afm_1d(profile: &PhaseProfile, kd: f64, beta: f64) -> f64 {
    response_1d(profile, kd, beta).norm()
}

/// One-dimensional AFM normalized by the element count, so the peak is 1.
pub fn afm_1d_norm(profile: &PhaseProfile, kd: f64, beta: f64) -> f64 {
    afm_1d(profile, kd, beta) / profile.len() as f64
}

/// Planar AFM at a cascaded direction: the product of the per-axis AFMs,
/// which equals the full double sum over the element grid.
pub fn afm_2d(
    hor: &PhaseProfile,
    ver: &PhaseProfile,
    kd: f64,
    direction: &CascadedDirection,
) -> f64 {
    afm_1d(hor, kd, direction.beta_hor()) * afm_1d(ver, kd, direction.beta_ver())
}

/// Planar AFM normalized by the total element count.
pub fn afm_2d_norm(
    hor: &PhaseProfile,
    ver: &PhaseProfile,
    kd: f64,
    direction: &CascadedDirection,
) -> f64 {
    afm_2d(hor, ver, kd, direction) / (hor.len() * ver.len()) as f64
}

/// Evenly spaced direction grid over `[-2, 2]` with exact endpoints.
///
/// Nodes are `4*i/(points-1) - 2`, so halving `points - 1` reuses
/// bit-identical nodes. Needs at least two points.
pub fn beta_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "a grid needs at least two points");
    let denom = (points - 1) as f64;
    (0..points)
        .map(|i| (2.0 * BETA_LIMIT * i as f64) / denom - BETA_LIMIT)
        .collect()
}

/// Normalized AFM sampled over the full direction range, ascending in
/// `beta`. Needs at least two grid points.
pub fn afm_grid(profile: &PhaseProfile, kd: f64, points: usize) -> Vec<AfmSample> {
    beta_grid(points)
        .into_iter()
        .map(|beta| AfmSample {
            beta,
            value: afm_1d_norm(profile, kd, beta),
        })
        .collect()
}
