//! Sub-array combination baselines.
//!
//! An alternative way to cover a wide band with `n` elements: split the
//! array into `m` equal sub-arrays and steer each at the center of one of
//! `m` equal sub-bands. The band is covered by the union of `m` narrow
//! sub-beams instead of one continuously swept beam.
//!
//! Two stitching conventions fix the phase offset between consecutive
//! sub-arrays: [`Stitching::Independent`] starts every sub-array's ramp at
//! zero, [`Stitching::Continuous`] carries the accumulated phase across the
//! block boundary so the profile has no jumps. They produce visibly
//! different interference between the sub-beams; independent stitching is
//! the default because it preserves the per-sub-beam structure (deep
//! depressions between adjacent sub-beams) that makes these baselines
//! behave as distinct beams, which is the regime the comparisons below are
//! about.

use serde::{Deserialize, Serialize};

use crate::afm::PhaseProfile;
use crate::codebook::Codebook;
use crate::error::{CodebookError, SynthesisError};
use crate::synthesis::validate_band;

/// Phase handoff between consecutive sub-arrays.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stitching {
    /// Each sub-array's phase ramp starts at zero.
    #[default]
    Independent,
    /// Each sub-array continues the previous one's accumulated phase.
    Continuous,
}

/// A validated sub-array combination request: band, sub-beam count, element
/// count, stitching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinationSpec {
    band_start: f64,
    band_end: f64,
    subbeams: usize,
    elements: usize,
    stitching: Stitching,
}

impl CombinationSpec {
    /// The sub-beam count must be positive and divide the element count; the
    /// band must have positive width unless there is a single sub-beam.
    pub fn new(
        band_start: f64,
        band_end: f64,
        subbeams: usize,
        elements: usize,
    ) -> Result<Self, CodebookError> {
        validate_band(band_start, band_end)?;
        if subbeams == 0 || elements == 0 || !elements.is_multiple_of(subbeams) {
            return Err(CodebookError::InvalidSubbeamCount { subbeams, elements });
        }
        if band_start == band_end && subbeams > 1 {
            return Err(SynthesisError::EmptyBand {
                start: band_start,
                end: band_end,
            }
            .into());
        }
        Ok(Self {
            band_start,
            band_end,
            subbeams,
            elements,
            stitching: Stitching::default(),
        })
    }

    pub fn with_stitching(mut self, stitching: Stitching) -> Self {
        self.stitching = stitching;
        self
    }

    pub fn band(&self) -> (f64, f64) {
        (self.band_start, self.band_end)
    }

    pub fn subbeams(&self) -> usize {
        self.subbeams
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn stitching(&self) -> Stitching {
        self.stitching
    }

    /// Steering direction of sub-beam `t` (0-based): the center of the
    /// `t`-th of `subbeams` equal sub-bands.
    pub fn subbeam_center(&self, t: usize) -> f64 {
        let width = (self.band_end - self.band_start) / self.subbeams as f64;
        self.band_start + (t as f64 + 0.5) * width
    }
}

/// Build the combined profile: each block of `n/m` elements ramps at its
/// sub-beam center's slope.
pub fn m_combination(spec: &CombinationSpec) -> PhaseProfile {
    let block = spec.elements() / spec.subbeams();
    let mut values = Vec::with_capacity(spec.elements());
    let mut lead = 0.0;
    for t in 0..spec.subbeams() {
        let center = spec.subbeam_center(t);
        for l in 0..block {
            values.push(lead - center * l as f64);
        }
        if spec.stitching() == Stitching::Continuous {
            lead -= center * block as f64;
        }
    }
    PhaseProfile::new(values).expect("spec validation guarantees a non-empty finite profile")
}

/// Sub-beam count used by the binary-division baseline at a layer
/// `levels_above_bottom` steps above the narrow layer: `2^ceil(l/2)`.
pub fn bmw_subbeam_count(levels_above_bottom: usize) -> usize {
    1usize << levels_above_bottom.div_ceil(2)
}

/// Hierarchical codebook of the binary-division baseline: same tree and
/// bands as [`Codebook::build`], but wide codewords are sub-array
/// combinations whose sub-beam count grows toward the top of the tree. The
/// bottom layer is identical to the standard one.
pub fn bmw_ss_codebook(n: usize) -> Result<Codebook, CodebookError> {
    Codebook::build_with(n, |a, b, levels| {
        let spec = CombinationSpec::new(a, b, bmw_subbeam_count(levels), n)?;
        Ok(m_combination(&spec))
    })
}
