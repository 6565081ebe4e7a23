//! Binary hierarchical codebooks over the direction range.
//!
//! Layer `s` (1-based) splits `[-2, 2]` into `2^s` equal sub-bands; each
//! codeword covers one of them. Wide layers use flat wide beams; the bottom
//! layer, where sub-bands have width `2/n`, uses narrow beams steered at the
//! sub-band centers. The layer count is `log2(2n)`, so the tree needs a
//! power-of-two element count. Codeword `i` of a layer has children
//! `(2i - 1, 2i)` one layer down.

use serde::{Deserialize, Serialize};

use crate::afm::PhaseProfile;
use crate::error::CodebookError;
use crate::synthesis::{narrow_profile, ncpd_flat};
use crate::BETA_LIMIT;

/// One codebook entry: its position in the tree, the direction band it
/// covers, the steering direction for narrow entries, and its phase profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codeword {
    layer: usize,
    index: usize,
    band_start: f64,
    band_end: f64,
    steering: Option<f64>,
    profile: PhaseProfile,
}

impl Codeword {
    pub(crate) fn new(
        layer: usize,
        index: usize,
        band_start: f64,
        band_end: f64,
        steering: Option<f64>,
        profile: PhaseProfile,
    ) -> Self {
        Self {
            layer,
            index,
            band_start,
            band_end,
            steering,
            profile,
        }
    }

    /// 1-based layer, or 0 for the whole-range codeword.
    pub fn layer(&self) -> usize {
        self.layer
    }

    /// 1-based index within the layer.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn band_start(&self) -> f64 {
        self.band_start
    }

    pub fn band_end(&self) -> f64 {
        self.band_end
    }

    pub fn band(&self) -> (f64, f64) {
        (self.band_start, self.band_end)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.band_start + self.band_end)
    }

    /// Steering direction; narrow codewords only.
    pub fn steering(&self) -> Option<f64> {
        self.steering
    }

    pub fn profile(&self) -> &PhaseProfile {
        &self.profile
    }

    /// Half-open band membership `[start, end)`.
    pub fn contains(&self, beta: f64) -> bool {
        self.band_start <= beta && beta < self.band_end
    }
}

/// A full hierarchical codebook for an `n`-element axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    elements: usize,
    layers: Vec<Vec<Codeword>>,
}

impl Codebook {
    /// Build the standard codebook: flat wide beams above narrow bottom
    /// beams. `n` must be a power of two.
    pub fn build(n: usize) -> Result<Self, CodebookError> {
        Self::build_with(n, |a, b, _| Ok(ncpd_flat(a, b, n)?))
    }

    /// Build a codebook with a custom wide-beam constructor. The closure
    /// receives the band and the number of layers between this one and the
    /// bottom; the bottom layer is always narrow beams at sub-band centers.
    pub(crate) fn build_with<F>(n: usize, mut wide: F) -> Result<Self, CodebookError>
    where
        F: FnMut(f64, f64, usize) -> Result<PhaseProfile, CodebookError>,
    {
        if !n.is_power_of_two() {
            return Err(CodebookError::NotPowerOfTwo(n));
        }
        let num_layers = n.trailing_zeros() as usize + 1;
        let mut layers = Vec::with_capacity(num_layers);
        for s in 1..=num_layers {
            let count = 1usize << s;
            let width = 2.0 * BETA_LIMIT / count as f64;
            let mut layer = Vec::with_capacity(count);
            for i in 1..=count {
                let a = -BETA_LIMIT + width * (i - 1) as f64;
                let b = -BETA_LIMIT + width * i as f64;
                let codeword = if s == num_layers {
                    let steer = 0.5 * (a + b);
                    Codeword::new(s, i, a, b, Some(steer), narrow_profile(steer, n)?)
                } else {
                    Codeword::new(s, i, a, b, None, wide(a, b, num_layers - s)?)
                };
                layer.push(codeword);
            }
            layers.push(layer);
        }
        Ok(Self {
            elements: n,
            layers,
        })
    }

    /// Elements per axis the codebook was built for.
    pub fn elements(&self) -> usize {
        self.elements
    }

    /// Number of layers, `log2(2n)`.
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Codewords of a 1-based layer.
    pub fn layer(&self, s: usize) -> Result<&[Codeword], CodebookError> {
        if s == 0 || s > self.layers.len() {
            return Err(CodebookError::LayerOutOfRange {
                layer: s,
                layers: self.layers.len(),
            });
        }
        Ok(&self.layers[s - 1])
    }

    /// The narrow-beam layer.
    pub fn bottom_layer(&self) -> &[Codeword] {
        self.layers
            .last()
            .expect("codebooks have at least one layer")
    }

    /// Codeword `i` (1-based) of layer `s` (1-based).
    pub fn codeword(&self, s: usize, i: usize) -> Result<&Codeword, CodebookError> {
        let layer = self.layer(s)?;
        if i == 0 || i > layer.len() {
            return Err(CodebookError::IndexOutOfRange {
                layer: s,
                index: i,
                count: layer.len(),
            });
        }
        Ok(&layer[i - 1])
    }

    /// 1-based index of the layer-`s` codeword whose half-open band contains
    /// `beta`; the range endpoints clamp into the outermost codewords.
    pub fn containing_index(&self, s: usize, beta: f64) -> Result<usize, CodebookError> {
        let layer = self.layer(s)?;
        let count = layer.len();
        let width = 2.0 * BETA_LIMIT / count as f64;
        let raw = ((beta + BETA_LIMIT) / width).floor() as isize;
        Ok(raw.clamp(0, count as isize - 1) as usize + 1)
    }

    /// 1-based index of the bottom-layer codeword whose steering direction
    /// is nearest to `beta`; exact midpoints resolve to the lower index.
    pub fn nearest_steering_index(&self, beta: f64) -> usize {
        let count = self.bottom_layer().len();
        let width = 2.0 * BETA_LIMIT / count as f64;
        // Steering value i sits at x = i - 1/2 on the scaled axis
        // x = (beta + 2)/width, so the nearest index is ceil(x), which
        // resolves exact midpoints (integer x) downward.
        let raw = ((beta + BETA_LIMIT) / width).ceil() as isize;
        raw.clamp(1, count as isize) as usize
    }

    /// Children of 1-based codeword `i`, one layer down.
    pub fn child_indices(i: usize) -> (usize, usize) {
        (2 * i - 1, 2 * i)
    }

    /// Parent of 1-based codeword `i`, one layer up.
    pub fn parent_index(i: usize) -> usize {
        i.div_ceil(2)
    }
}

/// The whole-range flat beam covering all of `[-2, 2]`; reported as layer 0.
pub fn omni_codeword(n: usize) -> Result<Codeword, CodebookError> {
    let profile = ncpd_flat(-BETA_LIMIT, BETA_LIMIT, n)?;
    Ok(Codeword::new(0, 1, -BETA_LIMIT, BETA_LIMIT, None, profile))
}
