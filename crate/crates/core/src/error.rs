//! Error types, one enum per subsystem.

use thiserror::Error;

/// Errors from angle, direction, and array-configuration validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// Polar angle must lie in `[0, pi/2]`.
    #[error("polar angle {0} outside [0, pi/2]")]
    InvalidPolar(f64),
    /// Azimuth angle must lie in `[0, 2*pi)`.
    #[error("azimuth angle {0} outside [0, 2*pi)")]
    InvalidAzimuth(f64),
    /// Direction coordinates must lie in `[-2, 2]` and be finite.
    #[error("direction coordinate {0} outside [-2, 2]")]
    InvalidDirection(f64),
    /// Channel gain must be finite and strictly positive.
    #[error("channel gain {0} is not strictly positive")]
    InvalidGain(f64),
    /// Element spacing ratio must satisfy `0 < ratio <= 1/4`.
    #[error("spacing ratio {0} outside (0, 1/4]")]
    InvalidSpacing(f64),
    /// Arrays need at least one element per axis.
    #[error("array must have at least one element per axis")]
    ZeroElements,
    /// Element indices must address a configured element.
    #[error("element index {index} outside 0..{count}")]
    IndexOutOfRange { index: usize, count: usize },
}

/// Errors from beam specification and synthesis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    /// Band endpoints must satisfy `start <= end`, and some constructions
    /// additionally need strictly positive width.
    #[error("band [{start}, {end}] has no usable width")]
    EmptyBand { start: f64, end: f64 },
    /// Bands must lie inside `[-2, 2]`.
    #[error("band [{start}, {end}] leaves [-2, 2]")]
    BandOutOfRange { start: f64, end: f64 },
    /// A steering point must lie inside `[-2, 2]`.
    #[error("steering direction {0} outside [-2, 2]")]
    DirectionOutOfRange(f64),
    /// Shape functions must be strictly positive on the open band.
    #[error("shape function is {value} at direction {beta}; must be strictly positive")]
    NonPositiveShape { beta: f64, value: f64 },
    /// Shape functions must return finite values on the band.
    #[error("shape function is not finite at direction {0}")]
    NonFiniteShape(f64),
    /// Arrays need at least one element.
    #[error("cannot discretize onto zero elements")]
    ZeroElements,
    /// Phase profiles need at least one entry.
    #[error("phase profile must not be empty")]
    EmptyProfile,
    /// Phase profile values must be finite.
    #[error("phase profile value at element {0} is not finite")]
    NonFiniteProfileValue(usize),
}

/// Errors from codebook construction and indexing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodebookError {
    /// Hierarchical codebooks require a power-of-two element count.
    #[error("element count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    /// Layer indices are 1-based and bounded by the layer count.
    #[error("layer {layer} outside 1..={layers}")]
    LayerOutOfRange { layer: usize, layers: usize },
    /// Codeword indices are 1-based and bounded by the layer width.
    #[error("codeword {index} outside 1..={count} in layer {layer}")]
    IndexOutOfRange {
        layer: usize,
        index: usize,
        count: usize,
    },
    /// Sub-beam counts must be positive and divide the element count.
    #[error("sub-beam count {subbeams} must be >= 1 and divide element count {elements}")]
    InvalidSubbeamCount { subbeams: usize, elements: usize },
    /// Underlying beam synthesis failed.
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// Errors from training simulation configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrainingError {
    /// SNR must not be NaN or negative infinity.
    #[error("SNR {0} dB is not a valid signal-to-noise ratio")]
    InvalidSnr(f64),
    /// Monte Carlo estimation needs at least one trial.
    #[error("trial count must be at least 1")]
    NoTrials,
    /// The idealized scheme only defines first-layer misalignment.
    #[error("the idealized scheme supports only first-layer misalignment")]
    IdealRequiresFirstLayer,
    /// Joint search probes both axes and needs a square array.
    #[error("joint search requires a square array")]
    JointSearchNeedsSquare,
    /// Profiles must match the array's per-axis element counts.
    #[error("profile of length {got} does not match the {expected}-element axis")]
    DimensionMismatch { expected: usize, got: usize },
    /// Early-stop layers must address an existing codebook layer.
    #[error("stop layer {layer} outside 1..={layers}")]
    StopLayerOutOfRange { layer: usize, layers: usize },
    /// Underlying codebook construction failed.
    #[error(transparent)]
    Codebook(#[from] CodebookError),
    /// Underlying geometry validation failed.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
