//! Beam pattern toolkit for intelligent reflecting surfaces.
//!
//! An IRS reflects an incident wave toward a receiver; the composite effect
//! of both hops collapses into a pair of *cascaded direction* coordinates,
//! each confined to `[-2, 2]`. Everything in this crate works in that
//! coordinate system:
//!
//! - [`geometry`]: physical angles, cascaded directions, steering phases,
//!   and grating-lobe (aliasing) partners.
//! - [`afm`]: array factor magnitude of a phase profile, in one and two
//!   dimensions, plus evaluation grids.
//! - [`synthesis`]: wide and shaped beam synthesis via a continuous
//!   steering law that is then discretized onto the array elements.
//! - [`codebook`]: binary hierarchical codebooks whose layers bisect the
//!   direction range down to narrow beams.
//! - [`combining`]: sub-array combination baselines that stitch several
//!   narrow beams into one wide codeword.
//! - [`training`]: joint and dimension-wise beam training under noise, and
//!   Monte Carlo misalignment-rate estimation.

pub mod afm;
pub mod codebook;
pub mod combining;
pub mod error;
pub mod geometry;
pub mod synthesis;
pub mod training;

pub use afm::{
    afm_1d, afm_1d_norm, afm_2d, afm_2d_norm, afm_grid, beta_grid, AfmSample, PhaseProfile,
};
pub use codebook::{omni_codeword, Codebook, Codeword};
pub use combining::{
    bmw_ss_codebook, bmw_subbeam_count, m_combination, CombinationSpec, Stitching,
};
pub use error::{CodebookError, GeometryError, SynthesisError, TrainingError};
pub use geometry::{
    aliasing_partners, aliasing_partners_at, cascaded_angles, steering_phase, virtual_channel_1d,
    ArrayConfig, Axis, CascadedDirection, ChannelRealization, PhysicalAngles,
    DEFAULT_SPACING_RATIO,
};
pub use synthesis::{
    discretize, narrow_profile, ncpd_flat, synthesize, BeamShape, BeamSpec, SteeringLaw,
};
pub use training::{
    dws_measurement_count, dws_train, hybrid_train, js_measurement_count, js_train,
    mary_dws_measurement_count, mary_js_measurement_count, measure, misalignment_rate,
    received_power, CodebookKind, LayerSelection, Measurement, MisalignmentSim, ProbeRecord,
    Scheme, SnrSpec, TrainingOutcome,
};

/// Direction coordinates live in `[-BETA_LIMIT, BETA_LIMIT]`.
pub const BETA_LIMIT: f64 = 2.0;
