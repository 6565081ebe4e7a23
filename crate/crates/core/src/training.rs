//! Simulated beam training and misalignment-rate estimation.
//!
//! A receiver probes codewords, observes noisy powers, and descends a
//! hierarchical codebook. The noise model adds a complex Gaussian sample to
//! the received *amplitude* before power detection; its variance is
//! referenced to the total power collected by the aperture
//! (`sigma^2 = gain^2 * total_elements / linear_snr`), so beamforming gain
//! shows up as effective SNR improvement.
//!
//! Two search schemes are implemented: joint search descends both axes at
//! once probing the four child pairs per layer (square arrays only), and
//! dimension-wise search descends the horizontal axis under an
//! omnidirectional vertical codeword, then the vertical axis under the
//! selected narrow horizontal beam. A hybrid runs joint search down to a
//! switch layer and finishes dimension-wise.
//!
//! Monte Carlo misalignment runs draw directions uniformly per axis; each
//! trial owns a counter-based random stream derived from the master seed
//! and the trial index, so results do not depend on thread scheduling.
//! Probes use one unit-power pilot each with noise independent across
//! probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::afm::{afm_1d, PhaseProfile};
use crate::codebook::{omni_codeword, Codebook};
use crate::combining::bmw_ss_codebook;
use crate::error::TrainingError;
use crate::geometry::{ArrayConfig, Axis, ChannelRealization};
use crate::BETA_LIMIT;

/// Signal-to-noise ratio of the total aperture-collected power, in dB.
///
/// `+inf` denotes the noiseless limit; NaN and `-inf` are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSpec {
    snr_db: f64,
}

impl SnrSpec {
    pub fn from_db(snr_db: f64) -> Result<Self, TrainingError> {
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(TrainingError::InvalidSnr(snr_db));
        }
        Ok(Self { snr_db })
    }

    /// The noiseless limit.
    pub fn noiseless() -> Self {
        Self {
            snr_db: f64::INFINITY,
        }
    }

    pub fn db(&self) -> f64 {
        self.snr_db
    }

    pub fn linear(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.snr_db == f64::INFINITY
    }
}

/// One noisy received-power observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    power: f64,
}

impl Measurement {
    pub fn power(&self) -> f64 {
        self.power
    }
}

/// Noiseless received power for a probed profile pair: the squared product
/// of channel gain and planar AFM, with unit transmit power.
pub fn received_power(
    channel: &ChannelRealization,
    hor: &PhaseProfile,
    ver: &PhaseProfile,
    kd: f64,
) -> f64 {
    let afm = afm_1d(hor, kd, channel.direction().beta_hor())
        * afm_1d(ver, kd, channel.direction().beta_ver());
    (channel.gain() * afm).powi(2)
}

/// Add receiver noise to a noiseless power at unit channel gain: the
/// amplitude `sqrt(power)` is perturbed by `z ~ CN(0, n_total/linear_snr)`
/// and re-squared.
pub fn measure(power: f64, snr: SnrSpec, n_total: usize, rng: &mut impl Rng) -> Measurement {
    measure_scaled(power, snr, n_total, 1.0, rng)
}

/// Noise referenced to a channel gain: `sigma^2 = gain^2 * n_total / snr`.
/// `power` must already include the gain.
pub(crate) fn measure_scaled(
    power: f64,
    snr: SnrSpec,
    n_total: usize,
    gain: f64,
    rng: &mut impl Rng,
) -> Measurement {
    if snr.is_noiseless() || gain == 0.0 {
        return Measurement { power };
    }
    let sigma2 = gain * gain * n_total as f64 / snr.linear();
    let std = (0.5 * sigma2).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let amplitude = power.sqrt();
    let value = (amplitude + std * re).powi(2) + (std * im).powi(2);
    Measurement {
        power: value.max(0.0),
    }
}

/// One probe of the search: the active codeword indices (1-based; `ver` is
/// `None` when the vertical axis carries the omnidirectional codeword or
/// does not participate) and the measured power.
///
/// `layer` is the tree depth of the axis currently descending. An axis
/// that has already finished its own descent stays parked on its
/// bottom-layer beam, so its index remains in bottom-layer space while the
/// other axis's layer counts up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub layer: usize,
    pub hor: usize,
    pub ver: Option<usize>,
    pub power: f64,
}

/// The hypothesis retained after one layer's probing round. Index spaces
/// follow the same convention as [`ProbeRecord`]: an axis that already
/// completed its descent keeps its bottom-layer index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSelection {
    pub layer: usize,
    pub hor: usize,
    pub ver: Option<usize>,
}

/// Result of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingOutcome {
    /// Selected horizontal codeword at the deepest layer reached.
    pub selected_hor: usize,
    /// Selected vertical codeword, when the vertical axis was searched.
    pub selected_ver: Option<usize>,
    /// Deepest layer reached (equals the layer count unless stopped early).
    pub stopped_at_layer: usize,
    /// Total probes spent.
    pub measurements_used: usize,
    /// Whether the selection misses the true direction: range containment
    /// for early-stopped runs, nearest bottom steering otherwise.
    pub misaligned: bool,
    /// Retained hypothesis after each layer, in order.
    pub trajectory: Vec<LayerSelection>,
    /// Every probe, in order.
    pub probes: Vec<ProbeRecord>,
}

fn check_axis(config: &ArrayConfig, axis: Axis, cb: &Codebook) -> Result<(), TrainingError> {
    let expected = config.elements(axis);
    if cb.elements() != expected {
        return Err(TrainingError::DimensionMismatch {
            expected,
            got: cb.elements(),
        });
    }
    Ok(())
}

/// Shared state of one descent.
struct Search<'a> {
    config: &'a ArrayConfig,
    channel: &'a ChannelRealization,
    snr: SnrSpec,
    probes: Vec<ProbeRecord>,
    trajectory: Vec<LayerSelection>,
}

impl<'a> Search<'a> {
    fn new(config: &'a ArrayConfig, channel: &'a ChannelRealization, snr: SnrSpec) -> Self {
        Self {
            config,
            channel,
            snr,
            probes: Vec::new(),
            trajectory: Vec::new(),
        }
    }

    fn probe(
        &mut self,
        layer: usize,
        hor_index: usize,
        hor: &PhaseProfile,
        ver_index: Option<usize>,
        ver: &PhaseProfile,
        rng: &mut impl Rng,
    ) -> f64 {
        let power = received_power(self.channel, hor, ver, self.config.kd());
        let measured = measure_scaled(
            power,
            self.snr,
            self.config.total_elements(),
            self.channel.gain(),
            rng,
        )
        .power();
        self.probes.push(ProbeRecord {
            layer,
            hor: hor_index,
            ver: ver_index,
            power: measured,
        });
        measured
    }
}

/// Joint search: at each layer probe the four child pairs of the current
/// hypothesis and keep the strongest. Requires a square array; supports
/// early stop after `stop_layer` layers.
pub fn js_train(
    config: &ArrayConfig,
    cb: &Codebook,
    channel: &ChannelRealization,
    snr: SnrSpec,
    stop_layer: Option<usize>,
    rng: &mut impl Rng,
) -> Result<TrainingOutcome, TrainingError> {
    if !config.is_square() {
        return Err(TrainingError::JointSearchNeedsSquare);
    }
    check_axis(config, Axis::Horizontal, cb)?;
    let layers = cb.num_layers();
    let stop = stop_layer.unwrap_or(layers);
    if stop == 0 || stop > layers {
        return Err(TrainingError::StopLayerOutOfRange {
            layer: stop,
            layers,
        });
    }

    let mut search = Search::new(config, channel, snr);
    let (mut p, mut q) = (1usize, 1usize);
    for s in 1..=stop {
        let (ph, pl) = Codebook::child_indices(p);
        let (qh, ql) = Codebook::child_indices(q);
        let mut best = f64::NEG_INFINITY;
        let (mut best_p, mut best_q) = (ph, qh);
        for cand_p in [ph, pl] {
            for cand_q in [qh, ql] {
                let hor = cb.codeword(s, cand_p)?.profile();
                let ver = cb.codeword(s, cand_q)?.profile();
                let value = search.probe(s, cand_p, hor, Some(cand_q), ver, rng);
                if value > best {
                    best = value;
                    best_p = cand_p;
                    best_q = cand_q;
                }
            }
        }
        p = best_p;
        q = best_q;
        search.trajectory.push(LayerSelection {
            layer: s,
            hor: p,
            ver: Some(q),
        });
    }

    let dir = channel.direction();
    let misaligned = if stop == layers {
        p != cb.nearest_steering_index(dir.beta_hor())
            || q != cb.nearest_steering_index(dir.beta_ver())
    } else {
        p != cb.containing_index(stop, dir.beta_hor())?
            || q != cb.containing_index(stop, dir.beta_ver())?
    };
    Ok(TrainingOutcome {
        selected_hor: p,
        selected_ver: Some(q),
        stopped_at_layer: stop,
        measurements_used: search.probes.len(),
        misaligned,
        trajectory: search.trajectory,
        probes: search.probes,
    })
}

/// Dimension-wise search: descend the horizontal codebook with the
/// omnidirectional vertical codeword, then (when a vertical codebook is
/// given) descend vertically under the selected narrow horizontal beam.
/// Works on any rectangular layout.
pub fn dws_train(
    config: &ArrayConfig,
    cb_hor: &Codebook,
    cb_ver: Option<&Codebook>,
    channel: &ChannelRealization,
    snr: SnrSpec,
    rng: &mut impl Rng,
) -> Result<TrainingOutcome, TrainingError> {
    check_axis(config, Axis::Horizontal, cb_hor)?;
    if let Some(cbv) = cb_ver {
        check_axis(config, Axis::Vertical, cbv)?;
    }

    let mut search = Search::new(config, channel, snr);
    let ver_blank = omni_codeword(config.n_ver())
        .expect("vertical element count is validated positive")
        .profile()
        .clone();

    // Stage 1: horizontal descent under the omnidirectional vertical beam.
    let hor_layers = cb_hor.num_layers();
    let mut p = 1usize;
    for s in 1..=hor_layers {
        let (lo, hi) = Codebook::child_indices(p);
        let mut best = f64::NEG_INFINITY;
        let mut best_p = lo;
        for cand in [lo, hi] {
            let hor = cb_hor.codeword(s, cand)?.profile();
            let value = search.probe(s, cand, hor, None, &ver_blank, rng);
            if value > best {
                best = value;
                best_p = cand;
            }
        }
        p = best_p;
        search.trajectory.push(LayerSelection {
            layer: s,
            hor: p,
            ver: None,
        });
    }

    // Stage 2: vertical descent under the selected narrow horizontal beam.
    let hor_best = cb_hor.codeword(hor_layers, p)?.profile().clone();
    let mut q_selected = None;
    if let Some(cbv) = cb_ver {
        let ver_layers = cbv.num_layers();
        let mut q = 1usize;
        for s in 1..=ver_layers {
            let (lo, hi) = Codebook::child_indices(q);
            let mut best = f64::NEG_INFINITY;
            let mut best_q = lo;
            for cand in [lo, hi] {
                let ver = cbv.codeword(s, cand)?.profile();
                let value = search.probe(s, p, &hor_best, Some(cand), ver, rng);
                if value > best {
                    best = value;
                    best_q = cand;
                }
            }
            q = best_q;
            search.trajectory.push(LayerSelection {
                layer: s,
                hor: p,
                ver: Some(q),
            });
        }
        q_selected = Some(q);
    }

    let dir = channel.direction();
    let mut misaligned = p != cb_hor.nearest_steering_index(dir.beta_hor());
    if let (Some(q), Some(cbv)) = (q_selected, cb_ver) {
        misaligned |= q != cbv.nearest_steering_index(dir.beta_ver());
    }
    Ok(TrainingOutcome {
        selected_hor: p,
        selected_ver: q_selected,
        stopped_at_layer: hor_layers,
        measurements_used: search.probes.len(),
        misaligned,
        trajectory: search.trajectory,
        probes: search.probes,
    })
}

/// Hybrid search on a square array: joint search for the first
/// `switch_layer` layers, then dimension-wise completion (horizontal first
/// under the layer-`switch_layer` vertical selection, then vertical under
/// the bottom horizontal beam). `switch_layer = 0` is pure dimension-wise;
/// `switch_layer = S` is pure joint search.
pub fn hybrid_train(
    config: &ArrayConfig,
    cb: &Codebook,
    channel: &ChannelRealization,
    snr: SnrSpec,
    switch_layer: usize,
    rng: &mut impl Rng,
) -> Result<TrainingOutcome, TrainingError> {
    if !config.is_square() {
        return Err(TrainingError::JointSearchNeedsSquare);
    }
    check_axis(config, Axis::Horizontal, cb)?;
    let layers = cb.num_layers();
    if switch_layer > layers {
        return Err(TrainingError::StopLayerOutOfRange {
            layer: switch_layer,
            layers,
        });
    }

    let mut search = Search::new(config, channel, snr);
    let (mut p, mut q) = (1usize, 1usize);

    // Joint phase.
    for s in 1..=switch_layer {
        let (ph, pl) = Codebook::child_indices(p);
        let (qh, ql) = Codebook::child_indices(q);
        let mut best = f64::NEG_INFINITY;
        let (mut best_p, mut best_q) = (ph, qh);
        for cand_p in [ph, pl] {
            for cand_q in [qh, ql] {
                let hor = cb.codeword(s, cand_p)?.profile();
                let ver = cb.codeword(s, cand_q)?.profile();
                let value = search.probe(s, cand_p, hor, Some(cand_q), ver, rng);
                if value > best {
                    best = value;
                    best_p = cand_p;
                    best_q = cand_q;
                }
            }
        }
        p = best_p;
        q = best_q;
        search.trajectory.push(LayerSelection {
            layer: s,
            hor: p,
            ver: Some(q),
        });
    }

    // Dimension-wise completion: horizontal first.
    let ver_hold = if switch_layer == 0 {
        omni_codeword(config.n_ver())
            .expect("vertical element count is validated positive")
            .profile()
            .clone()
    } else {
        cb.codeword(switch_layer, q)?.profile().clone()
    };
    for s in (switch_layer + 1)..=layers {
        let (lo, hi) = Codebook::child_indices(p);
        let mut best = f64::NEG_INFINITY;
        let mut best_p = lo;
        for cand in [lo, hi] {
            let hor = cb.codeword(s, cand)?.profile();
            let value = search.probe(s, cand, hor, None, &ver_hold, rng);
            if value > best {
                best = value;
                best_p = cand;
            }
        }
        p = best_p;
        search.trajectory.push(LayerSelection {
            layer: s,
            hor: p,
            ver: None,
        });
    }

    // Then vertical under the bottom horizontal beam.
    let hor_best = cb.codeword(layers, p)?.profile().clone();
    for s in (switch_layer + 1)..=layers {
        let (lo, hi) = Codebook::child_indices(q);
        let mut best = f64::NEG_INFINITY;
        let mut best_q = lo;
        for cand in [lo, hi] {
            let ver = cb.codeword(s, cand)?.profile();
            let value = search.probe(s, p, &hor_best, Some(cand), ver, rng);
            if value > best {
                best = value;
                best_q = cand;
            }
        }
        q = best_q;
        search.trajectory.push(LayerSelection {
            layer: s,
            hor: p,
            ver: Some(q),
        });
    }

    let dir = channel.direction();
    let misaligned = p != cb.nearest_steering_index(dir.beta_hor())
        || q != cb.nearest_steering_index(dir.beta_ver());
    Ok(TrainingOutcome {
        selected_hor: p,
        selected_ver: Some(q),
        stopped_at_layer: layers,
        measurements_used: search.probes.len(),
        misaligned,
        trajectory: search.trajectory,
        probes: search.probes,
    })
}

/// Probes per joint-search run on an `S`-layer binary tree.
pub fn js_measurement_count(layers: usize) -> usize {
    4 * layers
}

/// Probes per dimension-wise run over the two axes' layer counts.
pub fn dws_measurement_count(hor_layers: usize, ver_layers: usize) -> usize {
    2 * hor_layers + 2 * ver_layers
}

/// Smallest `k` with `m^k >= n`.
fn log_ceil(n: usize, m: usize) -> usize {
    assert!(m >= 2, "tree arity must be at least 2");
    let mut k = 0;
    let mut reach = 1usize;
    while reach < n {
        reach = reach.saturating_mul(m);
        k += 1;
    }
    k
}

/// Joint-search probe count for an `m`-ary tree over `n` leaves-per-axis:
/// `m^2 * ceil(log_m n)`.
pub fn mary_js_measurement_count(m: usize, n: usize) -> usize {
    m * m * log_ceil(n, m)
}

/// Dimension-wise probe count for an `m`-ary tree: `2m * ceil(log_m n)`.
pub fn mary_dws_measurement_count(m: usize, n: usize) -> usize {
    2 * m * log_ceil(n, m)
}

/// Which search runs in a misalignment Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Probe only the first layer and check range containment.
    FirstLayer,
    /// Full joint-search descent; square arrays only.
    Js,
    /// Full dimension-wise descent.
    Dws,
}

/// Which codebook family supplies the probed beams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodebookKind {
    /// Flat wide beams over each range.
    Ncpd,
    /// Sub-array combination wide beams.
    BmwSs,
    /// Oracle indicator beams: full aperture power inside the range, zero
    /// outside. No realizable profile; first-layer mode only.
    Ideal,
}

/// A misalignment Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisalignmentSim {
    scheme: Scheme,
    kind: CodebookKind,
    snr: SnrSpec,
    trials: usize,
    config: ArrayConfig,
}

impl MisalignmentSim {
    pub fn new(
        scheme: Scheme,
        kind: CodebookKind,
        snr: SnrSpec,
        trials: usize,
        config: ArrayConfig,
    ) -> Result<Self, TrainingError> {
        if trials == 0 {
            return Err(TrainingError::NoTrials);
        }
        if kind == CodebookKind::Ideal && scheme != Scheme::FirstLayer {
            return Err(TrainingError::IdealRequiresFirstLayer);
        }
        if scheme == Scheme::Js && !config.is_square() {
            return Err(TrainingError::JointSearchNeedsSquare);
        }
        Ok(Self {
            scheme,
            kind,
            snr,
            trials,
            config,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn snr(&self) -> SnrSpec {
        self.snr
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn config(&self) -> &ArrayConfig {
        &self.config
    }
}

/// Per-trial random stream: the master seed keys the generator, the trial
/// index selects the stream, so trials are reproducible under any
/// parallel schedule.
fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

fn draw_direction(config: &ArrayConfig, rng: &mut impl Rng) -> (f64, f64) {
    let beta_hor = rng.random_range(-BETA_LIMIT..BETA_LIMIT);
    let beta_ver = if config.n_ver() > 1 {
        rng.random_range(-BETA_LIMIT..BETA_LIMIT)
    } else {
        0.0
    };
    (beta_hor, beta_ver)
}

/// Estimate the probability that training selects a codeword missing the
/// true direction. Trials run in parallel; the result depends only on the
/// master seed and the sim parameters.
pub fn misalignment_rate(sim: &MisalignmentSim, master_seed: u64) -> Result<f64, TrainingError> {
    let config = *sim.config();
    let n_hor = config.n_hor();
    let n_ver = config.n_ver();

    let cb_hor = match sim.kind() {
        CodebookKind::Ncpd => Some(Codebook::build(n_hor)?),
        CodebookKind::BmwSs => Some(bmw_ss_codebook(n_hor)?),
        CodebookKind::Ideal => None,
    };
    let cb_ver = if n_ver > 1 {
        match sim.kind() {
            CodebookKind::Ncpd => Some(Codebook::build(n_ver)?),
            CodebookKind::BmwSs => Some(bmw_ss_codebook(n_ver)?),
            CodebookKind::Ideal => None,
        }
    } else {
        None
    };
    let ver_blank = omni_codeword(n_ver)?.profile().clone();

    let misses: usize = (0..sim.trials() as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(master_seed, trial);
            let (beta_hor, beta_ver) = draw_direction(&config, &mut rng);
            let direction = crate::geometry::CascadedDirection::new(beta_hor, beta_ver)
                .expect("uniform draws stay in range");
            let channel = ChannelRealization::unit(direction);

            let misaligned = match sim.scheme() {
                Scheme::FirstLayer => first_layer_trial(
                    sim,
                    &config,
                    cb_hor.as_ref(),
                    &ver_blank,
                    &channel,
                    &mut rng,
                ),
                Scheme::Js => {
                    js_train(
                        &config,
                        cb_hor.as_ref().expect("non-ideal kinds build codebooks"),
                        &channel,
                        sim.snr(),
                        None,
                        &mut rng,
                    )
                    .expect("validated configuration")
                    .misaligned
                }
                Scheme::Dws => {
                    dws_train(
                        &config,
                        cb_hor.as_ref().expect("non-ideal kinds build codebooks"),
                        cb_ver.as_ref(),
                        &channel,
                        sim.snr(),
                        &mut rng,
                    )
                    .expect("validated configuration")
                    .misaligned
                }
            };
            usize::from(misaligned)
        })
        .sum();

    Ok(misses as f64 / sim.trials() as f64)
}

/// One first-layer trial: probe the two layer-1 beams on the horizontal
/// axis (vertical blanked by the omnidirectional codeword) and check that
/// the winner's range contains the true direction.
fn first_layer_trial(
    sim: &MisalignmentSim,
    config: &ArrayConfig,
    cb_hor: Option<&Codebook>,
    ver_blank: &PhaseProfile,
    channel: &ChannelRealization,
    rng: &mut impl Rng,
) -> bool {
    let beta = channel.direction().beta_hor();
    let kd = config.kd();
    let total = config.total_elements();
    let gain = channel.gain();

    let mut best = f64::NEG_INFINITY;
    let mut selected = 1usize;
    for i in 1..=2usize {
        let power = match sim.kind() {
            CodebookKind::Ideal => {
                // Oracle indicator: the full aperture power lands in-range.
                let (a, b) = layer1_band(i);
                let inside = a <= beta && (beta < b || (i == 2 && beta == BETA_LIMIT));
                if inside {
                    2.0 * total as f64 * gain * gain
                } else {
                    0.0
                }
            }
            _ => {
                let cb = cb_hor.expect("non-ideal kinds build codebooks");
                let hor = cb
                    .codeword(1, i)
                    .expect("layer 1 has two codewords")
                    .profile();
                received_power(channel, hor, ver_blank, kd)
            }
        };
        let value = measure_scaled(power, sim.snr(), total, gain, rng).power();
        if value > best {
            best = value;
            selected = i;
        }
    }

    let (a, b) = layer1_band(selected);
    let contains = a <= beta && (beta < b || (selected == 2 && beta == BETA_LIMIT));
    !contains
}

fn layer1_band(i: usize) -> (f64, f64) {
    if i == 1 {
        (-BETA_LIMIT, 0.0)
    } else {
        (0.0, BETA_LIMIT)
    }
}
