//! Browser bindings: JSON-in/JSON-out wrappers around the pattern,
//! codebook, and training APIs for the static demo page in `www/`.
//!
//! Every entry point returns a JSON string; failures come back as
//! `{"error": "..."}` so the page can show them without exceptions
//! crossing the boundary. All randomness is explicitly seeded, which keeps
//! the demo deterministic and avoids any platform entropy dependency. The
//! demo fixes the element spacing at a quarter wavelength, matching the
//! library default.

use irsbeam::{
    afm_grid, bmw_ss_codebook, m_combination, narrow_profile, ncpd_flat, omni_codeword,
    ArrayConfig, CascadedDirection, ChannelRealization, Codebook, CombinationSpec, PhaseProfile,
    SnrSpec, TrainingOutcome, DEFAULT_SPACING_RATIO,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

const KD: f64 = std::f64::consts::FRAC_PI_2;

fn err_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

fn betas(grid: usize) -> Vec<f64> {
    irsbeam::beta_grid(grid)
}

fn values_of(profile: &PhaseProfile, grid: usize) -> Vec<f64> {
    afm_grid(profile, KD, grid)
        .into_iter()
        .map(|s| s.value)
        .collect()
}

#[derive(Serialize)]
struct Series {
    betas: Vec<f64>,
    values: Vec<f64>,
}

/// Normalized beam pattern over the direction range.
///
/// `method` is one of `ncpd`, `comb4`, `comb16` (all over `[band_start,
/// band_end]`), `narrow` (steered at `psi`), or `omni`; `n` is the element
/// count and `grid` the sample count across the full range.
#[wasm_bindgen]
pub fn pattern_json(
    method: &str,
    band_start: f64,
    band_end: f64,
    psi: f64,
    n: u32,
    grid: u32,
) -> String {
    match pattern_impl(method, band_start, band_end, psi, n as usize, grid as usize) {
        Ok(text) => text,
        Err(message) => err_json(&message),
    }
}

fn pattern_impl(
    method: &str,
    band_start: f64,
    band_end: f64,
    psi: f64,
    n: usize,
    grid: usize,
) -> Result<String, String> {
    if grid < 2 {
        return Err("grid needs at least two points".to_owned());
    }
    let profile = match method {
        "ncpd" => ncpd_flat(band_start, band_end, n).map_err(|e| e.to_string())?,
        "comb4" | "comb16" => {
            let subbeams = if method == "comb4" { 4 } else { 16 };
            let spec = CombinationSpec::new(band_start, band_end, subbeams, n)
                .map_err(|e| e.to_string())?;
            m_combination(&spec)
        }
        "narrow" => narrow_profile(psi, n).map_err(|e| e.to_string())?,
        "omni" => omni_codeword(n)
            .map_err(|e| e.to_string())?
            .profile()
            .clone(),
        other => return Err(format!("unknown method {other:?}")),
    };
    let doc = Series {
        betas: betas(grid),
        values: values_of(&profile, grid),
    };
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LayerBeams {
    layer: usize,
    layers_total: usize,
    betas: Vec<f64>,
    beams: Vec<BeamDump>,
}

#[derive(Serialize)]
struct BeamDump {
    index: usize,
    band: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    steering: Option<f64>,
    values: Vec<f64>,
}

/// One layer of a hierarchical codebook with each codeword's pattern.
///
/// `kind` is `ncpd` or `bmwss`; `layer` counts from 1 (two beams) down to
/// the bottom layer of pencil beams.
#[wasm_bindgen]
pub fn codebook_layer_json(n: u32, kind: &str, layer: u32, grid: u32) -> String {
    match codebook_layer_impl(n as usize, kind, layer as usize, grid as usize) {
        Ok(text) => text,
        Err(message) => err_json(&message),
    }
}

fn build_codebook(n: usize, kind: &str) -> Result<Codebook, String> {
    match kind {
        "ncpd" => Codebook::build(n).map_err(|e| e.to_string()),
        "bmwss" => bmw_ss_codebook(n).map_err(|e| e.to_string()),
        other => Err(format!("unknown codebook kind {other:?}")),
    }
}

fn codebook_layer_impl(n: usize, kind: &str, layer: usize, grid: usize) -> Result<String, String> {
    if grid < 2 {
        return Err("grid needs at least two points".to_owned());
    }
    let cb = build_codebook(n, kind)?;
    let codewords = cb.layer(layer).map_err(|e| e.to_string())?;
    let doc = LayerBeams {
        layer,
        layers_total: cb.num_layers(),
        betas: betas(grid),
        beams: codewords
            .iter()
            .map(|cw| BeamDump {
                index: cw.index(),
                band: [cw.band_start(), cw.band_end()],
                steering: cw.steering(),
                values: values_of(cw.profile(), grid),
            })
            .collect(),
    };
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TraceStep {
    layer: usize,
    /// Absent while the horizontal axis is parked on its bottom-layer beam
    /// (the vertical completion passes), since the recorded horizontal
    /// index is then not in this layer's space.
    #[serde(skip_serializing_if = "Option::is_none")]
    hor_band: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ver_band: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct TraceDump {
    scheme: String,
    n: usize,
    beta_hor: f64,
    beta_ver: f64,
    noiseless: bool,
    misaligned: bool,
    measurements_used: usize,
    steps: Vec<TraceStep>,
    probes: Vec<irsbeam::ProbeRecord>,
    betas: Vec<f64>,
    selected_hor_band: [f64; 2],
    selected_hor_values: Vec<f64>,
}

/// One seeded training descent.
///
/// `scheme` is `js` or `hybrid` (square array, `n` per axis) or `dws`
/// (single horizontal line of `n` elements). Pass a non-finite `snr_db`
/// for noiseless probes; `switch_layer` only applies to `hybrid`.
// Flat scalar parameters are the JS-facing API; a config object would
// force JsValue plumbing on the caller for no gain at one call site.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn train_trace_json(
    scheme: &str,
    n: u32,
    beta_hor: f64,
    beta_ver: f64,
    snr_db: f64,
    switch_layer: u32,
    seed: u32,
    grid: u32,
) -> String {
    match train_trace_impl(
        scheme,
        n as usize,
        beta_hor,
        beta_ver,
        snr_db,
        switch_layer as usize,
        u64::from(seed),
        grid as usize,
    ) {
        Ok(text) => text,
        Err(message) => err_json(&message),
    }
}

fn band_of(cb: &Codebook, layer: usize, index: usize) -> Result<[f64; 2], String> {
    let codewords = cb.layer(layer).map_err(|e| e.to_string())?;
    let cw = codewords
        .get(index.checked_sub(1).ok_or("layer indices count from 1")?)
        .ok_or_else(|| format!("index {index} out of range in layer {layer}"))?;
    Ok([cw.band_start(), cw.band_end()])
}

#[allow(clippy::too_many_arguments)]
fn train_trace_impl(
    scheme: &str,
    n: usize,
    beta_hor: f64,
    beta_ver: f64,
    snr_db: f64,
    switch_layer: usize,
    seed: u64,
    grid: usize,
) -> Result<String, String> {
    if grid < 2 {
        return Err("grid needs at least two points".to_owned());
    }
    let snr = if snr_db.is_finite() {
        SnrSpec::from_db(snr_db).map_err(|e| e.to_string())?
    } else {
        SnrSpec::noiseless()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cb = Codebook::build(n).map_err(|e| e.to_string())?;

    let (config, beta_ver) = match scheme {
        "js" | "hybrid" => (
            ArrayConfig::square(n, DEFAULT_SPACING_RATIO).map_err(|e| e.to_string())?,
            beta_ver,
        ),
        "dws" => (
            ArrayConfig::ula(n, DEFAULT_SPACING_RATIO).map_err(|e| e.to_string())?,
            0.0,
        ),
        other => return Err(format!("unknown scheme {other:?}")),
    };
    let direction = CascadedDirection::new(beta_hor, beta_ver).map_err(|e| e.to_string())?;
    let channel = ChannelRealization::new(direction, 1.0).map_err(|e| e.to_string())?;

    let outcome: TrainingOutcome = match scheme {
        "js" => irsbeam::js_train(&config, &cb, &channel, snr, None, &mut rng)
            .map_err(|e| e.to_string())?,
        "dws" => irsbeam::dws_train(&config, &cb, None, &channel, snr, &mut rng)
            .map_err(|e| e.to_string())?,
        "hybrid" => irsbeam::hybrid_train(&config, &cb, &channel, snr, switch_layer, &mut rng)
            .map_err(|e| e.to_string())?,
        _ => unreachable!("scheme validated above"),
    };

    let steps = outcome
        .trajectory
        .iter()
        .map(|sel| {
            // In the hybrid scheme's vertical completion (and only there,
            // among the demo schemes) the horizontal index is a held
            // bottom-layer index rather than a layer-local one.
            let hor_descending = match scheme {
                "hybrid" => sel.ver.is_none() || sel.layer <= switch_layer,
                _ => true,
            };
            Ok(TraceStep {
                layer: sel.layer,
                hor_band: if hor_descending {
                    Some(band_of(&cb, sel.layer, sel.hor)?)
                } else {
                    None
                },
                ver_band: match sel.ver {
                    Some(ver) => Some(band_of(&cb, sel.layer, ver)?),
                    None => None,
                },
            })
        })
        .collect::<Result<Vec<_>, String>>()?;

    let bottom = cb.num_layers();
    let selected_hor_band = band_of(&cb, bottom, outcome.selected_hor)?;
    let selected = cb.layer(bottom).map_err(|e| e.to_string())?[outcome.selected_hor - 1]
        .profile()
        .clone();

    let doc = TraceDump {
        scheme: scheme.to_owned(),
        n,
        beta_hor,
        beta_ver,
        noiseless: snr.is_noiseless(),
        misaligned: outcome.misaligned,
        measurements_used: outcome.measurements_used,
        steps,
        probes: outcome.probes,
        betas: betas(grid),
        selected_hor_band,
        selected_hor_values: values_of(&selected, grid),
    };
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(text: &str) -> Value {
        serde_json::from_str(text).expect("output is valid JSON")
    }

    #[test]
    fn pattern_series_covers_the_grid() {
        let doc = parse(&pattern_json("ncpd", 0.0, 1.0, 0.0, 64, 201));
        assert_eq!(doc["betas"].as_array().unwrap().len(), 201);
        assert_eq!(doc["values"].as_array().unwrap().len(), 201);
        assert!(doc["error"].is_null());
    }

    #[test]
    fn narrow_pattern_peaks_at_its_steering_direction() {
        let doc = parse(&pattern_json("narrow", 0.0, 0.0, 0.5, 32, 401));
        let betas: Vec<f64> = doc["betas"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        let values: Vec<f64> = doc["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        let at = betas.iter().position(|b| (b - 0.5).abs() < 1e-12).unwrap();
        assert!((values[at] - 1.0).abs() < 1e-12);
        assert!(values.iter().all(|v| *v <= 1.0 + 1e-12));
    }

    #[test]
    fn bad_inputs_come_back_as_error_objects() {
        assert!(parse(&pattern_json("mystery", 0.0, 1.0, 0.0, 8, 101))["error"].is_string());
        assert!(parse(&pattern_json("ncpd", 0.0, 1.0, 0.0, 8, 1))["error"].is_string());
        assert!(parse(&codebook_layer_json(16, "nope", 1, 101))["error"].is_string());
        assert!(parse(&codebook_layer_json(16, "ncpd", 9, 101))["error"].is_string());
        assert!(
            parse(&train_trace_json("nope", 16, 0.3, 0.0, 10.0, 0, 1, 101))["error"].is_string()
        );
    }

    #[test]
    fn codebook_layer_lists_every_beam_with_its_band() {
        let doc = parse(&codebook_layer_json(16, "ncpd", 3, 101));
        assert_eq!(doc["layer"], 3);
        assert_eq!(doc["layers_total"], 5);
        let beams = doc["beams"].as_array().unwrap();
        assert_eq!(beams.len(), 8);
        assert_eq!(beams[0]["band"][0], -2.0);
        assert_eq!(beams[7]["band"][1], 2.0);
        // Bottom layer exposes steering directions.
        let bottom = parse(&codebook_layer_json(16, "ncpd", 5, 101));
        assert!(bottom["beams"][0]["steering"].is_number());
    }

    #[test]
    fn noiseless_joint_descent_reports_aligned_steps() {
        let doc = parse(&train_trace_json(
            "js",
            16,
            0.3,
            -0.9,
            f64::INFINITY,
            0,
            7,
            201,
        ));
        assert_eq!(doc["misaligned"], false);
        assert_eq!(doc["noiseless"], true);
        assert_eq!(doc["steps"].as_array().unwrap().len(), 5);
        assert_eq!(doc["measurements_used"], 20);
        let band = &doc["steps"][4]["hor_band"];
        assert!(band[0].as_f64().unwrap() <= 0.3 && 0.3 < band[1].as_f64().unwrap());
    }

    #[test]
    fn line_array_descent_has_no_vertical_bands() {
        let doc = parse(&train_trace_json("dws", 64, 0.3, 0.0, 10.0, 0, 5, 201));
        assert!(doc["steps"][0]["ver_band"].is_null());
        assert_eq!(doc["measurements_used"], 14);
    }

    #[test]
    fn identical_seeds_reproduce_identical_traces() {
        let a = train_trace_json("hybrid", 16, 0.3, -0.9, 10.0, 2, 11, 201);
        let b = train_trace_json("hybrid", 16, 0.3, -0.9, 10.0, 2, 11, 201);
        assert_eq!(a, b);
        let c = train_trace_json("hybrid", 16, 0.3, -0.9, 10.0, 2, 12, 201);
        assert_ne!(a, c);
    }
}
