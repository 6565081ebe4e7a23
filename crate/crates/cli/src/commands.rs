//! Implementations of the four subcommands. Each returns the rendered
//! output text; the caller decides where it goes.

use anyhow::{anyhow, Context};
use irsbeam::training::{
    dws_train, hybrid_train, js_train, misalignment_rate, MisalignmentSim, Scheme, SnrSpec,
    TrainingOutcome,
};
use irsbeam::{
    afm_1d_norm, beta_grid, bmw_ss_codebook, m_combination, narrow_profile, ncpd_flat,
    omni_codeword, synthesize, ArrayConfig, BeamSpec, CascadedDirection, ChannelRealization,
    Codebook, CodebookError, CodebookKind, CombinationSpec, GeometryError, PhaseProfile, Stitching,
    SynthesisError, TrainingError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr;
use crate::formats::{
    parse_range, parse_sizes, to_json_text, write_csv, CodebookDoc, PatternConfig, PatternDoc,
    PatternSample, TrainConfig, TrainDoc,
};
use crate::{
    CodebookKindArg, Failure, FormatArg, PatternArgs, SweepArgs, SweepMode, TrainArgs, TrainScheme,
};

/// Errors from bad parameters exit with the usage code; errors from the
/// numerical evaluation of a user-supplied shape exit with the numerical
/// code.
fn synthesis_failure(err: SynthesisError) -> Failure {
    match err {
        SynthesisError::NonPositiveShape { .. }
        | SynthesisError::NonFiniteShape(_)
        | SynthesisError::NonFiniteProfileValue(_) => Failure::numerical(err),
        _ => Failure::usage(err),
    }
}

fn codebook_failure(err: CodebookError) -> Failure {
    match err {
        CodebookError::Synthesis(inner) => synthesis_failure(inner),
        _ => Failure::usage(err),
    }
}

fn training_failure(err: TrainingError) -> Failure {
    match err {
        TrainingError::Codebook(inner) => codebook_failure(inner),
        _ => Failure::usage(err),
    }
}

fn geometry_failure(err: GeometryError) -> Failure {
    Failure::usage(err)
}

fn parse_band(text: &str) -> Result<[f64; 2], Failure> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Failure::usage(anyhow!("band must be given as start,end")))?;
    let parse = |s: &str| -> Result<f64, Failure> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::usage(anyhow!("bad band endpoint {s:?}")))
    };
    Ok([parse(a)?, parse(b)?])
}

fn stitching_name(stitching: Stitching) -> &'static str {
    match stitching {
        Stitching::Independent => "independent",
        Stitching::Continuous => "continuous",
    }
}

pub fn cmd_pattern(args: &PatternArgs) -> Result<String, Failure> {
    if args.grid < 2 {
        return Err(Failure::usage(anyhow!("grid needs at least 2 points")));
    }
    // Validates the element count and spacing ratio and supplies kd.
    let array = ArrayConfig::ula(args.n, args.spacing).map_err(geometry_failure)?;
    let kd = array.kd();

    let (method_name, inline_shape) = match args.method.split_once(':') {
        Some((name, expr)) => (name, Some(expr.to_owned())),
        None => (args.method.as_str(), None),
    };

    let band = args.band.as_deref().map(parse_band).transpose()?;
    let need_band = |what: &str| -> Result<[f64; 2], Failure> {
        band.ok_or_else(|| Failure::usage(anyhow!("method {what} needs --band start,end")))
    };

    let stitching = args.stitching.to_core();
    let mut config = PatternConfig {
        method: method_name.to_owned(),
        band: None,
        psi: None,
        shape: None,
        stitching: None,
        n: args.n,
        grid: args.grid,
        spacing: args.spacing,
    };

    let profile: PhaseProfile = match method_name {
        "ncpd" => {
            let [a, b] = need_band("ncpd")?;
            config.band = Some([a, b]);
            ncpd_flat(a, b, args.n).map_err(synthesis_failure)?
        }
        "comb4" | "comb16" => {
            let subbeams = if method_name == "comb4" { 4 } else { 16 };
            let [a, b] = need_band(method_name)?;
            config.band = Some([a, b]);
            config.stitching = Some(stitching_name(stitching).to_owned());
            let spec = CombinationSpec::new(a, b, subbeams, args.n)
                .map_err(codebook_failure)?
                .with_stitching(stitching);
            m_combination(&spec)
        }
        "narrow" => {
            let psi = args
                .psi
                .ok_or_else(|| Failure::usage(anyhow!("method narrow needs --psi")))?;
            config.psi = Some(psi);
            narrow_profile(psi, args.n).map_err(synthesis_failure)?
        }
        "omni" => omni_codeword(args.n)
            .map_err(codebook_failure)?
            .profile()
            .clone(),
        "shaped" => {
            let text = inline_shape.or_else(|| args.shape.clone()).ok_or_else(|| {
                Failure::usage(anyhow!("method shaped needs --shape or shaped:<expr>"))
            })?;
            let [a, b] = need_band("shaped")?;
            config.band = Some([a, b]);
            config.shape = Some(text.clone());
            let parsed = expr::parse(&text)
                .map_err(|e| Failure::usage(anyhow!("bad shape expression: {e}")))?;
            let spec =
                BeamSpec::shaped(a, b, move |beta| parsed.eval(beta)).map_err(synthesis_failure)?;
            synthesize(&spec, args.n).map_err(synthesis_failure)?
        }
        other => {
            return Err(Failure::usage(anyhow!(
                "unknown method {other:?} (expected ncpd, comb4, comb16, narrow, omni, or shaped)"
            )))
        }
    };

    let samples: Vec<PatternSample> = beta_grid(args.grid)
        .into_iter()
        .map(|beta| PatternSample {
            beta,
            afm_norm: afm_1d_norm(&profile, kd, beta),
        })
        .collect();

    match args.format {
        FormatArg::Csv => {
            let rows: Vec<Vec<f64>> = samples.iter().map(|s| vec![s.beta, s.afm_norm]).collect();
            Ok(write_csv(&config.metadata(), "beta,afm_norm", &rows))
        }
        FormatArg::Json => {
            let doc = PatternDoc { config, samples };
            to_json_text(&doc).map_err(Failure::numerical)
        }
    }
}

fn build_codebook(kind: CodebookKindArg, n: usize) -> Result<Codebook, Failure> {
    match kind {
        CodebookKindArg::Ncpd => Codebook::build(n).map_err(codebook_failure),
        CodebookKindArg::Bmwss => bmw_ss_codebook(n).map_err(codebook_failure),
    }
}

pub fn cmd_codebook(n: usize, kind: CodebookKindArg) -> Result<String, Failure> {
    let cb = build_codebook(kind, n)?;
    let doc = CodebookDoc::from_codebook(&cb, kind.name());
    to_json_text(&doc).map_err(Failure::numerical)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String, Failure> {
    let snr_values = parse_range(&args.snr).map_err(Failure::usage)?;

    let rate_row = |n: usize, snr_db: f64| -> Result<[f64; 3], Failure> {
        let snr = SnrSpec::from_db(snr_db).map_err(training_failure)?;
        let array = ArrayConfig::ula(n, args.spacing).map_err(geometry_failure)?;
        let mut rates = [0.0f64; 3];
        for (slot, kind) in [CodebookKind::Ncpd, CodebookKind::BmwSs, CodebookKind::Ideal]
            .into_iter()
            .enumerate()
        {
            let sim = MisalignmentSim::new(Scheme::FirstLayer, kind, snr, args.trials, array)
                .map_err(training_failure)?;
            rates[slot] = misalignment_rate(&sim, args.seed).map_err(training_failure)?;
        }
        Ok(rates)
    };

    let mut metadata = vec![
        ("mode".to_owned(), args.mode.name().to_owned()),
        ("scheme".to_owned(), "first-layer".to_owned()),
        ("trials".to_owned(), format!("{}", args.trials)),
        ("seed".to_owned(), format!("{}", args.seed)),
        ("spacing".to_owned(), format!("{}", args.spacing)),
    ];

    match args.mode {
        SweepMode::Snr => {
            let n = args
                .n
                .ok_or_else(|| Failure::usage(anyhow!("snr sweeps need --n")))?;
            metadata.push(("n".to_owned(), format!("{n}")));
            let mut rows = Vec::with_capacity(snr_values.len());
            for &snr_db in &snr_values {
                let [ncpd, bmw, ideal] = rate_row(n, snr_db)?;
                rows.push(vec![snr_db, ncpd, bmw, ideal]);
            }
            Ok(write_csv(
                &metadata,
                "snr_db,ncpd_rate,bmwss_rate,ideal_rate",
                &rows,
            ))
        }
        SweepMode::Size => {
            let sizes_text = args
                .sizes
                .as_deref()
                .ok_or_else(|| Failure::usage(anyhow!("size sweeps need --sizes")))?;
            let sizes = parse_sizes(sizes_text).map_err(Failure::usage)?;
            if snr_values.len() != 1 {
                return Err(Failure::usage(anyhow!(
                    "size sweeps need a single --snr value"
                )));
            }
            let snr_db = snr_values[0];
            metadata.push(("snr_db".to_owned(), format!("{snr_db}")));
            let mut rows = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let [ncpd, bmw, ideal] = rate_row(n, snr_db)?;
                rows.push(vec![n as f64, ncpd, bmw, ideal]);
            }
            Ok(write_csv(
                &metadata,
                "n,ncpd_rate,bmwss_rate,ideal_rate",
                &rows,
            ))
        }
    }
}

pub fn cmd_train(args: &TrainArgs) -> Result<String, Failure> {
    let n_ver = args.n_ver.unwrap_or(match args.scheme {
        TrainScheme::Js | TrainScheme::Hybrid => args.n,
        TrainScheme::Dws => 1,
    });
    let array = ArrayConfig::new(args.n, n_ver, args.spacing).map_err(geometry_failure)?;
    let direction =
        CascadedDirection::new(args.beta_hor, args.beta_ver).map_err(geometry_failure)?;
    let channel = ChannelRealization::new(direction, args.gain).map_err(geometry_failure)?;
    let snr = SnrSpec::from_db(args.snr_db).map_err(training_failure)?;

    match args.scheme {
        TrainScheme::Js | TrainScheme::Hybrid => {
            if args.scheme == TrainScheme::Js && args.switch_layer.is_some() {
                return Err(Failure::usage(anyhow!(
                    "--switch-layer only applies to the hybrid scheme"
                )));
            }
            if args.scheme == TrainScheme::Hybrid && args.stop_layer.is_some() {
                return Err(Failure::usage(anyhow!(
                    "--stop-layer only applies to the js scheme"
                )));
            }
        }
        TrainScheme::Dws => {
            if args.stop_layer.is_some() || args.switch_layer.is_some() {
                return Err(Failure::usage(anyhow!(
                    "--stop-layer and --switch-layer do not apply to the dws scheme"
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let outcome: TrainingOutcome = match args.scheme {
        TrainScheme::Js => {
            let cb = build_codebook(args.kind, args.n)?;
            js_train(&array, &cb, &channel, snr, args.stop_layer, &mut rng)
                .map_err(training_failure)?
        }
        TrainScheme::Hybrid => {
            let switch = args
                .switch_layer
                .ok_or_else(|| Failure::usage(anyhow!("the hybrid scheme needs --switch-layer")))?;
            let cb = build_codebook(args.kind, args.n)?;
            hybrid_train(&array, &cb, &channel, snr, switch, &mut rng).map_err(training_failure)?
        }
        TrainScheme::Dws => {
            let cb_hor = build_codebook(args.kind, args.n)?;
            let cb_ver = if n_ver > 1 {
                Some(build_codebook(args.kind, n_ver)?)
            } else {
                None
            };
            dws_train(&array, &cb_hor, cb_ver.as_ref(), &channel, snr, &mut rng)
                .map_err(training_failure)?
        }
    };

    let doc = TrainDoc {
        config: TrainConfig {
            scheme: args.scheme.name().to_owned(),
            kind: args.kind.name().to_owned(),
            n_hor: args.n,
            n_ver,
            spacing: args.spacing,
            beta_hor: args.beta_hor,
            beta_ver: args.beta_ver,
            gain: args.gain,
            snr_db: if snr.is_noiseless() {
                None
            } else {
                Some(args.snr_db)
            },
            seed: args.seed,
            stop_layer: args.stop_layer,
            switch_layer: args.switch_layer,
        },
        outcome,
    };
    to_json_text(&doc).map_err(Failure::numerical)
}

/// Attach IO context to a write failure.
pub fn write_output(path: Option<&std::path::Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
