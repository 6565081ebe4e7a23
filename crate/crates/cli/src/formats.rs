//! Output documents and their round-trippable encodings.
//!
//! CSV carries 1-D series: `# key = value` metadata comment lines, one
//! header row, then data rows. JSON carries trees and traces with an
//! embedded config block. Floats are written in shortest round-trip form
//! (Rust's default float formatting and serde_json's encoder both
//! guarantee exact re-parsing), so identical runs produce byte-identical
//! files.

use anyhow::{bail, Context, Result};
use irsbeam::training::TrainingOutcome;
use irsbeam::Codebook;
use serde::{Deserialize, Serialize};

/// Render metadata, a header, and float rows as CSV text.
pub fn write_csv(metadata: &[(String, String)], header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (key, value) in metadata {
        out.push_str(&format!("# {key} = {value}\n"));
    }
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// A CSV document read back into memory.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDoc {
    pub metadata: Vec<(String, String)>,
    pub header: String,
    pub rows: Vec<Vec<f64>>,
}

/// Parse CSV text produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<CsvDoc> {
    let mut metadata = Vec::new();
    let mut header = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let (key, value) = comment
                .split_once('=')
                .with_context(|| format!("line {}: metadata without '='", lineno + 1))?;
            metadata.push((key.trim().to_owned(), value.trim().to_owned()));
            continue;
        }
        if header.is_none() {
            header = Some(line.to_owned());
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field
                    .parse::<f64>()
                    .with_context(|| format!("line {}: bad number {field:?}", lineno + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let header = header.context("missing header row")?;
    Ok(CsvDoc {
        metadata,
        header,
        rows,
    })
}

/// Serialize any document as pretty JSON with a trailing newline.
pub fn to_json_text<T: Serialize>(doc: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    Ok(text)
}

/// Pattern dump: full generation config plus the sampled series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternDoc {
    pub config: PatternConfig,
    pub samples: Vec<PatternSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stitching: Option<String>,
    pub n: usize,
    pub grid: usize,
    pub spacing: f64,
}

impl PatternConfig {
    /// The same config as CSV metadata pairs, in serialization order.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut pairs = vec![("method".to_owned(), self.method.clone())];
        if let Some([a, b]) = self.band {
            pairs.push(("band".to_owned(), format!("{a},{b}")));
        }
        if let Some(psi) = self.psi {
            pairs.push(("psi".to_owned(), format!("{psi}")));
        }
        if let Some(shape) = &self.shape {
            pairs.push(("shape".to_owned(), shape.clone()));
        }
        if let Some(stitching) = &self.stitching {
            pairs.push(("stitching".to_owned(), stitching.clone()));
        }
        pairs.push(("n".to_owned(), format!("{}", self.n)));
        pairs.push(("grid".to_owned(), format!("{}", self.grid)));
        pairs.push(("spacing".to_owned(), format!("{}", self.spacing)));
        pairs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternSample {
    pub beta: f64,
    pub afm_norm: f64,
}

/// Codebook dump: enough config to rebuild the tree, plus every codeword.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookDoc {
    pub config: CodebookConfig,
    pub layers: Vec<Vec<CodewordDump>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookConfig {
    pub n: usize,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordDump {
    pub index: usize,
    pub band: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steering: Option<f64>,
    pub profile: Vec<f64>,
}

impl CodebookDoc {
    pub fn from_codebook(cb: &Codebook, kind: &str) -> Self {
        let layers = (1..=cb.num_layers())
            .map(|s| {
                cb.layer(s)
                    .expect("layer index in range")
                    .iter()
                    .map(|cw| CodewordDump {
                        index: cw.index(),
                        band: [cw.band_start(), cw.band_end()],
                        steering: cw.steering(),
                        profile: cw.profile().values().to_vec(),
                    })
                    .collect()
            })
            .collect();
        Self {
            config: CodebookConfig {
                n: cb.elements(),
                kind: kind.to_owned(),
            },
            layers,
        }
    }
}

/// Training trace: run config plus the full outcome (probes, trajectory,
/// selection).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainDoc {
    pub config: TrainConfig,
    pub outcome: TrainingOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub scheme: String,
    pub kind: String,
    pub n_hor: usize,
    pub n_ver: usize,
    pub spacing: f64,
    pub beta_hor: f64,
    pub beta_ver: f64,
    pub gain: f64,
    /// `None` encodes the noiseless limit (JSON has no infinity literal).
    pub snr_db: Option<f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_layer: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub switch_layer: Option<usize>,
}

/// Inclusive numeric range `start:stop:step`, or a single value.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![single
            .trim()
            .parse::<f64>()
            .with_context(|| format!("bad number {single:?}"))?]),
        [start, stop, step] => {
            let start: f64 = start.trim().parse().context("bad range start")?;
            let stop: f64 = stop.trim().parse().context("bad range stop")?;
            let step: f64 = step.trim().parse().context("bad range step")?;
            if step <= 0.0 || !step.is_finite() {
                bail!("range step must be positive and finite");
            }
            if stop < start {
                bail!("range stop is below start");
            }
            let count = ((stop - start) / step).round() as usize;
            let mut values: Vec<f64> = (0..=count)
                .map(|i| start + step * i as f64)
                .filter(|v| *v <= stop + 1e-9 * step)
                .collect();
            if let Some(last) = values.last_mut() {
                // Snap the endpoint when the step divides the range.
                if (*last - stop).abs() <= 1e-9 * step {
                    *last = stop;
                }
            }
            Ok(values)
        }
        _ => bail!("expected a single value or start:stop:step, got {text:?}"),
    }
}

/// Comma-separated list of positive integers.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("bad size {part:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_metadata_and_rows() {
        let metadata = vec![
            ("seed".to_owned(), "7".to_owned()),
            ("trials".to_owned(), "100".to_owned()),
        ];
        let rows = vec![vec![0.0, 0.12345678901234567], vec![-10.0, 1.0 / 3.0]];
        let text = write_csv(&metadata, "snr_db,rate", &rows);
        let doc = parse_csv(&text).unwrap();
        assert_eq!(doc.metadata, metadata);
        assert_eq!(doc.header, "snr_db,rate");
        assert_eq!(doc.rows, rows);
    }

    #[test]
    fn csv_floats_are_shortest_round_trip() {
        let rows = vec![vec![0.1 + 0.2]];
        let text = write_csv(&[], "x", &rows);
        assert!(text.contains("0.30000000000000004"));
        assert_eq!(parse_csv(&text).unwrap().rows[0][0], 0.1 + 0.2);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(parse_csv("# broken metadata\nh\n1").is_err());
        assert!(parse_csv("h\nnot_a_number").is_err());
        assert!(parse_csv("").is_err());
    }

    #[test]
    fn ranges_expand_inclusively() {
        assert_eq!(parse_range("10").unwrap(), vec![10.0]);
        assert_eq!(
            parse_range("-10:40:5").unwrap(),
            vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]
        );
        assert_eq!(parse_range("0:30:10").unwrap(), vec![0.0, 10.0, 20.0, 30.0]);
        assert!(parse_range("0:10:0").is_err());
        assert!(parse_range("10:0:5").is_err());
        assert!(parse_range("1:2:3:4").is_err());
    }

    #[test]
    fn size_lists_parse() {
        assert_eq!(parse_sizes("64,128,256").unwrap(), vec![64, 128, 256]);
        assert!(parse_sizes("64,abc").is_err());
    }
}
