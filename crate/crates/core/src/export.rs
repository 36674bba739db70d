//! Text renderings of pipeline outputs and atomic file writes.
//!
//! Derived outputs (curves, fronts, ladders, evaluation tables) print floats
//! with 6 significant digits for golden-file stability. Corpus exports are
//! lossless instead — see [`crate::ingest::Corpus::to_csv`] — so a corpus
//! round-trips field-for-field.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::MeanLadder;
use crate::interp::ResolutionCurve;
use crate::ladder::Ladder;
use crate::numfmt::{sig6, sig6_round};
use crate::pareto::{CompositionHistogram, ParetoFront};
use crate::pipeline::{LadderEvaluation, PipelineOptions};

/// Write `bytes` via a temp file in the destination directory plus rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(io_err)?;
    use std::io::Write;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Replace path-hostile characters in a sequence id for use in filenames.
pub fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// `sequence_id,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j,is_knot`
pub fn curves_csv(curves: &[ResolutionCurve]) -> String {
    let mut out = String::from(
        "sequence_id,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j,is_knot\n",
    );
    for curve in curves {
        for s in &curve.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                curve.sequence_id,
                s.resolution_height,
                sig6(s.crf),
                sig6(s.bitrate_kbps),
                sig6(s.vmaf),
                sig6(s.decode_energy_j),
                s.is_knot
            ));
        }
    }
    out
}

/// `sequence_id,domain,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j`
pub fn front_csv(front: &ParetoFront) -> String {
    let mut out = String::from(
        "sequence_id,domain,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j\n",
    );
    for p in &front.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            front.sequence_id,
            front.domain,
            p.resolution_height,
            sig6(p.crf),
            sig6(p.bitrate_kbps),
            sig6(p.vmaf),
            sig6(p.decode_energy_j)
        ));
    }
    out
}

/// `sequence_id,domain,resolution_height,count,share`
pub fn composition_csv(rows: &[(String, &CompositionHistogram)]) -> String {
    let mut out = String::from("sequence_id,domain,resolution_height,count,share\n");
    for (seq, hist) in rows {
        for (&res, &count) in &hist.counts {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                seq,
                hist.domain,
                res,
                count,
                sig6(hist.share[&res])
            ));
        }
    }
    out
}

/// Ladder JSON with floats rounded to 6 significant digits.
pub fn ladder_json(ladder: &Ladder) -> String {
    let mut rounded = ladder.clone();
    for rung in &mut rounded.rungs {
        rung.target = sig6_round(rung.target);
        if let Some(p) = &mut rung.point {
            p.crf = sig6_round(p.crf);
            p.bitrate_kbps = sig6_round(p.bitrate_kbps);
            p.vmaf = sig6_round(p.vmaf);
            p.decode_energy_j = sig6_round(p.decode_energy_j);
        }
    }
    let mut text = serde_json::to_string_pretty(&rounded).expect("ladder serializes");
    text.push('\n');
    text
}

pub fn parse_ladder_json(text: &str) -> Result<Ladder> {
    serde_json::from_str(text).map_err(|e| Error::Json {
        context: "ladder".into(),
        detail: e.to_string(),
    })
}

/// Flattened rung list mirroring the ladder JSON files:
/// `sequence_id,method,source_domain,rung_index,target,status,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j`
pub fn ladders_csv(ladders: &[&Ladder]) -> String {
    let mut out = String::from(
        "sequence_id,method,source_domain,rung_index,target,status,\
         resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j\n",
    );
    for ladder in ladders {
        for rung in &ladder.rungs {
            let point_cols = match &rung.point {
                Some(p) => format!(
                    "{},{},{},{},{}",
                    p.resolution_height,
                    sig6(p.crf),
                    sig6(p.bitrate_kbps),
                    sig6(p.vmaf),
                    sig6(p.decode_energy_j)
                ),
                None => ",,,,".to_string(),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                ladder.sequence_id,
                ladder.method,
                ladder.source_domain,
                rung.index,
                sig6(rung.target),
                match rung.status {
                    crate::ladder::RungStatus::Filled => "filled",
                    crate::ladder::RungStatus::Skipped => "skipped",
                },
                point_cols
            ));
        }
    }
    out
}

/// Aggregate delta table, one row per EQ ladder variant:
/// `ladder,delta_rate_mean,delta_rate_std,delta_q_mean,delta_q_std,delta_e_mean,delta_e_std`
pub fn eval_table_csv(eval: &LadderEvaluation) -> String {
    let mut out = String::from(
        "ladder,delta_rate_mean,delta_rate_std,delta_q_mean,delta_q_std,delta_e_mean,delta_e_std\n",
    );
    for (name, stats) in [
        ("rate_driven_eq_pf", &eval.rate_driven),
        ("quality_driven_eq_pf", &eval.quality_driven),
    ] {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            name,
            sig6(stats.mean.delta_rate),
            sig6(stats.stddev.delta_rate),
            sig6(stats.mean.delta_quality),
            sig6(stats.stddev.delta_quality),
            sig6(stats.mean.delta_energy),
            sig6(stats.stddev.delta_energy)
        ));
    }
    out
}

/// Mean-ladder plot data with precomputed log10 columns. The RQ, EQ, and RE
/// projections all read from this one table.
pub fn mean_ladders_csv(mean_ladders: &[MeanLadder]) -> String {
    let mut out = String::from(
        "method,source_domain,rung_index,target,count,\
         bitrate_mean,bitrate_se,vmaf_mean,vmaf_se,energy_mean,energy_se,\
         log10_bitrate_mean,log10_energy_mean\n",
    );
    for ml in mean_ladders {
        for r in &ml.rungs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                ml.method,
                ml.source_domain,
                r.index,
                sig6(r.target),
                r.count,
                sig6(r.bitrate_kbps.mean),
                sig6(r.bitrate_kbps.se),
                sig6(r.vmaf.mean),
                sig6(r.vmaf.se),
                sig6(r.decode_energy_j.mean),
                sig6(r.decode_energy_j.se),
                sig6(r.bitrate_kbps.mean.log10()),
                sig6(r.decode_energy_j.mean.log10())
            ));
        }
    }
    out
}

/// Evaluation report JSON: both comparisons, per-sequence deltas, the
/// exclusion list, and the conventions used.
pub fn eval_report_json(eval: &LadderEvaluation, options: &PipelineOptions) -> String {
    #[derive(Serialize)]
    struct Report<'a> {
        reference: &'static str,
        pairing: &'static str,
        stddev_convention: &'static str,
        config: &'a PipelineOptions,
        rate_driven: RoundedEval,
        quality_driven: RoundedEval,
    }
    #[derive(Serialize)]
    struct RoundedEval {
        per_sequence: std::collections::BTreeMap<String, [f64; 3]>,
        excluded: Vec<String>,
        mean: [f64; 3],
        stddev: [f64; 3],
        rungs_compared: usize,
    }
    let round = |e: &crate::eval::CorpusEval| RoundedEval {
        per_sequence: e
            .per_sequence
            .iter()
            .map(|(k, d)| {
                (
                    k.clone(),
                    [
                        sig6_round(d.delta_rate),
                        sig6_round(d.delta_quality),
                        sig6_round(d.delta_energy),
                    ],
                )
            })
            .collect(),
        excluded: e.excluded.clone(),
        mean: [
            sig6_round(e.mean.delta_rate),
            sig6_round(e.mean.delta_quality),
            sig6_round(e.mean.delta_energy),
        ],
        stddev: [
            sig6_round(e.stddev.delta_rate),
            sig6_round(e.stddev.delta_quality),
            sig6_round(e.stddev.delta_energy),
        ],
        rungs_compared: e.mean.rungs_compared,
    };
    let report = Report {
        reference: "rq_pf",
        pairing: "by_rung_index",
        stddev_convention: "population",
        config: options,
        rate_driven: round(&eval.rate_driven),
        quality_driven: round(&eval.quality_driven),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

/// Record of one CLI run: inputs, configuration, and every file written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Unix timestamp; honors `SOURCE_DATE_EPOCH` for reproducible trees.
    pub created_unix: u64,
    pub inputs: Vec<String>,
    pub out_dir: String,
    pub config: PipelineOptions,
    /// Paths relative to `out_dir`, sorted.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(inputs: Vec<String>, out_dir: &Path, config: PipelineOptions) -> Self {
        Self {
            tool: "rqe-ladder".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            created_unix: manifest_timestamp(),
            inputs,
            out_dir: out_dir.display().to_string(),
            config,
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, relative_path: impl Into<String>) {
        self.outputs.push(relative_path.into());
    }

    pub fn to_json(&self) -> String {
        let mut sorted = self.clone();
        sorted.outputs.sort();
        let mut text = serde_json::to_string_pretty(&sorted).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json {
            context: "manifest".into(),
            detail: e.to_string(),
        })
    }
}

fn manifest_timestamp() -> u64 {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(v) = epoch.trim().parse() {
            return v;
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Standard output filenames for one sequence.
pub fn sequence_file_names(sequence_id: &str) -> SequenceFiles {
    let id = sanitize_id(sequence_id);
    SequenceFiles {
        rq_front: PathBuf::from(format!("{id}__front_rq.csv")),
        eq_front: PathBuf::from(format!("{id}__front_eq.csv")),
        ladders: [
            PathBuf::from(format!("{id}__rate_driven_rq.json")),
            PathBuf::from(format!("{id}__rate_driven_eq.json")),
            PathBuf::from(format!("{id}__quality_driven_rq.json")),
            PathBuf::from(format!("{id}__quality_driven_eq.json")),
        ],
    }
}

pub struct SequenceFiles {
    pub rq_front: PathBuf,
    pub eq_front: PathBuf,
    /// In pipeline ladder order: RD-RQ, RD-EQ, QD-RQ, QD-EQ.
    pub ladders: [PathBuf; 4],
}
