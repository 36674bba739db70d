//! Measurement-table parsing, validation, and export.
//!
//! A corpus is a set of (sequence, resolution, CRF) observations with
//! bitrate, quality, and decode energy. Validation enforces a complete CRF
//! grid per (sequence, resolution) group and positive cost axes; monotonicity
//! violations inside a group are reported as warnings, not errors, since
//! pre-compressed sources routinely produce them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};

/// One encode/decode observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPoint {
    pub sequence_id: String,
    pub resolution_height: u32,
    pub crf: f64,
    pub bitrate_kbps: f64,
    pub vmaf: f64,
    pub decode_energy_j: f64,
    /// Carried through the schema but unused by the selection pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encode_energy_j: Option<f64>,
}

/// Input/output corpus encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Json,
}

impl CorpusFormat {
    /// Guess from a file extension; defaults to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => CorpusFormat::Json,
            _ => CorpusFormat::Csv,
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Csv => "csv",
            CorpusFormat::Json => "json",
        })
    }
}

/// Validated measurement corpus.
///
/// Points are grouped per sequence and ordered by (resolution descending,
/// CRF ascending); `resolutions` and `crf_grid` are the deduplicated axes
/// observed in the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    sequences: BTreeMap<String, Vec<MeasurementPoint>>,
    resolutions: Vec<u32>,
    crf_grid: Vec<f64>,
}

impl Corpus {
    /// Validate a raw point list into a corpus. Returns monotonicity
    /// warnings alongside; all other schema violations are hard errors.
    pub fn from_points(points: Vec<MeasurementPoint>) -> Result<(Self, Vec<Warning>)> {
        if points.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        for p in &points {
            validate_point(p)?;
        }

        let mut seen: BTreeSet<(String, u32, u64)> = BTreeSet::new();
        for p in &points {
            if !seen.insert((p.sequence_id.clone(), p.resolution_height, p.crf.to_bits())) {
                return Err(Error::DuplicateKey {
                    sequence_id: p.sequence_id.clone(),
                    resolution_height: p.resolution_height,
                    crf: p.crf,
                });
            }
        }

        let mut crf_set: Vec<f64> = points.iter().map(|p| p.crf).collect();
        crf_set.sort_by(f64::total_cmp);
        crf_set.dedup();
        let mut resolutions: Vec<u32> = points.iter().map(|p| p.resolution_height).collect();
        resolutions.sort_unstable_by(|a, b| b.cmp(a));
        resolutions.dedup();

        let mut sequences: BTreeMap<String, Vec<MeasurementPoint>> = BTreeMap::new();
        for p in points {
            sequences.entry(p.sequence_id.clone()).or_default().push(p);
        }
        let res_rank = |r: u32| resolutions.iter().position(|&x| x == r).expect("known");
        for pts in sequences.values_mut() {
            pts.sort_by(|a, b| {
                res_rank(a.resolution_height)
                    .cmp(&res_rank(b.resolution_height))
                    .then(a.crf.total_cmp(&b.crf))
            });
        }

        // Complete grid: every (sequence, resolution) pair present must have
        // a point at every observed CRF.
        for (seq, pts) in &sequences {
            for &res in &resolutions {
                let group: Vec<&MeasurementPoint> = pts
                    .iter()
                    .filter(|p| p.resolution_height == res)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                for &crf in &crf_set {
                    if !group.iter().any(|p| p.crf == crf) {
                        return Err(Error::IncompleteGrid {
                            sequence_id: seq.clone(),
                            resolution_height: res,
                            crf,
                        });
                    }
                }
            }
        }

        let mut warnings = Vec::new();
        for (seq, pts) in &sequences {
            for &res in &resolutions {
                let group: Vec<&MeasurementPoint> = pts
                    .iter()
                    .filter(|p| p.resolution_height == res)
                    .collect();
                for pair in group.windows(2) {
                    if pair[1].bitrate_kbps >= pair[0].bitrate_kbps {
                        warnings.push(Warning::NonMonotoneBitrate {
                            sequence_id: seq.clone(),
                            resolution_height: res,
                            crf: pair[1].crf,
                        });
                    }
                    if pair[1].vmaf > pair[0].vmaf {
                        warnings.push(Warning::NonMonotoneQuality {
                            sequence_id: seq.clone(),
                            resolution_height: res,
                            crf: pair[1].crf,
                        });
                    }
                }
            }
        }

        Ok((
            Self {
                sequences,
                resolutions,
                crf_grid: crf_set,
            },
            warnings,
        ))
    }

    pub fn sequence_ids(&self) -> impl Iterator<Item = &str> {
        self.sequences.keys().map(String::as_str)
    }

    pub fn sequence_count(&self) -> usize {
        self.sequences.len()
    }

    pub fn point_count(&self) -> usize {
        self.sequences.values().map(Vec::len).sum()
    }

    pub fn points(&self, sequence_id: &str) -> impl Iterator<Item = &MeasurementPoint> {
        self.sequences.get(sequence_id).into_iter().flatten()
    }

    /// Points of one (sequence, resolution) group, CRF ascending.
    pub fn group(
        &self,
        sequence_id: &str,
        resolution_height: u32,
    ) -> impl Iterator<Item = &MeasurementPoint> {
        self.points(sequence_id)
            .filter(move |p| p.resolution_height == resolution_height)
    }

    pub fn all_points(&self) -> impl Iterator<Item = &MeasurementPoint> {
        self.sequences.values().flatten()
    }

    /// Resolution heights, descending.
    pub fn resolutions(&self) -> &[u32] {
        &self.resolutions
    }

    /// CRF values, ascending.
    pub fn crf_grid(&self) -> &[f64] {
        &self.crf_grid
    }

    /// Lossless CSV rendering (shortest round-trip float formatting). The
    /// optional `encode_energy_j` column appears only when some point
    /// carries it.
    pub fn to_csv(&self) -> String {
        let with_encode = self.all_points().any(|p| p.encode_energy_j.is_some());
        let mut out = String::from(
            "sequence_id,resolution_height,crf,bitrate_kbps,vmaf,decode_energy_j",
        );
        if with_encode {
            out.push_str(",encode_energy_j");
        }
        out.push('\n');
        for p in self.sequences.values().flatten() {
            out.push_str(&format!(
                "{},{},{},{},{},{}",
                p.sequence_id, p.resolution_height, p.crf, p.bitrate_kbps, p.vmaf, p.decode_energy_j
            ));
            if with_encode {
                out.push(',');
                if let Some(e) = p.encode_energy_j {
                    out.push_str(&format!("{e}"));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Lossless JSON rendering: a top-level array of point objects.
    pub fn to_json(&self) -> String {
        let points: Vec<&MeasurementPoint> = self.sequences.values().flatten().collect();
        serde_json::to_string_pretty(&points).expect("measurement points serialize")
    }

    pub fn write_to(&self, w: &mut impl Write, format: CorpusFormat) -> std::io::Result<()> {
        let text = match format {
            CorpusFormat::Csv => self.to_csv(),
            CorpusFormat::Json => self.to_json(),
        };
        w.write_all(text.as_bytes())
    }
}

fn validate_point(p: &MeasurementPoint) -> Result<()> {
    let ctx = |field: &'static str, value: f64| Error::NonPositiveValue {
        field,
        value,
        sequence_id: p.sequence_id.clone(),
        resolution_height: p.resolution_height,
        crf: p.crf,
    };
    if p.sequence_id.is_empty() {
        return Err(Error::Parse {
            context: "measurement point".into(),
            detail: "empty sequence_id".into(),
        });
    }
    if p.resolution_height == 0 {
        return Err(ctx("resolution_height", 0.0));
    }
    if !p.crf.is_finite() {
        return Err(Error::Parse {
            context: format!("({}, {})", p.sequence_id, p.resolution_height),
            detail: format!("non-finite crf {}", p.crf),
        });
    }
    if p.bitrate_kbps <= 0.0 || !p.bitrate_kbps.is_finite() {
        return Err(ctx("bitrate_kbps", p.bitrate_kbps));
    }
    if p.decode_energy_j <= 0.0 || !p.decode_energy_j.is_finite() {
        return Err(ctx("decode_energy_j", p.decode_energy_j));
    }
    if let Some(e) = p.encode_energy_j {
        if e <= 0.0 || !e.is_finite() {
            return Err(ctx("encode_energy_j", e));
        }
    }
    if !(0.0..=100.0).contains(&p.vmaf) || !p.vmaf.is_finite() {
        return Err(Error::QualityOutOfRange {
            value: p.vmaf,
            sequence_id: p.sequence_id.clone(),
            resolution_height: p.resolution_height,
            crf: p.crf,
        });
    }
    Ok(())
}

/// A corpus plus the non-fatal findings produced while loading it.
#[derive(Debug)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<Warning>,
}

/// Load and validate a corpus file.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LoadedCorpus> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        CorpusFormat::Csv => parse_csv(&text),
        CorpusFormat::Json => parse_json(&text),
    }
}

const KNOWN_COLUMNS: [&str; 7] = [
    "sequence_id",
    "resolution_height",
    "crf",
    "bitrate_kbps",
    "vmaf",
    "decode_energy_j",
    "encode_energy_j",
];

/// Parse the documented CSV schema: header required, comma separator,
/// `.` decimal. Unknown columns are ignored with a warning.
pub fn parse_csv(text: &str) -> Result<LoadedCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            context: "csv header".into(),
            detail: e.to_string(),
        })?
        .clone();

    let mut warnings = Vec::new();
    let mut col: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in headers.iter().enumerate() {
        let name = name.trim();
        if KNOWN_COLUMNS.contains(&name) {
            col.insert(KNOWN_COLUMNS[KNOWN_COLUMNS.iter().position(|k| *k == name).unwrap()], i);
        } else {
            warnings.push(Warning::UnknownColumn { name: name.to_string() });
        }
    }
    for required in &KNOWN_COLUMNS[..6] {
        if !col.contains_key(required) {
            return Err(Error::Parse {
                context: "csv header".into(),
                detail: format!("missing required column `{required}`"),
            });
        }
    }

    let mut points = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 2; // header is line 1
        let record = record.map_err(|e| Error::Parse {
            context: format!("csv line {line}"),
            detail: e.to_string(),
        })?;
        let field = |name: &str| -> Result<&str> {
            record.get(col[name]).ok_or_else(|| Error::Parse {
                context: format!("csv line {line}"),
                detail: format!("missing field `{name}`"),
            })
        };
        let num = |name: &str| -> Result<f64> {
            let raw = field(name)?;
            raw.trim().parse().map_err(|_| Error::Parse {
                context: format!("csv line {line}"),
                detail: format!("invalid number `{raw}` in `{name}`"),
            })
        };
        let encode_energy_j = match col.get("encode_energy_j") {
            Some(&i) => match record.get(i).map(str::trim) {
                None | Some("") => None,
                Some(raw) => Some(raw.parse().map_err(|_| Error::Parse {
                    context: format!("csv line {line}"),
                    detail: format!("invalid number `{raw}` in `encode_energy_j`"),
                })?),
            },
            None => None,
        };
        points.push(MeasurementPoint {
            sequence_id: field("sequence_id")?.trim().to_string(),
            resolution_height: field("resolution_height")?.trim().parse().map_err(|_| {
                Error::Parse {
                    context: format!("csv line {line}"),
                    detail: "invalid resolution_height".into(),
                }
            })?,
            crf: num("crf")?,
            bitrate_kbps: num("bitrate_kbps")?,
            vmaf: num("vmaf")?,
            decode_energy_j: num("decode_energy_j")?,
            encode_energy_j,
        });
    }

    let (corpus, mut more) = Corpus::from_points(points)?;
    warnings.append(&mut more);
    Ok(LoadedCorpus { corpus, warnings })
}

/// Parse the JSON schema: a top-level array of objects using the CSV column
/// names as keys. Unknown keys are ignored with a warning.
pub fn parse_json(text: &str) -> Result<LoadedCorpus> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Json {
        context: "corpus".into(),
        detail: e.to_string(),
    })?;
    let array = value.as_array().ok_or_else(|| Error::Json {
        context: "corpus".into(),
        detail: "expected a top-level array of points".into(),
    })?;

    let mut warnings = Vec::new();
    let mut unknown: BTreeSet<String> = BTreeSet::new();
    let mut points = Vec::with_capacity(array.len());
    for (i, item) in array.iter().enumerate() {
        if let Some(obj) = item.as_object() {
            for key in obj.keys() {
                if !KNOWN_COLUMNS.contains(&key.as_str()) && unknown.insert(key.clone()) {
                    warnings.push(Warning::UnknownColumn { name: key.clone() });
                }
            }
        }
        let point: MeasurementPoint =
            serde_json::from_value(item.clone()).map_err(|e| Error::Json {
                context: format!("corpus point {i}"),
                detail: e.to_string(),
            })?;
        points.push(point);
    }

    let (corpus, mut more) = Corpus::from_points(points)?;
    warnings.append(&mut more);
    Ok(LoadedCorpus { corpus, warnings })
}

/// Min/max/mean of one quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl ValueStats {
    fn compute(values: impl Iterator<Item = f64>) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        let mut n = 0usize;
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        Self {
            min,
            max,
            mean: sum / n as f64,
        }
    }
}

/// Per-resolution aggregate used for exploration plots (log10 cost axes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionSummary {
    pub count: usize,
    pub bitrate_kbps: ValueStats,
    pub vmaf: ValueStats,
    pub decode_energy_j: ValueStats,
    pub log10_bitrate: (f64, f64),
    pub log10_energy: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub sequence_count: usize,
    pub point_count: usize,
    pub per_resolution: BTreeMap<u32, ResolutionSummary>,
}

/// Per-resolution min/max/mean of the three measured quantities.
pub fn corpus_summary(corpus: &Corpus) -> Result<SummaryStats> {
    if corpus.point_count() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let mut per_resolution = BTreeMap::new();
    for &res in corpus.resolutions() {
        let pts: Vec<&MeasurementPoint> = corpus
            .all_points()
            .filter(|p| p.resolution_height == res)
            .collect();
        if pts.is_empty() {
            continue;
        }
        let bitrate = ValueStats::compute(pts.iter().map(|p| p.bitrate_kbps));
        let energy = ValueStats::compute(pts.iter().map(|p| p.decode_energy_j));
        per_resolution.insert(
            res,
            ResolutionSummary {
                count: pts.len(),
                bitrate_kbps: bitrate,
                vmaf: ValueStats::compute(pts.iter().map(|p| p.vmaf)),
                decode_energy_j: energy,
                log10_bitrate: (bitrate.min.log10(), bitrate.max.log10()),
                log10_energy: (energy.min.log10(), energy.max.log10()),
            },
        );
    }
    Ok(SummaryStats {
        sequence_count: corpus.sequence_count(),
        point_count: corpus.point_count(),
        per_resolution,
    })
}
