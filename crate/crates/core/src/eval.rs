//! Ladder comparison and corpus-level aggregation.
//!
//! The core metric is the mean relative difference between a reference and a
//! proposed ladder, applied identically to bitrate, quality, and decode
//! energy over the rungs filled in both:
//!
//! ```text
//! delta = (1/N) * sum_n (ref_n - prop_n) / ref_n
//! ```
//!
//! Positive `delta_energy` means the proposed ladder spends less energy than
//! the reference. Pairing is by rung index; skipped rungs on either side
//! drop the pair. Aggregates use the population standard deviation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{Ladder, LadderConfig, LadderMethod};
use crate::pareto::Domain;

/// Mean relative difference over the rungs comparable between two ladders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeDiff {
    pub delta_rate: f64,
    pub delta_quality: f64,
    pub delta_energy: f64,
    pub rungs_compared: usize,
}

/// Compare `proposed` against `reference`, rung index by rung index.
pub fn relative_diff(reference: &Ladder, proposed: &Ladder) -> Result<RelativeDiff> {
    if reference.method != proposed.method {
        return Err(Error::MethodMismatch {
            reference: reference.method.to_string(),
            proposed: proposed.method.to_string(),
        });
    }
    if reference.config != proposed.config {
        return Err(Error::ConfigMismatch);
    }
    let mut sum_rate = 0.0;
    let mut sum_quality = 0.0;
    let mut sum_energy = 0.0;
    let mut n = 0usize;
    for (r, p) in reference.rungs.iter().zip(proposed.rungs.iter()) {
        let (Some(rp), Some(pp)) = (&r.point, &p.point) else {
            continue;
        };
        sum_rate += (rp.bitrate_kbps - pp.bitrate_kbps) / rp.bitrate_kbps;
        sum_quality += (rp.vmaf - pp.vmaf) / rp.vmaf;
        sum_energy += (rp.decode_energy_j - pp.decode_energy_j) / rp.decode_energy_j;
        n += 1;
    }
    if n == 0 {
        return Err(Error::NoComparableRungs);
    }
    let n_f = n as f64;
    Ok(RelativeDiff {
        delta_rate: sum_rate / n_f,
        delta_quality: sum_quality / n_f,
        delta_energy: sum_energy / n_f,
        rungs_compared: n,
    })
}

/// Corpus-level comparison: per-sequence relative differences plus mean and
/// population standard deviation over the sequences with a defined result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEval {
    pub per_sequence: BTreeMap<String, RelativeDiff>,
    /// Sequences present on both sides but with no comparable rungs.
    pub excluded: Vec<String>,
    pub mean: RelativeDiff,
    pub stddev: RelativeDiff,
}

pub fn corpus_eval(
    reference: &BTreeMap<String, Ladder>,
    proposed: &BTreeMap<String, Ladder>,
) -> Result<CorpusEval> {
    let shared: Vec<&String> = reference.keys().filter(|k| proposed.contains_key(*k)).collect();
    if shared.is_empty() {
        return Err(Error::EmptyIntersection);
    }

    let mut per_sequence = BTreeMap::new();
    let mut excluded = Vec::new();
    for seq in shared {
        match relative_diff(&reference[seq], &proposed[seq]) {
            Ok(diff) => {
                per_sequence.insert(seq.clone(), diff);
            }
            Err(Error::NoComparableRungs) => excluded.push(seq.clone()),
            Err(other) => return Err(other),
        }
    }
    if per_sequence.is_empty() {
        // every shared sequence was excluded, so nothing is comparable
        return Err(Error::EmptyIntersection);
    }

    let n = per_sequence.len() as f64;
    let total_rungs: usize = per_sequence.values().map(|d| d.rungs_compared).sum();
    let mean_of = |f: fn(&RelativeDiff) -> f64| per_sequence.values().map(f).sum::<f64>() / n;
    let mean = RelativeDiff {
        delta_rate: mean_of(|d| d.delta_rate),
        delta_quality: mean_of(|d| d.delta_quality),
        delta_energy: mean_of(|d| d.delta_energy),
        rungs_compared: total_rungs,
    };
    let std_of = |f: fn(&RelativeDiff) -> f64, m: f64| {
        (per_sequence.values().map(|d| (f(d) - m).powi(2)).sum::<f64>() / n).sqrt()
    };
    let stddev = RelativeDiff {
        delta_rate: std_of(|d| d.delta_rate, mean.delta_rate),
        delta_quality: std_of(|d| d.delta_quality, mean.delta_quality),
        delta_energy: std_of(|d| d.delta_energy, mean.delta_energy),
        rungs_compared: total_rungs,
    };
    Ok(CorpusEval {
        per_sequence,
        excluded,
        mean,
        stddev,
    })
}

/// Mean and standard error of one quantity at one rung.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

fn mean_se(values: &[f64]) -> MeanSe {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    MeanSe {
        mean,
        se: var.sqrt() / n.sqrt(),
    }
}

/// Per-rung aggregate across the ladders of many sequences. Rungs filled in
/// no ladder are omitted; `se` is population-stddev / sqrt(count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanRung {
    pub index: usize,
    pub target: f64,
    pub count: usize,
    pub bitrate_kbps: MeanSe,
    pub vmaf: MeanSe,
    pub decode_energy_j: MeanSe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanLadder {
    pub method: LadderMethod,
    pub source_domain: Domain,
    pub config: LadderConfig,
    pub sequence_count: usize,
    pub rungs: Vec<MeanRung>,
}

/// Aggregate ladders sharing one (method, domain, config).
pub fn mean_ladder(ladders: &[&Ladder]) -> Result<MeanLadder> {
    let first = ladders.first().ok_or(Error::EmptyInput)?;
    for l in ladders {
        if l.method != first.method {
            return Err(Error::MethodMismatch {
                reference: first.method.to_string(),
                proposed: l.method.to_string(),
            });
        }
        if l.source_domain != first.source_domain || l.config != first.config {
            return Err(Error::ConfigMismatch);
        }
    }
    let rung_count = ladders.iter().map(|l| l.rungs.len()).max().unwrap_or(0);
    let mut rungs = Vec::new();
    for i in 0..rung_count {
        let points: Vec<_> = ladders
            .iter()
            .filter_map(|l| l.rungs.get(i))
            .filter_map(|r| r.point.as_ref())
            .collect();
        if points.is_empty() {
            continue;
        }
        let target = ladders
            .iter()
            .filter_map(|l| l.rungs.get(i))
            .map(|r| r.target)
            .next()
            .expect("rung exists");
        let rates: Vec<f64> = points.iter().map(|p| p.bitrate_kbps).collect();
        let quals: Vec<f64> = points.iter().map(|p| p.vmaf).collect();
        let energies: Vec<f64> = points.iter().map(|p| p.decode_energy_j).collect();
        rungs.push(MeanRung {
            index: i + 1,
            target,
            count: points.len(),
            bitrate_kbps: mean_se(&rates),
            vmaf: mean_se(&quals),
            decode_energy_j: mean_se(&energies),
        });
    }
    Ok(MeanLadder {
        method: first.method,
        source_domain: first.source_domain,
        config: first.config,
        sequence_count: ladders.len(),
        rungs,
    })
}
