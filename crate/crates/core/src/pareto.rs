//! Pareto-front extraction in the rate-quality and energy-quality domains.
//!
//! Candidates from all resolutions of one sequence are pooled; the front is
//! the maximal weakly-non-dominated subset, kept strictly monotone in
//! (cost, quality) through deterministic tie-breaking.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{ResolutionCurve, SampledPoint};

/// Two-axis domain a front lives in: cost is bitrate for RQ, decode energy
/// for EQ; quality is VMAF in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "RQ")]
    Rq,
    #[serde(rename = "EQ")]
    Eq,
}

impl Domain {
    pub fn cost(self, p: &SampledPoint) -> f64 {
        match self {
            Domain::Rq => p.bitrate_kbps,
            Domain::Eq => p.decode_energy_j,
        }
    }

    pub fn other(self) -> Domain {
        match self {
            Domain::Rq => Domain::Eq,
            Domain::Eq => Domain::Rq,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Rq => "RQ",
            Domain::Eq => "EQ",
        })
    }
}

/// Non-dominated representation set of one sequence in one domain, sorted by
/// cost ascending with strictly increasing quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub sequence_id: String,
    pub domain: Domain,
    pub points: Vec<SampledPoint>,
}

impl ParetoFront {
    /// Pool the samples of `curves` (all of one sequence) and extract the
    /// front.
    pub fn extract(curves: &[ResolutionCurve], domain: Domain) -> Result<Self> {
        let mut sequence_id: Option<&str> = None;
        for c in curves {
            match sequence_id {
                None => sequence_id = Some(&c.sequence_id),
                Some(s) if s != c.sequence_id => {
                    return Err(Error::MixedSequences {
                        expected: s.to_string(),
                        found: c.sequence_id.clone(),
                    })
                }
                _ => {}
            }
        }
        let candidates: Vec<SampledPoint> = curves
            .iter()
            .flat_map(|c| c.samples.iter().cloned())
            .collect();
        let sequence_id = sequence_id.ok_or(Error::EmptyInput)?.to_string();
        Self::from_candidates(sequence_id, candidates, domain)
    }

    /// Extract the front from an arbitrary candidate pool.
    ///
    /// Sort by (cost asc, quality desc, resolution asc, crf asc), then keep
    /// points whose quality strictly exceeds the running maximum. Among
    /// identical-quality points only the cheapest survives, among
    /// identical-cost points only the best, and exact duplicates resolve to
    /// the lowest (resolution, crf).
    pub fn from_candidates(
        sequence_id: String,
        mut candidates: Vec<SampledPoint>,
        domain: Domain,
    ) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::EmptyInput);
        }
        candidates.sort_by(|a, b| {
            domain
                .cost(a)
                .total_cmp(&domain.cost(b))
                .then(b.vmaf.total_cmp(&a.vmaf))
                .then(a.resolution_height.cmp(&b.resolution_height))
                .then(a.crf.total_cmp(&b.crf))
        });
        let mut points: Vec<SampledPoint> = Vec::new();
        let mut best = f64::NEG_INFINITY;
        for p in candidates {
            if p.vmaf > best {
                best = p.vmaf;
                points.push(p);
            }
        }
        Ok(Self {
            sequence_id,
            domain,
            points,
        })
    }
}

/// Share of front points per resolution; fractions sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionHistogram {
    pub domain: Domain,
    pub counts: BTreeMap<u32, usize>,
    pub share: BTreeMap<u32, f64>,
}

pub fn front_composition(front: &ParetoFront) -> Result<CompositionHistogram> {
    if front.points.is_empty() {
        return Err(Error::EmptyFront);
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for p in &front.points {
        *counts.entry(p.resolution_height).or_default() += 1;
    }
    let total = front.points.len() as f64;
    let share = counts
        .iter()
        .map(|(&res, &n)| (res, n as f64 / total))
        .collect();
    Ok(CompositionHistogram {
        domain: front.domain,
        counts,
        share,
    })
}

/// Re-read the front's points under another domain's axes, order preserved.
/// The result is generally not monotone, which is the point: an EQ front
/// viewed in the RQ domain shows bitrate reversals and vice versa.
pub fn project_front(front: &ParetoFront, _target: Domain) -> Vec<SampledPoint> {
    front.points.clone()
}

/// (cost, quality) pairs of `points` under `domain`.
pub fn domain_coords(points: &[SampledPoint], domain: Domain) -> Vec<(f64, f64)> {
    points.iter().map(|p| (domain.cost(p), p.vmaf)).collect()
}
