//! Bitrate-ladder construction from Pareto fronts.
//!
//! Two rung rules: rate-driven targets double from `rate_min` to `rate_max`
//! with a relative search band, quality-driven targets step through a VMAF
//! range with an absolute band. Either rule can run on an RQ or an EQ front,
//! giving the four ladder variants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::SampledPoint;
use crate::pareto::{Domain, ParetoFront};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderMethod {
    RateDriven,
    QualityDriven,
}

impl std::fmt::Display for LadderMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LadderMethod::RateDriven => "rate_driven",
            LadderMethod::QualityDriven => "quality_driven",
        })
    }
}

/// What to do when a rung's search band holds no front point: leave the rung
/// empty (default) or fall back to the nearest point that keeps the ladder
/// monotone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FallbackMode {
    #[default]
    Skip,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub rate_min_kbps: f64,
    pub rate_max_kbps: f64,
    /// Relative half-width of the rate search band.
    pub rate_band: f64,
    pub quality_min: f64,
    pub quality_max: f64,
    pub quality_step: f64,
    /// Absolute half-width of the quality search band, in VMAF.
    pub quality_band: f64,
    #[serde(default)]
    pub fallback: FallbackMode,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            rate_min_kbps: 500.0,
            rate_max_kbps: 128_000.0,
            rate_band: 0.10,
            quality_min: 50.0,
            quality_max: 100.0,
            quality_step: 10.0,
            quality_band: 5.0,
            fallback: FallbackMode::Skip,
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidConfig {
                reason: reason.to_string(),
            })
        };
        let bad = |v: f64| v.is_nan();
        if bad(self.rate_min_kbps) || self.rate_min_kbps <= 0.0 || bad(self.rate_max_kbps)
            || self.rate_min_kbps >= self.rate_max_kbps
        {
            return fail("rate_min must be positive and below rate_max");
        }
        if bad(self.rate_band) || self.rate_band <= 0.0 || self.rate_band >= 1.0 {
            return fail("rate_band must be in (0, 1)");
        }
        if bad(self.quality_min) || bad(self.quality_max) || self.quality_min >= self.quality_max {
            return fail("quality_min must be below quality_max");
        }
        if bad(self.quality_step) || self.quality_step <= 0.0 {
            return fail("quality_step must be positive");
        }
        if bad(self.quality_band) || self.quality_band <= 0.0 {
            return fail("quality_band must be positive");
        }
        Ok(())
    }

    /// Rate targets: `rate_min * 2^(i-1)` up to `rate_max`, computed in
    /// exact arithmetic (no accumulation).
    pub fn rate_targets(&self) -> Vec<f64> {
        let mut targets = Vec::new();
        for i in 0.. {
            let t = self.rate_min_kbps * f64::powi(2.0, i);
            if t > self.rate_max_kbps * (1.0 + 1e-12) {
                break;
            }
            targets.push(t);
        }
        targets
    }

    /// Quality targets: `quality_min + (i-1) * quality_step` up to
    /// `quality_max`.
    pub fn quality_targets(&self) -> Vec<f64> {
        let mut targets = Vec::new();
        for i in 0.. {
            let t = self.quality_min + i as f64 * self.quality_step;
            if t > self.quality_max + 1e-9 {
                break;
            }
            targets.push(t);
        }
        targets
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RungStatus {
    Filled,
    Skipped,
}

/// One ladder rung: a target (kbps for rate-driven, VMAF for quality-driven)
/// and the front point chosen for it, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub index: usize,
    pub target: f64,
    pub status: RungStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<SampledPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub sequence_id: String,
    pub method: LadderMethod,
    pub source_domain: Domain,
    pub config: LadderConfig,
    pub rungs: Vec<LadderRung>,
}

impl Ladder {
    pub fn filled_rungs(&self) -> impl Iterator<Item = (&LadderRung, &SampledPoint)> {
        self.rungs
            .iter()
            .filter_map(|r| r.point.as_ref().map(|p| (r, p)))
    }

    pub fn filled_count(&self) -> usize {
        self.rungs.iter().filter(|r| r.point.is_some()).count()
    }
}

/// Build the rate-driven ladder: doubling targets, candidates within
/// `target * (1 ± rate_band)`, lowest-bitrate candidate wins, each front
/// point fills at most one rung.
pub fn rate_driven_ladder(front: &ParetoFront, config: &LadderConfig) -> Result<Ladder> {
    config.validate()?;
    let mut used = vec![false; front.points.len()];
    let mut last_rate = f64::NEG_INFINITY;
    let mut rungs = Vec::new();
    for (i, target) in config.rate_targets().into_iter().enumerate() {
        let lo = target * (1.0 - config.rate_band);
        let hi = target * (1.0 + config.rate_band);
        // The monotonicity guard (`> last_rate`) is inert for bands narrower
        // than 1/3, where consecutive bands cannot overlap; it keeps the
        // filled rungs strictly increasing for wider bands and in nearest
        // mode.
        let in_band = |p: &SampledPoint| p.bitrate_kbps >= lo && p.bitrate_kbps <= hi;
        let pick = select(
            &front.points,
            &used,
            |p| in_band(p) && p.bitrate_kbps > last_rate,
            |p| (p.bitrate_kbps, p.resolution_height, p.crf),
        )
        .or_else(|| match config.fallback {
            FallbackMode::Skip => None,
            FallbackMode::Nearest => select(
                &front.points,
                &used,
                |p| p.bitrate_kbps > last_rate,
                |p| ((p.bitrate_kbps - target).abs(), p.resolution_height, p.crf),
            ),
        });
        rungs.push(make_rung(i, target, pick, &front.points, &mut used, |p| {
            last_rate = p.bitrate_kbps;
        }));
    }
    Ok(Ladder {
        sequence_id: front.sequence_id.clone(),
        method: LadderMethod::RateDriven,
        source_domain: front.domain,
        config: *config,
        rungs,
    })
}

/// Build the quality-driven ladder: fixed VMAF targets, candidates within
/// `target ± quality_band`, the candidate minimizing the front's own cost
/// axis wins (ties to lower resolution then lower CRF), one representation
/// per rung.
pub fn quality_driven_ladder(front: &ParetoFront, config: &LadderConfig) -> Result<Ladder> {
    config.validate()?;
    let domain = front.domain;
    let mut used = vec![false; front.points.len()];
    let mut last_quality = f64::NEG_INFINITY;
    let mut rungs = Vec::new();
    for (i, target) in config.quality_targets().into_iter().enumerate() {
        let lo = target - config.quality_band;
        let hi = target + config.quality_band;
        let in_band = |p: &SampledPoint| p.vmaf >= lo && p.vmaf <= hi;
        let pick = select(
            &front.points,
            &used,
            |p| in_band(p) && p.vmaf > last_quality,
            |p| (domain.cost(p), p.resolution_height, p.crf),
        )
        .or_else(|| match config.fallback {
            FallbackMode::Skip => None,
            FallbackMode::Nearest => select(
                &front.points,
                &used,
                |p| p.vmaf > last_quality,
                |p| ((p.vmaf - target).abs(), p.resolution_height, p.crf),
            ),
        });
        rungs.push(make_rung(i, target, pick, &front.points, &mut used, |p| {
            last_quality = p.vmaf;
        }));
    }
    Ok(Ladder {
        sequence_id: front.sequence_id.clone(),
        method: LadderMethod::QualityDriven,
        source_domain: domain,
        config: *config,
        rungs,
    })
}

fn select(
    points: &[SampledPoint],
    used: &[bool],
    eligible: impl Fn(&SampledPoint) -> bool,
    key: impl Fn(&SampledPoint) -> (f64, u32, f64),
) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(i, p)| !used[*i] && eligible(p))
        .min_by(|(_, a), (_, b)| {
            let (ka, ra, ca) = key(a);
            let (kb, rb, cb) = key(b);
            ka.total_cmp(&kb).then(ra.cmp(&rb)).then(ca.total_cmp(&cb))
        })
        .map(|(i, _)| i)
}

fn make_rung(
    i: usize,
    target: f64,
    pick: Option<usize>,
    points: &[SampledPoint],
    used: &mut [bool],
    mut on_fill: impl FnMut(&SampledPoint),
) -> LadderRung {
    match pick {
        Some(idx) => {
            used[idx] = true;
            on_fill(&points[idx]);
            LadderRung {
                index: i + 1,
                target,
                status: RungStatus::Filled,
                point: Some(points[idx].clone()),
            }
        }
        None => LadderRung {
            index: i + 1,
            target,
            status: RungStatus::Skipped,
            point: None,
        },
    }
}

/// Filled rungs as (cost, quality) pairs under `target` axes, rung order
/// preserved. Non-monotone output is expected when viewing a ladder in the
/// domain it was not built from.
pub fn ladder_to_domain(ladder: &Ladder, target: Domain) -> Vec<(f64, f64)> {
    ladder
        .filled_rungs()
        .map(|(_, p)| (target.cost(p), p.vmaf))
        .collect()
}
