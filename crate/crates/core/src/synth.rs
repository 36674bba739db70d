//! Synthetic rate-quality-energy corpus generation.
//!
//! The models are closed-form so tests can recompute every value: bitrate
//! decays exponentially in CRF, quality is a logistic in log10(bitrate) with
//! a per-resolution ceiling (upscaling penalty), and decode energy is a
//! per-resolution multiplicative offset plus weak linear growth in bitrate.
//! The default parameters make the resolution curves cross in quality while
//! keeping the per-resolution energy ranges disjoint (1x/3x/9x offsets), so
//! RQ and EQ fronts genuinely differ in composition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Corpus, MeasurementPoint};

/// Per-resolution model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionModel {
    pub height: u32,
    /// Bitrate at CRF 0, kbps.
    pub base_rate_kbps: f64,
    /// Highest VMAF this resolution can reach after upscaling.
    pub quality_ceiling: f64,
    /// Logistic steepness per decade of bitrate.
    pub quality_slope: f64,
    /// Bitrate at which quality reaches half its ceiling, kbps.
    pub quality_midpoint_kbps: f64,
    /// Multiplicative decode-energy offset relative to the base cost.
    pub energy_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub sequence_count: usize,
    pub crf_grid: Vec<f64>,
    pub resolutions: Vec<ResolutionModel>,
    /// Bitrate halves every this many CRF units.
    pub rate_halving_crf: f64,
    /// Baseline decode energy, joules.
    pub energy_base_j: f64,
    /// Energy growth per Mbps of bitrate, joules.
    pub energy_per_mbps_j: f64,
    /// Relative spread of the per-sequence complexity factor: sequence `i`
    /// of `n` scales bitrate by a factor evenly spaced in
    /// `[1-spread, 1+spread]` (a single sequence gets exactly 1).
    pub sequence_spread: f64,
    /// Relative multiplicative noise amplitude applied independently to
    /// bitrate, quality, and energy. Zero disables the RNG entirely.
    pub noise: f64,
    pub rng_seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            sequence_count: 5,
            crf_grid: vec![10.0, 20.0, 30.0, 40.0, 50.0],
            resolutions: vec![
                ResolutionModel {
                    height: 2160,
                    base_rate_kbps: 80_000.0,
                    quality_ceiling: 98.0,
                    quality_slope: 1.6,
                    quality_midpoint_kbps: 150.0,
                    energy_scale: 9.0,
                },
                ResolutionModel {
                    height: 1080,
                    base_rate_kbps: 62_000.0,
                    quality_ceiling: 94.0,
                    quality_slope: 9.0,
                    quality_midpoint_kbps: 3_000.0,
                    energy_scale: 3.0,
                },
                ResolutionModel {
                    height: 720,
                    base_rate_kbps: 26_000.0,
                    quality_ceiling: 88.0,
                    quality_slope: 5.0,
                    quality_midpoint_kbps: 800.0,
                    energy_scale: 1.0,
                },
            ],
            rate_halving_crf: 10.0,
            energy_base_j: 50.0,
            energy_per_mbps_j: 0.5,
            sequence_spread: 0.2,
            noise: 0.0,
            rng_seed: 42,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidSpec { reason });
        if self.sequence_count == 0 {
            return fail("sequence_count must be at least 1".into());
        }
        if self.crf_grid.is_empty() {
            return fail("crf_grid must not be empty".into());
        }
        if !self.crf_grid.windows(2).all(|w| w[0] < w[1]) {
            return fail("crf_grid must be strictly increasing".into());
        }
        if self.resolutions.is_empty() {
            return fail("at least one resolution model is required".into());
        }
        let mut heights: Vec<u32> = self.resolutions.iter().map(|m| m.height).collect();
        heights.sort_unstable();
        heights.dedup();
        if heights.len() != self.resolutions.len() {
            return fail("resolution heights must be unique".into());
        }
        for m in &self.resolutions {
            let positive = |v: f64| v > 0.0 && v.is_finite();
            if m.height == 0
                || !positive(m.base_rate_kbps)
                || !positive(m.quality_midpoint_kbps)
                || !positive(m.quality_slope)
                || !positive(m.energy_scale)
            {
                return fail(format!("non-positive parameter for {}p", m.height));
            }
            if !positive(m.quality_ceiling) || m.quality_ceiling > 100.0 {
                return fail(format!(
                    "quality_ceiling for {}p must be in (0, 100]",
                    m.height
                ));
            }
        }
        if self.rate_halving_crf.is_nan() || self.rate_halving_crf <= 0.0 {
            return fail("rate_halving_crf must be positive".into());
        }
        if self.energy_base_j.is_nan()
            || self.energy_base_j <= 0.0
            || self.energy_per_mbps_j.is_nan()
            || self.energy_per_mbps_j < 0.0
        {
            return fail("energy model parameters must be positive".into());
        }
        if !(0.0..1.0).contains(&self.sequence_spread) {
            return fail("sequence_spread must be in [0, 1)".into());
        }
        if !(0.0..1.0).contains(&self.noise) {
            return fail("noise must be in [0, 1)".into());
        }
        Ok(())
    }

    /// Complexity factor of sequence `i`: evenly spaced over
    /// `[1-spread, 1+spread]`, exactly 1 for a single sequence.
    pub fn sequence_factor(&self, i: usize) -> f64 {
        if self.sequence_count <= 1 {
            return 1.0;
        }
        let t = i as f64 / (self.sequence_count - 1) as f64;
        1.0 - self.sequence_spread + 2.0 * self.sequence_spread * t
    }

    pub fn sequence_id(&self, i: usize) -> String {
        format!("seq_{i:03}")
    }

    /// Closed-form bitrate for (sequence factor, resolution, crf), kbps.
    pub fn bitrate(&self, factor: f64, model: &ResolutionModel, crf: f64) -> f64 {
        factor * model.base_rate_kbps * f64::powf(2.0, -crf / self.rate_halving_crf)
    }

    /// Closed-form quality at a bitrate, clamped to [0, 100].
    pub fn quality(&self, model: &ResolutionModel, bitrate_kbps: f64) -> f64 {
        let z = model.quality_slope
            * (bitrate_kbps.log10() - model.quality_midpoint_kbps.log10());
        (model.quality_ceiling / (1.0 + (-z).exp())).clamp(0.0, 100.0)
    }

    /// Closed-form decode energy at a bitrate, joules.
    pub fn energy(&self, model: &ResolutionModel, bitrate_kbps: f64) -> f64 {
        model.energy_scale * (self.energy_base_j + self.energy_per_mbps_j * bitrate_kbps / 1000.0)
    }
}

/// Generate a complete-grid corpus from `spec`. Pure in the spec, including
/// the seed: the same spec always yields the same corpus.
pub fn make_synthetic_corpus(spec: &SynthSpec) -> Result<Corpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut points = Vec::new();
    for i in 0..spec.sequence_count {
        let factor = spec.sequence_factor(i);
        let sequence_id = spec.sequence_id(i);
        for model in &spec.resolutions {
            for &crf in &spec.crf_grid {
                let mut bitrate = spec.bitrate(factor, model, crf);
                let mut vmaf = spec.quality(model, bitrate);
                let mut energy = spec.energy(model, bitrate);
                if spec.noise > 0.0 {
                    bitrate *= 1.0 + spec.noise * rng.gen_range(-1.0..1.0);
                    vmaf = (vmaf * (1.0 + spec.noise * rng.gen_range(-1.0..1.0)))
                        .clamp(0.0, 100.0);
                    energy *= 1.0 + spec.noise * rng.gen_range(-1.0..1.0);
                }
                points.push(MeasurementPoint {
                    sequence_id: sequence_id.clone(),
                    resolution_height: model.height,
                    crf,
                    bitrate_kbps: bitrate,
                    vmaf,
                    decode_energy_j: energy,
                    encode_energy_j: None,
                });
            }
        }
    }
    let (corpus, _warnings) = Corpus::from_points(points)?;
    Ok(corpus)
}
