//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test target compiles its own copy

use std::path::Path;

use rqe_ladder::prelude::*;

pub fn sample(res: u32, crf: f64, rate: f64, vmaf: f64, energy: f64) -> SampledPoint {
    SampledPoint {
        resolution_height: res,
        crf,
        bitrate_kbps: rate,
        vmaf,
        decode_energy_j: energy,
        is_knot: false,
    }
}

/// A rate-driven ladder whose rungs are filled with the given bitrates;
/// quality and energy are derived deterministically from the rate.
pub fn ladder_with_rates(sequence_id: &str, domain: Domain, rates: &[f64]) -> Ladder {
    let rungs = rates
        .iter()
        .enumerate()
        .map(|(i, &rate)| LadderRung {
            index: i + 1,
            target: 500.0 * f64::powi(2.0, i as i32),
            status: RungStatus::Filled,
            point: Some(sample(1080, 30.0 - i as f64, rate, 50.0 + i as f64, rate / 100.0)),
        })
        .collect();
    Ladder {
        sequence_id: sequence_id.to_string(),
        method: LadderMethod::RateDriven,
        source_domain: domain,
        config: LadderConfig::default(),
        rungs,
    }
}

/// O(n^2) weak-dominance filter with the library's tie-breaking: among
/// exact (cost, quality) duplicates keep the lowest (resolution, crf), then
/// sort by cost.
pub fn brute_force_front(candidates: &[SampledPoint], domain: Domain) -> Vec<SampledPoint> {
    let mut keep: Vec<SampledPoint> = Vec::new();
    for p in candidates {
        let dominated = candidates.iter().any(|q| {
            domain.cost(q) <= domain.cost(p)
                && q.vmaf >= p.vmaf
                && (domain.cost(q) < domain.cost(p) || q.vmaf > p.vmaf)
        });
        if !dominated {
            keep.push(p.clone());
        }
    }
    let mut best: std::collections::BTreeMap<(u64, u64), SampledPoint> = Default::default();
    for p in keep {
        let key = (domain.cost(&p).to_bits(), p.vmaf.to_bits());
        match best.get(&key) {
            Some(held) if (held.resolution_height, held.crf) <= (p.resolution_height, p.crf) => {}
            _ => {
                best.insert(key, p);
            }
        }
    }
    let mut out: Vec<SampledPoint> = best.into_values().collect();
    out.sort_by(|a, b| domain.cost(a).total_cmp(&domain.cost(b)));
    out
}

/// All regular files under `dir` as sorted (relative name, contents) pairs.
pub fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        for entry in std::fs::read_dir(&current).expect("readable dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let name = path
                    .strip_prefix(dir)
                    .expect("under root")
                    .display()
                    .to_string();
                files.push((name, std::fs::read(&path).expect("readable file")));
            }
        }
    }
    files.sort();
    files
}

/// Synthesis spec whose 1080p curve overtakes the 2160p curve mid-range, so
/// the rate-driven RQ ladder switches back down a resolution as bitrate
/// grows. Used to exercise non-monotone ladder projections.
pub fn downswitch_spec() -> SynthSpec {
    SynthSpec {
        sequence_count: 1,
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
                quality_ceiling: 97.5,
                quality_slope: 5.0,
                quality_midpoint_kbps: 4_500.0,
                energy_scale: 3.0,
            },
        ],
        ..SynthSpec::default()
    }
}
