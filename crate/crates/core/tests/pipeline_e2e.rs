//! End-to-end library tests on the synthetic fixtures, plus the golden-file
//! regression for the ladder outputs.

use rqe_ladder::ingest::corpus_summary;
use rqe_ladder::prelude::*;

mod common;

#[test]
fn summary_ranges_match_generator_closed_forms() {
    let spec = SynthSpec::default();
    let corpus = make_synthetic_corpus(&spec).unwrap();
    let summary = corpus_summary(&corpus).unwrap();
    assert_eq!(summary.per_resolution.len(), 3);

    // recompute expected per-resolution extremes straight from the models:
    // bitrate is monotone in both crf and the sequence factor, so extremes
    // sit at the grid corners
    let crf_lo = spec.crf_grid[0];
    let crf_hi = *spec.crf_grid.last().unwrap();
    let f_lo = spec.sequence_factor(0);
    let f_hi = spec.sequence_factor(spec.sequence_count - 1);
    for model in &spec.resolutions {
        let stats = &summary.per_resolution[&model.height];
        let max_rate = spec.bitrate(f_hi, model, crf_lo);
        let min_rate = spec.bitrate(f_lo, model, crf_hi);
        assert_eq!(stats.bitrate_kbps.max, max_rate);
        assert_eq!(stats.bitrate_kbps.min, min_rate);
        assert_eq!(stats.decode_energy_j.max, spec.energy(model, max_rate));
        assert_eq!(stats.decode_energy_j.min, spec.energy(model, min_rate));
        assert_eq!(stats.vmaf.max, spec.quality(model, max_rate));
        assert_eq!(stats.vmaf.min, spec.quality(model, min_rate));
        assert_eq!(stats.log10_bitrate, (min_rate.log10(), max_rate.log10()));
        assert_eq!(stats.count, 5 * spec.sequence_count);
    }
}

#[test]
fn knot_samples_equal_generator_closed_forms() {
    let spec = SynthSpec {
        sequence_count: 2,
        ..SynthSpec::default()
    };
    let corpus = make_synthetic_corpus(&spec).unwrap();
    let (curves, warnings) = sample_curves(&corpus, 0.1).unwrap();
    assert!(warnings.is_empty());
    for curve in &curves {
        let seq_index: usize = curve.sequence_id[4..].parse().unwrap();
        let factor = spec.sequence_factor(seq_index);
        let model = spec
            .resolutions
            .iter()
            .find(|m| m.height == curve.resolution_height)
            .unwrap();
        let knots: Vec<_> = curve.samples.iter().filter(|s| s.is_knot).collect();
        assert_eq!(knots.len(), 5);
        for (knot, &crf) in knots.iter().zip(spec.crf_grid.iter()) {
            let rate = spec.bitrate(factor, model, crf);
            assert_eq!(knot.bitrate_kbps, rate, "knot bitrate at crf {crf}");
            assert_eq!(knot.vmaf, spec.quality(model, rate));
            assert_eq!(knot.decode_energy_j, spec.energy(model, rate));
        }
    }
}

#[test]
fn eq_front_prefers_low_resolutions() {
    let corpus = make_synthetic_corpus(&SynthSpec::default()).unwrap();
    let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();
    for seq in &analysis.sequences {
        // the EQ front starts with the cheapest-energy resolution and its
        // 720p share dominates the RQ front's
        let share_720_eq = seq.eq_composition.share.get(&720).copied().unwrap_or(0.0);
        let share_720_rq = seq.rq_composition.share.get(&720).copied().unwrap_or(0.0);
        assert!(share_720_eq > share_720_rq);
        assert_eq!(seq.eq_front.points[0].resolution_height, 720);
    }
}

#[test]
fn rate_ladder_on_downswitch_fixture_is_nonmonotone_in_energy() {
    // 1080p overtakes 2160p in quality mid-range, so the rate-driven RQ
    // ladder drops to a cheaper-energy resolution while quality still rises.
    let corpus = make_synthetic_corpus(&common::downswitch_spec()).unwrap();
    let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();
    let ladder = analysis.sequences[0].ladder(LadderMethod::RateDriven, Domain::Rq);
    let eq_view = ladder_to_domain(ladder, Domain::Eq);
    assert!(eq_view.len() >= 3);
    let has_energy_drop_with_quality_gain = eq_view
        .windows(2)
        .any(|w| w[1].0 < w[0].0 && w[1].1 > w[0].1);
    assert!(
        has_energy_drop_with_quality_gain,
        "expected an energy drop between adjacent rungs: {eq_view:?}"
    );
    // while the same ladder seen in its own domain stays monotone
    let rq_view = ladder_to_domain(ladder, Domain::Rq);
    assert!(rq_view.windows(2).all(|w| w[1].0 > w[0].0));
}

#[test]
fn quality_ladders_stay_within_narrow_cost_ranges() {
    // quality-driven rungs eliminate same-quality representations, so the
    // ladder spans a narrower bitrate range than its rate-driven sibling
    let corpus = make_synthetic_corpus(&SynthSpec::default()).unwrap();
    let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();
    for seq in &analysis.sequences {
        let span = |ladder: &Ladder| {
            let rates: Vec<f64> = ladder.filled_rungs().map(|(_, p)| p.bitrate_kbps).collect();
            rates.last().unwrap() / rates.first().unwrap()
        };
        let rate_span = span(seq.ladder(LadderMethod::RateDriven, Domain::Rq));
        let quality_span = span(seq.ladder(LadderMethod::QualityDriven, Domain::Rq));
        assert!(quality_span < rate_span);
    }
}

#[test]
fn excluded_sequences_are_reported_not_fatal() {
    // one sequence whose front misses every rate band on the EQ side only:
    // impossible with shared fronts, so emulate by evaluating ladder sets
    // where one proposed ladder is fully skipped
    let corpus = make_synthetic_corpus(&SynthSpec {
        sequence_count: 2,
        ..SynthSpec::default()
    })
    .unwrap();
    let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();
    let mut ladders: Vec<Ladder> = analysis.ladders().cloned().collect();
    for l in &mut ladders {
        if l.sequence_id == "seq_001"
            && l.method == LadderMethod::RateDriven
            && l.source_domain == Domain::Eq
        {
            for rung in &mut l.rungs {
                rung.point = None;
                rung.status = RungStatus::Skipped;
            }
        }
    }
    let eval = evaluate_ladder_sets(&ladders).unwrap();
    assert_eq!(eval.rate_driven.excluded, vec!["seq_001".to_string()]);
    assert_eq!(eval.rate_driven.per_sequence.len(), 1);
    assert_eq!(eval.quality_driven.per_sequence.len(), 2);
}

// ---------------------------------------------------------------------------
// Golden-file regression: the `ladders` command output on the committed
// fixture corpus must stay byte-identical (manifest excluded, since it
// embeds run-specific paths).
// ---------------------------------------------------------------------------

#[test]
fn ladder_outputs_match_golden_files() {
    let bin = env!("CARGO_BIN_EXE_rqe-ladder");
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/golden_corpus.csv");
    let golden_dir = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"));
    let out = tempfile::tempdir().unwrap();

    let status = std::process::Command::new(bin)
        .args(["ladders", "--input", fixture, "--step", "1.0", "--out-dir"])
        .arg(out.path())
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));

    let produced: Vec<(String, Vec<u8>)> = common::read_tree(out.path())
        .into_iter()
        .filter(|(name, _)| name != "manifest.json")
        .collect();
    let golden = common::read_tree(golden_dir);
    assert_eq!(
        produced.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        golden.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "file sets differ"
    );
    for ((name, bytes), (_, want)) in produced.iter().zip(golden.iter()) {
        assert_eq!(bytes, want, "{name} drifted from its golden copy");
    }
}
