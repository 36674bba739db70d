//! End-to-end orchestration: corpus -> curves -> fronts -> ladders -> eval.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::eval::{corpus_eval, mean_ladder, CorpusEval, MeanLadder};
use crate::ingest::Corpus;
use crate::interp::{sample_sequence_curves, CurveSpace, ResolutionCurve, DEFAULT_STEP};
use crate::ladder::{
    quality_driven_ladder, rate_driven_ladder, Ladder, LadderConfig, LadderMethod,
};
use crate::pareto::{front_composition, CompositionHistogram, Domain, ParetoFront};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// CRF sampling step for curve interpolation.
    pub step: f64,
    /// Fitting space for the bitrate/energy splines.
    #[serde(default)]
    pub space: CurveSpace,
    pub ladder: LadderConfig,
    /// Worker threads for per-sequence analysis; 0 picks the rayon default.
    pub jobs: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            space: CurveSpace::default(),
            ladder: LadderConfig::default(),
            jobs: 0,
        }
    }
}

/// Everything derived for one sequence: curves, both fronts with their
/// composition, and the four ladders in a fixed order (rate-driven RQ,
/// rate-driven EQ, quality-driven RQ, quality-driven EQ).
#[derive(Debug, Clone)]
pub struct SequenceAnalysis {
    pub sequence_id: String,
    pub curves: Vec<ResolutionCurve>,
    pub rq_front: ParetoFront,
    pub eq_front: ParetoFront,
    pub rq_composition: CompositionHistogram,
    pub eq_composition: CompositionHistogram,
    pub ladders: Vec<Ladder>,
    pub warnings: Vec<Warning>,
}

impl SequenceAnalysis {
    pub fn ladder(&self, method: LadderMethod, domain: Domain) -> &Ladder {
        self.ladders
            .iter()
            .find(|l| l.method == method && l.source_domain == domain)
            .expect("all four ladders are built")
    }
}

pub fn analyze_sequence(
    corpus: &Corpus,
    sequence_id: &str,
    opts: &PipelineOptions,
) -> Result<SequenceAnalysis> {
    let (curves, warnings) = sample_sequence_curves(corpus, sequence_id, opts.step, opts.space)?;
    let rq_front = ParetoFront::extract(&curves, Domain::Rq)?;
    let eq_front = ParetoFront::extract(&curves, Domain::Eq)?;
    let rq_composition = front_composition(&rq_front)?;
    let eq_composition = front_composition(&eq_front)?;
    let ladders = vec![
        rate_driven_ladder(&rq_front, &opts.ladder)?,
        rate_driven_ladder(&eq_front, &opts.ladder)?,
        quality_driven_ladder(&rq_front, &opts.ladder)?,
        quality_driven_ladder(&eq_front, &opts.ladder)?,
    ];
    Ok(SequenceAnalysis {
        sequence_id: sequence_id.to_string(),
        curves,
        rq_front,
        eq_front,
        rq_composition,
        eq_composition,
        ladders,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct CorpusAnalysis {
    /// Per-sequence results, ordered by sequence id.
    pub sequences: Vec<SequenceAnalysis>,
}

impl CorpusAnalysis {
    pub fn ladders(&self) -> impl Iterator<Item = &Ladder> {
        self.sequences.iter().flat_map(|s| s.ladders.iter())
    }
}

/// Analyze every sequence, in parallel up to `opts.jobs` workers. Results
/// come back in sequence-id order regardless of scheduling.
pub fn analyze_corpus(corpus: &Corpus, opts: &PipelineOptions) -> Result<CorpusAnalysis> {
    let ids: Vec<&str> = corpus.sequence_ids().collect();
    let run = || {
        ids.par_iter()
            .map(|id| analyze_sequence(corpus, id, opts))
            .collect::<Result<Vec<_>>>()
    };
    let sequences = if opts.jobs == 0 {
        run()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidConfig {
                reason: format!("cannot build a {}-thread pool: {e}", opts.jobs),
            })?;
        pool.install(run)?
    };
    Ok(CorpusAnalysis { sequences })
}

/// The two EQ-vs-RQ comparisons plus mean ladders for all four variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderEvaluation {
    /// Rate-driven EQ ladders against their rate-driven RQ references.
    pub rate_driven: CorpusEval,
    /// Quality-driven EQ ladders against their quality-driven RQ references.
    pub quality_driven: CorpusEval,
    pub mean_ladders: Vec<MeanLadder>,
}

pub fn evaluate_analysis(analysis: &CorpusAnalysis) -> Result<LadderEvaluation> {
    let ladders: Vec<Ladder> = analysis.ladders().cloned().collect();
    evaluate_ladder_sets(&ladders)
}

/// Group a flat ladder list by (method, domain) keyed by sequence and run
/// both EQ-vs-RQ comparisons. This is the entry point when ladders come back
/// from files rather than from a live analysis.
pub fn evaluate_ladder_sets(ladders: &[Ladder]) -> Result<LadderEvaluation> {
    let mut groups: BTreeMap<(LadderMethod, Domain), BTreeMap<String, Ladder>> = BTreeMap::new();
    for l in ladders {
        groups
            .entry((l.method, l.source_domain))
            .or_default()
            .insert(l.sequence_id.clone(), l.clone());
    }
    let empty = BTreeMap::new();
    let get = |method, domain| groups.get(&(method, domain)).unwrap_or(&empty);

    let rate_driven = corpus_eval(
        get(LadderMethod::RateDriven, Domain::Rq),
        get(LadderMethod::RateDriven, Domain::Eq),
    )?;
    let quality_driven = corpus_eval(
        get(LadderMethod::QualityDriven, Domain::Rq),
        get(LadderMethod::QualityDriven, Domain::Eq),
    )?;

    let mut mean_ladders = Vec::new();
    for (method, domain) in [
        (LadderMethod::RateDriven, Domain::Rq),
        (LadderMethod::RateDriven, Domain::Eq),
        (LadderMethod::QualityDriven, Domain::Rq),
        (LadderMethod::QualityDriven, Domain::Eq),
    ] {
        let set = get(method, domain);
        if set.is_empty() {
            continue;
        }
        let refs: Vec<&Ladder> = set.values().collect();
        mean_ladders.push(mean_ladder(&refs)?);
    }

    Ok(LadderEvaluation {
        rate_driven,
        quality_driven,
        mean_ladders,
    })
}
