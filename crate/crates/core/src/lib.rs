//! Energy-aware bitrate ladder construction from rate-quality-energy
//! measurements.
//!
//! The pipeline ingests per-sequence encode/decode measurement tables
//! (bitrate, VMAF, decode energy over a CRF grid at several spatial
//! resolutions), Akima-interpolates each resolution's curves, pools the
//! samples into rate-quality (RQ) and energy-quality (EQ) Pareto fronts,
//! and builds four ladder variants: rate-driven and quality-driven rung
//! selection over either front. An evaluation layer quantifies the ladders
//! against the conventional rate-driven RQ ladder with mean relative
//! differences and aggregates mean ladders with standard errors.
//!
//! ```
//! use rqe_ladder::prelude::*;
//!
//! let corpus = make_synthetic_corpus(&SynthSpec::default()).unwrap();
//! let analysis = analyze_corpus(&corpus, &PipelineOptions::default()).unwrap();
//! let eval = evaluate_analysis(&analysis).unwrap();
//! // EQ-driven ladders trade a little bitrate for substantially less energy
//! assert!(eval.rate_driven.mean.delta_energy > 0.0);
//! ```

pub mod error;
pub mod eval;
pub mod export;
pub mod ingest;
pub mod interp;
pub mod ladder;
pub mod numfmt;
pub mod pareto;
pub mod pipeline;
pub mod synth;

pub use error::{Error, ErrorCategory, Result, Warning};

pub mod prelude {
    pub use crate::error::{Error, Result, Warning};
    pub use crate::eval::{corpus_eval, mean_ladder, relative_diff, CorpusEval, MeanLadder, RelativeDiff};
    pub use crate::ingest::{
        corpus_summary, load_corpus, Corpus, CorpusFormat, LoadedCorpus, MeasurementPoint,
    };
    pub use crate::interp::{sample_curves, AkimaSpline, ResolutionCurve, SampledPoint};
    pub use crate::ladder::{
        ladder_to_domain, quality_driven_ladder, rate_driven_ladder, FallbackMode, Ladder,
        LadderConfig, LadderMethod, LadderRung, RungStatus,
    };
    pub use crate::pareto::{
        domain_coords, front_composition, project_front, CompositionHistogram, Domain,
        ParetoFront,
    };
    pub use crate::pipeline::{
        analyze_corpus, analyze_sequence, evaluate_analysis, evaluate_ladder_sets,
        CorpusAnalysis, LadderEvaluation, PipelineOptions, SequenceAnalysis,
    };
    pub use crate::synth::{make_synthetic_corpus, ResolutionModel, SynthSpec};
}
