//! Command-line front-end for the ladder pipeline.
//!
//! Exit codes: 0 success, 2 invalid input (missing/malformed/failing
//! validation), 3 evaluation produced no comparable pairs, 4 output I/O
//! failure. Errors print one machine-parseable line on stderr:
//! `error: <category>: <message>`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rqe_ladder::error::{Error, ErrorCategory};
use rqe_ladder::export::{
    composition_csv, curves_csv, eval_report_json, eval_table_csv, front_csv, ladder_json,
    ladders_csv, mean_ladders_csv, parse_ladder_json, sequence_file_names, write_atomic,
    RunManifest,
};
use rqe_ladder::ingest::{corpus_summary, Corpus, CorpusFormat};
use rqe_ladder::interp::CurveSpace;
use rqe_ladder::ladder::{FallbackMode, Ladder, LadderConfig};
use rqe_ladder::pipeline::{
    analyze_corpus, evaluate_analysis, evaluate_ladder_sets, CorpusAnalysis, PipelineOptions,
};
use rqe_ladder::synth::{make_synthetic_corpus, SynthSpec};
use rqe_ladder::Warning;

#[derive(Parser)]
#[command(
    name = "rqe-ladder",
    version,
    about = "Build and evaluate energy-aware bitrate ladders from rate-quality-energy measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FallbackArg {
    Skip,
    Nearest,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Linear,
    Log10,
}

/// Flags shared by the pipeline subcommands. A JSON config file can set the
/// same fields; explicit flags override it.
#[derive(Args, Default, Clone)]
struct PipelineArgs {
    /// JSON config file mirroring these flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// CRF sampling step
    #[arg(long)]
    step: Option<f64>,
    /// Space the bitrate/energy splines are fitted in
    #[arg(long, value_enum)]
    interp_space: Option<SpaceArg>,
    /// First rate rung target, kbps
    #[arg(long)]
    rate_min: Option<f64>,
    /// Last rate rung target, kbps
    #[arg(long)]
    rate_max: Option<f64>,
    /// Relative rate search band
    #[arg(long)]
    rate_band: Option<f64>,
    /// First quality rung target, VMAF
    #[arg(long)]
    q_min: Option<f64>,
    /// Last quality rung target, VMAF
    #[arg(long)]
    q_max: Option<f64>,
    /// Quality rung spacing, VMAF
    #[arg(long)]
    q_step: Option<f64>,
    /// Absolute quality search band, VMAF
    #[arg(long)]
    q_band: Option<f64>,
    /// Empty-band behavior
    #[arg(long, value_enum)]
    fallback: Option<FallbackArg>,
    /// Worker threads (0 = automatic)
    #[arg(long)]
    jobs: Option<usize>,
}

/// JSON mirror of the pipeline flags.
#[derive(serde::Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    step: Option<f64>,
    interp_space: Option<String>,
    rate_min: Option<f64>,
    rate_max: Option<f64>,
    rate_band: Option<f64>,
    q_min: Option<f64>,
    q_max: Option<f64>,
    q_step: Option<f64>,
    q_band: Option<f64>,
    fallback: Option<String>,
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic measurement corpus
    Synth {
        /// Synthesis spec JSON; omit for the built-in default spec
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Output encoding; guessed from the extension when omitted
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Validate a corpus file and print summary statistics
    IngestCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Also write the summary as JSON
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Dump densely sampled interpolated curves
    Curves {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Extract RQ and EQ Pareto fronts per sequence
    Fronts {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Build the four ladder variants per sequence (plus fronts and
    /// composition histograms)
    Ladders {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Compare EQ ladders against their RQ references from a ladder directory
    Eval {
        #[arg(long)]
        ladder_dir: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Full pipeline: ladders, evaluation, summary, and a run manifest
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let msg = err.to_string().replace('\n', " ");
            eprintln!("error: {}: {}", err.category().as_str(), msg);
            match err.category() {
                ErrorCategory::Input | ErrorCategory::Validation => ExitCode::from(2),
                ErrorCategory::Eval => ExitCode::from(3),
                ErrorCategory::Io => ExitCode::from(4),
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Synth { spec, out, format } => cmd_synth(spec.as_deref(), &out, format),
        Command::IngestCheck {
            input,
            format,
            summary,
        } => cmd_ingest_check(&input, format, summary.as_deref()),
        Command::Curves {
            input,
            format,
            out,
            pipeline,
        } => cmd_curves(&input, format, &out, &pipeline),
        Command::Fronts {
            input,
            format,
            out_dir,
            pipeline,
        } => cmd_fronts(&input, format, &out_dir, &pipeline),
        Command::Ladders {
            input,
            format,
            out_dir,
            pipeline,
        } => cmd_ladders(&input, format, &out_dir, &pipeline),
        Command::Eval { ladder_dir, out_dir } => cmd_eval(&ladder_dir, &out_dir),
        Command::Report {
            input,
            format,
            out_dir,
            pipeline,
        } => cmd_report(&input, format, &out_dir, &pipeline),
    }
}

// ---------------------------------------------------------------- commands

fn cmd_synth(spec: Option<&Path>, out: &Path, format: Option<FormatArg>) -> Result<(), Error> {
    let spec = match spec {
        Some(path) => {
            let text = read_input(path)?;
            serde_json::from_str::<SynthSpec>(&text).map_err(|e| Error::Json {
                context: format!("synth spec {}", path.display()),
                detail: e.to_string(),
            })?
        }
        None => SynthSpec::default(),
    };
    let corpus = make_synthetic_corpus(&spec)?;
    let format = resolve_format(format, out);
    let text = match format {
        CorpusFormat::Csv => corpus.to_csv(),
        CorpusFormat::Json => corpus.to_json(),
    };
    write_atomic(out, text.as_bytes())?;
    println!(
        "wrote {} ({} sequences, {} points)",
        out.display(),
        corpus.sequence_count(),
        corpus.point_count()
    );
    Ok(())
}

fn cmd_ingest_check(
    input: &Path,
    format: Option<FormatArg>,
    summary_out: Option<&Path>,
) -> Result<(), Error> {
    let corpus = load_input(input, format)?;
    let summary = corpus_summary(&corpus)?;
    println!(
        "ok: {} sequences, {} points, {} resolutions, crf grid {:?}",
        summary.sequence_count,
        summary.point_count,
        summary.per_resolution.len(),
        corpus.crf_grid()
    );
    for (res, stats) in &summary.per_resolution {
        println!(
            "  {res}p: bitrate [{}, {}] kbps, vmaf [{}, {}], energy [{}, {}] J",
            rqe_ladder::numfmt::sig6(stats.bitrate_kbps.min),
            rqe_ladder::numfmt::sig6(stats.bitrate_kbps.max),
            rqe_ladder::numfmt::sig6(stats.vmaf.min),
            rqe_ladder::numfmt::sig6(stats.vmaf.max),
            rqe_ladder::numfmt::sig6(stats.decode_energy_j.min),
            rqe_ladder::numfmt::sig6(stats.decode_energy_j.max),
        );
    }
    if let Some(path) = summary_out {
        let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

fn cmd_curves(
    input: &Path,
    format: Option<FormatArg>,
    out: &Path,
    args: &PipelineArgs,
) -> Result<(), Error> {
    let corpus = load_input(input, format)?;
    let opts = build_options(args)?;
    let (curves, warnings) =
        rqe_ladder::interp::sample_curves_in(&corpus, opts.step, opts.space)?;
    print_warnings(&warnings);
    write_atomic(out, curves_csv(&curves).as_bytes())?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_fronts(
    input: &Path,
    format: Option<FormatArg>,
    out_dir: &Path,
    args: &PipelineArgs,
) -> Result<(), Error> {
    let corpus = load_input(input, format)?;
    let opts = build_options(args)?;
    let analysis = analyze_corpus(&corpus, &opts)?;
    let mut manifest = RunManifest::new(vec![input.display().to_string()], out_dir, opts);
    write_fronts(&analysis, out_dir, &mut manifest)?;
    write_atomic(&out_dir.join("manifest.json"), manifest.to_json().as_bytes())?;
    println!("wrote fronts for {} sequences to {}", analysis.sequences.len(), out_dir.display());
    Ok(())
}

fn cmd_ladders(
    input: &Path,
    format: Option<FormatArg>,
    out_dir: &Path,
    args: &PipelineArgs,
) -> Result<(), Error> {
    let corpus = load_input(input, format)?;
    let opts = build_options(args)?;
    let analysis = analyze_corpus(&corpus, &opts)?;
    let mut manifest = RunManifest::new(vec![input.display().to_string()], out_dir, opts);
    write_fronts(&analysis, out_dir, &mut manifest)?;
    write_ladders(&analysis, out_dir, &mut manifest)?;
    write_atomic(&out_dir.join("manifest.json"), manifest.to_json().as_bytes())?;
    println!(
        "wrote {} ladders for {} sequences to {}",
        4 * analysis.sequences.len(),
        analysis.sequences.len(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_eval(ladder_dir: &Path, out_dir: &Path) -> Result<(), Error> {
    let entries = fs::read_dir(ladder_dir).map_err(|source| Error::Io {
        path: ladder_dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|e| e == "json")
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.contains("__") && !n.starts_with("manifest"))
        })
        .collect();
    paths.sort();
    let mut ladders: Vec<Ladder> = Vec::new();
    for path in &paths {
        let text = read_input(path)?;
        ladders.push(parse_ladder_json(&text)?);
    }
    if ladders.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let opts = options_from_ladders(&ladders);
    let eval = evaluate_ladder_sets(&ladders)?;
    write_eval(&eval, &opts, out_dir, &mut None)?;
    println!(
        "evaluated {} ladders across {} sequences; wrote {}",
        ladders.len(),
        eval.rate_driven.per_sequence.len(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_report(
    input: &Path,
    format: Option<FormatArg>,
    out_dir: &Path,
    args: &PipelineArgs,
) -> Result<(), Error> {
    let corpus = load_input(input, format)?;
    let opts = build_options(args)?;
    let analysis = analyze_corpus(&corpus, &opts)?;
    let eval = evaluate_analysis(&analysis)?;
    let mut manifest = RunManifest::new(vec![input.display().to_string()], out_dir, opts.clone());

    let summary = corpus_summary(&corpus)?;
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    write_atomic(&out_dir.join("summary.json"), text.as_bytes())?;
    manifest.record("summary.json");

    write_fronts(&analysis, out_dir, &mut manifest)?;
    write_ladders(&analysis, out_dir, &mut manifest)?;
    let mut manifest_slot = Some(&mut manifest);
    write_eval(&eval, &opts, out_dir, &mut manifest_slot)?;

    write_atomic(&out_dir.join("manifest.json"), manifest.to_json().as_bytes())?;
    println!(
        "report complete: {} sequences, delta_energy mean {} (rate-driven) / {} (quality-driven)",
        analysis.sequences.len(),
        rqe_ladder::numfmt::sig6(eval.rate_driven.mean.delta_energy),
        rqe_ladder::numfmt::sig6(eval.quality_driven.mean.delta_energy),
    );
    Ok(())
}

// ----------------------------------------------------------------- helpers

fn write_fronts(
    analysis: &CorpusAnalysis,
    out_dir: &Path,
    manifest: &mut RunManifest,
) -> Result<(), Error> {
    let mut compositions = Vec::new();
    for seq in &analysis.sequences {
        print_warnings(&seq.warnings);
        let files = sequence_file_names(&seq.sequence_id);
        write_atomic(&out_dir.join(&files.rq_front), front_csv(&seq.rq_front).as_bytes())?;
        write_atomic(&out_dir.join(&files.eq_front), front_csv(&seq.eq_front).as_bytes())?;
        manifest.record(files.rq_front.display().to_string());
        manifest.record(files.eq_front.display().to_string());
        compositions.push((seq.sequence_id.clone(), &seq.rq_composition));
        compositions.push((seq.sequence_id.clone(), &seq.eq_composition));
    }
    write_atomic(
        &out_dir.join("composition.csv"),
        composition_csv(&compositions).as_bytes(),
    )?;
    manifest.record("composition.csv");
    Ok(())
}

fn write_ladders(
    analysis: &CorpusAnalysis,
    out_dir: &Path,
    manifest: &mut RunManifest,
) -> Result<(), Error> {
    for seq in &analysis.sequences {
        let files = sequence_file_names(&seq.sequence_id);
        for (ladder, path) in seq.ladders.iter().zip(files.ladders.iter()) {
            write_atomic(&out_dir.join(path), ladder_json(ladder).as_bytes())?;
            manifest.record(path.display().to_string());
        }
    }
    let all: Vec<&Ladder> = analysis.ladders().collect();
    write_atomic(&out_dir.join("ladders.csv"), ladders_csv(&all).as_bytes())?;
    manifest.record("ladders.csv");
    Ok(())
}

fn write_eval(
    eval: &rqe_ladder::pipeline::LadderEvaluation,
    opts: &PipelineOptions,
    out_dir: &Path,
    manifest: &mut Option<&mut RunManifest>,
) -> Result<(), Error> {
    let record = |m: &mut Option<&mut RunManifest>, name: &str| {
        if let Some(m) = m {
            m.record(name);
        }
    };
    write_atomic(&out_dir.join("eval_table.csv"), eval_table_csv(eval).as_bytes())?;
    record(manifest, "eval_table.csv");
    write_atomic(
        &out_dir.join("mean_ladders.csv"),
        mean_ladders_csv(&eval.mean_ladders).as_bytes(),
    )?;
    record(manifest, "mean_ladders.csv");
    write_atomic(
        &out_dir.join("eval_report.json"),
        eval_report_json(eval, opts).as_bytes(),
    )?;
    record(manifest, "eval_report.json");
    Ok(())
}

/// Read a file the user handed us. A missing or unreadable input is an
/// input error (exit 2), not an output I/O failure (exit 4).
fn read_input(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Parse {
        context: path.display().to_string(),
        detail: source.to_string(),
    })
}

fn load_input(path: &Path, format: Option<FormatArg>) -> Result<Corpus, Error> {
    let text = read_input(path)?;
    let loaded = match resolve_format(format, path) {
        CorpusFormat::Csv => rqe_ladder::ingest::parse_csv(&text)?,
        CorpusFormat::Json => rqe_ladder::ingest::parse_json(&text)?,
    };
    print_warnings(&loaded.warnings);
    Ok(loaded.corpus)
}

fn resolve_format(arg: Option<FormatArg>, path: &Path) -> CorpusFormat {
    match arg {
        Some(FormatArg::Csv) => CorpusFormat::Csv,
        Some(FormatArg::Json) => CorpusFormat::Json,
        None => CorpusFormat::from_path(path),
    }
}

fn print_warnings(warnings: &[Warning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn build_options(args: &PipelineArgs) -> Result<PipelineOptions, Error> {
    let file = match &args.config {
        Some(path) => {
            let text = read_input(path)?;
            serde_json::from_str::<FileConfig>(&text).map_err(|e| Error::Json {
                context: format!("config {}", path.display()),
                detail: e.to_string(),
            })?
        }
        None => FileConfig::default(),
    };
    let fallback_from_file = match file.fallback.as_deref() {
        None => None,
        Some("skip") => Some(FallbackMode::Skip),
        Some("nearest") => Some(FallbackMode::Nearest),
        Some(other) => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown fallback `{other}` (use skip or nearest)"),
            })
        }
    };
    let space_from_file = match file.interp_space.as_deref() {
        None => None,
        Some("linear") => Some(CurveSpace::Linear),
        Some("log10") => Some(CurveSpace::Log10),
        Some(other) => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown interp_space `{other}` (use linear or log10)"),
            })
        }
    };
    let defaults = LadderConfig::default();
    let ladder = LadderConfig {
        rate_min_kbps: pick(args.rate_min, file.rate_min, defaults.rate_min_kbps),
        rate_max_kbps: pick(args.rate_max, file.rate_max, defaults.rate_max_kbps),
        rate_band: pick(args.rate_band, file.rate_band, defaults.rate_band),
        quality_min: pick(args.q_min, file.q_min, defaults.quality_min),
        quality_max: pick(args.q_max, file.q_max, defaults.quality_max),
        quality_step: pick(args.q_step, file.q_step, defaults.quality_step),
        quality_band: pick(args.q_band, file.q_band, defaults.quality_band),
        fallback: args
            .fallback
            .map(|f| match f {
                FallbackArg::Skip => FallbackMode::Skip,
                FallbackArg::Nearest => FallbackMode::Nearest,
            })
            .or(fallback_from_file)
            .unwrap_or_default(),
    };
    ladder.validate()?;
    Ok(PipelineOptions {
        step: pick(args.step, file.step, rqe_ladder::interp::DEFAULT_STEP),
        space: args
            .interp_space
            .map(|s| match s {
                SpaceArg::Linear => CurveSpace::Linear,
                SpaceArg::Log10 => CurveSpace::Log10,
            })
            .or(space_from_file)
            .unwrap_or_default(),
        ladder,
        jobs: args.jobs.or(file.jobs).unwrap_or(0),
    })
}

fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Recover pipeline options from ladder files for the eval report's config
/// echo: every ladder in a directory shares one config by construction.
fn options_from_ladders(ladders: &[Ladder]) -> PipelineOptions {
    let config = ladders
        .first()
        .map(|l| l.config)
        .unwrap_or_default();
    PipelineOptions {
        step: rqe_ladder::interp::DEFAULT_STEP,
        space: CurveSpace::default(),
        ladder: config,
        jobs: 0,
    }
}
