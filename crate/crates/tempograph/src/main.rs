//! Command-line driver for the temporal-graph fusion pipeline.
//!
//! `TEMPOGRAPH_LOG` controls log verbosity (error, warn, info, debug).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use tempograph::fusion::whitespace_token_count;
use tempograph::graph::GraphVariant;
use tempograph::pipeline::{self, FusionMode, RunConfig, RunReport};

#[derive(Parser)]
#[command(name = "tempograph", version, about = "Temporal graph construction and input fusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Dt2qt,
    Dte2qt,
    Alltime,
}

impl From<VariantArg> for GraphVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => GraphVariant::Full,
            VariantArg::Dt2qt => GraphVariant::Dt2qt,
            VariantArg::Dte2qt => GraphVariant::Dte2qt,
            VariantArg::Alltime => GraphVariant::AllTime,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Err,
    Gnn,
    Prompt,
}

impl From<ModeArg> for FusionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Err => FusionMode::Err,
            ModeArg::Gnn => FusionMode::Gnn,
            ModeArg::Prompt => FusionMode::Prompt,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Process a dataset: build graphs, infer relations, write fused outputs.
    Run {
        /// Dataset JSONL file.
        #[arg(long)]
        dataset: PathBuf,
        /// Directory for resolving annotation_path references.
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Fusion subgraph.
        #[arg(long, value_enum, default_value = "dt2qt")]
        variant: VariantArg,
        /// Output flavor.
        #[arg(long, value_enum, default_value = "err")]
        mode: ModeArg,
        /// Collapse relation labels to before/after/overlap.
        #[arg(long)]
        merge3: bool,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Character budget for context truncation.
        #[arg(long)]
        truncate_chars: Option<usize>,
        /// Prompt mode: leading examples to use as few-shot exemplars.
        #[arg(long, default_value_t = 0)]
        shots: usize,
        /// Prompt mode: emit unfused contexts and questions.
        #[arg(long)]
        prompt_plain: bool,
        /// Also write per-example graph dumps.
        #[arg(long)]
        dump_graphs: bool,
    },
    /// Check annotation files against the tg-annot/1 invariants.
    Validate {
        /// Annotation file or directory of .json files.
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Recount a previous run's outputs and print its report.
    Stats {
        /// Output directory of a previous run.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TEMPOGRAPH_LOG")).init();
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            dataset,
            annotations,
            variant,
            mode,
            merge3,
            workers,
            out,
            truncate_chars,
            shots,
            prompt_plain,
            dump_graphs,
        } => {
            let config = RunConfig {
                variant: variant.into(),
                mode: mode.into(),
                merge3,
                out_dir: out,
                workers,
                annotations_dir: annotations,
                truncate_chars,
                shots,
                prompt_plain,
                dump_graphs,
            };
            let report = pipeline::run(&config, &dataset).context("run failed")?;
            print_report(&report);
            // 0 on full success, 2 when some examples were skipped.
            Ok(ExitCode::from(if report.errors.is_empty() { 0 } else { 2 }))
        }
        Command::Validate { annotations } => {
            let report =
                pipeline::validate_annotations(&annotations).context("validation failed")?;
            println!(
                "checked {} file(s), {} finding(s)",
                report.files_checked,
                report.findings.len()
            );
            for finding in &report.findings {
                println!("{}: {}", finding.file, finding.detail);
            }
            Ok(ExitCode::from(0))
        }
        Command::Stats { out } => {
            let report_path = out.join("report.json");
            let raw = std::fs::read_to_string(&report_path)
                .with_context(|| format!("reading {}", report_path.display()))?;
            let report: RunReport = serde_json::from_str(&raw)
                .with_context(|| format!("parsing {}", report_path.display()))?;
            print_report(&report);

            let ok = recount_outputs(&out, &report)?;
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
    }
}

fn print_report(report: &RunReport) {
    println!(
        "examples: {} processed, {} unfused, {} skipped (of {})",
        report.processed, report.unfused_passthrough, report.skipped, report.total
    );
    println!(
        "graphs: mean nodes {:.2}, mean edges {:.2}, in/out degree {:.2}/{:.2}",
        report.mean_nodes, report.mean_edges, report.mean_in_degree, report.mean_out_degree
    );
    println!(
        "timexes without interval: {}, dropped events: {}, dropped tlinks: {}, \
         undetermined events: {}",
        report.unnormalizable_timexes,
        report.dropped_events,
        report.dropped_tlinks,
        report.undetermined_events
    );
    println!(
        "tokens: mean {:.2} before, {:.2} after",
        report.mean_tokens_before, report.mean_tokens_after
    );
    for e in &report.errors {
        println!("skipped {}: {}", e.id, e.message);
    }
}

/// Re-derives line counts and mean token lengths from the written outputs
/// and compares them with the stored report.
fn recount_outputs(out: &std::path::Path, report: &RunReport) -> anyhow::Result<bool> {
    let mut ok = true;
    for (file, text_field) in [
        ("fused.jsonl", "text"),
        ("gnn.jsonl", "marked_text"),
        ("prompts.jsonl", "text"),
    ] {
        let path = out.join(file);
        if !path.exists() {
            continue;
        }
        let raw = std::fs::read_to_string(&path)?;
        let mut lines = 0usize;
        let mut token_sum = 0usize;
        for line in raw.lines() {
            let record: serde_json::Value = serde_json::from_str(line)
                .with_context(|| format!("parsing {}", path.display()))?;
            let text = record[text_field]
                .as_str()
                .with_context(|| format!("{file}: missing {text_field}"))?;
            token_sum += whitespace_token_count(text);
            lines += 1;
        }
        println!("{file}: {lines} record(s), {token_sum} fused token(s)");
        // Prompt shots are consumed rather than emitted, so only the exact
        // output modes are cross-checked against the report.
        if file != "prompts.jsonl" {
            let expected = report.processed + report.unfused_passthrough;
            if lines != expected {
                println!(
                    "MISMATCH: {file} has {lines} record(s), report expects {expected}"
                );
                ok = false;
            }
            let mean = if lines == 0 { 0.0 } else { token_sum as f64 / lines as f64 };
            if (mean - report.mean_tokens_after).abs() > 1e-9 {
                println!(
                    "MISMATCH: {file} mean tokens {mean:.4} vs report {:.4}",
                    report.mean_tokens_after
                );
                ok = false;
            }
        }
    }
    Ok(ok)
}
