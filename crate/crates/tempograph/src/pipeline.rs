//! Batch driver: dataset ingestion, per-example processing, and reports.
//!
//! Datasets are JSONL, one example per line:
//!
//! ```json
//! {"id": "q0", "question": "...?", "context": "..." , "answers": ["a"],
//!  "annotation_path": "q0.json"}
//! ```
//!
//! `context` is a string or a list of passages joined by single newlines in
//! file order. Annotations come inline under `"annotation"` (a full
//! `tg-annot/1` object), from a file referenced by `"annotation_path"`
//! (resolved against the annotations directory, falling back to the dataset
//! file's directory), or from the built-in timex-only annotator when
//! neither is present.
//!
//! Examples are independent work units. A bounded worker pool processes
//! them; outputs are sorted by id before writing and all aggregation runs
//! in sorted order afterward, so results are byte-identical for any worker
//! count.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::TemporalRelation;
use crate::chronon::{self, ChrononError};
use crate::fusion::{
    self, FusedSequence, GnnExport, MarkerSpan, PromptShot, DEFAULT_INSTRUCTION,
};
use crate::graph::{
    self, build_graph, graph_stats, select_subgraph, AnnotatedDocument, GraphVariant,
    TimexAnnotation,
};
use crate::inference;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {detail}")]
    DatasetParse {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("duplicate example id {id:?}")]
    DuplicateId { id: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

// ---------------------------------------------------------------------------
// Dataset schema
// ---------------------------------------------------------------------------

/// Context text: a single document or retrieved passages joined in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextField {
    Text(String),
    Passages(Vec<String>),
}

impl ContextField {
    /// Passages are concatenated with single-newline separators before any
    /// offset-based annotation applies.
    pub fn joined(&self) -> String {
        match self {
            ContextField::Text(t) => t.clone(),
            ContextField::Passages(ps) => ps.join("\n"),
        }
    }
}

/// One dataset example. Empty `answers` marks an unanswerable question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetExample {
    pub id: String,
    pub question: String,
    pub context: ContextField,
    #[serde(default)]
    pub answers: Vec<String>,
    /// Inline `tg-annot/1` object.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<serde_json::Value>,
    /// Path to a `tg-annot/1` file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation_path: Option<String>,
}

/// Fusion output flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionMode {
    Err,
    Gnn,
    Prompt,
}

impl FusionMode {
    pub fn output_file(self) -> &'static str {
        match self {
            FusionMode::Err => "fused.jsonl",
            FusionMode::Gnn => "gnn.jsonl",
            FusionMode::Prompt => "prompts.jsonl",
        }
    }
}

/// Settings for one batch run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub variant: GraphVariant,
    pub mode: FusionMode,
    pub merge3: bool,
    pub out_dir: PathBuf,
    pub workers: usize,
    /// Optional directory for resolving `annotation_path` references.
    pub annotations_dir: Option<PathBuf>,
    /// Character budget for context truncation; `None` disables it.
    pub truncate_chars: Option<usize>,
    /// Prompt mode: number of leading examples used as few-shot exemplars.
    pub shots: usize,
    /// Prompt mode: emit unfused contexts/questions.
    pub prompt_plain: bool,
    /// Also write per-example graph dumps to graphs.jsonl.
    pub dump_graphs: bool,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            variant: GraphVariant::Dt2qt,
            mode: FusionMode::Err,
            merge3: false,
            out_dir: out_dir.into(),
            workers: 1,
            annotations_dir: None,
            truncate_chars: None,
            shots: 0,
            prompt_plain: false,
            dump_graphs: false,
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleError {
    pub id: String,
    pub message: String,
}

/// Aggregate run report. Deliberately carries no timing or worker-count
/// information so reruns compare byte-for-byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub total: usize,
    pub processed: usize,
    pub skipped: usize,
    pub unfused_passthrough: usize,
    pub mean_nodes: f64,
    pub mean_edges: f64,
    pub mean_in_degree: f64,
    pub mean_out_degree: f64,
    pub unnormalizable_timexes: usize,
    pub dropped_events: usize,
    pub dropped_tlinks: usize,
    pub undetermined_events: usize,
    pub mean_tokens_before: f64,
    pub mean_tokens_after: f64,
    pub errors: Vec<ExampleError>,
}

/// A single validation problem; findings are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub file: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub files_checked: usize,
    pub findings: Vec<Finding>,
}

// ---------------------------------------------------------------------------
// Per-example processing
// ---------------------------------------------------------------------------

struct ExampleOutput {
    id: String,
    json_line: String,
    graph_dump: Option<String>,
    stats: Option<graph::StatsRecord>,
    unnormalizable_timexes: usize,
    dropped_events: usize,
    dropped_tlinks: usize,
    undetermined_events: usize,
    tokens_before: usize,
    tokens_after: usize,
    passthrough: bool,
    emitted: bool,
}

type ExampleResult = Result<ExampleOutput, ExampleError>;

#[derive(Serialize)]
struct ErrRecord<'a> {
    id: &'a str,
    text: &'a str,
    marker_spans: &'a [MarkerSpan],
}

#[derive(Serialize)]
struct GnnRecord<'a> {
    id: &'a str,
    #[serde(flatten)]
    export: &'a GnnExport,
}

#[derive(Serialize)]
struct PromptRecord<'a> {
    id: &'a str,
    text: &'a str,
}

#[derive(Serialize)]
struct GraphDumpRecord<'a> {
    id: &'a str,
    graph: &'a graph::TemporalGraph,
}

fn truncate_chars(text: &str, budget: usize) -> &str {
    match text.char_indices().nth(budget) {
        Some((byte, _)) => &text[..byte],
        None => text,
    }
}

/// Timex-only fallback annotator over the raw document text.
pub fn stub_annotate(text: &str) -> AnnotatedDocument {
    AnnotatedDocument {
        text: text.to_string(),
        events: Vec::new(),
        timexes: chronon::scan_timexes(text)
            .into_iter()
            .map(|hit| TimexAnnotation {
                span: hit.span,
                surface: hit.surface,
                value: None,
            })
            .collect(),
        tlinks: Vec::new(),
    }
}

fn resolve_annotation(
    example: &DatasetExample,
    context: &str,
    config: &RunConfig,
    dataset_dir: &Path,
) -> Result<AnnotatedDocument, String> {
    let doc = if let Some(inline) = &example.annotation {
        AnnotatedDocument::from_json_str(&inline.to_string()).map_err(|e| e.to_string())?
    } else if let Some(rel) = &example.annotation_path {
        let base = config.annotations_dir.as_deref().unwrap_or(dataset_dir);
        let path = base.join(rel);
        let raw = fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        AnnotatedDocument::from_json_str(&raw).map_err(|e| e.to_string())?
    } else {
        return Ok(stub_annotate(context));
    };
    if doc.text != context {
        return Err("annotation text does not match the example context".into());
    }
    Ok(doc)
}

struct ProcessedGraphs {
    selected: graph::TemporalGraph,
    build_counts: (usize, usize, usize),
    undetermined_events: usize,
}

fn build_and_select(
    question: &str,
    qspan: &chronon::QuestionTimeSpan,
    doc: &AnnotatedDocument,
    variant: GraphVariant,
) -> Result<ProcessedGraphs, String> {
    let build = build_graph(question, qspan, doc).map_err(|e| e.to_string())?;
    let undetermined_events = inference::infer_all(&build.graph)
        .values()
        .filter(|r| **r == TemporalRelation::Undetermined)
        .count();
    let selected = select_subgraph(&build.graph, variant);
    Ok(ProcessedGraphs {
        selected,
        build_counts: (
            build.unnormalizable_timexes,
            build.dropped_events,
            build.dropped_tlinks,
        ),
        undetermined_events,
    })
}

/// Everything one example contributes before record formatting.
struct FusedExample {
    graphs: Option<ProcessedGraphs>,
    fused: FusedSequence,
    context: String,
}

impl FusedExample {
    fn passthrough(question: &str, context: String) -> Self {
        FusedExample {
            graphs: None,
            fused: FusedSequence {
                text: fusion::unfused_serialization(question, &context),
                marker_spans: Vec::new(),
                source_map: Default::default(),
            },
            context,
        }
    }

    /// Question and context parts with markers, or the raw texts when the
    /// example passed through unfused or plain output is requested.
    fn prompt_parts<'a>(&'a self, example: &'a DatasetExample, plain: bool) -> (&'a str, &'a str) {
        if plain || self.fused.marker_spans.is_empty() {
            (example.question.as_str(), self.context.as_str())
        } else {
            fusion::split_fused(&self.fused, &example.question)
        }
    }
}

/// Builds the selected graph for one example and fuses it with the mode's
/// serializer; examples without an extractable question time pass through
/// unfused.
fn fuse_example(
    example: &DatasetExample,
    config: &RunConfig,
    dataset_dir: &Path,
) -> Result<FusedExample, ExampleError> {
    let fail = |message: String| ExampleError {
        id: example.id.clone(),
        message,
    };
    let mut context = example.context.joined();
    if let Some(budget) = config.truncate_chars {
        context = truncate_chars(&context, budget).to_string();
    }
    let qspan = chronon::extract_question_time(&example.question)
        .map_err(|e: ChrononError| fail(e.to_string()))?;
    let Some(qspan) = qspan else {
        return Ok(FusedExample::passthrough(&example.question, context));
    };
    let doc = resolve_annotation(example, &context, config, dataset_dir).map_err(fail)?;
    let graphs =
        build_and_select(&example.question, &qspan, &doc, config.variant).map_err(fail)?;
    let fused = match config.mode {
        FusionMode::Gnn => {
            fusion::gnn_export(&example.question, &context, &graphs.selected)
                .map_err(|e| fail(e.to_string()))?
                .1
        }
        FusionMode::Err | FusionMode::Prompt => {
            let relations = fusion::relations_to_question_time(&graphs.selected);
            fusion::err_serialize(
                &example.question,
                &context,
                &graphs.selected,
                &relations,
                config.merge3,
            )
            .map_err(|e| fail(e.to_string()))?
        }
    };
    Ok(FusedExample {
        graphs: Some(graphs),
        fused,
        context,
    })
}

fn render_record(
    example: &DatasetExample,
    fused_example: &FusedExample,
    config: &RunConfig,
    shots: &[PromptShot],
) -> String {
    let fused = &fused_example.fused;
    match config.mode {
        FusionMode::Err => serde_json::to_string(&ErrRecord {
            id: &example.id,
            text: &fused.text,
            marker_spans: &fused.marker_spans,
        }),
        FusionMode::Gnn => {
            let export = match &fused_example.graphs {
                Some(g) => {
                    fusion::gnn_export(&example.question, &fused_example.context, &g.selected)
                        .expect("fusion already succeeded for this graph")
                        .0
                }
                None => GnnExport {
                    version: fusion::GNN_FORMAT.to_string(),
                    marked_text: fused.text.clone(),
                    nodes: Vec::new(),
                    edges: Vec::new(),
                    relation_vocabulary: crate::RELATION_VOCABULARY
                        .iter()
                        .map(|r| r.name().to_string())
                        .collect(),
                },
            };
            serde_json::to_string(&GnnRecord {
                id: &example.id,
                export: &export,
            })
        }
        FusionMode::Prompt => {
            let (q_part, c_part) = fused_example.prompt_parts(example, config.prompt_plain);
            let prompt = fusion::build_icl_prompt(
                DEFAULT_INSTRUCTION,
                shots,
                (c_part, q_part),
                !config.prompt_plain,
            );
            serde_json::to_string(&PromptRecord {
                id: &example.id,
                text: &prompt,
            })
        }
    }
    .expect("record serialization")
}

fn finish_output(
    example: &DatasetExample,
    fused_example: FusedExample,
    config: &RunConfig,
    json_line: String,
    emitted: bool,
) -> ExampleOutput {
    let unfused = fusion::unfused_serialization(&example.question, &fused_example.context);
    let graph_dump = match (&fused_example.graphs, config.dump_graphs) {
        (Some(g), true) => Some(
            serde_json::to_string(&GraphDumpRecord {
                id: &example.id,
                graph: &g.selected,
            })
            .expect("graph serialization"),
        ),
        _ => None,
    };
    let graphs = &fused_example.graphs;
    let (unnormalizable, dropped_events, dropped_tlinks) =
        graphs.as_ref().map(|g| g.build_counts).unwrap_or_default();
    ExampleOutput {
        id: example.id.clone(),
        graph_dump,
        stats: graphs.as_ref().map(|g| graph_stats(&g.selected)),
        unnormalizable_timexes: unnormalizable,
        dropped_events,
        dropped_tlinks,
        undetermined_events: graphs.as_ref().map(|g| g.undetermined_events).unwrap_or(0),
        tokens_before: fusion::whitespace_token_count(&unfused),
        tokens_after: fusion::whitespace_token_count(&fused_example.fused.text),
        passthrough: graphs.is_none(),
        json_line,
        emitted,
    }
}

fn process_example(
    example: &DatasetExample,
    config: &RunConfig,
    dataset_dir: &Path,
    shots: &[PromptShot],
) -> ExampleResult {
    let fused_example = fuse_example(example, config, dataset_dir)?;
    let json_line = render_record(example, &fused_example, config, shots);
    Ok(finish_output(example, fused_example, config, json_line, true))
}

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

/// Runs `f` over the items on up to `workers` threads, preserving item
/// order in the result.
fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<R>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().expect("worker poisoned")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("worker poisoned")
        .into_iter()
        .map(|r| r.expect("worker filled every slot"))
        .collect()
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

pub fn load_dataset(path: &Path) -> Result<Vec<DatasetExample>, PipelineError> {
    let raw = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut examples = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let example: DatasetExample =
            serde_json::from_str(line).map_err(|e| PipelineError::DatasetParse {
                path: path.to_path_buf(),
                line: i + 1,
                detail: e.to_string(),
            })?;
        if !ids.insert(example.id.clone()) {
            return Err(PipelineError::DuplicateId { id: example.id });
        }
        examples.push(example);
    }
    Ok(examples)
}

/// Processes a dataset end to end and writes fused outputs plus the report.
///
/// Per-example failures are recorded and skipped; only file-level problems
/// abort the run.
pub fn run(config: &RunConfig, dataset_path: &Path) -> Result<RunReport, PipelineError> {
    if config.mode != FusionMode::Prompt && (config.shots > 0 || config.prompt_plain) {
        return Err(PipelineError::Config(
            "shot options apply to prompt mode only".into(),
        ));
    }
    let examples = load_dataset(dataset_path)?;
    let dataset_dir = dataset_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));

    // Prompt exemplars come from the leading examples, fused sequentially.
    // They are counted in the report but emit no target record.
    let shot_count = if config.mode == FusionMode::Prompt {
        config.shots.min(examples.len())
    } else {
        0
    };
    let mut shots: Vec<PromptShot> = Vec::new();
    let mut shot_outputs: Vec<ExampleResult> = Vec::new();
    for example in &examples[..shot_count] {
        match fuse_example(example, config, &dataset_dir) {
            Ok(fused_example) => {
                let (q, c) = fused_example.prompt_parts(example, config.prompt_plain);
                shots.push(PromptShot {
                    context: c.to_string(),
                    question: q.to_string(),
                    answer: example.answers.first().cloned(),
                });
                shot_outputs.push(Ok(finish_output(
                    example,
                    fused_example,
                    config,
                    String::new(),
                    false,
                )));
            }
            Err(e) => shot_outputs.push(Err(e)),
        }
    }

    let targets = &examples[shot_count..];
    let results: Vec<ExampleResult> = parallel_map(targets, config.workers, |example| {
        process_example(example, config, &dataset_dir, &shots)
    });

    let mut all: Vec<ExampleResult> = shot_outputs;
    all.extend(results);
    all.sort_by(|a, b| {
        let key = |r: &ExampleResult| match r {
            Ok(o) => o.id.clone(),
            Err(e) => e.id.clone(),
        };
        key(a).cmp(&key(b))
    });

    fs::create_dir_all(&config.out_dir).map_err(|source| PipelineError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    let out_path = config.out_dir.join(config.mode.output_file());
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| PipelineError::Io {
            path: path.clone(),
            source,
        }
    };
    let mut out = fs::File::create(&out_path).map_err(io_err(&out_path))?;
    let dump_path = config.out_dir.join("graphs.jsonl");
    let mut dump = match config.dump_graphs {
        true => Some(fs::File::create(&dump_path).map_err(io_err(&dump_path))?),
        false => None,
    };

    let mut report = RunReport {
        total: examples.len(),
        processed: 0,
        skipped: 0,
        unfused_passthrough: 0,
        mean_nodes: 0.0,
        mean_edges: 0.0,
        mean_in_degree: 0.0,
        mean_out_degree: 0.0,
        unnormalizable_timexes: 0,
        dropped_events: 0,
        dropped_tlinks: 0,
        undetermined_events: 0,
        mean_tokens_before: 0.0,
        mean_tokens_after: 0.0,
        errors: Vec::new(),
    };
    let mut stat_sums = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut token_sums = (0usize, 0usize, 0usize); // before, after, count

    for result in &all {
        match result {
            Ok(output) => {
                if output.passthrough {
                    report.unfused_passthrough += 1;
                } else {
                    report.processed += 1;
                }
                if output.emitted {
                    writeln!(out, "{}", output.json_line).map_err(io_err(&out_path))?;
                }
                if let (Some(dump_file), Some(line)) = (dump.as_mut(), &output.graph_dump) {
                    writeln!(dump_file, "{line}").map_err(io_err(&dump_path))?;
                }
                if let Some(stats) = &output.stats {
                    stat_sums.0 += stats.nodes as f64;
                    stat_sums.1 += stats.edges as f64;
                    stat_sums.2 += stats.mean_in_degree;
                    stat_sums.3 += stats.mean_out_degree;
                }
                report.unnormalizable_timexes += output.unnormalizable_timexes;
                report.dropped_events += output.dropped_events;
                report.dropped_tlinks += output.dropped_tlinks;
                report.undetermined_events += output.undetermined_events;
                token_sums.0 += output.tokens_before;
                token_sums.1 += output.tokens_after;
                token_sums.2 += 1;
            }
            Err(e) => {
                report.skipped += 1;
                report.errors.push(e.clone());
            }
        }
    }
    if report.processed > 0 {
        let n = report.processed as f64;
        report.mean_nodes = stat_sums.0 / n;
        report.mean_edges = stat_sums.1 / n;
        report.mean_in_degree = stat_sums.2 / n;
        report.mean_out_degree = stat_sums.3 / n;
    }
    if token_sums.2 > 0 {
        report.mean_tokens_before = token_sums.0 as f64 / token_sums.2 as f64;
        report.mean_tokens_after = token_sums.1 as f64 / token_sums.2 as f64;
    }

    let report_path = config.out_dir.join("report.json");
    fs::write(
        &report_path,
        serde_json::to_string_pretty(&report).expect("report serialization"),
    )
    .map_err(io_err(&report_path))?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Annotation validation
// ---------------------------------------------------------------------------

fn validate_document(doc: &AnnotatedDocument, file: &str, findings: &mut Vec<Finding>) {
    let mut push = |detail: String| {
        findings.push(Finding {
            file: file.to_string(),
            detail,
        })
    };
    let check_span = |span: &crate::Span, surface: &str, what: &str| {
        if span.start > span.end || doc.text.get(span.start..span.end).is_none() {
            return Some(format!(
                "{what} span {}..{} is invalid for a text of {} bytes",
                span.start,
                span.end,
                doc.text.len()
            ));
        }
        if &doc.text[span.start..span.end] != surface {
            return Some(format!(
                "{what} surface {:?} does not match text at {}..{}",
                surface, span.start, span.end
            ));
        }
        None
    };
    for (i, ev) in doc.events.iter().enumerate() {
        if let Some(d) = check_span(&ev.span, &ev.surface, &format!("event {i}")) {
            push(d);
        }
    }
    for (i, tx) in doc.timexes.iter().enumerate() {
        if let Some(d) = check_span(&tx.span, &tx.surface, &format!("timex {i}")) {
            push(d);
        }
    }
    let count = doc.annotation_count();
    for (i, tl) in doc.tlinks.iter().enumerate() {
        for endpoint in [tl.source, tl.target] {
            if endpoint >= count {
                push(format!(
                    "tlink {i} endpoint {endpoint} out of range ({count} annotations)"
                ));
            }
        }
        if tl.source == tl.target {
            push(format!("tlink {i} links annotation {} to itself", tl.source));
        }
        if TemporalRelation::from_name(&tl.relation)
            .filter(|r| r.is_storable())
            .is_none()
        {
            push(format!("tlink {i} has unknown relation label {:?}", tl.relation));
        }
    }
}

/// Checks annotation files (a single file or every `.json` in a directory)
/// against the `tg-annot/1` invariants.
pub fn validate_annotations(path: &Path) -> Result<ValidationReport, PipelineError> {
    let mut files = Vec::new();
    let meta = fs::metadata(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if meta.is_dir() {
        for entry in fs::read_dir(path).map_err(|source| PipelineError::Io {
            path: path.to_path_buf(),
            source,
        })? {
            let entry = entry.map_err(|source| PipelineError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            if entry.path().extension().is_some_and(|e| e == "json") {
                files.push(entry.path());
            }
        }
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }

    let mut report = ValidationReport {
        files_checked: files.len(),
        ..Default::default()
    };
    for file in &files {
        let name = file.display().to_string();
        let raw = match fs::read_to_string(file) {
            Ok(raw) => raw,
            Err(e) => {
                report.findings.push(Finding {
                    file: name,
                    detail: format!("unreadable: {e}"),
                });
                continue;
            }
        };
        match AnnotatedDocument::from_json_str(&raw) {
            Ok(doc) => validate_document(&doc, &name, &mut report.findings),
            Err(e) => report.findings.push(Finding {
                file: name,
                detail: e.to_string(),
            }),
        }
    }
    Ok(report)
}
