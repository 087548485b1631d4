//! Serialization of graph-annotated question/document pairs.
//!
//! The unfused form concatenates question and document as
//! `question: <question> context: <document>`. Fusion wraps node surfaces
//! in angle-bracket delimiter pairs directly in that sequence:
//!
//! - explicit edge representation: the question time wrapped in
//!   `<question time>...</question time>` and each related context node in
//!   its relation's lower-case label, e.g. `<before>June 14, 1775</before>`;
//! - GNN export: every node wrapped in the uniform `<e>...</e>` delimiter,
//!   paired with an edge list over the fixed relation vocabulary;
//! - few-shot prompts: instruction plus Context/Question/Answer blocks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{TemporalRelation, RELATION_VOCABULARY};
use crate::chronon::Span;
use crate::graph::{NodeId, NodeKind, TemporalGraph};
use crate::inference;

/// GNN export schema version.
pub const GNN_FORMAT: &str = "tg-gnn/1";

const QUESTION_PREFIX: &str = "question: ";
const CONTEXT_PREFIX: &str = " context: ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    /// Two spans selected for marking overlap in the serialized text.
    #[error("marked spans {0:?} and {1:?} overlap")]
    OverlapConflict(Span, Span),
}

/// The question and document joined without any markers.
pub fn unfused_serialization(question_text: &str, doc_text: &str) -> String {
    format!("{QUESTION_PREFIX}{question_text}{CONTEXT_PREFIX}{doc_text}")
}

/// One marked region of a fused sequence. `start..end` delimit the wrapped
/// surface text (tags excluded); the opening tag `<label>` directly precedes
/// `start` and the closing tag `</label>` directly follows `end`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerSpan {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

/// Monotone mapping from unfused-serialization offsets to fused offsets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceMap {
    // (unfused offset, cumulative inserted bytes at or before it), ascending.
    points: Vec<(usize, usize)>,
}

impl SourceMap {
    /// Fused offset of an unfused-serialization offset.
    pub fn map(&self, unfused_offset: usize) -> usize {
        let idx = self.points.partition_point(|(pos, _)| *pos <= unfused_offset);
        let shift = if idx == 0 { 0 } else { self.points[idx - 1].1 };
        unfused_offset + shift
    }
}

/// A fused sequence with its marker locations and offset mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusedSequence {
    pub text: String,
    pub marker_spans: Vec<MarkerSpan>,
    pub source_map: SourceMap,
}

impl FusedSequence {
    /// Reconstructs the unfused serialization by deleting each marker's
    /// delimiter pair at its recorded position.
    pub fn unfused(&self) -> String {
        let mut out = String::with_capacity(self.text.len());
        let mut cursor = 0usize;
        for m in &self.marker_spans {
            let open_start = m.start - (m.label.len() + 2);
            let close_end = m.end + m.label.len() + 3;
            out.push_str(&self.text[cursor..open_start]);
            out.push_str(&self.text[m.start..m.end]);
            cursor = close_end;
        }
        out.push_str(&self.text[cursor..]);
        out
    }
}

struct PlannedMark {
    span: Span, // into the unfused serialization
    label: String,
    node: NodeId,
}

/// Inserts delimiter pairs around each planned span. Marks are applied in
/// span order over a single pass, which leaves every not-yet-processed
/// offset untouched; where a closing tag and an opening tag land on the
/// same offset the closing tag comes first.
fn apply_marks(
    unfused: &str,
    mut marks: Vec<PlannedMark>,
) -> Result<(FusedSequence, Vec<NodeId>), FusionError> {
    marks.sort_by_key(|m| (m.span.start, m.span.end));
    for pair in marks.windows(2) {
        if pair[1].span.start < pair[0].span.end {
            return Err(FusionError::OverlapConflict(pair[0].span, pair[1].span));
        }
    }

    let mut fused = String::with_capacity(unfused.len() + marks.len() * 16);
    let mut marker_spans = Vec::with_capacity(marks.len());
    let mut order = Vec::with_capacity(marks.len());
    let mut points = Vec::with_capacity(marks.len() * 2);
    let mut inserted = 0usize;
    let mut cursor = 0usize;
    for mark in &marks {
        fused.push_str(&unfused[cursor..mark.span.start]);
        fused.push('<');
        fused.push_str(&mark.label);
        fused.push('>');
        inserted += mark.label.len() + 2;
        points.push((mark.span.start, inserted));
        let content_start = fused.len();
        fused.push_str(&unfused[mark.span.start..mark.span.end]);
        let content_end = fused.len();
        fused.push_str("</");
        fused.push_str(&mark.label);
        fused.push('>');
        inserted += mark.label.len() + 3;
        points.push((mark.span.end, inserted));
        marker_spans.push(MarkerSpan {
            label: mark.label.clone(),
            start: content_start,
            end: content_end,
        });
        order.push(mark.node);
        cursor = mark.span.end;
    }
    fused.push_str(&unfused[cursor..]);

    Ok((
        FusedSequence {
            text: fused,
            marker_spans,
            source_map: SourceMap { points },
        },
        order,
    ))
}

fn doc_offset(question_text: &str) -> usize {
    QUESTION_PREFIX.len() + question_text.len() + CONTEXT_PREFIX.len()
}

/// Relation of each non-question node to the question time, read from the
/// graph's question-time edges and completed by path inference for events
/// that lack a precomputed edge.
pub fn relations_to_question_time(g: &TemporalGraph) -> BTreeMap<NodeId, TemporalRelation> {
    let qt = g.question_time_id();
    let mut map: BTreeMap<NodeId, TemporalRelation> = g
        .edges()
        .iter()
        .filter(|e| e.dst == qt)
        .map(|e| (e.src, e.relation))
        .collect();
    for node in g.nodes() {
        if node.kind == NodeKind::DocEvent && !map.contains_key(&node.id) {
            map.insert(node.id, inference::infer_relation(g, node.id));
        }
    }
    map
}

/// Fuses a graph into the input sequence with relation-labeled delimiters.
///
/// The question-time span is wrapped in `question time` delimiters; each
/// context node present in `relations` with a determinate relation is
/// wrapped in that relation's lower-case label. With `merge3`, labels other
/// than BEFORE and AFTER collapse to OVERLAP first.
pub fn err_serialize(
    question_text: &str,
    doc_text: &str,
    graph: &TemporalGraph,
    relations: &BTreeMap<NodeId, TemporalRelation>,
    merge3: bool,
) -> Result<FusedSequence, FusionError> {
    let base = doc_offset(question_text);
    let mut marks = Vec::new();
    for node in graph.nodes() {
        if node.kind == NodeKind::QuestionTime {
            marks.push(PlannedMark {
                span: Span::new(
                    QUESTION_PREFIX.len() + node.span.start,
                    QUESTION_PREFIX.len() + node.span.end,
                ),
                label: "question time".to_string(),
                node: node.id,
            });
            continue;
        }
        let Some(relation) = relations.get(&node.id) else {
            continue;
        };
        let relation = if merge3 { relation.merge3() } else { *relation };
        if !relation.is_storable() {
            continue;
        }
        marks.push(PlannedMark {
            span: Span::new(base + node.span.start, base + node.span.end),
            label: relation.marker_label().to_string(),
            node: node.id,
        });
    }
    let (fused, _) = apply_marks(&unfused_serialization(question_text, doc_text), marks)?;
    Ok(fused)
}

/// Splits a fused sequence into its question and context parts, markers
/// included, dropping the `question:`/`context:` scaffolding.
pub fn split_fused<'a>(fused: &'a FusedSequence, question_text: &str) -> (&'a str, &'a str) {
    let boundary = fused
        .source_map
        .map(QUESTION_PREFIX.len() + question_text.len());
    (
        &fused.text[QUESTION_PREFIX.len()..boundary],
        &fused.text[boundary + CONTEXT_PREFIX.len()..],
    )
}

// ---------------------------------------------------------------------------
// GNN export
// ---------------------------------------------------------------------------

/// A node entry of a GNN export, in marker order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnnNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub marker_index: usize,
}

/// An edge entry of a GNN export; `relation_id` indexes the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnnEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub relation_id: usize,
}

/// Marked input text plus node and edge lists for graph-convolution
/// consumers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnnExport {
    pub version: String,
    pub marked_text: String,
    pub nodes: Vec<GnnNode>,
    pub edges: Vec<GnnEdge>,
    pub relation_vocabulary: Vec<String>,
}

/// Wraps every node surface in the uniform `<e>` delimiter and lists nodes
/// in marker order alongside the graph's edges. Returns the export plus the
/// fused sequence its `marked_text` came from.
pub fn gnn_export(
    question_text: &str,
    doc_text: &str,
    graph: &TemporalGraph,
) -> Result<(GnnExport, FusedSequence), FusionError> {
    let base = doc_offset(question_text);
    let marks = graph
        .nodes()
        .iter()
        .map(|node| {
            let shift = if node.kind == NodeKind::QuestionTime {
                QUESTION_PREFIX.len()
            } else {
                base
            };
            PlannedMark {
                span: Span::new(shift + node.span.start, shift + node.span.end),
                label: "e".to_string(),
                node: node.id,
            }
        })
        .collect();
    let (fused, order) = apply_marks(&unfused_serialization(question_text, doc_text), marks)?;

    let nodes = order
        .iter()
        .enumerate()
        .map(|(marker_index, id)| GnnNode {
            id: *id,
            kind: graph.node(*id).expect("marked node").kind,
            marker_index,
        })
        .collect();
    let edges = graph
        .edges()
        .iter()
        .map(|e| GnnEdge {
            src: e.src,
            dst: e.dst,
            relation_id: e.relation.vocabulary_index().expect("storable edge label"),
        })
        .collect();
    let export = GnnExport {
        version: GNN_FORMAT.to_string(),
        marked_text: fused.text.clone(),
        nodes,
        edges,
        relation_vocabulary: RELATION_VOCABULARY.iter().map(|r| r.name().to_string()).collect(),
    };
    Ok((export, fused))
}

// ---------------------------------------------------------------------------
// In-context-learning prompts
// ---------------------------------------------------------------------------

/// Base task instruction for prompt construction.
pub const DEFAULT_INSTRUCTION: &str =
    "Answer the question based on the given context. If there is no answer, answer \"no answer.\"";

/// Sentence appended to the instruction when contexts and questions carry
/// fusion markers.
pub const FUSED_INSTRUCTION_NOTE: &str = "The temporal relations between the times mentioned in \
                                          the context and the question are represented using \
                                          XML-style tags.";

/// One few-shot exemplar; `answer: None` marks an unanswerable question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptShot {
    pub context: String,
    pub question: String,
    pub answer: Option<String>,
}

/// Builds an instruction-plus-exemplars prompt ending in an answer cue.
///
/// When `fused` is set the instruction gains the marker explanation and the
/// caller is expected to pass fused context/question texts.
pub fn build_icl_prompt(
    instruction: &str,
    shots: &[PromptShot],
    target: (&str, &str),
    fused: bool,
) -> String {
    let mut out = String::new();
    out.push_str("Instruction: ");
    out.push_str(instruction);
    if fused {
        out.push(' ');
        out.push_str(FUSED_INSTRUCTION_NOTE);
    }
    out.push_str("\n\n");
    for shot in shots {
        out.push_str(&format!(
            "Context: {}\nQuestion: {}\nAnswer: {}\n\n",
            shot.context,
            shot.question,
            shot.answer.as_deref().unwrap_or("no answer")
        ));
    }
    let (context, question) = target;
    out.push_str(&format!("Context: {context}\nQuestion: {question}\nAnswer:"));
    out
}

// ---------------------------------------------------------------------------
// Length accounting
// ---------------------------------------------------------------------------

/// Token counts before and after fusion under the supplied counter.
pub fn length_report<F: Fn(&str) -> usize>(
    before: &str,
    after: &FusedSequence,
    counter: F,
) -> (usize, usize) {
    (counter(before), counter(&after.text))
}

/// The default counter: whitespace-separated pieces.
pub fn whitespace_token_count(text: &str) -> usize {
    text.split_whitespace().count()
}
